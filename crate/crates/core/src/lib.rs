//! Adaptive mixed finite elements for general second-order elliptic problems
//!
//! ```text
//! -div(A grad u + u b) + gamma u = f   in a polygon, u = u_D on the boundary
//! ```
//!
//! discretised with lowest-order Raviart-Thomas fluxes and piecewise constant
//! scalars. The mixed solution is never assembled as a saddle point problem:
//! a modified Crouzeix-Raviart system with one unknown per interior edge is
//! solved instead and the mixed pair is recovered element by element.
//!
//! The adaptive driver runs the usual solve, estimate, mark, refine loop
//! with an edge estimator `eta` and a volume estimator `mu`, choosing between
//! edge-based and element-based bulk marking by comparing the two.

pub mod adaptivity;
pub mod error;
pub mod estimator;
pub mod linsolve;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod report;
pub mod solver;

pub use error::{Error, Result};

/// Points and vectors in the plane.
pub type Vec2 = nalgebra::Vector2<f64>;
/// 2x2 coefficient matrices.
pub type Mat2 = nalgebra::Matrix2<f64>;
