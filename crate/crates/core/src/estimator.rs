//! Residual estimators.
//!
//! ```text
//! η²(E) = h_E ‖[A⁻¹p_h + u_h b*]·τ_E‖²_E
//! μ²(T) = h_T² ‖f - f_T‖²_T + h_T² ‖div p_h‖²_T + h_T² ‖A⁻¹p_h + u_h b*‖²_T
//! ```
//!
//! On a boundary edge the jump is replaced by the one-sided trace plus
//! `∂u_D/∂τ`, which is the tangential residual of `A⁻¹p + u b* + ∇u = 0`.

use crate::mesh::Mesh;
use crate::problems::{ElementCoefficients, Problem};
use crate::quadrature::{TriangleRule, EDGE_GAUSS2};
use crate::solver::MixedSolution;
use crate::{Result, Vec2};

/// Volume indicator components of one triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct VolumeIndicator {
    pub osc: f64,
    pub div: f64,
    pub flux: f64,
}

impl VolumeIndicator {
    pub fn total(&self) -> f64 {
        self.osc + self.div + self.flux
    }
}

#[derive(Clone, Debug)]
pub struct EstimatorReport {
    pub eta_sq: Vec<f64>,
    pub mu_parts: Vec<VolumeIndicator>,
    pub mu_sq: Vec<f64>,
    pub eta_sq_total: f64,
    pub mu_sq_total: f64,
}

impl EstimatorReport {
    pub fn eta(&self) -> f64 {
        self.eta_sq_total.sqrt()
    }

    pub fn mu(&self) -> f64 {
        self.mu_sq_total.sqrt()
    }
}

/// `|E|² ∫₀¹ j(s)² ds` for a jump `j` that is affine in the arc parameter.
pub fn squared_jump_integral(length: f64, j: impl Fn(f64) -> f64) -> f64 {
    length * length * EDGE_GAUSS2.iter().map(|&(s, w)| w * j(s).powi(2)).sum::<f64>()
}

pub fn edge_indicator(
    mesh: &Mesh,
    e: usize,
    sol: &MixedSolution,
    coeffs: &ElementCoefficients,
    problem: &dyn Problem,
) -> f64 {
    let edge = &mesh.edges()[e];
    let [pa, pb] = edge.vertices.map(|v| mesh.vertices()[v]);
    let tau = edge.tangent;
    let at = |s: f64| pa + (pb - pa) * s;
    let trace = |t: usize, x: Vec2| sol.flux_residual_at(mesh, coeffs, t, x).dot(&tau);
    match edge.triangles {
        (t0, Some(t1)) => squared_jump_integral(edge.length, |s| trace(t0, at(s)) - trace(t1, at(s))),
        (t0, None) => squared_jump_integral(edge.length, |s| {
            let x = at(s);
            trace(t0, x) + problem.dirichlet_gradient(x).dot(&tau)
        }),
    }
}

pub fn volume_indicator(
    mesh: &Mesh,
    t: usize,
    sol: &MixedSolution,
    coeffs: &ElementCoefficients,
    problem: &dyn Problem,
    osc_rule: &TriangleRule,
) -> VolumeIndicator {
    let area = mesh.area(t);
    let corners = mesh.corners(t);
    let h2 = mesh.diameter(t).powi(2);
    let exact_quadratic = TriangleRule::new(2).expect("degree 2 rule");
    let f_t = coeffs.f[t];
    VolumeIndicator {
        osc: h2 * osc_rule.integrate(&corners, area, |x| (problem.load(x) - f_t).powi(2)),
        div: h2 * sol.divergence(t).powi(2) * area,
        flux: h2 * exact_quadratic.integrate(&corners, area, |x| {
            sol.flux_residual_at(mesh, coeffs, t, x).norm_squared()
        }),
    }
}

/// All edge and volume indicators; `osc_degree` is the quadrature degree of
/// the oscillation term.
pub fn estimate(
    mesh: &Mesh,
    sol: &MixedSolution,
    coeffs: &ElementCoefficients,
    problem: &dyn Problem,
    osc_degree: usize,
) -> Result<EstimatorReport> {
    let rule = TriangleRule::new(osc_degree)?;
    let eta_sq: Vec<f64> = (0..mesh.num_edges()).map(|e| edge_indicator(mesh, e, sol, coeffs, problem)).collect();
    let mu_parts: Vec<VolumeIndicator> = (0..mesh.num_triangles())
        .map(|t| volume_indicator(mesh, t, sol, coeffs, problem, &rule))
        .collect();
    let mu_sq: Vec<f64> = mu_parts.iter().map(VolumeIndicator::total).collect();
    Ok(EstimatorReport {
        eta_sq_total: eta_sq.iter().sum(),
        mu_sq_total: mu_sq.iter().sum(),
        eta_sq,
        mu_parts,
        mu_sq,
    })
}

/// `ξ² = η² + α e² + β μ²`.
pub fn xi_monitor(eta_sq: f64, err_sq: f64, mu_sq: f64, alpha: f64, beta: f64) -> f64 {
    debug_assert!(alpha > 0.0 && beta > 0.0);
    eta_sq + alpha * err_sq + beta * mu_sq
}
