//! RT0 x P0 mixed solution through the modified Crouzeix-Raviart system.
//!
//! On each triangle `T` with piecewise constant data, the mixed pair is
//!
//! ```text
//! u_T = c_T (Π₀u^N + S f_T / (4|T|)),   c_T = (1 + S γ_T / (4|T|))⁻¹
//! p_h(x) = -(A_T ∇u^N + u_T b_T) + (f_T - γ_T u_T)(x - mid(T)) / 2
//! S = ∫_T (x - mid(T)) · A_T⁻¹ (x - mid(T)) dx
//! ```
//!
//! where `u^N` is the CR function solving
//! `(A ∇u^N + u_h b, ∇v) + (γ u_h, v) = (f_h, v)` for all CR test functions
//! `v`, with `u_h` substituted by the formula above. The normal components of
//! `p_h` are continuous across edges exactly when that CR system holds.

use crate::linsolve::{self, SolveOptions, SparseMatrix};
use crate::mesh::Mesh;
use crate::problems::{localize, ElementCoefficients, Problem};
use crate::quadrature::TriangleRule;
use crate::{Error, Mat2, Result, Vec2};

/// Smallest admissible `|1 + S γ / (4|T|)|`.
pub const FACTOR_TOL: f64 = 1e-10;

/// `S(T)` by the edge-midpoint rule, which is exact for the quadratic integrand.
pub fn compute_s(corners: &[Vec2; 3], area: f64, a_inv: &Mat2) -> f64 {
    let mid = (corners[0] + corners[1] + corners[2]) / 3.0;
    let rule = TriangleRule::new(2).expect("degree 2 rule");
    rule.integrate(corners, area, |x| {
        let d = x - mid;
        d.dot(&(a_inv * d))
    })
}

/// `c_T = (1 + S γ / (4|T|))⁻¹`, rejecting near-singular factors.
pub fn postprocess_factor(t: usize, s: f64, area: f64, gamma: f64) -> Result<f64> {
    let factor = 1.0 + s * gamma / (4.0 * area);
    if !(factor.abs() > FACTOR_TOL) {
        return Err(Error::NearSingularFactor { triangle: t, factor });
    }
    Ok(1.0 / factor)
}

/// Dirichlet values `u_D(mid(E))` on boundary edges, zero elsewhere.
pub fn boundary_values(mesh: &Mesh, problem: &dyn Problem) -> Vec<f64> {
    let mut g = vec![0.0; mesh.num_edges()];
    for &e in mesh.boundary_edges() {
        g[e] = problem.dirichlet(mesh.edge_midpoint(e));
    }
    g
}

/// Interior edges carry unknowns; boundary edges are eliminated.
#[derive(Clone, Debug)]
pub struct DofMap {
    edge_dof: Vec<Option<usize>>,
    n: usize,
}

impl DofMap {
    pub fn new(mesh: &Mesh) -> Self {
        let mut n = 0;
        let edge_dof = mesh
            .edges()
            .iter()
            .map(|e| {
                (!e.is_boundary()).then(|| {
                    n += 1;
                    n - 1
                })
            })
            .collect();
        Self { edge_dof, n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dof(&self, edge: usize) -> Option<usize> {
        self.edge_dof[edge]
    }
}

#[derive(Clone, Debug)]
pub struct CrSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    pub dofs: DofMap,
    /// Imposed values per edge (only boundary entries are meaningful).
    pub boundary: Vec<f64>,
}

/// Gradients of the CR basis `φ_i = 1 - 2λ_i` (one per local edge).
fn cr_gradients(mesh: &Mesh, t: usize) -> [Vec2; 3] {
    mesh.barycentric_gradients(t).map(|g| g * -2.0)
}

pub fn assemble(mesh: &Mesh, coeffs: &ElementCoefficients, boundary: &[f64]) -> Result<CrSystem> {
    if boundary.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch { expected: mesh.num_edges(), got: boundary.len() });
    }
    let dofs = DofMap::new(mesh);
    let mut trip = Vec::with_capacity(9 * mesh.num_triangles());
    let mut rhs = vec![0.0; dofs.len()];
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        let corners = mesh.corners(t);
        let (a, b, gamma, f) = (&coeffs.a[t], coeffs.b[t], coeffs.gamma[t], coeffs.f[t]);
        let s = compute_s(&corners, area, &coeffs.a_inv[t]);
        let c = postprocess_factor(t, s, area, gamma)?;
        let grads = cr_gradients(mesh, t);
        let edges = mesh.triangle_edges(t);
        // (u_T b, ∇φ_i) + (γ u_T, φ_i) = u_T w_i
        let w: [f64; 3] = std::array::from_fn(|i| area * (b.dot(&grads[i]) + gamma / 3.0));
        for i in 0..3 {
            let Some(row) = dofs.dof(edges[i]) else { continue };
            rhs[row] += f * area / 3.0 - c * s * f / (4.0 * area) * w[i];
            for j in 0..3 {
                let k = area * grads[i].dot(&(a * grads[j])) + c * w[i] / 3.0;
                match dofs.dof(edges[j]) {
                    Some(col) => trip.push((row, col, k)),
                    None => rhs[row] -= k * boundary[edges[j]],
                }
            }
        }
    }
    let matrix = SparseMatrix::from_triplets(dofs.len(), &trip)?;
    Ok(CrSystem { matrix, rhs, dofs, boundary: boundary.to_vec() })
}

/// CR values at edge midpoints; boundary entries hold the Dirichlet data.
#[derive(Clone, Debug, PartialEq)]
pub struct CrSolution {
    pub values: Vec<f64>,
}

impl CrSolution {
    /// `Π₀u^N` on triangle `t`.
    pub fn mean(&self, mesh: &Mesh, t: usize) -> f64 {
        mesh.triangle_edges(t).iter().map(|&e| self.values[e]).sum::<f64>() / 3.0
    }

    pub fn gradient(&self, mesh: &Mesh, t: usize) -> Vec2 {
        let g = cr_gradients(mesh, t);
        let e = mesh.triangle_edges(t);
        g[0] * self.values[e[0]] + g[1] * self.values[e[1]] + g[2] * self.values[e[2]]
    }
}

pub fn solve_cr(system: &CrSystem, opts: &SolveOptions) -> Result<CrSolution> {
    let x = linsolve::solve_with(&system.matrix, &system.rhs, opts)?;
    let values = system
        .boundary
        .iter()
        .enumerate()
        .map(|(e, &g)| system.dofs.dof(e).map_or(g, |d| x[d]))
        .collect();
    Ok(CrSolution { values })
}

pub fn postprocess_u(ucr: &CrSolution, mesh: &Mesh, coeffs: &ElementCoefficients) -> Result<Vec<f64>> {
    (0..mesh.num_triangles())
        .map(|t| {
            let area = mesh.area(t);
            let s = compute_s(&mesh.corners(t), area, &coeffs.a_inv[t]);
            let c = postprocess_factor(t, s, area, coeffs.gamma[t])?;
            Ok(c * (ucr.mean(mesh, t) + s * coeffs.f[t] / (4.0 * area)))
        })
        .collect()
}

/// Elementwise mixed pair: `u_h|_T = u[t]` and
/// `p_h(x) = p_const[t] + p_rad[t] (x - mid(T))`.
#[derive(Clone, Debug)]
pub struct MixedSolution {
    pub u: Vec<f64>,
    pub p_const: Vec<Vec2>,
    pub p_rad: Vec<f64>,
    /// `∇u^N` per triangle.
    pub grad_cr: Vec<Vec2>,
}

impl MixedSolution {
    pub fn zeros(mesh: &Mesh) -> Self {
        let n = mesh.num_triangles();
        Self { u: vec![0.0; n], p_const: vec![Vec2::zeros(); n], p_rad: vec![0.0; n], grad_cr: vec![Vec2::zeros(); n] }
    }

    pub fn flux_at(&self, mesh: &Mesh, t: usize, x: Vec2) -> Vec2 {
        self.p_const[t] + (x - mesh.centroid(t)) * self.p_rad[t]
    }

    pub fn divergence(&self, t: usize) -> f64 {
        2.0 * self.p_rad[t]
    }

    /// `A⁻¹ p_h + u_h b*` on triangle `t`.
    pub fn flux_residual_at(&self, mesh: &Mesh, coeffs: &ElementCoefficients, t: usize, x: Vec2) -> Vec2 {
        coeffs.a_inv[t] * self.flux_at(mesh, t, x) + coeffs.b_star[t] * self.u[t]
    }

    /// `p_h · ν_E` at `mid(E)` seen from triangle `t`.
    pub fn normal_flux(&self, mesh: &Mesh, t: usize, edge: usize) -> f64 {
        self.flux_at(mesh, t, mesh.edge_midpoint(edge)).dot(&mesh.edges()[edge].normal)
    }
}

pub fn reconstruct_flux(
    ucr: &CrSolution,
    u: &[f64],
    mesh: &Mesh,
    coeffs: &ElementCoefficients,
) -> Result<MixedSolution> {
    let n = mesh.num_triangles();
    if u.len() != n || ucr.values.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    let mut sol = MixedSolution::zeros(mesh);
    for t in 0..n {
        let g = ucr.gradient(mesh, t);
        sol.u[t] = u[t];
        sol.grad_cr[t] = g;
        sol.p_const[t] = -(coeffs.a[t] * g + coeffs.b[t] * u[t]);
        sol.p_rad[t] = 0.5 * (coeffs.f[t] - coeffs.gamma[t] * u[t]);
    }
    Ok(sol)
}

/// Largest jump of `p_h · ν_E` across interior edges.
pub fn max_normal_flux_jump(mesh: &Mesh, sol: &MixedSolution) -> f64 {
    mesh.edges()
        .iter()
        .enumerate()
        .filter_map(|(e, edge)| {
            let t1 = edge.triangles.1?;
            Some((sol.normal_flux(mesh, edge.triangles.0, e) - sol.normal_flux(mesh, t1, e)).abs())
        })
        .fold(0.0, f64::max)
}

/// Largest `|p_h · ν_E|` over all edges, used to scale the continuity check.
pub fn max_normal_flux(mesh: &Mesh, sol: &MixedSolution) -> f64 {
    (0..mesh.num_edges())
        .map(|e| sol.normal_flux(mesh, mesh.edges()[e].triangles.0, e).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedResidual {
    /// Largest residual of the flux equation over the RT0 edge basis.
    pub r1: f64,
    /// Largest `|div p_h + γ u_h - f_h| |T|`.
    pub r2: f64,
}

/// Residuals of the discrete mixed equations.
///
/// The RT0 basis function of edge `E` is
/// `q_E|_T = ±|E| / (2|T|) (x - P_E)` with unit normal component on `E`, the
/// sign positive on the triangle `ν_E` points out of. On boundary edges the
/// Dirichlet contribution `u_D(mid(E)) |E|` is part of the equation.
pub fn verify_mixed_residual(
    sol: &MixedSolution,
    mesh: &Mesh,
    coeffs: &ElementCoefficients,
    boundary: &[f64],
) -> MixedResidual {
    let rule = TriangleRule::new(2).expect("degree 2 rule");
    let mut r1: f64 = 0.0;
    for (e, edge) in mesh.edges().iter().enumerate() {
        let mut res = 0.0;
        for (t, local) in [(edge.triangles.0, edge.local.0)]
            .into_iter()
            .chain(edge.triangles.1.map(|t| (t, edge.local.1)))
        {
            let area = mesh.area(t);
            let corners = mesh.corners(t);
            let opposite = corners[local];
            let k = edge.orientation(t) * edge.length / (2.0 * area);
            res += rule.integrate(&corners, area, |x| {
                sol.flux_residual_at(mesh, coeffs, t, x).dot(&((x - opposite) * k))
            });
            res -= 2.0 * k * area * sol.u[t];
        }
        if edge.is_boundary() {
            res += boundary[e] * edge.length;
        }
        r1 = r1.max(res.abs());
    }
    let r2 = (0..mesh.num_triangles())
        .map(|t| (sol.divergence(t) + coeffs.gamma[t] * sol.u[t] - coeffs.f[t]).abs() * mesh.area(t))
        .fold(0.0, f64::max);
    MixedResidual { r1, r2 }
}

/// `‖p_h‖ + ‖u_h‖ + ‖f_h‖`, the reference size for the residual checks.
pub fn solution_scale(mesh: &Mesh, sol: &MixedSolution, coeffs: &ElementCoefficients) -> f64 {
    let rule = TriangleRule::new(2).expect("degree 2 rule");
    let (mut p2, mut u2, mut f2) = (0.0, 0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        p2 += rule.integrate(&mesh.corners(t), area, |x| sol.flux_at(mesh, t, x).norm_squared());
        u2 += sol.u[t] * sol.u[t] * area;
        f2 += coeffs.f[t] * coeffs.f[t] * area;
    }
    p2.sqrt() + u2.sqrt() + f2.sqrt()
}

/// Elementwise squared norms in
/// `‖A⁻¹p_h + u_h b*‖² = ‖∇u^N‖² + ‖(f_h - γu_h) A⁻¹(x - mid(T)) / 2‖²`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FluxSplit {
    pub flux: f64,
    pub gradient: f64,
    pub radial: f64,
}

pub fn flux_split(mesh: &Mesh, sol: &MixedSolution, coeffs: &ElementCoefficients) -> Vec<FluxSplit> {
    let rule = TriangleRule::new(2).expect("degree 2 rule");
    (0..mesh.num_triangles())
        .map(|t| {
            let area = mesh.area(t);
            let corners = mesh.corners(t);
            let mid = mesh.centroid(t);
            let half = 0.5 * (coeffs.f[t] - coeffs.gamma[t] * sol.u[t]);
            FluxSplit {
                flux: rule.integrate(&corners, area, |x| {
                    sol.flux_residual_at(mesh, coeffs, t, x).norm_squared()
                }),
                gradient: sol.grad_cr[t].norm_squared() * area,
                radial: rule.integrate(&corners, area, |x| (coeffs.a_inv[t] * (x - mid) * half).norm_squared()),
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRecord {
    pub err_u: f64,
    pub err_p: f64,
    /// `‖A^{-1/2}(p - p_h)‖`
    pub err_p_energy: f64,
    pub ndof: usize,
}

pub fn compute_errors(
    sol: &MixedSolution,
    mesh: &Mesh,
    problem: &dyn Problem,
    degree: usize,
) -> Result<ErrorRecord> {
    if !problem.has_exact_solution() {
        return Err(Error::MissingExactSolution(problem.name().to_string()));
    }
    let rule = TriangleRule::new(degree)?;
    let missing = || Error::MissingExactSolution(problem.name().to_string());
    let (mut eu, mut ep, mut ee) = (0.0, 0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let area = mesh.area(t);
        for (x, w) in rule.points(&mesh.corners(t)) {
            let u = problem.exact_u(x).ok_or_else(missing)?;
            let p = problem.exact_flux(x).ok_or_else(missing)?;
            let d = p - sol.flux_at(mesh, t, x);
            let a_inv = problem
                .diffusion(x)
                .try_inverse()
                .ok_or(Error::NotSpd { triangle: t })?;
            eu += w * area * (u - sol.u[t]).powi(2);
            ep += w * area * d.norm_squared();
            ee += w * area * d.dot(&(a_inv * d));
        }
    }
    Ok(ErrorRecord { err_u: eu.sqrt(), err_p: ep.sqrt(), err_p_energy: ee.sqrt(), ndof: mesh.ndof() })
}

/// Everything one SOLVE step produces.
#[derive(Clone, Debug)]
pub struct Discrete {
    pub coeffs: ElementCoefficients,
    pub boundary: Vec<f64>,
    pub cr: CrSolution,
    pub mixed: MixedSolution,
}

#[derive(Clone, Copy, Debug)]
pub struct DiscreteOptions {
    /// Quadrature degree for `f_T`.
    pub load_degree: usize,
    pub solve: SolveOptions,
}

impl Default for DiscreteOptions {
    fn default() -> Self {
        Self { load_degree: 5, solve: SolveOptions::default() }
    }
}

pub fn solve_mixed(mesh: &Mesh, problem: &dyn Problem, opts: &DiscreteOptions) -> Result<Discrete> {
    let coeffs = localize(problem, mesh, opts.load_degree)?;
    let boundary = boundary_values(mesh, problem);
    let system = assemble(mesh, &coeffs, &boundary)?;
    let cr = solve_cr(&system, &opts.solve)?;
    let u = postprocess_u(&cr, mesh, &coeffs)?;
    let mixed = reconstruct_flux(&cr, &u, mesh, &coeffs)?;
    Ok(Discrete { coeffs, boundary, cr, mixed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{initial_mesh, Domain, Triangle};
    use crate::problems::ConstantCoefficientProblem;

    /// `u = x` with `A = I`, `b = 0`, `γ = 0`, `f = 0`.
    struct Affine;

    impl Problem for Affine {
        fn name(&self) -> &str {
            "affine"
        }
        fn domain(&self) -> Domain {
            Domain::UnitSquareCrissCross
        }
        fn diffusion(&self, _x: Vec2) -> Mat2 {
            Mat2::identity()
        }
        fn convection(&self, _x: Vec2) -> Vec2 {
            Vec2::zeros()
        }
        fn reaction(&self, _x: Vec2) -> f64 {
            0.0
        }
        fn load(&self, _x: Vec2) -> f64 {
            0.0
        }
        fn exact_u(&self, x: Vec2) -> Option<f64> {
            Some(x.x)
        }
        fn exact_gradient(&self, _x: Vec2) -> Option<Vec2> {
            Some(Vec2::new(1.0, 0.0))
        }
        fn has_exact_solution(&self) -> bool {
            true
        }
    }

    fn unit_triangle() -> Mesh {
        Mesh::from_parts(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
            vec![Triangle::new([0, 1, 2], 0)],
        )
        .unwrap()
    }

    #[test]
    fn s_of_unit_triangle() {
        let m = unit_triangle();
        let c = m.corners(0);
        let s = compute_s(&c, 0.5, &Mat2::identity());
        // |T| (a² + b² + c²) / 36 with sides 1, 1, √2
        assert!((s - 0.5 * 4.0 / 36.0).abs() < 1e-15);
        assert!((s - 1.0 / 18.0).abs() < 1e-15);
        let half = compute_s(&c, 0.5, &(Mat2::identity() * 0.5));
        assert!((half - s / 2.0).abs() < 1e-16);
        let scaled = c.map(|v| v * 3.0);
        assert!((compute_s(&scaled, 4.5, &Mat2::identity()) - 81.0 * s).abs() < 1e-13);
    }

    #[test]
    fn postprocess_formula() {
        let m = unit_triangle();
        let zero = |f: f64, gamma: f64| ElementCoefficients {
            a: vec![Mat2::identity()],
            a_inv: vec![Mat2::identity()],
            b: vec![Vec2::zeros()],
            b_star: vec![Vec2::zeros()],
            gamma: vec![gamma],
            f: vec![f],
        };
        let ucr = CrSolution { values: vec![1.0, 2.0, 6.0] };
        let u = postprocess_u(&ucr, &m, &zero(0.0, 0.0)).unwrap();
        assert!((u[0] - 3.0).abs() < 1e-15);
        // S / (4|T|) = (1/18) / 2 = 1/36
        let u = postprocess_u(&ucr, &m, &zero(9.0, 0.0)).unwrap();
        assert!((u[0] - (3.0 + 9.0 / 36.0)).abs() < 1e-14);
        let ones = CrSolution { values: vec![1.0; 3] };
        let u = postprocess_u(&ones, &m, &zero(0.0, 2.0)).unwrap();
        assert!((u[0] - 18.0 / 19.0).abs() < 1e-15);
        // γ = -36 makes the factor vanish
        let r = postprocess_u(&ones, &m, &zero(0.0, -36.0));
        assert!(matches!(r, Err(Error::NearSingularFactor { triangle: 0, .. })));
    }

    #[test]
    fn single_triangle_system_is_empty() {
        let m = unit_triangle();
        let p = ConstantCoefficientProblem::default();
        let c = localize(&p, &m, 5).unwrap();
        let sys = assemble(&m, &c, &boundary_values(&m, &p)).unwrap();
        assert_eq!(sys.matrix.dim(), 0);
        assert!(solve_cr(&sys, &SolveOptions::default()).unwrap().values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.25).unwrap();
        let p = ConstantCoefficientProblem {
            load: crate::problems::NamedLoad::Zero,
            b: Vec2::new(1.0, -0.5),
            gamma: 3.0,
            ..Default::default()
        };
        let d = solve_mixed(&m, &p, &DiscreteOptions::default()).unwrap();
        let sys = assemble(&m, &d.coeffs, &d.boundary).unwrap();
        assert!(sys.rhs.iter().all(|&r| r == 0.0));
        assert!(d.mixed.u.iter().all(|&u| u == 0.0));
        assert!(d.mixed.p_const.iter().all(|p| p.norm() == 0.0));
        let r = verify_mixed_residual(&d.mixed, &m, &d.coeffs, &d.boundary);
        assert_eq!((r.r1, r.r2), (0.0, 0.0));
    }

    #[test]
    fn affine_solutions_are_reproduced() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.25).unwrap();
        let d = solve_mixed(&m, &Affine, &DiscreteOptions::default()).unwrap();
        for e in 0..m.num_edges() {
            assert!((d.cr.values[e] - m.edge_midpoint(e).x).abs() < 1e-10);
        }
        for t in 0..m.num_triangles() {
            assert!((d.mixed.flux_at(&m, t, m.centroid(t)) - Vec2::new(-1.0, 0.0)).norm() < 1e-10);
            assert!(d.mixed.p_rad[t].abs() < 1e-15);
            assert!((d.mixed.u[t] - m.centroid(t).x).abs() < 1e-10);
        }
        let err = compute_errors(&d.mixed, &m, &Affine, 5).unwrap();
        assert!(err.err_p <= 1e-10);
        assert_eq!(err.ndof, 168);
    }

    #[test]
    fn radial_part_vanishes_when_load_balances_reaction() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.5).unwrap();
        let mut coeffs = localize(&ConstantCoefficientProblem::default(), &m, 5).unwrap();
        let u: Vec<f64> = (0..m.num_triangles()).map(|t| 1.0 + t as f64).collect();
        for t in 0..m.num_triangles() {
            coeffs.gamma[t] = 2.0;
            coeffs.f[t] = 2.0 * u[t];
        }
        let ucr = CrSolution { values: vec![0.5; m.num_edges()] };
        let sol = reconstruct_flux(&ucr, &u, &m, &coeffs).unwrap();
        assert!(sol.p_rad.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn perturbing_u_moves_r2_by_gamma_area() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.25).unwrap();
        let p = crate::problems::example1();
        let mut d = solve_mixed(&m, &p, &DiscreteOptions::default()).unwrap();
        let before = verify_mixed_residual(&d.mixed, &m, &d.coeffs, &d.boundary);
        d.mixed.u[5] += 1.0;
        let after = verify_mixed_residual(&d.mixed, &m, &d.coeffs, &d.boundary);
        let jump = 2.0 * m.area(5);
        assert!((after.r2 - jump).abs() < 1e-12 + before.r2, "{after:?}");
    }

    #[test]
    fn missing_exact_solution() {
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.5).unwrap();
        let p = ConstantCoefficientProblem::default();
        let d = solve_mixed(&m, &p, &DiscreteOptions::default()).unwrap();
        assert!(matches!(compute_errors(&d.mixed, &m, &p, 5), Err(Error::MissingExactSolution(_))));
    }

    #[test]
    fn zero_solution_against_zero_exact() {
        struct Nothing;
        impl Problem for Nothing {
            fn name(&self) -> &str {
                "nothing"
            }
            fn domain(&self) -> Domain {
                Domain::UnitSquareCrissCross
            }
            fn diffusion(&self, _x: Vec2) -> Mat2 {
                Mat2::identity()
            }
            fn convection(&self, _x: Vec2) -> Vec2 {
                Vec2::zeros()
            }
            fn reaction(&self, _x: Vec2) -> f64 {
                0.0
            }
            fn load(&self, _x: Vec2) -> f64 {
                0.0
            }
            fn exact_u(&self, _x: Vec2) -> Option<f64> {
                Some(0.0)
            }
            fn exact_gradient(&self, _x: Vec2) -> Option<Vec2> {
                Some(Vec2::zeros())
            }
            fn has_exact_solution(&self) -> bool {
                true
            }
        }
        let m = initial_mesh(Domain::UnitSquareCrissCross, 0.5).unwrap();
        let e = compute_errors(&MixedSolution::zeros(&m), &m, &Nothing, 5).unwrap();
        assert_eq!((e.err_u, e.err_p, e.err_p_energy), (0.0, 0.0, 0.0));
    }
}
