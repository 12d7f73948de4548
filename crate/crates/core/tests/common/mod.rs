#![allow(dead_code)]

use amfem::adaptivity::{adapt_loop_with, AdaptParams, LevelRecord, LevelState, LoopOptions};
use amfem::problems::Problem;
use amfem::solver::{flux_split, solution_scale, verify_mixed_residual};

/// Worst relative violations of the discrete identities on one level.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identities {
    pub conservation: f64,
    pub r1: f64,
    pub r2: f64,
    pub pythagoras: f64,
    /// `‖∇u^N‖² - ‖A⁻¹p + u b*‖²` relative to the latter, positive if violated.
    pub bound: f64,
}

impl Identities {
    pub fn max(self, o: Self) -> Self {
        Self {
            conservation: self.conservation.max(o.conservation),
            r1: self.r1.max(o.r1),
            r2: self.r2.max(o.r2),
            pythagoras: self.pythagoras.max(o.pythagoras),
            bound: self.bound.max(o.bound),
        }
    }
}

pub fn identities(state: &LevelState<'_>) -> Identities {
    let mesh = state.mesh;
    let d = state.discrete;
    let sol = &d.mixed;
    let scale = solution_scale(mesh, sol, &d.coeffs);
    let conservation = (0..mesh.num_triangles())
        .map(|t| (sol.divergence(t) + d.coeffs.gamma[t] * sol.u[t] - d.coeffs.f[t]).abs())
        .fold(0.0, f64::max)
        / scale;
    let res = verify_mixed_residual(sol, mesh, &d.coeffs, &d.boundary);
    let split = flux_split(mesh, sol, &d.coeffs);
    let mut pythagoras: f64 = 0.0;
    let (mut flux, mut grad, mut rad) = (0.0, 0.0, 0.0);
    for s in &split {
        let size = s.flux + s.gradient + s.radial;
        if size > 0.0 {
            pythagoras = pythagoras.max((s.flux - s.gradient - s.radial).abs() / size);
        }
        flux += s.flux;
        grad += s.gradient;
        rad += s.radial;
    }
    pythagoras = pythagoras.max((flux - grad - rad).abs() / (flux + grad + rad).max(f64::MIN_POSITIVE));
    Identities {
        conservation,
        r1: res.r1 / scale,
        r2: res.r2 / scale,
        pythagoras,
        bound: (grad - flux) / flux.max(f64::MIN_POSITIVE),
    }
}

/// Adaptive run collecting the worst identity violations over all levels.
pub fn run_checked(problem: &dyn Problem, params: &AdaptParams) -> (Vec<LevelRecord>, Identities) {
    let mut worst = Identities { bound: f64::NEG_INFINITY, ..Default::default() };
    let records = adapt_loop_with(problem, params, &LoopOptions::default(), |s| {
        worst = worst.max(identities(s));
        Ok(())
    })
    .unwrap();
    (records, worst)
}

/// `(‖p - p_h‖²_{A⁻¹} + ‖u - u_h‖²) / (η² + μ²)`.
pub fn effectivity(r: &LevelRecord) -> f64 {
    (r.err_p_energy.unwrap().powi(2) + r.err_u.unwrap().powi(2)) / (r.eta.powi(2) + r.mu.powi(2))
}
