//! MARK and the SOLVE → ESTIMATE → MARK → REFINE loop.

use std::time::Instant;

use crate::estimator::{estimate, xi_monitor, EstimatorReport};
use crate::mesh::{bisect, initial_mesh, CaseLabel, MarkSet, Mesh};
use crate::problems::Problem;
use crate::solver::{compute_errors, solution_scale, solve_mixed, verify_mixed_residual, Discrete, DiscreteOptions};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Case A / Case B switch on `μ² ≤ κη²`.
    Separate,
    Collective,
    Uniform,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Separate => "separate",
            Strategy::Collective => "collective",
            Strategy::Uniform => "uniform",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "separate" => Ok(Strategy::Separate),
            "collective" => Ok(Strategy::Collective),
            "uniform" => Ok(Strategy::Uniform),
            _ => Err(Error::Config(format!(
                "unknown strategy `{s}` (expected separate, collective or uniform)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptParams {
    pub theta_a: f64,
    pub theta_b: f64,
    pub kappa: f64,
    pub strategy: Strategy,
    pub max_ndof: usize,
    pub max_levels: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for AdaptParams {
    fn default() -> Self {
        Self {
            theta_a: 0.5,
            theta_b: 0.5,
            kappa: 1.0,
            strategy: Strategy::Separate,
            max_ndof: 50_000,
            max_levels: 40,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

impl AdaptParams {
    /// Defaults with the problem's own `(θ_A, θ_B, κ)`.
    pub fn for_problem(problem: &dyn Problem) -> Self {
        let (theta_a, theta_b, kappa) = problem.marking_defaults();
        Self { theta_a, theta_b, kappa, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} out of range: must lie in (0, 1)")))
            }
        };
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} out of range: must be > 0")))
            }
        };
        open_unit("theta_a", self.theta_a)?;
        open_unit("theta_b", self.theta_b)?;
        positive("kappa", self.kappa)?;
        positive("alpha", self.alpha)?;
        positive("beta", self.beta)?;
        if self.max_ndof == 0 {
            return Err(Error::Config("max_ndof = 0 out of range: must be >= 1".into()));
        }
        Ok(())
    }
}

/// Minimal Dörfler set: the shortest prefix of the ids sorted by value
/// (descending, ties by ascending id) whose sum reaches `theta` times the
/// total. The ids come back in ascending order.
pub fn doerfler_min_set(values: &[f64], theta: f64) -> Vec<usize> {
    debug_assert!(theta > 0.0 && theta <= 1.0);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let total: f64 = order.iter().map(|&i| values[i]).sum();
    if total <= 0.0 {
        return Vec::new();
    }
    let goal = theta * total;
    let mut sum = 0.0;
    let mut count = 0;
    for &i in &order {
        sum += values[i];
        count += 1;
        if sum >= goal {
            break;
        }
    }
    let mut ids = order[..count].to_vec();
    ids.sort_unstable();
    ids
}

/// Triangle values for collective marking: `μ²(T)` plus the share of each
/// edge's `η²(E)` split equally between its triangles.
pub fn collective_values(mesh: &Mesh, report: &EstimatorReport) -> Vec<f64> {
    let mut values = report.mu_sq.clone();
    for (e, edge) in mesh.edges().iter().enumerate() {
        match edge.triangles {
            (t, None) => values[t] += report.eta_sq[e],
            (t0, Some(t1)) => {
                values[t0] += 0.5 * report.eta_sq[e];
                values[t1] += 0.5 * report.eta_sq[e];
            }
        }
    }
    values
}

pub fn mark(mesh: &Mesh, report: &EstimatorReport, params: &AdaptParams) -> MarkSet {
    match params.strategy {
        Strategy::Separate => {
            if report.mu_sq_total <= params.kappa * report.eta_sq_total {
                MarkSet::edges(doerfler_min_set(&report.eta_sq, params.theta_a), CaseLabel::A)
            } else {
                MarkSet::triangles(doerfler_min_set(&report.mu_sq, params.theta_b), CaseLabel::B)
            }
        }
        Strategy::Collective => MarkSet::triangles(
            doerfler_min_set(&collective_values(mesh, report), params.theta_a),
            CaseLabel::Collective,
        ),
        Strategy::Uniform => MarkSet::all_triangles(mesh),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecord {
    pub level: usize,
    pub ndof: usize,
    pub err_u: Option<f64>,
    pub err_p: Option<f64>,
    pub err_p_energy: Option<f64>,
    pub eta: f64,
    pub mu: f64,
    pub case: CaseLabel,
    pub marked: usize,
    pub triangles: usize,
    pub seconds: Option<f64>,
    /// `η² + α e² + β μ²` with `e² = ‖p - p_h‖²_{A⁻¹} + ‖u - u_h‖²`.
    pub xi_sq: Option<f64>,
}

/// Knobs of [`adapt_loop`] that are not marking parameters.
#[derive(Clone, Copy, Debug)]
pub struct LoopOptions {
    pub discrete: DiscreteOptions,
    pub osc_degree: usize,
    pub error_degree: usize,
    /// Relative bound on the mixed residuals.
    pub residual_tol: f64,
    pub timing: bool,
}

impl Default for LoopOptions {
    fn default() -> Self {
        Self {
            discrete: DiscreteOptions::default(),
            osc_degree: 5,
            error_degree: 5,
            residual_tol: 1e-10,
            timing: false,
        }
    }
}

/// What the observer of [`adapt_loop`] sees after each level.
pub struct LevelState<'a> {
    pub mesh: &'a Mesh,
    pub discrete: &'a Discrete,
    pub report: &'a EstimatorReport,
    pub marks: &'a MarkSet,
    pub record: &'a LevelRecord,
}

pub fn adapt_loop(problem: &dyn Problem, params: &AdaptParams, opts: &LoopOptions) -> Result<Vec<LevelRecord>> {
    adapt_loop_with(problem, params, opts, |_| Ok(()))
}

/// [`adapt_loop`] starting from the problem's initial mesh, calling
/// `observer` once per solved level.
pub fn adapt_loop_with(
    problem: &dyn Problem,
    params: &AdaptParams,
    opts: &LoopOptions,
    observer: impl FnMut(&LevelState<'_>) -> Result<()>,
) -> Result<Vec<LevelRecord>> {
    let mesh = initial_mesh(problem.domain(), problem.initial_h())?;
    adapt_from(mesh, problem, params, opts, observer)
}

pub fn adapt_from(
    mut mesh: Mesh,
    problem: &dyn Problem,
    params: &AdaptParams,
    opts: &LoopOptions,
    mut observer: impl FnMut(&LevelState<'_>) -> Result<()>,
) -> Result<Vec<LevelRecord>> {
    params.validate()?;
    let mut records = Vec::new();
    loop {
        let start = Instant::now();
        let level = records.len();
        let discrete = solve_mixed(&mesh, problem, &opts.discrete)?;
        let residual = verify_mixed_residual(&discrete.mixed, &mesh, &discrete.coeffs, &discrete.boundary);
        let scale = solution_scale(&mesh, &discrete.mixed, &discrete.coeffs);
        let bound = opts.residual_tol * scale.max(f64::MIN_POSITIVE);
        if !(residual.r1 <= bound && residual.r2 <= bound) {
            return Err(Error::ResidualCheck { level, r1: residual.r1, r2: residual.r2, scale });
        }
        let report = estimate(&mesh, &discrete.mixed, &discrete.coeffs, problem, opts.osc_degree)?;
        let errors = if problem.has_exact_solution() {
            Some(compute_errors(&discrete.mixed, &mesh, problem, opts.error_degree)?)
        } else {
            None
        };
        let marks = mark(&mesh, &report, params);
        let record = LevelRecord {
            level,
            ndof: mesh.ndof(),
            err_u: errors.map(|e| e.err_u),
            err_p: errors.map(|e| e.err_p),
            err_p_energy: errors.map(|e| e.err_p_energy),
            eta: report.eta(),
            mu: report.mu(),
            case: marks.case,
            marked: marks.ids.len(),
            triangles: mesh.num_triangles(),
            seconds: opts.timing.then(|| start.elapsed().as_secs_f64()),
            xi_sq: errors.map(|e| {
                xi_monitor(
                    report.eta_sq_total,
                    e.err_p_energy.powi(2) + e.err_u.powi(2),
                    report.mu_sq_total,
                    params.alpha,
                    params.beta,
                )
            }),
        };
        observer(&LevelState { mesh: &mesh, discrete: &discrete, report: &report, marks: &marks, record: &record })?;
        records.push(record);
        if level >= params.max_levels || marks.is_empty() {
            break;
        }
        let refined = bisect(&mesh, &marks)?;
        if refined.ndof() > params.max_ndof {
            break;
        }
        mesh = refined;
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{Domain, MarkKind};
    use crate::problems::{example1, example3};
    use crate::estimator::VolumeIndicator;
    use proptest::prelude::{prop, prop_assert, proptest};

    fn report(eta_sq: f64, mu_sq: f64) -> EstimatorReport {
        EstimatorReport {
            eta_sq: vec![eta_sq],
            mu_parts: vec![VolumeIndicator { flux: mu_sq, ..Default::default() }],
            mu_sq: vec![mu_sq],
            eta_sq_total: eta_sq,
            mu_sq_total: mu_sq,
        }
    }

    #[test]
    fn doerfler_examples() {
        assert_eq!(doerfler_min_set(&[4.0, 3.0, 2.0, 1.0], 0.5), vec![0, 1]);
        assert_eq!(doerfler_min_set(&[1.0, 0.0, 3.0, 0.0], 1.0), vec![0, 2]);
        assert!(doerfler_min_set(&[0.0; 5], 0.5).is_empty());
        assert!(doerfler_min_set(&[], 0.5).is_empty());
        // ties go to the lower id
        assert_eq!(doerfler_min_set(&[1.0, 2.0, 2.0, 1.0], 0.25), vec![1]);
        assert_eq!(doerfler_min_set(&[1.0, 1.0, 1.0, 1.0], 0.5), vec![0, 1]);
    }

    proptest! {
        #[test]
        fn doerfler_is_minimal(values in prop::collection::vec(0.0..10.0f64, 1..60), theta in 0.01..=1.0f64) {
            let set = doerfler_min_set(&values, theta);
            let total: f64 = values.iter().sum();
            if total == 0.0 {
                prop_assert!(set.is_empty());
            } else {
                let marked: f64 = set.iter().map(|&i| values[i]).sum();
                let slack = 1e-12 * total;
                prop_assert!(marked >= theta * total - slack);
                let smallest = set.iter().map(|&i| values[i]).fold(f64::INFINITY, f64::min);
                prop_assert!(marked - smallest < theta * total + slack);
                // no unmarked value beats a marked one
                let unmarked = (0..values.len()).filter(|i| !set.contains(i));
                for i in unmarked {
                    prop_assert!(values[i] <= smallest);
                }
            }
        }
    }

    #[test]
    fn case_selection() {
        let mesh = initial_mesh(Domain::UnitSquareCrissCross, 1.0).unwrap();
        let p = AdaptParams { kappa: 0.8, ..Default::default() };
        // only id 0 is present in these synthetic reports
        let m = mark(&mesh, &report(10.0, 5.0), &p);
        assert_eq!((m.case, m.kind), (CaseLabel::A, MarkKind::Edges));
        let m = mark(&mesh, &report(1.0, 5.0), &p);
        assert_eq!((m.case, m.kind), (CaseLabel::B, MarkKind::Triangles));
        // equality is Case A
        let m = mark(&mesh, &report(10.0, 8.0), &p);
        assert_eq!(m.case, CaseLabel::A);
    }

    #[test]
    fn collective_keeps_total() {
        let mesh = initial_mesh(Domain::UnitSquareCrissCross, 0.5).unwrap();
        let eta_sq: Vec<f64> = (0..mesh.num_edges()).map(|e| 1.0 + e as f64).collect();
        let mu_sq: Vec<f64> = (0..mesh.num_triangles()).map(|t| 0.5 * t as f64).collect();
        let r = EstimatorReport {
            eta_sq_total: eta_sq.iter().sum(),
            mu_sq_total: mu_sq.iter().sum(),
            mu_parts: vec![VolumeIndicator::default(); mu_sq.len()],
            eta_sq,
            mu_sq,
        };
        let v = collective_values(&mesh, &r);
        let total: f64 = v.iter().sum();
        assert!((total - r.eta_sq_total - r.mu_sq_total).abs() < 1e-12 * total);
        let p = AdaptParams { strategy: Strategy::Collective, ..Default::default() };
        let m = mark(&mesh, &r, &p);
        assert_eq!((m.case, m.kind), (CaseLabel::Collective, MarkKind::Triangles));
        let p = AdaptParams { strategy: Strategy::Uniform, ..Default::default() };
        assert_eq!(mark(&mesh, &r, &p).ids.len(), mesh.num_triangles());
    }

    #[test]
    fn validation_names_bounds() {
        let bad = AdaptParams { theta_a: 1.5, ..Default::default() };
        let msg = bad.validate().unwrap_err().to_string();
        assert!(msg.contains("theta_a") && msg.contains("(0, 1)"), "{msg}");
        assert!(AdaptParams { kappa: 0.0, ..Default::default() }.validate().is_err());
        assert!(AdaptParams { beta: -1.0, ..Default::default() }.validate().is_err());
        assert!(AdaptParams::default().validate().is_ok());
        assert!("sideways".parse::<Strategy>().is_err());
    }

    #[test]
    fn zero_levels_is_one_record() {
        let p = example1();
        let params = AdaptParams { max_levels: 0, ..AdaptParams::for_problem(&p) };
        let r = adapt_loop(&p, &params, &LoopOptions::default()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].ndof, 168);
        assert_eq!(r[0].triangles, 64);
        assert_eq!(r[0].case, CaseLabel::B);
        assert!(r[0].seconds.is_none());
    }

    #[test]
    fn loop_grows_and_stops() {
        let p = example3();
        let params = AdaptParams { max_ndof: 3000, ..AdaptParams::for_problem(&p) };
        let mut seen = 0;
        let r = adapt_loop_with(&p, &params, &LoopOptions::default(), |s| {
            seen += 1;
            assert_eq!(s.mesh.ndof(), s.record.ndof);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, r.len());
        assert!(r.len() > 2);
        assert!(r.windows(2).all(|w| w[0].ndof < w[1].ndof));
        assert!(r.iter().all(|l| l.ndof <= 3000));
        assert!(r.iter().all(|l| l.err_u.is_some() && l.xi_sq.is_some()));
        assert!(r.iter().enumerate().all(|(i, l)| l.level == i));
    }
}
