//! Problem definitions: coefficient fields, load, boundary data and, for the
//! benchmarks, the exact solution.

use std::f64::consts::PI;

use crate::mesh::{Domain, Mesh};
use crate::quadrature::TriangleRule;
use crate::{Error, Mat2, Result, Vec2};

/// `-div(A ∇u + u b) + γ u = f` with `u = u_D` on the boundary.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;
    fn domain(&self) -> Domain;

    /// Mesh size of the initial triangulation.
    fn initial_h(&self) -> f64 {
        0.25
    }

    fn diffusion(&self, x: Vec2) -> Mat2;
    fn convection(&self, x: Vec2) -> Vec2;
    fn reaction(&self, x: Vec2) -> f64;
    fn load(&self, x: Vec2) -> f64;

    fn dirichlet(&self, x: Vec2) -> f64 {
        self.exact_u(x).unwrap_or(0.0)
    }

    /// Gradient of an extension of the boundary data; only its tangential
    /// component on boundary edges is used.
    fn dirichlet_gradient(&self, x: Vec2) -> Vec2 {
        self.exact_gradient(x).unwrap_or_else(Vec2::zeros)
    }

    fn exact_u(&self, _x: Vec2) -> Option<f64> {
        None
    }

    fn exact_gradient(&self, _x: Vec2) -> Option<Vec2> {
        None
    }

    /// `p = -(A ∇u + u b)`.
    fn exact_flux(&self, x: Vec2) -> Option<Vec2> {
        let u = self.exact_u(x)?;
        let g = self.exact_gradient(x)?;
        Some(-(self.diffusion(x) * g + self.convection(x) * u))
    }

    fn has_exact_solution(&self) -> bool {
        false
    }

    /// `(θ_A, θ_B, κ)` used when the caller does not override them.
    fn marking_defaults(&self) -> (f64, f64, f64) {
        (0.5, 0.5, 1.0)
    }
}

/// Selects a benchmark by name.
pub fn by_name(name: &str) -> Result<Box<dyn Problem>> {
    match name {
        "example1" => Ok(Box::new(example1())),
        "example2" => Ok(Box::new(example2())),
        "example3" => Ok(Box::new(example3())),
        _ => Err(Error::Config(format!(
            "unknown problem `{name}` (expected example1, example2, example3 or a problem file)"
        ))),
    }
}

/// Polar angle in `[0, 2π)`; points on the positive x-axis get angle 0.
fn angle(x: Vec2) -> f64 {
    let t = x.y.atan2(x.x);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Gaussian peak on the unit square with `A = I`, `b = (1, 1)`, `γ = 2`.
#[derive(Clone, Debug)]
pub struct GaussianPeak {
    pub center: Vec2,
}

pub fn example1() -> GaussianPeak {
    GaussianPeak { center: Vec2::new(0.5, 0.5) }
}

impl Problem for GaussianPeak {
    fn name(&self) -> &str {
        "example1"
    }
    fn domain(&self) -> Domain {
        Domain::UnitSquareCrissCross
    }
    fn diffusion(&self, _x: Vec2) -> Mat2 {
        Mat2::identity()
    }
    fn convection(&self, _x: Vec2) -> Vec2 {
        Vec2::new(1.0, 1.0)
    }
    fn reaction(&self, _x: Vec2) -> f64 {
        2.0
    }
    fn load(&self, x: Vec2) -> f64 {
        // -Δu - b·∇u + γu with ∇u = -200 d u and Δu = (40000 |d|² - 400) u
        let d = x - self.center;
        let u = (-100.0 * d.norm_squared()).exp();
        (400.0 - 40000.0 * d.norm_squared()) * u + 200.0 * (d.x + d.y) * u + 2.0 * u
    }
    fn exact_u(&self, x: Vec2) -> Option<f64> {
        Some((-100.0 * (x - self.center).norm_squared()).exp())
    }
    fn exact_gradient(&self, x: Vec2) -> Option<Vec2> {
        let d = x - self.center;
        Some(d * (-200.0 * (-100.0 * d.norm_squared()).exp()))
    }
    fn has_exact_solution(&self) -> bool {
        true
    }
    fn marking_defaults(&self) -> (f64, f64, f64) {
        (0.5, 0.5, 0.8)
    }
}

/// Slit disk with `u = r^{1/2} sin(θ/2) - r²/2 sin²θ`, `A = I`,
/// `b = (x - 1, y + 1)`, `γ = 4`.
#[derive(Clone, Debug, Default)]
pub struct CrackProblem;

pub fn example2() -> CrackProblem {
    CrackProblem
}

impl Problem for CrackProblem {
    fn name(&self) -> &str {
        "example2"
    }
    fn domain(&self) -> Domain {
        Domain::Crack
    }
    fn diffusion(&self, _x: Vec2) -> Mat2 {
        Mat2::identity()
    }
    fn convection(&self, x: Vec2) -> Vec2 {
        Vec2::new(x.x - 1.0, x.y + 1.0)
    }
    fn reaction(&self, _x: Vec2) -> f64 {
        4.0
    }
    fn load(&self, x: Vec2) -> f64 {
        // Δu = -1 (the r^{1/2} part is harmonic, r² sin²θ / 2 = y² / 2) and div b = 2
        let u = self.exact_u(x).unwrap();
        let g = self.exact_gradient(x).unwrap();
        1.0 - self.convection(x).dot(&g) + 2.0 * u
    }
    fn exact_u(&self, x: Vec2) -> Option<f64> {
        let r = x.norm();
        let t = angle(x);
        Some(r.sqrt() * (t / 2.0).sin() - 0.5 * x.y * x.y)
    }
    fn exact_gradient(&self, x: Vec2) -> Option<Vec2> {
        let r = x.norm();
        let t = angle(x);
        let c = 0.5 / r.sqrt();
        Some(Vec2::new(-c * (t / 2.0).sin(), c * (t / 2.0).cos() - x.y))
    }
    fn has_exact_solution(&self) -> bool {
        true
    }
    fn marking_defaults(&self) -> (f64, f64, f64) {
        (0.3, 0.3, 1.0)
    }
}

/// L-shaped domain with `u = r^{2/3} sin(2θ/3)`, `A = I`, `b = 0`, `γ = -8.9`.
#[derive(Clone, Debug, Default)]
pub struct LShapeProblem;

pub fn example3() -> LShapeProblem {
    LShapeProblem
}

impl LShapeProblem {
    pub const GAMMA: f64 = -8.9;
}

impl Problem for LShapeProblem {
    fn name(&self) -> &str {
        "example3"
    }
    fn domain(&self) -> Domain {
        Domain::LShape
    }
    fn diffusion(&self, _x: Vec2) -> Mat2 {
        Mat2::identity()
    }
    fn convection(&self, _x: Vec2) -> Vec2 {
        Vec2::zeros()
    }
    fn reaction(&self, _x: Vec2) -> f64 {
        Self::GAMMA
    }
    fn load(&self, x: Vec2) -> f64 {
        // u is harmonic
        Self::GAMMA * self.exact_u(x).unwrap()
    }
    fn exact_u(&self, x: Vec2) -> Option<f64> {
        let r = x.norm();
        Some(r.powf(2.0 / 3.0) * (2.0 * angle(x) / 3.0).sin())
    }
    fn exact_gradient(&self, x: Vec2) -> Option<Vec2> {
        let r = x.norm();
        let t = angle(x);
        let c = 2.0 / 3.0 * r.powf(-1.0 / 3.0);
        Some(Vec2::new(-c * (t / 3.0).sin(), c * (t / 3.0).cos()))
    }
    fn has_exact_solution(&self) -> bool {
        true
    }
    fn marking_defaults(&self) -> (f64, f64, f64) {
        (0.5, 0.5, 2.0)
    }
}

/// Built-in loads for user-defined problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedLoad {
    Zero,
    One,
    /// `exp(-100 |x - (0.5, 0.5)|²)`
    Gaussian,
    /// `sin(πx) sin(πy)`
    Sine,
}

impl NamedLoad {
    pub fn eval(self, x: Vec2) -> f64 {
        match self {
            NamedLoad::Zero => 0.0,
            NamedLoad::One => 1.0,
            NamedLoad::Gaussian => (-100.0 * (x - Vec2::new(0.5, 0.5)).norm_squared()).exp(),
            NamedLoad::Sine => (PI * x.x).sin() * (PI * x.y).sin(),
        }
    }
}

impl std::str::FromStr for NamedLoad {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(NamedLoad::Zero),
            "one" => Ok(NamedLoad::One),
            "gaussian" => Ok(NamedLoad::Gaussian),
            "sine" => Ok(NamedLoad::Sine),
            _ => Err(Error::Config(format!("unknown load `{s}` (expected zero, one, gaussian, sine)"))),
        }
    }
}

/// Constant coefficients with homogeneous Dirichlet data, read from a
/// `key = value` file.
#[derive(Clone, Debug)]
pub struct ConstantCoefficientProblem {
    pub name: String,
    pub domain: Domain,
    pub h: f64,
    pub a: Mat2,
    pub b: Vec2,
    pub gamma: f64,
    pub load: NamedLoad,
}

impl Default for ConstantCoefficientProblem {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            domain: Domain::UnitSquareCrissCross,
            h: 0.25,
            a: Mat2::identity(),
            b: Vec2::zeros(),
            gamma: 0.0,
            load: NamedLoad::One,
        }
    }
}

impl Problem for ConstantCoefficientProblem {
    fn name(&self) -> &str {
        &self.name
    }
    fn domain(&self) -> Domain {
        self.domain
    }
    fn initial_h(&self) -> f64 {
        self.h
    }
    fn diffusion(&self, _x: Vec2) -> Mat2 {
        self.a
    }
    fn convection(&self, _x: Vec2) -> Vec2 {
        self.b
    }
    fn reaction(&self, _x: Vec2) -> f64 {
        self.gamma
    }
    fn load(&self, x: Vec2) -> f64 {
        self.load.eval(x)
    }
}

/// Parses a problem file:
///
/// ```text
/// # comment
/// name = my_problem
/// domain = unit_square | l_shape | crack
/// h = 0.25
/// a11 = 1
/// a12 = 0
/// a22 = 1
/// b1 = 0
/// b2 = 0
/// gamma = 0
/// f = zero | one | gaussian | sine
/// ```
///
/// Missing keys keep their defaults. `A` must be positive definite.
pub fn parse_problem_file(text: &str) -> Result<ConstantCoefficientProblem> {
    let mut p = ConstantCoefficientProblem::default();
    for (ln, key, value) in key_values(text)? {
        let num = || -> Result<f64> {
            let v: f64 = value
                .parse()
                .map_err(|_| Error::parse(ln, format!("`{key}` expects a number, got `{value}`")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::parse(ln, format!("`{key}` must be finite")))
            }
        };
        match key {
            "name" => p.name = value.to_string(),
            "domain" => p.domain = value.parse()?,
            "h" => p.h = num()?,
            "a11" => p.a[(0, 0)] = num()?,
            "a12" => {
                let v = num()?;
                p.a[(0, 1)] = v;
                p.a[(1, 0)] = v;
            }
            "a22" => p.a[(1, 1)] = num()?,
            "b1" => p.b.x = num()?,
            "b2" => p.b.y = num()?,
            "gamma" => p.gamma = num()?,
            "f" => p.load = value.parse()?,
            _ => return Err(Error::parse(ln, format!("unknown key `{key}`"))),
        }
    }
    if !is_spd(&p.a) {
        return Err(Error::Config("diffusion matrix must be symmetric positive definite".into()));
    }
    if !(p.h > 0.0) {
        return Err(Error::Config(format!("h must be positive, got {}", p.h)));
    }
    Ok(p)
}

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub(crate) fn key_values(text: &str) -> Result<Vec<(usize, &str, &str)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(i + 1, format!("expected `key = value`, got `{line}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::parse(i + 1, "empty key"));
        }
        out.push((i + 1, k, v));
    }
    Ok(out)
}

pub(crate) fn is_spd(a: &Mat2) -> bool {
    let sym = (a[(0, 1)] - a[(1, 0)]).abs() <= 1e-14 * (a[(0, 1)].abs() + a[(1, 0)].abs()).max(1.0);
    sym && a[(0, 0)] > 0.0 && a.determinant() > 0.0 && a.iter().all(|v| v.is_finite())
}

/// Piecewise constant data: coefficients sampled at centroids and the
/// elementwise mean `f_T` of the load.
#[derive(Clone, Debug)]
pub struct ElementCoefficients {
    pub a: Vec<Mat2>,
    pub a_inv: Vec<Mat2>,
    pub b: Vec<Vec2>,
    /// `A_T⁻¹ b_T`
    pub b_star: Vec<Vec2>,
    pub gamma: Vec<f64>,
    pub f: Vec<f64>,
}

impl ElementCoefficients {
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }
}

pub fn localize(problem: &dyn Problem, mesh: &Mesh, load_degree: usize) -> Result<ElementCoefficients> {
    let rule = TriangleRule::new(load_degree)?;
    let n = mesh.num_triangles();
    let mut c = ElementCoefficients {
        a: Vec::with_capacity(n),
        a_inv: Vec::with_capacity(n),
        b: Vec::with_capacity(n),
        b_star: Vec::with_capacity(n),
        gamma: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
    };
    for t in 0..n {
        let x = mesh.centroid(t);
        let a = problem.diffusion(x);
        let a = (a + a.transpose()) * 0.5;
        if !is_spd(&a) {
            return Err(Error::NotSpd { triangle: t });
        }
        let a_inv = a.try_inverse().ok_or(Error::NotSpd { triangle: t })?;
        let b = problem.convection(x);
        c.a.push(a);
        c.a_inv.push(a_inv);
        c.b.push(b);
        c.b_star.push(a_inv * b);
        c.gamma.push(problem.reaction(x));
        let area = mesh.area(t);
        c.f.push(rule.integrate(&mesh.corners(t), area, |y| problem.load(y)) / area);
    }
    Ok(c)
}
