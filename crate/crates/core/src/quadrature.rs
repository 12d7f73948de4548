//! Quadrature on triangles and edges.
//!
//! Triangle rules are stored in barycentric coordinates with weights that sum
//! to one, so integrating over a physical triangle multiplies by its area.

use std::ops::{Add, Mul};

use crate::{Error, Result, Vec2};

/// Two-point Gauss rule on the unit interval, exact for cubics.
pub const EDGE_GAUSS2: [(f64, f64); 2] = [
    (0.5 - 0.288_675_134_594_812_9, 0.5),
    (0.5 + 0.288_675_134_594_812_9, 0.5),
];

/// Largest degree served by the collapsed Gauss rules.
pub const MAX_DEGREE: usize = 40;

#[derive(Clone, Debug)]
pub struct TriangleRule {
    degree: usize,
    bary: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl TriangleRule {
    /// Rule exact for polynomials of total degree `degree`.
    ///
    /// Degrees 1, 2 and 5 use the centroid, edge-midpoint and 7-point
    /// symmetric rules. Degrees 6 to [`MAX_DEGREE`] use a collapsed tensor
    /// Gauss rule, which is what the sharply peaked loads need on coarse
    /// meshes.
    pub fn new(degree: usize) -> Result<Self> {
        let (bary, weights) = match degree {
            1 => (vec![[1.0 / 3.0; 3]], vec![1.0]),
            2 => (
                vec![[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]],
                vec![1.0 / 3.0; 3],
            ),
            5 => strang_fix_7(),
            6..=MAX_DEGREE => collapsed_gauss(degree),
            _ => return Err(Error::UnsupportedDegree(degree)),
        };
        Ok(Self { degree, bary, weights })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Physical points and normalized weights (summing to one).
    pub fn points<'a>(&'a self, verts: &'a [Vec2; 3]) -> impl Iterator<Item = (Vec2, f64)> + 'a {
        self.bary
            .iter()
            .zip(&self.weights)
            .map(move |(l, &w)| (verts[0] * l[0] + verts[1] * l[1] + verts[2] * l[2], w))
    }

    /// `∫_T g` for a scalar or vector valued `g`.
    pub fn integrate<T, F>(&self, verts: &[Vec2; 3], area: f64, mut g: F) -> T
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(Vec2) -> T,
    {
        let mut pts = self.points(verts);
        let (x0, w0) = pts.next().expect("rules are never empty");
        let mut acc = g(x0) * w0;
        for (x, w) in pts {
            acc = acc + g(x) * w;
        }
        acc * area
    }
}

fn strang_fix_7() -> (Vec<[f64; 3]>, Vec<f64>) {
    let s15 = 15f64.sqrt();
    let a1 = (6.0 - s15) / 21.0;
    let a2 = (6.0 + s15) / 21.0;
    let w1 = (155.0 - s15) / 1200.0;
    let w2 = (155.0 + s15) / 1200.0;
    let mut bary = vec![[1.0 / 3.0; 3]];
    let mut weights = vec![9.0 / 40.0];
    for (a, w) in [(a1, w1), (a2, w2)] {
        let b = 1.0 - 2.0 * a;
        bary.extend([[b, a, a], [a, b, a], [a, a, b]]);
        weights.extend([w; 3]);
    }
    (bary, weights)
}

fn collapsed_gauss(degree: usize) -> (Vec<[f64; 3]>, Vec<f64>) {
    // The Duffy Jacobian (1 - s) raises the degree in s by one.
    let n = (degree + 3) / 2;
    let gl = gauss_legendre_unit(n);
    let mut bary = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for &(s, ws) in &gl {
        for &(t, wt) in &gl {
            let l1 = s;
            let l2 = t * (1.0 - s);
            bary.push([1.0 - l1 - l2, l1, l2]);
            weights.push(2.0 * ws * wt * (1.0 - s));
        }
    }
    (bary, weights)
}

/// Gauss-Legendre nodes and weights mapped to `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
