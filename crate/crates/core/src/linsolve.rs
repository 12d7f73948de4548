//! Compressed-row sparse matrices and linear solves.
//!
//! The systems coming out of the Crouzeix-Raviart assembly are
//! non-symmetric whenever `b ≠ 0` and indefinite for negative reaction, so
//! the default path is a sparse LU with partial pivoting (faer's supernodal
//! factorization). A Jacobi-preconditioned BiCGSTAB is available for large
//! runs; it is never the default since it may stall on indefinite systems.

use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds an `n × n` matrix, summing duplicates. Columns are sorted
    /// and unique within each row.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; n + 1];
        for &(r, c, _) in entries {
            if r >= n || c >= n {
                return Err(Error::IndexOutOfRange { row: r, col: c, n });
            }
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut cols = vec![0usize; entries.len()];
        let mut vals = vec![0.0; entries.len()];
        for &(r, c, v) in entries {
            cols[fill[r]] = c;
            vals[fill[r]] = v;
            fill[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        for r in 0..n {
            scratch.clear();
            scratch.extend((counts[r]..counts[r + 1]).map(|k| (cols[k], vals[k])));
            scratch.sort_by_key(|&(c, _)| c);
            for &(c, v) in &scratch {
                if col_idx.len() > row_ptr[r] && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { n, row_ptr, col_idx, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_ptr
    }

    /// Column indices and values stored in row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|k| vals[k]).unwrap_or(0.0)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let trip: Vec<Triplet<usize, usize, f64>> = (0..self.n)
            .flat_map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(move |(&c, &v)| Triplet::new(i, c, v))
            })
            .collect();
        SparseColMat::try_new_from_triplets(self.n, self.n, &trip)
            .map_err(|e| Error::Config(format!("sparse conversion failed: {e:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Direct,
    BiCgStab,
}

impl std::str::FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SolverKind::Direct),
            "bicgstab" => Ok(SolverKind::BiCgStab),
            _ => Err(Error::Config(format!("unknown solver `{s}` (expected direct or bicgstab)"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub kind: SolverKind,
    /// Relative residual `‖Mx - rhs‖₂ / ‖rhs‖₂` required on return.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { kind: SolverKind::Direct, tol: 1e-10, max_iter: 20_000 }
    }
}

/// Direct solve with relative residual tolerance `tol`.
pub fn solve(m: &SparseMatrix, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
    solve_with(m, rhs, &SolveOptions { tol, ..Default::default() })
}

pub fn solve_with(m: &SparseMatrix, rhs: &[f64], opts: &SolveOptions) -> Result<Vec<f64>> {
    if rhs.len() != m.n {
        return Err(Error::DimensionMismatch { expected: m.n, got: rhs.len() });
    }
    if m.n == 0 {
        return Ok(Vec::new());
    }
    let bnorm = norm2(rhs);
    if bnorm == 0.0 {
        return Ok(vec![0.0; m.n]);
    }
    let x = match opts.kind {
        SolverKind::Direct => direct(m, rhs)?,
        SolverKind::BiCgStab => bicgstab(m, rhs, opts)?,
    };
    let residual = relative_residual(m, &x, rhs);
    if !(residual <= opts.tol) {
        return Err(Error::SolveTolerance { residual, tol: opts.tol });
    }
    Ok(x)
}

pub fn relative_residual(m: &SparseMatrix, x: &[f64], rhs: &[f64]) -> f64 {
    let r: Vec<f64> = m.matvec(x).iter().zip(rhs).map(|(a, b)| a - b).collect();
    norm2(&r) / norm2(rhs)
}

fn direct(m: &SparseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    // quick structural screen: an all-zero row fails at that pivot
    let tiny = 1e-14 * m.max_abs();
    for i in 0..m.n {
        let (_, vals) = m.row(i);
        if vals.iter().all(|v| v.abs() <= tiny) {
            return Err(Error::SingularMatrix { pivot: i });
        }
    }
    let lu = m.to_faer()?.sp_lu().map_err(|e| match e {
        faer::sparse::linalg::LuError::SymbolicSingular { index } => Error::SingularMatrix { pivot: index },
        other => Error::Config(format!("sparse LU failed: {other:?}")),
    })?;
    let b = faer::Col::<f64>::from_fn(m.n, |i| rhs[i]);
    let x = lu.solve(&b);
    let x: Vec<f64> = (0..m.n).map(|i| x[i]).collect();
    if let Some(pivot) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::SingularMatrix { pivot });
    }
    Ok(x)
}

fn bicgstab(m: &SparseMatrix, rhs: &[f64], opts: &SolveOptions) -> Result<Vec<f64>> {
    let n = m.n;
    let inv_diag: Vec<f64> = m
        .diagonal()
        .iter()
        .map(|&d| if d.abs() > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let precond = |v: &[f64]| -> Vec<f64> { v.iter().zip(&inv_diag).map(|(a, d)| a * d).collect() };
    let bnorm = norm2(rhs);
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for _ in 0..opts.max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        let y = precond(&p);
        v = m.matvec(&y);
        alpha = rho_new / dot(&r_hat, &v);
        let s: Vec<f64> = r.iter().zip(&v).map(|(ri, vi)| ri - alpha * vi).collect();
        if norm2(&s) <= 0.1 * opts.tol * bnorm {
            x.iter_mut().zip(&y).for_each(|(xi, yi)| *xi += alpha * yi);
            break;
        }
        let z = precond(&s);
        let t = m.matvec(&z);
        omega = dot(&t, &s) / dot(&t, &t);
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        rho = rho_new;
        if norm2(&r) <= 0.1 * opts.tol * bnorm || !omega.is_finite() || omega == 0.0 {
            break;
        }
    }
    Ok(x)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
