//! Restarted Lanczos for the lowest eigenpair of a real symmetric operator.
//!
//! Each cycle builds a Krylov basis of at most `krylov_dim` vectors with full
//! (two-pass) reorthogonalization, then restarts from the current Ritz vector.
//! Convergence is judged on the explicit residual `‖Hv − θv‖`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    /// Total matrix-vector products across all restarts.
    pub max_iterations: usize,
    /// Target explicit residual.
    pub tolerance: f64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            krylov_dim: 120,
            max_iterations: 1000,
            tolerance: 1e-11,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn tridiagonal(alphas: &[f64], betas: &[f64]) -> DMatrix<f64> {
    let m = alphas.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alphas[i];
        if i + 1 < m {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    t
}

fn explicit_residual<A: LinearOperator + ?Sized>(op: &A, v: &[f64], scratch: &mut [f64]) -> (f64, f64) {
    op.apply(v, scratch);
    let theta = dot(v, scratch);
    let r = scratch
        .iter()
        .zip(v)
        .map(|(h, x)| (h - theta * x).powi(2))
        .sum::<f64>()
        .sqrt();
    (theta, r)
}

/// Lowest eigenpair of `op`, starting from `start` (need not be normalized).
pub fn lowest_eigenpair<A: LinearOperator + ?Sized>(op: &A, start: &[f64], cfg: &LanczosConfig) -> Result<EigenPair> {
    let dim = op.dim();
    let mut current = start.to_vec();
    if normalize(&mut current) == 0.0 {
        return Err(Error::domain("Lanczos start vector is zero"));
    }
    let mut scratch = vec![0.0; dim];
    if dim == 1 {
        let (theta, r) = explicit_residual(op, &current, &mut scratch);
        return Ok(EigenPair {
            value: theta,
            vector: current,
            residual: r,
            iterations: 1,
        });
    }

    let mut iterations = 0;
    let mut best_residual = f64::INFINITY;
    while iterations < cfg.max_iterations {
        let m_max = cfg.krylov_dim.min(dim).min(cfg.max_iterations - iterations).max(2);
        let mut basis: Vec<Vec<f64>> = vec![current.clone()];
        let mut alphas = Vec::with_capacity(m_max);
        let mut betas = Vec::with_capacity(m_max);
        let mut w = vec![0.0; dim];
        loop {
            let v = basis.last().expect("basis holds the start vector");
            op.apply(v, &mut w);
            iterations += 1;
            alphas.push(dot(&w, v));
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let beta = dot(&w, &w).sqrt();
            if alphas.len() >= m_max || beta <= 1e-14 * alphas.iter().fold(1.0f64, |a, x| a.max(x.abs())) {
                break;
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        let eig = SymmetricEigen::new(tridiagonal(&alphas, &betas));
        let imin = eig.eigenvalues.imin();
        let coeffs = eig.eigenvectors.column(imin);
        let mut ritz = vec![0.0; dim];
        for (c, q) in coeffs.iter().zip(&basis) {
            ritz.iter_mut().zip(q).for_each(|(x, y)| *x += c * y);
        }
        normalize(&mut ritz);
        let (theta, residual) = explicit_residual(op, &ritz, &mut scratch);
        best_residual = best_residual.min(residual);
        if residual <= cfg.tolerance {
            return Ok(EigenPair {
                value: theta,
                vector: ritz,
                residual,
                iterations,
            });
        }
        current = ritz;
    }
    Err(Error::Eigensolver {
        residual: best_residual,
        iterations,
    })
}
