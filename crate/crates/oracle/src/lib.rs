//! Brute-force reference computations for validating `spindiscord`.
//!
//! Nothing here shares code with the library under test: the finite XY chain
//! is diagonalized in the full 2^N Hilbert space, discord is minimized over a
//! fixed dense grid of projectors built as explicit matrices, and the XXZ
//! Hamiltonian is assembled densely.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

pub const MAX_CHAIN_SITES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooManySites(usize),
    BadSeparation { n_sites: usize, separation: usize },
    NoConvergence(f64),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManySites(n) => write!(f, "{n} sites exceeds the dense limit of {MAX_CHAIN_SITES}"),
            OracleError::BadSeparation { n_sites, separation } => {
                write!(f, "separation {separation} invalid for {n_sites} sites")
            }
            OracleError::NoConvergence(r) => write!(f, "ground state did not converge (residual {r:e})"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Pair observables of a finite periodic chain. `abs_mz` is unsigned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseChainResult {
    pub n_sites: usize,
    pub energy: f64,
    pub abs_mz: f64,
    pub gxx: f64,
    pub gyy: f64,
    pub gzz: f64,
}

// Bit k of a basis index is 1 when spin k points up.
fn up(state: usize, k: usize) -> bool {
    state >> k & 1 == 1
}

fn apply_xy(x: &[f64], y: &mut [f64], n_sites: usize, gamma: f64, lambda: f64) {
    y.par_iter_mut().enumerate().for_each(|(s, out)| {
        let mut acc = 0.0;
        for k in 0..n_sites {
            // −Σ σᶻ
            acc -= if up(s, k) { x[s] } else { -x[s] };
            let l = (k + 1) % n_sites;
            let t = s ^ (1 << k) ^ (1 << l);
            // −(λ/2)[(1+γ)σˣσˣ + (1−γ)σʸσʸ] has element −λγ between aligned
            // pairs and −λ between anti-aligned pairs.
            let coupling = if up(t, k) == up(t, l) { -lambda * gamma } else { -lambda };
            acc += coupling * x[t];
        }
        *out = acc;
    });
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Plain Lanczos with full reorthogonalization, no restarts.
fn lowest_eigenpair(
    dim: usize,
    start: Vec<f64>,
    apply: impl Fn(&[f64], &mut [f64]),
    max_iter: usize,
) -> Result<(f64, Vec<f64>), OracleError> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let norm = dot(&start, &start).sqrt();
    let mut v: Vec<f64> = start.iter().map(|x| x / norm).collect();
    let mut w = vec![0.0; dim];
    let mut best = (f64::INFINITY, Vec::new(), f64::INFINITY);
    for it in 0..max_iter.min(dim) {
        apply(&v, &mut w);
        let alpha = dot(&w, &v);
        basis.push(v.clone());
        alphas.push(alpha);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = dot(&w, &w).sqrt();
        let m = alphas.len();
        let tri = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alphas[i]
            } else if i == j + 1 {
                betas[j]
            } else if j == i + 1 {
                betas[i]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(tri);
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        let resid_est = beta * eig.eigenvectors[(m - 1, imin)].abs();
        if (it + 1) % 10 == 0 || resid_est < 1e-12 || beta < 1e-13 || it + 1 == max_iter.min(dim) {
            let coeffs = eig.eigenvectors.column(imin);
            let mut psi = vec![0.0; dim];
            for (c, q) in coeffs.iter().zip(&basis) {
                psi.iter_mut().zip(q).for_each(|(x, y)| *x += c * y);
            }
            let nrm = dot(&psi, &psi).sqrt();
            psi.iter_mut().for_each(|x| *x /= nrm);
            let mut hpsi = vec![0.0; dim];
            apply(&psi, &mut hpsi);
            let e = dot(&psi, &hpsi);
            let r = hpsi
                .iter()
                .zip(&psi)
                .map(|(h, p)| (h - e * p).powi(2))
                .sum::<f64>()
                .sqrt();
            if r < best.2 {
                best = (e, psi, r);
            }
            if r < 1e-9 {
                return Ok((best.0, best.1));
            }
        }
        if beta < 1e-13 {
            break;
        }
        betas.push(beta);
        v = w.iter().map(|x| x / beta).collect();
    }
    if best.2 < 1e-7 {
        Ok((best.0, best.1))
    } else {
        Err(OracleError::NoConvergence(best.2))
    }
}

/// Ground state of the periodic XY chain
/// `H = −(λ/2) Σ [(1+γ)σˣσˣ + (1−γ)σʸσʸ] − Σ σᶻ`
/// restricted to the even sector of the parity `Π σᶻ`, with pair correlators at
/// the given separation averaged over translations.
pub fn xy_finite_chain(
    gamma: f64,
    lambda: f64,
    n_sites: usize,
    separation: usize,
) -> Result<DenseChainResult, OracleError> {
    if n_sites > MAX_CHAIN_SITES {
        return Err(OracleError::TooManySites(n_sites));
    }
    if separation == 0 || separation >= n_sites {
        return Err(OracleError::BadSeparation { n_sites, separation });
    }
    let dim = 1usize << n_sites;
    // Even parity: an even number of down spins.
    let start: Vec<f64> = (0..dim)
        .map(|s| {
            if (n_sites - s.count_ones() as usize).is_multiple_of(2) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let (energy, psi) = lowest_eigenpair(dim, start, |x, y| apply_xy(x, y, n_sites, gamma, lambda), 600)?;

    let mut mz = 0.0;
    let mut gxx = 0.0;
    let mut gyy = 0.0;
    let mut gzz = 0.0;
    for k in 0..n_sites {
        let l = (k + separation) % n_sites;
        for (s, &amp) in psi.iter().enumerate() {
            let w = amp * amp;
            let zk = if up(s, k) { 1.0 } else { -1.0 };
            let zl = if up(s, l) { 1.0 } else { -1.0 };
            mz += w * zk;
            gzz += w * zk * zl;
            let t = s ^ (1 << k) ^ (1 << l);
            let overlap = amp * psi[t];
            gxx += overlap;
            // σʸ|↑⟩ = i|↓⟩, σʸ|↓⟩ = −i|↑⟩
            gyy += if zk == zl { -overlap } else { overlap };
        }
    }
    let norm = n_sites as f64;
    Ok(DenseChainResult {
        n_sites,
        energy,
        abs_mz: (mz / norm).abs(),
        gxx: gxx / norm,
        gyy: gyy / norm,
        gzz: gzz / norm,
    })
}

/// Correlations of a two-qubit state, measured on the second qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceDiscord {
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
}

fn entropy_2x2(m: &Matrix2<Complex64>) -> f64 {
    let tr = (m[(0, 0)] + m[(1, 1)]).re;
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
        .iter()
        .filter(|&&e| e > 0.0)
        .map(|&e| -e * e.log2())
        .sum()
}

fn entropy_4x4(rho: &Matrix4<Complex64>) -> f64 {
    SymmetricEigen::new(*rho)
        .eigenvalues
        .iter()
        .filter(|&&e| e > 0.0)
        .map(|&e| -e * e.log2())
        .sum()
}

/// Block `(k, l)` of the second qubit: `⟨·k|ρ|·l⟩` as a 2×2 operator on the first qubit.
fn block(rho: &Matrix4<Complex64>, k: usize, l: usize) -> Matrix2<Complex64> {
    Matrix2::from_fn(|a, b| rho[(2 * a + k, 2 * b + l)])
}

/// Discord from an exhaustive 720×1440 grid of projective measurements on
/// the second qubit, without refinement. Basis order `{↑↑, ↑↓, ↓↑, ↓↓}`.
pub fn brute_force_discord(rho: &Matrix4<Complex64>) -> BruteForceDiscord {
    const N_THETA: usize = 720;
    const N_PHI: usize = 1440;
    let blocks = [
        [block(rho, 0, 0), block(rho, 0, 1)],
        [block(rho, 1, 0), block(rho, 1, 1)],
    ];
    let rho_a = blocks[0][0] + blocks[1][1];
    let rho_b = Matrix2::from_fn(|k, l| blocks[k][l].trace());

    let min_cond = (0..N_THETA)
        .into_par_iter()
        .map(|i| {
            let theta = PI * i as f64 / N_THETA as f64;
            let mut best = f64::INFINITY;
            for j in 0..N_PHI {
                let phi = 2.0 * PI * j as f64 / N_PHI as f64;
                let plus = [
                    Complex64::new((theta / 2.0).cos(), 0.0),
                    Complex64::from_polar((theta / 2.0).sin(), phi),
                ];
                let minus = [-plus[1].conj(), plus[0].conj()];
                let mut s = 0.0;
                for psi in [plus, minus] {
                    // ⟨ψ|_b ρ |ψ⟩_b
                    let mut cond = Matrix2::zeros();
                    for k in 0..2 {
                        for l in 0..2 {
                            cond += blocks[k][l] * (psi[k].conj() * psi[l]);
                        }
                    }
                    let p = cond.trace().re;
                    if p > 1e-14 {
                        s += p * entropy_2x2(&(cond / Complex64::new(p, 0.0)));
                    }
                }
                best = best.min(s);
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);

    let s_a = entropy_2x2(&rho_a);
    let s_b = entropy_2x2(&rho_b);
    let mutual_info = s_a + s_b - entropy_4x4(rho);
    let classical_corr = s_a - min_cond;
    BruteForceDiscord {
        mutual_info,
        classical_corr,
        discord: mutual_info - classical_corr,
    }
}

/// Dense open XXZ Hamiltonian
/// `−½ Σ (σˣσˣ + σʸσʸ) − (Δ/2) Σ σᶻσᶻ − h(σ₁ᶻ − σ_Nᶻ)`.
/// Site `k` (1-based) is bit `k−1` of the basis index; a set bit means spin up.
pub fn xxz_dense_hamiltonian(n_sites: usize, delta: f64, h: f64) -> Result<DMatrix<f64>, OracleError> {
    if n_sites > 12 {
        return Err(OracleError::TooManySites(n_sites));
    }
    let dim = 1usize << n_sites;
    let spin = |s: usize, k: usize| if up(s, k) { 1.0 } else { -1.0 };
    let mut m = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let mut diag = 0.0;
        for k in 0..n_sites - 1 {
            diag += -0.5 * delta * spin(s, k) * spin(s, k + 1);
            if up(s, k) != up(s, k + 1) {
                m[(s ^ (0b11 << k), s)] = -1.0;
            }
        }
        diag += -h * (spin(s, 0) - spin(s, n_sites - 1));
        m[(s, s)] = diag;
    }
    Ok(m)
}

pub fn dense_ground_energy(h: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(h.clone()).eigenvalues.min()
}

/// All eigenvalues, ascending.
pub fn dense_spectrum(h: &DMatrix<f64>) -> DVector<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    DVector::from_vec(ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarized_chain() {
        let r = xy_finite_chain(1.0, 0.0, 8, 3).unwrap();
        assert!((r.abs_mz - 1.0).abs() < 1e-12);
        assert!(r.gxx.abs() < 1e-12 && r.gyy.abs() < 1e-12);
        assert!((r.gzz - 1.0).abs() < 1e-12);
        assert!((r.energy + 8.0).abs() < 1e-10);
    }

    #[test]
    fn refuses_large_chains() {
        assert_eq!(xy_finite_chain(1.0, 1.0, 20, 1), Err(OracleError::TooManySites(20)));
    }

    #[test]
    fn bell_state_grid() {
        let mut rho = Matrix4::zeros();
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            rho[(r, c)] = Complex64::new(0.5, 0.0);
        }
        let d = brute_force_discord(&rho);
        assert!((d.discord - 1.0).abs() < 1e-9);
        assert!((d.mutual_info - 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_site_xxz() {
        let h = xxz_dense_hamiltonian(2, 0.0, 1.0).unwrap();
        assert!((dense_ground_energy(&h) + 5f64.sqrt()).abs() < 1e-12);
    }
}
