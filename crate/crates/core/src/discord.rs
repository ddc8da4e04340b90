//! Entropies, mutual information, classical correlation and quantum discord
//! for two-qubit states.
//!
//! States are handled in two representations. [`XStateDensity`] stores the
//! six real entries of an X-shaped density matrix in the ordered basis
//! `{↑↑, ↑↓, ↓↑, ↓↓}`; [`TwoQubitState`] stores the full Pauli expansion
//! `ρ = ¼ Σ R_ij σ_i ⊗ σ_j` and covers arbitrary two-qubit states.
//! Logarithms are base 2 throughout, so every information quantity is in bits.

use std::f64::consts::PI;

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on probabilities and eigenvalues before a state is rejected.
pub const STATE_TOL: f64 = 1e-12;

/// Outcomes with smaller probability contribute nothing to a conditional entropy.
const OUTCOME_FLOOR: f64 = 1e-14;

/// Tolerance on negative discord before it is treated as a bug rather than roundoff.
const DISCORD_SLACK: f64 = 1e-9;

/// `-x log2 x - (1-x) log2 (1-x)` with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&x) || x.is_nan() {
        return Err(Error::domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok(xlog2x(x) + xlog2x(1.0 - x))
}

#[inline]
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Entropy of a qubit whose Bloch vector has length `r`.
#[inline]
fn bloch_entropy(r: f64) -> f64 {
    let r = r.min(1.0);
    xlog2x(0.5 * (1.0 + r)) + xlog2x(0.5 * (1.0 - r))
}

/// `-Σ e log2 e` over a spectrum. Eigenvalues in `[-1e-12, 0)` are clamped to zero.
pub fn entropy_from_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &e in eigenvalues {
        if e < -STATE_TOL || e.is_nan() {
            return Err(Error::Positivity(e));
        }
        s += xlog2x(e);
    }
    Ok(s)
}

/// Two-qubit density operator of X shape with real coherences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XStateDensity {
    pub p_uu: f64,
    pub p_ud: f64,
    pub p_du: f64,
    pub p_dd: f64,
    /// `⟨↑↑|ρ|↓↓⟩`
    pub c_outer: f64,
    /// `⟨↑↓|ρ|↓↑⟩`
    pub c_inner: f64,
}

impl XStateDensity {
    /// Builds and validates an X state from its matrix entries.
    pub fn new(p_uu: f64, p_ud: f64, p_du: f64, p_dd: f64, c_outer: f64, c_inner: f64) -> Result<Self> {
        let rho = Self {
            p_uu,
            p_ud,
            p_du,
            p_dd,
            c_outer,
            c_inner,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// The X state `¼{I + ma σᶻ⊗I + mb I⊗σᶻ + Σ g_i σ^i⊗σ^i}`. Not validated.
    pub fn from_pauli(mz_a: f64, mz_b: f64, gxx: f64, gyy: f64, gzz: f64) -> Self {
        Self {
            p_uu: 0.25 * (1.0 + mz_a + mz_b + gzz),
            p_ud: 0.25 * (1.0 + mz_a - mz_b - gzz),
            p_du: 0.25 * (1.0 - mz_a + mz_b - gzz),
            p_dd: 0.25 * (1.0 - mz_a - mz_b + gzz),
            c_outer: 0.25 * (gxx - gyy),
            c_inner: 0.25 * (gxx + gyy),
        }
    }

    /// Symmetric X state with equal local magnetizations `mz`. Not validated.
    pub fn from_correlators(mz: f64, gxx: f64, gyy: f64, gzz: f64) -> Self {
        Self::from_pauli(mz, mz, gxx, gyy, gzz)
    }

    pub fn validate(&self) -> Result<()> {
        let pops = [self.p_uu, self.p_ud, self.p_du, self.p_dd];
        if let Some(&p) = pops.iter().find(|&&p| p < -STATE_TOL || p.is_nan()) {
            return Err(Error::Positivity(p));
        }
        let total: f64 = pops.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::domain(format!("populations sum to {total}, not 1")));
        }
        let outer_bound = (self.p_uu.max(0.0) * self.p_dd.max(0.0)).sqrt() + STATE_TOL;
        let inner_bound = (self.p_ud.max(0.0) * self.p_du.max(0.0)).sqrt() + STATE_TOL;
        if self.c_outer.abs() > outer_bound || self.c_inner.abs() > inner_bound {
            let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
            return Err(Error::Positivity(min));
        }
        Ok(())
    }

    /// `(⟨σᶻ⊗I⟩, ⟨I⊗σᶻ⟩, ⟨σˣσˣ⟩, ⟨σʸσʸ⟩, ⟨σᶻσᶻ⟩)`.
    pub fn correlators(&self) -> (f64, f64, f64, f64, f64) {
        let mz_a = self.p_uu + self.p_ud - self.p_du - self.p_dd;
        let mz_b = self.p_uu - self.p_ud + self.p_du - self.p_dd;
        let gxx = 2.0 * (self.c_outer + self.c_inner);
        let gyy = 2.0 * (self.c_inner - self.c_outer);
        let gzz = self.p_uu - self.p_ud - self.p_du + self.p_dd;
        (mz_a, mz_b, gxx, gyy, gzz)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.p_ud - self.p_du).abs() <= STATE_TOL
    }

    /// Eigenvalues from the two 2×2 blocks: outer pair first, then inner pair.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (o_plus, o_minus) = block_eigenvalues(self.p_uu, self.p_dd, self.c_outer);
        let (i_plus, i_minus) = block_eigenvalues(self.p_ud, self.p_du, self.c_inner);
        [o_plus, o_minus, i_plus, i_minus]
    }

    /// Exchanges the two qubits.
    pub fn swapped(&self) -> Self {
        Self {
            p_ud: self.p_du,
            p_du: self.p_ud,
            ..*self
        }
    }

    /// Applies σˣ to both qubits (σᶻ → −σᶻ, σʸ → −σʸ).
    pub fn spin_flipped(&self) -> Self {
        Self {
            p_uu: self.p_dd,
            p_dd: self.p_uu,
            p_ud: self.p_du,
            p_du: self.p_ud,
            ..*self
        }
    }

    pub fn to_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = self.p_uu;
        m[(1, 1)] = self.p_ud;
        m[(2, 2)] = self.p_du;
        m[(3, 3)] = self.p_dd;
        m[(0, 3)] = self.c_outer;
        m[(3, 0)] = self.c_outer;
        m[(1, 2)] = self.c_inner;
        m[(2, 1)] = self.c_inner;
        m
    }

    pub fn to_general(&self) -> TwoQubitState {
        let (mz_a, mz_b, gxx, gyy, gzz) = self.correlators();
        TwoQubitState {
            a: [0.0, 0.0, mz_a],
            b: [0.0, 0.0, mz_b],
            t: [[gxx, 0.0, 0.0], [0.0, gyy, 0.0], [0.0, 0.0, gzz]],
        }
    }
}

fn block_eigenvalues(d1: f64, d2: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (d1 + d2);
    let radius = (0.25 * (d1 - d2) * (d1 - d2) + c * c).sqrt();
    (mean + radius, mean - radius)
}

/// Closed-form spectrum `{ξ₀, ξ₁, η₀, η₁}` of a symmetric X state.
pub fn pair_spectrum(rho: &XStateDensity) -> Result<[f64; 4]> {
    if !rho.is_symmetric() {
        return Err(Error::UnsupportedShape(
            "pair spectrum needs equal local magnetizations".into(),
        ));
    }
    let (mz, _, gxx, gyy, gzz) = rho.correlators();
    let root = ((gxx - gyy).powi(2) + 4.0 * mz * mz).sqrt();
    Ok([
        0.25 * (1.0 + gzz + root),
        0.25 * (1.0 + gzz - root),
        0.25 * (1.0 - gzz + (gxx + gyy)),
        0.25 * (1.0 - gzz - (gxx + gyy)),
    ])
}

pub fn von_neumann_entropy(rho: &XStateDensity) -> Result<f64> {
    entropy_from_spectrum(&rho.eigenvalues())
}

/// Quantum mutual information `S(ρa) + S(ρb) − S(ρab)`.
pub fn mutual_information(rho: &XStateDensity) -> Result<f64> {
    let (mz_a, mz_b, ..) = rho.correlators();
    let s_a = binary_entropy(0.5 * (1.0 + mz_a))?;
    let s_b = binary_entropy(0.5 * (1.0 + mz_b))?;
    let s_ab = von_neumann_entropy(rho)?;
    Ok((s_a + s_b - s_ab).max(0.0))
}

/// Which qubit the projective measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasuredSide {
    First,
    #[default]
    Second,
}

/// Projective measurement `{(I ± n·σ)/2}` along the Bloch direction `n(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub theta: f64,
    pub phi_az: f64,
}

impl Measurement {
    /// The `{|+⟩⟨+|, |−⟩⟨−|}` measurement.
    pub const SIGMA_X: Measurement = Measurement {
        theta: PI / 2.0,
        phi_az: 0.0,
    };

    pub const SIGMA_Z: Measurement = Measurement {
        theta: 0.0,
        phi_az: 0.0,
    };

    /// Maps arbitrary angles back to `θ ∈ [0, π]`, `φ ∈ [0, 2π)` describing the same axis.
    pub fn normalized(theta: f64, phi_az: f64) -> Self {
        let mut theta = theta.rem_euclid(2.0 * PI);
        let mut phi = phi_az;
        if theta > PI {
            theta = 2.0 * PI - theta;
            phi += PI;
        }
        Self {
            theta,
            phi_az: phi.rem_euclid(2.0 * PI),
        }
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi_az.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Arbitrary two-qubit state as a Pauli expansion: Bloch vectors `a`, `b` of the
/// two marginals and correlation tensor `t[i][j] = ⟨σ_i ⊗ σ_j⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitState {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub t: [[f64; 3]; 3],
}

fn paulis() -> [Matrix2<Complex64>; 4] {
    let z = Complex::new(0.0, 0.0);
    let o = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    [
        Matrix2::new(o, z, z, o),
        Matrix2::new(z, o, o, z),
        Matrix2::new(z, -i, i, z),
        Matrix2::new(o, z, z, -o),
    ]
}

fn kron2(x: &Matrix2<Complex64>, y: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| x[(r / 2, c / 2)] * y[(r % 2, c % 2)])
}

impl TwoQubitState {
    /// Pauli expansion of a 4×4 density matrix in the `{↑↑, ↑↓, ↓↑, ↓↓}` basis.
    pub fn from_density_matrix(rho: &Matrix4<Complex64>) -> Self {
        let p = paulis();
        let coeff = |i: usize, j: usize| (kron2(&p[i], &p[j]) * rho).trace().re;
        let mut state = Self {
            a: [0.0; 3],
            b: [0.0; 3],
            t: [[0.0; 3]; 3],
        };
        for k in 0..3 {
            state.a[k] = coeff(k + 1, 0);
            state.b[k] = coeff(0, k + 1);
            for l in 0..3 {
                state.t[k][l] = coeff(k + 1, l + 1);
            }
        }
        state
    }

    pub fn to_density_matrix(&self) -> Matrix4<Complex64> {
        let p = paulis();
        let mut rho = kron2(&p[0], &p[0]);
        for k in 0..3 {
            rho += kron2(&p[k + 1], &p[0]) * Complex::from(self.a[k]);
            rho += kron2(&p[0], &p[k + 1]) * Complex::from(self.b[k]);
            for l in 0..3 {
                rho += kron2(&p[k + 1], &p[l + 1]) * Complex::from(self.t[k][l]);
            }
        }
        rho * Complex::from(0.25)
    }

    /// `Σ p_ij |i⟩⟨i| ⊗ |j⟩⟨j|` where `|0⟩, |1⟩` of each qubit are the two
    /// eigenstates of `u·σ` (resp. `v·σ`) with eigenvalues +1 and −1.
    pub fn classical(p: [[f64; 2]; 2], u: [f64; 3], v: [f64; 3]) -> Result<Self> {
        let total: f64 = p.iter().flatten().sum();
        if p.iter().flatten().any(|&x| x < 0.0) || (total - 1.0).abs() > STATE_TOL {
            return Err(Error::domain("classical weights must form a probability distribution"));
        }
        let unit = |w: [f64; 3]| {
            let n = norm3(w);
            if n == 0.0 {
                Err(Error::domain("basis direction must be nonzero"))
            } else {
                Ok([w[0] / n, w[1] / n, w[2] / n])
            }
        };
        let (u, v) = (unit(u)?, unit(v)?);
        let sa = p[0][0] + p[0][1] - p[1][0] - p[1][1];
        let sb = p[0][0] - p[0][1] + p[1][0] - p[1][1];
        let sab = p[0][0] - p[0][1] - p[1][0] + p[1][1];
        let mut t = [[0.0; 3]; 3];
        for (k, row) in t.iter_mut().enumerate() {
            for (l, x) in row.iter_mut().enumerate() {
                *x = sab * u[k] * v[l];
            }
        }
        Ok(Self {
            a: u.map(|x| sa * x),
            b: v.map(|x| sb * x),
            t,
        })
    }

    /// Exchanges the two qubits.
    pub fn swapped(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (k, row) in t.iter_mut().enumerate() {
            for (l, x) in row.iter_mut().enumerate() {
                *x = self.t[l][k];
            }
        }
        Self {
            a: self.b,
            b: self.a,
            t,
        }
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let eig = SymmetricEigen::new(self.to_density_matrix());
        let mut ev = [0.0; 4];
        ev.copy_from_slice(eig.eigenvalues.as_slice());
        ev
    }

    pub fn marginal_entropies(&self) -> (f64, f64) {
        (bloch_entropy(norm3(self.a)), bloch_entropy(norm3(self.b)))
    }

    pub fn entropy(&self) -> Result<f64> {
        entropy_from_spectrum(&self.eigenvalues())
    }

    pub fn mutual_information(&self) -> Result<f64> {
        let (s_a, s_b) = self.marginal_entropies();
        Ok((s_a + s_b - self.entropy()?).max(0.0))
    }

    /// `Σ_j p_j S(ρ_a^j)` after measuring qubit b along `m`.
    pub fn conditional_entropy_b(&self, m: &Measurement) -> f64 {
        let n = m.direction();
        let bn = dot3(self.b, n);
        let tn = [dot3(self.t[0], n), dot3(self.t[1], n), dot3(self.t[2], n)];
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let p = 0.5 * (1.0 + sign * bn);
            if p < OUTCOME_FLOOR {
                continue;
            }
            let r = [
                self.a[0] + sign * tn[0],
                self.a[1] + sign * tn[1],
                self.a[2] + sign * tn[2],
            ];
            total += p * bloch_entropy(norm3(r) / (2.0 * p));
        }
        total
    }
}

#[inline]
fn dot3(x: [f64; 3], y: [f64; 3]) -> f64 {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

#[inline]
fn norm3(x: [f64; 3]) -> f64 {
    dot3(x, x).sqrt()
}

/// Average entropy of the unmeasured qubit after measuring `side` along `m`.
pub fn conditional_entropy_after(rho: &XStateDensity, m: &Measurement, side: MeasuredSide) -> f64 {
    let general = rho.to_general();
    match side {
        MeasuredSide::Second => general.conditional_entropy_b(m),
        MeasuredSide::First => general.swapped().conditional_entropy_b(m),
    }
}

/// Closed-form classical correlation of a symmetric X state measured in the σˣ basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCorrelation {
    pub classical_corr: f64,
    pub p1: f64,
    pub p2: f64,
}

/// `J = H(p₁) − H(p₂)`, `p₁ = (1 + mz)/2`, `p₂ = (1 + √(gxx² + mz²))/2`.
pub fn classical_correlation_closed_form(rho: &XStateDensity) -> Result<ClosedFormCorrelation> {
    if !rho.is_symmetric() {
        return Err(Error::UnsupportedShape(
            "closed form needs equal local magnetizations".into(),
        ));
    }
    let (mz, _, gxx, gyy, _) = rho.correlators();
    if gxx.abs() < gyy.abs() {
        return Err(Error::XValidity { gxx, gyy });
    }
    let p1 = 0.5 * (1.0 + mz);
    let p2 = 0.5 * (1.0 + (gxx * gxx + mz * mz).sqrt());
    Ok(ClosedFormCorrelation {
        classical_corr: binary_entropy(p1)? - binary_entropy(p2.min(1.0))?,
        p1,
        p2,
    })
}

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 128;
const REFINE_SEEDS: usize = 4;
const ANGULAR_RESOLUTION: f64 = 1e-6;

/// Minimum of `Σ p_j S(ρ_a^j)` over measurements of qubit b.
///
/// A 64×128 grid over `(θ, φ)` with `θ_i = iπ/64`, `φ_j = 2πj/128` (so the σˣ
/// and σᶻ axes are grid points), then compass search from the best grid
/// points down to an angular step of 1e-6.
pub fn minimize_conditional_entropy(state: &TwoQubitState) -> (f64, Measurement) {
    let mut grid: Vec<(f64, usize, usize)> = Vec::with_capacity(GRID_THETA * GRID_PHI);
    for i in 0..GRID_THETA {
        let theta = PI * i as f64 / GRID_THETA as f64;
        // At the pole every azimuth is the same axis.
        let phis = if i == 0 { 1 } else { GRID_PHI };
        for j in 0..phis {
            let m = Measurement {
                theta,
                phi_az: 2.0 * PI * j as f64 / GRID_PHI as f64,
            };
            grid.push((state.conditional_entropy_b(&m), i, j));
        }
    }
    grid.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut best = (
        grid[0].0,
        Measurement {
            theta: PI * grid[0].1 as f64 / GRID_THETA as f64,
            phi_az: 2.0 * PI * grid[0].2 as f64 / GRID_PHI as f64,
        },
    );
    for &(value, i, j) in grid.iter().take(REFINE_SEEDS) {
        let start = Measurement {
            theta: PI * i as f64 / GRID_THETA as f64,
            phi_az: 2.0 * PI * j as f64 / GRID_PHI as f64,
        };
        let (v, m) = compass_search(state, start, value);
        if v < best.0 {
            best = (v, m);
        }
    }
    (best.0, Measurement::normalized(best.1.theta, best.1.phi_az))
}

fn compass_search(state: &TwoQubitState, start: Measurement, start_value: f64) -> (f64, Measurement) {
    let mut current = start;
    let mut value = start_value;
    let mut step_theta = PI / GRID_THETA as f64;
    let mut step_phi = 2.0 * PI / GRID_PHI as f64;
    while step_theta > ANGULAR_RESOLUTION || step_phi > ANGULAR_RESOLUTION {
        let moves = [(step_theta, 0.0), (-step_theta, 0.0), (0.0, step_phi), (0.0, -step_phi)];
        let mut improved = false;
        for (dt, dp) in moves {
            let trial = Measurement {
                theta: current.theta + dt,
                phi_az: current.phi_az + dp,
            };
            let v = state.conditional_entropy_b(&trial);
            if v < value {
                value = v;
                current = trial;
                improved = true;
            }
        }
        if !improved {
            step_theta *= 0.5;
            step_phi *= 0.5;
        }
    }
    (value, current)
}

/// Classical correlation by numerical minimization over projective measurements.
pub fn classical_correlation_optimized(state: &TwoQubitState, side: MeasuredSide) -> (f64, Measurement) {
    let oriented = match side {
        MeasuredSide::Second => *state,
        MeasuredSide::First => state.swapped(),
    };
    let (min_cond, m) = minimize_conditional_entropy(&oriented);
    let (s_unmeasured, _) = oriented.marginal_entropies();
    ((s_unmeasured - min_cond).max(0.0), m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscordMethod {
    ClosedForm,
    Optimized,
}

impl std::fmt::Display for DiscordMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DiscordMethod::ClosedForm => "closed_form",
            DiscordMethod::Optimized => "optimized",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub minimizing_measurement: Measurement,
    pub method: DiscordMethod,
}

fn assemble(mutual_info: f64, classical_corr: f64, m: Measurement, method: DiscordMethod) -> Result<CorrelationReport> {
    let discord = mutual_info - classical_corr;
    if discord < -DISCORD_SLACK {
        return Err(Error::Consistency(format!(
            "negative discord {discord:e} (I = {mutual_info}, J = {classical_corr})"
        )));
    }
    Ok(CorrelationReport {
        mutual_info,
        classical_corr,
        discord: discord.max(0.0),
        minimizing_measurement: m,
        method,
    })
}

/// `Q = I − J` with the second qubit measured.
pub fn quantum_discord(rho: &XStateDensity, method: DiscordMethod) -> Result<CorrelationReport> {
    quantum_discord_measuring(rho, method, MeasuredSide::Second)
}

pub fn quantum_discord_measuring(
    rho: &XStateDensity,
    method: DiscordMethod,
    side: MeasuredSide,
) -> Result<CorrelationReport> {
    rho.validate()?;
    let mutual_info = mutual_information(rho)?;
    match method {
        DiscordMethod::ClosedForm => {
            let closed = classical_correlation_closed_form(rho)?;
            assemble(mutual_info, closed.classical_corr, Measurement::SIGMA_X, method)
        }
        DiscordMethod::Optimized => {
            let (j, m) = classical_correlation_optimized(&rho.to_general(), side);
            assemble(mutual_info, j, m, method)
        }
    }
}

/// Discord of an arbitrary two-qubit state via the optimizer.
pub fn quantum_discord_general(state: &TwoQubitState, side: MeasuredSide) -> Result<CorrelationReport> {
    let ev = state.eigenvalues();
    if let Some(&e) = ev.iter().find(|&&e| e < -STATE_TOL) {
        return Err(Error::Positivity(e));
    }
    let mutual_info = state.mutual_information()?;
    let (j, m) = classical_correlation_optimized(state, side);
    assemble(mutual_info, j, m, DiscordMethod::Optimized)
}
