//! Thermodynamic-limit observables of the transverse-field XY chain.
//!
//! The magnetization density and the `G_n` coefficients are one-dimensional
//! integrals over the Brillouin half-zone `[0, π]`; the σˣσˣ and σʸσʸ
//! correlators are Toeplitz determinants of `G`, and σᶻσᶻ is
//! `⟨σᶻ⟩² − G_n G_{−n}`. The magnetization keeps the sign of the integral
//! formula, so it equals −1 for `λ = 0`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discord::{pair_spectrum, XStateDensity, STATE_TOL};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, Estimate, QuadratureConfig};

/// Extra panel boundary next to `φ = π`, where the dispersion vanishes at `λ = 1`.
const PI_BREAKPOINT: f64 = PI - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temperature {
    /// T → 0: the thermal factor `tanh(βω)` is replaced by 1.
    Zero,
    /// Finite inverse temperature β > 0.
    Beta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XYParams {
    pub gamma: f64,
    pub lambda: f64,
    pub temperature: Temperature,
}

impl XYParams {
    pub fn new(gamma: f64, lambda: f64, temperature: Temperature) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(format!("gamma = {gamma} outside [0, 1]")));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::domain(format!("lambda = {lambda} must be finite and >= 0")));
        }
        if let Temperature::Beta(beta) = temperature {
            if !(beta > 0.0) {
                return Err(Error::domain(format!("beta = {beta} must be > 0")));
            }
        }
        Ok(Self {
            gamma,
            lambda,
            temperature,
        })
    }

    /// Ground-state parameters (T → 0).
    pub fn ground(gamma: f64, lambda: f64) -> Result<Self> {
        Self::new(gamma, lambda, Temperature::Zero)
    }

    /// `tanh(βω)/ω`, or `1/ω` at zero temperature.
    fn thermal_weight(&self, omega: f64) -> f64 {
        match self.temperature {
            Temperature::Zero => 1.0 / omega,
            Temperature::Beta(beta) if omega == 0.0 => beta,
            Temperature::Beta(beta) => (beta * omega).tanh() / omega,
        }
    }

    fn key(&self) -> [u64; 3] {
        let beta = match self.temperature {
            Temperature::Zero => u64::MAX,
            Temperature::Beta(b) => b.to_bits(),
        };
        [self.gamma.to_bits(), self.lambda.to_bits(), beta]
    }
}

/// `ω_φ = ½ √((γλ sin φ)² + (1 + λ cos φ)²)`.
pub fn dispersion(phi: f64, params: &XYParams) -> f64 {
    let (s, c) = phi.sin_cos();
    let a = params.gamma * params.lambda * s;
    let b = 1.0 + params.lambda * c;
    0.5 * a.hypot(b)
}

pub fn magnetization_estimate(params: &XYParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    let integrand = |phi: f64| {
        let omega = dispersion(phi, params);
        (1.0 + params.lambda * phi.cos()) * params.thermal_weight(omega) / (2.0 * PI)
    };
    let est = integrate(integrand, 0.0, PI, &[PI_BREAKPOINT], cfg)?;
    Ok(Estimate {
        value: -est.value,
        ..est
    })
}

/// Transverse magnetization density `⟨σᶻ⟩` at absolute tolerance 1e-10.
pub fn magnetization(params: &XYParams) -> Result<f64> {
    magnetization_estimate(params, &QuadratureConfig::default()).map(|e| e.value)
}

pub fn g_coefficient_estimate(n: i64, params: &XYParams, cfg: &QuadratureConfig) -> Result<Estimate> {
    let nf = n as f64;
    let integrand = |phi: f64| {
        let omega = dispersion(phi, params);
        let (s, c) = phi.sin_cos();
        let (sn, cn) = (nf * phi).sin_cos();
        let bracket = cn * (1.0 + params.lambda * c) - params.gamma * params.lambda * sn * s;
        bracket * params.thermal_weight(omega) / (2.0 * PI)
    };
    // Oscillatory integrands get one starting panel per half period.
    let panels = (n.unsigned_abs() as usize).clamp(1, 64);
    let mut breaks: Vec<f64> = (1..panels).map(|k| PI * k as f64 / panels as f64).collect();
    breaks.push(PI_BREAKPOINT);
    integrate(integrand, 0.0, PI, &breaks, cfg)
}

/// `G_n` at absolute tolerance 1e-10.
pub fn g_coefficient(n: i64, params: &XYParams) -> Result<f64> {
    g_coefficient_estimate(n, params, &QuadratureConfig::default()).map(|e| e.value)
}

type CacheKey = ([u64; 3], u64, i64);

/// Process-wide memo of `G_n` values keyed by parameters, tolerance and index.
#[derive(Debug, Default)]
pub struct GCache {
    entries: RwLock<HashMap<CacheKey, Estimate>>,
}

impl GCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static GCache {
        static CACHE: OnceLock<GCache> = OnceLock::new();
        CACHE.get_or_init(GCache::new)
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, key: &CacheKey) -> Option<Estimate> {
        self.entries.read().get(key).copied()
    }

    fn insert_all(&self, items: Vec<(CacheKey, Estimate)>) {
        let mut map = self.entries.write();
        for (k, v) in items {
            map.entry(k).or_insert(v);
        }
    }
}

/// `G_k` for a contiguous range of indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GTable {
    pub params: XYParams,
    pub tolerance: f64,
    first: i64,
    values: Vec<Estimate>,
}

impl GTable {
    pub fn compute(params: &XYParams, range: RangeInclusive<i64>, cfg: &QuadratureConfig) -> Result<Self> {
        Self::compute_cached(params, range, cfg, GCache::global())
    }

    pub fn compute_cached(
        params: &XYParams,
        range: RangeInclusive<i64>,
        cfg: &QuadratureConfig,
        cache: &GCache,
    ) -> Result<Self> {
        let first = *range.start();
        let key = params.key();
        let tol = cfg.abs_tol.to_bits();
        let missing: Vec<i64> = range.clone().filter(|&k| cache.get(&(key, tol, k)).is_none()).collect();
        let fresh = missing
            .par_iter()
            .map(|&k| g_coefficient_estimate(k, params, cfg).map(|e| ((key, tol, k), e)))
            .collect::<Result<Vec<_>>>()?;
        cache.insert_all(fresh);
        let values = range
            .map(|k| cache.get(&(key, tol, k)).ok_or(Error::MissingGIndex(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params: *params,
            tolerance: cfg.abs_tol,
            first,
            values,
        })
    }

    pub fn range(&self) -> RangeInclusive<i64> {
        self.first..=self.first + self.values.len() as i64 - 1
    }

    pub fn get(&self, k: i64) -> Result<f64> {
        self.estimate(k).map(|e| e.value)
    }

    pub fn estimate(&self, k: i64) -> Result<Estimate> {
        usize::try_from(k - self.first)
            .ok()
            .and_then(|i| self.values.get(i))
            .copied()
            .ok_or(Error::MissingGIndex(k))
    }
}

fn toeplitz_determinant(n: usize, entry: impl Fn(i64) -> Result<f64>) -> Result<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = entry(i as i64 - j as i64)?;
        }
    }
    Ok(m.lu().determinant())
}

fn check_separation(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::domain("separation must be >= 1"))
    } else {
        Ok(())
    }
}

/// `⟨σ₀ˣσₙˣ⟩ = det[G_{i−j−1}]`.
pub fn xx_correlator(n: usize, table: &GTable) -> Result<f64> {
    check_separation(n)?;
    toeplitz_determinant(n, |d| table.get(d - 1))
}

/// `⟨σ₀ʸσₙʸ⟩ = det[G_{i−j+1}]`.
pub fn yy_correlator(n: usize, table: &GTable) -> Result<f64> {
    check_separation(n)?;
    toeplitz_determinant(n, |d| table.get(d + 1))
}

/// `⟨σ₀ᶻσₙᶻ⟩ = ⟨σᶻ⟩² − G_n G_{−n}`.
pub fn zz_correlator(n: usize, mz: f64, table: &GTable) -> Result<f64> {
    check_separation(n)?;
    let n = n as i64;
    Ok(mz * mz - table.get(n)? * table.get(-n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairObservables {
    pub n: usize,
    pub mz: f64,
    pub gxx: f64,
    pub gyy: f64,
    pub gzz: f64,
}

impl PairObservables {
    pub fn density(&self) -> XStateDensity {
        XStateDensity::from_correlators(self.mz, self.gxx, self.gyy, self.gzz)
    }
}

/// Magnetization plus a `G` table covering separations up to `n_max`.
#[derive(Debug, Clone)]
pub struct XYChain {
    pub params: XYParams,
    pub magnetization: Estimate,
    table: GTable,
}

impl XYChain {
    pub fn new(params: XYParams, n_max: usize) -> Result<Self> {
        Self::with_config(params, n_max, &QuadratureConfig::default())
    }

    /// Precomputes `G_k` for `k ∈ [−n_max−1, n_max+1]`.
    pub fn with_config(params: XYParams, n_max: usize, cfg: &QuadratureConfig) -> Result<Self> {
        let reach = n_max as i64 + 1;
        let table = GTable::compute(&params, -reach..=reach, cfg)?;
        let magnetization = magnetization_estimate(&params, cfg)?;
        Ok(Self {
            params,
            magnetization,
            table,
        })
    }

    pub fn table(&self) -> &GTable {
        &self.table
    }

    pub fn observables(&self, n: usize) -> Result<PairObservables> {
        let mz = self.magnetization.value;
        Ok(PairObservables {
            n,
            mz,
            gxx: xx_correlator(n, &self.table)?,
            gyy: yy_correlator(n, &self.table)?,
            gzz: zz_correlator(n, mz, &self.table)?,
        })
    }

    /// Reduced state of spins `0` and `n`, checked for positivity.
    pub fn pair_state(&self, n: usize) -> Result<XStateDensity> {
        let rho = self.observables(n)?.density();
        let spectrum = pair_spectrum(&rho)?;
        let min = spectrum.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -STATE_TOL {
            return Err(Error::Consistency(format!(
                "pair state at n = {n} has eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }
}

pub fn build_pair_state(n: usize, params: &XYParams) -> Result<XStateDensity> {
    XYChain::new(*params, n)?.pair_state(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn critical_ising() -> XYParams {
        XYParams::ground(1.0, 1.0).unwrap()
    }

    #[test]
    fn dispersion_examples() {
        let p = critical_ising();
        assert_abs_diff_eq!(dispersion(0.0, &p), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dispersion(PI, &p), 0.0, epsilon = 1e-15);
        let q = XYParams::ground(0.5, 2.0).unwrap();
        assert_abs_diff_eq!(dispersion(PI / 2.0, &q), 0.5 * 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn magnetization_examples() {
        let m = magnetization(&XYParams::ground(0.5, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(m, -1.0, epsilon = 1e-10);
        let m = magnetization(&critical_ising()).unwrap();
        assert_abs_diff_eq!(m, -2.0 / PI, epsilon = 1e-10);
        let m = magnetization(&XYParams::ground(1.0, 100.0).unwrap()).unwrap();
        assert!(m.abs() < 0.01, "{m}");
    }

    #[test]
    fn g_coefficient_examples() {
        let g = g_coefficient(0, &XYParams::ground(0.3, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(g, 1.0, epsilon = 1e-10);
        // At γ = λ = 1 the integrand is cos((n + ½)φ)/π.
        let p = critical_ising();
        for n in -6..=6 {
            let x = n as f64 + 0.5;
            let exact = (x * PI).sin() / (x * PI);
            assert_abs_diff_eq!(g_coefficient(n, &p).unwrap(), exact, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(g_coefficient(1, &p).unwrap(), -2.0 / (3.0 * PI), epsilon = 1e-10);
        assert_abs_diff_eq!(g_coefficient(-1, &p).unwrap(), 2.0 / PI, epsilon = 1e-10);
    }

    #[test]
    fn correlator_examples() {
        let chain = XYChain::new(critical_ising(), 3).unwrap();
        let t = chain.table();
        assert_abs_diff_eq!(xx_correlator(1, t).unwrap(), 2.0 / PI, epsilon = 1e-10);
        assert_abs_diff_eq!(xx_correlator(2, t).unwrap(), 16.0 / (3.0 * PI * PI), epsilon = 1e-10);
        assert_abs_diff_eq!(yy_correlator(1, t).unwrap(), -2.0 / (3.0 * PI), epsilon = 1e-10);
        let g = |k| t.get(k).unwrap();
        assert_abs_diff_eq!(yy_correlator(2, t).unwrap(), g(1) * g(1) - g(0) * g(2), epsilon = 1e-14);
        let mz = chain.magnetization.value;
        assert_abs_diff_eq!(
            zz_correlator(1, mz, t).unwrap(),
            16.0 / (3.0 * PI * PI),
            epsilon = 1e-10
        );

        let free = XYChain::new(XYParams::ground(0.4, 0.0).unwrap(), 2).unwrap();
        assert_abs_diff_eq!(xx_correlator(1, free.table()).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(yy_correlator(1, free.table()).unwrap(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            zz_correlator(1, free.magnetization.value, free.table()).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn missing_table_entries() {
        let t = GTable::compute(&critical_ising(), -1..=1, &QuadratureConfig::default()).unwrap();
        assert!(xx_correlator(1, &t).is_ok());
        assert_eq!(xx_correlator(3, &t), Err(Error::MissingGIndex(-2)));
        assert_eq!(yy_correlator(2, &t), Err(Error::MissingGIndex(2)));
        assert!(xx_correlator(0, &t).is_err());
    }

    #[test]
    fn polarized_pair_state() {
        let rho = build_pair_state(5, &XYParams::ground(0.7, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(rho.p_dd, 1.0, epsilon = 1e-10);
        for x in [rho.p_uu, rho.p_ud, rho.p_du, rho.c_inner, rho.c_outer] {
            assert_abs_diff_eq!(x, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn params_validation() {
        assert!(XYParams::ground(1.2, 1.0).is_err());
        assert!(XYParams::ground(0.5, -0.1).is_err());
        assert!(XYParams::new(0.5, 1.0, Temperature::Beta(0.0)).is_err());
        assert!(XYParams::new(0.5, 1.0, Temperature::Beta(2.0)).is_ok());
    }

    #[test]
    fn cache_is_shared() {
        let cache = GCache::new();
        let p = XYParams::ground(0.25, 0.75).unwrap();
        let cfg = QuadratureConfig::default();
        let a = GTable::compute_cached(&p, -2..=2, &cfg, &cache).unwrap();
        assert_eq!(cache.len(), 5);
        let b = GTable::compute_cached(&p, 0..=4, &cfg, &cache).unwrap();
        assert_eq!(cache.len(), 7);
        assert_eq!(a.get(1).unwrap(), b.get(1).unwrap());
        assert_eq!(b.range(), 0..=4);
    }
}
