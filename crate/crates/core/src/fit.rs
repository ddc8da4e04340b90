//! Decay-law fits of discord versus distance.
//!
//! Both families are `q(n) = a + b·f(n; c)` with `f = e^{−cn}` or `f = n^{−c}`.
//! The decay constant is optimized as `c = e^u` so it stays positive. Each fit
//! is a damped Gauss–Newton (Levenberg–Marquardt) run from four starting
//! decay constants, with `(a, b)` solved linearly for each start; the best
//! final point wins.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discord::{quantum_discord, DiscordMethod};
use crate::error::{Error, Result};
use crate::xy::{XYChain, XYParams};

const PARAMETERS: usize = 3;
const START_DECAYS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
const MAX_ITERATIONS: usize = 500;
const SSE_REL_TOL: f64 = 1e-12;
const GRADIENT_TOL: f64 = 1e-10;
const AIC_TIE: f64 = 1e-6;
/// Q(n = 1) below this leaves the range ratio undefined.
pub const RATIO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    samples: Vec<(usize, f64)>,
    pub provenance: String,
}

impl DecayProfile {
    /// Sorts by distance. Distances must be distinct and positive; discord
    /// values down to −1e-9 are clamped to zero.
    pub fn new(mut samples: Vec<(usize, f64)>, provenance: impl Into<String>) -> Result<Self> {
        samples.sort_by_key(|s| s.0);
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::domain("profile distances must be distinct"));
        }
        if samples.first().is_some_and(|s| s.0 == 0) {
            return Err(Error::domain("profile distances must be >= 1"));
        }
        for s in samples.iter_mut() {
            if !(s.1 >= -1e-9) || !s.1.is_finite() {
                return Err(Error::domain(format!("invalid discord {} at n = {}", s.1, s.0)));
            }
            s.1 = s.1.max(0.0);
        }
        Ok(Self {
            samples,
            provenance: provenance.into(),
        })
    }

    pub fn samples(&self) -> &[(usize, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayModel {
    Exponential,
    PowerLaw,
}

impl DecayModel {
    fn basis(self, n: f64, c: f64) -> f64 {
        match self {
            DecayModel::Exponential => (-c * n).exp(),
            DecayModel::PowerLaw => n.powf(-c),
        }
    }

    /// `∂f/∂c`.
    fn basis_dc(self, n: f64, c: f64) -> f64 {
        match self {
            DecayModel::Exponential => -n * (-c * n).exp(),
            DecayModel::PowerLaw => -n.ln() * n.powf(-c),
        }
    }

    pub fn evaluate(self, n: f64, a: f64, b: f64, c: f64) -> f64 {
        a + b * self.basis(n, c)
    }
}

impl std::fmt::Display for DecayModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DecayModel::Exponential => "exponential",
            DecayModel::PowerLaw => "power_law",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: DecayModel,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub sse: f64,
    pub aic: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Corrected Akaike score `m ln(sse/m) + 2km/(m − k − 1)`; infinite when
/// `m ≤ k + 1`.
pub fn corrected_aic(sse: f64, samples: usize) -> f64 {
    let m = samples as f64;
    let k = PARAMETERS as f64;
    if m <= k + 1.0 {
        return f64::INFINITY;
    }
    m * (sse / m).max(1e-300).ln() + 2.0 * k * m / (m - k - 1.0)
}

struct Problem<'a> {
    model: DecayModel,
    n: &'a [f64],
    q: &'a [f64],
}

impl Problem<'_> {
    fn sse(&self, p: &Vector3<f64>) -> f64 {
        let c = p[2].exp();
        self.n
            .iter()
            .zip(self.q)
            .map(|(&n, &q)| (q - self.model.evaluate(n, p[0], p[1], c)).powi(2))
            .sum()
    }

    /// Normal matrix `JᵀJ` and gradient `Jᵀr` for residuals `r = model − q`.
    fn normal_equations(&self, p: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>) {
        let c = p[2].exp();
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&n, &q) in self.n.iter().zip(self.q) {
            let f = self.model.basis(n, c);
            let row = Vector3::new(1.0, f, p[1] * self.model.basis_dc(n, c) * c);
            let r = p[0] + p[1] * f - q;
            jtj += row * row.transpose();
            jtr += row * r;
        }
        (jtj, jtr)
    }

    /// Least-squares `(a, b)` at fixed decay constant.
    fn linear_start(&self, c: f64) -> Vector3<f64> {
        let mut ata = Matrix2::zeros();
        let mut atq = Vector2::zeros();
        for (&n, &q) in self.n.iter().zip(self.q) {
            let row = Vector2::new(1.0, self.model.basis(n, c));
            ata += row * row.transpose();
            atq += row * q;
        }
        let ab = ata
            .lu()
            .solve(&atq)
            .filter(|v| v.iter().all(|x| x.is_finite()))
            .unwrap_or_else(|| Vector2::new(self.q.iter().sum::<f64>() / self.q.len() as f64, 0.0));
        Vector3::new(ab[0], ab[1], c.ln())
    }

    fn levenberg_marquardt(&self, start: Vector3<f64>) -> (Vector3<f64>, f64, bool, usize) {
        let mut p = start;
        let mut sse = self.sse(&p);
        let mut mu = -1.0;
        let mut converged = false;
        let mut iterations = 0;
        while iterations < MAX_ITERATIONS {
            iterations += 1;
            if sse == 0.0 {
                converged = true;
                break;
            }
            let (jtj, jtr) = self.normal_equations(&p);
            if jtr.norm() < GRADIENT_TOL {
                converged = true;
                break;
            }
            let scale = jtj.diagonal().max().max(f64::MIN_POSITIVE);
            if mu < 0.0 {
                mu = 1e-3;
            }
            let mut accepted = false;
            for _ in 0..60 {
                let mut damped = jtj;
                for i in 0..3 {
                    damped[(i, i)] += mu * jtj[(i, i)].max(1e-12 * scale);
                }
                let Some(step) = damped.cholesky().map(|ch| ch.solve(&(-jtr))) else {
                    mu *= 10.0;
                    continue;
                };
                let trial = p + step;
                let trial_sse = self.sse(&trial);
                if trial_sse.is_finite() && trial_sse < sse {
                    let rel = (sse - trial_sse) / sse;
                    p = trial;
                    sse = trial_sse;
                    mu = (mu / 3.0).max(1e-15);
                    accepted = true;
                    if rel < SSE_REL_TOL {
                        converged = true;
                    }
                    break;
                }
                mu *= 4.0;
            }
            if converged {
                break;
            }
            if !accepted {
                // No damping level decreases the objective: a stationary
                // point to working precision.
                converged = true;
                break;
            }
        }
        (p, sse, converged, iterations)
    }
}

fn fit(model: DecayModel, profile: &DecayProfile) -> Result<FitResult> {
    let m = profile.len();
    if m < PARAMETERS + 1 {
        return Err(Error::TooFewSamples {
            need: PARAMETERS + 1,
            got: m,
        });
    }
    let n: Vec<f64> = profile.samples().iter().map(|s| s.0 as f64).collect();
    let q = profile.values();
    let problem = Problem { model, n: &n, q: &q };

    let mut best: Option<(Vector3<f64>, f64, bool, usize)> = None;
    let mut total_iterations = 0;
    for c0 in START_DECAYS {
        let start = problem.linear_start(c0);
        let (p, sse, converged, iterations) = problem.levenberg_marquardt(start);
        total_iterations += iterations;
        let better = match &best {
            None => true,
            Some(b) => sse < b.1,
        };
        if better && sse.is_finite() {
            best = Some((p, sse, converged, iterations));
        }
    }
    let (p, sse, converged, _) = best.ok_or_else(|| Error::Consistency("every fit start diverged".into()))?;
    Ok(FitResult {
        model,
        a: p[0],
        b: p[1],
        c: p[2].exp(),
        sse,
        aic: corrected_aic(sse, m),
        converged,
        iterations: total_iterations,
    })
}

/// Least-squares fit of `a + b e^{−cn}`.
pub fn fit_exponential(profile: &DecayProfile) -> Result<FitResult> {
    fit(DecayModel::Exponential, profile)
}

/// Least-squares fit of `a + b n^{−c}`.
pub fn fit_power_law(profile: &DecayProfile) -> Result<FitResult> {
    fit(DecayModel::PowerLaw, profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preference {
    Exponential,
    PowerLaw,
    Inconclusive,
}

impl std::fmt::Display for Preference {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Preference::Exponential => "exponential",
            Preference::PowerLaw => "power_law",
            Preference::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSelection {
    pub exponential: FitResult,
    pub power_law: FitResult,
    pub preferred: Preference,
}

/// Fits both families and prefers the lower corrected AIC.
pub fn select_model(profile: &DecayProfile) -> Result<ModelSelection> {
    let exponential = fit_exponential(profile)?;
    let power_law = fit_power_law(profile)?;
    let diff = exponential.aic - power_law.aic;
    let preferred = if !diff.is_finite() || diff.abs() < AIC_TIE {
        Preference::Inconclusive
    } else if diff < 0.0 {
        Preference::Exponential
    } else {
        Preference::PowerLaw
    };
    Ok(ModelSelection {
        exponential,
        power_law,
        preferred,
    })
}

/// `Σₙ Q(n) / (M · Q(1))` for `q = [Q(1), …, Q(M)]`.
pub fn range_ratio(q: &[f64]) -> Result<f64> {
    let first = *q.first().ok_or(Error::TooFewSamples { need: 1, got: 0 })?;
    if !(first > RATIO_FLOOR) {
        return Err(Error::UndefinedRatio(first));
    }
    Ok(q.iter().sum::<f64>() / (q.len() as f64 * first))
}

/// Discord of the XY reduced states at distances `1..=n_max`.
///
/// Uses the σˣ-basis closed form; states violating `|gxx| ≥ |gyy|` fall back
/// to the optimizer.
pub fn xy_discord_profile(params: &XYParams, n_max: usize, tol: f64) -> Result<DecayProfile> {
    let chain = XYChain::with_config(*params, n_max, &crate::QuadratureConfig::with_tolerance(tol))?;
    let samples = (1..=n_max)
        .map(|n| {
            let rho = chain.pair_state(n)?;
            let report = match quantum_discord(&rho, DiscordMethod::ClosedForm) {
                Err(Error::XValidity { .. }) => quantum_discord(&rho, DiscordMethod::Optimized),
                other => other,
            }?;
            Ok((n, report.discord))
        })
        .collect::<Result<Vec<_>>>()?;
    DecayProfile::new(samples, format!("xy gamma={} lambda={}", params.gamma, params.lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub gamma: f64,
    pub lambda: f64,
    /// `None` where Q(1) vanishes.
    pub ratio: Option<f64>,
}

/// Range ratios over a `(γ, λ)` grid in row-major order (γ outer).
pub fn heatmap_scan(gammas: &[f64], lambdas: &[f64], m: usize, tol: f64) -> Result<Vec<HeatmapCell>> {
    if m == 0 {
        return Err(Error::domain("range ratio needs M >= 1"));
    }
    let cells: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&g| lambdas.iter().map(move |&l| (g, l)))
        .collect();
    cells
        .par_iter()
        .map(|&(gamma, lambda)| {
            let params = XYParams::ground(gamma, lambda)?;
            let profile = xy_discord_profile(&params, m, tol)?;
            let ratio = match range_ratio(&profile.values()) {
                Ok(r) => Some(r),
                Err(Error::UndefinedRatio(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(HeatmapCell { gamma, lambda, ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn synthetic(model: DecayModel, a: f64, b: f64, c: f64, ns: std::ops::RangeInclusive<usize>) -> DecayProfile {
        let samples = ns.map(|n| (n, model.evaluate(n as f64, a, b, c))).collect();
        DecayProfile::new(samples, "synthetic").unwrap()
    }

    #[test]
    fn exponential_round_trip() {
        let p = synthetic(DecayModel::Exponential, 0.1, 0.5, 0.3, 1..=10);
        let f = fit_exponential(&p).unwrap();
        assert_abs_diff_eq!(f.a, 0.1, epsilon = 1e-8);
        assert_abs_diff_eq!(f.b, 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(f.c, 0.3, epsilon = 1e-8);
        assert!(f.sse < 1e-16);
        assert!(f.converged);
    }

    #[test]
    fn constant_profile() {
        let p = DecayProfile::new((1..=8).map(|n| (n, 0.2)).collect(), "flat").unwrap();
        let f = fit_exponential(&p).unwrap();
        assert_abs_diff_eq!(f.a + f.b * (-f.c).exp(), 0.2, epsilon = 1e-10);
        assert!(f.sse < 1e-20);
        assert_abs_diff_eq!(range_ratio(&p.values()).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn power_law_round_trips() {
        let f = fit_power_law(&synthetic(DecayModel::PowerLaw, 0.0, 1.0, 2.0, 1..=10)).unwrap();
        assert_abs_diff_eq!(f.a, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(f.b, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(f.c, 2.0, epsilon = 1e-8);
        let f = fit_power_law(&synthetic(DecayModel::PowerLaw, 0.05, 0.3, 1.0, 1..=12)).unwrap();
        assert_abs_diff_eq!(f.a, 0.05, epsilon = 1e-6);
        assert_abs_diff_eq!(f.b, 0.3, epsilon = 1e-6);
        assert_abs_diff_eq!(f.c, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn too_few_samples() {
        let p = synthetic(DecayModel::Exponential, 0.0, 1.0, 1.0, 1..=3);
        assert_eq!(fit_exponential(&p), Err(Error::TooFewSamples { need: 4, got: 3 }));
    }

    #[test]
    fn selection_on_exact_data() {
        let e = select_model(&synthetic(DecayModel::Exponential, 0.02, 0.6, 0.7, 1..=10)).unwrap();
        assert_eq!(e.preferred, Preference::Exponential);
        let p = select_model(&synthetic(DecayModel::PowerLaw, 0.02, 0.6, 1.3, 1..=10)).unwrap();
        assert_eq!(p.preferred, Preference::PowerLaw);
    }

    #[test]
    fn range_ratio_values() {
        let mut q = vec![0.0; 10];
        q[0] = 1.0;
        assert_abs_diff_eq!(range_ratio(&q).unwrap(), 0.1, epsilon = 1e-15);
        assert!(matches!(range_ratio(&[0.0, 0.1]), Err(Error::UndefinedRatio(_))));
        assert!(range_ratio(&[]).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(DecayProfile::new(vec![(1, 0.1), (1, 0.2)], "").is_err());
        assert!(DecayProfile::new(vec![(0, 0.1)], "").is_err());
        assert!(DecayProfile::new(vec![(1, -1e-6)], "").is_err());
        let p = DecayProfile::new(vec![(3, 0.1), (1, -1e-10), (2, 0.2)], "").unwrap();
        assert_eq!(p.samples(), &[(1, 0.0), (2, 0.2), (3, 0.1)]);
    }

    #[test]
    fn masked_heatmap_cell() {
        let cells = heatmap_scan(&[1.0], &[0.0], 10, 1e-10).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].ratio, None);
    }

    #[test]
    fn fit_improves_on_every_start() {
        let samples: Vec<(usize, f64)> = (1..=10)
            .map(|n| {
                (
                    n,
                    0.02 + 0.4 / (n as f64).powf(0.8) + 3e-4 * ((n * 37 % 7) as f64 - 3.0),
                )
            })
            .collect();
        let profile = DecayProfile::new(samples, "noisy").unwrap();
        let n: Vec<f64> = profile.samples().iter().map(|s| s.0 as f64).collect();
        let q = profile.values();
        for model in [DecayModel::Exponential, DecayModel::PowerLaw] {
            let problem = Problem { model, n: &n, q: &q };
            let best_start = START_DECAYS
                .iter()
                .map(|&c| problem.sse(&problem.linear_start(c)))
                .fold(f64::INFINITY, f64::min);
            let result = fit(model, &profile).unwrap();
            assert!(result.sse <= best_start, "{model}: {} > {best_start}", result.sse);
        }
    }
}
