//! Open XXZ chain with opposing boundary fields,
//! `H = −(J/2) Σ (σˣσˣ + σʸσʸ) − (Δ/2) Σ σᶻσᶻ − h(σ₁ᶻ − σ_Nᶻ)`, `J = 1`.
//!
//! Basis configurations are `u32` words: site `k` (1-based) is bit `k − 1`, and
//! a set bit is spin up. The Hamiltonian conserves the number of up spins, so
//! the ground state is found sector by sector.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discord::{
    quantum_discord_measuring, CorrelationReport, DiscordMethod, MeasuredSide, XStateDensity, STATE_TOL,
};
use crate::error::{Error, Result};
use crate::fit::DecayProfile;
use crate::lanczos::{lowest_eigenpair, LanczosConfig, LinearOperator};

pub const DEFAULT_MAX_SITES: usize = 24;

/// Relative window within which two sector energies count as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Residual every returned ground state must meet.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XXZSystem {
    pub n_sites: usize,
    pub delta: f64,
    pub h_field: f64,
    pub j_exchange: f64,
}

impl XXZSystem {
    pub fn new(n_sites: usize, delta: f64, h_field: f64) -> Result<Self> {
        Self::with_max_sites(n_sites, delta, h_field, DEFAULT_MAX_SITES)
    }

    pub fn with_max_sites(n_sites: usize, delta: f64, h_field: f64, max_sites: usize) -> Result<Self> {
        if n_sites < 2 || n_sites > max_sites.min(32) {
            return Err(Error::domain(format!(
                "site count {n_sites} outside [2, {}]",
                max_sites.min(32)
            )));
        }
        if !(h_field >= 0.0) || !h_field.is_finite() || !delta.is_finite() {
            return Err(Error::domain("need finite delta and h >= 0"));
        }
        Ok(Self {
            n_sites,
            delta,
            h_field,
            j_exchange: 1.0,
        })
    }

    fn diagonal(&self, config: u32) -> f64 {
        let spin = |k: usize| if config >> k & 1 == 1 { 1.0 } else { -1.0 };
        let mut diag = 0.0;
        for k in 0..self.n_sites - 1 {
            diag += -0.5 * self.delta * spin(k) * spin(k + 1);
        }
        diag + -self.h_field * (spin(0) - spin(self.n_sites - 1))
    }
}

/// `h_c = ½ √(Δ² − 1)`, separating the ferromagnetic and kink ground states.
pub fn critical_field(delta: f64) -> Result<f64> {
    if !(delta >= 1.0) {
        return Err(Error::domain(format!("critical field needs delta >= 1, got {delta}")));
    }
    Ok(0.5 * (delta * delta - 1.0).sqrt())
}

/// Configurations with a fixed number of up spins, in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    pub n_sites: usize,
    pub n_up: usize,
    pub states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(n_sites: usize, n_up: usize) -> Result<Self> {
        if n_up > n_sites || n_sites > 32 {
            return Err(Error::domain(format!(
                "no sector with {n_up} up spins on {n_sites} sites"
            )));
        }
        let mut states = Vec::new();
        if n_up == 0 {
            states.push(0);
        } else {
            // Gosper's hack enumerates same-popcount words in increasing order.
            let limit = 1u64 << n_sites;
            let mut x: u64 = (1u64 << n_up) - 1;
            while x < limit {
                states.push(x as u32);
                let c = x & x.wrapping_neg();
                let r = x + c;
                x = (((r ^ x) >> 2) / c) | r;
            }
        }
        Ok(Self { n_sites, n_up, states })
    }

    /// Total `Σ σᶻ` (up minus down).
    pub fn sz_total(&self) -> i32 {
        2 * self.n_up as i32 - self.n_sites as i32
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index(&self, config: u32) -> Option<usize> {
        self.states.binary_search(&config).ok()
    }
}

/// Symmetric matrix in compressed-row layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let span = self.row_ptr[row]..self.row_ptr[row + 1];
        self.col_idx[span.clone()]
            .iter()
            .zip(&self.values[span])
            .filter(|(&c, _)| c == col)
            .map(|(_, &v)| v)
            .sum()
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for row in 0..self.dim {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                m[(row, self.col_idx[k])] += self.values[k];
            }
        }
        m
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let row = |(r, out): (usize, &mut f64)| {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        };
        if self.dim >= 4096 {
            y.par_iter_mut().enumerate().for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }
}

/// Hamiltonian block for one magnetization sector. Column indices within a
/// row are sorted, diagonal included.
pub fn build_sector_hamiltonian(sys: &XXZSystem, sector: &SectorBasis) -> CsrMatrix {
    let mut row_ptr = Vec::with_capacity(sector.dim() + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    row_ptr.push(0);
    for &config in &sector.states {
        let mut row: Vec<(usize, f64)> = vec![(sector.index(config).expect("own state"), sys.diagonal(config))];
        for k in 0..sys.n_sites - 1 {
            let pair = (config >> k) & 0b11;
            if pair == 0b01 || pair == 0b10 {
                let partner = config ^ (0b11 << k);
                let col = sector.index(partner).expect("hop stays in sector");
                row.push((col, -sys.j_exchange));
            }
        }
        row.sort_by_key(|&(c, _)| c);
        for (c, v) in row {
            col_idx.push(c);
            values.push(v);
        }
        row_ptr.push(col_idx.len());
    }
    CsrMatrix {
        dim: sector.dim(),
        row_ptr,
        col_idx,
        values,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorEnergy {
    pub sz_total: i32,
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub system: XXZSystem,
    pub energy: f64,
    pub sector: i32,
    pub basis: SectorBasis,
    pub amplitudes: Vec<f64>,
    pub residual_norm: f64,
    /// Every sector whose lowest energy lies within the degeneracy window,
    /// the selected one included.
    pub degeneracy: Vec<SectorEnergy>,
    /// Lowest energy of every sector, by ascending `sz_total`.
    pub sector_energies: Vec<SectorEnergy>,
}

impl GroundStateResult {
    pub fn is_degenerate(&self) -> bool {
        self.degeneracy.len() > 1
    }
}

struct SectorSolution {
    basis: SectorBasis,
    energy: f64,
    vector: Vec<f64>,
    residual: f64,
}

fn solve_sector(sys: &XXZSystem, n_up: usize, cfg: &LanczosConfig) -> Result<SectorSolution> {
    let basis = SectorBasis::new(sys.n_sites, n_up)?;
    let h = build_sector_hamiltonian(sys, &basis);
    let start = vec![1.0; basis.dim()];
    let pair = lowest_eigenpair(&h, &start, cfg)?;
    if pair.residual > RESIDUAL_TOL {
        return Err(Error::Eigensolver {
            residual: pair.residual,
            iterations: pair.iterations,
        });
    }
    Ok(SectorSolution {
        basis,
        energy: pair.value,
        vector: pair.vector,
        residual: pair.residual,
    })
}

pub fn ground_state(sys: &XXZSystem) -> Result<GroundStateResult> {
    ground_state_with(sys, &LanczosConfig::default())
}

/// Lowest state over all magnetization sectors. Ties within the degeneracy
/// window go to the smaller `|Sz|`, then the smaller `Sz`.
pub fn ground_state_with(sys: &XXZSystem, cfg: &LanczosConfig) -> Result<GroundStateResult> {
    let solutions = (0..=sys.n_sites)
        .into_par_iter()
        .map(|n_up| solve_sector(sys, n_up, cfg))
        .collect::<Result<Vec<_>>>()?;

    let e_min = solutions.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
    let window = DEGENERACY_TOL * e_min.abs().max(1.0);
    let mut degenerate: Vec<&SectorSolution> = solutions.iter().filter(|s| s.energy - e_min <= window).collect();
    degenerate.sort_by_key(|s| (s.basis.sz_total().abs(), s.basis.sz_total()));
    let chosen = degenerate[0];

    let sector_energies = solutions
        .iter()
        .map(|s| SectorEnergy {
            sz_total: s.basis.sz_total(),
            energy: s.energy,
        })
        .collect();
    Ok(GroundStateResult {
        system: *sys,
        energy: chosen.energy,
        sector: chosen.basis.sz_total(),
        basis: chosen.basis.clone(),
        amplitudes: chosen.vector.clone(),
        residual_norm: chosen.residual,
        degeneracy: degenerate
            .iter()
            .map(|s| SectorEnergy {
                sz_total: s.basis.sz_total(),
                energy: s.energy,
            })
            .collect(),
        sector_energies,
    })
}

/// Two-site reduced density operator of sites `site_i < site_j` (1-based),
/// qubit order `(site_i, site_j)`.
pub fn pair_reduced_density(gs: &GroundStateResult, site_i: usize, site_j: usize) -> Result<XStateDensity> {
    let n = gs.basis.n_sites;
    if !(1 <= site_i && site_i < site_j && site_j <= n) {
        return Err(Error::domain(format!("invalid pair ({site_i}, {site_j}) on {n} sites")));
    }
    let (bi, bj) = (site_i - 1, site_j - 1);
    let mask = !((1u32 << bi) | (1u32 << bj));
    // Two-qubit index: 0 = ↑↑, 1 = ↑↓, 2 = ↓↑, 3 = ↓↓.
    let local = |c: u32| 2 * (1 - (c >> bi & 1)) as usize + (1 - (c >> bj & 1)) as usize;
    let embed = |c: u32, k: usize| {
        let a = (1 - (k / 2)) as u32;
        let b = (1 - (k % 2)) as u32;
        (c & mask) | (a << bi) | (b << bj)
    };
    let mut rho = [[0.0f64; 4]; 4];
    for (&config, &amp) in gs.basis.states.iter().zip(&gs.amplitudes) {
        let row = local(config);
        for (col, entry) in rho[row].iter_mut().enumerate() {
            if let Some(idx) = gs.basis.index(embed(config, col)) {
                *entry += amp * gs.amplitudes[idx];
            }
        }
    }
    let trace: f64 = (0..4).map(|k| rho[k][k]).sum();
    if (trace - 1.0).abs() > STATE_TOL {
        return Err(Error::Consistency(format!("pair trace {trace}")));
    }
    for (r, c) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
        if rho[r][c].abs().max(rho[c][r].abs()) > STATE_TOL {
            return Err(Error::Consistency(format!(
                "reduced state has non-X entry {:e} at ({r}, {c})",
                rho[r][c]
            )));
        }
    }
    let state = XStateDensity {
        p_uu: rho[0][0],
        p_ud: rho[1][1],
        p_du: rho[2][2],
        p_dd: rho[3][3],
        c_outer: 0.5 * (rho[0][3] + rho[3][0]),
        c_inner: 0.5 * (rho[1][2] + rho[2][1]),
    };
    state.validate()?;
    Ok(state)
}

/// `min(9, N − N/2 − 2)`, at least 1: the far spin of every pair stays at
/// least one site away from the boundary spin `N`.
pub fn default_profile_range(n_sites: usize) -> usize {
    (n_sites - n_sites / 2).saturating_sub(2).clamp(1, 9)
}

#[derive(Debug, Clone)]
pub struct XXZProfile {
    pub profile: DecayProfile,
    pub reports: Vec<CorrelationReport>,
    pub energy: f64,
    pub sector: i32,
    pub degenerate: bool,
}

/// Discord of the pairs `(N/2, N/2 + n)` for `n = 1..=n_max`.
pub fn discord_profile(sys: &XXZSystem, n_max: usize, side: MeasuredSide) -> Result<XXZProfile> {
    let gs = ground_state(sys)?;
    discord_profile_from(&gs, n_max, side)
}

pub fn discord_profile_from(gs: &GroundStateResult, n_max: usize, side: MeasuredSide) -> Result<XXZProfile> {
    let n = gs.basis.n_sites;
    let anchor = n / 2;
    if n_max == 0 || n_max > n - anchor {
        return Err(Error::domain(format!("n_max = {n_max} outside [1, {}]", n - anchor)));
    }
    let reports = (1..=n_max)
        .into_par_iter()
        .map(|d| {
            let rho = pair_reduced_density(gs, anchor, anchor + d)?;
            quantum_discord_measuring(&rho, DiscordMethod::Optimized, side)
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = reports.iter().enumerate().map(|(k, r)| (k + 1, r.discord)).collect();
    let s = &gs.system;
    let profile = DecayProfile::new(
        samples,
        format!("xxz N={} delta={} h={} side={side:?}", s.n_sites, s.delta, s.h_field),
    )?;
    Ok(XXZProfile {
        profile,
        reports,
        energy: gs.energy,
        sector: gs.sector,
        degenerate: gs.is_degenerate(),
    })
}
