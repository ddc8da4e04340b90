//! Pairwise quantum discord as a function of distance in spin-1/2 chains.
//!
//! * [`xy`]: exact thermodynamic-limit correlators of the transverse-field XY
//!   chain and the two-site reduced state they define.
//! * [`discord`]: entropies, mutual information, classical correlation and
//!   discord of two-qubit states.
//! * [`xxz`]: exact diagonalization of the open XXZ chain with opposing
//!   boundary fields, and reduced states of distant pairs.
//! * [`fit`]: exponential and power-law decay fits, model selection and the
//!   range-ratio diagnostic.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discord;
pub mod error;
pub mod fit;
pub mod lanczos;
pub mod quadrature;
pub mod xxz;
pub mod xy;

pub use discord::{
    binary_entropy, classical_correlation_closed_form, classical_correlation_optimized, conditional_entropy_after,
    mutual_information, pair_spectrum, quantum_discord, quantum_discord_general, quantum_discord_measuring,
    von_neumann_entropy, CorrelationReport, DiscordMethod, MeasuredSide, Measurement, TwoQubitState, XStateDensity,
};
pub use error::{Error, Result};
pub use fit::{
    fit_exponential, fit_power_law, heatmap_scan, range_ratio, select_model, xy_discord_profile, DecayModel,
    DecayProfile, FitResult, HeatmapCell, ModelSelection, Preference,
};
pub use quadrature::{Estimate, QuadratureConfig};
pub use xxz::{
    critical_field, discord_profile, ground_state, pair_reduced_density, GroundStateResult, SectorBasis, XXZProfile,
    XXZSystem,
};
pub use xy::{build_pair_state, GTable, PairObservables, Temperature, XYChain, XYParams};
