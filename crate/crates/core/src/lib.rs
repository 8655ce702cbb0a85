//! Exact collective pure dephasing of two-fermion and two-qubit systems.
//!
//! A state written in the pointer basis of the collective coupling keeps its
//! populations; coherences between levels `m` and `n` pick up the factor
//! `exp(i (E_n - E_m) t) exp(-(L_m - L_n)^2 Gamma(t)) exp(-i (L_m^2 - L_n^2) r(t))`
//! where `Gamma`, `Delta` and `Theta` (with `r = Delta - Theta`) come from an
//! ohmic bosonic bath. On top of that the crate computes concurrence (both
//! the two-fermion and the Wootters two-qubit variant), l1 coherence and
//! linear entropy, and locates entanglement sudden death and birth.

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod measures;
pub mod numerics;
pub mod quadrature;

pub use analysis::{
    analyze, classify, detect_events, dfs_projector, saturation_entropy, time_series, Event, EventKind, Regime,
    RegimeReport, TimeSeries,
};
pub use channel::{bath_functions, dephasing_factors, evolve, BathFunctions, BathMode, BathParams, DephasingFactors};
pub use error::{Error, Result};
pub use hilbert::{named_state, pure_density, DensityMatrix, LevelSystem, NamedState, StateVector, SystemKind};
pub use measures::{coherence, concurrence, linear_entropy, pure_concurrence, SpinFlipConvention};
pub use numerics::ComplexMatrix;
