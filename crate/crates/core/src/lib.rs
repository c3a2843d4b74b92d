//! Numerics for false-vacuum nucleation of an inflationary universe.
//!
//! The crate covers a tilted sine-Gordon inflaton potential and its vacua,
//! slow-roll and negative-pressure diagnostics, Gaussian wave-functional
//! tunneling amplitudes, and a pure-kinetic k-essence fluid. All quantities
//! are in Planck units (`hbar = c = G = M_p = 1`).

pub mod error;
pub mod kessence;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod slowroll;
pub mod tunneling;
pub mod units;

pub use error::{Error, Result};
pub use kessence::{
    classify_regime, evolve_epsilon, fluid_diagnostics, DecayVariant, FluidDiagnostics, KEssenceModel,
    KEssenceState, Regime,
};
pub use potential::{
    classify_vacua, find_stationary_points, gap_brackets, GapBrackets, Interval, PotentialSpec, StationaryKind,
    StationaryPoint, VacuumPair,
};
pub use slowroll::{hubble_sq, pressure_params, slow_roll_check, PressureParams, SlowRollReport};
pub use tunneling::{
    analyze_tunneling, CoshGrouping, TunnelingInputs, TunnelingParams, TunnelingResult, WaveFunctional, WaveKind,
};
pub use units::{natural_units, ChaoticScales, PlanckUnits};
