//! Shared fixtures for the criterion benches.

use nuclab_core::potential::GapBrackets;
use nuclab_core::tunneling::{WaveFunctional, WaveKind, DEFAULT_UPPER_LIMIT};

/// Initial and final functionals at the published vacua.
pub fn published_functionals() -> (WaveFunctional, WaveFunctional) {
    (
        WaveFunctional::new(WaveKind::Initial, 0.5472, 0.041, DEFAULT_UPPER_LIMIT).expect("valid stiffness"),
        WaveFunctional::new(WaveKind::Final, 5.457, 0.041, DEFAULT_UPPER_LIMIT).expect("valid stiffness"),
    )
}

pub fn published_brackets() -> GapBrackets {
    GapBrackets::new(0.441, 0.5472, 5.457).expect("positive mass")
}
