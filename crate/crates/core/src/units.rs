//! Planck-normalized constants and the chaotic-inflation scale formulas.
//!
//! Everything here works in units with `hbar = c = G = M_p = 1`, so Planck
//! time and Planck length are also 1.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Electron mass in Planck masses.
pub const ELECTRON_MASS: f64 = 4.338e-20;

/// Effective tunneling mass, twice the electron mass.
pub const EFFECTIVE_MASS: f64 = 2.0 * ELECTRON_MASS;

/// Adopted inflaton field value where classical and quantum fluctuations match.
pub const DEFAULT_PHI_STAR: f64 = 0.99 * PI;

/// Inflaton mass in Planck masses used by the canonical parameter set.
pub const DEFAULT_INFLATON_MASS: f64 = 0.441;

/// Field values below this threshold count as weak string coupling.
pub const WEAK_COUPLING_THRESHOLD: f64 = -1.0;

/// The normalized unit set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckUnits {
    pub hbar: f64,
    pub c: f64,
    pub g: f64,
    pub m_p: f64,
    pub t_p: f64,
    pub l_p: f64,
    pub m_e: f64,
    pub m_star: f64,
}

pub const fn natural_units() -> PlanckUnits {
    PlanckUnits {
        hbar: 1.0,
        c: 1.0,
        g: 1.0,
        m_p: 1.0,
        t_p: 1.0,
        l_p: 1.0,
        m_e: ELECTRON_MASS,
        m_star: EFFECTIVE_MASS,
    }
}

/// Minimum initial field value for chaotic inflation, `sqrt(60 / 2pi)`.
pub fn chaotic_threshold() -> f64 {
    (60.0 / (2.0 * PI)).sqrt()
}

/// Field value where classical and quantum fluctuations are comparable,
/// `(3 / 16pi)^(1/4) / sqrt(m)`.
pub fn chaotic_phi_star(m: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(domain("chaotic_phi_star", format!("mass must be positive, got {m}")));
    }
    Ok((3.0 / (16.0 * PI)).powf(0.25) / m.sqrt())
}

/// Linear slow descent of the inflaton, `phi_0 - m t / sqrt(12 pi)`.
pub fn chaotic_trajectory(phi_0: f64, m: f64, t: f64) -> f64 {
    phi_0 - m / (12.0 * PI).sqrt() * t
}

/// Chaotic-inflation scales derived from one inflaton mass.
///
/// `phi_star_used` is configured independently of `phi_star_formula`; the
/// two are reported side by side and never substituted for each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaoticScales {
    pub m: f64,
    pub phi_0_threshold: f64,
    pub phi_star_formula: f64,
    pub phi_star_used: f64,
}

impl ChaoticScales {
    pub fn new(m: f64, phi_star_used: f64) -> Result<Self> {
        Ok(Self {
            m,
            phi_0_threshold: chaotic_threshold(),
            phi_star_formula: chaotic_phi_star(m)?,
            phi_star_used,
        })
    }
}

impl Default for ChaoticScales {
    fn default() -> Self {
        Self::new(DEFAULT_INFLATON_MASS, DEFAULT_PHI_STAR).expect("default mass is positive")
    }
}

/// Gauge coupling strength tied to the dilaton value, `alpha ~ e^phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringCoupling {
    pub value: f64,
    pub weak: bool,
}

pub fn string_coupling(phi: f64) -> StringCoupling {
    StringCoupling {
        value: phi.exp(),
        weak: phi < WEAK_COUPLING_THRESHOLD,
    }
}
