//! Hubble rate, the flat slow-roll comparison `|V''|` vs `H^2`, and the
//! negative-pressure parameters epsilon and eta.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::potential::PotentialSpec;

/// `|V''| / H^2` below this counts as slow roll.
pub const DEFAULT_PASS_THRESHOLD: f64 = 0.15;

/// Reduced Planck mass squared, `M_p^2 / 8pi`.
pub const REDUCED_PLANCK_MASS_SQ: f64 = 1.0 / (8.0 * PI);

/// `H^2 = (8 pi / 3) V` with `G = 1`.
pub fn hubble_sq(v: f64) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(domain("hubble_sq", format!("negative energy density {v}")));
    }
    Ok(8.0 * PI / 3.0 * v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowRollReport {
    pub phi: f64,
    pub v: f64,
    pub v_pp: f64,
    pub h_sq: f64,
    /// `|V''|`
    pub lhs: f64,
    /// `H^2`
    pub rhs: f64,
    pub ratio: f64,
    pub passes: bool,
}

impl SlowRollReport {
    pub fn passes_at(&self, threshold: f64) -> bool {
        self.ratio < threshold
    }
}

/// Compares `|V''(phi)|` with `H^2(V(phi))`. With `use_v1_only` the offset
/// is dropped from `V`.
pub fn slow_roll_check(spec: &PotentialSpec, phi: f64, use_v1_only: bool) -> Result<SlowRollReport> {
    let v = if use_v1_only { spec.v1(phi) } else { spec.v_total(phi) };
    let v_pp = spec.v1_derivatives(phi).1;
    let h_sq = hubble_sq(v)?;
    let lhs = v_pp.abs();
    let ratio = lhs / h_sq;
    Ok(SlowRollReport {
        phi,
        v,
        v_pp,
        h_sq,
        lhs,
        rhs: h_sq,
        ratio,
        passes: ratio < DEFAULT_PASS_THRESHOLD,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureParams {
    pub phi: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub m_tilde_sq: f64,
}

impl PressureParams {
    /// Both parameters strictly below one in magnitude.
    pub fn is_small(&self) -> bool {
        self.epsilon < 1.0 && self.eta.abs() < 1.0
    }
}

/// `epsilon = (M~^2 / 2) (V'/V)^2` and `eta = M~^2 V''/V`, evaluated on `V1`.
pub fn pressure_params(spec: &PotentialSpec, phi: f64) -> Result<PressureParams> {
    let v = spec.v1(phi);
    if v == 0.0 {
        return Err(Error::SingularPotential {
            op: "pressure_params",
            phi,
        });
    }
    let (d1, d2) = spec.v1_derivatives(phi);
    let m2 = REDUCED_PLANCK_MASS_SQ;
    Ok(PressureParams {
        phi,
        epsilon: 0.5 * m2 * (d1 / v).powi(2),
        eta: m2 * d2 / v,
        m_tilde_sq: m2,
    })
}
