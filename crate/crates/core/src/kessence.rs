//! Pure-kinetic k-essence with `p = V F(X)` and `F` expanded to second order
//! about its extremum `X0`:
//!
//! ```text
//! F(X) = F0 + F2 (X - X0)^2
//! ```
//!
//! Near the extremum the offset `eps = X - X0` decays exponentially while
//! the potential is held at its averaged value `V0`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::ode::rk4;
use crate::slowroll::hubble_sq;

/// Averaged potential along the decay, midpoint of 0.75 to 0.8.
pub const DEFAULT_V0: f64 = 0.775;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KEssenceModel {
    pub f0: f64,
    pub f2: f64,
    pub x0: f64,
    pub v0: f64,
}

impl Default for KEssenceModel {
    fn default() -> Self {
        Self {
            f0: -1.0,
            f2: 1.0,
            x0: 1.0,
            v0: DEFAULT_V0,
        }
    }
}

impl KEssenceModel {
    pub fn validate(&self) -> Result<()> {
        if ![self.f0, self.f2, self.x0, self.v0].iter().all(|v| v.is_finite()) {
            return Err(domain("KEssenceModel", "parameters must be finite"));
        }
        if !(self.x0 > 0.0) {
            return Err(domain("KEssenceModel", format!("x0 must be positive, got {}", self.x0)));
        }
        if !(self.v0 > 0.0) {
            return Err(domain("KEssenceModel", format!("v0 must be positive, got {}", self.v0)));
        }
        Ok(())
    }
}

/// `F` and its first two derivatives at one `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FExpansion {
    pub f: f64,
    pub f_x: f64,
    pub f_xx: f64,
}

pub fn f_eval(model: &KEssenceModel, x: f64) -> FExpansion {
    let d = x - model.x0;
    FExpansion {
        f: model.f0 + model.f2 * d * d,
        f_x: 2.0 * model.f2 * d,
        f_xx: 2.0 * model.f2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidDiagnostics {
    pub p: f64,
    pub rho: f64,
    /// `None` when `rho` vanishes.
    pub w: Option<f64>,
    /// `F_X / (F_X + 2X F_XX)`; `None` when the denominator vanishes.
    pub cs2_exact: Option<f64>,
    /// `1 / (1 + 4 X0 (1 + X0 / 2 eps))` with `eps = X - X0`.
    pub cs2_printed: Option<f64>,
    /// `cs2_exact` lies outside `[0, 1]`.
    pub causality_violation: bool,
}

pub fn fluid_diagnostics(model: &KEssenceModel, x: f64, v: f64) -> Result<FluidDiagnostics> {
    if !(v > 0.0) {
        return Err(domain("fluid_diagnostics", format!("potential must be positive, got {v}")));
    }
    let FExpansion { f, f_x, f_xx } = f_eval(model, x);
    let kinetic = 2.0 * x * f_x - f;
    let p = v * f;
    let rho = v * kinetic;
    // V cancels in w, so form the ratio from F directly
    let w = (kinetic != 0.0).then(|| f / kinetic);
    let sound_den = f_x + 2.0 * x * f_xx;
    let cs2_exact = (sound_den != 0.0).then(|| f_x / sound_den);
    let eps = x - model.x0;
    let cs2_printed = {
        let c = 1.0 / (1.0 + 4.0 * model.x0 * (1.0 + model.x0 / (2.0 * eps)));
        c.is_finite().then_some(c)
    };
    Ok(FluidDiagnostics {
        p,
        rho,
        w,
        cs2_exact,
        cs2_printed,
        causality_violation: cs2_exact.is_some_and(|c| !(0.0..=1.0).contains(&c)),
    })
}

/// Which decay constant drives `eps' = -k eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecayVariant {
    /// `k = 3H` with `H^2 = (8 pi / 3) V0`.
    #[default]
    Exact,
    /// `k = 8 pi V0`, the exponent as printed in the closed-form decay.
    Printed,
}

impl DecayVariant {
    pub fn rate(self, v0: f64) -> Result<f64> {
        match self {
            Self::Exact => Ok(3.0 * hubble_sq(v0)?.sqrt()),
            Self::Printed => Ok(8.0 * PI * v0),
        }
    }
}

impl std::str::FromStr for DecayVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Self::Exact),
            "paper" => Ok(Self::Printed),
            other => Err(format!("unknown variant `{other}` (expected exact or paper)")),
        }
    }
}

impl std::fmt::Display for DecayVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Printed => "paper",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KEssenceState {
    pub t: f64,
    pub x: f64,
    pub eps: f64,
}

/// `eps0 exp(-k t)`.
pub fn epsilon_closed_form(model: &KEssenceModel, eps0: f64, t: f64, variant: DecayVariant) -> Result<f64> {
    Ok(eps0 * (-variant.rate(model.v0)? * t).exp())
}

/// Integrates `eps' = -k eps` with fixed-step RK4 from `t = 0` to `t_end`.
pub fn evolve_epsilon(
    model: &KEssenceModel,
    eps0: f64,
    t_end: f64,
    steps: usize,
    variant: DecayVariant,
) -> Result<Vec<KEssenceState>> {
    const OP: &str = "evolve_epsilon";
    if !eps0.is_finite() {
        return Err(domain(OP, "initial offset must be finite"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(domain(OP, format!("t_end must be positive, got {t_end}")));
    }
    if steps < 16 {
        return Err(domain(OP, format!("need at least 16 steps, got {steps}")));
    }
    let k = variant.rate(model.v0)?;
    let h = t_end / steps as f64;
    Ok(rk4(|_, eps| -k * eps, 0.0, eps0, h, steps)
        .into_iter()
        .map(|(t, eps)| KEssenceState {
            t,
            x: model.x0 + eps,
            eps,
        })
        .collect())
}

/// `eps_dot + k eps`, zero along an exact solution of the decay law.
pub fn decay_law_residual(model: &KEssenceModel, variant: DecayVariant, eps: f64, eps_dot: f64) -> Result<f64> {
    Ok(eps_dot + variant.rate(model.v0)? * eps)
}

/// Homogeneous field equation
/// `(F_X + 2X F_XX) phi'' + 3H F_X phi' + (2X F_X - F) V_phi / V` with `X = phi'^2 / 2`.
pub fn field_equation_residual(
    model: &KEssenceModel,
    phi_ddot: f64,
    phi_dot: f64,
    h: f64,
    v: f64,
    v_phi: f64,
) -> Result<f64> {
    let x = 0.5 * phi_dot * phi_dot;
    let FExpansion { f, f_x, f_xx } = f_eval(model, x);
    let force = if v_phi == 0.0 {
        0.0
    } else if v == 0.0 {
        return Err(Error::SingularPotential {
            op: "field_equation_residual",
            phi: f64::NAN,
        });
    } else {
        (2.0 * x * f_x - f) * v_phi / v
    };
    Ok((f_x + 2.0 * x * f_xx) * phi_ddot + 3.0 * h * f_x * phi_dot + force)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Regime {
    Radiation,
    DarkMatter,
    DarkEnergy,
    Intermediate,
    Unclassifiable,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Self::Radiation => "radiation-like",
            Self::DarkMatter => "dark-matter-like",
            Self::DarkEnergy => "dark-energy-like",
            Self::Intermediate => "intermediate",
            Self::Unclassifiable => "unclassifiable",
        }
    }
}

/// Half-widths of the bands around `w = 1/3`, `0`, `-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeBands {
    pub radiation: f64,
    pub dark_matter: f64,
    pub dark_energy: f64,
}

impl Default for RegimeBands {
    fn default() -> Self {
        Self {
            radiation: 0.1,
            dark_matter: 0.1,
            dark_energy: 0.1,
        }
    }
}

pub fn classify_regime(diag: &FluidDiagnostics) -> Regime {
    classify_regime_with(diag, &RegimeBands::default())
}

pub fn classify_regime_with(diag: &FluidDiagnostics, bands: &RegimeBands) -> Regime {
    let Some(w) = diag.w.filter(|w| w.is_finite()) else {
        return Regime::Unclassifiable;
    };
    if (w - 1.0 / 3.0).abs() < bands.radiation {
        Regime::Radiation
    } else if w.abs() < bands.dark_matter {
        Regime::DarkMatter
    } else if (w + 1.0).abs() < bands.dark_energy {
        Regime::DarkEnergy
    } else {
        Regime::Intermediate
    }
}
