//! Gaussian wave-functional tunneling between the false and true vacuum.
//!
//! The field functional is reduced to a single collective mode amplitude
//! `phi`, so functional derivatives become ordinary derivatives in `phi` and
//! functional integrals become one-dimensional quadratures.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::potential::{GapBrackets, PotentialSpec};
use crate::quad::{integrate, integrate_to_infinity, QuadOptions};
use crate::slowroll::hubble_sq;
use crate::units::EFFECTIVE_MASS;

/// Default upper amplitude limit for the wave-functional normalization,
/// the height of the thin-wall box.
pub const DEFAULT_UPPER_LIMIT: f64 = 2.0 * PI;

/// Default displacement of the intermediate configuration above the false vacuum.
pub const DEFAULT_EPSILON_PLUS: f64 = 1e-3;

/// A stored normalization constant must reproduce unit norm to this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-9;

const SMALL_K: f64 = 1e-12;

/// `sqrt(2/pi) sin(k L / 2) / k`, the transform of a unit box of width `L`.
pub fn thin_wall_fourier(k: f64, length: f64) -> f64 {
    if k.abs() < SMALL_K {
        (2.0 / PI).sqrt() * length / 2.0
    } else {
        (2.0 / PI).sqrt() * (k * length / 2.0).sin() / k
    }
}

/// Box profile of width `length` and height `height` in mode space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinWallBasis {
    pub length: f64,
    pub height: f64,
}

impl ThinWallBasis {
    pub fn new(length: f64, height: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(domain("ThinWallBasis", format!("length must be positive, got {length}")));
        }
        Ok(Self { length, height })
    }

    pub fn amplitude(&self, k: f64) -> f64 {
        thin_wall_fourier(k, self.length)
    }

    /// Inverse transform truncated to `|k| <= k_max`, trapezoid rule on `2 n`
    /// cells. Inside the wall this approaches `height`, outside it approaches 0.
    pub fn profile(&self, x: f64, k_max: f64, n: usize) -> f64 {
        let dk = k_max / n as f64;
        // integrand is even in k, so fold onto [0, k_max]
        let mut sum = 0.5 * self.amplitude(0.0);
        for i in 1..n {
            let k = i as f64 * dk;
            sum += self.amplitude(k) * (k * x).cos();
        }
        sum += 0.5 * self.amplitude(k_max) * (k_max * x).cos();
        self.height / (2.0 * PI).sqrt() * 2.0 * sum * dk
    }
}

impl Default for ThinWallBasis {
    fn default() -> Self {
        Self {
            length: 1.0 / 0.041,
            height: 2.0 * PI,
        }
    }
}

/// Saturated Bogomol'nyi bound on the Euclidean Lagrangian with vanishing
/// topological charge, `(phi_0 - phi_c)^2 {} / 2`.
pub fn euclidean_action(phi_0: f64, phi_c: f64, brackets: &GapBrackets) -> f64 {
    let d = phi_0 - phi_c;
    0.5 * d * d * brackets.bracket_total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub gamma: f64,
    /// Initial energy density `60 m^2 / 4pi`.
    pub rho_i: f64,
    /// `-(3/8) rho_i`
    pub s_i: f64,
    /// The exponential overflowed and `gamma` is saturated at `f64::MAX`.
    pub overflow: bool,
}

/// Bubble nucleation rate `A exp(-S_b + S_i)`.
pub fn decay_rate_gamma(s_b: f64, m: f64, prefactor_a: f64) -> Result<DecayRate> {
    if !(prefactor_a > 0.0) {
        return Err(domain("decay_rate_gamma", format!("prefactor must be positive, got {prefactor_a}")));
    }
    let rho_i = 60.0 / (4.0 * PI) * m * m;
    let s_i = -0.375 * rho_i;
    let gamma = prefactor_a * (-s_b + s_i).exp();
    let overflow = gamma.is_infinite();
    Ok(DecayRate {
        gamma: if overflow { f64::MAX } else { gamma },
        rho_i,
        s_i,
        overflow,
    })
}

/// Pair density per unit length, `sqrt(M^2 + E^2 / H^2) exp(-S_E) / 2pi`,
/// with unit coupling charge in Planck units.
pub fn particle_density(mass: f64, e_field: f64, h: f64, s_e: f64) -> Result<f64> {
    const OP: &str = "particle_density";
    if !(mass > 0.0 && mass <= 1.0) {
        return Err(domain(OP, format!("mass must lie in (0, 1], got {mass}")));
    }
    let field_term = if e_field == 0.0 {
        0.0
    } else if h == 0.0 {
        return Err(domain(OP, "zero Hubble rate with non-zero field"));
    } else {
        e_field * e_field / (h * h)
    };
    Ok((mass * mass + field_term).sqrt() * (-s_e).exp() / (2.0 * PI))
}

/// `1 / sqrt(int_0^U exp(-2 a phi^2) dphi)`; `upper` may be `f64::INFINITY`.
pub fn normalization_constant(coeff: f64, upper: f64) -> Result<f64> {
    const OP: &str = "normalization_constant";
    if !(coeff > 0.0) {
        return Err(domain(OP, format!("coefficient must be positive, got {coeff}")));
    }
    if !(upper > 0.0) {
        return Err(domain(OP, format!("upper limit must be positive, got {upper}")));
    }
    let integrand = |phi: f64| (-2.0 * coeff * phi * phi).exp();
    let opts = QuadOptions::default();
    let integral = if upper.is_infinite() {
        integrate_to_infinity(integrand, 0.0, &opts)?
    } else {
        integrate(integrand, 0.0, upper, &opts)?
    };
    let c = 1.0 / integral.value.sqrt();
    if c.is_finite() {
        Ok(c)
    } else {
        Err(Error::NonFinite { op: OP, at: upper })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Initial,
    Final,
}

/// `c exp(-alpha (phi - center)^2)` in the collective amplitude `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveFunctional {
    pub kind: WaveKind,
    pub center: f64,
    pub alpha: f64,
    /// Upper amplitude limit used for the normalization.
    pub upper: f64,
    pub c_norm: f64,
}

impl WaveFunctional {
    pub fn new(kind: WaveKind, center: f64, alpha: f64, upper: f64) -> Result<Self> {
        Ok(Self {
            kind,
            center,
            alpha,
            upper,
            c_norm: normalization_constant(alpha, upper)?,
        })
    }

    pub fn value(&self, phi: f64) -> f64 {
        let d = phi - self.center;
        self.c_norm * (-self.alpha * d * d).exp()
    }

    pub fn second_derivative(&self, phi: f64) -> f64 {
        let d = phi - self.center;
        let a = self.alpha;
        (4.0 * a * a * d * d - 2.0 * a) * self.value(phi)
    }

    /// `c^2 int_0^U exp(-2 alpha phi^2) dphi - 1`.
    pub fn normalization_residual(&self) -> Result<f64> {
        let c = normalization_constant(self.alpha, self.upper)?;
        Ok((self.c_norm / c).powi(2) - 1.0)
    }
}

/// Reduced tunneling matrix element
/// `(1 / 2m*) int (psi_i psi_f'' - psi_f psi_i'') theta(phi - phi_0) dphi`
/// over `[0, upper]`.
pub fn matrix_element_functional(
    initial: &WaveFunctional,
    final_state: &WaveFunctional,
    phi_0: f64,
    upper: f64,
    m_star: f64,
) -> Result<f64> {
    const OP: &str = "matrix_element_functional";
    if !(upper > phi_0) {
        return Err(domain(OP, format!("upper {upper} must exceed phi_0 {phi_0}")));
    }
    if !(m_star > 0.0) {
        return Err(domain(OP, format!("m_star must be positive, got {m_star}")));
    }
    for w in [initial, final_state] {
        let residual = w.normalization_residual()?;
        if !(residual.abs() < NORMALIZATION_TOL) {
            return Err(Error::Contract {
                op: OP,
                reason: format!("{:?} functional off unit norm by {residual:e}", w.kind),
            });
        }
    }
    let lower = phi_0.max(0.0);
    let integrand =
        |phi: f64| initial.value(phi) * final_state.second_derivative(phi) - final_state.value(phi) * initial.second_derivative(phi);
    // The two products cancel almost exactly for well-separated centres, so
    // the attainable accuracy is set by their magnitude, not by the result.
    let magnitude = |phi: f64| {
        (initial.value(phi) * final_state.second_derivative(phi)).abs()
            + (final_state.value(phi) * initial.second_derivative(phi)).abs()
    };
    let coarse = QuadOptions {
        rel_tol: 1e-6,
        ..QuadOptions::default()
    };
    let scale = integrate(magnitude, lower, upper, &coarse)?.value;
    let opts = QuadOptions {
        abs_tol: 64.0 * f64::EPSILON * scale,
        ..QuadOptions::default()
    };
    let r = integrate(integrand, lower, upper, &opts)?;
    Ok(r.value / (2.0 * m_star))
}

/// Grouping of the hyperbolic-cosine argument in the closed-form amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoshGrouping {
    /// `2 sqrt(x / 2L) - sqrt(L / 2x)`
    #[default]
    Literal,
    /// `2 (sqrt(x / 2L) - sqrt(L / 2x))`
    Paired,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedAmplitude {
    pub value: f64,
    pub cosh_factor: f64,
    pub exp_factor: f64,
    /// The exponential factor underflowed to zero.
    pub underflow: bool,
}

/// Closed-form `|T_IF| = (c1 c2 / m*) cosh(...) exp(-alpha L (L / 2x))`.
pub fn matrix_element_closed(c1: f64, c2: f64, m_star: f64, x: f64, length: f64, alpha: f64) -> Result<ClosedAmplitude> {
    matrix_element_closed_with(c1, c2, m_star, x, length, alpha, CoshGrouping::Literal)
}

pub fn matrix_element_closed_with(
    c1: f64,
    c2: f64,
    m_star: f64,
    x: f64,
    length: f64,
    alpha: f64,
    grouping: CoshGrouping,
) -> Result<ClosedAmplitude> {
    const OP: &str = "matrix_element_closed";
    if !(x > 0.0 && length > 0.0 && m_star > 0.0) {
        return Err(domain(OP, format!("need x, L, m* > 0, got x={x}, L={length}, m*={m_star}")));
    }
    let inner = (x / (2.0 * length)).sqrt();
    let outer = (length / (2.0 * x)).sqrt();
    let arg = match grouping {
        CoshGrouping::Literal => 2.0 * inner - outer,
        CoshGrouping::Paired => 2.0 * (inner - outer),
    };
    let cosh_factor = arg.cosh();
    let exp_factor = (-alpha * length * (length / (2.0 * x))).exp();
    if exp_factor == 0.0 {
        return Ok(ClosedAmplitude {
            value: 0.0,
            cosh_factor,
            exp_factor,
            underflow: true,
        });
    }
    Ok(ClosedAmplitude {
        value: c1 * c2 / m_star * cosh_factor * exp_factor,
        cosh_factor,
        exp_factor,
        underflow: false,
    })
}

/// Knobs for the tunneling pipeline that the physics leaves open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingParams {
    pub epsilon_plus: f64,
    pub upper_limit: f64,
    pub prefactor_a: f64,
    /// Produced particle mass, at most the Planck mass.
    pub mass: f64,
    pub e_field: f64,
    /// Replaces the saturated Bogomol'nyi action as the bounce action.
    pub s_b_override: Option<f64>,
    pub m_star: f64,
    pub cosh_grouping: CoshGrouping,
}

impl Default for TunnelingParams {
    fn default() -> Self {
        Self {
            epsilon_plus: DEFAULT_EPSILON_PLUS,
            upper_limit: DEFAULT_UPPER_LIMIT,
            prefactor_a: 1.0,
            mass: 1.0,
            e_field: 0.0,
            s_b_override: None,
            m_star: EFFECTIVE_MASS,
            cosh_grouping: CoshGrouping::Literal,
        }
    }
}

/// Vacuum data a tunneling evaluation starts from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingInputs {
    pub phi_false: f64,
    pub phi_true: f64,
    /// Vacuum energy gap; sets both the Gaussian stiffness and `L = 1 / gap`.
    pub gap: f64,
    /// Energy scale of the closed form, the false-vacuum potential.
    pub x: f64,
    pub brackets: GapBrackets,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingResult {
    pub alpha: f64,
    pub length: f64,
    pub c_initial: f64,
    pub c_final: f64,
    pub s_e: f64,
    pub s_b: f64,
    pub gamma: DecayRate,
    pub n_density: f64,
    pub t_closed: ClosedAmplitude,
    pub t_functional: f64,
}

pub fn analyze_tunneling(spec: &PotentialSpec, inputs: &TunnelingInputs, params: &TunnelingParams) -> Result<TunnelingResult> {
    if !(inputs.gap > 0.0) {
        return Err(domain("analyze_tunneling", format!("vacuum gap must be positive, got {}", inputs.gap)));
    }
    let alpha = inputs.gap;
    let length = 1.0 / alpha;

    let s_e = euclidean_action(inputs.phi_false, inputs.phi_true, &inputs.brackets);
    let s_b = params.s_b_override.unwrap_or(s_e);
    let gamma = decay_rate_gamma(s_b, spec.m, params.prefactor_a)?;
    let h = hubble_sq(inputs.x)?.sqrt();
    let n_density = particle_density(params.mass, params.e_field, h, s_e)?;

    let initial = WaveFunctional::new(WaveKind::Initial, inputs.phi_false, alpha, params.upper_limit)?;
    let final_state = WaveFunctional::new(WaveKind::Final, inputs.phi_true, alpha, params.upper_limit)?;
    let t_closed = matrix_element_closed_with(
        initial.c_norm,
        final_state.c_norm,
        params.m_star,
        inputs.x,
        length,
        alpha,
        params.cosh_grouping,
    )?;
    let t_functional = matrix_element_functional(
        &initial,
        &final_state,
        inputs.phi_false + params.epsilon_plus,
        params.upper_limit,
        params.m_star,
    )?;

    Ok(TunnelingResult {
        alpha,
        length,
        c_initial: initial.c_norm,
        c_final: final_state.c_norm,
        s_e,
        s_b,
        gamma,
        n_density,
        t_closed,
        t_functional,
    })
}
