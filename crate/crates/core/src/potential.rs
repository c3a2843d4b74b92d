//! Tilted sine-Gordon inflaton potential, its stationary points, and the
//! Bogomol'nyi gap brackets built from the two vacua.
//!
//! ```text
//! V1(phi) = A (1 - cos phi) + (m^2 / 2) (phi - phi*)^2
//! V(phi)  = offset + V1(phi)
//! ```

use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::units::{DEFAULT_INFLATON_MASS, DEFAULT_PHI_STAR};

/// Coefficient of `(1 - cos phi)` in Planck units.
pub const DEFAULT_AMPLITUDE: f64 = 0.5989;

/// Polished roots satisfy `|V'| < ROOT_TOL` unless floating point forbids it.
pub const ROOT_TOL: f64 = 1e-12;

/// Roots closer than this are merged.
pub const DEDUP_SPACING: f64 = 1e-8;

/// `|V''|` below this marks a stationary point as an inflection.
pub const INFLECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    pub amplitude: f64,
    pub m: f64,
    pub phi_star: f64,
    /// Constant energy density added on top of `V1`.
    pub offset: f64,
}

impl Default for PotentialSpec {
    fn default() -> Self {
        Self {
            amplitude: DEFAULT_AMPLITUDE,
            m: DEFAULT_INFLATON_MASS,
            phi_star: DEFAULT_PHI_STAR,
            offset: 0.0,
        }
    }
}

impl PotentialSpec {
    /// Checks `amplitude > 0`, `m > 0`, and that every parameter is finite.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.amplitude, self.m, self.phi_star, self.offset]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(domain("PotentialSpec", "parameters must be finite"));
        }
        if !(self.amplitude > 0.0) {
            return Err(domain("PotentialSpec", format!("amplitude must be positive, got {}", self.amplitude)));
        }
        if !(self.m > 0.0) {
            return Err(domain("PotentialSpec", format!("m must be positive, got {}", self.m)));
        }
        Ok(())
    }

    pub fn v1(&self, phi: f64) -> f64 {
        let d = phi - self.phi_star;
        self.amplitude * (1.0 - phi.cos()) + 0.5 * self.m * self.m * d * d
    }

    /// Closed-form `(V', V'')` of `V1`; the offset does not contribute.
    pub fn v1_derivatives(&self, phi: f64) -> (f64, f64) {
        let m2 = self.m * self.m;
        let (s, c) = phi.sin_cos();
        (self.amplitude * s + m2 * (phi - self.phi_star), self.amplitude * c + m2)
    }

    pub fn v_total(&self, phi: f64) -> f64 {
        self.offset + self.v1(phi)
    }
}

/// Quartic template `C1 (phi - phi0)^2 - 4 C2 phi phi0 (phi - phi0)^2 + C2 (phi^2 - phi0^2)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplatePotentialSpec {
    pub c1: f64,
    pub c2: f64,
    pub phi_0: f64,
}

impl TemplatePotentialSpec {
    pub fn value(&self, phi: f64) -> f64 {
        let d = phi - self.phi_0;
        let sq = phi * phi - self.phi_0 * self.phi_0;
        self.c1 * d * d - 4.0 * self.c2 * phi * self.phi_0 * d * d + self.c2 * sq * sq
    }
}

pub fn v_template(tspec: &TemplatePotentialSpec, phi: f64) -> f64 {
    tspec.value(phi)
}

/// Closed field interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::new(0.0, 2.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryKind {
    Minimum,
    Maximum,
    Inflection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoint {
    pub phi: f64,
    pub kind: StationaryKind,
}

/// Locates the zeros of `V'` in `range`.
///
/// `V'` is sampled on `grid_n` equal cells; each sign change is polished with
/// a bracketed Newton iteration that falls back to bisection whenever the
/// Newton step leaves the bracket. Tangential zeros without a sign change are
/// not detected.
pub fn find_stationary_points(spec: &PotentialSpec, range: Interval, grid_n: usize) -> Result<Vec<StationaryPoint>> {
    const OP: &str = "find_stationary_points";
    if !(range.lo.is_finite() && range.hi.is_finite() && range.lo < range.hi) {
        return Err(domain(OP, format!("degenerate range [{}, {}]", range.lo, range.hi)));
    }
    if grid_n < 16 {
        return Err(domain(OP, format!("grid_n must be at least 16, got {grid_n}")));
    }

    let step = (range.hi - range.lo) / grid_n as f64;
    let node = |i: usize| {
        if i == grid_n {
            range.hi
        } else {
            range.lo + i as f64 * step
        }
    };
    let slope = |x: f64| -> Result<f64> {
        let d = spec.v1_derivatives(x).0;
        if d.is_finite() {
            Ok(d)
        } else {
            Err(Error::NonFinite { op: OP, at: x })
        }
    };

    let mut roots = Vec::new();
    let mut left = node(0);
    let mut d_left = slope(left)?;
    if d_left == 0.0 {
        roots.push(left);
    }
    for i in 1..=grid_n {
        let right = node(i);
        let d_right = slope(right)?;
        if d_right == 0.0 {
            roots.push(right);
        } else if d_left != 0.0 && (d_left < 0.0) != (d_right < 0.0) {
            roots.push(polish(spec, left, right, d_left));
        }
        left = right;
        d_left = d_right;
    }

    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|b, a| (*b - *a).abs() < DEDUP_SPACING);

    Ok(roots
        .into_iter()
        .map(|phi| {
            let curvature = spec.v1_derivatives(phi).1;
            let kind = if curvature.abs() < INFLECTION_TOL {
                StationaryKind::Inflection
            } else if curvature > 0.0 {
                StationaryKind::Minimum
            } else {
                StationaryKind::Maximum
            };
            StationaryPoint { phi, kind }
        })
        .collect())
}

fn polish(spec: &PotentialSpec, mut a: f64, mut b: f64, d_a: f64) -> f64 {
    let a_negative = d_a < 0.0;
    let mut x = 0.5 * (a + b);
    let mut best = (f64::INFINITY, x);
    for _ in 0..200 {
        let (d1, d2) = spec.v1_derivatives(x);
        if d1.abs() < best.0 {
            best = (d1.abs(), x);
        }
        if d1.abs() < ROOT_TOL {
            return x;
        }
        if (d1 < 0.0) == a_negative {
            a = x;
        } else {
            b = x;
        }
        let newton = x - d1 / d2;
        x = if d2 != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            break;
        }
    }
    best.1
}

/// False and true vacuum of a double well, ordered by potential value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumPair {
    pub phi_false: f64,
    pub phi_true: f64,
    pub v_false: f64,
    pub v_true: f64,
    pub curvature_false: f64,
    pub curvature_true: f64,
    /// `V(phi_false) - V(phi_true)`, never negative.
    pub gap: f64,
}

/// Picks the lowest minimum as the true vacuum and the next lowest as the
/// false vacuum. Position plays no role, so a reversed tilt is handled.
pub fn classify_vacua(spec: &PotentialSpec, stationary: &[StationaryPoint]) -> Result<VacuumPair> {
    let mut minima: Vec<(f64, f64)> = stationary
        .iter()
        .filter(|p| p.kind == StationaryKind::Minimum)
        .map(|p| (spec.v_total(p.phi), p.phi))
        .collect();
    if minima.len() < 2 {
        return Err(Error::NoFalseVacuum { found: minima.len() });
    }
    minima.sort_by(|x, y| match x.0.total_cmp(&y.0) {
        Ordering::Equal => x.1.total_cmp(&y.1),
        o => o,
    });
    let (v_true, phi_true) = minima[0];
    let (v_false, phi_false) = minima[1];
    Ok(VacuumPair {
        phi_false,
        phi_true,
        v_false,
        v_true,
        curvature_false: spec.v1_derivatives(phi_false).1,
        curvature_true: spec.v1_derivatives(phi_true).1,
        gap: v_false - v_true,
    })
}

/// Bogomol'nyi bracket `{} = {}_A - {}_B` and the energy gap it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBrackets {
    pub bracket_a: f64,
    pub bracket_b: f64,
    pub bracket_total: f64,
    pub delta_e_gap: f64,
    /// `1 / delta_e_gap`; `None` when the gap is not positive.
    pub length: Option<f64>,
}

impl GapBrackets {
    pub fn new(m: f64, phi_false: f64, phi_true: f64) -> Result<Self> {
        if !(m > 0.0) {
            return Err(domain("gap_brackets", format!("m must be positive, got {m}")));
        }
        let inv_m2 = 1.0 / (m * m);
        let bracket_a = (inv_m2 + 1.0) / (2.0 * inv_m2);
        let bracket_b = phi_true * phi_false / 6.0;
        let bracket_total = bracket_a - bracket_b;
        let delta_e_gap = bracket_total / 2.0;
        debug_assert_eq!(bracket_total, 2.0 * delta_e_gap);
        Ok(Self {
            bracket_a,
            bracket_b,
            bracket_total,
            delta_e_gap,
            length: (delta_e_gap > 0.0).then(|| 1.0 / delta_e_gap),
        })
    }

    /// True when a positive gap defines a Bogomol'nyi length.
    pub fn has_length(&self) -> bool {
        self.length.is_some()
    }
}

pub fn gap_brackets(spec: &PotentialSpec, pair: &VacuumPair) -> Result<GapBrackets> {
    GapBrackets::new(spec.m, pair.phi_false, pair.phi_true)
}
