//! Published numeric claims set against independently recomputed values.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nuclab_core::units::{chaotic_threshold, natural_units};
use serde::Serialize;

use crate::output::num;
use crate::pipeline::PipelineResults;

/// Published values the ledger is reconciled against.
pub mod published {
    pub const CHAOTIC_THRESHOLD: f64 = 3.1;
    pub const PHI_FALSE: f64 = 0.5472;
    pub const PHI_TRUE: f64 = 5.457;
    pub const PHI_STAR: f64 = 0.99 * std::f64::consts::PI;
    pub const VACUUM_GAP: f64 = 0.041;
    pub const EFFECTIVE_MASS: f64 = 8.676e-20;
    pub const V_FALSE: f64 = 0.663;
    pub const LENGTH: f64 = 24.39;
    pub const CURVATURE_TRUE: f64 = 0.504;
    pub const HUBBLE_SQ_TRUE: f64 = 4.962;
    pub const CURVATURE_FALSE: f64 = 0.575;
    pub const HUBBLE_SQ_FALSE: f64 = 5.305;
    pub const CURVATURE_STAR: f64 = 0.335;
    pub const HUBBLE_SQ_STAR: f64 = 8.378;
    /// Averaged potential behind the printed decay exponent.
    pub const V0: f64 = 0.775;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Relative deviation below 2 %.
    Match,
    /// Between 2 % and 20 %.
    Near,
    /// Above 20 %.
    Mismatch,
    NotComputed,
}

impl Status {
    pub fn from_relative(rel: f64) -> Self {
        if rel < 0.02 {
            Self::Match
        } else if rel <= 0.20 {
            Self::Near
        } else {
            Self::Mismatch
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Match => "match",
            Self::Near => "near",
            Self::Mismatch => "mismatch",
            Self::NotComputed => "not computed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimsLedgerEntry {
    pub id: &'static str,
    pub source: &'static str,
    pub published: f64,
    pub recomputed: Option<f64>,
    pub abs_deviation: Option<f64>,
    pub rel_deviation: Option<f64>,
    pub status: Status,
    pub note: &'static str,
}

impl ClaimsLedgerEntry {
    pub fn new(id: &'static str, source: &'static str, published: f64, recomputed: Option<f64>) -> Self {
        assert!(!source.is_empty(), "ledger entry {id} needs a source");
        let recomputed = recomputed.filter(|v| v.is_finite());
        let (abs_deviation, rel_deviation, status) = match recomputed {
            Some(r) => {
                let abs = (r - published).abs();
                let rel = if published != 0.0 {
                    abs / published.abs()
                } else if abs == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                (Some(abs), Some(rel), Status::from_relative(rel))
            }
            None => (None, None, Status::NotComputed),
        };
        Self {
            id,
            source,
            published,
            recomputed,
            abs_deviation,
            rel_deviation,
            status,
            note: "",
        }
    }

    fn with_note(mut self, note: &'static str) -> Self {
        self.note = note;
        self
    }
}

/// One entry per claim, sorted by id. Claims whose inputs were not computed
/// stay in the ledger with status `not computed`.
pub fn emit_claims_ledger(results: &PipelineResults) -> Vec<ClaimsLedgerEntry> {
    use published as p;

    let vacua = results.vacua.as_ref();
    let spec = results.spec;
    let point = |label: &str| results.slow_roll.iter().find(|s| s.label == label).map(|s| s.report);
    let sr_false = point("phi_false");
    let sr_true = point("phi_true");
    let sr_star = point("phi_star");
    let suppression = |variant| {
        results
            .suppression
            .iter()
            .find(|s| s.variant == variant)
            .map(|s| s.rk4_ratio)
    };
    let published_row = results.tunneling.iter().find(|t| t.scenario == "published");

    let mut entries = vec![
        ClaimsLedgerEntry::new("chaotic_threshold", "chaotic inflation onset, phi > 3.1 M_p", p::CHAOTIC_THRESHOLD, Some(chaotic_threshold())),
        ClaimsLedgerEntry::new(
            "phi_star_formula",
            "chaotic-trajectory phi* formula at the default mass, against the adopted phi*",
            p::PHI_STAR,
            results.scales.map(|s| s.phi_star_formula),
        )
        .with_note("formula value is not the adopted phi*"),
        ClaimsLedgerEntry::new("phi_false", "published false vacuum location", p::PHI_FALSE, vacua.map(|v| v.phi_false))
            .with_note("false vacuum = higher of the two lowest minima"),
        ClaimsLedgerEntry::new("phi_true", "published true vacuum location", p::PHI_TRUE, vacua.map(|v| v.phi_true)),
        ClaimsLedgerEntry::new("phi_star", "published tilt centre 0.99 pi", p::PHI_STAR, results.scales.map(|s| s.phi_star_used))
            .with_note("configured input echoed back"),
        ClaimsLedgerEntry::new("vacuum_gap", "published gap V(phi_F) - V(phi_T)", p::VACUUM_GAP, vacua.map(|v| v.gap)),
        ClaimsLedgerEntry::new(
            "delta_e_published_vacua",
            "Bogomol'nyi brackets at the published vacua, against the published gap",
            p::VACUUM_GAP,
            results.published_brackets.map(|b| b.delta_e_gap),
        ),
        ClaimsLedgerEntry::new(
            "delta_e_recomputed_vacua",
            "Bogomol'nyi brackets at the recomputed vacua, against the published gap",
            p::VACUUM_GAP,
            results.brackets.map(|b| b.delta_e_gap),
        ),
        ClaimsLedgerEntry::new("effective_mass", "published effective mass 2 m_e in Planck units", p::EFFECTIVE_MASS, Some(natural_units().m_star)),
        ClaimsLedgerEntry::new("v_false", "published V(phi_F) from the nucleation estimate", p::V_FALSE, vacua.zip(spec).map(|(v, s)| s.v1(v.phi_false))),
        ClaimsLedgerEntry::new("curvature_true", "published |V''| at phi_T", p::CURVATURE_TRUE, sr_true.map(|r| r.lhs)),
        ClaimsLedgerEntry::new("hubble_sq_true", "published H^2 at phi_T", p::HUBBLE_SQ_TRUE, sr_true.map(|r| r.rhs)),
        ClaimsLedgerEntry::new("curvature_false", "published |V''| at phi_F", p::CURVATURE_FALSE, sr_false.map(|r| r.lhs)),
        ClaimsLedgerEntry::new("hubble_sq_false", "published H^2 at phi_F", p::HUBBLE_SQ_FALSE, sr_false.map(|r| r.rhs)),
        ClaimsLedgerEntry::new(
            "v_false_implied",
            "published H^2 at phi_F back-solved for V(phi_F)",
            p::HUBBLE_SQ_FALSE * 3.0 / (8.0 * PI),
            sr_false.map(|r| r.v),
        )
        .with_note("disagrees with v_false by about 5 percent"),
        ClaimsLedgerEntry::new("curvature_star", "published |V''| at phi*", p::CURVATURE_STAR, sr_star.map(|r| r.lhs)),
        ClaimsLedgerEntry::new("hubble_sq_star", "published H^2 at phi*", p::HUBBLE_SQ_STAR, sr_star.map(|r| r.rhs)),
        ClaimsLedgerEntry::new(
            "suppression_exact_variant",
            "3H decay rate against the published exp(-8 pi v0) suppression",
            (-8.0 * PI * p::V0).exp(),
            suppression(nuclab_core::DecayVariant::Exact),
        )
        .with_note("eps(1)/eps0 after one Planck time"),
        ClaimsLedgerEntry::new(
            "suppression_paper_variant",
            "published exp(-8 pi v0) suppression",
            (-8.0 * PI * p::V0).exp(),
            suppression(nuclab_core::DecayVariant::Printed),
        )
        .with_note("eps(1)/eps0 after one Planck time"),
        ClaimsLedgerEntry::new(
            "length_brackets",
            "published length L = 24.39 against 1/dE from the brackets",
            p::LENGTH,
            results.brackets.and_then(|b| b.length),
        )
        .with_note("absent when the bracket gap is not positive"),
        ClaimsLedgerEntry::new(
            "length_vacuum_gap",
            "published length L = 24.39 against 1/gap",
            p::LENGTH,
            vacua.and_then(|v| (v.gap > 0.0).then(|| 1.0 / v.gap)),
        ),
        ClaimsLedgerEntry::new(
            "n_over_t_published",
            "published claim that pair density and amplitude agree in order of magnitude",
            1.0,
            published_row.map(|t| t.result.n_density / t.result.t_closed.value),
        )
        .with_note("published vacua, equal normalization constants"),
    ];
    entries.sort_by(|a, b| a.id.cmp(b.id));
    entries
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_owned(), num)
}

/// Aligned plain-text table.
pub fn render_text(entries: &[ClaimsLedgerEntry]) -> String {
    let header = ["id", "source", "published", "recomputed", "abs_dev", "rel_dev", "status", "note"];
    let rows: Vec<[String; 8]> = entries
        .iter()
        .map(|e| {
            [
                e.id.to_owned(),
                e.source.to_owned(),
                num(e.published),
                opt(e.recomputed),
                opt(e.abs_deviation),
                opt(e.rel_deviation),
                e.status.as_str().to_owned(),
                e.note.to_owned(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::from("# nuclab deviation report (Planck units; match < 2%, near 2-20%, mismatch > 20%)\n");
    let mut line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&header.map(str::to_owned));
    for row in &rows {
        line(row);
    }
    out
}

/// One JSON object per line.
pub fn render_jsonl(entries: &[ClaimsLedgerEntry]) -> String {
    entries
        .iter()
        .map(|e| serde_json::to_string(e).expect("ledger entries serialize") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_bands() {
        assert_eq!(Status::from_relative(0.0), Status::Match);
        assert_eq!(Status::from_relative(0.0199), Status::Match);
        assert_eq!(Status::from_relative(0.02), Status::Near);
        assert_eq!(Status::from_relative(0.2), Status::Near);
        assert_eq!(Status::from_relative(0.21), Status::Mismatch);
        assert_eq!(Status::from_relative(f64::INFINITY), Status::Mismatch);
    }

    #[test]
    fn entry_deviation() {
        let e = ClaimsLedgerEntry::new("x", "test", 2.0, Some(2.1));
        assert!((e.rel_deviation.unwrap() - 0.05).abs() < 1e-12);
        assert_eq!(e.status, Status::Near);
        let missing = ClaimsLedgerEntry::new("y", "test", 2.0, None);
        assert_eq!(missing.status, Status::NotComputed);
        let nan = ClaimsLedgerEntry::new("z", "test", 2.0, Some(f64::NAN));
        assert_eq!(nan.status, Status::NotComputed);
    }

    #[test]
    fn empty_results_keep_every_claim() {
        let entries = emit_claims_ledger(&PipelineResults::default());
        assert!(entries.len() >= 20);
        assert!(entries.windows(2).all(|w| w[0].id < w[1].id));
        assert!(entries.iter().all(|e| !e.source.is_empty()));
        let vacuum = entries.iter().find(|e| e.id == "phi_false").unwrap();
        assert_eq!(vacuum.status, Status::NotComputed);
        let text = render_text(&entries);
        assert_eq!(text.lines().count(), entries.len() + 2);
        assert_eq!(render_jsonl(&entries).lines().count(), entries.len());
    }
}
