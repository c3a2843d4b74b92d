//! Runs the analysis stages, then writes every artifact in one pass.
//!
//! Nothing touches the filesystem until all requested numerics have
//! succeeded, so a failed run leaves no partial output behind.

use std::path::{Path, PathBuf};

use log::{error, info};
use nuclab_core::kessence::{classify_regime, epsilon_closed_form, fluid_diagnostics};
use nuclab_core::potential::GapBrackets;
use nuclab_core::tunneling::{analyze_tunneling, TunnelingInputs, TunnelingResult};
use nuclab_core::units::ChaoticScales;
use nuclab_core::{
    classify_vacua, evolve_epsilon, find_stationary_points, gap_brackets, pressure_params, slow_roll_check,
    DecayVariant, FluidDiagnostics, KEssenceState, PotentialSpec, PressureParams, Regime, SlowRollReport,
    StationaryPoint, VacuumPair,
};
use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::ledger::{emit_claims_ledger, published, render_jsonl, render_text};
use crate::output::{num, opt_num, Csv};

/// RK4 steps for the one-Planck-time suppression estimate.
pub const SUPPRESSION_STEPS: usize = 16384;

/// Decades of `eps / x0` covered by the regime sweep, from 10 down to 1e-6.
const SWEEP_DECADES: (i32, i32) = (1, -6);
const SWEEP_PER_DECADE: i32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Potential,
    SlowRoll,
    Tunneling,
    KEssence,
    All,
}

impl Stage {
    fn potential(self) -> bool {
        !matches!(self, Self::KEssence)
    }

    fn slow_roll(self) -> bool {
        matches!(self, Self::SlowRoll | Self::All)
    }

    fn tunneling(self) -> bool {
        matches!(self, Self::Tunneling | Self::All)
    }

    fn kessence(self) -> bool {
        matches!(self, Self::KEssence | Self::All)
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{op}: {source}")]
    Numeric {
        op: &'static str,
        #[source]
        source: nuclab_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numeric { .. } | Self::Io { .. } => 1,
        }
    }
}

fn numeric<T>(op: &'static str, r: nuclab_core::Result<T>) -> Result<T, RunError> {
    r.map_err(|source| {
        error!("{op} failed: {source}");
        RunError::Numeric { op, source }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowRollPoint {
    pub label: &'static str,
    pub report: SlowRollReport,
    pub pressure: PressureParams,
    pub passes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingRow {
    pub scenario: &'static str,
    pub inputs: TunnelingInputs,
    pub result: TunnelingResult,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidSample {
    pub state: KEssenceState,
    pub diag: FluidDiagnostics,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Suppression {
    pub variant: DecayVariant,
    pub closed_ratio: f64,
    pub rk4_ratio: f64,
}

/// Everything a run computed. Stages that were not requested stay empty.
#[derive(Debug, Clone, Default)]
pub struct PipelineResults {
    pub spec: Option<PotentialSpec>,
    pub scales: Option<ChaoticScales>,
    pub stationary: Vec<StationaryPoint>,
    pub vacua: Option<VacuumPair>,
    pub brackets: Option<GapBrackets>,
    pub published_brackets: Option<GapBrackets>,
    pub curve: Vec<[f64; 4]>,
    pub slow_roll: Vec<SlowRollPoint>,
    pub tunneling: Vec<TunnelingRow>,
    pub trajectory: Vec<FluidSample>,
    pub sweep: Vec<FluidSample>,
    pub suppression: Vec<Suppression>,
}

/// Runs the requested stages in dependency order.
pub fn compute(config: &RunConfig, stage: Stage) -> Result<PipelineResults, RunError> {
    config.validate()?;
    let mut out = PipelineResults::default();
    if stage.potential() {
        potential_stage(config, &mut out)?;
    }
    if stage.slow_roll() {
        slow_roll_stage(config, &mut out)?;
    }
    if stage.tunneling() {
        tunneling_stage(config, &mut out)?;
    }
    if stage.kessence() {
        kessence_stage(config, &mut out)?;
    }
    Ok(out)
}

fn potential_stage(config: &RunConfig, out: &mut PipelineResults) -> Result<(), RunError> {
    let spec = config.potential;
    out.spec = Some(spec);
    out.scales = Some(numeric("chaotic_scales", ChaoticScales::new(spec.m, spec.phi_star))?);
    out.stationary = numeric(
        "find_stationary_points",
        find_stationary_points(&spec, config.range, config.grid_n),
    )?;
    let vacua = numeric("classify_vacua", classify_vacua(&spec, &out.stationary))?;
    info!(
        "vacua: phi_false = {:.10}, phi_true = {:.10}, gap = {:.6e}",
        vacua.phi_false, vacua.phi_true, vacua.gap
    );
    out.vacua = Some(vacua);
    out.brackets = Some(numeric("gap_brackets", gap_brackets(&spec, &vacua))?);
    out.published_brackets = Some(numeric(
        "gap_brackets",
        GapBrackets::new(spec.m, published::PHI_FALSE, published::PHI_TRUE),
    )?);

    let n = config.curve_samples;
    let (lo, hi) = (config.range.lo, config.range.hi);
    out.curve = (0..n)
        .map(|i| {
            let phi = if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
            let (d1, d2) = spec.v1_derivatives(phi);
            [phi, spec.v_total(phi), d1, d2]
        })
        .collect();
    Ok(())
}

fn slow_roll_stage(config: &RunConfig, out: &mut PipelineResults) -> Result<(), RunError> {
    let (Some(spec), Some(vacua)) = (out.spec, out.vacua) else {
        return Ok(());
    };
    for (label, phi) in [
        ("phi_false", vacua.phi_false),
        ("phi_true", vacua.phi_true),
        ("phi_star", spec.phi_star),
    ] {
        let report = numeric("slow_roll_check", slow_roll_check(&spec, phi, config.use_v1_only))?;
        let pressure = numeric("pressure_params", pressure_params(&spec, phi))?;
        let passes = report.passes_at(config.pass_threshold);
        info!(
            "slow roll at {label} = {phi:.10}: |V''| = {:.10}, H^2 = {:.10}, ratio = {:.10}, eps = {:.3e}, eta = {:.10}",
            report.lhs, report.rhs, report.ratio, pressure.epsilon, pressure.eta
        );
        out.slow_roll.push(SlowRollPoint {
            label,
            report,
            pressure,
            passes,
        });
    }
    Ok(())
}

fn tunneling_stage(config: &RunConfig, out: &mut PipelineResults) -> Result<(), RunError> {
    let (Some(spec), Some(vacua), Some(brackets), Some(published_brackets)) =
        (out.spec, out.vacua, out.brackets, out.published_brackets)
    else {
        return Ok(());
    };
    let recomputed_x = if config.use_v1_only { spec.v1(vacua.phi_false) } else { vacua.v_false };
    let scenarios = [
        (
            "published",
            TunnelingInputs {
                phi_false: published::PHI_FALSE,
                phi_true: published::PHI_TRUE,
                gap: published::VACUUM_GAP,
                x: published::V_FALSE,
                brackets: published_brackets,
            },
        ),
        (
            "recomputed",
            TunnelingInputs {
                phi_false: vacua.phi_false,
                phi_true: vacua.phi_true,
                gap: vacua.gap,
                x: recomputed_x,
                brackets,
            },
        ),
    ];
    for (scenario, inputs) in scenarios {
        let result = numeric("analyze_tunneling", analyze_tunneling(&spec, &inputs, &config.tunneling))?;
        info!(
            "tunneling ({scenario}): S_E = {:.6e}, gamma = {:.6e}, |T| closed = {:.6e}, functional = {:.6e}",
            result.s_e, result.gamma.gamma, result.t_closed.value, result.t_functional
        );
        out.tunneling.push(TunnelingRow {
            scenario,
            inputs,
            result,
        });
    }
    Ok(())
}

fn sample(config: &RunConfig, state: KEssenceState) -> Result<FluidSample, RunError> {
    let diag = numeric("fluid_diagnostics", fluid_diagnostics(&config.kessence, state.x, config.kessence.v0))?;
    Ok(FluidSample {
        state,
        diag,
        regime: classify_regime(&diag),
    })
}

fn kessence_stage(config: &RunConfig, out: &mut PipelineResults) -> Result<(), RunError> {
    let model = config.kessence;
    let trajectory = numeric(
        "evolve_epsilon",
        evolve_epsilon(&model, config.eps0, config.t_end, config.steps, config.variant),
    )?;
    out.trajectory = trajectory
        .into_iter()
        .map(|s| sample(config, s))
        .collect::<Result<_, _>>()?;

    let (top, bottom) = SWEEP_DECADES;
    out.sweep = (0..=(top - bottom) * SWEEP_PER_DECADE)
        .map(|i| {
            let eps = model.x0 * 10f64.powf(f64::from(top) - f64::from(i) / f64::from(SWEEP_PER_DECADE));
            sample(config, KEssenceState { t: 0.0, x: model.x0 + eps, eps })
        })
        .collect::<Result<_, _>>()?;

    for variant in [DecayVariant::Exact, DecayVariant::Printed] {
        let closed_ratio = numeric("epsilon_closed_form", epsilon_closed_form(&model, 1.0, 1.0, variant))?;
        let path = numeric("evolve_epsilon", evolve_epsilon(&model, 1.0, 1.0, SUPPRESSION_STEPS, variant))?;
        let rk4_ratio = path.last().map_or(f64::NAN, |s| s.eps);
        info!("suppression after one Planck time ({variant}): closed {closed_ratio:.6e}, rk4 {rk4_ratio:.6e}");
        out.suppression.push(Suppression {
            variant,
            closed_ratio,
            rk4_ratio,
        });
    }
    Ok(())
}

/// A file to be written, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: &'static str,
    pub contents: String,
}

pub fn render(config: &RunConfig, stage: Stage, results: &PipelineResults) -> Vec<Artifact> {
    let mut files = Vec::new();
    if stage.potential() {
        files.push(Artifact {
            name: "potential_curve.csv",
            contents: potential_csv(results),
        });
    }
    if stage.slow_roll() {
        files.push(Artifact {
            name: "slowroll.csv",
            contents: slow_roll_csv(results),
        });
    }
    if stage.tunneling() {
        files.push(Artifact {
            name: "tunneling.csv",
            contents: tunneling_csv(results),
        });
    }
    if stage.kessence() {
        files.push(Artifact {
            name: "kessence_trajectory.csv",
            contents: fluid_csv(&results.trajectory, true),
        });
        files.push(Artifact {
            name: "kessence_sweep.csv",
            contents: fluid_csv(&results.sweep, false),
        });
    }
    let ledger = emit_claims_ledger(results);
    if config.report_format.text() {
        files.push(Artifact {
            name: "deviation_report.txt",
            contents: render_text(&ledger),
        });
    }
    if config.report_format.jsonl() {
        files.push(Artifact {
            name: "deviation_report.jsonl",
            contents: render_jsonl(&ledger),
        });
    }
    files
}

fn potential_csv(results: &PipelineResults) -> String {
    let mut csv = Csv::new(&["phi[M_p]", "V[M_p^4]", "V_prime[M_p^3]", "V_double_prime[M_p^2]"]);
    for row in &results.curve {
        csv.row(row.map(num));
    }
    csv.finish()
}

fn slow_roll_csv(results: &PipelineResults) -> String {
    let mut csv = Csv::new(&[
        "point",
        "phi[M_p]",
        "V[M_p^4]",
        "V_double_prime[M_p^2]",
        "abs_V_double_prime[M_p^2]",
        "H_sq[M_p^2]",
        "ratio[1]",
        "passes",
        "epsilon[1]",
        "eta[1]",
    ]);
    for p in &results.slow_roll {
        let r = &p.report;
        csv.row([
            p.label.to_owned(),
            num(r.phi),
            num(r.v),
            num(r.v_pp),
            num(r.lhs),
            num(r.rhs),
            num(r.ratio),
            p.passes.to_string(),
            num(p.pressure.epsilon),
            num(p.pressure.eta),
        ]);
    }
    csv.finish()
}

fn tunneling_csv(results: &PipelineResults) -> String {
    let mut csv = Csv::new(&[
        "scenario",
        "phi_false[M_p]",
        "phi_true[M_p]",
        "gap[M_p^4]",
        "x[M_p^4]",
        "delta_e_brackets[M_p]",
        "alpha[1]",
        "length[1/M_p]",
        "c_initial[1]",
        "c_final[1]",
        "s_e[1]",
        "s_b[1]",
        "gamma[M_p^4]",
        "gamma_overflow",
        "rho_i[M_p^4]",
        "s_i[1]",
        "n_density[M_p^3]",
        "t_closed[1]",
        "t_closed_underflow",
        "t_functional[1]",
    ]);
    for row in &results.tunneling {
        let (i, r) = (&row.inputs, &row.result);
        csv.row([
            row.scenario.to_owned(),
            num(i.phi_false),
            num(i.phi_true),
            num(i.gap),
            num(i.x),
            num(i.brackets.delta_e_gap),
            num(r.alpha),
            num(r.length),
            num(r.c_initial),
            num(r.c_final),
            num(r.s_e),
            num(r.s_b),
            num(r.gamma.gamma),
            r.gamma.overflow.to_string(),
            num(r.gamma.rho_i),
            num(r.gamma.s_i),
            num(r.n_density),
            num(r.t_closed.value),
            r.t_closed.underflow.to_string(),
            num(r.t_functional),
        ]);
    }
    csv.finish()
}

fn fluid_csv(samples: &[FluidSample], with_time: bool) -> String {
    let mut header = vec!["t[1/M_p]"];
    header.extend([
        "eps[M_p^4]",
        "X[M_p^4]",
        "w[1]",
        "cs2_exact[1]",
        "cs2_printed[1]",
        "causality_violation",
        "regime",
    ]);
    let header = if with_time { &header[..] } else { &header[1..] };
    let mut csv = Csv::new(header);
    for s in samples {
        let mut cells = Vec::with_capacity(header.len());
        if with_time {
            cells.push(num(s.state.t));
        }
        cells.extend([
            num(s.state.eps),
            num(s.state.x),
            opt_num(s.diag.w),
            opt_num(s.diag.cs2_exact),
            opt_num(s.diag.cs2_printed),
            s.diag.causality_violation.to_string(),
            s.regime.label().to_owned(),
        ]);
        csv.row(cells);
    }
    csv.finish()
}

/// Creates `dir` and writes the artifacts into it.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, RunError> {
    let io = |path: &Path| {
        let path = path.to_owned();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(a.name);
            std::fs::write(&path, &a.contents).map_err(io(&path))?;
            Ok(path)
        })
        .collect()
}

/// Validate, compute, render, write. Returns the written paths.
pub fn run_pipeline(config: &RunConfig, stage: Stage, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let results = compute(config, stage)?;
    write_artifacts(dir, &render(config, stage, &results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_compute_fills_every_stage() {
        let r = compute(&RunConfig::default(), Stage::All).unwrap();
        assert_eq!(r.curve.len(), 1001);
        assert_eq!(r.slow_roll.len(), 3);
        assert!(r.slow_roll.iter().all(|p| p.passes));
        assert_eq!(r.tunneling.len(), 2);
        assert_eq!(r.trajectory.len(), 1025);
        assert_eq!(r.sweep.len(), 141);
        assert_eq!(r.suppression.len(), 2);
    }

    #[test]
    fn kessence_stage_skips_potential() {
        let r = compute(&RunConfig::default(), Stage::KEssence).unwrap();
        assert!(r.vacua.is_none() && r.curve.is_empty());
        let names: Vec<_> = render(&RunConfig::default(), Stage::KEssence, &r)
            .into_iter()
            .map(|a| a.name)
            .collect();
        assert!(!names.contains(&"potential_curve.csv"));
        assert!(names.contains(&"deviation_report.txt"));
    }

    #[test]
    fn config_errors_map_to_two() {
        let mut c = RunConfig::default();
        c.potential.m = -1.0;
        let e = compute(&c, Stage::All).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn numeric_errors_map_to_one() {
        // a single well has no false vacuum
        let mut c = RunConfig::default();
        c.potential.amplitude = 1e-3;
        let e = compute(&c, Stage::Potential).unwrap_err();
        assert!(matches!(e, RunError::Numeric { op: "classify_vacua", .. }));
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn sweep_passes_through_three_regimes() {
        let r = compute(&RunConfig::default(), Stage::KEssence).unwrap();
        let regimes: Vec<_> = r.sweep.iter().map(|s| s.regime).collect();
        for want in [Regime::Radiation, Regime::DarkMatter, Regime::DarkEnergy] {
            assert!(regimes.contains(&want), "{want:?} missing");
        }
    }
}
