//! End-to-end acceptance checks. Each test prints one PASS/FAIL line; run
//! with `--nocapture` to see them. Tolerances are pinned in the constants.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nuclab_core::kessence::{epsilon_closed_form, f_eval};
use nuclab_core::potential::Interval;
use nuclab_core::tunneling::{matrix_element_functional, normalization_constant, WaveFunctional, WaveKind};
use nuclab_core::units::EFFECTIVE_MASS;
use nuclab_core::{
    classify_vacua, evolve_epsilon, find_stationary_points, fluid_diagnostics, slow_roll_check, DecayVariant,
    KEssenceModel, PotentialSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use statrs::function::erf::erf;

const BRUTE_FORCE_POINTS: usize = 1_000_000;
const STATIONARY_TOL: f64 = 1e-10;
const ORACLE_RUNTIME_S: f64 = 5.0;
const SLOW_ROLL_THRESHOLD: f64 = 0.15;
const DERIVATIVE_REL_TOL: f64 = 1e-6;
const ANTISYMMETRY_REL_TOL: f64 = 1e-9;
const NORMALIZATION_TOL: f64 = 1e-9;
const HALF_GAUSSIAN_TOL: f64 = 1e-6;
const W_EXACT_TOL: f64 = 1e-14;
const W_INVARIANCE_TOL: f64 = 1e-12;
const CS2_TOL: f64 = 1e-12;
const RK4_TOL: f64 = 1e-8;
const RK4_STEPS: usize = 256;
const RK4_RATIO: (f64, f64) = (14.0, 18.0);
const SUPPRESSION_REL_TOL: f64 = 1e-10;
const SEED: u64 = 0x5eed;

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    println!("criterion {n} [{name}]: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn nuclab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nuclab"));
    c.env_remove("NUCLAB_OUT").env_remove("RUST_LOG");
    c
}

fn read_dir_sorted(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn criterion_1_stationary_points_match_brute_force() {
    let start = Instant::now();
    let spec = PotentialSpec::default();
    let range = Interval::default();
    let found = find_stationary_points(&spec, range, 4096).unwrap();

    let h = (range.hi - range.lo) / (BRUTE_FORCE_POINTS - 1) as f64;
    let d1 = |i: usize| spec.v1_derivatives(range.lo + i as f64 * h).0;
    let mut brute = Vec::new();
    let mut prev = d1(0);
    for i in 1..BRUTE_FORCE_POINTS {
        let cur = d1(i);
        if prev == 0.0 || prev.signum() != cur.signum() {
            brute.push(range.lo + (i as f64 - 0.5) * h);
        }
        prev = cur;
    }
    let elapsed = start.elapsed().as_secs_f64();

    let same_count = brute.len() == found.len();
    let max_offset = found
        .iter()
        .zip(&brute)
        .map(|(p, b)| (p.phi - b).abs())
        .fold(0.0, f64::max);
    let max_slope = found
        .iter()
        .map(|p| spec.v1_derivatives(p.phi).0.abs())
        .fold(0.0, f64::max);
    let ok = same_count && max_offset <= h && max_slope < STATIONARY_TOL && elapsed < ORACLE_RUNTIME_S;
    report(
        1,
        "stationary points vs 1e6-point scan",
        ok,
        &format!(
            "roots {} vs {}, max offset {max_offset:.3e} <= spacing {h:.3e}, max |V'| {max_slope:.3e}, {elapsed:.2} s",
            found.len(),
            brute.len()
        ),
    );
}

#[test]
fn criterion_2_ledger_is_populated() {
    let dir = tempfile::tempdir().unwrap();
    let status = nuclab().arg("--out").arg(dir.path()).arg("all").status().unwrap();
    let jsonl = std::fs::read_to_string(dir.path().join("deviation_report.jsonl")).unwrap();
    let entries: BTreeMap<String, Value> = jsonl
        .lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).unwrap();
            (v["id"].as_str().unwrap().to_owned(), v)
        })
        .collect();

    let required = [
        "phi_false",
        "phi_true",
        "phi_star",
        "vacuum_gap",
        "delta_e_published_vacua",
        "v_false",
        "curvature_true",
        "hubble_sq_true",
        "curvature_false",
        "hubble_sq_false",
        "curvature_star",
        "hubble_sq_star",
        "length_vacuum_gap",
    ];
    let missing: Vec<_> = required
        .iter()
        .filter(|id| {
            entries
                .get(**id)
                .is_none_or(|e| !e["published"].is_f64() || !e["recomputed"].is_f64())
        })
        .collect();
    let sources_ok = entries.values().all(|e| e["source"].as_str().is_some_and(|s| !s.is_empty()));
    let echo = &entries["phi_star"];
    let echo_ok = echo["abs_deviation"].as_f64() == Some(0.0) && echo["status"] == "match";
    let ok = status.success() && missing.is_empty() && sources_ok && echo_ok;
    report(
        2,
        "ledger population",
        ok,
        &format!(
            "exit {:?}, {} entries, missing {missing:?}, phi* deviation {}",
            status.code(),
            entries.len(),
            echo["abs_deviation"]
        ),
    );
}

#[test]
fn criterion_3_slow_roll_holds_at_three_points() {
    let spec = PotentialSpec::default();
    let pts = find_stationary_points(&spec, Interval::default(), 4096).unwrap();
    let pair = classify_vacua(&spec, &pts).unwrap();
    let mut detail = Vec::new();
    let mut ok = true;
    for (label, phi) in [("phi_F", pair.phi_false), ("phi_T", pair.phi_true), ("phi*", spec.phi_star)] {
        let r = slow_roll_check(&spec, phi, true).unwrap();
        ok &= r.ratio < SLOW_ROLL_THRESHOLD;
        detail.push(format!(
            "{label}={phi:.10}: |V''|={:.10} H^2={:.10} ratio={:.10}",
            r.lhs, r.rhs, r.ratio
        ));
    }
    report(3, "slow roll at phi_F, phi_T, phi*", ok, &detail.join("; "));
}

fn rel_err(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(1.0)
}

#[test]
fn criterion_4_derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let spec = PotentialSpec::default();
    let model = KEssenceModel { f0: -0.7, f2: 1.3, x0: 0.8, v0: 0.775 };
    // second differences need a wider step to stay clear of round-off
    let (h, h2) = (1e-5, 1e-3);
    let mut worst_v = 0.0f64;
    let mut worst_f = 0.0f64;
    for _ in 0..100 {
        let phi: f64 = rng.random_range(-10.0..10.0);
        let (d1, d2) = spec.v1_derivatives(phi);
        let fd1 = (spec.v1(phi + h) - spec.v1(phi - h)) / (2.0 * h);
        let fd2 = (spec.v1(phi + h2) - 2.0 * spec.v1(phi) + spec.v1(phi - h2)) / (h2 * h2);
        worst_v = worst_v.max(rel_err(d1, fd1)).max(rel_err(d2, fd2));

        let x: f64 = rng.random_range(0.0..3.0);
        let e = f_eval(&model, x);
        let f = |x: f64| f_eval(&model, x).f;
        let fd_x = (f(x + h) - f(x - h)) / (2.0 * h);
        let fd_xx = (f(x + h2) - 2.0 * f(x) + f(x - h2)) / (h2 * h2);
        worst_f = worst_f.max(rel_err(e.f_x, fd_x)).max(rel_err(e.f_xx, fd_xx));
    }
    let ok = worst_v < DERIVATIVE_REL_TOL && worst_f < DERIVATIVE_REL_TOL;
    report(
        4,
        "analytic derivatives vs central differences",
        ok,
        &format!("worst V {worst_v:.3e}, worst F {worst_f:.3e}, tol {DERIVATIVE_REL_TOL:e}"),
    );
}

#[test]
fn criterion_5_tunneling_antisymmetry_and_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_anti = 0.0f64;
    let mut worst_norm = 0.0f64;
    for _ in 0..10 {
        let alpha = rng.random_range(0.01..2.0);
        let upper = rng.random_range(3.0..10.0);
        let ci = rng.random_range(0.0..2.0);
        let cf = rng.random_range(2.0..upper - 0.5);
        let phi_0 = rng.random_range(0.0..ci + 0.5);
        let i = WaveFunctional::new(WaveKind::Initial, ci, alpha, upper).unwrap();
        let f = WaveFunctional::new(WaveKind::Final, cf, alpha, upper).unwrap();
        let fwd = matrix_element_functional(&i, &f, phi_0, upper, EFFECTIVE_MASS).unwrap();
        let rev = matrix_element_functional(&f, &i, phi_0, upper, EFFECTIVE_MASS).unwrap();
        worst_anti = worst_anti.max((fwd + rev).abs() / fwd.abs());
        for w in [i, f] {
            let integral = 0.5 * (PI / (2.0 * alpha)).sqrt() * erf(upper * (2.0 * alpha).sqrt());
            worst_norm = worst_norm.max((w.c_norm * w.c_norm * integral - 1.0).abs());
        }
    }
    let a = 1e4;
    let large = normalization_constant(a, 2.0 * PI).unwrap();
    let half_gaussian = (8.0 * a / PI).powf(0.25);
    let limit_err = (large - half_gaussian).abs() / half_gaussian;
    let ok = worst_anti < ANTISYMMETRY_REL_TOL && worst_norm < NORMALIZATION_TOL && limit_err < HALF_GAUSSIAN_TOL;
    report(
        5,
        "tunneling antisymmetry and normalization",
        ok,
        &format!("antisymmetry {worst_anti:.3e}, normalization {worst_norm:.3e}, half-Gaussian limit {limit_err:.3e}"),
    );
}

#[test]
fn criterion_6_kessence_exactness() {
    let model = KEssenceModel::default();
    let at_x0 = fluid_diagnostics(&model, model.x0, 0.775).unwrap().w.unwrap();
    let flat = KEssenceModel { f2: 0.0, ..model };
    let mut worst_w = (at_x0 + 1.0).abs();
    let mut worst_inv = 0.0f64;
    let mut worst_cs2 = 0.0f64;
    for x in [0.3, 0.9, 1.2, 2.5, 7.0] {
        worst_w = worst_w.max((fluid_diagnostics(&flat, x, 0.4).unwrap().w.unwrap() + 1.0).abs());
        let w1 = fluid_diagnostics(&model, x, 0.6).unwrap().w.unwrap();
        let w10 = fluid_diagnostics(&model, x, 6.0).unwrap().w.unwrap();
        worst_inv = worst_inv.max((w1 - w10).abs());
        let eps = x - model.x0;
        let cs2 = fluid_diagnostics(&model, x, 0.6).unwrap().cs2_exact.unwrap();
        worst_cs2 = worst_cs2.max((cs2 - eps / (3.0 * eps + 2.0 * model.x0)).abs());
    }

    // exact rate over half a Planck time, printed rate over 0.2
    let mut worst_rk4 = 0.0f64;
    let mut ratios = Vec::new();
    for (variant, t_end) in [(DecayVariant::Exact, 0.5), (DecayVariant::Printed, 0.2)] {
        let err = |steps: usize| {
            evolve_epsilon(&model, 1e-3, t_end, steps, variant)
                .unwrap()
                .iter()
                .map(|s| {
                    let exact = epsilon_closed_form(&model, 1e-3, s.t, variant).unwrap();
                    (s.eps - exact).abs() / exact
                })
                .fold(0.0, f64::max)
        };
        let coarse = err(RK4_STEPS);
        worst_rk4 = worst_rk4.max(coarse);
        ratios.push(coarse / err(2 * RK4_STEPS));
    }
    let order_ok = ratios.iter().all(|r| (RK4_RATIO.0..=RK4_RATIO.1).contains(r));
    let ok = worst_w < W_EXACT_TOL
        && worst_inv < W_INVARIANCE_TOL
        && worst_cs2 < CS2_TOL
        && worst_rk4 < RK4_TOL
        && order_ok;
    report(
        6,
        "k-essence exactness",
        ok,
        &format!(
            "w=-1 {worst_w:.1e}, w(v)-w(10v) {worst_inv:.1e}, cs2 {worst_cs2:.1e}, rk4 {worst_rk4:.3e}, halving ratios {ratios:.3?}"
        ),
    );
}

#[test]
fn criterion_7_suppression_magnitude() {
    let model = KEssenceModel::default();
    let direct = (-8.0 * PI * 0.775f64).exp();
    let closed = epsilon_closed_form(&model, 1.0, 1.0, DecayVariant::Printed).unwrap();
    let rk4 = evolve_epsilon(&model, 1.0, 1.0, 16384, DecayVariant::Printed)
        .unwrap()
        .last()
        .unwrap()
        .eps;
    let closed_err = (closed - direct).abs() / direct;
    let rk4_err = (rk4 - direct).abs() / direct;
    let ok = closed_err < SUPPRESSION_REL_TOL && rk4_err < SUPPRESSION_REL_TOL && closed < 1.0;
    report(
        7,
        "eps/eps0 suppression after one Planck time",
        ok,
        &format!("direct {direct:.6e}, closed form err {closed_err:.1e}, rk4 err {rk4_err:.1e}"),
    );
}

#[test]
fn criterion_8_determinism_and_invalid_config() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path| nuclab().arg("--out").arg(dir).status().unwrap().success();
    let both_ok = run(a.path()) && run(b.path());
    let files_a = read_dir_sorted(a.path());
    let identical = !files_a.is_empty() && files_a == read_dir_sorted(b.path());

    let scratch = tempfile::tempdir().unwrap();
    let target = scratch.path().join("out");
    let flag = nuclab().arg("--out").arg(&target).arg("--m=-1").status().unwrap();
    let conf = scratch.path().join("bad.conf");
    std::fs::write(&conf, "m = 0\n").unwrap();
    let file = nuclab()
        .arg("--out")
        .arg(&target)
        .arg("--config")
        .arg(&conf)
        .status()
        .unwrap();
    let nothing_written = !target.exists();
    let ok = both_ok && identical && flag.code() == Some(2) && file.code() == Some(2) && nothing_written;
    report(
        8,
        "determinism and invalid config",
        ok,
        &format!(
            "{} files identical: {identical}, m=-1 exit {:?}, m=0 exit {:?}, output absent: {nothing_written}",
            files_a.len(),
            flag.code(),
            file.code()
        ),
    );
}
