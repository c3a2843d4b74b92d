use nuclab_core::kessence::{
    classify_regime, epsilon_closed_form, evolve_epsilon, f_eval, fluid_diagnostics, DecayVariant, KEssenceModel,
    Regime,
};
use proptest::prelude::*;

fn max_rel_error(model: &KEssenceModel, variant: DecayVariant, t_end: f64, steps: usize) -> f64 {
    evolve_epsilon(model, 1e-3, t_end, steps, variant)
        .unwrap()
        .iter()
        .map(|s| {
            let exact = epsilon_closed_form(model, 1e-3, s.t, variant).unwrap();
            ((s.eps - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn sound_speed_reduces_to_offset_law(x0 in 0.1..10.0f64, eps in 1e-6..5.0f64, f2 in 0.1..3.0f64, f0 in -3.0..-0.1f64) {
        let m = KEssenceModel { f0, f2, x0, v0: 0.775 };
        let d = fluid_diagnostics(&m, x0 + eps, 0.775).unwrap();
        let law = eps / (3.0 * eps + 2.0 * x0);
        prop_assert!((d.cs2_exact.unwrap() - law).abs() <= 1e-12 * law);
        prop_assert!(!d.causality_violation);
    }

    #[test]
    fn constant_f_is_cosmological_constant(x in 0.0..50.0f64, f0 in -4.0..-0.01f64, v in 0.01..10.0f64) {
        let m = KEssenceModel { f0, f2: 0.0, x0: 1.0, v0: 0.775 };
        let w = fluid_diagnostics(&m, x, v).unwrap().w.unwrap();
        prop_assert!((w + 1.0).abs() < 1e-14);
    }

    #[test]
    fn slope_matches_finite_difference(x in -5.0..5.0f64) {
        let m = KEssenceModel { f0: -0.4, f2: 1.7, x0: 0.8, v0: 0.775 };
        let h = 1e-5;
        let e = f_eval(&m, x);
        let fd1 = (f_eval(&m, x + h).f - f_eval(&m, x - h).f) / (2.0 * h);
        let fd2 = (f_eval(&m, x + h).f_x - f_eval(&m, x - h).f_x) / (2.0 * h);
        prop_assert!((fd1 - e.f_x).abs() <= 1e-6 * e.f_x.abs().max(1e-3));
        prop_assert!((fd2 - e.f_xx).abs() <= 1e-6 * e.f_xx.abs());
    }

    #[test]
    fn decay_keeps_sign_and_shrinks(eps0 in -1.0..1.0f64, v0 in 0.1..2.0f64) {
        prop_assume!(eps0 != 0.0);
        let m = KEssenceModel { v0, ..KEssenceModel::default() };
        let traj = evolve_epsilon(&m, eps0, 1.0, 64, DecayVariant::Exact).unwrap();
        for w in traj.windows(2) {
            prop_assert_eq!(w[1].eps.signum(), eps0.signum());
            prop_assert!(w[1].eps.abs() < w[0].eps.abs());
        }
    }
}

#[test]
fn rk4_is_fourth_order() {
    let m = KEssenceModel::default();
    for (variant, t_end) in [(DecayVariant::Exact, 0.5), (DecayVariant::Printed, 0.2)] {
        let coarse = max_rel_error(&m, variant, t_end, 256);
        let fine = max_rel_error(&m, variant, t_end, 512);
        assert!(coarse < 1e-8);
        let ratio = coarse / fine;
        assert!((ratio - 16.0).abs() < 2.0, "{variant}: ratio {ratio}");
    }
}

#[test]
fn sweep_moves_toward_dark_energy() {
    let m = KEssenceModel::default();
    let mut ws = Vec::new();
    let mut labels = Vec::new();
    // eps from 10 x0 down to 1e-6 x0, log-spaced
    for i in 0..=140 {
        let eps = m.x0 * 10f64.powf(1.0 - i as f64 / 20.0);
        let d = fluid_diagnostics(&m, m.x0 + eps, m.v0).unwrap();
        ws.push(d.w.unwrap());
        labels.push(classify_regime(&d));
    }
    for w in ws.windows(2) {
        assert!(w[1] < w[0]);
    }
    let rank = |r: Regime| match r {
        Regime::Radiation => 0,
        Regime::DarkMatter => 1,
        Regime::DarkEnergy => 2,
        _ => -1,
    };
    let named: Vec<i32> = labels.iter().map(|&r| rank(r)).filter(|&k| k >= 0).collect();
    assert!(named.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(labels.first(), Some(&Regime::Radiation));
    assert_eq!(labels.last(), Some(&Regime::DarkEnergy));
    assert!(labels.contains(&Regime::DarkMatter));
}
