use std::f64::consts::PI;

use jcm_core::jcm::{
    pg_series, q_g, sigma_z_resonant_series, sigma_z_series, IntegralEngine, IntegralSpec, JcmConfig, Mode,
    SeriesSpec,
};
use proptest::prelude::*;

#[test]
fn series_and_integral_forms_agree_on_a_parameter_matrix() {
    let s = SeriesSpec::default();
    for alpha in [1.0, 2.0, 3.0] {
        for dw in [0.0, 1.0, 3.0] {
            let cfg = JcmConfig::new(1.0, dw, alpha).unwrap();
            let eng = IntegralEngine::new(cfg, IntegralSpec::default(), 3.0 * PI).unwrap();
            for k in 0..=12 {
                let t = 0.25 * PI * k as f64;
                let a = sigma_z_series(t, &cfg, &s).unwrap();
                let b = eng.sigma_z_integral(t).unwrap().value;
                assert!((a - b).abs() < 1e-4, "alpha={alpha} dw={dw} t={t}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn extended_precision_on_the_fine_grid() {
    let cfg = JcmConfig::new(1.0, 2.0, 2.5).unwrap();
    let spec = IntegralSpec::extended().with_steps(1e-4, 1e-3);
    let eng = IntegralEngine::new(cfg, spec, 2.0 * PI).unwrap();
    let s = SeriesSpec::default();
    for t in [0.0, 1.0, 3.5, 2.0 * PI] {
        let a = sigma_z_series(t, &cfg, &s).unwrap();
        let b = eng.sigma_z_integral(t).unwrap().value;
        assert!((a - b).abs() < 1e-6, "t={t}: {a} vs {b}");
    }
}

#[test]
fn q0_is_pg_in_integral_mode() {
    let cfg = JcmConfig::new(1.0, 1.0, 3.0).unwrap();
    let eng = IntegralEngine::new(cfg, IntegralSpec::default(), 6.0).unwrap();
    for t in [0.0, 2.0, 6.0] {
        let q = q_g(0, t, &cfg, Mode::Integral(&eng)).unwrap();
        assert!((q - eng.pg_integral(t).unwrap().value).abs() < 1e-14);
        assert!((q - pg_series(t, &cfg, &SeriesSpec::default()).unwrap()).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resonant_cosine_form(alpha in 0.0f64..7.0, t in 0.0f64..80.0) {
        let cfg = JcmConfig::resonant(alpha).unwrap();
        let s = SeriesSpec::for_alpha(alpha);
        let a = sigma_z_series(t, &cfg, &s).unwrap();
        let b = sigma_z_resonant_series(t, &cfg, &s).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn shifted_probabilities_bounded(alpha in -5.0f64..5.0, dw in -4.0f64..4.0, l in 0u32..5, t in 0.0f64..50.0) {
        let cfg = JcmConfig::new(1.0, dw, alpha).unwrap();
        let q = q_g(l, t, &cfg, Mode::Series(SeriesSpec::default())).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&q));
    }
}
