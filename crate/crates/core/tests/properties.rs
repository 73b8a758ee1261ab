use proptest::prelude::*;
use riemann_aux::expansion::{eta_frame, remainder_r};
use riemann_aux::ext::ExtComplex;
use riemann_aux::region::{bound_U, bound_remainder, classify, zero_free_verdict, RegionLabel, RegionParams, VerdictKind};
use riemann_aux::Complex64;
use std::f64::consts::TAU;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn g_implies_h(sigma in -1e6f64..0.0, t in -1e6f64..1e5) {
        let s = Complex64::new(sigma, t);
        let labels = classify(s, &RegionParams::default());
        if labels.contains(&RegionLabel::G) {
            prop_assert!(labels.contains(&RegionLabel::H));
            let f = eta_frame(s).unwrap();
            prop_assert!(f.eta2 >= 5.0);
        }
    }

    #[test]
    fn wedge_lies_in_g_alpha(sigma in -1e5f64..1.0, t in -1e5f64..1e5) {
        let s = Complex64::new(sigma, t);
        let labels = classify(s, &RegionParams::default());
        if labels.contains(&RegionLabel::Wedge) {
            prop_assert!(labels.contains(&RegionLabel::GAlpha));
            prop_assert!(labels.contains(&RegionLabel::H));
            prop_assert_eq!(zero_free_verdict(s, &RegionParams::default()).verdict, VerdictKind::TrivialOnly);
        }
    }

    #[test]
    fn u_bound_decreases_with_radius(e1 in 3.0f64..30.0, e2 in 3.0f64..30.0, k in 1.05f64..2.0) {
        let at = |scale: f64| {
            let eta = Complex64::new(e1, e2) * scale;
            let s = Complex64::new(0.0, TAU) * eta * eta + 1.0;
            bound_U(&eta_frame(s).unwrap()).unwrap()
        };
        let (a, b) = (at(1.0), at(k));
        prop_assert!(b.r_bound <= a.r_bound * (1.0 + 1e-12));
        prop_assert!(a.log10_components["u_bound"].is_finite());
    }

    #[test]
    fn ext_product_matches_log_sum(a in -700.0f64..700.0, b in -700.0f64..700.0, p in -3.0f64..3.0, q in -3.0f64..3.0) {
        let x = ExtComplex::new(a, p) * ExtComplex::new(b, q);
        prop_assert!((x.log_modulus() - (a + b)).abs() <= 1e-12 * (1.0 + (a + b).abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn remainder_dominated(e1 in 2.0f64..15.0, e2 in 0.3f64..15.0) {
        let eta = Complex64::new(e1, e2);
        let s = Complex64::new(0.0, TAU) * eta * eta + 1.0;
        prop_assume!(s.re < 1.0 && (s - 1.0).norm() >= 4.0 * std::f64::consts::PI);
        let f = eta_frame(s).unwrap();
        let measured = remainder_r(&f, 1e-10).unwrap().ext().abs();
        prop_assert!(measured <= bound_remainder(&f).unwrap());
    }
}
