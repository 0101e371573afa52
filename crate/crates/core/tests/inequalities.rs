use proptest::prelude::*;

use wgn_core::constants::ConstantsBundle;
use wgn_core::functionals::{faber_krahn_ratio, gn_ratio, weighted_lq, TestFunction};
use wgn_core::geometry::{omega_se_reference, sphere_cone_quadrature, Cone, Weight};
use wgn_core::{derive_params, Mode};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    // Equality at the extremal for equal monomial weights x₁^a x₂^b.
    #[test]
    fn extremal_attains_sharp_constant(a in 0.0f64..2.0, b in 0.0f64..2.0, frac in 0.1f64..0.9,
                                       lambda in 0.2f64..5.0, above in proptest::bool::ANY) {
        let cone = Cone::positive_orthant(2).unwrap();
        let grid = sphere_cone_quadrature(&cone, 64).unwrap();
        let w = Weight::monomial(vec![a, b]).unwrap();
        let dim = 2.0 + a + b;
        let gamma = if above { 1.0 + 2.0 * frac } else {
            let lower = 1.0 - 1.0 / dim;
            lower + frac * (1.0 - lower)
        };
        let params = derive_params(2, 2.0, gamma).unwrap();
        let ball = omega_se_reference(&w, &cone).unwrap() / dim;
        let bundle = ConstantsBundle::equal_weight(&params, a + b, ball).unwrap();
        let u = match params.mode {
            Mode::GammaLt1 => TestFunction::power_extremal(&params, 1.0, lambda, vec![0.0, 0.0]),
            _ => TestFunction::compact_extremal(&params, 1.0, lambda, vec![0.0, 0.0]),
        }.unwrap();
        let r = gn_ratio(&u, &w, &w, &w, &bundle, &params, &cone, &grid).unwrap();
        prop_assert!((r.ratio - 1.0).abs() < 1e-6, "γ = {gamma}: {}", r.ratio);
    }

    #[test]
    fn off_centre_bumps_obey_gn(cx in 0.1f64..2.0, cy in 0.1f64..2.0, radius in 0.2f64..2.0,
                                power in 2.0f64..5.0, gamma in 0.78f64..0.97) {
        let cone = Cone::positive_orthant(2).unwrap();
        let grid = sphere_cone_quadrature(&cone, 64).unwrap();
        let w = Weight::monomial(vec![1.0, 1.0]).unwrap();
        let params = derive_params(2, 2.0, gamma).unwrap();
        let bundle = ConstantsBundle::equal_weight(&params, 2.0, 0.125).unwrap();
        let u = TestFunction::bump(&params, 1.0, vec![cx, cy], radius, power).unwrap();
        let r = gn_ratio(&u, &w, &w, &w, &bundle, &params, &cone, &grid).unwrap();
        prop_assert!(r.ratio <= 1.0 + 1e-6, "{}", r.ratio);
    }

    #[test]
    fn rescaling_keeps_the_base_norm(cx in 0.0f64..1.5, radius in 0.3f64..2.0, lambda in 0.05f64..20.0) {
        let cone = Cone::orthant_mask(vec![true, false]).unwrap();
        let grid = sphere_cone_quadrature(&cone, 64).unwrap();
        let w = Weight::monomial(vec![1.0, 0.0]).unwrap();
        let params = derive_params(2, 2.0, 0.8).unwrap();
        let q = params.alpha * params.p;
        let u = TestFunction::bump(&params, 1.0, vec![cx, 0.5], radius, 3.0).unwrap();
        let a = weighted_lq(&u, q, &w, &cone, &grid).unwrap();
        let b = weighted_lq(&u.rescale(lambda, 1.0).unwrap(), q, &w, &cone, &grid).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn faber_krahn_in_three_dimensions(cx in 0.1f64..1.0, radius in 0.3f64..1.5, lambda in 0.3f64..3.0) {
        let cone = Cone::positive_orthant(3).unwrap();
        let grid = sphere_cone_quadrature(&cone, 32).unwrap();
        let w = Weight::monomial(vec![1.0, 0.0, 0.0]).unwrap();
        let params = derive_params(3, 2.0, 1.0).unwrap();
        let extremal = TestFunction::truncated_power(&params, lambda, params.p_conj).unwrap();
        let r = faber_krahn_ratio(&extremal, &w, &params, &cone, &grid).unwrap();
        prop_assert!((r.ratio - 1.0).abs() < 1e-8);
        let bump = TestFunction::bump(&params, 1.0, vec![cx, cx, cx], radius, 2.0).unwrap();
        let r = faber_krahn_ratio(&bump, &w, &params, &cone, &grid).unwrap();
        prop_assert!(r.ratio <= 1.0 + 1e-6, "{}", r.ratio);
    }
}
