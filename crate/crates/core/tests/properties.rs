mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn product_matches_matrix_product(a in polynomial(), b in polynomial()) {
        check_product(&a, &b)?;
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn commutator_is_antisymmetric(a in polynomial(), b in polynomial()) {
        check_antisymmetry(&a, &b)?;
    }

    #[test]
    fn commutator_satisfies_jacobi(a in polynomial(), b in polynomial(), c in polynomial()) {
        check_jacobi(&a, &b, &c)?;
    }

    #[test]
    fn adjoint_reverses_products(a in polynomial(), b in polynomial()) {
        check_adjoint(&a, &b)?;
    }

    #[test]
    fn derivatives_match_finite_differences(spec in device(), phi in -4.0f64..4.0, k in 1u32..6) {
        check_derivative(&spec, phi, k)?;
    }

    #[test]
    fn snail_without_flux_has_no_odd_couplings(alpha in 0.05f64..0.95, n in 1u32..6, zpf in 0.05f64..0.5) {
        check_snail_odd(alpha, n, zpf)?;
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn order_m_terms_scale_as_lambda_to_the_m(n in 1i64..7, d in 1i64..5) {
        check_lambda_scaling(n, d)?;
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn static_evolution_conserves_norm(
        entries in prop::collection::vec(-1.0f64..1.0, 64),
        re in -1.5f64..1.5,
        im in -1.5f64..1.5,
        t in 0.0f64..50.0,
    ) {
        check_static_norm(&entries, (re, im), t)?;
    }

    #[test]
    fn driven_evolution_conserves_norm(
        entries in prop::collection::vec(-1.0f64..1.0, 64),
        drive in 0.0f64..2.0,
        freq in 0.5f64..5.0,
    ) {
        check_driven_norm(&entries, drive, freq)?;
    }
}

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn abs_expectation_is_rotation_invariant(
        amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        theta in -10.0f64..10.0,
    ) {
        check_rotation_invariance(&amps, theta)?;
    }
}
