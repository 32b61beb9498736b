//! Cross-module invariants, a few of them property-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use mompoly_core::pattern::{count_naive, enumerate, DEFAULT_NODE_BUDGET};
use mompoly_core::polytope::{lattice_count_via_polytope, DEFAULT_POINT_BUDGET};
use mompoly_core::reference::keating_snaith;
use mompoly_core::transfer::{count_dp, DEFAULT_STATE_BUDGET};
use mompoly_core::verify::{denominators_divide_factorial, fit_polynomial};
use mompoly_core::{bijection, fit_quasi, interpolate_nodes, FamilySpec, RationalPoly};

fn rational(n: i64, d: u32) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d.max(1)))
}

fn small_poly() -> impl Strategy<Value = RationalPoly> {
    prop::collection::vec((-50i64..=50, 1u32..=12), 0..6)
        .prop_map(|cs| RationalPoly::from_coeffs(cs.into_iter().map(|(n, d)| rational(n, d)).collect()))
}

fn small_spec() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        Just(FamilySpec::unitary(1, 1)),
        Just(FamilySpec::unitary(1, 2)),
        Just(FamilySpec::unitary(2, 1)),
        Just(FamilySpec::symplectic(1, 1)),
        Just(FamilySpec::symplectic(1, 2)),
        Just(FamilySpec::symplectic(2, 1)),
    ]
}

proptest! {
    #[test]
    fn taylor_shift_round_trips(p in small_poly(), n in -20i64..=20, d in 1u32..=6) {
        let c = rational(n, d);
        prop_assert_eq!(p.taylor_shift(&c).taylor_shift(&(-c)), p);
    }

    #[test]
    fn shift_then_eval_is_eval_shifted(p in small_poly(), c in -9i64..=9, x in -9i64..=9) {
        let shifted = p.taylor_shift(&rational(c, 1));
        prop_assert_eq!(shifted.eval_int(x), p.eval_int(x + c));
    }

    #[test]
    fn interpolation_reproduces_nodes(ys in prop::collection::vec(-1000i64..=1000, 1..8)) {
        let points: Vec<(BigRational, BigRational)> = ys
            .iter()
            .enumerate()
            .map(|(i, &y)| (rational(i as i64, 1), rational(y, 1)))
            .collect();
        let p = interpolate_nodes(&points).unwrap();
        prop_assert!(p.degree().is_none_or(|d| d < ys.len()));
        for (x, y) in &points {
            prop_assert_eq!(&p.eval(x), y);
        }
    }

    #[test]
    fn quasi_fit_of_polynomial_data_collapses(
        coeffs in prop::collection::vec(-9i64..=9, 1..4),
        period in 1usize..=3,
    ) {
        let p = RationalPoly::from_coeffs(coeffs.into_iter().map(|c| rational(c, 1)).collect());
        let deg = p.degree().unwrap_or(0);
        let values: Vec<BigInt> = (0..(period as i64) * (deg as i64 + 1) + 4)
            .map(|n| p.eval_int(n).to_integer())
            .collect();
        let f = fit_quasi(&values, period, deg).unwrap();
        prop_assert!(f.collapses());
        prop_assert_eq!(f.component(0), &p);
    }

    #[test]
    fn strict_counts_never_exceed_lax(spec in small_spec(), n in 0i64..=6) {
        let lax = count_dp(&spec, n, false, DEFAULT_STATE_BUDGET).unwrap();
        let strict = count_dp(&spec, n, true, DEFAULT_STATE_BUDGET).unwrap();
        prop_assert!(strict <= lax);
    }

    #[test]
    fn bijection_round_trips_over_enumerations(spec in small_spec(), n in 0i64..=3) {
        for p in enumerate(&spec, n, false, DEFAULT_NODE_BUDGET).unwrap() {
            let image = bijection::apply_bijection(&p).unwrap();
            prop_assert_eq!(bijection::apply_inverse(&image).unwrap(), p);
        }
    }
}

#[test]
fn unitary_k1_counts_match_keating_snaith_product() {
    for q in 1..=3u32 {
        let p = keating_snaith(q);
        let spec = FamilySpec::unitary(1, q);
        for n in 0..=8i64 {
            let count = count_dp(&spec, n, false, DEFAULT_STATE_BUDGET).unwrap();
            assert_eq!(
                p.eval_int(n),
                BigRational::from_integer(count),
                "U(1;{q}) at N={n}"
            );
        }
    }
}

#[test]
fn lattice_sweep_agrees_with_dp_for_sp21() {
    let spec = FamilySpec::symplectic(2, 1);
    for n in 0..=3i64 {
        for interior in [false, true] {
            let lattice =
                lattice_count_via_polytope(&spec, n, interior, DEFAULT_POINT_BUDGET).unwrap();
            let dp = count_dp(&spec, n, interior, DEFAULT_STATE_BUDGET).unwrap();
            assert_eq!(lattice, dp, "N={n} interior={interior}");
        }
    }
}

#[test]
fn naive_count_cross_checks_fits() {
    // the polynomial fitted from DP counts also matches the backtracking
    // oracle at a node it never saw
    for spec in [FamilySpec::unitary(2, 1), FamilySpec::symplectic(1, 1)] {
        let p = fit_polynomial(&spec, DEFAULT_STATE_BUDGET).unwrap();
        let d = spec.dimension() as i64;
        let oracle = count_naive(&spec, d + 1, false, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(p.eval_int(d + 1), BigRational::from_integer(oracle), "{spec}");
        assert!(denominators_divide_factorial(&p), "{spec}");
    }
}
