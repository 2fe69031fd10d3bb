use chm6_core::families::{dita_d6, family_h, fourier_f6, ParamPoint};
use chm6_core::{EquivalenceWitness, UnitMatrix, DEFAULT_PRECISION};
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn angle() -> impl Strategy<Value = f64> {
    -FRAC_PI_2 + 1e-3..FRAC_PI_2
}

/// Keeps clear of the corner direction where `1 + sin x1 sin x2` vanishes.
fn h_member() -> impl Strategy<Value = UnitMatrix> {
    (angle(), angle())
        .prop_filter("near the excluded corner", |&(a, b)| (1.0 + a.sin() * b.sin()).abs() > 1e-3)
        .prop_map(|(a, b)| family_h(ParamPoint::new(a, b)).unwrap())
}

fn any_member() -> impl Strategy<Value = UnitMatrix> {
    prop_oneof![
        h_member(),
        (angle(), angle()).prop_map(|(a, b)| fourier_f6(a, b)),
        (angle(), angle()).prop_map(|(a, b)| fourier_f6(a, b).transpose()),
        (-FRAC_PI_4..FRAC_PI_4).prop_map(|c| dita_d6(c).unwrap()),
    ]
}

fn witness() -> impl Strategy<Value = EquivalenceWitness> {
    any::<u64>().prop_map(|s| EquivalenceWitness::random(6, &mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hadamard_survives_witnesses(h in any_member(), w in witness()) {
        let t = 1e-10;
        let moved = h.apply_equivalence(&w).unwrap();
        prop_assert_eq!(h.is_hadamard(t), moved.is_hadamard(t + 1e-14));
        prop_assert!(moved.is_hadamard(t + 1e-14));
    }

    #[test]
    fn dephase_is_idempotent(h in any_member(), w in witness()) {
        let (d, _) = h.apply_equivalence(&w).unwrap().dephase().unwrap();
        let (dd, _) = d.dephase().unwrap();
        prop_assert!(dd.max_abs_diff(&d) <= 1e-14);
    }

    #[test]
    fn dephase_witness_reproduces_result(h in any_member(), w in witness()) {
        let m = h.apply_equivalence(&w).unwrap();
        let (d, dw) = m.dephase().unwrap();
        prop_assert!(m.apply_equivalence(&dw).unwrap().max_abs_diff(&d) <= 1e-14);
        for k in 0..6 {
            prop_assert_eq!(d[(0, k)], num_complex::Complex64::new(1.0, 0.0));
            prop_assert_eq!(d[(k, 0)], num_complex::Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn unitarity_defect_under_dagger_and_transpose(
        entries in proptest::collection::vec(0.0..1.0f64, 36),
    ) {
        let m = UnitMatrix::new(6, entries.iter().map(|&t| num_complex::Complex64::from_polar(1.0, 2.0 * PI * t)).collect()).unwrap();
        let u = m.unitarity_defect();
        prop_assert!((u - m.dagger().unitarity_defect()).abs() <= 1e-14);
        prop_assert!((u - m.transpose().unitarity_defect()).abs() <= 1e-14);
    }

    #[test]
    fn composed_witness_acts_in_sequence(h in any_member(), w1 in witness(), w2 in witness()) {
        let stepwise = h.apply_equivalence(&w1).unwrap().apply_equivalence(&w2).unwrap();
        let at_once = h.apply_equivalence(&w1.then(&w2)).unwrap();
        prop_assert!(stepwise.max_abs_diff(&at_once) <= 1e-14);
    }

    #[test]
    fn fingerprint_is_blind_to_transposition(h in any_member()) {
        let a = h.fingerprint(DEFAULT_PRECISION).unwrap();
        let b = h.transpose().fingerprint(DEFAULT_PRECISION).unwrap();
        prop_assert!(a.matches(&b));
    }
}

#[test]
fn fingerprint_invariant_under_random_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let p = loop {
            let p = ParamPoint::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if (1.0 + p.x1.sin() * p.x2.sin()).abs() > 1e-3 {
                break p;
            }
        };
        let h = family_h(p).unwrap();
        let reference = h.fingerprint(DEFAULT_PRECISION).unwrap();
        for _ in 0..200 {
            let w = EquivalenceWitness::random(6, &mut rng);
            let moved = h.apply_equivalence(&w).unwrap().fingerprint(DEFAULT_PRECISION).unwrap();
            assert_eq!(moved, reference, "at {p:?}");
        }
    }
}
