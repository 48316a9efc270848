use acm_core::arrangement::{arrangement_dims, arrangement_dims_with, lift_reduced, reduced_dims, Method};
use acm_core::classify::classify;
use acm_core::series::{expand, numerator, HilbertData};
use acm_core::verdict::Status;
use acm_core::{AcmError, Field, Partition};
use proptest::prelude::*;

const P: Field = Field::Prime(32003);

fn small_partition() -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1u32..4, 1..4).prop_map(|v| Partition::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn isotypic_matches_direct(lambda in small_partition(), d in 0u32..5) {
        let a = reduced_dims(&lambda, d, P, Method::Isotypic).unwrap();
        let b = reduced_dims(&lambda, d, P, Method::Direct).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn full_dims_lift_reduced_ones(lambda in small_partition()) {
        let d = lambda.n() as u32 + 2;
        let h = arrangement_dims(&lambda, d, P).unwrap();
        let h0 = reduced_dims(&lambda, d, P, Method::Isotypic).unwrap();
        prop_assert_eq!(lift_reduced(&h0), h.dims.clone());
        prop_assert_eq!(h.dims[0], 1);
        // A single point when all parts are equal to the whole.
        if lambda.len() == 1 {
            prop_assert!(h.dims.iter().all(|&x| x == 1));
        }
    }

    #[test]
    fn numerator_round_trip(dims in proptest::collection::vec(0u64..40, 1..12), degs in proptest::collection::vec(1u32..4, 0..4)) {
        let num = numerator(&dims, &degs);
        let back = expand(&num, &degs, dims.len() - 1);
        let want: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
        prop_assert_eq!(back, want);
    }

    #[test]
    fn hilbert_json_round_trip(dims in proptest::collection::vec(0u64..1000, 1..10), p in prop_oneof![Just(Field::Rational), Just(P)]) {
        let h = HilbertData::new(dims, vec![1, 1], p);
        let s = serde_json::to_string(&h).unwrap();
        let back: HilbertData = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn classification_json_round_trip(lambda in small_partition()) {
        let c = classify(&lambda).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: acm_core::classify::Classification = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn classifier_respects_transfers(parts in proptest::collection::vec(1u32..9, 1..6)) {
        let lambda = Partition::new(parts).unwrap();
        let c = classify(&lambda).unwrap();
        if c.arrangement.status == Status::Cm {
            prop_assert_ne!(c.quotient.status, Status::NotCm);
        }
        if c.quotient.status == Status::NotCm {
            prop_assert_ne!(c.arrangement.status, Status::Cm);
        }
    }

    #[test]
    fn quotient_verdict_is_scale_invariant(parts in proptest::collection::vec(1u32..6, 1..5), k in 2u32..4) {
        let lambda = Partition::new(parts.clone()).unwrap();
        let scaled = Partition::new(parts.iter().map(|x| x * k).collect()).unwrap();
        let a = classify(&lambda).unwrap().quotient.status;
        let b = classify(&scaled).unwrap().quotient.status;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn small_characteristic_is_rejected() {
    let lambda = Partition::new(vec![3, 2, 1]).unwrap();
    let e = arrangement_dims_with(&lambda, 3, Field::Prime(5), Method::Isotypic).unwrap_err();
    assert!(matches!(e, AcmError::PrimeTooSmall { p: 5, n: 6 }));
}

#[test]
fn exact_and_modular_dims_agree() {
    for n in 1..=7 {
        for lambda in Partition::all(n) {
            let d = n as u32 + 2;
            let q = arrangement_dims(&lambda, d, Field::Rational).unwrap();
            let p = arrangement_dims(&lambda, d, P).unwrap();
            assert_eq!(q.dims, p.dims, "{lambda}");
        }
    }
}
