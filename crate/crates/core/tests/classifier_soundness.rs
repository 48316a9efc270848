//! Decided classifier verdicts never contradict direct computation.

use acm_core::arrangement::{cm_check_arrangement, CertifyPolicy, CmCheckOptions};
use acm_core::classify::classify;
use acm_core::cm::cm_verdict_subalgebra;
use acm_core::subalgebra::GeneratorFamily;
use acm_core::verdict::Status;
use acm_core::{Field, Partition};

fn arrangement_status(lambda: &Partition, policy: CertifyPolicy, max_deg: u32) -> Status {
    let mut opts = CmCheckOptions::new(lambda);
    opts.policy = policy;
    opts.max_deg = max_deg;
    opts.field = Field::Rational;
    opts.seed = 7;
    cm_check_arrangement(lambda, &opts).unwrap().verdict.status
}

#[test]
fn arrangement_verdicts_agree_with_cm_check() {
    for n in 1..=7 {
        for lambda in Partition::all(n) {
            let c = classify(&lambda).unwrap();
            if !c.arrangement.is_decided() {
                continue;
            }
            // Exact arithmetic through n = 5; two primes and a lower degree
            // bound above that, where an undecided check is not a contradiction.
            let (policy, max_deg) = if n <= 5 {
                (CertifyPolicy::Rational, 2 * n as u32)
            } else {
                (CertifyPolicy::TwoPrimes, n as u32 + 3)
            };
            let computed = arrangement_status(&lambda, policy, max_deg);
            assert!(
                computed == Status::Unknown || computed == c.arrangement.status,
                "{lambda}: classifier {} vs computed {computed}",
                c.arrangement
            );
        }
    }
}

#[test]
fn quotient_verdicts_agree_with_subalgebra_check() {
    for n in 1..=5 {
        for lambda in Partition::all(n) {
            let c = classify(&lambda).unwrap();
            // Certificates over Q stay cheap up to four variables.
            if !c.quotient.is_decided() || lambda.len() < 2 || lambda.len() > 4 {
                continue;
            }
            let fam = GeneratorFamily::invariants(&lambda, false).unwrap();
            let v = cm_verdict_subalgebra(&fam, None, CertifyPolicy::Rational, Field::Rational).unwrap();
            assert!(
                !v.verdict.contradicts(&c.quotient),
                "{lambda}: classifier {} vs computed {}",
                c.quotient,
                v.verdict
            );
        }
    }
}
