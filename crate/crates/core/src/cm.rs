//! Computed CM verdicts for Newton-sum subalgebras.

use crate::arrangement::CertifyPolicy;
use crate::certify::{freeness_certificate, verify_certificate, CertifyOptions, FreenessCertificate};
use crate::error::{AcmError, Result};
use crate::scalar::Field;
use crate::series::HilbertData;
use crate::subalgebra::{subalgebra_dims, GeneratorFamily};
use crate::verdict::{Certainty, RuleRef, Status, Verdict};

#[derive(Clone, Debug)]
pub struct SubalgebraVerdict {
    pub verdict: Verdict,
    /// Hilbert data over the first field of the policy.
    pub hilbert: HilbertData,
    pub bezout_rank: u64,
    pub max_deg: u32,
    pub certificates: Vec<FreenessCertificate>,
}

/// Default degree bound: twice the sum of the parameter degrees.
pub fn default_max_deg(fam: &GeneratorFamily) -> u32 {
    2 * fam.hsop_degrees().iter().sum::<u32>()
}

/// First degree where the numerator rules out a free module of the generic rank.
pub fn numerator_obstruction(numerator: &[i64], rank: u64) -> Option<(usize, RuleRef)> {
    let mut sum = 0i64;
    for (j, &q) in numerator.iter().enumerate() {
        if q < 0 {
            return Some((
                j,
                RuleRef::new("negative-numerator", format!("numerator coefficient of t^{j} is {q} < 0")),
            ));
        }
        sum += q;
        if sum > rank as i64 {
            return Some((
                j,
                RuleRef::new(
                    "rank-exceeded",
                    format!("numerator coefficients through t^{j} sum to {sum} > generic rank {rank}"),
                ),
            ));
        }
    }
    None
}

/// Decide CM-ness of a Newton family at a fixed parameter value.
///
/// notCM from the numerator; CM only through a verified freeness certificate;
/// unknown otherwise.
pub fn cm_verdict_subalgebra(
    fam: &GeneratorFamily,
    max_deg: Option<u32>,
    policy: CertifyPolicy,
    field: Field,
) -> Result<SubalgebraVerdict> {
    let rank = fam
        .bezout_rank()
        .ok_or_else(|| AcmError::InvalidInput("verdicts need a Newton family".into()))?;
    let d = max_deg.unwrap_or_else(|| default_max_deg(fam));
    let fields = policy.fields(field);
    let data = fields
        .iter()
        .map(|&f| subalgebra_dims(fam, d, f))
        .collect::<Result<Vec<_>>>()?;
    let agree = data.windows(2).all(|w| w[0].dims == w[1].dims);
    let exact = fields.len() > 1 || fields[0] == Field::Rational;
    let hilbert = data[0].clone();
    let obstructions: Vec<Option<(usize, RuleRef)>> =
        data.iter().map(|h| numerator_obstruction(&h.numerator, rank)).collect();
    if obstructions.iter().all(Option::is_some) {
        let rule = obstructions[0].clone().unwrap().1;
        let certainty = if exact && agree {
            Certainty::ComputedCertified
        } else {
            Certainty::ComputedProbable
        };
        return Ok(SubalgebraVerdict {
            verdict: Verdict::new(Status::NotCm, certainty, vec![rule]),
            hilbert,
            bezout_rank: rank,
            max_deg: d,
            certificates: Vec::new(),
        });
    }
    if !agree {
        log::warn!("{fam}: fields disagree on dimensions through degree {d}");
    }
    let unknown = |hilbert: HilbertData, why: String| SubalgebraVerdict {
        verdict: Verdict::new(
            Status::Unknown,
            if exact { Certainty::ComputedCertified } else { Certainty::ComputedProbable },
            vec![RuleRef::new("inconclusive", why)],
        ),
        hilbert,
        bezout_rank: rank,
        max_deg: d,
        certificates: Vec::new(),
    };
    let total: i64 = hilbert.numerator.iter().sum();
    if total != rank as i64 {
        return Ok(unknown(
            hilbert,
            format!("no obstruction through degree {d}; numerator sum {total} has not reached the rank {rank}"),
        ));
    }
    let mut certificates = Vec::new();
    for &f in &fields {
        let cert = match freeness_certificate(fam, f, &CertifyOptions::default()) {
            Ok(c) => c,
            Err(AcmError::CertificateFailed(msg)) => {
                return Ok(unknown(hilbert, format!("no obstruction through degree {d}; certificate search failed: {msg}")));
            }
            Err(e) => return Err(e),
        };
        verify_certificate(&cert, 4)?;
        certificates.push(cert);
    }
    let certainty = if exact {
        Certainty::ComputedCertified
    } else {
        Certainty::ComputedProbable
    };
    Ok(SubalgebraVerdict {
        verdict: Verdict::new(
            Status::Cm,
            certainty,
            vec![RuleRef::new(
                "freeness-certificate",
                format!("free of rank {rank} over the parameter subalgebra; certificate verified"),
            )],
        ),
        hilbert,
        bezout_rank: rank,
        max_deg: d,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn obstruction_detection() {
        assert!(numerator_obstruction(&[1, 0, 1, 1, 1], 6).is_none());
        assert_eq!(numerator_obstruction(&[1, 2, -1], 6).unwrap().0, 2);
        assert_eq!(numerator_obstruction(&[1, 0, 0, 0, 1, 1, 1, 0, 1, 1, 1], 6).unwrap().0, 10);
    }

    #[test]
    fn three_two_is_not_cm() {
        let fam = GeneratorFamily::slice_newton(&rat(3, 1), &rat(2, 1)).unwrap();
        let v = cm_verdict_subalgebra(&fam, None, CertifyPolicy::Rational, Field::Rational).unwrap();
        assert_eq!(v.verdict.status, Status::NotCm);
        assert_eq!(v.verdict.rules[0].id, "rank-exceeded");
    }

    #[test]
    fn equal_weights_are_cm() {
        let fam = GeneratorFamily::slice_newton(&rat(5, 3), &rat(5, 3)).unwrap();
        let v = cm_verdict_subalgebra(&fam, None, CertifyPolicy::TwoPrimes, Field::Prime(32003)).unwrap();
        assert_eq!(v.verdict.status, Status::Cm);
        assert_eq!(v.verdict.certainty, Certainty::ComputedCertified);
        assert_eq!(v.certificates.len(), 2);
    }
}
