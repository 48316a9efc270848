//! Hilbert functions of the arrangements `X_lambda = S_n E_lambda` and
//! Cohen-Macaulay tests by linear regular sequences.

pub mod images;
pub mod quotient;
pub mod subspaces;
pub mod symmetric;

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AcmError, Result};
use crate::linalg::{FieldArith, FpArith, QArith};
use crate::partition::Partition;
use crate::poly::monomials_of_degree;
use crate::scalar::{Field, DEFAULT_PRIME, SECOND_PRIME};
use crate::series::{numerator, HilbertData};
use crate::verdict::{Certainty, RuleRef, Status, Verdict};

pub use quotient::{quotient_dims, QuotientDims};
pub use subspaces::{enumerate_subspaces, subspace_count, SubspaceSystem, DEFAULT_SUBSPACE_LIMIT};
pub use symmetric::{Twist, YoungSystem};

/// How to compute ranks of restriction maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Young subgroup counts combined into isotypic multiplicities.
    Isotypic,
    /// One large restriction matrix on `X^0`.
    Direct,
}

fn check_prime(field: Field, lambda: &Partition) -> Result<()> {
    if let Field::Prime(p) = field {
        if p as usize <= lambda.n() {
            return Err(AcmError::PrimeTooSmall { p, n: lambda.n() });
        }
    }
    Ok(())
}

/// `dim C[X^0]_d` for `d = 0..=max_deg`.
pub fn reduced_dims_with<A: FieldArith>(
    arith: &A,
    lambda: &Partition,
    max_deg: u32,
    method: Method,
    limit: u64,
) -> Result<Vec<u64>> {
    check_prime(arith.field(), lambda)?;
    let sys = enumerate_subspaces(lambda, limit)?;
    let n = lambda.n();
    let young = YoungSystem::new(n);
    let trivial_group = Partition::new(vec![1; n])?;
    let mut out = Vec::with_capacity(max_deg as usize + 1);
    for d in 0..=max_deg {
        let table = images::block_table(arith, lambda, d)?;
        let h = match method {
            Method::Direct => images::young_count(arith, &sys, &table, &trivial_group, Twist::Trivial)? as u64,
            Method::Isotypic => {
                let counts: Vec<Result<usize>> = young
                    .equations
                    .par_iter()
                    .map(|e| images::young_count(arith, &sys, &table, &e.nu, e.twist))
                    .collect();
                let counts: Vec<u64> = counts
                    .into_iter()
                    .map(|c| c.map(|v| v as u64))
                    .collect::<Result<_>>()?;
                let mults = young.solve(&counts)?;
                young.total_dim(&mults)
            }
        };
        log::debug!("{lambda} reduced degree {d}: {h}");
        out.push(h);
    }
    Ok(out)
}

pub fn reduced_dims(lambda: &Partition, max_deg: u32, field: Field, method: Method) -> Result<Vec<u64>> {
    match field {
        Field::Rational => reduced_dims_with(&QArith, lambda, max_deg, method, DEFAULT_SUBSPACE_LIMIT),
        Field::Prime(p) => reduced_dims_with(&FpArith::new(p), lambda, max_deg, method, DEFAULT_SUBSPACE_LIMIT),
    }
}

/// Convert `C[X^0]` dimensions into those of `C[X] = C[X^0][s]`.
pub fn lift_reduced(h0: &[u64]) -> Vec<u64> {
    let mut acc = 0;
    h0.iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect()
}

/// Hilbert function of `C[X_lambda]` through `max_deg`, numerator over `(1-t)^r`.
pub fn arrangement_dims(lambda: &Partition, max_deg: u32, field: Field) -> Result<HilbertData> {
    arrangement_dims_with(lambda, max_deg, field, Method::Isotypic)
}

pub fn arrangement_dims_with(lambda: &Partition, max_deg: u32, field: Field, method: Method) -> Result<HilbertData> {
    let h0 = reduced_dims(lambda, max_deg, field, method)?;
    Ok(HilbertData::new(lift_reduced(&h0), vec![1; lambda.len()], field))
}

/// Restriction rank on the full arrangement with each `E_sigma` parametrized
/// by its block values (no reduction, no symmetry).
pub fn full_restriction_dims(lambda: &Partition, max_deg: u32, field: Field) -> Result<Vec<u64>> {
    check_prime(field, lambda)?;
    let sys = enumerate_subspaces(lambda, DEFAULT_SUBSPACE_LIMIT)?;
    let n = lambda.n();
    let r = lambda.len();
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let target = crate::linalg::MonomialIndex::new(r, d);
        let width = target.len();
        let ncols = width * sys.len();
        let rows: Vec<Vec<(usize, i64)>> = monomials_of_degree(n, d)
            .into_iter()
            .map(|m| {
                let mut row: Vec<(usize, i64)> = sys
                    .subspaces
                    .iter()
                    .enumerate()
                    .map(|(si, s)| {
                        let mut sums = vec![0u16; r];
                        for (i, &e) in m.exps().iter().enumerate() {
                            sums[s[i] as usize] += e;
                        }
                        let c = target.get(&crate::poly::Monomial::from_exps(&sums)).unwrap();
                        (si * width + c, 1)
                    })
                    .collect();
                row.sort_by_key(|t| t.0);
                row
            })
            .collect();
        let rank = match field {
            Field::Rational => {
                let a = QArith;
                crate::linalg::rank_of(&a, ncols, rows.into_iter().map(|r| r.into_iter().map(|(c, v)| (c, a.from_i64(v))).collect()))
            }
            Field::Prime(p) => {
                let a = FpArith::new(p);
                crate::linalg::rank_of(&a, ncols, rows.into_iter().map(|r| r.into_iter().map(|(c, v)| (c, a.from_i64(v))).collect()))
            }
        };
        out.push(rank as u64);
    }
    Ok(out)
}

/// Dimensions estimated from the values of degree-`d` monomials at random
/// points of every subspace. Over GF(p) this never exceeds the true value.
pub fn point_sample_oracle(lambda: &Partition, max_deg: u32, field: Field, seed: u64) -> Result<Vec<u64>> {
    check_prime(field, lambda)?;
    let sys = enumerate_subspaces(lambda, DEFAULT_SUBSPACE_LIMIT)?;
    let n = lambda.n();
    let r = lambda.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = crate::poly::count_monomials(r, max_deg) as usize + 2;
    let mut points: Vec<Vec<i64>> = Vec::new();
    for s in &sys.subspaces {
        for _ in 0..per {
            let y: Vec<i64> = (0..r).map(|_| rng.gen_range(-1000..=1000)).collect();
            points.push(s.iter().map(|&b| y[b as usize]).collect());
        }
    }
    let mut out = Vec::new();
    for d in 0..=max_deg {
        let monos = monomials_of_degree(n, d);
        let ncols = monos.len();
        let eval = |pt: &Vec<i64>, m: &crate::poly::Monomial| -> num_bigint::BigInt {
            let mut acc = num_bigint::BigInt::from(1);
            for (x, &e) in pt.iter().zip(m.exps()) {
                if e > 0 {
                    acc *= num_bigint::BigInt::from(*x).pow(e as u32);
                }
            }
            acc
        };
        let rank = match field {
            Field::Rational => {
                let a = QArith;
                crate::linalg::rank_of(
                    &a,
                    ncols,
                    points.iter().map(|pt| {
                        monos.iter().enumerate().map(|(c, m)| (c, a.from_bigint(&eval(pt, m)))).filter(|t| !a.is_zero(&t.1)).collect()
                    }),
                )
            }
            Field::Prime(p) => {
                let a = FpArith::new(p);
                crate::linalg::rank_of(
                    &a,
                    ncols,
                    points.iter().map(|pt| {
                        monos.iter().enumerate().map(|(c, m)| (c, a.from_bigint(&eval(pt, m)))).filter(|t| t.1 != 0).collect()
                    }),
                )
            }
        };
        out.push(rank as u64);
    }
    Ok(out)
}

/// Certification policy for computed verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertifyPolicy {
    /// Compute over the rationals.
    Rational,
    /// Compute over two primes and require agreement.
    TwoPrimes,
    /// Compute over the given field only.
    Single,
}

impl std::str::FromStr for CertifyPolicy {
    type Err = AcmError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" | "rational" => Ok(CertifyPolicy::Rational),
            "two-primes" => Ok(CertifyPolicy::TwoPrimes),
            "none" | "single" => Ok(CertifyPolicy::Single),
            _ => Err(AcmError::Parse(format!("unknown certification policy `{s}`"))),
        }
    }
}

impl CertifyPolicy {
    /// Fields to compute over; `single` is used as is, or as the first prime.
    pub fn fields(self, single: Field) -> Vec<Field> {
        match self {
            CertifyPolicy::Rational => vec![Field::Rational],
            CertifyPolicy::TwoPrimes => {
                let p = match single {
                    Field::Prime(p) => p,
                    Field::Rational => DEFAULT_PRIME,
                };
                let q = if p == SECOND_PRIME { DEFAULT_PRIME } else { SECOND_PRIME };
                vec![Field::Prime(p), Field::Prime(q)]
            }
            CertifyPolicy::Single => vec![single],
        }
    }
}

#[derive(Clone, Debug)]
pub struct CmCheckOptions {
    pub trials: usize,
    pub max_deg: u32,
    /// Field used under [`CertifyPolicy::Single`].
    pub field: Field,
    pub policy: CertifyPolicy,
    pub seed: u64,
}

impl CmCheckOptions {
    pub fn new(lambda: &Partition) -> CmCheckOptions {
        CmCheckOptions {
            trials: 3,
            max_deg: 2 * lambda.n() as u32,
            field: Field::Prime(DEFAULT_PRIME),
            policy: CertifyPolicy::TwoPrimes,
            seed: 0,
        }
    }
}

/// Outcome over one field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldRun {
    pub field: Field,
    pub hilbert: HilbertData,
    pub quotient_trials: Vec<Vec<u64>>,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CmCheckReport {
    pub lambda: Partition,
    pub subspaces: u64,
    pub runs: Vec<FieldRun>,
    pub verdict: Verdict,
    pub seed: u64,
}

fn random_forms<A: FieldArith>(arith: &A, rng: &mut ChaCha8Rng, count: usize, n: usize) -> Vec<Vec<A::Elem>> {
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| match arith.field() {
                    Field::Rational => arith.from_i64(rng.gen_range(-1000..=1000)),
                    Field::Prime(p) => arith.from_i64(rng.gen_range(0..p) as i64),
                })
                .collect()
        })
        .collect()
}

fn run_field<A: FieldArith>(arith: &A, lambda: &Partition, opts: &CmCheckOptions, seed: u64) -> Result<FieldRun> {
    check_prime(arith.field(), lambda)?;
    let sys = enumerate_subspaces(lambda, DEFAULT_SUBSPACE_LIMIT)?;
    let count = sys.len() as i64;
    let r = lambda.len();
    let n = lambda.n();
    // Numerator first: a negative coefficient settles it. A CM numerator is
    // nonnegative with coefficient sum equal to the number of subspaces and
    // equals the quotient's Hilbert function, so trials can only succeed once
    // the partial sum is exactly that count.
    let mut first_deg = opts.max_deg.min(n as u32 + 2);
    let mut hilbert;
    loop {
        let h0 = reduced_dims_with(arith, lambda, first_deg, Method::Isotypic, DEFAULT_SUBSPACE_LIMIT)?;
        hilbert = HilbertData::new(lift_reduced(&h0), vec![1; r], arith.field());
        if hilbert.has_negative() {
            return Ok(FieldRun {
                field: arith.field(),
                hilbert,
                quotient_trials: Vec::new(),
                status: Status::NotCm,
            });
        }
        if hilbert.numerator_sum() >= count || first_deg == opts.max_deg {
            break;
        }
        first_deg = (first_deg + 2).min(opts.max_deg);
    }
    let trial_count = if hilbert.numerator_sum() == count { opts.trials } else { 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::new();
    for t in 0..trial_count {
        let forms = random_forms(arith, &mut rng, r, n);
        let q = match quotient_dims(arith, &sys, &forms, opts.max_deg, Some(count as u64)) {
            Ok(q) => q,
            Err(AcmError::InvalidInput(msg)) => {
                log::warn!("trial {t}: {msg}");
                continue;
            }
            Err(e) => return Err(e),
        };
        log::info!("{lambda} trial {t}: quotient {:?}", q.dims);
        let ok = q.artinian && q.length() as i64 == count;
        trials.push(q.dims.clone());
        if ok {
            // Compare with the numerator through the quotient's range.
            let need = q.dims.len() as u32;
            if need > first_deg {
                let h0 = reduced_dims_with(arith, lambda, need, Method::Isotypic, DEFAULT_SUBSPACE_LIMIT)?;
                hilbert = HilbertData::new(lift_reduced(&h0), vec![1; r], arith.field());
            }
            let num = numerator(&hilbert.dims, &hilbert.denominator_degrees);
            let matches = q
                .dims
                .iter()
                .enumerate()
                .all(|(i, &v)| num.get(i).map(|&x| x == v as i64).unwrap_or(true));
            if !matches {
                return Err(AcmError::Inconsistency(format!(
                    "quotient {:?} disagrees with numerator {:?}",
                    q.dims, num
                )));
            }
            return Ok(FieldRun {
                field: arith.field(),
                hilbert,
                quotient_trials: trials,
                status: Status::Cm,
            });
        }
    }
    // No certificate: look further for a negative numerator coefficient.
    if opts.max_deg > first_deg {
        let h0 = reduced_dims_with(arith, lambda, opts.max_deg, Method::Isotypic, DEFAULT_SUBSPACE_LIMIT)?;
        hilbert = HilbertData::new(lift_reduced(&h0), vec![1; r], arith.field());
    }
    let status = if hilbert.has_negative() { Status::NotCm } else { Status::Unknown };
    Ok(FieldRun {
        field: arith.field(),
        hilbert,
        quotient_trials: trials,
        status,
    })
}

fn run_on(field: Field, lambda: &Partition, opts: &CmCheckOptions, seed: u64) -> Result<FieldRun> {
    match field {
        Field::Rational => run_field(&QArith, lambda, opts, seed),
        Field::Prime(p) => run_field(&FpArith::new(p), lambda, opts, seed),
    }
}

/// Decide whether `C[X_lambda]` is Cohen-Macaulay by computation.
///
/// CM is certified when random linear forms cut the arrangement down to a
/// finite quotient of length equal to the number of subspaces; not CM when the
/// numerator over `(1-t)^r` has a negative coefficient.
pub fn cm_check_arrangement(lambda: &Partition, opts: &CmCheckOptions) -> Result<CmCheckReport> {
    let fields = opts.policy.fields(opts.field);
    let mut runs = Vec::new();
    for (i, f) in fields.iter().enumerate() {
        runs.push(run_on(*f, lambda, opts, opts.seed.wrapping_add(i as u64))?);
    }
    let statuses: Vec<Status> = runs.iter().map(|r| r.status).collect();
    let status = if statuses.iter().all(|&s| s == statuses[0]) {
        statuses[0]
    } else {
        let decided: Vec<Status> = statuses.iter().copied().filter(|&s| s != Status::Unknown).collect();
        if decided.windows(2).any(|w| w[0] != w[1]) {
            return Err(AcmError::Inconsistency(format!("fields disagree: {statuses:?}")));
        }
        Status::Unknown
    };
    let certified = match opts.policy {
        CertifyPolicy::Rational => true,
        CertifyPolicy::TwoPrimes => runs.len() == 2 && runs[0].hilbert.dims.iter().zip(&runs[1].hilbert.dims).all(|(a, b)| a == b),
        CertifyPolicy::Single => opts.field == Field::Rational,
    };
    let certainty = if certified {
        Certainty::ComputedCertified
    } else {
        Certainty::ComputedProbable
    };
    let rule = match status {
        Status::Cm => RuleRef::new("regular-sequence", "random linear forms give a finite quotient of length equal to the number of subspaces"),
        Status::NotCm => RuleRef::new("negative-numerator", "Hilbert series numerator over (1-t)^r has a negative coefficient"),
        Status::Unknown => RuleRef::new("inconclusive", format!("no decision through degree {}", opts.max_deg)),
    };
    Ok(CmCheckReport {
        lambda: lambda.clone(),
        subspaces: subspace_count(lambda),
        runs,
        verdict: Verdict::new(status, certainty, vec![rule]),
        seed: opts.seed,
    })
}

/// Cache of reduced dimensions keyed by partition and field.
#[derive(Default)]
pub struct DimsCache {
    map: HashMap<(Partition, Field), Vec<u64>>,
}

impl DimsCache {
    pub fn get_or_compute(&mut self, lambda: &Partition, max_deg: u32, field: Field) -> Result<Vec<u64>> {
        let key = (lambda.clone(), field);
        if let Some(v) = self.map.get(&key) {
            if v.len() > max_deg as usize {
                return Ok(v[..=max_deg as usize].to_vec());
            }
        }
        let v = reduced_dims(lambda, max_deg, field, Method::Isotypic)?;
        self.map.insert(key, v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn isotypic_agrees_with_direct_small() {
        for n in 1..=6 {
            for lam in Partition::all(n) {
                let a = reduced_dims(&lam, 6, Field::Prime(DEFAULT_PRIME), Method::Isotypic).unwrap();
                let b = reduced_dims(&lam, 6, Field::Prime(DEFAULT_PRIME), Method::Direct).unwrap();
                assert_eq!(a, b, "{lam}");
            }
        }
    }

    #[test]
    fn reduction_agrees_with_full_restriction() {
        for lam in [p("2,1"), p("2,2"), p("3,1,1"), p("2,2,1"), p("3,2,1")] {
            let full = full_restriction_dims(&lam, 6, Field::Prime(DEFAULT_PRIME)).unwrap();
            let red = lift_reduced(&reduced_dims(&lam, 6, Field::Prime(DEFAULT_PRIME), Method::Isotypic).unwrap());
            assert_eq!(full, red, "{lam}");
        }
    }

    #[test]
    fn whole_space_and_diagonal() {
        let h = arrangement_dims(&p("1,1,1"), 5, Field::Rational).unwrap();
        assert_eq!(h.dims, vec![1, 3, 6, 10, 15, 21]);
        let h = arrangement_dims(&p("3"), 4, Field::Rational).unwrap();
        assert_eq!(h.dims, vec![1; 5]);
    }

    #[test]
    fn small_cm_check() {
        let lam = p("2,2");
        let mut o = CmCheckOptions::new(&lam);
        o.policy = CertifyPolicy::Rational;
        let rep = cm_check_arrangement(&lam, &o).unwrap();
        assert_eq!(rep.verdict.status, Status::Cm);
    }
}
