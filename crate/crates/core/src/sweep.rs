//! Parameter sweeps: where do the Hilbert function coefficients of a
//! one-parameter family drop below their generic values?

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::CertifyPolicy;
use crate::error::{AcmError, Result};
use crate::partition::Weights;
use crate::rng::{random_rational, random_rational_avoiding, rng};
use crate::scalar::{format_rational, rat, Field, DEFAULT_PRIME};
use crate::series::numerator;
use crate::subalgebra::{subalgebra_dims, GeneratorFamily};

/// A family of subalgebras depending on one rational parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepFamily {
    /// Newton sums with weights `(a^r, 1^s)`.
    Deformed { r: usize, s: usize },
    /// Slice of the weights `(b + 1, b, 1^s)`.
    SliceLine { s: usize },
}

impl SweepFamily {
    pub fn weights(&self, a: &BigRational) -> Weights {
        match *self {
            SweepFamily::Deformed { r, s } => Weights::deformed(r, s, a),
            SweepFamily::SliceLine { s } => {
                let mut v = vec![a + BigRational::one(), a.clone()];
                v.extend(std::iter::repeat(BigRational::one()).take(s));
                Weights::new(v)
            }
        }
    }

    pub fn family(&self, a: &BigRational) -> Result<GeneratorFamily> {
        let slice = matches!(self, SweepFamily::SliceLine { .. });
        GeneratorFamily::newton(self.weights(a), slice)
    }

    /// The family is not finitely generated at `a` (some weight subset sums to zero).
    pub fn is_degenerate(&self, a: &BigRational) -> bool {
        a.is_zero() || self.weights(a).vanishing_subset().is_some()
    }
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepFamily::Deformed { r, s } => write!(f, "deformed(r={r},s={s})"),
            SweepFamily::SliceLine { s } => write!(f, "slice(b+1,b,1^{s})"),
        }
    }
}

/// `{ +-p/q : 1 <= p <= s + 1, 1 <= q <= r + 1 }`, sorted.
pub fn default_grid(r: usize, s: usize) -> Vec<BigRational> {
    let mut set = BTreeSet::new();
    for p in 1..=(s as i64 + 1) {
        for q in 1..=(r as i64 + 1) {
            set.insert(rat(p, q));
            set.insert(rat(-p, q));
        }
    }
    set.into_iter().collect()
}

/// Values predicted by the two-part construction:
/// `p/q` with `gcd(p, q) = 1`, `p > q`, `3 <= p <= s`, `q <= r`, and the
/// reciprocals of the same set with `r` and `s` exchanged.
pub fn b_bar(r: usize, s: usize) -> BTreeSet<BigRational> {
    let mut out = BTreeSet::new();
    let mut add = |num_max: usize, den_max: usize, invert: bool| {
        for p in 3..=num_max as i64 {
            for q in 1..=(den_max as i64).min(p - 1) {
                if p.gcd(&q) != 1 {
                    continue;
                }
                out.insert(if invert { rat(q, p) } else { rat(p, q) });
            }
        }
    };
    add(s, r, false);
    add(r, s, true);
    out
}

/// Values with a coefficient drop although the algebra is CM.
pub fn known_cm_drops() -> BTreeSet<BigRational> {
    [rat(1, 1), rat(2, 1), rat(1, 2)].into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateResult {
    #[serde(with = "crate::report::rational")]
    pub value: BigRational,
    pub dims: Vec<u64>,
    /// First degree where the dims fall below generic.
    pub drop_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: SweepFamily,
    pub max_deg: u32,
    pub fields: Vec<Field>,
    pub seed: u64,
    #[serde(with = "crate::report::rational_vec")]
    pub samples: Vec<BigRational>,
    pub sample_dims: Vec<Vec<u64>>,
    pub generic_dims: Vec<u64>,
    /// The random samples did not all agree.
    pub unstable: bool,
    pub candidates: Vec<CandidateResult>,
    #[serde(with = "crate::report::rational_vec")]
    pub non_finite: Vec<BigRational>,
}

impl SweepReport {
    pub fn drop_set(&self) -> BTreeSet<BigRational> {
        self.candidates
            .iter()
            .filter(|c| c.drop_degree.is_some())
            .map(|c| c.value.clone())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub max_deg: u32,
    pub seed: u64,
    pub samples: usize,
    pub policy: CertifyPolicy,
    /// Field for the single-field policy, and first prime otherwise.
    pub field: Field,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            max_deg: 12,
            seed: crate::rng::DEFAULT_SEED,
            samples: 3,
            policy: CertifyPolicy::TwoPrimes,
            field: Field::Prime(DEFAULT_PRIME),
        }
    }
}

/// Dimensions at `a` over every field; a value whose denominator vanishes
/// modulo a prime is computed over the rationals instead.
fn dims_at(family: SweepFamily, a: &BigRational, max_deg: u32, fields: &[Field]) -> Result<Vec<Vec<u64>>> {
    let fam = family.family(a)?;
    fields
        .iter()
        .map(|&f| match subalgebra_dims(&fam, max_deg, f) {
            Ok(h) => Ok(h.dims),
            Err(AcmError::DivisionByZero) => Ok(subalgebra_dims(&fam, max_deg, Field::Rational)?.dims),
            Err(e) => Err(e),
        })
        .collect()
}

fn coordinatewise_max(rows: &[Vec<u64>]) -> Vec<u64> {
    let len = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    (0..len)
        .map(|i| rows.iter().filter_map(|r| r.get(i)).copied().max().unwrap_or(0))
        .collect()
}

fn first_drop(dims: &[u64], generic: &[u64]) -> Option<u32> {
    dims.iter().zip(generic).position(|(a, b)| a < b).map(|i| i as u32)
}

/// Compare the family at each candidate with its generic behaviour.
///
/// Under a two-prime policy a candidate counts as a drop only when both
/// primes show it.
pub fn parameter_sweep(family: SweepFamily, candidates: &[BigRational], opts: &SweepOptions) -> Result<SweepReport> {
    if opts.samples < 2 {
        return Err(AcmError::InvalidInput("need at least two generic samples".into()));
    }
    let fields = opts.policy.fields(opts.field);
    let mut r = rng(opts.seed);
    let samples: Vec<BigRational> = (0..opts.samples)
        .map(|_| random_rational_avoiding(&mut r, |a| family.is_degenerate(a)))
        .collect();
    let sample_dims: Vec<Vec<Vec<u64>>> = samples
        .par_iter()
        .map(|a| dims_at(family, a, opts.max_deg, &fields))
        .collect::<Result<_>>()?;
    let flat: Vec<Vec<u64>> = sample_dims.iter().flatten().cloned().collect();
    let unstable = flat.windows(2).any(|w| w[0] != w[1]);
    if unstable {
        log::warn!("generic samples disagree for {family}");
    }

    let (finite, non_finite): (Vec<BigRational>, Vec<BigRational>) =
        candidates.iter().cloned().partition(|a| !family.is_degenerate(a));
    let per_candidate: Vec<Vec<Vec<u64>>> = finite
        .par_iter()
        .map(|a| dims_at(family, a, opts.max_deg, &fields))
        .collect::<Result<_>>()?;

    let mut all = flat.clone();
    all.extend(per_candidate.iter().flatten().cloned());
    let generic = coordinatewise_max(&all);

    let candidates = finite
        .into_iter()
        .zip(per_candidate)
        .map(|(value, runs)| {
            let drops: Vec<Option<u32>> = runs.iter().map(|d| first_drop(d, &generic)).collect();
            let drop_degree = if drops.iter().all(|d| d.is_some()) {
                drops.iter().flatten().min().copied()
            } else {
                None
            };
            // Report the largest observation; a single-prime dip is noise.
            let dims = coordinatewise_max(&runs);
            CandidateResult {
                value,
                dims,
                drop_degree,
            }
        })
        .collect();
    Ok(SweepReport {
        family,
        max_deg: opts.max_deg,
        fields,
        seed: opts.seed,
        samples,
        sample_dims: sample_dims.into_iter().map(|v| coordinatewise_max(&v)).collect(),
        generic_dims: generic,
        unstable,
        candidates,
        non_finite,
    })
}

/// Sweep outcome compared with the predicted set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BsetReport {
    pub r: usize,
    pub s: usize,
    pub sweep: SweepReport,
    #[serde(with = "crate::report::rational_vec")]
    pub predicted: Vec<BigRational>,
    /// Drops at values where the algebra is known to be CM.
    #[serde(with = "crate::report::rational_vec")]
    pub cm_drops: Vec<BigRational>,
    /// Drop set with the known CM values removed.
    #[serde(with = "crate::report::rational_vec")]
    pub observed: Vec<BigRational>,
    pub agrees: bool,
}

pub fn bset_report(r: usize, s: usize, opts: &SweepOptions) -> Result<BsetReport> {
    if r == 0 || s == 0 {
        return Err(AcmError::InvalidInput("r and s must be positive".into()));
    }
    let family = SweepFamily::Deformed { r, s };
    let grid = default_grid(r, s);
    let sweep = parameter_sweep(family, &grid, opts)?;
    let drops = sweep.drop_set();
    let known = known_cm_drops();
    let cm_drops: Vec<BigRational> = drops.intersection(&known).cloned().collect();
    let observed: BTreeSet<BigRational> = drops.difference(&known).cloned().collect();
    let predicted = b_bar(r, s);
    Ok(BsetReport {
        r,
        s,
        agrees: observed == predicted,
        predicted: predicted.into_iter().collect(),
        cm_drops,
        observed: observed.into_iter().collect(),
        sweep,
    })
}

/// Numerators of the slice algebra `(a, b, 1)` at generic points and on the line `a = b + 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineReport {
    pub max_deg: u32,
    pub seed: u64,
    #[serde(with = "crate::report::rational_pairs")]
    pub generic_points: Vec<(BigRational, BigRational)>,
    pub generic_numerators: Vec<Vec<i64>>,
    #[serde(with = "crate::report::rational_vec")]
    pub line_points: Vec<BigRational>,
    pub line_numerators: Vec<Vec<i64>>,
}

impl LineReport {
    /// Top coefficient of each generic numerator and each line numerator.
    pub fn top_coefficients(&self) -> (Vec<i64>, Vec<i64>) {
        let d = self.max_deg as usize;
        let top = |v: &Vec<Vec<i64>>| v.iter().map(|q| q.get(d).copied().unwrap_or(0)).collect();
        (top(&self.generic_numerators), top(&self.line_numerators))
    }
}

/// Pairs `(a, b)` lying on one of the special lines for the slice algebra.
pub fn on_special_line(a: &BigRational, b: &BigRational) -> bool {
    let one = BigRational::one();
    let pairs = [
        (rat(3, 1), rat(2, 1)),
        (rat(2, 1), rat(3, 1)),
        (rat(1, 2), rat(3, 2)),
        (rat(3, 2), rat(1, 2)),
        (rat(1, 3), rat(2, 3)),
        (rat(2, 3), rat(1, 3)),
    ];
    a == b
        || *a == one
        || *b == one
        || *a == b + &one
        || *b == a + &one
        || a + b == one
        || pairs.iter().any(|(x, y)| x == a && y == b)
}

/// `|b|` values excluded on the line `a = b + 1`.
pub fn line_exclusions() -> BTreeSet<BigRational> {
    [rat(1, 2), rat(1, 1), rat(2, 1)].into_iter().collect()
}

pub fn line_report(points: usize, max_deg: u32, seed: u64, field: Field) -> Result<LineReport> {
    let mut r = rng(seed);
    let bad = |a: &BigRational| a.is_zero() || a.is_negative();
    let mut generic_points = Vec::new();
    while generic_points.len() < points {
        let a = random_rational_avoiding(&mut r, bad);
        let b = random_rational(&mut r);
        if !on_special_line(&a, &b) {
            generic_points.push((a, b));
        }
    }
    let excluded = |b: &BigRational| b.is_zero() || line_exclusions().contains(&b.abs());
    let line_points: Vec<BigRational> = (0..points).map(|_| random_rational_avoiding(&mut r, excluded)).collect();
    let num = |fam: GeneratorFamily| -> Result<Vec<i64>> {
        let h = subalgebra_dims(&fam, max_deg, field)?;
        Ok(numerator(&h.dims, &h.denominator_degrees))
    };
    let generic_numerators = generic_points
        .par_iter()
        .map(|(a, b)| num(GeneratorFamily::slice_newton(a, b)?))
        .collect::<Result<_>>()?;
    let line_numerators = line_points
        .par_iter()
        .map(|b| num(GeneratorFamily::slice_newton(&(b + BigRational::one()), b)?))
        .collect::<Result<_>>()?;
    Ok(LineReport {
        max_deg,
        seed,
        generic_points,
        generic_numerators,
        line_points,
        line_numerators,
    })
}

pub fn format_set(set: &[BigRational]) -> String {
    let parts: Vec<String> = set.iter().map(format_rational).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[(i64, i64)]) -> BTreeSet<BigRational> {
        v.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn predicted_sets_small() {
        assert!(b_bar(2, 1).is_empty());
        assert!(b_bar(1, 2).is_empty());
        assert!(b_bar(2, 2).is_empty());
        assert_eq!(b_bar(3, 1), set(&[(1, 3)]));
        assert_eq!(b_bar(1, 3), set(&[(3, 1)]));
        assert_eq!(b_bar(4, 1), set(&[(1, 3), (1, 4)]));
        assert_eq!(b_bar(3, 2), set(&[(1, 3), (2, 3)]));
        assert_eq!(b_bar(2, 3), set(&[(3, 1), (3, 2)]));
        assert_eq!(b_bar(1, 4), set(&[(3, 1), (4, 1)]));
    }

    #[test]
    fn grid_covers_predictions() {
        for r in 1..4 {
            for s in 1..4 {
                let g: BTreeSet<BigRational> = default_grid(r, s).into_iter().collect();
                assert!(b_bar(r, s).is_subset(&g));
            }
        }
    }

    #[test]
    fn degenerate_values() {
        let f = SweepFamily::Deformed { r: 2, s: 1 };
        assert!(f.is_degenerate(&rat(-1, 2)));
        assert!(f.is_degenerate(&rat(-1, 1)));
        assert!(!f.is_degenerate(&rat(-2, 1)));
    }
}
