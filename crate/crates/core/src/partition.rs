//! Integer partitions and rational weight vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{AcmError, Result};
use crate::scalar::{format_rational, parse_rational};

/// A partition with parts in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<u32>", try_from = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Partition> {
        if parts.is_empty() {
            return Err(AcmError::InvalidInput("empty partition".into()));
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(AcmError::InvalidInput("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Distinct parts (decreasing) with multiplicities.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, k)) if *q == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    pub fn distinct_parts(&self) -> usize {
        self.multiplicities().len()
    }

    /// Order of the group permuting equal parts.
    pub fn stabilizer_order(&self) -> u64 {
        self.multiplicities()
            .iter()
            .map(|&(_, k)| factorial(k as u64))
            .product()
    }

    pub fn gcd(&self) -> u32 {
        self.parts.iter().fold(0, |g, &p| g.gcd(&p))
    }

    pub fn scaled_down(&self, k: u32) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&p| p / k).collect(),
        }
    }

    pub fn without_part(&self, part: u32) -> Option<Partition> {
        let idx = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(idx);
        if parts.is_empty() {
            None
        } else {
            Some(Partition { parts })
        }
    }

    /// Conjugate partition.
    pub fn conjugate(&self) -> Partition {
        let m = self.parts[0] as usize;
        let parts = (1..=m)
            .map(|j| self.parts.iter().filter(|&&p| p as usize >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    pub fn weights(&self) -> Weights {
        Weights::new(
            self.parts
                .iter()
                .map(|&p| BigRational::from_integer(BigInt::from(p)))
                .collect(),
        )
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(left: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=max.min(left)).rev() {
                cur.push(p as u32);
                rec(left - p, p, cur, out);
                cur.pop();
            }
        }
        if n > 0 {
            rec(n, n, &mut cur, &mut out);
        }
        out
    }
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = AcmError;

    /// Accepts `3,2,2`, `(3,2,2)` and exponent notation such as `3^2,1^4`.
    fn from_str(s: &str) -> Result<Partition> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in t.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let bad = || AcmError::Parse(format!("bad partition `{s}`"));
            if let Some((a, k)) = tok.split_once('^') {
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let k: usize = k.trim().parse().map_err(|_| bad())?;
                parts.extend(std::iter::repeat(a).take(k));
            } else {
                parts.push(tok.parse().map_err(|_| bad())?);
            }
        }
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = AcmError;
    fn try_from(v: Vec<u32>) -> Result<Partition> {
        Partition::new(v)
    }
}

/// Complex-free weight vector `(l_1, ..., l_r)` with rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    values: Vec<BigRational>,
}

impl Weights {
    pub fn new(values: Vec<BigRational>) -> Weights {
        Weights { values }
    }

    /// Build and reject vanishing subset sums.
    pub fn strict(values: Vec<BigRational>) -> Result<Weights> {
        let w = Weights::new(values);
        w.check_strict()?;
        Ok(w)
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// First nonempty subset with zero sum, if any.
    pub fn vanishing_subset(&self) -> Option<Vec<usize>> {
        let r = self.values.len();
        if r >= 24 {
            return None;
        }
        for mask in 1u32..(1 << r) {
            let mut s = BigRational::zero();
            for i in 0..r {
                if mask >> i & 1 == 1 {
                    s += &self.values[i];
                }
            }
            if s.is_zero() {
                return Some((0..r).filter(|i| mask >> i & 1 == 1).collect());
            }
        }
        None
    }

    pub fn check_strict(&self) -> Result<()> {
        match self.vanishing_subset() {
            Some(subset) => Err(AcmError::DegenerateWeights { subset }),
            None => Ok(()),
        }
    }

    /// Order of the group permuting equal weights.
    pub fn stabilizer_order(&self) -> u64 {
        let mut v = self.values.clone();
        v.sort();
        let mut order = 1u64;
        let mut run = 1u64;
        for i in 1..=v.len() {
            if i < v.len() && v[i] == v[i - 1] {
                run += 1;
            } else {
                order *= factorial(run);
                run = 1;
            }
        }
        order
    }

    /// Weights `(a^r, 1^s)`.
    pub fn deformed(r: usize, s: usize, a: &BigRational) -> Weights {
        let mut v = vec![a.clone(); r];
        v.extend(std::iter::repeat(BigRational::one()).take(s));
        Weights::new(v)
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Weights {
    type Err = AcmError;
    fn from_str(s: &str) -> Result<Weights> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let vals = t
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if vals.is_empty() {
            return Err(AcmError::InvalidInput("empty weight vector".into()));
        }
        Ok(Weights::new(vals))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn parse_partitions() {
        let p: Partition = "3^2,1^3".parse().unwrap();
        assert_eq!(p.parts(), &[3, 3, 1, 1, 1]);
        assert_eq!(p.n(), 9);
        assert_eq!(p.stabilizer_order(), 12);
        assert_eq!("(1,3,2)".parse::<Partition>().unwrap().parts(), &[3, 2, 1]);
        assert!("3,0".parse::<Partition>().is_err());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| Partition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn conjugates() {
        let p: Partition = "4,2,1".parse().unwrap();
        assert_eq!(p.conjugate().parts(), &[3, 2, 1, 1]);
        for q in Partition::all(7) {
            assert_eq!(q.conjugate().conjugate(), q);
        }
    }

    #[test]
    fn strictness() {
        let w = Weights::new(vec![rat(1, 2), rat(-1, 2), rat(1, 1)]);
        assert_eq!(w.vanishing_subset(), Some(vec![0, 1]));
        assert!(Weights::strict(vec![rat(7, 2), rat(5, 3), rat(1, 1)]).is_ok());
        assert_eq!(Weights::deformed(2, 2, &rat(3, 1)).stabilizer_order(), 4);
    }
}
