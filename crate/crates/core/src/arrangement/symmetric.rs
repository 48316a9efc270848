//! Symmetric group bookkeeping: Kostka numbers, dimensions of irreducibles
//! and the choice of Young subgroups used to recover isotypic multiplicities.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{AcmError, Result};
use crate::linalg::{rref, Echelon, FieldArith, QArith};
use crate::partition::{factorial, Partition};

/// Number of semistandard tableaux of shape `shape` and content `content`.
pub fn kostka(shape: &[u32], content: &[u32]) -> u64 {
    let mut memo = HashMap::new();
    kostka_rec(shape.to_vec(), content, &mut memo)
}

fn kostka_rec(shape: Vec<u32>, content: &[u32], memo: &mut HashMap<(Vec<u32>, usize), u64>) -> u64 {
    let shape: Vec<u32> = shape.into_iter().filter(|&x| x > 0).collect();
    let total: u32 = shape.iter().sum();
    let ctotal: u32 = content.iter().sum();
    if total != ctotal {
        return 0;
    }
    if content.is_empty() {
        return (total == 0) as u64;
    }
    let key = (shape.clone(), content.len());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = *content.last().unwrap();
    let rest = &content[..content.len() - 1];
    // Remove a horizontal strip of size k: inner shape kappa with
    // shape[i+1] <= kappa[i] <= shape[i].
    let mut acc = 0u64;
    let r = shape.len();
    let mut kappa = vec![0u32; r];
    fn strips(
        i: usize,
        left: u32,
        shape: &[u32],
        kappa: &mut Vec<u32>,
        rest: &[u32],
        acc: &mut u64,
        memo: &mut HashMap<(Vec<u32>, usize), u64>,
    ) {
        if i == shape.len() {
            if left == 0 {
                *acc += kostka_rec(kappa.clone(), rest, memo);
            }
            return;
        }
        let lo = shape.get(i + 1).copied().unwrap_or(0);
        let hi = shape[i];
        for v in lo..=hi {
            let removed = hi - v;
            if removed > left {
                continue;
            }
            kappa[i] = v;
            strips(i + 1, left - removed, shape, kappa, rest, acc, memo);
        }
    }
    strips(0, k, &shape, &mut kappa, rest, &mut acc, memo);
    memo.insert(key, acc);
    acc
}

/// Dimension of the irreducible representation `mu` (hook length formula).
pub fn irrep_dim(mu: &Partition) -> u64 {
    let n = mu.n() as u64;
    let conj = mu.conjugate();
    let mut hooks: u128 = 1;
    for (i, &row) in mu.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = conj.parts()[j] as usize - i - 1;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    ((1..=n as u128).product::<u128>().max(1) / hooks) as u64
}

/// Which invariant count a Young subgroup supplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Twist {
    /// Dimension of the `S_nu`-invariants.
    Trivial,
    /// Dimension of the sign-isotypic part for `S_nu`.
    Sign,
}

#[derive(Clone, Debug)]
pub struct YoungEquation {
    pub nu: Partition,
    pub twist: Twist,
    /// Coefficient of each irreducible multiplicity (ordered as `irreps`).
    pub coeffs: Vec<i64>,
}

/// A square invertible system recovering isotypic multiplicities from
/// Young subgroup counts.
#[derive(Clone, Debug)]
pub struct YoungSystem {
    pub n: usize,
    pub irreps: Vec<Partition>,
    pub dims: Vec<u64>,
    pub equations: Vec<YoungEquation>,
}

pub fn young_order(nu: &Partition) -> u64 {
    nu.parts().iter().map(|&p| factorial(p as u64)).product()
}

impl YoungSystem {
    /// Greedily pick independent equations from the largest subgroups down.
    pub fn new(n: usize) -> YoungSystem {
        let irreps = Partition::all(n);
        let dims = irreps.iter().map(irrep_dim).collect();
        let conj: Vec<Partition> = irreps.iter().map(|m| m.conjugate()).collect();
        let mut cands: Vec<(Partition, Twist)> = Vec::new();
        for nu in &irreps {
            cands.push((nu.clone(), Twist::Trivial));
            cands.push((nu.clone(), Twist::Sign));
        }
        cands.sort_by(|a, b| {
            young_order(&b.0)
                .cmp(&young_order(&a.0))
                .then((a.1 == Twist::Sign).cmp(&(b.1 == Twist::Sign)))
        });
        let q = QArith;
        let k = irreps.len();
        let mut eng = q.engine(k, k);
        let mut equations = Vec::new();
        for (nu, tw) in cands {
            let coeffs: Vec<i64> = irreps
                .iter()
                .zip(&conj)
                .map(|(mu, muc)| {
                    let shape = if tw == Twist::Trivial { mu } else { muc };
                    kostka(shape.parts(), nu.parts()) as i64
                })
                .collect();
            let row = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, q.from_i64(c)))
                .collect();
            if eng.insert(row) {
                equations.push(YoungEquation { nu, twist: tw, coeffs });
                if eng.rank() == k {
                    break;
                }
            }
        }
        YoungSystem {
            n,
            irreps,
            dims,
            equations,
        }
    }

    /// Solve for the multiplicities; they must be nonnegative integers.
    pub fn solve(&self, values: &[u64]) -> Result<Vec<u64>> {
        let k = self.irreps.len();
        let q = QArith;
        let mut m: Vec<Vec<BigRational>> = self
            .equations
            .iter()
            .zip(values)
            .map(|(e, &v)| {
                let mut row: Vec<BigRational> = e.coeffs.iter().map(|&c| q.from_i64(c)).collect();
                row.push(q.from_i64(v as i64));
                row
            })
            .collect();
        let piv = rref(&q, &mut m);
        if piv.len() != k || piv.iter().any(|&c| c >= k) {
            return Err(AcmError::Inconsistency("Young system not invertible".into()));
        }
        let mut out = vec![0u64; k];
        for (i, &c) in piv.iter().enumerate() {
            let v = &m[i][k];
            if !v.is_integer() || *v < BigRational::zero() {
                return Err(AcmError::Inconsistency(format!(
                    "multiplicity of {} is {}",
                    self.irreps[c], v
                )));
            }
            out[c] = v.to_integer().to_u64().unwrap_or_else(|| {
                let b: BigInt = v.to_integer();
                b.to_u64().unwrap_or(0)
            });
        }
        Ok(out)
    }

    /// Total dimension `sum_mu f^mu m_mu`.
    pub fn total_dim(&self, mults: &[u64]) -> u64 {
        mults.iter().zip(&self.dims).map(|(m, f)| m * f).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn kostka_small() {
        assert_eq!(kostka(&[2, 1], &[1, 1, 1]), 2);
        assert_eq!(kostka(&[3, 2], &[2, 2, 1]), 2);
        assert_eq!(kostka(&[2, 2], &[3, 1]), 0);
        assert_eq!(kostka(&[3], &[1, 1, 1]), 1);
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(irrep_dim(&p("2,1")), 2);
        assert_eq!(irrep_dim(&p("3,2")), 5);
        assert_eq!(irrep_dim(&p("3,3,3")), 42);
        for n in 1..=7 {
            let total: u64 = Partition::all(n).iter().map(|m| irrep_dim(m).pow(2)).sum();
            assert_eq!(total, factorial(n as u64));
            for mu in Partition::all(n) {
                assert_eq!(kostka(mu.parts(), &vec![1; n]), irrep_dim(&mu));
            }
        }
    }

    #[test]
    fn regular_representation_multiplicities() {
        // Polynomial functions on S_n-orbit of a generic point = regular representation.
        for n in 2..=6 {
            let sys = YoungSystem::new(n);
            assert_eq!(sys.equations.len(), Partition::all(n).len());
            let vals: Vec<u64> = sys
                .equations
                .iter()
                .map(|e| factorial(n as u64) / young_order(&e.nu))
                .collect();
            let m = sys.solve(&vals).unwrap();
            assert_eq!(m, sys.dims);
        }
    }
}
