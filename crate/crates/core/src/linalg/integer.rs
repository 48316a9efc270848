use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{Echelon, SparseRow};

type IntRow = Vec<(usize, BigInt)>;

/// Fraction-free row echelon form for rational rows. Rows are stored as
/// primitive integer vectors with a positive leading entry.
#[derive(Clone, Debug)]
pub struct IntegerEchelon {
    ncols: usize,
    limit: usize,
    rows: Vec<IntRow>,
    pivot_of: BTreeMap<usize, usize>,
}

/// Clear denominators; returns the integer row and the multiplier used.
fn to_integer(row: &[(usize, BigRational)]) -> (IntRow, BigInt) {
    let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let out = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    (out, l)
}

fn content(w: &IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, v) in w {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `p * w - c * r`.
fn combine(w: &IntRow, p: &BigInt, c: &BigInt, r: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(w.len() + r.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < r.len() {
        let ci = w.get(i).map(|t| t.0).unwrap_or(usize::MAX);
        let cj = r.get(j).map(|t| t.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push((ci, p * &w[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(c * &r[j].1)));
            j += 1;
        } else {
            let v = p * &w[i].1 - c * &r[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl IntegerEchelon {
    pub fn new(ncols: usize, limit: usize) -> Self {
        IntegerEchelon {
            ncols,
            limit: limit.min(ncols),
            rows: Vec::new(),
            pivot_of: BTreeMap::new(),
        }
    }

    /// Reduce `w`, tracking `scale` so that `w = scale * (input - combination)`.
    fn reduce_inner(&self, mut w: IntRow, scale: &mut BigRational, full: bool) -> IntRow {
        let mut i = 0;
        while i < w.len() {
            let col = w[i].0;
            if col >= self.limit {
                break;
            }
            match self.pivot_of.get(&col) {
                Some(&ri) => {
                    let r = &self.rows[ri];
                    let p = &r[0].1;
                    let c = &w[i].1;
                    let g = p.gcd(c);
                    let (p, c) = (p / &g, c / &g);
                    w = combine(&w, &p, &c, r);
                    *scale *= BigRational::from_integer(p);
                    let g = content(&w);
                    if !g.is_zero() && !g.is_one() {
                        for t in w.iter_mut() {
                            t.1 /= &g;
                        }
                        *scale /= BigRational::from_integer(g);
                    }
                }
                None => {
                    if !full {
                        break;
                    }
                    i += 1;
                }
            }
        }
        w
    }
}

impl Echelon for IntegerEchelon {
    type Elem = BigRational;

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: SparseRow<BigRational>) -> bool {
        row.sort_by_key(|t| t.0);
        let (w, l) = to_integer(&row);
        let mut scale = BigRational::from_integer(l);
        let mut w = self.reduce_inner(w, &mut scale, false);
        match w.first() {
            Some(&(col, _)) if col < self.limit => {
                let g = content(&w);
                let neg = w[0].1.is_negative();
                for t in w.iter_mut() {
                    t.1 /= &g;
                    if neg {
                        t.1 = -&t.1;
                    }
                }
                self.pivot_of.insert(col, self.rows.len());
                self.rows.push(w);
                true
            }
            _ => false,
        }
    }

    fn reduce(&self, mut row: SparseRow<BigRational>) -> SparseRow<BigRational> {
        row.sort_by_key(|t| t.0);
        let (w, l) = to_integer(&row);
        let mut scale = BigRational::from_integer(l);
        let w = self.reduce_inner(w, &mut scale, true);
        w.into_iter()
            .map(|(c, v)| (c, BigRational::from_integer(v) / &scale))
            .collect()
    }

    fn pivot_columns(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{QArith, SparseEchelon};
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn row(v: &[(i64, i64)]) -> SparseRow<BigRational> {
        v.iter()
            .enumerate()
            .filter(|(_, t)| t.0 != 0)
            .map(|(i, &(n, d))| (i, rat(n, d)))
            .collect()
    }

    proptest! {
        #[test]
        fn agrees_with_rational_engine(
            rows in prop::collection::vec(prop::collection::vec((-3i64..4, 1i64..4), 7), 1..8),
            probe in prop::collection::vec((-3i64..4, 1i64..4), 7),
        ) {
            let mut a = IntegerEchelon::new(7, 5);
            let mut b = SparseEchelon::new(QArith, 7, 5);
            for r in &rows {
                prop_assert_eq!(a.insert(row(r)), b.insert(row(r)));
            }
            prop_assert_eq!(a.rank(), b.rank());
            prop_assert_eq!(a.pivot_columns(), b.pivot_columns());
            let ra = a.reduce(row(&probe));
            let rb = b.reduce(row(&probe));
            // Both remainders agree once every pivot column is cleared.
            let pivots = a.pivot_columns();
            prop_assert!(ra.iter().all(|t| !pivots.contains(&t.0)));
            prop_assert_eq!(ra, rb);
        }
    }
}
