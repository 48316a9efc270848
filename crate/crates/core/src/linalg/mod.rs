//! Exact linear algebra on graded pieces.

pub mod arith;
pub mod basis;
pub mod dense;
pub mod integer;
pub mod sparse;

use std::collections::HashMap;

pub use arith::{FieldArith, FpArith, QArith};
pub use basis::{span_dim, EchelonBasis, Membership};
pub use dense::ModpEchelon;
pub use integer::IntegerEchelon;
pub use sparse::SparseEchelon;

use crate::error::Result;
use crate::poly::{monomials_of_degree, Monomial, Poly};

pub type SparseRow<E> = Vec<(usize, E)>;

/// Incremental row reduction. Pivots are taken among columns below a fixed
/// limit; columns past the limit are carried along (useful for tracking).
pub trait Echelon {
    type Elem;
    fn ncols(&self) -> usize;
    fn rank(&self) -> usize;
    /// Returns `true` when the row was independent of the stored rows.
    fn insert(&mut self, row: SparseRow<Self::Elem>) -> bool;
    /// Fully reduce a row against the stored rows.
    fn reduce(&self, row: SparseRow<Self::Elem>) -> SparseRow<Self::Elem>;
    fn pivot_columns(&self) -> Vec<usize>;
}

/// Column index for the monomials of one degree.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, degree: u32) -> MonomialIndex {
        MonomialIndex::from_monomials(monomials_of_degree(nvars, degree))
    }

    pub fn from_monomials(monomials: Vec<Monomial>) -> MonomialIndex {
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialIndex { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn get(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coefficient row of a polynomial; terms outside the index are an error.
    pub fn row<A: FieldArith>(&self, arith: &A, p: &Poly) -> Result<SparseRow<A::Elem>> {
        let mut out = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let col = self.get(m).ok_or_else(|| {
                crate::error::AcmError::DegreeMismatch {
                    expected: self.monomials.first().map(|x| x.degree()).unwrap_or(0),
                    found: m.degree(),
                }
            })?;
            out.push((col, arith.from_scalar(c)?));
        }
        out.sort_by_key(|t| t.0);
        Ok(out)
    }
}

/// Rank of a list of rows.
pub fn rank_of<A: FieldArith>(arith: &A, ncols: usize, rows: impl IntoIterator<Item = SparseRow<A::Elem>>) -> usize {
    let mut e = arith.engine(ncols, ncols);
    for r in rows {
        e.insert(r);
        if e.rank() == ncols {
            break;
        }
    }
    e.rank()
}

/// Reduced row echelon form of a dense matrix; returns pivot columns.
pub fn rref<A: FieldArith>(arith: &A, m: &mut [Vec<A::Elem>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(k) = (r..nrows).find(|&k| !arith.is_zero(&m[k][c])) else {
            continue;
        };
        m.swap(r, k);
        let inv = arith.inv(&m[r][c]).expect("nonzero");
        for x in m[r].iter_mut() {
            *x = arith.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || arith.is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = arith.sub(x, &arith.mul(&f, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : M x = 0}` where `M` has `ncols` columns; one vector per free column.
pub fn solve_linear<A: FieldArith>(arith: &A, rows: &[SparseRow<A::Elem>], ncols: usize) -> Vec<Vec<A::Elem>> {
    let mut e = arith.engine(ncols, ncols);
    let mut dense: Vec<Vec<A::Elem>> = Vec::new();
    for r in rows {
        if e.insert(r.clone()) {
            let mut d = vec![arith.zero(); ncols];
            for (c, v) in r {
                d[*c] = arith.add(&d[*c], v);
            }
            dense.push(d);
            if e.rank() == ncols {
                return Vec::new();
            }
        }
    }
    let pivots = rref(arith, &mut dense);
    let mut is_pivot = vec![None; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let mut basis = Vec::new();
    for f in 0..ncols {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![arith.zero(); ncols];
        v[f] = arith.one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = arith.neg(&dense[i][f]);
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rows_from(m: &[Vec<i64>], a: &FpArith) -> Vec<SparseRow<u64>> {
        m.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, a.from_i64(*v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn small_rank() {
        let a = FpArith::new(101);
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_of(&a, 3, rows_from(&m, &a)), 2);
        let ns = solve_linear(&a, &rows_from(&m, &a), 3);
        assert_eq!(ns.len(), 1);
    }

    proptest! {
        #[test]
        fn dense_and_sparse_agree(m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 6), 1..9)) {
            let a = FpArith::new(32003);
            let rows = rows_from(&m, &a);
            let mut sp = SparseEchelon::new(a, 6, 6);
            let mut de = a.engine(6, 6);
            for r in &rows {
                prop_assert_eq!(sp.insert(r.clone()), de.insert(r.clone()));
            }
            let q = QArith;
            let qrows: Vec<SparseRow<_>> = m.iter().map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, v)| (c, q.from_i64(*v))).collect()).collect();
            let rq = rank_of(&q, 6, qrows.clone());
            prop_assert!(de.rank() <= rq);
            let ns = solve_linear(&q, &qrows, 6);
            prop_assert_eq!(ns.len() + rq, 6);
            for v in &ns {
                for r in &qrows {
                    let mut s = q.zero();
                    for (c, x) in r {
                        s = q.add(&s, &q.mul(x, &v[*c]));
                    }
                    prop_assert!(q.is_zero(&s));
                }
            }
        }

        #[test]
        fn reduce_gives_membership(m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..6), coeffs in proptest::collection::vec(-3i64..4, 6)) {
            let a = FpArith::new(32003);
            let rows = rows_from(&m, &a);
            let mut e = a.engine(5, 5);
            for r in &rows { e.insert(r.clone()); }
            let mut comb = vec![0u64; 5];
            for (r, k) in rows.iter().zip(&coeffs) {
                for (c, v) in r { comb[*c] = a.add(&comb[*c], &a.mul(v, &a.from_i64(*k))); }
            }
            let row: SparseRow<u64> = comb.into_iter().enumerate().filter(|(_, v)| *v != 0).collect();
            prop_assert!(e.reduce(row).is_empty());
        }
    }
}
