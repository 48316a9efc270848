use std::collections::BTreeMap;

use crate::linalg::arith::FieldArith;
use crate::linalg::{Echelon, SparseRow};

/// Row echelon form over sparse rows; each stored row is monic at its leading column.
#[derive(Clone, Debug)]
pub struct SparseEchelon<A: FieldArith> {
    arith: A,
    ncols: usize,
    limit: usize,
    rows: Vec<SparseRow<A::Elem>>,
    pivot_of: BTreeMap<usize, usize>,
}

impl<A: FieldArith> SparseEchelon<A> {
    pub fn new(arith: A, ncols: usize, limit: usize) -> Self {
        SparseEchelon {
            arith,
            ncols,
            limit: limit.min(ncols),
            rows: Vec::new(),
            pivot_of: BTreeMap::new(),
        }
    }

    fn axpy(&self, w: &[(usize, A::Elem)], f: &A::Elem, r: &[(usize, A::Elem)]) -> SparseRow<A::Elem> {
        let a = &self.arith;
        let mut out = Vec::with_capacity(w.len() + r.len());
        let (mut i, mut j) = (0, 0);
        while i < w.len() || j < r.len() {
            let ci = w.get(i).map(|t| t.0).unwrap_or(usize::MAX);
            let cj = r.get(j).map(|t| t.0).unwrap_or(usize::MAX);
            if ci < cj {
                out.push(w[i].clone());
                i += 1;
            } else if cj < ci {
                out.push((cj, a.neg(&a.mul(f, &r[j].1))));
                j += 1;
            } else {
                let v = a.sub(&w[i].1, &a.mul(f, &r[j].1));
                if !a.is_zero(&v) {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Reduce away every pivot column (`full`) or only until the leading
    /// pivotable entry is fresh.
    fn reduce_inner(&self, mut w: SparseRow<A::Elem>, full: bool) -> SparseRow<A::Elem> {
        let mut i = 0;
        while i < w.len() {
            let col = w[i].0;
            if col >= self.limit {
                break;
            }
            match self.pivot_of.get(&col) {
                Some(&ri) => {
                    let f = w[i].1.clone();
                    w = self.axpy(&w, &f, &self.rows[ri]);
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

    pub fn rows(&self) -> &[SparseRow<A::Elem>] {
        &self.rows
    }
}

impl<A: FieldArith> Echelon for SparseEchelon<A> {
    type Elem = A::Elem;

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: SparseRow<A::Elem>) -> bool {
        row.retain(|(_, v)| !self.arith.is_zero(v));
        row.sort_by_key(|t| t.0);
        let w = self.reduce_inner(row, false);
        match w.first() {
            Some(&(col, ref v)) if col < self.limit => {
                let inv = self.arith.inv(v).expect("nonzero pivot");
                let w: SparseRow<A::Elem> = w.iter().map(|(c, x)| (*c, self.arith.mul(x, &inv))).collect();
                self.pivot_of.insert(col, self.rows.len());
                self.rows.push(w);
                true
            }
            _ => false,
        }
    }

    fn reduce(&self, mut row: SparseRow<A::Elem>) -> SparseRow<A::Elem> {
        row.retain(|(_, v)| !self.arith.is_zero(v));
        row.sort_by_key(|t| t.0);
        self.reduce_inner(row, true)
    }

    fn pivot_columns(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }
}
