use crate::linalg::{Echelon, SparseRow};
use crate::scalar::mod_inv;

/// Dense row echelon form over GF(p) with lazily reduced `u64` accumulators.
#[derive(Clone, Debug)]
pub struct ModpEchelon {
    p: u64,
    ncols: usize,
    limit: usize,
    rows: Vec<Vec<u64>>,
    /// `(pivot column, row index)`, sorted by column.
    pivots: Vec<(usize, usize)>,
    lazy_steps: u64,
}

impl ModpEchelon {
    pub fn new(p: u64, ncols: usize, limit: usize) -> Self {
        let sq = (p - 1).saturating_mul(p - 1).max(1);
        let lazy_steps = ((u64::MAX - p) / sq).max(1);
        ModpEchelon {
            p,
            ncols,
            limit: limit.min(ncols),
            rows: Vec::new(),
            pivots: Vec::new(),
            lazy_steps,
        }
    }

    fn densify(&self, row: &[(usize, u64)]) -> Vec<u64> {
        let mut w = vec![0u64; self.ncols];
        for &(c, v) in row {
            w[c] = (w[c] + v % self.p) % self.p;
        }
        w
    }

    fn reduce_dense(&self, w: &mut [u64]) {
        let p = self.p;
        let mut steps = 0u64;
        for &(pc, ri) in &self.pivots {
            let v = w[pc] % p;
            if v == 0 {
                w[pc] = 0;
                continue;
            }
            if steps == self.lazy_steps {
                for x in w.iter_mut() {
                    *x %= p;
                }
                steps = 0;
            }
            let f = p - v;
            let r = &self.rows[ri];
            for (x, &y) in w[pc..].iter_mut().zip(&r[pc..]) {
                *x += f * y;
            }
            steps += 1;
        }
        for x in w.iter_mut() {
            *x %= p;
        }
    }

    /// Insert an already dense row; returns whether it was independent.
    pub fn insert_dense(&mut self, mut w: Vec<u64>) -> bool {
        debug_assert_eq!(w.len(), self.ncols);
        self.reduce_dense(&mut w);
        let lead = w[..self.limit].iter().position(|&x| x != 0);
        match lead {
            Some(col) => {
                let inv = mod_inv(w[col], self.p).expect("nonzero pivot");
                for x in w[col..].iter_mut() {
                    *x = *x * inv % self.p;
                }
                let pos = self.pivots.partition_point(|&(c, _)| c < col);
                self.pivots.insert(pos, (col, self.rows.len()));
                self.rows.push(w);
                true
            }
            None => false,
        }
    }

    pub fn reduce_dense_copy(&self, w: &[u64]) -> Vec<u64> {
        let mut w = w.to_vec();
        self.reduce_dense(&mut w);
        w
    }
}

impl Echelon for ModpEchelon {
    type Elem = u64;

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, row: SparseRow<u64>) -> bool {
        let w = self.densify(&row);
        self.insert_dense(w)
    }

    fn reduce(&self, row: SparseRow<u64>) -> SparseRow<u64> {
        let mut w = self.densify(&row);
        self.reduce_dense(&mut w);
        w.into_iter().enumerate().filter(|(_, v)| *v != 0).collect()
    }

    fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|t| t.0).collect()
    }
}
