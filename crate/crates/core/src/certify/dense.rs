//! Dense homogeneous polynomials indexed by a ranking of exponent vectors.

use std::collections::HashMap;

use crate::error::Result;
use crate::linalg::FieldArith;
use crate::poly::{count_monomials, Monomial, Poly};

/// Ranking of degree-`d` exponent vectors in `nvars` variables, lexicographic
/// on exponent vectors within a degree.
#[derive(Clone, Debug)]
pub struct Grading {
    pub nvars: usize,
    counts: Vec<Vec<usize>>,
}

impl Grading {
    pub fn new(nvars: usize, max_deg: u32) -> Grading {
        let counts = (0..=nvars)
            .map(|k| (0..=max_deg as usize + 1).map(|m| count_monomials(k, m as u32) as usize).collect())
            .collect();
        Grading { nvars, counts }
    }

    fn count(&self, k: usize, m: u32) -> usize {
        match self.counts[k].get(m as usize) {
            Some(&c) => c,
            None => count_monomials(k, m) as usize,
        }
    }

    pub fn len(&self, d: u32) -> usize {
        self.count(self.nvars, d)
    }

    pub fn rank(&self, e: &[u16]) -> usize {
        let mut left: u32 = e.iter().map(|&x| x as u32).sum();
        let n = self.nvars;
        let mut r = 0;
        for i in 0..n.saturating_sub(1) {
            for v in 0..e[i] as u32 {
                r += self.count(n - i - 1, left - v);
            }
            left -= e[i] as u32;
        }
        r
    }

    pub fn unrank_all(&self, d: u32) -> Vec<Vec<u16>> {
        let mut out = vec![Vec::new(); self.len(d)];
        for m in crate::poly::monomials_of_degree(self.nvars, d) {
            let k = self.rank(m.exps());
            out[k] = m.exps().to_vec();
        }
        out
    }
}

/// Dense arithmetic helpers for one ring.
pub struct DenseRing<A: FieldArith> {
    pub arith: A,
    pub grading: Grading,
    unranked: HashMap<u32, Vec<Vec<u16>>>,
    shifts: HashMap<(Vec<u16>, u32), Vec<u32>>,
}

impl<A: FieldArith> DenseRing<A> {
    pub fn new(arith: A, nvars: usize, max_deg: u32) -> DenseRing<A> {
        DenseRing {
            arith,
            grading: Grading::new(nvars, max_deg),
            unranked: HashMap::new(),
            shifts: HashMap::new(),
        }
    }

    pub fn len(&self, d: u32) -> usize {
        self.grading.len(d)
    }

    pub fn from_poly(&self, p: &Poly, d: u32) -> Result<Vec<A::Elem>> {
        let mut v = vec![self.arith.zero(); self.len(d)];
        for (m, c) in p.terms() {
            if m.degree() != d {
                return Err(crate::error::AcmError::DegreeMismatch {
                    expected: d,
                    found: m.degree(),
                });
            }
            v[self.grading.rank(m.exps())] = self.arith.from_scalar(c)?;
        }
        Ok(v)
    }

    pub fn to_poly(&mut self, v: &[A::Elem], d: u32) -> Poly {
        let ex = self.unranked(d).clone();
        let field = self.arith.field();
        Poly::from_terms(
            self.grading.nvars,
            field,
            v.iter()
                .enumerate()
                .filter(|(_, c)| !self.arith.is_zero(c))
                .map(|(i, c)| (Monomial::from_exps(&ex[i]), self.arith.to_scalar(c))),
        )
    }

    fn unranked(&mut self, d: u32) -> &Vec<Vec<u16>> {
        let g = &self.grading;
        self.unranked.entry(d).or_insert_with(|| g.unrank_all(d))
    }

    fn shift(&mut self, m: &[u16], d: u32) -> &Vec<u32> {
        let key = (m.to_vec(), d);
        if !self.shifts.contains_key(&key) {
            let ex = self.unranked(d).clone();
            let table: Vec<u32> = ex
                .iter()
                .map(|e| {
                    let s: Vec<u16> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                    self.grading.rank(&s) as u32
                })
                .collect();
            self.shifts.insert(key.clone(), table);
        }
        &self.shifts[&key]
    }

    /// Product of a dense form of degree `d` with a sparse homogeneous polynomial.
    pub fn mul_sparse(&mut self, v: &[A::Elem], d: u32, p: &[(Vec<u16>, A::Elem)], pd: u32) -> Vec<A::Elem> {
        let mut out = vec![self.arith.zero(); self.len(d + pd)];
        for (m, c) in p {
            let table = self.shift(m, d).clone();
            for (i, x) in v.iter().enumerate() {
                if self.arith.is_zero(x) {
                    continue;
                }
                let t = &mut out[table[i] as usize];
                *t = self.arith.add(t, &self.arith.mul(x, c));
            }
        }
        out
    }

    pub fn sparse_terms(&self, p: &Poly) -> Result<Vec<(Vec<u16>, A::Elem)>> {
        p.terms()
            .iter()
            .map(|(m, c)| Ok((m.exps().to_vec(), self.arith.from_scalar(c)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FpArith;
    use crate::scalar::Field;

    #[test]
    fn ranking_is_bijective() {
        let g = Grading::new(3, 10);
        for d in 0..8 {
            let mut seen = vec![false; g.len(d)];
            for m in crate::poly::monomials_of_degree(3, d) {
                let r = g.rank(m.exps());
                assert!(!seen[r]);
                seen[r] = true;
            }
            assert!(seen.into_iter().all(|x| x));
        }
    }

    #[test]
    fn dense_product_matches_poly() {
        let f = Field::Prime(101);
        let x = Poly::var(3, f, 0);
        let y = Poly::var(3, f, 1);
        let z = Poly::var(3, f, 2);
        let a = x.pow(2).add(&y.mul(&z));
        let b = x.add(&z.scale(&crate::scalar::Scalar::from_i64(f, 5)));
        let mut ring = DenseRing::new(FpArith::new(101), 3, 8);
        let va = ring.from_poly(&a, 2).unwrap();
        let bt = ring.sparse_terms(&b).unwrap();
        let prod = ring.mul_sparse(&va, 2, &bt, 1);
        assert_eq!(ring.to_poly(&prod, 3), a.mul(&b));
    }
}
