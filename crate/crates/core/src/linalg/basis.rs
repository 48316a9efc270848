use std::collections::BTreeMap;

use crate::error::{AcmError, Result};
use crate::linalg::{rank_of, FpArith, MonomialIndex, QArith};
use crate::poly::{Monomial, Poly};
use crate::scalar::{Field, Scalar};

/// Result of a membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `f = sum_i c_i g_i` over the inserted generators `g_i`.
    Member(BTreeMap<usize, Scalar>),
    NotMember,
}

#[derive(Clone, Debug)]
struct Row {
    poly: Poly,
    coords: BTreeMap<usize, Scalar>,
}

/// Reduced row echelon basis of a subspace of the degree-`d` forms.
/// Each row is monic at its smallest monomial, and that monomial appears in no other row.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    degree: u32,
    nvars: usize,
    field: Field,
    rows: Vec<Row>,
    pivots: BTreeMap<Monomial, usize>,
    inserted: usize,
}

fn add_coords(acc: &mut BTreeMap<usize, Scalar>, c: &Scalar, other: &BTreeMap<usize, Scalar>) {
    for (k, v) in other {
        let t = c * v;
        let e = acc.entry(*k).or_insert_with(|| Scalar::zero(t.field()));
        *e = &*e + &t;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

impl EchelonBasis {
    pub fn new(nvars: usize, degree: u32, field: Field) -> EchelonBasis {
        EchelonBasis {
            degree,
            nvars,
            field,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Poly> {
        self.rows.iter().map(|r| &r.poly)
    }

    fn check(&self, f: &Poly) -> Result<()> {
        if f.field() != self.field {
            return Err(AcmError::FieldMismatch(format!("{} vs {}", f.field(), self.field)));
        }
        if f.nvars() != self.nvars {
            return Err(AcmError::VarCountMismatch {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        if let Some(m) = f.terms().keys().find(|m| m.degree() != self.degree) {
            return Err(AcmError::DegreeMismatch {
                expected: self.degree,
                found: m.degree(),
            });
        }
        Ok(())
    }

    fn reduce(&self, f: &Poly, coords: &mut BTreeMap<usize, Scalar>) -> Poly {
        let mut r = f.clone();
        for (m, &ri) in &self.pivots {
            let c = r.coeff(m);
            if c.is_zero() {
                continue;
            }
            let neg = -&c;
            r.add_scaled(&neg, &self.rows[ri].poly);
            add_coords(coords, &neg, &self.rows[ri].coords);
        }
        r
    }

    /// Insert `f` as generator number `self.inserted()`; returns whether the span grew.
    pub fn insert(&mut self, f: &Poly) -> Result<bool> {
        self.check(f)?;
        let id = self.inserted;
        self.inserted += 1;
        let mut coords = BTreeMap::new();
        coords.insert(id, Scalar::one(self.field));
        let r = self.reduce(f, &mut coords);
        let Some((m, c)) = r.min_term().map(|(m, c)| (m.clone(), c.clone())) else {
            return Ok(false);
        };
        let inv = c.inv()?;
        let poly = r.scale(&inv);
        let coords: BTreeMap<usize, Scalar> = coords.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
        for row in self.rows.iter_mut() {
            let k = row.poly.coeff(&m);
            if k.is_zero() {
                continue;
            }
            let neg = -&k;
            row.poly.add_scaled(&neg, &poly);
            add_coords(&mut row.coords, &neg, &coords);
        }
        self.pivots.insert(m, self.rows.len());
        self.rows.push(Row { poly, coords });
        Ok(true)
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Canonical remainder of `f` modulo the span.
    pub fn remainder(&self, f: &Poly) -> Result<Poly> {
        self.check(f)?;
        Ok(self.reduce(f, &mut BTreeMap::new()))
    }

    pub fn membership(&self, f: &Poly) -> Result<Membership> {
        self.check(f)?;
        let mut coords = BTreeMap::new();
        let r = self.reduce(f, &mut coords);
        if r.is_zero() {
            Ok(Membership::Member(coords.into_iter().map(|(k, v)| (k, -&v)).collect()))
        } else {
            Ok(Membership::NotMember)
        }
    }
}

/// Dimension of the span of degree-`d` forms.
pub fn span_dim(polys: &[Poly], d: u32) -> Result<usize> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let idx = MonomialIndex::new(first.nvars(), d);
    match first.field() {
        Field::Rational => {
            let a = QArith;
            let rows = polys.iter().map(|p| idx.row(&a, p)).collect::<Result<Vec<_>>>()?;
            Ok(rank_of(&a, idx.len(), rows))
        }
        Field::Prime(p) => {
            let a = FpArith::new(p);
            let rows = polys.iter().map(|f| idx.row(&a, f)).collect::<Result<Vec<_>>>()?;
            Ok(rank_of(&a, idx.len(), rows))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::monomials_of_degree;
    use proptest::prelude::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    #[test]
    fn membership_coordinates() {
        let f = Field::Rational;
        let x = Poly::var(2, f, 0);
        let y = Poly::var(2, f, 1);
        let g0 = x.pow(2).add(&y.pow(2));
        let g1 = x.mul(&y);
        let mut b = EchelonBasis::new(2, 2, f);
        assert!(b.insert(&g0).unwrap());
        assert!(b.insert(&g1).unwrap());
        assert!(!b.insert(&g0.scale(&q(3))).unwrap());
        let t = g0.scale(&q(2)).add(&g1.scale(&q(-5)));
        let Membership::Member(c) = b.membership(&t).unwrap() else {
            panic!("expected member")
        };
        let mut rebuilt = Poly::zero(2, f);
        let gens = [g0.clone(), g1.clone(), g0.scale(&q(3))];
        for (k, v) in &c {
            rebuilt.add_scaled(v, &gens[*k]);
        }
        assert_eq!(rebuilt, t);
        assert_eq!(b.membership(&x.pow(2)).unwrap(), Membership::NotMember);
        assert!(b.insert(&x).is_err());
    }

    proptest! {
        #[test]
        fn rows_are_reduced(coeffs in proptest::collection::vec(proptest::collection::vec(-2i64..3, 6), 1..7)) {
            let f = Field::Rational;
            let ms = monomials_of_degree(3, 2);
            let polys: Vec<Poly> = coeffs.iter().map(|cs| Poly::from_terms(3, f, ms.iter().cloned().zip(cs.iter().map(|&c| q(c))))).collect();
            let mut b = EchelonBasis::new(3, 2, f);
            for p in &polys { b.insert(p).unwrap(); }
            prop_assert_eq!(b.dim(), span_dim(&polys, 2).unwrap());
            for (m, &ri) in &b.pivots {
                for (k, row) in b.rows.iter().enumerate() {
                    let c = row.poly.coeff(m);
                    if k == ri { prop_assert!(c.is_one()); } else { prop_assert!(c.is_zero()); }
                }
                prop_assert_eq!(b.rows[ri].poly.min_term().unwrap().0, m);
            }
            for p in &polys {
                prop_assert!(matches!(b.membership(p).unwrap(), Membership::Member(_)));
            }
        }
    }
}
