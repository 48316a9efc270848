//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{AcmError, Result};
use crate::scalar::{Field, Scalar};

/// Exponent vector. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut m = Monomial::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exps(e: &[u16]) -> Monomial {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `nvars` variables, in ascending order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    let mut cur = vec![0u16; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = left as u16;
            out.push(Monomial::from_exps(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort();
    out
}

/// Exponent vectors `e` with `sum e_i w_i = d`.
pub fn weighted_monomials(weights: &[u32], d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; weights.len()];
    fn rec(i: usize, left: u32, w: &[u32], cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == w.len() {
            if left == 0 {
                out.push(Monomial::from_exps(cur));
            }
            return;
        }
        let mut e = 0;
        while e * w[i] <= left {
            cur[i] = e as u16;
            rec(i + 1, left - e * w[i], w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, d, weights, &mut cur, &mut out);
    out.sort();
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Number of monomials of degree `d` in `n` variables.
pub fn count_monomials(n: usize, d: u32) -> u64 {
    if n == 0 {
        return (d == 0) as u64;
    }
    binomial(d as u64 + n as u64 - 1, n as u64 - 1)
}

/// A polynomial over a fixed [`Field`] in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize, field: Field) -> Poly {
        Poly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Poly {
        let field = c.field();
        let mut p = Poly::zero(nvars, field);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize, field: Field) -> Poly {
        Poly::constant(nvars, Scalar::one(field))
    }

    pub fn var(nvars: usize, field: Field, i: usize) -> Poly {
        Poly::monomial(Monomial::var(nvars, i), Scalar::one(field))
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Poly {
        let mut p = Poly::zero(m.nvars(), c.field());
        p.add_term(m, c);
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[Scalar], field: Field) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(n, field);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(nvars: usize, field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Poly {
        let mut p = Poly::zero(nvars, field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Smallest monomial in the term order.
    pub fn min_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `Some(d)` when every term has degree `d`; the zero polynomial reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        if it.all(|m| m.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    fn compatible(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(AcmError::VarCountMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        if self.field != other.field {
            return Err(AcmError::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.compatible(other)?;
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly {
            nvars: self.nvars,
            field: self.field,
            terms,
        })
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.try_add(other).expect("compatible polynomials")
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.try_mul(other).expect("compatible polynomials")
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Poly) {
        assert_eq!(self.nvars, other.nvars);
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.field);
        }
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), c * v)).collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), -v)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c * &Scalar::from_i64(self.field, e as i64));
        }
        out
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(AcmError::VarCountMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitute every variable `x_i` by `images[i]` (all in a common ring).
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(AcmError::VarCountMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target_n = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(target_n, self.field), p.clone()])
            .collect();
        // Products of powers for monomials with the last used variable removed.
        let mut prefixes: HashMap<Vec<u16>, Poly> = HashMap::new();
        let mut out = Poly::zero(target_n, self.field);
        for (m, c) in &self.terms {
            let t = power_product(m.exps(), images, &mut powers, &mut prefixes, target_n, self.field);
            out.add_scaled(c, &t);
        }
        Ok(out)
    }

    /// `self += other`.
    pub fn add_assign(&mut self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// Substitute a single variable by a polynomial in the same ring.
    pub fn substitute(&self, var: usize, value: &Poly) -> Result<Poly> {
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                if i == var {
                    value.clone()
                } else {
                    Poly::var(self.nvars, self.field, i)
                }
            })
            .collect();
        self.compose(&images)
    }

    pub fn map_field(&self, field: Field) -> Result<Poly> {
        let mut out = Poly::zero(self.nvars, field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.to_field(field)?);
        }
        Ok(out)
    }

    /// Homogeneous component of degree `d`.
    pub fn component(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                let name = names.get(i).copied().map(String::from).unwrap_or(format!("x{}", i + 1));
                match e {
                    0 => {}
                    1 => mono.push(name),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            let cs = c.to_string();
            if mono.is_empty() {
                parts.push(cs);
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{cs}*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

fn power_product(
    exps: &[u16],
    images: &[Poly],
    powers: &mut [Vec<Poly>],
    prefixes: &mut HashMap<Vec<u16>, Poly>,
    nvars: usize,
    field: Field,
) -> Poly {
    let Some(i) = exps.iter().rposition(|&e| e > 0) else {
        return Poly::one(nvars, field);
    };
    let e = exps[i] as usize;
    while powers[i].len() <= e {
        let next = powers[i].last().unwrap().mul(&images[i]);
        powers[i].push(next);
    }
    let mut rest = exps.to_vec();
    rest[i] = 0;
    if rest.iter().all(|&x| x == 0) {
        return powers[i][e].clone();
    }
    let head = match prefixes.get(&rest) {
        Some(p) => p.clone(),
        None => {
            let p = power_product(&rest, images, powers, prefixes, nvars, field);
            prefixes.insert(rest, p.clone());
            p
        }
    };
    head.mul(&powers[i][e])
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::from_exps(&[0, 3]);
        let b = Monomial::from_exps(&[2, 0]);
        assert!(b < a);
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn counts() {
        assert_eq!(count_monomials(4, 12), 455);
        assert_eq!(monomials_of_degree(4, 5).len() as u64, count_monomials(4, 5));
        assert_eq!(weighted_monomials(&[2, 3], 12).len(), 3);
    }

    #[test]
    fn derivative_and_evaluation() {
        let f = Field::Rational;
        let x = Poly::var(2, f, 0);
        let y = Poly::var(2, f, 1);
        let p = x.pow(3).add(&x.mul(&y).scale(&q(2)));
        let dp = p.partial_derivative(0);
        assert_eq!(dp, x.pow(2).scale(&q(3)).add(&y.scale(&q(2))));
        let v = p.evaluate(&[q(2), q(5)]).unwrap();
        assert_eq!(v, q(28));
    }

    #[test]
    fn substitution() {
        let f = Field::Rational;
        let x = Poly::var(2, f, 0);
        let y = Poly::var(2, f, 1);
        let p = x.mul(&y);
        let s = p.substitute(1, &x.add(&y)).unwrap();
        assert_eq!(s, x.pow(2).add(&x.mul(&y)));
        let half = Scalar::Rational(rat(1, 2));
        assert_eq!(x.scale(&half).scale(&q(2)), x);
    }

    #[test]
    fn mismatch_errors() {
        let a = Poly::var(2, Field::Rational, 0);
        let b = Poly::var(3, Field::Rational, 0);
        assert!(a.try_add(&b).is_err());
        let c = Poly::var(2, Field::Prime(7), 0);
        assert!(a.try_mul(&c).is_err());
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(((0u16..3, 0u16..3, 0u16..3), -5i64..5), 0..6).prop_map(|ts| {
            Poly::from_terms(
                3,
                Field::Rational,
                ts.into_iter()
                    .map(|((a, b, c), k)| (Monomial::from_exps(&[a, b, c]), q(k))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn leibniz(a in small_poly(), b in small_poly(), v in 0usize..3) {
            let lhs = a.mul(&b).partial_derivative(v);
            let rhs = a.partial_derivative(v).mul(&b).add(&a.mul(&b.partial_derivative(v)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
