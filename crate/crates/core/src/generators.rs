//! Power-sum style generators: weighted Newton sums and their relatives.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{AcmError, Result};
use crate::partition::Weights;
use crate::poly::{Monomial, Poly};
use crate::scalar::{Field, Scalar};

fn scalars(weights: &Weights, field: Field) -> Result<Vec<Scalar>> {
    weights
        .values()
        .iter()
        .map(|w| Scalar::from_rational(field, w))
        .collect()
}

/// `sum_j w_j y_j^i` in `r = weights.len()` variables.
pub fn newton_sum(weights: &Weights, i: u32, field: Field) -> Result<Poly> {
    let r = weights.len();
    let ws = scalars(weights, field)?;
    let mut p = Poly::zero(r, field);
    for (j, w) in ws.into_iter().enumerate() {
        let mut m = Monomial::one(r);
        m.0[j] = i as u16;
        p.add_term(m, w);
    }
    Ok(p)
}

/// Linear form giving the last variable on the slice `sum w_j y_j = 0`,
/// written in the first `r - 1` variables.
pub fn slice_last_variable(weights: &Weights, field: Field) -> Result<Poly> {
    let r = weights.len();
    if r < 2 {
        return Err(AcmError::InvalidInput("slice needs at least two weights".into()));
    }
    let ws = scalars(weights, field)?;
    let last_inv = ws[r - 1].inv()?;
    let coeffs: Vec<Scalar> = ws[..r - 1].iter().map(|w| -&(w * &last_inv)).collect();
    Ok(Poly::linear(&coeffs, field))
}

/// Restriction of the weighted Newton sum to the slice where the first one vanishes.
pub fn slice_newton_weights(weights: &Weights, i: u32, field: Field) -> Result<Poly> {
    let r = weights.len();
    let ws = scalars(weights, field)?;
    let last = slice_last_variable(weights, field)?;
    let mut p = last.pow(i).scale(&ws[r - 1]);
    for (j, w) in ws[..r - 1].iter().enumerate() {
        let mut m = Monomial::one(r - 1);
        m.0[j] = i as u16;
        p.add_term(m, w.clone());
    }
    Ok(p)
}

/// `a x^i + b y^i + (-a x - b y)^i`.
pub fn slice_newton(a: &BigRational, b: &BigRational, i: u32, field: Field) -> Result<Poly> {
    let w = Weights::new(vec![a.clone(), b.clone(), BigRational::one()]);
    slice_newton_weights(&w, i, field)
}

/// `a (x_1^i + ... + x_r^i) + y_1^i + ... + y_s^i`.
pub fn deformed_newton(r: usize, s: usize, a: &BigRational, i: u32, field: Field) -> Result<Poly> {
    newton_sum(&Weights::deformed(r, s, a), i, field)
}

/// Module element `(x^i - z^i) u + (y^i - z^i) v` with `z = -(beta+1) x - beta y`.
/// Variables are ordered `(x, y, u, v)`.
pub fn isotypic_gen(beta: &BigRational, i: u32, field: Field) -> Result<Poly> {
    let b = Scalar::from_rational(field, beta)?;
    let b1 = &b + &Scalar::one(field);
    let x = Poly::var(4, field, 0);
    let y = Poly::var(4, field, 1);
    let u = Poly::var(4, field, 2);
    let v = Poly::var(4, field, 3);
    let z = x.scale(&-&b1).add(&y.scale(&-&b));
    let zi = z.pow(i);
    Ok(x.pow(i).sub(&zi).mul(&u).add(&y.pow(i).sub(&zi).mul(&v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn slice_kills_first_sum() {
        let w = Weights::new(vec![rat(7, 2), rat(5, 3), rat(1, 1)]);
        let p1 = slice_newton_weights(&w, 1, Field::Rational).unwrap();
        assert!(p1.is_zero());
        let p2 = slice_newton(&rat(2, 1), &rat(3, 1), 2, Field::Rational).unwrap();
        assert_eq!(p2.evaluate(&[Scalar::from_i64(Field::Rational, 1), Scalar::from_i64(Field::Rational, 1)]).unwrap(),
            Scalar::from_i64(Field::Rational, 30));
    }

    #[test]
    fn slice_agrees_with_substitution() {
        let w = Weights::new(vec![rat(3, 1), rat(2, 1), rat(1, 1)]);
        let f = Field::Rational;
        let full = newton_sum(&w, 4, f).unwrap();
        let last = slice_last_variable(&w, f).unwrap();
        let images = vec![Poly::var(2, f, 0), Poly::var(2, f, 1), last];
        assert_eq!(full.compose(&images).unwrap(), slice_newton_weights(&w, 4, f).unwrap());
    }

    #[test]
    fn isotypic_generator_shape() {
        let t1 = isotypic_gen(&rat(7, 3), 1, Field::Rational).unwrap();
        assert_eq!(t1.homogeneous_degree(), Some(2));
        assert_eq!(t1.len(), 4);
    }
}
