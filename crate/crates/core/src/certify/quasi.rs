//! Quasi-invariants in two variables: `dF/dx` vanishes on the line `x = -a(x + y)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{AcmError, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

/// Restriction of `df/dx` to the line `(x, y) = (-a t, (1 + a) t)`, as a polynomial in `t`.
fn restricted_derivative(f: &Poly, a: &BigRational) -> Result<Poly> {
    if f.nvars() != 2 {
        return Err(AcmError::VarCountMismatch {
            expected: 2,
            found: f.nvars(),
        });
    }
    let field = f.field();
    let sa = Scalar::from_rational(field, a)?;
    let t = Poly::var(1, field, 0);
    let x = t.scale(&-&sa);
    let y = t.scale(&(&sa + &Scalar::one(field)));
    f.partial_derivative(0).compose(&[x, y])
}

pub fn quasi_invariant_check(f: &Poly, a: &BigRational) -> Result<bool> {
    Ok(restricted_derivative(f, a)?.is_zero())
}

/// Dimensions of the symmetric quasi-invariants in degrees `0..=max_deg`.
pub fn quasi_invariant_dims(a: &BigRational, max_deg: u32, field: Field) -> Result<Vec<u64>> {
    if a.is_zero() {
        return Err(AcmError::InvalidInput("a = 0 gives no condition".into()));
    }
    let x = Poly::var(2, field, 0);
    let y = Poly::var(2, field, 1);
    let u = x.add(&y);
    let v = x.pow(2).add(&y.pow(2));
    let mut dims = Vec::new();
    for d in 0..=max_deg {
        // Each u^i v^j restricts to c t^{d-1}; the functional is the vector of c.
        let mut count = 0u64;
        let mut nonzero = false;
        for j in 0..=d / 2 {
            let i = d - 2 * j;
            count += 1;
            let g = u.pow(i).mul(&v.pow(j));
            if !restricted_derivative(&g, a)?.is_zero() {
                nonzero = true;
            }
        }
        dims.push(count - nonzero as u64);
    }
    Ok(dims)
}

/// `a` values where the generators fail to produce every quasi-invariant.
pub fn is_exceptional(a: &BigRational) -> bool {
    let half = BigRational::new(1.into(), 2.into());
    a.is_zero() || *a == -BigRational::one() || *a == -half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::slice_newton;
    use crate::scalar::rat;

    #[test]
    fn newton_sums_are_quasi_invariant() {
        let a = rat(5, 3);
        for i in 2..=6 {
            let p = slice_newton(&a, &a, i, Field::Rational).unwrap();
            assert!(quasi_invariant_check(&p, &a).unwrap());
        }
    }

    #[test]
    fn trivial_cases() {
        let f = Field::Rational;
        assert!(!quasi_invariant_check(&Poly::var(2, f, 0), &rat(1, 1)).unwrap());
        assert!(quasi_invariant_check(&Poly::one(2, f), &rat(1, 1)).unwrap());
        assert!(quasi_invariant_dims(&rat(0, 1), 3, f).is_err());
    }

    #[test]
    fn dims_low_degrees() {
        let d = quasi_invariant_dims(&rat(2, 7), 7, Field::Rational).unwrap();
        assert_eq!(d, vec![1, 0, 1, 1, 2, 2, 3, 3]);
    }
}
