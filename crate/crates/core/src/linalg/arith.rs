use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{AcmError, Result};
use crate::linalg::dense::ModpEchelon;
use crate::linalg::integer::IntegerEchelon;
use crate::linalg::Echelon;
use crate::scalar::{bigint_mod, mod_inv, rational_mod, Field, Scalar};

/// Field arithmetic on an unboxed element type.
pub trait FieldArith: Clone + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Debug + Send + Sync;
    type Engine: Echelon<Elem = Self::Elem> + Send;

    fn field(&self) -> Field;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem>;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    /// Row-reduction engine with pivots restricted to columns `< limit`.
    fn engine(&self, ncols: usize, limit: usize) -> Self::Engine;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct QArith;

impl FieldArith for QArith {
    type Elem = BigRational;
    type Engine = IntegerEchelon;

    fn field(&self) -> Field {
        Field::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(AcmError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational> {
        s.as_rational()
            .cloned()
            .ok_or_else(|| AcmError::FieldMismatch(format!("expected Q, found {}", s.field())))
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn engine(&self, ncols: usize, limit: usize) -> IntegerEchelon {
        IntegerEchelon::new(ncols, limit)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FpArith {
    pub p: u64,
}

impl FpArith {
    pub fn new(p: u64) -> FpArith {
        FpArith { p }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<u64> {
        rational_mod(q, self.p)
    }
}

impl FieldArith for FpArith {
    type Elem = u64;
    type Engine = ModpEchelon;

    fn field(&self) -> Field {
        Field::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        mod_inv(*a, self.p).ok_or(AcmError::DivisionByZero)
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        bigint_mod(v, self.p)
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64> {
        match s {
            Scalar::Prime { value, modulus } if *modulus == self.p => Ok(*value),
            Scalar::Rational(q) => rational_mod(q, self.p),
            _ => Err(AcmError::FieldMismatch(format!(
                "expected GF({}), found {}",
                self.p,
                s.field()
            ))),
        }
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Prime {
            value: *a,
            modulus: self.p,
        }
    }
    fn engine(&self, ncols: usize, limit: usize) -> ModpEchelon {
        ModpEchelon::new(self.p, ncols, limit)
    }
}
