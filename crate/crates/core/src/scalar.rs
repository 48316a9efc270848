//! Exact coefficient fields: the rationals and prime fields GF(p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{AcmError, Result};

pub const DEFAULT_PRIME: u64 = 32003;
pub const SECOND_PRIME: u64 = 1_000_003;
/// Largest modulus accepted; keeps products of residues inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(AcmError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_exact_char_zero(&self) -> bool {
        matches!(self, Field::Rational)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = AcmError;

    /// Accepts `q`, `Q`, `gfp:<p>` and `GF(<p>)`.
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        let digits = if let Some(rest) = t.strip_prefix("gfp:") {
            rest
        } else if let Some(rest) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            rest
        } else if t == "gfp" {
            return Field::prime(DEFAULT_PRIME);
        } else {
            return Err(AcmError::Parse(format!("unknown field `{s}`")));
        };
        let p: u64 = digits
            .parse()
            .map_err(|_| AcmError::Parse(format!("bad modulus in `{s}`")))?;
        Field::prime(p)
    }
}

impl From<Field> for String {
    fn from(f: Field) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Field {
    type Error = AcmError;
    fn try_from(s: String) -> Result<Field> {
        s.parse()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

pub fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Reduce a rational modulo `p`; fails when the denominator vanishes.
pub fn rational_mod(q: &BigRational, p: u64) -> Result<u64> {
    let n = bigint_mod(q.numer(), p);
    let d = bigint_mod(q.denom(), p);
    let di = mod_inv(d, p).ok_or(AcmError::DivisionByZero)?;
    Ok(n * di % p)
}

/// An element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: (v.rem_euclid(p as i64)) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Prime {
                value: bigint_mod(v, p),
                modulus: p,
            },
        }
    }

    pub fn from_rational(field: Field, q: &BigRational) -> Result<Scalar> {
        Ok(match field {
            Field::Rational => Scalar::Rational(q.clone()),
            Field::Prime(p) => Scalar::Prime {
                value: rational_mod(q, p)?,
                modulus: p,
            },
        })
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    Err(AcmError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Prime { value, modulus } => Ok(Scalar::Prime {
                value: mod_inv(*value, *modulus).ok_or(AcmError::DivisionByZero)?,
                modulus: *modulus,
            }),
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(num_traits::pow(q.clone(), e as usize)),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: mod_pow(*value, e as u64, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Prime { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// Map into another field (only Q -> GF(p) or identity).
    pub fn to_field(&self, field: Field) -> Result<Scalar> {
        match (self, field) {
            (Scalar::Rational(q), f) => Scalar::from_rational(f, q),
            (Scalar::Prime { modulus, .. }, Field::Prime(p)) if *modulus == p => Ok(self.clone()),
            _ => Err(AcmError::FieldMismatch(format!(
                "cannot map {} into {}",
                self.field(),
                field
            ))),
        }
    }
}

fn check_same(a: &Scalar, b: &Scalar) -> u64 {
    match (a, b) {
        (Scalar::Prime { modulus: p, .. }, Scalar::Prime { modulus: q, .. }) if p == q => *p,
        _ => panic!("scalar field mismatch: {} vs {}", a.field(), b.field()),
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let p = check_same(self, rhs);
                let (a, b) = (self.residue().unwrap(), rhs.residue().unwrap());
                Scalar::Prime {
                    value: (a + b) % p,
                    modulus: p,
                }
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => {
                let p = check_same(self, rhs);
                let (a, b) = (self.residue().unwrap(), rhs.residue().unwrap());
                Scalar::Prime {
                    value: (a + p - b) % p,
                    modulus: p,
                }
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => {
                let p = check_same(self, rhs);
                let (a, b) = (self.residue().unwrap(), rhs.residue().unwrap());
                Scalar::Prime {
                    value: a * b % p,
                    modulus: p,
                }
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Parse `p/q`, an integer, or a decimal-free rational with a sign.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || AcmError::Parse(format!("bad rational `{s}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(AcmError::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_abs(q: &BigRational) -> BigRational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_fields() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("gfp:32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("gfp:32004".parse::<Field>().is_err());
    }

    #[test]
    fn rational_reduction() {
        let q = rat(3, 4);
        let r = rational_mod(&q, 7).unwrap();
        assert_eq!(r * 4 % 7, 3);
        assert!(rational_mod(&rat(1, 7), 7).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-7/2").unwrap(), rat(-7, 2));
        assert_eq!(format_rational(&rat(6, 3)), "2");
        assert!(parse_rational("1/0").is_err());
    }

    proptest! {
        #[test]
        fn reduction_is_a_ring_map(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let p = DEFAULT_PRIME;
            let f = Field::Prime(p);
            let x = rat(a, b);
            let y = rat(c, d);
            let sx = Scalar::from_rational(f, &x).unwrap();
            let sy = Scalar::from_rational(f, &y).unwrap();
            prop_assert_eq!(Scalar::from_rational(f, &(&x * &y)).unwrap(), &sx * &sy);
            prop_assert_eq!(Scalar::from_rational(f, &(&x + &y)).unwrap(), &sx + &sy);
        }

        #[test]
        fn inverse_round_trip(a in 1u64..32003) {
            let s = Scalar::Prime { value: a, modulus: 32003 };
            prop_assert!((&s * &s.inv().unwrap()).is_one());
        }
    }
}
