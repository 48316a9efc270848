//! Rational certificates from images modulo word-size primes: CRT, rational
//! reconstruction, then an exact re-check over Q.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certify::verify::verify_certificate;
use crate::certify::{
    build, recursion_coefficients, Annihilator, CertifyOptions, FreenessCertificate, GenLabel, Witness, WitnessTerm,
};
use crate::error::{AcmError, Result};
use crate::linalg::arith::FpArith;
use crate::poly::{Monomial, Poly};
use crate::scalar::{is_prime, Field, Scalar, MAX_PRIME};
use crate::subalgebra::GeneratorFamily;

const MAX_IMAGES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Annihilator(usize, Monomial),
    Membership(usize, Vec<u16>, usize),
    Closure(usize, Vec<u16>, usize),
}

/// Everything about a certificate except its coefficients.
#[derive(Debug, PartialEq)]
struct Shape {
    parameters: Vec<u32>,
    generators: Vec<GenLabel>,
    annihilators: Vec<(String, u32)>,
    memberships: Vec<(GenLabel, u32)>,
    closure: Vec<(GenLabel, u32)>,
    independent_degrees: Vec<u32>,
}

fn shape(c: &FreenessCertificate) -> Shape {
    let w = |ws: &[Witness]| ws.iter().map(|w| (w.target.clone(), w.degree)).collect();
    Shape {
        parameters: c.parameters.clone(),
        generators: c.generators.clone(),
        annihilators: c.annihilator_degrees(),
        memberships: w(&c.memberships),
        closure: w(&c.closure),
        independent_degrees: c.independent_degrees.clone(),
    }
}

fn slots(c: &FreenessCertificate) -> BTreeMap<Slot, u64> {
    let mut out = BTreeMap::new();
    for (i, a) in c.annihilators.iter().enumerate() {
        for (m, s) in a.poly.terms() {
            out.insert(Slot::Annihilator(i, m.clone()), s.residue().unwrap_or(0));
        }
    }
    for (i, w) in c.memberships.iter().enumerate() {
        for t in &w.terms {
            out.insert(Slot::Membership(i, t.params.clone(), t.generator), t.coeff.residue().unwrap_or(0));
        }
    }
    for (i, w) in c.closure.iter().enumerate() {
        for t in &w.terms {
            out.insert(Slot::Closure(i, t.params.clone(), t.generator), t.coeff.residue().unwrap_or(0));
        }
    }
    out
}

/// `r/s` with `r = s*a mod m` and `|r|, s <= sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Primes below 2^31, largest first.
fn primes() -> impl Iterator<Item = u64> {
    (3..=MAX_PRIME).rev().step_by(2).filter(|&p| is_prime(p))
}

struct Crt {
    modulus: BigInt,
    values: BTreeMap<Slot, BigInt>,
}

impl Crt {
    fn add(&mut self, p: u64, image: &BTreeMap<Slot, u64>) {
        let pb = BigInt::from(p);
        let m = self.modulus.clone();
        // m * minv == 1 (mod p)
        let minv = BigInt::from(crate::scalar::mod_inv(crate::scalar::bigint_mod(&m, p), p).expect("distinct primes"));
        let mut keys: Vec<Slot> = self.values.keys().cloned().collect();
        keys.extend(image.keys().filter(|k| !self.values.contains_key(k)).cloned());
        for k in keys {
            let old = self.values.get(&k).cloned().unwrap_or_default();
            let r = BigInt::from(image.get(&k).copied().unwrap_or(0));
            let t = ((r - &old) * &minv).mod_floor(&pb);
            self.values.insert(k, old + &m * t);
        }
        self.modulus = m * pb;
    }

    fn reconstruct(&self) -> Option<BTreeMap<Slot, BigRational>> {
        self.values
            .iter()
            .map(|(k, v)| rational_reconstruction(v, &self.modulus).map(|q| (k.clone(), q)))
            .collect()
    }
}

fn assemble(
    family: &GeneratorFamily,
    reference: &FreenessCertificate,
    coeffs: &BTreeMap<Slot, BigRational>,
) -> Result<FreenessCertificate> {
    let f = Field::Rational;
    let k = reference.parameters.len();
    let mut annihilators: Vec<Annihilator> = reference
        .annihilators
        .iter()
        .map(|a| Annihilator {
            variable: a.variable.clone(),
            degree: a.degree,
            poly: Poly::zero(k + 1, f),
        })
        .collect();
    let mut memberships: Vec<Witness> = reference
        .memberships
        .iter()
        .map(|w| Witness {
            target: w.target.clone(),
            degree: w.degree,
            terms: Vec::new(),
        })
        .collect();
    let mut closure: Vec<Witness> = reference
        .closure
        .iter()
        .map(|w| Witness {
            target: w.target.clone(),
            degree: w.degree,
            terms: Vec::new(),
        })
        .collect();
    for (slot, q) in coeffs {
        if q.is_zero() {
            continue;
        }
        let c = Scalar::Rational(q.clone());
        match slot {
            Slot::Annihilator(i, m) => annihilators[*i].poly.add_term(m.clone(), c),
            Slot::Membership(i, e, g) => memberships[*i].terms.push(WitnessTerm {
                params: e.clone(),
                generator: *g,
                coeff: c,
            }),
            Slot::Closure(i, e, g) => closure[*i].terms.push(WitnessTerm {
                params: e.clone(),
                generator: *g,
                coeff: c,
            }),
        }
    }
    let (recursion_degree, recursion) = recursion_coefficients(&annihilators)?;
    Ok(FreenessCertificate {
        family: family.clone(),
        field: f,
        parameters: reference.parameters.clone(),
        generators: reference.generators.clone(),
        annihilators,
        recursion,
        recursion_degree,
        memberships,
        closure,
        independent_degrees: reference.independent_degrees.clone(),
        bezout_rank: reference.bezout_rank,
    })
}

/// Certificate over Q. Independence of the spanning set modulo a prime implies
/// independence over Q; every other claim is re-checked exactly before returning.
pub fn rational_certificate(family: &GeneratorFamily, opts: &CertifyOptions) -> Result<FreenessCertificate> {
    let mut reference: Option<(Shape, FreenessCertificate)> = None;
    let mut crt = Crt {
        modulus: BigInt::one(),
        values: BTreeMap::new(),
    };
    let mut last: Option<BTreeMap<Slot, BigRational>> = None;
    let mut used = 0;
    for p in primes() {
        if used == MAX_IMAGES {
            break;
        }
        let image = match build(&FpArith::new(p), family, opts) {
            Ok(c) => c,
            Err(e) if reference.is_none() => return Err(e),
            Err(e) => {
                log::warn!("skipping prime {p}: {e}");
                continue;
            }
        };
        match &reference {
            None => reference = Some((shape(&image), image.clone())),
            Some((s, _)) if *s != shape(&image) => {
                log::warn!("skipping prime {p}: certificate shape differs");
                continue;
            }
            Some(_) => {}
        }
        crt.add(p, &slots(&image));
        used += 1;
        let Some(rec) = crt.reconstruct() else {
            continue;
        };
        if last.as_ref() == Some(&rec) {
            let cert = assemble(family, &reference.as_ref().unwrap().1, &rec)?;
            match verify_certificate(&cert, 4) {
                Ok(_) => {
                    log::info!("rational certificate from {used} modular images");
                    return Ok(cert);
                }
                Err(e) => log::debug!("reconstruction with {used} images rejected: {e}"),
            }
        }
        last = Some(rec);
    }
    Err(AcmError::CertificateFailed(format!(
        "no rational certificate from {used} modular images"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        for (n, d) in [(3i64, 7i64), (-22, 5), (0, 1), (1, 1), (-1, 12)] {
            let q = rat(n, d);
            let e = BigInt::from(d).extended_gcd(&m);
            let img = (BigInt::from(n) * e.x).mod_floor(&m);
            assert_eq!(rational_reconstruction(&img, &m), Some(q));
        }
    }

    #[test]
    fn modular_certificate_matches_direct_one() {
        let fam = GeneratorFamily::slice_newton(&rat(5, 2), &rat(5, 2)).unwrap();
        let opts = CertifyOptions::default();
        let modular = rational_certificate(&fam, &opts).unwrap();
        let direct = build(&crate::linalg::arith::QArith, &fam, &opts).unwrap();
        assert_eq!(shape(&modular), shape(&direct));
        assert_eq!(modular.annihilators, direct.annihilators);
        let sorted = |c: &FreenessCertificate| -> Vec<Vec<(Vec<u16>, usize, Scalar)>> {
            c.memberships
                .iter()
                .chain(&c.closure)
                .map(|w| {
                    let mut t: Vec<_> = w.terms.iter().map(|t| (t.params.clone(), t.generator, t.coeff.clone())).collect();
                    t.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
                    t
                })
                .collect()
        };
        assert_eq!(sorted(&modular), sorted(&direct));
    }
}
