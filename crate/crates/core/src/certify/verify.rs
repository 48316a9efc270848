//! Independent re-check of a freeness certificate.
//!
//! Every identity checked here is between forms of known degree `d` in the
//! family's variables. A form of degree `d` that vanishes on
//! `{0..=d}^(n-1) x {1}` is zero, so identities are checked exactly by
//! evaluation on that grid. Fields with at most `d` elements fall back to
//! polynomial expansion.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;

use crate::certify::{eval_in_ring, split_by_last_variable, FreenessCertificate, GenLabel, Witness};
use crate::error::{AcmError, Result};
use crate::poly::{Monomial, Poly};
use crate::scalar::{Field, Scalar};
use crate::subalgebra::GeneratorFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub annihilators: usize,
    pub recursion_checked: Vec<u32>,
    pub witnesses: usize,
}

fn fail(msg: String) -> AcmError {
    AcmError::CertificateFailed(msg)
}

/// Points on which no nonzero form of degree `d` in `nvars` variables vanishes.
fn form_grid(nvars: usize, d: u32, field: Field) -> Option<Vec<Vec<Scalar>>> {
    if let Field::Prime(p) = field {
        if d as u64 >= p {
            return None;
        }
    }
    let mut pts: Vec<Vec<Scalar>> = vec![Vec::new()];
    for _ in 1..nvars {
        pts = pts
            .into_iter()
            .flat_map(|pt| {
                (0..=d).map(move |x| {
                    let mut q = pt.clone();
                    q.push(Scalar::from_i64(field, x as i64));
                    q
                })
            })
            .collect();
    }
    for pt in &mut pts {
        pt.push(Scalar::one(field));
    }
    Some(pts)
}

/// Coordinate values and power sums `P_0..=P_kmax` at one point.
struct PointValues {
    coords: Vec<Scalar>,
    power_sums: Vec<Scalar>,
}

impl PointValues {
    fn new(coords: &[Poly], weights: &[Scalar], pt: &[Scalar], kmax: u32) -> Result<PointValues> {
        let field = weights[0].field();
        let coords: Vec<Scalar> = coords.iter().map(|c| c.evaluate(pt)).collect::<Result<_>>()?;
        let mut pw: Vec<Scalar> = weights.to_vec();
        let mut power_sums = Vec::with_capacity(kmax as usize + 1);
        for k in 0..=kmax {
            if k > 0 {
                for (p, c) in pw.iter_mut().zip(&coords) {
                    *p = &*p * c;
                }
            }
            power_sums.push(pw.iter().fold(Scalar::zero(field), |acc, t| &acc + t));
        }
        Ok(PointValues { coords, power_sums })
    }

    fn label(&self, g: &GenLabel) -> Scalar {
        let field = self.power_sums[0].field();
        g.0.iter()
            .fold(Scalar::one(field), |acc, &(i, e)| &acc * &self.power_sums[i as usize].pow(e))
    }

    /// Value of a polynomial in `(params..., u)` at the parameters and `u = last`.
    fn eval_params(&self, p: &Poly, params: &[u32], last: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(p.field());
        for (m, c) in p.terms() {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if i < params.len() { &self.power_sums[params[i] as usize] } else { last };
                t = &t * &base.pow(e as u32);
            }
            acc = &acc + &t;
        }
        acc
    }

    fn param_power(&self, params: &[u32], alpha: &[u16]) -> Scalar {
        let field = self.power_sums[0].field();
        params
            .iter()
            .zip(alpha)
            .filter(|(_, &e)| e > 0)
            .fold(Scalar::one(field), |acc, (&i, &e)| &acc * &self.power_sums[i as usize].pow(e as u32))
    }
}

/// Shared data for point evaluation.
struct Evaluator {
    nvars: usize,
    field: Field,
    coords: Vec<Poly>,
    weights: Vec<Scalar>,
}

impl Evaluator {
    fn new(family: &GeneratorFamily, field: Field) -> Result<Evaluator> {
        let w = family
            .weights()
            .ok_or_else(|| AcmError::InvalidInput("certificates need a Newton family".into()))?;
        Ok(Evaluator {
            nvars: family.nvars(),
            field,
            coords: crate::certify::coordinate_forms(family, field)?,
            weights: w
                .values()
                .iter()
                .map(|q| Scalar::from_rational(field, q))
                .collect::<Result<_>>()?,
        })
    }

    /// Whether `f` vanishes at every grid point for degree `d`; `None` if the field is too small.
    fn vanishes<F>(&self, d: u32, kmax: u32, f: F) -> Result<Option<bool>>
    where
        F: Fn(&PointValues) -> Scalar + Sync,
    {
        let Some(grid) = form_grid(self.nvars, d, self.field) else {
            return Ok(None);
        };
        let bad = grid.par_iter().find_map_any(|pt| {
            match PointValues::new(&self.coords, &self.weights, pt, kmax) {
                Ok(pv) => (!f(&pv).is_zero()).then_some(Ok(())),
                Err(e) => Some(Err(e)),
            }
        });
        match bad {
            None => Ok(Some(true)),
            Some(Ok(())) => Ok(Some(false)),
            Some(Err(e)) => Err(e),
        }
    }
}

fn expand_check(cert: &FreenessCertificate, params: &[Poly], w: &Witness) -> Result<bool> {
    let field = cert.field;
    let target = w.target.eval(&cert.family, field)?;
    let nv = target.nvars();
    let mut sum = Poly::zero(nv, field);
    for t in &w.terms {
        let mut term = cert.generators[t.generator].eval(&cert.family, field)?;
        for (q, &e) in params.iter().zip(&t.params) {
            if e > 0 {
                term = term.mul(&q.pow(e as u32));
            }
        }
        sum = sum.add(&term.scale(&t.coeff));
    }
    Ok(target.sub(&sum).is_zero())
}

/// `sum_i a_i(P) P_{n+i}`, expanded, with `composed[i] = a_i(P)`.
pub fn recursion_residual(cert: &FreenessCertificate, composed: &[Poly], n: u32) -> Result<Poly> {
    let nv = cert.family.nvars();
    let mut sum = Poly::zero(nv, cert.field);
    for (i, ai) in composed.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let p = cert.family.generator(n + i as u32, cert.field)?;
        sum = sum.add(&ai.mul(&p));
    }
    Ok(sum)
}

fn witness_failure(w: &Witness) -> AcmError {
    fail(format!("witness for {} in degree {} does not hold", w.target, w.degree))
}

/// Power sums at a grid point, in integers. `height` is the largest free coordinate,
/// so the point lies on the grid for every degree `d >= height`.
struct IntPoint {
    height: u32,
    ps: Vec<BigInt>,
}

impl IntPoint {
    fn label(&self, g: &GenLabel) -> BigInt {
        g.0.iter().map(|&(i, e)| Pow::pow(&self.ps[i as usize], e)).product()
    }

    /// `powers[i][e] = P_{params[i]}^e` for `e <= emax[i]`.
    fn powers(&self, params: &[u32], emax: &[u16]) -> Vec<Vec<BigInt>> {
        params
            .iter()
            .zip(emax)
            .map(|(&i, &m)| {
                let mut v = vec![BigInt::one()];
                for _ in 0..m {
                    let next = v.last().unwrap() * &self.ps[i as usize];
                    v.push(next);
                }
                v
            })
            .collect()
    }
}

fn monomial_value(powers: &[Vec<BigInt>], alpha: &[u16], mut s: BigInt) -> BigInt {
    for (pv, &e) in powers.iter().zip(alpha) {
        if e > 0 {
            s *= &pv[e as usize];
        }
    }
    s
}

/// Common denominator and integer numerators.
fn scale_to_integers<'a>(qs: impl Iterator<Item = &'a Scalar> + Clone) -> (BigInt, Vec<BigInt>) {
    let denom = qs
        .clone()
        .filter_map(|q| q.as_rational())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let nums = qs
        .map(|q| (q.as_rational().expect("rational coefficient") * BigRational::from_integer(denom.clone())).to_integer())
        .collect();
    (denom, nums)
}

fn max_exponents<'a>(k: usize, alphas: impl Iterator<Item = &'a [u16]>) -> Vec<u16> {
    let mut out = vec![0u16; k];
    for a in alphas {
        for (o, &e) in out.iter_mut().zip(a) {
            *o = (*o).max(e);
        }
    }
    out
}

impl Evaluator {
    /// Integer weights, when the field is Q and every weight is integral.
    fn integral_weights(&self) -> Option<Vec<BigInt>> {
        if self.field != Field::Rational {
            return None;
        }
        self.weights
            .iter()
            .map(|w| w.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer()))
            .collect()
    }

    fn int_point(&self, weights: &[BigInt], pt: &[Scalar], kmax: u32) -> Result<IntPoint> {
        let height = pt[..pt.len() - 1]
            .iter()
            .map(|x| x.as_rational().expect("rational point").to_integer())
            .max()
            .map(|h| u32::try_from(h).expect("small grid"))
            .unwrap_or(0);
        let coords: Vec<BigRational> = self
            .coords
            .iter()
            .map(|c| c.evaluate(pt).map(|x| x.as_rational().expect("rational value").clone()))
            .collect::<Result<_>>()?;
        // Forms are homogeneous, so the point may be scaled to clear denominators.
        let delta = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let coords: Vec<BigInt> = coords
            .iter()
            .map(|c| (c * BigRational::from_integer(delta.clone())).to_integer())
            .collect();
        let mut pw = weights.to_vec();
        let mut ps = Vec::with_capacity(kmax as usize + 1);
        for k in 0..=kmax {
            if k > 0 {
                for (p, c) in pw.iter_mut().zip(&coords) {
                    *p *= c;
                }
            }
            ps.push(pw.iter().sum::<BigInt>());
        }
        Ok(IntPoint { height, ps })
    }

    /// Run `check` at every point of the degree-`dmax` grid, in integer arithmetic.
    /// Returns `Ok(false)` when the integer path does not apply.
    fn for_all_int<F>(&self, dmax: u32, kmax: u32, check: F) -> Result<bool>
    where
        F: Fn(&IntPoint) -> Result<()> + Sync,
    {
        let Some(weights) = self.integral_weights() else {
            return Ok(false);
        };
        let grid = form_grid(self.nvars, dmax, Field::Rational).expect("Q is infinite");
        grid.par_iter()
            .try_for_each(|pt| check(&self.int_point(&weights, pt, kmax)?))?;
        Ok(true)
    }
}

/// Witness checks on the integer path; per-point values are shared between witnesses.
fn check_witnesses_integral(cert: &FreenessCertificate, ev: &Evaluator, all: &[&Witness]) -> Result<bool> {
    if ev.integral_weights().is_none() {
        return Ok(false);
    }
    let pidx = &cert.parameters;
    let scaled: Vec<(BigInt, Vec<BigInt>)> =
        all.iter().map(|w| scale_to_integers(w.terms.iter().map(|t| &t.coeff))).collect();
    let dmax = all.iter().map(|w| w.degree).max().unwrap_or(0);
    let kmax = dmax.max(pidx.iter().copied().max().unwrap_or(0));
    let emax = max_exponents(pidx.len(), all.iter().flat_map(|w| w.terms.iter().map(|t| t.params.as_slice())));
    ev.for_all_int(dmax, kmax, |ip| {
        let powers = ip.powers(pidx, &emax);
        let gens: Vec<BigInt> = cert.generators.iter().map(|g| ip.label(g)).collect();
        for (w, (denom, coeffs)) in all.iter().zip(&scaled) {
            if w.degree < ip.height {
                continue;
            }
            let mut acc = denom * ip.label(&w.target);
            for (t, c) in w.terms.iter().zip(coeffs) {
                acc -= monomial_value(&powers, &t.params, c * &gens[t.generator]);
            }
            if !acc.is_zero() {
                return Err(witness_failure(w));
            }
        }
        Ok(())
    })
}

/// Recursion residuals `sum_i a_i(P) P_{n+i}` on the integer path.
fn check_recursion_integral(cert: &FreenessCertificate, ev: &Evaluator, ns: &[u32]) -> Result<bool> {
    if ev.integral_weights().is_none() {
        return Ok(false);
    }
    let Some(&top) = ns.last() else {
        return Ok(true);
    };
    let pidx = &cert.parameters;
    let k = pidx.len();
    let l = cert.recursion_degree;
    let terms: Vec<(&Monomial, &Scalar)> = cert.recursion.terms().iter().collect();
    let (_, coeffs) = scale_to_integers(terms.iter().map(|t| t.1));
    let emax = max_exponents(k, terms.iter().map(|t| &t.0.exps()[..k]));
    ev.for_all_int(l + top, l + top, |ip| {
        let powers = ip.powers(pidx, &emax);
        let partial: Vec<BigInt> = terms
            .iter()
            .zip(&coeffs)
            .map(|((m, _), c)| monomial_value(&powers, &m.exps()[..k], c.clone()))
            .collect();
        for &n in ns {
            if l + n < ip.height {
                continue;
            }
            let r: BigInt = terms
                .iter()
                .zip(&partial)
                .map(|((m, _), v)| v * &ip.ps[(n + m.exps()[k] as u32) as usize])
                .sum();
            if !r.is_zero() {
                return Err(fail(format!("recursion fails at n = {n}")));
            }
        }
        Ok(())
    })
}

fn param_degree(params: &[u32], alpha: &[u16]) -> u32 {
    params.iter().zip(alpha).map(|(&d, &e)| d * e as u32).sum()
}

/// Check annihilators, recursion (for `n = 1..=check_up_to` plus `extra`), rank,
/// coverage of the required memberships and every witness.
pub fn verify_certificate_with(cert: &FreenessCertificate, check_up_to: u32, extra: &[u32]) -> Result<VerifyReport> {
    let field = cert.field;
    let family = &cert.family;
    let pidx = &cert.parameters;
    let k = pidx.len();
    let ev = Evaluator::new(family, field)?;
    let params: Vec<Poly> = pidx.iter().map(|&i| family.generator(i, field)).collect::<Result<_>>()?;
    let names = crate::certify::coordinate_names(ev.coords.len());

    if cert.generators.len() as u64 != cert.bezout_rank {
        return Err(fail(format!(
            "{} generators but rank {}",
            cert.generators.len(),
            cert.bezout_rank
        )));
    }
    if !cert.generators.iter().any(|g| g.is_one()) {
        return Err(fail("generators do not include 1".into()));
    }

    // Annihilators: monic in u and homogeneous.
    for a in &cert.annihilators {
        if a.poly.nvars() != k + 1 {
            return Err(fail(format!("annihilator for {} has wrong arity", a.variable)));
        }
        let parts = split_by_last_variable(&a.poly, a.degree);
        let monic = !a.poly.terms().keys().any(|m| m.exps()[k] as u32 > a.degree)
            && parts[a.degree as usize].len() == 1
            && parts[a.degree as usize].coeff(&Monomial::one(k)).is_one();
        if !monic {
            return Err(fail(format!("annihilator for {} is not monic of degree {}", a.variable, a.degree)));
        }
        let homogeneous = a
            .poly
            .terms()
            .keys()
            .all(|m| param_degree(pidx, &m.exps()[..k]) + m.exps()[k] as u32 == a.degree);
        if !homogeneous {
            return Err(fail(format!("annihilator for {} is not homogeneous", a.variable)));
        }
    }
    // Each annihilator vanishes at its coordinate; every coordinate is killed by one.
    let kills = |a: &crate::certify::Annihilator, j: usize| -> Result<bool> {
        let kmax = pidx.iter().copied().max().unwrap_or(0);
        match ev.vanishes(a.degree, kmax, |pv| pv.eval_params(&a.poly, pidx, &pv.coords[j]))? {
            Some(b) => Ok(b),
            None => Ok(eval_in_ring(&a.poly, &params, &ev.coords[j])?.is_zero()),
        }
    };
    for a in &cert.annihilators {
        let j = names
            .iter()
            .position(|n| *n == a.variable)
            .ok_or_else(|| fail(format!("unknown variable {}", a.variable)))?;
        if !kills(a, j)? {
            return Err(fail(format!("annihilator for {} does not vanish", a.variable)));
        }
    }
    for (j, name) in names.iter().enumerate() {
        let mut killed = false;
        for a in &cert.annihilators {
            if a.variable == *name || kills(a, j)? {
                killed = true;
                break;
            }
        }
        if !killed {
            return Err(fail(format!("coordinate {j} has no annihilator")));
        }
    }

    // The recursion is the product of the annihilators, so it vanishes at every
    // coordinate; since P_n = sum_j w_j y_j^n this gives the recursion for every n.
    let (deg, prod) = crate::certify::recursion_coefficients(&cert.annihilators)?;
    if deg != cert.recursion_degree || prod != cert.recursion {
        return Err(fail("recursion is not the product of the annihilators".into()));
    }
    let mut ns: BTreeSet<u32> = (1..=check_up_to).collect();
    ns.extend(extra.iter().copied().filter(|&n| n >= 1));
    let ns: Vec<u32> = ns.into_iter().collect();
    if !check_recursion_integral(cert, &ev, &ns)? {
        let top = ns.last().copied().unwrap_or(0);
        let l = cert.recursion_degree;
        let residual = |pv: &PointValues, n: u32| -> Scalar {
            let mut acc = Scalar::zero(field);
            for (m, c) in cert.recursion.terms() {
                let i = m.exps()[k] as u32;
                let t = &(c * &pv.param_power(pidx, &m.exps()[..k])) * &pv.power_sums[(n + i) as usize];
                acc = &acc + &t;
            }
            acc
        };
        for &n in &ns {
            let ok = match ev.vanishes(l + n, l + top, |pv| residual(pv, n))? {
                Some(b) => b,
                None => {
                    let composed: Vec<Poly> = cert
                        .recursion_coefficients()
                        .iter()
                        .map(|a| a.compose(&params))
                        .collect::<Result<_>>()?;
                    recursion_residual(cert, &composed, n)?.is_zero()
                }
            };
            if !ok {
                return Err(fail(format!("recursion fails at n = {n}")));
            }
        }
    }

    // Required memberships: every non-parameter P_j below the recursion length.
    let have: BTreeSet<String> = cert.memberships.iter().map(|w| w.target.to_string()).collect();
    for j in family.first_index()..cert.recursion_degree {
        if pidx.contains(&j) {
            continue;
        }
        if !have.contains(&format!("P{j}")) {
            return Err(fail(format!("no membership witness for P{j}")));
        }
    }
    let have: BTreeSet<String> = cert.closure.iter().map(|w| w.target.to_string()).collect();
    for (i, a) in cert.generators.iter().enumerate() {
        for b in &cert.generators[i..] {
            if a.is_one() || b.is_one() {
                continue;
            }
            let t = a.times(b).to_string();
            if !have.contains(&t) {
                return Err(fail(format!("no closure witness for {t}")));
            }
        }
    }

    let all: Vec<&Witness> = cert.memberships.iter().chain(&cert.closure).collect();
    for w in &all {
        if w.target.degree() != w.degree {
            return Err(fail(format!("witness for {} has degree {}", w.target, w.degree)));
        }
        for t in &w.terms {
            let g = cert
                .generators
                .get(t.generator)
                .ok_or_else(|| fail(format!("witness for {} names generator {}", w.target, t.generator)))?;
            if t.params.len() != k || param_degree(pidx, &t.params) + g.degree() != w.degree {
                return Err(fail(format!("witness for {} has a term of the wrong shape", w.target)));
            }
        }
    }
    if !check_witnesses_integral(cert, &ev, &all)? {
        for w in &all {
            let kmax = w.degree.max(pidx.iter().copied().max().unwrap_or(0));
            let value = |pv: &PointValues| -> Scalar {
                let mut acc = pv.label(&w.target);
                for t in &w.terms {
                    let s = &(&t.coeff * &pv.param_power(pidx, &t.params)) * &pv.label(&cert.generators[t.generator]);
                    acc = &acc - &s;
                }
                acc
            };
            let ok = match ev.vanishes(w.degree, kmax, value)? {
                Some(b) => b,
                None => expand_check(cert, &params, w)?,
            };
            if !ok {
                return Err(witness_failure(w));
            }
        }
    }
    Ok(VerifyReport {
        annihilators: cert.annihilators.len(),
        recursion_checked: ns,
        witnesses: all.len(),
    })
}

pub fn verify_certificate(cert: &FreenessCertificate, check_up_to: u32) -> Result<VerifyReport> {
    verify_certificate_with(cert, check_up_to, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{freeness_certificate, CertifyOptions};
    use crate::scalar::rat;

    #[test]
    fn grid_size() {
        let g = form_grid(3, 4, Field::Rational).unwrap();
        assert_eq!(g.len(), 25);
        assert!(form_grid(2, 7, Field::Prime(7)).is_none());
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let fam = GeneratorFamily::slice_newton(&rat(4, 1), &rat(3, 1)).unwrap();
        let mut cert = freeness_certificate(&fam, Field::Prime(32003), &CertifyOptions::default()).unwrap();
        verify_certificate_with(&cert, 4, &[30]).unwrap();
        let w = cert.memberships.last_mut().unwrap();
        w.terms[0].coeff = &w.terms[0].coeff + &Scalar::one(Field::Prime(32003));
        assert!(verify_certificate(&cert, 4).is_err());
    }

    #[test]
    fn tampered_rational_certificate_is_rejected() {
        let fam = GeneratorFamily::slice_newton(&rat(4, 1), &rat(3, 1)).unwrap();
        let cert = freeness_certificate(&fam, Field::Rational, &CertifyOptions::default()).unwrap();
        verify_certificate_with(&cert, 4, &[25]).unwrap();
        let one = Scalar::one(Field::Rational);
        let mut bad = cert.clone();
        let w = bad.closure.last_mut().unwrap();
        w.terms[0].coeff = &w.terms[0].coeff + &one;
        assert!(verify_certificate(&bad, 4).is_err());
        let mut bad = cert.clone();
        let a = &mut bad.annihilators[0];
        let m = a.poly.terms().keys().find(|m| m.exps()[2] == 0).unwrap().clone();
        a.poly.add_term(m, one);
        assert!(verify_certificate(&bad, 4).is_err());
    }

    #[test]
    fn small_field_falls_back_to_expansion() {
        let fam = GeneratorFamily::slice_newton(&rat(2, 1), &rat(2, 1)).unwrap();
        let cert = freeness_certificate(&fam, Field::Prime(11), &CertifyOptions::default()).unwrap();
        verify_certificate_with(&cert, 4, &[12]).unwrap();
    }
}
