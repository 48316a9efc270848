//! Freeness certificates for Newton-sum subalgebras over their standard
//! parameters, and quasi-invariance checks.
//!
//! A certificate consists of module generators `T_i`, monic annihilators of
//! the coordinates over the parameter ring, the recursion obtained from their
//! product, and membership witnesses for the low-degree Newton sums and for
//! the pairwise products `T_i T_j`. Together these show that the subalgebra
//! equals the parameter-module spanned by the `T_i`; with as many generators
//! as the generic rank, that module is free.

pub mod dense;
pub mod modular;
pub mod quasi;
pub mod verify;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{AcmError, Result};
use crate::generators::slice_last_variable;
use crate::linalg::{Echelon, FieldArith, FpArith, QArith, SparseRow};
use crate::partition::Weights;
use crate::poly::{weighted_monomials, Monomial, Poly};
use crate::report::{parse_scalar, poly_from_json, poly_to_json};
use crate::scalar::{format_rational, parse_rational, Field, Scalar};
use crate::subalgebra::{subalgebra_basis, GeneratorFamily};

use dense::DenseRing;

pub use quasi::{quasi_invariant_check, quasi_invariant_dims};
pub use verify::{verify_certificate, verify_certificate_with, VerifyReport};

/// A product of Newton sums, e.g. `P5*P6` or `P4^2`; empty means `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenLabel(pub Vec<(u32, u32)>);

impl GenLabel {
    pub fn one() -> GenLabel {
        GenLabel(Vec::new())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(i, e)| i * e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn normalize(mut v: Vec<(u32, u32)>) -> GenLabel {
        v.sort();
        let mut out: Vec<(u32, u32)> = Vec::new();
        for (i, e) in v {
            match out.last_mut() {
                Some((j, f)) if *j == i => *f += e,
                _ => out.push((i, e)),
            }
        }
        out.retain(|t| t.1 > 0);
        GenLabel(out)
    }

    pub fn times(&self, other: &GenLabel) -> GenLabel {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GenLabel::normalize(v)
    }

    pub fn eval(&self, family: &GeneratorFamily, field: Field) -> Result<Poly> {
        let mut p = Poly::one(family.nvars(), field);
        for &(i, e) in &self.0 {
            p = p.mul(&family.generator(i, field)?.pow(e));
        }
        Ok(p)
    }
}

impl fmt::Display for GenLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(i, e)| if e == 1 { format!("P{i}") } else { format!("P{i}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for GenLabel {
    type Err = AcmError;
    fn from_str(s: &str) -> Result<GenLabel> {
        let t = s.trim();
        if t == "1" {
            return Ok(GenLabel::one());
        }
        let bad = || AcmError::Parse(format!("bad generator `{s}`"));
        let mut v = Vec::new();
        for f in t.split('*') {
            let f = f.trim().strip_prefix('P').ok_or_else(bad)?;
            let (i, e) = match f.split_once('^') {
                Some((i, e)) => (i.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?),
                None => (f.parse().map_err(|_| bad())?, 1),
            };
            if i == 0 {
                return Err(bad());
            }
            v.push((i, e));
        }
        Ok(GenLabel::normalize(v))
    }
}

/// Parse a comma-separated generator list such as `1,P4,P5,P4^2`.
pub fn parse_generators(s: &str) -> Result<Vec<GenLabel>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Monic relation `u^m + sum_{j<m} c_j(params) u^j` satisfied by one coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annihilator {
    pub variable: String,
    pub degree: u32,
    /// Polynomial in `(params..., u)`.
    pub poly: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTerm {
    /// Exponents of the parameters.
    pub params: Vec<u16>,
    pub generator: usize,
    pub coeff: Scalar,
}

/// `target = sum coeff * params^e * T_generator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub target: GenLabel,
    pub degree: u32,
    pub terms: Vec<WitnessTerm>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreenessCertificate {
    pub family: GeneratorFamily,
    pub field: Field,
    /// Newton indices used as parameters.
    pub parameters: Vec<u32>,
    pub generators: Vec<GenLabel>,
    pub annihilators: Vec<Annihilator>,
    /// Product of the annihilators, a polynomial in `(params..., u)`.
    pub recursion: Poly,
    pub recursion_degree: u32,
    pub memberships: Vec<Witness>,
    pub closure: Vec<Witness>,
    /// Degrees in which the spanning set `params^e T_i` was checked independent.
    pub independent_degrees: Vec<u32>,
    pub bezout_rank: u64,
}

impl FreenessCertificate {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `sum_i t^{deg T_i}`.
    pub fn numerator(&self) -> Vec<i64> {
        let top = self.generators.iter().map(|g| g.degree()).max().unwrap_or(0) as usize;
        let mut q = vec![0i64; top + 1];
        for g in &self.generators {
            q[g.degree() as usize] += 1;
        }
        q
    }

    pub fn annihilator_degrees(&self) -> Vec<(String, u32)> {
        self.annihilators.iter().map(|a| (a.variable.clone(), a.degree)).collect()
    }

    /// Coefficients `a_0..a_L` of the recursion, as parameter polynomials.
    pub fn recursion_coefficients(&self) -> Vec<Poly> {
        split_by_last_variable(&self.recursion, self.recursion_degree)
    }

    pub fn to_json(&self) -> Value {
        let k = self.parameters.len();
        let mut pnames: Vec<String> = self.parameters.iter().map(|i| format!("P{i}")).collect();
        pnames.push("u".into());
        let names: Vec<&str> = pnames.iter().map(|s| s.as_str()).collect();
        let witness = |w: &Witness| {
            json!({
                "target": w.target.to_string(),
                "degree": w.degree,
                "terms": w.terms.iter().map(|t| json!({
                    "params": t.params,
                    "generator": t.generator,
                    "coeff": t.coeff.to_string(),
                })).collect::<Vec<_>>(),
            })
        };
        let (weights, slice) = match &self.family {
            GeneratorFamily::Newton { weights, slice } => {
                (weights.values().iter().map(format_rational).collect::<Vec<_>>(), *slice)
            }
            GeneratorFamily::Explicit { .. } => (Vec::new(), false),
        };
        json!({
            "family": self.family.to_string(),
            "weights": weights,
            "slice": slice,
            "field": self.field.to_string(),
            "parameters": pnames[..k],
            "generators": self.generators.iter().map(|g| json!({"label": g.to_string(), "degree": g.degree()})).collect::<Vec<_>>(),
            "rank": self.rank(),
            "bezout_rank": self.bezout_rank,
            "numerator": self.numerator(),
            "annihilators": self.annihilators.iter().map(|a| json!({
                "variable": a.variable,
                "degree": a.degree,
                "polynomial": a.poly.fmt_with(&names),
                "terms": poly_to_json(&a.poly),
            })).collect::<Vec<_>>(),
            "recursion": {
                "degree": self.recursion_degree,
                "polynomial": self.recursion.fmt_with(&names),
                "terms": poly_to_json(&self.recursion),
            },
            "independent_degrees": self.independent_degrees,
            "memberships": self.memberships.iter().map(witness).collect::<Vec<_>>(),
            "closure": self.closure.iter().map(witness).collect::<Vec<_>>(),
        })
    }

    /// Inverse of [`FreenessCertificate::to_json`] for Newton families.
    pub fn from_json(v: &Value) -> Result<FreenessCertificate> {
        let bad = |what: &str| AcmError::Parse(format!("certificate: bad or missing `{what}`"));
        let field: Field = v["field"].as_str().ok_or_else(|| bad("field"))?.parse()?;
        let weights = v["weights"]
            .as_array()
            .ok_or_else(|| bad("weights"))?
            .iter()
            .map(|w| w.as_str().ok_or_else(|| bad("weights")).and_then(parse_rational))
            .collect::<Result<Vec<_>>>()?;
        let slice = v["slice"].as_bool().ok_or_else(|| bad("slice"))?;
        let family = GeneratorFamily::newton(Weights::new(weights), slice)?;
        let parameters = v["parameters"]
            .as_array()
            .ok_or_else(|| bad("parameters"))?
            .iter()
            .map(|p| {
                p.as_str()
                    .and_then(|s| s.strip_prefix('P'))
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("parameters"))
            })
            .collect::<Result<Vec<u32>>>()?;
        let nv = parameters.len() + 1;
        let generators = v["generators"]
            .as_array()
            .ok_or_else(|| bad("generators"))?
            .iter()
            .map(|g| g["label"].as_str().ok_or_else(|| bad("generators"))?.parse())
            .collect::<Result<Vec<GenLabel>>>()?;
        let annihilators = v["annihilators"]
            .as_array()
            .ok_or_else(|| bad("annihilators"))?
            .iter()
            .map(|a| {
                Ok(Annihilator {
                    variable: a["variable"].as_str().ok_or_else(|| bad("variable"))?.to_string(),
                    degree: a["degree"].as_u64().ok_or_else(|| bad("degree"))? as u32,
                    poly: poly_from_json(&a["terms"], nv, field)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let witnesses = |key: &str| -> Result<Vec<Witness>> {
            v[key]
                .as_array()
                .ok_or_else(|| bad(key))?
                .iter()
                .map(|w| {
                    let terms = w["terms"]
                        .as_array()
                        .ok_or_else(|| bad(key))?
                        .iter()
                        .map(|t| {
                            Ok(WitnessTerm {
                                params: serde_json::from_value(t["params"].clone()).map_err(|_| bad(key))?,
                                generator: t["generator"].as_u64().ok_or_else(|| bad(key))? as usize,
                                coeff: parse_scalar(t["coeff"].as_str().ok_or_else(|| bad(key))?, field)?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Witness {
                        target: w["target"].as_str().ok_or_else(|| bad(key))?.parse()?,
                        degree: w["degree"].as_u64().ok_or_else(|| bad(key))? as u32,
                        terms,
                    })
                })
                .collect()
        };
        Ok(FreenessCertificate {
            field,
            parameters,
            generators,
            annihilators,
            recursion: poly_from_json(&v["recursion"]["terms"], nv, field)?,
            recursion_degree: v["recursion"]["degree"].as_u64().ok_or_else(|| bad("recursion"))? as u32,
            memberships: witnesses("memberships")?,
            closure: witnesses("closure")?,
            independent_degrees: serde_json::from_value(v["independent_degrees"].clone())
                .map_err(|_| bad("independent_degrees"))?,
            bezout_rank: v["bezout_rank"].as_u64().ok_or_else(|| bad("bezout_rank"))?,
            family,
        })
    }
}

/// Coefficients of `u^0..u^L` for a polynomial in `(params..., u)`.
pub fn split_by_last_variable(p: &Poly, degree: u32) -> Vec<Poly> {
    let n = p.nvars();
    let mut out = vec![Poly::zero(n - 1, p.field()); degree as usize + 1];
    for (m, c) in p.terms() {
        let e = m.exps()[n - 1] as usize;
        out[e].add_term(Monomial::from_exps(&m.exps()[..n - 1]), c.clone());
    }
    out
}

/// Names for the coordinates on a weight vector of length `r`.
pub fn coordinate_names(r: usize) -> Vec<String> {
    let base = ["x", "y", "z", "w"];
    (0..r)
        .map(|i| base.get(i).map(|s| s.to_string()).unwrap_or(format!("y{}", i + 1)))
        .collect()
}

/// The coordinates `y_1..y_r` as linear forms in the family's variables.
pub fn coordinate_forms(family: &GeneratorFamily, field: Field) -> Result<Vec<Poly>> {
    let GeneratorFamily::Newton { weights, slice } = family else {
        return Err(AcmError::InvalidInput("certificates need a Newton family".into()));
    };
    let nv = family.nvars();
    let mut out: Vec<Poly> = (0..nv).map(|i| Poly::var(nv, field, i)).collect();
    if *slice {
        out.push(slice_last_variable(weights, field)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum GeneratorChoice {
    Auto,
    Explicit(Vec<GenLabel>),
}

impl FromStr for GeneratorChoice {
    type Err = AcmError;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "auto" {
            Ok(GeneratorChoice::Auto)
        } else {
            Ok(GeneratorChoice::Explicit(parse_generators(s)?))
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub generators: GeneratorChoice,
    /// Annihilator degrees are searched from the rank up to this multiple of it.
    pub annihilator_factor: u32,
    /// Highest degree considered when choosing generators automatically.
    pub auto_max_deg: Option<u32>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            generators: GeneratorChoice::Auto,
            annihilator_factor: 2,
            auto_max_deg: None,
        }
    }
}

/// Span of `params^e * T_i` in one degree, with coordinate tracking.
struct TrackedSpan<A: FieldArith> {
    arith: A,
    nmon: usize,
    eng: A::Engine,
    labels: Vec<(Vec<u16>, usize)>,
    independent: bool,
}

impl<A: FieldArith> TrackedSpan<A> {
    fn new(arith: &A, nmon: usize, nspan: usize) -> Self {
        TrackedSpan {
            arith: arith.clone(),
            nmon,
            eng: arith.engine(nmon + nspan, nmon),
            labels: Vec::new(),
            independent: true,
        }
    }

    fn sparse(&self, v: &[A::Elem]) -> SparseRow<A::Elem> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !self.arith.is_zero(x))
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    fn add(&mut self, label: (Vec<u16>, usize), v: &[A::Elem]) -> bool {
        let idx = self.labels.len();
        let mut row = self.sparse(v);
        row.push((self.nmon + idx, self.arith.one()));
        self.labels.push(label);
        let ok = self.eng.insert(row);
        if !ok {
            self.independent = false;
        }
        ok
    }

    fn contains(&self, v: &[A::Elem]) -> bool {
        let red = self.eng.reduce(self.sparse(v));
        red.first().map(|t| t.0 >= self.nmon).unwrap_or(true)
    }

    fn solve(&self, v: &[A::Elem]) -> Option<Vec<(usize, A::Elem)>> {
        let red = self.eng.reduce(self.sparse(v));
        if red.iter().any(|t| t.0 < self.nmon) {
            return None;
        }
        Some(
            red.into_iter()
                .map(|(c, x)| (c - self.nmon, self.arith.neg(&x)))
                .collect(),
        )
    }
}

/// Generates dense `params^e * T_i` degree by degree.
struct ModuleBuilder<A: FieldArith> {
    ring: DenseRing<A>,
    param_weights: Vec<u32>,
    params: Vec<Vec<(Vec<u16>, A::Elem)>>,
    gens: Vec<(u32, Vec<A::Elem>)>,
    cache: HashMap<u32, HashMap<(Vec<u16>, usize), Vec<A::Elem>>>,
}

impl<A: FieldArith> ModuleBuilder<A> {
    fn new(arith: &A, nvars: usize, max_deg: u32, param_polys: &[(u32, Poly)]) -> Result<Self> {
        let ring = DenseRing::new(arith.clone(), nvars, max_deg);
        let params = param_polys
            .iter()
            .map(|(_, p)| ring.sparse_terms(p))
            .collect::<Result<_>>()?;
        Ok(ModuleBuilder {
            ring,
            param_weights: param_polys.iter().map(|t| t.0).collect(),
            params,
            gens: Vec::new(),
            cache: HashMap::new(),
        })
    }

    fn add_generator(&mut self, degree: u32, poly: &Poly) -> Result<()> {
        let v = self.ring.from_poly(poly, degree)?;
        self.gens.push((degree, v));
        Ok(())
    }

    /// Spanning elements in degree `d`, in a fixed order.
    fn elements(&mut self, d: u32) -> Vec<((Vec<u16>, usize), Vec<A::Elem>)> {
        let mut out = Vec::new();
        let mut level = HashMap::new();
        for gi in 0..self.gens.len() {
            let gd = self.gens[gi].0;
            if gd > d {
                continue;
            }
            for alpha in weighted_monomials(&self.param_weights, d - gd) {
                let a = alpha.exps().to_vec();
                let v = match a.iter().position(|&e| e > 0) {
                    None => self.gens[gi].1.clone(),
                    Some(j) => {
                        let mut prev = a.clone();
                        prev[j] -= 1;
                        let pd = d - self.param_weights[j];
                        let base = self.cache[&pd][&(prev, gi)].clone();
                        let pt = self.params[j].clone();
                        self.ring.mul_sparse(&base, pd, &pt, self.param_weights[j])
                    }
                };
                level.insert((a.clone(), gi), v.clone());
                out.push(((a, gi), v));
            }
        }
        self.cache.insert(d, level);
        let keep = self.param_weights.iter().max().copied().unwrap_or(1);
        self.cache.retain(|&k, _| k + keep >= d);
        out
    }
}

/// Degree-`m` annihilator of `v` over the parameters, if one exists.
fn annihilator_at<A: FieldArith>(
    arith: &A,
    nvars: usize,
    params: &[(u32, Poly)],
    v: &Poly,
    m: u32,
) -> Result<Option<Poly>> {
    let field = arith.field();
    let k = params.len();
    let mut mb = ModuleBuilder::new(arith, nvars, m, params)?;
    // Generators v^0..v^{m-1}; target -v^m.
    let mut powers = vec![Poly::one(nvars, field)];
    for j in 1..=m {
        let next = powers[j as usize - 1].mul(v);
        powers.push(next);
    }
    for j in 0..m {
        mb.add_generator(j, &powers[j as usize])?;
    }
    let mut span = None;
    for d in 0..=m {
        let els = mb.elements(d);
        if d == m {
            let mut s = TrackedSpan::new(arith, mb.ring.len(m), els.len());
            for (lab, e) in &els {
                s.add(lab.clone(), e);
            }
            span = Some(s);
        }
    }
    let span = span.unwrap();
    let target = mb.ring.from_poly(&powers[m as usize].neg(), m)?;
    let Some(coeffs) = span.solve(&target) else {
        return Ok(None);
    };
    let mut ann = Poly::zero(k + 1, field);
    let mut top = vec![0u16; k + 1];
    top[k] = m as u16;
    ann.add_term(Monomial::from_exps(&top), Scalar::one(field));
    for (idx, c) in coeffs {
        let (alpha, j) = &span.labels[idx];
        let mut e = alpha.clone();
        e.push(*j as u16);
        ann.add_term(Monomial::from_exps(&e), arith.to_scalar(&c));
    }
    Ok(Some(ann))
}

/// Evaluate a polynomial in `(params..., u)` at the parameter polynomials and `u = v`.
pub fn eval_in_ring(p: &Poly, params: &[Poly], v: &Poly) -> Result<Poly> {
    let mut images = params.to_vec();
    images.push(v.clone());
    p.compose(&images)
}

/// Search degrees `lo..=hi` for the smallest annihilator of `v`.
pub fn annihilator_poly(family: &GeneratorFamily, v: &Poly, lo: u32, hi: u32, field: Field) -> Result<Option<(u32, Poly)>> {
    let params = parameter_polys(family, field)?;
    let nv = family.nvars();
    for m in lo.max(1)..=hi {
        let found = match field {
            Field::Rational => annihilator_at(&QArith, nv, &params, v, m)?,
            Field::Prime(p) => annihilator_at(&FpArith::new(p), nv, &params, v, m)?,
        };
        if let Some(a) = found {
            return Ok(Some((m, a)));
        }
    }
    Ok(None)
}

pub fn parameter_polys(family: &GeneratorFamily, field: Field) -> Result<Vec<(u32, Poly)>> {
    family
        .hsop_degrees()
        .into_iter()
        .map(|d| Ok((d, family.generator(d, field)?)))
        .collect()
}

/// Product of annihilator polynomials (all in `(params..., u)`).
pub fn recursion_coefficients(annihilators: &[Annihilator]) -> Result<(u32, Poly)> {
    let first = annihilators
        .first()
        .ok_or_else(|| AcmError::InvalidInput("no annihilators".into()))?;
    let mut prod = Poly::one(first.poly.nvars(), first.poly.field());
    let mut deg = 0;
    for a in annihilators {
        prod = prod.mul(&a.poly);
        deg += a.degree;
    }
    Ok((deg, prod))
}

fn choose_generators<A: FieldArith>(
    arith: &A,
    family: &GeneratorFamily,
    params: &[(u32, Poly)],
    bezout: u64,
    cap: u32,
) -> Result<Vec<GenLabel>> {
    let field = arith.field();
    let sb = subalgebra_basis(family, cap, field)?;
    let first = family.first_index();
    let nv = family.nvars();
    let mut mb = ModuleBuilder::new(arith, nv, cap, params)?;
    let mut chosen: Vec<GenLabel> = Vec::new();
    for d in 0..=cap {
        let els = mb.elements(d);
        let basis = &sb.basis[d as usize];
        let mut span = TrackedSpan::new(arith, mb.ring.len(d), els.len() + basis.len());
        for (lab, e) in &els {
            span.add(lab.clone(), e);
        }
        for (lab, poly) in basis {
            let v = mb.ring.from_poly(poly, d)?;
            if span.contains(&v) {
                continue;
            }
            let label = GenLabel::normalize(
                lab.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (first + i as u32, e as u32))
                    .collect(),
            );
            span.add((Vec::new(), usize::MAX), &v);
            mb.add_generator(d, poly)?;
            // Keep the cache consistent for the new generator.
            let zero = vec![0u16; params.len()];
            mb.cache.get_mut(&d).unwrap().insert((zero, mb.gens.len() - 1), v);
            chosen.push(label);
            if chosen.len() as u64 == bezout {
                return Ok(chosen);
            }
        }
    }
    Err(AcmError::CertificateFailed(format!(
        "found {} generators through degree {cap}, rank is {bezout}",
        chosen.len()
    )))
}

fn build<A: FieldArith>(arith: &A, family: &GeneratorFamily, opts: &CertifyOptions) -> Result<FreenessCertificate> {
    let field = arith.field();
    let nv = family.nvars();
    let bezout = family
        .bezout_rank()
        .ok_or_else(|| AcmError::InvalidInput("rank unknown for this family".into()))?;
    let params = parameter_polys(family, field)?;
    let param_polys: Vec<Poly> = params.iter().map(|t| t.1.clone()).collect();
    let param_idx: Vec<u32> = family.hsop_degrees();
    let sum_deg: u32 = param_idx.iter().sum();

    let generators = match &opts.generators {
        GeneratorChoice::Explicit(g) => g.clone(),
        GeneratorChoice::Auto => {
            let cap = opts.auto_max_deg.unwrap_or(2 * sum_deg + 4);
            choose_generators(arith, family, &params, bezout, cap)?
        }
    };
    if generators.len() as u64 != bezout {
        return Err(AcmError::CertificateFailed(format!(
            "{} generators but rank {bezout}",
            generators.len()
        )));
    }

    // Annihilators, skipping coordinates already killed by an earlier one.
    let coords = coordinate_forms(family, field)?;
    let names = coordinate_names(coords.len());
    let hi = bezout as u32 * opts.annihilator_factor;
    let mut anns: Vec<Annihilator> = Vec::new();
    for (v, name) in coords.iter().zip(&names) {
        let mut covered = false;
        for a in &anns {
            if eval_in_ring(&a.poly, &param_polys, v)?.is_zero() {
                covered = true;
                break;
            }
        }
        if covered {
            continue;
        }
        let (deg, poly) = annihilator_poly(family, v, bezout as u32, hi, field)?.ok_or_else(|| {
            AcmError::CertificateFailed(format!("no annihilator for {name} up to degree {hi}"))
        })?;
        log::info!("annihilator for {name}: degree {deg}");
        anns.push(Annihilator {
            variable: name.clone(),
            degree: deg,
            poly,
        });
    }
    let (rec_deg, recursion) = recursion_coefficients(&anns)?;

    // Targets: Newton sums below the recursion length and pairwise products.
    let mut targets: Vec<(GenLabel, bool)> = Vec::new();
    for i in family.first_index()..rec_deg {
        if !param_idx.contains(&i) {
            targets.push((GenLabel(vec![(i, 1)]), true));
        }
    }
    for i in 0..generators.len() {
        for j in i..generators.len() {
            if generators[i].is_one() || generators[j].is_one() {
                continue;
            }
            targets.push((generators[i].times(&generators[j]), false));
        }
    }
    let max_deg = targets.iter().map(|t| t.0.degree()).max().unwrap_or(0);
    let mut mb = ModuleBuilder::new(arith, nv, max_deg, &params)?;
    for g in &generators {
        mb.add_generator(g.degree(), &g.eval(family, field)?)?;
    }
    let mut by_degree: HashMap<u32, Vec<usize>> = HashMap::new();
    for (k, t) in targets.iter().enumerate() {
        by_degree.entry(t.0.degree()).or_default().push(k);
    }
    let mut memberships = Vec::new();
    let mut closure = Vec::new();
    let mut independent_degrees = Vec::new();
    for d in 0..=max_deg {
        let els = mb.elements(d);
        let Some(ks) = by_degree.get(&d) else {
            continue;
        };
        let mut span = TrackedSpan::new(arith, mb.ring.len(d), els.len());
        for (lab, e) in &els {
            span.add(lab.clone(), e);
        }
        if span.independent {
            independent_degrees.push(d);
        } else {
            return Err(AcmError::CertificateFailed(format!(
                "spanning set dependent in degree {d}: module is not free on these generators"
            )));
        }
        for &k in ks {
            let (label, is_member) = &targets[k];
            let tp = label.eval(family, field)?;
            let tv = mb.ring.from_poly(&tp, d)?;
            let coeffs = span.solve(&tv).ok_or_else(|| {
                AcmError::CertificateFailed(format!("{label} is not in the module in degree {d}"))
            })?;
            let terms = coeffs
                .into_iter()
                .filter(|(_, c)| !arith.is_zero(c))
                .map(|(idx, c)| {
                    let (alpha, gi) = &span.labels[idx];
                    WitnessTerm {
                        params: alpha.clone(),
                        generator: *gi,
                        coeff: arith.to_scalar(&c),
                    }
                })
                .collect();
            let w = Witness {
                target: label.clone(),
                degree: d,
                terms,
            };
            if *is_member {
                memberships.push(w);
            } else {
                closure.push(w);
            }
        }
        log::debug!("certificate degree {d}: {} spanning elements", els.len());
    }
    Ok(FreenessCertificate {
        family: family.clone(),
        field,
        parameters: param_idx,
        generators,
        annihilators: anns,
        recursion,
        recursion_degree: rec_deg,
        memberships,
        closure,
        independent_degrees,
        bezout_rank: bezout,
    })
}

/// Build a freeness certificate over `field`.
pub fn freeness_certificate(family: &GeneratorFamily, field: Field, opts: &CertifyOptions) -> Result<FreenessCertificate> {
    match field {
        Field::Rational => modular::rational_certificate(family, opts),
        Field::Prime(p) => build(&FpArith::new(p), family, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn labels_round_trip() {
        let g = parse_generators("1,P4,P5,P4^2,P6*P5").unwrap();
        let s: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, vec!["1", "P4", "P5", "P4^2", "P5*P6"]);
        assert_eq!(g[4].degree(), 11);
        assert!("Q4".parse::<GenLabel>().is_err());
    }

    #[test]
    fn equal_weight_slice_certificate() {
        let fam = GeneratorFamily::slice_newton(&rat(7, 3), &rat(7, 3)).unwrap();
        let cert = freeness_certificate(&fam, Field::Rational, &CertifyOptions::default()).unwrap();
        let labels: Vec<String> = cert.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(labels, vec!["1", "P4", "P5"]);
        assert_eq!(cert.numerator(), vec![1, 0, 0, 0, 1, 1]);
        verify_certificate(&cert, 4).unwrap();
        let back = FreenessCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }
}
