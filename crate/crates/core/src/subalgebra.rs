//! Hilbert functions of subalgebras generated by homogeneous forms, and of
//! the isotypic module over the three-weight slice algebra.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{AcmError, Result};
use crate::generators::{isotypic_gen, newton_sum, slice_newton_weights};
use crate::linalg::{Echelon, FieldArith, FpArith, MonomialIndex, QArith};
use crate::partition::{factorial, Partition, Weights};
use crate::poly::{Monomial, Poly};
use crate::scalar::Field;
use crate::series::HilbertData;

/// A graded family of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// Weighted Newton sums `P_1, P_2, ...`, optionally restricted to the
    /// slice `P_1 = 0` (then generated by `P_2, P_3, ...`).
    Newton { weights: Weights, slice: bool },
    /// A finite list of homogeneous generators of positive degree.
    Explicit { nvars: usize, gens: Vec<Poly>, hsop_degrees: Vec<u32> },
}

impl GeneratorFamily {
    pub fn newton(weights: Weights, slice: bool) -> Result<GeneratorFamily> {
        if weights.is_empty() || (slice && weights.len() < 2) {
            return Err(AcmError::InvalidInput("too few weights".into()));
        }
        weights.check_strict()?;
        Ok(GeneratorFamily::Newton { weights, slice })
    }

    /// Family without the subset-sum check (degenerate parameters).
    pub fn newton_unchecked(weights: Weights, slice: bool) -> GeneratorFamily {
        GeneratorFamily::Newton { weights, slice }
    }

    /// `R_{a,b}`: slice of the weights `(a, b, 1)`.
    pub fn slice_newton(a: &BigRational, b: &BigRational) -> Result<GeneratorFamily> {
        GeneratorFamily::newton(Weights::new(vec![a.clone(), b.clone(), BigRational::one()]), true)
    }

    /// The algebra generated by the `(a^r, 1^s)` Newton sums.
    pub fn deformed(r: usize, s: usize, a: &BigRational) -> Result<GeneratorFamily> {
        GeneratorFamily::newton(Weights::deformed(r, s, a), false)
    }

    /// Invariant ring of the arrangement, as a subalgebra of functions on the parts.
    pub fn invariants(lambda: &Partition, slice: bool) -> Result<GeneratorFamily> {
        GeneratorFamily::newton(lambda.weights(), slice)
    }

    pub fn nvars(&self) -> usize {
        match self {
            GeneratorFamily::Newton { weights, slice } => weights.len() - *slice as usize,
            GeneratorFamily::Explicit { nvars, .. } => *nvars,
        }
    }

    /// Degrees of the standard homogeneous system of parameters.
    pub fn hsop_degrees(&self) -> Vec<u32> {
        match self {
            GeneratorFamily::Newton { weights, slice } => {
                let start = if *slice { 2 } else { 1 };
                (start..=weights.len() as u32).collect()
            }
            GeneratorFamily::Explicit { hsop_degrees, .. } => hsop_degrees.clone(),
        }
    }

    /// Index of the first generator (2 on the slice, 1 otherwise).
    pub fn first_index(&self) -> u32 {
        match self {
            GeneratorFamily::Newton { slice: true, .. } => 2,
            _ => 1,
        }
    }

    /// Generator of index `i` (the Newton sum of degree `i`).
    pub fn generator(&self, i: u32, field: Field) -> Result<Poly> {
        match self {
            GeneratorFamily::Newton { weights, slice } => {
                if *slice {
                    slice_newton_weights(weights, i, field)
                } else {
                    newton_sum(weights, i, field)
                }
            }
            GeneratorFamily::Explicit { gens, .. } => gens
                .get(i as usize - 1)
                .ok_or_else(|| AcmError::InvalidInput(format!("no generator {i}")))?
                .map_field(field),
        }
    }

    /// Generators of degree at most `max_deg` with their degrees.
    pub fn generators_through(&self, max_deg: u32, field: Field) -> Result<Vec<(u32, Poly)>> {
        match self {
            GeneratorFamily::Newton { .. } => (self.first_index()..=max_deg)
                .map(|i| Ok((i, self.generator(i, field)?)))
                .collect(),
            GeneratorFamily::Explicit { gens, .. } => {
                let mut out = Vec::new();
                for g in gens {
                    let d = g
                        .homogeneous_degree()
                        .ok_or_else(|| AcmError::InvalidInput("generator not homogeneous".into()))?;
                    if d == 0 {
                        return Err(AcmError::InvalidInput("generator of degree zero".into()));
                    }
                    if d <= max_deg {
                        out.push((d, g.map_field(field)?));
                    }
                }
                Ok(out)
            }
        }
    }

    /// `r! / |S_w|` for Newton families.
    pub fn bezout_rank(&self) -> Option<u64> {
        match self {
            GeneratorFamily::Newton { weights, .. } => {
                Some(factorial(weights.len() as u64) / weights.stabilizer_order())
            }
            GeneratorFamily::Explicit { .. } => None,
        }
    }

    pub fn weights(&self) -> Option<&Weights> {
        match self {
            GeneratorFamily::Newton { weights, .. } => Some(weights),
            _ => None,
        }
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorFamily::Newton { weights, slice } => {
                write!(f, "newton{}{}", if *slice { "-slice" } else { "" }, weights)
            }
            GeneratorFamily::Explicit { gens, .. } => write!(f, "explicit[{}]", gens.len()),
        }
    }
}

/// A product of generators, recorded by generator position.
pub type Label = Vec<u16>;

/// Graded bases of a subalgebra, each element a product of generators.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis {
    pub field: Field,
    pub nvars: usize,
    pub generator_degrees: Vec<u32>,
    pub basis: Vec<Vec<(Label, Poly)>>,
}

impl SubalgebraBasis {
    pub fn dims(&self) -> Vec<u64> {
        self.basis.iter().map(|b| b.len() as u64).collect()
    }
}

fn compute_basis<A: FieldArith>(arith: &A, gens: &[(u32, Poly)], nvars: usize, max_deg: u32) -> Result<Vec<Vec<(Label, Poly)>>> {
    let field = arith.field();
    let ngens = gens.len();
    let mut basis: Vec<Vec<(Label, Poly)>> = vec![vec![(vec![0; ngens], Poly::one(nvars, field))]];
    for d in 1..=max_deg {
        let idx = MonomialIndex::new(nvars, d);
        let mut eng = arith.engine(idx.len(), idx.len());
        let mut seen: HashSet<Label> = HashSet::new();
        let mut level = Vec::new();
        'outer: for (gi, (gd, g)) in gens.iter().enumerate() {
            if *gd > d {
                continue;
            }
            for (lab, b) in &basis[(d - gd) as usize] {
                let mut l = lab.clone();
                l[gi] += 1;
                if !seen.insert(l.clone()) {
                    continue;
                }
                let prod = g.mul(b);
                if eng.insert(idx.row(arith, &prod)?) {
                    level.push((l, prod));
                    if eng.rank() == idx.len() {
                        break 'outer;
                    }
                }
            }
        }
        log::debug!("subalgebra degree {d}: {}", level.len());
        basis.push(level);
    }
    Ok(basis)
}

/// Bases of the graded pieces through `max_deg`.
pub fn subalgebra_basis(family: &GeneratorFamily, max_deg: u32, field: Field) -> Result<SubalgebraBasis> {
    let gens = family.generators_through(max_deg, field)?;
    let nvars = family.nvars();
    let basis = match field {
        Field::Rational => compute_basis(&QArith, &gens, nvars, max_deg)?,
        Field::Prime(p) => compute_basis(&FpArith::new(p), &gens, nvars, max_deg)?,
    };
    Ok(SubalgebraBasis {
        field,
        nvars,
        generator_degrees: gens.iter().map(|g| g.0).collect(),
        basis,
    })
}

/// `dim R_d` for `d = 0..=max_deg`, with the numerator over the standard parameters.
pub fn subalgebra_dims(family: &GeneratorFamily, max_deg: u32, field: Field) -> Result<HilbertData> {
    let b = subalgebra_basis(family, max_deg, field)?;
    Ok(HilbertData::new(b.dims(), family.hsop_degrees(), field))
}

/// Hilbert function of the module generated by `T_1, T_2, ...` over `R_{beta+1,beta}`.
/// Module degree of `T_i` is `i`; `dims[0] = 0`.
pub fn module_dims(beta: &BigRational, max_deg: u32, field: Field) -> Result<HilbertData> {
    let a = beta + BigRational::one();
    let fam = GeneratorFamily::slice_newton(&a, beta)?;
    let rb = subalgebra_basis(&fam, max_deg, field)?;
    let ts: Vec<Poly> = (0..=max_deg)
        .map(|i| isotypic_gen(beta, i, field))
        .collect::<Result<_>>()?;
    let embed: Vec<Poly> = vec![Poly::var(4, field, 0), Poly::var(4, field, 1)];
    let mut dims = vec![0u64];
    for d in 1..=max_deg {
        let mut monos = Vec::new();
        for m in crate::poly::monomials_of_degree(2, d) {
            for k in 2..4 {
                let mut e = vec![m.exps()[0], m.exps()[1], 0, 0];
                e[k] = 1;
                monos.push(Monomial::from_exps(&e));
            }
        }
        monos.sort();
        let idx = MonomialIndex::from_monomials(monos);
        let rows: Vec<Poly> = (1..=d)
            .flat_map(|j| {
                let t = &ts[j as usize];
                rb.basis[(d - j) as usize]
                    .iter()
                    .map(move |(_, r)| (t, r))
            })
            .map(|(t, r)| r.compose(&embed).map(|r4| t.mul(&r4)))
            .collect::<Result<_>>()?;
        let rank = match field {
            Field::Rational => {
                let ar = QArith;
                let rs = rows.iter().map(|p| idx.row(&ar, p)).collect::<Result<Vec<_>>>()?;
                crate::linalg::rank_of(&ar, idx.len(), rs)
            }
            Field::Prime(p) => {
                let ar = FpArith::new(p);
                let rs = rows.iter().map(|f| idx.row(&ar, f)).collect::<Result<Vec<_>>>()?;
                crate::linalg::rank_of(&ar, idx.len(), rs)
            }
        };
        dims.push(rank as u64);
    }
    Ok(HilbertData::new(dims, vec![2, 3], field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn polynomial_ring_in_newton_sums() {
        // Unit weights: the full ring of symmetric functions.
        let w = Weights::new(vec![rat(1, 1); 3]);
        let h = subalgebra_dims(&GeneratorFamily::newton(w, false).unwrap(), 8, Field::Rational).unwrap();
        assert_eq!(h.dims, vec![1, 1, 2, 3, 4, 5, 7, 8, 10]);
        assert_eq!(h.trimmed_numerator(), vec![1]);
    }

    #[test]
    fn generic_slice_dims() {
        let fam = GeneratorFamily::slice_newton(&rat(7, 2), &rat(5, 3)).unwrap();
        let h = subalgebra_dims(&fam, 9, Field::Rational).unwrap();
        assert_eq!(h.dims, vec![1, 0, 1, 1, 2, 2, 4, 4, 6, 7]);
        assert_eq!(fam.bezout_rank(), Some(6));
    }

    #[test]
    fn modular_matches_rational_for_generic_parameters() {
        let fam = GeneratorFamily::deformed(2, 1, &rat(9, 4)).unwrap();
        let a = subalgebra_dims(&fam, 9, Field::Rational).unwrap();
        let b = subalgebra_dims(&fam, 9, Field::Prime(32003)).unwrap();
        assert_eq!(a.dims, b.dims);
    }

    #[test]
    fn degenerate_weights_rejected() {
        assert!(GeneratorFamily::slice_newton(&rat(-1, 1), &rat(1, 1)).is_err());
        assert!(GeneratorFamily::deformed(1, 1, &rat(-1, 1)).is_err());
    }
}
