//! Hilbert function of `C[X] / (theta_1, ..., theta_r)` for linear forms `theta`.
//!
//! Translation along `(1,...,1)` preserves `X`, so `C[X] = C[X^0][s]` with
//! `s = sum x_i`. A shear sends `theta_1` to `s`, reducing the problem to
//! `r - 1` forms on `X^0`. Changing coordinates so those forms become the
//! first variables, the quotient in degree `d` is `h0_d` minus the rank of the
//! images of monomials divisible by one of them.

use crate::arrangement::images::block_forms;
use crate::arrangement::subspaces::SubspaceSystem;
use crate::error::{AcmError, Result};
use crate::linalg::{Echelon, FieldArith, MonomialIndex};
use crate::poly::monomials_of_degree;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDims {
    /// Dimensions of the quotient in degrees `0..`.
    pub dims: Vec<u64>,
    /// Dimensions of `C[X^0]` in the same degrees.
    pub reduced: Vec<u64>,
    /// The quotient vanished in the last computed degree.
    pub artinian: bool,
}

impl QuotientDims {
    pub fn length(&self) -> u64 {
        self.dims.iter().sum()
    }
}

/// Forms on `X^0` (in `x_1..x_{n-1}`) equivalent to `theta` modulo the shear.
pub fn reduce_forms<A: FieldArith>(arith: &A, forms: &[Vec<A::Elem>]) -> Result<Vec<Vec<A::Elem>>> {
    if forms.is_empty() {
        return Ok(Vec::new());
    }
    let n = forms[0].len();
    let sum = |f: &Vec<A::Elem>| f.iter().fold(arith.zero(), |a, b| arith.add(&a, b));
    let lead = forms
        .iter()
        .position(|f| !arith.is_zero(&sum(f)))
        .ok_or_else(|| AcmError::InvalidInput("every form vanishes on (1,...,1)".into()))?;
    let t1 = &forms[lead];
    let c_inv = arith.inv(&sum(t1))?;
    // alpha = (s - theta_1) / theta_1(1)
    let alpha: Vec<A::Elem> = t1
        .iter()
        .map(|t| arith.mul(&arith.sub(&arith.one(), t), &c_inv))
        .collect();
    let mut out = Vec::new();
    for (j, f) in forms.iter().enumerate() {
        if j == lead {
            continue;
        }
        let fj1 = sum(f);
        let sheared: Vec<A::Elem> = f
            .iter()
            .zip(&alpha)
            .map(|(c, a)| arith.add(c, &arith.mul(&fj1, a)))
            .collect();
        let last = sheared[n - 1].clone();
        out.push(sheared[..n - 1].iter().map(|c| arith.sub(c, &last)).collect());
    }
    Ok(out)
}

/// Complete `rows` (each of length `m`) to an invertible `m x m` matrix with unit vectors.
fn complete_basis<A: FieldArith>(arith: &A, rows: &[Vec<A::Elem>], m: usize) -> Result<Vec<Vec<A::Elem>>> {
    let mut eng = arith.engine(m, m);
    let to_sparse = |v: &Vec<A::Elem>| -> Vec<(usize, A::Elem)> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !arith.is_zero(x))
            .map(|(i, x)| (i, x.clone()))
            .collect()
    };
    let mut out = Vec::with_capacity(m);
    for r in rows {
        if !eng.insert(to_sparse(r)) {
            return Err(AcmError::InvalidInput("linear forms are dependent on X^0".into()));
        }
        out.push(r.clone());
    }
    for i in 0..m {
        if out.len() == m {
            break;
        }
        let mut e = vec![arith.zero(); m];
        e[i] = arith.one();
        if eng.insert(to_sparse(&e)) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Quotient dimensions through `max_deg`, stopping at the first vanishing degree,
/// or once the length exceeds `max_length`.
pub fn quotient_dims<A: FieldArith>(
    arith: &A,
    sys: &SubspaceSystem,
    forms: &[Vec<A::Elem>],
    max_deg: u32,
    max_length: Option<u64>,
) -> Result<QuotientDims> {
    let lambda = &sys.lambda;
    let n = lambda.n();
    let r = lambda.len();
    if forms.len() != r {
        return Err(AcmError::InvalidInput(format!("need {r} forms, got {}", forms.len())));
    }
    if forms.iter().any(|f| f.len() != n) {
        return Err(AcmError::InvalidInput("form length differs from n".into()));
    }
    let reduced = reduce_forms(arith, forms)?;
    let k = reduced.len();
    let m = n - 1;
    let coords = complete_basis(arith, &reduced, m)?;
    // Block forms as dense coefficient vectors in w (r - 1 variables).
    let w = r - 1;
    let bf = block_forms(lambda, arith);
    let lin = MonomialIndex::new(w, 1);
    let block_vecs: Vec<Vec<A::Elem>> = bf
        .iter()
        .map(|p| {
            let mut v = vec![arith.zero(); w];
            for (c, x) in lin.row(arith, p).expect("linear") {
                v[c] = x;
            }
            v
        })
        .collect();
    // ell[s][j]: restriction of coordinate j to subspace s.
    let ell: Vec<Vec<Vec<A::Elem>>> = sys
        .subspaces
        .iter()
        .map(|s| {
            coords
                .iter()
                .map(|row| {
                    let mut v = vec![arith.zero(); w];
                    for (i, c) in row.iter().enumerate() {
                        if arith.is_zero(c) {
                            continue;
                        }
                        for (t, b) in v.iter_mut().zip(&block_vecs[s[i] as usize]) {
                            *t = arith.add(t, &arith.mul(c, b));
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();

    let nsub = sys.len();
    let mut dims = Vec::new();
    let mut reduced_dims = Vec::new();
    let mut prev_idx = MonomialIndex::new(w, 0);
    let mut prev_src = MonomialIndex::new(m, 0);
    let mut prev_images: Vec<Vec<A::Elem>> = vec![vec![arith.one(); nsub]];
    let mut artinian = false;
    for d in 0..=max_deg {
        let (src, images, idx) = if d == 0 {
            (prev_src.clone(), prev_images.clone(), prev_idx.clone())
        } else {
            let idx = MonomialIndex::new(w, d);
            let pw = prev_idx.len();
            let cw = idx.len();
            // Multiplication table: (monomial in degree d-1, variable) -> index in degree d.
            let mult: Vec<Vec<usize>> = prev_idx
                .monomials
                .iter()
                .map(|mu| {
                    (0..w)
                        .map(|k| {
                            let mut e = mu.exps().to_vec();
                            e[k] += 1;
                            idx.get(&crate::poly::Monomial::from_exps(&e)).unwrap()
                        })
                        .collect()
                })
                .collect();
            let src = MonomialIndex::from_monomials(monomials_of_degree(m, d));
            let mut images = Vec::with_capacity(src.len());
            for mono in &src.monomials {
                let j = mono.exps().iter().position(|&e| e > 0).unwrap();
                let mut e = mono.exps().to_vec();
                e[j] -= 1;
                let pi = prev_src.get(&crate::poly::Monomial::from_exps(&e)).unwrap();
                let pv = &prev_images[pi];
                let mut v = vec![arith.zero(); nsub * cw];
                for s in 0..nsub {
                    let l = &ell[s][j];
                    for a in 0..pw {
                        let c = &pv[s * pw + a];
                        if arith.is_zero(c) {
                            continue;
                        }
                        for (kk, lk) in l.iter().enumerate() {
                            if arith.is_zero(lk) {
                                continue;
                            }
                            let t = &mut v[s * cw + mult[a][kk]];
                            *t = arith.add(t, &arith.mul(c, lk));
                        }
                    }
                }
                images.push(v);
            }
            (src, images, idx)
        };
        let ncols = nsub * idx.len();
        let mut eng = arith.engine(ncols, ncols);
        let sparse = |v: &Vec<A::Elem>| -> Vec<(usize, A::Elem)> {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !arith.is_zero(x))
                .map(|(i, x)| (i, x.clone()))
                .collect()
        };
        let in_ideal = |mono: &crate::poly::Monomial| mono.exps()[..k].iter().any(|&e| e > 0);
        for (mono, img) in src.monomials.iter().zip(&images) {
            if in_ideal(mono) {
                eng.insert(sparse(img));
            }
        }
        let r1 = eng.rank();
        for (mono, img) in src.monomials.iter().zip(&images) {
            if !in_ideal(mono) {
                eng.insert(sparse(img));
            }
        }
        let total = eng.rank();
        dims.push((total - r1) as u64);
        reduced_dims.push(total as u64);
        log::debug!("quotient degree {d}: h0 = {total}, quotient = {}", total - r1);
        prev_idx = idx;
        prev_src = src;
        prev_images = images;
        if total == r1 {
            artinian = true;
            break;
        }
        if max_length.is_some_and(|c| dims.iter().sum::<u64>() > c) {
            break;
        }
    }
    Ok(QuotientDims {
        dims,
        reduced: reduced_dims,
        artinian,
    })
}
