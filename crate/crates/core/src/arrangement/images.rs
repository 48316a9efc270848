//! Restriction of polynomial functions to the reduced arrangement
//! `X^0 = X ∩ {x_1 + ... + x_n = 0}`.
//!
//! Each `E^0_sigma` is parametrized by `w_1..w_{r-1}`: block `b < r-1`
//! carries `l_{r-1} w_b` and the last block carries `-sum_b l_b w_b`, so
//! the restriction of `x^a` only depends on the vector of block sums of `a`.

use std::collections::HashMap;

use crate::arrangement::subspaces::{Subspace, SubspaceSystem};
use crate::arrangement::symmetric::Twist;
use crate::error::Result;
use crate::linalg::{Echelon, FieldArith, MonomialIndex, SparseRow};
use crate::partition::Partition;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Restricted images of monomials, keyed by block-sum vectors, in one degree.
pub struct BlockTable<A: FieldArith> {
    pub degree: u32,
    pub target: MonomialIndex,
    table: HashMap<Vec<u16>, Vec<A::Elem>>,
}

impl<A: FieldArith> BlockTable<A> {
    pub fn width(&self) -> usize {
        self.target.len()
    }

    pub fn get(&self, sums: &[u16]) -> &[A::Elem] {
        &self.table[sums]
    }
}

/// Linear forms giving each block's coordinate on `E^0`.
pub fn block_forms(lambda: &Partition, arith: &impl FieldArith) -> Vec<Poly> {
    let parts = lambda.parts();
    let r = parts.len();
    let field = arith.field();
    let m = r - 1;
    let mut out = Vec::with_capacity(r);
    for b in 0..m {
        out.push(Poly::var(m, field, b).scale(&Scalar::from_i64(field, parts[r - 1] as i64)));
    }
    let mut last = Poly::zero(m, field);
    for (b, &p) in parts.iter().enumerate().take(m) {
        last = last.add(&Poly::var(m, field, b).scale(&Scalar::from_i64(field, -(p as i64))));
    }
    out.push(last);
    out
}

fn compositions(d: u32, r: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; r];
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        let r = cur.len();
        if i == r - 1 {
            cur[i] = left as u16;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
    }
    if r > 0 {
        rec(0, d, &mut cur, &mut out);
    }
    out
}

pub fn block_table<A: FieldArith>(arith: &A, lambda: &Partition, d: u32) -> Result<BlockTable<A>> {
    let r = lambda.len();
    let forms = block_forms(lambda, arith);
    let target = MonomialIndex::new(r - 1, d);
    let mut powers: Vec<Vec<Poly>> = forms
        .iter()
        .map(|f| vec![Poly::one(r - 1, arith.field()), f.clone()])
        .collect();
    for (b, f) in forms.iter().enumerate() {
        while powers[b].len() <= d as usize {
            let next = powers[b].last().unwrap().mul(f);
            powers[b].push(next);
        }
    }
    let mut table = HashMap::new();
    for comp in compositions(d, r) {
        let mut p = Poly::one(r - 1, arith.field());
        for (b, &e) in comp.iter().enumerate() {
            if e > 0 {
                p = p.mul(&powers[b][e as usize]);
            }
        }
        let mut dense = vec![arith.zero(); target.len()];
        for (c, v) in target.row(arith, &p)? {
            dense[c] = v;
        }
        table.insert(comp, dense);
    }
    Ok(BlockTable {
        degree: d,
        target,
        table,
    })
}

/// Young subgroup `S_nu` acting on consecutive coordinate blocks.
#[derive(Clone, Debug)]
pub struct YoungBlocks {
    pub ranges: Vec<(usize, usize)>,
}

impl YoungBlocks {
    pub fn new(nu: &Partition) -> YoungBlocks {
        let mut ranges = Vec::new();
        let mut s = 0;
        for &p in nu.parts() {
            ranges.push((s, s + p as usize));
            s += p as usize;
        }
        YoungBlocks { ranges }
    }

    pub fn n(&self) -> usize {
        self.ranges.last().map(|r| r.1).unwrap_or(0)
    }
}

/// Orbit representatives of subspaces under a Young subgroup.
pub fn orbit_representatives(sys: &SubspaceSystem, yb: &YoungBlocks) -> Vec<usize> {
    let n = sys.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (idx, s) in sys.subspaces.iter().enumerate() {
        for &(lo, hi) in &yb.ranges {
            for i in lo..hi.saturating_sub(1) {
                if s[i] == s[i + 1] {
                    continue;
                }
                let mut t: Subspace = s.clone();
                t.swap(i, i + 1);
                let t = sys.canonical(&t);
                let j = sys.index_of(&t).expect("subspace closed under permutation");
                let (a, b) = (find(&mut parent, idx), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).collect()
}

/// Exponent vectors canonical for `S_nu`: weakly (trivial) or strictly (sign)
/// decreasing inside each block.
pub fn canonical_exponents(yb: &YoungBlocks, d: u32, twist: Twist) -> Vec<Vec<u16>> {
    let n = yb.n();
    let mut starts = vec![false; n];
    for &(lo, _) in &yb.ranges {
        starts[lo] = true;
    }
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn rec(i: usize, left: u32, starts: &[bool], twist: Twist, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        let n = cur.len();
        if i == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = if starts[i] {
            left
        } else {
            match twist {
                Twist::Trivial => (cur[i - 1] as u32).min(left),
                Twist::Sign => {
                    if cur[i - 1] == 0 {
                        return;
                    }
                    (cur[i - 1] as u32 - 1).min(left)
                }
            }
        };
        for e in (0..=cap).rev() {
            cur[i] = e as u16;
            rec(i + 1, left - e, starts, twist, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &starts, twist, &mut cur, &mut out);
    out
}

/// All distinct rearrangements of `v` with the sign of the rearranging
/// permutation (meaningful when entries are distinct).
fn arrangements(v: &[u16]) -> Vec<(Vec<u16>, i64)> {
    let mut a: Vec<u16> = v.to_vec();
    a.sort_unstable();
    let mut out = Vec::new();
    loop {
        // Sign relative to the decreasing arrangement: count ascending pairs.
        let mut asc = 0usize;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if a[i] < a[j] {
                    asc += 1;
                }
            }
        }
        out.push((a.clone(), if asc % 2 == 0 { 1 } else { -1 }));
        // next permutation
        let Some(i) = (0..a.len().saturating_sub(1)).rev().find(|&i| a[i] < a[i + 1]) else {
            break;
        };
        let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
        a.swap(i, j);
        a[i + 1..].reverse();
    }
    out
}

/// Orbit of `a` under `S_nu` with signs.
pub fn orbit(yb: &YoungBlocks, a: &[u16]) -> Vec<(Vec<u16>, i64)> {
    let mut acc: Vec<(Vec<u16>, i64)> = vec![(Vec::with_capacity(a.len()), 1)];
    for &(lo, hi) in &yb.ranges {
        let arr = arrangements(&a[lo..hi]);
        let mut next = Vec::with_capacity(acc.len() * arr.len());
        for (prefix, s) in &acc {
            for (tail, t) in &arr {
                let mut v = prefix.clone();
                v.extend_from_slice(tail);
                next.push((v, s * t));
            }
        }
        acc = next;
    }
    acc
}

/// Dimension of the `S_nu`-invariant (or sign-isotypic) part of the
/// degree-`d` functions on `X^0`.
pub fn young_count<A: FieldArith>(
    arith: &A,
    sys: &SubspaceSystem,
    table: &BlockTable<A>,
    nu: &Partition,
    twist: Twist,
) -> Result<usize> {
    let yb = YoungBlocks::new(nu);
    let reps = orbit_representatives(sys, &yb);
    let width = table.width();
    let ncols = reps.len() * width;
    let r = sys.lambda.len();
    let exps = canonical_exponents(&yb, table.degree, twist);
    let mut eng = arith.engine(ncols, ncols);
    for a in exps {
        let orb = orbit(&yb, &a);
        let mut row: SparseRow<A::Elem> = Vec::new();
        for (ci, &si) in reps.iter().enumerate() {
            let s = &sys.subspaces[si];
            let mut counts: HashMap<Vec<u16>, i64> = HashMap::new();
            for (v, sign) in &orb {
                let mut sums = vec![0u16; r];
                for (i, &e) in v.iter().enumerate() {
                    sums[s[i] as usize] += e;
                }
                let w = if twist == Twist::Sign { *sign } else { 1 };
                *counts.entry(sums).or_insert(0) += w;
            }
            let mut block = vec![arith.zero(); width];
            for (sums, c) in counts {
                if c == 0 {
                    continue;
                }
                let cc = arith.from_i64(c);
                for (x, y) in block.iter_mut().zip(table.get(&sums)) {
                    if !arith.is_zero(y) {
                        *x = arith.add(x, &arith.mul(&cc, y));
                    }
                }
            }
            for (k, v) in block.into_iter().enumerate() {
                if !arith.is_zero(&v) {
                    row.push((ci * width + k, v));
                }
            }
        }
        eng.insert(row);
        if eng.rank() == ncols {
            break;
        }
    }
    Ok(eng.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes() {
        let yb = YoungBlocks::new(&"3,2".parse().unwrap());
        assert_eq!(orbit(&yb, &[2, 1, 0, 1, 1]).len(), 6);
        assert_eq!(orbit(&yb, &[1, 1, 0, 3, 0]).len(), 6);
        let signs: i64 = orbit(&yb, &[2, 1, 0, 1, 0]).iter().map(|t| t.1).sum();
        assert_eq!(signs, 0);
    }

    #[test]
    fn canonical_counts() {
        let yb = YoungBlocks::new(&"2".parse().unwrap());
        assert_eq!(canonical_exponents(&yb, 4, Twist::Trivial).len(), 3);
        assert_eq!(canonical_exponents(&yb, 4, Twist::Sign).len(), 2);
    }
}
