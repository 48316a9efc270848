//! The subspaces `E_sigma` making up an arrangement: set partitions of
//! `{0..n}` with block sizes given by the parts.

use std::collections::HashMap;

use crate::error::{AcmError, Result};
use crate::partition::{factorial, Partition};

/// Default cap on the number of subspaces.
pub const DEFAULT_SUBSPACE_LIMIT: u64 = 1_000_000;

/// Block assignment: `blocks[i]` is the part index owning coordinate `i`.
/// Parts are indexed as in the (decreasing) partition; equal parts are
/// ordered by their smallest coordinate.
pub type Subspace = Vec<u8>;

#[derive(Clone, Debug)]
pub struct SubspaceSystem {
    pub lambda: Partition,
    pub subspaces: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
}

impl SubspaceSystem {
    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Canonical labelling of an arbitrary block assignment.
    pub fn canonical(&self, raw: &[u8]) -> Subspace {
        canonicalize(&self.lambda, raw)
    }
}

/// `n! / (prod l_i! prod m_j!)`.
pub fn subspace_count(lambda: &Partition) -> u64 {
    let n = lambda.n() as u64;
    let mut num: u128 = (1..=n as u128).product::<u128>().max(1);
    for &p in lambda.parts() {
        num /= factorial(p as u64) as u128;
    }
    for (_, k) in lambda.multiplicities() {
        num /= factorial(k as u64) as u128;
    }
    num as u64
}

/// Relabel blocks so that equal-size blocks are ordered by first coordinate.
pub fn canonicalize(lambda: &Partition, raw: &[u8]) -> Subspace {
    let parts = lambda.parts();
    let r = parts.len();
    let mut first = vec![usize::MAX; r];
    for (i, &b) in raw.iter().enumerate() {
        let b = b as usize;
        if first[b] == usize::MAX {
            first[b] = i;
        }
    }
    let mut map = vec![0u8; r];
    let mut start = 0;
    while start < r {
        let mut end = start;
        while end < r && parts[end] == parts[start] {
            end += 1;
        }
        let mut group: Vec<usize> = (start..end).collect();
        group.sort_by_key(|&b| first[b]);
        for (k, &b) in group.iter().enumerate() {
            map[b] = (start + k) as u8;
        }
        start = end;
    }
    raw.iter().map(|&b| map[b as usize]).collect()
}

pub fn enumerate_subspaces(lambda: &Partition, limit: u64) -> Result<SubspaceSystem> {
    let count = subspace_count(lambda);
    if count > limit {
        return Err(AcmError::SizeLimit(format!(
            "{lambda} has {count} subspaces (limit {limit})"
        )));
    }
    let n = lambda.n();
    // Blocks are opened in order of their smallest element; each open block
    // records the part size it will receive.
    let mut remaining: Vec<(u32, usize)> = lambda.multiplicities();
    let mut open: Vec<(u32, usize)> = Vec::new(); // (size, filled)
    let mut assign = vec![0usize; n];
    let mut out = Vec::with_capacity(count as usize);

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        n: usize,
        remaining: &mut Vec<(u32, usize)>,
        open: &mut Vec<(u32, usize)>,
        assign: &mut Vec<usize>,
        out: &mut Vec<Vec<u8>>,
        lambda: &Partition,
    ) {
        let pending: usize = open.iter().map(|&(s, f)| s as usize - f).sum();
        if pending > n - i {
            return;
        }
        if i == n {
            if open.iter().all(|&(s, f)| f == s as usize) {
                // Map opened blocks to part indices.
                let parts = lambda.parts();
                let mut used = vec![false; parts.len()];
                let mut label = vec![0u8; open.len()];
                for (b, &(s, _)) in open.iter().enumerate() {
                    let k = (0..parts.len()).find(|&k| !used[k] && parts[k] == s).unwrap();
                    used[k] = true;
                    label[b] = k as u8;
                }
                out.push(assign.iter().map(|&b| label[b]).collect());
            }
            return;
        }
        for b in 0..open.len() {
            if open[b].1 < open[b].0 as usize {
                open[b].1 += 1;
                assign[i] = b;
                rec(i + 1, n, remaining, open, assign, out, lambda);
                open[b].1 -= 1;
            }
        }
        for k in 0..remaining.len() {
            if remaining[k].1 == 0 {
                continue;
            }
            let size = remaining[k].0;
            remaining[k].1 -= 1;
            open.push((size, 1));
            assign[i] = open.len() - 1;
            rec(i + 1, n, remaining, open, assign, out, lambda);
            open.pop();
            remaining[k].1 += 1;
        }
    }
    rec(0, n, &mut remaining, &mut open, &mut assign, &mut out, lambda);
    debug_assert_eq!(out.len() as u64, count);
    let index = out.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(SubspaceSystem {
        lambda: lambda.clone(),
        subspaces: out,
        index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_formula() {
        for n in 1..=8 {
            for lam in Partition::all(n) {
                let sys = enumerate_subspaces(&lam, DEFAULT_SUBSPACE_LIMIT).unwrap();
                assert_eq!(sys.len() as u64, subspace_count(&lam), "{lam}");
                for s in &sys.subspaces {
                    assert_eq!(&sys.canonical(s), s);
                }
            }
        }
        assert_eq!(subspace_count(&"4,2,2".parse().unwrap()), 210);
        assert_eq!(subspace_count(&"3,3,3".parse().unwrap()), 280);
    }

    #[test]
    fn limit_enforced() {
        let lam: Partition = "1^12".parse().unwrap();
        assert_eq!(subspace_count(&lam), 1);
        let lam: Partition = "2^6".parse().unwrap();
        assert!(enumerate_subspaces(&lam, 100).is_err());
    }
}
