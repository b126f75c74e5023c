//! Fusion subrings: closure of generator sets, the subring lattice, simplicity.

use std::collections::BTreeSet;

use super::data::FusionData;
use crate::error::{Error, Result};

/// Default rank cap for [`proper_subrings`].
pub const SUBRING_RANK_CAP: usize = 16;

/// Smallest set `S ⊇ generators ∪ {0}` closed under duality and fusion
/// (`support(x_j x_k) ⊆ S` for `j, k ∈ S`). Indices are 0-based.
pub fn subring_closure(fd: &FusionData, generators: &BTreeSet<usize>) -> BTreeSet<usize> {
    let m = fd.rank();
    let mut set: BTreeSet<usize> = generators.iter().copied().filter(|&g| g < m).collect();
    set.insert(0);
    loop {
        let mut next = set.clone();
        for &j in &set {
            next.insert(fd.dual_of(j));
            for &k in &set {
                for s in 0..m {
                    if fd.get(j, k, s) > 0.0 {
                        next.insert(s);
                    }
                }
            }
        }
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

/// All fusion subrings `S` with `{0} ⊊ S ⊊ {0..m}`, sorted by size then lexicographically.
///
/// Every subring is generated by its elements, so it is the closure of a
/// union of single-generator closures; the lattice is built from singleton
/// closures and closed under pairwise joins until a fixpoint.
pub fn proper_subrings(fd: &FusionData) -> Result<Vec<BTreeSet<usize>>> {
    let m = fd.rank();
    if m > SUBRING_RANK_CAP {
        return Err(Error::RankTooLarge { rank: m, cap: SUBRING_RANK_CAP });
    }
    let full: BTreeSet<usize> = (0..m).collect();
    let mut lattice: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for g in 1..m {
        lattice.insert(subring_closure(fd, &BTreeSet::from([g])));
    }
    loop {
        let items: Vec<_> = lattice.iter().cloned().collect();
        let mut grew = false;
        for a in 0..items.len() {
            for b in (a + 1)..items.len() {
                let union: BTreeSet<usize> = items[a].union(&items[b]).copied().collect();
                if lattice.insert(subring_closure(fd, &union)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<_> = lattice.into_iter().filter(|s| s.len() > 1 && *s != full).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Simple: no nontrivial proper fusion subring.
///
/// Equivalent to every non-unit basis element generating the whole ring,
/// which is checked directly (no rank cap).
pub fn is_simple(fd: &FusionData) -> bool {
    let m = fd.rank();
    (1..m).all(|g| subring_closure(fd, &BTreeSet::from([g])).len() == m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyclic(n: usize) -> FusionData {
        let mats: Vec<Vec<Vec<u32>>> = (0..n)
            .map(|i| (0..n).map(|k| (0..n).map(|s| u32::from((i + k) % n == s)).collect()).collect())
            .collect();
        FusionData::from_int_matrices(&mats).unwrap()
    }

    /// Rep(S_3): dims [1,1,2], x₂² = x₁, x₂x₃ = x₃, x₃² = x₁ + x₂ + x₃.
    fn rep_s3() -> FusionData {
        FusionData::from_int_matrices(&[
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
        ])
        .unwrap()
    }

    #[test]
    fn z4_closure() {
        let fd = cyclic(4);
        assert_eq!(subring_closure(&fd, &BTreeSet::from([2])), BTreeSet::from([0, 2]));
        assert_eq!(proper_subrings(&fd).unwrap(), vec![BTreeSet::from([0, 2])]);
        assert!(!is_simple(&fd));
    }

    #[test]
    fn rep_s3_lattice() {
        let fd = rep_s3();
        assert_eq!(subring_closure(&fd, &BTreeSet::from([1])), BTreeSet::from([0, 1]));
        assert_eq!(proper_subrings(&fd).unwrap(), vec![BTreeSet::from([0, 1])]);
    }

    #[test]
    fn prime_cyclic_is_simple() {
        assert!(is_simple(&cyclic(5)));
        assert!(proper_subrings(&cyclic(5)).unwrap().is_empty());
        assert_eq!(proper_subrings(&cyclic(12)).unwrap().len(), 4);
    }

    proptest! {
        #[test]
        fn closure_monotone_and_idempotent(a in proptest::collection::btree_set(0usize..12, 0..4),
                                           b in proptest::collection::btree_set(0usize..12, 0..4)) {
            let fd = cyclic(12);
            let ca = subring_closure(&fd, &a);
            prop_assert_eq!(subring_closure(&fd, &ca), ca.clone());
            let ab: BTreeSet<usize> = a.union(&b).copied().collect();
            let cab = subring_closure(&fd, &ab);
            prop_assert!(ca.is_subset(&cab));
        }
    }
}
