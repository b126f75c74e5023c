//! Isomorphism testing and canonical forms.

use super::data::FusionData;
use super::dims::fp_dimensions;
use crate::error::{Error, Result};

/// Default rank cap for [`are_isomorphic`].
pub const ISO_RANK_CAP: usize = 12;

/// Label-invariant fingerprint of a basis element, used to prune permutations.
fn fingerprints(fd: &FusionData) -> Result<Vec<Vec<i64>>> {
    let d = fp_dimensions(fd)?;
    let m = fd.rank();
    let q = |x: f64| (x * 1e6).round() as i64;
    Ok((0..m)
        .map(|j| {
            let js = fd.dual_of(j);
            let row_sum: f64 = (0..m).flat_map(|k| (0..m).map(move |s| (k, s))).map(|(k, s)| fd.get(j, k, s)).sum();
            let sq_sum: f64 = (0..m).map(|s| fd.get(j, j, s)).sum();
            vec![
                q(d[j]),
                i64::from(js == j),
                q(fd.get(j, j, j)),
                q(fd.get(j, js, j)),
                q(row_sum),
                q(sq_sum),
            ]
        })
        .collect())
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Searches for a basis permutation `σ` (`σ(0) = 0`) with
/// `N2[σj][σk][σs] = N1[j][k][s]`; dualities are intertwined automatically
/// because they are encoded in the tensor. Uses the default rank cap.
pub fn are_isomorphic(a: &FusionData, b: &FusionData) -> Result<Option<Vec<usize>>> {
    are_isomorphic_capped(a, b, ISO_RANK_CAP)
}

/// [`are_isomorphic`] with an explicit rank cap.
pub fn are_isomorphic_capped(a: &FusionData, b: &FusionData, cap: usize) -> Result<Option<Vec<usize>>> {
    let m = a.rank();
    if m != b.rank() {
        return Ok(None);
    }
    if m > cap {
        return Err(Error::RankTooLarge { rank: m, cap });
    }
    let fa = fingerprints(a)?;
    let fb = fingerprints(b)?;
    let mut ka = fa.clone();
    let mut kb = fb.clone();
    ka.sort();
    kb.sort();
    if ka != kb {
        return Ok(None);
    }
    let candidates: Vec<Vec<usize>> = (0..m).map(|j| (0..m).filter(|&t| fa[j] == fb[t]).collect()).collect();
    // Assign most constrained indices first; the unit is fixed.
    let mut order: Vec<usize> = (1..m).collect();
    order.sort_by_key(|&j| (candidates[j].len(), j));
    order.insert(0, 0);
    let mut perm = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let mut assigned: Vec<usize> = Vec::with_capacity(m);
    if backtrack(a, b, &order, &candidates, 0, &mut perm, &mut used, &mut assigned) {
        Ok(Some(perm))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &FusionData,
    b: &FusionData,
    order: &[usize],
    candidates: &[Vec<usize>],
    depth: usize,
    perm: &mut [usize],
    used: &mut [bool],
    assigned: &mut Vec<usize>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let j = order[depth];
    for &t in &candidates[j] {
        if used[t] || (j == 0) != (t == 0) {
            continue;
        }
        perm[j] = t;
        used[t] = true;
        assigned.push(j);
        if consistent(a, b, perm, assigned) && backtrack(a, b, order, candidates, depth + 1, perm, used, assigned) {
            return true;
        }
        assigned.pop();
        used[t] = false;
        perm[j] = usize::MAX;
    }
    false
}

/// Checks all triples among assigned indices that involve the newest one.
fn consistent(a: &FusionData, b: &FusionData, perm: &[usize], assigned: &[usize]) -> bool {
    let j = *assigned.last().unwrap();
    for &x in assigned {
        for &y in assigned {
            let triples = [(j, x, y), (x, j, y), (x, y, j)];
            for (p, q, r) in triples {
                if !same(a.get(p, q, r), b.get(perm[p], perm[q], perm[r])) {
                    return false;
                }
            }
        }
    }
    true
}

/// Canonical encoding of an integer ring under dimension-preserving relabelings.
///
/// Basis elements are sorted by dimension; the encoding is the
/// lexicographically smallest flattened tensor over all permutations inside
/// equal-dimension blocks. Returns `None` when the tensor is real or the
/// block permutation group exceeds `max_group` elements.
pub fn canonical_form(fd: &FusionData, max_group: usize) -> Result<Option<Vec<u32>>> {
    let Some(_) = fd.get_int(0, 0, 0) else { return Ok(None) };
    let d = fp_dimensions(fd)?;
    let m = fd.rank();
    let mut idx: Vec<usize> = (1..m).collect();
    idx.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    // Blocks of equal dimension (positions in the sorted order).
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &i in &idx {
        match blocks.last_mut() {
            Some(bl) if same(d[bl[0]], d[i]) => bl.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    let mut size: usize = 1;
    for bl in &blocks {
        for f in 1..=bl.len() {
            size = size.saturating_mul(f);
        }
    }
    if size > max_group {
        return Ok(None);
    }
    let mut best: Option<Vec<u32>> = None;
    let mut order = vec![0usize];
    enumerate_blocks(&blocks, 0, &mut order, &mut |ord: &[usize]| {
        // ord[new] = old
        let enc: Vec<u32> = (0..m)
            .flat_map(|j| (0..m).flat_map(move |k| (0..m).map(move |s| (j, k, s))))
            .map(|(j, k, s)| fd.get_int(ord[j], ord[k], ord[s]).unwrap())
            .collect();
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    });
    Ok(best)
}

fn enumerate_blocks(blocks: &[Vec<usize>], bi: usize, order: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if bi == blocks.len() {
        f(order);
        return;
    }
    let mut items = blocks[bi].clone();
    permute(&mut items, 0, &mut |p: &[usize]| {
        let n = order.len();
        order.extend_from_slice(p);
        enumerate_blocks(blocks, bi + 1, order, f);
        order.truncate(n);
    });
}

fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> FusionData {
        let mats: Vec<Vec<Vec<u32>>> = (0..n)
            .map(|i| (0..n).map(|k| (0..n).map(|s| u32::from((i + k) % n == s)).collect()).collect())
            .collect();
        FusionData::from_int_matrices(&mats).unwrap()
    }

    #[test]
    fn reflexive_identity() {
        let fd = cyclic(7);
        let p = are_isomorphic(&fd, &fd).unwrap().unwrap();
        let q = fd.permuted(&p).unwrap();
        assert_eq!(q, fd);
    }

    #[test]
    fn swapped_labels() {
        let fd = cyclic(5);
        let perm = vec![0, 2, 1, 3, 4];
        let g = fd.permuted(&perm).unwrap();
        let p = are_isomorphic(&fd, &g).unwrap().unwrap();
        assert_eq!(fd.permuted(&p).unwrap(), g);
        assert_eq!(canonical_form(&fd, 10_000).unwrap(), canonical_form(&g, 10_000).unwrap());
    }

    #[test]
    fn non_isomorphic() {
        // Z/4 versus Z/2 x Z/2.
        let z4 = cyclic(4);
        let k4 = FusionData::from_int_matrices(
            &(0..4)
                .map(|i| (0..4).map(|k| (0..4).map(|s| u32::from(i ^ k == s)).collect()).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(are_isomorphic(&z4, &k4).unwrap().is_none());
    }

    #[test]
    fn rank_cap() {
        let fd = cyclic(13);
        assert!(matches!(are_isomorphic(&fd, &fd), Err(Error::RankTooLarge { .. })));
    }
}
