//! Enumeration of type signatures and duality involutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring_core::TypeSignature;

/// Constraints on the classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConstraints {
    /// Inclusive FPdim range.
    pub fpdim: (u64, u64),
    /// Inclusive rank range.
    pub rank: (usize, usize),
    /// Every dimension divides FPdim (Frobenius type).
    pub require_divisibility: bool,
    /// Only the unit has dimension 1.
    pub require_perfect: bool,
    /// Lower bound on the smallest non-unit dimension.
    pub min_d2: u64,
    /// `gcd(n_2, …, n_m) = 1`.
    pub require_gcd_one: bool,
    /// Skip FPdim of the form `p^a q^b` or `pqr`.
    pub exclude_prime_power_products: bool,
    /// Consecutive distinct non-unit dimensions satisfy `n_{r+1} < n_r²`.
    pub growth_cap: bool,
    /// Cap on structure constants.
    pub max_multiplicity: Option<u32>,
}

impl SearchConstraints {
    /// No filters for the given exact FPdim and rank.
    pub fn exact(fpdim: u64, rank: usize) -> Self {
        SearchConstraints {
            fpdim: (fpdim, fpdim),
            rank: (rank, rank),
            require_divisibility: false,
            require_perfect: false,
            min_d2: 1,
            require_gcd_one: false,
            exclude_prime_power_products: false,
            growth_cap: false,
            max_multiplicity: None,
        }
    }

    /// The filters used for perfect simple integral rings: perfect, Frobenius type,
    /// `d_2 ≥ 3`, gcd one, growth cap and the prime-power-product exclusion.
    pub fn perfect_frobenius(fpdim: (u64, u64), rank: (usize, usize)) -> Self {
        SearchConstraints {
            fpdim,
            rank,
            require_divisibility: true,
            require_perfect: true,
            min_d2: 3,
            require_gcd_one: true,
            exclude_prime_power_products: true,
            growth_cap: true,
            max_multiplicity: None,
        }
    }
}

/// Largest FPdim accepted by [`enumerate_types`].
pub const MAX_FPDIM: u64 = 100_000_000;

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Whether `n` is `p^a q^b` (at most two primes) or a product of three distinct primes.
pub fn is_prime_power_product(n: u64) -> bool {
    let f = prime_factors(n);
    f.len() <= 2 || (f.len() == 3 && f.iter().all(|&(_, e)| e == 1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// All type signatures satisfying the constraints, in lexicographic order of
/// `(FPdim, rank, dims)`.
pub fn enumerate_types(c: &SearchConstraints) -> Result<Vec<TypeSignature>> {
    if c.fpdim.1 > MAX_FPDIM {
        return Err(Error::UnboundedSearch(format!("FPdim bound {} exceeds {MAX_FPDIM}", c.fpdim.1)));
    }
    if c.fpdim.0 > c.fpdim.1 || c.rank.0 > c.rank.1 || c.rank.0 == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for f in c.fpdim.0.max(1)..=c.fpdim.1 {
        if c.exclude_prime_power_products && is_prime_power_product(f) {
            continue;
        }
        let lo = if c.require_perfect { c.min_d2.max(2) } else { 1 };
        let cands: Vec<u64> = (lo..)
            .take_while(|n| n * n < f.max(2))
            .filter(|n| !c.require_divisibility || f % n == 0)
            .collect();
        for rank in c.rank.0..=c.rank.1 {
            let mut cur = Vec::new();
            collect(f - 1, rank - 1, 0, &cands, &mut cur, &mut |dims: &[u64]| {
                let mut all = vec![1u64];
                all.extend_from_slice(dims);
                if admissible(&all, c) {
                    out.push(TypeSignature::from_dims(&all));
                }
            });
        }
    }
    Ok(out)
}

fn collect(rem: u64, left: usize, start: usize, cands: &[u64], cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if left == 0 {
        if rem == 0 {
            f(cur);
        }
        return;
    }
    for (i, &n) in cands.iter().enumerate().skip(start) {
        if n * n * left as u64 > rem {
            break;
        }
        cur.push(n);
        collect(rem - n * n, left - 1, i, cands, cur, f);
        cur.pop();
    }
}

fn admissible(dims: &[u64], c: &SearchConstraints) -> bool {
    let rest = &dims[1..];
    if c.require_perfect && rest.iter().any(|&n| n == 1) {
        return false;
    }
    if let Some(&d2) = rest.first() {
        if d2 < c.min_d2 {
            return false;
        }
    }
    if c.require_gcd_one && !rest.is_empty() && rest.iter().fold(0, |g, &n| gcd(g, n)) != 1 {
        return false;
    }
    if c.growth_cap {
        let mut distinct: Vec<u64> = rest.to_vec();
        distinct.dedup();
        if distinct.windows(2).any(|w| w[1] >= w[0] * w[0]) {
            return false;
        }
    }
    true
}

/// Canonical representatives of duality involutions for a type, up to
/// dimension-preserving relabeling: inside each block of equal dimension
/// (the unit excluded) choose how many 2-cycles, pairing consecutive indices.
pub fn enumerate_involutions(ty: &TypeSignature) -> Vec<Vec<usize>> {
    let m = ty.rank();
    // Blocks of non-unit indices with equal dimension.
    let mut blocks: Vec<(usize, usize)> = Vec::new(); // (start, len)
    let mut pos = 0;
    for &(n, c) in &ty.pairs {
        if n == 1 {
            if c > 1 {
                blocks.push((1, c - 1));
            }
            pos = c;
        } else {
            blocks.push((pos, c));
            pos += c;
        }
    }
    let mut out = vec![(0..m).collect::<Vec<usize>>()];
    for (start, len) in blocks {
        let mut next = Vec::new();
        for base in &out {
            for pairs in 0..=len / 2 {
                let mut inv = base.clone();
                for p in 0..pairs {
                    let (a, b) = (start + 2 * p, start + 2 * p + 1);
                    inv[a] = b;
                    inv[b] = a;
                }
                next.push(inv);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fpdim_60_perfect() {
        let c = SearchConstraints::perfect_frobenius((60, 60), (5, 5));
        let t = enumerate_types(&c).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "[[1,1],[3,2],[4,1],[5,1]]");
    }

    #[test]
    fn prime_excluded() {
        let mut c = SearchConstraints::exact(7, 1);
        c.rank = (1, 7);
        c.exclude_prime_power_products = true;
        assert!(enumerate_types(&c).unwrap().is_empty());
    }

    #[test]
    fn fpdim_210_rank_7() {
        let mut c = SearchConstraints::exact(210, 7);
        c.require_perfect = true;
        c.require_divisibility = true;
        let t = enumerate_types(&c).unwrap();
        assert!(t.iter().any(|t| t.to_string() == "[[1,1],[5,3],[6,1],[7,2]]"));
    }

    #[test]
    fn involution_orbits() {
        let t = TypeSignature::parse("[[1,1],[5,3],[6,1],[7,2]]").unwrap();
        let inv = enumerate_involutions(&t);
        assert_eq!(inv.len(), 4);
        assert!(inv.contains(&vec![0, 1, 2, 3, 4, 5, 6]));
        assert!(inv.contains(&vec![0, 2, 1, 3, 4, 6, 5]));
        assert_eq!(enumerate_involutions(&TypeSignature::parse("[[1,1]]").unwrap()), vec![vec![0]]);
        let r3 = enumerate_involutions(&TypeSignature::parse("[[1,1],[2,2]]").unwrap());
        assert_eq!(r3, vec![vec![0, 1, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn group_types() {
        // Groups of order 6 appear as [[1,6]] and [[1,2],[2,1]].
        let c = SearchConstraints { rank: (1, 6), ..SearchConstraints::exact(6, 1) };
        let t: Vec<String> = enumerate_types(&c).unwrap().iter().map(|t| t.to_string()).collect();
        assert!(t.contains(&"[[1,6]]".to_string()));
        assert!(t.contains(&"[[1,2],[2,1]]".to_string()));
    }

    #[test]
    fn prime_power_products() {
        assert!(is_prime_power_product(7));
        assert!(is_prime_power_product(72));
        assert!(is_prime_power_product(30));
        assert!(!is_prime_power_product(60));
        assert!(!is_prime_power_product(210));
        assert!(!is_prime_power_product(660));
    }
}
