//! End-to-end classification: types → involutions → rings → predicates and
//! the Schur criterion, plus a naive enumerator used as a completeness oracle.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::engine::SearchStats;
use super::integral::{enumerate_fusion_rings, RingSearchOptions};
use super::types::{enumerate_involutions, enumerate_types, SearchConstraints};
use crate::criteria::{default_tolerance, schur_commutative};
use crate::error::{Error, Result};
use crate::ring_core::{
    are_isomorphic, global_fpdim, is_frobenius_type, is_perfect, is_simple, verify_axioms, FusionData, Tensor,
    TypeSignature,
};
use crate::spectral::{character_table, RESIDUAL_TOL};

/// Which rings are kept in the report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassifyFilters {
    /// Keep only simple rings.
    pub simple: bool,
    /// Keep only rings passing the commutative Schur criterion.
    pub schur: bool,
}

/// One ring found by the classification, with its predicate flags.
#[derive(Debug, Clone, Serialize)]
pub struct RingRecord {
    /// The ring.
    #[serde(skip)]
    pub ring: FusionData,
    /// 1-based duality involution.
    pub dual: Vec<usize>,
    /// Fusion matrices (`matrices[i][k][s] = N_{i,k}^s`).
    pub matrices: Vec<Vec<Vec<u32>>>,
    /// No proper fusion subring.
    pub simple: bool,
    /// Only the unit has dimension 1.
    pub perfect: bool,
    /// Every dimension divides the FP dimension (`None` for non-integral rings).
    pub frobenius_type: Option<bool>,
    /// Commutative multiplication.
    pub commutative: bool,
    /// Commutative Schur criterion (`None` for noncommutative rings).
    pub schur: Option<bool>,
    /// Worst triple sum (commutative rings).
    pub schur_worst: Option<f64>,
}

/// Per-type section of a report.
#[derive(Debug, Clone, Serialize)]
pub struct TypeReport {
    /// Type string.
    pub ring_type: String,
    /// Number of involution representatives searched.
    pub involutions_tried: usize,
    /// Rings found up to isomorphism (before filtering).
    pub found: usize,
    /// Simple rings among them.
    pub simple: usize,
    /// Schur-passing rings among them.
    pub schur_pass: usize,
    /// Simple and Schur-passing.
    pub simple_schur_pass: usize,
    /// Rings kept by the filters.
    pub rings: Vec<RingRecord>,
    /// Search counters summed over involutions.
    pub stats: SearchStats,
    /// Budget ran out for at least one involution.
    pub incomplete: bool,
}

/// Result of [`classify`].
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    /// Constraints echo.
    pub constraints: SearchConstraints,
    /// Filters echo.
    pub filters: ClassifyFilters,
    /// Number of types examined.
    pub types_examined: usize,
    /// Per-type sections in enumeration order.
    pub per_type: Vec<TypeReport>,
    /// Rings kept by the filters, over all types.
    pub total_kept: usize,
    /// Rings found, over all types.
    pub total_found: usize,
    /// Simple rings found.
    pub total_simple: usize,
    /// Schur-passing rings found.
    pub total_schur_pass: usize,
    /// Summed counters.
    pub stats: SearchStats,
    /// Wall time in seconds.
    pub wall_time_secs: f64,
    /// Some budget ran out; counts are lower bounds.
    pub incomplete: bool,
}

impl ClassificationReport {
    /// Every kept ring, in report order.
    pub fn rings(&self) -> impl Iterator<Item = &RingRecord> {
        self.per_type.iter().flat_map(|t| t.rings.iter())
    }
}

/// Computes the predicate flags of one ring.
pub fn ring_record(fd: FusionData) -> Result<RingRecord> {
    let commutative = fd.is_commutative();
    let (schur, schur_worst) = if commutative {
        let ct = character_table(&fd, RESIDUAL_TOL)?;
        let r = schur_commutative(&ct, default_tolerance(global_fpdim(&fd)?));
        (Some(r.holds), Some(r.worst_value))
    } else {
        (None, None)
    };
    Ok(RingRecord {
        dual: fd.dual().iter().map(|d| d + 1).collect(),
        matrices: fd.int_matrices().unwrap_or_default(),
        simple: is_simple(&fd),
        perfect: is_perfect(&fd)?,
        frobenius_type: match is_frobenius_type(&fd) {
            Ok(b) => Some(b),
            Err(Error::NotIntegral) => None,
            Err(e) => return Err(e),
        },
        commutative,
        schur,
        schur_worst,
        ring: fd,
    })
}

/// Runs the full pipeline. `(type, involution)` pairs are searched in parallel
/// and merged in enumeration order, so the report is deterministic.
pub fn classify(
    constraints: &SearchConstraints,
    filters: ClassifyFilters,
    opts: &RingSearchOptions,
) -> Result<ClassificationReport> {
    let start = Instant::now();
    let mut opts = *opts;
    if let Some(k) = constraints.max_multiplicity {
        opts.max_multiplicity = Some(opts.max_multiplicity.map_or(k, |c| c.min(k)));
    }
    let types = enumerate_types(constraints)?;
    let jobs: Vec<(usize, Vec<usize>)> = types
        .iter()
        .enumerate()
        .flat_map(|(t, ty)| enumerate_involutions(ty).into_iter().map(move |inv| (t, inv)))
        .collect();
    let results: Vec<Result<(usize, super::integral::RingEnumeration)>> = jobs
        .par_iter()
        .map(|(t, inv)| enumerate_fusion_rings(&types[*t], inv, &opts).map(|r| (*t, r)))
        .collect();
    let mut per_type: Vec<TypeReport> = types.iter().map(|ty| empty_type_report(ty)).collect();
    for res in results {
        let (t, en) = res?;
        let tr = &mut per_type[t];
        tr.involutions_tried += 1;
        tr.stats.absorb(&en.stats);
        tr.incomplete |= en.incomplete;
        for fd in en.rings {
            let rec = ring_record(fd)?;
            tr.found += 1;
            tr.simple += usize::from(rec.simple);
            let pass = rec.schur == Some(true);
            tr.schur_pass += usize::from(pass);
            tr.simple_schur_pass += usize::from(pass && rec.simple);
            if (!filters.simple || rec.simple) && (!filters.schur || pass) {
                tr.rings.push(rec);
            }
        }
    }
    let mut stats = SearchStats::default();
    per_type.iter().for_each(|t| stats.absorb(&t.stats));
    Ok(ClassificationReport {
        constraints: constraints.clone(),
        filters,
        types_examined: types.len(),
        total_kept: per_type.iter().map(|t| t.rings.len()).sum(),
        total_found: per_type.iter().map(|t| t.found).sum(),
        total_simple: per_type.iter().map(|t| t.simple).sum(),
        total_schur_pass: per_type.iter().map(|t| t.schur_pass).sum(),
        incomplete: per_type.iter().any(|t| t.incomplete),
        per_type,
        stats,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn empty_type_report(ty: &TypeSignature) -> TypeReport {
    TypeReport {
        ring_type: ty.to_string(),
        involutions_tried: 0,
        found: 0,
        simple: 0,
        schur_pass: 0,
        simple_schur_pass: 0,
        rings: Vec::new(),
        stats: SearchStats::default(),
        incomplete: false,
    }
}

/// Naive enumerator: every `(j, k)` row is chosen independently among all
/// solutions of its dimension equation (no coefficient bounds, no reciprocity
/// orbits); reciprocity is checked as rows are filled, full axioms at leaves.
/// Output is deduplicated by pairwise isomorphism. Intended for tiny cases only.
pub fn naive_enumerate(dims: &[u64], dual: &[usize]) -> Result<Vec<FusionData>> {
    let m = dims.len();
    let d: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    let idx = |j: usize, k: usize, s: usize| (j * m + k) * m + s;
    let mut t = vec![0i64; m * m * m];
    for j in 0..m {
        for k in 0..m {
            t[idx(0, j, k)] = i64::from(j == k);
            t[idx(j, 0, k)] = i64::from(j == k);
        }
    }
    let pairs: Vec<(usize, usize)> = (1..m).flat_map(|j| (1..m).map(move |k| (j, k))).collect();
    // Candidate rows: N_{j,k}^1 = δ_{j,k*}, the rest solve Σ_{s≥1} N^s d_s = d_j d_k − N^1.
    let candidates: Vec<Vec<Vec<i64>>> = pairs
        .iter()
        .map(|&(j, k)| {
            let unit = i64::from(dual[k] == j);
            let mut out = Vec::new();
            let mut cur = vec![0i64; m];
            cur[0] = unit;
            knapsack(&d, 1, d[j] * d[k] - unit, &mut cur, &mut out);
            out
        })
        .collect();
    let mut found: Vec<FusionData> = Vec::new();
    let mut assigned = vec![false; m * m * m];
    for j in 0..m {
        for k in 0..m {
            if j == 0 || k == 0 {
                for s in 0..m {
                    assigned[idx(j, k, s)] = true;
                }
            }
        }
    }
    fn consistent(t: &[i64], assigned: &[bool], m: usize, dual: &[usize]) -> bool {
        let idx = |j: usize, k: usize, s: usize| (j * m + k) * m + s;
        for j in 0..m {
            for k in 0..m {
                for s in 0..m {
                    let a = idx(j, k, s);
                    if !assigned[a] {
                        continue;
                    }
                    for b in [idx(dual[k], dual[j], dual[s]), idx(dual[j], s, k)] {
                        if assigned[b] && t[a] != t[b] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        depth: usize,
        pairs: &[(usize, usize)],
        cands: &[Vec<Vec<i64>>],
        t: &mut Vec<i64>,
        assigned: &mut Vec<bool>,
        m: usize,
        dual: &[usize],
        found: &mut Vec<FusionData>,
    ) -> Result<()> {
        if depth == pairs.len() {
            let fd = FusionData::from_tensor(m, Tensor::Integer(t.iter().map(|&x| x as u32).collect()));
            let Ok(fd) = fd else { return Ok(()) };
            if !verify_axioms(&fd, 0.0).all_pass() {
                return Ok(());
            }
            for g in found.iter() {
                if are_isomorphic(g, &fd)?.is_some() {
                    return Ok(());
                }
            }
            found.push(fd);
            return Ok(());
        }
        let (j, k) = pairs[depth];
        for row in &cands[depth] {
            for s in 0..m {
                t[(j * m + k) * m + s] = row[s];
                assigned[(j * m + k) * m + s] = true;
            }
            if consistent(t, assigned, m, dual) {
                rec(depth + 1, pairs, cands, t, assigned, m, dual, found)?;
            }
            for s in 0..m {
                assigned[(j * m + k) * m + s] = false;
            }
        }
        Ok(())
    }
    rec(0, &pairs, &candidates, &mut t, &mut assigned, m, dual, &mut found)?;
    Ok(found)
}

fn knapsack(d: &[i64], s: usize, rem: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if s == d.len() {
        if rem == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let mut x = 0;
    while x * d[s] <= rem {
        cur[s] = x;
        knapsack(d, s + 1, rem - x * d[s], cur, out);
        x += 1;
    }
    cur[s] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Budget;

    fn small_types() -> Vec<TypeSignature> {
        let mut c = SearchConstraints::exact(1, 1);
        c.fpdim = (1, 40);
        c.rank = (1, 4);
        enumerate_types(&c).unwrap()
    }

    #[test]
    fn trivial_type() {
        let ty = TypeSignature::parse("[[1,1]]").unwrap();
        let en = enumerate_fusion_rings(&ty, &[0], &RingSearchOptions::default()).unwrap();
        assert_eq!(en.rings.len(), 1);
        assert_eq!(naive_enumerate(&[1], &[0]).unwrap().len(), 1);
    }

    #[test]
    fn naive_oracle_small_cases() {
        // Rep(S3) type with both involutions; ℤ/4 and ℤ/2×ℤ/2 share [[1,4]].
        assert_eq!(naive_enumerate(&[1, 1, 2], &[0, 1, 2]).unwrap().len(), 1);
        assert_eq!(naive_enumerate(&[1, 1, 1, 1], &[0, 1, 2, 3]).unwrap().len(), 1);
        assert_eq!(naive_enumerate(&[1, 1, 1, 1], &[0, 1, 3, 2]).unwrap().len(), 1);
    }

    #[test]
    fn completeness_against_naive_oracle() {
        let mut checked = 0;
        for ty in small_types() {
            for inv in enumerate_involutions(&ty) {
                let dims = ty.dims();
                let on = enumerate_fusion_rings(&ty, &inv, &RingSearchOptions::default()).unwrap();
                let off = enumerate_fusion_rings(
                    &ty,
                    &inv,
                    &RingSearchOptions { use_bounds: false, ..RingSearchOptions::default() },
                )
                .unwrap();
                let naive = naive_enumerate(&dims, &inv).unwrap();
                assert_eq!(on.rings.len(), naive.len(), "type {ty} involution {inv:?}");
                assert_eq!(off.rings.len(), naive.len(), "type {ty} involution {inv:?}");
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn fpdim_60_classification() {
        let c = SearchConstraints::perfect_frobenius((60, 60), (5, 5));
        let rep = classify(&c, ClassifyFilters { simple: true, schur: false }, &RingSearchOptions::default()).unwrap();
        assert_eq!(rep.total_kept, 1);
        let r = rep.rings().next().unwrap();
        assert!(r.simple && r.perfect && r.frobenius_type == Some(true) && r.schur == Some(true));
        assert!(!rep.incomplete);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let c = SearchConstraints::exact(210, 7);
        let c = SearchConstraints { require_perfect: true, require_divisibility: true, ..c };
        let opts = RingSearchOptions { budget: Budget { nodes: 10, deadline: None }, ..RingSearchOptions::default() };
        let rep = classify(&c, ClassifyFilters::default(), &opts).unwrap();
        assert!(rep.incomplete);
    }
}
