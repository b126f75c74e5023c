//! Fusion rings of a given integral type and duality: problem construction,
//! solving, and deduplication up to isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::engine::{solve, Budget, Cell, Outcome, Problem, Row, SearchStats};
use crate::error::{Error, Result};
use crate::ring_core::{are_isomorphic, canonical_form, FusionData, Tensor, TypeSignature};

/// Knobs of the integral search.
#[derive(Debug, Clone, Copy)]
pub struct RingSearchOptions {
    /// Apply the coefficient bounds (domain restriction and sum-of-squares prune).
    pub use_bounds: bool,
    /// Optional cap on every structure constant.
    pub max_multiplicity: Option<u32>,
    /// Node/time budget per (type, duality) pair.
    pub budget: Budget,
    /// Number of leading variables whose assignments form parallel work units (0 = sequential).
    pub split_depth: usize,
}

impl Default for RingSearchOptions {
    fn default() -> Self {
        RingSearchOptions { use_bounds: true, max_multiplicity: None, budget: Budget::default(), split_depth: 0 }
    }
}

/// Maximum rank supported by the integral search.
pub const SEARCH_RANK_CAP: usize = 16;

/// Orbit of a non-unit cell `(j,k,s)` under the reciprocity maps
/// `(j,k,s) ↦ (k*, j*, s*)` and `(j,k,s) ↦ (j*, s, k)`.
fn cell_orbit(j: usize, k: usize, s: usize, dual: &[usize]) -> BTreeSet<(usize, usize, usize)> {
    let mut orbit = BTreeSet::from([(j, k, s)]);
    let mut stack = vec![(j, k, s)];
    while let Some((a, b, c)) = stack.pop() {
        for next in [(dual[b], dual[a], dual[c]), (dual[a], c, b)] {
            if orbit.insert(next) {
                stack.push(next);
            }
        }
    }
    orbit
}

/// Builds the search problem for fusion rings with dimensions `dims` (index 0 = unit)
/// and duality `dual`.
pub fn build_problem(dims: &[u64], dual: &[usize], opts: &RingSearchOptions) -> Result<Problem> {
    let m = dims.len();
    if m > SEARCH_RANK_CAP {
        return Err(Error::RankTooLarge { rank: m, cap: SEARCH_RANK_CAP });
    }
    let d: Vec<i64> = dims.iter().map(|&x| x as i64).collect();
    let idx = |j: usize, k: usize, s: usize| (j * m + k) * m + s;
    let mut cells = vec![Cell::Fixed(0); m * m * m];
    let mut upper: Vec<i32> = Vec::new();
    for j in 0..m {
        for k in 0..m {
            for s in 0..m {
                if j == 0 {
                    cells[idx(j, k, s)] = Cell::Fixed(i32::from(k == s));
                } else if k == 0 {
                    cells[idx(j, k, s)] = Cell::Fixed(i32::from(j == s));
                } else if s == 0 {
                    cells[idx(j, k, s)] = Cell::Fixed(i32::from(j == dual[k]));
                }
            }
        }
    }
    for j in 1..m {
        for k in 1..m {
            for s in 1..m {
                if matches!(cells[idx(j, k, s)], Cell::Var(_)) {
                    continue;
                }
                let orbit = cell_orbit(j, k, s, dual);
                let v = upper.len();
                let mut ub = i64::MAX;
                for &(a, b, c) in &orbit {
                    cells[idx(a, b, c)] = Cell::Var(v);
                    // Necessary from the dimension equation alone.
                    ub = ub.min(d[a] * d[b] / d[c]);
                    if opts.use_bounds {
                        ub = ub.min(d[a].min(d[b]).min(d[c]));
                        ub = ub.min(d[c] * d[a].min(d[b]) / d[a].max(d[b]));
                    }
                }
                if let Some(cap) = opts.max_multiplicity {
                    ub = ub.min(i64::from(cap));
                }
                upper.push(ub as i32);
            }
        }
    }
    // Rows: one per non-unit pair (j, k).
    let mut rows = Vec::new();
    let mut row_of_pair = BTreeMap::new();
    for j in 1..m {
        for k in 1..m {
            let mut rhs = d[j] * d[k];
            let mut sq_cap = d[j].min(d[k]).pow(2);
            let mut terms: BTreeMap<usize, i64> = BTreeMap::new();
            let mut sq: BTreeMap<usize, i64> = BTreeMap::new();
            for s in 0..m {
                match cells[idx(j, k, s)] {
                    Cell::Fixed(x) => {
                        rhs -= i64::from(x) * d[s];
                        sq_cap -= i64::from(x) * i64::from(x);
                    }
                    Cell::Var(v) => {
                        *terms.entry(v).or_default() += d[s];
                        *sq.entry(v).or_default() += 1;
                    }
                }
            }
            row_of_pair.insert((j, k), rows.len());
            rows.push(Row {
                rhs,
                terms: terms.into_iter().collect(),
                sq_cap: opts.use_bounds.then_some(sq_cap),
                sq_terms: if opts.use_bounds { sq.into_iter().collect() } else { Vec::new() },
            });
        }
    }
    // Variable order: walk rows by increasing (max dim, d_j·d_k) so small rows close first;
    // inside a row, larger-weight cells first.
    let mut pairs: Vec<(usize, usize)> = row_of_pair.keys().copied().collect();
    pairs.sort_by_key(|&(j, k)| (j.max(k), d[j] * d[k], j.min(k), j, k));
    let mut order = Vec::with_capacity(upper.len());
    let mut seen = vec![false; upper.len()];
    for (j, k) in pairs {
        let mut ss: Vec<usize> = (1..m).collect();
        ss.sort_by_key(|&s| (std::cmp::Reverse(d[s]), s));
        for s in ss {
            if let Cell::Var(v) = cells[idx(j, k, s)] {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
        }
    }
    Ok(Problem { m, cells, upper, rows, order })
}

/// Converts a solution vector into fusion data.
pub fn solution_to_ring(m: usize, vals: &[i32]) -> Result<FusionData> {
    FusionData::from_tensor(m, Tensor::Integer(vals.iter().map(|&x| x as u32).collect()))
}

/// Result of enumerating one (type, duality) pair.
#[derive(Debug, Clone)]
pub struct RingEnumeration {
    /// Rings up to isomorphism.
    pub rings: Vec<FusionData>,
    /// Counters.
    pub stats: SearchStats,
    /// Raw solutions before deduplication.
    pub raw_solutions: usize,
    /// Budget exhausted.
    pub incomplete: bool,
}

/// Enumerates all fusion rings of type `ty` with duality `dual`, up to isomorphism.
pub fn enumerate_fusion_rings(ty: &TypeSignature, dual: &[usize], opts: &RingSearchOptions) -> Result<RingEnumeration> {
    let dims = ty.dims();
    if dual.len() != dims.len() {
        return Err(Error::InfeasibleParams("duality length differs from rank".into()));
    }
    let p = build_problem(&dims, dual, opts)?;
    let out = if opts.split_depth > 0 && p.order.len() > opts.split_depth {
        solve_split(&p, opts)
    } else {
        solve(&p, opts.budget)
    };
    let raw = out.solutions.len();
    let rings = dedup(p.m, &out.solutions)?;
    Ok(RingEnumeration { rings, stats: out.stats, raw_solutions: raw, incomplete: out.incomplete })
}

/// Parallel solve: fix the first `split_depth` variables to every value in their
/// static domains, solve each prefix independently, merge in prefix order.
fn solve_split(p: &Problem, opts: &RingSearchOptions) -> Outcome {
    let k = opts.split_depth;
    let mut prefixes: Vec<Vec<i32>> = vec![Vec::new()];
    for &v in &p.order[..k] {
        prefixes = prefixes
            .into_iter()
            .flat_map(|pre| (0..=p.upper[v]).map(move |x| {
                let mut q = pre.clone();
                q.push(x);
                q
            }))
            .collect();
    }
    let parts: Vec<Outcome> = prefixes
        .par_iter()
        .map(|pre| {
            let mut q = p.clone();
            for (i, &v) in p.order[..k].iter().enumerate() {
                q.upper[v] = pre[i];
            }
            // Lower bounds are expressed by fixing cells.
            for (c, cell) in p.cells.iter().enumerate() {
                if let Cell::Var(v) = cell {
                    if let Some(i) = p.order[..k].iter().position(|w| w == v) {
                        q.cells[c] = Cell::Fixed(pre[i]);
                    }
                }
            }
            let q = reindex_fixed(&q);
            solve(&q, opts.budget)
        })
        .collect();
    let mut solutions = Vec::new();
    let mut stats = SearchStats::default();
    let mut incomplete = false;
    for part in parts {
        solutions.extend(part.solutions);
        stats.absorb(&part.stats);
        incomplete |= part.incomplete;
    }
    Outcome { solutions, stats, incomplete }
}

/// Drops variables no longer referenced by any cell and folds them into row constants.
fn reindex_fixed(p: &Problem) -> Problem {
    let nv = p.upper.len();
    let mut used = vec![false; nv];
    for c in &p.cells {
        if let Cell::Var(v) = c {
            used[*v] = true;
        }
    }
    let mut fixed_val = vec![None; nv];
    // A variable unused by cells was fixed; recover its value from any former cell.
    let mut newid = vec![usize::MAX; nv];
    let mut upper = Vec::new();
    for v in 0..nv {
        if used[v] {
            newid[v] = upper.len();
            upper.push(p.upper[v]);
        } else {
            fixed_val[v] = Some(p.upper[v]);
        }
    }
    let cells = p
        .cells
        .iter()
        .map(|c| match *c {
            Cell::Var(v) => Cell::Var(newid[v]),
            f => f,
        })
        .collect();
    let rows = p
        .rows
        .iter()
        .map(|r| {
            let mut rhs = r.rhs;
            let mut terms = Vec::new();
            for &(v, w) in &r.terms {
                match fixed_val[v] {
                    Some(x) => rhs -= w * i64::from(x),
                    None => terms.push((newid[v], w)),
                }
            }
            let mut sq_cap = r.sq_cap;
            let mut sq_terms = Vec::new();
            for &(v, c) in &r.sq_terms {
                match fixed_val[v] {
                    Some(x) => {
                        if let Some(cap) = sq_cap.as_mut() {
                            *cap -= c * i64::from(x) * i64::from(x);
                        }
                    }
                    None => sq_terms.push((newid[v], c)),
                }
            }
            Row { rhs, terms, sq_cap, sq_terms }
        })
        .collect::<Vec<_>>();
    // A prefix that already violates a closed row yields an infeasible problem.
    let rows: Vec<Row> = rows;
    let order = p.order.iter().filter(|&&v| used[v]).map(|&v| newid[v]).collect();
    let mut q = Problem { m: p.m, cells, upper, rows, order };
    if q.rows.iter().any(|r| r.rhs < 0 || (r.terms.is_empty() && r.rhs != 0) || r.sq_cap.is_some_and(|c| c < 0)) {
        // Make it trivially infeasible.
        q.upper.iter_mut().for_each(|u| *u = -1);
        if q.order.is_empty() {
            q.rows.push(Row { rhs: 1, terms: vec![], sq_cap: None, sq_terms: vec![] });
        }
    }
    q
}

/// Deduplicates solutions up to isomorphism (canonical form, then pairwise confirmation).
pub fn dedup(m: usize, solutions: &[Vec<i32>]) -> Result<Vec<FusionData>> {
    let mut by_canon: BTreeMap<Vec<u32>, FusionData> = BTreeMap::new();
    let mut leftovers: Vec<FusionData> = Vec::new();
    for vals in solutions {
        let fd = solution_to_ring(m, vals)?;
        match canonical_form(&fd, 100_000)? {
            Some(c) => {
                by_canon.entry(c).or_insert(fd);
            }
            None => {
                let mut dup = false;
                for g in &leftovers {
                    if are_isomorphic(g, &fd)?.is_some() {
                        dup = true;
                        break;
                    }
                }
                if !dup {
                    leftovers.push(fd);
                }
            }
        }
    }
    let mut out: Vec<FusionData> = by_canon.into_values().collect();
    out.extend(leftovers);
    Ok(out)
}
