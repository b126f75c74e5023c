//! Backtracking core shared by the integral classification and the
//! parametrized rank-5 family.
//!
//! A [`Problem`] is a tensor whose cells are either constants or references
//! to integer variables. Optional *row constraints* encode the dimension
//! equations `Σ_s N_{j,k}^s d_s = d_j d_k` (exact knapsack rows) and the
//! quadratic bound `Σ_s (N_{j,k}^s)² ≤ min(d_j, d_k)²`. Associativity
//! instances are attached to the variable that completes them and checked the
//! moment it is assigned; instances that stay partially open are pruned by
//! interval bounds on both sides.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};

/// Cell content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// A constant.
    Fixed(i32),
    /// A variable id.
    Var(usize),
}

/// One linear row `Σ_v w_v x_v = rhs` with an optional quadratic cap `Σ_v c_v x_v² ≤ cap`.
#[derive(Debug, Clone)]
pub struct Row {
    /// Right-hand side after subtracting constant cells.
    pub rhs: i64,
    /// `(var, weight)` terms (weights merged per variable).
    pub terms: Vec<(usize, i64)>,
    /// Quadratic cap after subtracting constant cells, if used.
    pub sq_cap: Option<i64>,
    /// `(var, multiplicity)` terms of the quadratic form.
    pub sq_terms: Vec<(usize, i64)>,
}

/// Search problem over a rank-`m` tensor.
#[derive(Debug, Clone)]
pub struct Problem {
    /// Rank.
    pub m: usize,
    /// `m³` cells indexed `(j·m + k)·m + s`.
    pub cells: Vec<Cell>,
    /// Inclusive upper bound per variable.
    pub upper: Vec<i32>,
    /// Linear/quadratic row constraints.
    pub rows: Vec<Row>,
    /// Variable order (a permutation of the variable ids).
    pub order: Vec<usize>,
}

/// Counters reported by a search run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Assignments tried.
    pub nodes: u64,
    /// Branches cut by a dimension (knapsack) row.
    pub prune_row: u64,
    /// Branches cut by the sum-of-squares bound.
    pub prune_squares: u64,
    /// Branches cut by a completed associativity instance.
    pub prune_assoc: u64,
    /// Branches cut by interval bounds on a partially assigned associativity instance.
    pub prune_assoc_bounds: u64,
    /// Complete assignments emitted.
    pub leaves: u64,
}

impl SearchStats {
    /// Adds another run's counters.
    pub fn absorb(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.prune_row += o.prune_row;
        self.prune_squares += o.prune_squares;
        self.prune_assoc += o.prune_assoc;
        self.prune_assoc_bounds += o.prune_assoc_bounds;
        self.leaves += o.leaves;
    }
}

/// Resource limits of a run.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Maximum number of nodes.
    pub nodes: u64,
    /// Wall-clock deadline.
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { nodes: 1_000_000_000, deadline: None }
    }
}

/// Associativity instance `Σ_s a_s b_s = Σ_s c_s e_s` stored as cell pairs.
#[derive(Debug, Clone)]
struct Equation {
    lhs: Vec<(u32, u32)>,
    rhs: Vec<(u32, u32)>,
}

/// Compiled problem with trigger lists.
struct Compiled<'p> {
    p: &'p Problem,
    var_cells: Vec<Vec<u32>>,
    var_rows: Vec<Vec<(usize, i64)>>,
    var_sq: Vec<Vec<(usize, i64)>>,
    eqs: Vec<Equation>,
    /// Equations completed at each depth.
    complete_at: Vec<Vec<u32>>,
    /// Equations touched (but not completed) at each depth, checked by bounds.
    partial_at: Vec<Vec<u32>>,
    /// Depth of each variable in the order.
    depth_of: Vec<usize>,
}

struct State {
    val: Vec<i32>,
    /// Upper bound of each cell given the current partial assignment.
    hi: Vec<i32>,
    row_rem: Vec<i64>,
    row_left: Vec<u32>,
    sq_rem: Vec<i64>,
    stats: SearchStats,
    budget: Budget,
    timed_out: bool,
}

impl<'p> Compiled<'p> {
    fn new(p: &'p Problem) -> Self {
        let nv = p.upper.len();
        let mut var_cells = vec![Vec::new(); nv];
        for (c, cell) in p.cells.iter().enumerate() {
            if let Cell::Var(v) = cell {
                var_cells[*v].push(c as u32);
            }
        }
        let mut var_rows = vec![Vec::new(); nv];
        let mut var_sq = vec![Vec::new(); nv];
        for (r, row) in p.rows.iter().enumerate() {
            for &(v, w) in &row.terms {
                var_rows[v].push((r, w));
            }
            for &(v, w) in &row.sq_terms {
                var_sq[v].push((r, w));
            }
        }
        let mut depth_of = vec![usize::MAX; nv];
        for (d, &v) in p.order.iter().enumerate() {
            depth_of[v] = d;
        }
        let m = p.m;
        let cell = |j: usize, k: usize, s: usize| ((j * m + k) * m + s) as u32;
        let is_zero = |c: u32| p.cells[c as usize] == Cell::Fixed(0);
        let mut eqs = Vec::new();
        let mut complete_at = vec![Vec::new(); nv];
        let mut partial_at = vec![Vec::new(); nv];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for t in 0..m {
                        let mut lhs = Vec::new();
                        let mut rhs = Vec::new();
                        for s in 0..m {
                            let (a, b) = (cell(i, j, s), cell(s, k, t));
                            if !is_zero(a) && !is_zero(b) {
                                lhs.push((a, b));
                            }
                            let (c, e) = (cell(j, k, s), cell(i, s, t));
                            if !is_zero(c) && !is_zero(e) {
                                rhs.push((c, e));
                            }
                        }
                        let mut depths: Vec<usize> = lhs
                            .iter()
                            .chain(rhs.iter())
                            .flat_map(|&(a, b)| [a, b])
                            .filter_map(|c| match p.cells[c as usize] {
                                Cell::Var(v) => Some(depth_of[v]),
                                Cell::Fixed(_) => None,
                            })
                            .collect();
                        depths.sort_unstable();
                        depths.dedup();
                        let id = eqs.len() as u32;
                        match depths.last() {
                            None => {
                                // Constant instance: record at depth 0 if any vars exist.
                                eqs.push(Equation { lhs, rhs });
                                if nv > 0 {
                                    complete_at[0].push(id);
                                }
                            }
                            Some(&last) => {
                                eqs.push(Equation { lhs, rhs });
                                complete_at[last].push(id);
                                for &d in &depths[..depths.len() - 1] {
                                    partial_at[d].push(id);
                                }
                            }
                        }
                    }
                }
            }
        }
        Compiled { p, var_cells, var_rows, var_sq, eqs, complete_at, partial_at, depth_of }
    }

    fn initial_state(&self, budget: Budget) -> State {
        let p = self.p;
        let mut val = vec![0i32; p.cells.len()];
        let mut hi = vec![0i32; p.cells.len()];
        for (c, cell) in p.cells.iter().enumerate() {
            match *cell {
                Cell::Fixed(x) => {
                    val[c] = x;
                    hi[c] = x;
                }
                Cell::Var(v) => hi[c] = p.upper[v],
            }
        }
        State {
            val,
            hi,
            row_rem: p.rows.iter().map(|r| r.rhs).collect(),
            row_left: p.rows.iter().map(|r| r.terms.len() as u32).collect(),
            sq_rem: p.rows.iter().map(|r| r.sq_cap.unwrap_or(i64::MAX)).collect(),
            stats: SearchStats::default(),
            budget,
            timed_out: false,
        }
    }

    /// Value range of the variable at `depth` allowed by its rows.
    fn range(&self, st: &State, v: usize) -> (i32, i32) {
        let mut lo = 0i64;
        let mut hi = i64::from(self.p.upper[v]);
        for &(r, w) in &self.var_rows[v] {
            let rem = st.row_rem[r];
            if rem < 0 {
                return (1, 0);
            }
            hi = hi.min(rem / w);
            if st.row_left[r] == 1 {
                if rem % w != 0 {
                    return (1, 0);
                }
                lo = lo.max(rem / w);
                hi = hi.min(rem / w);
            }
        }
        for &(r, c) in &self.var_sq[v] {
            let rem = st.sq_rem[r];
            if rem != i64::MAX {
                // c·x² ≤ rem
                let mut x = ((rem / c) as f64).sqrt() as i64;
                while c * (x + 1) * (x + 1) <= rem {
                    x += 1;
                }
                while x > 0 && c * x * x > rem {
                    x -= 1;
                }
                hi = hi.min(x);
            }
        }
        (lo as i32, hi as i32)
    }

    fn assign(&self, st: &mut State, v: usize, x: i32) {
        for &c in &self.var_cells[v] {
            st.val[c as usize] = x;
            st.hi[c as usize] = x;
        }
        for &(r, w) in &self.var_rows[v] {
            st.row_rem[r] -= w * i64::from(x);
            st.row_left[r] -= 1;
        }
        for &(r, c) in &self.var_sq[v] {
            if st.sq_rem[r] != i64::MAX {
                st.sq_rem[r] -= c * i64::from(x) * i64::from(x);
            }
        }
    }

    fn unassign(&self, st: &mut State, v: usize, x: i32) {
        let up = self.p.upper[v];
        for &c in &self.var_cells[v] {
            st.val[c as usize] = 0;
            st.hi[c as usize] = up;
        }
        for &(r, w) in &self.var_rows[v] {
            st.row_rem[r] += w * i64::from(x);
            st.row_left[r] += 1;
        }
        for &(r, c) in &self.var_sq[v] {
            if st.sq_rem[r] != i64::MAX {
                st.sq_rem[r] += c * i64::from(x) * i64::from(x);
            }
        }
    }

    fn rows_ok(&self, st: &State, v: usize) -> bool {
        self.var_rows[v].iter().all(|&(r, _)| st.row_rem[r] >= 0 && (st.row_left[r] > 0 || st.row_rem[r] == 0))
    }

    fn complete_ok(&self, st: &State, depth: usize) -> bool {
        for &e in &self.complete_at[depth] {
            let eq = &self.eqs[e as usize];
            let l: i64 = eq.lhs.iter().map(|&(a, b)| i64::from(st.val[a as usize]) * i64::from(st.val[b as usize])).sum();
            let r: i64 = eq.rhs.iter().map(|&(a, b)| i64::from(st.val[a as usize]) * i64::from(st.val[b as usize])).sum();
            if l != r {
                return false;
            }
        }
        true
    }

    /// Interval test: with unassigned cells in `[0, hi]`, both sides must be able to meet.
    fn partial_ok(&self, st: &State, depth: usize) -> bool {
        for &e in &self.partial_at[depth] {
            let eq = &self.eqs[e as usize];
            let (mut l_lo, mut l_hi, mut r_lo, mut r_hi) = (0i64, 0i64, 0i64, 0i64);
            for &(a, b) in &eq.lhs {
                let (a, b) = (a as usize, b as usize);
                l_lo += i64::from(st.val[a]) * i64::from(st.val[b]);
                l_hi += i64::from(st.hi[a]) * i64::from(st.hi[b]);
            }
            for &(a, b) in &eq.rhs {
                let (a, b) = (a as usize, b as usize);
                r_lo += i64::from(st.val[a]) * i64::from(st.val[b]);
                r_hi += i64::from(st.hi[a]) * i64::from(st.hi[b]);
            }
            if l_lo > r_hi || r_lo > l_hi {
                return false;
            }
        }
        true
    }

    fn run(&self, st: &mut State, depth: usize, emit: &mut dyn FnMut(&[i32])) {
        if st.timed_out {
            return;
        }
        if depth == self.p.order.len() {
            st.stats.leaves += 1;
            emit(&st.val);
            return;
        }
        let v = self.p.order[depth];
        let (lo, hi) = self.range(st, v);
        if lo > hi {
            st.stats.prune_row += 1;
            return;
        }
        for x in lo..=hi {
            st.stats.nodes += 1;
            if st.stats.nodes >= st.budget.nodes {
                st.timed_out = true;
                return;
            }
            if st.stats.nodes & 0xFFFF == 0 {
                if let Some(dl) = st.budget.deadline {
                    if Instant::now() > dl {
                        st.timed_out = true;
                        return;
                    }
                }
            }
            self.assign(st, v, x);
            if !self.rows_ok(st, v) {
                st.stats.prune_row += 1;
            } else if self.var_sq[v].iter().any(|&(r, _)| st.sq_rem[r] < 0) {
                st.stats.prune_squares += 1;
            } else if !self.complete_ok(st, depth) {
                st.stats.prune_assoc += 1;
            } else if !self.partial_ok(st, depth) {
                st.stats.prune_assoc_bounds += 1;
            } else {
                self.run(st, depth + 1, emit);
            }
            self.unassign(st, v, x);
            if st.timed_out {
                return;
            }
        }
    }
}

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Complete cell-value vectors (`m³` entries) of every solution.
    pub solutions: Vec<Vec<i32>>,
    /// Counters.
    pub stats: SearchStats,
    /// Whether the budget ran out (solutions are then partial).
    pub incomplete: bool,
}

/// Enumerates every assignment satisfying all constraints and every associativity instance.
pub fn solve(p: &Problem, budget: Budget) -> Outcome {
    let comp = Compiled::new(p);
    let mut st = comp.initial_state(budget);
    let mut solutions = Vec::new();
    if p.order.is_empty() {
        // Nothing to assign: check constants once.
        let ok = (0..comp.eqs.len()).all(|e| {
            let eq = &comp.eqs[e];
            let l: i64 = eq.lhs.iter().map(|&(a, b)| i64::from(st.val[a as usize]) * i64::from(st.val[b as usize])).sum();
            let r: i64 = eq.rhs.iter().map(|&(a, b)| i64::from(st.val[a as usize]) * i64::from(st.val[b as usize])).sum();
            l == r
        }) && p.rows.iter().all(|r| r.rhs == 0);
        if ok {
            solutions.push(st.val.clone());
            st.stats.leaves = 1;
        }
        return Outcome { solutions, stats: st.stats, incomplete: false };
    }
    let _ = &comp.depth_of;
    comp.run(&mut st, 0, &mut |vals| solutions.push(vals.to_vec()));
    Outcome { solutions, stats: st.stats, incomplete: st.timed_out }
}

/// Like [`solve`] but errors on budget exhaustion.
pub fn solve_complete(p: &Problem, budget: Budget) -> Result<Outcome> {
    let out = solve(p, budget);
    if out.incomplete {
        return Err(Error::Timeout(format!("after {} nodes", out.stats.nodes)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank-2 tensor with x₂² = a·x₁ + b·x₂ where a is fixed to 1 by duality.
    #[test]
    fn rank_two_small() {
        let m = 2;
        let mut cells = vec![Cell::Fixed(0); 8];
        let c = |j: usize, k: usize, s: usize| (j * m + k) * m + s;
        cells[c(0, 0, 0)] = Cell::Fixed(1);
        cells[c(0, 1, 1)] = Cell::Fixed(1);
        cells[c(1, 0, 1)] = Cell::Fixed(1);
        cells[c(1, 1, 0)] = Cell::Fixed(1);
        cells[c(1, 1, 1)] = Cell::Var(0);
        let p = Problem { m, cells, upper: vec![3], rows: vec![], order: vec![0] };
        let out = solve(&p, Budget::default());
        // Every value of x₂x₂ coefficient gives an associative algebra.
        assert_eq!(out.solutions.len(), 4);
    }
}
