//! Randomised checker for the Fourier-analytic inequalities of a fusion bialgebra.
//!
//! Every check is phrased as a *slack* — nonnegative when the inequality holds —
//! scaled by the size of the quantities compared, so a slack below `−tol` is a
//! violation. Samples are independent, drawn from per-sample ChaCha streams of
//! one seed, so reports do not depend on the number of threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{CanonicalBialgebra, Element, Side};
use crate::error::Result;
use crate::spectral::{character_table, dual_projections, dual_fusion_coefficients};

/// Values of `1/p` used for exponent grids.
pub const EXPONENT_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Relative slack below which a check counts as violated.
pub const SUITE_TOL: f64 = 1e-8;

/// Names of the checks, in report order.
pub const CHECKS: [&str; 11] = [
    "plancherel",
    "hausdorff_young",
    "norm_bounds_K",
    "donoho_stark",
    "hirschman_beckner",
    "renyi",
    "young_A",
    "conv_norm_identity",
    "sumset",
    "dual_young_positive",
    "dual_young_falsify",
];

const FALSIFIER: usize = 10;

/// `K(1/p, 1/q) = μ^{max(0, 1/q − 1/2, 1/p + 1/q − 1)}`: the constant in
/// `‖𝔉̃(x)‖_{q,𝒜} ≤ K ‖x‖_{p,ℬ}`. The three exponents are the formulas of the
/// three regions of the `(1/p, 1/q)` square; each dominates the others on its
/// own region, so the maximum evaluates the piecewise definition and is
/// continuous across the (closed) boundaries.
pub fn norm_bound_k(mu: f64, inv_p: f64, inv_q: f64) -> f64 {
    mu.powf(0.0f64.max(inv_q - 0.5).max(inv_p + inv_q - 1.0))
}

fn exponent(inv: f64) -> f64 {
    if inv == 0.0 {
        f64::INFINITY
    } else {
        1.0 / inv
    }
}

/// Result for one inequality.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityResult {
    /// Check name (see [`CHECKS`]).
    pub name: &'static str,
    /// The inequality is a theorem for every fusion bialgebra (violations are bugs);
    /// otherwise violations are findings.
    pub theorem_backed: bool,
    /// Number of evaluated instances.
    pub checks: usize,
    /// Instances with slack below `−tol`.
    pub violations: usize,
    /// Smallest relative slack seen.
    pub worst_slack: f64,
    /// Sample index of the worst instance (`None` for the targeted construction).
    pub worst_sample: Option<usize>,
    /// Exponents `(1/p, 1/q)` of the worst instance, where relevant.
    pub worst_exponents: Option<(f64, f64)>,
}

impl InequalityResult {
    fn new(index: usize) -> Self {
        InequalityResult {
            name: CHECKS[index],
            theorem_backed: index != FALSIFIER,
            checks: 0,
            violations: 0,
            worst_slack: f64::INFINITY,
            worst_sample: None,
            worst_exponents: None,
        }
    }

    fn record(&mut self, slack: f64, sample: Option<usize>, exps: Option<(f64, f64)>, tol: f64) {
        self.checks += 1;
        if slack < -tol || slack.is_nan() {
            self.violations += 1;
        }
        if slack < self.worst_slack || slack.is_nan() {
            self.worst_slack = slack;
            self.worst_sample = sample;
            self.worst_exponents = exps;
        }
    }

    fn merge(mut self, other: InequalityResult) -> Self {
        self.checks += other.checks;
        self.violations += other.violations;
        let take = other.worst_slack < self.worst_slack
            || (other.worst_slack == self.worst_slack && other.worst_sample < self.worst_sample);
        if take {
            self.worst_slack = other.worst_slack;
            self.worst_sample = other.worst_sample;
            self.worst_exponents = other.worst_exponents;
        }
        self
    }
}

/// Report of [`inequality_suite`].
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    /// Label of the underlying ring.
    pub label: Option<String>,
    /// Rank.
    pub rank: usize,
    /// Global dimension.
    pub mu: f64,
    /// Number of random samples.
    pub samples: usize,
    /// Seed.
    pub seed: u64,
    /// Violation threshold on relative slacks.
    pub tol: f64,
    /// One entry per check, in [`CHECKS`] order.
    pub results: Vec<InequalityResult>,
}

impl SuiteReport {
    /// Result by name.
    pub fn get(&self, name: &str) -> Option<&InequalityResult> {
        self.results.iter().find(|r| r.name == name)
    }

    /// Total violations among theorem-backed checks.
    pub fn theorem_violations(&self) -> usize {
        self.results.iter().filter(|r| r.theorem_backed).map(|r| r.violations).sum()
    }

    /// Whether the dual Young inequality was falsified.
    pub fn dual_young_falsified(&self) -> bool {
        self.results[FALSIFIER].violations > 0
    }
}

fn rel(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (rhs - lhs) / scale
    }
}

struct Sampler {
    rng: ChaCha8Rng,
    m: usize,
}

impl Sampler {
    fn gauss(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn dense(&mut self, side: Side) -> Element {
        Element::new((0..self.m).map(|_| Complex64::new(self.gauss(), self.gauss())).collect(), side)
    }

    fn sparse(&mut self, side: Side) -> Element {
        let mut x = self.dense(side);
        let keep: Vec<bool> = (0..self.m).map(|_| self.rng.gen_bool(0.4)).collect();
        let anchor = self.rng.gen_range(0..self.m);
        for (j, c) in x.coeffs.iter_mut().enumerate() {
            if !keep[j] && j != anchor {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        x
    }

    fn positive(&mut self, side: Side) -> Element {
        Element::new((0..self.m).map(|_| Complex64::new(self.rng.gen_range(0.0..1.0), 0.0)).collect(), side)
    }

    fn mixed(&mut self, i: usize, side: Side) -> Element {
        if i % 2 == 1 {
            self.sparse(side)
        } else {
            self.dense(side)
        }
    }
}

/// Runs every check on `num_samples` random elements (per-sample streams of `seed`),
/// over the exponent grid [`EXPONENT_GRID`] restricted to each inequality's range.
pub fn inequality_suite(bialg: &CanonicalBialgebra, num_samples: usize, seed: u64) -> Result<SuiteReport> {
    let tol = SUITE_TOL;
    let empty = || (0..CHECKS.len()).map(InequalityResult::new).collect::<Vec<_>>();
    let merged = (0..num_samples)
        .into_par_iter()
        .map(|i| sample_checks(bialg, seed, i, tol))
        .try_reduce(empty, |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()))?;
    let mut results = merged;
    if let Some(slack) = targeted_dual_young(bialg)? {
        results[FALSIFIER].record(slack, None, Some((0.0, 1.0)), tol);
    }
    Ok(SuiteReport {
        label: bialg.fusion_data().label().map(str::to_string),
        rank: bialg.rank(),
        mu: bialg.mu(),
        samples: num_samples,
        seed,
        tol,
        results,
    })
}

fn sample_checks(b: &CanonicalBialgebra, seed: u64, i: usize, tol: f64) -> Result<Vec<InequalityResult>> {
    let mut out: Vec<InequalityResult> = (0..CHECKS.len()).map(InequalityResult::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let mut s = Sampler { rng, m: b.rank() };
    let at = Some(i);
    let mu = b.mu();

    let x = s.mixed(i, Side::A);
    let y = s.mixed(i / 2, Side::A);
    let z = s.mixed(i, Side::B);
    let fx = b.fourier(&x)?;
    let spec_fx = b.spectral_distribution(&fx)?;
    let spec_z = b.spectral_distribution(&z)?;
    let tz = b.fourier_tilde(&z)?;

    // Plancherel.
    let n2 = b.norm(&x, 2.0)?;
    out[0].record(-(n2 - spec_fx.norm(2.0)).abs() / n2, at, None, tol);

    // Hausdorff–Young in both directions, 1 ≤ p ≤ 2.
    for &ip in EXPONENT_GRID.iter().filter(|&&ip| ip >= 0.5) {
        let (p, q) = (exponent(ip), exponent(1.0 - ip));
        out[1].record(rel(spec_fx.norm(q), b.norm(&x, p)?), at, Some((ip, 1.0 - ip)), tol);
        out[1].record(rel(b.norm(&tz, q)?, spec_z.norm(p)), at, Some((ip, 1.0 - ip)), tol);
    }

    // ‖𝔉̃(z)‖_q ≤ K(1/p,1/q) ‖z‖_p on the full square.
    for &ip in &EXPONENT_GRID {
        let zp = spec_z.norm(exponent(ip));
        for &iq in &EXPONENT_GRID {
            let lhs = b.norm(&tz, exponent(iq))?;
            out[2].record(rel(lhs, norm_bound_k(mu, ip, iq) * zp), at, Some((ip, iq)), tol);
        }
    }

    // Donoho–Stark, both directions.
    out[3].record(b.support(&x)? * spec_fx.support(super::RANK_TOL) - 1.0, at, None, tol);
    out[3].record(spec_z.support(super::RANK_TOL) * b.support(&tz)? - 1.0, at, None, tol);

    // Hirschman–Beckner.
    let (ha, hb) = (b.entropy(&x)?, spec_fx.entropy());
    let rhs = -4.0 * n2 * n2 * n2.ln();
    let scale = 1f64.max(ha.abs()).max(hb.abs()).max(rhs.abs());
    out[4].record((ha + hb - rhs) / scale, at, None, tol);

    // Rényi: (1/t − 1/2) H_{t/2}(|𝔉x|²) + (1/2 − 1/s) H_{s/2}(|x|²) ≥ −log K(1/t, 1/s), ‖x‖₂ = 1.
    let xn = x.scale(Complex64::new(1.0 / n2, 0.0));
    let fxn = b.fourier(&xn)?;
    for &it in EXPONENT_GRID.iter().filter(|&&v| v != 0.5) {
        let ht = b.renyi_entropy(&fxn, exponent(it) / 2.0)?;
        for &is in EXPONENT_GRID.iter().filter(|&&v| v != 0.5) {
            let hs = b.renyi_entropy(&xn, exponent(is) / 2.0)?;
            let (u, v) = ((it - 0.5) * ht, (0.5 - is) * hs);
            let logk = norm_bound_k(mu, it, is).ln();
            let scale = 1f64.max(u.abs()).max(v.abs()).max(logk);
            out[5].record((u + v + logk) / scale, at, Some((it, is)), tol);
        }
    }

    // Young on 𝒜: 1/p + 1/q = 1 + 1/r.
    let xy = b.conv(&x, &y)?;
    for &ip in &EXPONENT_GRID {
        for &iq in &EXPONENT_GRID {
            let ir = ip + iq - 1.0;
            if ir < -1e-12 {
                continue;
            }
            let ir = ir.max(0.0);
            let lhs = b.norm(&xy, exponent(ir))?;
            let rhs = b.norm(&x, exponent(ip))? * b.norm(&y, exponent(iq))?;
            out[6].record(rel(lhs, rhs), at, Some((ip, iq)), tol);
        }
    }

    // ‖x ∗ y‖₁ = ‖x‖₁‖y‖₁ for nonnegative x, y.
    let (xp, yp) = (s.positive(Side::A), s.positive(Side::A));
    let lhs = b.norm(&b.conv(&xp, &yp)?, 1.0)?;
    let rhs = b.norm(&xp, 1.0)? * b.norm(&yp, 1.0)?;
    out[7].record(-(lhs - rhs).abs() / rhs, at, None, tol);

    // Sum-set estimate.
    let (xs, ys) = (s.sparse(Side::A), s.sparse(Side::A));
    let conv = b.conv(&b.range_projection_a(&xs)?, &b.range_projection_a(&ys)?)?;
    let lhs = b.support(&conv)?;
    let rhs = b.support(&xs)?.max(b.support(&ys)?);
    out[8].record((lhs - rhs) / rhs, at, None, tol);

    // Dual Young: ‖x ∗_ℬ y‖_∞ ≤ ‖x‖_∞ ‖y‖₁, proven for 𝔉^{-1}(x) ≥ 0, falsifiable in general.
    let w = s.dense(Side::B);
    let xb = s.positive(Side::B);
    let lhs = b.norm(&b.conv_b(&xb, &w)?, f64::INFINITY)?;
    let rhs = b.norm(&xb, f64::INFINITY)? * b.norm(&w, 1.0)?;
    out[9].record(rel(lhs, rhs), at, Some((0.0, 1.0)), tol);
    let lhs = b.norm(&b.conv_b(&z, &w)?, f64::INFINITY)?;
    let rhs = spec_z.norm(f64::INFINITY) * b.norm(&w, 1.0)?;
    out[FALSIFIER].record(rel(lhs, rhs), at, Some((0.0, 1.0)), tol);
    Ok(out)
}

/// Deterministic dual Young test for commutative rings: if some `N̂_{j,k}^s < 0`, then
/// `y = P_j`, `x = Σ_k sign(N̂_{j,k}^s) P_k` give `‖x ∗_ℬ y‖_∞ ≥ Σ_k |N̂_{j,k}^s| > τ(P_j) = ‖x‖_∞‖y‖₁`
/// (because `Σ_k N̂_{j,k}^s = τ(P_j)`). Returns the slack of that instance, or `None`
/// when the ring is noncommutative or its spectrum cannot be resolved.
fn targeted_dual_young(b: &CanonicalBialgebra) -> Result<Option<f64>> {
    let fd = b.fusion_data();
    if !fd.is_commutative() {
        return Ok(None);
    }
    let Ok(ct) = character_table(fd, 1e-8) else { return Ok(None) };
    let (Ok(proj), Ok(nhat)) = (dual_projections(fd, &ct), dual_fusion_coefficients(fd, &ct)) else {
        return Ok(None);
    };
    let m = b.rank();
    let (mut best, mut arg) = (f64::INFINITY, (0, 0));
    for j in 0..m {
        for k in 0..m {
            for s in 0..m {
                let v = nhat[(j * m + k) * m + s];
                if v < best {
                    best = v;
                    arg = (j, s);
                }
            }
        }
    }
    let (j, s) = arg;
    let y = Element::new(proj[j].coeffs.clone(), Side::B);
    let mut x = Element::new(vec![Complex64::new(0.0, 0.0); m], Side::B);
    for (k, pk) in proj.iter().enumerate() {
        let sign = if nhat[(j * m + k) * m + s] < 0.0 { -1.0 } else { 1.0 };
        x = x.add(&Element::new(pk.coeffs.clone(), Side::B).scale(Complex64::new(sign, 0.0)))?;
    }
    let lhs = b.norm(&b.conv_b(&x, &y)?, f64::INFINITY)?;
    let rhs = b.norm(&x, f64::INFINITY)? * b.norm(&y, 1.0)?;
    Ok(Some(rel(lhs, rhs)))
}

#[cfg(test)]
mod tests {
    use super::super::{canonical_from_fusion_data, rank3_type1, Rank3Type1Params};
    use super::*;
    use crate::ring_core::{cyclic_group_ring, FusionData};

    #[test]
    fn k_regions() {
        let mu = 16.0;
        assert_eq!(norm_bound_k(mu, 0.3, 0.2), 1.0);
        assert!((norm_bound_k(mu, 0.2, 1.0) - 4.0).abs() < 1e-12);
        assert!((norm_bound_k(mu, 1.0, 1.0) - 16.0).abs() < 1e-12);
        // On the boundary segments the neighbouring formulas coincide.
        assert!((norm_bound_k(mu, 0.5, 0.75) - mu.powf(0.25)).abs() < 1e-12);
        assert!((norm_bound_k(mu, 0.7, 0.3) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn suite_is_clean_on_small_rings() {
        let rep_s3 = FusionData::from_int_matrices(&[
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
        ])
        .unwrap();
        for fd in [cyclic_group_ring(4), rep_s3] {
            let b = canonical_from_fusion_data(&fd).unwrap();
            let r = inequality_suite(&b, 64, 7).unwrap();
            assert_eq!(r.theorem_violations(), 0, "{r:#?}");
            assert!(!r.dual_young_falsified());
            assert!(r.get("conv_norm_identity").unwrap().worst_slack > -1e-9);
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let b = canonical_from_fusion_data(&cyclic_group_ring(3)).unwrap();
        let r1 = inequality_suite(&b, 20, 11).unwrap();
        let r2 = inequality_suite(&b, 20, 11).unwrap();
        assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
    }

    #[test]
    fn dual_young_falsified_on_counterexample_family() {
        let p = Rank3Type1Params::new(1000.0, 500.0, 0.750001).unwrap();
        let b = rank3_type1(&p).unwrap();
        let r = inequality_suite(&b, 16, 1).unwrap();
        assert!(r.dual_young_falsified(), "{:?}", r.results[FALSIFIER]);
        assert_eq!(r.theorem_violations(), 0, "{r:#?}");
    }
}
