//! Rank-2 and rank-3 fusion bialgebras given by closed forms, and the
//! dual Schur test of the rank-3 family through its explicit minimal projections.

use num_complex::Complex64;
use serde::Serialize;

use super::{canonical_from_fusion_data, CanonicalBialgebra, Element, Side};
use crate::error::{Error, Result};
use crate::ring_core::{fp_dimensions, FusionData, Mode};
use crate::spectral::fusion_product;

/// Relative slack allowed on the nonnegativity constraints (rounding only).
const FEASIBILITY_TOL: f64 = 1e-12;

/// Relative tolerance for the dual Schur decision and the projection checks.
const DUAL_TOL: f64 = 1e-9;

/// Builds a float-mode bialgebra whose dimensions are known in closed form.
fn from_matrices(mats: Vec<Vec<Vec<f64>>>, dims: Vec<f64>, label: String) -> Result<CanonicalBialgebra> {
    let fd = FusionData::new(&mats, Mode::Float)?.with_label(label);
    let _ = fd.fp_cache.set(dims);
    canonical_from_fusion_data(&fd)
}

/// Clamps a coefficient that is nonnegative up to rounding.
fn nonneg(value: f64, scale: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -FEASIBILITY_TOL * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::InfeasibleParams(format!("{what} = {value} is negative")))
    }
}

/// Rank 2, determined by `μ ≥ 2`: `d_2 = √(μ−1)` and `x_2² = x_1 + (d_2²−1)/d_2 · x_2`.
pub fn rank2_family(mu: f64) -> Result<CanonicalBialgebra> {
    if !(mu >= 2.0) || !mu.is_finite() {
        return Err(Error::InfeasibleParams(format!("rank 2 needs mu >= 2, got {mu}")));
    }
    let d2 = (mu - 1.0).sqrt();
    let c = (d2 * d2 - 1.0) / d2;
    let mats = vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![0.0, 1.0], vec![1.0, c]]];
    from_matrices(mats, vec![1.0, d2], format!("rank2(mu={mu})"))
}

/// Parameters of the self-adjoint rank-3 family: dimensions `d_2, d_3 ≥ 1` and `a ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rank3Type1Params {
    /// `d(x_2)`.
    pub d2: f64,
    /// `d(x_3)`.
    pub d3: f64,
    /// Mixing parameter `a`; `b = 1 − a`.
    pub a: f64,
}

impl Rank3Type1Params {
    /// Validated parameters.
    pub fn new(d2: f64, d3: f64, a: f64) -> Result<Self> {
        let p = Rank3Type1Params { d2, d3, a };
        p.coefficients()?;
        Ok(p)
    }

    /// `b = 1 − a`.
    pub fn b(&self) -> f64 {
        1.0 - self.a
    }

    /// `μ = 1 + d_2² + d_3²`.
    pub fn mu(&self) -> f64 {
        1.0 + self.d2 * self.d2 + self.d3 * self.d3
    }

    /// Parameters of the integer fusion ring with
    /// `M_2 = [[0,1,0],[1,p,m],[0,m,n]]`, `M_3 = [[0,0,1],[0,m,n],[1,n,q]]`,
    /// where `p = (m² + n² − 1 − mq)/n` (requires `n > 0`).
    pub fn from_mnq(m: f64, n: f64, q: f64) -> Result<Self> {
        if !(n > 0.0) || m < 0.0 || q < 0.0 {
            return Err(Error::InfeasibleParams(format!("(m,n,q) = ({m},{n},{q}) needs n > 0, m, q >= 0")));
        }
        let p = (m * m + n * n - 1.0 - m * q) / n;
        let p = nonneg(p, m * m + n * n + m * q, "p")?;
        let fd = FusionData::new(&mnq_matrices(m, n, q, p), Mode::Float)?;
        let d = fp_dimensions(&fd)?;
        let a = m / d[2];
        let b = n / d[1];
        if (a + b - 1.0).abs() > 1e-9 {
            return Err(Error::InfeasibleParams(format!("a + b = {} != 1", a + b)));
        }
        Rank3Type1Params::new(d[1], d[2], a)
    }

    /// `(N_{22}^2, N_{22}^3, N_{23}^3, N_{33}^3)`, checking feasibility.
    fn coefficients(&self) -> Result<[f64; 4]> {
        let Rank3Type1Params { d2, d3, a } = *self;
        let b = 1.0 - a;
        if !(d2 >= 1.0 && d3 >= 1.0 && (0.0..=1.0).contains(&a)) {
            return Err(Error::InfeasibleParams(format!("need d2, d3 >= 1 and a in [0,1]; got ({d2}, {d3}, {a})")));
        }
        let scale = d2 * d2 + d3 * d3;
        let c222 = nonneg(d2 * d2 - 1.0 - a * d3 * d3, scale, "d2^2 - 1 - a d3^2")? / d2;
        let c333 = nonneg(d3 * d3 - 1.0 - b * d2 * d2, scale, "d3^2 - 1 - b d2^2")? / d3;
        Ok([c222, a * d3, b * d2, c333])
    }
}

fn mnq_matrices(m: f64, n: f64, q: f64, p: f64) -> Vec<Vec<Vec<f64>>> {
    vec![
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![vec![0.0, 1.0, 0.0], vec![1.0, p, m], vec![0.0, m, n]],
        vec![vec![0.0, 0.0, 1.0], vec![0.0, m, n], vec![1.0, n, q]],
    ]
}

/// The self-adjoint rank-3 bialgebra:
/// `x_2x_2 = x_1 + (d_2²−1−a d_3²)/d_2 · x_2 + a d_3 x_3`, `x_2x_3 = a d_3 x_2 + b d_2 x_3`,
/// `x_3x_3 = x_1 + b d_2 x_2 + (d_3²−1−b d_2²)/d_3 · x_3`.
pub fn rank3_type1(params: &Rank3Type1Params) -> Result<CanonicalBialgebra> {
    let [c222, m, n, q] = params.coefficients()?;
    let mats = mnq_matrices(m, n, q, c222);
    let label = format!("rank3-I(d2={}, d3={}, a={})", params.d2, params.d3, params.a);
    from_matrices(mats, vec![1.0, params.d2, params.d3], label)
}

/// The rank-3 bialgebra with `x_2^* = x_3`, determined by `μ ≥ 3`: `d_2 = d_3 = d = √((μ−1)/2)`,
/// `x_2x_2 = α x_2 + β x_3`, `x_2x_3 = x_1 + α(x_2 + x_3)`, `x_3x_3 = β x_2 + α x_3`
/// with `α = (d²−1)/(2d)` and `β = (d²+1)/(2d)`.
pub fn rank3_type2(mu: f64) -> Result<CanonicalBialgebra> {
    if !(mu >= 3.0) || !mu.is_finite() {
        return Err(Error::InfeasibleParams(format!("rank 3 with a dual pair needs mu >= 3, got {mu}")));
    }
    let d = ((mu - 1.0) / 2.0).sqrt();
    let alpha = (d * d - 1.0) / (2.0 * d);
    let beta = (d * d + 1.0) / (2.0 * d);
    let mats = vec![
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![vec![0.0, 1.0, 0.0], vec![0.0, alpha, beta], vec![1.0, alpha, alpha]],
        vec![vec![0.0, 0.0, 1.0], vec![1.0, alpha, alpha], vec![0.0, beta, alpha]],
    ];
    from_matrices(mats, vec![1.0, d, d], format!("rank3-II(mu={mu})"))
}

/// Minimal projections of `ℬ` for the self-adjoint rank-3 family.
#[derive(Debug, Clone, Serialize)]
pub struct Rank3DualData {
    /// Root of `λ² − (a d_3² − b d_2² + 1)λ − b d_2² = 0` of larger modulus
    /// (the one carrying the sign of the linear coefficient).
    pub lambda2: f64,
    /// The other root, `−b d_2²/λ_2`.
    pub lambda3: f64,
    /// `ν_2 = 1 + λ_2²/d_2² + (1−λ_2)²/d_3²`.
    pub nu2: f64,
    /// `ν_3`, likewise.
    pub nu3: f64,
    /// `Q_1 = μ^{-1}(x_1 + d_2 x_2 + d_3 x_3)`, `Q_j = ν_j^{-1}(x_1 − λ_j/d_2 x_2 − (1−λ_j)/d_3 x_3)`.
    pub projections: [Element; 3],
}

/// Computes `λ_2, λ_3, ν_2, ν_3` and `Q_1, Q_2, Q_3`, and checks that the `Q_j` are
/// mutually orthogonal idempotents summing to `1_ℬ`.
pub fn rank3_dual_data(params: &Rank3Type1Params) -> Result<Rank3DualData> {
    let bialg = rank3_type1(params)?;
    let Rank3Type1Params { d2, d3, a } = *params;
    let b = 1.0 - a;
    let sum = a * d3 * d3 - b * d2 * d2 + 1.0;
    let prod = -b * d2 * d2;
    let disc = sum * sum - 4.0 * prod;
    if disc <= 1e-14 * (sum * sum + prod.abs()) {
        return Err(Error::DegenerateSpectrum(format!("double root {} of the rank-3 quadratic", sum / 2.0)));
    }
    let sign = if sum < 0.0 { -1.0 } else { 1.0 };
    let lambda2 = 0.5 * (sum + sign * disc.sqrt());
    let lambda3 = prod / lambda2;
    let nu = |l: f64| 1.0 + l * l / (d2 * d2) + (1.0 - l) * (1.0 - l) / (d3 * d3);
    let (nu2, nu3) = (nu(lambda2), nu(lambda3));
    let mu = params.mu();
    let q = |l: f64, n: f64| Element::from_real(&[1.0 / n, -l / d2 / n, -(1.0 - l) / d3 / n], Side::B);
    let projections = [Element::from_real(&[1.0 / mu, d2 / mu, d3 / mu], Side::B), q(lambda2, nu2), q(lambda3, nu3)];

    let fd = bialg.fusion_data();
    let mut total = vec![Complex64::new(0.0, 0.0); 3];
    for (i, qi) in projections.iter().enumerate() {
        for (j, qj) in projections.iter().enumerate() {
            let prod = fusion_product(fd, &qi.coeffs, &qj.coeffs);
            let target = if i == j { qi.coeffs.clone() } else { vec![Complex64::new(0.0, 0.0); 3] };
            let err = prod.iter().zip(&target).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            let scale = qi.max_abs() * qj.max_abs() * fd.max_entry().max(1.0);
            if err > 1e-8 * scale.max(1e-300) {
                return Err(Error::DegenerateSpectrum(format!("Q{}·Q{} defect {err:e}", i + 1, j + 1)));
            }
        }
        total.iter_mut().zip(&qi.coeffs).for_each(|(t, c)| *t += c);
    }
    let unit_err = (total[0] - 1.0).norm() + total[1].norm() + total[2].norm();
    if unit_err > 1e-8 * (1.0 + projections.iter().map(|p| p.max_abs()).fold(0.0, f64::max)) {
        return Err(Error::DegenerateSpectrum(format!("Q1+Q2+Q3 differs from 1 by {unit_err:e}")));
    }
    Ok(Rank3DualData { lambda2, lambda3, nu2, nu3, projections })
}

/// Outcome of the dual Schur test on the rank-3 family.
#[derive(Debug, Clone, Serialize)]
pub struct DualSchurReport {
    /// `min_{i,j,k} d(𝔉^{-1}(Q_i) ⋄ 𝔉^{-1}(Q_j) ⋄ 𝔉^{-1}(Q_k))`.
    pub min_value: f64,
    /// Minimising triple (1-based).
    pub worst_triple: (usize, usize, usize),
    /// The minimum relative to the sum of absolute terms of its triple.
    pub relative_min: f64,
    /// Every triple is `≥ −10⁻⁹ ×` its absolute term sum.
    pub holds: bool,
}

/// Evaluates `d(𝔉^{-1}(Q_i) ⋄ 𝔉^{-1}(Q_j) ⋄ 𝔉^{-1}(Q_k)) = Σ_l q_{il} q_{jl} q_{kl} / d_l`
/// over all triples.
pub fn rank3_dual_schur(params: &Rank3Type1Params) -> Result<DualSchurReport> {
    let data = rank3_dual_data(params)?;
    let d = [1.0, params.d2, params.d3];
    let q: Vec<[f64; 3]> = data.projections.iter().map(|p| [p.coeffs[0].re, p.coeffs[1].re, p.coeffs[2].re]).collect();
    let mut best = (f64::INFINITY, (0, 0, 0), f64::INFINITY);
    let mut holds = true;
    for i in 0..3 {
        for j in i..3 {
            for k in j..3 {
                let terms = (0..3).map(|l| q[i][l] * q[j][l] * q[k][l] / d[l]);
                let value: f64 = terms.clone().sum();
                let scale: f64 = terms.map(f64::abs).sum();
                let rel = if scale > 0.0 { value / scale } else { 0.0 };
                if rel < -DUAL_TOL {
                    holds = false;
                }
                if value < best.0 {
                    best = (value, (i + 1, j + 1, k + 1), rel);
                }
            }
        }
    }
    Ok(DualSchurReport { min_value: best.0, worst_triple: best.1, relative_min: best.2, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::schur_survey;
    use crate::ring_core::{are_isomorphic, cyclic_group_ring, verify_axioms};
    use crate::spectral::{character_table, dual_projections};

    #[test]
    fn rank2_closed_form() {
        let b = rank2_family(4.0).unwrap();
        let d2 = 3f64.sqrt();
        assert!((b.fusion_data().get(1, 1, 1) - 2.0 / d2).abs() < 1e-15);
        assert!((b.dims()[1] - d2).abs() < 1e-15);
        assert!(verify_axioms(b.fusion_data(), 1e-12).all_pass());
        // μ = 2 is ℤ/2.
        let z2 = rank2_family(2.0).unwrap();
        let exact = FusionData::new(&z2.fusion_data().fusion_matrices(), Mode::Exact).unwrap();
        assert!(are_isomorphic(&exact, &cyclic_group_ring(2)).unwrap().is_some());
        assert!(matches!(rank2_family(1.5), Err(Error::InfeasibleParams(_))));
    }

    #[test]
    fn rank3_type2_closed_form() {
        let b = rank3_type2(9.0).unwrap();
        assert_eq!(b.dims(), &[1.0, 2.0, 2.0]);
        assert!((b.fusion_data().get(1, 1, 1) - 0.75).abs() < 1e-15);
        assert!((b.fusion_data().get(1, 1, 2) - 1.25).abs() < 1e-15);
        assert!(verify_axioms(b.fusion_data(), 1e-12).all_pass());
        let z3 = rank3_type2(3.0).unwrap();
        assert_eq!(z3.dims(), &[1.0, 1.0, 1.0]);
        assert!((fp_dimensions(z3.fusion_data()).unwrap()[1] - 1.0).abs() < 1e-12);
        assert!(matches!(rank3_type2(2.0), Err(Error::InfeasibleParams(_))));
    }

    #[test]
    fn integer_points_are_fusion_rings() {
        for (m, n, q) in [(0.0, 1.0, 0.0), (0.0, 1.0, 1.0), (0.0, 1.0, 2.0), (1.0, 1.0, 1.0)] {
            let p = Rank3Type1Params::from_mnq(m, n, q).unwrap();
            let b = rank3_type1(&p).unwrap();
            assert!(verify_axioms(b.fusion_data(), 1e-9).all_pass(), "({m},{n},{q})");
            let fd = b.fusion_data();
            for (j, k, s, want) in [(1, 2, 1, m), (1, 2, 2, n), (2, 2, 2, q)] {
                assert!((fd.get(j, k, s) - want).abs() < 1e-9, "({m},{n},{q}) N[{j}][{k}][{s}]");
            }
            // Dimensions recomputed from the tensor agree with the closed form.
            let fresh = FusionData::new(&fd.fusion_matrices(), Mode::Float).unwrap();
            let d = fp_dimensions(&fresh).unwrap();
            assert!((d[1] - p.d2).abs() < 1e-9 && (d[2] - p.d3).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_parameters_are_rejected() {
        assert!(matches!(Rank3Type1Params::new(1.0, 3.0, 0.5), Err(Error::InfeasibleParams(_))));
        assert!(matches!(Rank3Type1Params::new(2.0, 2.0, 1.5), Err(Error::InfeasibleParams(_))));
        assert!(matches!(Rank3Type1Params::new(0.5, 2.0, 0.0), Err(Error::InfeasibleParams(_))));
    }

    #[test]
    fn dual_data_quadratic_relations() {
        let p = Rank3Type1Params::new(1000.0, 500.0, 0.750001).unwrap();
        let data = rank3_dual_data(&p).unwrap();
        let b = p.b();
        let sum = p.a * p.d3 * p.d3 - b * p.d2 * p.d2 + 1.0;
        assert!((data.lambda2 + data.lambda3 - sum).abs() < 1e-8 * sum.abs());
        assert!((data.lambda2 * data.lambda3 + b * p.d2 * p.d2).abs() < 1e-8 * b * p.d2 * p.d2);
        // λ_2 is the branch that grows like −b² d_2².
        assert!(data.lambda2 < 0.0 && data.lambda3 > 0.0);
    }

    #[test]
    fn dual_data_b_zero_branch() {
        // a = 1 needs d2² − 1 ≥ d3²; take d2 = 3, d3 = 2.
        let p = Rank3Type1Params::new(3.0, 2.0, 1.0).unwrap();
        let data = rank3_dual_data(&p).unwrap();
        assert!((data.lambda2 - (p.d3 * p.d3 + 1.0)).abs() < 1e-12);
        assert_eq!(data.lambda3, 0.0);
    }

    #[test]
    fn dual_data_matches_generic_projections() {
        // (m,n,q) = (0,1,1) is Rep(S3); the closed-form Q's are the generic dual projections.
        let p = Rank3Type1Params::from_mnq(0.0, 1.0, 1.0).unwrap();
        let data = rank3_dual_data(&p).unwrap();
        let fd = rank3_type1(&p).unwrap().fusion_data().clone();
        let ct = character_table(&fd, 1e-9).unwrap();
        let generic = dual_projections(&fd, &ct).unwrap();
        for q in &data.projections {
            let hit = generic.iter().any(|g| g.coeffs.iter().zip(&q.coeffs).all(|(a, b)| (a - b).norm() < 1e-9));
            assert!(hit, "{q:?}");
        }
    }

    #[test]
    fn counterexample_point_fails() {
        let p = Rank3Type1Params::new(1000.0, 500.0, 0.750001).unwrap();
        let r = rank3_dual_schur(&p).unwrap();
        assert!(r.min_value < 0.0 && !r.holds);
        // The cube of ν_2 Q_2 already has negative dimension.
        let data = rank3_dual_data(&p).unwrap();
        let l = data.lambda2;
        let cube = 1.0 - (l / p.d2).powi(3) / p.d2 - ((1.0 - l) / p.d3).powi(3) / p.d3;
        assert!(cube < 0.0);
    }

    #[test]
    fn asymptotic_trend() {
        let a: f64 = 0.75;
        let b = 1.0 - a;
        let limit = b.powi(6) - b.powi(4);
        let mut prev_gap = f64::INFINITY;
        for d2 in [1e2, 1e3, 1e4] {
            let d3 = (1.0 + b * d2 * d2).sqrt();
            let p = Rank3Type1Params::new(d2, d3, a).unwrap();
            let data = rank3_dual_data(&p).unwrap();
            let l = data.lambda2;
            let cube = 1.0 - (l / d2).powi(3) / d2 - ((1.0 - l) / d3).powi(3) / d3;
            let scaled = cube / (d2 * d2);
            let gap = (scaled - limit).abs();
            assert!(gap < prev_gap, "d2={d2}: {scaled} vs {limit}");
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-3);
    }

    #[test]
    fn categorifiable_point_holds() {
        let p = Rank3Type1Params::from_mnq(0.0, 1.0, 1.0).unwrap();
        assert!(rank3_dual_schur(&p).unwrap().holds);
    }

    #[test]
    fn agrees_with_character_table_criterion_on_grid() {
        let mut checked = 0;
        let mut decisive = 0;
        for i in 0..20 {
            for j in 0..20 {
                for ai in 0..5 {
                    let d2 = 1.0 + 0.5 * i as f64;
                    let d3 = 1.0 + 0.5 * j as f64;
                    let a = ai as f64 / 4.0;
                    let Ok(p) = Rank3Type1Params::new(d2, d3, a) else { continue };
                    let dual = rank3_dual_schur(&p).unwrap();
                    let fd = rank3_type1(&p).unwrap().fusion_data().clone();
                    let ct = character_table(&fd, 1e-9).unwrap();
                    let survey = schur_survey(&ct, 1e-9 * (1.0 + p.mu()));
                    checked += 1;
                    // Both are positive multiples of the same triple sums.
                    assert_eq!(dual.holds, survey.holds, "({d2},{d3},{a}): {dual:?} vs {}", survey.worst_value);
                    if dual.relative_min.abs() > 1e-6 {
                        decisive += 1;
                        assert_eq!(dual.min_value >= 0.0, survey.worst_value >= 0.0, "({d2},{d3},{a})");
                    }
                }
            }
        }
        assert!(checked > 300 && decisive > 50, "checked {checked}, decisive {decisive}");
    }
}
