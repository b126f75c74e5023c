//! Upper bounds on fusion coefficients in terms of dimensions.
//!
//! For any fusion ring:
//! 1. `Σ_ℓ (N_{j,k}^ℓ)² ≤ min(d_j², d_k²)`;
//! 2. `N_{j,k}^ℓ ≤ d_ℓ d_j^{(2−t)/t} d_k^{(t−2)/t}` for every `t ≥ 1`, whose
//!    infimum over `t` is `d_ℓ·min(d_j,d_k)/max(d_j,d_k)`;
//! 3. `N_{j,k}^ℓ ≤ min(d_j, d_k, d_ℓ)`;
//! 4. `Σ_s N_{j1,j2}^s N_{j3,j4}^s ≤ d_a d_b` for every pair of distinct
//!    positions `a ≠ b` among the four indices.

use serde::Serialize;

use super::data::FusionData;
use super::dims::fp_dimensions;
use crate::error::Result;

/// Tightest slack of one inequality family (`rhs − lhs`, minimised).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSlack {
    /// Minimum of `rhs − lhs` over all instances.
    pub slack: f64,
    /// Index tuple (1-based) attaining the minimum.
    pub at: Vec<usize>,
    /// Number of instances with `lhs > rhs` beyond tolerance.
    pub violations: usize,
}

impl BoundSlack {
    fn new() -> Self {
        BoundSlack { slack: f64::INFINITY, at: Vec::new(), violations: 0 }
    }

    fn record(&mut self, lhs: f64, rhs: f64, at: &[usize]) {
        let s = rhs - lhs;
        if s < -1e-9 * rhs.abs().max(1.0) {
            self.violations += 1;
        }
        if s < self.slack {
            self.slack = s;
            self.at = at.iter().map(|i| i + 1).collect();
        }
    }
}

/// Report on the four coefficient inequalities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    /// Inequality (1).
    pub sum_of_squares: BoundSlack,
    /// Inequality (2), at the infimum over `t`.
    pub ratio: BoundSlack,
    /// Inequality (3).
    pub min_dim: BoundSlack,
    /// Inequality (4).
    pub pair_product: BoundSlack,
}

impl BoundsReport {
    /// Whether all four inequalities hold.
    pub fn holds(&self) -> bool {
        self.sum_of_squares.violations == 0
            && self.ratio.violations == 0
            && self.min_dim.violations == 0
            && self.pair_product.violations == 0
    }
}

/// Evaluates the four coefficient inequalities with the ring's own dimensions.
pub fn coefficient_bounds_report(fd: &FusionData) -> Result<BoundsReport> {
    let d = fp_dimensions(fd)?;
    coefficient_bounds_with_dims(fd, &d)
}

/// Evaluates the inequalities with caller-supplied dimensions (e.g. wrong ones).
pub fn coefficient_bounds_with_dims(fd: &FusionData, d: &[f64]) -> Result<BoundsReport> {
    let m = fd.rank();
    let mut r1 = BoundSlack::new();
    let mut r2 = BoundSlack::new();
    let mut r3 = BoundSlack::new();
    let mut r4 = BoundSlack::new();
    for j in 0..m {
        for k in 0..m {
            let sq: f64 = (0..m).map(|l| fd.get(j, k, l).powi(2)).sum();
            r1.record(sq, d[j].min(d[k]).powi(2), &[j, k]);
            for l in 0..m {
                let n = fd.get(j, k, l);
                r2.record(n, d[l] * d[j].min(d[k]) / d[j].max(d[k]), &[j, k, l]);
                r3.record(n, d[j].min(d[k]).min(d[l]), &[j, k, l]);
            }
        }
    }
    for j1 in 0..m {
        for j2 in 0..m {
            for j3 in 0..m {
                for j4 in 0..m {
                    let lhs: f64 = (0..m).map(|s| fd.get(j1, j2, s) * fd.get(j3, j4, s)).sum();
                    let ds = [d[j1], d[j2], d[j3], d[j4]];
                    let mut rhs = f64::INFINITY;
                    for a in 0..4 {
                        for b in (a + 1)..4 {
                            rhs = rhs.min(ds[a] * ds[b]);
                        }
                    }
                    r4.record(lhs, rhs, &[j1, j2, j3, j4]);
                }
            }
        }
    }
    Ok(BoundsReport { sum_of_squares: r1, ratio: r2, min_dim: r3, pair_product: r4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::data::Tensor;

    #[test]
    fn trivial_ring_tight() {
        let fd = FusionData::from_int_matrices(&[vec![vec![1]]]).unwrap();
        let rep = coefficient_bounds_report(&fd).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.min_dim.slack, 0.0);
    }

    #[test]
    fn overweight_coefficient_violates_min_dim() {
        // Rep(S3) with N[3][3][3] raised from 1 to d₃ + 1 = 3, judged with the true dims.
        let fd = FusionData::from_int_matrices(&[
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
        ])
        .unwrap();
        let d = fp_dimensions(&fd).unwrap();
        let Tensor::Integer(mut t) = fd.tensor().clone() else { unreachable!() };
        t[(2 * 3 + 2) * 3 + 2] = 3;
        let bad = FusionData::from_tensor(3, Tensor::Integer(t)).unwrap();
        let rep = coefficient_bounds_with_dims(&bad, &d).unwrap();
        assert!(rep.min_dim.violations > 0);
        assert!(!rep.holds());
    }
}
