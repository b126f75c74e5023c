//! Categorification obstructions built on the dual Schur product property.
//!
//! For a commutative fusion ring the property on the dual is equivalent to
//! `Σ_i λ_{i,j1} λ_{i,j2} λ_{i,j3} / λ_{i,1} ≥ 0` for every triple of
//! characters. For a general ring a necessary condition is
//! `Σ_i d_i^{-1} Π_{s=1..3} (u_s^* M_i u_s) ≥ 0` for all vectors `u_s` lying in
//! irreducible representations; random sampling can only falsify it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::Result;
use crate::ring_core::{
    coefficient_bounds_report, fp_dimensions, global_fpdim, is_frobenius_type, is_integral, is_perfect, is_simple,
    type_signature, BoundsReport, FusionData, INTEGER_TOL,
};
use crate::spectral::{character_table, CharacterTable, RESIDUAL_TOL};

/// Default decision tolerance `1e−9·(1+μ)`.
pub fn default_tolerance(mu: f64) -> f64 {
    1e-9 * (1.0 + mu)
}

/// `Σ_i λ_{i,j1} λ_{i,j2} λ_{i,j3} / λ_{i,1}` (0-based column indices).
pub fn schur_triple_sum(ct: &CharacterTable, j1: usize, j2: usize, j3: usize) -> Complex64 {
    (0..ct.rank())
        .map(|i| ct.lambda[i][j1] * ct.lambda[i][j2] * ct.lambda[i][j3] / ct.lambda[i][0].re)
        .sum()
}

/// Fraction of the tolerance treated as floating-point noise around an exact zero.
pub const ROUNDING_FLOOR: f64 = 1e-3;

/// Outcome class of a Schur scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchurVerdict {
    /// Every triple sum is `≥ 0` up to rounding noise (`ROUNDING_FLOOR·tol`).
    Holds,
    /// The worst value lies in `[−tol, −ROUNDING_FLOOR·tol)`: numerically inconclusive.
    Inconclusive,
    /// Some triple sum is `< −tol`.
    Fails,
}

/// Result of the commutative Schur criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurReport {
    /// `worst_value ≥ −tolerance`.
    pub holds: bool,
    /// Finer classification of the worst value.
    pub verdict: SchurVerdict,
    /// 0-based columns attaining the minimum.
    pub worst_triple: (usize, usize, usize),
    /// Minimum real part over all triples.
    pub worst_value: f64,
    /// Largest imaginary part seen (diagnostic).
    pub max_imaginary: f64,
    /// Real parts for every sorted triple `j1 ≤ j2 ≤ j3`, when requested.
    pub all_sums: Option<Vec<((usize, usize, usize), f64)>>,
    /// Tolerance used.
    pub tolerance: f64,
}

/// Scans all triples `j1 ≤ j2 ≤ j3` and reports the minimum.
pub fn schur_commutative(ct: &CharacterTable, tol: f64) -> SchurReport {
    scan(ct, tol, false, false)
}

/// Like [`schur_commutative`] but also records every triple sum.
pub fn schur_survey(ct: &CharacterTable, tol: f64) -> SchurReport {
    scan(ct, tol, true, false)
}

/// Boolean decision with early exit on the first decisive negative.
pub fn schur_decide(ct: &CharacterTable, tol: f64) -> bool {
    scan(ct, tol, false, true).holds
}

fn scan(ct: &CharacterTable, tol: f64, keep: bool, early_exit: bool) -> SchurReport {
    let m = ct.rank();
    let mut worst = f64::INFINITY;
    let mut at = (0, 0, 0);
    let mut max_im: f64 = 0.0;
    let mut sums = keep.then(Vec::new);
    'outer: for j1 in 0..m {
        for j2 in j1..m {
            for j3 in j2..m {
                let z = schur_triple_sum(ct, j1, j2, j3);
                max_im = max_im.max(z.im.abs());
                if let Some(s) = sums.as_mut() {
                    s.push(((j1, j2, j3), z.re));
                }
                if z.re < worst {
                    worst = z.re;
                    at = (j1, j2, j3);
                }
                if early_exit && worst < -tol {
                    break 'outer;
                }
            }
        }
    }
    let verdict = if worst >= -ROUNDING_FLOOR * tol {
        SchurVerdict::Holds
    } else if worst >= -tol {
        SchurVerdict::Inconclusive
    } else {
        SchurVerdict::Fails
    };
    SchurReport {
        holds: worst >= -tol,
        verdict,
        worst_triple: at,
        worst_value: worst,
        max_imaginary: max_im,
        all_sums: sums,
        tolerance: tol,
    }
}

/// A triple of vectors on which the sampled Schur sum is negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurWitness {
    /// The three unit vectors.
    pub u: [Vec<Complex64>; 3],
    /// `Σ_i d_i^{-1} Π_s (u_s^* M_i u_s)` (real part).
    pub value: f64,
    /// Index of the sample that produced the witness (targeted samples first).
    pub sample: usize,
}

/// `Σ_i d_i^{-1} Π_{s} (u_s^* M_i u_s)`. The value is real up to rounding because
/// `conj(u^* M_i u) = u^* M_{i*} u`.
pub fn noncommutative_schur_value(fd: &FusionData, d: &[f64], u: &[Vec<Complex64>; 3]) -> Complex64 {
    let m = fd.rank();
    let mut total = Complex64::new(0.0, 0.0);
    for (i, di) in d.iter().enumerate() {
        let mut prod = Complex64::new(1.0, 0.0);
        for v in u {
            let mut q = Complex64::new(0.0, 0.0);
            for k in 0..m {
                let mut row = Complex64::new(0.0, 0.0);
                for s in 0..m {
                    let n = fd.get(i, k, s);
                    if n != 0.0 {
                        row += v[s] * n;
                    }
                }
                q += v[k].conj() * row;
            }
            prod *= q;
        }
        total += prod / di;
    }
    total
}

fn gauss(m: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    normalize((0..m).map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect())
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    v
}

/// Searches for a witness that the Schur property fails on the dual.
///
/// Commutative rings are first probed at every triple of joint eigenvectors
/// (where the sum equals the character triple sum) and at small random
/// perturbations of them; the remaining budget goes to complex Gaussian
/// vectors. `None` only means no counterexample was found in `num_samples`
/// samples; it is not a proof that the property holds.
pub fn schur_noncommutative_falsify(fd: &FusionData, num_samples: usize, seed: u64) -> Result<Option<SchurWitness>> {
    let m = fd.rank();
    let d = fp_dimensions(fd)?;
    let tol = default_tolerance(d.iter().map(|x| x * x).sum());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targets: Vec<Vec<Complex64>> = if fd.is_commutative() {
        character_table(fd, RESIDUAL_TOL).map(|ct| ct.eigenvectors).unwrap_or_default()
    } else {
        Vec::new()
    };
    let mut sample = 0;
    let try_triple = |u: [Vec<Complex64>; 3], sample: usize| -> Option<SchurWitness> {
        let value = noncommutative_schur_value(fd, &d, &u).re;
        (value < -tol).then_some(SchurWitness { u, value, sample })
    };
    // Exact eigenvector triples.
    'targets: for a in 0..targets.len() {
        for b in a..targets.len() {
            for c in b..targets.len() {
                if sample >= num_samples {
                    break 'targets;
                }
                let u = [targets[a].clone(), targets[b].clone(), targets[c].clone()];
                if let Some(w) = try_triple(u, sample) {
                    return Ok(Some(w));
                }
                sample += 1;
            }
        }
    }
    while sample < num_samples {
        let u = if !targets.is_empty() && sample % 2 == 0 {
            let pick = |rng: &mut ChaCha8Rng| {
                let t = &targets[rng.gen_range(0..targets.len())];
                let noise = gauss(m, rng);
                normalize(t.iter().zip(noise).map(|(x, e)| x + e * 0.05).collect())
            };
            [pick(&mut rng), pick(&mut rng), pick(&mut rng)]
        } else {
            [gauss(m, &mut rng), gauss(m, &mut rng), gauss(m, &mut rng)]
        };
        if let Some(w) = try_triple(u, sample) {
            return Ok(Some(w));
        }
        sample += 1;
    }
    Ok(None)
}

/// Bundle of predicates, the Schur result and coefficient-bound slacks for one ring.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    /// Label, if any.
    pub label: Option<String>,
    /// Rank.
    pub rank: usize,
    /// Global FP dimension.
    pub fpdim: f64,
    /// Type string (or the non-integral dimensions).
    pub ring_type: String,
    /// No proper fusion subring.
    pub simple: bool,
    /// Only the unit has dimension 1.
    pub perfect: bool,
    /// Integer dimensions.
    pub integral: bool,
    /// Every dimension divides the FP dimension (`None` when not integral).
    pub frobenius_type: Option<bool>,
    /// Commutative multiplication.
    pub commutative: bool,
    /// Commutative Schur criterion (commutative rings only).
    pub schur: Option<SchurReport>,
    /// Coefficient inequalities.
    pub bounds: BoundsReport,
}

/// Computes every predicate, the Schur criterion and the coefficient bounds.
pub fn obstruction_report(fd: &FusionData) -> Result<ObstructionReport> {
    let mu = global_fpdim(fd)?;
    let integral = is_integral(fd, INTEGER_TOL)?;
    let commutative = fd.is_commutative();
    let schur = if commutative {
        let ct = character_table(fd, RESIDUAL_TOL)?;
        Some(schur_commutative(&ct, default_tolerance(mu)))
    } else {
        None
    };
    Ok(ObstructionReport {
        label: fd.label().map(str::to_string),
        rank: fd.rank(),
        fpdim: mu,
        ring_type: type_signature(fd, INTEGER_TOL)?.to_string(),
        simple: is_simple(fd),
        perfect: is_perfect(fd)?,
        integral,
        frobenius_type: if integral { Some(is_frobenius_type(fd)?) } else { None },
        commutative,
        schur,
        bounds: coefficient_bounds_report(fd)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::cyclic_group_ring;
    use proptest::prelude::*;

    fn rep_s3() -> FusionData {
        FusionData::from_int_matrices(&[
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
            vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
        ])
        .unwrap()
    }

    #[test]
    fn unit_triple_is_mu() {
        for fd in [rep_s3(), cyclic_group_ring(6)] {
            let ct = character_table(&fd, RESIDUAL_TOL).unwrap();
            let mu = global_fpdim(&fd).unwrap();
            assert!((schur_triple_sum(&ct, 0, 0, 0).re - mu).abs() < 1e-10);
        }
    }

    #[test]
    fn z3_nontrivial_triple_vanishes() {
        let fd = cyclic_group_ring(3);
        let ct = character_table(&fd, RESIDUAL_TOL).unwrap();
        // All dimensions are 1, so the sum is Σ_k χ_{j1}χ_{j2}χ_{j3}(g^k).
        for j1 in 0..3 {
            for j2 in 0..3 {
                for j3 in 0..3 {
                    let direct: Complex64 = (0..3).map(|i| ct.get(i, j1) * ct.get(i, j2) * ct.get(i, j3)).sum();
                    assert!((schur_triple_sum(&ct, j1, j2, j3) - direct).norm() < 1e-12);
                }
            }
        }
        let report = schur_commutative(&ct, default_tolerance(3.0));
        assert!(report.holds);
        assert_eq!(report.verdict, SchurVerdict::Holds);
        // χ·χ·1 is a nontrivial character for χ nontrivial: the sum vanishes.
        assert!(schur_triple_sum(&ct, 1, 1, 0).norm() < 1e-12);
        // χ³ is trivial: the sum is the group order.
        assert!((schur_triple_sum(&ct, 1, 1, 1).re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn group_rings_have_no_witness() {
        assert!(schur_noncommutative_falsify(&cyclic_group_ring(3), 2000, 7).unwrap().is_none());
        let trivial = cyclic_group_ring(1);
        assert!(schur_noncommutative_falsify(&trivial, 100, 1).unwrap().is_none());
        let u = [vec![Complex64::new(0.6, 0.0)], vec![Complex64::new(0.0, 2.0)], vec![Complex64::new(1.0, 1.0)]];
        let v = noncommutative_schur_value(&trivial, &[1.0], &u);
        assert!((v.re - 0.36 * 4.0 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn z4_report() {
        let r = obstruction_report(&cyclic_group_ring(4)).unwrap();
        assert!(!r.simple);
        assert!(r.commutative && r.integral && r.frobenius_type == Some(true));
        assert!(r.schur.unwrap().holds);
        assert!(r.bounds.holds());
    }

    #[test]
    fn early_exit_agrees() {
        let fd = rep_s3();
        let ct = character_table(&fd, RESIDUAL_TOL).unwrap();
        let full = schur_survey(&ct, 1e-9);
        assert_eq!(full.all_sums.as_ref().unwrap().len(), 10);
        assert_eq!(schur_decide(&ct, 1e-9), full.holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn triple_sum_symmetric(n in 2usize..8, a in 0usize..8, b in 0usize..8, c in 0usize..8) {
            let fd = cyclic_group_ring(n);
            let ct = character_table(&fd, RESIDUAL_TOL).unwrap();
            let (a, b, c) = (a % n, b % n, c % n);
            let base = schur_triple_sum(&ct, a, b, c);
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert!((schur_triple_sum(&ct, x, y, z) - base).norm() < 1e-10);
            }
            let conj = ct.conjugate_column(a);
            prop_assert!(schur_triple_sum(&ct, a, conj, 0).re >= -1e-12);
        }
    }
}
