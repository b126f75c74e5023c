//! Character tables of commutative fusion rings, the minimal projections of
//! the dual algebra and its structure constants.
//!
//! For a commutative ring the fusion matrices `M_i` are normal (`M_i^T = M_{i*}`)
//! and commute, so they are simultaneously unitarily diagonalisable. A joint
//! eigenbasis `v_1, …, v_m` gives the characters `χ_j(x_i) = λ_{i,j}` with
//! `M_i v_j = λ_{i,j} v_j`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring_core::{fp_dimensions, FusionData};

/// Default validation tolerance for eigenvector residuals.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Number of random combinations tried before giving up.
pub const MAX_REDRAWS: usize = 8;
/// Default seed of the random combination.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Character table `λ_{i,j} = χ_j(x_i)` of a commutative fusion ring.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    /// `lambda[i][j]`: row `i` = basis element, column `j` = character.
    pub lambda: Vec<Vec<Complex64>>,
    /// `column_order[j]` = index of column `j` among the raw eigenvectors.
    pub column_order: Vec<usize>,
    /// Max over `i, j` of `‖M_i v_j − λ_{i,j} v_j‖`.
    pub residual: f64,
    /// Unit-norm joint eigenvectors, one per column.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    /// Rank `m`.
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// `λ_{i,j}`.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.lambda[i][j]
    }

    /// Column holding the complex-conjugate character of column `j`.
    pub fn conjugate_column(&self, j: usize) -> usize {
        let m = self.rank();
        (0..m)
            .min_by(|&a, &b| {
                let da: f64 = (0..m).map(|i| (self.lambda[i][a] - self.lambda[i][j].conj()).norm()).sum();
                let db: f64 = (0..m).map(|i| (self.lambda[i][b] - self.lambda[i][j].conj()).norm()).sum();
                da.total_cmp(&db)
            })
            .unwrap_or(j)
    }

    /// CSV with one row per basis element and `re,im` pairs at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let m = self.rank();
        let mut out = String::from("row");
        for j in 1..=m {
            out.push_str(&format!(",re{j},im{j}"));
        }
        out.push('\n');
        for i in 0..m {
            out.push_str(&format!("{}", i + 1));
            for j in 0..m {
                let z = self.lambda[i][j];
                out.push_str(&format!(",{:.11e},{:.11e}", clean(z.re), clean(z.im)));
            }
            out.push('\n');
        }
        out
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-13 { 0.0 } else { x }
}

/// Character table with the default seed.
pub fn character_table(fd: &FusionData, tol: f64) -> Result<CharacterTable> {
    character_table_seeded(fd, tol, DEFAULT_SEED)
}

/// Character table from a seeded random Hermitian combination of the fusion matrices.
///
/// With `γ_i` drawn from the unit disk, `H = Σ_i (γ_i M_i + conj(γ_i) M_i^T)` is
/// Hermitian, commutes with every `M_i`, and acts on `v_j` by `2 Re Σ_i γ_i λ_{i,j}`;
/// for generic `γ` these values separate the characters, so the eigenvectors of
/// `H` are joint eigenvectors. A draw is accepted when every `M_i` is diagonalised
/// within `tol`; otherwise up to [`MAX_REDRAWS`] fresh draws are tried.
pub fn character_table_seeded(fd: &FusionData, tol: f64, seed: u64) -> Result<CharacterTable> {
    if !fd.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let m = fd.rank();
    let mats: Vec<DMatrix<Complex64>> = (0..m).map(|i| complex_matrix(fd, i)).collect();
    let d = fp_dimensions(fd)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..MAX_REDRAWS {
        let mut h = DMatrix::<Complex64>::zeros(m, m);
        for mi in &mats {
            let gamma = sample_unit_disk(&mut rng);
            h += mi * gamma + mi.transpose() * gamma.conj();
        }
        let eig = SymmetricEigen::new(h);
        let vecs: Vec<DVector<Complex64>> = (0..m).map(|j| fix_phase(eig.eigenvectors.column(j).into_owned())).collect();
        let lambda_raw: Vec<Vec<Complex64>> = mats
            .iter()
            .map(|mi| vecs.iter().map(|v| v.dotc(&(mi * v))).collect())
            .collect();
        let residual = residual_of(&mats, &vecs, &lambda_raw);
        best = best.min(residual);
        if residual > tol {
            continue;
        }
        let order = column_order(&lambda_raw, &d);
        let lambda = (0..m).map(|i| order.iter().map(|&j| lambda_raw[i][j]).collect()).collect();
        let perron = order[0];
        if (0..m).any(|i| (lambda_raw[i][perron] - Complex64::new(d[i], 0.0)).norm() > 1e-8 * (1.0 + d[i])) {
            continue;
        }
        let eigenvectors = order.iter().map(|&j| vecs[j].iter().copied().collect()).collect();
        return Ok(CharacterTable { lambda, column_order: order, residual, eigenvectors });
    }
    Err(Error::DegenerateSpectrum(format!(
        "joint eigenbasis residual {best:e} above {tol:e} after {MAX_REDRAWS} draws"
    )))
}

fn complex_matrix(fd: &FusionData, i: usize) -> DMatrix<Complex64> {
    let m = fd.rank();
    DMatrix::from_fn(m, m, |k, s| Complex64::new(fd.get(i, k, s), 0.0))
}

fn sample_unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 && z.norm_sqr() > 1e-4 {
            return z;
        }
    }
}

/// Normalises and rotates `v` so that its largest-magnitude component is real positive.
fn fix_phase(v: DVector<Complex64>) -> DVector<Complex64> {
    let norm = v.norm();
    let (_, big) = v.iter().fold((0.0, Complex64::new(1.0, 0.0)), |acc, z| {
        if z.norm() > acc.0 + 1e-12 { (z.norm(), *z) } else { acc }
    });
    let phase = big.conj() / big.norm();
    v * (phase / norm)
}

fn residual_of(mats: &[DMatrix<Complex64>], vecs: &[DVector<Complex64>], lambda: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, mi) in mats.iter().enumerate() {
        for (j, v) in vecs.iter().enumerate() {
            worst = worst.max((mi * v - v * lambda[i][j]).norm());
        }
    }
    worst
}

/// Perron column first (closest to the dimension vector), the rest ordered
/// lexicographically by `(Re λ_{2,j}, Re λ_{3,j}, …)` rounded to 1e−6, then by
/// the imaginary parts.
fn column_order(lambda: &[Vec<Complex64>], d: &[f64]) -> Vec<usize> {
    let m = d.len();
    let dist = |j: usize| -> f64 { (0..m).map(|i| (lambda[i][j] - Complex64::new(d[i], 0.0)).norm()).sum() };
    let perron = (0..m).min_by(|&a, &b| dist(a).total_cmp(&dist(b))).unwrap_or(0);
    let key = |j: usize| -> Vec<i64> {
        let re = (1..m).map(|i| (lambda[i][j].re * 1e6).round() as i64);
        let im = (1..m).map(|i| (lambda[i][j].im * 1e6).round() as i64);
        re.chain(im).collect()
    };
    let mut rest: Vec<usize> = (0..m).filter(|&j| j != perron).collect();
    rest.sort_by_key(|&j| key(j));
    let mut order = vec![perron];
    order.extend(rest);
    order
}

/// Recomputes `max_{i,j} ‖M_i v_j − λ_{i,j} v_j‖` for a given table.
pub fn verify_character_table(fd: &FusionData, ct: &CharacterTable) -> f64 {
    let m = fd.rank();
    if ct.rank() != m {
        return f64::INFINITY;
    }
    let mats: Vec<DMatrix<Complex64>> = (0..m).map(|i| complex_matrix(fd, i)).collect();
    let vecs: Vec<DVector<Complex64>> = ct.eigenvectors.iter().map(|v| DVector::from_column_slice(v)).collect();
    residual_of(&mats, &vecs, &ct.lambda)
}

/// Minimal projection of the dual algebra attached to one character.
#[derive(Debug, Clone, Serialize)]
pub struct DualProjection {
    /// Column index of the character.
    pub index: usize,
    /// Coefficients on the basis `{x_k}`.
    pub coeffs: Vec<Complex64>,
    /// `τ(P_j)`, the `x_1` coefficient.
    pub trace: f64,
    /// Positive factor `c_j` removed so that `P_j² = P_j`.
    pub normalization: f64,
}

/// Product in the fusion algebra: `(Σ a_j x_j)(Σ b_k x_k) = Σ a_j b_k N_{j,k}^s x_s`.
pub(crate) fn fusion_product(fd: &FusionData, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let m = fd.rank();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..m {
        if a[j] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for k in 0..m {
            let ab = a[j] * b[k];
            for (s, o) in out.iter_mut().enumerate() {
                let n = fd.get(j, k, s);
                if n != 0.0 {
                    *o += ab * n;
                }
            }
        }
    }
    out
}

/// Minimal projections `P_j = c_j^{-1} Σ_k χ_j(x_k) x_{k*}` of the fusion algebra,
/// where `c_j` is forced by idempotency (`c_j = Σ_k |χ_j(x_k)|²`).
pub fn dual_projections(fd: &FusionData, ct: &CharacterTable) -> Result<Vec<DualProjection>> {
    if !fd.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let m = fd.rank();
    let dual = fd.dual();
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let mut p = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..m {
            p[dual[k]] += ct.lambda[k][j];
        }
        let p2 = fusion_product(fd, &p, &p);
        let pp: f64 = p.iter().map(|z| z.norm_sqr()).sum();
        let c: Complex64 = p2.iter().zip(&p).map(|(a, b)| b.conj() * a).sum::<Complex64>() / pp;
        let defect: f64 = p2.iter().zip(&p).map(|(a, b)| (a - b * c).norm_sqr()).sum::<f64>().sqrt();
        let scale = p2.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
        if c.re <= 0.0 || c.im.abs() > 1e-8 * c.norm() || defect > 1e-8 * scale {
            return Err(Error::NormalizationFailure { index: j });
        }
        let coeffs: Vec<Complex64> = p.iter().map(|z| z / c.re).collect();
        out.push(DualProjection { index: j, trace: coeffs[0].re, coeffs, normalization: c.re });
    }
    // Partition of unity.
    for k in 0..m {
        let s: Complex64 = out.iter().map(|p| p.coeffs[k]).sum();
        let target = if k == 0 { 1.0 } else { 0.0 };
        if (s - target).norm() > 1e-8 {
            return Err(Error::NormalizationFailure { index: k });
        }
    }
    Ok(out)
}

/// The dual convolution `x ∗_ℬ y = Σ_j a_j b_j d_j^{-1} x_j`.
pub(crate) fn dual_convolution(d: &[f64], a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).zip(d).map(|((x, y), dj)| x * y / dj).collect()
}

/// Structure constants `N̂_{j,k}^s` of `P_j ∗_ℬ P_k = Σ_s N̂_{j,k}^s P_s`, flattened as
/// `(j·m + k)·m + s`. Obtained by applying `χ_s` (which sends `P_t` to `δ_{s,t}`).
pub fn dual_fusion_coefficients(fd: &FusionData, ct: &CharacterTable) -> Result<Vec<f64>> {
    let projections = dual_projections(fd, ct)?;
    let d = fp_dimensions(fd)?;
    let m = fd.rank();
    let mut out = vec![0.0; m * m * m];
    for j in 0..m {
        for k in 0..m {
            let conv = dual_convolution(&d, &projections[j].coeffs, &projections[k].coeffs);
            for s in 0..m {
                let value: Complex64 = (0..m).map(|i| conv[i] * ct.lambda[i][s]).sum();
                out[(j * m + k) * m + s] = value.re;
            }
        }
    }
    Ok(out)
}
