//! Frobenius–Perron dimensions, types and dimension-based predicates.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::data::FusionData;
use crate::error::{Error, Result};

/// Convergence tolerance of the power iteration.
pub const POWER_TOL: f64 = 1e-12;
/// Iteration cap of the power iteration.
pub const POWER_MAX_ITER: usize = 100_000;
/// Default tolerance for recognising integer dimensions.
pub const INTEGER_TOL: f64 = 1e-6;

/// Frobenius–Perron dimensions `d(x_i)` (cached after the first call).
///
/// Because `M_i^T = M_{i*}` (Frobenius reciprocity), the matrix
/// `R = I + Σ_i M_i` is symmetric with strictly positive entries, and the
/// dimension vector is its Perron eigenvector normalised by `d_1 = 1`; each
/// `d_i` is then the spectral radius of `M_i` (`M_i d = d_i d`). The vector is
/// found by power iteration with a symmetric eigendecomposition as fallback,
/// and validated against the homomorphism identity `d_j d_k = Σ_s N_{j,k}^s d_s`.
pub fn fp_dimensions(fd: &FusionData) -> Result<Vec<f64>> {
    if let Some(d) = fd.fp_cache.get() {
        return Ok(d.clone());
    }
    let d = compute_fp_dimensions(fd)?;
    let _ = fd.fp_cache.set(d.clone());
    Ok(d)
}

fn compute_fp_dimensions(fd: &FusionData) -> Result<Vec<f64>> {
    let m = fd.rank();
    let mut r = DMatrix::<f64>::identity(m, m);
    for i in 0..m {
        for k in 0..m {
            for s in 0..m {
                r[(k, s)] += fd.get(i, k, s);
            }
        }
    }
    let mut v = power_iteration(&r).unwrap_or_else(|| symmetric_perron(&r));
    rayleigh_refine(&r, &mut v);
    if v[0] <= 0.0 {
        return Err(Error::ConvergenceFailure("Perron vector has nonpositive unit entry".into()));
    }
    let v0 = v[0];
    v.iter_mut().for_each(|x| *x /= v0);
    // Symmetrise under duality (exact in theory, removes rounding asymmetry).
    let dual = fd.dual();
    let d: Vec<f64> = (0..m).map(|i| 0.5 * (v[i] + v[dual[i]])).collect();
    let defect = homomorphism_defect(fd, &d);
    if defect > 1e-9 {
        return Err(Error::ConvergenceFailure(format!(
            "dimension homomorphism defect {defect:e} exceeds 1e-9"
        )));
    }
    Ok(d)
}

fn power_iteration(r: &DMatrix<f64>) -> Option<Vec<f64>> {
    let m = r.nrows();
    let mut v = nalgebra::DVector::<f64>::from_element(m, 1.0 / (m as f64).sqrt());
    for _ in 0..POWER_MAX_ITER {
        let mut w = r * &v;
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return None;
        }
        w /= norm;
        let diff = (&w - &v).amax();
        v = w;
        if diff < POWER_TOL {
            return Some(v.iter().copied().collect());
        }
    }
    None
}

/// Two steps of Rayleigh-quotient inverse iteration on the symmetric matrix `r`.
fn rayleigh_refine(r: &DMatrix<f64>, v: &mut [f64]) {
    let m = r.nrows();
    for _ in 0..2 {
        let x = nalgebra::DVector::from_column_slice(v);
        let lambda = x.dot(&(r * &x)) / x.dot(&x);
        let shifted = r - DMatrix::<f64>::identity(m, m) * lambda;
        let Some(w) = shifted.lu().solve(&x) else { return };
        let norm = w.norm();
        if !norm.is_finite() || norm == 0.0 {
            return;
        }
        let sign = if w.sum() < 0.0 { -1.0 } else { 1.0 };
        for (dst, src) in v.iter_mut().zip(w.iter()) {
            *dst = sign * src / norm;
        }
    }
}

fn symmetric_perron(r: &DMatrix<f64>) -> Vec<f64> {
    let eig = SymmetricEigen::new(r.clone());
    let (imax, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &l)| if l > acc.1 { (i, l) } else { acc });
    let col = eig.eigenvectors.column(imax);
    let sign = if col.sum() < 0.0 { -1.0 } else { 1.0 };
    col.iter().map(|x| sign * x).collect()
}

/// Largest relative defect `|d_j d_k − Σ_s N_{j,k}^s d_s| / (d_j d_k)`.
pub fn homomorphism_defect(fd: &FusionData, d: &[f64]) -> f64 {
    let m = fd.rank();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        for k in 0..m {
            let rhs: f64 = (0..m).map(|s| fd.get(j, k, s) * d[s]).sum();
            worst = worst.max((d[j] * d[k] - rhs).abs() / (d[j] * d[k]));
        }
    }
    worst
}

/// Global Frobenius–Perron dimension `μ = Σ_i d(x_i)²`.
pub fn global_fpdim(fd: &FusionData) -> Result<f64> {
    Ok(fp_dimensions(fd)?.iter().map(|d| d * d).sum())
}

/// Multiset of integer dimensions `[[n_i, m_i]]`, sorted ascending by `n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeSignature {
    /// `(n_i, m_i)` pairs.
    pub pairs: Vec<(u64, usize)>,
}

impl TypeSignature {
    /// Builds a signature from a list of dimensions (any order).
    pub fn from_dims(dims: &[u64]) -> Self {
        let mut sorted = dims.to_vec();
        sorted.sort_unstable();
        let mut pairs: Vec<(u64, usize)> = Vec::new();
        for n in sorted {
            match pairs.last_mut() {
                Some((last, c)) if *last == n => *c += 1,
                _ => pairs.push((n, 1)),
            }
        }
        TypeSignature { pairs }
    }

    /// Expanded sorted dimension list.
    pub fn dims(&self) -> Vec<u64> {
        self.pairs.iter().flat_map(|&(n, c)| std::iter::repeat_n(n, c)).collect()
    }

    /// Rank `Σ m_i`.
    pub fn rank(&self) -> usize {
        self.pairs.iter().map(|p| p.1).sum()
    }

    /// `Σ m_i n_i²`.
    pub fn fpdim(&self) -> u64 {
        self.pairs.iter().map(|&(n, c)| n * n * c as u64).sum()
    }

    /// Perfect: the only dimension-1 element is the unit.
    pub fn is_perfect(&self) -> bool {
        self.pairs.first() == Some(&(1, 1))
    }

    /// Parses `[[1,1],[3,2],…]`.
    pub fn parse(text: &str) -> Result<Self> {
        let err = || Error::Parse { line: 1, column: 1, message: format!("bad type string {text:?}") };
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = cleaned.strip_prefix("[[").and_then(|s| s.strip_suffix("]]")).ok_or_else(err)?;
        let mut pairs = Vec::new();
        for part in inner.split("],[") {
            let mut it = part.split(',');
            let n: u64 = it.next().and_then(|x| x.parse().ok()).ok_or_else(err)?;
            let c: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(err)?;
            if it.next().is_some() || c == 0 {
                return Err(err());
            }
            pairs.push((n, c));
        }
        Ok(TypeSignature { pairs })
    }
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (n, c)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{n},{c}]")?;
        }
        write!(f, "]")
    }
}

/// Type of a ring: integer signature, or the raw dimensions when some are not integers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RingType {
    /// All dimensions within tolerance of integers.
    Integral(TypeSignature),
    /// At least one dimension is not an integer.
    NonIntegral {
        /// The (sorted) dimensions.
        dims: Vec<f64>,
    },
}

impl RingType {
    /// The signature if integral.
    pub fn signature(&self) -> Option<&TypeSignature> {
        match self {
            RingType::Integral(t) => Some(t),
            RingType::NonIntegral { .. } => None,
        }
    }
}

impl fmt::Display for RingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingType::Integral(t) => write!(f, "{t}"),
            RingType::NonIntegral { dims } => {
                write!(f, "non-integral (")?;
                for (i, d) in dims.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{d:.6}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Rounds dimensions to integers when all are within `integer_tol`.
pub fn type_signature(fd: &FusionData, integer_tol: f64) -> Result<RingType> {
    let d = fp_dimensions(fd)?;
    let mut ints = Vec::with_capacity(d.len());
    for &x in &d {
        let r = x.round();
        if (x - r).abs() > integer_tol || r < 1.0 {
            let mut dims = d.clone();
            dims.sort_by(f64::total_cmp);
            return Ok(RingType::NonIntegral { dims });
        }
        ints.push(r as u64);
    }
    Ok(RingType::Integral(TypeSignature::from_dims(&ints)))
}

/// Whether all dimensions are integers within `tol`.
pub fn is_integral(fd: &FusionData, tol: f64) -> Result<bool> {
    Ok(matches!(type_signature(fd, tol)?, RingType::Integral(_)))
}

/// Perfect: exactly one basis element of dimension 1 (the unit).
pub fn is_perfect(fd: &FusionData) -> Result<bool> {
    let d = fp_dimensions(fd)?;
    Ok(d.iter().filter(|x| (*x - 1.0).abs() <= INTEGER_TOL).count() == 1)
}

/// Frobenius type (integral case): every `d_i` divides `μ`.
pub fn is_frobenius_type(fd: &FusionData) -> Result<bool> {
    let RingType::Integral(t) = type_signature(fd, INTEGER_TOL)? else {
        return Err(Error::NotIntegral);
    };
    let mu = t.fpdim();
    Ok(t.pairs.iter().all(|&(n, _)| mu % n == 0))
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
    fn group_ring_dims() {
        let fd = cyclic(6);
        let d = fp_dimensions(&fd).unwrap();
        assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!((global_fpdim(&fd).unwrap() - 6.0).abs() < 1e-10);
        assert_eq!(type_signature(&fd, INTEGER_TOL).unwrap().to_string(), "[[1,6]]");
        assert!(!is_perfect(&fd).unwrap());
    }

    #[test]
    fn trivial_ring_dims() {
        let fd = FusionData::from_int_matrices(&[vec![vec![1]]]).unwrap();
        assert_eq!(fp_dimensions(&fd).unwrap(), vec![1.0]);
        assert_eq!(global_fpdim(&fd).unwrap(), 1.0);
        assert_eq!(type_signature(&fd, INTEGER_TOL).unwrap().to_string(), "[[1,1]]");
    }

    #[test]
    fn fibonacci_is_non_integral() {
        let fd = FusionData::from_int_matrices(&[
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, 1], vec![1, 1]],
        ])
        .unwrap();
        let d = fp_dimensions(&fd).unwrap();
        assert!((d[1] - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(!is_integral(&fd, INTEGER_TOL).unwrap());
        assert_eq!(is_frobenius_type(&fd), Err(Error::NotIntegral));
    }

    #[test]
    fn type_string_roundtrip() {
        let t = TypeSignature::parse("[[1,1],[5,2],[10,2],[11,1],[12,2]]").unwrap();
        assert_eq!(t.fpdim(), 660);
        assert_eq!(t.rank(), 8);
        assert_eq!(t.to_string(), "[[1,1],[5,2],[10,2],[11,1],[12,2]]");
        assert!(TypeSignature::parse("[1,2]").is_err());
    }
}
