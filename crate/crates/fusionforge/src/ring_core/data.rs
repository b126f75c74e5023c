//! The [`FusionData`] model and axiom verification.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Arithmetic mode of a fusion tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Nonnegative integer structure constants; all axiom checks are exact.
    Exact,
    /// Nonnegative real structure constants (fusion algebras); checks use a tolerance.
    Float,
}

/// Storage for the structure constants `N_{j,k}^s`, flattened as `(j·m + k)·m + s`.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    /// Exact integer entries.
    Integer(Vec<u32>),
    /// Real entries.
    Real(Vec<f64>),
}

/// A fusion ring (integer tensor) or fusion algebra (real tensor).
///
/// Indices are 0-based in the API: index `0` is the unit. Text formats and
/// CLI output use the 1-based labels of the literature.
#[derive(Clone)]
pub struct FusionData {
    rank: usize,
    tensor: Tensor,
    dual: Vec<usize>,
    label: Option<String>,
    pub(crate) fp_cache: OnceLock<Vec<f64>>,
}

impl fmt::Debug for FusionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FusionData")
            .field("rank", &self.rank)
            .field("label", &self.label)
            .field("dual", &self.dual)
            .field("tensor", &self.tensor)
            .finish()
    }
}

impl PartialEq for FusionData {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.tensor == other.tensor && self.dual == other.dual
    }
}

/// Tolerance used when deriving the duality of a real tensor.
const STRUCTURE_TOL: f64 = 1e-9;

impl FusionData {
    /// Builds fusion data from the left-multiplication matrices `M_i`, where
    /// entry `(k, s)` of matrix `i` is `N_{i,k}^s`.
    ///
    /// In [`Mode::Exact`] every entry must be a nonnegative integer.
    pub fn new(matrices: &[Vec<Vec<f64>>], mode: Mode) -> Result<Self> {
        let m = matrices.len();
        let mut flat = Vec::with_capacity(m * m * m);
        for (i, mat) in matrices.iter().enumerate() {
            if mat.len() != m || mat.iter().any(|row| row.len() != m) {
                return Err(Error::NonSquare { index: i + 1, rank: m });
            }
            for (k, row) in mat.iter().enumerate() {
                for (s, &v) in row.iter().enumerate() {
                    if !v.is_finite() || v < 0.0 {
                        return Err(Error::NegativeEntry { j: i + 1, k: k + 1, s: s + 1 });
                    }
                    if mode == Mode::Exact && v.fract() != 0.0 {
                        return Err(Error::NegativeEntry { j: i + 1, k: k + 1, s: s + 1 });
                    }
                    flat.push(v);
                }
            }
        }
        let tensor = match mode {
            Mode::Exact => Tensor::Integer(flat.iter().map(|&v| v as u32).collect()),
            Mode::Float => Tensor::Real(flat),
        };
        Self::from_tensor(m, tensor)
    }

    /// Builds exact fusion data from integer matrices (entry `(k, s)` of matrix `i` is `N_{i,k}^s`).
    pub fn from_int_matrices(matrices: &[Vec<Vec<u32>>]) -> Result<Self> {
        let m = matrices.len();
        let mut flat = Vec::with_capacity(m * m * m);
        for (i, mat) in matrices.iter().enumerate() {
            if mat.len() != m || mat.iter().any(|row| row.len() != m) {
                return Err(Error::NonSquare { index: i + 1, rank: m });
            }
            flat.extend(mat.iter().flatten().copied());
        }
        Self::from_tensor(m, Tensor::Integer(flat))
    }

    /// Builds fusion data from a flattened tensor, deriving the duality.
    pub fn from_tensor(rank: usize, tensor: Tensor) -> Result<Self> {
        if rank == 0 {
            return Err(Error::NonSquare { index: 0, rank: 0 });
        }
        let len = rank * rank * rank;
        let ok_len = match &tensor {
            Tensor::Integer(v) => v.len() == len,
            Tensor::Real(v) => v.len() == len,
        };
        if !ok_len {
            return Err(Error::NonSquare { index: 0, rank });
        }
        if let Tensor::Real(v) = &tensor {
            if let Some(pos) = v.iter().position(|x| !x.is_finite() || *x < 0.0) {
                let (j, k, s) = (pos / (rank * rank), (pos / rank) % rank, pos % rank);
                return Err(Error::NegativeEntry { j: j + 1, k: k + 1, s: s + 1 });
            }
        }
        let mut fd = FusionData {
            rank,
            tensor,
            dual: vec![0; rank],
            label: None,
            fp_cache: OnceLock::new(),
        };
        // Matrix 1 must be the identity.
        for k in 0..rank {
            for s in 0..rank {
                let want = if k == s { 1.0 } else { 0.0 };
                if (fd.get(0, k, s) - want).abs() > STRUCTURE_TOL {
                    return Err(Error::NoUnit(format!(
                        "N[1][{}][{}] = {} (expected {want})",
                        k + 1,
                        s + 1,
                        fd.get(0, k, s)
                    )));
                }
            }
        }
        // Duality from the unit column: N_{j,k}^1 = δ_{j,k*}.
        for j in 0..rank {
            let mut found = None;
            for k in 0..rank {
                let v = fd.get(j, k, 0);
                if (v - 1.0).abs() <= STRUCTURE_TOL {
                    if found.is_some() {
                        return Err(Error::NoDuality { row: j + 1 });
                    }
                    found = Some(k);
                } else if v.abs() > STRUCTURE_TOL {
                    return Err(Error::NoDuality { row: j + 1 });
                }
            }
            fd.dual[j] = found.ok_or(Error::NoDuality { row: j + 1 })?;
        }
        if fd.dual[0] != 0 || (0..rank).any(|j| fd.dual[fd.dual[j]] != j) {
            return Err(Error::BadInvolution);
        }
        Ok(fd)
    }

    /// Attaches a free-form label.
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The rank `m`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The optional label.
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The duality involution (0-based).
    pub fn dual(&self) -> &[usize] {
        &self.dual
    }

    /// Dual of basis index `j`.
    pub fn dual_of(&self, j: usize) -> usize {
        self.dual[j]
    }

    /// Arithmetic mode.
    pub fn mode(&self) -> Mode {
        match self.tensor {
            Tensor::Integer(_) => Mode::Exact,
            Tensor::Real(_) => Mode::Float,
        }
    }

    /// Raw tensor storage.
    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    #[inline]
    fn idx(&self, j: usize, k: usize, s: usize) -> usize {
        (j * self.rank + k) * self.rank + s
    }

    /// `N_{j,k}^s` as a real number.
    #[inline]
    pub fn get(&self, j: usize, k: usize, s: usize) -> f64 {
        let i = self.idx(j, k, s);
        match &self.tensor {
            Tensor::Integer(v) => f64::from(v[i]),
            Tensor::Real(v) => v[i],
        }
    }

    /// `N_{j,k}^s` when the tensor is exact.
    #[inline]
    pub fn get_int(&self, j: usize, k: usize, s: usize) -> Option<u32> {
        match &self.tensor {
            Tensor::Integer(v) => Some(v[self.idx(j, k, s)]),
            Tensor::Real(_) => None,
        }
    }

    /// Fusion matrix `M_i` with entry `(k, s) = N_{i,k}^s`.
    pub fn fusion_matrix(&self, i: usize) -> Vec<Vec<f64>> {
        (0..self.rank)
            .map(|k| (0..self.rank).map(|s| self.get(i, k, s)).collect())
            .collect()
    }

    /// All fusion matrices `M_1, …, M_m`.
    pub fn fusion_matrices(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.rank).map(|i| self.fusion_matrix(i)).collect()
    }

    /// Integer fusion matrices (exact mode only).
    pub fn int_matrices(&self) -> Option<Vec<Vec<Vec<u32>>>> {
        let Tensor::Integer(_) = &self.tensor else { return None };
        Some(
            (0..self.rank)
                .map(|i| {
                    (0..self.rank)
                        .map(|k| (0..self.rank).map(|s| self.get_int(i, k, s).unwrap()).collect())
                        .collect()
                })
                .collect(),
        )
    }

    /// Largest structure constant.
    pub fn max_entry(&self) -> f64 {
        match &self.tensor {
            Tensor::Integer(v) => f64::from(v.iter().copied().max().unwrap_or(0)),
            Tensor::Real(v) => v.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Returns a copy with basis relabeled by `perm`: new index `perm[i]` is old index `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let m = self.rank;
        let tensor = match &self.tensor {
            Tensor::Integer(v) => {
                let mut out = vec![0u32; v.len()];
                for j in 0..m {
                    for k in 0..m {
                        for s in 0..m {
                            out[(perm[j] * m + perm[k]) * m + perm[s]] = v[self.idx(j, k, s)];
                        }
                    }
                }
                Tensor::Integer(out)
            }
            Tensor::Real(v) => {
                let mut out = vec![0f64; v.len()];
                for j in 0..m {
                    for k in 0..m {
                        for s in 0..m {
                            out[(perm[j] * m + perm[k]) * m + perm[s]] = v[self.idx(j, k, s)];
                        }
                    }
                }
                Tensor::Real(out)
            }
        };
        let mut fd = Self::from_tensor(m, tensor)?;
        fd.label = self.label.clone();
        Ok(fd)
    }

    /// Whether `x_j x_k = x_k x_j` for all `j, k`.
    pub fn is_commutative(&self) -> bool {
        let m = self.rank;
        let tol = 1e-9 * self.max_entry().max(1.0);
        for j in 0..m {
            for k in (j + 1)..m {
                for s in 0..m {
                    match (self.get_int(j, k, s), self.get_int(k, j, s)) {
                        (Some(a), Some(b)) if a != b => return false,
                        (None, None) if (self.get(j, k, s) - self.get(k, j, s)).abs() > tol => {
                            return false
                        }
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    /// Whether the axiom holds.
    pub passed: bool,
    /// First violating index tuple (1-based), if any.
    pub witness: Option<Vec<usize>>,
    /// Largest residual magnitude seen.
    pub residual: f64,
}

impl AxiomCheck {
    fn new() -> Self {
        AxiomCheck { passed: true, witness: None, residual: 0.0 }
    }

    fn record(&mut self, residual: f64, tol: f64, witness: &[usize]) {
        if residual > self.residual {
            self.residual = residual;
        }
        if residual > tol && self.passed {
            self.passed = false;
            self.witness = Some(witness.iter().map(|i| i + 1).collect());
        }
    }
}

/// Per-axiom verification results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    /// `N_{1,k}^s = δ_{k,s}` and `N_{j,1}^s = δ_{j,s}`.
    pub unit: AxiomCheck,
    /// `N_{j,k}^1 = δ_{j,k*}`.
    pub duality: AxiomCheck,
    /// `N_{j,k}^s = N_{k*,j*}^{s*} = N_{j*,s}^k`.
    pub reciprocity: AxiomCheck,
    /// `Σ_s N_{i,j}^s N_{s,k}^t = Σ_s N_{j,k}^s N_{i,s}^t`.
    pub associativity: AxiomCheck,
    /// All entries nonnegative.
    pub nonnegativity: AxiomCheck,
    /// Tolerance applied (0 in exact mode).
    pub tolerance: f64,
}

impl VerificationReport {
    /// Whether every axiom holds.
    pub fn all_pass(&self) -> bool {
        self.unit.passed
            && self.duality.passed
            && self.reciprocity.passed
            && self.associativity.passed
            && self.nonnegativity.passed
    }

    /// Name of the first failing axiom, if any.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            ("unit", &self.unit),
            ("duality", &self.duality),
            ("reciprocity", &self.reciprocity),
            ("associativity", &self.associativity),
            ("nonnegativity", &self.nonnegativity),
        ]
        .into_iter()
        .find(|(_, c)| !c.passed)
        .map(|(n, _)| n)
    }
}

/// Checks all fusion-ring axioms.
///
/// For exact tensors all arithmetic is in integers and `tol` is ignored. For
/// real tensors linear identities use `tol·max(1, max entry)` and the quadratic
/// associativity identity uses `tol·max(1, max entry)²`.
pub fn verify_axioms(fd: &FusionData, tol: f64) -> VerificationReport {
    let m = fd.rank();
    let exact = fd.mode() == Mode::Exact;
    let scale = fd.max_entry().max(1.0);
    let (lin_tol, quad_tol) = if exact { (0.0, 0.0) } else { (tol * scale, tol * scale * scale) };
    let d = fd.dual();
    let mut unit = AxiomCheck::new();
    let mut duality = AxiomCheck::new();
    let mut reciprocity = AxiomCheck::new();
    let mut associativity = AxiomCheck::new();
    let mut nonneg = AxiomCheck::new();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };

    for j in 0..m {
        for k in 0..m {
            for s in 0..m {
                let v = fd.get(j, k, s);
                nonneg.record(if v < 0.0 { -v } else { 0.0 }, lin_tol, &[j, k, s]);
                if j == 0 {
                    unit.record((v - delta(k, s)).abs(), lin_tol, &[j, k, s]);
                }
                if k == 0 {
                    unit.record((v - delta(j, s)).abs(), lin_tol, &[j, k, s]);
                }
                if s == 0 {
                    duality.record((v - delta(j, d[k])).abs(), lin_tol, &[j, k, s]);
                }
                let r1 = (v - fd.get(d[k], d[j], d[s])).abs();
                let r2 = (v - fd.get(d[j], s, k)).abs();
                reciprocity.record(r1.max(r2), lin_tol, &[j, k, s]);
            }
        }
    }
    match fd.tensor() {
        Tensor::Integer(t) => {
            let at = |j: usize, k: usize, s: usize| u64::from(t[(j * m + k) * m + s]);
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for tt in 0..m {
                            let mut lhs = 0u64;
                            let mut rhs = 0u64;
                            for s in 0..m {
                                lhs += at(i, j, s) * at(s, k, tt);
                                rhs += at(j, k, s) * at(i, s, tt);
                            }
                            let r = lhs.abs_diff(rhs) as f64;
                            associativity.record(r, 0.0, &[i, j, k, tt]);
                        }
                    }
                }
            }
        }
        Tensor::Real(_) => {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for tt in 0..m {
                            let mut lhs = 0.0;
                            let mut rhs = 0.0;
                            for s in 0..m {
                                lhs += fd.get(i, j, s) * fd.get(s, k, tt);
                                rhs += fd.get(j, k, s) * fd.get(i, s, tt);
                            }
                            associativity.record((lhs - rhs).abs(), quad_tol, &[i, j, k, tt]);
                        }
                    }
                }
            }
        }
    }
    VerificationReport {
        unit,
        duality,
        reciprocity,
        associativity,
        nonnegativity: nonneg,
        tolerance: if exact { 0.0 } else { tol },
    }
}
