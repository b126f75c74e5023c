//! Canonical fusion bialgebras `(𝒜, ℬ, 𝔉, d, τ)`.
//!
//! Both algebras share the basis `{x_j}` of the fusion ring:
//!
//! * `ℬ` is the fusion algebra itself (`x_j x_k = Σ_s N_{j,k}^s x_s`) with the
//!   trace `τ` reading off the `x_1` coefficient and adjoint `x_j^* = x_{j*}`;
//! * `𝒜` is commutative with `x_j ⋄ x_k = δ_{j,k} d_j^{-1} x_j`, minimal
//!   projections `e_j = d_j x_j`, trace `d(x_j) = d_j` and adjoint fixing `x_j`;
//! * `𝔉 : 𝒜 → ℬ` is the identity on coefficients.
//!
//! Spectral quantities on `ℬ` (norms, supports, entropies) are evaluated in
//! the left-regular representation `π(x) = Σ_j c_j M_j^T`, which is a faithful
//! `*`-representation on the orthonormal basis `{x_j}`; `τ(f(x^*x))` is the
//! `(1,1)` entry of `f(π(x)^† π(x))`.

mod families;
mod inequalities;

use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring_core::{fp_dimensions, proper_subrings, FusionData};
use crate::spectral::fusion_product;

pub use families::{
    rank2_family, rank3_dual_data, rank3_dual_schur, rank3_type1, rank3_type2, DualSchurReport, Rank3DualData,
    Rank3Type1Params,
};
pub use inequalities::{inequality_suite, norm_bound_k, InequalityResult, SuiteReport, CHECKS, EXPONENT_GRID, SUITE_TOL};

/// Relative threshold below which a spectral value counts as zero for supports.
pub const RANK_TOL: f64 = 1e-8;

/// Which algebra interprets an element's coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// The commutative algebra `𝒜` (pointwise product `⋄`, trace `d`).
    A,
    /// The fusion algebra `ℬ` (fusion product, trace `τ`).
    B,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::A => "A",
            Side::B => "B",
        }
    }
}

/// An element `Σ_j c_j x_j` of `𝒜` or `ℬ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Element {
    /// Coefficients on the shared basis `{x_j}`.
    pub coeffs: Vec<Complex64>,
    /// Algebra the coefficients live in.
    pub side: Side,
}

impl Element {
    /// Element with the given complex coefficients.
    pub fn new(coeffs: Vec<Complex64>, side: Side) -> Self {
        Element { coeffs, side }
    }

    /// Element with real coefficients.
    pub fn from_real(coeffs: &[f64], side: Side) -> Self {
        Element { coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), side }
    }

    /// The basis element `x_j`.
    pub fn basis(rank: usize, j: usize, side: Side) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); rank];
        coeffs[j] = Complex64::new(1.0, 0.0);
        Element { coeffs, side }
    }

    /// `λ·x`.
    pub fn scale(&self, lambda: Complex64) -> Self {
        Element { coeffs: self.coeffs.iter().map(|c| c * lambda).collect(), side: self.side }
    }

    /// `x + y` (sides must agree).
    pub fn add(&self, other: &Element) -> Result<Self> {
        expect_side(other, self.side)?;
        Ok(Element { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(), side: self.side })
    }

    /// Euclidean distance between coefficient vectors.
    pub fn distance(&self, other: &Element) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn expect_side(x: &Element, side: Side) -> Result<()> {
    if x.side == side {
        Ok(())
    } else {
        Err(Error::SideMismatch { expected: side.name(), got: x.side.name() })
    }
}

/// Eigen-data of `x^*x` in the left-regular representation of `ℬ`:
/// `τ(f(x^*x)) = Σ_k weights[k]·f(values[k])`.
#[derive(Debug, Clone)]
pub struct SpectralDistribution {
    /// Eigenvalues of `π(x)^†π(x)` (clamped at 0).
    pub values: Vec<f64>,
    /// Trace weights `|U_{1k}|²`, summing to 1.
    pub weights: Vec<f64>,
}

impl SpectralDistribution {
    /// `τ(|x|^p)^{1/p}`, or the operator norm for `p = ∞`.
    pub fn norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().copied().fold(0.0, f64::max).sqrt();
        }
        let s: f64 = self.values.iter().zip(&self.weights).map(|(v, w)| w * v.powf(p / 2.0)).sum();
        s.powf(1.0 / p)
    }

    /// `τ` of the range projection, with values below `(rank_tol·max √σ)²` treated as zero.
    pub fn support(&self, rank_tol: f64) -> f64 {
        let top = self.values.iter().copied().fold(0.0, f64::max).sqrt();
        if top == 0.0 {
            return 0.0;
        }
        self.values.iter().zip(&self.weights).filter(|(v, _)| v.sqrt() > rank_tol * top).map(|(_, w)| w).sum()
    }

    /// `−τ(x^*x log x^*x)`.
    pub fn entropy(&self) -> f64 {
        self.values.iter().zip(&self.weights).filter(|(v, _)| **v > 0.0).map(|(v, w)| -w * v * v.ln()).sum()
    }
}

/// A canonical fusion bialgebra built on a fusion ring or fusion algebra.
#[derive(Debug, Clone)]
pub struct CanonicalBialgebra {
    fd: FusionData,
    d: Vec<f64>,
    mu: f64,
    /// `π(x_j) = M_j^T`, stored as complex matrices.
    regular: Vec<DMatrix<Complex64>>,
}

/// The canonical bialgebra of a fusion ring: `d` = Frobenius–Perron dimensions,
/// `τ` = unit coefficient, `𝔉` = identity on coefficients.
pub fn canonical_from_fusion_data(fd: &FusionData) -> Result<CanonicalBialgebra> {
    let d = fp_dimensions(fd)?;
    let m = fd.rank();
    let mu = d.iter().map(|x| x * x).sum();
    let regular = (0..m)
        .map(|j| DMatrix::from_fn(m, m, |s, k| Complex64::new(fd.get(j, k, s), 0.0)))
        .collect();
    Ok(CanonicalBialgebra { fd: fd.clone(), d, mu, regular })
}

impl CanonicalBialgebra {
    /// Rank `m`.
    pub fn rank(&self) -> usize {
        self.fd.rank()
    }

    /// Underlying fusion data.
    pub fn fusion_data(&self) -> &FusionData {
        &self.fd
    }

    /// Dimensions `d_j = d(x_j)`.
    pub fn dims(&self) -> &[f64] {
        &self.d
    }

    /// Global dimension `μ = Σ d_j² = d(1_𝒜)`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `1_𝒜 = Σ_j d_j x_j`.
    pub fn unit_a(&self) -> Element {
        Element::from_real(&self.d, Side::A)
    }

    /// `1_ℬ = x_1`.
    pub fn unit_b(&self) -> Element {
        Element::basis(self.rank(), 0, Side::B)
    }

    /// Minimal projection `e_j = d_j x_j` of `𝒜`.
    pub fn minimal_projection_a(&self, j: usize) -> Element {
        Element::basis(self.rank(), j, Side::A).scale(Complex64::new(self.d[j], 0.0))
    }

    /// Trace `d` on `𝒜`: `Σ_j c_j d_j`.
    pub fn trace_a(&self, x: &Element) -> Result<Complex64> {
        expect_side(x, Side::A)?;
        Ok(x.coeffs.iter().zip(&self.d).map(|(c, d)| c * d).sum())
    }

    /// Trace `τ` on `ℬ`: the `x_1` coefficient.
    pub fn trace_b(&self, x: &Element) -> Result<Complex64> {
        expect_side(x, Side::B)?;
        Ok(x.coeffs[0])
    }

    /// `𝔉 : 𝒜 → ℬ`, `𝔉(x_j) = x_j`.
    pub fn fourier(&self, x: &Element) -> Result<Element> {
        expect_side(x, Side::A)?;
        Ok(Element::new(x.coeffs.clone(), Side::B))
    }

    /// `𝔉^{-1} : ℬ → 𝒜`.
    pub fn fourier_inv(&self, y: &Element) -> Result<Element> {
        expect_side(y, Side::B)?;
        Ok(Element::new(y.coeffs.clone(), Side::A))
    }

    /// `𝔉̃ = # ∘ 𝔉^{-1} ∘ * : ℬ → 𝒜`, which sends `x_j` to `x_{j*}`.
    pub fn fourier_tilde(&self, y: &Element) -> Result<Element> {
        expect_side(y, Side::B)?;
        let dual = self.fd.dual();
        let mut out = vec![Complex64::new(0.0, 0.0); self.rank()];
        for (j, c) in y.coeffs.iter().enumerate() {
            out[dual[j]] += c;
        }
        Ok(Element::new(out, Side::A))
    }

    /// `𝔉̃^{-1} : 𝒜 → ℬ`.
    pub fn fourier_tilde_inv(&self, x: &Element) -> Result<Element> {
        expect_side(x, Side::A)?;
        let dual = self.fd.dual();
        let mut out = vec![Complex64::new(0.0, 0.0); self.rank()];
        for (j, c) in x.coeffs.iter().enumerate() {
            out[dual[j]] += c;
        }
        Ok(Element::new(out, Side::B))
    }

    /// Product in the element's own algebra: `⋄` on `𝒜`, the fusion product on `ℬ`.
    pub fn mult(&self, x: &Element, y: &Element) -> Result<Element> {
        expect_side(y, x.side)?;
        let coeffs = match x.side {
            Side::A => diamond(&self.d, &x.coeffs, &y.coeffs),
            Side::B => fusion_product(&self.fd, &x.coeffs, &y.coeffs),
        };
        Ok(Element::new(coeffs, x.side))
    }

    /// Convolution on `𝒜`: `x ∗ y = 𝔉^{-1}(𝔉(x)𝔉(y))`.
    pub fn conv(&self, x: &Element, y: &Element) -> Result<Element> {
        expect_side(x, Side::A)?;
        expect_side(y, Side::A)?;
        Ok(Element::new(fusion_product(&self.fd, &x.coeffs, &y.coeffs), Side::A))
    }

    /// Convolution on `ℬ`: `x ∗_ℬ y = 𝔉̃^{-1}(𝔉̃(x) ⋄ 𝔉̃(y))`.
    pub fn conv_b(&self, x: &Element, y: &Element) -> Result<Element> {
        let fx = self.fourier_tilde(x)?;
        let fy = self.fourier_tilde(y)?;
        let prod = self.mult(&fx, &fy)?;
        self.fourier_tilde_inv(&prod)
    }

    /// The adjoint of the element's algebra: `x_j^* = x_j` on `𝒜`, `x_j^* = x_{j*}` on `ℬ`
    /// (both antilinear).
    pub fn adjoint(&self, x: &Element) -> Element {
        match x.side {
            Side::A => self.j_b(x),
            Side::B => self.j(x),
        }
    }

    /// `J(Σ c_j x_j) = Σ conj(c_j) x_{j*}` (side preserved).
    pub fn j(&self, x: &Element) -> Element {
        let dual = self.fd.dual();
        let mut out = vec![Complex64::new(0.0, 0.0); self.rank()];
        for (j, c) in x.coeffs.iter().enumerate() {
            out[dual[j]] += c.conj();
        }
        Element::new(out, x.side)
    }

    /// `J_ℬ(Σ c_j x_j) = Σ conj(c_j) x_j` (side preserved).
    pub fn j_b(&self, x: &Element) -> Element {
        Element::new(x.coeffs.iter().map(|c| c.conj()).collect(), x.side)
    }

    /// `π(x) = Σ_j c_j M_j^T`, the left-regular matrix of `x ∈ ℬ`.
    pub fn regular_matrix(&self, x: &Element) -> Result<DMatrix<Complex64>> {
        expect_side(x, Side::B)?;
        let m = self.rank();
        let mut out = DMatrix::<Complex64>::zeros(m, m);
        for (c, mat) in x.coeffs.iter().zip(&self.regular) {
            if *c != Complex64::new(0.0, 0.0) {
                out += mat * *c;
            }
        }
        Ok(out)
    }

    /// Spectral distribution of `x^*x` for `x ∈ ℬ`.
    pub fn spectral_distribution(&self, x: &Element) -> Result<SpectralDistribution> {
        let pi = self.regular_matrix(x)?;
        let g = pi.adjoint() * &pi;
        let g = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(g);
        let values = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
        let weights = (0..self.rank()).map(|k| eig.eigenvectors[(0, k)].norm_sqr()).collect();
        Ok(SpectralDistribution { values, weights })
    }

    /// Minimal-projection coordinates `f_j = c_j/d_j` of `x ∈ 𝒜` (`x = Σ f_j e_j`).
    fn coordinates(&self, x: &Element) -> Vec<f64> {
        x.coeffs.iter().zip(&self.d).map(|(c, d)| c.norm() / d).collect()
    }

    /// `‖x‖_p` in the element's algebra, `p ∈ [1, ∞]`.
    pub fn norm(&self, x: &Element, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::BadExponent(p));
        }
        match x.side {
            Side::A => Ok(norm_a(&self.d, &self.coordinates(x), p)),
            Side::B => Ok(self.spectral_distribution(x)?.norm(p)),
        }
    }

    /// `𝒮(x)`: trace of the range projection, with relative threshold [`RANK_TOL`].
    pub fn support(&self, x: &Element) -> Result<f64> {
        self.support_with_tol(x, RANK_TOL)
    }

    /// `𝒮(x)` with an explicit relative rank threshold.
    pub fn support_with_tol(&self, x: &Element, rank_tol: f64) -> Result<f64> {
        match x.side {
            Side::A => Ok(support_a(&self.d, &self.coordinates(x), rank_tol)),
            Side::B => Ok(self.spectral_distribution(x)?.support(rank_tol)),
        }
    }

    /// Range projection `ℛ(x)` of `x ∈ 𝒜`: the sum of the `e_j` with `f_j ≠ 0`.
    pub fn range_projection_a(&self, x: &Element) -> Result<Element> {
        expect_side(x, Side::A)?;
        let f = self.coordinates(x);
        let top = f.iter().copied().fold(0.0, f64::max);
        let coeffs: Vec<f64> =
            f.iter().zip(&self.d).map(|(v, d)| if top > 0.0 && *v > RANK_TOL * top { *d } else { 0.0 }).collect();
        Ok(Element::from_real(&coeffs, Side::A))
    }

    /// von Neumann entropy `H(|x|²) = −tr(x^*x log x^*x)` with the algebra's trace.
    pub fn entropy(&self, x: &Element) -> Result<f64> {
        match x.side {
            Side::A => Ok(entropy_a(&self.d, &self.coordinates(x))),
            Side::B => Ok(self.spectral_distribution(x)?.entropy()),
        }
    }

    /// Rényi entropy `H_t(|x|²) = t/(1−t)·log ‖|x|²‖_t = 2t/(1−t)·log ‖x‖_{2t}`,
    /// for `t ∈ [1/2, 1) ∪ (1, ∞]` (`H_∞ = −2 log ‖x‖_∞`).
    pub fn renyi_entropy(&self, x: &Element, t: f64) -> Result<f64> {
        if t == 1.0 {
            return Err(Error::BadExponent(t));
        }
        let n = self.norm(x, 2.0 * t)?;
        Ok(if t.is_infinite() { -2.0 * n.ln() } else { 2.0 * t / (1.0 - t) * n.ln() })
    }

    /// Biprojections: one per fusion subring (including `{1}` and the whole ring),
    /// realised as `Σ_{j∈S} d_j 𝔉^{-1}(x_j)`.
    pub fn biprojections(&self) -> Result<Vec<Biprojection>> {
        let m = self.rank();
        let mut subrings = vec![BTreeSet::from([0])];
        subrings.extend(proper_subrings(&self.fd)?);
        if m > 1 {
            subrings.push((0..m).collect());
        }
        let mut out = Vec::with_capacity(subrings.len());
        for s in subrings {
            let coeffs: Vec<f64> = (0..m).map(|j| if s.contains(&j) { self.d[j] } else { 0.0 }).collect();
            let element = Element::from_real(&coeffs, Side::A);
            let defect_a = self.mult(&element, &element)?.distance(&element);
            let fx = self.fourier(&element)?;
            let fx2 = self.mult(&fx, &fx)?;
            // 𝔉(b)² = λ 𝔉(b) with λ = Σ_{j∈S} d_j².
            let lambda: f64 = s.iter().map(|&j| self.d[j] * self.d[j]).sum();
            let defect_b = fx2.distance(&fx.scale(Complex64::new(lambda, 0.0)));
            let scale = lambda * coeffs.iter().map(|c| c.abs()).fold(1.0, f64::max);
            if defect_a > 1e-9 * scale || defect_b > 1e-9 * scale * lambda {
                return Err(Error::NormalizationFailure { index: s.len() });
            }
            out.push(Biprojection { subring: s, element, fourier_factor: lambda });
        }
        Ok(out)
    }
}

/// A biprojection: a projection of `𝒜` whose Fourier image is a positive multiple of a projection.
#[derive(Debug, Clone, Serialize)]
pub struct Biprojection {
    /// Basis indices of the fusion subring.
    pub subring: BTreeSet<usize>,
    /// The projection in `𝒜`.
    pub element: Element,
    /// `λ` with `𝔉(b)² = λ 𝔉(b)`.
    pub fourier_factor: f64,
}

/// `x ⋄ y` on coefficient vectors: `Σ_j c_j c'_j d_j^{-1} x_j`.
fn diamond(d: &[f64], a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).zip(d).map(|((x, y), dj)| x * y / dj).collect()
}

fn norm_a(d: &[f64], f: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return f.iter().copied().fold(0.0, f64::max);
    }
    f.iter().zip(d).map(|(v, dj)| dj * dj * v.powf(p)).sum::<f64>().powf(1.0 / p)
}

fn support_a(d: &[f64], f: &[f64], rank_tol: f64) -> f64 {
    let top = f.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    f.iter().zip(d).filter(|(v, _)| **v > rank_tol * top).map(|(_, dj)| dj * dj).sum()
}

fn entropy_a(d: &[f64], f: &[f64]) -> f64 {
    f.iter()
        .zip(d)
        .filter(|(v, _)| **v > 0.0)
        .map(|(v, dj)| {
            let s = v * v;
            -dj * dj * s * s.ln()
        })
        .sum()
}
