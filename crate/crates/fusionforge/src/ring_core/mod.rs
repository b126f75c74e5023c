//! Fusion ring / fusion algebra data model.
//!
//! A fusion ring of rank `m` has a basis `x_1 = 1, x_2, …, x_m` with
//! `x_j x_k = Σ_s N_{j,k}^s x_s`, nonnegative structure constants, a duality
//! involution `j ↦ j*` with `N_{j,k}^1 = δ_{j,k*}`, and Frobenius reciprocity
//! `N_{j,k}^s = N_{k*,j*}^{s*} = N_{j*,s}^k`. This module provides the
//! data type, exact axiom verification, Frobenius–Perron dimensions, types,
//! the structural predicates, subrings, isomorphism and coefficient bounds.

mod bounds;
mod data;
mod dims;
mod iso;
mod subrings;

pub use bounds::{coefficient_bounds_report, coefficient_bounds_with_dims, BoundSlack, BoundsReport};
pub use data::{verify_axioms, AxiomCheck, FusionData, Mode, Tensor, VerificationReport};
pub use dims::{
    fp_dimensions, global_fpdim, homomorphism_defect, is_frobenius_type, is_integral, is_perfect,
    type_signature, RingType, TypeSignature, INTEGER_TOL, POWER_MAX_ITER, POWER_TOL,
};
pub use iso::{are_isomorphic, are_isomorphic_capped, canonical_form, ISO_RANK_CAP};
pub use subrings::{is_simple, proper_subrings, subring_closure, SUBRING_RANK_CAP};

/// Convenience: `FusionData::new`.
pub fn new_fusion_data(matrices: &[Vec<Vec<f64>>], mode: Mode) -> crate::Result<FusionData> {
    FusionData::new(matrices, mode)
}

/// Group ring of the cyclic group `ℤ/n` with basis `x_i = g^{i}` (0-based).
pub fn cyclic_group_ring(n: usize) -> FusionData {
    let mats: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|i| (0..n).map(|k| (0..n).map(|s| u32::from((i + k) % n == s)).collect()).collect())
        .collect();
    FusionData::from_int_matrices(&mats).expect("cyclic group ring is a fusion ring").with_label(format!("z{n}"))
}
