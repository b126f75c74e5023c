//! Fusion rings, canonical fusion bialgebras and analytic obstructions to
//! unitary categorification.
//!
//! * [`ring_core`] — fusion ring data, axioms, dimensions, predicates, subrings, isomorphism.
//! * [`spectral`] — character tables, dual minimal projections, dual fusion coefficients.
//! * [`criteria`] — Schur product criterion (commutative decision, noncommutative falsifier).
//! * [`bialgebra`] — the canonical fusion bialgebra, Fourier transform, norms, inequality suite,
//!   and the rank-2/rank-3 parametrized families.
//! * [`search`] — type enumeration and backtracking classification of fusion rings.
//! * [`corpus_cli`] — text/JSON formats, the embedded corpus, and the command line.

pub mod bialgebra;
pub mod corpus_cli;
pub mod criteria;
pub mod error;
pub mod ring_core;
pub mod search;
pub mod spectral;

pub use error::{Error, Result};
pub use ring_core::FusionData;
