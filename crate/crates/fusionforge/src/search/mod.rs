//! Classification engine for fusion rings.
//!
//! Pipeline: [`enumerate_types`] → [`enumerate_involutions`] →
//! [`enumerate_fusion_rings`] → predicates and the Schur criterion
//! ([`classify`]). The rank-5 family with three self-adjoint elements has a
//! dedicated enumerator ([`rank5_three_selfadjoint_family`]).

mod classify;
pub mod engine;
mod family;
mod integral;
mod types;

pub use engine::{Budget, SearchStats};
pub use integral::{build_problem, dedup, enumerate_fusion_rings, RingEnumeration, RingSearchOptions, SEARCH_RANK_CAP};
pub use types::{enumerate_involutions, enumerate_types, is_prime_power_product, SearchConstraints, MAX_FPDIM};
pub use family::{instantiate as instantiate_rank5_template, rank5_family_brute_force, rank5_three_selfadjoint_family, FamilyEnumeration};
pub use classify::{classify, naive_enumerate, ring_record, ClassificationReport, ClassifyFilters, RingRecord, TypeReport};
