//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result<T>`]. Mathematical *negatives*
//! (an axiom that fails, a Schur sum that is negative) are never errors: they
//! are reported as data. Errors are reserved for malformed input, violated
//! preconditions and exhausted budgets.

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A fusion matrix is not `m × m`, or the number of matrices is not `m`.
    #[error("fusion matrix {index} is not {rank}x{rank}")]
    NonSquare { index: usize, rank: usize },
    /// A structure constant is negative (or not finite).
    #[error("negative or non-finite structure constant at N[{j}][{k}][{s}] (1-based)")]
    NegativeEntry { j: usize, k: usize, s: usize },
    /// Matrix 1 is not the identity, or the unit does not act trivially.
    #[error("basis element 1 is not a unit: {0}")]
    NoUnit(String),
    /// The column of unit coefficients `N[j][·][1]` is not a perfect matching.
    #[error("no duality: row {row} (1-based) has no unique dual")]
    NoDuality { row: usize },
    /// The derived duality map is not an involution fixing the unit.
    #[error("derived duality is not an involution fixing 1")]
    BadInvolution,
    /// An iterative eigenvalue computation failed.
    #[error("eigenvalue computation did not converge: {0}")]
    ConvergenceFailure(String),
    /// A rank cap on an exponential-time routine was exceeded.
    #[error("rank {rank} exceeds the cap {cap} for this operation")]
    RankTooLarge { rank: usize, cap: usize },
    /// A Frobenius-type query on a ring whose dimensions are not integers.
    #[error("ring is not integral")]
    NotIntegral,
    /// A character-table query on a noncommutative ring.
    #[error("ring is not commutative")]
    NotCommutative,
    /// Joint eigenvectors could not be separated / validated.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    /// A dual projection could not be normalized to an idempotent.
    #[error("dual projection {index} is not proportional to an idempotent")]
    NormalizationFailure { index: usize },
    /// Element operands live on the wrong side of the bialgebra.
    #[error("side mismatch: expected {expected}, got {got}")]
    SideMismatch { expected: &'static str, got: &'static str },
    /// A p-norm exponent outside `[1, ∞]`.
    #[error("bad exponent p = {0} (need p >= 1)")]
    BadExponent(f64),
    /// Parameters of a parametrized family violate its feasibility region.
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    /// A search space that cannot be bounded.
    #[error("unbounded search: {0}")]
    UnboundedSearch(String),
    /// A node or wall-clock budget was exhausted.
    #[error("search budget exhausted: {0}")]
    Timeout(String),
    /// Malformed text input.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    /// Unknown corpus identifier or unreadable file.
    #[error("not found: {0}")]
    NotFound(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
