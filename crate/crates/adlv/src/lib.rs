//! Invariants and classification of affine Deligne-Lusztig varieties for
//! split reductive groups over F_q((t)), together with a brute-force lattice
//! oracle over truncated Laurent-series windows for GL_n.
//!
//! The library is organized around five layers:
//!
//! - [`rootdata`] — exact arithmetic for root data, coweights, dominance
//!   order, Weyl action and fundamental groups;
//! - [`isocrystal`] — sigma-conjugacy class data: Newton points, Kottwitz
//!   points in Levi subgroups, superbasic slope blocks and normal forms;
//! - [`classify`] — the decision procedures: nonemptiness, Hodge-Newton
//!   indecomposability and reduction, connected-component structure,
//!   zero-dimensionality and the superbasic dimension formula;
//! - [`oracle`] — the lattice model: canonical forms, relative positions,
//!   membership, the reduce-to-J algorithm, enumeration and point counts
//!   over finite fields of small order;
//! - [`job`] — the batch front end used by the `adlv` binary.
//!
//! All arithmetic is exact: integers, rationals (`num_rational::Ratio<i64>`)
//! and table-backed finite fields. No floating point is used anywhere.

pub mod classify;
pub mod isocrystal;
pub mod job;
pub mod linalg;
pub mod oracle;
pub mod rootdata;

use thiserror::Error;

/// Exact rational scalar used throughout the root-datum layer.
pub type Rat = num_rational::Ratio<i64>;

/// Shorthand for an exact integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Error type shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or mismatched input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A slope block with gcd(m, h) != 1 or h < 1.
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    /// A Levi subset that does not contain the centralizer of the Newton point.
    #[error("invalid levi: {0}")]
    InvalidLevi(String),
    /// (nu, kappa) data that violates the class invariants.
    #[error("inconsistent class: {0}")]
    InconsistentClass(String),
    /// An operation that is only defined for GL-product data.
    #[error("unsupported datum: {0}")]
    UnsupportedDatum(String),
    /// An excluded parameter value (e.g. x = -1 at delta = 0).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The truncation window is too small to certify the requested quantity.
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    /// An enumeration would exceed the configured candidate budget.
    #[error("budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
