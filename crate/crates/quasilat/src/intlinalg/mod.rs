//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers; intermediate
//! entries in a Smith reduction blow up even on small inputs, so fixed-width
//! arithmetic is not used in this module.

mod finab;
mod hnf;
mod homology;
mod matrix;
mod snf;

pub use finab::{finab_map_kernel, map_kernel_into_orders, FinAbGroup};
pub use hnf::{column_hnf, hermite_normal_form, solve_exact};
pub use homology::{homology_at, HomologyAt, QuotientPresentation};
pub use matrix::IntMatrix;
pub use snf::{abs_det, cokernel, kernel_basis, rank, smith_normal_form, solutions_mod_n, SmithForm};

pub(crate) use snf::snf_engine;

use thiserror::Error;

/// Errors raised by the exact linear-algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a complex: d_out * d_in != 0")]
    NotAComplex,
    #[error("map does not respect the relations of its source presentation")]
    IllDefinedMap,
    #[error("no integral solution to the linear system")]
    NoSolution,
    #[error("vector is not in the kernel of the outgoing differential")]
    NotInKernel,
}

pub type Result<T> = std::result::Result<T, LinAlgError>;
