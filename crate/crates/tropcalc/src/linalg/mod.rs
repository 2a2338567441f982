//! Exact arithmetic substrate: rationals, matrices, lattices and linear programming.

pub mod lattice;
pub mod lp;
pub mod matrix;
pub mod rat;

pub use lattice::{integer_kernel, lattice_index, saturated_span, Lattice, LatticeIndex};
pub use lp::{lp_feasible, maximize, Constraint, FarkasCertificate, Feasibility, LpResult};
pub use matrix::{smith_normal_form, IntMat, RatMat};
pub use rat::{dot, q, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice is not contained in the target lattice")]
    NotASublattice,
}
