//! Lagerberg superforms with polynomial coefficients.

pub mod affine;
pub mod form;
pub mod poly;
mod restrict;

pub use affine::RatAffine;
pub use form::{index_subsets, IndexPair, Superform};
pub use poly::Poly;
pub use restrict::{hull_base_point, hull_parametrization, hull_projection, reduce_to_hull, restrict_to};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuperformError {
    #[error("ambient rank mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("bidegree mismatch: {left:?} vs {right:?}")]
    BidegreeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("contraction slot {slot} out of range (form has {available} slots in that group)")]
    SlotOutOfRange { slot: usize, available: usize },
    #[error("coordinate index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}
