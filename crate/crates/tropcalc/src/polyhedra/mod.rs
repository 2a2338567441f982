//! Integral affine polyhedra, faces, normal vectors and complexes.

pub mod complex;
pub mod polyhedron;

pub use complex::{
    arrangement_refinement, canonical_hyperplane, common_refinement, cut_by, decomposition_of_pl,
    hyperplanes_of, pl_region, AffineForm, Complex, PlDecomposition, PlKind, RefinementMode,
};
pub use polyhedron::{normal_vector, Polyhedron};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyhedronError {
    #[error("polyhedron is empty")]
    Empty,
    #[error("ambient rank mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("not a facet")]
    NotAFacet,
    #[error("piecewise-linear function needs at least one affine form")]
    NoForms,
    #[error("affine form has non-integral linear part")]
    NotIntegral,
}
