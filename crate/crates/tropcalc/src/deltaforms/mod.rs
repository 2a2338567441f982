//! δ-forms on ℝʳ: equality after refinement, balancing, polyhedral and
//! boundary derivatives, piecewise smooth functions and corner loci.

mod corner;
mod form;
mod ps;
mod star;

pub use corner::{corner_locus, iterated_corner_locus, tropical_pl_check, tropical_pl_sides};
pub use form::{DeltaForm, FormType};
pub use ps::{ps_wedge, PsForm, PsFunction};
pub use star::{boundary1, boundary2, check_balanced, stars, BalanceReport, Star, StarEntry};

use crate::polyhedra::PolyhedronError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeltaError {
    #[error("ambient rank mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("type mismatch: {left:?} vs {right:?}")]
    TypeMismatch { left: FormType, right: FormType },
    #[error("δ-form is not balanced ({faces} failing faces)")]
    NotBalanced { faces: usize },
    #[error("invalid cell: {0}")]
    BadCell(String),
    #[error("piecewise smooth function is not continuous across a shared face")]
    NotContinuous,
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
}
