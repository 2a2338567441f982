//! Affine maps with rational linear part, used for pull-backs and parametrizations.

use crate::linalg::matrix::RatMat;
use crate::linalg::rat::Rat;

use super::poly::Poly;

/// `y ↦ linear · y + translate`, from ℚ^source to ℚ^target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatAffine {
    pub linear: RatMat,
    pub translate: Vec<Rat>,
}

impl RatAffine {
    pub fn new(linear: RatMat, translate: Vec<Rat>) -> RatAffine {
        assert_eq!(linear.rows, translate.len(), "translation length must match target rank");
        RatAffine { linear, translate }
    }

    pub fn identity(r: usize) -> RatAffine {
        RatAffine::new(RatMat::identity(r), vec![Rat::zero(); r])
    }

    pub fn source_rank(&self) -> usize {
        self.linear.cols
    }

    pub fn target_rank(&self) -> usize {
        self.linear.rows
    }

    pub fn apply(&self, y: &[Rat]) -> Vec<Rat> {
        self.linear.mul_vec(y).into_iter().zip(&self.translate).map(|(a, b)| a + b).collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RatAffine) -> RatAffine {
        let linear = self.linear.mul(&inner.linear);
        let translate = self.apply(&inner.translate);
        RatAffine::new(linear, translate)
    }

    /// Coordinate functions of the map as polynomials on the source.
    pub fn coordinate_polys(&self) -> Vec<Poly> {
        (0..self.target_rank())
            .map(|i| Poly::affine(&self.linear.row(i), &self.translate[i]))
            .collect()
    }

    pub fn pull_poly(&self, f: &Poly) -> Poly {
        assert_eq!(f.rank(), self.target_rank(), "polynomial rank must match target rank");
        f.compose(&self.coordinate_polys(), self.source_rank())
    }
}
