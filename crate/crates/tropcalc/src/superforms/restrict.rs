use crate::linalg::matrix::RatMat;
use crate::linalg::rat::Rat;
use crate::polyhedra::Polyhedron;

use super::affine::RatAffine;
use super::form::Superform;

/// The point of the affine hull whose free coordinates vanish.
pub fn hull_base_point(sigma: &Polyhedron) -> Vec<Rat> {
    let mut x = vec![Rat::zero(); sigma.ambient_rank()];
    for ((_, rhs), &p) in sigma.eqs().iter().zip(sigma.pivots()) {
        x[p] = rhs.clone();
    }
    x
}

/// `t ↦ base + Σ tᵢ bᵢ` with `bᵢ` the cached basis of N_σ.
pub fn hull_parametrization(sigma: &Polyhedron) -> RatAffine {
    let r = sigma.ambient_rank();
    let basis = sigma.lattice().basis_rat();
    let linear = if basis.is_empty() { RatMat::zeros(r, 0) } else { RatMat::from_cols(&basis, r) };
    RatAffine::new(linear, hull_base_point(sigma))
}

/// The affine projection of ℚʳ onto the affine hull that keeps free coordinates
/// and solves for pivot coordinates.
pub fn hull_projection(sigma: &Polyhedron) -> RatAffine {
    let r = sigma.ambient_rank();
    let mut m = RatMat::zeros(r, r);
    let pivots = sigma.pivots();
    for j in sigma.free_coords() {
        m.set(j, j, Rat::one());
    }
    for ((row, _), &p) in sigma.eqs().iter().zip(pivots) {
        for j in sigma.free_coords() {
            if !row[j].is_zero() {
                m.set(p, j, -&row[j]);
            }
        }
    }
    RatAffine::new(m, hull_base_point(sigma))
}

/// Canonical ambient representative of `α|_σ`: two forms agree on the affine
/// hull iff their reductions are equal.
pub fn reduce_to_hull(sigma: &Polyhedron, alpha: &Superform) -> Superform {
    if sigma.codim() == 0 {
        return alpha.clone();
    }
    alpha.pullback(&hull_projection(sigma)).expect("matching ambient rank")
}

/// `i*α` in the lattice coordinates of N_σ.
pub fn restrict_to(sigma: &Polyhedron, alpha: &Superform) -> Superform {
    alpha.pullback(&hull_parametrization(sigma)).expect("matching ambient rank")
}
