//! Sublattices of ℤʳ: saturation, kernels, indices and basis completion.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMat, RatMat};
use super::rat::{primitive_scale, Rat};
use super::LinalgError;

/// A sublattice of ℤʳ given by linearly independent integer generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub ambient_rank: usize,
    pub basis: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl Lattice {
    /// Lattice generated by arbitrary integer vectors (a basis is extracted via HNF).
    pub fn generated_by(ambient_rank: usize, gens: &[Vec<BigInt>]) -> Lattice {
        if gens.is_empty() {
            return Lattice { ambient_rank, basis: Vec::new() };
        }
        let (h, _) = IntMat::from_rows(gens, ambient_rank).hermite_normal_form();
        let basis = h.to_rows().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
        Lattice { ambient_rank, basis }
    }

    pub fn standard(r: usize) -> Lattice {
        let basis = (0..r)
            .map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Lattice { ambient_rank: r, basis }
    }

    pub fn zero(r: usize) -> Lattice {
        Lattice { ambient_rank: r, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_rat(&self) -> Vec<Vec<Rat>> {
        self.basis.iter().map(|v| v.iter().map(Rat::from).collect()).collect()
    }

    /// Coordinates of `v` in the basis, rational, if `v` lies in the span.
    pub fn span_coordinates(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        RatMat::from_cols(&self.basis_rat(), self.ambient_rank).solve(v)
    }

    /// Integer coordinates of `v`, if `v` belongs to the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let vr: Vec<Rat> = v.iter().map(Rat::from).collect();
        self.span_coordinates(&vr)?.iter().map(|c| c.to_int()).collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// The saturation ℤʳ ∩ span(self), in canonical (HNF) basis.
    pub fn saturation(&self) -> Lattice {
        saturated_span(self.ambient_rank, &self.basis_rat())
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation().rank() == self.rank()
            && lattice_index(self, &self.saturation()) == Ok(LatticeIndex::Finite(BigInt::one()))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Lattice::generated_by(self.ambient_rank, &gens)
    }

    /// Vectors completing a saturated lattice's basis to a basis of ℤʳ.
    pub fn complement_basis(&self) -> Vec<Vec<BigInt>> {
        let r = self.ambient_rank;
        let m = self.rank();
        if m == 0 {
            return Lattice::standard(r).basis;
        }
        // U · Bᵀ = [H; 0] with U unimodular, so Bᵀ = U⁻¹ [H; 0]
        let bt = IntMat::from_rows(&self.basis, r).transpose();
        let (_, u) = bt.hermite_normal_form();
        let uinv = u.to_rat().inverse().expect("unimodular transform");
        (m..r)
            .map(|j| {
                (0..r).map(|i| uinv.get(i, j).to_int().expect("integral inverse")).collect()
            })
            .collect()
    }
}

/// ℤʳ ∩ ker(rows), rows rational, returned in canonical HNF basis.
pub fn integer_kernel(r: usize, rows: &[Vec<Rat>]) -> Lattice {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| primitive_scale(row).0)
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    if int_rows.is_empty() {
        return Lattice::standard(r);
    }
    let at = IntMat::from_rows(&int_rows, r).transpose();
    let (h, u) = at.hermite_normal_form();
    let rank = (0..h.rows).filter(|&i| (0..h.cols).any(|j| !h.get(i, j).is_zero())).count();
    let kernel: Vec<Vec<BigInt>> = (rank..r).map(|i| u.row(i)).collect();
    Lattice::generated_by(r, &kernel)
}

/// ℤʳ ∩ span(vectors), in canonical HNF basis.
pub fn saturated_span(r: usize, vectors: &[Vec<Rat>]) -> Lattice {
    let nonzero: Vec<Vec<Rat>> =
        vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return Lattice::zero(r);
    }
    let ortho = RatMat::from_rows(&nonzero, r).nullspace();
    integer_kernel(r, &ortho)
}

/// The index [sup : sub], or `Infinite` when sub has smaller rank.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<LatticeIndex, LinalgError> {
    if sub.ambient_rank != sup.ambient_rank {
        return Err(LinalgError::DimensionMismatch {
            expected: sup.ambient_rank,
            found: sub.ambient_rank,
        });
    }
    let mut coords = Vec::with_capacity(sub.rank());
    for v in &sub.basis {
        coords.push(sup.coordinates(v).ok_or(LinalgError::NotASublattice)?);
    }
    if sub.rank() < sup.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    if sub.rank() == 0 {
        return Ok(LatticeIndex::Finite(BigInt::one()));
    }
    let (_, d, _) = IntMat::from_rows(&coords, sup.rank()).smith_normal_form();
    let mut idx = BigInt::one();
    for i in 0..d.rows.min(d.cols) {
        idx *= d.get(i, i).abs();
    }
    Ok(LatticeIndex::Finite(idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn lat(r: usize, v: &[&[i64]]) -> Lattice {
        let gens: Vec<Vec<BigInt>> =
            v.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Lattice { ambient_rank: r, basis: gens }
    }

    #[test]
    fn index_examples() {
        let z2 = Lattice::standard(2);
        assert_eq!(
            lattice_index(&lat(2, &[&[1, 1], &[1, -1]]), &z2),
            Ok(LatticeIndex::Finite(BigInt::from(2)))
        );
        assert_eq!(lattice_index(&z2, &z2), Ok(LatticeIndex::Finite(BigInt::one())));
        assert_eq!(lattice_index(&lat(2, &[&[1, 0]]), &z2), Ok(LatticeIndex::Infinite));
        assert_eq!(
            lattice_index(&z2, &lat(2, &[&[2, 0], &[0, 1]])),
            Err(LinalgError::NotASublattice)
        );
    }

    #[test]
    fn kernel_and_saturation() {
        let k = integer_kernel(3, &[vec![q(1), q(1), q(1)]]);
        assert_eq!(k.rank(), 2);
        for v in &k.basis {
            assert!((v[0].clone() + &v[1] + &v[2]).is_zero());
        }
        let s = saturated_span(2, &[vec![q(2), q(4)]]);
        assert_eq!(s, lat(2, &[&[1, 2]]));
    }

    #[test]
    fn complement_is_unimodular() {
        let l = saturated_span(3, &[vec![q(1), q(2), q(3)]]);
        let comp = l.complement_basis();
        let mut rows = l.basis.clone();
        rows.extend(comp);
        assert!(IntMat::from_rows(&rows, 3).det().abs().is_one());
    }
}
