//! Stars of codimension-one faces, the balancing condition and the boundary
//! derivatives ∂′, ∂″.

use std::collections::BTreeMap;

use crate::linalg::matrix::RatMat;
use crate::linalg::rat::Rat;
use crate::polyhedra::Polyhedron;
use crate::superforms::{reduce_to_hull, Superform};

use super::form::DeltaForm;
use super::DeltaError;

/// A cell adjacent to a face τ, with its inward normal split along a basis
/// of N_τ (`along`) and a complement (`across`).
#[derive(Clone, Debug)]
pub struct StarEntry {
    pub cell: usize,
    pub normal: Vec<Rat>,
    pub along: Vec<Rat>,
    pub across: Vec<Rat>,
}

/// All cells of a δ-form having `face` as a facet.
#[derive(Clone, Debug)]
pub struct Star {
    pub face: Polyhedron,
    /// Basis of N_τ used for the `along` coordinates.
    pub basis: Vec<Vec<Rat>>,
    pub entries: Vec<StarEntry>,
}

impl Star {
    /// The forms βᵢ with Σ_σ α_σ|τ ⊗ ω_σ = Σ βᵢ ⊗ bᵢ (plus complement terms
    /// that vanish when balanced), as canonical representatives on τ.
    pub fn along_components(&self, coeffs: &[&Superform]) -> Vec<Superform> {
        (0..self.basis.len())
            .map(|i| self.weighted_sum(coeffs, |e| &e.along[i]))
            .collect()
    }

    /// The complement components; all zero iff balanced at τ.
    pub fn across_components(&self, coeffs: &[&Superform]) -> Vec<Superform> {
        let n = self.entries.first().map_or(0, |e| e.across.len());
        (0..n).map(|j| self.weighted_sum(coeffs, |e| &e.across[j])).collect()
    }

    fn weighted_sum<'a>(&'a self, coeffs: &[&Superform], pick: impl Fn(&'a StarEntry) -> &'a Rat) -> Superform {
        let mut acc: Option<Superform> = None;
        for (e, a) in self.entries.iter().zip(coeffs) {
            let c = pick(e);
            if c.is_zero() {
                continue;
            }
            let term = a.scale(c);
            acc = Some(match acc {
                Some(s) => s.plus(&term),
                None => term,
            });
        }
        let (p, q) = coeffs.first().map_or((0, 0), |a| a.bidegree());
        let r = self.face.ambient_rank();
        reduce_to_hull(&self.face, &acc.unwrap_or_else(|| Superform::zero(r, p, q)))
    }
}

/// Stars of all codimension-one faces of the cells, keyed by face.
pub fn stars(form: &DeltaForm) -> Vec<Star> {
    let mut map: BTreeMap<Polyhedron, Vec<(usize, Vec<Rat>)>> = BTreeMap::new();
    for (idx, (cell, _)) in form.cells().iter().enumerate() {
        for (j, tau) in cell.facets().iter().enumerate() {
            let omega: Vec<Rat> = cell.facet_normal(j).iter().map(Rat::from).collect();
            map.entry(tau.clone()).or_default().push((idx, omega));
        }
    }
    map.into_iter().map(|(tau, adj)| build_star(tau, adj)).collect()
}

fn build_star(face: Polyhedron, adjacent: Vec<(usize, Vec<Rat>)>) -> Star {
    let r = face.ambient_rank();
    let basis = face.lattice().basis_rat();
    let complement: Vec<Vec<Rat>> = face
        .lattice()
        .complement_basis()
        .iter()
        .map(|v| v.iter().map(Rat::from).collect())
        .collect();
    let mut cols = basis.clone();
    cols.extend(complement.iter().cloned());
    let inv = RatMat::from_cols(&cols, r).inverse().expect("basis of the ambient lattice");
    let m = basis.len();
    let entries = adjacent
        .into_iter()
        .map(|(cell, normal)| {
            let coords = inv.mul_vec(&normal);
            StarEntry { cell, along: coords[..m].to_vec(), across: coords[m..].to_vec(), normal }
        })
        .collect();
    Star { face, basis, entries }
}

/// Result of the balancing check.
#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub balanced: bool,
    pub failing_faces: Vec<Polyhedron>,
}

fn star_coeffs<'a>(form: &'a DeltaForm, star: &Star) -> Vec<&'a Superform> {
    star.entries.iter().map(|e| &form.cells()[e.cell].1).collect()
}

fn balanced_at(form: &DeltaForm, star: &Star) -> bool {
    let coeffs = star_coeffs(form, star);
    star.across_components(&coeffs).iter().all(|s| s.is_zero())
}

pub fn check_balanced(form: &DeltaForm) -> BalanceReport {
    let failing_faces: Vec<Polyhedron> = stars(form)
        .into_iter()
        .filter(|s| !balanced_at(form, s))
        .map(|s| s.face)
        .collect();
    BalanceReport { balanced: failing_faces.is_empty(), failing_faces }
}

pub(crate) fn require_balanced(form: &DeltaForm, stars: &[Star]) -> Result<(), DeltaError> {
    let failing: Vec<Polyhedron> = stars.iter().filter(|s| !balanced_at(form, s)).map(|s| s.face.clone()).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(DeltaError::NotBalanced { faces: failing.len() })
    }
}

/// Boundary derivative ∂′ = d′ − d′_P of a balanced δ-form.
///
/// At a face τ the coefficient is `Σ_σ ⟨α_σ; (∅, ω_σ)⟩|τ − Σᵢ ⟨βᵢ; (∅, bᵢ)⟩`,
/// with the pairing `α[σ](γ) = ∫_σ α∧γ`.
pub fn boundary1(form: &DeltaForm) -> Result<DeltaForm, DeltaError> {
    let (p, q, l) = form.form_type();
    let r = form.rank();
    let out_ty = (p, q.saturating_sub(1), l + 1);
    let st = stars(form);
    require_balanced(form, &st)?;
    if q == 0 || l >= r {
        return Ok(DeltaForm::zero(r, out_ty));
    }
    let mut cells = Vec::new();
    for star in &st {
        let coeffs = star_coeffs(form, star);
        let mut acc = Superform::zero(r, p, q - 1);
        for (e, a) in star.entries.iter().zip(&coeffs) {
            acc = acc.plus(&a.contract2(&e.normal));
        }
        for (b, beta) in star.basis.iter().zip(star.along_components(&coeffs)) {
            if !beta.is_zero() {
                acc = acc.minus(&beta.contract2(b));
            }
        }
        let coeff = reduce_to_hull(&star.face, &acc);
        if !coeff.is_zero() {
            cells.push((star.face.clone(), coeff));
        }
    }
    Ok(DeltaForm::from_complex(r, out_ty, cells))
}

/// Boundary derivative ∂″ = J ∂′ J.
pub fn boundary2(form: &DeltaForm) -> Result<DeltaForm, DeltaError> {
    Ok(boundary1(&form.j_op())?.j_op())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;
    use crate::polyhedra::Polyhedron;

    fn ray(dir: &[i64]) -> Polyhedron {
        // {t·dir : t ≥ 0} in ℝ²
        let (a, b) = (dir[0], dir[1]);
        Polyhedron::new(2, vec![(vec![q(-a), q(-b)], q(0))], vec![(vec![q(b), q(-a)], q(0))]).unwrap()
    }

    #[test]
    fn standard_line_is_balanced() {
        let line = DeltaForm::from_weights(2, 1, vec![(ray(&[1, 0]), q(1)), (ray(&[0, 1]), q(1)), (ray(&[-1, -1]), q(1))])
            .unwrap();
        assert!(check_balanced(&line).balanced);
        assert!(boundary1(&line).unwrap().is_zero());
    }

    #[test]
    fn two_rays_fail_at_origin() {
        let f = DeltaForm::from_weights(2, 1, vec![(ray(&[1, 0]), q(1)), (ray(&[0, 1]), q(1))]).unwrap();
        let rep = check_balanced(&f);
        assert!(!rep.balanced);
        assert_eq!(rep.failing_faces, vec![Polyhedron::point(&[q(0), q(0)])]);
        assert!(matches!(boundary1(&f), Err(DeltaError::NotBalanced { .. })));
    }

    #[test]
    fn half_line_boundary() {
        let half = Polyhedron::new(1, vec![(vec![q(-1)], q(0))], vec![]).unwrap();
        let a = DeltaForm::new(1, (0, 1, 0), vec![(half.clone(), Superform::d2x(1, 0))]).unwrap();
        let b = boundary1(&a).unwrap();
        let origin = DeltaForm::from_weights(1, 1, vec![(Polyhedron::point(&[q(0)]), q(1))]).unwrap();
        assert!(b.equal(&origin).unwrap());
        let x = crate::superforms::Poly::var(1, 0);
        let a2 = DeltaForm::new(1, (0, 1, 0), vec![(half, Superform::d2x(1, 0).mul_poly(&x))]).unwrap();
        assert!(boundary1(&a2).unwrap().is_zero());
    }
}
