//! Corner loci of piecewise smooth functions and the tropical
//! Poincaré–Lelong identity.

use std::collections::BTreeMap;

use crate::polyhedra::Polyhedron;
use crate::superforms::{reduce_to_hull, Superform};

use super::form::DeltaForm;
use super::ps::{ps_wedge, refine_by_regions, PsFunction};
use super::star::{boundary1, require_balanced, stars};
use super::DeltaError;

/// div(φ)·α for a balanced δ-form α.
///
/// φ must be defined on the support of α. At each face τ of the refined
/// complex the coefficient is `Σ_σ ∂_{ω_σ}φ_σ · α_σ|τ − Σᵢ ∂_{bᵢ}φ_τ · βᵢ`.
pub fn corner_locus(phi: &PsFunction, alpha: &DeltaForm) -> Result<DeltaForm, DeltaError> {
    let r = alpha.rank();
    if phi.rank() != r {
        return Err(DeltaError::AmbientMismatch { left: phi.rank(), right: r });
    }
    let (p, q, l) = alpha.form_type();
    let out_ty = (p, q, l + 1);
    if alpha.is_zero() {
        return Ok(DeltaForm::zero(r, out_ty));
    }
    let regions: Vec<&Polyhedron> = phi.pieces().iter().map(|(c, _)| c).collect();
    let split = refine_by_regions(alpha, &regions);
    let mut labels: BTreeMap<Polyhedron, usize> = BTreeMap::new();
    let mut cells = Vec::with_capacity(split.len());
    for (piece, ci, ri) in split {
        labels.insert(piece.clone(), ri);
        cells.push((piece, alpha.cells()[ci].1.clone()));
    }
    let refined = DeltaForm::from_complex(r, alpha.form_type(), cells);
    let st = stars(&refined);
    require_balanced(&refined, &st)?;
    if l >= r {
        return Ok(DeltaForm::zero(r, out_ty));
    }
    let piece_of = |cell: usize| &phi.pieces()[labels[&refined.cells()[cell].0]].1;
    let mut out = Vec::new();
    for star in &st {
        let first = piece_of(star.entries[0].cell);
        if star.entries.iter().all(|e| piece_of(e.cell) == first) {
            // φ is one polynomial near τ, so the contribution vanishes by balancing
            continue;
        }
        let coeffs: Vec<&Superform> = star.entries.iter().map(|e| &refined.cells()[e.cell].1).collect();
        let mut acc = Superform::zero(r, p, q);
        for (e, a) in star.entries.iter().zip(&coeffs) {
            let slope = piece_of(e.cell).directional(&e.normal);
            if !slope.is_zero() {
                acc = acc.plus(&a.mul_poly(&slope));
            }
        }
        for (b, beta) in star.basis.iter().zip(star.along_components(&coeffs)) {
            let slope = first.directional(b);
            if !slope.is_zero() && !beta.is_zero() {
                acc = acc.minus(&beta.mul_poly(&slope));
            }
        }
        let coeff = reduce_to_hull(&star.face, &acc);
        if !coeff.is_zero() {
            out.push((star.face.clone(), coeff));
        }
    }
    Ok(DeltaForm::from_complex(r, out_ty, out))
}

/// Iterated corner locus div(φ_k)⋯div(φ_1)·α.
pub fn iterated_corner_locus(phis: &[PsFunction], alpha: &DeltaForm) -> Result<DeltaForm, DeltaError> {
    phis.iter().try_fold(alpha.clone(), |acc, phi| corner_locus(phi, &acc))
}

/// The two sides of div(φ)·α = ∂′(d″_Pφ ∧ α) + d″_Pφ ∧ ∂′α.
pub fn tropical_pl_sides(phi: &PsFunction, alpha: &DeltaForm) -> Result<(DeltaForm, DeltaForm), DeltaError> {
    let lhs = corner_locus(phi, alpha)?;
    let dphi = phi.dp2();
    let first = boundary1(&ps_wedge(&dphi, alpha)?)?;
    let second = ps_wedge(&dphi, &boundary1(alpha)?)?;
    Ok((lhs, first.add(&second)?))
}

/// Whether the tropical Poincaré–Lelong identity holds for (φ, α).
pub fn tropical_pl_check(phi: &PsFunction, alpha: &DeltaForm) -> Result<bool, DeltaError> {
    let (lhs, rhs) = tropical_pl_sides(phi, alpha)?;
    lhs.equal(&rhs)
}
