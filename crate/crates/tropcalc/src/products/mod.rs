//! Cross products and ∧-products of δ-forms: the diagonal construction, the
//! transversal formula and the generic-translation cross-check.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::deltaforms::{check_balanced, iterated_corner_locus, DeltaError, DeltaForm, PsFunction};
use crate::linalg::lattice::{lattice_index, Lattice, LatticeIndex};
use crate::linalg::rat::Rat;
use crate::morphisms::{pushforward_cells, AffineMap, MorphismError};
use crate::polyhedra::{AffineForm, Polyhedron};
use crate::superforms::Superform;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("ambient rank mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("δ-form is not balanced")]
    NotBalanced,
    #[error("cells {left:?} and {right:?} do not meet transversally")]
    NotTransversal { left: Polyhedron, right: Polyhedron },
    #[error("translation vector is not generic at ε = {eps}")]
    NonGenericVector { eps: Rat },
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

impl From<MorphismError> for ProductError {
    fn from(e: MorphismError) -> ProductError {
        match e {
            MorphismError::Delta(d) => ProductError::Delta(d),
            other => unreachable!("diagonal push-forward is injective on every cell: {other}"),
        }
    }
}

impl From<ProductError> for MorphismError {
    fn from(e: ProductError) -> MorphismError {
        match e {
            ProductError::Delta(d) => MorphismError::Delta(d),
            ProductError::NotBalanced => MorphismError::Delta(DeltaError::NotBalanced { faces: 0 }),
            ProductError::AmbientMismatch { left, right } => MorphismError::RankMismatch { expected: left, found: right },
            other => unreachable!("not produced by the diagonal wedge: {other}"),
        }
    }
}

/// α × β on ℝ^{r₁+r₂} with coefficients p₁*α_σ ∧ p₂*β_{σ′}.
pub fn cross(alpha: &DeltaForm, beta: &DeltaForm) -> DeltaForm {
    let (r1, r2) = (alpha.rank(), beta.rank());
    let r = r1 + r2;
    let (p, q, l) = alpha.form_type();
    let (p2, q2, l2) = beta.form_type();
    let mut cells = Vec::with_capacity(alpha.cells().len() * beta.cells().len());
    for (s1, a) in alpha.cells() {
        let a = a.embed(r, 0);
        for (s2, b) in beta.cells() {
            cells.push((s1.product(s2), a.w(&b.embed(r, r1))));
        }
    }
    DeltaForm::from_complex(r, (p + p2, q + q2, l + l2), cells)
}

fn sum_type(alpha: &DeltaForm, beta: &DeltaForm) -> (usize, usize, usize) {
    let (p, q, l) = alpha.form_type();
    let (p2, q2, l2) = beta.form_type();
    (p + p2, q + q2, l + l2)
}

fn check_pair(alpha: &DeltaForm, beta: &DeltaForm) -> Result<(), ProductError> {
    if alpha.rank() != beta.rank() {
        return Err(ProductError::AmbientMismatch { left: alpha.rank(), right: beta.rank() });
    }
    Ok(())
}

/// max{xᵢ, yᵢ} on ℝ^{2r} for i = 1..r.
fn diagonal_functions(r: usize) -> Vec<PsFunction> {
    (0..r)
        .map(|i| {
            let mut x = vec![Rat::zero(); 2 * r];
            x[i] = Rat::one();
            let mut y = vec![Rat::zero(); 2 * r];
            y[r + i] = Rat::one();
            PsFunction::max_of(&[AffineForm::new(x, Rat::zero()), AffineForm::new(y, Rat::zero())])
                .expect("integral forms")
        })
        .collect()
}

/// α ∧ β = p₁,*([Δ] ∧ (α × β)) with [Δ] = div(max{x₁,y₁})⋯div(max{xᵣ,yᵣ}).
pub fn diagonal_wedge(alpha: &DeltaForm, beta: &DeltaForm) -> Result<DeltaForm, ProductError> {
    check_pair(alpha, beta)?;
    let r = alpha.rank();
    let ty = sum_type(alpha, beta);
    if !check_balanced(alpha).balanced || !check_balanced(beta).balanced {
        return Err(ProductError::NotBalanced);
    }
    if alpha.is_zero() || beta.is_zero() || ty.2 > r {
        return Ok(DeltaForm::zero(r, ty));
    }
    let on_diagonal = iterated_corner_locus(&diagonal_functions(r), &cross(alpha, beta))?;
    let out = pushforward_cells(&AffineMap::projection(r, r, true), &on_diagonal)?;
    if out.is_zero() {
        return Ok(DeltaForm::zero(r, ty));
    }
    Ok(out)
}

/// Index [ℤʳ : N₁ + N₂], or `None` if the sum does not span.
fn span_index(r: usize, n1: &Lattice, n2: &Lattice) -> Option<BigInt> {
    match lattice_index(&n1.sum(n2), &Lattice::standard(r)) {
        Ok(LatticeIndex::Finite(i)) => Some(i),
        _ => None,
    }
}

fn cell_list(form: &DeltaForm) -> Vec<&Polyhedron> {
    form.cells().iter().map(|(c, _)| c).collect()
}

/// One transversal meeting: the cell pair, the intersection and the index.
struct Meeting {
    left: usize,
    right: usize,
    cell: Polyhedron,
    index: BigInt,
}

fn meetings(r: usize, left: &[&Polyhedron], right: &[&Polyhedron]) -> Result<Vec<Meeting>, ProductError> {
    let mut out = Vec::new();
    for (i, s1) in left.iter().enumerate() {
        for (j, s2) in right.iter().enumerate() {
            let Some(m) = s1.intersect(s2) else { continue };
            let not_transversal = || ProductError::NotTransversal { left: (*s1).clone(), right: (*s2).clone() };
            let index = span_index(r, s1.lattice(), s2.lattice()).ok_or_else(not_transversal)?;
            let x = m.relint_point();
            if !s1.contains_in_relint(x) || !s2.contains_in_relint(x) {
                return Err(not_transversal());
            }
            out.push(Meeting { left: i, right: j, cell: m, index });
        }
    }
    Ok(out)
}

/// Σ (α_{σ₁} ∧ β_{σ₂})·[ℤʳ : N_{σ₁} + N_{σ₂}] [σ₁ ∩ σ₂] for transversal cells.
pub fn transversal_wedge(alpha: &DeltaForm, beta: &DeltaForm) -> Result<DeltaForm, ProductError> {
    check_pair(alpha, beta)?;
    let r = alpha.rank();
    let ty = sum_type(alpha, beta);
    let cells: Vec<(Polyhedron, Superform)> = meetings(r, &cell_list(alpha), &cell_list(beta))?
        .into_iter()
        .map(|m| {
            let coeff = alpha.cells()[m.left].1.w(&beta.cells()[m.right].1).scale(&Rat::from(m.index));
            (m.cell, coeff)
        })
        .collect();
    if cells.is_empty() || ty.2 > r {
        return Ok(DeltaForm::zero(r, ty));
    }
    Ok(DeltaForm::new(r, ty, cells)?)
}

/// Outcome of the generic-translation cross-check.
#[derive(Clone, Debug)]
pub struct TranslationReport {
    /// The ε at which two consecutive results agreed.
    pub stabilized_at: Option<Rat>,
    /// The ε → 0 limit of α ∧ (β + εv).
    pub limit: Option<DeltaForm>,
    pub diagonal: DeltaForm,
    pub matches: bool,
}

/// Computes α ∧ (β + εv) transversally along a decreasing schedule, takes the
/// ε → 0 limit once the meeting pattern stabilizes and compares it with the
/// diagonal construction.
pub fn translated_wedge_check(
    alpha: &DeltaForm,
    beta: &DeltaForm,
    v: &[Rat],
    schedule: &[Rat],
) -> Result<TranslationReport, ProductError> {
    check_pair(alpha, beta)?;
    if v.len() != alpha.rank() {
        return Err(ProductError::AmbientMismatch { left: alpha.rank(), right: v.len() });
    }
    let diagonal = diagonal_wedge(alpha, beta)?;
    let r = alpha.rank();
    let ty = sum_type(alpha, beta);
    let mut previous: Option<BTreeSet<(usize, usize, BigInt)>> = None;
    for eps in schedule {
        let shift: Vec<Rat> = v.iter().map(|x| x * eps).collect();
        let moved: Vec<Polyhedron> = beta.cells().iter().map(|(c, _)| c.translate(&shift)).collect();
        let found = match meetings(r, &cell_list(alpha), &moved.iter().collect::<Vec<_>>()) {
            Ok(m) => m,
            Err(ProductError::NotTransversal { .. }) => return Err(ProductError::NonGenericVector { eps: eps.clone() }),
            Err(e) => return Err(e),
        };
        let pattern: BTreeSet<(usize, usize, BigInt)> = found.iter().map(|m| (m.left, m.right, m.index.clone())).collect();
        if previous.as_ref() == Some(&pattern) {
            let d = r.saturating_sub(ty.2);
            let mut cells = Vec::new();
            for (i, j, idx) in &pattern {
                let Some(cell) = alpha.cells()[*i].0.intersect(&beta.cells()[*j].0) else { continue };
                if cell.dim() != d {
                    continue;
                }
                let coeff = alpha.cells()[*i].1.w(&beta.cells()[*j].1).scale(&Rat::from(idx.clone()));
                cells.push((cell, coeff));
            }
            let limit = if cells.is_empty() { DeltaForm::zero(r, ty) } else { DeltaForm::new(r, ty, cells)? };
            let matches = limit.equal(&diagonal)?;
            return Ok(TranslationReport { stabilized_at: Some(eps.clone()), limit: Some(limit), diagonal, matches });
        }
        previous = Some(pattern);
    }
    Ok(TranslationReport { stabilized_at: None, limit: None, diagonal, matches: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deltaforms::corner_locus;
    use crate::linalg::rat::q;

    fn form(a: &[i64], c: i64) -> AffineForm {
        AffineForm::new(a.iter().map(|&x| q(x)).collect(), q(c))
    }

    fn standard_line() -> DeltaForm {
        let phi = PsFunction::max_of(&[form(&[1, 0], 0), form(&[0, 1], 0), form(&[0, 0], 0)]).unwrap();
        corner_locus(&phi, &DeltaForm::full_space(2)).unwrap()
    }

    fn line(dir: &[i64], through: &[i64]) -> DeltaForm {
        let (a, b) = (dir[0], dir[1]);
        let c = b * through[0] - a * through[1];
        let cell = Polyhedron::new(2, vec![], vec![(vec![q(b), q(-a)], q(c))]).unwrap();
        DeltaForm::from_weights(2, 1, vec![(cell, q(1))]).unwrap()
    }

    fn origin(w: i64) -> DeltaForm {
        DeltaForm::from_weights(2, 2, vec![(Polyhedron::point(&[q(0), q(0)]), q(w))]).unwrap()
    }

    #[test]
    fn cross_of_lines_and_points() {
        let c = cross(&DeltaForm::full_space(1), &DeltaForm::full_space(1));
        assert!(c.equal(&DeltaForm::full_space(2)).unwrap());
        let pt = DeltaForm::from_weights(1, 1, vec![(Polyhedron::point(&[q(0)]), q(2))]).unwrap();
        let v = cross(&pt, &DeltaForm::full_space(1));
        assert!(v.equal(&line(&[0, 1], &[0, 0]).scale(&q(2))).unwrap());
    }

    #[test]
    fn line_self_intersection() {
        let l = standard_line();
        assert!(diagonal_wedge(&l, &l).unwrap().equal(&origin(1)).unwrap());
        assert!(diagonal_wedge(&DeltaForm::full_space(2), &l).unwrap().equal(&l).unwrap());
    }

    #[test]
    fn transversal_indices() {
        let x_axis = line(&[1, 0], &[0, 0]);
        assert!(transversal_wedge(&x_axis, &line(&[0, 1], &[0, 0])).unwrap().equal(&origin(1)).unwrap());
        let steep = line(&[1, 2], &[0, 0]);
        assert!(transversal_wedge(&x_axis, &steep).unwrap().equal(&origin(2)).unwrap());
        assert!(diagonal_wedge(&x_axis, &steep).unwrap().equal(&origin(2)).unwrap());
        assert!(transversal_wedge(&x_axis, &line(&[1, 0], &[0, 1])).unwrap().is_zero());
    }

    #[test]
    fn translated_line_stabilizes() {
        let l = standard_line();
        let sched = [Rat::frac(1, 2), Rat::frac(1, 4), Rat::frac(1, 8)];
        let rep = translated_wedge_check(&l, &l, &[q(1), q(2)], &sched).unwrap();
        assert!(rep.matches, "{:?}", rep.limit);
        let x_axis = line(&[1, 0], &[0, 0]);
        let rep = translated_wedge_check(&x_axis, &x_axis, &[q(3), q(0)], &sched);
        assert!(matches!(rep, Err(ProductError::NonGenericVector { .. })));
    }
}
