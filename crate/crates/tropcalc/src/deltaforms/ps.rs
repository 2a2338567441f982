//! Piecewise smooth (piecewise polynomial) functions and forms.

use std::collections::BTreeMap;

use crate::linalg::rat::Rat;
use crate::polyhedra::{arrangement_refinement, decomposition_of_pl, AffineForm, Complex, PlKind, Polyhedron};
use crate::superforms::{reduce_to_hull, Poly, Superform};

use super::form::DeltaForm;
use super::star::stars;
use super::DeltaError;

/// A continuous function that is polynomial on each top-dimensional region of
/// a polyhedral complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsFunction {
    rank: usize,
    pieces: Vec<(Polyhedron, Poly)>,
}

/// A piecewise smooth superform: a superform on each top-dimensional region,
/// with matching restrictions on shared faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsForm {
    rank: usize,
    bidegree: (usize, usize),
    pieces: Vec<(Polyhedron, Superform)>,
}

impl PsFunction {
    /// A single polynomial on all of ℝʳ.
    pub fn polynomial(f: Poly) -> PsFunction {
        PsFunction { rank: f.rank(), pieces: vec![(Polyhedron::full_space(f.rank()), f)] }
    }

    /// max (or min) of integral affine forms.
    pub fn from_pl(forms: &[AffineForm], kind: PlKind) -> Result<PsFunction, DeltaError> {
        let dec = decomposition_of_pl(forms, kind)?;
        let mut pieces: Vec<(Polyhedron, Poly)> = dec
            .regions
            .into_iter()
            .map(|(region, i)| (region, Poly::affine(&forms[i].linear, &forms[i].constant)))
            .collect();
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(PsFunction { rank: forms[0].linear.len(), pieces })
    }

    /// max{forms} as a convenience wrapper.
    pub fn max_of(forms: &[AffineForm]) -> Result<PsFunction, DeltaError> {
        PsFunction::from_pl(forms, PlKind::Max)
    }

    pub fn min_of(forms: &[AffineForm]) -> Result<PsFunction, DeltaError> {
        PsFunction::from_pl(forms, PlKind::Min)
    }

    /// Builds from explicit full-dimensional regions. Regions that do not meet
    /// face to face are refined to a common complex, then continuity across
    /// shared facets is verified.
    pub fn from_pieces(rank: usize, pieces: Vec<(Polyhedron, Poly)>) -> Result<PsFunction, DeltaError> {
        for (region, f) in &pieces {
            if region.ambient_rank() != rank || f.rank() != rank {
                return Err(DeltaError::AmbientMismatch { left: rank, right: region.ambient_rank().max(f.rank()) });
            }
            if region.dim() != rank {
                return Err(DeltaError::BadCell("piecewise smooth regions must be full-dimensional".into()));
            }
        }
        let regions: Vec<Polyhedron> = pieces.iter().map(|(c, _)| c.clone()).collect();
        let face_to_face = Complex::from_cells(rank, &regions).is_ok_and(|c| c.is_intersection_closed());
        let split = if face_to_face {
            regions.into_iter().map(|c| vec![c]).collect()
        } else {
            arrangement_refinement(&regions)
        };
        let mut refined: BTreeMap<Polyhedron, Poly> = BTreeMap::new();
        for (parts, (_, f)) in split.into_iter().zip(&pieces) {
            for part in parts {
                match refined.get(&part) {
                    Some(g) if g != f => return Err(DeltaError::NotContinuous),
                    Some(_) => {}
                    None => {
                        refined.insert(part, f.clone());
                    }
                }
            }
        }
        let out = PsFunction { rank, pieces: refined.into_iter().collect() };
        out.check_continuity()?;
        Ok(out)
    }

    fn check_continuity(&self) -> Result<(), DeltaError> {
        let graph = DeltaForm::from_complex(
            self.rank,
            (0, 0, 0),
            self.pieces.iter().map(|(c, _)| (c.clone(), Superform::constant(self.rank, Rat::one()))).collect(),
        );
        // cell order of `graph` equals piece order: both are sorted and distinct
        for star in stars(&graph) {
            let restricted: Vec<Superform> = star
                .entries
                .iter()
                .map(|e| reduce_to_hull(&star.face, &Superform::function(self.pieces[e.cell].1.clone())))
                .collect();
            if restricted.windows(2).any(|w| w[0] != w[1]) {
                return Err(DeltaError::NotContinuous);
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pieces(&self) -> &[(Polyhedron, Poly)] {
        &self.pieces
    }

    /// Value at a point of the domain.
    pub fn eval(&self, x: &[Rat]) -> Option<Rat> {
        self.pieces.iter().find(|(c, _)| c.contains_point(x)).map(|(_, f)| f.eval(x))
    }

    /// Whether every piece is affine.
    pub fn is_piecewise_linear(&self) -> bool {
        self.pieces.iter().all(|(_, f)| f.degree() <= 1)
    }

    fn combine(&self, other: &PsFunction, op: impl Fn(&Poly, &Poly) -> Poly) -> Result<PsFunction, DeltaError> {
        if self.rank != other.rank {
            return Err(DeltaError::AmbientMismatch { left: self.rank, right: other.rank });
        }
        let mut pieces = BTreeMap::new();
        for (a, f) in &self.pieces {
            for (b, g) in &other.pieces {
                if let Some(c) = a.intersect(b) {
                    if c.dim() == self.rank {
                        pieces.entry(c).or_insert_with(|| op(f, g));
                    }
                }
            }
        }
        Ok(PsFunction { rank: self.rank, pieces: pieces.into_iter().collect() })
    }

    pub fn add(&self, other: &PsFunction) -> Result<PsFunction, DeltaError> {
        self.combine(other, |f, g| f + g)
    }

    pub fn sub(&self, other: &PsFunction) -> Result<PsFunction, DeltaError> {
        self.combine(other, |f, g| f - g)
    }

    pub fn mul(&self, other: &PsFunction) -> Result<PsFunction, DeltaError> {
        self.combine(other, |f, g| f * g)
    }

    pub fn scale(&self, c: &Rat) -> PsFunction {
        PsFunction { rank: self.rank, pieces: self.pieces.iter().map(|(r, f)| (r.clone(), f.scale(c))).collect() }
    }

    pub fn mul_poly(&self, g: &Poly) -> PsFunction {
        PsFunction { rank: self.rank, pieces: self.pieces.iter().map(|(r, f)| (r.clone(), f * g)).collect() }
    }

    pub fn to_form(&self) -> PsForm {
        PsForm {
            rank: self.rank,
            bidegree: (0, 0),
            pieces: self.pieces.iter().map(|(r, f)| (r.clone(), Superform::function(f.clone()))).collect(),
        }
    }

    /// d′ applied piecewise.
    pub fn dp1(&self) -> PsForm {
        self.to_form().dp1()
    }

    /// d″ applied piecewise.
    pub fn dp2(&self) -> PsForm {
        self.to_form().dp2()
    }

    /// The corresponding codimension-0 δ-form.
    pub fn to_delta_form(&self) -> DeltaForm {
        self.to_form().to_delta_form()
    }
}

impl PsForm {
    /// A global superform viewed as a piecewise smooth form.
    pub fn global(alpha: Superform) -> PsForm {
        let r = alpha.rank();
        PsForm { rank: r, bidegree: alpha.bidegree(), pieces: vec![(Polyhedron::full_space(r), alpha)] }
    }

    /// Builds from full-dimensional regions of one polyhedral complex.
    pub fn from_pieces(rank: usize, bidegree: (usize, usize), pieces: Vec<(Polyhedron, Superform)>) -> PsForm {
        PsForm { rank, bidegree, pieces }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.bidegree
    }

    pub fn pieces(&self) -> &[(Polyhedron, Superform)] {
        &self.pieces
    }

    fn map(&self, bidegree: (usize, usize), f: impl Fn(&Superform) -> Superform) -> PsForm {
        PsForm { rank: self.rank, bidegree, pieces: self.pieces.iter().map(|(r, a)| (r.clone(), f(a))).collect() }
    }

    pub fn dp1(&self) -> PsForm {
        self.map((self.bidegree.0 + 1, self.bidegree.1), |a| a.d1())
    }

    pub fn dp2(&self) -> PsForm {
        self.map((self.bidegree.0, self.bidegree.1 + 1), |a| a.d2())
    }

    pub fn to_delta_form(&self) -> DeltaForm {
        let (p, q) = self.bidegree;
        DeltaForm::from_complex(self.rank, (p, q, 0), self.pieces.clone())
    }
}

/// Splits each cell of `form` along the given full-dimensional regions.
/// Returns (piece, cell index, region index); a piece lying in several regions
/// is reported once, with the first region.
pub(crate) fn refine_by_regions(form: &DeltaForm, regions: &[&Polyhedron]) -> Vec<(Polyhedron, usize, usize)> {
    let d = form.cell_dim();
    let mut seen = BTreeMap::new();
    for (ci, (cell, _)) in form.cells().iter().enumerate() {
        for (ri, region) in regions.iter().enumerate() {
            if let Some(piece) = cell.intersect(region) {
                if piece.dim() == d {
                    seen.entry(piece).or_insert((ci, ri));
                }
            }
        }
    }
    seen.into_iter().map(|(piece, (ci, ri))| (piece, ci, ri)).collect()
}

/// `ψ ∧ α = Σ ψ_R ∧ α_σ [σ ∩ R]`.
pub fn ps_wedge(psi: &PsForm, alpha: &DeltaForm) -> Result<DeltaForm, DeltaError> {
    if psi.rank != alpha.rank() {
        return Err(DeltaError::AmbientMismatch { left: psi.rank, right: alpha.rank() });
    }
    let (p, q, l) = alpha.form_type();
    let ty = (p + psi.bidegree.0, q + psi.bidegree.1, l);
    let regions: Vec<&Polyhedron> = psi.pieces.iter().map(|(r, _)| r).collect();
    let cells = refine_by_regions(alpha, &regions)
        .into_iter()
        .map(|(piece, ci, ri)| {
            let coeff = psi.pieces[ri].1.w(&alpha.cells()[ci].1);
            (piece, coeff)
        })
        .collect();
    Ok(DeltaForm::from_complex(alpha.rank(), ty, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn form(a: &[i64], c: i64) -> AffineForm {
        AffineForm::new(a.iter().map(|&x| q(x)).collect(), q(c))
    }

    #[test]
    fn max_pieces_and_eval() {
        let phi = PsFunction::max_of(&[form(&[1, 0], 0), form(&[0, 1], 0), form(&[0, 0], 0)]).unwrap();
        assert_eq!(phi.pieces().len(), 3);
        assert_eq!(phi.eval(&[q(2), q(-1)]), Some(q(2)));
        assert_eq!(phi.eval(&[q(-3), q(-1)]), Some(q(0)));
        assert!(phi.is_piecewise_linear());
    }

    #[test]
    fn discontinuous_pieces_rejected() {
        let left = Polyhedron::new(1, vec![(vec![q(1)], q(0))], vec![]).unwrap();
        let right = Polyhedron::new(1, vec![(vec![q(-1)], q(0))], vec![]).unwrap();
        let ok = PsFunction::from_pieces(1, vec![(left.clone(), Poly::zero(1)), (right.clone(), Poly::var(1, 0))]);
        assert!(ok.is_ok());
        let bad = PsFunction::from_pieces(1, vec![(left, Poly::one(1)), (right, Poly::var(1, 0))]);
        assert!(matches!(bad, Err(DeltaError::NotContinuous)));
    }

    #[test]
    fn wedge_with_one_is_identity() {
        let line = DeltaForm::full_space(2);
        let one = PsForm::global(Superform::constant(2, q(1)));
        assert!(ps_wedge(&one, &line).unwrap().equal(&line).unwrap());
    }
}
