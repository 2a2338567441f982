//! δ-forms: weighted polyhedral complexes with superform coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::linalg::matrix::RatMat;
use crate::linalg::rat::Rat;
use crate::polyhedra::{cut_by, hyperplanes_of, Polyhedron};
use crate::superforms::{reduce_to_hull, RatAffine, Superform};

use super::DeltaError;

/// Type `(p, q, l)`: coefficients of bidegree `(p, q)` on cells of codimension `l`.
pub type FormType = (usize, usize, usize);

/// `Σ α_σ [σ]` over cells of one codimension.
///
/// Cells are kept sorted and pairwise distinct, coefficients are stored as the
/// canonical representative on each cell's affine hull and are never zero.
#[derive(Clone, PartialEq, Eq)]
pub struct DeltaForm {
    rank: usize,
    ty: FormType,
    cells: Vec<(Polyhedron, Superform)>,
}

impl DeltaForm {
    pub fn zero(rank: usize, ty: FormType) -> DeltaForm {
        DeltaForm { rank, ty, cells: Vec::new() }
    }

    /// `[ℝʳ]` with weight 1.
    pub fn full_space(rank: usize) -> DeltaForm {
        DeltaForm {
            rank,
            ty: (0, 0, 0),
            cells: vec![(Polyhedron::full_space(rank), Superform::constant(rank, Rat::one()))],
        }
    }

    /// Builds a δ-form from arbitrary cells of one codimension. Overlapping
    /// cells are summed after refining by their common hyperplane arrangement.
    pub fn new(rank: usize, ty: FormType, cells: Vec<(Polyhedron, Superform)>) -> Result<DeltaForm, DeltaError> {
        validate(rank, ty, &cells)?;
        Ok(normalize(rank, ty, cells))
    }

    /// A tropical cycle from weighted cells.
    pub fn from_weights(rank: usize, l: usize, cells: Vec<(Polyhedron, Rat)>) -> Result<DeltaForm, DeltaError> {
        let cells = cells.into_iter().map(|(c, w)| (c, Superform::constant(rank, w))).collect();
        DeltaForm::new(rank, (0, 0, l), cells)
    }

    /// Builds from cells already known to be pieces of one polyhedral complex
    /// (faces of a common refinement). Equal cells are merged and coefficients
    /// reduced; no arrangement refinement is performed.
    pub fn from_complex(rank: usize, ty: FormType, cells: Vec<(Polyhedron, Superform)>) -> DeltaForm {
        debug_assert!(validate(rank, ty, &cells).is_ok());
        let mut map: BTreeMap<Polyhedron, Superform> = BTreeMap::new();
        for (c, a) in cells {
            if a.is_zero() {
                continue;
            }
            let a = reduce_to_hull(&c, &a);
            match map.get_mut(&c) {
                Some(existing) => *existing = existing.plus(&a),
                None => {
                    map.insert(c, a);
                }
            }
        }
        let cells = map.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        DeltaForm { rank, ty, cells }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn form_type(&self) -> FormType {
        self.ty
    }

    /// Dimension of the cells, `rank − l`.
    pub fn cell_dim(&self) -> usize {
        self.rank - self.ty.2
    }

    pub fn cells(&self) -> &[(Polyhedron, Superform)] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether every coefficient is a constant (0,0)-form.
    pub fn is_cycle(&self) -> bool {
        self.ty.0 == 0
            && self.ty.1 == 0
            && self.cells.iter().all(|(_, a)| a.as_function().is_some_and(|f| f.is_constant()))
    }

    /// Constant weights of a tropical cycle.
    pub fn weights(&self) -> Option<Vec<(Polyhedron, Rat)>> {
        if !self.is_cycle() {
            return None;
        }
        Some(
            self.cells
                .iter()
                .map(|(c, a)| (c.clone(), a.as_function().unwrap().constant_term()))
                .collect(),
        )
    }

    fn check_compatible(&self, o: &DeltaForm) -> Result<(), DeltaError> {
        if self.rank != o.rank {
            return Err(DeltaError::AmbientMismatch { left: self.rank, right: o.rank });
        }
        if self.ty != o.ty && !self.is_zero() && !o.is_zero() {
            return Err(DeltaError::TypeMismatch { left: self.ty, right: o.ty });
        }
        Ok(())
    }

    fn effective_type(&self, o: &DeltaForm) -> FormType {
        if self.is_zero() {
            o.ty
        } else {
            self.ty
        }
    }

    pub fn add(&self, o: &DeltaForm) -> Result<DeltaForm, DeltaError> {
        self.check_compatible(o)?;
        let ty = self.effective_type(o);
        let mut cells = self.cells.clone();
        cells.extend(o.cells.iter().cloned());
        Ok(normalize(self.rank, ty, cells))
    }

    pub fn sub(&self, o: &DeltaForm) -> Result<DeltaForm, DeltaError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DeltaForm {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> DeltaForm {
        if c.is_zero() {
            return DeltaForm::zero(self.rank, self.ty);
        }
        DeltaForm {
            rank: self.rank,
            ty: self.ty,
            cells: self.cells.iter().map(|(p, a)| (p.clone(), a.scale(c))).collect(),
        }
    }

    /// Semantic equality: the difference is the zero current.
    pub fn equal(&self, o: &DeltaForm) -> Result<bool, DeltaError> {
        self.check_compatible(o)?;
        if self.cells == o.cells {
            return Ok(true);
        }
        let mut cells = self.cells.clone();
        cells.extend(o.cells.iter().map(|(p, a)| (p.clone(), a.neg())));
        Ok(is_zero_current(cells))
    }

    /// Applies a map to every coefficient; cells are unchanged.
    pub fn map_coefficients(&self, ty: FormType, f: impl Fn(&Polyhedron, &Superform) -> Superform) -> DeltaForm {
        let cells = self.cells.iter().map(|(p, a)| (p.clone(), f(p, a))).collect();
        DeltaForm::from_complex(self.rank, ty, cells)
    }

    /// Polyhedral derivative d′_P.
    pub fn dp1(&self) -> DeltaForm {
        let (p, q, l) = self.ty;
        self.map_coefficients((p + 1, q, l), |_, a| a.d1())
    }

    /// Polyhedral derivative d″_P.
    pub fn dp2(&self) -> DeltaForm {
        let (p, q, l) = self.ty;
        self.map_coefficients((p, q + 1, l), |_, a| a.d2())
    }

    /// J on δ-forms: `(−1)^l Σ J(α_σ)[σ]`.
    pub fn j_op(&self) -> DeltaForm {
        let (p, q, l) = self.ty;
        let twist = l % 2 == 1;
        self.map_coefficients((q, p, l), |_, a| if twist { a.j_op().neg() } else { a.j_op() })
    }

    /// Refines every cell by the given hyperplanes (same current).
    pub fn refine_by_hyperplanes(&self, hs: &[crate::linalg::lp::Constraint]) -> DeltaForm {
        let mut cells = Vec::new();
        for (c, a) in &self.cells {
            for piece in cut_by(c, hs) {
                cells.push((piece, a.clone()));
            }
        }
        DeltaForm::from_complex(self.rank, self.ty, cells)
    }

    /// The translate by `v`: cells σ + v with coefficients `x ↦ α_σ(x − v)`.
    pub fn translate(&self, v: &[Rat]) -> DeltaForm {
        let back = RatAffine::new(RatMat::identity(self.rank), v.iter().map(|x| -x).collect());
        let cells = self
            .cells
            .iter()
            .map(|(c, a)| (c.translate(v), a.pullback(&back).expect("matching rank")))
            .collect();
        DeltaForm::from_complex(self.rank, self.ty, cells)
    }

    /// Points of the support that are relative-interior points of cells.
    pub fn support_contains(&self, x: &[Rat]) -> bool {
        self.cells.iter().any(|(c, _)| c.contains_point(x))
    }
}

fn validate(rank: usize, ty: FormType, cells: &[(Polyhedron, Superform)]) -> Result<(), DeltaError> {
    let (p, q, l) = ty;
    if l > rank && !cells.is_empty() {
        return Err(DeltaError::BadCell("codimension exceeds rank".into()));
    }
    for (c, a) in cells {
        if c.ambient_rank() != rank || a.rank() != rank {
            return Err(DeltaError::AmbientMismatch { left: rank, right: c.ambient_rank().max(a.rank()) });
        }
        if c.dim() != rank - l {
            return Err(DeltaError::BadCell(format!("cell of dimension {} in a codimension-{l} form", c.dim())));
        }
        if !a.is_zero() && a.bidegree() != (p, q) {
            return Err(DeltaError::BadCell(format!("coefficient of bidegree {:?}, expected {:?}", a.bidegree(), (p, q))));
        }
    }
    Ok(())
}

/// Groups cells by affine hull.
fn group_by_hull(cells: Vec<(Polyhedron, Superform)>) -> BTreeMap<Polyhedron, Vec<(Polyhedron, Superform)>> {
    let mut groups: BTreeMap<Polyhedron, Vec<(Polyhedron, Superform)>> = BTreeMap::new();
    for (c, a) in cells {
        if a.is_zero() {
            continue;
        }
        let a = reduce_to_hull(&c, &a);
        groups.entry(c.affine_hull()).or_default().push((c, a));
    }
    groups
}

/// Whether any two distinct cells intersect in a common face of both.
fn meet_face_to_face(cells: &[(Polyhedron, Superform)]) -> bool {
    let mut faces: Vec<Option<BTreeSet<Polyhedron>>> = vec![None; cells.len()];
    let mut is_face = |k: usize, m: &Polyhedron| {
        faces[k].get_or_insert_with(|| cells[k].0.faces().into_iter().collect()).contains(m)
    };
    for (i, (a, _)) in cells.iter().enumerate() {
        for (j, (b, _)) in cells.iter().enumerate().skip(i + 1) {
            if let Some(m) = a.intersect(b) {
                if !is_face(i, &m) || !is_face(j, &m) {
                    return false;
                }
            }
        }
    }
    true
}

/// Merges identical cells by summing coefficients; drops zeros.
fn merge(cells: Vec<(Polyhedron, Superform)>) -> Vec<(Polyhedron, Superform)> {
    let mut map: BTreeMap<Polyhedron, Superform> = BTreeMap::new();
    for (c, a) in cells {
        match map.get_mut(&c) {
            Some(e) => *e = e.plus(&a),
            None => {
                map.insert(c, a);
            }
        }
    }
    map.into_iter().filter(|(_, a)| !a.is_zero()).collect()
}

fn refine_group(cells: Vec<(Polyhedron, Superform)>, hs: &[crate::linalg::lp::Constraint]) -> Vec<(Polyhedron, Superform)> {
    let merged = merge(cells);
    if merged.len() <= 1 && hs.is_empty() {
        return merged;
    }
    let mut out = Vec::new();
    for (c, a) in merged {
        for piece in cut_by(&c, hs) {
            out.push((piece, a.clone()));
        }
    }
    merge(out)
}

/// Whether `Σ α_σ[σ]` is the zero current. Cells in distinct affine hulls
/// cannot cancel, so each hull is handled separately.
pub(crate) fn is_zero_current(cells: Vec<(Polyhedron, Superform)>) -> bool {
    for (_, group) in group_by_hull(cells) {
        let merged = merge(group);
        if merged.is_empty() {
            continue;
        }
        let polys: Vec<Polyhedron> = merged.iter().map(|(c, _)| c.clone()).collect();
        let hs = hyperplanes_of(&polys);
        if !refine_group(merged, &hs).is_empty() {
            return false;
        }
    }
    true
}

/// Sums arbitrary cells into a δ-form whose cells are faces of one hyperplane
/// arrangement.
pub(crate) fn normalize(rank: usize, ty: FormType, cells: Vec<(Polyhedron, Superform)>) -> DeltaForm {
    let groups = group_by_hull(cells);
    let merged: Vec<(Polyhedron, Superform)> = groups.values().flat_map(|g| merge(g.clone())).collect();
    if meet_face_to_face(&merged) {
        let mut cells = merged;
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        return DeltaForm { rank, ty, cells };
    }
    // cancel within each hull first, so that vanishing pieces add no hyperplanes
    let mut survivors: Vec<(Polyhedron, Superform)> = Vec::new();
    for (_, group) in groups {
        let merged = merge(group);
        let polys: Vec<Polyhedron> = merged.iter().map(|(c, _)| c.clone()).collect();
        let hs = hyperplanes_of(&polys);
        survivors.extend(refine_group(merged, &hs));
    }
    let polys: Vec<Polyhedron> = survivors.iter().map(|(c, _)| c.clone()).collect();
    let hs = hyperplanes_of(&polys);
    let cells = refine_group(survivors, &hs);
    DeltaForm { rank, ty, cells }
}

impl fmt::Debug for DeltaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DeltaForm(rank {}, type {:?}, {} cells)", self.rank, self.ty, self.cells.len())?;
        for (c, a) in &self.cells {
            writeln!(f, "  {c:?}: {a}")?;
        }
        Ok(())
    }
}
