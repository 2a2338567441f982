//! Face-closed polyhedral complexes, refinements and piecewise-linear decompositions.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::linalg::lp::Constraint;
use crate::linalg::rat::{primitive_scale, Rat};

use super::polyhedron::Polyhedron;
use super::PolyhedronError;

/// A face-closed set of polyhedra, sorted by decreasing dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    ambient: usize,
    cells: Vec<Polyhedron>,
}

impl Complex {
    /// Face closure of the given cells.
    pub fn from_cells(ambient: usize, cells: &[Polyhedron]) -> Result<Complex, PolyhedronError> {
        let mut set = BTreeSet::new();
        for c in cells {
            if c.ambient_rank() != ambient {
                return Err(PolyhedronError::AmbientMismatch { expected: ambient, found: c.ambient_rank() });
            }
            if set.contains(c) {
                continue;
            }
            for f in c.faces() {
                set.insert(f);
            }
        }
        let mut cells: Vec<Polyhedron> = set.into_iter().collect();
        cells.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
        Ok(Complex { ambient, cells })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn cells(&self) -> &[Polyhedron] {
        &self.cells
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.first().map(|c| c.dim())
    }

    /// Cells that are not a proper face of another cell.
    pub fn maximal_cells(&self) -> Vec<&Polyhedron> {
        let mut covered = BTreeSet::new();
        for c in &self.cells {
            for f in c.facets() {
                covered.insert(f.clone());
            }
        }
        self.cells.iter().filter(|c| !covered.contains(*c)).collect()
    }

    pub fn is_pure(&self) -> bool {
        let m = self.maximal_cells();
        m.windows(2).all(|w| w[0].dim() == w[1].dim())
    }

    pub fn contains_cell(&self, c: &Polyhedron) -> bool {
        self.cells.binary_search_by(|x| c.dim().cmp(&x.dim()).then_with(|| x.cmp(c))).is_ok()
    }

    pub fn support_contains(&self, x: &[Rat]) -> bool {
        self.cells.iter().any(|c| c.contains_point(x))
    }

    /// Whether every two cells meet in a common face (or not at all).
    pub fn is_intersection_closed(&self) -> bool {
        let maximal = self.maximal_cells();
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                if let Some(m) = a.intersect(b) {
                    if !self.contains_cell(&m) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A hyperplane `a·x = b` with primitive integer normal whose first nonzero entry is positive.
pub fn canonical_hyperplane(a: &[Rat], b: &Rat) -> Option<Constraint> {
    let (ints, f) = primitive_scale(a);
    let first = ints.iter().find(|x| !x.is_zero())?;
    let sign = if first < &num_bigint::BigInt::zero() { -Rat::one() } else { Rat::one() };
    let normal = ints.into_iter().map(|x| Rat::from(x) * &sign).collect();
    Some((normal, b * &f * &sign))
}

/// All facet and affine-hull hyperplanes of the given cells.
pub fn hyperplanes_of(cells: &[Polyhedron]) -> Vec<Constraint> {
    let mut set = BTreeSet::new();
    for c in cells {
        for (a, b) in c.ineqs().iter().chain(c.eqs()) {
            if let Some(h) = canonical_hyperplane(a, b) {
                set.insert(h);
            }
        }
    }
    set.into_iter().collect()
}

/// Cuts a cell by every hyperplane of the list that crosses its relative interior.
pub fn cut_by(cell: &Polyhedron, hyperplanes: &[Constraint]) -> Vec<Polyhedron> {
    let mut pieces = vec![cell.clone()];
    for (a, b) in hyperplanes {
        let mut next = Vec::with_capacity(pieces.len());
        for p in pieces {
            next.extend(p.split(a, b));
        }
        pieces = next;
    }
    pieces
}

/// Refines each cell by the arrangement of all facet and hull hyperplanes of
/// all cells. The pieces of all cells are faces of one hyperplane arrangement,
/// so together they form a polyhedral complex.
pub fn arrangement_refinement(cells: &[Polyhedron]) -> Vec<Vec<Polyhedron>> {
    let hs = hyperplanes_of(cells);
    cells.iter().map(|c| cut_by(c, &hs)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefinementMode {
    /// Refine on the intersection of the supports.
    Intersection,
    /// Refine on the union of the supports.
    Union,
}

pub fn common_refinement(
    c1: &Complex,
    c2: &Complex,
    mode: RefinementMode,
) -> Result<Complex, PolyhedronError> {
    if c1.ambient != c2.ambient {
        return Err(PolyhedronError::AmbientMismatch { expected: c1.ambient, found: c2.ambient });
    }
    let m1: Vec<Polyhedron> = c1.maximal_cells().into_iter().cloned().collect();
    let m2: Vec<Polyhedron> = c2.maximal_cells().into_iter().cloned().collect();
    let cells: Vec<Polyhedron> = match mode {
        RefinementMode::Intersection => {
            let mut out = Vec::new();
            for a in &m1 {
                for b in &m2 {
                    if let Some(m) = a.intersect(b) {
                        out.push(m);
                    }
                }
            }
            out
        }
        RefinementMode::Union => {
            let mut all = m1.clone();
            all.extend(m2.iter().cloned());
            arrangement_refinement(&all).into_iter().flatten().collect()
        }
    };
    Complex::from_cells(c1.ambient, &cells)
}

/// An affine function `linear · x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    pub linear: Vec<Rat>,
    pub constant: Rat,
}

impl AffineForm {
    pub fn new(linear: Vec<Rat>, constant: Rat) -> AffineForm {
        AffineForm { linear, constant }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        crate::linalg::rat::dot(&self.linear, x) + &self.constant
    }

    pub fn is_integral(&self) -> bool {
        self.linear.iter().all(|c| c.is_integer())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlKind {
    Max,
    Min,
}

/// The regions of a max (or min) of affine forms.
#[derive(Clone, Debug)]
pub struct PlDecomposition {
    pub complex: Complex,
    /// Maximal regions with the index of the attaining form.
    pub regions: Vec<(Polyhedron, usize)>,
}

/// Region where form `i` attains the max (resp. min) of `forms`.
pub fn pl_region(forms: &[AffineForm], kind: PlKind, i: usize) -> Option<Polyhedron> {
    let r = forms[i].linear.len();
    let mut ineqs = Vec::new();
    for (j, g) in forms.iter().enumerate() {
        if j == i {
            continue;
        }
        // max: f_j − f_i ≤ 0; min: f_i − f_j ≤ 0
        let (hi, lo) = match kind {
            PlKind::Max => (g, &forms[i]),
            PlKind::Min => (&forms[i], g),
        };
        let a: Vec<Rat> = hi.linear.iter().zip(&lo.linear).map(|(x, y)| x - y).collect();
        ineqs.push((a, &lo.constant - &hi.constant));
    }
    Polyhedron::try_new(r, ineqs, Vec::new())
}

pub fn decomposition_of_pl(forms: &[AffineForm], kind: PlKind) -> Result<PlDecomposition, PolyhedronError> {
    let Some(first) = forms.first() else {
        return Err(PolyhedronError::NoForms);
    };
    let r = first.linear.len();
    for f in forms {
        if f.linear.len() != r {
            return Err(PolyhedronError::AmbientMismatch { expected: r, found: f.linear.len() });
        }
        if !f.is_integral() {
            return Err(PolyhedronError::NotIntegral);
        }
    }
    let mut regions = Vec::new();
    let mut seen: Vec<&AffineForm> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        if seen.contains(&f) {
            continue;
        }
        seen.push(f);
        if let Some(p) = pl_region(forms, kind, i) {
            if p.dim() == r {
                regions.push((p, i));
            }
        }
    }
    let cells: Vec<Polyhedron> = regions.iter().map(|(p, _)| p.clone()).collect();
    Ok(PlDecomposition { complex: Complex::from_cells(r, &cells)?, regions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn form(a: &[i64], c: i64) -> AffineForm {
        AffineForm::new(a.iter().map(|&x| q(x)).collect(), q(c))
    }

    #[test]
    fn max_x_zero_on_line() {
        let d = decomposition_of_pl(&[form(&[1], 0), form(&[0], 0)], PlKind::Max).unwrap();
        assert_eq!(d.regions.len(), 2);
        assert_eq!(d.complex.cells().len(), 3);
    }

    #[test]
    fn max_xy0_gives_three_regions() {
        let d = decomposition_of_pl(&[form(&[1, 0], 0), form(&[0, 1], 0), form(&[0, 0], 0)], PlKind::Max).unwrap();
        assert_eq!(d.regions.len(), 3);
        let rays: Vec<&Polyhedron> = d.complex.cells().iter().filter(|c| c.dim() == 1).collect();
        assert_eq!(rays.len(), 3);
        for dir in [[1, 1], [-1, 0], [0, -1]] {
            let p = vec![q(dir[0]), q(dir[1])];
            assert!(rays.iter().any(|r| r.contains_point(&p)));
        }
        assert!(d.complex.is_intersection_closed());
    }

    #[test]
    fn single_form_is_whole_space() {
        let d = decomposition_of_pl(&[form(&[1, 2], 3)], PlKind::Min).unwrap();
        assert_eq!(d.complex.cells(), &[Polyhedron::full_space(2)]);
    }

    #[test]
    fn refinement_examples() {
        let line = Complex::from_cells(1, &[Polyhedron::full_space(1)]).unwrap();
        let split = decomposition_of_pl(&[form(&[1], 0), form(&[0], 0)], PlKind::Max).unwrap().complex;
        assert_eq!(common_refinement(&line, &split, RefinementMode::Intersection).unwrap(), split);
        assert_eq!(common_refinement(&split, &split, RefinementMode::Intersection).unwrap(), split);
        let l1 = Polyhedron::new(2, vec![], vec![(vec![q(0), q(1)], q(0))]).unwrap();
        let l2 = Polyhedron::new(2, vec![], vec![(vec![q(1), q(0)], q(0))]).unwrap();
        let c1 = Complex::from_cells(2, &[l1]).unwrap();
        let c2 = Complex::from_cells(2, &[l2]).unwrap();
        let u = common_refinement(&c1, &c2, RefinementMode::Union).unwrap();
        assert_eq!(u.cells().iter().filter(|c| c.dim() == 1).count(), 4);
        assert_eq!(u.cells().iter().filter(|c| c.dim() == 0).count(), 1);
        assert!(u.is_intersection_closed());
    }
}
