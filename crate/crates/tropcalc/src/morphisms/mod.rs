//! Integral affine maps acting on δ-forms: push-forwards, graphs, pull-backs
//! and the projection formulas.

use num_bigint::BigInt;

use crate::deltaforms::{corner_locus, iterated_corner_locus, DeltaError, DeltaForm, PsForm, PsFunction};
use crate::linalg::lattice::{lattice_index, saturated_span, Lattice, LatticeIndex};
use crate::linalg::matrix::{IntMat, RatMat};
use crate::linalg::rat::{dot, Rat};
use crate::polyhedra::{AffineForm, Polyhedron};
use crate::products::{cross, diagonal_wedge};
use crate::superforms::{hull_parametrization, RatAffine, Superform};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("map is not injective on {} cell(s)", cells.len())]
    CellNotInjective { cells: Vec<Polyhedron> },
    #[error("graph corner locus disagrees with the direct graph description")]
    GraphMismatch,
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

/// An integral ℝ-affine map `x ↦ A x + t` from ℝ^source to ℝ^target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    linear: IntMat,
    translate: Vec<Rat>,
}

impl AffineMap {
    pub fn new(linear: IntMat, translate: Vec<Rat>) -> Result<AffineMap, MorphismError> {
        if linear.rows != translate.len() {
            return Err(MorphismError::RankMismatch { expected: linear.rows, found: translate.len() });
        }
        Ok(AffineMap { linear, translate })
    }

    /// Linear map from integer rows (target × source); needs the source rank
    /// for maps into ℝ⁰.
    pub fn linear_from_rows(source: usize, rows: &[Vec<i64>]) -> AffineMap {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        AffineMap { linear: IntMat::from_rows(&big, source), translate: vec![Rat::zero(); rows.len()] }
    }

    pub fn identity(r: usize) -> AffineMap {
        AffineMap { linear: IntMat::identity(r), translate: vec![Rat::zero(); r] }
    }

    /// Projection of ℝ^{a+b} onto the first `a` (or last `b`) coordinates.
    pub fn projection(a: usize, b: usize, first: bool) -> AffineMap {
        let (keep, off) = if first { (a, 0) } else { (b, a) };
        let mut m = IntMat::zeros(keep, a + b);
        for i in 0..keep {
            m.set(i, off + i, BigInt::from(1));
        }
        AffineMap { linear: m, translate: vec![Rat::zero(); keep] }
    }

    pub fn with_translation(mut self, t: Vec<Rat>) -> Result<AffineMap, MorphismError> {
        if t.len() != self.target_rank() {
            return Err(MorphismError::RankMismatch { expected: self.target_rank(), found: t.len() });
        }
        self.translate = t;
        Ok(self)
    }

    pub fn source_rank(&self) -> usize {
        self.linear.cols
    }

    pub fn target_rank(&self) -> usize {
        self.linear.rows
    }

    pub fn linear(&self) -> &IntMat {
        &self.linear
    }

    pub fn translation(&self) -> &[Rat] {
        &self.translate
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.as_rat_affine().apply(x)
    }

    pub fn as_rat_affine(&self) -> RatAffine {
        RatAffine::new(self.linear.to_rat(), self.translate.clone())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap, MorphismError> {
        if inner.target_rank() != self.source_rank() {
            return Err(MorphismError::RankMismatch { expected: self.source_rank(), found: inner.target_rank() });
        }
        let translate = self.apply(&inner.translate);
        Ok(AffineMap { linear: self.linear.mul(&inner.linear), translate })
    }

    /// Coordinate functions `fᵢ` as affine forms on the source.
    pub fn coordinate_forms(&self) -> Vec<AffineForm> {
        (0..self.target_rank())
            .map(|i| AffineForm::new(self.linear.row(i).iter().map(Rat::from).collect(), self.translate[i].clone()))
            .collect()
    }
}

/// The image of one cell together with the transported coefficient data.
struct CellImage {
    cell: Polyhedron,
    inverse: RatAffine,
    index: BigInt,
}

/// Image of σ under F when F is injective on N_σ, else `None`.
fn image_of_cell(f: &AffineMap, sigma: &Polyhedron) -> Option<CellImage> {
    let r = f.target_rank();
    let k = sigma.dim();
    let param = hull_parametrization(sigma);
    let df = f.linear.to_rat();
    let m = if k == 0 { RatMat::zeros(r, 0) } else { df.mul(&param.linear) };
    if m.rank() < k {
        return None;
    }
    let x0 = param.translate.clone();
    let y0 = f.apply(&x0);
    // left inverse L = (MᵀM)⁻¹Mᵀ
    let l = if k == 0 {
        RatMat::zeros(0, r)
    } else {
        let mt = m.transpose();
        mt.mul(&m).inverse().expect("full column rank").mul(&mt)
    };
    // y ↦ x0 + B L (y − y0)
    let bl = if k == 0 { RatMat::zeros(sigma.ambient_rank(), r) } else { param.linear.mul(&l) };
    let shift: Vec<Rat> = x0.iter().zip(bl.mul_vec(&y0)).map(|(a, b)| a - &b).collect();
    let inverse = RatAffine::new(bl, shift);
    let ineqs = sigma
        .ineqs()
        .iter()
        .map(|(a, b)| {
            let row: Vec<Rat> = (0..r).map(|j| dot(a, &inverse.linear.col(j))).collect();
            (row, b - &dot(a, &inverse.translate))
        })
        .collect();
    let left_null = m.transpose().nullspace();
    let eqs = if k == 0 {
        (0..r)
            .map(|i| {
                let mut e = vec![Rat::zero(); r];
                e[i] = Rat::one();
                (e, y0[i].clone())
            })
            .collect()
    } else {
        left_null.into_iter().map(|n| (n.clone(), dot(&n, &y0))).collect()
    };
    let cell = Polyhedron::new(r, ineqs, eqs).expect("image of a nonempty cell");
    let cols: Vec<Vec<Rat>> = (0..k).map(|j| m.col(j)).collect();
    let generated = Lattice::generated_by(
        r,
        &cols.iter().map(|c| c.iter().map(|x| x.to_int().expect("integral image")).collect()).collect::<Vec<_>>(),
    );
    let index = match lattice_index(&generated, &saturated_span(r, &cols)) {
        Ok(LatticeIndex::Finite(i)) => i,
        _ => unreachable!("full-rank sublattice of its saturation"),
    };
    Some(CellImage { cell, inverse, index })
}

fn push(f: &AffineMap, alpha: &DeltaForm, strict: bool) -> Result<DeltaForm, MorphismError> {
    if alpha.rank() != f.source_rank() {
        return Err(MorphismError::RankMismatch { expected: f.source_rank(), found: alpha.rank() });
    }
    let r = f.target_rank();
    let (p, q, l) = alpha.form_type();
    let ty = (p, q, (r + l).saturating_sub(f.source_rank()));
    if l > alpha.rank() || alpha.is_zero() {
        return Ok(DeltaForm::zero(r, ty));
    }
    let k = alpha.cell_dim();
    let mut cells = Vec::new();
    let mut bad = Vec::new();
    for (sigma, a) in alpha.cells() {
        match image_of_cell(f, sigma) {
            Some(img) => {
                let coeff = a.pullback(&img.inverse).expect("matching rank").scale(&Rat::from(img.index));
                cells.push((img.cell, coeff));
            }
            None => bad.push(sigma.clone()),
        }
    }
    if strict && !bad.is_empty() {
        return Err(MorphismError::CellNotInjective { cells: bad });
    }
    if k > r {
        return Ok(DeltaForm::zero(r, ty));
    }
    Ok(DeltaForm::new(r, ty, cells)?)
}

/// Tropical push-forward F̂_*: cells on which F drops dimension contribute 0,
/// the others are transported with weight [N_{F(σ)} : dF(N_σ)].
pub fn pushforward_hat(f: &AffineMap, alpha: &DeltaForm) -> Result<DeltaForm, MorphismError> {
    push(f, alpha, false)
}

/// Push-forward F_* for maps injective on every cell.
pub fn pushforward_cells(f: &AffineMap, alpha: &DeltaForm) -> Result<DeltaForm, MorphismError> {
    push(f, alpha, true)
}

/// `max{fᵢ(x′), xᵢ}` on ℝ^{r′} × ℝʳ.
fn graph_functions(f: &AffineMap) -> Result<Vec<PsFunction>, MorphismError> {
    let (s, r) = (f.source_rank(), f.target_rank());
    let mut out = Vec::with_capacity(r);
    for (i, fi) in f.coordinate_forms().into_iter().enumerate() {
        let mut lin = fi.linear.clone();
        lin.resize(s + r, Rat::zero());
        let mut xi = vec![Rat::zero(); s + r];
        xi[s + i] = Rat::one();
        let phi = PsFunction::max_of(&[AffineForm::new(lin, fi.constant.clone()), AffineForm::new(xi, Rat::zero())])?;
        out.push(phi);
    }
    Ok(out)
}

/// The graph {(x′, F(x′))} with weight 1, built directly.
pub fn graph_direct(f: &AffineMap) -> DeltaForm {
    let (s, r) = (f.source_rank(), f.target_rank());
    let eqs = f
        .coordinate_forms()
        .into_iter()
        .enumerate()
        .map(|(i, fi)| {
            let mut row: Vec<Rat> = fi.linear.iter().map(|x| -x).collect();
            row.resize(s + r, Rat::zero());
            row[s + i] = Rat::one();
            (row, fi.constant)
        })
        .collect();
    let graph = Polyhedron::new(s + r, Vec::new(), eqs).expect("graph is nonempty");
    DeltaForm::from_weights(s + r, r, vec![(graph, Rat::one())]).expect("valid graph cell")
}

fn graph_by_corners(f: &AffineMap, base: &DeltaForm) -> Result<DeltaForm, MorphismError> {
    Ok(iterated_corner_locus(&graph_functions(f)?, base)?)
}

/// [Δ_F] = div(φ₁)⋯div(φᵣ)·[ℝ^{r′} × ℝʳ], checked against [`graph_direct`].
pub fn graph_cycle(f: &AffineMap) -> Result<DeltaForm, MorphismError> {
    let g = graph_by_corners(f, &DeltaForm::full_space(f.source_rank() + f.target_rank()))?;
    if !g.equal(&graph_direct(f))? {
        return Err(MorphismError::GraphMismatch);
    }
    Ok(g)
}

/// F*α = p₁,*([Δ_F] ∧ ([ℝ^{r′}] × α)).
pub fn pullback(f: &AffineMap, alpha: &DeltaForm) -> Result<DeltaForm, MorphismError> {
    let (s, r) = (f.source_rank(), f.target_rank());
    if alpha.rank() != r {
        return Err(MorphismError::RankMismatch { expected: r, found: alpha.rank() });
    }
    let lifted = cross(&DeltaForm::full_space(s), alpha);
    let on_graph = graph_by_corners(f, &lifted)?;
    let pulled = pushforward_cells(&AffineMap::projection(s, r, true), &on_graph)?;
    let (p, q, l) = alpha.form_type();
    if pulled.is_zero() {
        return Ok(DeltaForm::zero(s, (p, q, l)));
    }
    Ok(pulled)
}

/// Preimage of a polyhedron in the target.
fn preimage(f: &AffineMap, region: &Polyhedron) -> Option<Polyhedron> {
    let fr = f.as_rat_affine();
    let s = f.source_rank();
    let pull = |(a, b): &(Vec<Rat>, Rat)| {
        let row: Vec<Rat> = (0..s).map(|j| dot(a, &fr.linear.col(j))).collect();
        (row, b - &dot(a, &fr.translate))
    };
    let ineqs = region.ineqs().iter().map(pull).collect();
    let eqs = region.eqs().iter().map(pull).collect();
    Polyhedron::try_new(s, ineqs, eqs)
}

/// F*φ for a piecewise smooth function.
pub fn pullback_ps_function(f: &AffineMap, phi: &PsFunction) -> Result<PsFunction, MorphismError> {
    if phi.rank() != f.target_rank() {
        return Err(MorphismError::RankMismatch { expected: f.target_rank(), found: phi.rank() });
    }
    let fr = f.as_rat_affine();
    let s = f.source_rank();
    let pieces = phi
        .pieces()
        .iter()
        .filter_map(|(region, g)| preimage(f, region).filter(|c| c.dim() == s).map(|c| (c, fr.pull_poly(g))))
        .collect();
    Ok(PsFunction::from_pieces(s, pieces)?)
}

/// F*ψ for a piecewise smooth form.
pub fn pullback_ps_form(f: &AffineMap, psi: &PsForm) -> Result<PsForm, MorphismError> {
    if psi.rank() != f.target_rank() {
        return Err(MorphismError::RankMismatch { expected: f.target_rank(), found: psi.rank() });
    }
    let fr = f.as_rat_affine();
    let s = f.source_rank();
    let pieces: Vec<(Polyhedron, Superform)> = psi
        .pieces()
        .iter()
        .filter_map(|(region, a)| {
            preimage(f, region).filter(|c| c.dim() == s).map(|c| (c, a.pullback(&fr).expect("matching rank")))
        })
        .collect();
    Ok(PsForm::from_pieces(s, psi.bidegree(), pieces))
}

/// Both sides of F̂_*(α ∧ F*β) = F̂_*α ∧ β.
pub fn projection_formula_sides(
    f: &AffineMap,
    alpha: &DeltaForm,
    beta: &DeltaForm,
) -> Result<(DeltaForm, DeltaForm), MorphismError> {
    let lhs = pushforward_hat(f, &diagonal_wedge(alpha, &pullback(f, beta)?)?)?;
    let rhs = diagonal_wedge(&pushforward_hat(f, alpha)?, beta)?;
    Ok((lhs, rhs))
}

pub fn projection_formula_check(f: &AffineMap, alpha: &DeltaForm, beta: &DeltaForm) -> Result<bool, MorphismError> {
    let (lhs, rhs) = projection_formula_sides(f, alpha, beta)?;
    Ok(lhs.equal(&rhs)?)
}

/// Both sides of F_*(div(F*φ)·α) = div(φ)·F_*α for cell-injective F.
pub fn divisor_compatibility_sides(
    f: &AffineMap,
    phi: &PsFunction,
    alpha: &DeltaForm,
) -> Result<(DeltaForm, DeltaForm), MorphismError> {
    let lhs = pushforward_cells(f, &corner_locus(&pullback_ps_function(f, phi)?, alpha)?)?;
    let rhs = corner_locus(phi, &pushforward_cells(f, alpha)?)?;
    Ok((lhs, rhs))
}
