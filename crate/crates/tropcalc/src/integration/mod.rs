//! Exact integration of polynomial superforms over bounded polyhedra,
//! boundary integrals, Stokes' and Green's formulas, and degrees of 0-cycles.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::deltaforms::{DeltaError, DeltaForm, PsForm};
use crate::linalg::matrix::RatMat;
use crate::linalg::rat::{dot, Rat};
use crate::polyhedra::Polyhedron;
use crate::superforms::{hull_parametrization, index_subsets, restrict_to, IndexPair, Poly, RatAffine, Superform};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegrationError {
    #[error("cannot integrate over an unbounded polyhedron")]
    Unbounded,
    #[error("bidegree {found:?} does not match cell dimension (expected {expected:?})")]
    DegreeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("domain must carry constant weights")]
    NotACycle,
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error("ambient rank mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error(transparent)]
    Delta(#[from] DeltaError),
}

type Simplex = Vec<Vec<Rat>>;

/// Pulling triangulation of a bounded polytope given in its own ambient
/// coordinates. Each simplex is listed by its `dim + 1` vertices.
pub fn triangulate(poly: &Polyhedron) -> Result<Vec<Simplex>, IntegrationError> {
    if !poly.is_bounded() {
        return Err(IntegrationError::Unbounded);
    }
    Ok(pulling(poly))
}

fn pulling(poly: &Polyhedron) -> Vec<Simplex> {
    if poly.dim() == 0 {
        return vec![vec![poly.relint_point().to_vec()]];
    }
    let v0 = poly.vertices().into_iter().next().expect("bounded nonempty polytope has a vertex");
    let mut out = Vec::new();
    for facet in poly.facets() {
        if facet.contains_point(&v0) {
            continue;
        }
        for mut s in pulling(facet) {
            s.insert(0, v0.clone());
            out.push(s);
        }
    }
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

/// `∫_Δ f dt` (Lebesgue measure) over a full-dimensional simplex in ℝᵏ.
pub fn simplex_integral(f: &Poly, simplex: &[Vec<Rat>]) -> Rat {
    let k = f.rank();
    assert_eq!(simplex.len(), k + 1);
    let v0 = &simplex[0];
    let edges: Vec<Vec<Rat>> = simplex[1..].iter().map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect()).collect();
    let vol = if k == 0 { Rat::one() } else { RatMat::from_rows(&edges, k).det().abs() };
    if vol.is_zero() {
        return Rat::zero();
    }
    // barycentric substitution t = Σ λⱼ vⱼ
    let images: Vec<Poly> = (0..k)
        .map(|i| {
            let coeffs: Vec<Rat> = simplex.iter().map(|v| v[i].clone()).collect();
            Poly::affine(&coeffs, &Rat::zero())
        })
        .collect();
    let g = f.compose(&images, k + 1);
    let mut total = Rat::zero();
    for (exp, c) in g.terms() {
        let num: BigInt = exp.iter().map(|&b| factorial(b)).product();
        let deg: u32 = exp.iter().sum();
        total += c * &Rat::new(num, factorial(k as u32 + deg));
    }
    total * vol
}

/// A simplex of the parameter domain with the ambient coordinates as linear
/// forms in barycentric coordinates.
#[derive(Debug)]
struct BarySimplex {
    coords: Vec<Poly>,
    vol: Rat,
    /// Ambient monomials `x^e` composed into barycentric coordinates.
    powers: HashMap<Vec<u32>, Poly>,
}

impl BarySimplex {
    fn power(&mut self, exp: &[u32]) -> Poly {
        if let Some(p) = self.powers.get(exp) {
            return p.clone();
        }
        let p = match exp.iter().position(|&e| e > 0) {
            None => Poly::one(self.coords.first().map_or(1, Poly::rank)),
            Some(i) => {
                let mut lower = exp.to_vec();
                lower[i] -= 1;
                &self.power(&lower) * &self.coords[i]
            }
        };
        self.powers.insert(exp.to_vec(), p.clone());
        p
    }

    /// `∫ x^e` over the simplex: Dirichlet's formula on each barycentric
    /// monomial.
    fn moment(&mut self, exp: &[u32]) -> Rat {
        let k = self.coords.first().map_or(1, Poly::rank) - 1;
        let mut total = Rat::zero();
        for (b, c) in self.power(exp).terms() {
            let num: BigInt = b.iter().map(|&x| factorial(x)).product();
            let deg: u32 = b.iter().sum();
            total += c * &Rat::new(num, factorial(k as u32 + deg));
        }
        total * &self.vol
    }
}

/// A bounded cell prepared for repeated integration: the lattice
/// parametrization of its affine hull, a triangulation of the parameter
/// domain, and memoized moments `∫ x^e` of ambient monomials.
#[derive(Debug)]
pub struct CellQuadrature {
    ambient: usize,
    dim: usize,
    param: RatAffine,
    simplices: Mutex<Vec<BarySimplex>>,
    moments: Mutex<HashMap<Vec<u32>, Rat>>,
    minors: Mutex<HashMap<IndexPair, Rat>>,
}

impl CellQuadrature {
    pub fn new(sigma: &Polyhedron) -> Result<CellQuadrature, IntegrationError> {
        if !sigma.is_bounded() {
            return Err(IntegrationError::Unbounded);
        }
        let k = sigma.dim();
        let param = hull_parametrization(sigma);
        let simplices = pulling(&lattice_domain(sigma))
            .into_iter()
            .filter_map(|s| {
                let edges: Vec<Vec<Rat>> =
                    s[1..].iter().map(|v| v.iter().zip(&s[0]).map(|(a, b)| a - b).collect()).collect();
                let vol = if k == 0 { Rat::one() } else { RatMat::from_rows(&edges, k).det().abs() };
                if vol.is_zero() {
                    return None;
                }
                let images: Vec<Vec<Rat>> = s.iter().map(|v| param.apply(v)).collect();
                let coords = (0..sigma.ambient_rank())
                    .map(|i| {
                        let c: Vec<Rat> = images.iter().map(|x| x[i].clone()).collect();
                        Poly::affine(&c, &Rat::zero())
                    })
                    .collect();
                Some(BarySimplex { coords, vol, powers: HashMap::new() })
            })
            .collect();
        Ok(CellQuadrature {
            ambient: sigma.ambient_rank(),
            dim: k,
            param,
            simplices: Mutex::new(simplices),
            moments: Mutex::default(),
            minors: Mutex::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `∫ x^e` over the cell in lattice measure.
    fn moment(&self, exp: &[u32]) -> Rat {
        if let Some(m) = self.moments.lock().expect("unpoisoned").get(exp) {
            return m.clone();
        }
        let m: Rat = self.simplices.lock().expect("unpoisoned").iter_mut().map(|s| s.moment(exp)).sum();
        self.moments.lock().expect("unpoisoned").insert(exp.to_vec(), m.clone());
        m
    }

    /// Top coefficient of the restriction of `d′x_I ∧ d″x_J`, a constant.
    fn minor(&self, key: &IndexPair) -> Rat {
        if let Some(m) = self.minors.lock().expect("unpoisoned").get(key) {
            return m.clone();
        }
        let unit = Superform::term(Poly::one(self.ambient), &key.0, &key.1).expect("valid indices");
        let top: Vec<usize> = (0..self.dim).collect();
        let c = unit.pullback(&self.param).expect("matching ambient rank").coefficient(&top, &top).constant_term();
        self.minors.lock().expect("unpoisoned").insert(key.clone(), c.clone());
        c
    }

    /// `∫_σ α` for α whose restriction to the hull has bidegree (k, k).
    pub fn integrate(&self, alpha: &Superform) -> Result<Rat, IntegrationError> {
        let k = self.dim;
        if alpha.rank() != self.ambient {
            return Err(IntegrationError::AmbientMismatch { left: self.ambient, right: alpha.rank() });
        }
        if alpha.bidegree() != (k, k) {
            return Err(IntegrationError::DegreeMismatch { expected: (k, k), found: alpha.bidegree() });
        }
        let mut total = Rat::zero();
        for (key, f) in alpha.terms() {
            let c = self.minor(key);
            if c.is_zero() {
                continue;
            }
            let part: Rat = f.terms().map(|(e, a)| a * &self.moment(e)).sum();
            total += &c * &part;
        }
        if (k * k.saturating_sub(1) / 2) % 2 == 1 {
            total = -total;
        }
        Ok(total)
    }
}

/// `∫_σ α` for a bounded polyhedron σ of dimension k and a superform whose
/// restriction to the affine hull of σ has bidegree (k, k).
pub fn integrate_cell(sigma: &Polyhedron, alpha: &Superform) -> Result<Rat, IntegrationError> {
    let k = sigma.dim();
    if alpha.rank() != sigma.ambient_rank() {
        return Err(IntegrationError::AmbientMismatch { left: sigma.ambient_rank(), right: alpha.rank() });
    }
    if alpha.bidegree() != (k, k) {
        return Err(IntegrationError::DegreeMismatch { expected: (k, k), found: alpha.bidegree() });
    }
    if !sigma.is_bounded() {
        return Err(IntegrationError::Unbounded);
    }
    let top: Vec<usize> = (0..k).collect();
    if restrict_to(sigma, alpha).coefficient(&top, &top).is_zero() {
        return Ok(Rat::zero());
    }
    CellQuadrature::new(sigma)?.integrate(alpha)
}

/// σ in the lattice coordinates of its affine hull.
fn lattice_domain(sigma: &Polyhedron) -> Polyhedron {
    let k = sigma.dim();
    let param = hull_parametrization(sigma);
    let base = param.apply(&vec![Rat::zero(); k]);
    let ineqs = sigma
        .ineqs()
        .iter()
        .map(|(a, b)| {
            let row: Vec<Rat> = (0..k).map(|j| dot(a, &param.linear.col(j))).collect();
            (row, b - &dot(a, &base))
        })
        .collect();
    Polyhedron::new(k, ineqs, Vec::new()).expect("σ is nonempty")
}

/// `∫_{∂σ} η` for η of bidegree (k−1, k) or (k, k−1), with inward normals.
pub fn integrate_boundary(sigma: &Polyhedron, eta: &Superform) -> Result<Rat, IntegrationError> {
    let k = sigma.dim();
    if eta.rank() != sigma.ambient_rank() {
        return Err(IntegrationError::AmbientMismatch { left: sigma.ambient_rank(), right: eta.rank() });
    }
    if !sigma.is_bounded() {
        return Err(IntegrationError::Unbounded);
    }
    let (p, q) = eta.bidegree();
    let second = k > 0 && (p, q) == (k - 1, k);
    let first = k > 0 && (p, q) == (k, k - 1);
    if !second && !first {
        return Err(IntegrationError::DegreeMismatch { expected: (k.saturating_sub(1), k), found: (p, q) });
    }
    let mut total = Rat::zero();
    for (j, tau) in sigma.facets().iter().enumerate() {
        let omega: Vec<Rat> = sigma.facet_normal(j).iter().map(Rat::from).collect();
        if second {
            // ⟨η; (∅, ω)⟩ with ω in the first d″ slot carries (−1)^{k−1} against
            // `contract2`, and the whole sum carries (−1)^k
            total -= integrate_cell(tau, &eta.contract2(&omega))?;
        } else {
            total += integrate_cell(tau, &eta.contract1(&omega))?;
        }
    }
    Ok(total)
}

fn cycle_cells(c: &DeltaForm) -> Result<Vec<(Polyhedron, Rat)>, IntegrationError> {
    c.weights().ok_or(IntegrationError::NotACycle)
}

fn sum_par(items: Vec<Result<Rat, IntegrationError>>) -> Result<Rat, IntegrationError> {
    let mut total = Rat::zero();
    for r in items {
        total += r?;
    }
    Ok(total)
}

/// `∫_C α = Σ m_σ ∫_σ α` over a weighted complex of bounded cells.
pub fn integrate_over(c: &DeltaForm, alpha: &Superform) -> Result<Rat, IntegrationError> {
    let cells = cycle_cells(c)?;
    sum_par(cells.par_iter().map(|(s, m)| integrate_cell(s, alpha).map(|v| v * m)).collect())
}

/// `∫_{∂C} η = Σ m_σ ∫_{∂σ} η`.
pub fn integrate_boundary_over(c: &DeltaForm, eta: &Superform) -> Result<Rat, IntegrationError> {
    let cells = cycle_cells(c)?;
    sum_par(cells.par_iter().map(|(s, m)| integrate_boundary(s, eta).map(|v| v * m)).collect())
}

/// `∫ α = Σ_σ ∫_σ α_σ` for a δ-form of type (k, k, r − k).
pub fn integrate_delta(alpha: &DeltaForm) -> Result<Rat, IntegrationError> {
    sum_par(alpha.cells().par_iter().map(|(s, a)| integrate_cell(s, a)).collect())
}

/// Both sides of Stokes' formula: `(∫_C dη, ∫_{∂C} η)`, using d′ for
/// bidegree (k−1, k) and d″ for (k, k−1).
pub fn stokes_sides(c: &DeltaForm, eta: &Superform) -> Result<(Rat, Rat), IntegrationError> {
    let k = c.cell_dim();
    let (p, q) = eta.bidegree();
    let d_eta = if k > 0 && (p, q) == (k - 1, k) {
        eta.d1()
    } else if k > 0 && (p, q) == (k, k - 1) {
        eta.d2()
    } else {
        return Err(IntegrationError::DegreeMismatch { expected: (k.saturating_sub(1), k), found: (p, q) });
    };
    Ok((integrate_over(c, &d_eta)?, integrate_boundary_over(c, eta)?))
}

pub fn stokes_check(c: &DeltaForm, eta: &Superform) -> Result<bool, IntegrationError> {
    let (lhs, rhs) = stokes_sides(c, eta)?;
    Ok(lhs == rhs)
}

fn green_integrands(alpha: &Superform, beta: &Superform) -> (Superform, Superform) {
    let bulk = alpha.w(&beta.d2().d1()).minus(&alpha.d2().d1().w(beta));
    let edge = alpha.w(&beta.d2()).minus(&alpha.d2().w(beta));
    (bulk, edge)
}

fn check_green_degrees(k: usize, alpha: &Superform, beta: &Superform) -> Result<(), IntegrationError> {
    if !alpha.is_symmetric() || !beta.is_symmetric() {
        return Err(IntegrationError::NotSymmetric);
    }
    let (p, _) = alpha.bidegree();
    let (q, _) = beta.bidegree();
    if k == 0 || p + q + 1 != k {
        return Err(IntegrationError::DegreeMismatch { expected: (k.saturating_sub(1), k), found: (p + q, p + q + 1) });
    }
    Ok(())
}

/// Both sides of Green's formula
/// `∫_C α∧d′d″β − d′d″α∧β = ∫_{∂C} α∧d″β − d″α∧β`
/// for symmetric α, β of bidegrees (p,p), (q,q) with p + q = dim C − 1.
pub fn green_sides(c: &DeltaForm, alpha: &Superform, beta: &Superform) -> Result<(Rat, Rat), IntegrationError> {
    check_green_degrees(c.cell_dim(), alpha, beta)?;
    let (bulk, edge) = green_integrands(alpha, beta);
    Ok((integrate_over(c, &bulk)?, integrate_boundary_over(c, &edge)?))
}

pub fn green_check(c: &DeltaForm, alpha: &Superform, beta: &Superform) -> Result<bool, IntegrationError> {
    let (lhs, rhs) = green_sides(c, alpha, beta)?;
    Ok(lhs == rhs)
}

/// Full-dimensional pieces `σ ∩ A ∩ B` of a weighted polyhedral set and two
/// piecewise smooth forms, with the weight and the two local forms.
fn common_pieces<'a>(
    c: &DeltaForm,
    alpha: &'a PsForm,
    beta: &'a PsForm,
) -> Result<Vec<(Polyhedron, Rat, &'a Superform, &'a Superform)>, IntegrationError> {
    let r = c.rank();
    if c.cell_dim() != r {
        return Err(IntegrationError::Delta(DeltaError::BadCell("domain must be full-dimensional".into())));
    }
    for rank in [alpha.rank(), beta.rank()] {
        if rank != r {
            return Err(IntegrationError::AmbientMismatch { left: r, right: rank });
        }
    }
    let mut out = Vec::new();
    for (s, m) in cycle_cells(c)? {
        for (ra, a) in alpha.pieces() {
            let Some(sa) = s.intersect(ra).filter(|x| x.dim() == r) else { continue };
            for (rb, b) in beta.pieces() {
                if let Some(piece) = sa.intersect(rb).filter(|x| x.dim() == r) {
                    out.push((piece, m.clone(), a, b));
                }
            }
        }
    }
    Ok(out)
}

/// Both sides of Green's formula for piecewise smooth (codimension-0) δ-forms
/// with the polyhedral derivatives d′_P, d″_P; the boundary integral runs over
/// the boundaries of all pieces of the common refinement.
pub fn green_delta_sides(c: &DeltaForm, alpha: &PsForm, beta: &PsForm) -> Result<(Rat, Rat), IntegrationError> {
    let pieces = common_pieces(c, alpha, beta)?;
    let r = c.rank();
    let mut lhs = Rat::zero();
    let mut rhs = Rat::zero();
    for (piece, m, a, b) in pieces {
        check_green_degrees(r, a, b)?;
        let (bulk, edge) = green_integrands(a, b);
        lhs += integrate_cell(&piece, &bulk)? * &m;
        rhs += integrate_boundary(&piece, &edge)? * &m;
    }
    Ok((lhs, rhs))
}

pub fn green_delta_check(c: &DeltaForm, alpha: &PsForm, beta: &PsForm) -> Result<bool, IntegrationError> {
    let (lhs, rhs) = green_delta_sides(c, alpha, beta)?;
    Ok(lhs == rhs)
}

/// `deg α = Σ` of the point weights of a δ-form of type (0, 0, r).
pub fn degree(alpha: &DeltaForm) -> Result<Rat, IntegrationError> {
    let r = alpha.rank();
    let (p, q, l) = alpha.form_type();
    if (p, q) != (0, 0) || (l != r && !alpha.is_zero()) {
        return Err(IntegrationError::DegreeMismatch { expected: (0, 0), found: (p, q) });
    }
    integrate_delta(alpha)
}

/// The top-degree volume form `d′x_I ∧ d″x_I` on coordinates `I`, scaled so
/// that its integral over a cell with lattice-unit coordinates is the volume.
pub fn volume_form(rank: usize, coords: &[usize]) -> Superform {
    let k = coords.len();
    let sign = if (k * k.saturating_sub(1) / 2) % 2 == 1 { -Rat::one() } else { Rat::one() };
    Superform::term(Poly::constant(rank, sign), coords, coords).expect("coordinates in range")
}

/// All (k−1, k)- and (k, k−1)-monomial shapes, used by randomized checks.
pub fn boundary_shapes(rank: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for i in index_subsets(rank, k - 1) {
        for j in index_subsets(rank, k) {
            out.push((i.clone(), j.clone()));
            out.push((j, i.clone()));
        }
    }
    out
}
