//! Test-side oracles that do not go through the star and balancing code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use tropcalc::deltaforms::DeltaForm;
use tropcalc::integration::CellQuadrature;
use tropcalc::linalg::matrix::RatMat;
use tropcalc::linalg::rat::{dot, Rat};
use tropcalc::polyhedra::Polyhedron;
use tropcalc::superforms::{index_subsets, Poly, RatAffine, Superform};

/// Monomials of total degree ≤ d in `rank` variables.
pub fn monomials(rank: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; rank], &mut out);
    out
}

/// Test forms `x^a d′x_I ∧ d″x_J` of bidegree (p, q) with |a| ≤ d.
pub fn test_forms(rank: usize, p: usize, q: usize, d: u32) -> Vec<Superform> {
    let mut out = Vec::new();
    for i in index_subsets(rank, p) {
        for j in index_subsets(rank, q) {
            for a in monomials(rank, d) {
                out.push(Superform::term(Poly::monomial(a, Rat::one()), &i, &j).unwrap());
            }
        }
    }
    out
}

fn l1(a: &[Rat]) -> Rat {
    a.iter().fold(Rat::zero(), |acc, x| acc + x.abs())
}

/// Whether the box of half-width `eps` around `x` sees each cell either not
/// at all or only through faces whose hyperplanes pass through `x`.
fn box_is_local(cells: &[&Polyhedron], x: &[Rat], eps: &Rat) -> bool {
    cells.iter().all(|sigma| {
        let separated = sigma.ineqs().iter().any(|(a, b)| dot(a, x) - eps * l1(a) > *b)
            || sigma.eqs().iter().any(|(a, b)| (dot(a, x) - b).abs() > eps * l1(a));
        let local = sigma.ineqs().iter().all(|(a, b)| {
            let v = dot(a, x);
            v == *b || v + eps * l1(a) < *b
        }) && sigma.eqs().iter().all(|(a, b)| dot(a, x) == *b);
        separated || local
    })
}

/// The pieces σ∩U of dimension `k`, ready for integration, with their
/// coefficients.
fn pieces<'a>(form: &'a DeltaForm, u: &Polyhedron, k: usize) -> Vec<(CellQuadrature, &'a Superform)> {
    form.cells()
        .iter()
        .filter_map(|(sigma, a)| {
            let piece = sigma.intersect(u).filter(|p| p.dim() == k)?;
            Some((CellQuadrature::new(&piece).expect("bounded piece"), a))
        })
        .collect()
}

/// Σ_σ ∫_{σ∩U} d′(α_σ ∧ γ): by Stokes, the boundary part of the current d′[α]
/// paired with γ, localized to U when γ vanishes on ∂U.
fn boundary_pairing(pieces: &[(CellQuadrature, &Superform)], gamma: &Superform) -> Rat {
    pieces.iter().map(|(quad, a)| quad.integrate(&a.w(gamma).d1()).expect("bidegree (k, k)")).sum()
}

/// Coordinates of the pull-back of γ to the affine hull of τ, keyed by
/// (I, J, exponent).
fn restriction_coords(tau: &Polyhedron, gamma: &Superform) -> BTreeMap<(Vec<usize>, Vec<usize>, Vec<u32>), Rat> {
    let r = tau.ambient_rank();
    let x0 = tau.relint_point().to_vec();
    let eq_rows: Vec<Vec<Rat>> = tau.eqs().iter().map(|(a, _)| a.clone()).collect();
    let dirs = if eq_rows.is_empty() {
        (0..r).map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
    } else {
        RatMat::from_rows(&eq_rows, r).nullspace()
    };
    let m = RatMat::from_cols(&dirs, r);
    let phi = RatAffine::new(m, x0);
    let pulled = gamma.pullback(&phi).expect("matching rank");
    let mut out = BTreeMap::new();
    for ((i, j), f) in pulled.terms() {
        for (e, c) in f.terms() {
            if !c.is_zero() {
                out.insert((i.clone(), j.clone(), e.clone()), c.clone());
            }
        }
    }
    out
}

/// Whether the row `b` lies in the row space of `rows` (columns indexed by
/// the test forms).
fn factors_through(rows: &[Vec<Rat>], b: &[Rat]) -> bool {
    if b.iter().all(Rat::is_zero) {
        return true;
    }
    let n = b.len();
    if rows.is_empty() {
        return false;
    }
    let base = RatMat::from_rows(rows, n).rank();
    let mut ext = rows.to_vec();
    ext.push(b.to_vec());
    RatMat::from_rows(&ext, n).rank() == base
}

/// Current-pairing test: whether d′[α] is a polyhedral current near every
/// codimension-one face, i.e. whether its boundary part depends on the test
/// form only through its restriction to that face. Test forms are monomial
/// forms of degree ≤ `d` times a bump vanishing on a small box.
pub fn d1_current_is_polyhedral(alpha: &DeltaForm, d: u32) -> bool {
    let r = alpha.rank();
    let k = alpha.cell_dim();
    let (p, q, _) = alpha.form_type();
    if k == 0 || p + 1 > k || k < q {
        return true;
    }
    let forms = test_forms(r, k - p - 1, k - q, d);
    let cells: Vec<&Polyhedron> = alpha.cells().iter().map(|(c, _)| c).collect();
    let mut faces: Vec<Polyhedron> = cells.iter().flat_map(|c| c.facets().iter().cloned()).collect();
    faces.sort();
    faces.dedup();
    for tau in &faces {
        let x: Vec<Rat> = tau.relint_point().to_vec();
        let mut eps = Rat::frac(1, 2);
        while !box_is_local(&cells, &x, &eps) {
            eps = eps * Rat::frac(1, 2);
        }
        let lo: Vec<Rat> = x.iter().map(|v| v - &eps).collect();
        let hi: Vec<Rat> = x.iter().map(|v| v + &eps).collect();
        let u = Polyhedron::cube(&lo, &hi).expect("box");
        let bump = box_bump(&lo, &hi);
        let local = pieces(alpha, &u, k);
        let mut keys: BTreeMap<(Vec<usize>, Vec<usize>, Vec<u32>), usize> = BTreeMap::new();
        let mut restr = Vec::new();
        let mut pairing = Vec::new();
        for g in &forms {
            let c = restriction_coords(tau, g);
            for key in c.keys() {
                let n = keys.len();
                keys.entry(key.clone()).or_insert(n);
            }
            restr.push(c);
            pairing.push(boundary_pairing(&local, &g.mul_poly(&bump)));
        }
        let rows: Vec<Vec<Rat>> = {
            let mut rows = vec![vec![Rat::zero(); forms.len()]; keys.len()];
            for (col, c) in restr.iter().enumerate() {
                for (key, v) in c {
                    rows[keys[key]][col] = v.clone();
                }
            }
            rows
        };
        if !factors_through(&rows, &pairing) {
            return false;
        }
    }
    true
}

/// For a balanced α: the ratio s ∈ {1, −1} with
/// `Σ_σ ∫_{σ∩U} d′(α_σ ∧ γ) = s · Σ_ρ ∫_{ρ∩U} (∂′α)_ρ ∧ γ`
/// for every test form γ (vanishing on ∂U) and every face box U, or `None`
/// if no single sign works.
pub fn boundary1_pairing_sign(alpha: &DeltaForm, bnd: &DeltaForm, d: u32) -> Option<i32> {
    let r = alpha.rank();
    let k = alpha.cell_dim();
    let (p, q, _) = alpha.form_type();
    if k == 0 || p + 1 > k || k < q {
        return Some(1);
    }
    let forms = test_forms(r, k - p - 1, k - q, d);
    let cells: Vec<&Polyhedron> = alpha.cells().iter().map(|(c, _)| c).collect();
    let mut faces: Vec<Polyhedron> = cells.iter().flat_map(|c| c.facets().iter().cloned()).collect();
    faces.sort();
    faces.dedup();
    let mut sign: Option<i32> = None;
    for tau in &faces {
        let x: Vec<Rat> = tau.relint_point().to_vec();
        let mut eps = Rat::frac(1, 2);
        while !box_is_local(&cells, &x, &eps) {
            eps = eps * Rat::frac(1, 2);
        }
        let lo: Vec<Rat> = x.iter().map(|v| v - &eps).collect();
        let hi: Vec<Rat> = x.iter().map(|v| v + &eps).collect();
        let u = Polyhedron::cube(&lo, &hi).expect("box");
        let bump = box_bump(&lo, &hi);
        let local = pieces(alpha, &u, k);
        let edge = pieces(bnd, &u, k - 1);
        for g in &forms {
            let bg = g.mul_poly(&bump);
            let lhs = boundary_pairing(&local, &bg);
            let rhs: Rat = edge.iter().map(|(quad, b)| quad.integrate(&b.w(&bg)).expect("bidegree (k-1, k-1)")).sum();
            if lhs.is_zero() && rhs.is_zero() {
                continue;
            }
            let s = if lhs == rhs {
                1
            } else if lhs == -rhs.clone() {
                -1
            } else {
                return None;
            };
            match sign {
                None => sign = Some(s),
                Some(t) if t != s => return None,
                _ => {}
            }
        }
    }
    Some(sign.unwrap_or(1))
}

fn box_bump(lo: &[Rat], hi: &[Rat]) -> Poly {
    let r = lo.len();
    let mut bump = Poly::one(r);
    for i in 0..r {
        let xi = Poly::var(r, i);
        let up = &Poly::constant(r, hi[i].clone()) - &xi;
        let down = &xi - &Poly::constant(r, lo[i].clone());
        bump = &(&bump * &up) * &down;
    }
    bump
}
