//! Integral affine polyhedra in canonical H-representation.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::lattice::{integer_kernel, Lattice};
use crate::linalg::lp::{maximize, Constraint, LpResult};
use crate::linalg::matrix::RatMat;
use crate::linalg::rat::{dot, primitive_scale, Rat};

use super::PolyhedronError;

/// A nonempty polyhedron `{x : A x ≤ b, E x = e}` in ℚʳ.
///
/// Stored canonically: equalities in reduced row echelon form, inequalities
/// reduced modulo the equalities, scaled to primitive integer normals, made
/// irredundant and sorted. Two polyhedra are equal iff their canonical data agree.
#[derive(Clone)]
pub struct Polyhedron {
    ambient: usize,
    eqs: Vec<Constraint>,
    ineqs: Vec<Constraint>,
    pivots: Vec<usize>,
    relint: Vec<Rat>,
    lattice: Lattice,
    facet_cache: OnceLock<Vec<Polyhedron>>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.eqs == o.eqs && self.ineqs == o.ineqs
    }
}

impl Eq for Polyhedron {}

impl Hash for Polyhedron {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.ambient.hash(h);
        self.eqs.hash(h);
        self.ineqs.hash(h);
    }
}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Polyhedron {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.ambient, &self.eqs, &self.ineqs).cmp(&(o.ambient, &o.eqs, &o.ineqs))
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &Constraint, op: &str| {
            let terms: Vec<String> = c.0.iter().map(|x| x.to_string()).collect();
            format!("[{}]·x {} {}", terms.join(","), op, c.1)
        };
        let parts: Vec<String> = self
            .eqs
            .iter()
            .map(|c| show(c, "="))
            .chain(self.ineqs.iter().map(|c| show(c, "<=")))
            .collect();
        write!(f, "Poly{}(dim {}; {})", self.ambient, self.dim(), parts.join("; "))
    }
}

/// RREF of the equality system. Returns `None` when inconsistent.
fn rref_system(ambient: usize, eqs: &[Constraint]) -> Option<(Vec<Constraint>, Vec<usize>)> {
    if eqs.is_empty() {
        return Some((Vec::new(), Vec::new()));
    }
    let rows: Vec<Vec<Rat>> = eqs
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (m, piv) = RatMat::from_rows(&rows, ambient + 1).rref();
    if piv.last() == Some(&ambient) {
        return None;
    }
    let out = (0..piv.len())
        .map(|i| {
            let mut r = m.row(i);
            let b = r.pop().unwrap();
            (r, b)
        })
        .collect();
    Some((out, piv))
}

/// Reduces an inequality modulo the RREF equalities and scales it primitively.
fn reduce_ineq(c: &Constraint, eqs: &[Constraint], pivots: &[usize]) -> Constraint {
    let mut a = c.0.clone();
    let mut b = c.1.clone();
    for ((row, rhs), &p) in eqs.iter().zip(pivots) {
        if a[p].is_zero() {
            continue;
        }
        let f = a[p].clone();
        for (x, y) in a.iter_mut().zip(row) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
        b -= &f * rhs;
    }
    let (ints, factor) = primitive_scale(&a);
    if ints.iter().all(|x| x.is_zero()) {
        return (a, b);
    }
    (ints.into_iter().map(Rat::from).collect(), b * factor)
}

struct Reduced<'a> {
    free: Vec<usize>,
    eqs: &'a [Constraint],
    pivots: &'a [usize],
    ambient: usize,
}

impl Reduced<'_> {
    fn project(&self, a: &[Rat]) -> Vec<Rat> {
        self.free.iter().map(|&j| a[j].clone()).collect()
    }

    fn lift(&self, y: &[Rat]) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.ambient];
        for (k, &j) in self.free.iter().enumerate() {
            x[j] = y[k].clone();
        }
        for ((row, rhs), &p) in self.eqs.iter().zip(self.pivots) {
            let mut v = rhs.clone();
            for &j in &self.free {
                if !row[j].is_zero() {
                    v -= &row[j] * &x[j];
                }
            }
            x[p] = v;
        }
        x
    }
}

enum Stage {
    Done(Vec<Constraint>, Vec<Constraint>, Vec<usize>, Vec<Rat>),
    Restart(Vec<Constraint>, Vec<Constraint>),
}

fn canonical_stage(
    ambient: usize,
    ineqs: &[Constraint],
    eqs: &[Constraint],
) -> Result<Stage, PolyhedronError> {
    let (eqs, pivots) = rref_system(ambient, eqs).ok_or(PolyhedronError::Empty)?;
    let mut reduced: Vec<Constraint> = Vec::new();
    for c in ineqs {
        let (a, b) = reduce_ineq(c, &eqs, &pivots);
        if a.iter().all(|x| x.is_zero()) {
            if b.is_negative() {
                return Err(PolyhedronError::Empty);
            }
            continue;
        }
        match reduced.iter_mut().find(|(a2, _)| *a2 == a) {
            Some(existing) => {
                if b < existing.1 {
                    existing.1 = b;
                }
            }
            None => reduced.push((a, b)),
        }
    }
    // opposite pairs
    let mut new_eqs = Vec::new();
    for i in 0..reduced.len() {
        for j in i + 1..reduced.len() {
            let neg: Vec<Rat> = reduced[j].0.iter().map(|x| -x).collect();
            if reduced[i].0 == neg {
                let lo = -&reduced[j].1;
                if reduced[i].1 < lo {
                    return Err(PolyhedronError::Empty);
                }
                if reduced[i].1 == lo {
                    new_eqs.push(reduced[i].clone());
                }
            }
        }
    }
    if !new_eqs.is_empty() {
        let mut all = eqs.clone();
        all.extend(new_eqs);
        return Ok(Stage::Restart(reduced, all));
    }
    let free: Vec<usize> = (0..ambient).filter(|j| !pivots.contains(j)).collect();
    let red = Reduced { free, eqs: &eqs, pivots: &pivots, ambient };
    let nf = red.free.len();
    if reduced.is_empty() {
        let relint = red.lift(&vec![Rat::zero(); nf]);
        return Ok(Stage::Done(eqs.clone(), reduced, pivots.clone(), relint));
    }
    // max t subject to a·y + t ≤ b, t ≤ 1
    let mut lp_ineqs: Vec<Constraint> = reduced
        .iter()
        .map(|(a, b)| {
            let mut v = red.project(a);
            v.push(Rat::one());
            (v, b.clone())
        })
        .collect();
    let mut cap = vec![Rat::zero(); nf + 1];
    cap[nf] = Rat::one();
    lp_ineqs.push((cap.clone(), Rat::one()));
    let (point, t) = match maximize(&cap, &lp_ineqs, &[]).expect("consistent dimensions") {
        LpResult::Optimal { point, value } => (point, value),
        LpResult::Infeasible => return Err(PolyhedronError::Empty),
        LpResult::Unbounded { .. } => unreachable!("t is capped"),
    };
    if t.is_negative() {
        return Err(PolyhedronError::Empty);
    }
    if t.is_positive() {
        let relint = red.lift(&point[..nf]);
        let irr = remove_redundant(&red, reduced);
        return Ok(Stage::Done(eqs.clone(), irr, pivots.clone(), relint));
    }
    // some inequalities are implicit equalities
    let sys: Vec<Constraint> = reduced.iter().map(|(a, b)| (red.project(a), b.clone())).collect();
    let mut implicit = Vec::new();
    let mut rest = Vec::new();
    for (k, (a, b)) in sys.iter().enumerate() {
        let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
        match maximize(&neg, &sys, &[]).expect("consistent dimensions") {
            LpResult::Optimal { value, .. } if -&value == *b => implicit.push(reduced[k].clone()),
            _ => rest.push(reduced[k].clone()),
        }
    }
    let mut all = eqs.clone();
    all.extend(implicit);
    Ok(Stage::Restart(rest, all))
}

fn remove_redundant(red: &Reduced<'_>, ineqs: Vec<Constraint>) -> Vec<Constraint> {
    let sys: Vec<Constraint> = ineqs.iter().map(|(a, b)| (red.project(a), b.clone())).collect();
    let mut keep = vec![true; sys.len()];
    for j in 0..sys.len() {
        let others: Vec<Constraint> =
            (0..sys.len()).filter(|&k| k != j && keep[k]).map(|k| sys[k].clone()).collect();
        if let LpResult::Optimal { value, .. } =
            maximize(&sys[j].0, &others, &[]).expect("consistent dimensions")
        {
            if value <= sys[j].1 {
                keep[j] = false;
            }
        }
    }
    let mut out: Vec<Constraint> =
        ineqs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    out.sort();
    out
}

/// Extended gcd over a list: returns `(g, c)` with `Σ cᵢ vᵢ = g ≥ 0`.
fn multi_xgcd(v: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut c = vec![BigInt::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let e = g.extended_gcd(x);
        // e.gcd = e.x * g + e.y * x
        for ck in c.iter_mut().take(i) {
            *ck *= &e.x;
        }
        c[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for ck in c.iter_mut() {
            *ck = -&*ck;
        }
    }
    (g, c)
}

impl Polyhedron {
    /// Builds `{x : a·x ≤ b for (a,b) in ineqs, a·x = b for (a,b) in eqs}`.
    pub fn new(
        ambient: usize,
        ineqs: Vec<Constraint>,
        eqs: Vec<Constraint>,
    ) -> Result<Polyhedron, PolyhedronError> {
        for (a, _) in ineqs.iter().chain(&eqs) {
            if a.len() != ambient {
                return Err(PolyhedronError::AmbientMismatch { expected: ambient, found: a.len() });
            }
        }
        let (mut ineqs, mut eqs) = (ineqs, eqs);
        loop {
            match canonical_stage(ambient, &ineqs, &eqs)? {
                Stage::Restart(i, e) => {
                    ineqs = i;
                    eqs = e;
                }
                Stage::Done(eqs, ineqs, pivots, relint) => {
                    let rows: Vec<Vec<Rat>> = eqs.iter().map(|(a, _)| a.clone()).collect();
                    let lattice = integer_kernel(ambient, &rows);
                    return Ok(Polyhedron { ambient, eqs, ineqs, pivots, relint, lattice, facet_cache: OnceLock::new() });
                }
            }
        }
    }

    /// Like [`Polyhedron::new`] but maps emptiness to `None`.
    pub fn try_new(ambient: usize, ineqs: Vec<Constraint>, eqs: Vec<Constraint>) -> Option<Polyhedron> {
        match Polyhedron::new(ambient, ineqs, eqs) {
            Ok(p) => Some(p),
            Err(PolyhedronError::Empty) => None,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn full_space(r: usize) -> Polyhedron {
        Polyhedron::new(r, Vec::new(), Vec::new()).expect("full space")
    }

    pub fn point(p: &[Rat]) -> Polyhedron {
        let r = p.len();
        let eqs = (0..r)
            .map(|i| {
                let mut a = vec![Rat::zero(); r];
                a[i] = Rat::one();
                (a, p[i].clone())
            })
            .collect();
        Polyhedron::new(r, Vec::new(), eqs).expect("point")
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn cube(lo: &[Rat], hi: &[Rat]) -> Result<Polyhedron, PolyhedronError> {
        let r = lo.len();
        let mut ineqs = Vec::new();
        for i in 0..r {
            let mut a = vec![Rat::zero(); r];
            a[i] = Rat::one();
            ineqs.push((a.clone(), hi[i].clone()));
            a[i] = -Rat::one();
            ineqs.push((a, -&lo[i]));
        }
        Polyhedron::new(r, ineqs, Vec::new())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient - self.eqs.len()
    }

    pub fn codim(&self) -> usize {
        self.eqs.len()
    }

    /// Canonical equalities (RREF rows with right-hand side).
    pub fn eqs(&self) -> &[Constraint] {
        &self.eqs
    }

    /// Canonical irredundant inequalities, one per facet.
    pub fn ineqs(&self) -> &[Constraint] {
        &self.ineqs
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates not eliminated by the affine hull equations.
    pub fn free_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|j| !self.pivots.contains(j)).collect()
    }

    pub fn relint_point(&self) -> &[Rat] {
        &self.relint
    }

    /// N_σ: integer points of the linear space parallel to the affine hull.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Equalities scaled to primitive integer normals.
    pub fn integral_eqs(&self) -> Vec<Constraint> {
        self.eqs
            .iter()
            .map(|(a, b)| {
                let (ints, f) = primitive_scale(a);
                (ints.into_iter().map(Rat::from).collect(), b * &f)
            })
            .collect()
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        self.eqs.iter().all(|(a, b)| dot(a, x) == *b) && self.ineqs.iter().all(|(a, b)| dot(a, x) <= *b)
    }

    pub fn contains_in_relint(&self, x: &[Rat]) -> bool {
        self.eqs.iter().all(|(a, b)| dot(a, x) == *b) && self.ineqs.iter().all(|(a, b)| dot(a, x) < *b)
    }

    fn lp_system(&self) -> (Vec<Constraint>, Vec<Constraint>) {
        (self.ineqs.clone(), self.eqs.clone())
    }

    /// Supremum of `a·x` over the polyhedron, `None` when unbounded.
    pub fn sup(&self, a: &[Rat]) -> Option<Rat> {
        let (i, e) = self.lp_system();
        match maximize(a, &i, &e).expect("consistent dimensions") {
            LpResult::Optimal { value, .. } => Some(value),
            LpResult::Unbounded { .. } => None,
            LpResult::Infeasible => unreachable!("polyhedra are nonempty"),
        }
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Polyhedron) -> bool {
        if !self.contains_point(&other.relint) {
            return false;
        }
        for (a, b) in &self.eqs {
            // the hull of other must satisfy a·x = b identically
            if reduce_ineq(&(a.clone(), b.clone()), &other.eqs, &other.pivots).0.iter().any(|x| !x.is_zero()) {
                return false;
            }
        }
        self.ineqs.iter().all(|(a, b)| other.sup(a).is_some_and(|v| v <= *b))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Option<Polyhedron> {
        assert_eq!(self.ambient, other.ambient);
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        Polyhedron::try_new(self.ambient, ineqs, eqs)
    }

    /// Adds constraints, returning `None` if the result is empty.
    pub fn with_constraints(&self, ineqs: &[Constraint], eqs: &[Constraint]) -> Option<Polyhedron> {
        let mut i = self.ineqs.clone();
        i.extend(ineqs.iter().cloned());
        let mut e = self.eqs.clone();
        e.extend(eqs.iter().cloned());
        Polyhedron::try_new(self.ambient, i, e)
    }

    /// Whether the hyperplane `a·x = b` meets the relative interior and `a`
    /// is non-constant on the affine hull.
    pub fn is_cut_by(&self, a: &[Rat], b: &Rat) -> bool {
        let (red, _) = reduce_ineq(&(a.to_vec(), b.clone()), &self.eqs, &self.pivots);
        if red.iter().all(|x| x.is_zero()) {
            return false;
        }
        let v = dot(a, &self.relint) - b;
        if v.is_zero() {
            return true;
        }
        if v.is_positive() {
            let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
            self.sup(&neg).map_or(true, |m| -m < *b)
        } else {
            self.sup(a).map_or(true, |m| m > *b)
        }
    }

    /// Splits along `a·x = b` when the hyperplane cuts the relative interior.
    pub fn split(&self, a: &[Rat], b: &Rat) -> Vec<Polyhedron> {
        if !self.is_cut_by(a, b) {
            return vec![self.clone()];
        }
        let neg: Vec<Rat> = a.iter().map(|x| -x).collect();
        let lo = self.with_constraints(&[(a.to_vec(), b.clone())], &[]);
        let hi = self.with_constraints(&[(neg, -b)], &[]);
        lo.into_iter().chain(hi).collect()
    }

    /// Facets, one per canonical inequality, in inequality order.
    pub fn facets(&self) -> &[Polyhedron] {
        self.facet_cache.get_or_init(|| (0..self.ineqs.len()).map(|j| self.build_facet(j)).collect())
    }

    pub fn facet(&self, j: usize) -> Polyhedron {
        self.facets()[j].clone()
    }

    fn build_facet(&self, j: usize) -> Polyhedron {
        let mut ineqs = self.ineqs.clone();
        let c = ineqs.remove(j);
        let mut eqs = self.eqs.clone();
        eqs.push(c);
        Polyhedron::new(self.ambient, ineqs, eqs).expect("facet of a nonempty polyhedron")
    }

    /// All faces of every dimension, including the polyhedron itself, sorted
    /// by decreasing dimension.
    pub fn faces(&self) -> Vec<Polyhedron> {
        let mut seen: HashSet<Polyhedron> = HashSet::new();
        let mut out = vec![self.clone()];
        seen.insert(self.clone());
        let mut frontier = vec![self.clone()];
        while let Some(p) = frontier.pop() {
            for f in p.facets() {
                if seen.insert(f.clone()) {
                    out.push(f.clone());
                    frontier.push(f.clone());
                }
            }
        }
        out.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
        out
    }

    /// Index of the inequality whose facet is `tau`, if `tau` is a facet.
    pub fn facet_index(&self, tau: &Polyhedron) -> Option<usize> {
        if tau.ambient != self.ambient || tau.dim() + 1 != self.dim() {
            return None;
        }
        (0..self.ineqs.len()).find(|&j| {
            let (a, b) = &self.ineqs[j];
            dot(a, &tau.relint) == *b && self.contains_point(&tau.relint) && self.facets()[j] == *tau
        })
    }

    /// Normal vector ω for the facet cut out by inequality `j`: a vector of
    /// N_σ pointing into σ whose class generates N_σ/N_τ.
    pub fn facet_normal(&self, j: usize) -> Vec<BigInt> {
        let a = &self.ineqs[j].0;
        let basis = &self.lattice.basis;
        let vals: Vec<BigInt> = basis
            .iter()
            .map(|bv| {
                let s = dot(a, &bv.iter().map(Rat::from).collect::<Vec<_>>());
                s.to_int().expect("integral normal on integral lattice")
            })
            .collect();
        let (_, c) = multi_xgcd(&vals);
        let mut omega = vec![BigInt::zero(); self.ambient];
        for (ci, bv) in c.iter().zip(basis) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in omega.iter_mut().zip(bv) {
                *o -= ci * x;
            }
        }
        omega
    }

    /// Whether the polyhedron is bounded (a polytope).
    pub fn is_bounded(&self) -> bool {
        for j in self.free_coords() {
            let mut e = vec![Rat::zero(); self.ambient];
            e[j] = Rat::one();
            if self.sup(&e).is_none() {
                return false;
            }
            e[j] = -Rat::one();
            if self.sup(&e).is_none() {
                return false;
            }
        }
        true
    }

    /// Vertices of a bounded polyhedron, sorted.
    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        let d = self.dim();
        let free = self.free_coords();
        let red = Reduced { free: free.clone(), eqs: &self.eqs, pivots: &self.pivots, ambient: self.ambient };
        if d == 0 {
            return vec![self.relint.clone()];
        }
        let sys: Vec<Constraint> =
            self.ineqs.iter().map(|(a, b)| (red.project(a), b.clone())).collect();
        let mut found: Vec<Vec<Rat>> = Vec::new();
        let n = sys.len();
        let mut idx: Vec<usize> = (0..d).collect();
        if n < d {
            return found;
        }
        loop {
            let rows: Vec<Vec<Rat>> = idx.iter().map(|&i| sys[i].0.clone()).collect();
            let m = RatMat::from_rows(&rows, d);
            if let Some(inv) = m.inverse() {
                let rhs: Vec<Rat> = idx.iter().map(|&i| sys[i].1.clone()).collect();
                let y = inv.mul_vec(&rhs);
                if sys.iter().all(|(a, b)| dot(a, &y) <= *b) {
                    let x = red.lift(&y);
                    if !found.contains(&x) {
                        found.push(x);
                    }
                }
            }
            // next combination
            let mut k = d;
            loop {
                if k == 0 {
                    found.sort();
                    return found;
                }
                k -= 1;
                if idx[k] != k + n - d {
                    break;
                }
                if k == 0 {
                    found.sort();
                    return found;
                }
            }
            idx[k] += 1;
            for t in k + 1..d {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }

    /// σ × σ′ in ℝ^{r+r′}.
    pub fn product(&self, other: &Polyhedron) -> Polyhedron {
        let r = self.ambient + other.ambient;
        let pad = |a: &[Rat], left: bool| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); r];
            let off = if left { 0 } else { self.ambient };
            for (i, x) in a.iter().enumerate() {
                v[off + i] = x.clone();
            }
            v
        };
        let mut ineqs: Vec<Constraint> = self.ineqs.iter().map(|(a, b)| (pad(a, true), b.clone())).collect();
        ineqs.extend(other.ineqs.iter().map(|(a, b)| (pad(a, false), b.clone())));
        ineqs.sort();
        let mut eqs: Vec<Constraint> = self.eqs.iter().map(|(a, b)| (pad(a, true), b.clone())).collect();
        eqs.extend(other.eqs.iter().map(|(a, b)| (pad(a, false), b.clone())));
        let mut pivots = self.pivots.clone();
        pivots.extend(other.pivots.iter().map(|p| p + self.ambient));
        let mut relint = self.relint.clone();
        relint.extend(other.relint.iter().cloned());
        let rows: Vec<Vec<Rat>> = eqs.iter().map(|(a, _)| a.clone()).collect();
        let lattice = integer_kernel(r, &rows);
        Polyhedron { ambient: r, eqs, ineqs, pivots, relint, lattice, facet_cache: OnceLock::new() }
    }

    /// The translate σ + v.
    pub fn translate(&self, v: &[Rat]) -> Polyhedron {
        let shift = |c: &Constraint| (c.0.clone(), &c.1 + &dot(&c.0, v));
        Polyhedron {
            ambient: self.ambient,
            eqs: self.eqs.iter().map(shift).collect(),
            ineqs: self.ineqs.iter().map(shift).collect(),
            pivots: self.pivots.clone(),
            relint: self.relint.iter().zip(v).map(|(x, y)| x + y).collect(),
            lattice: self.lattice.clone(),
            facet_cache: OnceLock::new(),
        }
    }

    /// Constraint describing `a·x ≤ b` with `a` primitive; used for reporting.
    pub fn affine_hull(&self) -> Polyhedron {
        Polyhedron::new(self.ambient, Vec::new(), self.eqs.clone()).expect("affine hull")
    }
}

/// Normal vector ω_{σ,τ} for a facet τ of σ.
pub fn normal_vector(sigma: &Polyhedron, tau: &Polyhedron) -> Result<Vec<BigInt>, PolyhedronError> {
    let j = sigma.facet_index(tau).ok_or(PolyhedronError::NotAFacet)?;
    Ok(sigma.facet_normal(j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lattice::{lattice_index, LatticeIndex};
    use crate::linalg::rat::q;

    fn c(a: &[i64], b: i64) -> Constraint {
        (a.iter().map(|&x| q(x)).collect(), q(b))
    }

    fn unit_square() -> Polyhedron {
        Polyhedron::cube(&[q(0), q(0)], &[q(1), q(1)]).unwrap()
    }

    #[test]
    fn square_has_nine_faces() {
        let f = unit_square().faces();
        assert_eq!(f.len(), 9);
        assert_eq!(f.iter().filter(|p| p.dim() == 0).count(), 4);
        assert_eq!(f.iter().filter(|p| p.dim() == 1).count(), 4);
    }

    #[test]
    fn half_line_and_full_space_faces() {
        let h = Polyhedron::new(1, vec![c(&[-1], 0)], vec![]).unwrap();
        assert_eq!(h.faces().len(), 2);
        assert_eq!(Polyhedron::full_space(3).faces().len(), 1);
    }

    #[test]
    fn implicit_equalities_are_detected() {
        let p = Polyhedron::new(2, vec![c(&[1, 1], 1), c(&[-1, -1], -1), c(&[-1, 0], 0), c(&[0, -1], 0)], vec![])
            .unwrap();
        assert_eq!(p.dim(), 1);
        let p2 = Polyhedron::new(2, vec![c(&[1, 0], 0), c(&[-1, 0], 0), c(&[0, 1], 5), c(&[0, 1], 7)], vec![])
            .unwrap();
        assert_eq!(p2.dim(), 1);
        assert_eq!(p2.ineqs().len(), 1);
        let p3 = Polyhedron::new(
            2,
            vec![c(&[1, 0], 0), c(&[0, 1], 0), c(&[-1, -1], 0), c(&[1, -1], 3)],
            vec![],
        )
        .unwrap();
        assert_eq!(p3.dim(), 0);
        assert!(Polyhedron::new(1, vec![c(&[-1], -1), c(&[1], 0)], vec![]).is_err());
    }

    #[test]
    fn normal_vector_examples() {
        let cone = Polyhedron::new(2, vec![c(&[2, -1], 0), c(&[-2, 1], 0), c(&[-1, 0], 0)], vec![]).unwrap();
        let origin = Polyhedron::point(&[q(0), q(0)]);
        assert_eq!(normal_vector(&cone, &origin).unwrap(), vec![BigInt::from(1), BigInt::from(2)]);

        let seg = Polyhedron::cube(&[q(0)], &[q(1)]).unwrap();
        assert_eq!(normal_vector(&seg, &Polyhedron::point(&[q(1)])).unwrap(), vec![BigInt::from(-1)]);

        let wedge = Polyhedron::new(2, vec![c(&[0, -1], 0), c(&[-1, 1], 0)], vec![]).unwrap();
        let ray = Polyhedron::new(2, vec![c(&[-1, 0], 0)], vec![c(&[1, -1], 0)]).unwrap();
        let w = normal_vector(&wedge, &ray).unwrap();
        let mut gens = ray.lattice().basis.clone();
        gens.push(w.clone());
        let sum = Lattice::generated_by(2, &gens);
        assert_eq!(lattice_index(&sum, wedge.lattice()), Ok(LatticeIndex::Finite(BigInt::from(1))));
        let t = ray.relint_point();
        let probe: Vec<Rat> = t.iter().zip(&w).map(|(x, y)| x + &(Rat::from(y) * Rat::frac(1, 100))).collect();
        assert!(wedge.contains_point(&probe));
        assert!(normal_vector(&wedge, &origin).is_err());
    }

    #[test]
    fn vertices_of_triangle() {
        let t = Polyhedron::new(2, vec![c(&[-1, 0], 0), c(&[0, -1], 0), c(&[1, 1], 2)], vec![]).unwrap();
        assert_eq!(t.vertices().len(), 3);
        assert!(t.is_bounded());
        assert!(!Polyhedron::new(1, vec![c(&[-1], 0)], vec![]).unwrap().is_bounded());
    }

    #[test]
    fn product_matches_direct_construction() {
        let s = Polyhedron::cube(&[q(0)], &[q(1)]).unwrap();
        let h = Polyhedron::new(1, vec![c(&[-1], 0)], vec![]).unwrap();
        let direct = Polyhedron::new(2, vec![c(&[-1, 0], 0), c(&[1, 0], 1), c(&[0, -1], 0)], vec![]).unwrap();
        assert_eq!(s.product(&h), direct);
    }
}
