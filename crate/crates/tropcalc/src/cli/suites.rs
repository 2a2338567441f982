//! Identity suites run by `tropcalc verify`, over document objects or over
//! seeded random instances.

use rand::Rng;
use rayon::prelude::*;

use crate::deltaforms::{tropical_pl_sides, DeltaForm, PsFunction};
use crate::integration::{green_sides, stokes_sides};
use crate::linalg::rat::Rat;
use crate::morphisms::{projection_formula_sides, AffineMap};
use crate::products::diagonal_wedge;
use crate::random::Sampler;
use crate::superforms::{Poly, Superform};

use super::io::{Document, Object};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Stokes,
    Green,
    Pl,
    Projection,
    Assoc,
}

/// One instance of an identity.
#[derive(Clone, Debug)]
pub enum Instance {
    Stokes { c: DeltaForm, eta: Superform },
    Green { c: DeltaForm, alpha: Superform, beta: Superform },
    Pl { phi: PsFunction, alpha: DeltaForm },
    Projection { f: AffineMap, alpha: DeltaForm, beta: DeltaForm },
    /// `(a∧b)∧c = a∧(b∧c)`.
    Assoc { a: DeltaForm, b: DeltaForm, c: DeltaForm },
    /// `a∧b = (−1)^{deg a·deg b} b∧a`, degrees of the superform parts.
    Comm { a: DeltaForm, b: DeltaForm },
}

/// Both sides of one instance.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub lhs: Object,
    pub rhs: Object,
}

fn scalar(rank: usize, x: Rat) -> Object {
    Object::Superform(Superform::function(Poly::constant(rank, x)))
}

fn forms(lhs: DeltaForm, rhs: DeltaForm) -> Result<Outcome, String> {
    let pass = lhs.equal(&rhs).map_err(|e| e.to_string())?;
    Ok(Outcome { pass, lhs: Object::DeltaForm(lhs), rhs: Object::DeltaForm(rhs) })
}

fn scalars(rank: usize, (lhs, rhs): (Rat, Rat)) -> Outcome {
    Outcome { pass: lhs == rhs, lhs: scalar(rank, lhs), rhs: scalar(rank, rhs) }
}

fn total_degree(a: &DeltaForm) -> usize {
    let (p, q, _) = a.form_type();
    p + q
}

impl Instance {
    pub fn label(&self) -> &'static str {
        match self {
            Instance::Stokes { .. } => "stokes",
            Instance::Green { .. } => "green",
            Instance::Pl { .. } => "pl",
            Instance::Projection { .. } => "projection",
            Instance::Assoc { .. } => "assoc",
            Instance::Comm { .. } => "comm",
        }
    }

    pub fn inputs(&self) -> Vec<(&'static str, Object)> {
        let d = |x: &DeltaForm| Object::DeltaForm(x.clone());
        let s = |x: &Superform| Object::Superform(x.clone());
        match self {
            Instance::Stokes { c, eta } => vec![("c", d(c)), ("eta", s(eta))],
            Instance::Green { c, alpha, beta } => vec![("c", d(c)), ("alpha", s(alpha)), ("beta", s(beta))],
            Instance::Pl { phi, alpha } => vec![("phi", Object::PsFunction(phi.clone())), ("alpha", d(alpha))],
            Instance::Projection { f, alpha, beta } => {
                vec![("f", Object::AffineMap(f.clone())), ("alpha", d(alpha)), ("beta", d(beta))]
            }
            Instance::Assoc { a, b, c } => vec![("a", d(a)), ("b", d(b)), ("c", d(c))],
            Instance::Comm { a, b } => vec![("a", d(a)), ("b", d(b))],
        }
    }

    pub fn run(&self) -> Result<Outcome, String> {
        let e = |x: &dyn std::fmt::Display| x.to_string();
        match self {
            Instance::Stokes { c, eta } => stokes_sides(c, eta).map(|s| scalars(c.rank(), s)).map_err(|x| e(&x)),
            Instance::Green { c, alpha, beta } => {
                green_sides(c, alpha, beta).map(|s| scalars(c.rank(), s)).map_err(|x| e(&x))
            }
            Instance::Pl { phi, alpha } => {
                let (l, r) = tropical_pl_sides(phi, alpha).map_err(|x| e(&x))?;
                forms(l, r)
            }
            Instance::Projection { f, alpha, beta } => {
                let (l, r) = projection_formula_sides(f, alpha, beta).map_err(|x| e(&x))?;
                forms(l, r)
            }
            Instance::Assoc { a, b, c } => {
                let w = |x: &DeltaForm, y: &DeltaForm| diagonal_wedge(x, y).map_err(|x| e(&x));
                forms(w(&w(a, b)?, c)?, w(a, &w(b, c)?)?)
            }
            Instance::Comm { a, b } => {
                let ab = diagonal_wedge(a, b).map_err(|x| e(&x))?;
                let ba = diagonal_wedge(b, a).map_err(|x| e(&x))?;
                let ba = if total_degree(a) * total_degree(b) % 2 == 1 { ba.neg() } else { ba };
                forms(ab, ba)
            }
        }
    }
}

/// Runs the instances in parallel; results are in instance order.
pub fn run_all(instances: &[Instance]) -> Vec<Result<Outcome, String>> {
    instances.par_iter().map(Instance::run).collect()
}

fn deltas(doc: &Document) -> Vec<&DeltaForm> {
    doc.objects
        .values()
        .filter_map(|o| match o {
            Object::DeltaForm(d) => Some(d),
            _ => None,
        })
        .collect()
}

fn superforms(doc: &Document) -> Vec<&Superform> {
    doc.objects
        .values()
        .filter_map(|o| match o {
            Object::Superform(s) => Some(s),
            _ => None,
        })
        .collect()
}

/// All instances of a suite that the document's objects admit, in name order.
pub fn from_document(suite: Suite, doc: &Document) -> Vec<Instance> {
    let ds = deltas(doc);
    let ss = superforms(doc);
    let mut out = Vec::new();
    match suite {
        Suite::Stokes => {
            for c in ds.iter().filter(|c| c.weights().is_some() && c.cell_dim() > 0) {
                let k = c.cell_dim();
                for eta in ss.iter().filter(|s| s.rank() == c.rank()) {
                    if matches!(eta.bidegree(), (p, q) if p + q + 1 == 2 * k && (p + 1 == k || q + 1 == k)) {
                        out.push(Instance::Stokes { c: (*c).clone(), eta: (*eta).clone() });
                    }
                }
            }
        }
        Suite::Green => {
            for c in ds.iter().filter(|c| c.weights().is_some() && c.cell_dim() > 0) {
                let k = c.cell_dim();
                let sym: Vec<&&Superform> = ss.iter().filter(|s| s.rank() == c.rank() && s.is_symmetric()).collect();
                for a in &sym {
                    for b in &sym {
                        if a.bidegree().0 + b.bidegree().0 + 1 == k {
                            out.push(Instance::Green { c: (*c).clone(), alpha: (**a).clone(), beta: (**b).clone() });
                        }
                    }
                }
            }
        }
        Suite::Pl => {
            for o in doc.objects.values() {
                if let Object::PsFunction(phi) = o {
                    for a in ds.iter().filter(|a| a.rank() == phi.rank()) {
                        out.push(Instance::Pl { phi: phi.clone(), alpha: (*a).clone() });
                    }
                }
            }
        }
        Suite::Projection => {
            for o in doc.objects.values() {
                if let Object::AffineMap(f) = o {
                    for a in ds.iter().filter(|a| a.rank() == f.source_rank()) {
                        for b in ds.iter().filter(|b| b.rank() == f.target_rank()) {
                            out.push(Instance::Projection { f: f.clone(), alpha: (*a).clone(), beta: (*b).clone() });
                        }
                    }
                }
            }
        }
        Suite::Assoc => {
            for (i, a) in ds.iter().enumerate() {
                for (j, b) in ds.iter().enumerate().skip(i) {
                    if a.rank() != b.rank() {
                        continue;
                    }
                    if j > i {
                        out.push(Instance::Comm { a: (*a).clone(), b: (*b).clone() });
                    }
                    for c in ds.iter().skip(j).filter(|c| c.rank() == a.rank()) {
                        out.push(Instance::Assoc { a: (*a).clone(), b: (*b).clone(), c: (*c).clone() });
                    }
                }
            }
        }
    }
    out
}

fn too_big(s: &Sampler, forms: &[&DeltaForm]) -> bool {
    forms.iter().any(|d| d.cells().len() > s.size.max_cells)
}

/// Draws a random instance, retrying until the δ-forms fit the cell bound.
fn random_instance(suite: Suite, s: &mut Sampler) -> Instance {
    for attempt in 0.. {
        let inst = draw(suite, s);
        let big = match &inst {
            Instance::Stokes { c, .. } | Instance::Green { c, .. } => too_big(s, &[c]),
            Instance::Pl { alpha, .. } => too_big(s, &[alpha]),
            Instance::Projection { alpha, beta, .. } => too_big(s, &[alpha, beta]),
            Instance::Assoc { a, b, c } => too_big(s, &[a, b, c]),
            Instance::Comm { a, b } => too_big(s, &[a, b]),
        };
        if !big || attempt >= 50 {
            return inst;
        }
    }
    unreachable!()
}

fn draw(suite: Suite, s: &mut Sampler) -> Instance {
    let deg = s.size.max_degree;
    let r = s.rank();
    match suite {
        Suite::Stokes => {
            let k = s.rng().gen_range(1..=r);
            let c = DeltaForm::from_weights(r, r - k, vec![(s.polytope(r, k), Rat::one())]).expect("bounded cell");
            let (p, q) = if s.rng().gen_bool(0.5) { (k - 1, k) } else { (k, k - 1) };
            let eta = s.superform(r, p, q, deg);
            Instance::Stokes { c, eta }
        }
        Suite::Green => {
            let k = s.rng().gen_range(1..=r);
            let c = DeltaForm::from_weights(r, r - k, vec![(s.polytope(r, k), Rat::one())]).expect("bounded cell");
            let p = s.rng().gen_range(0..k);
            let alpha = s.symmetric_superform(r, p, deg);
            let beta = s.symmetric_superform(r, k - 1 - p, deg);
            Instance::Green { c, alpha, beta }
        }
        Suite::Pl => {
            let codim = s.rng().gen_range(0..r);
            let alpha = s.tropical_cycle(r, codim, 2).expect("corner loci of tropical polynomials");
            let phi = s.ps_function(r, deg.min(3));
            Instance::Pl { phi, alpha }
        }
        Suite::Projection => {
            let t = s.rank();
            let f = s.affine_map(r, t);
            let ca = s.rng().gen_range(0..r);
            let alpha = s.balanced_form(r, ca, deg.min(2)).expect("balanced by construction");
            let cb = s.rng().gen_range(0..t);
            let beta = s.tropical_cycle(t, cb, 1).expect("corner loci of tropical polynomials");
            Instance::Projection { f, alpha, beta }
        }
        Suite::Assoc => {
            let pick = |s: &mut Sampler| {
                let codim = s.rng().gen_range(0..r.min(2));
                s.balanced_form(r, codim, 1).expect("balanced by construction")
            };
            if s.rng().gen_bool(0.5) {
                let (a, b, c) = (pick(s), pick(s), pick(s));
                Instance::Assoc { a, b, c }
            } else {
                let (a, b) = (pick(s), pick(s));
                Instance::Comm { a, b }
            }
        }
    }
}

/// `count` seeded random instances of a suite.
pub fn random_instances(suite: Suite, s: &mut Sampler, count: usize) -> Vec<Instance> {
    (0..count).map(|_| random_instance(suite, s)).collect()
}
