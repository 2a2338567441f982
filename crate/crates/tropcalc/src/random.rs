//! Seeded generators of random instances for the randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deltaforms::{iterated_corner_locus, ps_wedge, DeltaError, DeltaForm, PsForm, PsFunction};
use crate::linalg::matrix::IntMat;
use crate::linalg::rat::{dot, Rat};
use crate::morphisms::AffineMap;
use crate::polyhedra::{AffineForm, Polyhedron};
use crate::superforms::{index_subsets, Poly, Superform};

/// Size bounds for generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeSpec {
    pub max_rank: usize,
    pub max_cells: usize,
    pub max_degree: u32,
}

impl Default for SizeSpec {
    fn default() -> SizeSpec {
        SizeSpec { max_rank: 3, max_cells: 12, max_degree: 4 }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pub size: SizeSpec,
}

impl Sampler {
    pub fn new(seed: u64, size: SizeSpec) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), size }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rank(&mut self) -> usize {
        self.rng.gen_range(1..=self.size.max_rank)
    }

    /// A small rational with denominator in {1, 2, 3}.
    pub fn small_rat(&mut self) -> Rat {
        let d = self.int(1, 3);
        Rat::frac(self.int(-4, 4), d)
    }

    /// A random polynomial with at most `terms` monomials of degree ≤ `degree`.
    pub fn poly(&mut self, rank: usize, degree: u32, terms: usize) -> Poly {
        let mut f = Poly::zero(rank);
        for _ in 0..terms {
            let mut exp = vec![0u32; rank];
            let d = self.rng.gen_range(0..=degree);
            for _ in 0..d {
                if rank > 0 {
                    exp[self.rng.gen_range(0..rank)] += 1;
                }
            }
            f.add_term(exp, self.small_rat());
        }
        f
    }

    /// A random superform of bidegree (p, q).
    pub fn superform(&mut self, rank: usize, p: usize, q: usize, degree: u32) -> Superform {
        let is = index_subsets(rank, p);
        let js = index_subsets(rank, q);
        let mut out = Superform::zero(rank, p, q);
        if is.is_empty() || js.is_empty() {
            return out;
        }
        let n = self.rng.gen_range(1..=3);
        for _ in 0..n {
            let i = is.choose(&mut self.rng).expect("nonempty").clone();
            let j = js.choose(&mut self.rng).expect("nonempty").clone();
            let f = self.poly(rank, degree, 3);
            out = out.plus(&Superform::term(f, &i, &j).expect("indices in range"));
        }
        out
    }

    /// A symmetric (p, p)-superform: α + (−1)^p Jα.
    pub fn symmetric_superform(&mut self, rank: usize, p: usize, degree: u32) -> Superform {
        let a = self.superform(rank, p, p, degree);
        let j = a.j_op();
        if p % 2 == 1 {
            a.minus(&j)
        } else {
            a.plus(&j)
        }
    }

    /// A nonzero integer vector with entries in [−b, b].
    pub fn int_vector(&mut self, rank: usize, b: i64) -> Vec<i64> {
        loop {
            let v: Vec<i64> = (0..rank).map(|_| self.int(-b, b)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }

    /// A bounded polytope of dimension `dim` in ℝ^rank: a box around a random
    /// center cut by random half-spaces and sliced by random hyperplanes
    /// through the center.
    pub fn polytope(&mut self, rank: usize, dim: usize) -> Polyhedron {
        let center: Vec<Rat> = (0..rank).map(|_| Rat::from(self.int(-2, 2))).collect();
        let mut ineqs = Vec::new();
        for i in 0..rank {
            let mut e = vec![Rat::zero(); rank];
            e[i] = Rat::one();
            let up = Rat::from(self.int(1, 3));
            let down = Rat::from(self.int(1, 3));
            ineqs.push((e.clone(), &center[i] + &up));
            ineqs.push((e.iter().map(|x| -x).collect(), -&center[i] + &down));
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            let a: Vec<Rat> = self.int_vector(rank, 2).into_iter().map(Rat::from).collect();
            let slack = Rat::frac(self.int(1, 4), 2);
            let b = dot(&a, &center) + slack;
            ineqs.push((a, b));
        }
        loop {
            let mut eqs = Vec::new();
            for _ in dim..rank {
                let a: Vec<Rat> = self.int_vector(rank, 2).into_iter().map(Rat::from).collect();
                let b = dot(&a, &center);
                eqs.push((a, b));
            }
            if let Some(p) = Polyhedron::try_new(rank, ineqs.clone(), eqs) {
                if p.dim() == dim {
                    return p;
                }
            }
        }
    }

    /// Affine forms `a·x + c_a` for all exponents `a` with |a| ≤ degree.
    pub fn tropical_polynomial(&mut self, rank: usize, degree: u32) -> Vec<AffineForm> {
        let mut out = Vec::new();
        let mut exp = vec![0u32; rank];
        fn rec(s: &mut Sampler, i: usize, left: u32, exp: &mut Vec<u32>, out: &mut Vec<AffineForm>) {
            if i == exp.len() {
                let c = Rat::from(s.int(-6, 6));
                out.push(AffineForm::new(exp.iter().map(|&e| Rat::from(e as i64)).collect(), c));
                return;
            }
            for e in 0..=left {
                exp[i] = e;
                rec(s, i + 1, left - e, exp, out);
            }
            exp[i] = 0;
        }
        rec(self, 0, degree, &mut exp, &mut out);
        out
    }

    /// A max of a few random integral affine forms.
    pub fn pl_function(&mut self, rank: usize, pieces: usize) -> PsFunction {
        let forms: Vec<AffineForm> = (0..pieces.max(1))
            .map(|_| {
                let a: Vec<Rat> = (0..rank).map(|_| Rat::from(self.int(-2, 2))).collect();
                AffineForm::new(a, Rat::from(self.int(-3, 3)))
            })
            .collect();
        PsFunction::max_of(&forms).expect("integral forms")
    }

    /// `g + h·ψ` with ψ piecewise linear, g, h polynomials; total degree ≤ `degree`.
    pub fn ps_function(&mut self, rank: usize, degree: u32) -> PsFunction {
        let n = self.rng.gen_range(2..=3);
        let psi = self.pl_function(rank, n);
        let g = self.poly(rank, degree, 3);
        let h = self.poly(rank, degree.saturating_sub(1), 2);
        psi.mul_poly(&h).add(&PsFunction::polynomial(g)).expect("same rank")
    }

    /// div(f₁)⋯div(f_c)·[ℝʳ] for random tropical polynomials fᵢ.
    pub fn tropical_cycle(&mut self, rank: usize, codim: usize, degree: u32) -> Result<DeltaForm, DeltaError> {
        let phis: Vec<PsFunction> = (0..codim)
            .map(|_| {
                let d = self.rng.gen_range(1..=degree.max(1));
                let forms = self.tropical_polynomial(rank, d);
                PsFunction::max_of(&forms).expect("integral forms")
            })
            .collect();
        iterated_corner_locus(&phis, &DeltaForm::full_space(rank))
    }

    /// A balanced δ-form: a random global superform, optionally times φ, d′φ
    /// or d″φ for a piecewise smooth φ, wedged with a random tropical cycle.
    pub fn balanced_form(&mut self, rank: usize, codim: usize, degree: u32) -> Result<DeltaForm, DeltaError> {
        let c = self.tropical_cycle(rank, codim, 2)?;
        let dim = rank - codim;
        let p = self.rng.gen_range(0..=dim.min(1));
        let q = self.rng.gen_range(0..=dim.min(1));
        let mut a = self.superform(rank, p, q, degree);
        if a.is_zero() {
            a = Superform::zero(rank, p, q).plus(&Superform::function(Poly::one(rank)));
        }
        let base = ps_wedge(&PsForm::global(a), &c)?;
        let phi = match self.rng.gen_range(0..4) {
            0 => return Ok(base),
            _ if dim == 0 => return Ok(base),
            1 => self.ps_function(rank, degree.min(2)).to_form(),
            2 => self.ps_function(rank, degree.min(2)).dp1(),
            _ => self.ps_function(rank, degree.min(2)).dp2(),
        };
        ps_wedge(&phi, &base)
    }

    /// A polyhedral form that may fail balancing: one cell of a balanced form
    /// is dropped or rescaled.
    pub fn perturbed_form(&mut self, rank: usize, codim: usize, degree: u32) -> Result<DeltaForm, DeltaError> {
        let base = self.balanced_form(rank, codim, degree)?;
        if base.is_zero() {
            return Ok(base);
        }
        let mut cells = base.cells().to_vec();
        let i = self.rng.gen_range(0..cells.len());
        if self.rng.gen_bool(0.5) {
            cells.remove(i);
        } else {
            let f = self.poly(rank, 1, 2);
            cells[i].1 = cells[i].1.mul_poly(&(&f + &Poly::constant(rank, Rat::from(2))));
        }
        DeltaForm::new(rank, base.form_type(), cells)
    }

    /// An integral affine map ℝ^source → ℝ^target.
    pub fn affine_map(&mut self, source: usize, target: usize) -> AffineMap {
        let rows: Vec<Vec<i64>> = (0..target).map(|_| (0..source).map(|_| self.int(-2, 2)).collect()).collect();
        let t: Vec<Rat> = (0..target).map(|_| Rat::frac(self.int(-3, 3), self.int(1, 2))).collect();
        AffineMap::linear_from_rows(source, &rows).with_translation(t).expect("matching rank")
    }

    /// An affine map injective on ℝ^source (full column rank).
    pub fn injective_map(&mut self, source: usize, target: usize) -> AffineMap {
        assert!(source <= target);
        loop {
            let f = self.affine_map(source, target);
            let rank = f.linear().to_rat().rank();
            if rank == source {
                return f;
            }
        }
    }

    pub fn int_matrix(&mut self, rows: usize, cols: usize, b: i64) -> IntMat {
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| self.int(-b, b)).collect()).collect();
        IntMat::from_i64(&m)
    }
}
