//! Exact two-phase simplex over the rationals with Bland's rule.

use super::rat::{dot, Rat};
use super::LinalgError;

/// One linear constraint `normal · x (≤ or =) rhs`.
pub type Constraint = (Vec<Rat>, Rat);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { point: Vec<Rat>, value: Rat },
    /// Feasible point plus a ray along which the objective grows without bound.
    Unbounded { point: Vec<Rat>, ray: Vec<Rat> },
    Infeasible,
}

/// Multipliers `λ ≥ 0` (inequalities) and `μ` (equalities) with
/// `Aᵀλ + Eᵀμ = 0` and `b·λ + e·μ < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub ineq_multipliers: Vec<Rat>,
    pub eq_multipliers: Vec<Rat>,
}

impl FarkasCertificate {
    /// Checks the certificate against the system it claims to refute.
    pub fn verify(&self, ineqs: &[Constraint], eqs: &[Constraint]) -> bool {
        if self.ineq_multipliers.len() != ineqs.len() || self.eq_multipliers.len() != eqs.len() {
            return false;
        }
        if self.ineq_multipliers.iter().any(|l| l.is_negative()) {
            return false;
        }
        let n = ineqs.iter().chain(eqs).map(|c| c.0.len()).next().unwrap_or(0);
        let mut comb = vec![Rat::zero(); n];
        let mut rhs = Rat::zero();
        for (m, (a, b)) in self
            .ineq_multipliers
            .iter()
            .chain(&self.eq_multipliers)
            .zip(ineqs.iter().chain(eqs))
        {
            for (c, x) in comb.iter_mut().zip(a) {
                *c += m * x;
            }
            rhs += m * b;
        }
        comb.iter().all(|c| c.is_zero()) && rhs.is_negative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rat>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    cost: Vec<Rat>,
    basis: Vec<usize>,
    width: usize,
}

enum RunOutcome {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for &j in &nz {
                self.cost[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes with the current cost row; only columns below `eligible` may enter.
    fn run(&mut self, eligible: usize) -> RunOutcome {
        loop {
            let Some(c) = (0..eligible).find(|&j| self.cost[j].is_negative()) else {
                return RunOutcome::Optimal;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return RunOutcome::Unbounded(c),
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Rat> {
        let mut y = vec![Rat::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                y[b] = self.rhs(i).clone();
            }
        }
        y
    }
}

/// Minimizes `cost · y` subject to `rows · y = rhs`, `y ≥ 0`.
enum StdResult {
    Optimal(Vec<Rat>),
    Unbounded(Vec<Rat>, Vec<Rat>),
    Infeasible,
}

fn solve_standard(mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>, cost: &[Rat]) -> StdResult {
    let n = cost.len();
    let m = rows.len();
    for i in 0..m {
        if rhs[i].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -&*x;
            }
            rhs[i] = -&rhs[i];
        }
    }
    let width = n + m;
    let mut trows = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = rows[i].clone();
        row.resize(width + 1, Rat::zero());
        row[n + i] = Rat::one();
        row[width] = rhs[i].clone();
        trows.push(row);
    }
    let mut pcost = vec![Rat::zero(); width + 1];
    for row in &trows {
        for j in 0..n {
            pcost[j] -= &row[j];
        }
        pcost[width] -= &row[width];
    }
    let mut t = Tableau { rows: trows, cost: pcost, basis: (n..n + m).collect(), width };
    t.run(n);
    if !t.cost[width].is_zero() {
        return StdResult::Infeasible;
    }
    // drive artificial variables out of the basis
    let mut keep = vec![true; m];
    for i in 0..m {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => keep[i] = false,
            }
        }
    }
    let mut rows2 = Vec::new();
    let mut basis2 = Vec::new();
    for i in 0..m {
        if keep[i] {
            let mut row = t.rows[i][..n].to_vec();
            row.push(t.rows[i][width].clone());
            rows2.push(row);
            basis2.push(t.basis[i]);
        }
    }
    let mut cost2: Vec<Rat> = cost.to_vec();
    cost2.push(Rat::zero());
    for (row, &b) in rows2.iter().zip(&basis2) {
        let cb = &cost[b];
        if cb.is_zero() {
            continue;
        }
        for j in 0..=n {
            if !row[j].is_zero() {
                cost2[j] -= cb * &row[j];
            }
        }
    }
    let mut t2 = Tableau { rows: rows2, cost: cost2, basis: basis2, width: n };
    match t2.run(n) {
        RunOutcome::Optimal => StdResult::Optimal(t2.solution(n)),
        RunOutcome::Unbounded(c) => {
            let mut ray = vec![Rat::zero(); n];
            ray[c] = Rat::one();
            for (i, &b) in t2.basis.iter().enumerate() {
                ray[b] = -&t2.rows[i][c];
            }
            StdResult::Unbounded(t2.solution(n), ray)
        }
    }
}

fn check_dims(dim: usize, cs: &[Constraint]) -> Result<(), LinalgError> {
    for (a, _) in cs {
        if a.len() != dim {
            return Err(LinalgError::DimensionMismatch { expected: dim, found: a.len() });
        }
    }
    Ok(())
}

/// Maximizes `objective · x` over `{x : A x ≤ b, E x = e}` with `x` free.
pub fn maximize(
    objective: &[Rat],
    ineqs: &[Constraint],
    eqs: &[Constraint],
) -> Result<LpResult, LinalgError> {
    let n = objective.len();
    check_dims(n, ineqs)?;
    check_dims(n, eqs)?;
    let ni = ineqs.len();
    let nv = 2 * n + ni;
    let mut rows = Vec::with_capacity(ni + eqs.len());
    let mut rhs = Vec::with_capacity(ni + eqs.len());
    for (k, (a, b)) in ineqs.iter().enumerate() {
        let mut row = vec![Rat::zero(); nv];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -&a[j];
        }
        row[2 * n + k] = Rat::one();
        rows.push(row);
        rhs.push(b.clone());
    }
    for (a, b) in eqs {
        let mut row = vec![Rat::zero(); nv];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -&a[j];
        }
        rows.push(row);
        rhs.push(b.clone());
    }
    let mut cost = vec![Rat::zero(); nv];
    for j in 0..n {
        cost[j] = -&objective[j];
        cost[n + j] = objective[j].clone();
    }
    let split = |y: &[Rat]| -> Vec<Rat> { (0..n).map(|j| &y[j] - &y[n + j]).collect() };
    Ok(match solve_standard(rows, rhs, &cost) {
        StdResult::Infeasible => LpResult::Infeasible,
        StdResult::Optimal(y) => {
            let point = split(&y);
            let value = dot(objective, &point);
            LpResult::Optimal { point, value }
        }
        StdResult::Unbounded(y, dir) => LpResult::Unbounded { point: split(&y), ray: split(&dir) },
    })
}

/// Decides feasibility of `{A x ≤ b, E x = e}`; returns a witness or a Farkas certificate.
pub fn lp_feasible(ineqs: &[Constraint], eqs: &[Constraint]) -> Result<Feasibility, LinalgError> {
    let n = ineqs.iter().chain(eqs).map(|c| c.0.len()).next().unwrap_or(0);
    match maximize(&vec![Rat::zero(); n], ineqs, eqs)? {
        LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => {
            Ok(Feasibility::Feasible(point))
        }
        LpResult::Infeasible => Ok(Feasibility::Infeasible(farkas(ineqs, eqs, n))),
    }
}

/// Solves the alternative system; only called once the primal is known infeasible.
fn farkas(ineqs: &[Constraint], eqs: &[Constraint], n: usize) -> FarkasCertificate {
    let (mi, me) = (ineqs.len(), eqs.len());
    let nv = mi + 2 * me;
    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut row = vec![Rat::zero(); nv];
        for (k, (a, _)) in ineqs.iter().enumerate() {
            row[k] = a[j].clone();
        }
        for (k, (a, _)) in eqs.iter().enumerate() {
            row[mi + k] = a[j].clone();
            row[mi + me + k] = -&a[j];
        }
        rows.push(row);
        rhs.push(Rat::zero());
    }
    let mut row = vec![Rat::zero(); nv];
    for (k, (_, b)) in ineqs.iter().enumerate() {
        row[k] = b.clone();
    }
    for (k, (_, b)) in eqs.iter().enumerate() {
        row[mi + k] = b.clone();
        row[mi + me + k] = -b;
    }
    rows.push(row);
    rhs.push(-Rat::one());
    match solve_standard(rows, rhs, &vec![Rat::zero(); nv]) {
        StdResult::Optimal(y) | StdResult::Unbounded(y, _) => FarkasCertificate {
            ineq_multipliers: y[..mi].to_vec(),
            eq_multipliers: (0..me).map(|k| &y[mi + k] - &y[mi + me + k]).collect(),
        },
        StdResult::Infeasible => unreachable!("Farkas alternative must be feasible"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn c(a: &[i64], b: i64) -> Constraint {
        (a.iter().map(|&x| q(x)).collect(), q(b))
    }

    fn satisfies(x: &[Rat], ineqs: &[Constraint], eqs: &[Constraint]) -> bool {
        ineqs.iter().all(|(a, b)| dot(a, x) <= *b) && eqs.iter().all(|(a, b)| dot(a, x) == *b)
    }

    #[test]
    fn interval_is_feasible() {
        let ineqs = vec![c(&[-1], 0), c(&[1], 1)];
        match lp_feasible(&ineqs, &[]).unwrap() {
            Feasibility::Feasible(x) => assert!(satisfies(&x, &ineqs, &[])),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn empty_interval_has_certificate() {
        let ineqs = vec![c(&[-1], -1), c(&[1], 0)];
        match lp_feasible(&ineqs, &[]).unwrap() {
            Feasibility::Infeasible(cert) => assert!(cert.verify(&ineqs, &[])),
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn simplex_with_equality_infeasible() {
        let eqs = vec![c(&[1, 1], 1)];
        let ineqs = vec![c(&[-1, 0], 0), c(&[0, -1], 0), c(&[-1, 0], -2)];
        match lp_feasible(&ineqs, &eqs).unwrap() {
            Feasibility::Infeasible(cert) => assert!(cert.verify(&ineqs, &eqs)),
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn maximize_over_triangle() {
        let ineqs = vec![c(&[-1, 0], 0), c(&[0, -1], 0), c(&[1, 1], 2)];
        match maximize(&[q(1), q(2)], &ineqs, &[]).unwrap() {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, q(4));
                assert_eq!(point, vec![q(0), q(2)]);
            }
            r => panic!("unexpected {r:?}"),
        }
        match maximize(&[q(1), q(0)], &[c(&[0, 1], 0)], &[]).unwrap() {
            LpResult::Unbounded { point, ray } => {
                assert!(satisfies(&point, &[c(&[0, 1], 0)], &[]));
                assert!(ray[0].is_positive() && ray[1] <= q(0));
            }
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = lp_feasible(&[c(&[1], 0), c(&[1, 1], 0)], &[]).unwrap_err();
        assert!(matches!(err, LinalgError::DimensionMismatch { .. }));
    }
}
