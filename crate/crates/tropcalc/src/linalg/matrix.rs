//! Dense rational and integer matrices, Smith and Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> RatMat {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> RatMat {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rat>], cols: usize) -> RatMat {
        let mut m = RatMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Rat>], rows: usize) -> RatMat {
        RatMat::from_rows(cols, rows).transpose()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &RatMat) -> RatMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut m = RatMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + &(a * b);
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| super::rat::dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let rv = m.get(r, j).clone();
                        if !rv.is_zero() {
                            let v = m.get(i, j) - &(&f * &rv);
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, piv) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &pc) in piv.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = RatMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> IntMat {
        let mut m = IntMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMat::from_rows(&big, cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut m = IntMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j) + a * o.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn to_rat(&self) -> RatMat {
        let rows: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| self.row(i).into_iter().map(Rat::from).collect())
            .collect();
        RatMat::from_rows(&rows, self.cols)
    }

    pub fn det(&self) -> BigInt {
        self.to_rat().det().to_int().expect("integer determinant")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_a += f * row_b
    fn add_row(&mut self, a: usize, b: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(a, j) + f * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col_a += f * col_b
    fn add_col(&mut self, a: usize, b: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, a) + f * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }

    /// Smith normal form: returns `(U, D, V)` with `U * self * V = D`, `U`, `V`
    /// unimodular and `D` diagonal with non-negative entries `d1 | d2 | ...`.
    pub fn smith_normal_form(&self) -> (IntMat, IntMat, IntMat) {
        let (m, n) = (self.rows, self.cols);
        let mut d = self.clone();
        let mut u = IntMat::identity(m);
        let mut v = IntMat::identity(n);
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry of the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if !x.is_zero()
                        && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if d.get(i, t).is_zero() {
                        continue;
                    }
                    let qo = d.get(i, t).div_floor(d.get(t, t));
                    d.add_row(i, t, &-&qo);
                    u.add_row(i, t, &-&qo);
                    if !d.get(i, t).is_zero() {
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    if d.get(t, j).is_zero() {
                        continue;
                    }
                    let qo = d.get(t, j).div_floor(d.get(t, t));
                    d.add_col(j, t, &-&qo);
                    v.add_col(j, t, &-&qo);
                    if !d.get(t, j).is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // divisibility of the remaining block by the pivot
                let piv = d.get(t, t).clone();
                let mut bad = None;
                'outer: for i in t + 1..m {
                    for j in t + 1..n {
                        if !d.get(i, j).is_multiple_of(&piv) {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        d.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        (u, d, v)
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `U * self = H`,
    /// `U` unimodular, `H` in row echelon form with positive pivots and the
    /// entries above each pivot reduced into `[0, pivot)`. Zero rows come last.
    pub fn hermite_normal_form(&self) -> (IntMat, IntMat) {
        let (m, n) = (self.rows, self.cols);
        let mut h = self.clone();
        let mut u = IntMat::identity(m);
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in r..m {
                    let x = h.get(i, c);
                    if !x.is_zero() && best.map_or(true, |b| x.abs() < h.get(b, c).abs()) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else { break };
                h.swap_rows(r, b);
                u.swap_rows(r, b);
                let mut done = true;
                for i in r + 1..m {
                    if h.get(i, c).is_zero() {
                        continue;
                    }
                    let qo = h.get(i, c).div_floor(h.get(r, c));
                    h.add_row(i, r, &-&qo);
                    u.add_row(i, r, &-&qo);
                    if !h.get(i, c).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(r, c).is_zero() {
                continue;
            }
            if h.get(r, c).is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            let piv = h.get(r, c).clone();
            for i in 0..r {
                let qo = h.get(i, c).div_floor(&piv);
                h.add_row(i, r, &-&qo);
                u.add_row(i, r, &-&qo);
            }
            r += 1;
        }
        (h, u)
    }
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(a: &IntMat) -> (IntMat, IntMat, IntMat) {
    a.smith_normal_form()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn is_unimodular(m: &IntMat) -> bool {
        m.det().abs().is_one()
    }

    #[test]
    fn snf_of_diag_2_3() {
        let a = IntMat::from_i64(&[vec![2, 0], vec![0, 3]]);
        let (u, d, v) = a.smith_normal_form();
        assert_eq!(d, IntMat::from_i64(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(u.mul(&a).mul(&v), d);
        assert!(is_unimodular(&u) && is_unimodular(&v));
    }

    #[test]
    fn snf_trivial_cases() {
        let id = IntMat::identity(3);
        assert_eq!(id.smith_normal_form().1, id);
        let z = IntMat::from_i64(&[vec![0]]);
        assert_eq!(z.smith_normal_form().1, z);
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let a = IntMat::from_i64(&[vec![2, 3, 5], vec![4, 1, 1], vec![0, 0, 7]]);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(u.mul(&a), h);
        assert!(is_unimodular(&u));
        for i in 0..3 {
            for j in 0..i {
                assert!(h.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn rational_solve_and_inverse() {
        let m = RatMat::from_rows(&[vec![q(1), q(2)], vec![q(3), q(4)]], 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
        assert_eq!(m.det(), q(-2));
        let x = m.solve(&[q(5), q(6)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![q(5), q(6)]);
        let sing = RatMat::from_rows(&[vec![q(1), q(2)], vec![q(2), q(4)]], 2);
        assert!(sing.solve(&[q(1), q(0)]).is_none());
        assert_eq!(sing.nullspace().len(), 1);
    }
}
