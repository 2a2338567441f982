//! Multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::linalg::rat::Rat;

/// A polynomial in `rank` variables, stored as exponent vector → coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    rank: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(rank: usize) -> Poly {
        Poly { rank, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: Rat) -> Poly {
        let mut p = Poly::zero(rank);
        p.add_term(vec![0; rank], c);
        p
    }

    pub fn one(rank: usize) -> Poly {
        Poly::constant(rank, Rat::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(rank: usize, i: usize) -> Poly {
        let mut e = vec![0; rank];
        e[i] = 1;
        Poly::monomial(e, Rat::one())
    }

    pub fn monomial(exp: Vec<u32>, c: Rat) -> Poly {
        let mut p = Poly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// `a·x + c`.
    pub fn affine(a: &[Rat], c: &Rat) -> Poly {
        let rank = a.len();
        let mut p = Poly::constant(rank, c.clone());
        for (i, ai) in a.iter().enumerate() {
            let mut e = vec![0; rank];
            e[i] = 1;
            p.add_term(e, ai.clone());
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Rat) {
        debug_assert_eq!(exp.len(), self.rank);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.rank]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.rank);
        }
        Poly { rank: self.rank, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// ∂/∂x_i.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.rank);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * &Rat::from(e[i] as i64));
        }
        out
    }

    /// Directional derivative ∂/∂v.
    pub fn directional(&self, v: &[Rat]) -> Poly {
        let mut out = Poly::zero(self.rank);
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                out = &out + &self.deriv(i).scale(vi);
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= &xi.pow(k);
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `x_i ↦ images[i]`; all images share one rank.
    pub fn compose(&self, images: &[Poly], target_rank: usize) -> Poly {
        assert_eq!(images.len(), self.rank);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(p.rank)]).collect();
        let mut out = Poly::zero(target_rank);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target_rank, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-embeds into `new_rank` variables, variable `i` becoming `offset + i`.
    pub fn embed(&self, new_rank: usize, offset: usize) -> Poly {
        let mut out = Poly::zero(new_rank);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; new_rank];
            e2[offset..offset + self.rank].copy_from_slice(e);
            out.add_term(e2, c.clone());
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.rank, o.rank, "rank mismatch in polynomial sum");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.rank, o.rank, "rank mismatch in polynomial difference");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.rank, o.rank, "rank mismatch in polynomial product");
        let mut out = Poly::zero(self.rank);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    #[test]
    fn derivative_and_eval() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = &(&x * &x) + &(&x * &y);
        assert_eq!(f.deriv(0), &x.scale(&q(2)) + &y);
        assert_eq!(f.eval(&[q(2), q(3)]), q(10));
        assert_eq!(f.directional(&[q(1), q(1)]).eval(&[q(1), q(1)]), q(4));
    }

    #[test]
    fn composition_substitutes() {
        let t = Poly::var(1, 0);
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = &x * &y;
        let g = f.compose(&[t.clone(), &t + &Poly::one(1)], 1);
        assert_eq!(g, &(&t * &t) + &t);
    }
}
