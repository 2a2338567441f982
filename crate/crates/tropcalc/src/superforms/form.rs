//! Superforms `Σ f_{IJ} d′x_I ∧ d″x_J` with polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::matrix::RatMat;
use crate::linalg::rat::Rat;

use super::affine::RatAffine;
use super::poly::Poly;
use super::SuperformError;

/// Index sets are 0-based and strictly increasing.
pub type IndexPair = (Vec<usize>, Vec<usize>);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Superform {
    rank: usize,
    p: usize,
    q: usize,
    terms: BTreeMap<IndexPair, Poly>,
}

/// Sorts the concatenation of two increasing index lists; `None` on overlap.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((out, inversions % 2 == 1))
}

/// Sorts an arbitrary index list, returning the sign of the sorting permutation.
fn sort_with_sign(v: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return None;
            }
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    let mut s = v.to_vec();
    s.sort_unstable();
    Some((s, inv % 2 == 1))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All strictly increasing index subsets of size `k` in `0..n`.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(n, k)
}

impl Superform {
    pub fn zero(rank: usize, p: usize, q: usize) -> Superform {
        Superform { rank, p, q, terms: BTreeMap::new() }
    }

    /// The (0,0)-form given by a function.
    pub fn function(f: Poly) -> Superform {
        let mut s = Superform::zero(f.rank(), 0, 0);
        s.add_term((Vec::new(), Vec::new()), f);
        s
    }

    pub fn constant(rank: usize, c: Rat) -> Superform {
        Superform::function(Poly::constant(rank, c))
    }

    /// `f · d′x_I ∧ d″x_J` with arbitrary (unsorted) 0-based index lists.
    pub fn term(f: Poly, i: &[usize], j: &[usize]) -> Result<Superform, SuperformError> {
        let rank = f.rank();
        if let Some(&bad) = i.iter().chain(j).find(|&&k| k >= rank) {
            return Err(SuperformError::IndexOutOfRange { index: bad, rank });
        }
        let mut s = Superform::zero(rank, i.len(), j.len());
        let (Some((si, ni)), Some((sj, nj))) = (sort_with_sign(i), sort_with_sign(j)) else {
            return Ok(s);
        };
        let f = if ni != nj { -&f } else { f };
        s.add_term((si, sj), f);
        Ok(s)
    }

    /// d′x_i (0-based).
    pub fn d1x(rank: usize, i: usize) -> Superform {
        Superform::term(Poly::one(rank), &[i], &[]).expect("index in range")
    }

    /// d″x_j (0-based).
    pub fn d2x(rank: usize, j: usize) -> Superform {
        Superform::term(Poly::one(rank), &[], &[j]).expect("index in range")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IndexPair, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: &[usize], j: &[usize]) -> Poly {
        self.terms.get(&(i.to_vec(), j.to_vec())).cloned().unwrap_or_else(|| Poly::zero(self.rank))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of a (0,0)-form.
    pub fn as_function(&self) -> Option<Poly> {
        (self.p == 0 && self.q == 0).then(|| self.coefficient(&[], &[]))
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.values().map(|f| f.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: IndexPair, f: Poly) {
        if f.is_zero() {
            return;
        }
        debug_assert_eq!((key.0.len(), key.1.len()), (self.p, self.q));
        match self.terms.get_mut(&key) {
            Some(g) => {
                let sum = &*g + &f;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *g = sum;
                }
            }
            None => {
                self.terms.insert(key, f);
            }
        }
    }

    fn check_same(&self, o: &Superform) -> Result<(), SuperformError> {
        if self.rank != o.rank {
            return Err(SuperformError::AmbientMismatch { left: self.rank, right: o.rank });
        }
        Ok(())
    }

    pub fn add(&self, o: &Superform) -> Result<Superform, SuperformError> {
        self.check_same(o)?;
        if self.bidegree() != o.bidegree() {
            if self.is_zero() {
                return Ok(o.clone());
            }
            if o.is_zero() {
                return Ok(self.clone());
            }
            return Err(SuperformError::BidegreeMismatch { left: self.bidegree(), right: o.bidegree() });
        }
        let mut out = self.clone();
        for (k, f) in &o.terms {
            out.add_term(k.clone(), f.clone());
        }
        Ok(out)
    }

    /// Sum of forms known to share rank and bidegree.
    pub fn plus(&self, o: &Superform) -> Superform {
        self.add(o).expect("matching superforms")
    }

    pub fn minus(&self, o: &Superform) -> Superform {
        self.plus(&o.neg())
    }

    pub fn neg(&self) -> Superform {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Superform {
        let mut out = Superform::zero(self.rank, self.p, self.q);
        if c.is_zero() {
            return out;
        }
        for (k, f) in &self.terms {
            out.terms.insert(k.clone(), f.scale(c));
        }
        out
    }

    /// Multiplication by a function.
    pub fn mul_poly(&self, g: &Poly) -> Superform {
        let mut out = Superform::zero(self.rank, self.p, self.q);
        for (k, f) in &self.terms {
            out.add_term(k.clone(), f * g);
        }
        out
    }

    pub fn wedge(&self, o: &Superform) -> Result<Superform, SuperformError> {
        self.check_same(o)?;
        let mut out = Superform::zero(self.rank, self.p + o.p, self.q + o.q);
        for ((i1, j1), f) in &self.terms {
            for ((i2, j2), g) in &o.terms {
                let Some((i, si)) = merge_sign(i1, i2) else { continue };
                let Some((j, sj)) = merge_sign(j1, j2) else { continue };
                let cross = (j1.len() * i2.len()) % 2 == 1;
                let c = f * g;
                out.add_term((i, j), if si ^ sj ^ cross { -&c } else { c });
            }
        }
        Ok(out)
    }

    /// Wedge of forms known to share rank.
    pub fn w(&self, o: &Superform) -> Superform {
        self.wedge(o).expect("matching ranks")
    }

    /// d′.
    pub fn d1(&self) -> Superform {
        let mut out = Superform::zero(self.rank, self.p + 1, self.q);
        for ((i, j), f) in &self.terms {
            for k in 0..self.rank {
                let df = f.deriv(k);
                if df.is_zero() {
                    continue;
                }
                let Some((ni, s)) = merge_sign(&[k], i) else { continue };
                out.add_term((ni, j.clone()), if s { -&df } else { df });
            }
        }
        out
    }

    /// d″ = Σ_j d″x_j ∧ ∂_j, equivalently the (−1)^p interior-sign convention.
    pub fn d2(&self) -> Superform {
        let mut out = Superform::zero(self.rank, self.p, self.q + 1);
        for ((i, j), f) in &self.terms {
            for k in 0..self.rank {
                let df = f.deriv(k);
                if df.is_zero() {
                    continue;
                }
                let Some((nj, s)) = merge_sign(&[k], j) else { continue };
                let neg = s ^ (self.p % 2 == 1);
                out.add_term((i.clone(), nj), if neg { -&df } else { df });
            }
        }
        out
    }

    /// J: d′x_I ∧ d″x_J ↦ (−1)^{pq} d′x_J ∧ d″x_I.
    pub fn j_op(&self) -> Superform {
        let mut out = Superform::zero(self.rank, self.q, self.p);
        let neg = (self.p * self.q) % 2 == 1;
        for ((i, j), f) in &self.terms {
            out.add_term((j.clone(), i.clone()), if neg { -f } else { f.clone() });
        }
        out
    }

    /// Insertion of `v` into the first d′ slot.
    pub fn contract1(&self, v: &[Rat]) -> Superform {
        assert_eq!(v.len(), self.rank);
        assert!(self.p > 0, "no d′ slot to contract");
        let mut out = Superform::zero(self.rank, self.p - 1, self.q);
        for ((i, j), f) in &self.terms {
            for (l, &k) in i.iter().enumerate() {
                if v[k].is_zero() {
                    continue;
                }
                let mut ni = i.clone();
                ni.remove(l);
                let c = f.scale(&v[k]);
                out.add_term((ni, j.clone()), if l % 2 == 1 { -&c } else { c });
            }
        }
        out
    }

    /// Insertion of `w` into the first d″ slot (an odd derivation, so passing
    /// the p d′ factors contributes (−1)^p).
    pub fn contract2(&self, w: &[Rat]) -> Superform {
        assert_eq!(w.len(), self.rank);
        assert!(self.q > 0, "no d″ slot to contract");
        let mut out = Superform::zero(self.rank, self.p, self.q - 1);
        for ((i, j), f) in &self.terms {
            for (l, &k) in j.iter().enumerate() {
                if w[k].is_zero() {
                    continue;
                }
                let mut nj = j.clone();
                nj.remove(l);
                let c = f.scale(&w[k]);
                let neg = (l + self.p) % 2 == 1;
                out.add_term((i.clone(), nj), if neg { -&c } else { c });
            }
        }
        out
    }

    /// General contraction: vectors inserted at 1-based slot positions of the
    /// d′ group and of the d″ group. Slot `k` of a group equals slot 1 up to
    /// the sign (−1)^{k−1}; several vectors in one group are inserted in
    /// increasing slot order. The d″ group is contracted first.
    pub fn contract(
        &self,
        d1_slots: &[(usize, Vec<Rat>)],
        d2_slots: &[(usize, Vec<Rat>)],
    ) -> Result<Superform, SuperformError> {
        let check = |slots: &[(usize, Vec<Rat>)], n: usize| -> Result<(), SuperformError> {
            let mut seen = Vec::new();
            for (pos, v) in slots {
                if *pos == 0 || *pos > n || seen.contains(pos) {
                    return Err(SuperformError::SlotOutOfRange { slot: *pos, available: n });
                }
                if v.len() != self.rank {
                    return Err(SuperformError::AmbientMismatch { left: self.rank, right: v.len() });
                }
                seen.push(*pos);
            }
            Ok(())
        };
        check(d1_slots, self.p)?;
        check(d2_slots, self.q)?;
        let mut out = self.clone();
        for (slots, second) in [(d2_slots, true), (d1_slots, false)] {
            let mut sorted: Vec<&(usize, Vec<Rat>)> = slots.iter().collect();
            sorted.sort_by_key(|s| s.0);
            // move the chosen slots to the front, then insert front to back
            let mut sign = false;
            for (k, (pos, _)) in sorted.iter().enumerate() {
                sign ^= (pos - 1 - k) % 2 == 1;
            }
            for (_, v) in &sorted {
                out = if second { out.contract2(v) } else { out.contract1(v) };
            }
            if sign {
                out = out.neg();
            }
        }
        Ok(out)
    }

    /// Pull-back along an affine map whose target is this form's ambient space.
    pub fn pullback(&self, f: &RatAffine) -> Result<Superform, SuperformError> {
        if f.target_rank() != self.rank {
            return Err(SuperformError::AmbientMismatch { left: self.rank, right: f.target_rank() });
        }
        let s = f.source_rank();
        let coords = f.coordinate_polys();
        let mut minors: BTreeMap<(Vec<usize>, Vec<usize>), Rat> = BTreeMap::new();
        let mut minor = |rows: &[usize], cols: &[usize]| -> Rat {
            minors
                .entry((rows.to_vec(), cols.to_vec()))
                .or_insert_with(|| {
                    let m: Vec<Vec<Rat>> = rows
                        .iter()
                        .map(|&r| cols.iter().map(|&c| f.linear.get(r, c).clone()).collect())
                        .collect();
                    RatMat::from_rows(&m, cols.len()).det()
                })
                .clone()
        };
        let ks = subsets(s, self.p);
        let ls = subsets(s, self.q);
        let mut out = Superform::zero(s, self.p, self.q);
        for ((i, j), g) in &self.terms {
            let pulled = g.compose(&coords, s);
            for k in &ks {
                let a = minor(i, k);
                if a.is_zero() {
                    continue;
                }
                for l in &ls {
                    let b = minor(j, l);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_term((k.clone(), l.clone()), pulled.scale(&(&a * &b)));
                }
            }
        }
        Ok(out)
    }

    /// Re-embeds into a product space of rank `new_rank` at coordinate offset `offset`
    /// (pull-back along the projection onto the block).
    pub fn embed(&self, new_rank: usize, offset: usize) -> Superform {
        let mut out = Superform::zero(new_rank, self.p, self.q);
        for ((i, j), f) in &self.terms {
            let ni = i.iter().map(|k| k + offset).collect();
            let nj = j.iter().map(|k| k + offset).collect();
            out.terms.insert((ni, nj), f.embed(new_rank, offset));
        }
        out
    }

    /// Whether the form is symmetric: Jα = (−1)^p α.
    pub fn is_symmetric(&self) -> bool {
        self.p == self.q && {
            let j = self.j_op();
            if self.p % 2 == 1 {
                j == self.neg()
            } else {
                j == *self
            }
        }
    }
}

impl fmt::Debug for Superform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Superform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), g) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = vec![format!("({g})")];
            parts.extend(i.iter().map(|k| format!("d'x{}", k + 1)));
            parts.extend(j.iter().map(|k| format!("d\"x{}", k + 1)));
            write!(f, "{}", parts.join("∧"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn x(r: usize, i: usize) -> Poly {
        Poly::var(r, i)
    }

    #[test]
    fn anticommutation_and_canonical_order() {
        let a = Superform::d1x(1, 0);
        let b = Superform::d2x(1, 0);
        assert_eq!(a.w(&b), b.w(&a).neg());
        let s = Superform::d1x(2, 0).w(&Superform::d2x(2, 0)).w(&Superform::d1x(2, 1)).w(&Superform::d2x(2, 1));
        let expected = Superform::term(Poly::one(2), &[0, 1], &[0, 1]).unwrap().neg();
        assert_eq!(s, expected);
    }

    #[test]
    fn derivative_examples() {
        let f = Superform::function(&x(1, 0) * &x(1, 0));
        assert_eq!(f.d1(), Superform::term(x(1, 0).scale(&q(2)), &[0], &[]).unwrap());
        let g = Superform::function(&x(2, 0) * &x(2, 1));
        assert!(g.d1().d1().is_zero());
        let h = Superform::term(x(2, 1), &[], &[0]).unwrap();
        assert_eq!(h.d1(), Superform::term(Poly::one(2), &[1], &[0]).unwrap());
        assert_eq!(Superform::function(x(1, 0)).d2(), Superform::d2x(1, 0));
        let k = Superform::term(x(2, 1), &[0], &[]).unwrap();
        assert_eq!(k.d2(), Superform::term(Poly::one(2), &[0], &[1]).unwrap().neg());
    }

    #[test]
    fn j_examples() {
        assert_eq!(Superform::d1x(2, 0).j_op(), Superform::d2x(2, 0));
        let a = Superform::term(Poly::one(2), &[0], &[1]).unwrap();
        assert_eq!(a.j_op(), Superform::term(Poly::one(2), &[1], &[0]).unwrap().neg());
        assert_eq!(a.j_op().j_op(), a);
    }

    #[test]
    fn contraction_examples() {
        let f = &x(2, 0) * &x(2, 1);
        let df = Superform::function(f.clone()).d2();
        let v = vec![q(1), q(2)];
        assert_eq!(df.contract(&[], &[(1, v.clone())]).unwrap(), Superform::function(f.directional(&v)));
        let a = Superform::term(Poly::one(3), &[0], &[1]).unwrap();
        assert!(a.contract(&[(1, vec![q(0), q(0), q(1)])], &[]).unwrap().is_zero());
        let b = Superform::term(Poly::one(2), &[0, 1], &[]).unwrap();
        assert_eq!(b.contract(&[(1, vec![q(0), q(1)])], &[]).unwrap(), Superform::d1x(2, 0).neg());
        assert!(b.contract(&[(3, vec![q(0), q(1)])], &[]).is_err());
        // slot r versus slot 1
        let eta = Superform::term(Poly::one(2), &[0], &[0, 1]).unwrap();
        let w = vec![q(1), q(1)];
        assert_eq!(
            eta.contract(&[], &[(2, w.clone())]).unwrap(),
            eta.contract(&[], &[(1, w)]).unwrap().neg()
        );
    }

    #[test]
    fn pullback_along_diagonal() {
        let f = RatAffine::new(RatMat::from_rows(&[vec![q(1)], vec![q(1)]], 1), vec![q(0), q(0)]);
        let a = Superform::term(Poly::one(2), &[0], &[1]).unwrap();
        assert_eq!(a.pullback(&f).unwrap(), Superform::term(Poly::one(1), &[0], &[0]).unwrap());
        let id = RatAffine::identity(2);
        assert_eq!(a.pullback(&id).unwrap(), a);
    }
}
