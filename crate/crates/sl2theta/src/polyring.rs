//! Exact multivariate polynomials in `x_1, ..., x_n` with `deg x_i = 2`:
//! symmetric group action, Demazure operators, elementary symmetric
//! polynomials, degreewise bases of Young-invariant subrings, and the
//! surjectivity check for products of partial invariants.

use crate::error::Error;
use crate::field::Scalar;
use crate::linalg::SpanBuilder;
use crate::qcalc::{grdim_invariant_ring, WindowPartition};
use crate::symgrp::Perm;
use num::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

pub type Expv = Vec<u16>;

/// Sparse polynomial: exponent vector (length `nvars`) to coefficient, in
/// lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<F: Scalar> {
    pub nvars: usize,
    terms: BTreeMap<Expv, F>,
}

impl<F: Scalar> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `x_i`, 1-based.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= nvars);
        let mut e = vec![0u16; nvars];
        e[i - 1] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, F::one());
        p
    }

    pub fn monomial(nvars: usize, exps: &[(usize, u16)], c: F) -> Self {
        let mut e = vec![0u16; nvars];
        for &(i, pow) in exps {
            e[i - 1] += pow;
        }
        let mut p = Self::zero(nvars);
        p.add_term(e, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expv, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e: Expv, c: F) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let nv = o.get().add(&c);
                if nv.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = nv;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = c.neg();
        }
        p
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut p = Self::zero(self.nvars);
        if c.is_zero() {
            return p;
        }
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.mul(c));
        }
        p
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Expv = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.mul(c2));
            }
        }
        p
    }

    /// Apply a permutation of the variables: `x_i -> x_{w(i)}`.
    pub fn apply_perm(&self, w: &Perm) -> Self {
        assert_eq!(w.n(), self.nvars);
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u16; self.nvars];
            for i in 1..=self.nvars {
                ne[w.map(i) - 1] = e[i - 1];
            }
            p.add_term(ne, c.clone());
        }
        p
    }

    pub fn apply_simple(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne.swap(i - 1, i);
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Internal degree (2 times the exponent sum) if homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = 2 * e.iter().map(|&x| x as i64).sum::<i64>();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn homogeneous_component(&self, degree: i64) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if 2 * e.iter().map(|&x| x as i64).sum::<i64>() == degree {
                p.add_term(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn max_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| 2 * e.iter().map(|&x| x as i64).sum::<i64>())
            .max()
            .unwrap_or(0)
    }

    /// Widen to more variables (new variables unused).
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut p = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne.resize(nvars, 0);
            p.add_term(ne, c.clone());
        }
        p
    }

    /// Shift variable indices up by `offset` inside a ring with `nvars`
    /// variables: `x_i -> x_{i+offset}`.
    pub fn shift_vars(&self, offset: usize, nvars: usize) -> Self {
        assert!(self.nvars + offset <= nvars);
        let mut p = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u16; nvars];
            ne[offset..offset + self.nvars].copy_from_slice(e);
            p.add_term(ne, c.clone());
        }
        p
    }

    pub fn is_invariant_under(&self, i: usize) -> bool {
        *self == self.apply_simple(i)
    }

    /// Invariance under the Young subgroup fixing each interval.
    pub fn is_young_invariant(&self, windows: &WindowPartition) -> bool {
        windows
            .intervals
            .iter()
            .flat_map(|&(a, b)| a..b)
            .all(|i| self.is_invariant_under(i))
    }
}

impl<F: Scalar> fmt::Display for MultiPoly<F> {
    /// Lex order, `c*x1^2*x2` with unit coefficients elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| {
                        if p == 1 {
                            format!("x{}", i + 1)
                        } else {
                            format!("x{}^{}", i + 1, p)
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("{}*{}", c, vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Demazure operator `(p - s_i p) / (x_{i+1} - x_i)`, by synthetic division
/// in the variable `x_{i+1}`. The numerator is always divisible; a nonzero
/// remainder aborts.
pub fn demazure<F: Scalar>(i: usize, p: &MultiPoly<F>) -> MultiPoly<F> {
    let n = p.nvars;
    assert!(i >= 1 && i < n, "demazure index {i} out of range for {n} vars");
    let numerator = p.sub(&p.apply_simple(i));
    let mut rem = numerator;
    let mut quot = MultiPoly::zero(n);
    // divide by (x_{i+1} - x_i): repeatedly kill the highest x_{i+1}-degree
    while !rem.is_zero() {
        let (e, c) = rem
            .terms
            .iter()
            .max_by_key(|(e, _)| (e[i], (*e).clone()))
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        assert!(
            e[i] > 0,
            "demazure: nonzero remainder, canonical form corrupted"
        );
        let mut qe = e.clone();
        qe[i] -= 1;
        let mut qterm = MultiPoly::zero(n);
        qterm.add_term(qe, c);
        // rem -= qterm * (x_{i+1} - x_i)
        let diff = MultiPoly::var(n, i + 1).sub(&MultiPoly::var(n, i));
        rem = rem.sub(&qterm.mul(&diff));
        quot = quot.add(&qterm);
    }
    quot
}

/// Apply Demazure operators along a reduced word of `w` (rightmost letter
/// first); the result is independent of the chosen word.
pub fn demazure_word<F: Scalar>(w: &Perm, p: &MultiPoly<F>) -> MultiPoly<F> {
    let mut out = p.clone();
    for &i in w.reduced_word().iter().rev() {
        out = demazure(i, &out);
    }
    out
}

/// Elementary symmetric polynomial of degree `j` in the given variables
/// (1-based indices into a ring with `nvars` variables). `j = 0` gives 1,
/// `j > |vars|` gives 0.
pub fn elementary_symmetric<F: Scalar>(nvars: usize, j: usize, vars: &[usize]) -> MultiPoly<F> {
    if j > vars.len() {
        return MultiPoly::zero(nvars);
    }
    let mut p = MultiPoly::zero(nvars);
    let mut subset: Vec<usize> = (0..j).collect();
    loop {
        let mut e = vec![0u16; nvars];
        for &s in &subset {
            e[vars[s] - 1] = 1;
        }
        p.add_term(e, F::one());
        if j == 0 {
            break;
        }
        let mut i = j as i64 - 1;
        while i >= 0 {
            let iu = i as usize;
            if subset[iu] < vars.len() - (j - iu) {
                subset[iu] += 1;
                for t in iu + 1..j {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
            i -= 1;
        }
        if i < 0 {
            break;
        }
    }
    p
}

/// Monomial basis of the degree-`degree` component of the Young-invariant
/// subring: products of elementary symmetric polynomials of each interval
/// times free variables, one basis element per weighted exponent pattern.
pub fn invariant_monomial_basis<F: Scalar>(
    n: usize,
    windows: &WindowPartition,
    degree: i64,
) -> Vec<MultiPoly<F>> {
    assert!(degree >= 0 && degree % 2 == 0, "degree must be even and >= 0");
    windows.validate(n).expect("invalid window partition");
    // generators: (polynomial, degree)
    let mut gens: Vec<(MultiPoly<F>, i64)> = Vec::new();
    let mut used = vec![false; n + 1];
    for &(a, b) in &windows.intervals {
        let vars: Vec<usize> = (a..=b).collect();
        for i in a..=b {
            used[i] = true;
        }
        for j in 1..=vars.len() {
            gens.push((
                elementary_symmetric(n, j, &vars),
                2 * j as i64,
            ));
        }
    }
    for i in 1..=n {
        if !used[i] {
            gens.push((MultiPoly::var(n, i), 2));
        }
    }
    let mut out = Vec::new();
    let mut exponents = vec![0u32; gens.len()];
    fn rec<F: Scalar>(
        gens: &[(MultiPoly<F>, i64)],
        exponents: &mut Vec<u32>,
        idx: usize,
        remaining: i64,
        out: &mut Vec<MultiPoly<F>>,
        n: usize,
    ) {
        if remaining == 0 {
            let mut p = MultiPoly::one(n);
            for (i, &e) in exponents.iter().enumerate() {
                for _ in 0..e {
                    p = p.mul(&gens[i].0);
                }
            }
            out.push(p);
            return;
        }
        if idx == gens.len() {
            return;
        }
        let d = gens[idx].1;
        let max = remaining / d;
        for e in 0..=max {
            exponents[idx] = e as u32;
            rec(gens, exponents, idx + 1, remaining - e * d, out, n);
        }
        exponents[idx] = 0;
    }
    rec(&gens, &mut exponents, 0, degree, &mut out, n);
    out
}

/// Checks that multiplication
/// `P^{(k+l, r)}-invariants x P^{(k, l+r)}-invariants -> P^{(k, l, r)}-invariants`
/// is surjective in every even degree up to `max_degree`, by rank.
pub fn check_polsym<F: Scalar>(k: usize, l: usize, r: usize, max_degree: i64) -> Result<bool, Error> {
    let n = k + l + r;
    if n > 6 {
        return Err(Error::resource(format!("check_polsym: n={n} > 6")));
    }
    let win_a = two_block(k + l, n);
    let win_b = two_block(k, n);
    let win_target = three_block(k, l, n);
    for degree in (0..=max_degree).step_by(2) {
        let target_dim = grdim_invariant_ring(n, &win_target, degree)?
            .coeff(degree)
            .to_usize()
            .unwrap();
        let mut span: SpanBuilder<Expv, F> = SpanBuilder::new();
        'outer: for da in (0..=degree).step_by(2) {
            let db = degree - da;
            for pa in invariant_monomial_basis::<F>(n, &win_a, da) {
                for pb in invariant_monomial_basis::<F>(n, &win_b, db) {
                    let prod = pa.mul(&pb);
                    let row: BTreeMap<Expv, F> =
                        prod.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
                    span.insert(row);
                    if span.rank() == target_dim {
                        break 'outer;
                    }
                }
            }
        }
        if span.rank() != target_dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Window partition with blocks `[1,a]` and `[a+1,n]` (empty blocks dropped).
pub fn two_block(a: usize, n: usize) -> WindowPartition {
    let mut intervals = Vec::new();
    if a >= 1 {
        intervals.push((1, a));
    }
    if a < n {
        intervals.push((a + 1, n));
    }
    WindowPartition::new(intervals)
}

/// Blocks `[1,a]`, `[a+1,a+b]`, `[a+b+1,n]`, empty ones dropped.
pub fn three_block(a: usize, b: usize, n: usize) -> WindowPartition {
    let mut intervals = Vec::new();
    if a >= 1 {
        intervals.push((1, a));
    }
    if b >= 1 {
        intervals.push((a + 1, a + b));
    }
    if a + b < n {
        intervals.push((a + b + 1, n));
    }
    WindowPartition::new(intervals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    type P = MultiPoly<Rat>;

    fn x(n: usize, i: usize) -> P {
        P::var(n, i)
    }

    #[test]
    fn demazure_basics() {
        let n = 2;
        assert_eq!(demazure(1, &x(n, 2)), P::one(n));
        assert_eq!(demazure(1, &x(n, 1)), P::one(n).neg());
        assert!(demazure(1, &x(n, 1).mul(&x(n, 2))).is_zero());
        // degree drop on homogeneous input
        let p = x(3, 1).mul(&x(3, 1)).mul(&x(3, 2));
        let d = demazure(1, &p);
        assert_eq!(d.degree(), Some(p.degree().unwrap() - 2));
    }

    #[test]
    fn demazure_word_independence() {
        // s1 s2 s1 = s2 s1 s2 as operators on x1^2 x2 in P_3
        let p = x(3, 1).mul(&x(3, 1)).mul(&x(3, 2));
        let a = demazure(1, &demazure(2, &demazure(1, &p)));
        let b = demazure(2, &demazure(1, &demazure(2, &p)));
        assert_eq!(a, b);
        let w0 = crate::symgrp::longest_element(1, 3, 3).unwrap();
        assert_eq!(demazure_word(&w0, &p), a);
        assert_eq!(demazure_word(&Perm::identity(3), &p), p);
        let w12 = crate::symgrp::longest_element(1, 2, 3).unwrap();
        assert_eq!(demazure_word(&w12, &x(3, 2)), P::one(3));
    }

    #[test]
    fn demazure_relations_on_monomials() {
        // d_i^2 = 0 and the braid relation, on all monomials of x-degree <= 6
        for n in 2..=4usize {
            for e in monomials(n, 6) {
                let mut p = P::zero(n);
                p.add_term(e, Rat::from_int(1));
                for i in 1..n {
                    assert!(demazure(i, &demazure(i, &p)).is_zero());
                }
                for i in 1..n.saturating_sub(1) {
                    let a = demazure(i, &demazure(i + 1, &demazure(i, &p)));
                    let b = demazure(i + 1, &demazure(i, &demazure(i + 1, &p)));
                    assert_eq!(a, b);
                }
            }
        }
    }

    fn monomials(n: usize, max_total: u16) -> Vec<Expv> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::new();
            for m in &out {
                let used: u16 = m.iter().sum();
                for e in 0..=(max_total - used) {
                    let mut m2 = m.clone();
                    m2.push(e);
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric::<Rat>(3, 0, &[1, 2]), P::one(3));
        assert_eq!(
            elementary_symmetric::<Rat>(3, 1, &[2, 3]),
            x(3, 2).add(&x(3, 3))
        );
        let e2 = elementary_symmetric::<Rat>(3, 2, &[1, 2, 3]);
        let expected = x(3, 1)
            .mul(&x(3, 2))
            .add(&x(3, 1).mul(&x(3, 3)))
            .add(&x(3, 2).mul(&x(3, 3)));
        assert_eq!(e2, expected);
        assert!(elementary_symmetric::<Rat>(2, 3, &[1, 2]).is_zero());
    }

    #[test]
    fn invariant_basis_examples() {
        let b = invariant_monomial_basis::<Rat>(2, &WindowPartition::new(vec![(1, 2)]), 4);
        assert_eq!(b.len(), 2);
        let b1 = invariant_monomial_basis::<Rat>(1, &WindowPartition::new(vec![]), 2);
        assert_eq!(b1, vec![x(1, 1)]);
        let b2 = invariant_monomial_basis::<Rat>(3, &WindowPartition::new(vec![(2, 3)]), 2);
        assert_eq!(b2.len(), 2);
        for p in &b2 {
            assert!(p.is_young_invariant(&WindowPartition::new(vec![(2, 3)])));
        }
    }

    #[test]
    fn invariant_basis_counts_match_grdim() {
        for n in 1..=4usize {
            let partitions = vec![
                WindowPartition::new(vec![]),
                WindowPartition::new(vec![(1, n)]),
                two_block(1, n),
            ];
            for win in partitions {
                for degree in (0..=10i64).step_by(2) {
                    let count = invariant_monomial_basis::<Rat>(n, &win, degree).len();
                    let expected = grdim_invariant_ring(n, &win, degree)
                        .unwrap()
                        .coeff(degree)
                        .to_usize()
                        .unwrap();
                    assert_eq!(count, expected, "n={n} win={win:?} degree={degree}");
                }
            }
        }
    }

    #[test]
    fn polsym_examples() {
        assert!(check_polsym::<Rat>(0, 2, 0, 8).unwrap());
        assert!(check_polsym::<Rat>(1, 1, 1, 8).unwrap());
        assert!(check_polsym::<Rat>(2, 2, 1, 8).unwrap());
    }

    #[test]
    fn pn_bases_over_invariants() {
        // Both distinguished bases of P_n over the symmetric invariants:
        // staircase-bounded monomials and Demazure images of the staircase.
        for n in 2..=4usize {
            let full = WindowPartition::new(vec![(1, n)]);
            let cutoff = 10i64;
            // staircase monomial x_2 x_3^2 ... x_n^{n-1}
            let mut stair = P::one(n);
            for i in 2..=n {
                for _ in 0..i - 1 {
                    stair = stair.mul(&x(n, i));
                }
            }
            let mut sets: Vec<Vec<P>> = vec![Vec::new(), Vec::new()];
            let mut bounded = vec![vec![0u16; 0]];
            for i in 1..=n {
                let mut next = Vec::new();
                for m in &bounded {
                    for e in 0..=(n - i) as u16 {
                        let mut m2 = m.clone();
                        m2.push(e);
                        next.push(m2);
                    }
                }
                bounded = next;
            }
            for e in bounded {
                let mut p = P::zero(n);
                p.add_term(e, Rat::from_int(1));
                sets[0].push(p);
            }
            for w in Perm::all(n) {
                sets[1].push(demazure_word(&w, &stair));
            }
            let fact: usize = (1..=n).product();
            for set in &sets {
                assert_eq!(set.len(), fact);
                // degreewise independence over K after multiplying by
                // invariant monomials, and span size matches grdim(P_n)
                for degree in (0..=cutoff).step_by(2) {
                    let mut span: SpanBuilder<Expv, Rat> = SpanBuilder::new();
                    let mut rows = 0usize;
                    for b in set {
                        let bd = b.degree().expect("homogeneous");
                        if bd > degree {
                            continue;
                        }
                        for m in invariant_monomial_basis::<Rat>(n, &full, degree - bd) {
                            let prod = m.mul(b);
                            rows += 1;
                            let row: BTreeMap<Expv, Rat> =
                                prod.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
                            assert!(span.insert(row), "dependent at degree {degree} n={n}");
                        }
                    }
                    let expected = grdim_invariant_ring(n, &WindowPartition::new(vec![]), degree)
                        .unwrap()
                        .coeff(degree)
                        .to_usize()
                        .unwrap();
                    assert_eq!(rows, expected);
                    assert_eq!(span.rank(), expected);
                }
            }
        }
    }

    #[test]
    fn display_form() {
        let p = x(2, 1).mul(&x(2, 1)).mul(&x(2, 2)).scale(&Rat::from_int(3));
        assert_eq!(p.to_string(), "3*x1^2*x2");
    }
}
