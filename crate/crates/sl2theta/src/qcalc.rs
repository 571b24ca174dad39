//! Laurent polynomials and cutoff-truncated series in `q` with
//! arbitrary-precision integer coefficients: quantum integers, quantum
//! binomials, Poincare series of invariant rings and of the algebras built
//! on top of them.
//!
//! A value is either exact (a genuine Laurent polynomial) or truncated at a
//! cutoff `D`, in which case no coefficient above `q^D` is stored or
//! reported. Arithmetic between truncated values takes the minimum cutoff;
//! mixing exact and truncated values truncates.

use crate::error::Error;
use crate::symgrp::Perm;
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Exact,
    Truncated(i64),
}

impl Kind {
    fn meet(self, other: Kind) -> Kind {
        match (self, other) {
            (Kind::Exact, k) | (k, Kind::Exact) => k,
            (Kind::Truncated(a), Kind::Truncated(b)) => Kind::Truncated(a.min(b)),
        }
    }
}

/// Sparse integer Laurent polynomial / truncated series in `q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, BigInt>,
    kind: Kind,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries {
            coeffs: BTreeMap::new(),
            kind: Kind::Exact,
        }
    }

    pub fn one() -> Self {
        LaurentSeries::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: i64, coeff: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentSeries {
            coeffs,
            kind: Kind::Exact,
        }
    }

    pub fn q_power(exp: i64) -> Self {
        Self::monomial(exp, BigInt::one())
    }

    pub fn from_coeffs(pairs: &[(i64, i64)]) -> Self {
        let mut s = LaurentSeries::zero();
        for &(e, c) in pairs {
            s.add_term(e, BigInt::from(c));
        }
        s
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn cutoff(&self) -> Option<i64> {
        match self.kind {
            Kind::Exact => None,
            Kind::Truncated(d) => Some(d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        if let Kind::Truncated(d) = self.kind {
            assert!(
                exp <= d,
                "coefficient of q^{exp} requested beyond cutoff {d}"
            );
        }
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        if let Kind::Truncated(d) = self.kind {
            if exp > d {
                return;
            }
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    fn renormalize(&mut self) {
        if let Kind::Truncated(d) = self.kind {
            self.coeffs.retain(|&e, c| e <= d && !c.is_zero());
        } else {
            self.coeffs.retain(|_, c| !c.is_zero());
        }
    }

    pub fn truncate(&self, cutoff: i64) -> Self {
        let mut s = self.clone();
        s.kind = match self.kind {
            Kind::Exact => Kind::Truncated(cutoff),
            Kind::Truncated(d) => Kind::Truncated(d.min(cutoff)),
        };
        s.renormalize();
        s
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut s = self.clone();
        s.kind = self.kind.meet(rhs.kind);
        s.renormalize();
        for (&e, c) in &rhs.coeffs {
            s.add_term(e, c.clone());
        }
        s
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // A truncated factor known up to q^D, multiplied by a factor with
        // lowest exponent l, yields coefficients that are reliable only up
        // to q^{D + l}; the result cutoff accounts for that.
        let lo = |s: &Self| s.coeffs.keys().next().copied().unwrap_or(0);
        let kind = if self.is_zero() || rhs.is_zero() {
            self.kind.meet(rhs.kind)
        } else {
            match (self.kind, rhs.kind) {
                (Kind::Exact, Kind::Exact) => Kind::Exact,
                (Kind::Exact, Kind::Truncated(d)) => Kind::Truncated(d + lo(self)),
                (Kind::Truncated(d), Kind::Exact) => Kind::Truncated(d + lo(rhs)),
                (Kind::Truncated(d1), Kind::Truncated(d2)) => {
                    Kind::Truncated((d1 + lo(rhs)).min(d2 + lo(self)))
                }
            }
        };
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            kind,
        };
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &rhs.coeffs {
                s.add_term(e1 + e2, c1 * c2);
            }
        }
        s
    }

    pub fn shift(&self, exp: i64) -> Self {
        let mut s = LaurentSeries {
            coeffs: BTreeMap::new(),
            kind: match self.kind {
                Kind::Exact => Kind::Exact,
                Kind::Truncated(d) => Kind::Truncated(d + exp),
            },
        };
        for (&e, c) in &self.coeffs {
            s.add_term(e + exp, c.clone());
        }
        s
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut s = self.clone();
        let big = BigInt::from(c);
        for v in s.coeffs.values_mut() {
            *v = v.clone() * &big;
        }
        s.renormalize();
        s
    }

    /// The bar involution `q <-> q^{-1}`. Only meaningful on exact values.
    pub fn bar(&self) -> Self {
        assert_eq!(self.kind, Kind::Exact, "bar involution on truncated series");
        let mut s = LaurentSeries::zero();
        for (&e, c) in &self.coeffs {
            s.add_term(-e, c.clone());
        }
        s
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.kind == Kind::Exact && *self == self.bar()
    }

    /// Exact division; panics if the remainder is nonzero (quantities in
    /// this crate are genuine Laurent polynomials, so a remainder is a bug).
    pub fn div_exact(&self, rhs: &Self) -> Self {
        assert_eq!(self.kind, Kind::Exact);
        assert_eq!(rhs.kind, Kind::Exact);
        assert!(!rhs.is_zero(), "division by zero series");
        let mut rem = self.clone();
        let mut quot = LaurentSeries::zero();
        let (&de, dc) = rhs.coeffs.iter().next_back().unwrap();
        while !rem.is_zero() {
            let (&re, rc) = rem.coeffs.iter().next_back().unwrap();
            let (q, r) = num::Integer::div_rem(rc, dc);
            assert!(r.is_zero(), "non-exact Laurent division");
            let term = LaurentSeries::monomial(re - de, q);
            rem = rem.sub(&term.mul(rhs));
            quot = quot.add(&term);
        }
        quot
    }

    /// Divide a (possibly truncated) series by an exact polynomial whose
    /// lowest term is `+/- q^e`; the quotient is computed degree by degree up
    /// to the cutoff.
    pub fn div_by_unit_poly(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero());
        let (&le, lc) = rhs.coeffs.iter().next().unwrap();
        assert!(
            lc.clone() * lc.clone() == BigInt::one(),
            "lowest coefficient must be a unit"
        );
        match self.kind {
            Kind::Exact => self.div_exact(rhs),
            Kind::Truncated(d) => {
                let mut rem = self.clone();
                let mut quot = LaurentSeries {
                    coeffs: BTreeMap::new(),
                    kind: Kind::Truncated(d - le),
                };
                while !rem.is_zero() {
                    let (&re, rc) = rem.coeffs.iter().next().unwrap();
                    let term = LaurentSeries::monomial(re - le, rc * lc);
                    rem = rem.sub(&term.mul(rhs));
                    quot = quot.add(&term);
                }
                quot.truncate(d - le)
            }
        }
    }

    pub fn lowest_term(&self) -> Result<(i64, BigInt), Error> {
        self.coeffs
            .iter()
            .next()
            .map(|(&e, c)| (e, c.clone()))
            .ok_or_else(|| Error::invalid("lowest_term of zero series"))
    }

    /// Coefficientwise equality up to the common cutoff (exact values
    /// compare fully).
    pub fn eq_within_cutoff(&self, rhs: &Self) -> bool {
        match self.kind.meet(rhs.kind) {
            Kind::Exact => self.coeffs == rhs.coeffs,
            Kind::Truncated(d) => {
                let keys: std::collections::BTreeSet<i64> = self
                    .coeffs
                    .keys()
                    .chain(rhs.coeffs.keys())
                    .copied()
                    .filter(|&e| e <= d)
                    .collect();
                keys.into_iter().all(|e| {
                    self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
                        == rhs.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
                })
            }
        }
    }
}

impl fmt::Display for LaurentSeries {
    /// Canonical text form: ascending exponents, `c*q^e` with `q^0` elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&e, c)| {
                if e == 0 {
                    format!("{c}")
                } else {
                    format!("{c}*q^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `[k] = (q^k - q^{-k})/(q - q^{-1})`, with `[-k] = -[k]`.
pub fn quantum_int(k: i64) -> LaurentSeries {
    if k == 0 {
        return LaurentSeries::zero();
    }
    if k < 0 {
        return quantum_int(-k).neg();
    }
    let mut s = LaurentSeries::zero();
    let mut e = k - 1;
    while e >= -(k - 1) {
        s.add_term(e, BigInt::one());
        e -= 2;
    }
    s
}

/// `[k]! = [1][2]...[k]`.
pub fn quantum_fact(k: u32) -> LaurentSeries {
    let mut s = LaurentSeries::one();
    for i in 1..=k {
        s = s.mul(&quantum_int(i as i64));
    }
    s
}

/// Quantum binomial with natural top, via exact division `[n]!/([k]![n-k]!)`.
pub fn quantum_binom(n: u32, k: u32) -> Result<LaurentSeries, Error> {
    if k > n {
        return Err(Error::invalid(format!("quantum_binom: k={k} > n={n}")));
    }
    let num = quantum_fact(n);
    let den = quantum_fact(k).mul(&quantum_fact(n - k));
    Ok(num.div_exact(&den))
}

/// Quantum binomial with arbitrary integer top:
/// `[t; i] = [t][t-1]...[t-i+1] / [i]!`. For `t >= 0` this agrees with
/// `quantum_binom`; for `t < 0` it equals `(-1)^i [i-t-1; i]`.
pub fn quantum_binom_int(t: i64, i: u32) -> LaurentSeries {
    let mut num = LaurentSeries::one();
    for s in 0..i as i64 {
        num = num.mul(&quantum_int(t - s));
    }
    num.div_exact(&quantum_fact(i))
}

/// `{k} = (q^{2k}-1)/(q^2-1) = 1 + q^2 + ... + q^{2(k-1)}`.
pub fn braced_int(k: u32) -> LaurentSeries {
    let mut s = LaurentSeries::zero();
    for j in 0..k {
        s.add_term(2 * j as i64, BigInt::one());
    }
    s
}

/// `{k}! = {1}{2}...{k}`.
pub fn braced_fact(k: u32) -> LaurentSeries {
    let mut s = LaurentSeries::one();
    for i in 1..=k {
        s = s.mul(&braced_int(i));
    }
    s
}

/// `{m}!/{j}! = {j+1}{j+2}...{m}` as an exact product (no division).
pub fn braced_fact_ratio(m: u32, j: u32) -> LaurentSeries {
    assert!(j <= m);
    let mut s = LaurentSeries::one();
    for t in j + 1..=m {
        s = s.mul(&braced_int(t));
    }
    s
}

/// Sum of `q^{2 l(w)}` over the full symmetric group, by enumeration.
pub fn poincare_symmetric_group(n: u32) -> Result<LaurentSeries, Error> {
    if n > 8 {
        return Err(Error::resource(format!(
            "poincare_symmetric_group: n={n} exceeds enumeration bound 8"
        )));
    }
    let mut s = LaurentSeries::zero();
    for w in Perm::all(n as usize) {
        s.add_term(2 * w.length() as i64, BigInt::one());
    }
    Ok(s)
}

/// Sum of `q^{2(u_1+...+u_r)}` over `r`-element subsets of
/// `{0, ..., ground_size-1}`, by enumeration. Equals
/// `q^{r(r-1)} {g}! / ({r}! {g-r}!)` with `g = ground_size`.
pub fn subset_qsum(ground_size: u32, r: u32) -> Result<LaurentSeries, Error> {
    if r > ground_size {
        return Err(Error::invalid(format!(
            "subset_qsum: r={r} > ground_size={ground_size}"
        )));
    }
    let mut s = LaurentSeries::zero();
    let mut subset: Vec<u32> = (0..r).collect();
    loop {
        let total: u32 = subset.iter().sum();
        s.add_term(2 * total as i64, BigInt::one());
        // next combination in lexicographic order
        let mut i = r as i64 - 1;
        while i >= 0 {
            let iu = i as usize;
            if subset[iu] < ground_size - (r - i as u32) {
                subset[iu] += 1;
                for j in iu + 1..r as usize {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
            i -= 1;
        }
        if i < 0 {
            break;
        }
    }
    Ok(s)
}

/// Closed form for `subset_qsum`.
pub fn subset_qsum_closed(ground_size: u32, r: u32) -> Result<LaurentSeries, Error> {
    if r > ground_size {
        return Err(Error::invalid(format!(
            "subset_qsum_closed: r={r} > ground_size={ground_size}"
        )));
    }
    let num = braced_fact(ground_size);
    let den = braced_fact(r).mul(&braced_fact(ground_size - r));
    Ok(num.div_exact(&den).shift((r as i64) * (r as i64 - 1)))
}

/// A disjoint union of index intervals inside `1..=n`; positions outside all
/// intervals are unconstrained variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPartition {
    pub intervals: Vec<(usize, usize)>,
}

impl WindowPartition {
    pub fn new(intervals: Vec<(usize, usize)>) -> Self {
        WindowPartition { intervals }
    }

    pub fn validate(&self, n: usize) -> Result<(), Error> {
        let mut seen = vec![false; n + 1];
        for &(a, b) in &self.intervals {
            if a < 1 || b > n || a > b {
                return Err(Error::invalid(format!(
                    "interval [{a},{b}] out of range 1..={n}"
                )));
            }
            for i in a..=b {
                if seen[i] {
                    return Err(Error::invalid(format!("overlapping intervals at {i}")));
                }
                seen[i] = true;
            }
        }
        Ok(())
    }

    /// Interval sizes plus the count of free variables, for `n` ambient
    /// variables.
    pub fn block_profile(&self, n: usize) -> (Vec<usize>, usize) {
        let sizes: Vec<usize> = self.intervals.iter().map(|&(a, b)| b - a + 1).collect();
        let used: usize = sizes.iter().sum();
        (sizes, n - used)
    }
}

/// Graded dimension of the subring of `P_n` invariant under the Young
/// subgroup permuting each interval, as a truncated series: a free variable
/// contributes `1/(1-q^2)`, an interval of length `m` contributes
/// `prod_{j=1..m} 1/(1-q^{2j})`.
pub fn grdim_invariant_ring(
    n: usize,
    windows: &WindowPartition,
    cutoff: i64,
) -> Result<LaurentSeries, Error> {
    windows.validate(n)?;
    let (sizes, free) = windows.block_profile(n);
    let mut s = LaurentSeries::one().truncate(cutoff);
    for _ in 0..free {
        s = s.mul(&geometric(2, cutoff));
    }
    for m in sizes {
        for j in 1..=m {
            s = s.mul(&geometric(2 * j as i64, cutoff));
        }
    }
    Ok(s)
}

/// `1/(1-q^step)` truncated.
pub fn geometric(step: i64, cutoff: i64) -> LaurentSeries {
    let mut s = LaurentSeries::zero().truncate(cutoff);
    let mut e = 0;
    while e <= cutoff {
        s.add_term(e, BigInt::one());
        e += step;
    }
    s
}

/// Graded dimension of the nil Hecke algebra on `n` strands:
/// `grdim(P_n^{S_n}) {n}! bar({n}!)`, truncated.
pub fn grdim_nilhecke(n: usize, cutoff: i64) -> LaurentSeries {
    let full = WindowPartition::new(if n >= 1 { vec![(1, n)] } else { vec![] });
    let sym = grdim_invariant_ring(n, &full, cutoff + 2 * ((n * (n - 1)) / 2) as i64).unwrap();
    let f = braced_fact(n as u32);
    sym.mul(&f).mul(&f.bar()).truncate(cutoff)
}

// ---------------------------------------------------------------------------
// Decomposition identities at the Grothendieck level.
// ---------------------------------------------------------------------------

/// A formal integer combination of normal-form words `F^{(j)} E^{(i)} 1_w`
/// with Laurent-polynomial multiplicities, used to compare both sides of the
/// divided-power decomposition identities.
type NormalForm = BTreeMap<(u32, u32), LaurentSeries>;

fn nf_insert(nf: &mut NormalForm, key: (u32, u32), c: LaurentSeries) {
    let entry = nf.entry(key).or_insert_with(LaurentSeries::zero);
    *entry = entry.add(&c);
    if entry.is_zero() {
        nf.remove(&key);
    }
}

/// Rewrite `E^{(a)} F^{(b)} 1_w` into the `F E`-normal form using the
/// commutation identity with generalized quantum binomial `[w + a - b; i]`.
fn commute_ef(a: u32, b: u32, w: i64) -> NormalForm {
    let mut nf = NormalForm::new();
    for i in 0..=a.min(b) {
        let c = quantum_binom_int(w + a as i64 - b as i64, i);
        if !c.is_zero() {
            nf_insert(&mut nf, (b - i, a - i), c);
        }
    }
    nf
}

/// Scalar of `F^{(j)} E^{(i)}` (E applied first) on the basis line `m_p` of
/// the `(dim+1)`-dimensional simple module; the result sits on `m_{p-i+j}`.
fn scalar_fe(dim: u32, p: i64, i: u32, j: u32) -> LaurentSeries {
    let p1 = p - i as i64;
    if p1 < 0 || p > dim as i64 {
        return LaurentSeries::zero();
    }
    let c1 = quantum_binom((dim as i64 - p1) as u32, i).unwrap();
    let p2 = p1 + j as i64;
    if p2 > dim as i64 {
        return LaurentSeries::zero();
    }
    let c2 = quantum_binom(p2 as u32, j).unwrap();
    c1.mul(&c2)
}

/// Scalar of `E^{(i)} F^{(j)}` (F applied first) on `m_p`.
fn scalar_ef(dim: u32, p: i64, i: u32, j: u32) -> LaurentSeries {
    let p1 = p + j as i64;
    if p1 > dim as i64 || p < 0 {
        return LaurentSeries::zero();
    }
    let c1 = quantum_binom(p1 as u32, j).unwrap();
    let p2 = p1 - i as i64;
    if p2 < 0 {
        return LaurentSeries::zero();
    }
    let c2 = quantum_binom((dim as i64 - p2) as u32, i).unwrap();
    c1.mul(&c2)
}

/// Verifies the divided-power decomposition identities at the Grothendieck
/// level for the given parameters:
///
/// 1. `F^{(a)} F^{(b)} = [a+b; a] F^{(a+b)}`: the exact divisibility
///    `[a+b]! = [a+b; a] [a]! [b]!` plus scalar agreement on every simple
///    module in a finite grid;
/// 2. for `w >= b-a`: `E^{(a)} F^{(b)} 1_w = sum_i [w+a-b; i] F^{(b-i)} E^{(a-i)} 1_w`
///    on the module grid, with the multiplicities also matching the
///    generalized-binomial rewriting rule;
/// 3. for `w <= b-a`: `F^{(b)} E^{(a)} 1_w = sum_i [b-a-w; i] E^{(a-i)} F^{(b-i)} 1_w`,
///    both symbolically (rewriting the right side back to `F E` normal form
///    must return the single plain word) and on the module grid.
pub fn check_decomposition_identities(a: u32, b: u32, weight: i64) -> bool {
    // (1) divided-power multiplication multiplicity
    let binom = match quantum_binom(a + b, a) {
        Ok(s) => s,
        Err(_) => return false,
    };
    if quantum_fact(a + b) != binom.mul(&quantum_fact(a)).mul(&quantum_fact(b)) {
        return false;
    }
    let max_dim = weight.unsigned_abs() as u32 + 2 * (a + b) + 6;
    for dim in 0..=max_dim {
        for p in 0..=dim as i64 {
            // F^{(a)} F^{(b)} versus [a+b; a] F^{(a+b)} on m_p
            let lhs = scalar_fe(dim, p, 0, b).mul(&scalar_fe(dim, p + b as i64, 0, a));
            let rhs = binom.mul(&scalar_fe(dim, p, 0, a + b));
            if lhs != rhs {
                return false;
            }
        }
    }

    // (2) E^{(a)} F^{(b)} 1_w expanded in F E order.
    let nat_binom = |t: i64, i: u32| -> LaurentSeries {
        if t >= 0 && i as i64 <= t {
            quantum_binom(t as u32, i).unwrap()
        } else if t >= 0 {
            LaurentSeries::zero()
        } else {
            unreachable!("natural binomial with negative top")
        }
    };
    if weight >= b as i64 - a as i64 {
        // the generalized binomial must agree with the natural one here
        let t = weight + a as i64 - b as i64;
        for i in 0..=a.min(b) {
            if quantum_binom_int(t, i) != nat_binom(t, i) {
                return false;
            }
        }
        for dim in 0..=max_dim {
            if (dim as i64 - weight) % 2 != 0 || weight.abs() > dim as i64 {
                continue;
            }
            let p = (dim as i64 - weight) / 2;
            let direct = scalar_ef(dim, p, a, b);
            let mut expanded = LaurentSeries::zero();
            for i in 0..=a.min(b) {
                let c = nat_binom(t, i);
                expanded = expanded.add(&c.mul(&scalar_fe(dim, p, a - i, b - i)));
            }
            if direct != expanded {
                return false;
            }
        }
    }

    // (3) F^{(b)} E^{(a)} 1_w expanded in E F order.
    if weight <= b as i64 - a as i64 {
        // symbolic: rewriting the right side back to F E normal form must
        // yield exactly the single word F^{(b)} E^{(a)}
        let t = b as i64 - a as i64 - weight;
        let mut rhs_nf = NormalForm::new();
        for i in 0..=a.min(b) {
            let c = nat_binom(t, i);
            for (key, d) in commute_ef(a - i, b - i, weight) {
                nf_insert(&mut rhs_nf, key, c.mul(&d));
            }
        }
        let mut lhs_nf = NormalForm::new();
        nf_insert(&mut lhs_nf, (b, a), LaurentSeries::one());
        if lhs_nf != rhs_nf {
            return false;
        }
        for dim in 0..=max_dim {
            if (dim as i64 - weight) % 2 != 0 || weight.abs() > dim as i64 {
                continue;
            }
            let p = (dim as i64 - weight) / 2;
            let direct = scalar_fe(dim, p, a, b);
            let mut expanded = LaurentSeries::zero();
            for i in 0..=a.min(b) {
                let c = nat_binom(t, i);
                expanded = expanded.add(&c.mul(&scalar_ef(dim, p, a - i, b - i)));
            }
            if direct != expanded {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Graded dimensions of morphism spaces between divided-power images.
// ---------------------------------------------------------------------------

/// Graded dimension of the endomorphism algebra of the image of
/// `F^{(m)} 1_mu` on the rank-`n` simple 2-representation: the invariant
/// ring of the three-block Young subgroup `(k_mu - m, m, n - k_mu)` where
/// `k_mu = (mu + n)/2`; zero when the weights leave `0..=n`.
fn grdim_end_divided_f(m: u32, mu: i64, n: u32, cutoff: i64) -> LaurentSeries {
    if (mu + n as i64) % 2 != 0 {
        return LaurentSeries::zero().truncate(cutoff);
    }
    let k = (mu + n as i64) / 2;
    let lo = k - m as i64;
    if lo < 0 || k > n as i64 {
        return LaurentSeries::zero().truncate(cutoff);
    }
    let mut intervals = Vec::new();
    if lo >= 2 {
        intervals.push((1usize, lo as usize));
    } else if lo == 1 {
        intervals.push((1, 1));
    }
    if m >= 1 {
        intervals.push((lo as usize + 1, k as usize));
    }
    if k < n as i64 {
        intervals.push((k as usize + 1, n as usize));
    }
    grdim_invariant_ring(n as usize, &WindowPartition::new(intervals), cutoff).unwrap()
}

fn grdim_end_divided_e(m: u32, mu: i64, n: u32, cutoff: i64) -> LaurentSeries {
    // E^{(m)} 1_mu : mu -> mu + 2m; blocks (k_mu, m, n - k_mu - m)
    grdim_end_divided_f(m, mu + 2 * m as i64, n, cutoff)
}

/// Evaluates the closed formula for
/// `grdim Hom(Phi_n(F^{(b)}E^{(a)}1_w), Phi_n(F^{(d)}E^{(c)}1_w))` when
/// `w >= b-a`, or the `E F`-side variant when `w <= b-a`, as a truncated
/// series. Requires `a - b = c - d` and `n = w (mod 2)`.
pub fn adj_hom_grdim(
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    weight: i64,
    n: u32,
    cutoff: i64,
) -> Result<LaurentSeries, Error> {
    if a as i64 - b as i64 != c as i64 - d as i64 {
        return Err(Error::invalid("adj_hom_grdim: a-b != c-d"));
    }
    if (weight - n as i64) % 2 != 0 {
        return Err(Error::invalid("adj_hom_grdim: parity mismatch"));
    }
    let mut total = LaurentSeries::zero().truncate(cutoff);
    if weight >= b as i64 - a as i64 {
        for i in 0..=a.min(c) {
            let e = (a + c - i) as i64 * (weight + (a + c - i) as i64);
            let coeff = quantum_binom_int(weight + a as i64 + c as i64, i)
                .mul(&quantum_binom(b + c - i, b)?)
                .mul(&quantum_binom(a + d - i, d)?)
                .shift(e);
            if coeff.is_zero() {
                continue;
            }
            let low = coeff.lowest_term()?.0;
            let end = grdim_end_divided_f(
                a + d - i,
                weight + 2 * (a + c - i) as i64,
                n,
                cutoff.max(cutoff - low),
            );
            total = total.add(&coeff.mul(&end).truncate(cutoff));
        }
    } else {
        for i in 0..=b.min(d) {
            let e = (b + d - i) as i64 * ((b + d - i) as i64 - weight);
            let coeff = quantum_binom_int(b as i64 + d as i64 - weight, i)
                .mul(&quantum_binom(a + d - i, a)?)
                .mul(&quantum_binom(b + c - i, c)?)
                .shift(e);
            if coeff.is_zero() {
                continue;
            }
            let low = coeff.lowest_term()?.0;
            let end = grdim_end_divided_e(
                a + d - i,
                weight - 2 * (b + d - i) as i64,
                n,
                cutoff.max(cutoff - low),
            );
            total = total.add(&coeff.mul(&end).truncate(cutoff));
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_int_examples() {
        assert!(quantum_int(0).is_zero());
        assert_eq!(quantum_int(2), LaurentSeries::from_coeffs(&[(-1, 1), (1, 1)]));
        assert_eq!(
            quantum_int(3),
            LaurentSeries::from_coeffs(&[(-2, 1), (0, 1), (2, 1)])
        );
        assert_eq!(quantum_int(-3), quantum_int(3).neg());
    }

    #[test]
    fn quantum_binom_examples() {
        assert_eq!(quantum_binom(2, 1).unwrap(), quantum_int(2));
        // [4 choose 2] = q^4 + q^2 + 2 + q^-2 + q^-4, frozen from the
        // polynomial division [4]!/([2]![2]!)
        assert_eq!(
            quantum_binom(4, 2).unwrap(),
            LaurentSeries::from_coeffs(&[(-4, 1), (-2, 1), (0, 2), (2, 1), (4, 1)])
        );
        assert_eq!(quantum_binom(5, 0).unwrap(), LaurentSeries::one());
        assert!(quantum_binom(2, 3).is_err());
    }

    #[test]
    fn quantum_binom_bar_invariant_nonneg() {
        use num::Signed;
        for n in 0..=12u32 {
            for k in 0..=n {
                let b = quantum_binom(n, k).unwrap();
                assert!(b.is_bar_invariant(), "[{n};{k}] not bar-invariant");
                assert!(b.terms().all(|(_, c)| !c.is_negative()));
            }
        }
    }

    #[test]
    fn quantum_binom_int_negative_top() {
        // [-1; i] = (-1)^i q^{...}: check against the product formula and a
        // couple of frozen values
        assert_eq!(quantum_binom_int(-1, 0), LaurentSeries::one());
        assert_eq!(
            quantum_binom_int(-1, 1),
            quantum_int(-1)
        );
        assert_eq!(quantum_binom_int(3, 2), quantum_binom(3, 2).unwrap());
        assert!(quantum_binom_int(0, 1).is_zero());
    }

    #[test]
    fn braced_examples() {
        assert_eq!(braced_fact(1), LaurentSeries::one());
        assert_eq!(braced_fact(2), LaurentSeries::from_coeffs(&[(0, 1), (2, 1)]));
        let b3 = braced_int(1).mul(&braced_int(2)).mul(&braced_int(3));
        assert_eq!(braced_fact(3), b3);
        assert_eq!(braced_fact(3).lowest_term().unwrap(), (0, BigInt::one()));
    }

    #[test]
    fn poincare_matches_braced_fact() {
        assert_eq!(
            poincare_symmetric_group(3).unwrap(),
            LaurentSeries::from_coeffs(&[(0, 1), (2, 2), (4, 2), (6, 1)])
        );
        for n in 0..=7u32 {
            assert_eq!(poincare_symmetric_group(n).unwrap(), braced_fact(n));
        }
        assert!(poincare_symmetric_group(9).is_err());
    }

    #[test]
    fn subset_qsum_examples() {
        assert_eq!(
            subset_qsum(3, 1).unwrap(),
            LaurentSeries::from_coeffs(&[(0, 1), (2, 1), (4, 1)])
        );
        assert_eq!(subset_qsum(2, 2).unwrap(), LaurentSeries::q_power(2));
        // ground-set convention, resolved by brute force
        for g in 0..=10u32 {
            for r in 0..=g {
                assert_eq!(
                    subset_qsum(g, r).unwrap(),
                    subset_qsum_closed(g, r).unwrap(),
                    "subset_qsum({g},{r})"
                );
            }
        }
        assert!(subset_qsum(2, 3).is_err());
    }

    #[test]
    fn invariant_ring_examples() {
        let s = grdim_invariant_ring(1, &WindowPartition::new(vec![]), 4).unwrap();
        assert_eq!(s, geometric(2, 4));
        let s2 = grdim_invariant_ring(2, &WindowPartition::new(vec![(1, 2)]), 6).unwrap();
        // monomials in e1 (deg 2), e2 (deg 4)
        let expected = LaurentSeries::from_coeffs(&[(0, 1), (2, 1), (4, 2), (6, 2)]).truncate(6);
        assert!(s2.eq_within_cutoff(&expected));
        assert!(grdim_invariant_ring(2, &WindowPartition::new(vec![(1, 2), (2, 2)]), 4).is_err());
    }

    #[test]
    fn grdim_pn_factorization() {
        // grdim(P_n) = grdim(P_n^{S_n}) {n}!
        for n in 1..=6usize {
            let cutoff = 14;
            let full = grdim_invariant_ring(n, &WindowPartition::new(vec![(1, n)]), cutoff)
                .unwrap()
                .mul(&braced_fact(n as u32))
                .truncate(cutoff);
            let free = grdim_invariant_ring(n, &WindowPartition::new(vec![]), cutoff).unwrap();
            assert!(full.eq_within_cutoff(&free), "n={n}");
        }
    }

    #[test]
    fn grdim_nilhecke_h1() {
        let s = grdim_nilhecke(1, 8);
        assert!(s.eq_within_cutoff(&geometric(2, 8)));
    }

    #[test]
    fn decomposition_identities_small() {
        assert!(check_decomposition_identities(1, 1, 0));
        assert!(check_decomposition_identities(2, 1, 1));
        assert!(check_decomposition_identities(1, 2, -1));
        assert!(check_decomposition_identities(2, 2, 0));
        assert!(check_decomposition_identities(1, 1, 3));
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(quantum_int(2).lowest_term().unwrap(), (-1, BigInt::one()));
        assert_eq!(
            quantum_binom(4, 2).unwrap().lowest_term().unwrap(),
            (-4, BigInt::one())
        );
        assert!(LaurentSeries::zero().lowest_term().is_err());
    }

    #[test]
    fn truncation_rules() {
        let a = geometric(2, 10);
        let b = geometric(2, 6);
        assert_eq!(a.mul(&b).cutoff(), Some(6));
        assert_eq!(a.add(&LaurentSeries::one()).cutoff(), Some(10));
        let t = LaurentSeries::q_power(8).truncate(4);
        assert!(t.is_zero());
    }

    #[test]
    fn display_form() {
        let s = LaurentSeries::from_coeffs(&[(-1, 1), (0, 2), (3, -4)]);
        assert_eq!(s.to_string(), "1*q^-1 + 2 + -4*q^3");
        assert_eq!(LaurentSeries::zero().to_string(), "0");
    }
}
