//! Exact linear algebra: dense matrices for complex differentials and a
//! sparse span builder for expressing nil Hecke elements in chosen bases.

use crate::field::Scalar;
use std::collections::BTreeMap;

/// Dense column-major-free matrix: `a[r][c]`, mapping column vectors on the
/// right, so a differential `d: V -> W` has `rows = dim W`, `cols = dim V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<F: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<F>>,
}

impl<F: Scalar> Mat<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![vec![F::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.a[i][i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat { rows: r, cols: c, a: rows }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    pub fn mul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.rows);
        let mut out: Mat<F> = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.a[i][k].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs.a[k][j].is_zero() {
                        continue;
                    }
                    out.a[i][j] = out.a[i][j].add(&self.a[i][k].mul(&rhs.a[k][j]));
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.a[i][j] = out.a[i][j].add(&rhs.a[i][j]);
            }
        }
        out
    }

    pub fn neg(&self) -> Mat<F> {
        let mut out = self.clone();
        for row in out.a.iter_mut() {
            for x in row.iter_mut() {
                *x = x.neg();
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Mat<F> {
        let mut out = self.clone();
        for row in out.a.iter_mut() {
            for x in row.iter_mut() {
                *x = x.mul(c);
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<F> {
        let a = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.a[i][j].clone()).collect())
            .collect();
        Mat {
            rows: rows.len(),
            cols: cols.len(),
            a,
        }
    }

    /// Row echelon reduction in place; returns pivot column indices.
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.a[r][col].is_zero()) else {
                continue;
            };
            self.a.swap(row, p);
            let inv = self.a[row][col].inv();
            for j in col..self.cols {
                self.a[row][j] = self.a[row][j].mul(&inv);
            }
            for r in 0..self.rows {
                if r != row && !self.a[r][col].is_zero() {
                    let f = self.a[r][col].clone();
                    for j in col..self.cols {
                        let t = self.a[row][j].mul(&f);
                        self.a[r][j] = self.a[r][j].sub(&t);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.echelonize();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.a[r][free].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of a square matrix; None if singular.
    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.a[i][j] = self.a[i][j].clone();
            }
            aug.a[i][n + i] = F::one();
        }
        let pivots = aug.echelonize();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.a[i][j] = aug.a[i][n + j].clone();
            }
        }
        Some(inv)
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = F::zero();
                for j in 0..self.cols {
                    if !self.a[i][j].is_zero() && !v[j].is_zero() {
                        s = s.add(&self.a[i][j].mul(&v[j]));
                    }
                }
                s
            })
            .collect()
    }
}

/// Incremental row space over sparse vectors keyed by an arbitrary ordered
/// column type. Tracks, for every echelon row, its expression in the
/// originally inserted rows, so members of the span can be rewritten in the
/// inserted basis.
pub struct SpanBuilder<K: Ord + Clone, F: Scalar> {
    /// (pivot key, reduced sparse row, combination over inserted rows)
    rows: Vec<(K, BTreeMap<K, F>, Vec<F>)>,
    inserted: usize,
}

impl<K: Ord + Clone, F: Scalar> Default for SpanBuilder<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, F: Scalar> SpanBuilder<K, F> {
    pub fn new() -> Self {
        SpanBuilder {
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: BTreeMap<K, F>) -> (BTreeMap<K, F>, Vec<F>) {
        let mut combo = vec![F::zero(); self.inserted];
        for (pivot, row, rcombo) in &self.rows {
            let Some(c) = v.get(pivot).cloned() else {
                continue;
            };
            if c.is_zero() {
                v.remove(pivot);
                continue;
            }
            // v -= c * row
            for (k, rv) in row {
                let t = c.mul(rv);
                let entry = v.entry(k.clone()).or_insert_with(F::zero);
                *entry = entry.sub(&t);
                if entry.is_zero() {
                    v.remove(k);
                }
            }
            for (i, rc) in rcombo.iter().enumerate() {
                combo[i] = combo[i].add(&c.mul(rc));
            }
        }
        (v, combo)
    }

    /// Insert a row; returns true if it enlarged the span.
    pub fn insert(&mut self, v: BTreeMap<K, F>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        for c in self.rows.iter_mut().map(|r| &mut r.2) {
            c.push(F::zero());
        }
        let (mut rem, combo) = self.reduce(v);
        // rem = inserted_idx - sum_i combo[i] * inserted_i
        let rem_combo: Vec<F> = {
            let mut rc: Vec<F> = combo.iter().map(|c| c.neg()).collect();
            rc[idx] = F::one();
            rc
        };
        if rem.is_empty() {
            return false;
        }
        // normalize pivot to 1
        let pivot = rem.keys().next().unwrap().clone();
        let pv = rem.get(&pivot).unwrap().clone();
        let inv = pv.inv();
        for x in rem.values_mut() {
            *x = x.mul(&inv);
        }
        let norm_combo = rem_combo.iter().map(|c| c.mul(&inv)).collect();
        self.rows.push((pivot, rem, norm_combo));
        true
    }

    /// If `v` lies in the span, return its coefficients over the inserted
    /// rows (length = number of inserted rows so far).
    pub fn express(&self, v: BTreeMap<K, F>) -> Option<Vec<F>> {
        let (rem, combo) = self.reduce(v);
        if rem.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn contains(&self, v: BTreeMap<K, F>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// The reduced rows currently spanning the space.
    pub fn echelon_rows(&self) -> Vec<BTreeMap<K, F>> {
        self.rows.iter().map(|(_, r, _)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn span_express() {
        let mut sp: SpanBuilder<usize, Rat> = SpanBuilder::new();
        let row = |ix: &[(usize, i64)]| -> BTreeMap<usize, Rat> {
            ix.iter().map(|&(k, v)| (k, Rat::from_int(v))).collect()
        };
        assert!(sp.insert(row(&[(0, 1), (1, 1)])));
        assert!(sp.insert(row(&[(1, 2)])));
        assert!(!sp.insert(row(&[(0, 3), (1, 1)])));
        // (0,5),(1,1) = 5*r0 - 2*r1
        let c = sp.express(row(&[(0, 5), (1, 1)])).unwrap();
        assert_eq!(c[0], Rat::from_int(5));
        assert_eq!(c[1], Rat::from_int(-2));
        assert!(sp.express(row(&[(2, 1)])).is_none());
    }
}
