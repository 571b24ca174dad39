//! Cochain complexes of bigraded spaces (homological degree x internal
//! q-degree), presented degreewise as finite dimensional vector spaces over
//! an exact field. Every homological statement is certified only for
//! q-degrees up to the declared cutoff.

use crate::error::Error;
use crate::field::Scalar;
use crate::linalg::Mat;
use std::collections::BTreeMap;

/// Key for one graded piece: (homological degree, internal q-degree).
pub type Piece = (i32, i64);

/// A bounded cochain complex with degreewise dimensions and degree-zero
/// differentials `d[(r, d)]: (r, d) -> (r+1, d)`.
#[derive(Clone, Debug)]
pub struct GradedComplex<F: Scalar> {
    pub dims: BTreeMap<Piece, usize>,
    pub diffs: BTreeMap<Piece, Mat<F>>,
    /// Ordered labels per piece, parallel to the basis used in `diffs`.
    pub labels: BTreeMap<Piece, Vec<String>>,
    /// Declared internal shift of each homological term, for reporting.
    pub shift_offsets: BTreeMap<i32, i64>,
    pub cutoff: i64,
}

impl<F: Scalar> GradedComplex<F> {
    pub fn new(cutoff: i64) -> Self {
        GradedComplex {
            dims: BTreeMap::new(),
            diffs: BTreeMap::new(),
            labels: BTreeMap::new(),
            shift_offsets: BTreeMap::new(),
            cutoff,
        }
    }

    pub fn dim(&self, p: Piece) -> usize {
        self.dims.get(&p).copied().unwrap_or(0)
    }

    pub fn set_dim(&mut self, p: Piece, dim: usize) {
        if dim > 0 {
            self.dims.insert(p, dim);
        }
    }

    pub fn set_diff(&mut self, p: Piece, m: Mat<F>) {
        assert_eq!(m.cols, self.dim(p));
        assert_eq!(m.rows, self.dim((p.0 + 1, p.1)));
        if m.rows > 0 && m.cols > 0 {
            self.diffs.insert(p, m);
        }
    }

    pub fn diff(&self, p: Piece) -> Mat<F> {
        self.diffs
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Mat::zero(self.dim((p.0 + 1, p.1)), self.dim(p)))
    }

    pub fn hom_range(&self) -> Option<(i32, i32)> {
        let lo = self.dims.keys().map(|&(r, _)| r).min()?;
        let hi = self.dims.keys().map(|&(r, _)| r).max()?;
        Some((lo, hi))
    }

    pub fn q_degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.dims.keys().map(|&(_, d)| d).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Verifies `d . d = 0` on every piece within the cutoff.
    pub fn check_d_squared(&self) -> bool {
        self.dims.keys().all(|&(r, d)| {
            let first = self.diff((r, d));
            let second = self.diff((r + 1, d));
            second.mul(&first).is_zero()
        })
    }

    /// Cohomology dimension per piece: `dim ker d - rank` of the incoming
    /// differential.
    pub fn cohomology_dims(&self) -> BTreeMap<Piece, usize> {
        let mut out = BTreeMap::new();
        for (&(r, d), &dim) in &self.dims {
            let outgoing = self.diff((r, d));
            let incoming = self.diff((r - 1, d));
            let kernel = dim - outgoing.rank();
            let image = incoming.rank();
            assert!(kernel >= image, "d^2 != 0 at ({r},{d})");
            let h = kernel - image;
            if h > 0 {
                out.insert((r, d), h);
            }
        }
        out
    }

    pub fn is_acyclic_up_to(&self) -> bool {
        self.cohomology_dims().is_empty()
    }

    /// Homological shift `M[1]`: term `r` becomes term `r+1` (so
    /// `(M[1])^r = M^{r-1}`) and differentials change sign.
    pub fn shift_hom(&self, by: i32) -> Self {
        let mut out = GradedComplex::new(self.cutoff);
        for (&(r, d), &dim) in &self.dims {
            out.set_dim((r + by, d), dim);
        }
        for (&(r, d), m) in &self.diffs {
            let m2 = if by % 2 == 0 { m.clone() } else { m.neg() };
            out.diffs.insert((r + by, d), m2);
        }
        for (&(r, d), l) in &self.labels {
            out.labels.insert((r + by, d), l.clone());
        }
        for (&r, &s) in &self.shift_offsets {
            out.shift_offsets.insert(r + by, s);
        }
        out
    }

    /// Internal shift `q^s M`: grade `d` becomes `d + s`.
    pub fn shift_q(&self, by: i64) -> Self {
        let mut out = GradedComplex::new(self.cutoff + by);
        for (&(r, d), &dim) in &self.dims {
            out.set_dim((r, d + by), dim);
        }
        for (&(r, d), m) in &self.diffs {
            out.diffs.insert((r, d + by), m.clone());
        }
        for (&(r, d), l) in &self.labels {
            out.labels.insert((r, d + by), l.clone());
        }
        for (&r, &s) in &self.shift_offsets {
            out.shift_offsets.insert(r, s + by);
        }
        out
    }
}

/// A degreewise map of complexes `f: M -> N`, given per piece.
#[derive(Clone, Debug)]
pub struct ComplexMap<F: Scalar> {
    pub mats: BTreeMap<Piece, Mat<F>>,
}

impl<F: Scalar> ComplexMap<F> {
    pub fn new() -> Self {
        ComplexMap {
            mats: BTreeMap::new(),
        }
    }

    pub fn mat(&self, source: &GradedComplex<F>, target: &GradedComplex<F>, p: Piece) -> Mat<F> {
        self.mats
            .get(&p)
            .cloned()
            .unwrap_or_else(|| Mat::zero(target.dim(p), source.dim(p)))
    }

    /// Chain-map property within cutoff: `d_N . f = f . d_M` per piece.
    pub fn is_chain_map(&self, source: &GradedComplex<F>, target: &GradedComplex<F>) -> bool {
        let mut pieces: Vec<Piece> = source.dims.keys().copied().collect();
        pieces.extend(target.dims.keys().copied());
        pieces.sort_unstable();
        pieces.dedup();
        pieces.into_iter().all(|(r, d)| {
            let lhs = target.diff((r, d)).mul(&self.mat(source, target, (r, d)));
            let rhs = self
                .mat(source, target, (r + 1, d))
                .mul(&source.diff((r, d)));
            lhs.rows == rhs.rows && lhs.cols == rhs.cols && lhs.sub_eq(&rhs)
        })
    }
}

impl<F: Scalar> Default for ComplexMap<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> Mat<F> {
    fn sub_eq(&self, rhs: &Mat<F>) -> bool {
        self.a
            .iter()
            .zip(&rhs.a)
            .all(|(r1, r2)| r1.iter().zip(r2).all(|(a, b)| a == b))
    }
}

/// The cone of a chain map: `Cone(f)^r = M^{r+1} (+) N^r` with differential
/// `[-d_M, 0; f, d_N]` in block form.
pub fn cone<F: Scalar>(
    f: &ComplexMap<F>,
    source: &GradedComplex<F>,
    target: &GradedComplex<F>,
) -> Result<GradedComplex<F>, Error> {
    if !f.is_chain_map(source, target) {
        return Err(Error::invalid("cone: not a chain map"));
    }
    let cutoff = source.cutoff.min(target.cutoff);
    let mut c = GradedComplex::new(cutoff);
    let mut pieces: Vec<Piece> = source.dims.keys().map(|&(r, d)| (r - 1, d)).collect();
    pieces.extend(target.dims.keys().copied());
    pieces.sort_unstable();
    pieces.dedup();
    for &(r, d) in &pieces {
        let dim = source.dim((r + 1, d)) + target.dim((r, d));
        c.set_dim((r, d), dim);
    }
    for &(r, d) in &pieces {
        let sm = source.dim((r + 1, d));
        let tn = target.dim((r, d));
        let sm2 = source.dim((r + 2, d));
        let tn2 = target.dim((r + 1, d));
        let rows = sm2 + tn2;
        let cols = sm + tn;
        if rows == 0 || cols == 0 {
            continue;
        }
        let dm = source.diff((r + 1, d));
        let dn = target.diff((r, d));
        let fm = f.mat(source, target, (r + 1, d));
        let mut block = Mat::zero(rows, cols);
        for i in 0..sm2 {
            for j in 0..sm {
                block.a[i][j] = dm.a[i][j].neg();
            }
        }
        for i in 0..tn2 {
            for j in 0..sm {
                block.a[sm2 + i][j] = fm.a[i][j].clone();
            }
            for j in 0..tn {
                block.a[sm2 + i][sm + j] = dn.a[i][j].clone();
            }
        }
        c.diffs.insert((r, d), block);
    }
    Ok(c)
}

/// Quasi-isomorphism test: per piece, the induced map on cohomology must be
/// an isomorphism. Computed directly from kernel bases and image ranks
/// (not via the cone).
pub fn quasi_iso_check<F: Scalar>(
    f: &ComplexMap<F>,
    source: &GradedComplex<F>,
    target: &GradedComplex<F>,
) -> Result<bool, Error> {
    if !f.is_chain_map(source, target) {
        return Err(Error::invalid("quasi_iso_check: not a chain map"));
    }
    let hm = source.cohomology_dims();
    let hn = target.cohomology_dims();
    let mut pieces: Vec<Piece> = hm.keys().chain(hn.keys()).copied().collect();
    pieces.sort_unstable();
    pieces.dedup();
    for p in pieces {
        let dim_hm = hm.get(&p).copied().unwrap_or(0);
        let dim_hn = hn.get(&p).copied().unwrap_or(0);
        if dim_hm != dim_hn {
            return Ok(false);
        }
        if dim_hm == 0 {
            continue;
        }
        let (r, d) = p;
        // columns: f(kernel basis of M) followed by image basis of N
        let ker_m = source.diff(p).kernel_basis();
        let fm = f.mat(source, target, p);
        let incoming_n = target.diff((r - 1, d));
        let mut cols: Vec<Vec<F>> = ker_m.iter().map(|v| fm.apply(v)).collect();
        let mut img_cols: Vec<Vec<F>> = Vec::new();
        for j in 0..incoming_n.cols {
            let col: Vec<F> = (0..incoming_n.rows)
                .map(|i| incoming_n.a[i][j].clone())
                .collect();
            img_cols.push(col);
        }
        let rank_img = transpose_rank(&img_cols);
        cols.extend(img_cols);
        let rank_total = transpose_rank(&cols);
        let induced_rank = rank_total - rank_img;
        if induced_rank != dim_hm {
            return Ok(false);
        }
    }
    Ok(true)
}

fn transpose_rank<F: Scalar>(cols: &[Vec<F>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    Mat::from_rows(cols.to_vec()).rank()
}

/// Gaussian elimination of an invertible block of the differential at one
/// piece `(r, d)`: removes `src_idx` from term `r` and `dst_idx` from term
/// `r+1` and applies the Schur-complement correction to the remaining
/// differential. Cohomology within the cutoff is unchanged.
pub fn gaussian_eliminate<F: Scalar>(
    c: &GradedComplex<F>,
    r: i32,
    d: i64,
    src_idx: &[usize],
    dst_idx: &[usize],
) -> Result<GradedComplex<F>, Error> {
    if src_idx.len() != dst_idx.len() {
        return Err(Error::invalid("gaussian_eliminate: block not square"));
    }
    let dm = c.diff((r, d));
    let block = dm.submatrix(dst_idx, src_idx);
    let Some(block_inv) = block.inverse() else {
        return Err(Error::invalid("gaussian_eliminate: block not invertible"));
    };
    let src_keep: Vec<usize> = (0..c.dim((r, d))).filter(|i| !src_idx.contains(i)).collect();
    let dst_keep: Vec<usize> = (0..c.dim((r + 1, d)))
        .filter(|i| !dst_idx.contains(i))
        .collect();

    let mut out = GradedComplex::new(c.cutoff);
    for (&p, &dim) in &c.dims {
        let nd = if p == (r, d) {
            src_keep.len()
        } else if p == (r + 1, d) {
            dst_keep.len()
        } else {
            dim
        };
        out.set_dim(p, nd);
    }
    out.labels = c.labels.clone();
    out.labels.insert(
        (r, d),
        src_keep
            .iter()
            .filter_map(|&i| c.labels.get(&(r, d)).and_then(|l| l.get(i)).cloned())
            .collect(),
    );
    out.labels.insert(
        (r + 1, d),
        dst_keep
            .iter()
            .filter_map(|&i| c.labels.get(&(r + 1, d)).and_then(|l| l.get(i)).cloned())
            .collect(),
    );
    out.shift_offsets = c.shift_offsets.clone();
    for (&p, m) in &c.diffs {
        if p.1 != d {
            out.diffs.insert(p, m.clone());
            continue;
        }
        if p.0 == r {
            // d' = e - c a^{-1} b on the kept rows/columns
            let a_inv = &block_inv;
            let b = dm.submatrix(dst_idx, &src_keep);
            let cc = dm.submatrix(&dst_keep, src_idx);
            let e = dm.submatrix(&dst_keep, &src_keep);
            let corr = cc.mul(a_inv).mul(&b);
            let new = e.add(&corr.neg());
            if new.rows > 0 && new.cols > 0 {
                out.diffs.insert(p, new);
            }
        } else if p.0 == r - 1 {
            let all_cols: Vec<usize> = (0..m.cols).collect();
            let new = m.submatrix(&src_keep, &all_cols);
            if new.rows > 0 && new.cols > 0 {
                out.diffs.insert(p, new);
            }
        } else if p.0 == r + 1 {
            let all_rows: Vec<usize> = (0..m.rows).collect();
            let new = m.submatrix(&all_rows, &dst_keep);
            if new.rows > 0 && new.cols > 0 {
                out.diffs.insert(p, new);
            }
        } else {
            out.diffs.insert(p, m.clone());
        }
    }
    // prune zero-dimension entries
    out.dims.retain(|_, &mut v| v > 0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rat;

    fn rmat(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
        )
    }

    /// Two-term complex X -> Z at hom degrees 0, 1 in q-degree 0.
    fn two_term(m: Mat<Rat>) -> GradedComplex<Rat> {
        let mut c = GradedComplex::new(10);
        c.set_dim((0, 0), m.cols);
        c.set_dim((1, 0), m.rows);
        c.set_diff((0, 0), m);
        c
    }

    #[test]
    fn cone_of_identity_acyclic() {
        let mut m: GradedComplex<Rat> = GradedComplex::new(10);
        m.set_dim((0, 0), 2);
        let mut f = ComplexMap::new();
        f.mats.insert((0, 0), Mat::identity(2));
        let c = cone(&f, &m, &m).unwrap();
        assert!(c.is_acyclic_up_to());
        assert!(c.check_d_squared());
    }

    #[test]
    fn cone_of_zero_is_direct_sum() {
        let m = two_term(rmat(&[&[1, 0], &[0, 0]]));
        let n = two_term(rmat(&[&[2]]));
        let f = ComplexMap::new();
        let c = cone(&f, &m, &n).unwrap();
        // Cone^r = M^{r+1} (+) N^r
        assert_eq!(c.dim((-1, 0)), 2);
        assert_eq!(c.dim((0, 0)), 2 + 1);
        assert_eq!(c.dim((1, 0)), 1);
        assert!(c.check_d_squared());
        let hm: usize = m.cohomology_dims().values().sum();
        let hn: usize = n.cohomology_dims().values().sum();
        let hc: usize = c.cohomology_dims().values().sum();
        assert_eq!(hc, hm + hn);
    }

    #[test]
    fn cone_rejects_non_chain_map() {
        let m = two_term(rmat(&[&[1]]));
        let n = two_term(rmat(&[&[1]]));
        let mut f = ComplexMap::new();
        // f^0 = id, f^1 = 0: d_N f^0 = d_M but f^1 d_M = 0
        f.mats.insert((0, 0), Mat::identity(1));
        assert!(cone(&f, &m, &n).is_err());
    }

    #[test]
    fn shift_conventions_roundtrip() {
        let m = two_term(rmat(&[&[1, 2], &[0, 1]]));
        let s = m.shift_hom(1);
        // (M[1])^r = M^{r-1}
        assert_eq!(s.dim((1, 0)), m.dim((0, 0)));
        assert_eq!(s.diff((1, 0)), m.diff((0, 0)).neg());
        let back = s.shift_hom(-1);
        assert_eq!(back.diff((0, 0)), m.diff((0, 0)));
        let q = m.shift_q(3);
        assert_eq!(q.dim((0, 3)), m.dim((0, 0)));
        let qb = q.shift_q(-3);
        assert_eq!(qb.dim((0, 0)), m.dim((0, 0)));
    }

    #[test]
    fn gaussian_elimination_basics() {
        // X -> Z with an isomorphism: eliminates to the zero complex
        let c = two_term(rmat(&[&[5]]));
        let g = gaussian_eliminate(&c, 0, 0, &[0], &[0]).unwrap();
        assert!(g.dims.is_empty());
        // block diag(iso, d): reduces to Y -> W with differential d
        let c2 = two_term(rmat(&[&[1, 0], &[0, 7]]));
        let g2 = gaussian_eliminate(&c2, 0, 0, &[0], &[0]).unwrap();
        assert_eq!(g2.dim((0, 0)), 1);
        assert_eq!(g2.diff((0, 0)), rmat(&[&[7]]));
        // non-invertible block rejected
        assert!(gaussian_eliminate(&two_term(rmat(&[&[0]])), 0, 0, &[0], &[0]).is_err());
    }

    #[test]
    fn gaussian_elimination_schur_correction() {
        // d = [a b; c e] with a = 1: new differential e - c a^{-1} b
        let c = two_term(rmat(&[&[1, 3], &[2, 5]]));
        let g = gaussian_eliminate(&c, 0, 0, &[0], &[0]).unwrap();
        assert_eq!(g.diff((0, 0)), rmat(&[&[-1]]));
        let before = c.cohomology_dims();
        let after = g.cohomology_dims();
        assert_eq!(before, after);
    }

    #[test]
    fn quasi_iso_on_cohomology() {
        // M: 0 -> K -> 0 at degree 0; N: K -(1)-> K (+) K-summand...
        let mut m: GradedComplex<Rat> = GradedComplex::new(10);
        m.set_dim((0, 0), 1);
        // N: term0 = K^2, term1 = K, differential [0 1]
        let mut n: GradedComplex<Rat> = GradedComplex::new(10);
        n.set_dim((0, 0), 2);
        n.set_dim((1, 0), 1);
        n.set_diff((0, 0), rmat(&[&[0, 1]]));
        let mut f = ComplexMap::new();
        f.mats.insert((0, 0), rmat(&[&[1], &[0]]));
        assert!(f.is_chain_map(&m, &n));
        assert!(quasi_iso_check(&f, &m, &n).unwrap());
        let g = ComplexMap::new();
        assert!(!quasi_iso_check(&g, &m, &n).unwrap());
    }
}
