//! Symmetric group combinatorics: lengths, reduced words, longest elements
//! of interval subgroups, minimal coset representatives and the block swap.
//!
//! Permutations are stored in one-line notation with 1-based values:
//! `images[i-1] = w(i)`. Products compose as functions, `(u v)(i) = u(v(i))`.

use crate::error::Error;
use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (1..=n as u8).collect(),
        }
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(Error::invalid(format!("not a permutation: {images:?}")));
            }
            seen[v as usize] = true;
        }
        Ok(Perm { images })
    }

    /// The simple transposition `s_i` swapping `i` and `i+1`, `1 <= i < n`.
    pub fn simple(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} undefined in S_{n}");
        let mut images: Vec<u8> = (1..=n as u8).collect();
        images.swap(i - 1, i);
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// `w(i)` with 1-based `i`.
    pub fn map(&self, i: usize) -> usize {
        self.images[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Function composition: `(self * rhs)(i) = self(rhs(i))`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        assert_eq!(self.n(), rhs.n());
        Perm {
            images: (1..=self.n()).map(|i| self.images[rhs.map(i) - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.n()];
        for i in 1..=self.n() {
            images[self.map(i) - 1] = i as u8;
        }
        Perm { images }
    }

    /// Coxeter length = inversion count.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut l = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    l += 1;
                }
            }
        }
        l
    }

    /// A reduced word `[i_1, ..., i_r]` with `w = s_{i_1} ... s_{i_r}`,
    /// obtained by repeatedly stripping a descent on the right.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::new();
        loop {
            let Some(i) = (1..w.n()).find(|&i| w.map(i) > w.map(i + 1)) else {
                break;
            };
            // w = (w s_i) s_i and l(w s_i) = l(w) - 1
            w.images.swap(i - 1, i);
            word.push(i);
        }
        word.reverse();
        word
    }

    pub fn from_word(word: &[usize], n: usize) -> Perm {
        let mut w = Perm::identity(n);
        for &i in word {
            w = w.compose(&Perm::simple(i, n));
        }
        w
    }

    /// Embed into a larger symmetric group, fixing the new letters.
    pub fn embed(&self, n: usize) -> Perm {
        assert!(n >= self.n());
        let mut images = self.images.clone();
        images.extend(self.n() as u8 + 1..=n as u8);
        Perm { images }
    }

    /// Conjugate-free window shift: acts on `offset+1 ..= offset+self.n()`
    /// inside `S_n`, fixing everything else.
    pub fn translate(&self, offset: usize, n: usize) -> Perm {
        assert!(offset + self.n() <= n);
        let mut images: Vec<u8> = (1..=n as u8).collect();
        for i in 1..=self.n() {
            images[offset + i - 1] = (self.map(i) + offset) as u8;
        }
        Perm { images }
    }

    /// All permutations of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images: Vec<u8> = (1..=n as u8).collect();
        loop {
            out.push(Perm {
                images: images.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        if n == 0 {
            return vec![Perm { images: vec![] }];
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Formats a reduced word as "s2*s1"; empty word prints "1".
pub fn word_string(word: &[usize]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    word.iter()
        .map(|i| format!("s{i}"))
        .collect::<Vec<_>>()
        .join("*")
}

/// Longest element of the interval subgroup on positions `k ..= l` inside
/// `S_n`: reverses that window. Degenerate windows (`k > l`) give the
/// identity.
pub fn longest_element(k: usize, l: usize, n: usize) -> Result<Perm, Error> {
    if k < 1 || l > n {
        return Err(Error::invalid(format!(
            "window [{k},{l}] out of range 1..={n}"
        )));
    }
    let mut images: Vec<u8> = (1..=n as u8).collect();
    if k <= l {
        images[k - 1..l].reverse();
    }
    Ok(Perm { images })
}

/// Minimal length representatives of the left cosets `w S_{[k,m]}` in `S_m`:
/// exactly the permutations increasing on positions `k ..= m`. Degenerate
/// `k >= m` gives all of `S_m` (the subgroup is trivial); `k = 1` gives only
/// the identity.
pub fn min_coset_reps(k: usize, m: usize) -> Vec<Perm> {
    Perm::all(m)
        .into_iter()
        .filter(|w| {
            (k.max(1)..m).all(|i| w.map(i) < w.map(i + 1))
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CosetFilter {
    Equal,
    AtLeast,
    Less,
}

/// Filters coset representatives by the value `w(m)`.
pub fn coset_filter(reps: &[Perm], m: usize, u: usize, mode: CosetFilter) -> Vec<Perm> {
    reps.iter()
        .filter(|w| match mode {
            CosetFilter::Equal => w.map(m) == u,
            CosetFilter::AtLeast => w.map(m) >= u,
            CosetFilter::Less => w.map(m) < u,
        })
        .cloned()
        .collect()
}

/// The block swap sending `i` to `i + n - k` for `i <= k` and to `i - k`
/// otherwise; its length is `k (n - k)`.
pub fn sigma_k(n: usize, k: usize) -> Perm {
    assert!(k <= n);
    let images = (1..=n)
        .map(|i| if i <= k { (i + n - k) as u8 } else { (i - k) as u8 })
        .collect();
    Perm { images }
}

/// Product in the nil Coxeter monoid: `u v` when lengths add, else `None`
/// (the zero of the monoid).
pub fn nil_coxeter_product(u: &Perm, v: &Perm) -> Option<Perm> {
    let uv = u.compose(v);
    if uv.length() == u.length() + v.length() {
        Some(uv)
    } else {
        None
    }
}
