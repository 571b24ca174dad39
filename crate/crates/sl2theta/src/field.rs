//! Exact coefficient fields for all linear algebra in this crate.
//!
//! Every rank, kernel and span computation is done over an exact field:
//! arbitrary-precision rationals by default, or a prime field `F_p` selected
//! at configuration time for speed. The prime must exceed the largest `n`
//! in play so that no small-characteristic accident degrades ranks.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// An exact field element. All operations are total except `inv` on zero,
/// which panics (callers must test `is_zero` first).
pub trait Scalar:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn from_int(v: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Arbitrary-precision rational numbers.
#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn from_bigint(v: BigInt) -> Self {
        Rat(BigRational::from_integer(v))
    }

    /// Exact integer value, if the denominator is 1.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.0.denom().is_one() {
            Some(self.0.numer().clone())
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rat(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rat(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rat(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rat(-self.0.clone())
    }
    fn inv(&self) -> Self {
        assert!(!self.0.is_zero(), "inverse of zero");
        Rat(self.0.recip())
    }
    fn from_int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }
}

/// Size estimate used by pivoting heuristics: digits of numerator+denominator.
pub fn rat_size(r: &Rat) -> usize {
    r.0.numer().abs().to_string().len() + r.0.denom().to_string().len()
}

/// Prime field with compile-time modulus. `P` must be prime and fit in `u32`
/// so that products never overflow `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Fp<P> {
    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Scalar::mul(&acc, &base);
            }
            base = Scalar::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp(if self.0 >= rhs.0 {
            self.0 - rhs.0
        } else {
            self.0 + P - rhs.0
        })
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp(self.0 * rhs.0 % P)
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(P - 2)
    }
    fn from_int(v: i64) -> Self {
        let m = v.rem_euclid(P as i64) as u64;
        Fp(m)
    }
}

/// The declared-safe prime menu for `--field prime:p`.
pub const SAFE_PRIMES: &[u64] = &[32003, 65537, 1000003];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let a = Rat::from_int(3);
        let b = Rat::from_int(-7);
        assert_eq!(a.add(&b), Rat::from_int(-4));
        assert_eq!(a.mul(&b), Rat::from_int(-21));
        assert_eq!(a.mul(&a.inv()), Rat::one());
        assert!(Rat::zero().is_zero());
    }

    #[test]
    fn prime_field_ops() {
        type F = Fp<32003>;
        let a = F::from_int(-1);
        assert_eq!(a, Fp(32002));
        let b = F::from_int(12345);
        assert_eq!(b.mul(&b.inv()), F::one());
        assert_eq!(a.add(&F::one()), F::zero());
    }
}
