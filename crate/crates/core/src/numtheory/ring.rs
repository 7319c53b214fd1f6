//! Coefficient rings shared by polynomials, matrices and q-expansions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;

use super::zp::{Zp, ZpCtx};

/// A commutative ring whose elements carry their own context (e.g. modulus).
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn from_i64_in(ctx: &Self::Ctx, n: i64) -> Self;
    /// Image of an exact rational; `None` if the denominator is not invertible.
    fn from_rational_in(ctx: &Self::Ctx, q: &BigRational) -> Option<Self>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when it exists.
    fn inv(&self) -> Option<Self>;

    fn one_in(ctx: &Self::Ctx) -> Self {
        Self::from_i64_in(ctx, 1)
    }
    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
    fn scale_i64(&self, n: i64) -> Self {
        self.mul(&Self::from_i64_in(&self.ctx(), n))
    }
}

pub type Q = BigRational;

impl Ring for BigRational {
    type Ctx = ();
    fn ctx(&self) {}
    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }
    fn from_i64_in(_: &(), n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational_in(_: &(), q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Ring for Zp {
    type Ctx = ZpCtx;
    fn ctx(&self) -> ZpCtx {
        self.ctx
    }
    fn zero_in(ctx: &ZpCtx) -> Self {
        Zp::new(*ctx, 0)
    }
    fn from_i64_in(ctx: &ZpCtx, n: i64) -> Self {
        Zp::from_i64(*ctx, n)
    }
    fn from_rational_in(ctx: &ZpCtx, q: &BigRational) -> Option<Self> {
        Zp::from_rational(*ctx, q).ok()
    }
    fn add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn is_zero(&self) -> bool {
        self.r == 0
    }
    fn inv(&self) -> Option<Self> {
        Zp::inv(self).ok()
    }
}

/// Parse "a", "-a" or "a/b" into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    if n.is_empty() || d.is_empty() || n.len() > 4096 || d.len() > 4096 {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Canonical text form of a rational: "n" or "n/d" with d > 0.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        debug_assert!(q.denom().is_positive());
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
