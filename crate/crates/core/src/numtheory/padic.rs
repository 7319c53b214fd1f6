//! p-adic numbers with explicit valuation and tracked precision.
//!
//! A value is `p^val * unit + O(p^(val + rel))` with `unit` a p-adic unit known
//! modulo `p^rel`. `rel == 0` encodes a value indistinguishable from zero,
//! known only to be `O(p^val)`. Negative valuations are allowed, so Euler
//! factors with poles at p can be represented without leaving the type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

use super::arith::{inv_mod, mul_mod};
use super::zp::{Zp, ZpCtx};
use super::NumError;

#[derive(Clone, Copy, Debug)]
pub struct Padic {
    p: u64,
    val: i64,
    unit: u64,
    rel: u32,
}

fn max_rel(p: u64) -> u32 {
    let mut k = 0;
    let mut x: u64 = 1;
    while let Some(y) = x.checked_mul(p).filter(|&y| y < (1u64 << 62)) {
        x = y;
        k += 1;
    }
    k
}

fn pow_u(p: u64, k: u32) -> u64 {
    p.pow(k)
}

impl Padic {
    /// `O(p^abs)`.
    pub fn zero(p: u64, abs: i64) -> Self {
        Padic { p, val: abs, unit: 0, rel: 0 }
    }

    fn build(p: u64, val: i64, residue: u64, rel: u32) -> Self {
        // `residue` is p^k * unit known modulo p^rel; normalise.
        if rel == 0 || residue % pow_u(p, rel) == 0 {
            return Padic::zero(p, val + rel as i64);
        }
        let mut r = residue % pow_u(p, rel);
        let mut v = 0u32;
        while r % p == 0 {
            r /= p;
            v += 1;
        }
        let rel2 = rel - v;
        Padic { p, val: val + v as i64, unit: r % pow_u(p, rel2), rel: rel2 }
    }

    /// Embed an integral residue; its absolute precision is that of the ring.
    pub fn from_zp(z: &Zp) -> Self {
        Padic::build(z.ctx.p, 0, z.r, z.ctx.m)
    }

    /// An exact integer, kept to relative precision `m`.
    pub fn from_int(p: u64, m: u32, n: &BigInt) -> Self {
        Padic::from_rational(p, m, &BigRational::from_integer(n.clone()))
    }

    pub fn from_i64(p: u64, m: u32, n: i64) -> Self {
        Padic::from_int(p, m, &BigInt::from(n))
    }

    /// An exact rational, kept to relative precision `m` (capped by word size).
    pub fn from_rational(p: u64, m: u32, q: &BigRational) -> Self {
        let m = m.min(max_rel(p));
        if q.is_zero() {
            return Padic::zero(p, m as i64);
        }
        let bp = BigInt::from(p);
        let (mut n, mut d) = (q.numer().abs(), q.denom().clone());
        let mut v = 0i64;
        while (&n % &bp).is_zero() {
            n /= &bp;
            v += 1;
        }
        while (&d % &bp).is_zero() {
            d /= &bp;
            v -= 1;
        }
        let modulus = pow_u(p, m);
        let bm = BigInt::from(modulus);
        let nr = n.mod_floor(&bm).to_u64().unwrap();
        let dr = d.mod_floor(&bm).to_u64().unwrap();
        let mut u = mul_mod(nr, inv_mod(dr, modulus).unwrap(), modulus);
        if q.is_negative() {
            u = (modulus - u) % modulus;
        }
        Padic { p, val: v, unit: u, rel: m }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Exact valuation, or `None` when the value is indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        (self.rel > 0).then_some(self.val)
    }

    /// The power of p up to which the value is determined.
    pub fn abs_precision(&self) -> i64 {
        self.val + self.rel as i64
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel
    }

    /// Unit part modulo p^rel.
    pub fn unit_part(&self) -> u64 {
        self.unit
    }

    fn same_prime(&self, o: &Padic) {
        assert_eq!(self.p, o.p, "mixing p-adic numbers for different primes");
    }

    pub fn add(&self, o: &Padic) -> Padic {
        self.same_prime(o);
        let cap = self.abs_precision().min(o.abs_precision());
        let w = self.val.min(o.val);
        if cap <= w {
            return Padic::zero(self.p, cap);
        }
        let span = (cap - w) as u32;
        let modulus = pow_u(self.p, span);
        let term = |x: &Padic| -> u64 {
            if x.rel == 0 || x.val >= cap {
                0
            } else {
                mul_mod(x.unit % modulus, pow_u(x.p, (x.val - w) as u32), modulus)
            }
        };
        let s = (term(self) as u128 + term(o) as u128) % modulus as u128;
        Padic::build(self.p, w, s as u64, span)
    }

    pub fn neg(&self) -> Padic {
        if self.rel == 0 {
            return *self;
        }
        let m = pow_u(self.p, self.rel);
        Padic { unit: (m - self.unit) % m, ..*self }
    }

    pub fn sub(&self, o: &Padic) -> Padic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Padic) -> Padic {
        self.same_prime(o);
        match (self.rel, o.rel) {
            (0, 0) => Padic::zero(self.p, self.val + o.val),
            (0, _) => Padic::zero(self.p, self.val + o.val),
            (_, 0) => Padic::zero(self.p, self.val + o.val),
            _ => {
                let rel = self.rel.min(o.rel);
                let m = pow_u(self.p, rel);
                Padic { p: self.p, val: self.val + o.val, unit: mul_mod(self.unit % m, o.unit % m, m), rel }
            }
        }
    }

    pub fn inv(&self) -> Result<Padic, NumError> {
        if self.rel == 0 {
            return Err(NumError::PrecisionExhausted(format!(
                "inverting a value indistinguishable from zero (O({}^{}))",
                self.p, self.val
            )));
        }
        let m = pow_u(self.p, self.rel);
        Ok(Padic { p: self.p, val: -self.val, unit: inv_mod(self.unit, m).unwrap(), rel: self.rel })
    }

    pub fn div(&self, o: &Padic) -> Result<Padic, NumError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Padic, NumError> {
        let base = if e < 0 { self.inv()? } else { *self };
        let mut acc = Padic::from_i64(self.p, max_rel(self.p), 1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// The residue in Z/p^m; fails when the value is not integral or not known to p^m.
    pub fn to_zp(&self, ctx: ZpCtx) -> Result<Zp, NumError> {
        assert_eq!(self.p, ctx.p);
        if self.rel == 0 {
            if self.val >= ctx.m as i64 {
                return Ok(ctx.zero());
            }
            return Err(NumError::PrecisionExhausted(format!(
                "value known only to O({}^{}) but precision {} requested",
                self.p, self.val, ctx.m
            )));
        }
        if self.val < 0 {
            return Err(NumError::NotIntegral);
        }
        if self.abs_precision() < ctx.m as i64 {
            return Err(NumError::PrecisionExhausted(format!(
                "value known to O({}^{}) but precision {} requested",
                self.p,
                self.abs_precision(),
                ctx.m
            )));
        }
        if self.val >= ctx.m as i64 {
            return Ok(ctx.zero());
        }
        Ok(Zp::new(ctx, self.unit) * ctx.int(self.p as i64).pow(self.val as u64))
    }

    /// Equality at the common precision of both operands.
    pub fn eq_at_precision(&self, o: &Padic) -> bool {
        self.sub(o).is_zero()
    }
}

impl PartialEq for Padic {
    fn eq(&self, o: &Padic) -> bool {
        self.p == o.p && self.eq_at_precision(o)
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            write!(f, "O({}^{})", self.p, self.val)
        } else if self.val == 0 {
            write!(f, "{} + O({}^{})", self.unit, self.p, self.rel)
        } else {
            write!(f, "{}^{} * {} + O({}^{})", self.p, self.val, self.unit, self.p, self.abs_precision())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::ring::rat;

    #[test]
    fn valuations_and_precision() {
        let x = Padic::from_rational(7, 4, &rat(98, 3));
        assert_eq!(x.valuation(), Some(2));
        let y = Padic::from_rational(7, 4, &rat(1, 49));
        assert_eq!(y.valuation(), Some(-2));
        assert_eq!(x.mul(&y).valuation(), Some(0));
        let one = Padic::from_i64(7, 4, 1);
        let z = one.sub(&one);
        assert!(z.is_zero());
        assert!(z.inv().is_err());
        assert_eq!(z, Padic::zero(7, 10));
    }

    #[test]
    fn pole_arithmetic() {
        // 1 - u/(7v) has valuation -1 for units u, v.
        let p = 7;
        let beta = Padic::from_i64(p, 4, 14);
        let u = Padic::from_i64(p, 4, 3);
        let e = Padic::from_i64(p, 4, 1).sub(&u.div(&beta).unwrap());
        assert_eq!(e.valuation(), Some(-1));
        let back = e.mul(&beta);
        assert_eq!(back, Padic::from_i64(p, 4, 14 - 3));
    }

    #[test]
    fn to_zp_round_trip() {
        let c = ZpCtx::new(5, 3).unwrap();
        for n in 0..125 {
            let z = c.int(n);
            assert_eq!(Padic::from_zp(&z).to_zp(c).unwrap(), z);
        }
        assert!(Padic::from_rational(5, 3, &rat(1, 5)).to_zp(c).is_err());
    }
}
