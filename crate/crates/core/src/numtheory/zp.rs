//! Residues modulo p^m: the integral p-adic numbers at fixed absolute precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use super::NumError;

/// Prime and precision of a residue ring Z/p^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ZpCtx {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl ZpCtx {
    /// Requires `p` prime, `m >= 1` and `p^m < 2^62`.
    pub fn new(p: u64, m: u32) -> Result<Self, NumError> {
        if !is_prime(p) {
            return Err(NumError::NotPrime(p));
        }
        if m == 0 {
            return Err(NumError::PrecisionExhausted("precision must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..m {
            modulus = modulus
                .checked_mul(p)
                .filter(|&x| x < (1u64 << 62))
                .ok_or(NumError::PrecisionTooLarge { p, m })?;
        }
        Ok(ZpCtx { p, m, modulus })
    }

    /// The same prime at a smaller precision.
    pub fn with_precision(&self, m: u32) -> Result<Self, NumError> {
        ZpCtx::new(self.p, m)
    }

    pub fn zero(&self) -> Zp {
        Zp::new(*self, 0)
    }
    pub fn one(&self) -> Zp {
        Zp::new(*self, 1)
    }
    pub fn int(&self, n: i64) -> Zp {
        Zp::from_i64(*self, n)
    }
}

/// An element of Z/p^m, stored as its least non-negative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zp {
    pub ctx: ZpCtx,
    pub r: u64,
}

impl fmt::Debug for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.r, self.ctx.p, self.ctx.m)
    }
}

impl fmt::Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)
    }
}

impl Zp {
    pub fn new(ctx: ZpCtx, r: u64) -> Self {
        Zp { ctx, r: r % ctx.modulus }
    }

    pub fn from_i64(ctx: ZpCtx, n: i64) -> Self {
        Zp { ctx, r: (n as i128).rem_euclid(ctx.modulus as i128) as u64 }
    }

    pub fn from_bigint(ctx: ZpCtx, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(ctx.modulus));
        Zp { ctx, r: r.to_u64().expect("residue fits") }
    }

    /// Image of a rational with denominator prime to p.
    pub fn from_rational(ctx: ZpCtx, q: &BigRational) -> Result<Self, NumError> {
        let den = Zp::from_bigint(ctx, q.denom());
        let inv = den.inv().map_err(|_| NumError::DenominatorDivisibleByP(ctx.p))?;
        Ok(Zp::from_bigint(ctx, q.numer()) * inv)
    }

    /// Signed representative in (-p^m/2, p^m/2].
    pub fn centered(&self) -> i64 {
        let r = self.r as i64;
        if self.r > self.ctx.modulus / 2 {
            r - self.ctx.modulus as i64
        } else {
            r
        }
    }

    /// p-adic valuation of the residue; `None` for zero (valuation >= m).
    pub fn valuation(&self) -> Option<u32> {
        if self.r == 0 {
            return None;
        }
        let mut v = 0;
        let mut r = self.r;
        while r % self.ctx.p == 0 {
            r /= self.ctx.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self) -> bool {
        self.r % self.ctx.p != 0
    }

    pub fn inv(&self) -> Result<Self, NumError> {
        inv_mod(self.r, self.ctx.modulus)
            .map(|r| Zp { ctx: self.ctx, r })
            .ok_or(NumError::NotUnit)
    }

    pub fn pow(&self, e: u64) -> Self {
        Zp { ctx: self.ctx, r: pow_mod(self.r, e, self.ctx.modulus) }
    }

    /// Reduce to a lower precision.
    pub fn truncate(&self, m: u32) -> Result<Self, NumError> {
        let c = self.ctx.with_precision(m.min(self.ctx.m))?;
        Ok(Zp::new(c, self.r))
    }

    /// Divide by p^k when the residue is divisible by it; the result is only
    /// meaningful modulo p^(m-k) and is returned in the ring of that precision.
    pub fn div_p_pow(&self, k: u32) -> Result<Self, NumError> {
        if k >= self.ctx.m {
            return Err(NumError::PrecisionExhausted(format!(
                "dividing by p^{k} at precision {}",
                self.ctx.m
            )));
        }
        let pk = self.ctx.p.pow(k);
        if self.r % pk != 0 {
            return Err(NumError::NotDivisible);
        }
        let c = self.ctx.with_precision(self.ctx.m - k)?;
        Ok(Zp::new(c, self.r / pk))
    }

    /// Teichmuller representative: the root of unity congruent to self mod p.
    pub fn teichmuller(&self) -> Self {
        if !self.is_unit() {
            return self.ctx.zero();
        }
        let p = self.ctx.p;
        let mut x = *self;
        // x -> x^p converges to the Teichmuller lift; m steps suffice.
        for _ in 0..self.ctx.m {
            x = x.pow(p);
        }
        x
    }
}

fn check(a: &Zp, b: &Zp) {
    assert!(a.ctx == b.ctx, "mixing residues of different precisions: {:?} vs {:?}", a.ctx, b.ctx);
}

impl Add for Zp {
    type Output = Zp;
    fn add(self, o: Zp) -> Zp {
        check(&self, &o);
        let s = self.r as u128 + o.r as u128;
        Zp { ctx: self.ctx, r: (s % self.ctx.modulus as u128) as u64 }
    }
}

impl Sub for Zp {
    type Output = Zp;
    fn sub(self, o: Zp) -> Zp {
        check(&self, &o);
        let m = self.ctx.modulus;
        Zp { ctx: self.ctx, r: if self.r >= o.r { self.r - o.r } else { m - (o.r - self.r) } }
    }
}

impl Mul for Zp {
    type Output = Zp;
    fn mul(self, o: Zp) -> Zp {
        check(&self, &o);
        Zp { ctx: self.ctx, r: mul_mod(self.r, o.r, self.ctx.modulus) }
    }
}

impl Neg for Zp {
    type Output = Zp;
    fn neg(self) -> Zp {
        Zp { ctx: self.ctx, r: if self.r == 0 { 0 } else { self.ctx.modulus - self.r } }
    }
}
