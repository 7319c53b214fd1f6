//! Characters of (Z/p^c)^x with values in a coefficient ring.

use super::QExpError;
use crate::numtheory::arith::{gcd, is_prime, pow_mod, primitive_root};
use crate::numtheory::ring::Ring;
use crate::numtheory::{Zp, ZpCtx, Q};

/// Largest supported modulus p^c.
pub const MAX_CHAR_MODULUS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueCharacter<R: Ring> {
    pub p: u64,
    pub c: u32,
    pub modulus: u64,
    /// Value at each residue mod p^c; `None` at non-units.
    values: Vec<Option<R>>,
    pub label: String,
}

fn modulus_of(p: u64, c: u32) -> Result<u64, QExpError> {
    if !is_prime(p) {
        return Err(QExpError::InvalidCharacter(format!("{p} is not prime")));
    }
    p.checked_pow(c)
        .filter(|&m| m <= MAX_CHAR_MODULUS)
        .ok_or_else(|| QExpError::InvalidCharacter(format!("modulus {p}^{c} too large")))
}

impl<R: Ring> ResidueCharacter<R> {
    pub fn trivial(ctx: &R::Ctx, p: u64, c: u32) -> Result<Self, QExpError> {
        let modulus = modulus_of(p, c)?;
        let values = (0..modulus).map(|a| (a % p != 0).then(|| R::one_in(ctx))).collect();
        Ok(ResidueCharacter { p, c, modulus, values, label: "trivial".into() })
    }

    /// Build from an explicit function on units, checking multiplicativity.
    pub fn from_fn(p: u64, c: u32, label: &str, f: impl Fn(u64) -> R) -> Result<Self, QExpError> {
        let modulus = modulus_of(p, c)?;
        let values: Vec<Option<R>> = (0..modulus).map(|a| (a % p != 0).then(|| f(a))).collect();
        let ch = ResidueCharacter { p, c, modulus, values, label: label.into() };
        ch.check_multiplicative()?;
        Ok(ch)
    }

    fn check_multiplicative(&self) -> Result<(), QExpError> {
        let g = self.generator();
        let vg = self.values[g as usize].clone().ok_or_else(|| QExpError::InvalidCharacter("no generator value".into()))?;
        // A map on a cyclic group is a character iff it is determined by a root of unity
        // at a generator; for p = 2 check all pairs instead.
        if self.p == 2 {
            for a in (1..self.modulus).step_by(2) {
                for b in (1..self.modulus).step_by(2) {
                    let lhs = self.eval(a * b % self.modulus);
                    let rhs = self.eval(a).mul(&self.eval(b));
                    if lhs != rhs {
                        return Err(QExpError::InvalidCharacter("not multiplicative".into()));
                    }
                }
            }
            return Ok(());
        }
        let mut x = 1u64;
        let mut v = R::one_in(&vg.ctx());
        let order = self.modulus / self.p * (self.p - 1);
        for _ in 0..order {
            if self.values[x as usize].as_ref() != Some(&v) {
                return Err(QExpError::InvalidCharacter("not multiplicative".into()));
            }
            x = x * g % self.modulus;
            v = v.mul(&vg);
        }
        if v != R::one_in(&vg.ctx()) {
            return Err(QExpError::InvalidCharacter("value at generator has wrong order".into()));
        }
        Ok(())
    }

    /// A generator of (Z/p^c)^x for odd p (for p = 2 returns 3).
    pub fn generator(&self) -> u64 {
        if self.p == 2 {
            return if self.modulus > 2 { 3 % self.modulus } else { 1 };
        }
        let g = primitive_root(self.p);
        if self.c >= 2 && pow_mod(g, self.p - 1, self.p * self.p) == 1 {
            g + self.p
        } else {
            g
        }
    }

    /// chi(n), zero at non-units.
    pub fn eval(&self, n: u64) -> R {
        match &self.values[(n % self.modulus) as usize] {
            Some(v) => v.clone(),
            None => {
                let any = self.values[1].as_ref().expect("1 is a unit");
                R::zero_in(&any.ctx())
            }
        }
    }

    pub fn eval_i64(&self, n: i64) -> R {
        self.eval(n.rem_euclid(self.modulus as i64) as u64)
    }

    pub fn is_trivial(&self) -> bool {
        let one = self.values[1].clone().unwrap();
        self.values.iter().all(|v| v.as_ref().is_none_or(|x| *x == one))
    }

    /// Smallest c' such that chi factors through (Z/p^c')^x.
    pub fn conductor_exponent(&self) -> u32 {
        if self.is_trivial() {
            return 0;
        }
        for c in 1..self.c {
            let m = self.p.pow(c);
            let ok = (1..self.modulus).filter(|a| gcd(*a, self.p) == 1 && a % m == 1).all(|a| self.eval(a) == self.eval(1));
            if ok {
                return c;
            }
        }
        self.c
    }

    pub fn mul(&self, o: &Self) -> Result<Self, QExpError> {
        if self.p != o.p {
            return Err(QExpError::InvalidCharacter("different primes".into()));
        }
        let (big, small) = if self.c >= o.c { (self, o) } else { (o, self) };
        let values = (0..big.modulus)
            .map(|a| big.values[a as usize].as_ref().map(|v| v.mul(&small.eval(a))))
            .collect();
        Ok(ResidueCharacter {
            p: big.p,
            c: big.c,
            modulus: big.modulus,
            values,
            label: format!("{}*{}", self.label, o.label),
        })
    }

    pub fn inverse(&self) -> Self {
        let values = self
            .values
            .iter()
            .map(|v| v.as_ref().map(|x| x.inv().expect("character values are units")))
            .collect();
        ResidueCharacter { values, label: format!("({})^-1", self.label), ..self.clone() }
    }
}

impl ResidueCharacter<Zp> {
    /// The j-th power of the Teichmuller character mod p.
    pub fn teichmuller(ctx: ZpCtx, j: i64) -> Result<Self, QExpError> {
        let p = ctx.p;
        let mut ch = ResidueCharacter::from_fn(p, 1, &format!("omega^{j}"), |a| {
            let w = ctx.int(a as i64).teichmuller();
            if j >= 0 {
                w.pow(j as u64)
            } else {
                w.inv().unwrap().pow(j.unsigned_abs())
            }
        })?;
        ch.label = format!("omega^{j}");
        Ok(ch)
    }

    /// Character of conductor dividing p^c sending the standard generator to `value`.
    pub fn from_generator_value(ctx: ZpCtx, c: u32, value: Zp) -> Result<Self, QExpError> {
        let p = ctx.p;
        if p == 2 {
            return Err(QExpError::InvalidCharacter("generator form needs an odd prime".into()));
        }
        let modulus = modulus_of(p, c)?;
        let tmp = ResidueCharacter::<Zp>::trivial(&ctx, p, c)?;
        let g = tmp.generator();
        let mut values = vec![None; modulus as usize];
        let mut x = 1u64;
        let mut v = ctx.one();
        for _ in 0..(modulus / p * (p - 1)) {
            values[x as usize] = Some(v);
            x = x * g % modulus;
            v = v * value;
        }
        if v != ctx.one() {
            return Err(QExpError::InvalidCharacter("generator value has the wrong order".into()));
        }
        Ok(ResidueCharacter { p, c, modulus, values, label: format!("gen->{}", value.r) })
    }
}

impl ResidueCharacter<Q> {
    /// The quadratic character mod an odd prime.
    pub fn legendre(p: u64) -> Result<Self, QExpError> {
        if p == 2 {
            return Err(QExpError::InvalidCharacter("Legendre symbol needs an odd prime".into()));
        }
        ResidueCharacter::from_fn(p, 1, "legendre", |a| {
            crate::numtheory::ring::int(crate::numtheory::arith::legendre(a as i64, p) as i64)
        })
    }
}
