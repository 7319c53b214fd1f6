//! Truncated q-expansions of elliptic modular forms.

use num_rational::BigRational;

use super::character::ResidueCharacter;
use super::QExpError;
use crate::numtheory::ring::Ring;
use crate::numtheory::{Zp, ZpCtx};

/// Largest accepted truncation bound.
pub const MAX_BOUND: usize = 4_000_000;

/// sum_{n <= bound} a_n q^n.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticQExp<R: Ring> {
    pub ctx: R::Ctx,
    pub weight: i32,
    pub level: u64,
    pub character: String,
    /// a_0 .. a_bound.
    pub coeffs: Vec<R>,
}

impl<R: Ring> EllipticQExp<R> {
    pub fn new(ctx: R::Ctx, weight: i32, level: u64, coeffs: Vec<R>) -> Result<Self, QExpError> {
        if coeffs.is_empty() || coeffs.len() > MAX_BOUND + 1 {
            return Err(QExpError::BoundTooLarge(coeffs.len() as u64));
        }
        Ok(EllipticQExp { ctx, weight, level, character: "trivial".into(), coeffs })
    }

    pub fn zero(ctx: R::Ctx, weight: i32, bound: usize) -> Self {
        let z = R::zero_in(&ctx);
        EllipticQExp { ctx, weight, level: 1, character: "trivial".into(), coeffs: vec![z; bound + 1] }
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &R {
        &self.coeffs[n]
    }

    fn with_coeffs(&self, coeffs: Vec<R>) -> Self {
        EllipticQExp { coeffs, ..self.clone() }
    }

    pub fn truncate(&self, bound: usize) -> Self {
        self.with_coeffs(self.coeffs[..=bound.min(self.bound())].to_vec())
    }

    fn check_compatible(&self, o: &Self) -> Result<(), QExpError> {
        if self.ctx != o.ctx {
            return Err(QExpError::RingMismatch);
        }
        Ok(())
    }

    /// Sum, truncated to the smaller bound.
    pub fn add(&self, o: &Self) -> Result<Self, QExpError> {
        self.check_compatible(o)?;
        let b = self.bound().min(o.bound());
        Ok(self.with_coeffs((0..=b).map(|n| self.coeffs[n].add(&o.coeffs[n])).collect()))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, QExpError> {
        self.check_compatible(o)?;
        let b = self.bound().min(o.bound());
        Ok(self.with_coeffs((0..=b).map(|n| self.coeffs[n].sub(&o.coeffs[n])).collect()))
    }

    pub fn scale(&self, c: &R) -> Self {
        self.with_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// U_p: a_n -> a_{pn}; the bound drops to floor(bound/p).
    pub fn hecke_u(&self, p: u64) -> Result<Self, QExpError> {
        let p = p as usize;
        let b = self.bound() / p.max(1);
        if b == 0 || p == 0 {
            return Err(QExpError::BoundTooSmall);
        }
        Ok(self.with_coeffs((0..=b).map(|n| self.coeffs[p * n].clone()).collect()))
    }

    /// V_p: a_n -> a_{n/p} (zero unless p | n); the bound grows to p * bound, capped.
    pub fn hecke_v(&self, p: u64) -> Self {
        let p = p as usize;
        let b = (self.bound() * p).min(MAX_BOUND);
        let z = R::zero_in(&self.ctx);
        self.with_coeffs((0..=b).map(|n| if n % p == 0 { self.coeffs[n / p].clone() } else { z.clone() }).collect())
    }

    /// p-depletion: a_n -> 0 whenever p | n (including n = 0).
    pub fn deplete(&self, p: u64) -> Self {
        let p = p as usize;
        let z = R::zero_in(&self.ctx);
        self.with_coeffs(
            self.coeffs.iter().enumerate().map(|(n, a)| if n % p == 0 { z.clone() } else { a.clone() }).collect(),
        )
    }

    /// T_l for l not dividing the level: a_n -> a_{ln} + chi(l) l^{k-1} a_{n/l}.
    pub fn hecke_t(&self, l: u64, chi_l: &R) -> Result<Self, QExpError> {
        if self.weight < 1 {
            return Err(QExpError::UnsupportedWeight(self.weight));
        }
        let lu = l as usize;
        let b = self.bound() / lu.max(1);
        if b == 0 || lu == 0 {
            return Err(QExpError::BoundTooSmall);
        }
        let lk = R::from_i64_in(&self.ctx, l as i64).pow((self.weight - 1) as u64).mul(chi_l);
        Ok(self.with_coeffs(
            (0..=b)
                .map(|n| {
                    let mut v = self.coeffs[lu * n].clone();
                    if n % lu == 0 {
                        v = v.add(&lk.mul(&self.coeffs[n / lu]));
                    }
                    v
                })
                .collect(),
        ))
    }

    /// a_n -> chi(n) a_n; coefficients at n divisible by p vanish.
    pub fn twist(&self, chi: &ResidueCharacter<R>) -> Self {
        self.with_coeffs(self.coeffs.iter().enumerate().map(|(n, a)| chi.eval(n as u64).mul(a)).collect())
    }

    /// Twist by a power of the norm character. On the classical expansion of the
    /// identity component this only changes the weight bookkeeping label.
    pub fn twist_norm_power(&self, m: i32) -> Self {
        let mut out = self.clone();
        if m != 0 {
            out.character = format!("{}|.|^{m}", self.character);
        }
        out
    }

    /// Serre's derivative q d/dq: a_n -> n a_n, raising the weight by 2.
    pub fn theta(&self) -> Self {
        let mut out =
            self.with_coeffs(self.coeffs.iter().enumerate().map(|(n, a)| a.scale_i64(n as i64)).collect());
        out.weight += 2;
        out
    }
}

impl EllipticQExp<BigRational> {
    /// Reduce a rational expansion into Z/p^m.
    pub fn to_zp(&self, ctx: ZpCtx) -> Result<EllipticQExp<Zp>, QExpError> {
        let coeffs = self.coeffs.iter().map(|q| Zp::from_rational(ctx, q)).collect::<Result<Vec<_>, _>>()?;
        Ok(EllipticQExp { ctx, weight: self.weight, level: self.level, character: self.character.clone(), coeffs })
    }
}

impl EllipticQExp<Zp> {
    /// a_n -> chi(n) omega(n)^j a_n, the Dirichlet twist by chi times a Teichmuller power.
    pub fn twist_teichmuller(&self, chi: &ResidueCharacter<Zp>, j: i64) -> Result<Self, QExpError> {
        let w = ResidueCharacter::teichmuller(self.ctx, j)?;
        Ok(self.twist(&chi.mul(&w)?))
    }
}
