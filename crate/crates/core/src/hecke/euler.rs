//! Euler factors at p built from stabilisation roots.

use serde_json::{json, Value};

use super::HeckeError;
use crate::numtheory::Padic;

/// Roots of the Hecke polynomials at p: (alpha_i, beta_i) at the two primes of
/// the Hilbert form, (alpha_f, beta_f) for the elliptic form, and the weight and
/// conductor exponent of the arithmetic point.
#[derive(Clone, Debug)]
pub struct EulerInputs {
    pub alpha1: Padic,
    pub beta1: Padic,
    pub alpha2: Padic,
    pub beta2: Padic,
    pub alpha_f: Padic,
    pub beta_f: Padic,
    pub weight: i32,
    pub level_exponent: u32,
    pub p: u64,
    pub m: u32,
    /// U_p eigenvalue of the unstabilised-form companion, for xi and zeta.
    pub alpha_f_circ: Option<Padic>,
    /// Values of the central character at the two primes above p.
    pub chi_circ: Option<(Padic, Padic)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub value: Padic,
    pub valuation: Option<i64>,
    pub nonzero: bool,
}

impl Factor {
    fn of(value: Padic) -> Self {
        Factor { value, valuation: value.valuation(), nonzero: !value.is_zero() }
    }

    fn to_json(&self) -> Value {
        json!({"value": self.value.to_string(), "valuation": self.valuation, "nonzero": self.nonzero})
    }
}

/// A p-adic number multiplied by a symbolic power of the Gauss sum.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussTagged {
    pub value: Padic,
    pub gauss_exponent: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactorReport {
    /// 1 - beta_f / alpha_f.
    pub e_fstar: Factor,
    /// prod over a in {alpha1, beta1}, b in {alpha2, beta2} of (1 - a b / beta_f).
    pub e_sp: Factor,
    /// 1 - alpha1 beta1 alpha2 beta2 / beta_f^2.
    pub e_1p: Factor,
    /// (1 - alpha1 alpha2 / alpha_f) / (1 - alpha_f / (alpha1 alpha2 p)).
    pub upsilon_p0: Factor,
    /// ((alpha1 alpha2 / alpha_f) p^(2 - l))^a times G(chi)^-1, for conductor p^a, a >= 1.
    pub upsilon_p: Option<GaussTagged>,
    pub xi: Option<Factor>,
    pub zeta: Option<Factor>,
    /// Why xi is nonzero even when the p-adic computation cannot decide.
    pub xi_reason: Option<String>,
}

const XI_REASON: &str = "each factor is 1 minus an algebraic integer of complex absolute value 1 that is not 1";

fn one(p: u64, m: u32) -> Padic {
    Padic::from_i64(p, m, 1)
}

fn require(name: &str, f: Factor) -> Result<Factor, HeckeError> {
    if f.nonzero {
        Ok(f)
    } else {
        Err(HeckeError::PrecisionExhausted(format!("{name} is zero to the working precision")))
    }
}

pub fn euler_report(i: &EulerInputs) -> Result<EulerFactorReport, HeckeError> {
    let (p, m) = (i.p, i.m);
    let one = one(p, m);
    let e_fstar = require("E(f*)", Factor::of(one.sub(&i.beta_f.div(&i.alpha_f)?)))?;

    let inv_bf = i.beta_f.inv()?;
    let mut sp = one;
    for a in [i.alpha1, i.beta1] {
        for b in [i.alpha2, i.beta2] {
            sp = sp.mul(&one.sub(&a.mul(&b).mul(&inv_bf)));
        }
    }
    let e_sp = require("E_sp", Factor::of(sp))?;
    let prod = i.alpha1.mul(&i.beta1).mul(&i.alpha2).mul(&i.beta2);
    let e_1p = require("E_1p", Factor::of(one.sub(&prod.mul(&inv_bf).mul(&inv_bf))))?;

    let a12 = i.alpha1.mul(&i.alpha2);
    let ratio = a12.div(&i.alpha_f)?;
    let pp = Padic::from_i64(p, m, p as i64);
    let den = one.sub(&i.alpha_f.div(&a12.mul(&pp))?);
    let upsilon_p0 = require("Upsilon(P0)", Factor::of(one.sub(&ratio).div(&den)?))?;
    let upsilon_p = if i.level_exponent > 0 {
        let base = ratio.mul(&pp.pow(2 - i.weight as i64)?);
        Some(GaussTagged { value: base.pow(i.level_exponent as i64)?, gauss_exponent: -1 })
    } else {
        None
    };

    let (xi, zeta, xi_reason) = match i.alpha_f_circ {
        Some(afc) => {
            let xi = i.chi_circ.map(|(c1, c2)| -> Result<Factor, HeckeError> {
                let t1 = one.sub(&afc.mul(&c1).mul(&i.alpha2.div(&i.alpha1)?));
                let t2 = one.sub(&afc.mul(&c2).mul(&i.alpha1.div(&i.alpha2)?));
                Ok(Factor::of(t1.mul(&t2)))
            });
            let xi = xi.transpose()?;
            let z = afc.neg().mul(&one.sub(&i.alpha1.div(&i.alpha2)?.div(&i.alpha_f)?));
            let reason = xi.as_ref().map(|_| XI_REASON.to_string());
            (xi, Some(Factor::of(z)), reason)
        }
        None => (None, None, None),
    };

    Ok(EulerFactorReport { e_fstar, e_sp, e_1p, upsilon_p0, upsilon_p, xi, zeta, xi_reason })
}

impl EulerFactorReport {
    pub fn to_json(&self) -> Value {
        json!({
            "E_fstar": self.e_fstar.to_json(),
            "E_sp": self.e_sp.to_json(),
            "E_1p": self.e_1p.to_json(),
            "Upsilon_P0": self.upsilon_p0.to_json(),
            "Upsilon_P": self.upsilon_p.as_ref().map(|g| json!({"value": g.value.to_string(), "gauss_exponent": g.gauss_exponent})),
            "xi": self.xi.as_ref().map(Factor::to_json),
            "zeta": self.zeta.as_ref().map(Factor::to_json),
            "xi_reason": self.xi_reason,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{Zp, ZpCtx};

    fn pz(ctx: ZpCtx, n: i64) -> Padic {
        Padic::from_zp(&ctx.int(n))
    }

    fn weight_one_inputs(p: u64, m: u32) -> EulerInputs {
        let ctx = ZpCtx::new(p, m).unwrap();
        EulerInputs {
            alpha1: pz(ctx, 2),
            beta1: pz(ctx, 3),
            alpha2: pz(ctx, 4),
            beta2: pz(ctx, 5),
            alpha_f: pz(ctx, 6),
            beta_f: pz(ctx, p as i64 * 3),
            weight: 1,
            level_exponent: 0,
            p,
            m,
            alpha_f_circ: Some(pz(ctx, 6)),
            chi_circ: Some((pz(ctx, 1), pz(ctx, 1))),
        }
    }

    #[test]
    fn weight_one_valuations() {
        let r = euler_report(&weight_one_inputs(7, 4)).unwrap();
        assert_eq!(r.e_fstar.valuation, Some(0));
        assert_eq!(r.e_sp.valuation, Some(-4));
        assert_eq!(r.e_1p.valuation, Some(-2));
        assert!(r.e_fstar.nonzero && r.e_sp.nonzero && r.e_1p.nonzero);
        assert!(r.xi_reason.is_some());
    }

    #[test]
    fn upsilon_p0_by_substitution() {
        // a1 = 2, a2 = 4, af = 6, p = 7: (1 - 8/6) / (1 - 6/56) = (-1/3) / (25/28) = -28/75.
        let r = euler_report(&weight_one_inputs(7, 4)).unwrap();
        let ctx = ZpCtx::new(7, 4).unwrap();
        let want = Zp::from_i64(ctx, -28) * ctx.int(75).inv().unwrap();
        assert_eq!(r.upsilon_p0.valuation, Some(1));
        assert_eq!(r.upsilon_p0.value.to_zp(ctx).unwrap(), want);
    }

    #[test]
    fn zero_factor_is_reported() {
        let mut i = weight_one_inputs(7, 4);
        i.beta_f = i.alpha_f;
        assert!(matches!(euler_report(&i), Err(HeckeError::PrecisionExhausted(_))));
    }
}
