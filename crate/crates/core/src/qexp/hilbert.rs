//! Hilbert modular q-expansions over a real quadratic field, identity component.
//!
//! Coefficients are indexed by the totally positive nu in the inverse different
//! with Tr(nu) <= T and stored densely in the order of `TraceDomain`. A key
//! (x, n) stands for nu with nu sqrt(D) = x + n w.

use std::sync::Arc;

use super::character::ResidueCharacter;
use super::elliptic::EllipticQExp;
use super::QExpError;
use crate::numtheory::ring::Ring;
use crate::numtheory::{Zp, ZpCtx};
use crate::realquad::{
    narrow_generator, residue_map, NarrowOptions, NarrowVerdict, Place, QuadElem, RealQuadField, ResidueMap,
    TraceDomain,
};

/// Upper limit on the number of stored coefficients.
pub const MAX_KEYS: usize = 4_000_000;

#[derive(Clone, Debug)]
pub struct HilbertQExp<R: Ring> {
    pub field: Arc<RealQuadField>,
    pub domain: Arc<TraceDomain>,
    pub ctx: R::Ctx,
    pub weight: (i32, i32),
    /// Norm of the level.
    pub level: u64,
    pub character: String,
    pub constant: R,
    pub coeffs: Vec<R>,
}

impl<R: Ring> PartialEq for HilbertQExp<R> {
    fn eq(&self, o: &Self) -> bool {
        self.field.d == o.field.d
            && self.domain == o.domain
            && self.ctx == o.ctx
            && self.weight == o.weight
            && self.level == o.level
            && self.character == o.character
            && self.constant == o.constant
            && self.coeffs == o.coeffs
    }
}

/// Totally positive generator of a prime above a split p, in coordinates a + b w.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeGenerator {
    pub p: u64,
    pub place: Place,
    pub pi: QuadElem,
    a: i128,
    b: i128,
}

impl PrimeGenerator {
    /// Generator of the prime at `place` found by the narrow principality test.
    pub fn new(field: &RealQuadField, p: u64, place: Place) -> Result<Self, QExpError> {
        match narrow_generator(field, p, NarrowOptions::default())? {
            NarrowVerdict::Found { pi1, pi2, .. } => {
                let pi = if place == Place::First { pi1 } else { pi2 };
                Self::from_element(field, p, place, pi)
            }
            _ => Err(QExpError::NotNarrowlyPrincipal(p)),
        }
    }

    /// Validate a supplied generator.
    pub fn from_element(field: &RealQuadField, p: u64, place: Place, pi: QuadElem) -> Result<Self, QExpError> {
        let (a, b) = field.coords_i64(&pi).ok_or(QExpError::NotNarrowlyPrincipal(p))?;
        let rm = residue_map(field, p, place, 1)?;
        let norm_ok = field.norm(&pi) == num_rational::BigRational::from_integer(p.into());
        if !norm_ok || !field.is_totally_positive(&pi) || rm.apply(&pi)?.r != 0 {
            return Err(QExpError::NotNarrowlyPrincipal(p));
        }
        Ok(PrimeGenerator { p, place, pi, a: a as i128, b: b as i128 })
    }

    fn coords(&self) -> (i128, i128) {
        (self.a, self.b)
    }
}

/// (a + b w)(x + n w) in coordinates.
fn mul_coords(t: i128, n0: i128, (a, b): (i128, i128), (x, n): (i128, i128)) -> (i128, i128) {
    (a * x + n0 * b * n, a * n + b * x + t * b * n)
}

/// Residue of nu = mu / sqrt(D) at a prime above p.
#[derive(Clone, Debug)]
pub struct NuResidue {
    pub map: ResidueMap,
    inv_sqrt_disc: Zp,
}

impl NuResidue {
    pub fn new(field: &RealQuadField, p: u64, place: Place, m: u32) -> Result<Self, QExpError> {
        let map = residue_map(field, p, place, m)?;
        let inv_sqrt_disc = map.apply(&field.sqrt_disc())?.inv()?;
        Ok(NuResidue { map, inv_sqrt_disc })
    }

    pub fn at(&self, x: i64, n: u32) -> Zp {
        self.map.apply_int(x, n as i64) * self.inv_sqrt_disc
    }
}

impl<R: Ring> HilbertQExp<R> {
    pub fn new(
        field: Arc<RealQuadField>,
        trace_bound: u32,
        ctx: R::Ctx,
        weight: (i32, i32),
        constant: R,
        coeffs: Vec<R>,
    ) -> Result<Self, QExpError> {
        let domain = Arc::new(TraceDomain::new(&field, trace_bound)?);
        if domain.len() > MAX_KEYS {
            return Err(QExpError::BoundTooLarge(trace_bound as u64));
        }
        if coeffs.len() != domain.len() {
            return Err(QExpError::Parse(format!("expected {} coefficients, got {}", domain.len(), coeffs.len())));
        }
        Ok(HilbertQExp { field, domain, ctx, weight, level: 1, character: "trivial".into(), constant, coeffs })
    }

    pub fn from_fn(
        field: Arc<RealQuadField>,
        trace_bound: u32,
        ctx: R::Ctx,
        weight: (i32, i32),
        mut f: impl FnMut(i64, u32) -> R,
    ) -> Result<Self, QExpError> {
        let domain = TraceDomain::new(&field, trace_bound)?;
        if domain.len() > MAX_KEYS {
            return Err(QExpError::BoundTooLarge(trace_bound as u64));
        }
        let coeffs = domain.keys().map(|(x, n)| f(x, n)).collect();
        let constant = R::zero_in(&ctx);
        Self::new(field, trace_bound, ctx, weight, constant, coeffs)
    }

    pub fn zero(field: Arc<RealQuadField>, trace_bound: u32, ctx: R::Ctx, weight: (i32, i32)) -> Result<Self, QExpError> {
        let z = R::zero_in(&ctx);
        Self::from_fn(field, trace_bound, ctx, weight, |_, _| z.clone())
    }

    pub fn trace_bound(&self) -> u32 {
        self.domain.trace_bound
    }

    /// Coefficient at the key (x, n), if inside the domain.
    pub fn coeff(&self, x: i64, n: u32) -> Option<&R> {
        self.domain.index(x, n).map(|i| &self.coeffs[i])
    }

    /// Coefficient at nu, zero outside the inverse different. Errors if nu lies beyond the trace bound
    /// or is not totally positive, where the coefficient is unknown.
    pub fn coeff_at(&self, nu: &QuadElem) -> Result<R, QExpError> {
        if nu.is_zero() {
            return Ok(self.constant.clone());
        }
        if !self.field.is_totally_positive(nu) {
            return Err(QExpError::Quad(crate::realquad::QuadError::NotInLattice));
        }
        let Ok((x, n)) = TraceDomain::key_of(&self.field, nu) else {
            return Ok(R::zero_in(&self.ctx));
        };
        u32::try_from(n)
            .ok()
            .and_then(|n| self.coeff(x, n))
            .cloned()
            .ok_or(QExpError::BoundTooSmall)
    }

    /// The adelic coefficient a_p(xi d_L, g) of the identity-component form, read off
    /// the classical table: it equals a(xi, g) for xi totally positive and vanishes
    /// when xi d_L is not integral.
    pub fn adelic_coefficient(&self, xi: &QuadElem) -> Result<R, QExpError> {
        if xi.is_zero() {
            return Err(QExpError::Quad(crate::realquad::QuadError::NotInLattice));
        }
        self.coeff_at(xi)
    }

    fn with_coeffs(&self, constant: R, coeffs: Vec<R>) -> Self {
        HilbertQExp { constant, coeffs, ..self.clone() }
    }

    fn on_domain(&self, domain: Arc<TraceDomain>, constant: R, coeffs: Vec<R>) -> Self {
        HilbertQExp { domain, constant, coeffs, ..self.clone() }
    }

    fn map_keys(&self, mut f: impl FnMut(i64, u32, &R) -> R) -> Vec<R> {
        self.domain.keys().zip(&self.coeffs).map(|((x, n), a)| f(x, n, a)).collect()
    }

    fn check_compatible(&self, o: &Self) -> Result<(), QExpError> {
        if self.field.d != o.field.d {
            return Err(QExpError::FieldMismatch);
        }
        if self.ctx != o.ctx {
            return Err(QExpError::RingMismatch);
        }
        Ok(())
    }

    /// Restrict to the keys of trace at most `bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        if bound >= self.trace_bound() {
            return self.clone();
        }
        let dom = Arc::new(TraceDomain::new(&self.field, bound).expect("smaller bound is valid"));
        let len = dom.len();
        self.on_domain(dom, self.constant.clone(), self.coeffs[..len].to_vec())
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Result<Self, QExpError> {
        self.check_compatible(o)?;
        let (a, b) = if self.trace_bound() <= o.trace_bound() {
            (self.clone(), o.truncate(self.trace_bound()))
        } else {
            (self.truncate(o.trace_bound()), o.clone())
        };
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(x, y)).collect();
        Ok(a.with_coeffs(f(&a.constant, &b.constant), coeffs))
    }

    /// Sum on the common domain.
    pub fn add(&self, o: &Self) -> Result<Self, QExpError> {
        self.zip_with(o, |x, y| x.add(y))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, QExpError> {
        self.zip_with(o, |x, y| x.sub(y))
    }

    pub fn scale(&self, c: &R) -> Self {
        self.with_coeffs(self.constant.mul(c), self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Kill the coefficients at nu with (nu) d divisible by the prime above p at each
    /// listed place; the constant term is killed as well.
    pub fn deplete(&self, p: u64, places: &[Place]) -> Result<Self, QExpError> {
        let maps = places
            .iter()
            .map(|&pl| NuResidue::new(&self.field, p, pl, 1))
            .collect::<Result<Vec<_>, _>>()?;
        let z = R::zero_in(&self.ctx);
        let coeffs = self.map_keys(|x, n, a| if maps.iter().any(|m| m.at(x, n).r == 0) { z.clone() } else { a.clone() });
        Ok(self.with_coeffs(if places.is_empty() { self.constant.clone() } else { z.clone() }, coeffs))
    }

    /// Whether every coefficient at a non-unit of the given place vanishes.
    pub fn is_depleted(&self, p: u64, place: Place) -> Result<bool, QExpError> {
        Ok(self.deplete(p, &[place])? == *self)
    }

    /// U at the prime generated by pi: nu -> a(pi nu). The output trace bound is the
    /// largest n for which every key of trace <= n maps inside the input domain.
    pub fn hecke_u(&self, gen: &PrimeGenerator) -> Result<Self, QExpError> {
        let (t, n0) = (self.field.t as i128, self.field.n0 as i128);
        let pi = gen.coords();
        let tb = self.trace_bound() as i128;
        let image_trace = |x: i64, n: u32| mul_coords(t, n0, pi, (x as i128, n as i128)).1;
        let mut out_bound = 0u32;
        for n in 1..=self.trace_bound() {
            let r = self.domain.x_range(n);
            if image_trace(*r.start(), n) > tb || image_trace(*r.end(), n) > tb {
                break;
            }
            out_bound = n;
        }
        if out_bound == 0 {
            return Err(QExpError::BoundTooSmall);
        }
        let dom = Arc::new(TraceDomain::new(&self.field, out_bound)?);
        let coeffs = dom
            .keys()
            .map(|(x, n)| {
                let (x2, n2) = mul_coords(t, n0, pi, (x as i128, n as i128));
                self.coeff(x2 as i64, n2 as u32).expect("image lies in the domain").clone()
            })
            .collect();
        Ok(self.on_domain(dom, self.constant.clone(), coeffs))
    }

    /// V at the prime generated by pi: nu -> a(nu / pi), zero when nu / pi leaves the
    /// inverse different. The output trace bound grows by roughly the smaller
    /// embedding of pi, capped by the storage limits.
    pub fn hecke_v(&self, gen: &PrimeGenerator) -> Result<Self, QExpError> {
        let (t, n0) = (self.field.t as i128, self.field.n0 as i128);
        let (a, b) = gen.coords();
        let pic = (a + t * b, -b);
        let p = gen.p as i128;
        let tb = self.trace_bound() as i128;
        let mut cap = (self.trace_bound() as u64 * gen.p).min(crate::realquad::enumerate::MAX_TRACE_BOUND as u64) as u32;
        while TraceDomain::new(&self.field, cap)?.len() > MAX_KEYS {
            cap = cap * 9 / 10;
        }
        let scaled_trace = |x: i64, n: u32| mul_coords(t, n0, pic, (x as i128, n as i128)).1;
        let ext = TraceDomain::new(&self.field, cap)?;
        let mut out_bound = 0u32;
        for n in 1..=cap {
            let r = ext.x_range(n);
            if scaled_trace(*r.start(), n) > p * tb || scaled_trace(*r.end(), n) > p * tb {
                break;
            }
            out_bound = n;
        }
        let dom = Arc::new(TraceDomain::new(&self.field, out_bound.max(1))?);
        let z = R::zero_in(&self.ctx);
        let coeffs = dom
            .keys()
            .map(|(x, n)| {
                let (xs, ns) = mul_coords(t, n0, pic, (x as i128, n as i128));
                if xs % p != 0 || ns % p != 0 {
                    return z.clone();
                }
                self.coeff((xs / p) as i64, (ns / p) as u32).cloned().unwrap_or_else(|| z.clone())
            })
            .collect();
        let out = self.on_domain(dom, self.constant.clone(), coeffs);
        if out_bound == 0 {
            return Err(QExpError::BoundTooSmall);
        }
        Ok(out)
    }

    /// a(nu) -> chi(nu mod p_place^c) a(nu) on place-units, zero elsewhere.
    pub fn twist_star(&self, chi: &ResidueCharacter<R>, place: Place) -> Result<Self, QExpError> {
        let res = NuResidue::new(&self.field, chi.p, place, chi.c).map_err(|e| match e {
            QExpError::Quad(crate::realquad::QuadError::NotSplit(_)) => QExpError::CharacterDomainMismatch,
            other => other,
        })?;
        let coeffs = self.map_keys(|x, n, a| chi.eval(res.at(x, n).r).mul(a));
        let mut out = self.with_coeffs(R::zero_in(&self.ctx), coeffs);
        out.character = format!("{}*{}", self.character, chi.label);
        Ok(out)
    }

    /// Consistency check for Atkin-Lehner data: returns c with `supplied = c * twisted`
    /// coefficientwise, or None when the two expansions are not proportional.
    pub fn proportionality(twisted: &Self, supplied: &Self) -> Result<Option<R>, QExpError> {
        twisted.check_compatible(supplied)?;
        let b = twisted.trace_bound().min(supplied.trace_bound());
        let (u, v) = (twisted.truncate(b), supplied.truncate(b));
        let Some(i) = u.coeffs.iter().position(|a| a.inv().is_some()) else {
            return Ok(None);
        };
        let c = v.coeffs[i].mul(&u.coeffs[i].inv().unwrap());
        let ok = u.coeffs.iter().zip(&v.coeffs).all(|(a, w)| a.mul(&c) == *w);
        Ok(ok.then_some(c))
    }
}

impl HilbertQExp<num_rational::BigRational> {
    pub fn to_zp(&self, ctx: ZpCtx) -> Result<HilbertQExp<Zp>, QExpError> {
        let coeffs = self.coeffs.iter().map(|q| Zp::from_rational(ctx, q)).collect::<Result<Vec<_>, _>>()?;
        Ok(HilbertQExp {
            field: self.field.clone(),
            domain: self.domain.clone(),
            ctx,
            weight: self.weight,
            level: self.level,
            character: self.character.clone(),
            constant: Zp::from_rational(ctx, &self.constant)?,
            coeffs,
        })
    }
}

impl HilbertQExp<Zp> {
    /// d_place^e: multiply a(nu) by the residue of nu at the place raised to e, shifting
    /// that weight by 2e. Negative powers require depletion at the place.
    pub fn theta_d_pow(&self, place: Place, e: i64) -> Result<Self, QExpError> {
        let res = NuResidue::new(&self.field, self.ctx.p, place, self.ctx.m)?;
        let z = self.ctx.zero();
        let mut bad = false;
        let coeffs = self.map_keys(|x, n, a| {
            let r = res.at(x, n);
            if e >= 0 {
                return r.pow(e as u64) * *a;
            }
            match r.inv() {
                Ok(ri) => ri.pow(e.unsigned_abs()) * *a,
                Err(_) => {
                    bad |= a.r != 0;
                    z
                }
            }
        });
        if bad || (e < 0 && self.constant.r != 0) {
            return Err(QExpError::NotDepleted);
        }
        let constant = if e == 0 { self.constant } else { z };
        let mut out = self.with_coeffs(constant, coeffs);
        let shift = 2 * e as i32;
        match place {
            Place::First => out.weight.0 += shift,
            Place::Second => out.weight.1 += shift,
        }
        Ok(out)
    }

    pub fn theta_d(&self, place: Place) -> Result<Self, QExpError> {
        self.theta_d_pow(place, 1)
    }

    pub fn theta_d_inverse(&self, place: Place) -> Result<Self, QExpError> {
        self.theta_d_pow(place, -1)
    }

    /// Partner of a place-1 depleted g1 in the vanishing lemma: b(nu) = (conj(nu)/nu) a(nu)
    /// read at the first place, so that d_1 g2 = d_2 g1.
    pub fn conjugate_ratio_partner(&self) -> Result<Self, QExpError> {
        let p = self.ctx.p;
        let r1 = NuResidue::new(&self.field, p, Place::First, self.ctx.m)?;
        let r2 = NuResidue::new(&self.field, p, Place::Second, self.ctx.m)?;
        let mut bad = false;
        let coeffs = self.map_keys(|x, n, a| match r1.at(x, n).inv() {
            Ok(i1) => r2.at(x, n) * i1 * *a,
            Err(_) => {
                bad |= a.r != 0;
                self.ctx.zero()
            }
        });
        if bad || self.constant.r != 0 {
            return Err(QExpError::NotDepleted);
        }
        let mut out = self.with_coeffs(self.ctx.zero(), coeffs);
        out.weight = (self.weight.1, self.weight.0);
        Ok(out)
    }
}

/// Diagonal restriction: b_n = sum of a(nu) over Tr(nu) = n, b_0 = a_0, weight k1 + k2.
pub fn diagonal_restrict<R: Ring>(g: &HilbertQExp<R>) -> EllipticQExp<R> {
    let tb = g.trace_bound();
    let mut coeffs = Vec::with_capacity(tb as usize + 1);
    coeffs.push(g.constant.clone());
    for n in 1..=tb {
        let mut s = R::zero_in(&g.ctx);
        for x in g.domain.x_range(n) {
            s = s.add(g.coeff(x, n).unwrap());
        }
        coeffs.push(s);
    }
    EllipticQExp {
        ctx: g.ctx.clone(),
        weight: g.weight.0 + g.weight.1,
        level: g.level,
        character: g.character.clone(),
        coeffs,
    }
}
