//! Dense univariate polynomials, Hensel lifting and the Newton-polygon split.

use super::ring::Ring;
use super::zp::{Zp, ZpCtx};
use super::NumError;

/// Coefficients from low to high degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    pub ctx: R::Ctx,
    pub coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(ctx: R::Ctx, coeffs: Vec<R>) -> Self {
        let mut p = Poly { ctx, coeffs };
        p.trim();
        p
    }

    pub fn zero(ctx: R::Ctx) -> Self {
        Poly { ctx, coeffs: Vec::new() }
    }

    pub fn constant(ctx: R::Ctx, c: R) -> Self {
        Poly::new(ctx, vec![c])
    }

    /// `X^k`.
    pub fn monomial(ctx: R::Ctx, k: usize) -> Self {
        let mut c = vec![R::zero_in(&ctx); k + 1];
        c[k] = R::one_in(&ctx);
        Poly { ctx, coeffs: c }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| R::zero_in(&self.ctx))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.ctx.clone(), (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.ctx.clone(), (0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.ctx.clone(), self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.ctx.clone());
        }
        let mut out = vec![R::zero_in(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.ctx.clone(), out)
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero_in(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.ctx.clone(),
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale_i64(i as i64)).collect(),
        )
    }

    /// Quotient and remainder by a polynomial with invertible leading coefficient.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), NumError> {
        let dd = d.degree().ok_or(NumError::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv().ok_or(NumError::NotUnit)?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(self.ctx.clone()), self.clone()));
        }
        let mut q = vec![R::zero_in(&self.ctx); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&lead_inv);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(self.ctx.clone(), q), Poly::new(self.ctx.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, NumError> {
        Ok(self.divrem(d)?.1)
    }
}

impl Poly<Zp> {
    pub fn from_i64s(ctx: ZpCtx, c: &[i64]) -> Self {
        Poly::new(ctx, c.iter().map(|&x| ctx.int(x)).collect())
    }

    /// Reduce all coefficients to precision `m`.
    pub fn truncate(&self, m: u32) -> Result<Self, NumError> {
        let c = self.ctx.with_precision(m)?;
        Ok(Poly::new(c, self.coeffs.iter().map(|x| Zp::new(c, x.r)).collect()))
    }

    /// Number of roots of positive valuation of a monic polynomial: the index of
    /// the first unit coefficient.
    pub fn nonunit_root_count(&self) -> Result<usize, NumError> {
        if !self.coeffs.last().is_some_and(|c| c.r == 1) {
            return Err(NumError::NotMonic);
        }
        Ok(self.coeffs.iter().position(|c| c.is_unit()).unwrap())
    }
}

/// Unit root of `X^2 - a X + b` with `a` a unit and `v(b) >= 1`, by Newton iteration.
pub fn hensel_unit_root(a: &Zp, b: &Zp) -> Result<Zp, NumError> {
    if !a.is_unit() {
        return Err(NumError::NotOrdinary);
    }
    if b.is_unit() {
        return Err(NumError::NotOrdinary);
    }
    let ctx = a.ctx;
    let mut x = *a;
    // Each step doubles the number of correct digits.
    let mut steps = 0;
    loop {
        let f = x * x - *a * x + *b;
        if f.r == 0 {
            return Ok(x);
        }
        let df = ctx.int(2) * x - *a;
        x = x - f * df.inv()?;
        steps += 1;
        if steps > 2 * ctx.m + 8 {
            return Err(NumError::PrecisionExhausted("Newton iteration did not converge".into()));
        }
    }
}

fn reduce_mod_p(f: &Poly<Zp>) -> Poly<Zp> {
    f.truncate(1).expect("precision 1 is valid")
}

fn lift_ctx(f: &Poly<Zp>, ctx: ZpCtx) -> Poly<Zp> {
    Poly::new(ctx, f.coeffs.iter().map(|c| Zp::new(ctx, c.r)).collect())
}

/// Bezout coefficients over F_p: a*u + b*v = 1 for coprime u, v.
fn bezout_mod_p(u: &Poly<Zp>, v: &Poly<Zp>) -> Result<(Poly<Zp>, Poly<Zp>), NumError> {
    let ctx = u.ctx;
    let (mut r0, mut r1) = (u.clone(), v.clone());
    let (mut s0, mut s1) = (Poly::constant(ctx, ctx.one()), Poly::zero(ctx));
    let (mut t0, mut t1) = (Poly::zero(ctx), Poly::constant(ctx, ctx.one()));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        (r0, r1) = (r1, r);
        let ns = s0.sub(&q.mul(&s1));
        (s0, s1) = (s1, ns);
        let nt = t0.sub(&q.mul(&t1));
        (t0, t1) = (t1, nt);
    }
    if r0.degree() != Some(0) {
        return Err(NumError::NotCoprime);
    }
    let g = r0.coeffs[0].inv()?;
    Ok((s0.scale(&g), t0.scale(&g)))
}

/// Factorisation of a monic `f` by slopes of its Newton polygon.
#[derive(Clone, Debug)]
pub struct NewtonSplit {
    /// Monic factor whose roots are units.
    pub unit: Poly<Zp>,
    /// Monic factor whose roots have positive valuation.
    pub nonunit: Poly<Zp>,
    /// `a * unit + b * nonunit = 1`.
    pub a: Poly<Zp>,
    pub b: Poly<Zp>,
}

/// Split a monic polynomial over Z/p^m into unit-root and non-unit-root monic factors,
/// with Bezout coefficients, all lifted to precision m.
pub fn newton_polygon_split(f: &Poly<Zp>) -> Result<NewtonSplit, NumError> {
    let ctx = f.ctx;
    let s = f.nonunit_root_count()?;
    let fbar = reduce_mod_p(f);
    let c1 = fbar.ctx;
    let xs = Poly::<Zp>::monomial(c1, s);
    let (ubar, r) = fbar.divrem(&xs)?;
    debug_assert!(r.is_zero());
    let (abar, bbar) = bezout_mod_p(&ubar, &xs)?;

    // Linear Hensel lifting of the factorisation f = u v.
    let mut u = lift_ctx(&ubar, ctx);
    let mut v = lift_ctx(&xs, ctx);
    let a0 = lift_ctx(&abar, ctx);
    let b0 = lift_ctx(&bbar, ctx);
    for k in 1..ctx.m {
        let e = f.sub(&u.mul(&v));
        if e.is_zero() {
            break;
        }
        // e is divisible by p^k; work with e / p^k modulo p.
        let pk = ctx.p.pow(k);
        let ebar = Poly::new(c1, e.coeffs.iter().map(|c| Zp::new(c1, c.r / pk)).collect());
        let abar_l = lift_ctx(&a0, c1);
        let bbar_l = lift_ctx(&b0, c1);
        let vbar = reduce_mod_p(&v);
        let ubar_k = reduce_mod_p(&u);
        let dv = abar_l.mul(&ebar).rem(&vbar)?;
        let du = bbar_l.mul(&ebar).rem(&ubar_k)?;
        let scale = ctx.int(pk as i64);
        u = u.add(&lift_ctx(&du, ctx).scale(&scale));
        v = v.add(&lift_ctx(&dv, ctx).scale(&scale));
    }
    if !f.sub(&u.mul(&v)).is_zero() {
        return Err(NumError::PrecisionExhausted("Hensel lift of the slope factorisation failed".into()));
    }

    // Newton iteration for the Bezout identity at full precision.
    let one = Poly::constant(ctx, ctx.one());
    let (mut a, mut b) = (a0, b0);
    for _ in 0..=ctx.m.ilog2() + 1 {
        let r = one.sub(&a.mul(&u).add(&b.mul(&v)));
        if r.is_zero() {
            break;
        }
        let k = one.add(&r);
        let a1 = a.mul(&k);
        let b1 = b.mul(&k);
        let (q, a2) = a1.divrem(&v)?;
        a = a2;
        b = b1.add(&q.mul(&u));
    }
    if !one.sub(&a.mul(&u).add(&b.mul(&v))).is_zero() {
        return Err(NumError::PrecisionExhausted("Bezout lift failed".into()));
    }
    Ok(NewtonSplit { unit: u, nonunit: v, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_unit_root(a: i64, b: i64, p: u64, m: u32) -> Vec<u64> {
        let n = p.pow(m);
        (0..n)
            .filter(|&x| {
                let x = x as i128;
                (x * x - a as i128 * x + b as i128).rem_euclid(n as i128) == 0 && x % p as i128 != 0
            })
            .collect()
    }

    #[test]
    fn unit_root_examples() {
        let c = ZpCtx::new(3, 4).unwrap();
        // X^2 + X + 3: unit root is 65 mod 81.
        let r = hensel_unit_root(&c.int(-1), &c.int(3)).unwrap();
        assert_eq!(r.r, 65);
        assert_eq!(brute_unit_root(-1, 3, 3, 4), vec![65]);
        let c2 = ZpCtx::new(2, 5).unwrap();
        assert_eq!(hensel_unit_root(&c2.int(5), &c2.int(6)).unwrap().r, 3);
        let c7 = ZpCtx::new(7, 3).unwrap();
        assert_eq!(hensel_unit_root(&c7.int(7), &c7.int(7)), Err(NumError::NotOrdinary));
    }

    #[test]
    fn unit_root_matches_brute_force() {
        for p in [2u64, 3, 5, 7] {
            let m = 3;
            let c = ZpCtx::new(p, m).unwrap();
            for a in 1..12i64 {
                if a % p as i64 == 0 {
                    continue;
                }
                for b in [p as i64, 2 * p as i64, (p * p) as i64] {
                    let r = hensel_unit_root(&c.int(a), &c.int(b)).unwrap();
                    assert_eq!(vec![r.r], brute_unit_root(a, b, p, m));
                }
            }
        }
    }

    #[test]
    fn split_reconstructs() {
        let c = ZpCtx::new(5, 6).unwrap();
        // (X - 2)(X - 5)(X^2 + 3X + 25)
        let f = Poly::from_i64s(c, &[-2, 1])
            .mul(&Poly::from_i64s(c, &[-5, 1]))
            .mul(&Poly::from_i64s(c, &[25, 3, 1]));
        let s = newton_polygon_split(&f).unwrap();
        assert_eq!(s.unit.degree(), Some(2));
        assert_eq!(s.nonunit.degree(), Some(2));
        assert_eq!(s.unit.mul(&s.nonunit), f);
        let one = Poly::constant(c, c.one());
        assert_eq!(s.a.mul(&s.unit).add(&s.b.mul(&s.nonunit)), one);
        assert!(s.unit.eval(&c.int(2)).is_zero());
    }
}
