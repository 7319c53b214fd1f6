//! Synthetic eigenforms: multiplicative q-expansions built from chosen Hecke
//! eigenvalues, used as test spaces where no modular-symbol basis is available.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::HeckeError;
use crate::numtheory::arith::{factor, primes_in};
use crate::numtheory::{Zp, ZpCtx};
use crate::qexp::{EllipticQExp, HilbertQExp};
use crate::realquad::RealQuadField;

/// A normalised eigen-expansion of weight k at level p with trivial character:
/// a_1 = 1, a_{mn} = a_m a_n for coprime m, n, the weight-k recursion at l != p
/// and a_{p^j} = alpha^j.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticEigenform {
    pub ctx: ZpCtx,
    pub weight: i32,
    pub alpha: Zp,
    pub ap: BTreeMap<u64, Zp>,
}

impl SyntheticEigenform {
    pub fn new(ctx: ZpCtx, weight: i32, alpha: Zp, ap: BTreeMap<u64, Zp>) -> Self {
        SyntheticEigenform { ctx, weight, alpha, ap }
    }

    /// Uniform random a_l for every prime l != p up to `bound`.
    pub fn random(ctx: ZpCtx, weight: i32, alpha: Zp, rng: &mut impl Rng, bound: usize) -> Self {
        let ap = primes_in(2, bound as u64 + 1)
            .into_iter()
            .filter(|&l| l != ctx.p)
            .map(|l| (l, Zp::new(ctx, rng.gen_range(0..ctx.modulus))))
            .collect();
        Self::new(ctx, weight, alpha, ap)
    }

    /// l^(k-1) in Z/p^m; negative weights use the inverse of l.
    fn norm_power(&self, l: u64) -> Zp {
        let e = self.weight as i64 - 1;
        let base = self.ctx.int(l as i64);
        if e >= 0 {
            base.pow(e as u64)
        } else {
            base.inv().expect("l is prime to p").pow(e.unsigned_abs())
        }
    }

    fn prime_power(&self, l: u64, j: u32) -> Zp {
        if l == self.ctx.p {
            return self.alpha.pow(j as u64);
        }
        let a = self.ap.get(&l).copied().unwrap_or_else(|| self.ctx.zero());
        let lk = self.norm_power(l);
        let (mut prev, mut cur) = (self.ctx.one(), a);
        if j == 0 {
            return prev;
        }
        for _ in 1..j {
            let next = a * cur - lk * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn coefficient(&self, n: u64) -> Zp {
        if n == 0 {
            return self.ctx.zero();
        }
        factor(n).into_iter().fold(self.ctx.one(), |acc, (l, e)| acc * self.prime_power(l, e))
    }

    pub fn expansion(&self, bound: usize) -> EllipticQExp<Zp> {
        let mut f = EllipticQExp::zero(self.ctx, self.weight, bound);
        for n in 1..=bound {
            f.coeffs[n] = self.coefficient(n as u64);
        }
        f.level = self.ctx.p;
        f
    }

    /// Hecke eigenvalues keyed by l, with U_p stored under p.
    pub fn eigenvalues(&self) -> BTreeMap<u64, Zp> {
        let mut m = self.ap.clone();
        m.insert(self.ctx.p, self.alpha);
        m
    }

    /// Eigenvalues of theta applied to the expansion: l a_l and p alpha.
    pub fn theta_eigenvalues(&self) -> BTreeMap<u64, Zp> {
        self.eigenvalues().into_iter().map(|(l, a)| (l, a * self.ctx.int(l as i64))).collect()
    }
}

/// A Hilbert expansion g, up to the bound of `target`, such that the diagonal
/// restriction of nu -> mult(nu) a(nu) equals `target`. Keys where `mult` is None
/// get zero; on each trace line the other keys are random except one key with a
/// unit multiplier, which is solved for.
pub fn restriction_preimage(
    field: Arc<RealQuadField>,
    target: &EllipticQExp<Zp>,
    weight: (i32, i32),
    rng: &mut impl Rng,
    mult: impl Fn(i64, u32) -> Option<Zp>,
) -> Result<HilbertQExp<Zp>, HeckeError> {
    let ctx = target.ctx;
    if target.coeffs[0].r != 0 {
        return Err(HeckeError::NotInSpan);
    }
    let mut g = HilbertQExp::zero(field, target.bound() as u32, ctx, weight)?;
    let dom = g.domain.clone();
    for n in 1..=target.bound() as u32 {
        let keys: Vec<(i64, Zp)> = dom.x_range(n).filter_map(|x| mult(x, n).map(|w| (x, w))).collect();
        let Some(solve) = keys.iter().rposition(|(_, w)| w.is_unit()) else {
            if target.coeffs[n as usize].r != 0 {
                return Err(HeckeError::NotInSpan);
            }
            continue;
        };
        let mut rest = ctx.zero();
        for (i, (x, w)) in keys.iter().enumerate() {
            if i != solve {
                let a = Zp::new(ctx, rng.gen_range(0..ctx.modulus));
                g.coeffs[dom.index(*x, n).expect("key in domain")] = a;
                rest = rest + *w * a;
            }
        }
        let (x, w) = keys[solve];
        g.coeffs[dom.index(x, n).expect("key in domain")] = (target.coeffs[n as usize] - rest) * w.inv()?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn eigen_under_hecke_operators() {
        let ctx = ZpCtx::new(7, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [0, 2] {
            let f = SyntheticEigenform::random(ctx, k, ctx.int(10), &mut rng, 200);
            let g = f.expansion(200);
            let u = g.hecke_u(7).unwrap();
            assert_eq!(u, g.truncate(u.bound()).scale(&f.alpha));
            // theta of a weight zero form is a weight two eigenform.
            let h = if k == 0 { g.theta() } else { g.clone() };
            let ev = if k == 0 { f.theta_eigenvalues() } else { f.eigenvalues() };
            for l in [2u64, 3, 5] {
                let t = h.hecke_t(l, &ctx.one()).unwrap();
                assert_eq!(t, h.truncate(t.bound()).scale(&ev[&l]), "k={k} l={l}");
            }
        }
    }
}
