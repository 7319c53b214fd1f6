//! A reverse-constructed weight two instance over Q(sqrt 2) at p = 7 whose
//! L-value is known in advance.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::{restriction_preimage, HeckeSpace, LValueProblem, PointData, SyntheticEigenform, TargetData};
use crate::numtheory::{Padic, Zp, ZpCtx};
use crate::qexp::hilbert::NuResidue;
use crate::qexp::{EllipticQExp, HilbertQExp, ResidueCharacter};
use crate::realquad::{make_field, Place, RealQuadField};

pub fn random_unit(ctx: ZpCtx, rng: &mut impl Rng) -> Zp {
    loop {
        let z = Zp::new(ctx, rng.gen_range(0..ctx.modulus));
        if z.is_unit() {
            return z;
        }
    }
}

/// Weight two data over Q(sqrt 2) at p = 7: a target eigenform, a second
/// ordinary eigenform and theta of a weight zero eigenform.
pub struct SyntheticLValue {
    pub field: Arc<RealQuadField>,
    pub ctx: ZpCtx,
    pub bound: usize,
    pub fstar: SyntheticEigenform,
    pub other: SyntheticEigenform,
    pub junk: SyntheticEigenform,
    pub space: HeckeSpace,
    pub point: PointData,
    pub target: TargetData,
}

impl SyntheticLValue {
    pub fn new(rng: &mut impl Rng) -> Self {
        let field = Arc::new(make_field(2).expect("fixed instance"));
        let ctx = ZpCtx::new(7, 4).expect("fixed instance");
        let bound = 35;
        let fstar = SyntheticEigenform::random(ctx, 2, random_unit(ctx, rng), rng, bound);
        let other = SyntheticEigenform::random(ctx, 2, random_unit(ctx, rng), rng, bound);
        let junk = SyntheticEigenform::random(ctx, 0, random_unit(ctx, rng), rng, bound);
        let basis = vec![fstar.expansion(bound), other.expansion(bound), junk.expansion(bound).theta()];
        let space = HeckeSpace::new(7, basis, BTreeMap::new()).expect("fixed instance");
        let chi = ResidueCharacter::trivial(&ctx, 7, 1).expect("fixed instance");
        let point = PointData::crystalline(chi, Place::Second, Place::First);
        let alpha = fstar.alpha;
        let target = TargetData {
            eigenvalues: fstar.eigenvalues(),
            others: vec![other.eigenvalues(), junk.theta_eigenvalues()],
            alpha_f: Padic::from_zp(&alpha),
            beta_f: Padic::from_i64(7, 4, 7).div(&Padic::from_zp(&alpha)).expect("fixed instance"),
        };
        SyntheticLValue { field, ctx, bound, fstar, other, junk, space, point, target }
    }

    /// c f* + (random multiple of the other eigenform) + (random multiple of theta junk).
    pub fn restricted_target(&self, c: Zp, rng: &mut impl Rng) -> EllipticQExp<Zp> {
        let b = self.bound;
        let c2 = Zp::new(self.ctx, rng.gen_range(0..self.ctx.modulus));
        let c3 = Zp::new(self.ctx, rng.gen_range(0..self.ctx.modulus));
        self.fstar
            .expansion(b)
            .scale(&c)
            .add(&self.other.expansion(b).scale(&c2))
            .expect("fixed instance")
            .add(&self.junk.expansion(b).theta().scale(&c3))
            .expect("fixed instance")
    }

    /// Run the pipeline backwards: the coefficient of nu contributes
    /// psi(r_twist(nu)) r_mu(nu)^-1 a(nu) to the restriction, and keys divisible by
    /// a prime above p are filled with noise that depletion removes.
    pub fn hilbert_input(&self, phi: &EllipticQExp<Zp>, rng: &mut impl Rng) -> HilbertQExp<Zp> {
        let p = self.ctx.p;
        let r1 = NuResidue::new(&self.field, p, Place::First, self.ctx.m).expect("fixed instance");
        let r2 = NuResidue::new(&self.field, p, Place::Second, self.ctx.m).expect("fixed instance");
        // psi = omega^-1 at a crystalline point of weight two, computed directly.
        let psi = |u: Zp| u.teichmuller().inv().expect("fixed instance");
        let mult = |x: i64, n: u32| {
            let (a, b) = (r1.at(x, n), r2.at(x, n));
            if !a.is_unit() || !b.is_unit() {
                return None;
            }
            // twist at the second place, theta inverse at the first.
            Some(psi(b) * a.inv().expect("fixed instance"))
        };
        let mut g = restriction_preimage(self.field.clone(), phi, (2, 2), rng, mult).expect("fixed instance");
        let dom = g.domain.clone();
        for (i, (x, n)) in dom.keys().enumerate() {
            if mult(x, n).is_none() {
                g.coeffs[i] = Zp::new(self.ctx, rng.gen_range(0..self.ctx.modulus));
            }
        }
        g.constant = Zp::new(self.ctx, rng.gen_range(0..self.ctx.modulus));
        g
    }

    /// A complete problem whose L-value is c.
    pub fn problem(&self, c: Zp, rng: &mut impl Rng) -> LValueProblem {
        let phi = self.restricted_target(c, rng);
        LValueProblem {
            hilbert: self.hilbert_input(&phi, rng),
            space: self.space.clone(),
            target: self.target.clone(),
            point: self.point.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn document_round_trip_keeps_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let inst = SyntheticLValue::new(&mut rng);
        let c = inst.ctx.int(123);
        let prob = inst.problem(c, &mut rng);
        let text = serde_json::to_string(&prob.to_doc().unwrap()).unwrap();
        let back = super::super::parse_lvalue_problem(&text).unwrap();
        assert_eq!(back.solve().unwrap().lambda1, c);
        assert_eq!(serde_json::to_string(&back.to_doc().unwrap()).unwrap(), text);
    }
}
