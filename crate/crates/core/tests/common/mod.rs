//! Synthetic instances shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

pub use hz_core::hecke::demo::{random_unit, SyntheticLValue as LValueInstance};
use hz_core::hecke::{restriction_preimage, HeckeSpace, SyntheticEigenform};
use hz_core::numtheory::{Zp, ZpCtx};
use hz_core::qexp::hilbert::NuResidue;
use hz_core::qexp::{diagonal_restrict, HilbertQExp};
use hz_core::realquad::{make_field, Place, RealQuadField};
use rand::Rng;

/// Vanishing-pair data over Q(sqrt 5) at p = 11: a space spanned by two ordinary
/// weight two eigenforms and theta of two weight zero eigenforms.
pub struct VanishingInstance {
    pub field: Arc<RealQuadField>,
    pub ctx: ZpCtx,
    pub trace_bound: u32,
    pub h: [SyntheticEigenform; 2],
    pub space: HeckeSpace,
}

pub struct VanishingPair {
    pub g1: HilbertQExp<Zp>,
    pub g2: HilbertQExp<Zp>,
}

impl VanishingInstance {
    pub fn new(rng: &mut impl Rng) -> Self {
        let field = Arc::new(make_field(5).unwrap());
        let ctx = ZpCtx::new(11, 5).unwrap();
        let tb = 60u32;
        let b = tb as usize;
        let f1 = SyntheticEigenform::random(ctx, 2, random_unit(ctx, rng), rng, b);
        let f2 = SyntheticEigenform::random(ctx, 2, random_unit(ctx, rng), rng, b);
        let h1 = SyntheticEigenform::random(ctx, 0, random_unit(ctx, rng), rng, b);
        let h2 = SyntheticEigenform::random(ctx, 0, random_unit(ctx, rng), rng, b);
        let basis = vec![f1.expansion(b), f2.expansion(b), h1.expansion(b).theta(), h2.expansion(b).theta()];
        let space = HeckeSpace::new(11, basis, BTreeMap::new()).unwrap();
        VanishingInstance { field, ctx, trace_bound: tb, h: [h1, h2], space }
    }

    /// g1 = d_1 G for a random first-place depleted G whose restriction is a
    /// combination of the weight zero forms, and its partner g2.
    pub fn pair(&self, rng: &mut impl Rng) -> VanishingPair {
        let b = self.trace_bound as usize;
        let c1 = Zp::new(self.ctx, rng.gen_range(0..self.ctx.modulus));
        let c2 = Zp::new(self.ctx, rng.gen_range(0..self.ctx.modulus));
        let phi = self.h[0].expansion(b).scale(&c1).add(&self.h[1].expansion(b).scale(&c2)).unwrap();
        let r1 = NuResidue::new(&self.field, 11, Place::First, self.ctx.m).unwrap();
        let one = self.ctx.one();
        let big_g =
            restriction_preimage(self.field.clone(), &phi, (0, 0), rng, |x, n| r1.at(x, n).is_unit().then_some(one))
                .unwrap();
        assert_eq!(diagonal_restrict(&big_g).coeffs, phi.coeffs);
        let g1 = big_g.theta_d(Place::First).unwrap();
        let g2 = g1.conjugate_ratio_partner().unwrap();
        VanishingPair { g1, g2 }
    }
}
