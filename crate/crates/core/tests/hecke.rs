mod common;

use std::collections::BTreeMap;

use common::{random_unit, LValueInstance, VanishingInstance};
use hz_core::hecke::*;
use hz_core::numtheory::ring::int;
use hz_core::numtheory::{Matrix, Padic, Zp, ZpCtx};
use hz_core::qexp::diagonal_restrict;
use hz_core::realquad::Place;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// a_p of y^2 + y = x^3 - x^2 - 10x - 20 by counting points over F_p.
fn ap_11a1(p: i64) -> i64 {
    let mut affine = 0;
    for x in 0..p {
        for y in 0..p {
            if (y * y + y - (x * x * x - x * x - 10 * x - 20)).rem_euclid(p) == 0 {
                affine += 1;
            }
        }
    }
    p + 1 - (affine + 1)
}

#[test]
fn stabilize_11a1_from_point_count() {
    let a3 = ap_11a1(3);
    assert_eq!(a3, -1);
    let f = EigenSystem::new("11a1", 2, 11, [(3, int(a3))]);
    let s = stabilize(&f, 3, 8).unwrap();
    // Brute-force Hensel oracle: lift the root -1 mod 3 digit by digit.
    let ctx = s.alpha.ctx;
    let poly = |x: u64| (x * x + x + 3) % ctx.modulus;
    let mut root = 2u64;
    let mut modulus = 3u64;
    for _ in 1..ctx.m {
        let next = modulus * 3;
        root = (0..3).map(|d| root + d * modulus).find(|&r| poly(r) % next == 0).unwrap();
        modulus = next;
    }
    assert_eq!(s.alpha.r, root);
    assert_eq!(s.alpha.r % 3, 2);
}

fn cramer3(m: [[Zp; 3]; 3], v: [Zp; 3]) -> Option<[Zp; 3]> {
    let det = |a: [[Zp; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m).inv().ok()?;
    let mut out = [d; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let mut mj = m;
        for i in 0..3 {
            mj[i][j] = v[i];
        }
        *o = det(mj) * d;
    }
    Some(out)
}

#[test]
fn isotypic_lambda1_matches_direct_solve() {
    let ctx = ZpCtx::new(7, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let fs: Vec<_> = (0..3).map(|_| SyntheticEigenform::random(ctx, 2, random_unit(ctx, &mut rng), &mut rng, 60)).collect();
        let m = [[ctx.one(); 3], [fs[0].coefficient(2), fs[1].coefficient(2), fs[2].coefficient(2)], [
            fs[0].coefficient(3),
            fs[1].coefficient(3),
            fs[2].coefficient(3),
        ]];
        let space = match HeckeSpace::new(7, fs.iter().map(|f| f.expansion(60)).collect(), BTreeMap::new()) {
            Ok(s) => s,
            Err(HeckeError::DegenerateBasis) => continue,
            Err(e) => panic!("{e}"),
        };
        let c: Vec<Zp> = (0..3).map(|_| Zp::new(ctx, rng.gen_range(0..ctx.modulus))).collect();
        let phi = space.combine(&c);
        let others: Vec<_> = fs[1..].iter().map(|f| f.eigenvalues()).collect();
        let (comp, l1) = match space.isotypic_project(&phi, &fs[0].eigenvalues(), &others) {
            Ok(r) => r,
            Err(HeckeError::NotSeparated) => continue,
            Err(e) => panic!("{e}"),
        };
        // Oracle: solve the first three coefficients directly by Cramer's rule.
        if let Some(sol) = cramer3(m, [phi.coeffs[1], phi.coeffs[2], phi.coeffs[3]]) {
            assert_eq!(l1, sol[0]);
        }
        assert_eq!(l1, c[0]);
        assert_eq!(comp, fs[0].expansion(60).scale(&c[0]));
    }
}

#[test]
fn operator_matrix_matches_direct_application() {
    let ctx = ZpCtx::new(5, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fs: Vec<_> = (0..3).map(|_| SyntheticEigenform::random(ctx, 2, random_unit(ctx, &mut rng), &mut rng, 120)).collect();
    // Mix the eigenbasis so the matrices are not diagonal.
    let e: Vec<_> = fs.iter().map(|f| f.expansion(120)).collect();
    let basis = vec![e[0].clone(), e[0].add(&e[1]).unwrap(), e[1].add(&e[2].scale(&ctx.int(3))).unwrap()];
    let space = HeckeSpace::new(5, basis.clone(), BTreeMap::new()).unwrap();
    for op in [HeckeOp::Up, HeckeOp::T(2), HeckeOp::T(3), HeckeOp::Diamond(2)] {
        let m = space.operator_matrix(op).unwrap();
        for (j, b) in basis.iter().enumerate() {
            let direct = space.apply_op(op, b).unwrap();
            let col: Vec<Zp> = (0..3).map(|i| *m.get(i, j)).collect();
            let via = space.combine(&col);
            assert_eq!(direct.coeffs[..], via.coeffs[..=direct.bound()], "{op}");
        }
    }
}

fn iterate_oracle(m: &Matrix<Zp>) -> Matrix<Zp> {
    let ctx = m.ctx;
    let e = BigUint::from(ctx.p - 1) * BigUint::from(ctx.p).pow(ctx.m);
    m.pow(&e)
}

#[test]
fn e_ord_equals_iterate_limit_on_random_spaces() {
    let ctx = ZpCtx::new(5, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let fs: Vec<_> = (0..4)
            .map(|i| {
                let a = if i % 2 == 0 { random_unit(ctx, &mut rng) } else { random_unit(ctx, &mut rng) * ctx.int(5) };
                SyntheticEigenform::random(ctx, 2, a, &mut rng, 100)
            })
            .collect();
        let Ok(space) = HeckeSpace::new(5, fs.iter().map(|f| f.expansion(100)).collect(), BTreeMap::new()) else {
            continue;
        };
        let up = space.operator_matrix(HeckeOp::Up).unwrap();
        assert_eq!(space.ordinary_projector().unwrap(), iterate_oracle(&up));
    }
}

#[test]
fn lvalue_zero_input_and_end_to_end() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let inst = LValueInstance::new(&mut rng);
    let zero = hz_core::qexp::HilbertQExp::zero(inst.field.clone(), inst.bound as u32, inst.ctx, (2, 2)).unwrap();
    let z = lvalue_weight2(&zero, &inst.space, &inst.target, &inst.point).unwrap();
    assert!(z.value.is_zero());
    for _ in 0..3 {
        let c = Zp::new(inst.ctx, rng.gen_range(0..inst.ctx.modulus));
        let phi = inst.restricted_target(c, &mut rng);
        let g = inst.hilbert_input(&phi, &mut rng);
        let out = lvalue_weight2(&g, &inst.space, &inst.target, &inst.point).unwrap();
        let want = Padic::from_zp(&c).div(&e_fstar(&inst.target.alpha_f, &inst.target.beta_f).unwrap()).unwrap();
        assert_eq!(out.lambda1, c);
        assert!(out.value.eq_at_precision(&want));
        assert_eq!(out.restricted.coeffs[1..], phi.coeffs[1..]);
    }
}

#[test]
fn lvalue_rejects_wild_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let inst = LValueInstance::new(&mut rng);
    let zero = hz_core::qexp::HilbertQExp::zero(inst.field.clone(), inst.bound as u32, inst.ctx, (2, 2)).unwrap();
    let mut point = inst.point.clone();
    point.chi_spade = Some("chi".into());
    assert_eq!(lvalue_weight2(&zero, &inst.space, &inst.target, &point).unwrap_err(), HeckeError::WildCharacterUnsupported);
    let mut point = inst.point.clone();
    point.weight = 3;
    assert!(lvalue_weight2(&zero, &inst.space, &inst.target, &point).is_err());
}

#[test]
fn vanishing_pair_is_killed_by_e_ord() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let inst = VanishingInstance::new(&mut rng);
    for _ in 0..3 {
        let pair = inst.pair(&mut rng);
        assert_eq!(pair.g2.theta_d(Place::First).unwrap(), pair.g1.theta_d(Place::Second).unwrap());
        let phi = diagonal_restrict(&pair.g1).add(&diagonal_restrict(&pair.g2)).unwrap();
        assert!(!phi.is_zero());
        assert!(inst.space.e_ord(&phi).unwrap().is_zero());
    }
}

fn synthetic_space(seed: u64, dim: usize) -> Option<(HeckeSpace, Vec<SyntheticEigenform>)> {
    let ctx = ZpCtx::new(5, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<_> = (0..dim)
        .map(|_| {
            let a = random_unit(ctx, &mut rng) * ctx.int(5i64.pow(rng.gen_range(0..2)));
            SyntheticEigenform::random(ctx, 2, a, &mut rng, 150)
        })
        .collect();
    let space = HeckeSpace::new(5, fs.iter().map(|f| f.expansion(150)).collect(), BTreeMap::new()).ok()?;
    Some((space, fs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn e_ord_idempotent_and_commuting(seed in any::<u64>(), dim in 1usize..=8) {
        if let Some((space, _)) = synthetic_space(seed, dim) {
            let e = space.ordinary_projector().unwrap();
            prop_assert_eq!(e.mul(&e), e.clone());
            for op in [HeckeOp::Up, HeckeOp::T(2), HeckeOp::T(3)] {
                if let Ok(m) = space.operator_matrix(op) {
                    prop_assert_eq!(m.mul(&e), e.mul(&m));
                }
            }
        }
    }

    #[test]
    fn isotypic_component_is_eigen(seed in any::<u64>(), dim in 2usize..=5) {
        if let Some((space, fs)) = synthetic_space(seed, dim) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
            let c: Vec<Zp> = (0..dim).map(|_| Zp::new(space.ctx, rng.gen_range(0..space.ctx.modulus))).collect();
            let phi = space.combine(&c);
            let others: Vec<_> = fs[1..].iter().map(|f| f.eigenvalues()).collect();
            if let Ok((comp, _)) = space.isotypic_project(&phi, &fs[0].eigenvalues(), &others) {
                for l in [2u64, 3] {
                    let t = space.apply_op(HeckeOp::T(l), &comp).unwrap();
                    let a = fs[0].eigenvalues()[&l];
                    prop_assert!(t.sub(&comp.truncate(t.bound()).scale(&a)).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn lvalue_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = LValueInstance::new(&mut rng);
        let mk = |rng: &mut ChaCha8Rng| {
            let g = hz_core::qexp::HilbertQExp::from_fn(inst.field.clone(), inst.bound as u32, inst.ctx, (2, 2), |_, _| Zp::new(inst.ctx, 0)).unwrap();
            let c = Zp::new(inst.ctx, rng.gen_range(0..inst.ctx.modulus));
            let phi = inst.restricted_target(c, rng);
            let h = inst.hilbert_input(&phi, rng);
            g.add(&h).unwrap()
        };
        let (g, h) = (mk(&mut rng), mk(&mut rng));
        let s = Zp::new(inst.ctx, rng.gen_range(0..inst.ctx.modulus));
        let lg = lvalue_weight2(&g, &inst.space, &inst.target, &inst.point).unwrap();
        let lh = lvalue_weight2(&h, &inst.space, &inst.target, &inst.point).unwrap();
        let lsum = lvalue_weight2(&g.scale(&s).add(&h).unwrap(), &inst.space, &inst.target, &inst.point).unwrap();
        prop_assert_eq!(lsum.lambda1, s * lg.lambda1 + lh.lambda1);
    }

    #[test]
    fn euler_valuations_stable_in_m(seed in any::<u64>(), m in 3u32..8) {
        let p = 7u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let units: Vec<i64> = (0..5).map(|_| loop {
            let u = rng.gen_range(1..7i64.pow(3));
            if u % 7 != 0 { break u; }
        }).collect();
        let mk = |m: u32| {
            let pz = |n: i64| Padic::from_i64(p, m, n);
            EulerInputs {
                alpha1: pz(units[0]), beta1: pz(units[1]), alpha2: pz(units[2]), beta2: pz(units[3]),
                alpha_f: pz(units[4]), beta_f: pz(7 * units[0]),
                weight: 1, level_exponent: 0, p, m, alpha_f_circ: None, chi_circ: None,
            }
        };
        let (a, b) = (euler_report(&mk(m)), euler_report(&mk(m + 3)));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a.e_fstar.valuation, b.e_fstar.valuation);
            prop_assert_eq!(a.e_sp.valuation, b.e_sp.valuation);
            prop_assert_eq!(a.e_1p.valuation, b.e_1p.valuation);
            prop_assert_eq!(a.e_sp.valuation, Some(-4));
            prop_assert_eq!(a.e_1p.valuation, Some(-2));
        }
    }
}
