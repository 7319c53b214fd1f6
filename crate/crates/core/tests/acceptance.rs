//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{LValueInstance, VanishingInstance};
use hz_core::asai::quintic::{root_product, root_sum};
use hz_core::asai::*;
use hz_core::hecke::{e_fstar, euler_report, lvalue_weight2, EulerInputs};
use hz_core::numtheory::arith::primes_in;
use hz_core::numtheory::ring::{int, rat};
use hz_core::numtheory::{ordinary_projector, Matrix, Padic, Zp, ZpCtx};
use hz_core::qexp::eisenstein::{normalization_constant, normalization_ratio};
use hz_core::qexp::{
    diagonal_restrict, eisenstein_hilbert, siegel_zeta_value, EllipticQExp, HilbertQExp, PrimeGenerator,
    ResidueCharacter,
};
use hz_core::realquad::{make_field, Place, RealQuadField};
use hz_core::sieve::{find_admissible, verify_witness, SieveInstance};
use num_bigint::BigUint;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let g = eisenstein_hilbert(Arc::new(make_field(5).unwrap()), 2, 50).map_err(|e| e.to_string())?;
    let b = diagonal_restrict(&g);
    ensure!(b.weight == 4, "restriction has weight {}", b.weight);
    for n in 1..=50u64 {
        let lhs = &b.coeffs[n as usize] * int(sigma3(1) as i64);
        let rhs = &b.coeffs[1] * int(sigma3(n) as i64);
        ensure!(lhs == rhs, "b_{n} sigma3(1) != b_1 sigma3({n})");
    }
    ensure!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
    Ok(())
}

fn ac2() -> Outcome {
    let want = [(5, 1, 30), (2, 1, 12), (3, 1, 6), (13, 1, 6)];
    let mut ratios = Vec::new();
    for (d, num, den) in want {
        let field = Arc::new(make_field(d).unwrap());
        let z = siegel_zeta_value(&field, 2).map_err(|e| e.to_string())?;
        ensure!(z == rat(num, den), "zeta(-1) for D = {} is {z}", field.disc);
        let g = eisenstein_hilbert(field, 2, 4).map_err(|e| e.to_string())?;
        ratios.push(normalization_ratio(&g).map_err(|e| e.to_string())?);
    }
    ensure!(ratios.iter().all(|r| *r == normalization_constant()), "normalization ratios {ratios:?}");
    Ok(())
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac3);
    let inst = VanishingInstance::new(&mut rng);
    for i in 0..20 {
        let pair = inst.pair(&mut rng);
        let d1g2 = pair.g2.theta_d(Place::First).map_err(|e| e.to_string())?;
        let d2g1 = pair.g1.theta_d(Place::Second).map_err(|e| e.to_string())?;
        ensure!(d1g2.sub(&d2g1).unwrap().is_zero(), "case {i}: d1 g2 - d2 g1 != 0");
        let phi = diagonal_restrict(&pair.g1).add(&diagonal_restrict(&pair.g2)).unwrap();
        let killed = inst.space.e_ord(&phi).map_err(|e| e.to_string())?;
        ensure!(killed.is_zero(), "case {i}: e_ord of the restriction is nonzero");
    }
    Ok(())
}

fn random_hilbert(field: &Arc<RealQuadField>, ctx: ZpCtx, t: u32, rng: &mut ChaCha8Rng) -> HilbertQExp<Zp> {
    HilbertQExp::from_fn(field.clone(), t, ctx, (2, 2), |_, _| Zp::new(ctx, rng.gen_range(0..ctx.modulus))).unwrap()
}

fn random_place(rng: &mut ChaCha8Rng) -> Place {
    if rng.gen() {
        Place::First
    } else {
        Place::Second
    }
}

fn ac4() -> Outcome {
    let field = Arc::new(make_field(5).unwrap());
    let ctx = ZpCtx::new(11, 5).unwrap();
    let gens = [
        PrimeGenerator::new(&field, 11, Place::First).unwrap(),
        PrimeGenerator::new(&field, 11, Place::Second).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xac4);
    for i in 0..100 {
        let place = random_place(&mut rng);
        let gen = &gens[place as usize];
        let g = random_hilbert(&field, ctx, 6, &mut rng);
        let uv = g.hecke_v(gen).and_then(|v| v.hecke_u(gen)).map_err(|e| e.to_string())?;
        ensure!(uv == g.truncate(uv.trace_bound()), "case {i}: U V != id");
        let f = EllipticQExp::new(ctx, 2, 1, (0..=40).map(|_| Zp::new(ctx, rng.gen_range(0..ctx.modulus))).collect())
            .unwrap();
        ensure!(f.hecke_v(11).hecke_u(11).unwrap() == f, "case {i}: elliptic U V != id");
    }
    for i in 0..100 {
        let place = random_place(&mut rng);
        let g = random_hilbert(&field, ctx, 24, &mut rng);
        let d = g.deplete(11, &[place]).unwrap();
        ensure!(d.hecke_u(&gens[place as usize]).unwrap().is_zero(), "case {i}: U deplete != 0");
        ensure!(d.deplete(11, &[place]).unwrap() == d, "case {i}: depletion not idempotent");
        let both = g.deplete(11, &[Place::First, Place::Second]).unwrap();
        ensure!(both.deplete(11, &[Place::First, Place::Second]).unwrap() == both, "case {i}: double depletion");
    }
    for i in 0..100 {
        let place = random_place(&mut rng);
        let g = random_hilbert(&field, ctx, 16, &mut rng);
        let (a, b) = (rng.gen_range(-9..10), rng.gen_range(-9..10));
        let ca = ResidueCharacter::teichmuller(ctx, a).unwrap();
        let cb = ResidueCharacter::teichmuller(ctx, b).unwrap();
        let twice = g.twist_star(&ca, place).and_then(|h| h.twist_star(&cb, place)).unwrap();
        let once = g.twist_star(&ca.mul(&cb).unwrap(), place).unwrap();
        ensure!(twice.coeffs == once.coeffs, "case {i}: twist by omega^{a} omega^{b} not multiplicative");
    }
    for i in 0..100 {
        let g = random_hilbert(&field, ctx, 16, &mut rng);
        let a = g.theta_d(Place::First).and_then(|h| h.theta_d(Place::Second)).unwrap();
        let b = g.theta_d(Place::Second).and_then(|h| h.theta_d(Place::First)).unwrap();
        ensure!(a == b, "case {i}: d1 d2 != d2 d1");
        let f = EllipticQExp::new(ctx, 2, 1, (0..=60).map(|_| Zp::new(ctx, rng.gen_range(0..ctx.modulus))).collect())
            .unwrap();
        let lhs = f.theta().hecke_u(11).unwrap();
        let rhs = f.hecke_u(11).unwrap().theta().scale(&ctx.int(11));
        ensure!(lhs.coeffs == rhs.coeffs, "case {i}: U theta != p theta U");
    }
    Ok(())
}

/// M^|GL_d(Z/p^m)| is the identity on the Fitting-invertible part and zero on the rest.
fn iterate_limit(m: &Matrix<Zp>) -> Matrix<Zp> {
    let (p, k, d) = (BigUint::from(m.ctx.p), m.ctx.m, m.rows as u32);
    let mut order = p.pow((k - 1) * d * d);
    for i in 0..d {
        order *= p.pow(d) - p.pow(i);
    }
    m.pow(&order)
}

fn random_mixed_matrix(ctx: ZpCtx, dim: usize, rng: &mut ChaCha8Rng) -> Matrix<Zp> {
    let r = |rng: &mut ChaCha8Rng| Zp::new(ctx, rng.gen_range(0..ctx.modulus));
    let units = rng.gen_range(1..dim.max(2));
    let pm = loop {
        let rows = (0..dim).map(|_| (0..dim).map(|_| r(rng)).collect()).collect();
        let pm = Matrix::from_rows(ctx, rows);
        if pm.inverse().is_ok() {
            break pm;
        }
    };
    let mut core = Matrix::zeros(ctx, dim, dim);
    for i in 0..dim {
        let diag = if i < units {
            loop {
                let z = r(rng);
                if z.is_unit() {
                    break z;
                }
            }
        } else {
            r(rng) * ctx.int(ctx.p as i64)
        };
        core.set(i, i, diag);
        // Upper entries inside each slope block create Jordan blocks.
        for j in i + 1..dim {
            if (i < units) == (j < units) && rng.gen_bool(0.5) {
                core.set(i, j, r(rng));
            }
        }
    }
    pm.mul(&core).mul(&pm.inverse().unwrap())
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac5);
    for i in 0..50 {
        let p = [3u64, 5, 7][i % 3];
        let ctx = ZpCtx::new(p, 5).unwrap();
        let dim = rng.gen_range(1..=6);
        let m = random_mixed_matrix(ctx, dim, &mut rng);
        let e = ordinary_projector(&m).map_err(|e| format!("case {i}: {e}"))?;
        ensure!(e == iterate_limit(&m), "case {i}: p = {p}, dim = {dim}: projector differs from the iterate limit");
        ensure!(e.mul(&e) == e, "case {i}: not idempotent");
        ensure!(e.mul(&m) == m.mul(&e), "case {i}: does not commute");
    }
    Ok(())
}

fn ac6() -> Outcome {
    let (p, m) = (7u64, 6u32);
    let ctx = ZpCtx::new(p, m).unwrap();
    let pz = |n: i64| Padic::from_zp(&ctx.int(n));
    let inputs = EulerInputs {
        alpha1: pz(2),
        beta1: pz(3),
        alpha2: pz(4),
        beta2: pz(5),
        alpha_f: pz(6),
        beta_f: pz(21),
        weight: 1,
        level_exponent: 0,
        p,
        m,
        alpha_f_circ: None,
        chi_circ: None,
    };
    let r = euler_report(&inputs).map_err(|e| e.to_string())?;
    let got = (r.e_fstar.valuation, r.e_sp.valuation, r.e_1p.valuation);
    ensure!(got == (Some(0), Some(-4), Some(-2)), "valuations {got:?}");
    ensure!(r.e_fstar.nonzero && r.e_sp.nonzero && r.e_1p.nonzero, "a factor is zero");
    Ok(())
}

fn ac7() -> Outcome {
    let ex = IcosahedralExample::build().map_err(|e| e.to_string())?;
    ensure!(ex.rep.group.order <= 240, "group order {}", ex.rep.group.order);
    let a = tensor_induce(&ex.rep).map_err(|e| e.to_string())?;
    a.verify_homomorphism(&ex.rep.group).map_err(|e| e.to_string())?;
    let k = ex.field();
    let mut seen = std::collections::BTreeSet::new();
    for g in 0..ex.rep.group.order {
        let class = ex.s5_class(g);
        let chi = k.as_rational(&a.character(g));
        ensure!(chi == Some(Rational64::from_integer(class.standard_character())), "character wrong on {class}");
        seen.insert(class);
    }
    ensure!(seen.len() == 7, "saw {} classes", seen.len());
    let five = S5FrobeniusClass::new(vec![5]).unwrap();
    let eig = asai_frobenius_eigenvalues(&five);
    let want: Vec<RootOfUnity> = (1..5).map(|j| RootOfUnity::new(j, 5)).collect();
    ensure!(eig == want, "5-cycle eigenvalues {eig:?}");
    let (kk, s) = root_sum(&eig).map_err(|e| e.to_string())?;
    ensure!(kk.as_rational(&s) == Some(Rational64::from_integer(-1)), "eigenvalue sum");
    ensure!(root_product(&eig) == RootOfUnity::new(0, 1), "eigenvalue product");
    for p in primes_in(2, 200).into_iter().filter(|&p| p != 5) {
        ensure!(distinct_mod_p(&eig, p), "collide mod {p}");
    }
    ensure!(!distinct_mod_p(&eig, 5), "distinct mod 5");
    Ok(())
}

fn ac8() -> Outcome {
    let three = |l: i64| vec![vec![l - 2], vec![-1, -1], vec![-l]];
    let four = |l: i64| vec![vec![l - 1], vec![l - 2, 0, 0], vec![-1, -1, 1 - l], vec![-l]];
    let literal: BTreeMap<i64, (Vec<Vec<i64>>, Vec<Vec<i64>>)> = [
        (1, (vec![vec![-1], vec![-1, -1], vec![-1]], vec![vec![0], vec![-1, 0, 0], vec![-1, -1, 0], vec![-1]])),
        (2, (vec![vec![0], vec![-1, -1], vec![-2]], vec![vec![1], vec![0, 0, 0], vec![-1, -1, -1], vec![-2]])),
        (3, (vec![vec![1], vec![-1, -1], vec![-3]], vec![vec![2], vec![1, 0, 0], vec![-1, -1, -2], vec![-3]])),
        (4, (vec![vec![2], vec![-1, -1], vec![-4]], vec![vec![3], vec![2, 0, 0], vec![-1, -1, -3], vec![-4]])),
    ]
    .into_iter()
    .collect();
    for (l, (t3, t4)) in &literal {
        let t = ht_weight_table(*l);
        ensure!(&t.three_step == t3 && t3 == &three(*l), "three-step table at l = {l}");
        ensure!(&t.four_step == t4 && t4 == &four(*l), "four-step table at l = {l}");
    }
    let flags: Vec<bool> = (1..=4).map(|l| ht_weight_table(l).fil2_negative).collect();
    ensure!(flags == [false, true, true, true], "predicate {flags:?}");
    Ok(())
}

fn ac9() -> Outcome {
    let start = Instant::now();
    let inst = SieveInstance::desk();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let rep = pool.install(|| find_admissible(&inst, 3, 10_000, 30)).map_err(|e| e.to_string())?;
    ensure!(!rep.admissible.is_empty(), "no admissible primes");
    for r in &rep.admissible {
        verify_witness(&inst, r).map_err(|e| format!("p = {}: {e}", r.p))?;
    }
    ensure!(rep.stats.prefilter_exceptions.is_empty(), "exceptions {:?}", rep.stats.prefilter_exceptions);
    ensure!(start.elapsed() < Duration::from_secs(300), "took {:?}", start.elapsed());
    Ok(())
}

fn ac10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac10);
    let inst = LValueInstance::new(&mut rng);
    ensure!(inst.ctx.p == 7 && inst.ctx.m == 4, "instance is not at p = 7, m = 4");
    let e = e_fstar(&inst.target.alpha_f, &inst.target.beta_f).map_err(|e| e.to_string())?;
    for i in 0..10 {
        let c = Zp::new(inst.ctx, rng.gen_range(0..inst.ctx.modulus));
        let phi = inst.restricted_target(c, &mut rng);
        let g = inst.hilbert_input(&phi, &mut rng);
        let out = lvalue_weight2(&g, &inst.space, &inst.target, &inst.point).map_err(|e| e.to_string())?;
        ensure!(out.lambda1 == c, "case {i}: lambda1 {} != c = {}", out.lambda1, c);
        let want = Padic::from_zp(&c).div(&e).map_err(|e| e.to_string())?;
        ensure!(out.value.eq_at_precision(&want), "case {i}: value {} != c / E(f*) = {want}", out.value);
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        ("AC1", "diagonal restriction of the d = 5 Eisenstein series is proportional to sigma_3", ac1),
        ("AC2", "Siegel values 1/30, 1/12, 1/6, 1/6 and one normalization constant", ac2),
        ("AC3", "20 vanishing pairs: d1 g2 = d2 g1 and e_ord kills the restriction", ac3),
        ("AC4", "operator identities, 100 cases each", ac4),
        ("AC5", "50 ordinary projectors equal the iterate limit", ac5),
        ("AC6", "Euler factor valuations 0, -4, -2", ac6),
        ("AC7", "Asai induction, S5 character and 5-cycle eigenvalues", ac7),
        ("AC8", "Hodge-Tate tables for l = 1..4 and the flip at 2", ac8),
        ("AC9", "desk sieve below 10^4 with reverified witnesses", ac9),
        ("AC10", "synthetic L-values equal c / E(f*) for 10 values of c", ac10),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, what, f) in criteria {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("{id} PASS  {what} ({t:.2}s)"),
            Err(e) => {
                failed += 1;
                println!("{id} FAIL  {what}: {e} ({t:.2}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
