use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail};
use clap::{Args, ValueEnum};
use hz_core::numtheory::{Ring, ZpCtx};
use hz_core::qexp::json::Coefficient;
use hz_core::qexp::{
    diagonal_restrict, eisenstein_hilbert, eisenstein_level_one, parse_expansion, AnyExpansion, EllipticQExp,
    HilbertQExp, PrimeGenerator,
};
use hz_core::realquad::{make_field, Place};
use num_bigint::BigInt;
use serde_json::Value;

use crate::{check, read_input, CmdResult, Ctx};

#[derive(Args)]
pub struct RestrictArgs {
    /// Hilbert expansion document to restrict.
    #[arg(long, conflicts_with_all = ["d", "eisenstein"])]
    input: Option<PathBuf>,
    /// Build the Eisenstein series over Q(sqrt d) instead of reading a file.
    #[arg(long, requires = "eisenstein")]
    d: Option<i64>,
    /// Parallel weight k of the Eisenstein series (2 or 4).
    #[arg(long, requires = "d")]
    eisenstein: Option<i32>,
    /// Keep coefficients at nu with trace up to this bound.
    #[arg(long, default_value_t = 30)]
    trace_bound: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PlaceArg {
    P1,
    P2,
}

impl From<PlaceArg> for Place {
    fn from(p: PlaceArg) -> Place {
        match p {
            PlaceArg::P1 => Place::First,
            PlaceArg::P2 => Place::Second,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Op {
    /// a_n -> a_{pn}
    U,
    /// a_n -> a_{n/p}
    V,
    /// Kill coefficients divisible by p (at the given places for Hilbert input).
    Deplete,
    /// n a_n
    Theta,
    /// Hecke T_l with trivial character.
    T,
    /// d_place^power on a Hilbert expansion over Z/p^m.
    ThetaD,
    /// Diagonal restriction of a Hilbert expansion.
    Restrict,
}

#[derive(Args)]
pub struct OpArgs {
    /// Expansion document.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    op: Op,
    /// The prime for U, V and deplete; for Hilbert U and V the prime above it at --place.
    #[arg(long)]
    p: Option<u64>,
    /// The prime l for T_l.
    #[arg(long)]
    l: Option<u64>,
    /// Prime above p for Hilbert operators.
    #[arg(long, value_enum, default_value = "p1")]
    place: PlaceArg,
    /// Deplete at both primes above p (Hilbert input).
    #[arg(long)]
    both_places: bool,
    /// Exponent for theta-d; negative powers need a depleted input.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    power: i64,
    /// Reduce a rational expansion into Z/p^m first, m from --precision.
    #[arg(long)]
    to_zp: Option<u64>,
}

fn elliptic_text<R: Coefficient>(f: &EllipticQExp<R>) -> String {
    f.coeffs.iter().enumerate().map(|(n, a)| format!("{n}\t{}\n", a.to_text())).collect()
}

fn hilbert_text<R: Coefficient>(g: &HilbertQExp<R>) -> String {
    let mut out = format!("0\t{}\n", g.constant.to_text());
    for ((x, n), a) in g.domain.keys().zip(&g.coeffs) {
        let nu = g.domain.nu(x, n);
        out += &format!("{}\t{}\n", nu, a.to_text());
    }
    out
}

fn emit_expansion(ctx: &Ctx, e: &AnyExpansion) {
    let doc: Value = serde_json::from_str(&e.to_json()).expect("expansion JSON is valid");
    ctx.emit(doc, || match e {
        AnyExpansion::EllipticQ(f) => elliptic_text(f),
        AnyExpansion::EllipticZp(f) => elliptic_text(f),
        AnyExpansion::HilbertQ(g) => hilbert_text(g),
        AnyExpansion::HilbertZp(g) => hilbert_text(g),
    });
}

/// Restriction recomputed by bucketing keys on their trace.
fn restrict_by_trace<R: Ring>(g: &HilbertQExp<R>) -> Vec<R> {
    let mut buckets: BTreeMap<BigInt, R> = BTreeMap::new();
    for ((x, n), a) in g.domain.keys().zip(&g.coeffs) {
        let t = g.field.trace(&g.domain.nu(x, n));
        assert!(t.is_integer(), "trace of a domain key is integral");
        let slot = buckets.entry(t.to_integer()).or_insert_with(|| R::zero_in(&g.ctx));
        *slot = slot.add(a);
    }
    let mut out = vec![g.constant.clone()];
    for n in 1..=g.trace_bound() {
        out.push(buckets.remove(&BigInt::from(n)).unwrap_or_else(|| R::zero_in(&g.ctx)));
    }
    out
}

fn check_restriction<R: Ring>(g: &HilbertQExp<R>, f: &EllipticQExp<R>) -> CmdResult {
    check(restrict_by_trace(g) == f.coeffs, || "restriction disagrees with the trace bucketing".into())
}

pub fn restrict(ctx: &Ctx, a: RestrictArgs) -> CmdResult {
    let input = match (&a.input, a.d, a.eisenstein) {
        (Some(path), _, _) => parse_expansion(&read_input(path)?)?,
        (None, Some(d), Some(k)) => {
            AnyExpansion::HilbertQ(eisenstein_hilbert(Arc::new(make_field(d)?), k, a.trace_bound)?)
        }
        _ => return Err(anyhow!("give --input FILE or --d D --eisenstein K").into()),
    };
    let out = match &input {
        AnyExpansion::HilbertQ(g) => {
            let f = diagonal_restrict(g);
            if ctx.verify {
                check_restriction(g, &f)?;
                if a.eisenstein.is_some() {
                    // The restriction is a multiple of the level one Eisenstein series of weight 2k.
                    let e = eisenstein_level_one(2 * g.weight.0, f.bound())?;
                    for n in 0..=f.bound() {
                        check(&f.coeffs[n] * &e.coeffs[1] == &f.coeffs[1] * &e.coeffs[n], || {
                            format!("coefficient {n} is not proportional to the weight {} Eisenstein series", 2 * g.weight.0)
                        })?;
                    }
                }
            }
            AnyExpansion::EllipticQ(f)
        }
        AnyExpansion::HilbertZp(g) => {
            let f = diagonal_restrict(g);
            if ctx.verify {
                check_restriction(g, &f)?;
            }
            AnyExpansion::EllipticZp(f)
        }
        _ => return Err(anyhow!("diag-restrict needs a Hilbert expansion").into()),
    };
    emit_expansion(ctx, &out);
    Ok(())
}

fn need(v: Option<u64>, name: &str) -> anyhow::Result<u64> {
    v.ok_or_else(|| anyhow!("this operator needs --{name}"))
}

/// Apply an operator to an elliptic expansion and check it against the defining formula.
fn elliptic_op<R: Coefficient>(ctx: &Ctx, f: &EllipticQExp<R>, a: &OpArgs) -> anyhow::Result<EllipticQExp<R>> {
    let zero = R::zero_in(&f.ctx);
    let (out, want): (EllipticQExp<R>, Box<dyn Fn(usize) -> R>) = match a.op {
        Op::U => {
            let p = need(a.p, "p")? as usize;
            (f.hecke_u(p as u64)?, Box::new(move |n| f.coeffs[p * n].clone()))
        }
        Op::V => {
            let p = need(a.p, "p")? as usize;
            let z = zero.clone();
            (f.hecke_v(p as u64), Box::new(move |n| if n % p == 0 { f.coeffs[n / p].clone() } else { z.clone() }))
        }
        Op::Deplete => {
            let p = need(a.p, "p")? as usize;
            let z = zero.clone();
            (f.deplete(p as u64), Box::new(move |n| if n % p == 0 { z.clone() } else { f.coeffs[n].clone() }))
        }
        Op::Theta => (f.theta(), Box::new(|n| f.coeffs[n].mul(&R::from_i64_in(&f.ctx, n as i64)))),
        Op::T => {
            let l = need(a.l, "l")?;
            if f.level % l == 0 {
                bail!("T_{l} needs l prime to the level {}", f.level);
            }
            let one = R::one_in(&f.ctx);
            let lk = R::from_i64_in(&f.ctx, l as i64).pow(f.weight.max(1) as u64 - 1);
            let lu = l as usize;
            (
                f.hecke_t(l, &one)?,
                Box::new(move |n| {
                    let mut v = f.coeffs[lu * n].clone();
                    if n % lu == 0 {
                        v = v.add(&lk.mul(&f.coeffs[n / lu]));
                    }
                    v
                }),
            )
        }
        Op::ThetaD | Op::Restrict => bail!("this operator needs a Hilbert expansion"),
    };
    if ctx.verify {
        for n in 0..=out.bound() {
            if out.coeffs[n] != want(n) {
                anyhow::bail!(crate::VerifyError(format!("coefficient {n} disagrees with the defining formula")));
            }
        }
    }
    Ok(out)
}

fn places(a: &OpArgs) -> Vec<Place> {
    if a.both_places {
        vec![Place::First, Place::Second]
    } else {
        vec![a.place.into()]
    }
}

fn hilbert_op<R: Coefficient>(ctx: &Ctx, g: &HilbertQExp<R>, a: &OpArgs) -> anyhow::Result<HilbertOut<R>> {
    Ok(match a.op {
        Op::Restrict => {
            let f = diagonal_restrict(g);
            if ctx.verify && restrict_by_trace(g) != f.coeffs {
                bail!(crate::VerifyError("restriction disagrees with the trace bucketing".into()));
            }
            HilbertOut::Elliptic(f)
        }
        Op::Deplete => {
            let p = need(a.p, "p")?;
            let pl = places(a);
            let h = g.deplete(p, &pl)?;
            if ctx.verify {
                for &place in &pl {
                    if !h.is_depleted(p, place)? {
                        bail!(crate::VerifyError(format!("result is not depleted at {place:?}")));
                    }
                }
                if h.deplete(p, &pl)? != h {
                    bail!(crate::VerifyError("depletion is not idempotent".into()));
                }
            }
            HilbertOut::Hilbert(h)
        }
        Op::U | Op::V => {
            let p = need(a.p, "p")?;
            let gen = PrimeGenerator::new(&g.field, p, a.place.into())?;
            let h = if matches!(a.op, Op::U) { g.hecke_u(&gen)? } else { g.hecke_v(&gen)? };
            if ctx.verify && matches!(a.op, Op::V) {
                let back = h.hecke_u(&gen)?;
                if back != g.truncate(back.trace_bound()) {
                    bail!(crate::VerifyError("U does not undo V".into()));
                }
            }
            HilbertOut::Hilbert(h)
        }
        Op::ThetaD => bail!("theta-d needs an expansion over Z/p^m"),
        Op::Theta | Op::T => bail!("this operator needs an elliptic expansion"),
    })
}

enum HilbertOut<R: Ring> {
    Hilbert(HilbertQExp<R>),
    Elliptic(EllipticQExp<R>),
}

pub fn op(ctx: &Ctx, a: OpArgs) -> CmdResult {
    let mut input = parse_expansion(&read_input(&a.input)?)?;
    if let Some(p) = a.to_zp {
        let zctx = ZpCtx::new(p, ctx.precision)?;
        input = match input {
            AnyExpansion::EllipticQ(f) => AnyExpansion::EllipticZp(f.to_zp(zctx)?),
            AnyExpansion::HilbertQ(g) => AnyExpansion::HilbertZp(g.to_zp(zctx)?),
            _ => return Err(anyhow!("--to-zp needs a rational expansion").into()),
        };
    }
    let out = match &input {
        AnyExpansion::EllipticQ(f) => AnyExpansion::EllipticQ(elliptic_op(ctx, f, &a)?),
        AnyExpansion::EllipticZp(f) => AnyExpansion::EllipticZp(elliptic_op(ctx, f, &a)?),
        AnyExpansion::HilbertQ(g) => match hilbert_op(ctx, g, &a)? {
            HilbertOut::Hilbert(h) => AnyExpansion::HilbertQ(h),
            HilbertOut::Elliptic(f) => AnyExpansion::EllipticQ(f),
        },
        AnyExpansion::HilbertZp(g) if matches!(a.op, Op::ThetaD) => {
            let place: Place = a.place.into();
            let h = g.theta_d_pow(place, a.power)?;
            if ctx.verify {
                // d^-e d^e is the identity on expansions depleted at the place.
                let back = h.theta_d_pow(place, -a.power)?;
                if back != g.deplete(g.ctx.p, &[place])? {
                    return Err(crate::Fail::Verify("d^-e d^e differs from the depletion".into()));
                }
            }
            AnyExpansion::HilbertZp(h)
        }
        AnyExpansion::HilbertZp(g) => match hilbert_op(ctx, g, &a)? {
            HilbertOut::Hilbert(h) => AnyExpansion::HilbertZp(h),
            HilbertOut::Elliptic(f) => AnyExpansion::EllipticZp(f),
        },
    };
    emit_expansion(ctx, &out);
    Ok(())
}
