use anyhow::anyhow;
use clap::Args as ClapArgs;
use hz_core::asai::parse_quintic;
use hz_core::realquad::make_field;
use hz_core::sieve::{find_admissible, parse_weierstrass, verify_witness, EllipticCurveData, SieveInstance};
use serde_json::json;

use crate::{check, CmdResult, Ctx, Fail};

#[derive(ClapArgs)]
pub struct Args {
    /// Squarefree d with L = Q(sqrt d).
    #[arg(long, default_value_t = 2869)]
    d: i64,
    /// Quintic coefficients, leading coefficient first.
    #[arg(long, default_value = "1,0,0,0,-1,-1", allow_hyphen_values = true)]
    quintic: String,
    /// Bundled curve label.
    #[arg(long, default_value = "11a1", conflicts_with = "weierstrass")]
    curve: String,
    /// Curve coefficients a1,a2,a3,a4,a6; needs --conductor.
    #[arg(long, requires = "conductor", allow_hyphen_values = true)]
    weierstrass: Option<String>,
    /// Conductor of the --weierstrass curve.
    #[arg(long)]
    conductor: Option<u64>,
    /// Primes are searched in [pmin, pmax).
    #[arg(long, default_value_t = 3)]
    pmin: u64,
    #[arg(long, default_value_t = 10_000)]
    pmax: u64,
    /// Height bound for the narrowly principal generator search.
    #[arg(long, default_value_t = 30)]
    height_bound: u64,
    /// Also print the CSV summary (text format only).
    #[arg(long)]
    summary: bool,
}

pub fn run(ctx: &Ctx, a: Args) -> CmdResult {
    let field = make_field(a.d)?;
    let quintic = parse_quintic(&a.quintic)?;
    let curve = match (&a.weierstrass, a.conductor) {
        (Some(w), Some(n)) => parse_weierstrass(w, n)?,
        _ => EllipticCurveData::by_label(&a.curve)
            .ok_or_else(|| anyhow!("unknown curve {}; bundled: {}", a.curve, EllipticCurveData::labels().join(", ")))?,
    };
    if a.pmax < a.pmin {
        return Err(anyhow!("empty range {}..{}", a.pmin, a.pmax).into());
    }
    let inst = SieveInstance::new(field, quintic, curve)?;
    let rep = find_admissible(&inst, a.pmin, a.pmax, a.height_bound)?;
    let s = &rep.stats;
    let mut doc = serde_json::to_value(&rep)?;
    doc["resolvent_matches_field"] = json!(inst.resolvent_matches_field());
    ctx.emit(
        doc,
        || {
            let mut out = rep.to_jsonl();
            if a.summary {
                out += &rep.to_csv_summary();
            }
            out
        },
    );
    if ctx.verify {
        for r in &rep.admissible {
            verify_witness(&inst, r).map_err(|e| Fail::Verify(format!("p = {}: {e}", r.p)))?;
        }
        check(s.prefilter_exceptions.is_empty(), || {
            format!("congruence prefilter passed but the unit condition failed at {:?}", s.prefilter_exceptions)
        })?;
    }
    if rep.admissible.is_empty() {
        return Err(Fail::NoneFound);
    }
    Ok(())
}
