use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::Args;
use hz_core::hecke::demo::SyntheticLValue;
use hz_core::hecke::{euler_report, parse_lvalue_problem, EulerInputs, LValue, LValueProblem};
use hz_core::numtheory::ring::parse_rational;
use hz_core::numtheory::{Padic, Zp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{check, read_input, CmdResult, Ctx, Fail};

#[derive(Args)]
pub struct LvalueArgs {
    /// Problem document (Hilbert form, basis, eigensystems, point).
    #[arg(long, conflicts_with = "synthetic")]
    problem: Option<PathBuf>,
    /// Build a reverse-constructed instance over Q(sqrt 2) at p = 7 whose value is known.
    #[arg(long)]
    synthetic: bool,
    /// Planted first coefficient for --synthetic, read modulo 7^4.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    c: i64,
    /// Seed for the synthetic construction.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the problem document used to this path.
    #[arg(long)]
    emit_problem: Option<PathBuf>,
    /// Expected projection coefficient, checked under --verify.
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
}

fn lvalue_json(v: &LValue) -> serde_json::Value {
    json!({
        "value": v.value.to_string(),
        "valuation": v.value.valuation(),
        "lambda1": v.lambda1.r.to_string(),
        "e_fstar": v.e_fstar.to_string(),
        "elliptic_twist": v.elliptic_twist,
    })
}

fn expected(ctx_zp: hz_core::numtheory::ZpCtx, s: &str) -> anyhow::Result<Zp> {
    let q = parse_rational(s).ok_or_else(|| anyhow!("bad expected value {s:?}"))?;
    Ok(Zp::from_rational(ctx_zp, &q)?)
}

pub fn lvalue(ctx: &Ctx, a: LvalueArgs) -> CmdResult {
    let (prob, planted): (LValueProblem, Option<Zp>) = match (&a.problem, a.synthetic) {
        (Some(path), _) => (parse_lvalue_problem(&read_input(path)?)?, None),
        (None, true) => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let inst = SyntheticLValue::new(&mut rng);
            let c = Zp::from_i64(inst.ctx, a.c);
            (inst.problem(c, &mut rng), Some(c))
        }
        (None, false) => return Err(anyhow!("give --problem FILE or --synthetic").into()),
    };
    if let Some(path) = &a.emit_problem {
        let doc = serde_json::to_string(&prob.to_doc()?)?;
        std::fs::write(path, doc + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    let v = prob.solve()?;
    ctx.emit(lvalue_json(&v), || {
        format!(
            "value\t{}\nlambda1\t{}\nE(f*)\t{}\nelliptic_twist\t{}\n",
            v.value, v.lambda1.r, v.e_fstar, v.elliptic_twist
        )
    });
    if ctx.verify {
        let zctx = prob.space.ctx;
        let want = match (&a.expect, planted) {
            (Some(s), _) => Some(expected(zctx, s)?),
            (None, c) => c,
        };
        if let Some(c) = want {
            check(v.lambda1 == c, || format!("projection coefficient {} differs from {}", v.lambda1.r, c.r))?;
            let direct = Padic::from_zp(&c).div(&v.e_fstar)?;
            check(v.value.eq_at_precision(&direct), || "value differs from c / E(f*)".into())?;
        }
        // The document form must reproduce the same value.
        let text = serde_json::to_string(&prob.to_doc()?)?;
        let again = parse_lvalue_problem(&text)?.solve()?;
        check(again.lambda1 == v.lambda1, || "value changes after a document round trip".into())?;
    }
    Ok(())
}

#[derive(Args)]
pub struct EulerArgs {
    /// alpha1,beta1,alpha2,beta2 as rationals.
    #[arg(long, allow_hyphen_values = true)]
    alphas: String,
    /// alpha_f,beta_f as rationals.
    #[arg(long, allow_hyphen_values = true)]
    froots: String,
    /// The prime p.
    #[arg(short, long)]
    p: u64,
    /// Precision; defaults to --precision.
    #[arg(short, long)]
    m: Option<u32>,
    /// Weight l of the Hilbert family.
    #[arg(long, default_value_t = 1)]
    weight: i32,
    /// Exponent of p in the level of f.
    #[arg(long, default_value_t = 0)]
    level_exponent: u32,
    /// U_p eigenvalue of the unstabilised companion, enabling xi and zeta.
    #[arg(long, allow_hyphen_values = true)]
    alpha_f_circ: Option<String>,
    /// Central character values at the two primes above p.
    #[arg(long, allow_hyphen_values = true)]
    chi_circ: Option<String>,
}

fn padics(s: &str, p: u64, m: u32, n: usize) -> anyhow::Result<Vec<Padic>> {
    let v: Vec<Padic> = s
        .split(',')
        .map(|x| {
            parse_rational(x.trim()).map(|q| Padic::from_rational(p, m, &q)).ok_or_else(|| anyhow!("bad rational {x:?}"))
        })
        .collect::<anyhow::Result<_>>()?;
    if v.len() != n {
        bail!("expected {n} comma-separated values, got {}", v.len());
    }
    Ok(v)
}

pub fn euler(ctx: &Ctx, a: EulerArgs) -> CmdResult {
    let m = a.m.unwrap_or(ctx.precision);
    if !hz_core::numtheory::arith::is_prime(a.p) {
        return Err(Fail::Input(anyhow!("{} is not prime", a.p)));
    }
    let r = padics(&a.alphas, a.p, m, 4)?;
    let f = padics(&a.froots, a.p, m, 2)?;
    let circ = a.alpha_f_circ.as_deref().map(|s| padics(s, a.p, m, 1)).transpose()?;
    let chi = a.chi_circ.as_deref().map(|s| padics(s, a.p, m, 2)).transpose()?;
    let inputs = EulerInputs {
        alpha1: r[0].clone(),
        beta1: r[1].clone(),
        alpha2: r[2].clone(),
        beta2: r[3].clone(),
        alpha_f: f[0].clone(),
        beta_f: f[1].clone(),
        weight: a.weight,
        level_exponent: a.level_exponent,
        p: a.p,
        m,
        alpha_f_circ: circ.map(|v| v[0].clone()),
        chi_circ: chi.map(|v| (v[0].clone(), v[1].clone())),
    };
    let rep = euler_report(&inputs)?;
    let doc = rep.to_json();
    ctx.emit(doc.clone(), || {
        let mut out = String::new();
        for key in ["E_fstar", "E_sp", "E_1p", "Upsilon_P0", "xi", "zeta"] {
            if let Some(v) = doc[key].as_object() {
                out += &format!("{key}\t{}\tv = {}\n", v["value"].as_str().unwrap_or(""), v["valuation"]);
            }
        }
        if let Some(u) = doc["Upsilon_P"].as_object() {
            out += &format!("Upsilon_P\t{} * G^{}\n", u["value"].as_str().unwrap_or(""), u["gauss_exponent"]);
        }
        if let Some(r) = doc["xi_reason"].as_str() {
            out += &format!("note\t{r}\n");
        }
        out
    });
    if ctx.verify {
        // Recompute the three basic factors by expanding the products directly.
        let one = Padic::from_i64(a.p, m, 1);
        let (af, bf) = (&inputs.alpha_f, &inputs.beta_f);
        let e_f = one.sub(&bf.div(af)?);
        let mut e_sp = one.clone();
        for x in [&inputs.alpha1, &inputs.beta1] {
            for y in [&inputs.alpha2, &inputs.beta2] {
                e_sp = e_sp.mul(&one.sub(&x.mul(y).div(bf)?));
            }
        }
        let prod = inputs.alpha1.mul(&inputs.beta1).mul(&inputs.alpha2).mul(&inputs.beta2);
        let e_1p = one.sub(&prod.div(&bf.mul(bf))?);
        for (name, got, want) in [("E_fstar", &rep.e_fstar, e_f), ("E_sp", &rep.e_sp, e_sp), ("E_1p", &rep.e_1p, e_1p)] {
            check(got.value.eq_at_precision(&want), || format!("{name} disagrees with the expanded product"))?;
            check(got.valuation == want.valuation(), || format!("{name} valuation disagrees"))?;
        }
    }
    Ok(())
}
