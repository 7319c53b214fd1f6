use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::bail;
use clap::Args as ClapArgs;
use hz_core::asai::quintic::{factor_degrees_mod_p, root_product, root_sum};
use hz_core::asai::{
    asai_frobenius_eigenvalues, distinct_mod_p, frobenius_class_quintic, ht_weight_table, parse_quintic,
    parse_rep_json, tensor_induce, AsaiRep, FiniteGroup, IcosahedralExample, RootOfUnity,
};
use num_rational::Rational64;
use serde_json::{json, Value};

use crate::{check, read_input, CmdResult, Ctx};

#[derive(ClapArgs)]
pub struct Args {
    /// Quintic coefficients, leading coefficient first.
    #[arg(long, default_value = "1,0,0,0,-1,-1", allow_hyphen_values = true)]
    quintic: String,
    /// Primes at which to report the Frobenius data (comma separated).
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    /// Two-dimensional representation document to tensor-induce.
    #[arg(long, conflicts_with_all = ["p", "icosahedral"])]
    rep: Option<PathBuf>,
    /// Tensor-induce the bundled icosahedral representation.
    #[arg(long, conflicts_with = "p")]
    icosahedral: bool,
}

fn sign_root(s: i64) -> RootOfUnity {
    if s == 1 {
        RootOfUnity::new(0, 1)
    } else {
        RootOfUnity::new(1, 2)
    }
}

fn frobenius(ctx: &Ctx, f: &[i64], p: u64) -> anyhow::Result<(Value, String)> {
    let class = frobenius_class_quintic(f, p)?;
    let eig = asai_frobenius_eigenvalues(&class);
    let distinct = distinct_mod_p(&eig, p);
    let (k, s) = root_sum(&eig)?;
    let prod = root_product(&eig);
    if ctx.verify {
        let mut degs = factor_degrees_mod_p(f, p);
        degs.sort_unstable_by(|a, b| b.cmp(a));
        if degs != class.parts() {
            bail!(crate::VerifyError(format!("p = {p}: factor degrees {degs:?} differ from the class")));
        }
        if k.as_rational(&s) != Some(Rational64::from_integer(class.standard_character())) {
            bail!(crate::VerifyError(format!("p = {p}: eigenvalue sum is not fix - 1")));
        }
        if prod != sign_root(class.sign()) {
            bail!(crate::VerifyError(format!("p = {p}: eigenvalue product is not the sign")));
        }
    }
    let names: Vec<String> = eig.iter().map(|r| r.to_string()).collect();
    let trace = k.format(&s);
    let doc = json!({
        "p": p,
        "class": class.to_string(),
        "eigenvalues": names,
        "distinct_mod_p": distinct,
        "trace": trace,
        "det": prod.to_string(),
    });
    let text = format!("{p}\t{class}\t[{}]\tdistinct={distinct}\ttrace={trace}\tdet={prod}\n", names.join(", "));
    Ok((doc, text))
}

/// Character values grouped by element order, with multiplicities.
fn character_summary(rep: &AsaiRep, group: &FiniteGroup) -> Vec<(u64, String, usize)> {
    let mut m: BTreeMap<(u64, String), usize> = BTreeMap::new();
    for g in 0..group.order {
        *m.entry((group.element_order(g), rep.field.format(&rep.character(g)))).or_default() += 1;
    }
    m.into_iter().map(|((o, c), n)| (o, c, n)).collect()
}

fn induced(ctx: &Ctx, rep2: &hz_core::asai::FiniteRep2) -> CmdResult {
    let rep = tensor_induce(rep2)?;
    let group = &rep2.group;
    if ctx.verify {
        rep.verify_homomorphism(group)?;
        let chars: Vec<_> = (0..group.order).map(|g| rep.character(g)).collect();
        for g in 0..group.order {
            for h in 0..group.order {
                let c = group.mul(group.mul(h, g), group.inv(h));
                check(chars[c] == chars[g], || format!("character differs on conjugates {g} and {c}"))?;
            }
        }
    }
    let rows = character_summary(&rep, group);
    ctx.emit(
        json!({
            "group_order": group.order,
            "dimension": 4,
            "characters": rows.iter().map(|(o, c, n)| json!({"order": o, "character": c, "count": n})).collect::<Vec<_>>(),
        }),
        || {
            let mut out = format!("group order {}\norder\tcount\tcharacter\n", group.order);
            for (o, c, n) in &rows {
                out += &format!("{o}\t{n}\t{c}\n");
            }
            out
        },
    );
    Ok(())
}

pub fn run(ctx: &Ctx, a: Args) -> CmdResult {
    if let Some(path) = &a.rep {
        return induced(ctx, &parse_rep_json(&read_input(path)?)?);
    }
    if a.icosahedral {
        return induced(ctx, &IcosahedralExample::build()?.rep);
    }
    if a.p.is_empty() {
        return Err(anyhow::anyhow!("give --p, --rep FILE or --icosahedral").into());
    }
    let f = parse_quintic(&a.quintic)?;
    let mut docs = Vec::new();
    let mut text = String::new();
    for &p in &a.p {
        let (d, t) = frobenius(ctx, &f, p)?;
        docs.push(d);
        text += &t;
    }
    ctx.emit(Value::Array(docs), || text);
    Ok(())
}

#[derive(ClapArgs)]
pub struct HtArgs {
    /// Weights l (comma separated).
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    weight: Vec<i64>,
}

pub fn ht(ctx: &Ctx, a: HtArgs) -> CmdResult {
    let tables: Vec<_> = a.weight.iter().map(|&l| ht_weight_table(l)).collect();
    if ctx.verify {
        for t in &tables {
            let l = t.weight;
            let three: Vec<i64> = t.three_step.iter().flatten().copied().collect();
            let four: Vec<i64> = t.four_step.iter().flatten().copied().collect();
            check(three.len() == 4 && three.iter().sum::<i64>() == -4, || format!("l = {l}: three-step pieces wrong"))?;
            check(four.len() == 8 && four.iter().sum::<i64>() == -4, || format!("l = {l}: four-step pieces wrong"))?;
            check(t.fil2_negative == (l >= 2), || format!("l = {l}: Fil^2 sign predicate wrong"))?;
        }
    }
    ctx.emit(serde_json::to_value(&tables)?, || {
        let mut out = String::new();
        for t in &tables {
            out += &format!(
                "l={}\tthree_step={:?}\tfour_step={:?}\tfil2_negative={}\n",
                t.weight, t.three_step, t.four_step, t.fil2_negative
            );
        }
        out
    });
    Ok(())
}
