//! JSON import and export of expansions.
//!
//! Elliptic:
//! `{"kind":"elliptic","weight":k,"level":N,"character":"..","ring":R,"bound":B,"entries":[[n,"a_n"],..]}`
//!
//! Hilbert:
//! `{"kind":"hilbert","field":d,"weight":[k1,k2],"level":N,"character":"..","ring":R,"trace_bound":T,
//! "constant":"a_0","entries":[[["a","b"],"a(nu)"],..]}` with nu = a + b w.
//!
//! R is `{"type":"rational"}` or `{"type":"padic","p":p,"m":m}`. Entries must cover the
//! whole domain exactly once; p-adic values are written as residues in [0, p^m).

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::elliptic::{EllipticQExp, MAX_BOUND};
use super::hilbert::HilbertQExp;
use super::QExpError;
use crate::numtheory::ring::{format_rational, parse_rational, Ring};
use crate::numtheory::{Zp, ZpCtx};
use crate::realquad::{make_field, QuadElem, TraceDomain};

/// Limits applied to untrusted input.
pub const MAX_PARSE_BOUND: usize = 200_000;
pub const MAX_PARSE_TRACE: u32 = 2_000;
pub const MAX_PARSE_FIELD: i64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingTag {
    Rational,
    Padic { p: u64, m: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyExpansion {
    EllipticQ(EllipticQExp<BigRational>),
    EllipticZp(EllipticQExp<Zp>),
    HilbertQ(HilbertQExp<BigRational>),
    HilbertZp(HilbertQExp<Zp>),
}

/// Coefficient rings with a textual form.
pub trait Coefficient: Ring {
    fn tag(ctx: &Self::Ctx) -> RingTag;
    fn to_text(&self) -> String;
    fn from_text(ctx: &Self::Ctx, s: &str) -> Option<Self>;
}

impl Coefficient for BigRational {
    fn tag(_: &()) -> RingTag {
        RingTag::Rational
    }
    fn to_text(&self) -> String {
        format_rational(self)
    }
    fn from_text(_: &(), s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

impl Coefficient for Zp {
    fn tag(ctx: &ZpCtx) -> RingTag {
        RingTag::Padic { p: ctx.p, m: ctx.m }
    }
    fn to_text(&self) -> String {
        self.r.to_string()
    }
    fn from_text(ctx: &ZpCtx, s: &str) -> Option<Self> {
        Zp::from_rational(*ctx, &parse_rational(s)?).ok()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EllipticDoc {
    kind: String,
    weight: i32,
    level: u64,
    character: String,
    ring: RingTag,
    bound: usize,
    entries: Vec<(usize, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HilbertDoc {
    kind: String,
    field: i64,
    weight: (i32, i32),
    level: u64,
    character: String,
    ring: RingTag,
    trace_bound: u32,
    constant: String,
    entries: Vec<(QuadElem, String)>,
}

fn bad(msg: impl Into<String>) -> QExpError {
    QExpError::Parse(msg.into())
}

fn elliptic_doc<R: Coefficient>(f: &EllipticQExp<R>) -> EllipticDoc {
    EllipticDoc {
        kind: "elliptic".into(),
        weight: f.weight,
        level: f.level,
        character: f.character.clone(),
        ring: R::tag(&f.ctx),
        bound: f.bound(),
        entries: f.coeffs.iter().enumerate().map(|(n, a)| (n, a.to_text())).collect(),
    }
}

fn hilbert_doc<R: Coefficient>(g: &HilbertQExp<R>) -> HilbertDoc {
    HilbertDoc {
        kind: "hilbert".into(),
        field: g.field.d,
        weight: g.weight,
        level: g.level,
        character: g.character.clone(),
        ring: R::tag(&g.ctx),
        trace_bound: g.trace_bound(),
        constant: g.constant.to_text(),
        entries: g.domain.keys().zip(&g.coeffs).map(|((x, n), a)| (g.domain.nu(x, n), a.to_text())).collect(),
    }
}

fn elliptic_from_doc<R: Coefficient>(doc: EllipticDoc, ctx: R::Ctx) -> Result<EllipticQExp<R>, QExpError> {
    if doc.bound > MAX_PARSE_BOUND.min(MAX_BOUND) {
        return Err(QExpError::BoundTooLarge(doc.bound as u64));
    }
    if doc.entries.len() != doc.bound + 1 {
        return Err(bad(format!("expected {} entries, got {}", doc.bound + 1, doc.entries.len())));
    }
    let mut coeffs: Vec<Option<R>> = vec![None; doc.bound + 1];
    for (n, v) in &doc.entries {
        let slot = coeffs.get_mut(*n).ok_or_else(|| bad(format!("index {n} beyond bound")))?;
        if slot.is_some() {
            return Err(bad(format!("duplicate index {n}")));
        }
        *slot = Some(R::from_text(&ctx, v).ok_or_else(|| bad(format!("bad coefficient {v:?}")))?);
    }
    let coeffs = coeffs.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing index"))?;
    let mut f = EllipticQExp::new(ctx, doc.weight, doc.level, coeffs)?;
    f.character = doc.character;
    Ok(f)
}

fn hilbert_from_doc<R: Coefficient>(doc: HilbertDoc, ctx: R::Ctx) -> Result<HilbertQExp<R>, QExpError> {
    if doc.trace_bound > MAX_PARSE_TRACE {
        return Err(QExpError::BoundTooLarge(doc.trace_bound as u64));
    }
    if doc.field > MAX_PARSE_FIELD {
        return Err(bad(format!("field parameter {} too large", doc.field)));
    }
    let field = Arc::new(make_field(doc.field)?);
    let domain = TraceDomain::new(&field, doc.trace_bound)?;
    if doc.entries.len() != domain.len() {
        return Err(bad(format!("expected {} entries, got {}", domain.len(), doc.entries.len())));
    }
    let mut coeffs: Vec<Option<R>> = vec![None; domain.len()];
    for (nu, v) in &doc.entries {
        let (x, n) = TraceDomain::key_of(&field, nu).map_err(|_| bad("key outside the inverse different"))?;
        let idx = u32::try_from(n)
            .ok()
            .and_then(|n| domain.index(x, n))
            .ok_or_else(|| bad("key is not totally positive or exceeds the trace bound"))?;
        if coeffs[idx].is_some() {
            return Err(bad("duplicate key"));
        }
        coeffs[idx] = Some(R::from_text(&ctx, v).ok_or_else(|| bad(format!("bad coefficient {v:?}")))?);
    }
    let coeffs = coeffs.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing key"))?;
    let constant = R::from_text(&ctx, &doc.constant).ok_or_else(|| bad("bad constant term"))?;
    let mut g = HilbertQExp::new(field, doc.trace_bound, ctx, doc.weight, constant, coeffs)?;
    g.level = doc.level;
    g.character = doc.character;
    Ok(g)
}

fn padic_ctx(p: u64, m: u32) -> Result<ZpCtx, QExpError> {
    Ok(ZpCtx::new(p, m)?)
}

/// Parse any expansion document.
pub fn parse_expansion(s: &str) -> Result<AnyExpansion, QExpError> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| bad(e.to_string()))?;
    let kind = v.get("kind").and_then(|k| k.as_str()).ok_or_else(|| bad("missing kind"))?;
    match kind {
        "elliptic" => {
            let doc: EllipticDoc = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
            match doc.ring {
                RingTag::Rational => Ok(AnyExpansion::EllipticQ(elliptic_from_doc(doc, ())?)),
                RingTag::Padic { p, m } => Ok(AnyExpansion::EllipticZp(elliptic_from_doc(doc, padic_ctx(p, m)?)?)),
            }
        }
        "hilbert" => {
            let doc: HilbertDoc = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
            match doc.ring {
                RingTag::Rational => Ok(AnyExpansion::HilbertQ(hilbert_from_doc(doc, ())?)),
                RingTag::Padic { p, m } => Ok(AnyExpansion::HilbertZp(hilbert_from_doc(doc, padic_ctx(p, m)?)?)),
            }
        }
        other => Err(bad(format!("unknown kind {other:?}"))),
    }
}

impl AnyExpansion {
    /// Canonical compact JSON.
    pub fn to_json(&self) -> String {
        let r = match self {
            AnyExpansion::EllipticQ(f) => serde_json::to_string(&elliptic_doc(f)),
            AnyExpansion::EllipticZp(f) => serde_json::to_string(&elliptic_doc(f)),
            AnyExpansion::HilbertQ(g) => serde_json::to_string(&hilbert_doc(g)),
            AnyExpansion::HilbertZp(g) => serde_json::to_string(&hilbert_doc(g)),
        };
        r.expect("documents serialize")
    }

    pub fn ring(&self) -> RingTag {
        match self {
            AnyExpansion::EllipticQ(_) | AnyExpansion::HilbertQ(_) => RingTag::Rational,
            AnyExpansion::EllipticZp(f) => Zp::tag(&f.ctx),
            AnyExpansion::HilbertZp(g) => Zp::tag(&g.ctx),
        }
    }
}
