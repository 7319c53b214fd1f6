//! Hecke eigensystems and p-stabilisation.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::HeckeError;
use crate::numtheory::ring::{format_rational, parse_rational};
use crate::numtheory::{hensel_unit_root, NumError, Zp, ZpCtx};
use crate::qexp::EllipticQExp;

/// Whether the system belongs to an elliptic form or a Hilbert form over Q(sqrt d).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldTag {
    #[default]
    Elliptic,
    Hilbert {
        d: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_p1: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_p2: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub label: String,
    pub weight: i32,
    pub level: u64,
    pub character: String,
    /// chi(l) for a nontrivial character; absent entries are an error when needed.
    pub character_values: BTreeMap<u64, BigRational>,
    pub ap_table: BTreeMap<u64, BigRational>,
    pub up_eigenvalue: Option<BigRational>,
    pub field: FieldTag,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenDoc {
    label: String,
    weight: i32,
    level: u64,
    #[serde(default = "trivial")]
    character: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    character_values: Vec<(u64, String)>,
    ap_table: Vec<(u64, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    up_eigenvalue: Option<String>,
    #[serde(default)]
    field: FieldTag,
}

fn trivial() -> String {
    "trivial".into()
}

const MAX_TABLE: usize = 100_000;

fn table(entries: Vec<(u64, String)>) -> Result<BTreeMap<u64, BigRational>, HeckeError> {
    if entries.len() > MAX_TABLE {
        return Err(HeckeError::Parse("table too long".into()));
    }
    let mut out = BTreeMap::new();
    for (l, v) in entries {
        let q = parse_rational(&v).ok_or_else(|| HeckeError::Parse(format!("bad value {v:?}")))?;
        if out.insert(l, q).is_some() {
            return Err(HeckeError::Parse(format!("duplicate entry for {l}")));
        }
    }
    Ok(out)
}

/// Parse eigendata JSON: `{label, weight, level, ap_table: [[l, "a"]], up_eigenvalue?}`.
pub fn parse_eigensystem(s: &str) -> Result<EigenSystem, HeckeError> {
    let doc: EigenDoc = serde_json::from_str(s).map_err(|e| HeckeError::Parse(e.to_string()))?;
    if doc.level == 0 {
        return Err(HeckeError::Parse("level must be positive".into()));
    }
    let up_eigenvalue = match doc.up_eigenvalue {
        Some(v) => Some(parse_rational(&v).ok_or_else(|| HeckeError::Parse(format!("bad value {v:?}")))?),
        None => None,
    };
    Ok(EigenSystem {
        label: doc.label,
        weight: doc.weight,
        level: doc.level,
        character: doc.character,
        character_values: table(doc.character_values)?,
        ap_table: table(doc.ap_table)?,
        up_eigenvalue,
        field: doc.field,
    })
}

impl EigenSystem {
    pub fn new(label: &str, weight: i32, level: u64, ap: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        EigenSystem {
            label: label.into(),
            weight,
            level,
            character: trivial(),
            character_values: BTreeMap::new(),
            ap_table: ap.into_iter().collect(),
            up_eigenvalue: None,
            field: FieldTag::Elliptic,
        }
    }

    pub fn to_json(&self) -> String {
        let fmt = |m: &BTreeMap<u64, BigRational>| m.iter().map(|(l, v)| (*l, format_rational(v))).collect();
        let doc = EigenDoc {
            label: self.label.clone(),
            weight: self.weight,
            level: self.level,
            character: self.character.clone(),
            character_values: fmt(&self.character_values),
            ap_table: fmt(&self.ap_table),
            up_eigenvalue: self.up_eigenvalue.as_ref().map(format_rational),
            field: self.field.clone(),
        };
        serde_json::to_string(&doc).expect("eigendata serializes")
    }

    pub fn ap_zp(&self, l: u64, ctx: ZpCtx) -> Result<Zp, HeckeError> {
        let q = self.ap_table.get(&l).ok_or(HeckeError::MissingEigenvalue(l))?;
        Ok(Zp::from_rational(ctx, q)?)
    }

    /// chi(l), equal to 1 for the trivial character.
    pub fn chi_zp(&self, l: u64, ctx: ZpCtx) -> Result<Zp, HeckeError> {
        if self.character == "trivial" {
            return Ok(ctx.one());
        }
        let q = self.character_values.get(&l).ok_or(HeckeError::MissingEigenvalue(l))?;
        Ok(Zp::from_rational(ctx, q)?)
    }

    /// Eigenvalues of the Hecke operators away from p as residues.
    pub fn eigenvalues_zp(&self, ctx: ZpCtx) -> Result<BTreeMap<u64, Zp>, HeckeError> {
        self.ap_table.iter().map(|(l, q)| Ok((*l, Zp::from_rational(ctx, q)?))).collect()
    }
}

/// Simple roots in Z/p^m of X^2 - a X + b, lifted from F_p by Newton iteration.
pub fn quadratic_roots(a: &Zp, b: &Zp) -> Result<Vec<Zp>, HeckeError> {
    let ctx = a.ctx;
    let p = ctx.p;
    if p > 1 << 24 {
        return Err(HeckeError::PrecisionExhausted("prime too large for root search".into()));
    }
    let f = |x: Zp| x * x - *a * x + *b;
    let mut roots = Vec::new();
    for r0 in 0..p {
        let x0 = Zp::new(ctx, r0);
        if f(x0).r % p != 0 {
            continue;
        }
        let df0 = ctx.int(2) * x0 - *a;
        if !df0.is_unit() {
            // Repeated root mod p: the lift is not determined.
            return Err(HeckeError::RootsNotRational);
        }
        let mut x = x0;
        for _ in 0..=2 * ctx.m + 2 {
            let v = f(x);
            if v.r == 0 {
                break;
            }
            x = x - v * (ctx.int(2) * x - *a).inv()?;
        }
        roots.push(x);
    }
    Ok(roots)
}

/// An ordinary p-stabilisation f_alpha(q) = f(q) - beta f(q^p).
#[derive(Clone, Debug, PartialEq)]
pub struct Stabilization {
    pub system: EigenSystem,
    pub alpha: Zp,
    pub beta: Zp,
}

/// Stabilise an eigensystem of level prime to p. Weight >= 2 picks the unit root;
/// weight one picks the root with the smaller residue (the other is `beta`).
pub fn stabilize(f: &EigenSystem, p: u64, m: u32) -> Result<Stabilization, HeckeError> {
    if f.level % p == 0 {
        return Err(HeckeError::LevelNotPrimeToP(p));
    }
    let ctx = ZpCtx::new(p, m)?;
    let a = f.ap_zp(p, ctx)?;
    if f.weight < 1 {
        return Err(HeckeError::QExp(crate::qexp::QExpError::UnsupportedWeight(f.weight)));
    }
    let b = f.chi_zp(p, ctx)? * ctx.int(p as i64).pow((f.weight - 1) as u64);
    let (alpha, beta) = if f.weight >= 2 {
        let alpha = hensel_unit_root(&a, &b).map_err(|e| match e {
            NumError::NotOrdinary => HeckeError::NotOrdinary(p),
            other => other.into(),
        })?;
        (alpha, b * alpha.inv()?)
    } else {
        let roots = quadratic_roots(&a, &b)?;
        if roots.len() != 2 {
            return Err(HeckeError::RootsNotRational);
        }
        (roots[0], roots[1])
    };
    let mut system = f.clone();
    system.label = format!("{}_alpha", f.label);
    system.level = f.level * p;
    system.up_eigenvalue = Some(BigRational::from_integer(alpha.r.into()));
    Ok(Stabilization { system, alpha, beta })
}

/// f(q) - beta f(q^p) at the bound of f.
pub fn stabilize_expansion(f: &EllipticQExp<Zp>, beta: &Zp, p: u64) -> EllipticQExp<Zp> {
    let p = p as usize;
    let mut out = f.clone();
    for n in (0..=f.bound()).step_by(p) {
        out.coeffs[n] = f.coeffs[n] - *beta * f.coeffs[n / p];
    }
    out.level = f.level * p as u64;
    out
}

/// Ordinary stabilisations of a parallel weight one Hilbert eigensystem at a split p:
/// one for each choice of U eigenvalue at the two primes above p.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertStabilization {
    pub alpha1: Zp,
    pub beta1: Zp,
    pub alpha2: Zp,
    pub beta2: Zp,
}

/// Roots of X^2 - a_i X + chi(p_i) at both primes; returns every (alpha1, alpha2)
/// choice, four when the roots at each prime are distinct units.
pub fn stabilize_hilbert(a1: &Zp, chi1: &Zp, a2: &Zp, chi2: &Zp) -> Result<Vec<HilbertStabilization>, HeckeError> {
    let r1 = quadratic_roots(a1, chi1)?;
    let r2 = quadratic_roots(a2, chi2)?;
    if r1.len() != 2 || r2.len() != 2 {
        return Err(HeckeError::RootsNotRational);
    }
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            out.push(HilbertStabilization { alpha1: r1[i], beta1: r1[1 - i], alpha2: r2[j], beta2: r2[1 - j] });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::ring::int;

    #[test]
    fn stabilize_11a1_at_3() {
        let f = EigenSystem::new("11a1", 2, 11, [(2, int(-2)), (3, int(-1)), (5, int(1))]);
        let s = stabilize(&f, 3, 6).unwrap();
        assert_eq!(s.alpha.r % 3, 2);
        let ctx = s.alpha.ctx;
        assert_eq!(s.alpha * s.alpha - ctx.int(-1) * s.alpha + ctx.int(3), ctx.zero());
        assert_eq!(s.alpha + s.beta, ctx.int(-1));
        assert_eq!(s.system.level, 33);
        let bad = EigenSystem::new("x", 2, 11, [(3, int(3))]);
        assert_eq!(stabilize(&bad, 3, 4), Err(HeckeError::NotOrdinary(3)));
        assert_eq!(stabilize(&f, 11, 4), Err(HeckeError::LevelNotPrimeToP(11)));
    }

    #[test]
    fn four_hilbert_stabilizations() {
        let ctx = ZpCtx::new(11, 4).unwrap();
        // Roots {2, 5} at p1 and {3, 7} at p2.
        let st = stabilize_hilbert(&ctx.int(7), &ctx.int(10), &ctx.int(10), &ctx.int(21)).unwrap();
        assert_eq!(st.len(), 4);
        for s in &st {
            assert_eq!(s.alpha1 * s.beta1, ctx.int(10));
            assert_eq!(s.alpha2 + s.beta2, ctx.int(10));
        }
        let mut pairs: Vec<_> = st.iter().map(|s| (s.alpha1.r, s.alpha2.r)).collect();
        pairs.dedup();
        assert_eq!(pairs.len(), 4);
        // Repeated root: (X - 2)^2.
        assert_eq!(stabilize_hilbert(&ctx.int(4), &ctx.int(4), &ctx.int(10), &ctx.int(21)), Err(HeckeError::RootsNotRational));
    }

    #[test]
    fn eigendata_json_round_trip() {
        let s = r#"{"label":"11a1","weight":2,"level":11,"character":"trivial","ap_table":[[2,"-2"],[3,"-1"]],"field":{"type":"elliptic"}}"#;
        let e = parse_eigensystem(s).unwrap();
        assert_eq!(e.to_json(), s);
        assert!(parse_eigensystem(r#"{"label":"x","weight":2,"level":0,"ap_table":[]}"#).is_err());
        assert!(parse_eigensystem(r#"{"label":"x","weight":2,"level":1,"ap_table":[[2,"1"],[2,"1"]]}"#).is_err());
    }

    #[test]
    fn stabilized_expansion_is_up_eigen() {
        let ctx = ZpCtx::new(7, 5).unwrap();
        // Level one Eisenstein series of weight 4 is a T_7 eigenform with a_7 = 1 + 7^3.
        let e = crate::qexp::eisenstein_level_one(4, 200).unwrap().to_zp(ctx).unwrap();
        let f = EigenSystem::new("E4", 4, 1, [(7, int(344))]);
        let s = stabilize(&f, 7, 5).unwrap();
        let g = stabilize_expansion(&e, &s.beta, 7);
        let u = g.hecke_u(7).unwrap();
        assert_eq!(u.coeffs[1..], g.scale(&s.alpha).coeffs[1..=u.bound()]);
    }
}
