//! The automorphic p-adic L-value at a weight two crystalline point, as a chain
//! of q-expansion operations followed by Hecke linear algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::space::HeckeSpace;
use super::HeckeError;
use crate::numtheory::ring::{format_rational, parse_rational};
use crate::numtheory::{Padic, Zp, ZpCtx};
use crate::qexp::{diagonal_restrict, parse_expansion, AnyExpansion, EllipticQExp, HilbertQExp, QExpError, ResidueCharacter};
use crate::realquad::Place;

/// Arithmetic point data: weight l, the finite-order character chi of p-power
/// conductor, the place carrying the twist and the place mu of the theta operator.
#[derive(Clone, Debug)]
pub struct PointData {
    pub weight: i32,
    pub chi: ResidueCharacter<Zp>,
    pub twist_place: Place,
    pub mu: Place,
    /// Label of the elliptic-side character; anything but trivial needs Gauss sums.
    pub chi_spade: Option<String>,
}

impl PointData {
    pub fn crystalline(chi: ResidueCharacter<Zp>, twist_place: Place, mu: Place) -> Self {
        PointData { weight: 2, chi, twist_place, mu, chi_spade: None }
    }

    /// psi = chi^-1 omega^(1-l), the character applied at the twist place.
    pub fn hilbert_twist(&self) -> Result<ResidueCharacter<Zp>, HeckeError> {
        let w = ResidueCharacter::teichmuller(self.chi.eval(1).ctx, (1 - self.weight) as i64)?;
        Ok(self.chi.inverse().mul(&w)?)
    }
}

/// The eigenform being paired against: its eigenvalues (U_p under p), those of
/// the other eigensystems in the space, and its roots at p.
#[derive(Clone, Debug)]
pub struct TargetData {
    pub eigenvalues: BTreeMap<u64, Zp>,
    pub others: Vec<BTreeMap<u64, Zp>>,
    pub alpha_f: Padic,
    pub beta_f: Padic,
}

#[derive(Clone, Debug)]
pub struct LValue {
    pub value: Padic,
    pub lambda1: Zp,
    pub e_fstar: Padic,
    pub restricted: EllipticQExp<Zp>,
    /// Elliptic twist theta^(l-1) chi_spade |.|^(l-2), recorded as a label.
    pub elliptic_twist: String,
}

/// E(f*) = 1 - beta_f / alpha_f.
pub fn e_fstar(alpha_f: &Padic, beta_f: &Padic) -> Result<Padic, HeckeError> {
    let one = Padic::from_i64(alpha_f.prime(), alpha_f.rel_precision().max(1), 1);
    let e = one.sub(&beta_f.div(alpha_f)?);
    if e.is_zero() {
        return Err(HeckeError::PrecisionExhausted("E(f*) is zero to the working precision".into()));
    }
    Ok(e)
}

/// deplete at both primes above p, twist by chi^-1 omega^(1-l) at the twist place,
/// apply d_mu^(1-l), restrict to the diagonal, take e_ord, project onto the
/// target eigenspace and divide the first coefficient by E(f*).
pub fn lvalue_weight2(
    g: &HilbertQExp<Zp>,
    space: &HeckeSpace,
    target: &TargetData,
    point: &PointData,
) -> Result<LValue, HeckeError> {
    if point.weight != 2 {
        return Err(QExpError::UnsupportedWeight(point.weight).into());
    }
    if point.chi_spade.as_deref().is_some_and(|s| s != "trivial") || point.chi.conductor_exponent() > 1 {
        return Err(HeckeError::WildCharacterUnsupported);
    }
    if g.ctx != space.ctx {
        return Err(QExpError::RingMismatch.into());
    }
    let p = space.p;
    let depleted = g.deplete(p, &[Place::First, Place::Second])?;
    let twisted = depleted.twist_star(&point.hilbert_twist()?, point.twist_place)?;
    let shifted = twisted.theta_d_pow(point.mu, (1 - point.weight) as i64)?;
    let mut restricted = diagonal_restrict(&shifted);
    restricted.weight = space.weight;
    let ord = space.e_ord(&restricted.truncate(restricted.bound().min(space.bound())))?;
    let (_, lambda1) = space.isotypic_project(&ord, &target.eigenvalues, &target.others)?;
    let e = e_fstar(&target.alpha_f, &target.beta_f)?;
    let value = Padic::from_zp(&lambda1).div(&e)?;
    let elliptic_twist = format!("theta^{}*{}|.|^{}", point.weight - 1, point.chi_spade.as_deref().unwrap_or("trivial"), point.weight - 2);
    Ok(LValue { value, lambda1, e_fstar: e, restricted, elliptic_twist })
}

/// A self-contained L-value input: the Hilbert form, a basis of the elliptic
/// space, the target and rival eigensystems and the arithmetic point.
///
/// `{"p":7,"m":4,"hilbert":{..},"basis":[{..},..],"character_values":[[l,"chi(l)"]],
/// "target":[[l,"a_l"]],"others":[[[l,"a_l"]],..],"alpha_f":"..","beta_f":"..",
/// "chi_omega_power":0,"twist_place":"p2","mu":"p1"}`
///
/// Expansions use the expansion document format over Z/p^m. Eigenvalues and roots
/// are rationals; U_p is stored under l = p.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LValueDoc {
    pub p: u64,
    pub m: u32,
    pub hilbert: serde_json::Value,
    pub basis: Vec<serde_json::Value>,
    #[serde(default)]
    pub character_values: Vec<(u64, String)>,
    pub target: Vec<(u64, String)>,
    pub others: Vec<Vec<(u64, String)>>,
    pub alpha_f: String,
    pub beta_f: String,
    #[serde(default)]
    pub chi_omega_power: i64,
    pub twist_place: Place,
    pub mu: Place,
}

/// A parsed `LValueDoc`, ready for `lvalue_weight2`.
#[derive(Clone, Debug)]
pub struct LValueProblem {
    pub hilbert: HilbertQExp<Zp>,
    pub space: HeckeSpace,
    pub target: TargetData,
    pub point: PointData,
}

const MAX_BASIS: usize = 64;

fn perr(msg: impl Into<String>) -> HeckeError {
    HeckeError::Parse(msg.into())
}

fn zp_table(ctx: ZpCtx, t: &[(u64, String)]) -> Result<BTreeMap<u64, Zp>, HeckeError> {
    let mut out = BTreeMap::new();
    for (l, v) in t {
        let q = parse_rational(v).ok_or_else(|| perr(format!("bad value {v:?}")))?;
        if out.insert(*l, Zp::from_rational(ctx, &q)?).is_some() {
            return Err(perr(format!("duplicate entry for {l}")));
        }
    }
    Ok(out)
}

fn zp_text(t: &BTreeMap<u64, Zp>) -> Vec<(u64, String)> {
    t.iter().map(|(l, a)| (*l, a.r.to_string())).collect()
}

fn padic_text(x: &Padic) -> Result<String, HeckeError> {
    let v = x.valuation().ok_or_else(|| perr("root is zero to the working precision"))?;
    let unit = BigInt::from(x.unit_part());
    let p = BigInt::from(x.prime());
    let q = if v >= 0 {
        BigRational::from_integer(unit * num_traits::pow(p, v as usize))
    } else {
        BigRational::new(unit, num_traits::pow(p, v.unsigned_abs() as usize))
    };
    Ok(format_rational(&q))
}

/// Parse an `LValueDoc`.
pub fn parse_lvalue_problem(s: &str) -> Result<LValueProblem, HeckeError> {
    let doc: LValueDoc = serde_json::from_str(s).map_err(|e| perr(e.to_string()))?;
    LValueProblem::from_doc(doc)
}

impl LValueProblem {
    pub fn from_doc(doc: LValueDoc) -> Result<Self, HeckeError> {
        let ctx = ZpCtx::new(doc.p, doc.m)?;
        if doc.basis.len() > MAX_BASIS || doc.others.len() > MAX_BASIS {
            return Err(perr("too many basis vectors"));
        }
        let hilbert = match parse_expansion(&doc.hilbert.to_string())? {
            AnyExpansion::HilbertZp(g) if g.ctx == ctx => g,
            _ => return Err(perr("hilbert must be a Hilbert expansion over Z/p^m")),
        };
        let basis = doc
            .basis
            .iter()
            .map(|v| match parse_expansion(&v.to_string())? {
                AnyExpansion::EllipticZp(f) if f.ctx == ctx => Ok(f),
                _ => Err(perr("basis entries must be elliptic expansions over Z/p^m")),
            })
            .collect::<Result<Vec<_>, HeckeError>>()?;
        let space = HeckeSpace::new(doc.p, basis, zp_table(ctx, &doc.character_values)?)?;
        let root = |s: &str| {
            parse_rational(s).map(|q| Padic::from_rational(doc.p, doc.m, &q)).ok_or_else(|| perr(format!("bad root {s:?}")))
        };
        let target = TargetData {
            eigenvalues: zp_table(ctx, &doc.target)?,
            others: doc.others.iter().map(|t| zp_table(ctx, t)).collect::<Result<_, _>>()?,
            alpha_f: root(&doc.alpha_f)?,
            beta_f: root(&doc.beta_f)?,
        };
        let chi = if doc.chi_omega_power == 0 {
            ResidueCharacter::trivial(&ctx, doc.p, 1)?
        } else {
            ResidueCharacter::teichmuller(ctx, doc.chi_omega_power)?
        };
        let point = PointData::crystalline(chi, doc.twist_place, doc.mu);
        Ok(LValueProblem { hilbert, space, target, point })
    }

    /// The document form; only omega-power characters can be written.
    pub fn to_doc(&self) -> Result<LValueDoc, HeckeError> {
        let ctx = self.space.ctx;
        let label = &self.point.chi.label;
        let chi_omega_power = if self.point.chi.is_trivial() {
            0
        } else {
            label
                .strip_prefix("omega^")
                .and_then(|j| j.parse().ok())
                .ok_or_else(|| perr(format!("character {label} has no document form")))?
        };
        let js = |a: AnyExpansion| serde_json::from_str(&a.to_json()).expect("expansion JSON is valid");
        Ok(LValueDoc {
            p: ctx.p,
            m: ctx.m,
            hilbert: js(AnyExpansion::HilbertZp(self.hilbert.clone())),
            basis: self.space.basis.iter().map(|f| js(AnyExpansion::EllipticZp(f.clone()))).collect(),
            character_values: zp_text(&self.space.character),
            target: zp_text(&self.target.eigenvalues),
            others: self.target.others.iter().map(|t| zp_text(t)).collect(),
            alpha_f: padic_text(&self.target.alpha_f)?,
            beta_f: padic_text(&self.target.beta_f)?,
            chi_omega_power,
            twist_place: self.point.twist_place,
            mu: self.point.mu,
        })
    }

    pub fn solve(&self) -> Result<LValue, HeckeError> {
        lvalue_weight2(&self.hilbert, &self.space, &self.target, &self.point)
    }
}
