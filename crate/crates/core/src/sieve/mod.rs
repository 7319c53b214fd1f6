//! Search for primes p at which the Hilbert-elliptic construction applies: p
//! splits in L into narrowly principal primes, no totally positive unit is -1
//! mod p, Frobenius in the S5 closure is a 5-cycle, and E is ordinary at p.

pub mod curve;

pub use curve::{ap_count, parse_weierstrass, EllipticCurveData};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::asai::{asai_frobenius_eigenvalues, discriminant, distinct_mod_p, frobenius_class_quintic, AsaiError};
use crate::numtheory::arith::{is_prime, mult_order, pow_mod, primes_in};
use crate::realquad::{
    make_field, narrow_generator, residue_map, split_prime, NarrowOptions, NarrowVerdict, Place, QuadError, QuadElem,
    RealQuadField, Splitting,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("{0} divides the conductor, the quintic discriminant or the field discriminant")]
    ExcludedPrime(u64),
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("{0} is not split")]
    NotSplit(u64),
    #[error("{0} exceeds the point counting limit")]
    PrimeTooLarge(u64),
    #[error("singular curve")]
    SingularCurve,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Asai(#[from] AsaiError),
}

/// Field, quintic (constant term first) and curve.
#[derive(Clone, Debug)]
pub struct SieveInstance {
    pub field: RealQuadField,
    pub quintic: Vec<i64>,
    pub curve: EllipticCurveData,
    pub quintic_disc: BigInt,
}

impl SieveInstance {
    pub fn new(field: RealQuadField, quintic: Vec<i64>, curve: EllipticCurveData) -> Result<Self, SieveError> {
        if quintic.len() != 6 {
            return Err(AsaiError::BadPolynomial.into());
        }
        let quintic_disc = discriminant(&quintic)?;
        Ok(SieveInstance { field, quintic, curve, quintic_disc })
    }

    /// x^5 - x - 1, L = Q(sqrt 2869), 11a1.
    pub fn desk() -> Self {
        let field = make_field(2869).expect("squarefree");
        let curve = EllipticCurveData::by_label("11a1").expect("bundled");
        SieveInstance::new(field, vec![-1, -1, 0, 0, 0, 1], curve).expect("valid quintic")
    }

    pub fn is_excluded(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        self.curve.conductor % p == 0
            || (&self.quintic_disc % &pb).is_zero()
            || self.field.disc % p as i64 == 0
            || self.quintic[5] % p as i64 == 0
            || !self.curve.has_good_reduction(p)
    }

    /// Whether the quadratic resolvent of the quintic is the field L.
    pub fn resolvent_matches_field(&self) -> bool {
        let d = &self.quintic_disc;
        if d.is_negative() || d.is_zero() {
            return false;
        }
        // Squarefree part of the discriminant.
        let mut n = d.clone();
        let mut f = BigInt::from(2);
        while &f * &f <= n {
            while (&n % (&f * &f)).is_zero() {
                n /= &f * &f;
            }
            f += 1;
        }
        n == BigInt::from(self.field.d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitNarrow {
    pub splitting: Splitting,
    pub generator: Option<NarrowVerdict>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnitVerdict {
    /// Order of the totally positive generator modulo the first prime above p.
    pub order: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusVerdict {
    pub cycle_type: Vec<u32>,
    pub eigenvalues: Vec<String>,
    /// Eigenvalues pairwise distinct mod p, whatever the class.
    pub eigenvalues_distinct: bool,
    /// The class is a 5-cycle and p != 5.
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinaryVerdict {
    pub a_p: i64,
    pub pass: bool,
}

/// Intersection of the narrow class field of Q(sqrt d) with Q(zeta_16), by d mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NarrowCase {
    /// d = 1 mod 4: Q.
    Rational,
    /// d = 3 mod 4: Q(i).
    GaussianField,
    /// d = 6 mod 8: Q(sqrt -2).
    MinusTwo,
    /// d = 2 mod 8: Q(sqrt 2).
    PlusTwo,
}

impl NarrowCase {
    pub fn of(d: i64) -> Self {
        match (d.rem_euclid(4), d.rem_euclid(8)) {
            (1, _) => NarrowCase::Rational,
            (3, _) => NarrowCase::GaussianField,
            (_, 6) => NarrowCase::MinusTwo,
            _ => NarrowCase::PlusTwo,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrefilterFlags {
    pub p_is_9_mod_16: bool,
    /// The totally positive unit is an 8th power mod the first prime above p;
    /// None when p is not split or not 1 mod 8.
    pub unit_eighth_power: Option<bool>,
    pub case: NarrowCase,
    /// Both flags hold, which forces the unit condition.
    pub congruence_route: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveResult {
    pub p: u64,
    pub split_narrow: SplitNarrow,
    pub unit_condition: Option<UnitVerdict>,
    pub frobenius: FrobeniusVerdict,
    pub ordinary: OrdinaryVerdict,
    pub admissible: bool,
    pub prefilter: PrefilterFlags,
    pub unchecked: [&'static str; 2],
}

pub const UNCHECKED: [&str; 2] = [
    "nonvanishing of the dual exponential at the chosen point (assumed, not machine-checkable)",
    "semisimplicity of the weight one specialisation (assumed, not machine-checkable)",
];

/// The order of the totally positive unit mod the first prime above p is odd.
pub fn unit_condition(field: &RealQuadField, p: u64) -> Result<UnitVerdict, SieveError> {
    if split_prime(field, p)? != Splitting::Split {
        return Err(SieveError::NotSplit(p));
    }
    let order = crate::realquad::unit_order_mod(field, p, Place::First)?;
    Ok(UnitVerdict { order, pass: order % 2 == 1 })
}

fn unit_residue(field: &RealQuadField, p: u64) -> Result<u64, SieveError> {
    let r = residue_map(field, p, Place::First, 1)?;
    Ok(r.apply(&field.eps_plus)?.r)
}

pub fn prefilter(field: &RealQuadField, p: u64) -> PrefilterFlags {
    let p_is_9_mod_16 = p % 16 == 9;
    let unit_eighth_power = if p % 8 == 1 && matches!(split_prime(field, p), Ok(Splitting::Split)) {
        unit_residue(field, p).ok().map(|e| pow_mod(e, (p - 1) / 8, p) == 1)
    } else {
        None
    };
    PrefilterFlags {
        p_is_9_mod_16,
        unit_eighth_power,
        case: NarrowCase::of(field.d),
        congruence_route: p_is_9_mod_16 && unit_eighth_power == Some(true),
    }
}

pub fn check_assumptions(inst: &SieveInstance, p: u64, height_bound: u64) -> Result<SieveResult, SieveError> {
    if !is_prime(p) {
        return Err(QuadError::NotPrime(p).into());
    }
    if inst.is_excluded(p) {
        return Err(SieveError::ExcludedPrime(p));
    }
    let splitting = split_prime(&inst.field, p)?;
    let (generator, unit) = if splitting == Splitting::Split {
        let v = narrow_generator(&inst.field, p, NarrowOptions { height_bound, certify: true })?;
        (Some(v), Some(unit_condition(&inst.field, p)?))
    } else {
        (None, None)
    };
    let narrow_pass = matches!(generator, Some(NarrowVerdict::Found { .. }));
    let split_narrow = SplitNarrow { splitting, generator, pass: narrow_pass };
    let class = frobenius_class_quintic(&inst.quintic, p)?;
    let ev = asai_frobenius_eigenvalues(&class);
    let frobenius = FrobeniusVerdict {
        cycle_type: class.parts().to_vec(),
        eigenvalues: ev.iter().map(|r| r.to_string()).collect(),
        eigenvalues_distinct: distinct_mod_p(&ev, p),
        pass: class.parts() == [5] && p != 5,
    };
    let a_p = ap_count(&inst.curve, p)?;
    let ordinary = OrdinaryVerdict { a_p, pass: a_p.mod_floor(&(p as i64)) != 0 };
    let admissible = split_narrow.pass && unit.is_some_and(|u| u.pass) && frobenius.pass && ordinary.pass;
    Ok(SieveResult {
        p,
        split_narrow,
        unit_condition: unit,
        frobenius,
        ordinary,
        admissible,
        prefilter: prefilter(&inst.field, p),
        unchecked: UNCHECKED,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SieveStats {
    pub primes_tested: usize,
    pub excluded: Vec<u64>,
    pub split_narrow: usize,
    pub unit_condition: usize,
    pub five_cycle: usize,
    pub ordinary: usize,
    pub admissible: usize,
    pub prefilter_pass: usize,
    /// Primes passing the prefilter but failing the unit condition directly.
    pub prefilter_exceptions: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveReport {
    pub lo: u64,
    pub hi: u64,
    pub admissible: Vec<SieveResult>,
    pub stats: SieveStats,
}

/// Test every prime in [lo, hi). Work is spread over the current rayon pool; the
/// output is in increasing order of p regardless of scheduling.
pub fn find_admissible(inst: &SieveInstance, lo: u64, hi: u64, height_bound: u64) -> Result<SieveReport, SieveError> {
    let primes = if lo < hi { primes_in(lo, hi) } else { Vec::new() };
    let results: Vec<(u64, Option<SieveResult>)> = primes
        .par_iter()
        .map(|&p| match check_assumptions(inst, p, height_bound) {
            Ok(r) => Ok((p, Some(r))),
            Err(SieveError::ExcludedPrime(_)) => Ok((p, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    let mut stats = SieveStats::default();
    let mut admissible = Vec::new();
    for (p, r) in results {
        let Some(r) = r else {
            stats.excluded.push(p);
            continue;
        };
        stats.primes_tested += 1;
        stats.split_narrow += r.split_narrow.pass as usize;
        stats.unit_condition += r.unit_condition.is_some_and(|u| u.pass) as usize;
        stats.five_cycle += r.frobenius.pass as usize;
        stats.ordinary += r.ordinary.pass as usize;
        if r.prefilter.congruence_route {
            stats.prefilter_pass += 1;
            if !r.unit_condition.is_some_and(|u| u.pass) {
                stats.prefilter_exceptions.push(p);
            }
        }
        if r.admissible {
            stats.admissible += 1;
            admissible.push(r);
        }
    }
    Ok(SieveReport { lo, hi, admissible, stats })
}

impl SieveReport {
    /// One JSON object per admissible prime.
    pub fn to_jsonl(&self) -> String {
        self.admissible.iter().map(|r| serde_json::to_string(r).expect("serialisable") + "\n").collect()
    }

    pub fn to_csv_summary(&self) -> String {
        let s = &self.stats;
        let mut out = String::from("lo,hi,tested,excluded,split_narrow,unit_condition,five_cycle,ordinary,admissible,prefilter_pass,prefilter_exceptions\n");
        out += &format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            self.lo,
            self.hi,
            s.primes_tested,
            s.excluded.len(),
            s.split_narrow,
            s.unit_condition,
            s.five_cycle,
            s.ordinary,
            s.admissible,
            s.prefilter_pass,
            s.prefilter_exceptions.len()
        );
        out
    }
}

/// Re-check the witnesses of an admissible result without the sieve code paths:
/// generator norms and signs, the unit order by repeated multiplication, Rabin's
/// irreducibility test for the quintic, and a_p by a table of squares.
pub fn verify_witness(inst: &SieveInstance, r: &SieveResult) -> Result<(), String> {
    let p = r.p;
    let f = &inst.field;
    let Some(NarrowVerdict::Found { pi1, pi2, .. }) = &r.split_narrow.generator else {
        return Err(format!("{p}: no generator recorded"));
    };
    let pq = num_rational::BigRational::from_integer(BigInt::from(p));
    for pi in [pi1, pi2] {
        if f.norm(pi) != pq || !f.is_totally_positive(pi) || !pi.is_integral() {
            return Err(format!("{p}: generator {pi:?} has wrong norm or sign"));
        }
    }
    if f.mul(pi1, pi2) != QuadElem::rational(pq.clone()) {
        return Err(format!("{p}: generators are not conjugate factors of p"));
    }
    let e = unit_residue(f, p).map_err(|e| e.to_string())?;
    let mut x = e;
    let mut order = 1u64;
    while x != 1 {
        x = x * e % p;
        order += 1;
    }
    if order % 2 == 0 || Some(order) != r.unit_condition.map(|u| u.order) || mult_order(e, p) != Some(order) {
        return Err(format!("{p}: unit order mismatch"));
    }
    if !rabin_irreducible(&inst.quintic, p) {
        return Err(format!("{p}: quintic is reducible"));
    }
    let ap = ap_by_square_table(&inst.curve, p);
    if ap != r.ordinary.a_p || ap.rem_euclid(p as i64) == 0 {
        return Err(format!("{p}: a_p mismatch or supersingular"));
    }
    Ok(())
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    // f monic of degree 5, inputs of degree < 5
    let mut v = vec![0u64; 9];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y % p) % p;
        }
    }
    for i in (5..9).rev() {
        let c = v[i];
        for j in 0..6 {
            v[i - 5 + j] = (v[i - 5 + j] + p - c * f[j] % p) % p;
        }
    }
    v.truncate(5);
    v
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1, 0, 0, 0, 0];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

/// Degree 5 is prime, so f is irreducible iff x^(p^5) = x mod f and f has no root.
fn rabin_irreducible(q: &[i64], p: u64) -> bool {
    assert!(p < 1 << 31);
    let lead_inv = crate::numtheory::arith::inv_mod(q[5].rem_euclid(p as i64) as u64, p).expect("unit leading coefficient");
    let f: Vec<u64> = q.iter().map(|c| c.rem_euclid(p as i64) as u64 * lead_inv % p).collect();
    let x = vec![0, 1, 0, 0, 0];
    let mut h = x.clone();
    for _ in 0..5 {
        h = poly_powmod(&h, p, &f, p);
    }
    let has_root = (0..p.min(1 << 20)).any(|t| f.iter().rev().fold(0, |acc, c| (acc * t + c) % p) == 0);
    h == x && !has_root
}

fn ap_by_square_table(e: &EllipticCurveData, p: u64) -> i64 {
    let pi = p as i64;
    let mut roots = vec![0i64; p as usize];
    for y in 0..pi {
        roots[(y * y % pi) as usize] += 1;
    }
    let [a1, a2, a3, a4, a6] = e.a.map(|c| c.rem_euclid(pi));
    if p == 2 {
        return ap_count(e, p).unwrap_or(0);
    }
    let inv4 = crate::numtheory::arith::inv_mod(4, p).unwrap() as i64;
    let mut count = 0;
    for x in 0..pi {
        // y^2 + (a1 x + a3) y = g(x); complete the square with c = a1 x + a3.
        let c = (a1 * x + a3) % pi;
        let g = ((x * x % pi * x + a2 * x % pi * x + a4 * x + a6) % pi + c * c % pi * inv4) % pi;
        count += roots[g as usize];
    }
    pi - count
}

/// For the unit a + b sqrt d of norm 1, (a+1)(a-1) = b^2 d, with a, b taken in
/// (1/2)Z when d = 1 mod 4.
pub fn intermediate_field_identity(field: &RealQuadField) -> bool {
    let u = &field.eps_plus;
    // u = a + b w with w = (t + c sqrt d)/2; rewrite on 1, sqrt d.
    let w_const = num_rational::BigRational::new(BigInt::from(field.t), BigInt::from(2));
    let a = &u.a + &u.b * &w_const;
    let b = &u.b * bcoef(field);
    let one = num_rational::BigRational::from_integer(BigInt::from(1));
    let d = num_rational::BigRational::from_integer(BigInt::from(field.d));
    (&a + &one) * (&a - &one) == &b * &b * d
}

fn bcoef(field: &RealQuadField) -> num_rational::BigRational {
    // coefficient of sqrt d in w
    if field.t == 1 {
        num_rational::BigRational::new(BigInt::from(1), BigInt::from(2))
    } else {
        num_rational::BigRational::from_integer(BigInt::from(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_condition_examples() {
        let f2 = make_field(2).unwrap();
        assert_eq!(unit_condition(&f2, 7).unwrap(), UnitVerdict { order: 3, pass: true });
        let u = unit_condition(&f2, 17).unwrap();
        assert!(!u.pass);
        assert_eq!(unit_residue(&f2, 17).unwrap(), 15);
        assert_eq!(unit_condition(&f2, 5), Err(SieveError::NotSplit(5)));
    }

    #[test]
    fn prefilter_flags() {
        let f5 = make_field(5).unwrap();
        let fl = prefilter(&f5, 41);
        assert!(fl.p_is_9_mod_16);
        assert_eq!(fl.case, NarrowCase::Rational);
        assert_eq!(NarrowCase::of(3), NarrowCase::GaussianField);
        assert_eq!(NarrowCase::of(6), NarrowCase::MinusTwo);
        assert_eq!(NarrowCase::of(2), NarrowCase::PlusTwo);
    }

    #[test]
    fn intermediate_fields() {
        for d in [2, 3, 5, 6, 7, 13, 21, 2869] {
            assert!(intermediate_field_identity(&make_field(d).unwrap()), "d = {d}");
        }
    }
}
