//! The field Q(sqrt d), its ring of integers Z[w] and its fundamental unit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

use super::forms;
use super::QuadError;
use crate::numtheory::arith::{is_squarefree, isqrt};
use crate::numtheory::ring::{format_rational, parse_rational};

/// Largest d accepted by `make_field`.
pub const MAX_D: i64 = 1_000_000_000;
/// Continued-fraction period limit for the unit search.
pub const MAX_CF_STEPS: usize = 200_000;
/// Discriminants up to this bound get their narrow class number computed.
pub const CLASS_NUMBER_LIMIT: i64 = 100_000_000;

/// `a + b w` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadElem { a, b }
    }
    pub fn int(a: i64, b: i64) -> Self {
        QuadElem { a: BigRational::from_integer(a.into()), b: BigRational::from_integer(b.into()) }
    }
    pub fn from_bigints(a: BigInt, b: BigInt) -> Self {
        QuadElem { a: BigRational::from_integer(a), b: BigRational::from_integer(b) }
    }
    pub fn rational(q: BigRational) -> Self {
        QuadElem { a: q, b: BigRational::zero() }
    }
    pub fn zero() -> Self {
        QuadElem::int(0, 0)
    }
    pub fn one() -> Self {
        QuadElem::int(1, 0)
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }
    pub fn add(&self, o: &Self) -> Self {
        QuadElem { a: &self.a + &o.a, b: &self.b + &o.b }
    }
    pub fn sub(&self, o: &Self) -> Self {
        QuadElem { a: &self.a - &o.a, b: &self.b - &o.b }
    }
    pub fn neg(&self) -> Self {
        QuadElem { a: -&self.a, b: -&self.b }
    }
    pub fn scale(&self, q: &BigRational) -> Self {
        QuadElem { a: &self.a * q, b: &self.b * q }
    }
    /// Lexicographic order on coordinates.
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        self.a.cmp(&o.a).then(self.b.cmp(&o.b))
    }
}

/// Serialised as a pair of rational strings `["a", "b"]`.
impl Serialize for QuadElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.a), format_rational(&self.b)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let pa = parse_rational(&a).ok_or_else(|| serde::de::Error::custom(format!("bad rational {a:?}")))?;
        let pb = parse_rational(&b).ok_or_else(|| serde::de::Error::custom(format!("bad rational {b:?}")))?;
        Ok(QuadElem::new(pa, pb))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*w", self.a, self.b)
    }
}

/// Sign of `u + v sqrt(D)` for integers u, v and non-square D > 0.
pub fn sign_surd(u: &BigInt, v: &BigInt, disc: i64) -> Ordering {
    let su = u.sign();
    let sv = v.sign();
    use num_bigint::Sign::*;
    match (su, sv) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
        (Minus | NoSign, Minus | NoSign) => Ordering::Less,
        (Plus, Minus) => (u * u).cmp(&(v * v * BigInt::from(disc))),
        (Minus, Plus) => (v * v * BigInt::from(disc)).cmp(&(u * u)),
    }
}

#[derive(Clone, Debug)]
pub struct RealQuadField {
    /// Squarefree d > 1.
    pub d: i64,
    /// Discriminant D = d or 4d.
    pub disc: i64,
    /// Trace of w: 1 if d = 1 mod 4, else 0.
    pub t: i64,
    /// w^2 = t w + n0.
    pub n0: i64,
    /// Fundamental unit, normalised to be > 1 under the first embedding.
    pub fundamental_unit: QuadElem,
    pub fundamental_unit_norm: i32,
    /// Generator of the totally positive units.
    pub eps_plus: QuadElem,
    /// Narrow class number, when computed or supplied.
    pub h_plus: Option<u64>,
}

/// Build Q(sqrt d): discriminant, integral basis, fundamental unit and (for
/// moderate discriminants) the narrow class number.
pub fn make_field(d: i64) -> Result<RealQuadField, QuadError> {
    if d <= 1 || d > MAX_D || !is_squarefree(d as u64) {
        return Err(QuadError::InvalidField(d));
    }
    let t = if d % 4 == 1 { 1 } else { 0 };
    let disc = if t == 1 { d } else { 4 * d };
    let n0 = (disc - t) / 4;
    let mut field = RealQuadField {
        d,
        disc,
        t,
        n0,
        fundamental_unit: QuadElem::one(),
        fundamental_unit_norm: 1,
        eps_plus: QuadElem::one(),
        h_plus: None,
    };
    let (u, norm) = field.compute_fundamental_unit()?;
    field.eps_plus = if norm == 1 { u.clone() } else { field.mul(&u, &u) };
    field.fundamental_unit = u;
    field.fundamental_unit_norm = norm;
    if disc <= CLASS_NUMBER_LIMIT {
        field.h_plus = Some(forms::narrow_class_number(disc));
    }
    Ok(field)
}

impl RealQuadField {
    pub fn omega(&self) -> QuadElem {
        QuadElem::int(0, 1)
    }

    /// sqrt(D) = 2w - t.
    pub fn sqrt_disc(&self) -> QuadElem {
        QuadElem::int(-self.t, 2)
    }

    /// sqrt(d): equal to sqrt(D) when D = d, half of it when D = 4d.
    pub fn sqrt_d(&self) -> QuadElem {
        if self.t == 1 {
            QuadElem::int(-1, 2)
        } else {
            QuadElem::int(0, 1)
        }
    }

    pub fn mul(&self, x: &QuadElem, y: &QuadElem) -> QuadElem {
        let n0 = BigRational::from_integer(self.n0.into());
        let t = BigRational::from_integer(self.t.into());
        let bb = &x.b * &y.b;
        QuadElem { a: &x.a * &y.a + &n0 * &bb, b: &x.a * &y.b + &x.b * &y.a + &t * &bb }
    }

    pub fn conj(&self, x: &QuadElem) -> QuadElem {
        let t = BigRational::from_integer(self.t.into());
        QuadElem { a: &x.a + &x.b * t, b: -&x.b }
    }

    pub fn trace(&self, x: &QuadElem) -> BigRational {
        BigRational::from_integer(2.into()) * &x.a + &x.b * BigRational::from_integer(self.t.into())
    }

    /// ((2a + bt)^2 - b^2 D) / 4.
    pub fn norm(&self, x: &QuadElem) -> BigRational {
        let u = self.trace(x);
        let disc = BigRational::from_integer(self.disc.into());
        (&u * &u - &x.b * &x.b * disc) / BigRational::from_integer(4.into())
    }

    pub fn inv(&self, x: &QuadElem) -> Result<QuadElem, QuadError> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        Ok(self.conj(x).scale(&n.recip()))
    }

    pub fn div(&self, x: &QuadElem, y: &QuadElem) -> Result<QuadElem, QuadError> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &QuadElem, e: i64) -> Result<QuadElem, QuadError> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = QuadElem::one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// Signs of the two real embeddings; the first sends sqrt d to the positive root.
    pub fn embedding_signs(&self, x: &QuadElem) -> (Ordering, Ordering) {
        // 2 x = (2a + bt) +- b sqrt(D); clear denominators.
        let u = self.trace(x);
        let l = u.denom().lcm(x.b.denom());
        let un = (&u * BigRational::from_integer(l.clone())).to_integer();
        let vn = (&x.b * BigRational::from_integer(l)).to_integer();
        (sign_surd(&un, &vn, self.disc), sign_surd(&un, &(-vn.clone()), self.disc))
    }

    pub fn is_totally_positive(&self, x: &QuadElem) -> bool {
        self.embedding_signs(x) == (Ordering::Greater, Ordering::Greater)
    }

    /// Floating-point embeddings, for display and heuristics only.
    pub fn embed_f64(&self, x: &QuadElem) -> (f64, f64) {
        let s = (self.disc as f64).sqrt();
        let a = ratio_f64(&x.a);
        let b = ratio_f64(&x.b);
        let w1 = (self.t as f64 + s) / 2.0;
        let w2 = (self.t as f64 - s) / 2.0;
        (a + b * w1, a + b * w2)
    }

    /// Continued fraction of the reduced irrational (b0 + sqrt D)/2; the period
    /// yields the fundamental unit of Z[w].
    fn compute_fundamental_unit(&self) -> Result<(QuadElem, i32), QuadError> {
        let disc = self.disc as i128;
        let s = isqrt(self.disc as u128) as i128;
        let mut b0 = s;
        if (b0 - disc).rem_euclid(2) != 0 {
            b0 -= 1;
        }
        let (p0, q0) = (b0, 2i128);
        let (mut p, mut q) = (p0, q0);
        let (mut bm2, mut bm1) = (BigInt::one(), BigInt::zero());
        let mut len = 0usize;
        loop {
            let a = (p + s).div_euclid(q);
            let bk = BigInt::from(a) * &bm1 + &bm2;
            bm2 = bm1;
            bm1 = bk;
            len += 1;
            let pn = a * q - p;
            let qn = (disc - pn * pn) / q;
            p = pn;
            q = qn;
            if (p, q) == (p0, q0) {
                break;
            }
            if len > MAX_CF_STEPS {
                return Err(QuadError::UnitSearchOverflow(self.d));
            }
        }
        // unit = B_{l-1} beta + B_{l-2}, beta = w + k with k = (b0 - t)/2.
        let k = BigInt::from(((b0 - self.t as i128) / 2) as i64);
        let unit = QuadElem::from_bigints(&bm1 * &k + &bm2, bm1.clone());
        let norm = if len % 2 == 0 { 1 } else { -1 };
        debug_assert_eq!(self.norm(&unit), BigRational::from_integer(norm.into()));
        Ok((unit, norm))
    }

    /// Reduce an integral element modulo the rational prime p (coordinates mod p).
    pub fn coords_i64(&self, x: &QuadElem) -> Option<(i64, i64)> {
        if !x.is_integral() {
            return None;
        }
        Some((x.a.to_integer().to_i64()?, x.b.to_integer().to_i64()?))
    }
}

pub fn ratio_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_f64().unwrap_or(f64::NAN);
    let d = q.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // Scale down huge values through their bit lengths.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900) as usize;
        let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smallest_unit_brute(f: &RealQuadField) -> QuadElem {
        // Search a + b w with small coordinates for norm +-1 and minimal value > 1.
        let mut best: Option<(f64, (i64, i64))> = None;
        let w1 = (f.t as f64 + (f.disc as f64).sqrt()) / 2.0;
        for b in 1..400i64 {
            for a in -400i64..400 {
                let n = a * a + f.t * a * b - f.n0 * b * b;
                let e1 = a as f64 + b as f64 * w1;
                if n.abs() == 1 && e1 > 1.0 + 1e-9 && best.is_none_or(|(v, _)| e1 < v) {
                    best = Some((e1, (a, b)));
                }
            }
        }
        let (a, b) = best.unwrap().1;
        QuadElem::int(a, b)
    }

    #[test]
    fn known_units() {
        let f5 = make_field(5).unwrap();
        assert_eq!(f5.disc, 5);
        assert_eq!(f5.fundamental_unit, QuadElem::int(0, 1));
        assert_eq!(f5.fundamental_unit_norm, -1);
        assert_eq!(f5.eps_plus, QuadElem::int(1, 1)); // (3 + sqrt5)/2 = 1 + w
        let f2 = make_field(2).unwrap();
        assert_eq!(f2.disc, 8);
        assert_eq!(f2.fundamental_unit, QuadElem::int(1, 1));
        assert_eq!(f2.eps_plus, QuadElem::int(3, 2));
        let f3 = make_field(3).unwrap();
        assert_eq!(f3.fundamental_unit, QuadElem::int(2, 1));
        assert_eq!(f3.fundamental_unit_norm, 1);
        assert!(make_field(4).is_err());
        assert!(make_field(1).is_err());
    }

    #[test]
    fn units_are_minimal_by_search() {
        for d in [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 29, 33, 37, 41] {
            let f = make_field(d).unwrap();
            assert_eq!(f.fundamental_unit, smallest_unit_brute(&f), "d = {d}");
            assert!(f.is_totally_positive(&f.eps_plus));
        }
    }

    #[test]
    fn large_unit_2869() {
        let f = make_field(2869).unwrap();
        // (383239844766398 + 7154929872240 sqrt 2869)/2, w = (1 + sqrt 2869)/2
        let a: BigInt = "383239844766398".parse().unwrap();
        let b: BigInt = "7154929872240".parse().unwrap();
        let expect = QuadElem::from_bigints((&a - &b) / 2, b.clone());
        assert_eq!(f.fundamental_unit, expect);
        assert_eq!(f.fundamental_unit_norm, 1);
    }

    #[test]
    fn arithmetic_identities() {
        let f = make_field(13).unwrap();
        let x = QuadElem::int(3, -2);
        let y = QuadElem::int(-1, 5);
        assert_eq!(f.norm(&f.mul(&x, &y)), f.norm(&x) * f.norm(&y));
        assert_eq!(f.mul(&x, &f.conj(&x)), QuadElem::rational(f.norm(&x)));
        assert_eq!(f.mul(&f.sqrt_disc(), &f.sqrt_disc()), QuadElem::int(13, 0));
        let g = make_field(6).unwrap();
        assert_eq!(g.mul(&g.sqrt_disc(), &g.sqrt_disc()), QuadElem::int(24, 0));
        assert_eq!(g.mul(&g.sqrt_d(), &g.sqrt_d()), QuadElem::int(6, 0));
    }
}
