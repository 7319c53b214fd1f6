//! Splitting of rational primes, residue maps at split primes and totally
//! positive generators of narrowly principal prime ideals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::field::{QuadElem, RealQuadField};
use super::forms::{walk_cycle, Form};
use super::QuadError;
use crate::numtheory::arith::{is_prime, legendre, sqrt_mod};
use crate::numtheory::{Zp, ZpCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Which of the two primes above a split p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum Place {
    #[serde(rename = "p1")]
    First,
    #[serde(rename = "p2")]
    Second,
}

impl Place {
    pub fn other(self) -> Place {
        match self {
            Place::First => Place::Second,
            Place::Second => Place::First,
        }
    }
}

pub fn split_prime(field: &RealQuadField, p: u64) -> Result<Splitting, QuadError> {
    if !is_prime(p) {
        return Err(QuadError::NotPrime(p));
    }
    let disc = field.disc;
    if disc % p as i64 == 0 {
        return Ok(Splitting::Ramified);
    }
    if p == 2 {
        return Ok(if disc.rem_euclid(8) == 1 { Splitting::Split } else { Splitting::Inert });
    }
    Ok(if legendre(disc, p) == 1 { Splitting::Split } else { Splitting::Inert })
}

/// Reduction O_L -> O_L / p_i^m = Z/p^m, determined by the image of w.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidueMap {
    pub ctx: ZpCtx,
    pub place: Place,
    pub omega: Zp,
    t: i64,
    n0: i64,
}

/// Residue map at the prime above p selected by `place`.
///
/// For odd p the first prime sends sqrt d to the lift of the smaller square root
/// of d mod p. For p = 2 it sends w to the lift of 0 mod 2.
pub fn residue_map(field: &RealQuadField, p: u64, place: Place, m: u32) -> Result<ResidueMap, QuadError> {
    if split_prime(field, p)? != Splitting::Split {
        return Err(QuadError::NotSplit(p));
    }
    let ctx = ZpCtx::new(p, m)?;
    let t = ctx.int(field.t);
    let n0 = ctx.int(field.n0);
    let f = |x: Zp| x * x - t * x - n0;
    let df = |x: Zp| ctx.int(2) * x - t;
    let w0 = if p == 2 {
        // D = 1 mod 8, so w^2 - w - n0 = w (w - 1) mod 2.
        match place {
            Place::First => ctx.int(0),
            Place::Second => ctx.int(1),
        }
    } else {
        let s = sqrt_mod(field.d, p).ok_or(QuadError::NotSplit(p))? as i64;
        let s = match place {
            Place::First => s,
            Place::Second => p as i64 - s,
        };
        // w = (t + c s)/2 with sqrt D = c sqrt d.
        let c = if field.t == 1 { 1 } else { 2 };
        (t + ctx.int(c * s)) * ctx.int(2).inv()?
    };
    let mut w = w0;
    for _ in 0..=2 * m {
        let v = f(w);
        if v.r == 0 {
            break;
        }
        w = w - v * df(w).inv()?;
    }
    debug_assert_eq!(f(w).r, 0);
    Ok(ResidueMap { ctx, place, omega: w, t: field.t, n0: field.n0 })
}

impl ResidueMap {
    /// Image of a p-integral element.
    pub fn apply(&self, x: &QuadElem) -> Result<Zp, QuadError> {
        let a = Zp::from_rational(self.ctx, &x.a).map_err(|_| QuadError::NotPIntegral)?;
        let b = Zp::from_rational(self.ctx, &x.b).map_err(|_| QuadError::NotPIntegral)?;
        Ok(a + b * self.omega)
    }

    /// Image of x + n w for machine integers.
    pub fn apply_int(&self, x: i64, n: i64) -> Zp {
        self.ctx.int(x) + self.ctx.int(n) * self.omega
    }

    /// Image of the conjugate of w under this map, i.e. the other map's image of w.
    pub fn omega_conj(&self) -> Zp {
        self.ctx.int(self.t) - self.omega
    }

    pub fn n0(&self) -> i64 {
        self.n0
    }
}

/// Result of the narrow principality test for the primes above p.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NarrowVerdict {
    /// pi1 generates p1 and pi2 = conj(pi1) generates p2, both totally positive.
    Found { pi1: QuadElem, pi2: QuadElem, method: String },
    /// The form class of p1 is not principal: certified by its reduction cycle.
    CertifiedNotPrincipal,
    /// Only a bounded search was run and it found nothing.
    NoneFoundWithinBound { bound: u64 },
}

/// Search and certification options for `narrow_generator`.
#[derive(Clone, Copy, Debug)]
pub struct NarrowOptions {
    pub height_bound: u64,
    pub certify: bool,
}

impl Default for NarrowOptions {
    fn default() -> Self {
        NarrowOptions { height_bound: 200, certify: true }
    }
}

/// Decide whether p1 (and hence p2) is generated by a totally positive element.
/// A bounded coordinate search runs first; the reduction cycle of the associated
/// binary quadratic form then settles the question exactly.
pub fn narrow_generator(field: &RealQuadField, p: u64, opts: NarrowOptions) -> Result<NarrowVerdict, QuadError> {
    let r1 = residue_map(field, p, Place::First, 1)?;
    let pb = BigInt::from(p);
    // Bounded search over a + b w with |a|, |b| <= H.
    let h = opts.height_bound as i64;
    let target = BigRational::from_integer(pb.clone());
    let (t, n0) = (field.t as i128, field.n0 as i128);
    let mut best: Option<QuadElem> = None;
    'search: for b in -h..=h {
        for a in -h..=h {
            let (ai, bi) = (a as i128, b as i128);
            // N(a + b w) = a^2 + t a b - n0 b^2; positive norm and trace mean totally positive.
            if ai * ai + t * ai * bi - n0 * bi * bi != p as i128 || 2 * ai + t * bi <= 0 {
                continue;
            }
            if r1.apply_int(a, b).r == 0 {
                best = Some(QuadElem::int(a, b));
                break 'search;
            }
        }
    }
    if let Some(x) = best {
        let pi1 = balance(field, x);
        return Ok(NarrowVerdict::Found { pi2: field.conj(&pi1), pi1, method: "bounded search".into() });
    }
    if !opts.certify {
        return Ok(NarrowVerdict::NoneFoundWithinBound { bound: opts.height_bound });
    }
    // p1 = [p, (-b + sqrt D)/2] with b = 2 r1(w) - t mod 2p; its norm form is (p, -b, c).
    let w = r1.omega.r as i128;
    let pp = p as i128;
    let b = (2 * w - field.t as i128).rem_euclid(2 * pp);
    let disc = field.disc as i128;
    debug_assert_eq!((b * b - disc).rem_euclid(4 * pp), 0);
    let c = (b * b - disc) / (4 * pp);
    let form = Form { a: pp, b: -b, c };
    let walk = walk_cycle(form, 10_000_000).ok_or(QuadError::UnitSearchOverflow(field.d))?;
    match walk.representation_of_one {
        None => Ok(NarrowVerdict::CertifiedNotPrincipal),
        Some((x, y)) => {
            // alpha = x p + y (-b + sqrt D)/2 = x p + y (-b - t)/2 + y w
            let half = (-b - field.t as i128) / 2;
            let alpha = QuadElem::from_bigints(&x * &pb + &y * BigInt::from(half), y);
            debug_assert_eq!(field.norm(&alpha), target);
            let alpha = if field.trace(&alpha).is_negative() { alpha.neg() } else { alpha };
            let pi1 = balance(field, alpha);
            Ok(NarrowVerdict::Found { pi2: field.conj(&pi1), pi1, method: "form cycle".into() })
        }
    }
}

/// Multiply by a power of the totally positive unit so that the two embeddings are
/// as close as possible.
fn balance(field: &RealQuadField, x: QuadElem) -> QuadElem {
    // The smaller embedding loses all precision in f64 for large coordinates, so
    // take the larger one and recover the other from the norm.
    let (e1, e2) = field.embed_f64(&x);
    let ln_norm = super::field::ratio_f64(&field.norm(&x)).ln();
    let ln_ratio = if e1.abs() >= e2.abs() { 2.0 * e1.ln() - ln_norm } else { ln_norm - 2.0 * e2.ln() };
    let (u1, _) = field.embed_f64(&field.eps_plus);
    let k = -(ln_ratio / (2.0 * u1.ln())).round();
    if !k.is_finite() || k.abs() > 10_000.0 {
        return x;
    }
    let k = k as i64;
    let mut y = x;
    let unit = if k >= 0 { field.eps_plus.clone() } else { field.inv(&field.eps_plus).unwrap() };
    for _ in 0..k.unsigned_abs() {
        y = field.mul(&y, &unit);
    }
    y
}

/// Order of the totally positive unit modulo the prime `place` above p.
pub fn unit_order_mod(field: &RealQuadField, p: u64, place: Place) -> Result<u64, QuadError> {
    let r = residue_map(field, p, place, 1)?;
    let e = r.apply(&field.eps_plus)?;
    crate::numtheory::arith::mult_order(e.r, p).ok_or(QuadError::NotPIntegral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realquad::field::make_field;

    #[test]
    fn splitting_examples() {
        let f5 = make_field(5).unwrap();
        assert_eq!(split_prime(&f5, 11).unwrap(), Splitting::Split);
        assert_eq!(split_prime(&f5, 2).unwrap(), Splitting::Inert);
        assert_eq!(split_prime(&f5, 5).unwrap(), Splitting::Ramified);
        assert_eq!(split_prime(&f5, 7).unwrap(), Splitting::Inert);
        let f17 = make_field(17).unwrap();
        assert_eq!(split_prime(&f17, 2).unwrap(), Splitting::Split);
    }

    #[test]
    fn residue_conventions() {
        let f2 = make_field(2).unwrap();
        let r = residue_map(&f2, 7, Place::First, 1).unwrap();
        assert_eq!(r.apply(&f2.sqrt_d()).unwrap().r, 3);
        let r = residue_map(&f2, 17, Place::First, 1).unwrap();
        assert_eq!(r.apply(&f2.sqrt_d()).unwrap().r, 6);
        let r2 = residue_map(&f2, 17, Place::Second, 1).unwrap();
        assert_eq!(r2.apply(&f2.sqrt_d()).unwrap().r, 11);
    }

    #[test]
    fn residue_maps_are_ring_maps() {
        for d in [2, 5, 13, 17, 6] {
            let f = make_field(d).unwrap();
            for p in [2u64, 3, 7, 11, 13, 17, 19, 23, 29, 31] {
                if split_prime(&f, p).unwrap() != Splitting::Split {
                    continue;
                }
                let r1 = residue_map(&f, p, Place::First, 3).unwrap();
                let r2 = residue_map(&f, p, Place::Second, 3).unwrap();
                for (a, b) in [(3, 4), (-7, 2), (11, -5), (0, 1)] {
                    let x = QuadElem::int(a, b);
                    let y = QuadElem::int(b, a + 1);
                    assert_eq!(r1.apply(&f.mul(&x, &y)).unwrap(), r1.apply(&x).unwrap() * r1.apply(&y).unwrap());
                    assert_eq!(r1.apply(&f.conj(&x)).unwrap(), r2.apply(&x).unwrap());
                    let n = Zp::from_rational(r1.ctx, &f.norm(&x)).unwrap();
                    assert_eq!(r1.apply(&x).unwrap() * r2.apply(&x).unwrap(), n);
                }
            }
        }
    }

    #[test]
    fn generators_found_and_certified() {
        let f5 = make_field(5).unwrap();
        let v = narrow_generator(&f5, 11, NarrowOptions::default()).unwrap();
        let NarrowVerdict::Found { pi1, pi2, .. } = v else { panic!() };
        let r1 = residue_map(&f5, 11, Place::First, 1).unwrap();
        assert_eq!(r1.apply(&pi1).unwrap().r, 0);
        assert_eq!(f5.norm(&pi1), BigRational::from_integer(11.into()));
        assert!(f5.is_totally_positive(&pi1) && f5.is_totally_positive(&pi2));
        // Q(sqrt 3) has h+ = 2: split primes p = 11 mod 12 only have generators of norm -p.
        let f3 = make_field(3).unwrap();
        for p in [11u64, 13, 23, 37, 47, 59, 61, 71, 73, 83, 97] {
            if split_prime(&f3, p).unwrap() != Splitting::Split {
                continue;
            }
            let exact = narrow_generator(&f3, p, NarrowOptions { height_bound: 0, certify: true }).unwrap();
            let searched = narrow_generator(&f3, p, NarrowOptions { height_bound: 60, certify: false }).unwrap();
            match exact {
                NarrowVerdict::Found { .. } => assert!(matches!(searched, NarrowVerdict::Found { .. }), "p={p}"),
                NarrowVerdict::CertifiedNotPrincipal => {
                    assert!(matches!(searched, NarrowVerdict::NoneFoundWithinBound { .. }), "p={p}")
                }
                _ => panic!(),
            }
            // In Q(sqrt 3), p1 is narrowly principal iff p = 1 mod 12.
            assert_eq!(matches!(exact, NarrowVerdict::Found { .. }), p % 12 == 1, "p={p}");
        }
    }
}
