//! Elliptic curves over Q in long Weierstrass form and a_p by point counting.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::SieveError;
use crate::numtheory::arith::{is_prime, legendre};

/// Largest prime for which `ap_count` will run its O(p) count.
pub const MAX_COUNT_PRIME: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurveData {
    pub label: String,
    /// [a1, a2, a3, a4, a6]
    pub a: [i64; 5],
    pub conductor: u64,
}

/// Bundled curves: label, coefficients, conductor.
const TABLE: &[(&str, [i64; 5], u64)] = &[
    ("11a1", [0, -1, 1, -10, -20], 11),
    ("14a1", [1, 0, 1, 4, -6], 14),
    ("15a1", [1, 1, 1, -10, -10], 15),
    ("17a1", [1, -1, 1, -1, -14], 17),
    ("19a1", [0, 1, 1, -9, -15], 19),
    ("37a1", [0, 0, 1, -1, 0], 37),
    ("389a1", [0, 1, 1, -2, 0], 389),
];

impl EllipticCurveData {
    pub fn new(label: impl Into<String>, a: [i64; 5], conductor: u64) -> Result<Self, SieveError> {
        let e = EllipticCurveData { label: label.into(), a, conductor };
        if e.discriminant().is_zero() {
            return Err(SieveError::SingularCurve);
        }
        if conductor == 0 {
            return Err(SieveError::Parse("conductor must be positive".into()));
        }
        Ok(e)
    }

    /// Look up a bundled curve; "11a" is accepted for "11a1".
    pub fn by_label(label: &str) -> Option<Self> {
        TABLE
            .iter()
            .find(|(l, _, _)| *l == label || l.strip_suffix('1') == Some(label))
            .map(|(l, a, n)| EllipticCurveData { label: l.to_string(), a: *a, conductor: *n })
    }

    pub fn labels() -> Vec<&'static str> {
        TABLE.iter().map(|t| t.0).collect()
    }

    /// (b2, b4, b6, b8)
    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.conductor % p != 0 && !(self.discriminant() % BigInt::from(p)).is_zero()
    }
}

/// Parse "a1,a2,a3,a4,a6".
pub fn parse_weierstrass(s: &str, conductor: u64) -> Result<EllipticCurveData, SieveError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| SieveError::Parse(format!("{x}: {e}"))))
        .collect::<Result<_, _>>()?;
    let a: [i64; 5] = v.try_into().map_err(|_| SieveError::Parse("expected five coefficients".into()))?;
    if a.iter().any(|x| x.unsigned_abs() > 1 << 40) {
        return Err(SieveError::Parse("coefficients too large".into()));
    }
    EllipticCurveData::new(format!("[{s}]"), a, conductor)
}

/// a_p = p + 1 - #E(F_p).
pub fn ap_count(e: &EllipticCurveData, p: u64) -> Result<i64, SieveError> {
    if !is_prime(p) || !e.has_good_reduction(p) {
        return Err(SieveError::BadReduction(p));
    }
    if p > MAX_COUNT_PRIME {
        return Err(SieveError::PrimeTooLarge(p));
    }
    let pi = p as i64;
    let r = |x: i64| x.rem_euclid(pi);
    let [a1, a2, a3, a4, a6] = e.a.map(r);
    let affine: i64 = if p == 2 {
        let mut n = 0;
        for x in 0..2 {
            for y in 0..2 {
                if r(y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) == 0 {
                    n += 1;
                }
            }
        }
        n
    } else {
        // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        let [b2, b4, b6, _] = e.b_invariants().map(|b| {
            let m = b % BigInt::from(pi);
            let v: i64 = m.try_into().unwrap();
            r(v)
        });
        (0..pi)
            .map(|x| {
                let rhs = r(r(r(4 * x % pi * x % pi * x + b2 * x % pi * x) + 2 * b4 % pi * x) + b6);
                1 + legendre(rhs, p) as i64
            })
            .sum()
    };
    let ap = pi - affine;
    debug_assert!((ap as f64).powi(2) <= 4.0 * p as f64);
    Ok(ap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_discriminants() {
        let want = [(-161051i64, "11a1"), (-21952, "14a1"), (50625, "15a1"), (-83521, "17a1"), (-6859, "19a1"), (37, "37a1"), (389, "389a1")];
        for (d, l) in want {
            let e = EllipticCurveData::by_label(l).unwrap();
            assert_eq!(e.discriminant(), BigInt::from(d), "{l}");
        }
        assert_eq!(EllipticCurveData::by_label("11a").unwrap().label, "11a1");
        assert!(EllipticCurveData::by_label("nope").is_none());
    }

    #[test]
    fn eleven_a_one() {
        let e = EllipticCurveData::by_label("11a1").unwrap();
        // Known coefficients of the weight two newform of level 11.
        let want = [(2, -2), (3, -1), (5, 1), (7, -2), (13, 4), (17, -2), (19, 0), (23, -1), (29, 0), (31, 7)];
        for (p, a) in want {
            assert_eq!(ap_count(&e, p).unwrap(), a, "p = {p}");
        }
        assert_eq!(ap_count(&e, 11), Err(SieveError::BadReduction(11)));
    }
}
