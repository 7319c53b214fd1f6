//! Eisenstein series: level one elliptic, and parallel weight Hilbert over a real
//! quadratic field with the constant term calibrated against the diagonal restriction.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::elliptic::EllipticQExp;
use super::hilbert::HilbertQExp;
use super::QExpError;
use crate::numtheory::arith::{factor, sigma};
use crate::numtheory::ring::{int, rat};
use crate::realquad::{split_prime, RealQuadField, Splitting, TraceDomain};

/// a_0 = c * zeta_L(1 - k) for the calibrated Hilbert Eisenstein series, as (num, den).
pub const EISENSTEIN_NORMALIZATION: (i64, i64) = (1, 4);

/// Bernoulli numbers B_0 .. B_n with B_1 = -1/2.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(j))) * bj;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// -B_k / 2k + sum sigma_{k-1}(n) q^n for even k >= 2.
pub fn eisenstein_level_one(k: i32, bound: usize) -> Result<EllipticQExp<BigRational>, QExpError> {
    if k < 2 || k % 2 != 0 {
        return Err(QExpError::UnsupportedWeight(k));
    }
    if bound > super::elliptic::MAX_BOUND {
        return Err(QExpError::BoundTooLarge(bound as u64));
    }
    let bk = bernoulli(k as usize).pop().unwrap();
    let mut coeffs = vec![-bk / int(2 * k as i64)];
    coeffs.extend((1..=bound as u64).map(|n| BigRational::from_integer(sigma(n, (k - 1) as u32))));
    EllipticQExp::new((), k, 1, coeffs)
}

/// -4k / B_{2k}: the q-coefficient of the normalised weight 2k Eisenstein series.
fn eisenstein_coefficient(k: i32) -> BigRational {
    let b = bernoulli(2 * k as usize).pop().unwrap();
    int(-4 * k as i64) / b
}

fn check_weight(k: i32) -> Result<(), QExpError> {
    // The restriction lands in weight 2k, where level one is one-dimensional only for 2k = 4, 8.
    if k == 2 || k == 4 {
        Ok(())
    } else {
        Err(QExpError::UnsupportedWeight(k))
    }
}

/// zeta_L(1 - k) by Siegel's finite sum over x^2 < D with x = D mod 2.
pub fn siegel_zeta_value(field: &RealQuadField, k: i32) -> Result<BigRational, QExpError> {
    check_weight(k)?;
    let d = field.disc;
    let mut s = BigInt::zero();
    let mut x = -(crate::numtheory::arith::isqrt(d as u128) as i64);
    while x * x < d {
        if (x - d).rem_euclid(2) == 0 {
            s += sigma(((d - x * x) / 4) as u64, (k - 1) as u32);
        }
        x += 1;
    }
    Ok(int(4) / eisenstein_coefficient(k) * BigRational::from_integer(s))
}

/// sum of N(c)^{k-1} over integral ideals c containing (mu), mu = x + n w.
fn ideal_divisor_sum(field: &RealQuadField, x: i64, n: i64, k: i32) -> Result<BigInt, QExpError> {
    let (x1, n1, t, n0) = (x as i128, n as i128, field.t as i128, field.n0 as i128);
    let norm = (x1 * x1 + t * x1 * n1 - n0 * n1 * n1).unsigned_abs();
    let norm = u64::try_from(norm).map_err(|_| QExpError::BoundTooLarge(norm as u64))?;
    let e = (k - 1) as u32;
    let geometric = |q: u64, step: u32, terms: u32| -> BigInt {
        let base = BigInt::from(q).pow(step * e);
        let mut acc = BigInt::zero();
        let mut pw = BigInt::one();
        for _ in 0..=terms {
            acc += &pw;
            pw *= &base;
        }
        acc
    };
    let val = |mut a: i64, q: u64| -> u32 {
        if a == 0 {
            return u32::MAX;
        }
        let mut v = 0;
        while a % q as i64 == 0 {
            a /= q as i64;
            v += 1;
        }
        v
    };
    let mut total = BigInt::one();
    for (q, v) in factor(norm) {
        total *= match split_prime(field, q)? {
            Splitting::Ramified => geometric(q, 1, v),
            Splitting::Inert => geometric(q, 2, v / 2),
            Splitting::Split => {
                let g = val(x, q).min(val(n, q)).min(v);
                geometric(q, 1, g) * geometric(q, 1, v - g)
            }
        };
    }
    Ok(total)
}

/// Parallel weight k Hilbert Eisenstein series on the identity component.
///
/// The coefficient at nu is the ideal divisor sum of (nu) d. The constant term is
/// fixed so that the diagonal restriction is a multiple of the weight 2k level one
/// Eisenstein series; it then equals `EISENSTEIN_NORMALIZATION * zeta_L(1 - k)`.
/// Fields whose wide class number exceeds one are rejected.
pub fn eisenstein_hilbert(
    field: Arc<RealQuadField>,
    k: i32,
    trace_bound: u32,
) -> Result<HilbertQExp<BigRational>, QExpError> {
    check_weight(k)?;
    let h_plus = field.h_plus.ok_or(QExpError::ClassNumberUnsupported(field.d))?;
    let h = if field.fundamental_unit_norm == 1 { h_plus / 2 } else { h_plus };
    if h != 1 {
        return Err(QExpError::ClassNumberUnsupported(field.d));
    }
    let domain = TraceDomain::new(&field, trace_bound)?;
    let coeffs = domain
        .keys()
        .map(|(x, n)| ideal_divisor_sum(&field, x, n as i64, k).map(BigRational::from_integer))
        .collect::<Result<Vec<_>, _>>()?;
    let mut b1 = BigInt::zero();
    let one = TraceDomain::new(&field, 1)?;
    for x in one.x_range(1) {
        b1 += ideal_divisor_sum(&field, x, 1, k)?;
    }
    let constant = BigRational::from_integer(b1) / eisenstein_coefficient(k);
    let mut g = HilbertQExp::new(field, trace_bound, (), (k, k), constant, coeffs)?;
    g.character = "eisenstein".into();
    Ok(g)
}

/// a_0 / zeta_L(1 - k) for the calibrated series.
pub fn normalization_ratio(g: &HilbertQExp<BigRational>) -> Result<BigRational, QExpError> {
    let z = siegel_zeta_value(&g.field, g.weight.0)?;
    Ok(&g.constant / z)
}

pub fn normalization_constant() -> BigRational {
    rat(EISENSTEIN_NORMALIZATION.0, EISENSTEIN_NORMALIZATION.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::hilbert::diagonal_restrict;
    use crate::realquad::make_field;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert_eq!(eisenstein_coefficient(2), int(240));
        assert_eq!(eisenstein_coefficient(4), int(480));
    }

    #[test]
    fn trace_one_coefficients() {
        let f = Arc::new(make_field(5).unwrap());
        let g = eisenstein_hilbert(f, 2, 3).unwrap();
        assert_eq!(g.coeffs[0], int(1));
        assert_eq!(g.coeffs[1], int(1));
        assert_eq!(diagonal_restrict(&g).coeffs[1], int(2));
        assert_eq!(g.constant, rat(1, 120));
    }

    #[test]
    fn restriction_is_level_one_eisenstein() {
        for d in [5, 2, 3, 13] {
            for k in [2, 4] {
                let f = Arc::new(make_field(d).unwrap());
                let g = eisenstein_hilbert(f.clone(), k, 30).unwrap();
                let r = diagonal_restrict(&g);
                let e = eisenstein_level_one(2 * k, 30).unwrap();
                let c = &r.coeffs[1] / &e.coeffs[1];
                assert_eq!(r, e.scale(&c).truncate(30).clone_with_weight(&r), "d={d} k={k}");
                assert_eq!(normalization_ratio(&g).unwrap(), normalization_constant());
            }
        }
        let f = make_field(5).unwrap();
        assert_eq!(siegel_zeta_value(&f, 2).unwrap(), rat(1, 30));
        assert_eq!(siegel_zeta_value(&f, 4).unwrap(), rat(1, 60));
    }

    impl EllipticQExp<BigRational> {
        fn clone_with_weight(&self, other: &Self) -> Self {
            EllipticQExp { weight: other.weight, character: other.character.clone(), ..self.clone() }
        }
    }

    #[test]
    fn zero_trace_bound() {
        let f = Arc::new(make_field(13).unwrap());
        let g = eisenstein_hilbert(f, 2, 0).unwrap();
        assert!(g.coeffs.is_empty());
        assert_eq!(normalization_ratio(&g).unwrap(), normalization_constant());
    }

    #[test]
    fn rejects_large_class_number() {
        // Q(sqrt 10): h = 2.
        let f = Arc::new(make_field(10).unwrap());
        assert_eq!(eisenstein_hilbert(f, 2, 5), Err(QExpError::ClassNumberUnsupported(10)));
    }

    #[test]
    fn divisor_sum_against_brute_force() {
        // Sum over ideals containing (mu): enumerate Hermite normal forms of index dividing N(mu).
        for d in [2i64, 3, 5, 13, 17] {
            let f = make_field(d).unwrap();
            let dom = TraceDomain::new(&f, 6).unwrap();
            for (x, n) in dom.keys() {
                let (t, n0) = (f.t, f.n0);
                let norm = (x * x + t * x * n as i64 - n0 * (n as i64) * (n as i64)).abs();
                let mut brute = BigInt::zero();
                // Ideals in Hermite form [a, b + c w] with c | a, c | b and index a c dividing N(mu).
                for c in (1..=norm).filter(|c| norm % c == 0) {
                    for a in (c..=norm).step_by(c as usize).filter(|a| norm % (a * c) == 0) {
                        for b in (0..a).step_by(c as usize) {
                            if is_ideal(a, b, c, t, n0) && lattice_contains(a, b, c, x, n as i64) {
                                brute += BigInt::from(a * c);
                            }
                        }
                    }
                }
                assert_eq!(ideal_divisor_sum(&f, x, n as i64, 2).unwrap(), brute, "d={d} key=({x},{n})");
            }
        }
    }

    /// Lattice Z a + Z (b + c w) with c | a and c | b.
    fn lattice_contains(a: i64, b: i64, c: i64, u: i64, v: i64) -> bool {
        // u + v w = s a + r (b + c w): r = v / c, then u - r b divisible by a.
        v % c == 0 && (u - (v / c) * b) % a == 0
    }

    fn is_ideal(a: i64, b: i64, c: i64, t: i64, n0: i64) -> bool {
        // Closed under multiplication by w: w a = a w and w (b + c w) = c n0 + (b + c t) w.
        lattice_contains(a, b, c, 0, a) && lattice_contains(a, b, c, c * n0, b + c * t)
    }
}
