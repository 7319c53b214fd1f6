//! Frobenius cycle types of integer quintics and the eigenvalues of the
//! standard four-dimensional representation of S5 at those classes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cyclotomic::{Cyc, CycloField};
use super::AsaiError;
use crate::numtheory::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use crate::numtheory::{Zp, ZpCtx};

/// A cycle type in S5, parts sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct S5FrobeniusClass {
    parts: Vec<u32>,
}

impl S5FrobeniusClass {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, AsaiError> {
        if parts.iter().sum::<u32>() != 5 || parts.contains(&0) {
            return Err(AsaiError::NotAPartition(parts));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(S5FrobeniusClass { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn fixed_points(&self) -> u32 {
        self.parts.iter().filter(|&&k| k == 1).count() as u32
    }

    /// Value of the standard character fix - 1.
    pub fn standard_character(&self) -> i64 {
        self.fixed_points() as i64 - 1
    }

    pub fn sign(&self) -> i64 {
        if self.parts.iter().map(|k| k - 1).sum::<u32>() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All seven classes.
    pub fn all() -> Vec<Self> {
        [vec![1, 1, 1, 1, 1], vec![2, 1, 1, 1], vec![2, 2, 1], vec![3, 1, 1], vec![3, 2], vec![4, 1], vec![5]]
            .into_iter()
            .map(|p| Self::new(p).unwrap())
            .collect()
    }
}

impl fmt::Display for S5FrobeniusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Discriminant of an integer polynomial (coefficients constant term first).
pub fn discriminant(f: &[i64]) -> Result<BigInt, AsaiError> {
    let n = f.len().checked_sub(1).filter(|&n| n >= 1 && f[n] != 0).ok_or(AsaiError::BadPolynomial)?;
    let df: Vec<i64> = (1..=n).map(|i| f[i] * i as i64).collect();
    let res = resultant(f, &df);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(sign * res / BigInt::from(f[n]))
}

/// Sylvester resultant by exact rational elimination.
fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut a = vec![vec![BigRational::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            a[i][i + j] = BigRational::from_integer((*c).into());
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            a[n + i][i + j] = BigRational::from_integer((*c).into());
        }
    }
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !a[r][col].is_zero()) else { return BigInt::zero() };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..size {
            if !a[r][col].is_zero() {
                let f = a[r][col].clone() / a[col][col].clone();
                for c in col..size {
                    let t = a[col][c].clone() * f.clone();
                    a[r][c] -= t;
                }
            }
        }
    }
    det.to_integer()
}

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &Fp) -> usize {
    a.len().saturating_sub(1)
}

fn fp_rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut r = trim(a.clone());
    let db = deg(b);
    let li = inv_mod(*b.last().unwrap(), p).unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let c = mul_mod(*r.last().unwrap(), li, p);
        let shift = r.len() - b.len();
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, *bj, p)) % p;
        }
        r = trim(r);
        if r.len() <= db {
            break;
        }
    }
    r
}

fn fp_div(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut r = trim(a.clone());
    let li = inv_mod(*b.last().unwrap(), p).unwrap();
    let mut q = vec![0u64; r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let c = mul_mod(*r.last().unwrap(), li, p);
        let shift = r.len() - b.len();
        q[shift] = c;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mul_mod(c, *bj, p)) % p;
        }
        r = trim(r);
    }
    trim(q)
}

fn fp_mulmod(a: &Fp, b: &Fp, f: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mul_mod(*x, *y, p)) % p;
        }
    }
    fp_rem(&v, f, p)
}

fn fp_powmod(base: &Fp, mut e: u64, f: &Fp, p: u64) -> Fp {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mulmod(&acc, &b, f, p);
        }
        b = fp_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Degrees of the irreducible factors of a squarefree polynomial over F_p, by
/// distinct-degree factorisation.
pub fn factor_degrees_mod_p(f: &[i64], p: u64) -> Vec<u32> {
    let mut g: Fp = trim(f.iter().map(|c| c.rem_euclid(p as i64) as u64).collect());
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 1u32;
    while deg(&g) >= 2 * i as usize {
        h = fp_powmod(&h, p, &g, p);
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let d = fp_gcd(&trim(hx), &g, p);
        let dd = deg(&d) as u32;
        if dd > 0 {
            out.extend(std::iter::repeat_n(i, (dd / i) as usize));
            g = fp_div(&g, &d, p);
            h = fp_rem(&h, &g, p);
        }
        i += 1;
    }
    if deg(&g) > 0 {
        out.push(deg(&g) as u32);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Frobenius class at p of the splitting field of an integer quintic.
pub fn frobenius_class_quintic(f: &[i64], p: u64) -> Result<S5FrobeniusClass, AsaiError> {
    if f.len() != 6 || f[5] == 0 {
        return Err(AsaiError::BadPolynomial);
    }
    if !is_prime(p) {
        return Err(AsaiError::Unsupported(format!("{p} is not prime")));
    }
    let disc = discriminant(f)?;
    if (disc.mod_floor(&BigInt::from(p))).is_zero() || f[5].rem_euclid(p as i64) == 0 {
        return Err(AsaiError::RamifiedPrime(p));
    }
    S5FrobeniusClass::new(factor_degrees_mod_p(f, p))
}

/// exp(2 pi i num / den), stored reduced; 1 is 0/1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub num: u32,
    pub den: u32,
}

impl RootOfUnity {
    pub fn new(num: i64, den: u32) -> Self {
        let n = num.rem_euclid(den as i64) as u32;
        let g = n.gcd(&den).max(1);
        if n == 0 {
            return RootOfUnity { num: 0, den: 1 };
        }
        RootOfUnity { num: n / g, den: den / g }
    }

    pub fn order(&self) -> u32 {
        self.den
    }

    pub fn mul(&self, o: &Self) -> Self {
        let den = self.den.lcm(&o.den);
        RootOfUnity::new((self.num * (den / self.den) + o.num * (den / o.den)) as i64, den)
    }

    pub fn div(&self, o: &Self) -> Self {
        let den = self.den.lcm(&o.den);
        RootOfUnity::new(self.num as i64 * (den / self.den) as i64 - o.num as i64 * (den / o.den) as i64, den)
    }

    /// Image in Z_p, available when the order divides p - 1.
    pub fn to_zp(&self, ctx: ZpCtx) -> Option<Zp> {
        let w = root_of_unity_mod(self.den as u64, ctx.p)?;
        Some(Zp::from_i64(ctx, w as i64).teichmuller().pow(self.num as u64))
    }

    /// The element of Q(zeta_n), n a multiple of the order.
    pub fn embed(&self, k: &CycloField) -> Cyc {
        k.zeta_pow((self.num * (k.n / self.den)) as i64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (1, d) => write!(f, "zeta_{d}"),
            (n, d) => write!(f, "zeta_{d}^{n}"),
        }
    }
}

/// Eigenvalues of the permutation matrix of the class with one trivial eigenvalue removed.
pub fn asai_frobenius_eigenvalues(class: &S5FrobeniusClass) -> Vec<RootOfUnity> {
    let mut out: Vec<RootOfUnity> =
        class.parts().iter().flat_map(|&k| (0..k).map(move |j| RootOfUnity::new(j as i64, k))).collect();
    let one = out.iter().position(|r| r.num == 0).expect("every cycle contributes 1");
    out.remove(one);
    out.sort();
    out
}

/// Whether the roots stay pairwise distinct modulo a prime above p: zeta^a and
/// zeta^b collide exactly when the order of zeta^(a-b) is a power of p.
pub fn distinct_mod_p(roots: &[RootOfUnity], p: u64) -> bool {
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let mut o = a.div(b).order() as u64;
            while o % p == 0 {
                o /= p;
            }
            if o == 1 {
                return false;
            }
        }
    }
    true
}

/// Sum of the roots as an element of Q(zeta_n), n the lcm of their orders.
pub fn root_sum(roots: &[RootOfUnity]) -> Result<(CycloField, Cyc), AsaiError> {
    let n = roots.iter().fold(1u32, |acc, r| acc.lcm(&r.den));
    let k = CycloField::new(n)?;
    let s = roots.iter().fold(k.zero(), |acc, r| k.add(&acc, &r.embed(&k)));
    Ok((k, s))
}

/// Product of the roots.
pub fn root_product(roots: &[RootOfUnity]) -> RootOfUnity {
    roots.iter().fold(RootOfUnity::new(0, 1), |acc, r| acc.mul(r))
}

/// Find w of exact order n in F_q, if n divides q - 1.
pub fn root_of_unity_mod(n: u64, q: u64) -> Option<u64> {
    if n == 0 || (q - 1) % n != 0 {
        return None;
    }
    if n == 1 {
        return Some(1);
    }
    let primes: Vec<u64> = crate::numtheory::arith::factor(n).into_iter().map(|(l, _)| l).collect();
    (2..q).map(|g| pow_mod(g, (q - 1) / n, q)).find(|&w| primes.iter().all(|&l| pow_mod(w, n / l, q) != 1))
}

impl S5FrobeniusClass {
    pub fn is_five_cycle(&self) -> bool {
        self.parts == [5]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: [i64; 6] = [-1, -1, 0, 0, 0, 1];

    #[test]
    fn discriminant_of_desk_quintic() {
        assert_eq!(discriminant(&Q).unwrap(), BigInt::from(2869));
        assert_eq!(2869, 19 * 151);
        // x^2 - 5 has discriminant 20.
        assert_eq!(discriminant(&[-5, 0, 1]).unwrap(), BigInt::from(20));
    }

    #[test]
    fn frobenius_classes() {
        assert_eq!(frobenius_class_quintic(&Q, 2).unwrap().parts(), &[3, 2]);
        assert_eq!(frobenius_class_quintic(&Q, 19), Err(AsaiError::RamifiedPrime(19)));
        assert_eq!(frobenius_class_quintic(&Q, 151), Err(AsaiError::RamifiedPrime(151)));
        // Cross-check against root counting: the number of fixed points is the number of roots in F_p.
        for p in crate::numtheory::arith::primes_in(2, 400) {
            if p == 19 || p == 151 {
                continue;
            }
            let c = frobenius_class_quintic(&Q, p).unwrap();
            let roots = (0..p as i64).filter(|x| (x.pow(5) % p as i64 - x - 1).rem_euclid(p as i64) == 0).count();
            assert_eq!(c.fixed_points() as usize, roots, "p = {p}");
        }
    }

    #[test]
    fn eigenvalues_of_classes() {
        let five = S5FrobeniusClass::new(vec![5]).unwrap();
        let ev = asai_frobenius_eigenvalues(&five);
        assert_eq!(ev.iter().map(|r| r.to_string()).collect::<Vec<_>>(), ["zeta_5", "zeta_5^2", "zeta_5^3", "zeta_5^4"]);
        assert!(distinct_mod_p(&ev, 2) && distinct_mod_p(&ev, 11) && !distinct_mod_p(&ev, 5));
        let id = S5FrobeniusClass::new(vec![1; 5]).unwrap();
        assert!(!distinct_mod_p(&asai_frobenius_eigenvalues(&id), 7));
        let c23 = S5FrobeniusClass::new(vec![2, 3]).unwrap();
        let ev = asai_frobenius_eigenvalues(&c23);
        let mut s: Vec<String> = ev.iter().map(|r| r.to_string()).collect();
        s.sort();
        assert_eq!(s, ["-1", "1", "zeta_3", "zeta_3^2"]);
    }

    #[test]
    fn trace_and_product_of_eigenvalues() {
        for c in S5FrobeniusClass::all() {
            let ev = asai_frobenius_eigenvalues(&c);
            let (k, s) = root_sum(&ev).unwrap();
            assert_eq!(k.as_rational(&s), Some(num_rational::Rational64::from_integer(c.standard_character())));
            let prod = root_product(&ev);
            let want = if c.sign() == 1 { RootOfUnity::new(0, 1) } else { RootOfUnity::new(1, 2) };
            assert_eq!(prod, want, "{c}");
        }
    }
}
