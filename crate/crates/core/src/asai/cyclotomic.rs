//! Exact arithmetic in Q(zeta_n) on the power basis 1, zeta, ..., zeta^(phi(n)-1).

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::AsaiError;

/// Largest supported conductor.
pub const MAX_CONDUCTOR: u32 = 720;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyc(pub Vec<Rational64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloField {
    pub n: u32,
    /// Monic Phi_n, constant term first.
    phi: Vec<i64>,
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Phi_n as integer coefficients, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut f = vec![0i64; n as usize + 1];
    f[0] = -1;
    f[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            f = poly_div_exact(&f, &cyclotomic_polynomial(d));
        }
    }
    f
}

impl CycloField {
    pub fn new(n: u32) -> Result<Self, AsaiError> {
        if n == 0 || n > MAX_CONDUCTOR {
            return Err(AsaiError::Unsupported(format!("conductor {n}")));
        }
        Ok(CycloField { n, phi: cyclotomic_polynomial(n) })
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![Rational64::zero(); self.degree()])
    }

    pub fn rational(&self, q: Rational64) -> Cyc {
        let mut c = self.zero();
        c.0[0] = q;
        c
    }

    pub fn int(&self, n: i64) -> Cyc {
        self.rational(Rational64::from_integer(n))
    }

    pub fn one(&self) -> Cyc {
        self.int(1)
    }

    fn reduce(&self, mut v: Vec<Rational64>) -> Cyc {
        let d = self.degree();
        for i in (d..v.len()).rev() {
            let c = v[i];
            if c.is_zero() {
                continue;
            }
            for (j, pj) in self.phi.iter().enumerate() {
                v[i - d + j] -= c * Rational64::from_integer(*pj);
            }
        }
        v.truncate(d);
        v.resize(d, Rational64::zero());
        Cyc(v)
    }

    /// zeta^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let e = k.rem_euclid(self.n as i64) as usize;
        let mut v = vec![Rational64::zero(); e.max(self.degree()) + 1];
        v[e] = Rational64::one();
        self.reduce(v)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &Cyc, q: Rational64) -> Cyc {
        Cyc(a.0.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let d = self.degree();
        let mut v = vec![Rational64::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        self.reduce(v)
    }

    pub fn is_zero(&self, a: &Cyc) -> bool {
        a.0.iter().all(|x| x.is_zero())
    }

    /// The automorphism zeta -> zeta^k, k prime to n.
    pub fn galois(&self, a: &Cyc, k: i64) -> Cyc {
        let mut acc = self.zero();
        for (i, x) in a.0.iter().enumerate() {
            if !x.is_zero() {
                acc = self.add(&acc, &self.scale(&self.zeta_pow(k * i as i64), *x));
            }
        }
        acc
    }

    /// Rational value, if the element lies in Q.
    pub fn as_rational(&self, a: &Cyc) -> Option<Rational64> {
        a.0[1..].iter().all(|x| x.is_zero()).then_some(a.0[0])
    }

    /// Text form in the power basis, e.g. "-1 - zeta_5^2".
    pub fn format(&self, a: &Cyc) -> String {
        let mut out = String::new();
        for (i, x) in a.0.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let mag = x.abs();
            let sep = match (out.is_empty(), *x < Rational64::zero()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let z = match i {
                0 => String::new(),
                1 => format!("zeta_{}", self.n),
                _ => format!("zeta_{}^{i}", self.n),
            };
            let body = match (i, mag == Rational64::one()) {
                (0, _) => mag.to_string(),
                (_, true) => z,
                (_, false) => format!("{mag}*{z}"),
            };
            out += sep;
            out += &body;
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Image in F_q under zeta -> w, where w has multiplicative order n mod q.
    pub fn reduce_mod(&self, a: &Cyc, q: u64, w: u64) -> Option<u64> {
        let mut acc = 0u128;
        let mut pw = 1u128;
        let q128 = q as u128;
        for x in &a.0 {
            let num = x.numer().rem_euclid(q as i64) as u128;
            let den = x.denom().rem_euclid(q as i64) as u64;
            let inv = crate::numtheory::arith::inv_mod(den, q)? as u128;
            acc = (acc + num * inv % q128 * pw) % q128;
            pw = pw * w as u128 % q128;
        }
        Some(acc as u64)
    }
}

/// Square matrices over a cyclotomic field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMat {
    pub n: usize,
    pub d: Vec<Cyc>,
}

impl CMat {
    pub fn identity(k: &CycloField, n: usize) -> Self {
        let mut d = vec![k.zero(); n * n];
        for i in 0..n {
            d[i * n + i] = k.one();
        }
        CMat { n, d }
    }

    pub fn from_rows(rows: Vec<Vec<Cyc>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix expected");
        CMat { n, d: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.d[i * self.n + j]
    }

    pub fn mul(&self, k: &CycloField, o: &CMat) -> CMat {
        let n = self.n;
        let mut d = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = k.zero();
                for l in 0..n {
                    let a = self.get(i, l);
                    let b = o.get(l, j);
                    if !k.is_zero(a) && !k.is_zero(b) {
                        acc = k.add(&acc, &k.mul(a, b));
                    }
                }
                d.push(acc);
            }
        }
        CMat { n, d }
    }

    pub fn kron(&self, k: &CycloField, o: &CMat) -> CMat {
        let (a, b) = (self.n, o.n);
        let n = a * b;
        let mut d = vec![k.zero(); n * n];
        for i in 0..a {
            for j in 0..a {
                for r in 0..b {
                    for s in 0..b {
                        d[(i * b + r) * n + j * b + s] = k.mul(self.get(i, j), o.get(r, s));
                    }
                }
            }
        }
        CMat { n, d }
    }

    pub fn trace(&self, k: &CycloField) -> Cyc {
        (0..self.n).fold(k.zero(), |acc, i| k.add(&acc, self.get(i, i)))
    }

    /// Determinant by cofactor expansion (n <= 4 in practice).
    pub fn det(&self, k: &CycloField) -> Cyc {
        let n = self.n;
        if n == 1 {
            return self.d[0].clone();
        }
        let mut acc = k.zero();
        for j in 0..n {
            let minor = CMat {
                n: n - 1,
                d: (1..n).flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c))).map(|(i, c)| self.get(i, c).clone()).collect(),
            };
            let term = k.mul(self.get(0, j), &minor.det(k));
            acc = if j % 2 == 0 { k.add(&acc, &term) } else { k.sub(&acc, &term) };
        }
        acc
    }

    /// Characteristic polynomial det(x I - M), constant term first, by Faddeev-LeVerrier.
    pub fn charpoly(&self, k: &CycloField) -> Vec<Cyc> {
        let n = self.n;
        let mut coeffs = vec![k.zero(); n + 1];
        coeffs[n] = k.one();
        let mut m = CMat { n, d: vec![k.zero(); n * n] };
        for i in 1..=n {
            // M_i = A M_{i-1} + c_{n-i+1} I ; c_{n-i} = -tr(A M_i) / i
            let mut mi = self.mul(k, &m);
            for j in 0..n {
                mi.d[j * n + j] = k.add(&mi.d[j * n + j], &coeffs[n - i + 1]);
            }
            let t = self.mul(k, &mi).trace(k);
            coeffs[n - i] = k.scale(&t, Rational64::new(-1, i as i64));
            m = mi;
        }
        coeffs
    }
}
