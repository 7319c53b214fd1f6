//! Indefinite binary quadratic forms ax^2 + bxy + cy^2 and their reduction cycles.
//! Proper equivalence classes of primitive forms of discriminant D are in
//! bijection with narrow ideal classes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::collections::HashSet;

use crate::numtheory::arith::isqrt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl Form {
    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        BigInt::from(self.a) * x * x + BigInt::from(self.b) * x * y + BigInt::from(self.c) * y * y
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// Reduced: 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        let two_a = 2 * self.a.abs();
        self.b > 0
            && self.b * self.b < d
            && (two_a + self.b) * (two_a + self.b) > d
            && (two_a <= self.b || (two_a - self.b) * (two_a - self.b) < d)
    }

    /// One reduction step: the form (c, b', c') equivalent under [[0,-1],[1,delta]].
    pub fn rho(&self) -> (Form, i128) {
        let d = self.disc();
        let s = isqrt(d as u128) as i128;
        let c = self.c;
        let ac = c.abs();
        let bp = if c * c < d {
            let k = (s + self.b).div_euclid(2 * ac);
            -self.b + 2 * ac * k
        } else {
            let mut r = (-self.b).rem_euclid(2 * ac);
            if r > ac {
                r -= 2 * ac;
            }
            r
        };
        let delta = (bp + self.b) / (2 * c);
        (Form { a: c, b: bp, c: (bp * bp - d) / (4 * c) }, delta)
    }
}

/// Integer 2x2 matrix [[r, s], [t, u]] acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2 {
    pub r: BigInt,
    pub s: BigInt,
    pub t: BigInt,
    pub u: BigInt,
}

impl Sl2 {
    pub fn identity() -> Self {
        Sl2 { r: BigInt::one(), s: BigInt::from(0), t: BigInt::from(0), u: BigInt::one() }
    }

    pub fn mul(&self, o: &Sl2) -> Sl2 {
        Sl2 {
            r: &self.r * &o.r + &self.s * &o.t,
            s: &self.r * &o.s + &self.s * &o.u,
            t: &self.t * &o.r + &self.u * &o.t,
            u: &self.t * &o.s + &self.u * &o.u,
        }
    }

    fn step(delta: i128) -> Sl2 {
        Sl2 { r: BigInt::from(0), s: BigInt::from(-1), t: BigInt::one(), u: BigInt::from(delta) }
    }
}

/// Outcome of walking the reduction cycle of a form.
pub struct CycleWalk {
    /// Accumulated transformation M with f(M(x,y)) = reduced form at each point.
    pub representation_of_one: Option<(BigInt, BigInt)>,
    pub cycle: Vec<Form>,
}

/// Reduce `f`, walk its cycle, and report a primitive vector (x, y) with f(x, y) = 1
/// if the class of `f` is the principal class.
pub fn walk_cycle(f: Form, max_steps: usize) -> Option<CycleWalk> {
    let mut g = f;
    let mut m = Sl2::identity();
    let mut steps = 0;
    while !g.is_reduced() {
        let (h, delta) = g.rho();
        m = m.mul(&Sl2::step(delta));
        g = h;
        steps += 1;
        if steps > max_steps {
            return None;
        }
    }
    let start = g;
    let mut cycle = Vec::new();
    let mut rep = None;
    loop {
        cycle.push(g);
        if g.a == 1 && rep.is_none() {
            rep = Some((m.r.clone(), m.t.clone()));
        }
        let (h, delta) = g.rho();
        m = m.mul(&Sl2::step(delta));
        g = h;
        steps += 1;
        if g == start || steps > max_steps {
            break;
        }
    }
    if g != start {
        return None;
    }
    Some(CycleWalk { representation_of_one: rep, cycle })
}

/// All primitive reduced forms of discriminant D.
pub fn reduced_forms(disc: i64) -> Vec<Form> {
    let d = disc as i128;
    let s = isqrt(d as u128) as i128;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (d - b * b) / 4; // -ac
        let mut a = 1i128;
        while a * a <= n {
            if n % a == 0 {
                for aa in [a, n / a] {
                    for sign in [1i128, -1] {
                        let f = Form { a: sign * aa, b, c: -sign * (n / aa) };
                        if f.is_reduced() && f.is_primitive() && !out.contains(&f) {
                            out.push(f);
                        }
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out
}

/// Narrow class number: the number of reduction cycles of primitive reduced forms.
pub fn narrow_class_number(disc: i64) -> u64 {
    let forms = reduced_forms(disc);
    let mut seen: HashSet<Form> = HashSet::new();
    let mut cycles = 0;
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = g.rho().0;
            if g == f {
                break;
            }
        }
    }
    cycles
}
