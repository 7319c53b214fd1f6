//! Totally positive elements of fixed trace in O_L and in the inverse different.
//!
//! An element nu of the inverse different is stored through mu = nu sqrt(D) =
//! x + n w, an element of O_L with n = Tr(nu). Total positivity of nu means
//! mu is positive at the first place and negative at the second, i.e.
//! (2x + n t)^2 < n^2 D with n > 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::field::{QuadElem, RealQuadField};
use super::QuadError;
use crate::numtheory::arith::isqrt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lattice {
    Integers,
    InverseDifferent,
}

/// Index set {(x, n) : 1 <= n <= T, nu(x, n) totally positive}, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceDomain {
    pub disc: i64,
    pub t: i64,
    pub n0: i64,
    pub trace_bound: u32,
    xmin: Vec<i64>,
    offsets: Vec<usize>,
}

/// Largest accepted trace bound.
pub const MAX_TRACE_BOUND: u32 = 20_000;

impl TraceDomain {
    pub fn new(field: &RealQuadField, trace_bound: u32) -> Result<Self, QuadError> {
        if trace_bound > MAX_TRACE_BOUND {
            return Err(QuadError::BoundTooLarge(trace_bound as u64));
        }
        let (disc, t) = (field.disc as i128, field.t as i128);
        let mut xmin = vec![0i64];
        let mut offsets = vec![0usize, 0];
        for n in 1..=trace_bound as i128 {
            let s = isqrt((n * n * disc) as u128) as i128;
            let lo = ceil_half(-s - n * t);
            let hi = (s - n * t).div_euclid(2);
            xmin.push(lo as i64);
            offsets.push(offsets[n as usize] + (hi - lo + 1) as usize);
        }
        Ok(TraceDomain { disc: field.disc, t: field.t, n0: field.n0, trace_bound, xmin, offsets })
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of keys of trace n.
    pub fn count(&self, n: u32) -> usize {
        self.offsets[n as usize + 1] - self.offsets[n as usize]
    }

    /// Range of x for trace n.
    pub fn x_range(&self, n: u32) -> std::ops::RangeInclusive<i64> {
        let lo = self.xmin[n as usize];
        lo..=lo + self.count(n) as i64 - 1
    }

    pub fn index(&self, x: i64, n: u32) -> Option<usize> {
        if n == 0 || n > self.trace_bound {
            return None;
        }
        let lo = self.xmin[n as usize];
        if x < lo || x >= lo + self.count(n) as i64 {
            return None;
        }
        Some(self.offsets[n as usize] + (x - lo) as usize)
    }

    pub fn key(&self, idx: usize) -> (i64, u32) {
        let n = self.offsets.partition_point(|&o| o <= idx) - 1;
        (self.xmin[n] + (idx - self.offsets[n]) as i64, n as u32)
    }

    pub fn keys(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        (1..=self.trace_bound).flat_map(move |n| self.x_range(n).map(move |x| (x, n)))
    }

    /// nu = [(2 n n0 - x t) + (2x + n t) w] / D.
    pub fn nu(&self, x: i64, n: u32) -> QuadElem {
        let n = n as i64;
        let d = BigInt::from(self.disc);
        QuadElem::new(
            BigRational::new(BigInt::from(2 * n * self.n0 - x * self.t), d.clone()),
            BigRational::new(BigInt::from(2 * x + n * self.t), d),
        )
    }

    /// Inverse of `nu`: the key (x, n) of an element of the inverse different.
    pub fn key_of(field: &RealQuadField, nu: &QuadElem) -> Result<(i64, i64), QuadError> {
        let mu = field.mul(nu, &field.sqrt_disc());
        field.coords_i64(&mu).ok_or(QuadError::NotInLattice)
    }
}

fn ceil_half(v: i128) -> i128 {
    -((-v).div_euclid(2))
}

/// Totally positive elements of trace `t` in the given lattice, in lexicographic
/// order of their coordinates in the basis (1, w).
pub fn totally_positive_by_trace(field: &RealQuadField, lattice: Lattice, trace: u32) -> Result<Vec<QuadElem>, QuadError> {
    if trace > MAX_TRACE_BOUND {
        return Err(QuadError::BoundTooLarge(trace as u64));
    }
    let mut out = Vec::new();
    match lattice {
        Lattice::Integers => {
            // a + b w with 2a + b t = T and T^2 > b^2 D.
            let tt = trace as i128;
            let bmax = isqrt((tt * tt / field.disc as i128) as u128) as i128 + 1;
            for b in -bmax..=bmax {
                if b * b * (field.disc as i128) >= tt * tt {
                    continue;
                }
                let twice_a = tt - b * field.t as i128;
                if twice_a % 2 != 0 {
                    continue;
                }
                out.push(QuadElem::int((twice_a / 2) as i64, b as i64));
            }
        }
        Lattice::InverseDifferent => {
            if trace == 0 {
                return Ok(out);
            }
            let dom = TraceDomain::new(field, trace)?;
            for x in dom.x_range(trace) {
                out.push(dom.nu(x, trace));
            }
        }
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::ring::rat;
    use crate::realquad::field::make_field;

    fn box_scan(field: &RealQuadField, lattice: Lattice, trace: u32) -> Vec<QuadElem> {
        // Scan a coordinate box with denominators D and keep the lattice points.
        let d = field.disc;
        let mut out = Vec::new();
        let big = (trace as i64 + 2) * d * 4;
        for bn in -big..=big {
            // Only the trace line 2a + b t = T inside the box is scanned.
            let twice_an = trace as i64 * d - bn * field.t;
            if twice_an % 2 != 0 {
                continue;
            }
            {
                let x = QuadElem::new(rat(twice_an / 2, d), rat(bn, d));
                if field.trace(&x) != rat(trace as i64, 1) || !field.is_totally_positive(&x) {
                    continue;
                }
                let ok = match lattice {
                    Lattice::Integers => x.is_integral(),
                    Lattice::InverseDifferent => field.mul(&x, &field.sqrt_disc()).is_integral(),
                };
                if ok {
                    out.push(x);
                }
            }
        }
        out.sort_by(|a, b| a.lex_cmp(b));
        out
    }

    #[test]
    fn spec_examples() {
        let f5 = make_field(5).unwrap();
        let v = totally_positive_by_trace(&f5, Lattice::InverseDifferent, 1).unwrap();
        assert_eq!(v, vec![QuadElem::new(rat(2, 5), rat(1, 5)), QuadElem::new(rat(3, 5), rat(-1, 5))]);
        let f2 = make_field(2).unwrap();
        assert_eq!(totally_positive_by_trace(&f2, Lattice::Integers, 2).unwrap(), vec![QuadElem::int(1, 0)]);
    }

    #[test]
    fn matches_box_scan() {
        for d in [2, 3, 5, 13] {
            let f = make_field(d).unwrap();
            for t in 1..=3 {
                for lat in [Lattice::Integers, Lattice::InverseDifferent] {
                    assert_eq!(totally_positive_by_trace(&f, lat, t).unwrap(), box_scan(&f, lat, t), "d={d} t={t} {lat:?}");
                }
            }
        }
    }

    #[test]
    fn domain_indexing() {
        let f = make_field(5).unwrap();
        let dom = TraceDomain::new(&f, 20).unwrap();
        assert_eq!(dom.count(1), 2);
        for (i, (x, n)) in dom.keys().enumerate() {
            assert_eq!(dom.index(x, n), Some(i));
            assert_eq!(dom.key(i), (x, n));
            let nu = dom.nu(x, n);
            assert!(f.is_totally_positive(&nu));
            assert_eq!(TraceDomain::key_of(&f, &nu).unwrap(), (x, n as i64));
        }
        let total: usize = (1..=20).map(|n| dom.count(n)).sum();
        assert_eq!(total, dom.len());
    }
}
