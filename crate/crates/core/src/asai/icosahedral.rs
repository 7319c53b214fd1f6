//! The S5 case: SL(2, F_5) extended by an outer involution, with the binary
//! icosahedral representation over Q(zeta_5). Modulo the centre the group is S5
//! and the tensor induction is the permutation representation minus the trivial one.

use num_rational::Rational64;

use super::cyclotomic::{CMat, Cyc, CycloField};
use super::group::{FiniteGroup, FiniteRep2};
use super::quintic::S5FrobeniusClass;
use super::AsaiError;

type Elem = ([u8; 4], u8);

fn mat_mul(a: &[u8; 4], b: &[u8; 4]) -> [u8; 4] {
    let m = |x: u8, y: u8| x as u32 * y as u32;
    [
        ((m(a[0], b[0]) + m(a[1], b[2])) % 5) as u8,
        ((m(a[0], b[1]) + m(a[1], b[3])) % 5) as u8,
        ((m(a[2], b[0]) + m(a[3], b[2])) % 5) as u8,
        ((m(a[2], b[1]) + m(a[3], b[3])) % 5) as u8,
    ]
}

/// Conjugation by [[0,1],[2,0]], whose determinant 3 is a non-square mod 5 and
/// whose square is scalar; so this is an outer involution of SL(2, F_5).
fn phi(b: &[u8; 4]) -> [u8; 4] {
    const M: [u8; 4] = [0, 1, 2, 0];
    const M_INV: [u8; 4] = [0, 3, 1, 0];
    mat_mul(&mat_mul(&M, b), &M_INV)
}

fn elem_mul(x: &Elem, y: &Elem) -> Elem {
    let b = if x.1 == 1 { phi(&y.0) } else { y.0 };
    (mat_mul(&x.0, &b), (x.1 + y.1) % 2)
}

const IDENTITY: [u8; 4] = [1, 0, 0, 1];
const MINUS_IDENTITY: [u8; 4] = [4, 0, 0, 4];

pub struct IcosahedralExample {
    pub rep: FiniteRep2,
    pub elements: Vec<([u8; 4], u8)>,
}

fn klein_generators(k: &CycloField) -> (CMat, CMat) {
    let z = |e: i64| k.zeta_pow(e);
    let sqrt5 = [z(1), z(2), z(3), z(4)]
        .iter()
        .zip([1, -1, -1, 1])
        .fold(k.zero(), |acc, (x, c)| k.add(&acc, &k.scale(x, Rational64::from_integer(c))));
    // -1/sqrt5 = -sqrt5/5
    let c = k.scale(&sqrt5, Rational64::new(-1, 5));
    let a = k.sub(&z(1), &z(4));
    let b = k.sub(&z(2), &z(3));
    let s = CMat::from_rows(vec![vec![k.mul(&c, &a), k.mul(&c, &b)], vec![k.mul(&c, &b), k.neg(&k.mul(&c, &a))]]);
    let t = CMat::from_rows(vec![vec![z(3), k.zero()], vec![k.zero(), z(2)]]);
    (s, t)
}

impl IcosahedralExample {
    pub fn build() -> Result<Self, AsaiError> {
        let gens: Vec<Elem> = vec![([1, 1, 0, 1], 0), ([0, 4, 1, 0], 0), (IDENTITY, 1)];
        let (group, elements) = FiniteGroup::generate((IDENTITY, 0u8), &gens, elem_mul)?;
        debug_assert_eq!(group.order, 240);
        let in_subgroup: Vec<bool> = elements.iter().map(|e| e.1 == 0).collect();
        let theta = elements.iter().position(|e| *e == (IDENTITY, 1)).expect("theta generated");
        let k = CycloField::new(5)?;
        let (s, t) = klein_generators(&k);
        let of_order = |n: u64| -> Vec<usize> {
            (0..group.order).filter(|&g| in_subgroup[g] && group.element_order(g) == n).collect()
        };
        for &s1 in &of_order(4) {
            for &t1 in &of_order(5) {
                // Quick relation filter before the full extension: (st)^3 = 1.
                if group.pow(group.mul(s1, t1), 3) != group.identity {
                    continue;
                }
                let gens = [(s1, s.clone()), (t1, t.clone())];
                if let Ok(rep) = FiniteRep2::from_generators(group.clone(), k.clone(), in_subgroup.clone(), theta, &gens) {
                    return Ok(IcosahedralExample { rep, elements });
                }
            }
        }
        Err(AsaiError::NotHomomorphism("no matching generators in SL(2, F_5)".into()))
    }

    /// Cycle type of the image in S5, read from the order modulo the centre and the coset.
    pub fn s5_class(&self, g: usize) -> S5FrobeniusClass {
        let grp = &self.rep.group;
        let mut x = g;
        let mut k = 1u32;
        while !(self.elements[x].1 == 0 && (self.elements[x].0 == IDENTITY || self.elements[x].0 == MINUS_IDENTITY)) {
            x = grp.mul(x, g);
            k += 1;
        }
        let parts: Vec<u32> = match (self.elements[g].1, k) {
            (0, 1) => vec![1, 1, 1, 1, 1],
            (0, 2) => vec![2, 2, 1],
            (0, 3) => vec![3, 1, 1],
            (0, 5) => vec![5],
            (1, 2) => vec![2, 1, 1, 1],
            (1, 4) => vec![4, 1],
            (1, 6) => vec![3, 2],
            other => unreachable!("no element of S5 with data {other:?}"),
        };
        S5FrobeniusClass::new(parts).expect("partition of 5")
    }

    pub fn field(&self) -> &CycloField {
        &self.rep.field
    }

    pub fn int(&self, n: i64) -> Cyc {
        self.rep.field.int(n)
    }
}
