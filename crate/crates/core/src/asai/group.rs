//! Finite groups by multiplication table, two-dimensional representations of an
//! index two subgroup, and their tensor induction.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;

use super::cyclotomic::{CMat, Cyc, CycloField};
use super::AsaiError;

/// Largest group order accepted.
pub const MAX_ORDER: usize = 1500;

/// Matrix entries of a representation must have coefficients with numerator and
/// denominator at most this in absolute value, and denominators dividing
/// `ENTRY_DENOMINATORS`; this keeps products inside i64 rationals.
pub const MAX_ENTRY_HEIGHT: i64 = 1 << 10;
pub const ENTRY_DENOMINATORS: i64 = 120;

fn bounded(m: &CMat) -> bool {
    m.d.iter().flat_map(|c| c.0.iter()).all(|x| {
        x.numer().unsigned_abs() <= MAX_ENTRY_HEIGHT as u64 && ENTRY_DENOMINATORS % x.denom() == 0
    })
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub order: usize,
    pub identity: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    /// Closure of `gens` under `mul`, elements numbered in breadth-first order
    /// (the identity first). Also returns the element list.
    pub fn generate<T: Clone + Eq + Hash>(
        identity: T,
        gens: &[T],
        mul: impl Fn(&T, &T) -> T,
    ) -> Result<(Self, Vec<T>), AsaiError> {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() >= MAX_ORDER {
                        return Err(AsaiError::Unsupported(format!("group order exceeds {MAX_ORDER}")));
                    }
                    index.insert(x.clone(), elems.len());
                    elems.push(x);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&mul(&elems[a], &elems[b])] as u32;
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a * n + b] == 0).expect("group has inverses") as u32).collect();
        Ok((FiniteGroup { order: n, identity: 0, mul: table, inv }, elems))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        (0..e).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// A two-dimensional representation of an index two subgroup H of G, with a
/// chosen theta outside H.
#[derive(Clone, Debug)]
pub struct FiniteRep2 {
    pub group: FiniteGroup,
    pub field: CycloField,
    pub in_subgroup: Vec<bool>,
    pub theta: usize,
    /// rho(h) for h in H, None on the other coset.
    pub rho: Vec<Option<CMat>>,
}

impl FiniteRep2 {
    /// Extend an assignment on generators of H to all of H and verify it is a homomorphism.
    pub fn from_generators(
        group: FiniteGroup,
        field: CycloField,
        in_subgroup: Vec<bool>,
        theta: usize,
        gens: &[(usize, CMat)],
    ) -> Result<Self, AsaiError> {
        let h_order = in_subgroup.iter().filter(|&&b| b).count();
        if in_subgroup.len() != group.order || 2 * h_order != group.order || !in_subgroup[group.identity] {
            return Err(AsaiError::NotIndexTwo);
        }
        if in_subgroup[theta] {
            return Err(AsaiError::ThetaInSubgroup);
        }
        if gens.iter().any(|(g, m)| !in_subgroup[*g] || m.n != 2) {
            return Err(AsaiError::NotHomomorphism("generator outside the subgroup".into()));
        }
        if gens.iter().any(|(_, m)| !bounded(m)) {
            return Err(AsaiError::Unsupported("generator entries exceed the height bound".into()));
        }
        let mut rho: Vec<Option<CMat>> = vec![None; group.order];
        rho[group.identity] = Some(CMat::identity(&field, 2));
        let mut queue = vec![group.identity];
        while let Some(x) = queue.pop() {
            for (g, m) in gens {
                let y = group.mul(x, *g);
                let my = rho[x].as_ref().unwrap().mul(&field, m);
                match &rho[y] {
                    Some(existing) if *existing != my => {
                        return Err(AsaiError::NotHomomorphism(format!("inconsistent value at element {y}")))
                    }
                    Some(_) => {}
                    None => {
                        if !bounded(&my) {
                            return Err(AsaiError::NotHomomorphism(format!("entries grow without bound at element {y}")));
                        }
                        rho[y] = Some(my);
                        queue.push(y);
                    }
                }
            }
        }
        if rho.iter().zip(&in_subgroup).any(|(r, &h)| r.is_some() != h) {
            return Err(AsaiError::NotHomomorphism("generators do not span the subgroup".into()));
        }
        let rep = FiniteRep2 { group, field, in_subgroup, theta, rho };
        rep.verify()?;
        Ok(rep)
    }

    /// rho(a) rho(b) = rho(ab) on all pairs in H.
    pub fn verify(&self) -> Result<(), AsaiError> {
        let hs: Vec<usize> = (0..self.group.order).filter(|&g| self.in_subgroup[g]).collect();
        let bad = hs.par_iter().find_any(|&&a| {
            hs.iter().any(|&b| {
                let ab = self.group.mul(a, b);
                self.h(a).mul(&self.field, self.h(b)) != *self.h(ab)
            })
        });
        match bad {
            Some(a) => Err(AsaiError::NotHomomorphism(format!("relation fails at element {a}"))),
            None => Ok(()),
        }
    }

    fn h(&self, a: usize) -> &CMat {
        self.rho[a].as_ref().expect("element of the subgroup")
    }
}

/// Four-dimensional tensor induction, basis e_i (x) e_j ordered (1,1), (1,2), (2,1), (2,2).
#[derive(Clone, Debug)]
pub struct AsaiRep {
    pub field: CycloField,
    pub mats: Vec<CMat>,
}

pub const ASAI_BASIS: [&str; 4] = ["e1(x)e1^theta", "e1(x)e2^theta", "e2(x)e1^theta", "e2(x)e2^theta"];

/// With coset representatives {1, theta}, write g r_i = r_j h_i; the factor at
/// coset i is moved to coset j and acted on by rho(h_i). On H this is
/// rho(h) (x) rho(theta^-1 h theta).
pub fn tensor_induce(rep: &FiniteRep2) -> Result<AsaiRep, AsaiError> {
    let g = &rep.group;
    let k = &rep.field;
    let reps = [g.identity, rep.theta];
    let mats = (0..g.order)
        .into_par_iter()
        .map(|x| {
            let mut m = vec![k.zero(); 16];
            // (target coset, h) for each source coset.
            let mut moves = [(0usize, 0usize); 2];
            for (i, &ri) in reps.iter().enumerate() {
                let xr = g.mul(x, ri);
                let j = if rep.in_subgroup[xr] { 0 } else { 1 };
                let h = g.mul(g.inv(reps[j]), xr);
                moves[i] = (j, h);
            }
            let (a, b) = (rep.h(moves[0].1), rep.h(moves[1].1));
            // e_p (x) e_q -> (a e_p) at slot j0, (b e_q) at slot j1.
            for pidx in 0..2 {
                for qidx in 0..2 {
                    for u in 0..2 {
                        for v in 0..2 {
                            let c = k.mul(a.get(u, pidx), b.get(v, qidx));
                            let (s0, s1) = if moves[0].0 == 0 { (u, v) } else { (v, u) };
                            m[(s0 * 2 + s1) * 4 + pidx * 2 + qidx] = c;
                        }
                    }
                }
            }
            CMat { n: 4, d: m }
        })
        .collect();
    Ok(AsaiRep { field: k.clone(), mats })
}

impl AsaiRep {
    pub fn character(&self, g: usize) -> Cyc {
        self.mats[g].trace(&self.field)
    }

    /// As(a) As(b) = As(ab) for every pair; returns the first failure.
    pub fn verify_homomorphism(&self, group: &FiniteGroup) -> Result<(), AsaiError> {
        let bad = (0..group.order).into_par_iter().find_any(|&a| {
            (0..group.order).any(|b| self.mats[a].mul(&self.field, &self.mats[b]) != self.mats[group.mul(a, b)])
        });
        match bad {
            Some(a) => Err(AsaiError::NotHomomorphism(format!("As fails at element {a}"))),
            None => Ok(()),
        }
    }
}
