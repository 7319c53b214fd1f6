//! Finite-dimensional Hecke-stable spaces of p-adic q-expansions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use super::HeckeError;
use crate::numtheory::{ordinary_projector, Matrix, Zp, ZpCtx};
use crate::qexp::EllipticQExp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeckeOp {
    Up,
    T(u64),
    Diamond(u64),
}

impl fmt::Display for HeckeOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeckeOp::Up => write!(f, "U_p"),
            HeckeOp::T(l) => write!(f, "T_{l}"),
            HeckeOp::Diamond(d) => write!(f, "<{d}>"),
        }
    }
}

/// A supplied basis together with a set of pivot coefficients on which it is
/// invertible modulo p. Operator matrices are cached per operator.
#[derive(Debug)]
pub struct HeckeSpace {
    pub ctx: ZpCtx,
    pub p: u64,
    pub weight: i32,
    pub basis: Vec<EllipticQExp<Zp>>,
    /// Nebentypus values; empty means trivial.
    pub character: BTreeMap<u64, Zp>,
    pivots: Vec<usize>,
    pivot_inv: Matrix<Zp>,
    cache: Mutex<HashMap<HeckeOp, Matrix<Zp>>>,
}

impl Clone for HeckeSpace {
    fn clone(&self) -> Self {
        HeckeSpace {
            ctx: self.ctx,
            p: self.p,
            weight: self.weight,
            basis: self.basis.clone(),
            character: self.character.clone(),
            pivots: self.pivots.clone(),
            pivot_inv: self.pivot_inv.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache lock").clone()),
        }
    }
}

/// Earliest coefficient indices on which the rows are independent mod p.
fn select_pivots(basis: &[EllipticQExp<Zp>], bound: usize) -> Result<Vec<usize>, HeckeError> {
    let dim = basis.len();
    let mut rows: Vec<Vec<Zp>> = basis.iter().map(|f| f.coeffs[..=bound].to_vec()).collect();
    let mut used = vec![false; dim];
    let mut pivots = Vec::with_capacity(dim);
    for col in 0..=bound {
        if pivots.len() == dim {
            break;
        }
        let Some(r) = (0..dim).find(|&r| !used[r] && rows[r][col].is_unit()) else { continue };
        used[r] = true;
        pivots.push(col);
        let s = rows[r][col].inv()?;
        let pr: Vec<Zp> = rows[r].iter().map(|&x| x * s).collect();
        for (o, row) in rows.iter_mut().enumerate() {
            if o != r && row[col].r != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pr).skip(col) {
                    *x = *x - f * *y;
                }
            }
        }
    }
    if pivots.len() < dim {
        return Err(HeckeError::DegenerateBasis);
    }
    Ok(pivots)
}

impl HeckeSpace {
    /// Basis elements must share ring, weight and bound.
    pub fn new(p: u64, basis: Vec<EllipticQExp<Zp>>, character: BTreeMap<u64, Zp>) -> Result<Self, HeckeError> {
        let first = basis.first().ok_or(HeckeError::DegenerateBasis)?;
        let (ctx, weight, bound) = (first.ctx, first.weight, first.bound());
        if ctx.p != p {
            return Err(HeckeError::QExp(crate::qexp::QExpError::RingMismatch));
        }
        for f in &basis {
            if f.ctx != ctx || f.weight != weight {
                return Err(HeckeError::QExp(crate::qexp::QExpError::RingMismatch));
            }
            if f.bound() != bound {
                return Err(HeckeError::BoundTooSmall { have: f.bound().min(bound), need: f.bound().max(bound) });
            }
        }
        let pivots = select_pivots(&basis, bound)?;
        let dim = basis.len();
        let a = Matrix::from_rows(ctx, pivots.iter().map(|&n| (0..dim).map(|j| basis[j].coeffs[n]).collect()).collect());
        let pivot_inv = a.inverse().map_err(|_| HeckeError::DegenerateBasis)?;
        Ok(HeckeSpace { ctx, p, weight, basis, character, pivots, pivot_inv, cache: Mutex::new(HashMap::new()) })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bound(&self) -> usize {
        self.basis[0].bound()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn max_pivot(&self) -> usize {
        *self.pivots.last().expect("nonempty basis")
    }

    pub fn chi(&self, d: u64) -> Result<Zp, HeckeError> {
        if self.character.is_empty() {
            return Ok(self.ctx.one());
        }
        self.character.get(&d).copied().ok_or(HeckeError::MissingEigenvalue(d))
    }

    pub fn combine(&self, coords: &[Zp]) -> EllipticQExp<Zp> {
        let mut out = EllipticQExp::zero(self.ctx, self.weight, self.bound());
        out.level = self.basis[0].level;
        out.character = self.basis[0].character.clone();
        for (c, f) in coords.iter().zip(&self.basis) {
            for (o, a) in out.coeffs.iter_mut().zip(&f.coeffs) {
                *o = *o + *c * *a;
            }
        }
        out
    }

    /// Coordinates of `phi` in the basis, certified on every coefficient both know.
    pub fn coordinates(&self, phi: &EllipticQExp<Zp>) -> Result<Vec<Zp>, HeckeError> {
        if phi.ctx != self.ctx {
            return Err(HeckeError::QExp(crate::qexp::QExpError::RingMismatch));
        }
        if phi.bound() < self.max_pivot() {
            return Err(HeckeError::BoundTooSmall { have: phi.bound(), need: self.max_pivot() });
        }
        let v: Vec<Zp> = self.pivots.iter().map(|&n| phi.coeffs[n]).collect();
        let c = self.pivot_inv.mul_vec(&v);
        let n = phi.bound().min(self.bound());
        for k in 0..=n {
            let s = c.iter().zip(&self.basis).fold(self.ctx.zero(), |acc, (ci, f)| acc + *ci * f.coeffs[k]);
            if s != phi.coeffs[k] {
                return Err(HeckeError::NotInSpan);
            }
        }
        Ok(c)
    }

    pub fn apply_op(&self, op: HeckeOp, f: &EllipticQExp<Zp>) -> Result<EllipticQExp<Zp>, HeckeError> {
        Ok(match op {
            HeckeOp::Up => f.hecke_u(self.p)?,
            HeckeOp::T(l) => {
                if l == self.p {
                    f.hecke_u(self.p)?
                } else {
                    f.hecke_t(l, &self.chi(l)?)?
                }
            }
            HeckeOp::Diamond(d) => f.scale(&self.chi(d)?),
        })
    }

    /// M with op(basis_j) = sum_i M_ij basis_i.
    pub fn operator_matrix(&self, op: HeckeOp) -> Result<Matrix<Zp>, HeckeError> {
        if let Some(m) = self.cache.lock().expect("cache lock").get(&op) {
            return Ok(m.clone());
        }
        let dim = self.dim();
        let mut m = Matrix::zeros(self.ctx, dim, dim);
        for j in 0..dim {
            let img = self.apply_op(op, &self.basis[j])?;
            if img.bound() < self.max_pivot() {
                return Err(HeckeError::BoundTooSmall { have: img.bound(), need: self.max_pivot() });
            }
            let c = self.coordinates(&img).map_err(|e| match e {
                HeckeError::NotInSpan => HeckeError::NotInvariant(op.to_string()),
                other => other,
            })?;
            for (i, ci) in c.into_iter().enumerate() {
                m.set(i, j, ci);
            }
        }
        self.cache.lock().expect("cache lock").entry(op).or_insert_with(|| m.clone());
        Ok(m)
    }

    pub fn ordinary_projector(&self) -> Result<Matrix<Zp>, HeckeError> {
        Ok(ordinary_projector(&self.operator_matrix(HeckeOp::Up)?)?)
    }

    pub fn e_ord(&self, phi: &EllipticQExp<Zp>) -> Result<EllipticQExp<Zp>, HeckeError> {
        let c = self.coordinates(phi)?;
        let e = self.ordinary_projector()?;
        Ok(self.combine(&e.mul_vec(&c)))
    }

    /// Project onto the eigenspace of `target` (eigenvalues keyed by l; l = p
    /// means U_p) using, for each other system, one prime where the eigenvalues
    /// differ by a unit. Returns the component and its first coefficient.
    pub fn isotypic_project(
        &self,
        phi: &EllipticQExp<Zp>,
        target: &BTreeMap<u64, Zp>,
        others: &[BTreeMap<u64, Zp>],
    ) -> Result<(EllipticQExp<Zp>, Zp), HeckeError> {
        let mut c = self.coordinates(phi)?;
        for other in others {
            let (l, at, ao) = target
                .iter()
                .filter_map(|(l, at)| other.get(l).map(|ao| (*l, *at, *ao)))
                .find(|(_, at, ao)| (*at - *ao).is_unit())
                .ok_or(HeckeError::NotSeparated)?;
            let op = if l == self.p { HeckeOp::Up } else { HeckeOp::T(l) };
            let m = self.operator_matrix(op)?;
            let shifted = m.sub(&Matrix::identity(self.ctx, self.dim()).scale(&ao));
            let s = (at - ao).inv()?;
            c = shifted.mul_vec(&c).into_iter().map(|x| x * s).collect();
        }
        let comp = self.combine(&c);
        let l1 = if comp.bound() >= 1 { comp.coeffs[1] } else { self.ctx.zero() };
        Ok((comp, l1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::synthetic::SyntheticEigenform;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_up_matrix() {
        let ctx = ZpCtx::new(5, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f1 = SyntheticEigenform::random(ctx, 2, ctx.int(3), &mut rng, 60);
        let f2 = SyntheticEigenform::random(ctx, 2, ctx.int(5 * 7), &mut rng, 60);
        let sp = HeckeSpace::new(5, vec![f1.expansion(60), f2.expansion(60)], BTreeMap::new()).unwrap();
        let m = sp.operator_matrix(HeckeOp::Up).unwrap();
        assert_eq!(m, Matrix::from_rows(ctx, vec![vec![ctx.int(3), ctx.zero()], vec![ctx.zero(), ctx.int(35)]]));
        let phi = f1.expansion(60).scale(&ctx.int(4)).add(&f2.expansion(60).scale(&ctx.int(9))).unwrap();
        assert_eq!(sp.e_ord(&phi).unwrap(), f1.expansion(60).scale(&ctx.int(4)));
        let (comp, l1) = sp.isotypic_project(&phi, &f2.eigenvalues(), &[f1.eigenvalues()]).unwrap();
        assert_eq!(comp, f2.expansion(60).scale(&ctx.int(9)));
        assert_eq!(l1, ctx.int(9));
    }

    #[test]
    fn rejects_non_invariant_span() {
        let ctx = ZpCtx::new(5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f1 = SyntheticEigenform::random(ctx, 2, ctx.int(2), &mut rng, 40).expansion(40);
        let f2 = SyntheticEigenform::random(ctx, 2, ctx.int(3), &mut rng, 40).expansion(40);
        let sp = HeckeSpace::new(5, vec![f1.add(&f2).unwrap()], BTreeMap::new()).unwrap();
        assert!(matches!(sp.operator_matrix(HeckeOp::Up), Err(HeckeError::NotInvariant(_))));
        assert_eq!(sp.coordinates(&f1), Err(HeckeError::NotInSpan));
        assert_eq!(HeckeSpace::new(5, vec![f1.clone(), f1], BTreeMap::new()).unwrap_err(), HeckeError::DegenerateBasis);
    }
}
