//! Dense matrices over a coefficient ring.

use num_bigint::BigUint;

use super::poly::Poly;
use super::ring::Ring;
use super::zp::Zp;
use super::NumError;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    pub ctx: R::Ctx,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ctx: R::Ctx, rows: usize, cols: usize) -> Self {
        let z = R::zero_in(&ctx);
        Matrix { ctx, rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(ctx: R::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx.clone(), n, n);
        for i in 0..n {
            m.data[i * n + i] = R::one_in(&ctx);
        }
        m
    }

    pub fn from_rows(ctx: R::Ctx, rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { ctx, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix { data: self.data.iter().map(|a| a.mul(c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Self::zeros(self.ctx.clone(), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(o.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero_in(&self.ctx);
                for (j, x) in v.iter().enumerate() {
                    acc = acc.add(&self.get(i, j).mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.ctx.clone(), self.rows);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// Evaluate a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, f: &Poly<R>) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(self.ctx.clone(), n, n);
        let id = Self::identity(self.ctx.clone(), n);
        for c in f.coeffs.iter().rev() {
            acc = acc.mul(self).add(&id.scale(c));
        }
        acc
    }

    /// Characteristic polynomial det(X - M) by the division-free Berkowitz algorithm.
    pub fn charpoly(&self) -> Poly<R> {
        assert!(self.is_square());
        let n = self.rows;
        let ctx = self.ctx.clone();
        let zero = R::zero_in(&ctx);
        let one = R::one_in(&ctx);
        if n == 0 {
            return Poly::constant(ctx, one);
        }
        // v holds coefficients of the characteristic polynomial of the leading r x r block,
        // highest degree first.
        let mut v: Vec<R> = vec![one.clone(), self.get(0, 0).neg()];
        for r in 1..n {
            // Column vector C = M[0..r, r], row R = M[r, 0..r], A = M[0..r, 0..r].
            let a_rr = self.get(r, r).clone();
            let col: Vec<R> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<R> = (0..r).map(|j| self.get(r, j).clone()).collect();
            // Toeplitz entries: 1, -a_rr, -R C, -R A C, -R A^2 C, ...
            let mut t = vec![one.clone(), a_rr.neg()];
            let mut w = col.clone();
            for _ in 0..r {
                let rc = row.iter().zip(&w).fold(zero.clone(), |acc, (x, y)| acc.add(&x.mul(y)));
                t.push(rc.neg());
                w = (0..r)
                    .map(|i| (0..r).fold(zero.clone(), |acc, j| acc.add(&self.get(i, j).mul(&w[j]))))
                    .collect();
            }
            // New vector = T * v where T is (r+2) x (r+1) lower-triangular Toeplitz.
            let mut nv = vec![zero.clone(); r + 2];
            for (i, slot) in nv.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j {
                        *slot = slot.add(&t[i - j].mul(vj));
                    }
                }
            }
            v = nv;
        }
        v.reverse();
        Poly::new(ctx, v)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ctx.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }
}

impl Matrix<Zp> {
    /// Inverse over Z/p^m (requires invertibility mod p).
    pub fn inverse(&self) -> Result<Self, NumError> {
        assert!(self.is_square());
        let n = self.rows;
        let ctx = self.ctx;
        let mut a = self.clone();
        let mut inv = Self::identity(ctx, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| a.get(r, col).is_unit()).ok_or(NumError::Singular)?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let s = a.get(col, col).inv()?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j] * s;
                inv.data[col * n + j] = inv.data[col * n + j] * s;
            }
            for r in 0..n {
                if r != col {
                    let f = *a.get(r, col);
                    if f.r != 0 {
                        for j in 0..n {
                            a.data[r * n + j] = a.data[r * n + j] - f * a.data[col * n + j];
                            inv.data[r * n + j] = inv.data[r * n + j] - f * inv.data[col * n + j];
                        }
                    }
                }
            }
        }
        Ok(inv)
    }
}
