//! Ordinary projector as a polynomial in the operator.

use super::matrix::Matrix;
use super::poly::newton_polygon_split;
use super::zp::Zp;
use super::NumError;

/// Idempotent `e = b(M) v(M)` projecting onto the span of unit-root generalised
/// eigenvectors of `M`, where `charpoly(M) = u v` is the slope factorisation and
/// `a u + b v = 1`.
pub fn ordinary_projector(m: &Matrix<Zp>) -> Result<Matrix<Zp>, NumError> {
    if !m.is_square() {
        return Err(NumError::NotSquare);
    }
    let cp = m.charpoly();
    let split = newton_polygon_split(&cp)?;
    let e = m.eval_poly(&split.b).mul(&m.eval_poly(&split.nonunit));
    Ok(e)
}

/// Number of unit eigenvalues (with multiplicity) of `M`.
pub fn ordinary_rank(m: &Matrix<Zp>) -> Result<usize, NumError> {
    let cp = m.charpoly();
    Ok(m.rows - cp.nonunit_root_count()?)
}
