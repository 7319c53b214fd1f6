//! Number-theoretic kernels: residue rings, p-adic numbers, polynomials and matrices.

pub mod arith;
pub mod matrix;
pub mod padic;
pub mod poly;
pub mod projector;
pub mod ring;
pub mod zp;

pub use matrix::Matrix;
pub use padic::Padic;
pub use poly::{hensel_unit_root, newton_polygon_split, NewtonSplit, Poly};
pub use projector::{ordinary_projector, ordinary_rank};
pub use ring::{Ring, Q};
pub use zp::{Zp, ZpCtx};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision {p}^{m} exceeds the 62-bit word limit")]
    PrecisionTooLarge { p: u64, m: u32 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not ordinary: the linear coefficient is not a p-adic unit")]
    NotOrdinary,
    #[error("element is not a unit")]
    NotUnit,
    #[error("value is not integral")]
    NotIntegral,
    #[error("denominator divisible by {0}")]
    DenominatorDivisibleByP(u64),
    #[error("residue not divisible by the requested power of p")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("factors are not coprime mod p")]
    NotCoprime,
    #[error("matrix is singular mod p")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
}
