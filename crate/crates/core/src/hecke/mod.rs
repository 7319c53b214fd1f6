//! Hecke linear algebra on supplied spaces of p-adic q-expansions: operator
//! matrices, the ordinary projector, isotypic projection, p-stabilisation,
//! Euler factors and the weight two p-adic L-value pipeline.

pub mod demo;
pub mod eigen;
pub mod euler;
pub mod lvalue;
pub mod space;
pub mod synthetic;


pub use eigen::{
    parse_eigensystem, quadratic_roots, stabilize, stabilize_expansion, stabilize_hilbert, EigenSystem, FieldTag,
    HilbertStabilization, Stabilization,
};
pub use euler::{euler_report, EulerFactorReport, EulerInputs, Factor, GaussTagged};
pub use lvalue::{e_fstar, lvalue_weight2, parse_lvalue_problem, LValue, LValueDoc, LValueProblem, PointData, TargetData};
pub use space::{HeckeOp, HeckeSpace};
pub use synthetic::{restriction_preimage, SyntheticEigenform};

use crate::numtheory::NumError;
use crate::qexp::QExpError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("not ordinary at {0}")]
    NotOrdinary(u64),
    #[error("expansion is not in the span of the basis")]
    NotInSpan,
    #[error("the span of the basis is not stable under {0}")]
    NotInvariant(String),
    #[error("target is not separated from another eigensystem at any supplied prime")]
    NotSeparated,
    #[error("basis is degenerate modulo p")]
    DegenerateBasis,
    #[error("basis bound {have} is too small, need {need}")]
    BoundTooSmall { have: usize, need: usize },
    #[error("level is divisible by {0}")]
    LevelNotPrimeToP(u64),
    #[error("missing Hecke eigenvalue at {0}")]
    MissingEigenvalue(u64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("wild characters need Gauss sums and are not supported")]
    WildCharacterUnsupported,
    #[error("Hecke polynomial has no simple roots over Z_p")]
    RootsNotRational,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    QExp(#[from] QExpError),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl From<crate::realquad::QuadError> for HeckeError {
    fn from(e: crate::realquad::QuadError) -> Self {
        HeckeError::QExp(e.into())
    }
}
