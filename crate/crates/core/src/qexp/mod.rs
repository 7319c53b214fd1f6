//! Truncated Fourier expansions of elliptic and Hilbert modular forms and the
//! operators acting on them.
//!
//! Hilbert expansions live on the identity component and are stored densely over
//! the totally positive elements of the inverse different with trace at most T.

pub mod character;
pub mod eisenstein;
pub mod elliptic;
pub mod hilbert;
pub mod json;

pub use character::ResidueCharacter;
pub use eisenstein::{
    bernoulli, eisenstein_hilbert, eisenstein_level_one, siegel_zeta_value, EISENSTEIN_NORMALIZATION,
};
pub use elliptic::EllipticQExp;
pub use hilbert::{diagonal_restrict, HilbertQExp, PrimeGenerator};
pub use json::{parse_expansion, AnyExpansion, RingTag};

use crate::numtheory::NumError;
use crate::realquad::QuadError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QExpError {
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("character is defined on a different residue ring")]
    CharacterDomainMismatch,
    #[error("output bound would be zero")]
    BoundTooSmall,
    #[error("bound {0} exceeds the supported limit")]
    BoundTooLarge(u64),
    #[error("expansions have different coefficient rings")]
    RingMismatch,
    #[error("expansions live over different fields or domains")]
    FieldMismatch,
    #[error("operation needs p-adic coefficients")]
    ExactRingUnsupported,
    #[error("expansion is not depleted at the requested prime")]
    NotDepleted,
    #[error("the prime above {0} has no totally positive generator")]
    NotNarrowlyPrincipal(u64),
    #[error("class number of Q(sqrt {0}) is not supported")]
    ClassNumberUnsupported(i64),
    #[error("wild characters need Gauss sums and are not supported")]
    WildCharacterUnsupported,
    #[error("weight {0} is not supported here")]
    UnsupportedWeight(i32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Num(#[from] NumError),
}
