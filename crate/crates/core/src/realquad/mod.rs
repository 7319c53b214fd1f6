//! Real quadratic fields: arithmetic, units, prime splitting, narrow principality
//! and enumeration of totally positive elements.

pub mod enumerate;
pub mod field;
pub mod forms;
pub mod primes;
pub mod record;

pub use enumerate::{totally_positive_by_trace, Lattice, TraceDomain};
pub use field::{make_field, QuadElem, RealQuadField};
pub use primes::{
    narrow_generator, residue_map, split_prime, unit_order_mod, NarrowOptions, NarrowVerdict, Place, ResidueMap,
    Splitting,
};
pub use record::{parse_field_record, FieldRecord};

use crate::numtheory::NumError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("{0} is not a squarefree integer > 1 within range")]
    InvalidField(i64),
    #[error("continued fraction for the unit of Q(sqrt {0}) exceeded the step limit")]
    UnitSearchOverflow(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} does not split")]
    NotSplit(u64),
    #[error("element is not integral at p")]
    NotPIntegral,
    #[error("element does not lie in the requested lattice")]
    NotInLattice,
    #[error("division by zero")]
    DivisionByZero,
    #[error("bound {0} exceeds the supported limit")]
    BoundTooLarge(u64),
    #[error("field record mismatch: {0}")]
    RecordMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Num(#[from] NumError),
}
