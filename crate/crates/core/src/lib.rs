//! Computational kernels for p-adic L-values attached to Hilbert modular forms
//! over real quadratic fields: q-expansion operators, diagonal restriction,
//! ordinary projection, Asai representations and a prime sieve.

pub mod numtheory;
pub mod qexp;
pub mod realquad;
pub mod hecke;
pub mod asai;
pub mod sieve;
