//! Perfect powers `u_n = y^p` in nondegenerate Lucas sequences.

pub mod bounds;
pub(crate) mod decimal;
pub mod error;
pub mod frey;
pub mod intarith;
pub mod lucas;
pub mod scalar;
pub mod sieve;

pub use error::{Error, Result};
pub use lucas::{SequenceParams, TermPair};

/// Exact terms.
pub type BigTermPair = TermPair<num_bigint::BigInt>;
/// Terms reduced modulo a prime.
pub type ModTermPair = TermPair<scalar::ModQ>;
