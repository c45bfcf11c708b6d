//! Permutations, automorphisms of cyclic groups, and finite groups given by
//! explicit multiplication tables. Everything here is classical; the
//! simulator modules build their oracles and reference answers from it.

mod cayley;
mod modular;
mod perm;

pub use cayley::FiniteGroup;
pub use modular::{
    classical_bv, classical_bv_with_generator, discrete_log, find_generator, is_prime, mod_pow,
    multiplicative_order, ClassicalBv, ExponentVector, HiddenHomomorphism, ModAutomorphism,
};
pub use perm::{CycleDecomposition, Permutation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("image table of length {len} is not a bijection")]
    NotABijection { len: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("{value} is not prime")]
    NotPrime { value: u64 },
    #[error("modulus {0} is too small, need a prime of at least 3")]
    ModulusTooSmall(u64),
    #[error("{value} is outside the multiplicative range 1..{modulus}")]
    OutOfRange { value: u64, modulus: u64 },
    #[error("{base} does not generate the multiplicative group mod {modulus}")]
    NotAGenerator { base: u64, modulus: u64 },
    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("invalid cycle: {reason}")]
    InvalidCycle { reason: String },
    #[error("invalid multiplication table: {reason}")]
    InvalidTable { reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}
