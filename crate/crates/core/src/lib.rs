//! Exact simulation of three search and identification algorithms on
//! permutations and group automorphisms:
//!
//! - [`bv`]: one-query identification of a hidden homomorphism from
//!   Z_{p-1}^m into the automorphism group of Z_p, in the style of
//!   Bernstein-Vazirani, plus recovery of its kernel.
//! - [`fixed_point`]: amplitude amplification on a doubled register that
//!   finds fixed points of a permutation power, and cycle finding built on
//!   top of it.
//! - [`program_search`](mod@program_search): Grover search over a bank of
//!   permutation programs
//!   for the one mapping chosen inputs to chosen outputs, including
//!   tuple-constrained search and conjugacy search over inner automorphisms.
//!
//! [`group`] holds the classical side (permutations, modular arithmetic,
//! multiplication tables); [`qsim`] is the dense mixed-radix state-vector
//! engine everything runs on. All randomness is drawn from caller-supplied
//! generators, so runs are reproducible from a seed.

pub mod bv;
pub mod fixed_point;
pub mod group;
pub mod program_search;
pub mod qsim;

pub use bv::{build_eigenvector, recover_kernel, run_bv, BvError, BvInstance, BvOutcome};
pub use fixed_point::{
    find_cycle, grover_fixed_point, optimal_iterations, one_iteration_amplitudes,
    FixedPointError, FixedPointInstance, FixedPointOutcome, GroverTrace,
};
pub use group::{
    classical_bv, classical_bv_with_generator, discrete_log, find_generator, is_prime, mod_pow,
    multiplicative_order, ClassicalBv, CycleDecomposition, ExponentVector, FiniteGroup,
    GroupError, HiddenHomomorphism, ModAutomorphism, Permutation,
};
pub use program_search::{
    conjugacy_search, one_iteration_coefficients, program_search, program_search_adaptive,
    subspace_predictor, tuple_program_search, ConjugacyOutcome, GroverGeometry,
    ProgramBank, ProgramSearchError, ProgramSearchOutcome, SearchTarget,
};
pub use qsim::{
    diagonal_indices, indices_with_digit, BasisPermutationGate, ControlledPowerGate, Distribution,
    FourierSign, RegisterLayout, SimError, StateVector,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
