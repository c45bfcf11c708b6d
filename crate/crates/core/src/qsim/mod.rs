//! Exact dense state-vector simulation over registers of mixed-dimension
//! wires. Only the gate families the algorithms need are provided: basis
//! permutations, controlled automorphism powers, select-by-control
//! permutations, reflections, and single-wire discrete Fourier transforms.

mod gates;
mod layout;
mod state;

pub use gates::{BasisPermutationGate, ControlledPowerGate, FourierSign};
pub use layout::RegisterLayout;
pub use state::{diagonal_indices, indices_with_digit, Distribution, StateVector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("a register needs at least one wire")]
    EmptyLayout,
    #[error("wire {wire} has dimension {dim}, need at least 2")]
    BadDimension { wire: usize, dim: usize },
    #[error("register dimension overflows")]
    DimensionOverflow,
    #[error("wire {wire} out of range for a register of {wires} wires")]
    WireOutOfRange { wire: usize, wires: usize },
    #[error("digit {digit} out of range for wire {wire} of dimension {dim}")]
    DigitOutOfRange { wire: usize, digit: usize, dim: usize },
    #[error("expected {wires} digits, got {got}")]
    WrongDigitCount { got: usize, wires: usize },
    #[error("basis index {index} out of range for total dimension {total}")]
    IndexOutOfRange { index: usize, total: usize },
    #[error("layouts differ")]
    LayoutMismatch,
    #[error("permutation of size {got} does not fit a wire of dimension {dim}")]
    GateSizeMismatch { got: usize, dim: usize },
    #[error("need one permutation per control digit: got {got} for dimension {dim}")]
    WrongTableCount { got: usize, dim: usize },
    #[error("control and target wires must differ")]
    ControlEqualsTarget,
    #[error("uniform and fixed wires must cover every wire exactly once")]
    BadWirePartition,
    #[error("need exactly two wires of equal dimension, got {0:?}")]
    NotAPairRegister(Vec<usize>),
    #[error("state is not normalized: |psi|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude count {got} does not match total dimension {total}")]
    WrongAmplitudeCount { got: usize, total: usize },
}
