//! One-query identification of a hidden homomorphism f from Z_{p-1}^m into
//! the automorphism group of Z_p.
//!
//! Each automorphism of Z_p is multiplication by some unit, and the units
//! form a cyclic group of order p-1 generated by any primitive root j0. The
//! circuit holds m program wires of dimension p-1 and one data wire of
//! dimension p. The data wire is prepared in a fixed eigenvector |u⟩ of the
//! generator's automorphism; program wire k then drives a controlled power of
//! the k-th hidden automorphism, which only kicks the phase
//! exp(2πi·y_k·n_k/(p-1)) back onto the program register, where the hidden
//! multiplier is j0^{y_k}. One inverse Fourier transform per program wire
//! turns those phases into the digit string y. A classical identification
//! needs m oracle evaluations; this uses the circuit once.

use num_complex::Complex64;
use thiserror::Error;

use crate::group::{
    mod_pow, multiplicative_order, ExponentVector, GroupError, HiddenHomomorphism, ModAutomorphism,
};
use crate::qsim::{ControlledPowerGate, FourierSign, RegisterLayout, SimError, StateVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BvError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("readout was not a point mass: peak probability {peak}")]
    NotPointMass { peak: f64 },
}

/// A hidden homomorphism together with the generator used to express its
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvInstance {
    hidden: HiddenHomomorphism,
    generator: u64,
}

impl BvInstance {
    /// Uses the smallest generator of the multiplicative group mod p.
    pub fn new(hidden: HiddenHomomorphism) -> Result<Self, BvError> {
        let generator = crate::group::find_generator(hidden.modulus())?;
        Ok(BvInstance { hidden, generator })
    }

    /// Uses a caller-chosen generator, which must have full order p-1.
    pub fn with_generator(hidden: HiddenHomomorphism, generator: u64) -> Result<Self, BvError> {
        let p = hidden.modulus();
        if multiplicative_order(generator, p)? != p - 1 {
            return Err(GroupError::NotAGenerator {
                base: generator,
                modulus: p,
            }
            .into());
        }
        Ok(BvInstance { hidden, generator })
    }

    pub fn hidden(&self) -> &HiddenHomomorphism {
        &self.hidden
    }

    pub fn modulus(&self) -> u64 {
        self.hidden.modulus()
    }

    pub fn arity(&self) -> usize {
        self.hidden.arity()
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// m program wires of dimension p-1, then the data wire of dimension p.
    pub fn layout(&self) -> RegisterLayout {
        let p = self.modulus() as usize;
        let mut dims = vec![p - 1; self.arity()];
        dims.push(p);
        RegisterLayout::new(dims).expect("p >= 3 keeps every dimension >= 2")
    }
}

/// What one run of the circuit yields.
#[derive(Clone, Debug, PartialEq)]
pub struct BvOutcome {
    /// The exponent string y with hidden multiplier j_k = j0^{y_k}.
    pub exponents: ExponentVector,
    /// All n with y·n = 0 mod p-1, in lexicographic order.
    pub kernel: Vec<ExponentVector>,
    /// The image of the homomorphism, as the sorted multiplier subgroup
    /// generated by the hidden multipliers.
    pub image: Vec<u64>,
    /// Always 1: the circuit evaluates the homomorphism once.
    pub oracle_uses: usize,
    /// Probability of the winning digit string; 1 up to rounding.
    pub peak_probability: f64,
}

/// The data-wire eigenvector |u⟩ of the generator's automorphism: amplitude
/// exp(-2πi·s/(p-1))/sqrt(p-1) on digit j0^s mod p, for s in 0..p-1. Digit 0
/// never appears, since 0 is not a power of j0.
pub fn build_eigenvector(p: u64, generator: u64) -> Result<StateVector, BvError> {
    if multiplicative_order(generator, p)? != p - 1 {
        return Err(GroupError::NotAGenerator {
            base: generator,
            modulus: p,
        }
        .into());
    }
    let layout = RegisterLayout::new(vec![p as usize])?;
    let d = (p - 1) as f64;
    let scale = 1.0 / d.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); p as usize];
    for s in 0..p - 1 {
        let digit = mod_pow(generator, s, p) as usize;
        amps[digit] = Complex64::from_polar(scale, -std::f64::consts::TAU * s as f64 / d);
    }
    Ok(StateVector::from_amplitudes(layout, amps)?)
}

/// Runs the circuit once and reads the exponent string off the program
/// register, which ends in a computational basis state.
pub fn run_bv(instance: &BvInstance) -> Result<BvOutcome, BvError> {
    let p = instance.modulus();
    let m = instance.arity();
    let layout = instance.layout();
    let d = p - 1;

    let program_layout = RegisterLayout::new(vec![d as usize; m])?;
    let program = StateVector::uniform_state(&program_layout, &(0..m).collect::<Vec<_>>(), &[])?;
    let eigen = build_eigenvector(p, instance.generator())?;
    let mut state = tensor(&layout, &program, &eigen)?;

    for (k, &multiplier) in instance.hidden().multipliers().iter().enumerate() {
        let base = ModAutomorphism::new(p, multiplier)?.to_permutation();
        state.apply_controlled_power(&ControlledPowerGate::new(k, m, base)?)?;
    }
    for wire in 0..m {
        state.fourier_wire(wire, FourierSign::Minus)?;
    }

    let distribution = state.measure_distribution(&(0..m).collect::<Vec<_>>())?;
    let (digits, peak) = distribution.peak();
    if peak < 1.0 - 1e-9 {
        return Err(BvError::NotPointMass { peak });
    }
    let exponents = ExponentVector::new(digits.iter().map(|&x| x as u64).collect());
    let kernel = recover_kernel(&exponents, p)?;
    let image = multiplier_subgroup(p, instance.hidden().multipliers());
    Ok(BvOutcome {
        exponents,
        kernel,
        image,
        oracle_uses: 1,
        peak_probability: peak,
    })
}

/// Enumerates the kernel of n -> y·n mod p-1 over all of Z_{p-1}^m, in
/// lexicographic order.
pub fn recover_kernel(y: &ExponentVector, p: u64) -> Result<Vec<ExponentVector>, BvError> {
    let d = p - 1;
    let m = y.len();
    let mut kernel = Vec::new();
    let mut current = vec![0u64; m];
    loop {
        let candidate = ExponentVector::new(current.clone());
        if y.dot(&candidate, d)? == 0 {
            kernel.push(candidate);
        }
        // Mixed-radix increment, least significant entry last.
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(kernel);
            }
            k -= 1;
            current[k] += 1;
            if current[k] < d {
                break;
            }
            current[k] = 0;
        }
    }
}

/// The subgroup of units generated by the hidden multipliers, sorted.
fn multiplier_subgroup(p: u64, multipliers: &[u64]) -> Vec<u64> {
    let mut members = vec![false; p as usize];
    members[1] = true;
    let mut frontier = vec![1u64];
    while let Some(x) = frontier.pop() {
        for &j in multipliers {
            let next = x * j % p;
            if !members[next as usize] {
                members[next as usize] = true;
                frontier.push(next);
            }
        }
    }
    (1..p).filter(|&x| members[x as usize]).collect()
}

/// Product state: `left` on the leading wires, `right` on the trailing ones.
fn tensor(
    layout: &RegisterLayout,
    left: &StateVector,
    right: &StateVector,
) -> Result<StateVector, BvError> {
    let right_dim = right.layout().total_dim();
    let mut amps = Vec::with_capacity(layout.total_dim());
    for &a in left.amplitudes() {
        for &b in right.amplitudes() {
            amps.push(a * b);
        }
    }
    debug_assert_eq!(amps.len(), layout.total_dim());
    debug_assert_eq!(layout.total_dim() % right_dim, 0);
    Ok(StateVector::from_amplitudes(layout.clone(), amps)?)
}
