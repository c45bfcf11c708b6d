//! Fixed points of a permutation power by amplitude amplification on a
//! doubled register, and cycle finding built on top.
//!
//! The register holds two wires of dimension N. Preparation entangles them as
//! (1/sqrt N) Σ |s⟩|s⟩ and then applies the searched permutation U to wire a,
//! giving (1/sqrt N) Σ |U(s)⟩|s⟩. Components where both wires agree are
//! exactly the fixed points of U, so one Grover iteration is: flip the
//! equal-digit components, reflect about the prepared state, negate. With t
//! fixed points among N elements the success probability after k iterations
//! is sin²((2k+1)θ) with sin θ = sqrt(t/N), exactly.

use rand::Rng;
use thiserror::Error;

use crate::group::{GroupError, Permutation};
use crate::qsim::{diagonal_indices, RegisterLayout, SimError, StateVector};

/// Extra measurement attempts before giving up on classical verification.
/// Each retry corresponds to rerunning the circuit and measuring afresh, so
/// the expected cost is geometric in the per-run success probability. The
/// worst genuine instance pins that probability at exactly 1/2 (half the
/// space marked: the rotation cannot improve on a coin flip), so a budget of
/// 32 samples misses a real target with probability at most 2⁻³² while still
/// terminating when there is nothing to find.
pub const MEASUREMENT_RETRIES: usize = 31;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedPointError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("no element satisfies the condition; nothing to search for")]
    NoTargets,
    #[error("every element satisfies the condition; nothing to amplify against")]
    AllTargets,
    #[error("claimed target count {claimed} out of range 1..={max}")]
    BadTargetCount { claimed: usize, max: usize },
    #[error("instance has {t} targets, need exactly 1")]
    NotSingleTarget { t: usize },
    #[error("measurement failed classical verification after {attempts} attempts")]
    VerificationFailed { attempts: usize },
    #[error("off-target amplitudes deviate from uniform by {deviation:e}")]
    NonUniformProfile { deviation: f64 },
}

/// A permutation, the power of it being searched, and how many elements that
/// power fixes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointInstance {
    sigma: Permutation,
    power: u64,
    target_count: usize,
}

impl FixedPointInstance {
    /// Counts the fixed points of sigma^power classically and rejects
    /// instances with none.
    pub fn new(sigma: Permutation, power: u64) -> Result<Self, FixedPointError> {
        let target_count = sigma.power(power).fixed_points().len();
        if target_count == 0 {
            return Err(FixedPointError::NoTargets);
        }
        Ok(FixedPointInstance {
            sigma,
            power,
            target_count,
        })
    }

    /// Takes the caller's word for the target count instead of scanning;
    /// verification after measurement is the only safety net.
    pub fn with_claimed_count(
        sigma: Permutation,
        power: u64,
        target_count: usize,
    ) -> Result<Self, FixedPointError> {
        if target_count == 0 || target_count > sigma.len() {
            return Err(FixedPointError::BadTargetCount {
                claimed: target_count,
                max: sigma.len(),
            });
        }
        Ok(FixedPointInstance {
            sigma,
            power,
            target_count,
        })
    }

    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn target_count(&self) -> usize {
        self.target_count
    }

    pub fn domain_size(&self) -> usize {
        self.sigma.len()
    }

    /// The permutation actually searched: sigma raised to the power.
    pub fn searched(&self) -> Permutation {
        self.sigma.power(self.power)
    }
}

/// Per-iteration record of one amplification run.
#[derive(Clone, Debug, PartialEq)]
pub struct GroverTrace {
    pub iterations: usize,
    /// Success probability before the first iteration and after each one;
    /// length is `iterations + 1`.
    pub success_probabilities: Vec<f64>,
    /// Outcome distribution on the measured wire after the last iteration.
    pub final_marginal: Vec<f64>,
}

/// Result of one amplification-and-measurement run.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointOutcome {
    /// The verified measured element.
    pub element: usize,
    /// Every element the final distribution singles out that also passes
    /// verification. With a correct target count this is the full fixed-point
    /// set of the searched permutation.
    pub candidates: Vec<usize>,
    pub trace: GroverTrace,
    /// Applications of the searched permutation or its inverse, counting each
    /// rerun of the circuit.
    pub oracle_calls_quantum: u64,
    /// Classical evaluations of the searched permutation for verification.
    pub oracle_calls_classical: u64,
}

/// Iteration count that lands closest to the top of the rotation:
/// round((π/2 - θ)/(2θ)) with sin θ = sqrt(t/n). Guarantees success
/// probability at least 1 - t/n.
pub fn optimal_iterations(n: usize, t: usize) -> usize {
    assert!(t >= 1 && t <= n, "target count {t} out of range for {n}");
    let theta = (t as f64 / n as f64).sqrt().asin();
    let k = (std::f64::consts::FRAC_PI_2 - theta) / (2.0 * theta);
    k.round() as usize
}

/// Closed-form amplitudes after exactly one iteration of a single-target
/// search: (3 - 4/n)/sqrt(n) on the target pair and (1 - 4/n)/sqrt(n) on each
/// off-target pair.
pub fn one_iteration_amplitudes(n: usize) -> (f64, f64) {
    let nf = n as f64;
    ((3.0 - 4.0 / nf) / nf.sqrt(), (1.0 - 4.0 / nf) / nf.sqrt())
}

/// Prepares the doubled register and runs `iterations` Grover steps,
/// returning the final state and the success probability after each step
/// (including step zero).
pub fn evolve(
    instance: &FixedPointInstance,
    iterations: usize,
) -> Result<(StateVector, Vec<f64>), FixedPointError> {
    let n = instance.domain_size();
    if n < 2 {
        return Err(GroupError::SizeMismatch { left: n, right: 2 }.into());
    }
    let searched = instance.searched();
    let fixed = searched.fixed_points();
    if fixed.len() == n {
        return Err(FixedPointError::AllTargets);
    }

    let layout = RegisterLayout::new(vec![n, n])?;
    let mut state = StateVector::entangled_uniform(&layout)?;
    state.apply_basis_permutation(&crate::qsim::BasisPermutationGate::new(0, searched))?;
    let prepared = state.clone();
    let marked = diagonal_indices(&layout, 0, 1)?;

    let pair_indices: Vec<usize> = fixed.iter().map(|&s| s * n + s).collect();
    let success = |state: &StateVector| -> f64 {
        pair_indices.iter().map(|&i| state.amplitude(i).norm_sqr()).sum()
    };

    let mut probabilities = Vec::with_capacity(iterations + 1);
    probabilities.push(success(&state));
    for _ in 0..iterations {
        state.reflect_about_marked(&marked)?;
        state.reflect_about_state(&prepared)?;
        state.negate();
        probabilities.push(success(&state));
    }
    Ok((state, probabilities))
}

/// Full run: amplify for the optimal number of iterations, measure wire b,
/// and verify the outcome classically, retrying the measurement a bounded
/// number of times.
pub fn grover_fixed_point<R: Rng + ?Sized>(
    instance: &FixedPointInstance,
    rng: &mut R,
) -> Result<FixedPointOutcome, FixedPointError> {
    let n = instance.domain_size();
    let t = instance.target_count();
    if t >= n {
        return Err(FixedPointError::AllTargets);
    }
    let iterations = optimal_iterations(n, t);
    let (state, success_probabilities) = evolve(instance, iterations)?;
    let final_marginal = state.measure_distribution(&[1])?.probs().to_vec();

    let searched = instance.searched();
    let mut classical = 0u64;

    // Elements the distribution singles out: anything clearly above the
    // background level half a target's worth of probability is a candidate,
    // kept only if it verifies.
    let floor = success_probabilities.last().unwrap() / (2.0 * t as f64);
    let mut candidates = Vec::new();
    for (s, &p) in final_marginal.iter().enumerate() {
        if p > floor {
            classical += 1;
            if searched.image(s) == s {
                candidates.push(s);
            }
        }
    }

    let mut element = None;
    let mut attempts = 0;
    while attempts < 1 + MEASUREMENT_RETRIES {
        attempts += 1;
        let s = state.sample(&[1], rng)?[0];
        classical += 1;
        if searched.image(s) == s {
            element = Some(s);
            break;
        }
    }
    let element = element.ok_or(FixedPointError::VerificationFailed { attempts })?;

    Ok(FixedPointOutcome {
        element,
        candidates,
        trace: GroverTrace {
            iterations,
            success_probabilities,
            final_marginal,
        },
        oracle_calls_quantum: attempts as u64 * (2 * iterations as u64 + 1),
        oracle_calls_classical: classical,
    })
}

/// Runs exactly one iteration of a single-target instance and reads off the
/// two amplitude values: the target pair and the common off-target value.
pub fn one_iteration_check(instance: &FixedPointInstance) -> Result<(f64, f64), FixedPointError> {
    let n = instance.domain_size();
    let searched = instance.searched();
    let fixed = searched.fixed_points();
    if fixed.len() != 1 {
        return Err(FixedPointError::NotSingleTarget { t: fixed.len() });
    }
    let s0 = fixed[0];
    let (state, _) = evolve(instance, 1)?;

    let mut target = 0.0;
    let mut off = Vec::with_capacity(n - 1);
    let mut worst_imag: f64 = 0.0;
    for s in 0..n {
        let amp = state.amplitude(searched.image(s) * n + s);
        worst_imag = worst_imag.max(amp.im.abs());
        if s == s0 {
            target = amp.re;
        } else {
            off.push(amp.re);
        }
    }
    let mean = off.iter().sum::<f64>() / off.len() as f64;
    let deviation = off
        .iter()
        .map(|a| (a - mean).abs())
        .fold(worst_imag, f64::max);
    if deviation > 1e-12 {
        return Err(FixedPointError::NonUniformProfile { deviation });
    }
    Ok((target, mean))
}

/// Finds every cycle of exactly the given length by searching the fixed
/// points of sigma^length and keeping the candidates whose true cycle length
/// matches. Returns full cycles in canonical order.
pub fn find_cycle<R: Rng + ?Sized>(
    sigma: &Permutation,
    length: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>, FixedPointError> {
    if length == 0 {
        return Err(FixedPointError::NoTargets);
    }
    let n = sigma.len();
    let powered = sigma.power(length as u64);
    let t = powered.fixed_points().len();
    if t == 0 {
        return Err(FixedPointError::NoTargets);
    }
    let candidates: Vec<usize> = if t == n {
        // sigma^length is the identity, so every element is a fixed point and
        // the amplification step has nothing to do.
        (0..n).collect()
    } else {
        let instance = FixedPointInstance::new(sigma.clone(), length as u64)?;
        grover_fixed_point(&instance, rng)?.candidates
    };

    let decomposition = sigma.cycle_decomposition();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for s in candidates {
        if decomposition.cycle_length_of(s) == Some(length) {
            let cycle = decomposition.cycle_containing(s).expect("s is in some cycle");
            if !cycles.iter().any(|c| c[0] == cycle[0]) {
                cycles.push(cycle.to_vec());
            }
        }
    }
    cycles.sort_by_key(|c| c[0]);
    Ok(cycles)
}
