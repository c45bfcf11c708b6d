//! Amplitude-amplified search through a bank of permutation programs for one
//! mapping given inputs to given outputs, with a tuple extension that imposes
//! several input/output constraints at once, and a conjugacy search over the
//! inner automorphisms of a finite group built on top.
//!
//! The register holds one program wire of dimension M per constraint and one
//! data wire of dimension N per constraint. Preparation loads a uniform
//! superposition of program indices, copies of the same index across all
//! program wires, writes the constraint inputs on the data wires, and applies
//! one select gate per constraint so each branch carries its program's
//! outputs. A Grover iteration flips the branches whose data wires all read
//! the wanted outputs, reflects about the prepared state, and negates. With t
//! matching programs out of M the success probability after k iterations is
//! sin²((2k+1)θ) with sin θ = sqrt(t/M), exactly: the dynamics never leave
//! the M-dimensional span of the branch states.

use rand::Rng;
use thiserror::Error;

use crate::fixed_point::GroverTrace;
use crate::group::{FiniteGroup, GroupError, Permutation};
use crate::qsim::{RegisterLayout, SimError, StateVector};

pub use crate::fixed_point::MEASUREMENT_RETRIES;

/// Guessed solution counts tried in order when the true count is unknown.
const ADAPTIVE_LADDER: [usize; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProgramSearchError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("a bank needs at least 2 programs, got {len}")]
    BankTooSmall { len: usize },
    #[error("bank programs act on different sets: {first} vs {other} elements")]
    MixedDegrees { first: usize, other: usize },
    #[error("bank programs must act on at least 2 elements, got {degree}")]
    DegreeTooSmall { degree: usize },
    #[error("a search target needs at least one input/output pair")]
    EmptyTarget,
    #[error("target value {value} out of range for programs on {degree} elements")]
    TargetOutOfRange { value: usize, degree: usize },
    #[error("solution count {count} out of range 1..={max}")]
    BadSolutionCount { count: usize, max: usize },
    #[error("no program in the bank matches the target")]
    NoSolutions,
    #[error("instance has {t} matching programs, need exactly 1")]
    NotSingleSolution { t: usize },
    #[error("measurement failed classical verification after {attempts} attempts")]
    VerificationFailed { attempts: usize },
    #[error("no verified program after trying {attempts} solution-count guesses")]
    NotFound { attempts: usize },
    #[error("off-solution coefficients deviate from uniform by {deviation:e}")]
    NonUniformProfile { deviation: f64 },
    #[error("group must have at least 2 elements to build a bank")]
    GroupTooSmall,
    #[error("no permutation can satisfy the target (conflicting or non-injective pairs)")]
    UnsatisfiableTarget,
}

/// A fixed collection of permutation programs, all acting on the same set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramBank {
    programs: Vec<Permutation>,
    degree: usize,
}

impl ProgramBank {
    pub fn new(programs: Vec<Permutation>) -> Result<Self, ProgramSearchError> {
        if programs.len() < 2 {
            return Err(ProgramSearchError::BankTooSmall {
                len: programs.len(),
            });
        }
        let degree = programs[0].len();
        if degree < 2 {
            return Err(ProgramSearchError::DegreeTooSmall { degree });
        }
        for p in &programs {
            if p.len() != degree {
                return Err(ProgramSearchError::MixedDegrees {
                    first: degree,
                    other: p.len(),
                });
            }
        }
        Ok(ProgramBank { programs, degree })
    }

    /// One program per group element: the map x ↦ g·x·g⁻¹.
    pub fn from_inner_automorphisms(group: &FiniteGroup) -> Result<Self, ProgramSearchError> {
        if group.order() < 2 {
            return Err(ProgramSearchError::GroupTooSmall);
        }
        ProgramBank::new(group.inner_automorphisms())
    }

    pub fn random<R: Rng + ?Sized>(
        count: usize,
        degree: usize,
        rng: &mut R,
    ) -> Result<Self, ProgramSearchError> {
        let programs = (0..count).map(|_| Permutation::random(degree, rng)).collect();
        ProgramBank::new(programs)
    }

    /// Random bank where the program at `winner` is the only one matching
    /// the target, drawn by rejection sampling.
    pub fn random_with_unique_solution<R: Rng + ?Sized>(
        count: usize,
        degree: usize,
        target: &SearchTarget,
        winner: usize,
        rng: &mut R,
    ) -> Result<Self, ProgramSearchError> {
        target.check_range(degree)?;
        if !target.is_satisfiable() {
            return Err(ProgramSearchError::UnsatisfiableTarget);
        }
        if winner >= count {
            return Err(ProgramSearchError::TargetOutOfRange {
                value: winner,
                degree: count,
            });
        }
        let mut programs = Vec::with_capacity(count);
        for j in 0..count {
            loop {
                let p = Permutation::random(degree, rng);
                if target.matched_by(&p) == (j == winner) {
                    programs.push(p);
                    break;
                }
            }
        }
        ProgramBank::new(programs)
    }

    /// One program per non-empty line, each a space-separated image row.
    pub fn parse(text: &str) -> Result<Self, ProgramSearchError> {
        let mut programs = Vec::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            programs.push(Permutation::parse_line(line)?);
        }
        ProgramBank::new(programs)
    }

    pub fn len(&self) -> usize {
        self.programs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.programs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn program(&self, index: usize) -> &Permutation {
        &self.programs[index]
    }

    pub fn programs(&self) -> &[Permutation] {
        &self.programs
    }

    /// Classical scan: indices of every program matching the target, in
    /// order. Costs one program evaluation per bank entry per constraint.
    pub fn solutions(&self, target: &SearchTarget) -> Result<Vec<usize>, ProgramSearchError> {
        target.check_range(self.degree)?;
        Ok((0..self.programs.len())
            .filter(|&j| target.matched_by(&self.programs[j]))
            .collect())
    }
}

/// What a program must do to count as a solution: map every listed input to
/// its listed output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTarget {
    pairs: Vec<(usize, usize)>,
}

impl SearchTarget {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self, ProgramSearchError> {
        if pairs.is_empty() {
            return Err(ProgramSearchError::EmptyTarget);
        }
        Ok(SearchTarget { pairs })
    }

    pub fn single(input: usize, output: usize) -> Self {
        SearchTarget {
            pairs: vec![(input, output)],
        }
    }

    pub fn pair(first: (usize, usize), second: (usize, usize)) -> Self {
        SearchTarget {
            pairs: vec![first, second],
        }
    }

    /// Number of constraints, which is also the number of wire pairs the
    /// search register needs.
    pub fn arity(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn matched_by(&self, program: &Permutation) -> bool {
        self.pairs.iter().all(|&(x, y)| program.image(x) == y)
    }

    /// Whether any permutation at all can match: repeated inputs must ask
    /// for the same output and distinct inputs for distinct outputs.
    pub fn is_satisfiable(&self) -> bool {
        for (i, &(xi, yi)) in self.pairs.iter().enumerate() {
            for &(xj, yj) in &self.pairs[i + 1..] {
                if (xi == xj) != (yi == yj) {
                    return false;
                }
            }
        }
        true
    }

    fn check_range(&self, degree: usize) -> Result<(), ProgramSearchError> {
        for &(x, y) in &self.pairs {
            for value in [x, y] {
                if value >= degree {
                    return Err(ProgramSearchError::TargetOutOfRange { value, degree });
                }
            }
        }
        Ok(())
    }
}

/// The rotation picture of one search instance: M branches, t of them
/// solutions, everything else derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroverGeometry {
    pub bank_size: usize,
    pub solution_count: usize,
    /// Half-angle of the rotation: sin θ = sqrt(t/M).
    pub theta: f64,
    /// Rotation per iteration: α = 2θ.
    pub alpha: f64,
    /// Planned iteration count: at least one, otherwise the rounded count
    /// that lands closest to the top of the rotation. Forcing a minimum of
    /// one iteration overshoots when more than half the bank matches; at
    /// exactly t = 3M/4 the overshoot lands on zero success and only the
    /// retry loop's verification failure reports it.
    pub iterations: usize,
    /// sin²((2·iterations + 1)θ), the per-run success probability.
    pub predicted_success: f64,
}

impl GroverGeometry {
    pub fn new(bank_size: usize, solution_count: usize) -> Result<Self, ProgramSearchError> {
        if solution_count == 0 || solution_count > bank_size {
            return Err(ProgramSearchError::BadSolutionCount {
                count: solution_count,
                max: bank_size,
            });
        }
        let theta = (solution_count as f64 / bank_size as f64).sqrt().asin();
        let raw = (std::f64::consts::FRAC_PI_2 - theta) / (2.0 * theta);
        let iterations = (raw.round() as usize).max(1);
        let predicted_success = ((2 * iterations + 1) as f64 * theta).sin().powi(2);
        Ok(GroverGeometry {
            bank_size,
            solution_count,
            theta,
            alpha: 2.0 * theta,
            iterations,
            predicted_success,
        })
    }
}

/// Result of one program search run, single-constraint or tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgramSearchOutcome {
    /// The verified program index.
    pub program: usize,
    pub geometry: GroverGeometry,
    pub trace: GroverTrace,
    /// Outcome distribution of each program wire after the last iteration;
    /// one entry per constraint, all concentrated on the same indices.
    pub program_marginals: Vec<Vec<f64>>,
    /// Select-gate applications: one per constraint to prepare, two per
    /// constraint per iteration, counting each rerun of the circuit.
    pub oracle_calls_quantum: u64,
    /// Classical program evaluations for scanning and verification, one per
    /// constraint each.
    pub oracle_calls_classical: u64,
}

/// Closed-form branch coefficients after exactly one iteration with a single
/// solution among M programs: (3 - 4/M)/sqrt(M) on the solution branch and
/// (1 - 4/M)/sqrt(M) on each other branch.
pub fn one_iteration_coefficients(bank_size: usize) -> (f64, f64) {
    let m = bank_size as f64;
    ((3.0 - 4.0 / m) / m.sqrt(), (1.0 - 4.0 / m) / m.sqrt())
}

/// Success probabilities for a single-solution search predicted from the
/// two-dimensional rotation alone, without simulating the register: start at
/// (sin θ, cos θ) and rotate by α per step, where sin α = (2/sqrt M)·
/// sqrt(1 - 1/M) and cos α = 1 - 2/M. Returns one value per step including
/// step zero.
pub fn subspace_predictor(bank_size: usize, iterations: usize) -> Vec<f64> {
    let m = bank_size as f64;
    let sin_alpha = (2.0 / m.sqrt()) * (1.0 - 1.0 / m).sqrt();
    let cos_alpha = 1.0 - 2.0 / m;
    let mut good = (1.0 / m).sqrt();
    let mut rest = (1.0 - 1.0 / m).sqrt();
    let mut probabilities = Vec::with_capacity(iterations + 1);
    probabilities.push(good * good);
    for _ in 0..iterations {
        let next_good = good * cos_alpha + rest * sin_alpha;
        let next_rest = -good * sin_alpha + rest * cos_alpha;
        good = next_good;
        rest = next_rest;
        probabilities.push(good * good);
    }
    probabilities
}

/// Global indices of the branch states |j,…,j, P_j(x₁),…,P_j(x_a)⟩ for the
/// given program indices.
fn branch_indices(
    layout: &RegisterLayout,
    bank: &ProgramBank,
    target: &SearchTarget,
    programs: impl Iterator<Item = usize>,
) -> Result<Vec<usize>, ProgramSearchError> {
    let arity = target.arity();
    let mut indices = Vec::new();
    for j in programs {
        let mut digits = vec![j; 2 * arity];
        for (i, &(x, _)) in target.pairs().iter().enumerate() {
            digits[arity + i] = bank.program(j).image(x);
        }
        indices.push(layout.index_of(&digits)?);
    }
    Ok(indices)
}

/// Prepares the search register and runs `iterations` Grover steps,
/// returning the final state and the success probability after each step
/// (including step zero). Works for any constraint arity.
pub fn evolve(
    bank: &ProgramBank,
    target: &SearchTarget,
    iterations: usize,
) -> Result<(StateVector, Vec<f64>), ProgramSearchError> {
    target.check_range(bank.degree())?;
    let m = bank.len();
    let n = bank.degree();
    let arity = target.arity();

    let mut dims = vec![m; arity];
    dims.extend(std::iter::repeat_n(n, arity));
    let layout = RegisterLayout::new(dims)?;

    // Uniform over program indices, the same index on every program wire,
    // constraint inputs on the data wires.
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); layout.total_dim()];
    let scale = 1.0 / (m as f64).sqrt();
    for j in 0..m {
        let mut digits = vec![j; 2 * arity];
        for (i, &(x, _)) in target.pairs().iter().enumerate() {
            digits[arity + i] = x;
        }
        amps[layout.index_of(&digits)?] = num_complex::Complex64::new(scale, 0.0);
    }
    let mut state = StateVector::from_amplitudes(layout.clone(), amps)?;
    for i in 0..arity {
        state.apply_select_permutation(i, arity + i, bank.programs())?;
    }
    let prepared = state.clone();

    // Marked: every index whose data wires all read the wanted outputs.
    let marked: Vec<usize> = (0..layout.total_dim())
        .filter(|&index| {
            target
                .pairs()
                .iter()
                .enumerate()
                .all(|(i, &(_, y))| layout.digit_at(index, arity + i) == y)
        })
        .collect();

    let solution_branches =
        branch_indices(&layout, bank, target, bank.solutions(target)?.into_iter())?;
    let success = |state: &StateVector| -> f64 {
        solution_branches
            .iter()
            .map(|&i| state.amplitude(i).norm_sqr())
            .sum()
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

fn run_search_rounds<R: Rng + ?Sized>(
    bank: &ProgramBank,
    target: &SearchTarget,
    geometry: GroverGeometry,
    rng: &mut R,
    classical_base: u64,
) -> Result<ProgramSearchOutcome, ProgramSearchError> {
    let arity = target.arity() as u64;
    let (state, success_probabilities) = evolve(bank, target, geometry.iterations)?;
    let program_marginals: Vec<Vec<f64>> = (0..target.arity())
        .map(|i| Ok(state.measure_distribution(&[i])?.probs().to_vec()))
        .collect::<Result<_, SimError>>()?;
    let final_marginal = program_marginals[0].clone();

    let mut classical = classical_base;
    let mut program = None;
    let mut attempts = 0;
    while attempts < 1 + MEASUREMENT_RETRIES {
        attempts += 1;
        let j = state.sample(&[0], rng)?[0];
        classical += arity;
        if target.matched_by(bank.program(j)) {
            program = Some(j);
            break;
        }
    }
    let program = program.ok_or(ProgramSearchError::VerificationFailed { attempts })?;

    Ok(ProgramSearchOutcome {
        program,
        geometry,
        trace: GroverTrace {
            iterations: geometry.iterations,
            success_probabilities,
            final_marginal,
        },
        program_marginals,
        oracle_calls_quantum: attempts as u64 * arity * (2 * geometry.iterations as u64 + 1),
        oracle_calls_classical: classical,
    })
}

/// Full single-constraint search with the solution count taken from a
/// classical scan of the bank: amplify, measure the program wire, verify,
/// retrying the measurement a bounded number of times.
pub fn program_search<R: Rng + ?Sized>(
    bank: &ProgramBank,
    target: &SearchTarget,
    rng: &mut R,
) -> Result<ProgramSearchOutcome, ProgramSearchError> {
    let solutions = bank.solutions(target)?;
    if solutions.is_empty() {
        return Err(ProgramSearchError::NoSolutions);
    }
    let geometry = GroverGeometry::new(bank.len(), solutions.len())?;
    let scan_cost = (bank.len() * target.arity()) as u64;
    run_search_rounds(bank, target, geometry, rng, scan_cost)
}

/// Search without knowing the solution count: guess a count, run that
/// geometry, verify, and move to the next guess on failure. Useful when a
/// scan of the bank is off the table; costs are those of every guess tried.
pub fn program_search_adaptive<R: Rng + ?Sized>(
    bank: &ProgramBank,
    target: &SearchTarget,
    rng: &mut R,
) -> Result<ProgramSearchOutcome, ProgramSearchError> {
    target.check_range(bank.degree())?;
    let arity = target.arity() as u64;
    let mut quantum = 0u64;
    let mut classical = 0u64;
    let mut attempts = 0;
    for &guess in ADAPTIVE_LADDER.iter().filter(|&&g| g <= bank.len()) {
        attempts += 1;
        let geometry = GroverGeometry::new(bank.len(), guess)?;
        let (state, success_probabilities) = evolve(bank, target, geometry.iterations)?;
        quantum += arity * (2 * geometry.iterations as u64 + 1);
        let j = state.sample(&[0], rng)?[0];
        classical += arity;
        if target.matched_by(bank.program(j)) {
            let program_marginals: Vec<Vec<f64>> = (0..target.arity())
                .map(|i| Ok(state.measure_distribution(&[i])?.probs().to_vec()))
                .collect::<Result<_, SimError>>()?;
            let final_marginal = program_marginals[0].clone();
            return Ok(ProgramSearchOutcome {
                program: j,
                geometry,
                trace: GroverTrace {
                    iterations: geometry.iterations,
                    success_probabilities,
                    final_marginal,
                },
                program_marginals,
                oracle_calls_quantum: quantum,
                oracle_calls_classical: classical,
            });
        }
    }
    Err(ProgramSearchError::NotFound { attempts })
}

/// Search that imposes every constraint of a multi-pair target at once, with
/// the solution count taken from a classical scan. Same retry policy as the
/// single-constraint search.
pub fn tuple_program_search<R: Rng + ?Sized>(
    bank: &ProgramBank,
    target: &SearchTarget,
    rng: &mut R,
) -> Result<ProgramSearchOutcome, ProgramSearchError> {
    let solutions = bank.solutions(target)?;
    if solutions.is_empty() {
        return Err(ProgramSearchError::NoSolutions);
    }
    let geometry = GroverGeometry::new(bank.len(), solutions.len())?;
    let scan_cost = (bank.len() * target.arity()) as u64;
    run_search_rounds(bank, target, geometry, rng, scan_cost)
}

/// Runs exactly one iteration of a single-solution instance, undoes the
/// select gates, and reads off the two branch coefficients: the solution
/// branch and the common off-solution value.
pub fn one_iteration_check(
    bank: &ProgramBank,
    target: &SearchTarget,
) -> Result<(f64, f64), ProgramSearchError> {
    let solutions = bank.solutions(target)?;
    if solutions.len() != 1 {
        return Err(ProgramSearchError::NotSingleSolution {
            t: solutions.len(),
        });
    }
    let solution = solutions[0];
    let (mut state, _) = evolve(bank, target, 1)?;
    let arity = target.arity();
    let inverses: Vec<Permutation> = bank.programs().iter().map(|p| p.inverse()).collect();
    for i in 0..arity {
        state.apply_select_permutation(i, arity + i, &inverses)?;
    }

    // Every branch is now |j,…,j, x₁,…,x_a⟩; read its coefficient.
    let layout = state.layout().clone();
    let mut target_value = 0.0;
    let mut off = Vec::with_capacity(bank.len() - 1);
    let mut worst_imag: f64 = 0.0;
    for j in 0..bank.len() {
        let mut digits = vec![j; 2 * arity];
        for (i, &(x, _)) in target.pairs().iter().enumerate() {
            digits[arity + i] = x;
        }
        let amp = state.amplitude(layout.index_of(&digits)?);
        worst_imag = worst_imag.max(amp.im.abs());
        if j == solution {
            target_value = amp.re;
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
        return Err(ProgramSearchError::NonUniformProfile { deviation });
    }
    Ok((target_value, mean))
}

/// Result of a conjugacy search between two group elements.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyOutcome {
    /// A verified g₀ with g₀·g₂·g₀⁻¹ = g₁, or None when the elements are not
    /// conjugate.
    pub conjugator: Option<usize>,
    /// The underlying program search run, when one element was found.
    pub search: Option<ProgramSearchOutcome>,
    pub oracle_calls_quantum: u64,
    pub oracle_calls_classical: u64,
}

/// Searches the inner automorphisms of a group for one carrying g₂ to g₁.
/// Conjugate pairs use the centralizer order as the known solution count;
/// otherwise the count-guessing ladder runs and comes back empty-handed,
/// which is reported as `conjugator: None` rather than an error.
pub fn conjugacy_search<R: Rng + ?Sized>(
    group: &FiniteGroup,
    g1: usize,
    g2: usize,
    rng: &mut R,
) -> Result<ConjugacyOutcome, ProgramSearchError> {
    let order = group.order() as u64;
    let bank = ProgramBank::from_inner_automorphisms(group)?;
    let target = SearchTarget::single(g2, g1);

    // Feasibility and the solution count are classical group scans; when the
    // pair is conjugate the solutions form a coset of the centralizer of g₂.
    let feasible = group.conjugacy_oracle(g1, g2)?.is_some();
    if feasible {
        let count = group.centralizer_order(g2)?;
        let geometry = GroverGeometry::new(bank.len(), count)?;
        let search = run_search_rounds(&bank, &target, geometry, rng, 2 * order)?;
        return Ok(ConjugacyOutcome {
            conjugator: Some(search.program),
            oracle_calls_quantum: search.oracle_calls_quantum,
            oracle_calls_classical: search.oracle_calls_classical,
            search: Some(search),
        });
    }

    match program_search_adaptive(&bank, &target, rng) {
        Ok(search) => Ok(ConjugacyOutcome {
            conjugator: Some(search.program),
            oracle_calls_quantum: search.oracle_calls_quantum,
            oracle_calls_classical: search.oracle_calls_classical + order,
            search: Some(search),
        }),
        Err(ProgramSearchError::NotFound { attempts }) => {
            let ladder_iterations: u64 = ADAPTIVE_LADDER
                .iter()
                .filter(|&&g| g <= bank.len())
                .take(attempts)
                .map(|&g| {
                    let geometry = GroverGeometry::new(bank.len(), g).expect("guess in range");
                    2 * geometry.iterations as u64 + 1
                })
                .sum();
            Ok(ConjugacyOutcome {
                conjugator: None,
                search: None,
                oracle_calls_quantum: ladder_iterations,
                oracle_calls_classical: order + attempts as u64,
            })
        }
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Bank of `m` programs on `n` elements where only program `winner` maps
    /// `x` to `y`.
    fn planted_bank<R: Rng + ?Sized>(
        m: usize,
        n: usize,
        winner: usize,
        x: usize,
        y: usize,
        rng: &mut R,
    ) -> ProgramBank {
        let mut programs = Vec::with_capacity(m);
        for j in 0..m {
            if j == winner {
                loop {
                    let p = Permutation::random(n, rng);
                    if p.image(x) == y {
                        programs.push(p);
                        break;
                    }
                }
            } else {
                loop {
                    let p = Permutation::random(n, rng);
                    if p.image(x) != y {
                        programs.push(p);
                        break;
                    }
                }
            }
        }
        ProgramBank::new(programs).unwrap()
    }

    #[test]
    fn geometry_pins_for_known_sizes() {
        let cases = [
            ((2usize, 1usize), 1usize),
            ((4, 1), 1),
            ((8, 1), 2),
            ((9, 1), 2),
            ((16, 1), 3),
            ((32, 1), 4),
            ((64, 1), 6),
            ((24, 4), 1),
            ((16, 16), 1),
        ];
        for ((m, t), want) in cases {
            let g = GroverGeometry::new(m, t).unwrap();
            assert_eq!(g.iterations, want, "M={m} t={t}");
            assert!((g.alpha - 2.0 * g.theta).abs() < 1e-15);
        }
        let g = GroverGeometry::new(9, 1).unwrap();
        assert!((g.predicted_success - 0.983_606_835_001_439_5).abs() < 1e-12);
        assert!((GroverGeometry::new(4, 1).unwrap().predicted_success - 1.0).abs() < 1e-15);
        assert!(GroverGeometry::new(5, 0).is_err());
        assert!(GroverGeometry::new(5, 6).is_err());
    }

    #[test]
    fn one_iteration_coefficients_match_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for m in [4usize, 8, 16, 32] {
            let bank = planted_bank(m, 8, m / 2, 3, 5, &mut rng);
            let (got_target, got_off) =
                one_iteration_check(&bank, &SearchTarget::single(3, 5)).unwrap();
            let (want_target, want_off) = one_iteration_coefficients(m);
            assert!((got_target - want_target).abs() < 1e-12, "M={m}");
            assert!((got_off - want_off).abs() < 1e-12, "M={m}");
        }
    }

    #[test]
    fn two_program_bank_overshoots_past_the_target() {
        // With M=2 one iteration rotates past the solution axis: the
        // off-solution branch coefficient turns negative and success is 1/2.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bank = planted_bank(2, 6, 0, 1, 4, &mut rng);
        let (target_coeff, off_coeff) =
            one_iteration_check(&bank, &SearchTarget::single(1, 4)).unwrap();
        let r = 0.5f64.sqrt();
        assert!((target_coeff - r).abs() < 1e-12);
        assert!((off_coeff + r).abs() < 1e-12);
        let g = GroverGeometry::new(2, 1).unwrap();
        assert_eq!(g.iterations, 1);
        assert!((g.predicted_success - 0.5).abs() < 1e-12);
    }

    #[test]
    fn evolution_matches_the_subspace_predictor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [4usize, 9, 16, 25] {
            let bank = planted_bank(m, 6, m - 1, 0, 2, &mut rng);
            let steps = 2 * GroverGeometry::new(m, 1).unwrap().iterations;
            let (_, simulated) = evolve(&bank, &SearchTarget::single(0, 2), steps).unwrap();
            let predicted = subspace_predictor(m, steps);
            assert_eq!(simulated.len(), predicted.len());
            for (step, (s, p)) in simulated.iter().zip(&predicted).enumerate() {
                assert!((s - p).abs() < 1e-10, "M={m} step={step}: {s} vs {p}");
            }
        }
    }

    #[test]
    fn dynamics_stay_in_the_branch_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let bank = planted_bank(8, 5, 2, 1, 3, &mut rng);
        let target = SearchTarget::single(1, 3);
        let (state, _) = evolve(&bank, &target, 5).unwrap();
        let branches: std::collections::HashSet<usize> =
            branch_indices(state.layout(), &bank, &target, 0..bank.len())
                .unwrap()
                .into_iter()
                .collect();
        let mut leaked = 0.0f64;
        for i in 0..state.layout().total_dim() {
            if !branches.contains(&i) {
                leaked = leaked.max(state.amplitude(i).norm());
            }
        }
        assert!(leaked < 1e-12, "leakage {leaked}");
        assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn search_finds_the_planted_program() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [8usize, 16, 32] {
            let winner = m / 3;
            let bank = planted_bank(m, 16, winner, 2, 9, &mut rng);
            let target = SearchTarget::single(2, 9);
            let out = program_search(&bank, &target, &mut rng).unwrap();
            assert_eq!(out.program, winner, "M={m}");
            assert_eq!(out.trace.iterations, out.geometry.iterations);
            assert_eq!(
                out.trace.success_probabilities.len(),
                out.geometry.iterations + 1
            );
            let last = *out.trace.success_probabilities.last().unwrap();
            assert!((last - out.geometry.predicted_success).abs() < 1e-10);
            let per_execution = 2 * out.geometry.iterations as u64 + 1;
            assert!(out.oracle_calls_quantum >= per_execution);
            let scan_plus_one_check = m as u64 + 1;
            assert!(out.oracle_calls_classical >= scan_plus_one_check);
        }
    }

    #[test]
    fn search_handles_several_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        // Plant 3 winners among 16.
        let mut programs = Vec::new();
        for j in 0..16 {
            let want_match = j % 5 == 0 && j < 15; // programs 0, 5, 10
            loop {
                let p = Permutation::random(9, &mut rng);
                if (p.image(4) == 7) == want_match {
                    programs.push(p);
                    break;
                }
            }
        }
        let bank = ProgramBank::new(programs).unwrap();
        let target = SearchTarget::single(4, 7);
        assert_eq!(bank.solutions(&target).unwrap(), vec![0, 5, 10]);
        let out = program_search(&bank, &target, &mut rng).unwrap();
        assert!([0usize, 5, 10].contains(&out.program));
        assert_eq!(out.geometry.solution_count, 3);
    }

    #[test]
    fn adaptive_search_works_without_the_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let bank = planted_bank(16, 8, 11, 6, 1, &mut rng);
        let target = SearchTarget::single(6, 1);
        let out = program_search_adaptive(&bank, &target, &mut rng).unwrap();
        assert_eq!(out.program, 11);
    }

    #[test]
    fn adaptive_search_reports_absence() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        // No program maps 0 to 0.
        let mut programs = Vec::new();
        while programs.len() < 8 {
            let p = Permutation::random(6, &mut rng);
            if p.image(0) != 0 {
                programs.push(p);
            }
        }
        let bank = ProgramBank::new(programs).unwrap();
        let result = program_search_adaptive(&bank, &SearchTarget::single(0, 0), &mut rng);
        assert_eq!(result, Err(ProgramSearchError::NotFound { attempts: 4 }));
        let known = program_search(&bank, &SearchTarget::single(0, 0), &mut rng);
        assert_eq!(known, Err(ProgramSearchError::NoSolutions));
    }

    #[test]
    fn tuple_search_imposes_both_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let (x1, y1) = (0usize, 3usize);
        let (x2, y2) = (1usize, 6usize);
        let winner = 4;
        let mut programs = Vec::with_capacity(9);
        for j in 0..9 {
            loop {
                let p = Permutation::random(8, &mut rng);
                let both = p.image(x1) == y1 && p.image(x2) == y2;
                if both == (j == winner) {
                    programs.push(p);
                    break;
                }
            }
        }
        let bank = ProgramBank::new(programs).unwrap();
        let target = SearchTarget::pair((x1, y1), (x2, y2));
        assert_eq!(bank.solutions(&target).unwrap(), vec![winner]);

        let out = tuple_program_search(&bank, &target, &mut rng).unwrap();
        assert_eq!(out.program, winner);
        assert_eq!(out.geometry.iterations, 2);
        let last = *out.trace.success_probabilities.last().unwrap();
        assert!((last - out.geometry.predicted_success).abs() < 1e-10);
        assert_eq!(out.program_marginals.len(), 2);
        for marginal in &out.program_marginals {
            assert!(marginal[winner] > 0.98);
            for (a, b) in marginal.iter().zip(&out.program_marginals[0]) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conjugacy_search_agrees_with_the_classical_oracle() {
        let group = FiniteGroup::symmetric(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for g1 in 0..group.order() {
            for g2 in 0..group.order() {
                let out = conjugacy_search(&group, g1, g2, &mut rng).unwrap();
                let classical = group.conjugacy_oracle(g1, g2).unwrap();
                assert_eq!(out.conjugator.is_some(), classical.is_some(), "{g1},{g2}");
                if let Some(g0) = out.conjugator {
                    let lhs = group.mul(group.mul(g0, g2), group.inv(g0));
                    assert_eq!(lhs, g1, "{g0} does not carry {g2} to {g1}");
                }
            }
        }
    }

    #[test]
    fn bank_construction_is_validated() {
        assert_eq!(
            ProgramBank::new(vec![Permutation::identity(4)]),
            Err(ProgramSearchError::BankTooSmall { len: 1 })
        );
        assert_eq!(
            ProgramBank::new(vec![Permutation::identity(4), Permutation::identity(5)]),
            Err(ProgramSearchError::MixedDegrees { first: 4, other: 5 })
        );
        assert!(ProgramBank::new(vec![
            Permutation::identity(1),
            Permutation::identity(1)
        ])
        .is_err());
        assert!(SearchTarget::new(vec![]).is_err());
        let bank =
            ProgramBank::new(vec![Permutation::identity(3), Permutation::identity(3)]).unwrap();
        assert_eq!(
            bank.solutions(&SearchTarget::single(0, 3)),
            Err(ProgramSearchError::TargetOutOfRange {
                value: 3,
                degree: 3
            })
        );
    }

    #[test]
    fn target_satisfiability_rules() {
        assert!(SearchTarget::single(0, 0).is_satisfiable());
        assert!(SearchTarget::pair((0, 3), (1, 6)).is_satisfiable());
        // Duplicated constraint is fine; conflicting or non-injective is not.
        assert!(SearchTarget::pair((2, 5), (2, 5)).is_satisfiable());
        assert!(!SearchTarget::pair((2, 5), (2, 6)).is_satisfiable());
        assert!(!SearchTarget::pair((1, 5), (2, 5)).is_satisfiable());
    }

    #[test]
    fn planted_random_banks_have_a_unique_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let target = SearchTarget::pair((0, 2), (3, 1));
        let bank =
            ProgramBank::random_with_unique_solution(12, 6, &target, 7, &mut rng).unwrap();
        assert_eq!(bank.solutions(&target).unwrap(), vec![7]);
        assert_eq!(
            ProgramBank::random_with_unique_solution(
                4,
                6,
                &SearchTarget::pair((0, 1), (2, 1)),
                0,
                &mut rng
            ),
            Err(ProgramSearchError::UnsatisfiableTarget)
        );
    }

    #[test]
    fn bank_parse_round_trip() {
        let text = "0 2 1\n1 2 0\n\n2 0 1\n";
        let bank = ProgramBank::parse(text).unwrap();
        assert_eq!(bank.len(), 3);
        assert_eq!(bank.degree(), 3);
        assert_eq!(bank.program(1).images(), &[1, 2, 0]);
        assert!(ProgramBank::parse("0 1\nnot numbers\n").is_err());
    }
}
