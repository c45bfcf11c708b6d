//! Dense state vectors and the measurement-side operations on them.

use std::io;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{RegisterLayout, SimError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Tolerance for treating a constructed or reflected-about state as
/// normalized.
const NORM_TOLERANCE: f64 = 1e-8;

/// A normalized pure state over a [`RegisterLayout`], stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state with the given digit on each wire.
    pub fn basis_state(layout: &RegisterLayout, digits: &[usize]) -> Result<Self, SimError> {
        let index = layout.index_of(digits)?;
        let mut amps = vec![ZERO; layout.total_dim()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            layout: layout.clone(),
            amps,
        })
    }

    /// Equal superposition over the digits of `uniform_wires`, with every
    /// other wire pinned to a digit from `fixed`. The two sets together must
    /// cover each wire exactly once.
    pub fn uniform_state(
        layout: &RegisterLayout,
        uniform_wires: &[usize],
        fixed: &[(usize, usize)],
    ) -> Result<Self, SimError> {
        let wires = layout.num_wires();
        let mut role = vec![None; wires];
        for &w in uniform_wires {
            layout.check_wire(w)?;
            if role[w].is_some() {
                return Err(SimError::BadWirePartition);
            }
            role[w] = Some(None);
        }
        for &(w, digit) in fixed {
            layout.check_wire(w)?;
            if digit >= layout.dim(w) {
                return Err(SimError::DigitOutOfRange {
                    wire: w,
                    digit,
                    dim: layout.dim(w),
                });
            }
            if role[w].is_some() {
                return Err(SimError::BadWirePartition);
            }
            role[w] = Some(Some(digit));
        }
        if role.iter().any(|r| r.is_none()) {
            return Err(SimError::BadWirePartition);
        }

        let support: usize = uniform_wires.iter().map(|&w| layout.dim(w)).product();
        let amp = Complex64::new(1.0 / (support as f64).sqrt(), 0.0);
        let mut amps = vec![ZERO; layout.total_dim()];
        for (index, slot) in amps.iter_mut().enumerate() {
            let matches = role.iter().enumerate().all(|(w, r)| match r {
                Some(Some(digit)) => layout.digit_at(index, w) == *digit,
                _ => true,
            });
            if matches {
                *slot = amp;
            }
        }
        Ok(StateVector {
            layout: layout.clone(),
            amps,
        })
    }

    /// The maximally correlated pair state on a two-wire register of equal
    /// dimensions: equal weight on every |s⟩|s⟩.
    pub fn entangled_uniform(layout: &RegisterLayout) -> Result<Self, SimError> {
        if layout.num_wires() != 2 || layout.dim(0) != layout.dim(1) {
            return Err(SimError::NotAPairRegister(layout.dims().to_vec()));
        }
        let n = layout.dim(0);
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        let mut amps = vec![ZERO; layout.total_dim()];
        for s in 0..n {
            amps[s * n + s] = amp;
        }
        Ok(StateVector {
            layout: layout.clone(),
            amps,
        })
    }

    /// Wraps raw amplitudes, which must already be normalized.
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self, SimError> {
        if amps.len() != layout.total_dim() {
            return Err(SimError::WrongAmplitudeCount {
                got: amps.len(),
                total: layout.total_dim(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized { norm_sqr });
        }
        Ok(StateVector { layout, amps })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(super) fn amps_mut(&mut self) -> &mut Vec<Complex64> {
        &mut self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64, SimError> {
        if self.layout != other.layout {
            return Err(SimError::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Flips the global sign; kept explicit so iteration operators written
    /// with a leading minus match their algebra term for term.
    pub fn negate(&mut self) {
        self.scale(Complex64::new(-1.0, 0.0));
    }

    /// Applies 1 - 2|axis⟩⟨axis| exactly: one inner product and one update
    /// pass.
    pub fn reflect_about_state(&mut self, axis: &Self) -> Result<(), SimError> {
        if self.layout != axis.layout {
            return Err(SimError::LayoutMismatch);
        }
        let axis_norm = axis.norm_sqr();
        if (axis_norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SimError::NotNormalized { norm_sqr: axis_norm });
        }
        let overlap = axis.inner(self)?;
        let twice = 2.0 * overlap;
        for (a, ax) in self.amps.iter_mut().zip(&axis.amps) {
            *a -= twice * ax;
        }
        Ok(())
    }

    /// Negates the amplitude on each listed basis index.
    pub fn reflect_about_marked(&mut self, marked: &[usize]) -> Result<(), SimError> {
        for &index in marked {
            if index >= self.amps.len() {
                return Err(SimError::IndexOutOfRange {
                    index,
                    total: self.amps.len(),
                });
            }
            self.amps[index] = -self.amps[index];
        }
        Ok(())
    }

    /// Marginal outcome distribution over the chosen wires, traced over the
    /// rest.
    pub fn measure_distribution(&self, wires: &[usize]) -> Result<Distribution, SimError> {
        for &w in wires {
            self.layout.check_wire(w)?;
        }
        let dims: Vec<usize> = wires.iter().map(|&w| self.layout.dim(w)).collect();
        let total: usize = dims.iter().product();
        let mut probs = vec![0.0; total];
        for (index, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut bucket = 0;
            for (&w, &d) in wires.iter().zip(&dims) {
                bucket = bucket * d + self.layout.digit_at(index, w);
            }
            probs[bucket] += p;
        }
        Ok(Distribution {
            wires: wires.to_vec(),
            dims,
            probs,
        })
    }

    /// Samples a digit tuple for the chosen wires.
    pub fn sample<R: Rng + ?Sized>(&self, wires: &[usize], rng: &mut R) -> Result<Vec<usize>, SimError> {
        Ok(self.measure_distribution(wires)?.sample(rng))
    }

    /// Deterministic sampling: same seed, same outcome.
    pub fn sample_seeded(&self, wires: &[usize], seed: u64) -> Result<Vec<usize>, SimError> {
        self.sample(wires, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Writes `index,digits,re,im` rows for every amplitude with magnitude
    /// above `min_magnitude`. Digits are colon-separated.
    pub fn write_amplitudes_csv<W: io::Write>(&self, min_magnitude: f64, mut out: W) -> io::Result<()> {
        writeln!(out, "index,digits,re,im")?;
        for (index, amp) in self.amps.iter().enumerate() {
            if amp.norm() <= min_magnitude {
                continue;
            }
            let digits = self
                .layout
                .digits_of(index)
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(":");
            writeln!(out, "{index},{digits},{:e},{:e}", amp.re, amp.im)?;
        }
        Ok(())
    }
}

/// All basis indices whose digits agree on the two given wires.
pub fn diagonal_indices(
    layout: &RegisterLayout,
    wire_a: usize,
    wire_b: usize,
) -> Result<Vec<usize>, SimError> {
    layout.check_wire(wire_a)?;
    layout.check_wire(wire_b)?;
    Ok((0..layout.total_dim())
        .filter(|&i| layout.digit_at(i, wire_a) == layout.digit_at(i, wire_b))
        .collect())
}

/// All basis indices with the given digit on one wire.
pub fn indices_with_digit(
    layout: &RegisterLayout,
    wire: usize,
    digit: usize,
) -> Result<Vec<usize>, SimError> {
    layout.check_wire(wire)?;
    if digit >= layout.dim(wire) {
        return Err(SimError::DigitOutOfRange {
            wire,
            digit,
            dim: layout.dim(wire),
        });
    }
    Ok((0..layout.total_dim())
        .filter(|&i| layout.digit_at(i, wire) == digit)
        .collect())
}

/// A probability table over the digit tuples of a wire subset.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    wires: Vec<usize>,
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Probabilities indexed mixed-radix over the selected wires, first wire
    /// most significant.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn digits_of(&self, mut bucket: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (k, &d) in self.dims.iter().enumerate().rev() {
            digits[k] = bucket % d;
            bucket /= d;
        }
        digits
    }

    pub fn prob(&self, digits: &[usize]) -> Option<f64> {
        if digits.len() != self.dims.len() {
            return None;
        }
        let mut bucket = 0;
        for (&digit, &d) in digits.iter().zip(&self.dims) {
            if digit >= d {
                return None;
            }
            bucket = bucket * d + digit;
        }
        Some(self.probs[bucket])
    }

    /// Most probable outcome; the first such bucket on a tie.
    pub fn peak(&self) -> (Vec<usize>, f64) {
        let (bucket, &p) = self
            .probs
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.total_cmp(b))
            .expect("distribution is never empty");
        (self.digits_of(bucket), p)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let total: f64 = self.probs.iter().sum();
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = self.probs.len() - 1;
        for (bucket, &p) in self.probs.iter().enumerate() {
            if u < p {
                chosen = bucket;
                break;
            }
            u -= p;
        }
        self.digits_of(chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(dims: &[usize]) -> RegisterLayout {
        RegisterLayout::new(dims.to_vec()).unwrap()
    }

    #[test]
    fn basis_state_puts_unit_mass_on_one_index() {
        let l = layout(&[3, 4]);
        let s = StateVector::basis_state(&l, &[2, 1]).unwrap();
        assert_eq!(s.amplitude(9), Complex64::new(1.0, 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(StateVector::basis_state(&l, &[3, 0]).is_err());
    }

    #[test]
    fn uniform_state_with_a_pinned_wire() {
        let l = layout(&[3, 4]);
        let s = StateVector::uniform_state(&l, &[0], &[(1, 2)]).unwrap();
        let expected = 1.0 / 3f64.sqrt();
        for index in 0..12 {
            let amp = s.amplitude(index);
            if index % 4 == 2 {
                assert!((amp.re - expected).abs() < 1e-15 && amp.im == 0.0);
            } else {
                assert_eq!(amp, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn uniform_state_full_register() {
        let l = layout(&[5]);
        let s = StateVector::uniform_state(&l, &[0], &[]).unwrap();
        for index in 0..5 {
            assert!((s.amplitude(index).re - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn uniform_state_rejects_bad_partitions() {
        let l = layout(&[3, 4]);
        assert!(StateVector::uniform_state(&l, &[0], &[]).is_err());
        assert!(StateVector::uniform_state(&l, &[0, 1], &[(1, 0)]).is_err());
        assert!(StateVector::uniform_state(&l, &[0, 0], &[(1, 0)]).is_err());
    }

    #[test]
    fn entangled_uniform_overlap_counts_fixed_points() {
        use crate::group::Permutation;
        use crate::qsim::BasisPermutationGate;

        let l = layout(&[5, 5]);
        let v = StateVector::entangled_uniform(&l).unwrap();
        // sigma with fixed points {0, 3}
        let sigma = Permutation::from_images(vec![0, 2, 1, 3, 4]).unwrap();
        let fixed = sigma.fixed_points().len() as f64;
        let mut moved = v.clone();
        moved
            .apply_basis_permutation(&BasisPermutationGate::new(0, sigma))
            .unwrap();
        let overlap = v.inner(&moved).unwrap();
        assert!((overlap.re - fixed / 5.0).abs() < 1e-12);
        assert!(overlap.im.abs() < 1e-15);

        assert!(StateVector::entangled_uniform(&layout(&[3, 4])).is_err());
        assert!(StateVector::entangled_uniform(&layout(&[3, 3, 3])).is_err());
    }

    #[test]
    fn reflection_about_marked_is_an_involution() {
        let l = layout(&[4, 4]);
        let s = StateVector::entangled_uniform(&l).unwrap();
        let marked = diagonal_indices(&l, 0, 1).unwrap();
        let mut t = s.clone();
        t.reflect_about_marked(&marked).unwrap();
        t.reflect_about_marked(&marked).unwrap();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn reflection_about_state_is_an_involution() {
        let l = layout(&[4, 4]);
        let axis = StateVector::entangled_uniform(&l).unwrap();
        let mut s = StateVector::basis_state(&l, &[1, 2]).unwrap();
        let before = s.clone();
        s.reflect_about_state(&axis).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        s.reflect_about_state(&axis).unwrap();
        for (a, b) in before.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn reflecting_the_axis_itself_flips_its_sign() {
        let l = layout(&[4, 4]);
        let axis = StateVector::entangled_uniform(&l).unwrap();
        let mut s = axis.clone();
        s.reflect_about_state(&axis).unwrap();
        for (a, b) in axis.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn reflect_rejects_unnormalized_axis() {
        let l = layout(&[2, 2]);
        let mut axis = StateVector::basis_state(&l, &[0, 0]).unwrap();
        axis.scale(Complex64::new(0.5, 0.0));
        let mut s = StateVector::basis_state(&l, &[1, 1]).unwrap();
        assert!(matches!(
            s.reflect_about_state(&axis),
            Err(SimError::NotNormalized { .. })
        ));
    }

    #[test]
    fn marginals_sum_to_one_and_match_hand_counts() {
        let l = layout(&[3, 4]);
        let s = StateVector::uniform_state(&l, &[0], &[(1, 2)]).unwrap();
        let d = s.measure_distribution(&[1]).unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((d.prob(&[2]).unwrap() - 1.0).abs() < 1e-12);
        let d0 = s.measure_distribution(&[0]).unwrap();
        for digit in 0..3 {
            assert!((d0.prob(&[digit]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(d0.peak().1, d0.probs()[0]);
    }

    #[test]
    fn joint_distribution_orders_digits_like_the_layout() {
        let l = layout(&[2, 3]);
        let s = StateVector::basis_state(&l, &[1, 2]).unwrap();
        let d = s.measure_distribution(&[0, 1]).unwrap();
        assert_eq!(d.peak(), (vec![1, 2], 1.0));
        let swapped = s.measure_distribution(&[1, 0]).unwrap();
        assert_eq!(swapped.peak(), (vec![2, 1], 1.0));
    }

    #[test]
    fn sampling_follows_the_distribution() {
        use rand::SeedableRng;
        let l = layout(&[4]);
        let amps = vec![
            Complex64::new(0.8, 0.0),
            Complex64::new(0.0, 0.4),
            Complex64::new(-0.4, 0.0),
            Complex64::new(0.2, 0.0),
        ];
        let s = StateVector::from_amplitudes(l, amps).unwrap();
        let probs = [0.64, 0.16, 0.16, 0.04];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 10_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[s.sample(&[0], &mut rng).unwrap()[0]] += 1;
        }
        for (k, &p) in probs.iter().enumerate() {
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            let dev = (counts[k] as f64 - n as f64 * p).abs();
            assert!(dev <= 5.0 * sigma, "outcome {k}: dev {dev}, sigma {sigma}");
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let l = layout(&[6]);
        let s = StateVector::uniform_state(&l, &[0], &[]).unwrap();
        let a = s.sample_seeded(&[0], 42).unwrap();
        let b = s.sample_seeded(&[0], 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_dump_filters_by_magnitude() {
        let l = layout(&[2, 2]);
        let s = StateVector::entangled_uniform(&l).unwrap();
        let mut buf = Vec::new();
        s.write_amplitudes_csv(1e-9, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,digits,re,im");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,0:0,"));
        assert!(lines[2].starts_with("3,1:1,"));
    }

    #[test]
    fn from_amplitudes_rejects_unnormalized_input() {
        let l = layout(&[2]);
        let bad = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            StateVector::from_amplitudes(l, bad),
            Err(SimError::NotNormalized { .. })
        ));
    }

    #[test]
    fn index_helpers_enumerate_expected_sets() {
        let l = layout(&[3, 3]);
        assert_eq!(diagonal_indices(&l, 0, 1).unwrap(), vec![0, 4, 8]);
        assert_eq!(indices_with_digit(&l, 1, 2).unwrap(), vec![2, 5, 8]);
        assert!(indices_with_digit(&l, 1, 3).is_err());
    }
}
