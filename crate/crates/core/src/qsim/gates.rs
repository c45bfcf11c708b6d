//! Gate application by index remapping. Permutation-type gates never
//! materialize a matrix; they move amplitudes along precomputed strides.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::group::Permutation;

use super::{SimError, StateVector};

/// Relabels the basis of one wire: digit l becomes digit table(l).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPermutationGate {
    wire: usize,
    table: Permutation,
}

impl BasisPermutationGate {
    pub fn new(wire: usize, table: Permutation) -> Self {
        BasisPermutationGate { wire, table }
    }

    pub fn wire(&self) -> usize {
        self.wire
    }

    pub fn table(&self) -> &Permutation {
        &self.table
    }
}

/// On basis states |n⟩|l⟩, applies the n-th power of `base` to the target
/// wire: |n⟩|base^n(l)⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlledPowerGate {
    control: usize,
    target: usize,
    base: Permutation,
}

impl ControlledPowerGate {
    pub fn new(control: usize, target: usize, base: Permutation) -> Result<Self, SimError> {
        if control == target {
            return Err(SimError::ControlEqualsTarget);
        }
        Ok(ControlledPowerGate {
            control,
            target,
            base,
        })
    }

    pub fn control(&self) -> usize {
        self.control
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }
}

/// Sign of the exponent in the single-wire discrete Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierSign {
    Plus,
    Minus,
}

impl FourierSign {
    fn factor(self) -> f64 {
        match self {
            FourierSign::Plus => 1.0,
            FourierSign::Minus => -1.0,
        }
    }
}

impl StateVector {
    pub fn apply_basis_permutation(&mut self, gate: &BasisPermutationGate) -> Result<(), SimError> {
        let layout = self.layout().clone();
        layout.check_wire(gate.wire)?;
        let dim = layout.dim(gate.wire);
        if gate.table.len() != dim {
            return Err(SimError::GateSizeMismatch {
                got: gate.table.len(),
                dim,
            });
        }
        let stride = layout.stride(gate.wire);
        let amps = self.amps_mut();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (i, &amp) in amps.iter().enumerate() {
            let digit = i / stride % dim;
            out[i - digit * stride + gate.table.image(digit) * stride] = amp;
        }
        *amps = out;
        Ok(())
    }

    pub fn apply_controlled_power(&mut self, gate: &ControlledPowerGate) -> Result<(), SimError> {
        let dim_c = {
            let layout = self.layout();
            layout.check_wire(gate.control)?;
            layout.dim(gate.control)
        };
        let mut powers = Vec::with_capacity(dim_c);
        let mut acc = Permutation::identity(gate.base.len());
        for _ in 0..dim_c {
            powers.push(acc.clone());
            acc = gate.base.compose(&acc).map_err(|_| SimError::GateSizeMismatch {
                got: gate.base.len(),
                dim: gate.base.len(),
            })?;
        }
        self.apply_select_permutation(gate.control, gate.target, &powers)
    }

    /// The general controlled relabeling: the control digit n selects which
    /// permutation acts on the target wire.
    pub fn apply_select_permutation(
        &mut self,
        control: usize,
        target: usize,
        tables: &[Permutation],
    ) -> Result<(), SimError> {
        let layout = self.layout().clone();
        layout.check_wire(control)?;
        layout.check_wire(target)?;
        if control == target {
            return Err(SimError::ControlEqualsTarget);
        }
        let dim_c = layout.dim(control);
        let dim_t = layout.dim(target);
        if tables.len() != dim_c {
            return Err(SimError::WrongTableCount {
                got: tables.len(),
                dim: dim_c,
            });
        }
        for table in tables {
            if table.len() != dim_t {
                return Err(SimError::GateSizeMismatch {
                    got: table.len(),
                    dim: dim_t,
                });
            }
        }
        let stride_c = layout.stride(control);
        let stride_t = layout.stride(target);
        let amps = self.amps_mut();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (i, &amp) in amps.iter().enumerate() {
            let n = i / stride_c % dim_c;
            let l = i / stride_t % dim_t;
            out[i - l * stride_t + tables[n].image(l) * stride_t] = amp;
        }
        *amps = out;
        Ok(())
    }

    /// Discrete Fourier transform on one wire of dimension d: digit n maps to
    /// (1/sqrt d) Σ_r exp(sign·2πi·rn/d) |r⟩. `Plus` and `Minus` are inverse
    /// to each other.
    pub fn fourier_wire(&mut self, wire: usize, sign: FourierSign) -> Result<(), SimError> {
        let layout = self.layout().clone();
        layout.check_wire(wire)?;
        let d = layout.dim(wire);
        let stride = layout.stride(wire);
        let total = layout.total_dim();
        let scale = 1.0 / (d as f64).sqrt();
        let twiddles: Vec<Complex64> = (0..d)
            .map(|k| Complex64::from_polar(scale, sign.factor() * TAU * k as f64 / d as f64))
            .collect();
        let amps = self.amps_mut();
        let mut out = vec![Complex64::new(0.0, 0.0); total];
        let block = d * stride;
        for base in (0..total).step_by(block) {
            for low in 0..stride {
                for r in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for n in 0..d {
                        acc += twiddles[r * n % d] * amps[base + n * stride + low];
                    }
                    out[base + r * stride + low] = acc;
                }
            }
        }
        *amps = out;
        Ok(())
    }
}
