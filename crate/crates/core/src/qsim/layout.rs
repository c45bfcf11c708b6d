//! Mixed-radix indexing for registers of qudit wires.

use super::SimError;

/// Wire dimensions of a register, with wire 0 as the most significant digit
/// of the flat basis index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self, SimError> {
        if dims.is_empty() {
            return Err(SimError::EmptyLayout);
        }
        for (wire, &dim) in dims.iter().enumerate() {
            if dim < 2 {
                return Err(SimError::BadDimension { wire, dim });
            }
        }
        let mut strides = vec![0; dims.len()];
        let mut total: usize = 1;
        for wire in (0..dims.len()).rev() {
            strides[wire] = total;
            total = total.checked_mul(dims[wire]).ok_or(SimError::DimensionOverflow)?;
        }
        Ok(RegisterLayout { dims, strides, total })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_wires(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, wire: usize) -> usize {
        self.dims[wire]
    }

    pub fn stride(&self, wire: usize) -> usize {
        self.strides[wire]
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn check_wire(&self, wire: usize) -> Result<(), SimError> {
        if wire >= self.dims.len() {
            return Err(SimError::WireOutOfRange {
                wire,
                wires: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Flat index of a digit tuple; wire 0 varies slowest.
    pub fn index_of(&self, digits: &[usize]) -> Result<usize, SimError> {
        if digits.len() != self.dims.len() {
            return Err(SimError::WrongDigitCount {
                got: digits.len(),
                wires: self.dims.len(),
            });
        }
        let mut index = 0;
        for (wire, &digit) in digits.iter().enumerate() {
            if digit >= self.dims[wire] {
                return Err(SimError::DigitOutOfRange {
                    wire,
                    digit,
                    dim: self.dims[wire],
                });
            }
            index += digit * self.strides[wire];
        }
        Ok(index)
    }

    pub fn digits_of(&self, index: usize) -> Vec<usize> {
        debug_assert!(index < self.total);
        (0..self.dims.len()).map(|w| self.digit_at(index, w)).collect()
    }

    pub fn digit_at(&self, index: usize, wire: usize) -> usize {
        index / self.strides[wire] % self.dims[wire]
    }
}
