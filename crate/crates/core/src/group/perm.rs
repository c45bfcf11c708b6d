//! Permutations on `{0..n-1}` stored as image tables, and their cycle
//! structure.

use rand::seq::SliceRandom;
use rand::Rng;

use super::GroupError;

/// A bijection on `{0..n-1}`. `images[i]` is where `i` goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its image table, rejecting anything that is
    /// not a bijection on `{0..len-1}`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(GroupError::NotABijection { len: n });
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation on `{0..n-1}` from disjoint cycles. Elements not
    /// mentioned in any cycle stay fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(GroupError::InvalidCycle {
                        reason: format!("element {x} out of range for size {n}"),
                    });
                }
                if touched[x] {
                    return Err(GroupError::InvalidCycle {
                        reason: format!("element {x} appears twice"),
                    });
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, GroupError> {
        if a >= n || b >= n || a == b {
            return Err(GroupError::InvalidCycle {
                reason: format!("transposition ({a} {b}) invalid for size {n}"),
            });
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    /// Uniformly random permutation, by shuffling the identity table.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// Parses one line of space-separated images, e.g. `"1 2 0"`.
    pub fn parse_line(line: &str) -> Result<Self, GroupError> {
        let images = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| GroupError::Parse(format!("bad image {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if images.is_empty() {
            return Err(GroupError::Parse("empty permutation line".into()));
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, GroupError> {
        if self.len() != other.len() {
            return Err(GroupError::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let images = (0..self.len()).map(|i| self.images[other.images[i]]).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    /// n-fold composition by repeated squaring; `power(0)` is the identity.
    pub fn power(&self, mut n: u64) -> Self {
        let mut result = Permutation::identity(self.len());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.compose(&base).expect("sizes match");
            }
            base = base.compose(&base).expect("sizes match");
            n >>= 1;
        }
        result
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &img)| *i == img)
            .map(|(i, _)| i)
            .collect()
    }

    /// Decomposes into disjoint cycles. Each cycle is rotated to start at its
    /// smallest element and cycles are sorted by that element, so the result
    /// is canonical. Fixed points appear as singleton cycles.
    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let n = self.len();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = vec![start];
            visited[start] = true;
            let mut next = self.images[start];
            while next != start {
                visited[next] = true;
                cycle.push(next);
                next = self.images[next];
            }
            cycles.push(cycle);
        }
        // Scanning from 0 upward already yields cycles led by, and sorted by,
        // their smallest element.
        CycleDecomposition { size: n, cycles }
    }
}

/// Disjoint cycles covering `{0..n-1}`, in the canonical order produced by
/// [`Permutation::cycle_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    size: usize,
    cycles: Vec<Vec<usize>>,
}

impl CycleDecomposition {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycles_of_length(&self, len: usize) -> Vec<Vec<usize>> {
        self.cycles.iter().filter(|c| c.len() == len).cloned().collect()
    }

    pub fn cycle_containing(&self, x: usize) -> Option<&[usize]> {
        self.cycles.iter().find(|c| c.contains(&x)).map(|c| c.as_slice())
    }

    pub fn cycle_length_of(&self, x: usize) -> Option<usize> {
        self.cycle_containing(x).map(|c| c.len())
    }

    /// Multiplies the cycles back out into a permutation.
    pub fn to_permutation(&self) -> Permutation {
        let mut images: Vec<usize> = (0..self.size).collect();
        for cycle in &self.cycles {
            for (k, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation { images }
    }
}
