use std::fmt;

use super::bit_pos;

/// A computational-basis label `I = (i₁ i₂ … iₙ)`, stored as its flat index
/// with qubit 1 in the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    n: usize,
    flat: usize,
}

impl MultiIndex {
    /// Panics if `flat >= 2^n`.
    pub fn from_flat(n: usize, flat: usize) -> Self {
        assert!(
            n < usize::BITS as usize && flat < (1usize << n),
            "index {flat} out of range for {n} qubits"
        );
        Self { n, flat }
    }

    /// From slot values `i₁ … iₙ`; `None` if any entry is not 0 or 1.
    pub fn from_bits(bits: &[u8]) -> Option<Self> {
        let mut flat = 0usize;
        for &b in bits {
            if b > 1 {
                return None;
            }
            flat = (flat << 1) | b as usize;
        }
        Some(Self {
            n: bits.len(),
            flat,
        })
    }

    pub fn all(n: usize) -> impl Iterator<Item = MultiIndex> {
        (0..1usize << n).map(move |flat| MultiIndex { n, flat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flat(&self) -> usize {
        self.flat
    }

    /// Slot value `i_j` for 1-based qubit `j`.
    pub fn bit(&self, j: usize) -> u8 {
        ((self.flat >> bit_pos(self.n, j)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.n).map(|j| self.bit(j)).collect()
    }

    /// `I_j`: the same index with slot `j` complemented.
    pub fn complement(&self, j: usize) -> Self {
        Self {
            n: self.n,
            flat: self.flat ^ (1 << bit_pos(self.n, j)),
        }
    }

    /// Copy of the index with slot `j` set to `value`.
    pub fn with_bit(&self, j: usize, value: u8) -> Self {
        let mask = 1 << bit_pos(self.n, j);
        let flat = if value & 1 == 1 {
            self.flat | mask
        } else {
            self.flat & !mask
        };
        Self { n: self.n, flat }
    }

    /// Number of slots in which two indices differ.
    pub fn hamming(&self, other: &Self) -> usize {
        debug_assert_eq!(self.n, other.n);
        (self.flat ^ other.flat).count_ones() as usize
    }

    /// Flat index of the (n−1)-slot label obtained by deleting slot `j`.
    pub fn without(&self, j: usize) -> usize {
        remove_bit(self.flat, bit_pos(self.n, j))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n {
            write!(f, "{}", self.bit(j))?;
        }
        Ok(())
    }
}

/// Deletes bit `pos` from `x`, shifting higher bits down.
#[inline]
pub(crate) fn remove_bit(x: usize, pos: usize) -> usize {
    let low = x & ((1 << pos) - 1);
    let high = (x >> (pos + 1)) << pos;
    high | low
}

/// Inserts `bit` at position `pos`, shifting higher bits up.
#[inline]
pub(crate) fn insert_bit(x: usize, pos: usize, bit: usize) -> usize {
    let low = x & ((1 << pos) - 1);
    let high = (x >> pos) << (pos + 1);
    high | (bit << pos) | low
}
