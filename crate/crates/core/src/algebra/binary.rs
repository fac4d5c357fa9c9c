use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Element of Z_2^3. Converts to and from an integer index with the first
/// bit as the most significant one, so `(1,0,1)` is index 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u8; 3]", into = "[u8; 3]")]
pub struct BinaryTriple(u8);

impl BinaryTriple {
    pub const ZERO: Self = Self(0);

    pub fn new(b1: u8, b2: u8, b3: u8) -> Self {
        Self(((b1 & 1) << 2) | ((b2 & 1) << 1) | (b3 & 1))
    }

    /// Panics if `index >= 8`.
    pub fn from_index(index: usize) -> Self {
        assert!(index < 8, "binary triple index {index} out of range");
        Self(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bits(self) -> [u8; 3] {
        [(self.0 >> 2) & 1, (self.0 >> 1) & 1, self.0 & 1]
    }

    /// Mod-2 dot product.
    pub fn dot(self, other: Self) -> u8 {
        ((self.0 & other.0).count_ones() & 1) as u8
    }

    pub fn all() -> impl Iterator<Item = Self> {
        (0..8u8).map(Self)
    }
}

impl Add for BinaryTriple {
    type Output = Self;

    // addition mod 2 per coordinate
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl From<[u8; 3]> for BinaryTriple {
    fn from(b: [u8; 3]) -> Self {
        Self::new(b[0], b[1], b[2])
    }
}

impl From<BinaryTriple> for [u8; 3] {
    fn from(t: BinaryTriple) -> Self {
        t.bits()
    }
}

/// Mod-2 dot product of the MSB-first binary expansions of two indices.
pub fn bit_dot(j: usize, k: usize) -> u32 {
    (j & k).count_ones() & 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msb_first_convention() {
        assert_eq!(BinaryTriple::new(1, 0, 1).index(), 5);
        assert_eq!(BinaryTriple::from_index(6).bits(), [1, 1, 0]);
    }

    #[test]
    fn addition_is_self_inverse() {
        for a in BinaryTriple::all() {
            assert_eq!(a + a, BinaryTriple::ZERO);
            for b in BinaryTriple::all() {
                assert_eq!(a + b, b + a);
                assert_eq!((a + b) + b, a);
            }
        }
    }

    #[test]
    fn dot_matches_bitwise_sum() {
        let a = BinaryTriple::new(1, 0, 1);
        let b = BinaryTriple::new(1, 1, 1);
        assert_eq!(a.dot(b), 0);
        assert_eq!(BinaryTriple::new(1, 1, 0).dot(b), 0);
        assert_eq!(BinaryTriple::new(1, 0, 0).dot(b), 1);
    }
}
