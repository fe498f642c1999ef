use std::fmt;

use serde::{Deserialize, Serialize};

/// A binary assignment; bit `k` is variable `k`. The spin view is `s = 1 - 2x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    bits: Vec<u8>,
}

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self { bits: vec![0; n] }
    }

    /// Panics if any entry is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "bits must be 0 or 1");
        Self { bits }
    }

    pub fn from_index(z: u64, n: usize) -> Self {
        Self {
            bits: (0..n).map(|k| (z >> k & 1) as u8).collect(),
        }
    }

    /// Basis index with bit `k` = variable `k`. Panics beyond 64 variables.
    pub fn to_index(&self) -> u64 {
        assert!(self.bits.len() <= 64, "assignment too wide for a basis index");
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |z, (k, &b)| z | (u64::from(b) << k))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn bit(&self, k: usize) -> bool {
        self.bits[k] == 1
    }

    pub fn set(&mut self, k: usize, value: bool) {
        self.bits[k] = u8::from(value);
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn spins(&self) -> Vec<i8> {
        self.bits.iter().map(|&b| 1 - 2 * b as i8).collect()
    }

    pub fn from_spins(spins: &[i8]) -> Self {
        Self {
            bits: spins.iter().map(|&s| u8::from(s < 0)).collect(),
        }
    }
}

/// Printed as `x_0 x_1 … x_{n-1}` (variable 0 first).
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_spins() {
        let x = Assignment::from_index(0b0110, 4);
        assert_eq!(x.bits(), &[0, 1, 1, 0]);
        assert_eq!(x.to_index(), 6);
        assert_eq!(x.spins(), vec![1, -1, -1, 1]);
        assert_eq!(Assignment::from_spins(&x.spins()), x);
        assert_eq!(x.to_string(), "0110");
    }
}
