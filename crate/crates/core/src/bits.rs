//! Computational-basis bitstrings. Character `j` of the textual form is qubit `j`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::circuit::CircuitError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring(Vec<u8>);

impl Bitstring {
    pub fn zeros(n: usize) -> Self {
        Bitstring(alloc::vec![0; n])
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self, CircuitError> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(CircuitError::BadBit {
                position: pos,
                found: char::from(b'0' + bits[pos].min(9)),
            });
        }
        Ok(Bitstring(bits))
    }

    /// Qubit `j` takes bit `j` of `value` (qubit 0 is the least significant bit).
    pub fn from_index(value: usize, n: usize) -> Self {
        Bitstring((0..n).map(|j| ((value >> j) & 1) as u8).collect())
    }

    /// Inverse of [`Bitstring::from_index`].
    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &b)| (b as usize) << j)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, qubit: usize) -> u8 {
        self.0[qubit]
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub(crate) fn expect_len(&self, n: usize) -> Result<(), CircuitError> {
        if self.0.len() != n {
            return Err(CircuitError::BitstringLength {
                expected: n,
                actual: self.0.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for Bitstring {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                found => Err(CircuitError::BadBit { position, found }),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Bitstring)
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .0
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}
