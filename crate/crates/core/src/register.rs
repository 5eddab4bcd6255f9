//! Labelled qubit registers.
//!
//! The label order fixes the tensor-product convention: the first label is
//! the most significant bit of a computational-basis index.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest register accepted for dense storage (4096-dimensional).
pub const MAX_QUBITS: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QubitRegister {
    labels: Arc<[String]>,
}

impl QubitRegister {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Label("register needs at least one qubit".into()));
        }
        if labels.len() > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::Label("empty qubit label".into()));
            }
            if labels[..i].contains(label) {
                return Err(Error::Label(format!("duplicate qubit label '{label}'")));
            }
        }
        Ok(Self {
            labels: labels.into(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of qubits.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Hilbert-space dimension, `2^len`.
    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Position of `label` in the register.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Label(format!("unknown qubit label '{label}'")))
    }

    /// Bit shift of `label` inside a basis index.
    pub fn shift_of(&self, label: &str) -> Result<usize> {
        Ok(self.shift_at(self.index_of(label)?))
    }

    pub(crate) fn shift_at(&self, index: usize) -> usize {
        self.labels.len() - 1 - index
    }

    /// Value (0 or 1) of qubit `label` in basis state `index`.
    pub fn bit(&self, index: usize, label: &str) -> Result<u8> {
        Ok(((index >> self.shift_of(label)?) & 1) as u8)
    }

    /// Basis index of a bitstring written in register order.
    pub fn index_of_bits(&self, bits: &str) -> Result<usize> {
        if bits.chars().count() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: bits.chars().count(),
            });
        }
        bits.chars().try_fold(0usize, |acc, c| match c {
            '0' => Ok(acc << 1),
            '1' => Ok((acc << 1) | 1),
            other => Err(Error::Label(format!("invalid bit '{other}' in bitstring"))),
        })
    }

    /// Bitstring of basis index `index` in register order.
    pub fn bits_of(&self, index: usize) -> String {
        (0..self.len())
            .map(|q| if (index >> self.shift_at(q)) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Number of excited qubits in basis state `index`.
    pub fn excitations(&self, index: usize) -> u32 {
        (index & (self.dim() - 1)).count_ones()
    }
}

impl fmt::Debug for QubitRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

impl fmt::Display for QubitRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.labels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_and_ordering() {
        let reg = QubitRegister::new(["a", "b", "c"]).unwrap();
        assert_eq!(reg.dim(), 8);
        assert_eq!(reg.shift_of("a").unwrap(), 2);
        assert_eq!(reg.index_of_bits("100").unwrap(), 4);
        assert_eq!(reg.bits_of(6), "110");
        assert_eq!(reg.bit(4, "a").unwrap(), 1);
        assert_eq!(reg.excitations(7), 3);
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(matches!(QubitRegister::new(["a", "a"]), Err(Error::Label(_))));
        assert!(QubitRegister::new(Vec::<String>::new()).is_err());
        let too_many: Vec<String> = (0..13).map(|i| format!("q{i}")).collect();
        assert_eq!(
            QubitRegister::new(too_many).unwrap_err(),
            Error::RegisterTooLarge(13)
        );
        let reg = QubitRegister::new(["a"]).unwrap();
        assert!(matches!(reg.index_of("z"), Err(Error::Label(_))));
        assert!(matches!(reg.index_of_bits("01"), Err(Error::Dimension { .. })));
    }
}
