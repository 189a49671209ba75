use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported register; every state in this crate fits in four qubits.
pub const MAX_QUBITS: usize = 8;

/// Ordered qubit labels of a register.
///
/// The first label is the most significant bit of a basis index. With
/// layout `(A, B)` the amplitude at index 1 (`0b01`) belongs to `|0⟩_A|1⟩_B`
/// and index 2 (`0b10`) to `|1⟩_A|0⟩_B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct QubitLayout {
    labels: Vec<String>,
}

impl QubitLayout {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(Error::LayoutSize {
                got: labels.len(),
                max: MAX_QUBITS,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Concatenation `self ++ other`; labels must be disjoint.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if let Some(l) = other.labels.iter().find(|l| self.contains(l)) {
            return Err(Error::LabelCollision(l.clone()));
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Self::new(labels)
    }

    /// Positions (in this layout) of `order`, which must be a permutation of the labels.
    pub(crate) fn permutation_positions<S: AsRef<str>>(&self, order: &[S]) -> Result<Vec<usize>> {
        let names = || order.iter().map(|s| s.as_ref().to_string()).collect();
        if order.len() != self.labels.len() {
            return Err(Error::NotPermutation(names()));
        }
        let mut positions = Vec::with_capacity(order.len());
        for label in order {
            let pos = self
                .position(label.as_ref())
                .map_err(|_| Error::NotPermutation(names()))?;
            if positions.contains(&pos) {
                return Err(Error::NotPermutation(names()));
            }
            positions.push(pos);
        }
        Ok(positions)
    }

    /// Bit of `index` that belongs to the qubit at `position`.
    #[cfg(test)]
    pub(crate) fn bit(&self, index: usize, position: usize) -> usize {
        (index >> (self.labels.len() - 1 - position)) & 1
    }
}

impl TryFrom<Vec<String>> for QubitLayout {
    type Error = Error;

    fn try_from(labels: Vec<String>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<QubitLayout> for Vec<String> {
    fn from(layout: QubitLayout) -> Self {
        layout.labels
    }
}

impl fmt::Display for QubitLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.labels.join(","))
    }
}

/// Builds the index in a layout of `n` qubits whose bits at `positions` are the
/// bits of `sub` (most significant first) and zero elsewhere.
#[inline]
pub(crate) fn scatter_bits(sub: usize, positions: &[usize], n: usize) -> usize {
    let k = positions.len();
    positions.iter().enumerate().fold(0, |acc, (i, &p)| {
        let b = (sub >> (k - 1 - i)) & 1;
        acc | (b << (n - 1 - p))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            QubitLayout::new(["A", "A"]),
            Err(Error::DuplicateLabel("A".into()))
        );
        assert!(QubitLayout::new(Vec::<String>::new()).is_err());
        assert!(QubitLayout::new((0..9).map(|i| format!("q{i}"))).is_err());
    }

    #[test]
    fn msb_first_indexing() {
        let l = QubitLayout::new(["A", "B"]).unwrap();
        // index 2 = |1⟩_A |0⟩_B
        assert_eq!(l.bit(2, 0), 1);
        assert_eq!(l.bit(2, 1), 0);
        assert_eq!(scatter_bits(0b1, &[0], 2), 2);
        assert_eq!(scatter_bits(0b10, &[1, 0], 2), 1);
    }

    #[test]
    fn concat_collision() {
        let a = QubitLayout::new(["A1", "B1"]).unwrap();
        let b = QubitLayout::new(["B1"]).unwrap();
        assert_eq!(a.concat(&b), Err(Error::LabelCollision("B1".into())));
    }
}
