use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Bijection between items (tensors or vertices) and positions `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl Ordering {
    /// `sequence[p]` is the item at position `p`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut position = vec![usize::MAX; n];
        for (p, &item) in sequence.iter().enumerate() {
            match position.get_mut(item) {
                Some(slot) if *slot == usize::MAX => *slot = p,
                Some(_) => return Err(Error::InvalidOrdering(format!("item {item} repeated"))),
                None => {
                    return Err(Error::InvalidOrdering(format!(
                        "item {item} outside 0..{n}"
                    )))
                }
            }
        }
        Ok(Self { sequence, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sequence: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    /// Uniformly random permutation drawn from a seeded generator.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut sequence: Vec<usize> = (0..n).collect();
        sequence.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::from_sequence(sequence).expect("shuffled identity")
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn item_at(&self, position: usize) -> usize {
        self.sequence[position]
    }

    pub fn position_of(&self, item: usize) -> usize {
        self.position[item]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    pub fn reversed(&self) -> Self {
        let mut seq = self.sequence.clone();
        seq.reverse();
        Self::from_sequence(seq).expect("reversal of a bijection")
    }

    /// One item id per line, in position order.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.len() * 4);
        for item in &self.sequence {
            s.push_str(&item.to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let seq = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<usize>()
                    .map_err(|_| Error::InvalidOrdering(format!("`{l}` is not a tensor id")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_sequence(seq)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}
