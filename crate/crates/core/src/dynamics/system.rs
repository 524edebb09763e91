use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DynamicsError, RationalMapQ};
use crate::algebra::ProjectivePointQ;

/// An ordered list of maps `f_1, ..., f_r` generating a semigroup under composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupSystem {
    maps: Vec<RationalMapQ>,
}

impl SemigroupSystem {
    pub fn new(maps: Vec<RationalMapQ>) -> Result<Self, DynamicsError> {
        if maps.is_empty() {
            return Err(DynamicsError::EmptySystem);
        }
        for (i, f) in maps.iter().enumerate() {
            if f.degree() < 2 {
                return Err(DynamicsError::DegreeTooSmall { index: i + 1, degree: f.degree() });
            }
            if let Some(j) = maps[..i].iter().position(|g| g == f) {
                return Err(DynamicsError::DuplicateMap { first: j + 1, second: i + 1 });
            }
        }
        Ok(Self { maps })
    }

    pub fn maps(&self) -> &[RationalMapQ] {
        &self.maps
    }

    /// `f_i` with a 1-based index.
    pub fn map(&self, index: usize) -> Option<&RationalMapQ> {
        index.checked_sub(1).and_then(|i| self.maps.get(i))
    }

    pub fn rank(&self) -> usize {
        self.maps.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.maps.iter().map(RationalMapQ::degree).collect()
    }

    /// The subsystem formed by the given 1-based indices, in that order.
    pub fn subsystem(&self, indices: &[usize]) -> Result<Self, DynamicsError> {
        let maps = indices
            .iter()
            .map(|&i| self.map(i).cloned().ok_or(DynamicsError::IndexOutOfRange { index: i, rank: self.rank() }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(maps)
    }

    /// Hex SHA-256 of the canonical text of the maps together with a base point.
    pub fn content_hash(&self, point: &ProjectivePointQ) -> String {
        let mut h = Sha256::new();
        for f in &self.maps {
            h.update(f.canonical().as_bytes());
            h.update(b";");
        }
        h.update(point.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    /// Default height threshold: `max_i log((d_i + 1) * maxcoeff(f_i)) + 1`.
    pub fn default_height_threshold(&self) -> f64 {
        self.maps
            .iter()
            .map(|f| ((f.degree() + 1) as f64).ln() + crate::algebra::ln_bigint(&f.max_coeff()))
            .fold(f64::NEG_INFINITY, f64::max)
            + 1.0
    }
}

/// A composition index `(i_1, ..., i_k)`, 1-based, denoting `f_{i_1} o ... o f_{i_k}`.
///
/// Words order by length first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word of length `len` at position `pos` in the lexicographic listing of `[r]^len`.
    pub fn from_rank(pos: usize, len: usize, r: usize) -> Self {
        let mut out = vec![0; len];
        let mut rest = pos;
        for slot in out.iter_mut().rev() {
            *slot = rest % r + 1;
            rest /= r;
        }
        Self(out)
    }

    /// `self o other`, as a word.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

/// `f_{i_1}(f_{i_2}(... f_{i_k}(P)))`; the empty word returns `P`.
pub fn word_evaluate(
    system: &SemigroupSystem,
    word: &Word,
    point: &ProjectivePointQ,
) -> Result<ProjectivePointQ, DynamicsError> {
    let mut q = point.clone();
    for &i in word.indices().iter().rev() {
        let f = system
            .map(i)
            .ok_or(DynamicsError::IndexOutOfRange { index: i, rank: system.rank() })?;
        q = f.evaluate(&q);
    }
    Ok(q)
}
