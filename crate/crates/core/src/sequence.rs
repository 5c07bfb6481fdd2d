//! Alphabet, sample and word conventions shared by every estimator.
//!
//! Symbols are nonnegative integers. A [`Sample`] is a finite realization
//! `X_m, ..., X_{m+len-1}` with an explicit time origin `m`; a backward sample
//! of length `n + 1` covers indices `-n..=0`, a forward sample covers `0..=n`.
//! A [`Word`] stores its letters in increasing time order, so the "suffix" of a
//! sample is always its most recent symbols.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Symbol = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Backward,
    Forward,
}

/// An indexed finite realization. Cloning and reindexing share the data.
#[derive(Clone)]
pub struct Sample {
    data: Arc<[Symbol]>,
    start: usize,
    len: usize,
    origin: i64,
    orientation: Orientation,
}

impl Sample {
    /// `X_0^n` from `n + 1` symbols.
    pub fn forward(symbols: Vec<Symbol>) -> Result<Self> {
        Self::with_orientation(symbols, Orientation::Forward)
    }

    /// `X_{-n}^0` from `n + 1` symbols in time order.
    pub fn backward(symbols: Vec<Symbol>) -> Result<Self> {
        Self::with_orientation(symbols, Orientation::Backward)
    }

    pub fn with_orientation(symbols: Vec<Symbol>, orientation: Orientation) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::OutOfRange {
                requested: 1,
                available: 0,
            });
        }
        let len = symbols.len();
        let origin = match orientation {
            Orientation::Forward => 0,
            Orientation::Backward => -(len as i64 - 1),
        };
        Ok(Self {
            data: symbols.into(),
            start: 0,
            len,
            origin,
            orientation,
        })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.data[self.start..self.start + self.len]
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    /// The sample-length parameter `n` (the sample holds `n + 1` symbols).
    pub fn n(&self) -> usize {
        self.len - 1
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn last_index(&self) -> i64 {
        self.origin + self.len as i64 - 1
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Symbol at time index `t`.
    pub fn get(&self, t: i64) -> Option<Symbol> {
        let off = t - self.origin;
        if off < 0 || off >= self.len as i64 {
            None
        } else {
            Some(self.data[self.start + off as usize])
        }
    }

    /// Forward prefix `X_0^n`, sharing storage.
    pub fn prefix(&self, n: usize) -> Result<Sample> {
        if n >= self.len {
            return Err(Error::OutOfRange {
                requested: n + 1,
                available: self.len,
            });
        }
        Ok(Sample {
            data: self.data.clone(),
            start: self.start,
            len: n + 1,
            origin: self.origin,
            orientation: self.orientation,
        })
    }

    /// The most recent `m + 1` symbols as a backward sample `X_{-m}^0`.
    pub fn tail(&self, m: usize) -> Result<Sample> {
        if m >= self.len {
            return Err(Error::OutOfRange {
                requested: m + 1,
                available: self.len,
            });
        }
        Ok(Sample {
            data: self.data.clone(),
            start: self.start + self.len - (m + 1),
            len: m + 1,
            origin: -(m as i64),
            orientation: Orientation::Backward,
        })
    }
}

impl fmt::Debug for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sample")
            .field("origin", &self.origin)
            .field("len", &self.len)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl PartialEq for Sample {
    fn eq(&self, other: &Self) -> bool {
        self.origin == other.origin
            && self.orientation == other.orientation
            && self.symbols() == other.symbols()
    }
}

/// A finite context in increasing time order; `letters.last()` is the most recent.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Symbol>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` extended one step further into the past.
    pub fn prepend(&self, older: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(older);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `self` followed by `next`.
    pub fn push(&self, next: Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(next);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The last `k` letters.
    pub fn suffix(&self, k: usize) -> Word {
        Word(self.0[self.0.len().saturating_sub(k)..].to_vec())
    }

    pub fn is_suffix_of(&self, other: &[Symbol]) -> bool {
        other.ends_with(&self.0)
    }

    /// Canonical list order: shorter words first, then lexicographic by symbol value.
    /// Every proper suffix of a word precedes it.
    pub fn list_order(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Does this word end at offset `end` of `symbols`?
    pub fn matches_at(&self, symbols: &[Symbol], end: usize) -> bool {
        let k = self.0.len();
        end < symbols.len() && end + 1 >= k && symbols[end + 1 - k..=end] == self.0[..]
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// Memory length of a sample path. `Unbounded` is only ever produced by oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MemoryLength {
    Finite(usize),
    Unbounded,
}

impl MemoryLength {
    pub fn finite(self) -> Option<usize> {
        match self {
            MemoryLength::Finite(k) => Some(k),
            MemoryLength::Unbounded => None,
        }
    }
}

impl fmt::Display for MemoryLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemoryLength::Finite(k) => write!(f, "{k}"),
            MemoryLength::Unbounded => write!(f, "inf"),
        }
    }
}

/// Thresholds of the memory-word tests.
///
/// `gamma` sets the frequent-string cutoff `n^{1-gamma}`, `beta` the test
/// threshold `n^{-beta}`, `epsilon` the density target of the forward schemes.
/// Requires `0 < gamma < 1`, `0 < beta < (1 - gamma) / 2`, `0 < epsilon < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorParams<F> {
    pub gamma: F,
    pub beta: F,
    pub epsilon: F,
}

impl<F: Real> EstimatorParams<F> {
    pub fn new(gamma: F, beta: F, epsilon: F) -> Result<Self> {
        let p = Self {
            gamma,
            beta,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (zero, one, two) = (F::zero(), F::one(), F::lit(2.0));
        if !(self.gamma > zero && self.gamma < one) {
            return Err(Error::InvalidParams(format!(
                "gamma must lie in (0,1), got {:?}",
                self.gamma
            )));
        }
        if !(self.beta > zero && two * self.beta + self.gamma < one) {
            return Err(Error::InvalidParams(format!(
                "beta must satisfy 0 < beta and 2*beta + gamma < 1, got beta={:?} gamma={:?}",
                self.beta, self.gamma
            )));
        }
        if !(self.epsilon > zero && self.epsilon < one) {
            return Err(Error::InvalidParams(format!(
                "epsilon must lie in (0,1), got {:?}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// `n^{1-gamma}`: strings must occur strictly more often than this to be frequent.
    pub fn frequency_threshold(&self, n: usize) -> F {
        F::from_count(n).powf(F::one() - self.gamma)
    }

    /// `n^{-beta}`: the discrepancy statistic must not exceed this for a YES verdict.
    pub fn test_threshold(&self, n: usize) -> F {
        F::from_count(n).powf(-self.beta)
    }
}

impl<F: Real> Default for EstimatorParams<F> {
    fn default() -> Self {
        Self {
            gamma: F::lit(0.5),
            beta: F::lit(0.24),
            epsilon: F::lit(0.1),
        }
    }
}

/// The last `k` symbols of the sample in time order.
pub fn suffix(sample: &Sample, k: usize) -> Result<Word> {
    let s = sample.symbols();
    if k > s.len() {
        return Err(Error::OutOfRange {
            requested: k,
            available: s.len(),
        });
    }
    Ok(Word(s[s.len() - k..].to_vec()))
}

/// Views the forward prefix `X_0^n` as the backward sample `X_{-n}^0`.
pub fn shift_view(sample: &Sample, n: usize) -> Result<Sample> {
    let mut view = sample.prefix(n)?;
    view.origin = -(n as i64);
    view.orientation = Orientation::Backward;
    Ok(view)
}
