//! The countable base chain and its order-2 perturbations.
//!
//! Base rows: `P(s, s + r) = 2^{-r-1}` for `r >= 1`, `P(s, s) = 2^{-s-1}` and
//! `P(s, j) = 2^{-j-2}` for `j < s`. Stage `k` swaps the entries at `j` and
//! `j + 1` of the row of `j` whenever the previous symbol is `t_j`, for each
//! `j <= k`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::OracleAnswer;
use crate::error::{Error, Result};
use crate::scalar::{pow2_neg, Field};
use crate::sequence::{MemoryLength, Symbol};

/// Entries beyond `s + LAW_SPAN` carry less than `1e-12` of mass.
const LAW_SPAN: u32 = 41;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbedChain {
    schedule: Vec<u64>,
    stage: i64,
}

/// `P(s, j)` of the base chain.
pub fn base_prob<T: Field>(s: u32, j: u32) -> T {
    if j > s {
        pow2_neg(j - s + 1)
    } else if j == s {
        pow2_neg(s + 1)
    } else {
        pow2_neg(j + 2)
    }
}

impl PerturbedChain {
    /// `stage = -1` is the unperturbed base chain.
    pub fn new(schedule: Vec<u64>, stage: i64) -> Result<Self> {
        for (j, &t) in schedule.iter().enumerate() {
            if t <= j as u64 + 1 {
                return Err(Error::InvalidModel(format!("schedule entry t_{j} = {t} must exceed {}", j + 1)));
            }
            if t > u32::MAX as u64 {
                return Err(Error::InvalidModel(format!("schedule entry t_{j} = {t} is not a symbol")));
            }
        }
        if schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModel("schedule must be strictly increasing".into()));
        }
        if stage < -1 || stage >= schedule.len() as i64 {
            return Err(Error::InvalidModel(format!(
                "stage {stage} outside -1..{}",
                schedule.len()
            )));
        }
        Ok(Self { schedule, stage })
    }

    pub fn base() -> Self {
        Self {
            schedule: Vec::new(),
            stage: -1,
        }
    }

    /// The preset schedule `t_j = 20 * 2^j`, `j < len`.
    pub fn preset(len: usize, stage: i64) -> Result<Self> {
        Self::new((0..len).map(|j| 20u64 << j).collect(), stage)
    }

    pub fn schedule(&self) -> &[u64] {
        &self.schedule
    }

    pub fn stage(&self) -> i64 {
        self.stage
    }

    /// Is the row of `s` after `prev` an exception row?
    pub fn is_exception(&self, prev: Symbol, s: Symbol) -> bool {
        (s as i64) <= self.stage && self.schedule[s as usize] == prev as u64
    }

    /// `P(X_{t+1} = j | X_{t-1} = prev, X_t = s)`.
    pub fn prob<T: Field>(&self, prev: Symbol, s: Symbol, j: Symbol) -> T {
        if self.is_exception(prev, s) {
            if j == s {
                return base_prob(s, s + 1);
            }
            if j == s + 1 {
                return base_prob(s, s);
            }
        }
        base_prob(s, j)
    }

    /// Does the exception row of `j` differ from its base row?
    fn swap_matters(&self, j: Symbol) -> bool {
        (j as i64) <= self.stage && base_prob::<f64>(j, j) != base_prob::<f64>(j, j + 1)
    }

    fn step<R: Rng + ?Sized>(&self, prev: Symbol, s: Symbol, rng: &mut R) -> Symbol {
        let next = if rng.gen::<bool>() {
            // up by r with probability 2^{-r}
            let mut r = 1;
            while rng.gen::<bool>() {
                r += 1;
            }
            s + r
        } else {
            // J = j with probability 2^{-j-1}; J >= s means stay
            let mut j = 0;
            while j < s && rng.gen::<bool>() {
                j += 1;
            }
            j
        };
        if self.is_exception(prev, s) {
            if next == s {
                return s + 1;
            }
            if next == s + 1 {
                return s;
            }
        }
        next
    }

    /// A path of length `len` after a burn-in of `10 sqrt(len) + 10^4` steps from `(0, 0)`.
    pub fn sample_path<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Symbol> {
        let burn = 10 * (len as f64).sqrt() as usize + 10_000;
        let (mut prev, mut s) = (0, 0);
        for _ in 0..burn {
            let next = self.step(prev, s, rng);
            prev = s;
            s = next;
        }
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(s);
            let next = self.step(prev, s, rng);
            prev = s;
            s = next;
        }
        out
    }

    /// Memory length and law from the structure of the exception rows.
    ///
    /// The singleton `j` is a memory word unless its row was effectively
    /// swapped, in which case the previous symbol is needed. Pasts too short
    /// to contain the memory word have no oracle.
    pub fn oracle<T: Field>(&self, past: &[Symbol]) -> Result<OracleAnswer<T>> {
        let Some(&s) = past.last() else {
            return Err(Error::NoOracle);
        };
        let k = if self.swap_matters(s) { 2 } else { 1 };
        if past.len() < k {
            return Err(Error::NoOracle);
        }
        let prev = if k == 2 { past[past.len() - 2] } else { Symbol::MAX };
        let law = (0..=s + LAW_SPAN).map(|j| (j, self.prob(prev, s, j))).collect();
        Ok(OracleAnswer {
            memory: MemoryLength::Finite(k),
            law,
        })
    }
}
