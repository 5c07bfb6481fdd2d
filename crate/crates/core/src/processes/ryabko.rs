//! Functions of the ladder chain `0 -> 1 -> 2`, `s -> {0, s + 1}` for `s >= 2`.
//!
//! The observation is `X = 1` iff the hidden state lies outside the zero set
//! `Z`. Since the chain only climbs by one or resets to `0`, states beyond
//! the last irregular one can be lumped: a finite `Z` collapses to the tail
//! state `T = {s > max Z + 1}`, a periodic `Z` to residue classes. The lumped
//! chain is finite and carries the exact oracle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hidden::HiddenFunctionModel;
use crate::error::{Error, Result};
use crate::scalar::{pow2_neg, Field};
use crate::sequence::Symbol;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ZeroSet {
    /// `Z = {0, 1} ∪ extra`.
    Finite { extra: Vec<u64> },
    /// `Z = {0, 1} ∪ {s >= 4 : s ≡ residue (mod modulus)}`.
    Periodic { modulus: u64, residue: u64 },
}

impl ZeroSet {
    pub fn contains(&self, s: u64) -> bool {
        if s <= 1 {
            return true;
        }
        match self {
            ZeroSet::Finite { extra } => extra.contains(&s),
            ZeroSet::Periodic { modulus, residue } => s >= 4 && s % modulus == residue % modulus,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ZeroSet::Finite { extra } => {
                let mut e = extra.clone();
                e.sort_unstable();
                if let Some(&s) = e.iter().find(|&&s| s < 4) {
                    return Err(Error::InvalidModel(format!("extra zero {s} must be at least 4")));
                }
                if let Some(w) = e.windows(2).find(|w| w[1] <= w[0] + 1) {
                    return Err(Error::InvalidModel(format!(
                        "extra zeros {} and {} are adjacent or repeated",
                        w[0], w[1]
                    )));
                }
                Ok(())
            }
            ZeroSet::Periodic { modulus, .. } => {
                if *modulus < 2 {
                    return Err(Error::InvalidModel("periodic zero set needs modulus >= 2".into()));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RyabkoProcess {
    zeros: ZeroSet,
}

impl RyabkoProcess {
    pub fn new(zeros: ZeroSet) -> Result<Self> {
        zeros.validate()?;
        Ok(Self { zeros })
    }

    /// `Z = {0, 1}`.
    pub fn basic() -> Self {
        Self {
            zeros: ZeroSet::Finite { extra: Vec::new() },
        }
    }

    pub fn zeros(&self) -> &ZeroSet {
        &self.zeros
    }

    pub fn observe(&self, state: u64) -> Symbol {
        Symbol::from(!self.zeros.contains(state))
    }

    /// Stationary hidden path `M_0, ..., M_{len-1}`.
    pub fn sample_states<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<u64> {
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        // P(M = 0) = P(M = 1) = 1/4, P(M = i) = 2^{-i} for i >= 2
        let mut s = match rng.gen_range(0..4u32) {
            0 => 0,
            1 => 1,
            _ => {
                let mut i = 2;
                while rng.gen::<bool>() {
                    i += 1;
                }
                i
            }
        };
        out.push(s);
        for _ in 1..len {
            s = match s {
                0 => 1,
                1 => 2,
                _ if rng.gen::<bool>() => 0,
                _ => s + 1,
            };
            out.push(s);
        }
        out
    }

    pub fn sample_path<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Symbol> {
        self.sample_states(len, rng)
            .into_iter()
            .map(|s| self.observe(s))
            .collect()
    }

    /// Finite lumped chain with the same observed law.
    ///
    /// Returns the model and, for each lumped state, a representative hidden state.
    pub fn lumped<T: Field>(&self) -> (HiddenFunctionModel<T>, Vec<u64>) {
        let half = || T::from_ratio(1, 2);
        match &self.zeros {
            ZeroSet::Finite { extra } => {
                // states 0..=m explicit, state m + 1 stands for all s > m
                let m = extra.iter().copied().max().unwrap_or(1) + 1;
                let m = m.max(2) as usize;
                let size = m + 2;
                let mut p = vec![vec![T::zero(); size]; size];
                p[0][1] = T::one();
                p[1][2] = T::one();
                for s in 2..=m {
                    p[s][0] = half();
                    p[s][s + 1] = half();
                }
                p[m + 1][0] = half();
                p[m + 1][m + 1] = half();
                let reps: Vec<u64> = (0..size as u64).collect();
                let f = reps.iter().map(|&s| self.observe(s)).collect();
                (HiddenFunctionModel::new(p, f).expect("lumped chain is ergodic"), reps)
            }
            ZeroSet::Periodic { modulus, .. } => {
                // states 0..=3, then class c of {s >= 4 : s ≡ c} at index 4 + c
                let q = *modulus as usize;
                let size = 4 + q;
                let class = |s: usize| 4 + s % q;
                let mut p = vec![vec![T::zero(); size]; size];
                p[0][1] = T::one();
                p[1][2] = T::one();
                for s in 2..=3 {
                    p[s][0] = half();
                    p[s][s + 1] = half();
                }
                // 3 -> 4 lands in the class of 4
                p[3][4] = T::zero();
                p[3][class(4)] = half();
                for c in 0..q {
                    p[4 + c][0] = half();
                    p[4 + c][4 + (c + 1) % q] = half();
                }
                let mut reps: Vec<u64> = (0..4).collect();
                for c in 0..q as u64 {
                    // smallest s >= 4 in class c
                    let s = 4 + (c + *modulus - 4 % *modulus) % *modulus;
                    reps.push(s);
                }
                let f = reps.iter().map(|&s| self.observe(s)).collect();
                (HiddenFunctionModel::new(p, f).expect("lumped chain is ergodic"), reps)
            }
        }
    }

    /// Closed-form stationary mass of the lumped states of [`Self::lumped`].
    pub fn lumped_stationary<T: Field>(&self) -> Vec<T> {
        let (_, reps) = self.lumped::<T>();
        let quarter = T::from_ratio(1, 4);
        match &self.zeros {
            ZeroSet::Finite { .. } => {
                let tail = reps.len() - 1;
                reps.iter()
                    .enumerate()
                    .map(|(i, &s)| match s {
                        0 | 1 => quarter.clone(),
                        // the tail collects sum_{i > m} 2^{-i} = 2^{-m}
                        _ if i == tail => pow2_neg(s as u32 - 1),
                        _ => pow2_neg(s as u32),
                    })
                    .collect()
            }
            ZeroSet::Periodic { modulus, .. } => {
                let geo = T::one() / (T::one() - pow2_neg::<T>(*modulus as u32));
                reps.iter()
                    .enumerate()
                    .map(|(i, &s)| match s {
                        0 | 1 => quarter.clone(),
                        _ if i < 4 => pow2_neg(s as u32),
                        _ => pow2_neg::<T>(s as u32) * geo.clone(),
                    })
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::MemoryLength;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(RyabkoProcess::new(ZeroSet::Finite { extra: vec![3] }).is_err());
        assert!(RyabkoProcess::new(ZeroSet::Finite { extra: vec![5, 6] }).is_err());
        assert!(RyabkoProcess::new(ZeroSet::Finite { extra: vec![5, 7] }).is_ok());
        assert!(RyabkoProcess::new(ZeroSet::Periodic { modulus: 1, residue: 0 }).is_err());
    }

    #[test]
    fn lumped_stationary_matches_solver() {
        for z in [
            ZeroSet::Finite { extra: vec![] },
            ZeroSet::Finite { extra: vec![4, 9] },
            ZeroSet::Periodic { modulus: 3, residue: 1 },
            ZeroSet::Periodic { modulus: 2, residue: 0 },
        ] {
            let r = RyabkoProcess::new(z).unwrap();
            let (m, _) = r.lumped::<BigRational>();
            assert_eq!(m.stationary(), r.lumped_stationary::<BigRational>().as_slice());
        }
    }

    #[test]
    fn reset_word_pins_state() {
        let (m, _) = RyabkoProcess::basic().lumped::<BigRational>();
        // "0,0" pins the hidden pair (0, 1), so a 1 must follow
        let a = m.oracle(&[1, 1, 0, 0]).unwrap();
        assert_eq!(a.memory, MemoryLength::Finite(2));
        assert_eq!(a.law[1].1, BigRational::from_ratio(1, 1));
        // all states >= 2 share the same observed future
        let a = m.oracle(&[0, 0, 1]).unwrap();
        assert_eq!(a.memory, MemoryLength::Finite(1));
        assert_eq!(a.law[0].1, BigRational::from_ratio(1, 2));
        assert_eq!(m.oracle(&[0, 0, 0]), Err(Error::ImpossiblePast));
    }

    #[test]
    fn periodic_memory_grows_with_ones() {
        let r = RyabkoProcess::new(ZeroSet::Periodic { modulus: 3, residue: 0 }).unwrap();
        let (m, _) = r.lumped::<BigRational>();
        let ks: Vec<usize> = [1usize, 2, 4]
            .iter()
            .map(|&ones| {
                let mut past = vec![0, 0];
                past.extend(std::iter::repeat_n(1, ones));
                m.oracle(&past).unwrap().memory.finite().unwrap()
            })
            .collect();
        assert_eq!(ks, vec![2, 4, 4]);
        // zeros at 6, 9, ... cap runs of ones at four
        assert_eq!(m.oracle(&[1, 1, 1, 1, 1]), Err(Error::ImpossiblePast));
    }

    #[test]
    fn generated_frequencies() {
        let r = RyabkoProcess::basic();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let states = r.sample_states(200_000, &mut rng);
        let zero = states.iter().filter(|&&s| s == 0).count() as f64 / states.len() as f64;
        assert!((zero - 0.25).abs() < 0.01);
    }
}
