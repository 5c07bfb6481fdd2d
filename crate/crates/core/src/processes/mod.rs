//! Process generators and exact memory oracles.

use rand::Rng;
use serde::{Deserialize, Serialize};

pub mod hidden;
pub mod kernel;
pub mod linalg;
pub mod perturbed;
pub mod renewal;
pub mod rng;
pub mod ryabko;
pub mod spec;

pub use hidden::{example1, HiddenFunctionModel};
pub use kernel::MarkovKernel;
pub use perturbed::{base_prob, PerturbedChain};
pub use renewal::{GapLaw, RenewalProcess};
pub use rng::{master_rng, replica_rng, replica_seed, RNG_ID};
pub use ryabko::{RyabkoProcess, ZeroSet};
pub use spec::{ModelKind, ModelSpec, PRESETS};

use crate::error::{Error, Result};
use crate::sequence::{MemoryLength, Sample, Symbol};

/// Memory length of a past and the next-symbol law it induces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleAnswer<T> {
    pub memory: MemoryLength,
    pub law: Vec<(Symbol, T)>,
}

impl<T: Clone + num_traits::Zero> OracleAnswer<T> {
    pub fn prob(&self, y: Symbol) -> T {
        self.law
            .iter()
            .find(|(s, _)| *s == y)
            .map_or_else(T::zero, |(_, p)| p.clone())
    }
}

/// A validated model ready for generation.
#[derive(Clone, Debug)]
pub enum ProcessModel {
    Markov {
        kernel: MarkovKernel<f64>,
        hidden: HiddenFunctionModel<f64>,
    },
    Hidden(HiddenFunctionModel<f64>),
    Perturbed(PerturbedChain),
    Ryabko {
        process: RyabkoProcess,
        lumped: HiddenFunctionModel<f64>,
    },
    Renewal {
        process: RenewalProcess,
        hidden: Option<HiddenFunctionModel<f64>>,
    },
}

impl ProcessModel {
    pub fn markov(kernel: MarkovKernel<f64>) -> Result<Self> {
        let hidden = kernel.to_hidden()?;
        Ok(Self::Markov { kernel, hidden })
    }

    pub fn example1() -> Self {
        Self::Hidden(example1())
    }

    pub fn ryabko(process: RyabkoProcess) -> Self {
        let (lumped, _) = process.lumped();
        Self::Ryabko { process, lumped }
    }

    pub fn renewal(process: RenewalProcess) -> Result<Self> {
        let hidden = match process.hidden() {
            Ok(h) => Some(h),
            Err(Error::NoOracle) => None,
            Err(e) => return Err(e),
        };
        Ok(Self::Renewal { process, hidden })
    }

    /// Finite-state model carrying the oracle, when there is one.
    fn finite_oracle(&self) -> Option<&HiddenFunctionModel<f64>> {
        match self {
            Self::Markov { hidden, .. } => Some(hidden),
            Self::Hidden(h) => Some(h),
            Self::Ryabko { lumped, .. } => Some(lumped),
            Self::Renewal { hidden, .. } => hidden.as_ref(),
            Self::Perturbed(_) => None,
        }
    }

    /// Realization `X_0^n` drawn with `rng`.
    pub fn generate_rng<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Sample> {
        let len = n + 1;
        let v = match self {
            Self::Markov { hidden, .. } | Self::Hidden(hidden) => hidden.sample_path(len, rng),
            Self::Perturbed(c) => c.sample_path(len, rng),
            Self::Ryabko { process, .. } => process.sample_path(len, rng),
            Self::Renewal { process, .. } => process.sample_path(len, rng),
        };
        Sample::forward(v)
    }

    /// Realization `X_0^n` from the named generator seeded with `seed`.
    pub fn generate(&self, n: usize, seed: u64) -> Result<Sample> {
        self.generate_rng(n, &mut master_rng(seed))
    }

    /// Memory length and law after `past` (time order), checking that the past is possible.
    pub fn oracle(&self, past: &[Symbol]) -> Result<OracleAnswer<f64>> {
        match self {
            Self::Perturbed(c) => c.oracle(past),
            _ => self.finite_oracle().ok_or(Error::NoOracle)?.oracle(past),
        }
    }

    /// [`Self::oracle`] for pasts known to have positive probability.
    pub fn oracle_trusted(&self, past: &[Symbol]) -> Result<OracleAnswer<f64>> {
        match self {
            Self::Perturbed(c) => c.oracle(past),
            _ => Ok(self.finite_oracle().ok_or(Error::NoOracle)?.oracle_trusted(past)),
        }
    }

    pub fn has_oracle(&self) -> bool {
        matches!(self, Self::Perturbed(_)) || self.finite_oracle().is_some()
    }
}

pub fn generate(model: &ProcessModel, n: usize, seed: u64) -> Result<Sample> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    model.generate(n, seed)
}

pub fn oracle_memory(model: &ProcessModel, past: &[Symbol]) -> Result<MemoryLength> {
    model.oracle(past).map(|a| a.memory)
}

pub fn oracle_cond(model: &ProcessModel, past: &[Symbol]) -> Result<Vec<(Symbol, f64)>> {
    model.oracle(past).map(|a| a.law)
}

pub fn renewal_process(law: GapLaw, n: usize, seed: u64) -> Result<Sample> {
    ProcessModel::renewal(RenewalProcess::new(law)?)?.generate(n, seed)
}

pub fn ryabko_function_process(zeros: ZeroSet, n: usize, seed: u64) -> Result<Sample> {
    ProcessModel::ryabko(RyabkoProcess::new(zeros)?).generate(n, seed)
}

pub fn perturbed_chain_stage(schedule: Vec<u64>, stage: i64) -> Result<PerturbedChain> {
    PerturbedChain::new(schedule, stage)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_reproducible() {
        let m = ProcessModel::example1();
        assert_eq!(m.generate(500, 9).unwrap(), m.generate(500, 9).unwrap());
        assert_ne!(m.generate(500, 9).unwrap(), m.generate(500, 10).unwrap());
        assert_eq!(m.generate(500, 9).unwrap().len(), 501);
    }

    #[test]
    fn example1_transitions() {
        let h = example1::<f64>();
        let mut rng = master_rng(4);
        let s = h.sample_states(100_000, &mut rng);
        assert!(s.windows(2).filter(|w| w[0] == 0).all(|w| w[1] == 1));
        assert!(s.windows(2).filter(|w| w[0] == 1).all(|w| w[1] == 2));
    }

    #[test]
    fn zero_n_rejected() {
        assert!(generate(&ProcessModel::example1(), 0, 1).is_err());
    }

    #[test]
    fn oracle_dispatch() {
        let m = ProcessModel::example1();
        assert_eq!(oracle_memory(&m, &[1, 0, 0]).unwrap(), MemoryLength::Finite(3));
        assert_eq!(oracle_cond(&m, &[1]).unwrap(), vec![(0, 1.0), (1, 0.0)]);
        let z = ProcessModel::renewal(RenewalProcess::new(GapLaw::Zeta { s: 3.0 }).unwrap()).unwrap();
        assert_eq!(z.oracle(&[1]), Err(Error::NoOracle));
        assert!(!z.has_oracle());
    }
}
