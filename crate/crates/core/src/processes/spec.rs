//! JSON model specifications.
//!
//! ```json
//! {"type": "markov", "order": 2, "alphabet": 3, "rows": [[0.9, 0.05, 0.05], ...], "rng": "chacha8"}
//! {"type": "ryabko", "zeros": {"kind": "periodic", "modulus": 3, "residue": 0}}
//! {"type": "renewal", "law": {"kind": "geometric", "p": 0.3}}
//! ```

use serde::{Deserialize, Serialize};

use super::rng::RNG_ID;
use super::{
    example1, GapLaw, HiddenFunctionModel, MarkovKernel, PerturbedChain, ProcessModel, RenewalProcess,
    RyabkoProcess, ZeroSet,
};
use crate::error::{Error, Result};
use crate::sequence::Symbol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ModelKind {
    Markov {
        order: usize,
        alphabet: usize,
        rows: Vec<Vec<f64>>,
    },
    /// Order-0 kernel.
    Iid { law: Vec<f64> },
    Hidden {
        transition: Vec<Vec<f64>>,
        observation: Vec<Symbol>,
    },
    /// The parity chain `0 -> 1 -> 2 -> {0, 1}` observed through `[state = 0]`.
    Example1,
    Perturbed { schedule: Vec<u64>, stage: i64 },
    Ryabko { zeros: ZeroSet },
    Renewal { law: GapLaw },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub model: ModelKind,
    #[serde(default = "default_rng")]
    pub rng: String,
}

fn default_rng() -> String {
    RNG_ID.to_string()
}

pub const PRESETS: &[&str] = &[
    "example1",
    "iid",
    "ternary-order2",
    "ryabko",
    "ryabko-periodic",
    "base-chain",
    "perturbed",
    "renewal-geometric",
    "renewal-zeta",
];

impl ModelSpec {
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            rng: default_rng(),
        }
    }

    /// Named models; see [`PRESETS`].
    pub fn preset(name: &str) -> Option<Self> {
        let kind = match name {
            "example1" => ModelKind::Example1,
            "iid" => ModelKind::Iid { law: vec![0.5, 0.5] },
            "ternary-order2" => {
                let k = MarkovKernel::ternary_order2();
                ModelKind::Markov {
                    order: k.order(),
                    alphabet: k.alphabet(),
                    rows: k.rows().to_vec(),
                }
            }
            "ryabko" => ModelKind::Ryabko {
                zeros: ZeroSet::Finite { extra: vec![] },
            },
            "ryabko-periodic" => ModelKind::Ryabko {
                zeros: ZeroSet::Periodic { modulus: 3, residue: 0 },
            },
            "base-chain" => ModelKind::Perturbed {
                schedule: vec![],
                stage: -1,
            },
            "perturbed" => {
                let c = PerturbedChain::preset(4, 3).expect("valid preset");
                ModelKind::Perturbed {
                    schedule: c.schedule().to_vec(),
                    stage: c.stage(),
                }
            }
            "renewal-geometric" => ModelKind::Renewal {
                law: GapLaw::Geometric { p: 0.3 },
            },
            "renewal-zeta" => ModelKind::Renewal {
                law: GapLaw::Zeta { s: 3.5 },
            },
            _ => return None,
        };
        Some(Self::new(kind))
    }

    pub fn build(&self) -> Result<ProcessModel> {
        if self.rng != RNG_ID {
            return Err(Error::InvalidModel(format!(
                "unknown rng {:?}; only {RNG_ID:?} is supported",
                self.rng
            )));
        }
        match &self.model {
            ModelKind::Markov { order, alphabet, rows } => {
                ProcessModel::markov(MarkovKernel::new(*order, *alphabet, rows.clone())?)
            }
            ModelKind::Iid { law } => ProcessModel::markov(MarkovKernel::iid(law.clone())?),
            ModelKind::Hidden {
                transition,
                observation,
            } => Ok(ProcessModel::Hidden(HiddenFunctionModel::new(
                transition.clone(),
                observation.clone(),
            )?)),
            ModelKind::Example1 => Ok(ProcessModel::Hidden(example1())),
            ModelKind::Perturbed { schedule, stage } => {
                Ok(ProcessModel::Perturbed(PerturbedChain::new(schedule.clone(), *stage)?))
            }
            ModelKind::Ryabko { zeros } => Ok(ProcessModel::ryabko(RyabkoProcess::new(zeros.clone())?)),
            ModelKind::Renewal { law } => ProcessModel::renewal(RenewalProcess::new(law.clone())?),
        }
    }
}
