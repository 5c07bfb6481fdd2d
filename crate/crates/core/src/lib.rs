//! Universal estimation of the pathwise memory length of finitarily Markovian processes.

pub mod backward;
pub mod condprob;
pub mod counting;
pub mod error;
pub mod forward;
pub mod io;
pub mod processes;
pub mod scalar;
pub mod sequence;

pub use error::{Error, Result};
pub use scalar::{Field, Real};
pub use sequence::{shift_view, suffix, EstimatorParams, MemoryLength, Orientation, Sample, Symbol, Word};

pub type Params = EstimatorParams<f64>;
pub type TestVerdict = backward::TestVerdict<f64>;
pub type CondProbEstimate = condprob::CondProbEstimate<f64>;
pub type MarkovEstimate = condprob::MarkovEstimate<f64>;
pub type HiddenModel = processes::HiddenFunctionModel<f64>;
pub type ExactHiddenModel = processes::HiddenFunctionModel<num_rational::BigRational>;
pub type OracleAnswer = processes::OracleAnswer<f64>;
pub type ExactOracleAnswer = processes::OracleAnswer<num_rational::BigRational>;

pub use condprob::Method;
pub use forward::{Scheme, StoppingDecision};
pub use processes::{ModelSpec, ProcessModel};
