//! Forward memory-length estimation from `X_0^n` along stopping times.
//!
//! Two schemes are provided. [`scheme_p`] lists words so that suffixes come
//! first and commits to the shortest passing suffix once the passing words
//! cover a `1 - epsilon/2` fraction of the sample. [`scheme_r`] rebuilds
//! backward paths from recurrence times and feeds them to a backward
//! estimator.

use serde::{Deserialize, Serialize};

pub mod reconstruct;
pub mod scheme_p;
pub mod scheme_r;
pub mod wordlist;

pub use reconstruct::{eta, zeta_times, Reconstruction};
pub use scheme_p::{decide_p, decide_p_indexed, forward_index, occurrence_set, ptest};
pub use scheme_r::{decide_r, BackwardEstimator, Chi, SchemeR, DEFAULT_ANCHOR_CAP};
pub use wordlist::{word_order, WordList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    P,
    R,
}

/// Verdict of a forward scheme at time `n`.
///
/// `theta` indexes the scheme's list (words occurring in the sample for
/// scheme P, anchors for scheme R); `theta_capped` marks that the coverage
/// target was not reached and the whole list was used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingDecision {
    pub n: usize,
    pub in_stopping_set: bool,
    pub rho: Option<usize>,
    pub kappa: Option<usize>,
    pub theta: usize,
    pub theta_capped: bool,
    pub scheme: Scheme,
}
