//! Forward scheme driven by backward-path reconstructions and any backward estimator.

use std::collections::HashMap;

use crate::backward::chi_of;
use crate::scalar::Real;
use crate::sequence::{EstimatorParams, MemoryLength, Sample, Symbol};

use super::reconstruct::Reconstruction;
use super::{Scheme, StoppingDecision};

pub const DEFAULT_ANCHOR_CAP: usize = 512;

/// A backward memory-length estimator applied to `X_{-m}^0`.
pub trait BackwardEstimator {
    fn estimate(&self, sample: &Sample) -> MemoryLength;
}

impl<G: Fn(&Sample) -> MemoryLength> BackwardEstimator for G {
    fn estimate(&self, sample: &Sample) -> MemoryLength {
        self(sample)
    }
}

/// The shortest-passing-suffix estimator.
#[derive(Clone, Copy, Debug)]
pub struct Chi<F>(pub EstimatorParams<F>);

impl<F: Real> BackwardEstimator for Chi<F> {
    fn estimate(&self, sample: &Sample) -> MemoryLength {
        chi_of(sample, &self.0)
    }
}

/// Incremental state of the reconstruction scheme along one forward sample.
///
/// Call [`SchemeR::decide`] with growing prefixes `X_0^n`; recurrence scans
/// resume where the previous call stopped.
pub struct SchemeR<E> {
    params_epsilon: f64,
    estimator: E,
    anchor_cap: usize,
    anchors: Vec<Reconstruction>,
    rho_cache: HashMap<(usize, i64), usize>,
    last_n: Option<usize>,
}

impl<E: BackwardEstimator> SchemeR<E> {
    pub fn new<F: Real>(params: &EstimatorParams<F>, estimator: E) -> Self {
        Self {
            params_epsilon: params.epsilon.to_f64().unwrap_or(0.1),
            estimator,
            anchor_cap: DEFAULT_ANCHOR_CAP,
            anchors: Vec::new(),
            rho_cache: HashMap::new(),
            last_n: None,
        }
    }

    pub fn with_anchor_cap(mut self, cap: usize) -> Self {
        self.anchor_cap = cap;
        self
    }

    pub fn anchor_cap(&self) -> usize {
        self.anchor_cap
    }

    /// Memory estimate `rho^i_n` of anchor `i` at time `n`.
    fn rho(&mut self, data: &[Symbol], i: usize) -> usize {
        let n = data.len() - 1;
        while self.anchors.len() <= i {
            self.anchors.push(Reconstruction::new(self.anchors.len()));
        }
        let r = &mut self.anchors[i];
        r.extend(data, usize::MAX);
        let eta = r.eta(n);
        if eta < 0 {
            return 0;
        }
        if let Some(&rho) = self.rho_cache.get(&(i, eta)) {
            return rho;
        }
        let window = r.window(data, eta as usize).to_vec();
        let back = Sample::backward(window).expect("nonempty window");
        let rho = match self.estimator.estimate(&back) {
            MemoryLength::Finite(k) => k,
            MemoryLength::Unbounded => eta as usize,
        };
        self.rho_cache.insert((i, eta), rho);
        rho
    }

    /// Memory word `X~^0_{-rho+1}(i)` of anchor `i` at time `n`.
    fn word<'a>(&self, data: &'a [Symbol], i: usize, rho: usize) -> &'a [Symbol] {
        let r = &self.anchors[i];
        let eta = r.eta(data.len() - 1).max(0) as usize;
        let w = r.window(data, eta);
        &w[w.len() - rho..]
    }

    /// Decision at time `n = sample.n()`. Prefixes must be fed in increasing `n`.
    pub fn decide(&mut self, sample: &Sample) -> StoppingDecision {
        let data = sample.symbols();
        let n = sample.n();
        if let Some(prev) = self.last_n {
            assert!(n >= prev, "scheme R prefixes must grow");
        }
        self.last_n = Some(n);

        let target = (1.0 - self.params_epsilon / 2.0) * n as f64;
        let last_anchor = n.min(self.anchor_cap);
        let mut covered = vec![false; n + 1];
        let mut count = 0usize;
        let mut seen: Vec<Vec<Symbol>> = Vec::new();
        let mut words: Vec<(usize, usize)> = Vec::new();
        let mut theta = None;
        for i in 0..=last_anchor {
            let rho = self.rho(data, i);
            words.push((i, rho));
            let w = self.word(data, i, rho).to_vec();
            if !seen.contains(&w) {
                for j in rho..=n {
                    if !covered[j] && (rho == 0 || data[j + 1 - rho..=j] == w[..]) {
                        covered[j] = true;
                        count += 1;
                    }
                }
                seen.push(w);
            }
            if count as f64 >= target {
                theta = Some(i);
                break;
            }
        }
        let theta_capped = theta.is_none();
        let theta = theta.unwrap_or(last_anchor);

        let mut decision = StoppingDecision {
            n,
            in_stopping_set: covered[n],
            rho: None,
            kappa: None,
            theta,
            theta_capped,
            scheme: Scheme::R,
        };
        if decision.in_stopping_set {
            for &(i, rho) in &words[..=theta] {
                if rho <= n + 1 && data[n + 1 - rho..] == *self.word(data, i, rho) {
                    decision.kappa = Some(i);
                    decision.rho = Some(rho);
                    break;
                }
            }
            debug_assert!(decision.kappa.is_some());
        }
        decision
    }
}

/// One-shot decision at `n = sample.n()`.
pub fn decide_r<F: Real, E: BackwardEstimator>(
    sample: &Sample,
    params: &EstimatorParams<F>,
    estimator: E,
) -> StoppingDecision {
    SchemeR::new(params, estimator).decide(sample)
}
