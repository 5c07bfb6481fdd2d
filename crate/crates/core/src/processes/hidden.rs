//! Functions of a finite Markov chain and their exact memory oracle.
//!
//! With hidden kernel `P`, observation map `f`, `D_a = diag[f(s) = a]` and
//! stationary law `pi`, the probability of `z·w·y` is `alpha_z · M_w P D_y 1`
//! where `alpha_z = pi D_{z_1} P D_{z_2} ... P D_{z_i}` and
//! `M_w = P D_{w_1} ... P D_{w_k}`. A word `w` is a memory word iff
//! `b · (g_y - c_y h) = 0` for every `b` in the span of all `alpha_z`, where
//! `h = M_w 1`, `g_y = M_w P D_y 1` and `c_y = pi·g_y / pi·h`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::linalg::{dot, normalize, stationary, Basis};
use super::OracleAnswer;
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::sequence::{MemoryLength, Symbol};

#[derive(Clone, Debug)]
pub struct HiddenFunctionModel<T> {
    transition: Vec<Vec<T>>,
    observation: Vec<Symbol>,
    stationary: Vec<T>,
    symbols: Vec<Symbol>,
    span: Vec<Vec<T>>,
    sampler: Vec<WeightedIndex<f64>>,
    initial: WeightedIndex<f64>,
}

impl<T: Field> HiddenFunctionModel<T> {
    pub fn new(transition: Vec<Vec<T>>, observation: Vec<Symbol>) -> Result<Self> {
        let s = transition.len();
        if s == 0 || observation.len() != s {
            return Err(Error::InvalidModel(format!(
                "{} hidden states but {} observations",
                s,
                observation.len()
            )));
        }
        for (i, row) in transition.iter().enumerate() {
            if row.len() != s {
                return Err(Error::InvalidModel(format!("row {i} has {} entries, expected {s}", row.len())));
            }
            if row.iter().any(|x| *x < T::zero()) {
                return Err(Error::InvalidModel(format!("row {i} has a negative entry")));
            }
            let sum = row.iter().fold(T::zero(), |a, x| a + x.clone());
            if !(sum - T::one()).negligible() {
                return Err(Error::InvalidModel(format!("row {i} does not sum to 1")));
            }
        }
        let stationary = stationary(&transition)
            .ok_or_else(|| Error::InvalidModel("stationary law is not unique".into()))?;
        let mut symbols = observation.clone();
        symbols.sort_unstable();
        symbols.dedup();
        let sampler = transition
            .iter()
            .map(|row| WeightedIndex::new(row.iter().map(|x| x.approx())).expect("stochastic row"))
            .collect();
        let initial = WeightedIndex::new(stationary.iter().map(|x| x.approx().max(0.0)))
            .map_err(|e| Error::InvalidModel(e.to_string()))?;
        let mut m = Self {
            transition,
            observation,
            stationary,
            symbols,
            span: Vec::new(),
            sampler,
            initial,
        };
        m.span = m.prefix_span();
        Ok(m)
    }

    pub fn states(&self) -> usize {
        self.transition.len()
    }

    pub fn transition(&self) -> &[Vec<T>] {
        &self.transition
    }

    pub fn observation(&self) -> &[Symbol] {
        &self.observation
    }

    pub fn stationary(&self) -> &[T] {
        &self.stationary
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// `v P D_a` for a row vector `v`.
    fn step_row(&self, v: &[T], a: Symbol) -> Vec<T> {
        let n = self.states();
        let mut out = vec![T::zero(); n];
        for (s, vs) in v.iter().enumerate() {
            if vs.negligible() {
                continue;
            }
            for (t, p) in self.transition[s].iter().enumerate() {
                if self.observation[t] == a && !p.negligible() {
                    out[t] = out[t].clone() + vs.clone() * p.clone();
                }
            }
        }
        out
    }

    /// `P D_a u` for a column vector `u`.
    fn step_col(&self, u: &[T], a: Symbol) -> Vec<T> {
        self.transition
            .iter()
            .map(|row| {
                row.iter()
                    .zip(u)
                    .zip(&self.observation)
                    .filter(|(_, &f)| f == a)
                    .fold(T::zero(), |acc, ((p, x), _)| acc + p.clone() * x.clone())
            })
            .collect()
    }

    fn prefix_span(&self) -> Vec<Vec<T>> {
        let mut basis = Basis::default();
        let mut queue = Vec::new();
        if let Some(v) = basis.insert(self.stationary.clone()) {
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for &a in &self.symbols {
                if let Some(r) = basis.insert(self.step_row(&v, a)) {
                    queue.push(r);
                }
            }
        }
        basis.vectors().cloned().collect()
    }

    /// Dimension of the span of the prefix vectors `alpha_z`.
    pub fn span_dim(&self) -> usize {
        self.span.len()
    }

    /// Positive probability of `past` under the stationary process.
    pub fn is_possible(&self, past: &[Symbol]) -> bool {
        let n = self.states();
        let mut support: Vec<bool> = (0..n)
            .map(|s| !self.stationary[s].negligible() && past.first().is_none_or(|&a| self.observation[s] == a))
            .collect();
        for &a in past.iter().skip(1) {
            let mut next = vec![false; n];
            for s in (0..n).filter(|&s| support[s]) {
                for (t, p) in self.transition[s].iter().enumerate() {
                    if self.observation[t] == a && !p.negligible() {
                        next[t] = true;
                    }
                }
            }
            support = next;
        }
        support.iter().any(|&b| b)
    }

    fn laws(&self, h: &[T], g: &[Vec<T>]) -> Vec<(Symbol, T)> {
        let den = dot(&self.stationary, h);
        self.symbols
            .iter()
            .zip(g)
            .map(|(&y, gy)| (y, dot(&self.stationary, gy) / den.clone()))
            .collect()
    }

    fn is_memory(&self, h: &[T], g: &[Vec<T>]) -> bool {
        let ph = dot(&self.stationary, h);
        if ph.negligible() {
            return false;
        }
        g.iter().all(|gy| {
            let pg = dot(&self.stationary, gy);
            self.span.iter().all(|b| {
                let lhs = dot(b, gy) * ph.clone() - pg.clone() * dot(b, h);
                lhs.negligible()
            })
        })
    }

    /// Memory length of the path ending in `past` (time order) and the next-symbol law.
    ///
    /// `Unbounded` when no suffix of `past` is a memory word; the law is then
    /// conditioned on the whole of `past`.
    pub fn oracle(&self, past: &[Symbol]) -> Result<OracleAnswer<T>> {
        if !self.is_possible(past) {
            return Err(Error::ImpossiblePast);
        }
        Ok(self.oracle_trusted(past))
    }

    /// [`Self::oracle`] without the positivity check on the whole past.
    ///
    /// For pasts known to be possible (generated paths) the cost is linear
    /// in the memory length rather than in the past.
    pub fn oracle_trusted(&self, past: &[Symbol]) -> OracleAnswer<T> {
        let n = self.states();
        let mut h = vec![T::one(); n];
        let mut g: Vec<Vec<T>> = self
            .symbols
            .iter()
            .map(|&y| self.step_col(&h, y))
            .collect();
        let m = past.len();
        for k in 0..=m {
            if k > 0 {
                let a = past[m - k];
                h = self.step_col(&h, a);
                for gy in g.iter_mut() {
                    *gy = self.step_col(gy, a);
                }
                // common rescaling keeps floating point away from underflow
                let mut scale = h.clone();
                if normalize(&mut scale) {
                    let idx = h.iter().position(|x| !x.negligible()).unwrap_or(0);
                    let factor = h[idx].clone() / scale[idx].clone();
                    h = scale;
                    for gy in g.iter_mut() {
                        for x in gy.iter_mut() {
                            *x = x.clone() / factor.clone();
                        }
                    }
                }
            }
            if self.is_memory(&h, &g) {
                return OracleAnswer {
                    memory: MemoryLength::Finite(k),
                    law: self.laws(&h, &g),
                };
            }
        }
        OracleAnswer {
            memory: MemoryLength::Unbounded,
            law: self.laws(&h, &g),
        }
    }

    /// Is `w` (time order) a memory word?
    pub fn is_memory_word(&self, w: &[Symbol]) -> bool {
        let n = self.states();
        let mut h = vec![T::one(); n];
        let mut g: Vec<Vec<T>> = self.symbols.iter().map(|&y| self.step_col(&h, y)).collect();
        for &a in w.iter().rev() {
            h = self.step_col(&h, a);
            for gy in g.iter_mut() {
                *gy = self.step_col(gy, a);
            }
        }
        self.is_memory(&h, &g)
    }

    /// Probability of the word `w` under the stationary process.
    pub fn word_probability(&self, w: &[Symbol]) -> T {
        let mut h = vec![T::one(); self.states()];
        for &a in w.iter().rev() {
            h = self.step_col(&h, a);
        }
        dot(&self.stationary, &h)
    }

    pub fn sample_path<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        let mut s = self.initial.sample(rng);
        out.push(self.observation[s]);
        for _ in 1..len {
            s = self.sampler[s].sample(rng);
            out.push(self.observation[s]);
        }
        out
    }

    /// Hidden path and observations, for tests that need the states.
    pub fn sample_states<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<usize> {
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        let mut s = self.initial.sample(rng);
        out.push(s);
        for _ in 1..len {
            s = self.sampler[s].sample(rng);
            out.push(s);
        }
        out
    }
}

/// The three-state chain `0 -> 1 -> 2 -> {0, 1}` observed through `[state = 0]`.
pub fn example1<T: Field>() -> HiddenFunctionModel<T> {
    let (z, o, h) = (T::zero(), T::one(), T::from_ratio(1, 2));
    HiddenFunctionModel::new(
        vec![
            vec![z.clone(), o.clone(), z.clone()],
            vec![z.clone(), z.clone(), o],
            vec![h.clone(), h, z],
        ],
        vec![1, 0, 0],
    )
    .expect("valid model")
}
