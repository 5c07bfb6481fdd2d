//! Independent reference implementations for integration tests.
//!
//! Everything here rescans raw symbol arrays or enumerates hidden paths;
//! nothing goes through the index, the trie walk or the span basis.

#![allow(dead_code)]

use std::collections::HashMap;

use memlen::{MemoryLength, Symbol};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn ends_at(s: &[Symbol], w: &[Symbol], p: usize) -> bool {
    w.is_empty() || (p + 1 >= w.len() && s[p + 1 - w.len()..=p] == *w)
}

/// Context count of `w` over a backward sample stored oldest first:
/// ends at array positions `[|w| - 1, n - 1]`, `n` for the empty word.
pub fn naive_context(s: &[Symbol], w: &[Symbol]) -> usize {
    let n = s.len() - 1;
    if w.is_empty() {
        return n;
    }
    (w.len() - 1..n).filter(|&p| ends_at(s, w, p)).count()
}

pub fn naive_transition(s: &[Symbol], w: &[Symbol], x: Symbol) -> usize {
    let n = s.len() - 1;
    let lo = w.len().saturating_sub(1);
    if w.is_empty() {
        return (0..n).filter(|&p| s[p + 1] == x).count();
    }
    (lo..n).filter(|&p| ends_at(s, w, p) && s[p + 1] == x).count()
}

/// Frequency of `v`: ends at array positions `[|v| - 1, n]`.
pub fn naive_frequency(s: &[Symbol], v: &[Symbol]) -> usize {
    if v.len() > s.len() {
        return 0;
    }
    (v.len().saturating_sub(1)..s.len()).filter(|&p| ends_at(s, v, p)).count()
}

/// Discrepancy statistic by tallying, level by level, every `z·w` and `z·w·x`
/// that ends where `w` ends with a visible successor.
pub fn naive_delta_hat(s: &[Symbol], w: &[Symbol], gamma: f64) -> f64 {
    let n = s.len() - 1;
    let thr = (n as f64).powf(1.0 - gamma);
    let ctx = naive_context(s, w);
    if ctx == 0 {
        return 0.0;
    }
    let k = w.len();
    let ends: Vec<usize> = (k.saturating_sub(1)..n).filter(|&p| ends_at(s, w, p)).collect();
    let mut best: f64 = 0.0;
    for i in 1..=n {
        let mut zw_count: HashMap<&[Symbol], usize> = HashMap::new();
        let mut zwx_count: HashMap<&[Symbol], usize> = HashMap::new();
        for &p in ends.iter().filter(|&&p| p + 1 >= k + i) {
            *zw_count.entry(&s[p + 1 - k - i..=p]).or_default() += 1;
            *zwx_count.entry(&s[p + 1 - k - i..=p + 1]).or_default() += 1;
        }
        let mut any = false;
        for (zwx, &c) in &zwx_count {
            if (c as f64) <= thr {
                continue;
            }
            any = true;
            let x = zwx[zwx.len() - 1];
            let a = naive_transition(s, w, x) as f64 / ctx as f64;
            let b = c as f64 / zw_count[&zwx[..zwx.len() - 1]] as f64;
            best = best.max((a - b).abs());
        }
        // frequent strings have frequent suffixes, so an empty level ends the search
        if !any {
            break;
        }
    }
    best
}

pub fn naive_chi(s: &[Symbol], gamma: f64, beta: f64) -> usize {
    let n = s.len() - 1;
    let thr = (n as f64).powf(-beta);
    for k in 0..n {
        let w = &s[n + 1 - k..];
        if naive_delta_hat(s, w, gamma) <= thr {
            return k;
        }
    }
    n
}

/// A finite hidden chain given by exact rationals, for path enumeration.
pub struct ExactChain {
    pub p: Vec<Vec<BigRational>>,
    pub f: Vec<Symbol>,
    pub pi: Vec<BigRational>,
}

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

impl ExactChain {
    /// `0 -> 1 -> 2 -> {0, 1}` observed through `[state = 0]`.
    pub fn example1() -> Self {
        let (z, o, h) = (q(0, 1), q(1, 1), q(1, 2));
        Self {
            p: vec![
                vec![z.clone(), o.clone(), z.clone()],
                vec![z.clone(), z.clone(), o.clone()],
                vec![h.clone(), h.clone(), z.clone()],
            ],
            f: vec![1, 0, 0],
            pi: vec![q(1, 5), q(2, 5), q(2, 5)],
        }
    }

    /// Ladder chain with zero set `{0, 1}`: states `0, 1, 2` and the class `{s >= 3}`.
    pub fn ryabko_basic() -> Self {
        let (z, o, h) = (q(0, 1), q(1, 1), q(1, 2));
        Self {
            p: vec![
                vec![z.clone(), o.clone(), z.clone(), z.clone()],
                vec![z.clone(), z.clone(), o.clone(), z.clone()],
                vec![h.clone(), z.clone(), z.clone(), h.clone()],
                vec![h.clone(), z.clone(), z.clone(), h.clone()],
            ],
            f: vec![0, 0, 1, 1],
            // 1/4, 1/4, 2^{-2}, sum_{i >= 3} 2^{-i}
            pi: vec![q(1, 4), q(1, 4), q(1, 4), q(1, 4)],
        }
    }

    /// Probability of the word `w` (time order) by the forward recursion over hidden paths.
    pub fn prob(&self, w: &[Symbol]) -> BigRational {
        let m = self.f.len();
        if w.is_empty() {
            return BigRational::one();
        }
        let mut alpha: Vec<BigRational> = (0..m)
            .map(|s| if self.f[s] == w[0] { self.pi[s].clone() } else { BigRational::zero() })
            .collect();
        for &a in &w[1..] {
            let mut next = vec![BigRational::zero(); m];
            for (s, al) in alpha.iter().enumerate() {
                if al.is_zero() {
                    continue;
                }
                for t in 0..m {
                    if self.f[t] == a && !self.p[s][t].is_zero() {
                        next[t] += al * &self.p[s][t];
                    }
                }
            }
            alpha = next;
        }
        alpha.into_iter().sum()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.f.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn law(&self, w: &[Symbol]) -> Vec<BigRational> {
        let pw = self.prob(w);
        self.symbols()
            .iter()
            .map(|&y| {
                let mut wy = w.to_vec();
                wy.push(y);
                self.prob(&wy) / &pw
            })
            .collect()
    }

    /// Memory length by the definition: the shortest suffix `w` of `past` such
    /// that every positive-probability `z·w` with `1 <= |z| <= depth` has the
    /// same next-symbol law as `w`. `None` if the past is impossible.
    pub fn brute_memory(&self, past: &[Symbol], depth: usize) -> Option<(MemoryLength, Vec<BigRational>)> {
        if self.prob(past).is_zero() {
            return None;
        }
        let alphabet = self.symbols();
        for k in 0..=past.len() {
            let w = &past[past.len() - k..];
            let base = self.law(w);
            let mut ok = true;
            let mut frontier: Vec<Vec<Symbol>> = vec![w.to_vec()];
            'depth: for _ in 0..depth {
                let mut next = Vec::new();
                for zw in &frontier {
                    for &a in &alphabet {
                        let mut ext = vec![a];
                        ext.extend_from_slice(zw);
                        if self.prob(&ext).is_zero() {
                            continue;
                        }
                        if self.law(&ext) != base {
                            ok = false;
                            break 'depth;
                        }
                        next.push(ext);
                    }
                }
                frontier = next;
            }
            if ok {
                return Some((MemoryLength::Finite(k), base));
            }
        }
        Some((MemoryLength::Unbounded, self.law(past)))
    }
}

/// All words over `alphabet` of length `0..=max_len`.
pub fn all_words(alphabet: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &level {
            for &a in alphabet {
                let mut v: Vec<Symbol> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}
