//! Forward scheme built on the shift-conjugated memory-word test.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::backward::{ntest, TestVerdict, Verdict};
use crate::counting::{CountIndex, View};
use crate::error::Result;
use crate::scalar::Real;
use crate::sequence::{shift_view, suffix, EstimatorParams, Sample, Word};

use super::{Scheme, StoppingDecision};

/// Index over `X_0^n` viewed as `X_{-n}^0`.
pub fn forward_index<F: Real>(sample: &Sample, gamma: F) -> Result<CountIndex> {
    let view = shift_view(sample, sample.n())?;
    Ok(CountIndex::for_gamma(&view, gamma))
}

/// The memory-word test evaluated on `X_0^n` through the left shift.
pub fn ptest<F: Real>(sample: &Sample, w: &Word, params: &EstimatorParams<F>) -> Result<TestVerdict<F>> {
    let index = forward_index(sample, params.gamma)?;
    Ok(ntest(&index, w, params))
}

/// All `j` in `[|w|-1, n]` at which `w` ends; `{0, ..., n}` for the empty word.
pub fn occurrence_set(sample: &Sample, w: &Word) -> Vec<usize> {
    let s = sample.symbols();
    (w.len().saturating_sub(1)..s.len())
        .filter(|&j| w.matches_at(s, j))
        .collect()
}

/// Distinct words of length `m` occurring in `X_0^n`, sorted.
pub(crate) fn occurring_words(index: &CountIndex, m: usize) -> Vec<Word> {
    let s = index.symbols();
    if m > s.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack: Vec<View> = vec![index.root()];
    while let Some(v) = stack.pop() {
        if index.depth(&v) == m {
            if !index.positions(&v).is_empty() {
                out.push(index.word_of(&v));
            }
            continue;
        }
        for (_, c) in index.children(&v) {
            stack.push(c);
        }
    }
    out.push(Word::from(&s[s.len() - m..]));
    out.sort_by(|a, b| a.letters().cmp(b.letters()));
    out.dedup();
    out
}

/// Position of an occurring word in the list restricted to words occurring in `X_0^n`.
pub(crate) fn observed_rank(index: &CountIndex, w: &Word) -> usize {
    let shorter: usize = (0..w.len()).map(|m| occurring_words(index, m).len()).sum();
    let same = occurring_words(index, w.len());
    shorter + same.partition_point(|u| u.letters() < w.letters())
}

fn list_len(index: &CountIndex, max_len: usize) -> usize {
    (0..=max_len).map(|m| occurring_words(index, m).len()).sum()
}

/// Membership in the stopping set and the memory estimate at time `n`.
pub fn decide_p<F: Real>(sample: &Sample, params: &EstimatorParams<F>) -> Result<StoppingDecision> {
    let index = forward_index(sample, params.gamma)?;
    Ok(decide_p_indexed(&index, params))
}

pub fn decide_p_indexed<F: Real>(index: &CountIndex, params: &EstimatorParams<F>) -> StoppingDecision {
    let n = index.n();
    let s = index.symbols();
    let l_star = index.max_frequent_length(params.gamma);
    let target = (F::one() - params.epsilon / F::lit(2.0)) * F::from_count(n + 1);
    let mut verdicts: HashMap<Word, Verdict> = HashMap::new();

    let mut covered = 0usize;
    let mut theta_word: Option<Word> = None;
    let root = Word::empty();
    let v0 = ntest(index, &root, params).verdict;
    verdicts.insert(root.clone(), v0);
    if v0 == Verdict::Yes {
        covered = n + 1;
        if F::from_count(covered) >= target {
            theta_word = Some(root);
        }
    }
    // words all of whose proper suffixes failed, level by level
    let mut failed: Vec<Word> = if v0 == Verdict::No { vec![Word::empty()] } else { Vec::new() };
    let mut level = 1;
    while theta_word.is_none() && level <= l_star && !failed.is_empty() {
        let mut frontier: Vec<(Word, usize)> = Vec::new();
        for u in &failed {
            if let Some(v) = index.locate(u.letters()) {
                for (a, child) in index.children(&v) {
                    let w = u.prepend(a);
                    let at_end = usize::from(w.matches_at(s, n));
                    frontier.push((w, index.positions(&child).len() + at_end));
                }
            }
            let tail = Word::from(&s[s.len().saturating_sub(level)..]);
            if tail.len() == level && tail.suffix(level - 1) == *u && index.count_context(&tail) == 0 {
                frontier.push((tail, 1));
            }
        }
        frontier.sort_by(|a, b| a.0.letters().cmp(b.0.letters()));
        let mut next = Vec::new();
        for (w, occ) in frontier {
            let v = ntest(index, &w, params).verdict;
            verdicts.insert(w.clone(), v);
            if v == Verdict::Yes {
                covered += occ;
                if F::from_count(covered) >= target {
                    theta_word = Some(w);
                    break;
                }
            } else {
                next.push(w);
            }
        }
        failed = next;
        level += 1;
    }

    let (theta, theta_capped) = match &theta_word {
        Some(w) => (observed_rank(index, w), false),
        None => (list_len(index, l_star).saturating_sub(1), true),
    };

    // shortest suffix of X_0^n passing the test
    let sample = index.sample();
    let mut hit: Option<Word> = None;
    for k in 0..=l_star.min(n + 1) {
        let w = suffix(sample, k).expect("k <= n + 1");
        let v = *verdicts
            .entry(w.clone())
            .or_insert_with(|| ntest(index, &w, params).verdict);
        if v == Verdict::Yes {
            hit = Some(w);
            break;
        }
    }
    let hit = hit.filter(|w| match &theta_word {
        Some(t) => w.list_order(t) != Ordering::Greater,
        None => true,
    });
    match hit {
        Some(w) => StoppingDecision {
            n,
            in_stopping_set: true,
            rho: Some(w.len()),
            kappa: Some(observed_rank(index, &w)),
            theta,
            theta_capped,
            scheme: Scheme::P,
        },
        None => StoppingDecision {
            n,
            in_stopping_set: false,
            rho: None,
            kappa: None,
            theta,
            theta_capped,
            scheme: Scheme::P,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::wordlist::WordList;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn occurrence_examples() {
        let s = Sample::forward(vec![0, 1, 0, 1, 0]).unwrap();
        assert_eq!(occurrence_set(&s, &Word::new(vec![0, 1])), vec![1, 3]);
        assert_eq!(occurrence_set(&s, &Word::empty()), vec![0, 1, 2, 3, 4]);
        assert!(occurrence_set(&s, &Word::new(vec![2])).is_empty());
    }

    #[test]
    fn ptest_is_ntest_of_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<u32> = (0..3000).map(|_| rng.gen_range(0..3)).collect();
        let f = Sample::forward(v).unwrap();
        let p = EstimatorParams::<f64>::default();
        let b = shift_view(&f, f.n()).unwrap();
        let ix = CountIndex::new(&b);
        for w in WordList::new(vec![0, 1, 2]).iter().take(40) {
            assert_eq!(ptest(&f, &w, &p).unwrap(), ntest(&ix, &w, &p));
        }
    }

    #[test]
    fn observed_rank_matches_enumeration() {
        let s = Sample::forward(vec![0, 1, 1, 0, 2, 0, 1, 1, 2, 2, 0]).unwrap();
        let ix = forward_index(&s, 0.5).unwrap();
        let mut listed: Vec<Word> = WordList::observed(s.symbols())
            .iter()
            .take_while(|w| w.len() <= 4)
            .filter(|w| w.is_empty() || !occurrence_set(&s, w).is_empty())
            .collect();
        listed.sort_by(|a, b| a.list_order(b));
        for (i, w) in listed.iter().enumerate() {
            assert_eq!(observed_rank(&ix, w), i, "{w:?}");
        }
    }

    #[test]
    fn iid_takes_empty_word() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let v: Vec<u32> = (0..20_001).map(|_| rng.gen_range(0..4)).collect();
        let d = decide_p(&Sample::forward(v).unwrap(), &EstimatorParams::<f64>::default()).unwrap();
        assert!(d.in_stopping_set);
        assert_eq!((d.rho, d.kappa, d.theta), (Some(0), Some(0), 0));
    }

    #[test]
    fn alternating_takes_one_symbol() {
        let v: Vec<u32> = (0..5001).map(|i| (i % 2) as u32).collect();
        let d = decide_p(&Sample::forward(v).unwrap(), &EstimatorParams::<f64>::default()).unwrap();
        assert!(d.in_stopping_set);
        assert_eq!(d.rho, Some(1));
        assert_eq!(d.kappa, Some(1));
        assert_eq!(d.theta, 2);
    }
}
