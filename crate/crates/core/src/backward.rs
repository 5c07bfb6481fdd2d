//! Memory-word test on a backward sample and the backward memory-length estimator.

use crate::counting::CountIndex;
use crate::scalar::Real;
use crate::sequence::{suffix, EstimatorParams, MemoryLength, Sample, Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestVerdict<F> {
    pub verdict: Verdict,
    pub delta_hat: F,
    pub threshold: F,
    /// `(z, x)` attaining the maximal discrepancy, if any extension was frequent.
    pub max_witness: Option<(Word, Symbol)>,
}

impl<F> TestVerdict<F> {
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

/// Maximal discrepancy `|p̂(x|w) - p̂(x|z·w)|` over frequent `z·w·x`, `|z| >= 1`.
///
/// Zero when no extension is frequent.
pub fn delta_hat<F: Real>(index: &CountIndex, w: &Word, gamma: F) -> (F, Option<(Word, Symbol)>) {
    let n = index.n();
    let thr = F::from_count(n).powf(F::one() - gamma);
    let Some(base) = index.locate(w.letters()) else {
        return (F::zero(), None);
    };
    let base_ctx = index.positions(&base).len();
    let base_succ = index.succ(&base).into_owned();
    let k = w.len();
    let mut best = F::zero();
    let mut arg: Option<(crate::counting::View, Symbol)> = None;
    index.walk_frequent(&base, thr, n, &mut |_, view, x, c| {
        assert!(base_ctx > 0, "frequent extension of an unseen context");
        let parent = base_succ
            .binary_search_by_key(&x, |&(s, _)| s)
            .map(|i| base_succ[i].1 as usize)
            .expect("successor of an extension is a successor of its suffix");
        let ext_ctx = index.positions(view).len();
        let d = (F::ratio(parent, base_ctx) - F::ratio(c, ext_ctx)).abs();
        if arg.is_none() || d > best {
            best = d;
            arg = Some((view.clone(), x));
        }
    });
    let witness = arg.map(|(view, x)| {
        let zw = index.word_of(&view);
        let z = Word::from(&zw.letters()[..zw.len() - k]);
        (z, x)
    });
    (best, witness)
}

/// YES iff `delta_hat <= n^{-beta}`.
pub fn ntest<F: Real>(index: &CountIndex, w: &Word, params: &EstimatorParams<F>) -> TestVerdict<F> {
    let threshold = params.test_threshold(index.n());
    let (d, max_witness) = delta_hat(index, w, params.gamma);
    TestVerdict {
        verdict: if d <= threshold { Verdict::Yes } else { Verdict::No },
        delta_hat: d,
        threshold,
        max_witness,
    }
}

/// Smallest `k < n` whose length-`k` suffix passes [`ntest`]; `n` if none does.
pub fn chi<F: Real>(index: &CountIndex, params: &EstimatorParams<F>) -> MemoryLength {
    let n = index.n();
    let sample = index.sample();
    for k in 0..n {
        let w = suffix(sample, k).expect("k < sample length");
        if ntest(index, &w, params).is_yes() {
            return MemoryLength::Finite(k);
        }
    }
    MemoryLength::Finite(n)
}

/// Builds the index and runs [`chi`].
pub fn chi_of<F: Real>(sample: &Sample, params: &EstimatorParams<F>) -> MemoryLength {
    let index = CountIndex::for_gamma(sample, params.gamma);
    chi(&index, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alternating(len: usize) -> Sample {
        let v: Vec<Symbol> = (0..len).map(|i| ((len - 1 - i) % 2) as Symbol).collect();
        Sample::backward(v).unwrap()
    }

    #[test]
    fn alternating_zero_has_no_discrepancy() {
        let s = alternating(1001);
        let ix = CountIndex::new(&s);
        let (d, _) = delta_hat(&ix, &Word::new(vec![0]), 0.5);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn empty_max_is_zero() {
        let s = Sample::backward(vec![0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let ix = CountIndex::new(&s);
        assert_eq!(delta_hat(&ix, &Word::new(vec![3]), 0.5), (0.0, None));
        assert!(ntest(&ix, &Word::new(vec![3]), &EstimatorParams::<f64>::default()).is_yes());
    }

    #[test]
    fn alternating_memory_is_one() {
        let s = alternating(2001);
        assert_eq!(s.get(0), Some(0));
        let p = EstimatorParams::<f64>::default();
        assert_eq!(chi_of(&s, &p), MemoryLength::Finite(1));
        let ix = CountIndex::new(&s);
        let v = ntest(&ix, &Word::empty(), &p);
        assert_eq!(v.verdict, Verdict::No);
        assert!(v.max_witness.is_some());
    }

    #[test]
    fn iid_memory_is_zero() {
        // the margin is only a few standard deviations at this n, so ask for a majority
        let hits = (0..5)
            .filter(|&seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v: Vec<Symbol> = (0..100_001).map(|_| rng.gen_range(0..2)).collect();
                let s = Sample::backward(v).unwrap();
                chi_of(&s, &EstimatorParams::<f64>::default()) == MemoryLength::Finite(0)
            })
            .count();
        assert!(hits >= 3, "{hits}/5");
    }

    #[test]
    fn ties_pass() {
        // n = 1: threshold 1^{-beta} = 1 >= any discrepancy
        let s = Sample::backward(vec![0, 1]).unwrap();
        let ix = CountIndex::new(&s);
        assert!(ntest(&ix, &Word::empty(), &EstimatorParams::<f64>::default()).is_yes());
        assert_eq!(chi(&ix, &EstimatorParams::<f64>::default()), MemoryLength::Finite(0));
        let one = Sample::backward(vec![4]).unwrap();
        assert_eq!(chi_of(&one, &EstimatorParams::<f64>::default()), MemoryLength::Finite(0));
    }

    #[test]
    fn works_in_single_precision() {
        let s = alternating(2001);
        let p = EstimatorParams::<f32>::default();
        assert_eq!(chi_of(&s, &p), MemoryLength::Finite(1));
    }
}
