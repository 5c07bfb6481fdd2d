mod common;

use memlen::backward::{chi, delta_hat};
use memlen::counting::CountIndex;
use memlen::processes::{example1, RyabkoProcess};
use memlen::{Error, MemoryLength, Params, Sample, Symbol, Word};
use num_rational::BigRational;
use proptest::prelude::*;

use common::{all_words, naive_chi, naive_context, naive_delta_hat, naive_frequency, naive_transition, ExactChain};

fn sample_strategy() -> impl Strategy<Value = Vec<Symbol>> {
    (1u32..=3).prop_flat_map(|a| prop::collection::vec(0..a, 2..300))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_counts_equal_rescans(v in sample_strategy(), w in prop::collection::vec(0u32..3, 0..6), cutoff in 0.0f64..20.0) {
        let index = CountIndex::with_cutoff(&Sample::backward(v.clone()).unwrap(), cutoff);
        let word = Word::new(w.clone());
        prop_assert_eq!(index.count_context(&word), naive_context(&v, &w));
        prop_assert_eq!(index.frequency(&word), naive_frequency(&v, &w));
        for x in 0..3 {
            prop_assert_eq!(index.count_transition(&word, x), naive_transition(&v, &w, x));
        }
    }

    #[test]
    fn delta_hat_and_chi_equal_level_tallies(v in sample_strategy(), k in 0usize..4) {
        let p = Params::default();
        let s = Sample::backward(v.clone()).unwrap();
        let index = CountIndex::for_gamma(&s, p.gamma);
        let k = k.min(v.len() - 1);
        let w = &v[v.len() - k..];
        let (d, _) = delta_hat(&index, &Word::new(w.to_vec()), p.gamma);
        prop_assert!((d - naive_delta_hat(&v, w, p.gamma)).abs() < 1e-12);
        prop_assert_eq!(chi(&index, &p), MemoryLength::Finite(naive_chi(&v, p.gamma, p.beta)));
    }
}

#[test]
fn exact_oracles_equal_path_enumeration() {
    let cases = [
        (ExactChain::example1(), example1::<BigRational>()),
        (ExactChain::ryabko_basic(), RyabkoProcess::basic().lumped::<BigRational>().0),
    ];
    for (brute, model) in &cases {
        for past in all_words(&[0, 1], 5) {
            match (brute.brute_memory(&past, 7), model.oracle(&past)) {
                (None, Err(Error::ImpossiblePast)) => {}
                (Some((k, law)), Ok(a)) => {
                    assert_eq!(a.memory, k, "{past:?}");
                    let got: Vec<BigRational> = a.law.iter().map(|(_, p)| p.clone()).collect();
                    assert_eq!(got, law, "{past:?}");
                }
                (e, g) => panic!("{past:?}: enumeration {e:?}, oracle {g:?}"),
            }
        }
    }
}

#[test]
fn stationary_word_probabilities_match_forward_recursion() {
    let brute = ExactChain::example1();
    let model = example1::<BigRational>();
    for w in all_words(&[0, 1], 6) {
        assert_eq!(model.word_probability(&w), brute.prob(&w), "{w:?}");
    }
}
