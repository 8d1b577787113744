mod support;

use corpuslab_core::ngramlm::{self, Level, LmConfig, Smoothing, END, UNK};
use corpuslab_core::{Corpus, Sentence};
use proptest::prelude::*;
use support::{check_normalized, corpus_of, ids, BruteKn};

#[test]
fn kneser_ney_matches_brute_force() {
    let sents = vec![
        vec!["a", "b", "a", "c"],
        vec!["b", "b", "c", "a", "a"],
        vec!["c"],
        vec!["a", "c", "b", "a"],
    ];
    let c = corpus_of(&sents);
    for order in 1..=3 {
        let brute = BruteKn::new(&sents, order, 0.6);
        let cfg = LmConfig::new(Level::Word, order, Smoothing::KneserNey).with_discount(0.6);
        let m = ngramlm::train(&c, cfg).unwrap();
        let mut hist: Vec<Vec<String>> = vec![vec!["<s>".to_string(); order - 1]];
        for g in brute.grams(order) {
            hist.push(g[..order - 1].to_vec());
        }
        hist.push(vec!["zz".to_string(); order - 1]);
        for h in hist {
            for w in ["a", "b", "c", "</s>", "<unk>"] {
                let wid = match w {
                    "</s>" => END,
                    "<unk>" => UNK,
                    x => m.vocab().id(x),
                };
                let got = m.prob(&ids(&m, &h), wid);
                let want = brute.prob(&h, w);
                assert!((got - want).abs() < 1e-12, "order {order} h={h:?} w={w}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn kneser_ney_hand_value() {
    let sents = vec![vec!["a", "b", "a", "c"]];
    let brute = BruteKn::new(&sents, 2, 0.5);
    let want = brute.prob(&["a".to_string()], "b");
    assert!((want - 0.35).abs() < 1e-12);
    let m = ngramlm::train(
        &corpus_of(&sents),
        LmConfig::new(Level::Word, 2, Smoothing::KneserNey).with_discount(0.5),
    )
    .unwrap();
    let a = m.vocab().id("a");
    let b = m.vocab().id("b");
    assert!((m.prob(&[a], b) - 0.35).abs() < 1e-9);
}

fn sentences_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..8, 1..7), 1..8)
}

fn to_corpus(raw: &[Vec<u8>]) -> Corpus {
    Corpus::new("t", raw.iter().map(|s| Sentence::new(s.iter().map(|b| format!("w{b}")))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn all_estimators_normalize(raw in sentences_strategy(), order in 1usize..=3, d in 0.05f64..0.95) {
        let c = to_corpus(&raw);
        for s in [Smoothing::Mle, Smoothing::KatzBackoff, Smoothing::KneserNey] {
            for cfg in [LmConfig::new(Level::Word, order, s), LmConfig::new(Level::Word, order, s).with_discount(d)] {
                let m = ngramlm::train(&c, cfg).unwrap();
                let unseen = if s == Smoothing::Mle { vec![] } else { vec![vec![UNK; order - 1], vec![END; order - 1]] };
                check_normalized(&m, &unseen);
            }
        }
    }

    #[test]
    fn perplexity_is_two_to_the_cross_entropy(raw in sentences_strategy(), test in sentences_strategy(), order in 1usize..=4) {
        let m = ngramlm::train(&to_corpus(&raw), LmConfig::new(Level::Word, order, Smoothing::KneserNey)).unwrap();
        let r = m.perplexity(&to_corpus(&test)).unwrap();
        prop_assert!((r.perplexity - 2f64.powf(r.cross_entropy)).abs() < 1e-9);
        let via10 = 10f64.powf(-r.total_logprob / r.token_count as f64);
        prop_assert!((r.perplexity - via10).abs() < 1e-9 * r.perplexity.max(1.0));
        prop_assert!(r.perplexity >= 1.0);
    }

    #[test]
    fn kneser_ney_fits_training_better_than_uniform(raw in sentences_strategy(), order in 1usize..=3) {
        let c = to_corpus(&raw);
        let m = ngramlm::train(&c, LmConfig::new(Level::Word, order, Smoothing::KneserNey)).unwrap();
        let uniform = m.prediction_vocab().len() as f64;
        prop_assert!(m.perplexity(&c).unwrap().perplexity <= uniform + 1e-9);
    }

    #[test]
    fn training_is_deterministic(raw in sentences_strategy()) {
        let c = to_corpus(&raw);
        let cfg = LmConfig::new(Level::Char, 3, Smoothing::KneserNey);
        let a = ngramlm::train(&c, cfg.clone()).unwrap();
        let b = ngramlm::train(&c, cfg).unwrap();
        prop_assert_eq!(a.vocab().symbols(), b.vocab().symbols());
        for k in 1..=3 {
            prop_assert_eq!(a.counts(k), b.counts(k));
        }
    }
}

#[test]
fn periodic_text_closed_form() {
    // One sentence (ab)^m under order-2 MLE: p(a|<s>)=1, p(b|a)=1,
    // p(a|b)=(m-1)/m, p(</s>|b)=1/m over 2m+1 predictions.
    let m_half = 50_000usize;
    let tokens: Vec<&str> = (0..2 * m_half).map(|i| if i % 2 == 0 { "a" } else { "b" }).collect();
    let c = corpus_of(&[tokens]);
    let model = ngramlm::train(&c, LmConfig::new(Level::Word, 2, Smoothing::Mle)).unwrap();
    let r = model.perplexity(&c).unwrap();
    let mf = m_half as f64;
    let bits = -((mf - 1.0) * ((mf - 1.0) / mf).log2() + (1.0 / mf).log2());
    let want = 2f64.powf(bits / (2.0 * mf + 1.0));
    assert!((r.perplexity - want).abs() < 1e-9);
    assert!(r.perplexity - 1.0 < 3e-4);
}

#[test]
fn cross_entropy_self_vs_disjoint() {
    let l1 = Corpus::from_text("l1", "क ख ग\nख ग क\nग क ख\nक ग ख");
    let l2 = Corpus::from_text("l2", "p q r\nq r p\nr p q\np r q");
    let cfg = LmConfig::new(Level::Char, 3, Smoothing::KneserNey);
    let m1 = ngramlm::train(&l1, cfg.clone()).unwrap();
    let m2 = ngramlm::train(&l2, cfg).unwrap();
    assert!(m1.cross_entropy(&l1).unwrap() < m1.cross_entropy(&l2).unwrap());
    assert!(m2.cross_entropy(&l2).unwrap() < m2.cross_entropy(&l1).unwrap());
}
