mod support;

use corpuslab_core::tagger::{
    bio_tagset, evaluate_tagger, extract_features, is_well_formed_bio, train_tagger, TaggerModel, Target, TrainConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{all_sequences, next_word_corpus, random_model, words};

#[test]
fn viterbi_matches_exhaustive_argmax() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut unique = 0;
    for trial in 0..1000 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(2..=4);
        let level = rng.random_range(0..=4u8);
        let tokens = words(n, &mut rng, &["a", "b", "c", "d"]);
        let m = random_model(&mut rng, &tokens, k, level);
        let (tags, score) = m.decode_scored(&tokens, None);
        assert!((m.score(&tokens, None, &tags).unwrap() - score).abs() < 1e-9);
        let mut scores: Vec<(f64, Vec<usize>)> = all_sequences(k, n)
            .into_iter()
            .map(|seq| {
                let t: Vec<String> = seq.iter().map(|&i| m.tagset()[i].clone()).collect();
                (m.score(&tokens, None, &t).unwrap(), seq)
            })
            .collect();
        scores.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        assert!((scores[0].0 - score).abs() < 1e-9, "trial {trial}: {} vs {score}", scores[0].0);
        if scores.len() > 1 && scores[0].0 - scores[1].0 > 1e-9 {
            unique += 1;
            let best: Vec<String> = scores[0].1.iter().map(|&i| m.tagset()[i].clone()).collect();
            assert_eq!(best, tags, "trial {trial}");
        }
    }
    assert!(unique > 900);
}

#[test]
fn next_word_corpus_ablation_is_monotone() {
    for seed in [3, 4, 5] {
        let (data, ceiling) = next_word_corpus(seed);
        assert!(ceiling < 1.0);
        let acc = |level| {
            let m = train_tagger(&data, &TrainConfig::new(Target::Pos, level).with_epochs(20).with_seed(seed)).unwrap();
            evaluate_tagger(&m, &data, Target::Pos).unwrap().accuracy
        };
        let (l0, l1, l2) = (acc(0), acc(1), acc(2));
        assert!((l1 - ceiling).abs() < 1e-12, "level 1 {l1} vs ceiling {ceiling}");
        assert!(l0 <= ceiling + 1e-12);
        assert_eq!(l2, 1.0);
        assert!(l2 >= l1);
    }
}

#[test]
fn training_is_deterministic() {
    let (data, _) = next_word_corpus(9);
    let c = TrainConfig::new(Target::Pos, 4).with_epochs(5).with_seed(17);
    let a = train_tagger(&data, &c).unwrap();
    let b = train_tagger(&data, &c).unwrap();
    assert_eq!(a.weights(), b.weights());
    let other = train_tagger(&data, &c.clone().with_seed(18)).unwrap();
    assert_eq!(other.tagset(), a.tagset());
}

#[test]
fn constrained_decoding_is_well_formed() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let tagset = bio_tagset(&["NP", "VGF", "JJP"]);
    let alphabet = ["p", "q", "r", "s", "t"];
    for _ in 0..10_000 {
        let n = rng.random_range(1..=8);
        let tokens = words(n, &mut rng, &alphabet);
        let level = rng.random_range(0..=4u8);
        let mut weights = Vec::new();
        for i in 0..n {
            for f in extract_features(&tokens, None, i, level) {
                let t = &tagset[rng.random_range(0..tagset.len())];
                weights.push((f, t.clone(), rng.random_range(-3.0..3.0)));
            }
        }
        weights.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        weights.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        let m = TaggerModel::from_weights(tagset.clone(), level, false, &weights).unwrap();
        let tags = m.decode(&tokens, None);
        assert!(is_well_formed_bio(&tags), "{tokens:?} -> {tags:?}");
    }
}
