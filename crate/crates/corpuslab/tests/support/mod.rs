//! Synthetic corpora for the end-to-end tests.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use corpuslab_core::Corpus;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONSONANTS: [char; 32] = [
    'क', 'ख', 'ग', 'घ', 'च', 'छ', 'ज', 'झ', 'ट', 'ठ', 'ड', 'ढ', 'ण', 'त', 'थ', 'द', 'ध', 'न', 'प', 'फ', 'ब', 'भ', 'म', 'य',
    'र', 'ल', 'व', 'श', 'ष', 'स', 'ह', 'ङ',
];
const SIGNS: [&str; 8] = ["", "ा", "ि", "ी", "ु", "े", "ो", "ै"];

pub const LANGUAGES: [&str; 4] = ["aa", "bb", "cc", "dd"];

/// Zipf(1) rank sampler over `n` items.
pub struct Zipf {
    cdf: Vec<f64>,
}

impl Zipf {
    pub fn new(n: usize, s: f64) -> Self {
        let mut cdf = Vec::with_capacity(n);
        let mut acc = 0.0;
        for r in 1..=n {
            acc += 1.0 / (r as f64).powf(s);
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Zipf { cdf }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.random();
        self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1)
    }
}

/// A word of 1 to 3 aksharas over the given consonants, with sign
/// preferences skewed by `bias`.
fn make_word(rng: &mut ChaCha8Rng, consonants: &[char], bias: usize) -> String {
    let mut w = String::new();
    for _ in 0..rng.random_range(1..=3) {
        w.push(consonants[rng.random_range(0..consonants.len())]);
        let sign = if rng.random_bool(0.5) {
            SIGNS[bias % SIGNS.len()]
        } else {
            SIGNS[rng.random_range(0..SIGNS.len())]
        };
        w.push_str(sign);
    }
    w
}

fn vocabulary(rng: &mut ChaCha8Rng, size: usize, consonants: &[char], bias: usize) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let w = make_word(rng, consonants, bias);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn sentences(rng: &mut ChaCha8Rng, n: usize, mut draw: impl FnMut(&mut ChaCha8Rng) -> String) -> String {
    let mut text = String::new();
    for _ in 0..n {
        let len = rng.random_range(4..=10);
        let words: Vec<String> = (0..len).map(|_| draw(rng)).collect();
        writeln!(text, "{} ।", words.join(" ")).unwrap();
    }
    text
}

/// Four languages, each over its own eight consonants with its own
/// preferred vowel sign; Zipfian word use over a 300-word vocabulary.
pub fn four_languages(sentences_each: usize, seed: u64) -> Vec<Corpus> {
    LANGUAGES
        .iter()
        .enumerate()
        .map(|(i, lang)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let consonants = &CONSONANTS[8 * i..8 * i + 8];
            let vocab = vocabulary(&mut rng, 300, consonants, 2 * i + 1);
            let z = Zipf::new(vocab.len(), 1.0);
            let text = sentences(&mut rng, sentences_each, |r| vocab[z.sample(r)].clone());
            Corpus::from_text(*lang, &text)
        })
        .collect()
}

/// Two languages sharing 80% of their word types. Each
/// language's own words are spread evenly through its frequency ranks and
/// the two rank the shared function words in opposite orders.
pub fn hard_pair(sentences_each: usize, seed: u64) -> Vec<Corpus> {
    hard_pair_model(seed)
        .iter()
        .enumerate()
        .map(|(i, dist)| {
            let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(i as u64));
            let text = sentences(&mut r, sentences_each, |r| dist.sample(r).to_string());
            Corpus::from_text(["xa", "xb"][i], &text)
        })
        .collect()
}

/// Word distribution of one synthetic language.
pub struct WordDist {
    pub words: Vec<String>,
    pub probs: Vec<f64>,
    cdf: Vec<f64>,
}

impl WordDist {
    fn new(weighted: Vec<(String, f64)>) -> Self {
        let total: f64 = weighted.iter().map(|w| w.1).sum();
        let (words, probs): (Vec<String>, Vec<f64>) = weighted.into_iter().map(|(w, p)| (w, p / total)).unzip();
        let cdf = probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        WordDist { words, probs, cdf }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> &str {
        let u: f64 = rng.random();
        &self.words[self.cdf.partition_point(|&c| c < u).min(self.words.len() - 1)]
    }

    pub fn prob(&self, word: &str) -> f64 {
        self.words.iter().position(|w| w == word).map_or(0.0, |i| self.probs[i])
    }
}

/// The generating distributions behind [`hard_pair`].
pub fn hard_pair_model(seed: u64) -> [WordDist; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = vocabulary(&mut rng, 1230, &CONSONANTS, 0);
    let (content, function) = words.split_at(1210);
    // 820 shared types out of 1025 per language
    let (common, own) = content.split_at(800);
    let (own_a, own_b) = own.split_at(205);
    let build = |i: usize| {
        let mine = if i == 0 { own_a } else { own_b };
        // own words interleaved evenly through the shared frequency ranks
        let mut keyed: Vec<(f64, &String)> = common.iter().enumerate().map(|(j, w)| (j as f64 / 800.0, w)).collect();
        keyed.extend(mine.iter().enumerate().map(|(j, w)| ((j as f64 + 0.5) / 205.0, w)));
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = keyed.len();
        let ranked = keyed.into_iter().map(|(_, w)| w.clone());
        let mut weighted: Vec<(String, f64)> =
            ranked.enumerate().map(|(r, w)| (w, 0.65 / (r + 1) as f64 / harmonic(n))).collect();
        for (k, w) in function.iter().enumerate() {
            let rank = if i == 0 { k } else { function.len() - 1 - k };
            weighted.push((w.clone(), 0.35 / (rank + 1) as f64 / harmonic(20)));
        }
        WordDist::new(weighted)
    };
    [build(0), build(1)]
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|r| 1.0 / r as f64).sum()
}

/// `n` tokens drawn from Zipf(s) over `types` word types.
pub fn zipf_tokens(n: usize, types: usize, s: f64, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = Zipf::new(types, s);
    (0..n).map(|_| format!("w{}", z.sample(&mut rng))).collect()
}

/// Writes each corpus to `<dir>/<lang>.txt` and a registry listing them.
pub fn write_corpora(dir: &Path, corpora: &[Corpus]) -> PathBuf {
    let mut registry = String::new();
    for c in corpora {
        let name = format!("{}.txt", c.language_id);
        std::fs::write(dir.join(&name), c.to_text()).unwrap();
        writeln!(registry, "{} = {name}", c.language_id).unwrap();
    }
    let path = dir.join("corpora.conf");
    std::fs::write(&path, registry).unwrap();
    path
}

pub fn golden_ssf() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden_100.ssf")).unwrap()
}
