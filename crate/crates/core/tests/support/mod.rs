//! Independent oracles shared by the property tests and the acceptance
//! run: brute-force estimators, exhaustive searches and data generators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use corpuslab_core::morphseg::char_entropy;
use corpuslab_core::ngramlm::{NGramModel, Smoothing, BOS, END};
use corpuslab_core::tagger::{extract_features, TaggedSentence, TaggerModel};
use corpuslab_core::{Corpus, Sentence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight-from-the-definition interpolated KN over string sequences.
pub struct BruteKn {
    seqs: Vec<Vec<String>>,
    order: usize,
    d: f64,
    vocab: BTreeSet<String>,
}

impl BruteKn {
    pub fn new(sentences: &[Vec<&str>], order: usize, d: f64) -> Self {
        let mut vocab = BTreeSet::new();
        let seqs = sentences
            .iter()
            .map(|s| {
                let mut v: Vec<String> = vec!["<s>".into(); order - 1];
                for t in s {
                    vocab.insert(t.to_string());
                    v.push(t.to_string());
                }
                v.push("</s>".into());
                v
            })
            .collect();
        BruteKn { seqs, order, d, vocab }
    }

    /// All k-grams at predicted positions.
    pub fn grams(&self, k: usize) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        for s in &self.seqs {
            for p in (self.order - 1)..s.len() {
                out.push(s[p + 1 - k..=p].to_vec());
            }
        }
        out
    }

    fn value(&self, g: &[String]) -> f64 {
        let k = g.len();
        if k == self.order {
            self.grams(k).iter().filter(|x| x.as_slice() == g).count() as f64
        } else {
            let lefts: BTreeSet<String> = self
                .grams(k + 1)
                .into_iter()
                .filter(|x| &x[1..] == g)
                .map(|x| x[0].clone())
                .collect();
            lefts.len() as f64
        }
    }

    pub fn prob(&self, h: &[String], w: &str) -> f64 {
        let k = h.len() + 1;
        let mut events: BTreeMap<Vec<String>, f64> = BTreeMap::new();
        let candidates: BTreeSet<Vec<String>> = self.grams(k).into_iter().collect();
        for g in candidates {
            if &g[..k - 1] == h {
                let v = self.value(&g);
                if v > 0.0 {
                    events.insert(g, v);
                }
            }
        }
        let lower = if k == 1 {
            if w == "<unk>" || self.vocab.contains(w) {
                1.0 / (self.vocab.len() + 1) as f64
            } else {
                0.0
            }
        } else {
            self.prob(&h[1..], w)
        };
        let total: f64 = events.values().sum();
        if total == 0.0 {
            return lower;
        }
        let mut g = h.to_vec();
        g.push(w.to_string());
        let c = events.get(&g).copied().unwrap_or(0.0);
        (c - self.d).max(0.0) / total + self.d * events.len() as f64 / total * lower
    }
}

pub fn corpus_of(sentences: &[Vec<&str>]) -> Corpus {
    Corpus::new("t", sentences.iter().map(|s| Sentence::new(s.iter().copied())).collect())
}

pub fn ids(model: &NGramModel, h: &[String]) -> Vec<u32> {
    h.iter()
        .map(|s| match s.as_str() {
            "<s>" => BOS,
            "</s>" => END,
            other => model.vocab().id(other),
        })
        .collect()
}

pub fn check_normalized(m: &NGramModel, extra_histories: &[Vec<u32>]) {
    let vocab = m.prediction_vocab();
    let mut hs = m.histories(m.order());
    hs.extend_from_slice(extra_histories);
    for h in hs {
        let s: f64 = vocab.iter().map(|&w| m.prob(&h, w)).sum();
        assert!((s - 1.0).abs() < 1e-9, "sum {s} for history {h:?}");
        for &w in &vocab {
            let p = m.prob(&h, w);
            assert!(p <= 1.0 && p >= 0.0);
            if m.config().smoothing != Smoothing::Mle {
                assert!(p > 0.0);
            }
        }
    }
}



/// Minimum total cost over every segmentation of every word, by exhaustive
/// depth-first enumeration.
struct Exhaustive<'a> {
    words: &'a [(String, u64)],
    morph_cost: f64,
    char_cost: f64,
    counts: BTreeMap<String, u64>,
    best: f64,
}

fn xlogx(x: u64) -> f64 {
    if x == 0 { 0.0 } else { x as f64 * (x as f64).log2() }
}

impl Exhaustive<'_> {
    fn cost(&self) -> f64 {
        let n: u64 = self.counts.values().sum();
        let corpus = xlogx(n) - self.counts.values().map(|&c| xlogx(c)).sum::<f64>();
        let lex: f64 = self
            .counts
            .keys()
            .map(|m| m.chars().count() as f64 * self.char_cost + self.morph_cost)
            .sum();
        corpus + lex
    }

    fn run(&mut self, i: usize) {
        if i == self.words.len() {
            let c = self.cost();
            if c < self.best {
                self.best = c;
            }
            return;
        }
        let (w, k) = &self.words[i];
        let chars: Vec<char> = w.chars().collect();
        let cuts = chars.len() - 1;
        for mask in 0u32..(1 << cuts) {
            let mut pieces = Vec::new();
            let mut cur = String::new();
            for (j, ch) in chars.iter().enumerate() {
                cur.push(*ch);
                if j < cuts && mask & (1 << j) != 0 {
                    pieces.push(std::mem::take(&mut cur));
                }
            }
            pieces.push(cur);
            for p in &pieces {
                *self.counts.entry(p.clone()).or_insert(0) += k;
            }
            self.run(i + 1);
            for p in &pieces {
                let e = self.counts.get_mut(p).unwrap();
                *e -= k;
                if *e == 0 {
                    self.counts.remove(p);
                }
            }
        }
    }
}

pub fn optimum(words: &[(String, u64)], morph_cost: f64) -> f64 {
    let mut e = Exhaustive {
        words,
        morph_cost,
        char_cost: char_entropy(words),
        counts: BTreeMap::new(),
        best: f64::INFINITY,
    };
    e.run(0);
    e.best
}

pub fn grid(seed: u64) -> Vec<Vec<(String, u64)>> {
    let mut out = Vec::new();
    let stems = ["wa", "ta", "kal", "lo", "b"];
    let sufs = ["", "d", "ng", "s", "ed"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..150 {
        let size = rng.random_range(1..=5usize);
        let mut v: BTreeMap<String, u64> = BTreeMap::new();
        while v.len() < size {
            let w = format!(
                "{}{}",
                stems[rng.random_range(0..stems.len())],
                sufs[rng.random_range(0..sufs.len())]
            );
            v.insert(w, rng.random_range(1..=12));
        }
        out.push(v.into_iter().collect());
    }
    for _ in 0..250 {
        let size = rng.random_range(1..=5usize);
        let alphabet = rng.random_range(2..=4u8);
        let mut v: BTreeMap<String, u64> = BTreeMap::new();
        while v.len() < size {
            let len = rng.random_range(1..=6usize);
            let w: String = (0..len).map(|_| (b'a' + rng.random_range(0..alphabet)) as char).collect();
            v.insert(w, rng.random_range(1..=12));
        }
        out.push(v.into_iter().collect());
    }
    out
}

pub fn words(n: usize, rng: &mut ChaCha8Rng, alphabet: &[&str]) -> Vec<String> {
    (0..n).map(|_| alphabet[rng.random_range(0..alphabet.len())].to_string()).collect()
}

pub fn all_sequences(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k).map(move |t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn random_model(rng: &mut ChaCha8Rng, tokens: &[String], k: usize, level: u8) -> TaggerModel {
    let tagset: Vec<String> = (0..k).map(|i| format!("T{i}")).collect();
    let mut weights = Vec::new();
    for i in 0..tokens.len() {
        for f in extract_features(tokens, None, i, level) {
            for t in &tagset {
                if rng.random_bool(0.7) {
                    weights.push((f.clone(), t.clone(), rng.random_range(-2.0..2.0)));
                }
            }
        }
    }
    let prevs: Vec<String> = std::iter::once("<s>".to_string()).chain(tagset.iter().cloned()).collect();
    for p in &prevs {
        for t in &tagset {
            weights.push((format!("t-1={p}"), t.clone(), rng.random_range(-2.0..2.0)));
        }
    }
    weights.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    weights.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    TaggerModel::from_weights(tagset, level, false, &weights).unwrap()
}

pub fn next_word_corpus(seed: u64) -> (Vec<TaggedSentence>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let firsts = ["a0", "a1", "a2", "a3", "a4"];
    let seconds = ["x0", "x1", "x2", "x3"];
    let mut data = Vec::new();
    for (i, a) in firsts.iter().enumerate() {
        let total = 20 + 4 * i;
        let major = seconds[i % seconds.len()];
        for j in 0..total {
            let x = if j < total * 7 / 10 {
                major
            } else {
                seconds[rng.random_range(0..seconds.len())]
            };
            let tokens = vec![a.to_string(), x.to_string(), "z".to_string()];
            let tags = vec![format!("T_{x}"), "T_z".to_string(), "END".to_string()];
            data.push(TaggedSentence::new(tokens, Some(tags), None));
        }
    }
    // Ceiling by brute force: majority tag per level-1 observation context.
    let mut by_context: BTreeMap<Vec<String>, BTreeMap<String, usize>> = BTreeMap::new();
    let mut total = 0;
    for s in &data {
        let tags = s.pos.as_ref().unwrap();
        for i in 0..s.len() {
            let ctx = extract_features(&s.tokens, None, i, 1);
            *by_context.entry(ctx).or_default().entry(tags[i].clone()).or_default() += 1;
            total += 1;
        }
    }
    let best: usize = by_context.values().map(|m| m.values().max().unwrap()).sum();
    (data, best as f64 / total as f64)
}

pub const CONSONANTS: &str = "कखगघङचछजझञटठडढणतथदधनपफबभमयरलवशषसह";
pub const NUKTA_BASES: &str = "कखगजडढफ";
pub const VOWELS: &str = "अआइईउऊऋएऐओऔ";
pub const SIGNS: &str = "ािीुूृेैोौ";
pub const HALANT: char = '\u{094D}';
pub const NUKTA: char = '\u{093C}';

fn pick(rng: &mut ChaCha8Rng, s: &str) -> char {
    let cs: Vec<char> = s.chars().collect();
    cs[rng.random_range(0..cs.len())]
}

fn consonant(rng: &mut ChaCha8Rng, out: &mut String) {
    if rng.random_bool(0.1) {
        out.push(pick(rng, NUKTA_BASES));
        out.push(NUKTA);
    } else {
        out.push(pick(rng, CONSONANTS));
    }
}

/// One akshara; independent vowels are likelier at the start of a word.
fn akshara(rng: &mut ChaCha8Rng, first: bool, out: &mut String) -> usize {
    let before = out.chars().count();
    if rng.random_bool(if first { 0.15 } else { 0.08 }) {
        out.push(pick(rng, VOWELS));
    } else {
        for _ in 0..rng.random_range(0..3) {
            consonant(rng, out);
            out.push(HALANT);
        }
        consonant(rng, out);
        if rng.random_bool(0.6) {
            out.push(pick(rng, SIGNS));
        }
    }
    match rng.random_range(0..10) {
        0 => out.push('\u{0902}'),
        1 => out.push('\u{0901}'),
        2 => out.push('\u{0903}'),
        _ => {}
    }
    out.chars().count() - before
}

/// A valid word and its akshara count.
pub fn word(rng: &mut ChaCha8Rng) -> (String, usize) {
    let mut w = String::new();
    let k = rng.random_range(1..=5);
    for i in 0..k {
        akshara(rng, i == 0, &mut w);
    }
    let mut count = k;
    if rng.random_bool(0.1) {
        consonant(rng, &mut w);
        w.push(HALANT);
        count += 1;
    }
    (w, count)
}
