//! Word- and character-level n-gram language models.
//!
//! Three estimators share one count store:
//!
//! * `Mle`: relative frequencies at the model order; unseen events get
//!   probability zero and scoring reports them instead of flooring.
//! * `KatzBackoff`: absolute discounting at every order, with the freed
//!   mass redistributed over unseen words by the lower order.
//! * `KneserNey`: interpolated Kneser-Ney. Lower orders use continuation
//!   counts (the number of distinct left extensions, boundary symbols
//!   included).
//!
//! For both smoothed estimators the unigram level is
//! `max(c(w) - D, 0) / N + (D * T / N) * u(w)` where `T` is the number of
//! distinct unigrams and `u` is uniform over the real vocabulary plus the
//! unknown symbol. Sentence ends take part in the discounted term only.
//!
//! Every sentence is padded with `order - 1` begin symbols and, unless
//! disabled, closed by one end symbol. Perplexity counts the end symbols
//! and never the begin symbols.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use crate::collections::HashMap;

use crate::error::{Error, Result};
use crate::math;
use crate::textcore::{Corpus, Sentence};

pub const UNK: u32 = 0;
pub const BOS: u32 = 1;
pub const END: u32 = 2;
const RESERVED: usize = 3;

pub const UNK_SYMBOL: &str = "<unk>";
pub const BOS_SYMBOL: &str = "<s>";
pub const END_SYMBOL: &str = "</s>";
/// Unit inserted between words in character-level models.
pub const WORD_BOUNDARY: &str = "<sp>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Word,
    Char,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothing {
    Mle,
    KatzBackoff,
    KneserNey,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmConfig {
    pub level: Level,
    pub order: usize,
    pub smoothing: Smoothing,
    /// Discount for every order; `None` derives one per order as
    /// `n1 / (n1 + 2 n2)` from the count-of-counts of the values that order
    /// discounts (continuation counts below the top order under KN).
    pub discount: Option<f64>,
    /// Append an end symbol to every sentence.
    pub sentence_end: bool,
}

impl LmConfig {
    pub fn new(level: Level, order: usize, smoothing: Smoothing) -> Self {
        LmConfig {
            level,
            order,
            smoothing,
            discount: None,
            sentence_end: true,
        }
    }

    pub fn with_discount(mut self, d: f64) -> Self {
        self.discount = Some(d);
        self
    }

    pub fn without_sentence_end(mut self) -> Self {
        self.sentence_end = false;
        self
    }
}

/// Discount used when count-of-counts cannot determine one.
pub const FALLBACK_DISCOUNT: f64 = 0.5;

/// Score of a sentence or corpus under a model.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    /// Sum of base-10 log probabilities; `-inf` if any event had
    /// probability zero.
    pub total_logprob: f64,
    /// Predicted units, end symbols included.
    pub token_count: usize,
    /// Bits per unit.
    pub cross_entropy: f64,
    pub perplexity: f64,
    pub oov_count: usize,
    pub zero_prob_events: usize,
}

impl EvalResult {
    fn from_parts(total: f64, n: usize, oov: usize, zero: usize) -> Self {
        let cross_entropy = if n == 0 {
            0.0
        } else {
            -total / (n as f64 * math::LOG10_2)
        };
        EvalResult {
            total_logprob: total,
            token_count: n,
            cross_entropy,
            perplexity: math::exp2(cross_entropy),
            oov_count: oov,
            zero_prob_events: zero,
        }
    }

    /// Mean base-10 log probability per predicted unit.
    pub fn mean_logprob(&self) -> f64 {
        if self.token_count == 0 {
            0.0
        } else {
            self.total_logprob / self.token_count as f64
        }
    }

    fn merge(&mut self, other: &EvalResult) {
        *self = EvalResult::from_parts(
            self.total_logprob + other.total_logprob,
            self.token_count + other.token_count,
            self.oov_count + other.oov_count,
            self.zero_prob_events + other.zero_prob_events,
        );
    }
}

/// Symbol table with the reserved symbols at ids 0..3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    fn new() -> Self {
        Vocabulary {
            symbols: [UNK_SYMBOL, BOS_SYMBOL, END_SYMBOL]
                .iter()
                .map(ToString::to_string)
                .collect(),
            index: HashMap::default(),
        }
    }

    fn intern(&mut self, unit: &str) -> u32 {
        if let Some(&id) = self.index.get(unit) {
            return id;
        }
        let id = self.symbols.len() as u32;
        self.symbols.push(unit.to_string());
        self.index.insert(unit.to_string(), id);
        id
    }

    /// Rebuilds a vocabulary from its symbol list (reserved symbols first).
    pub fn from_symbols(symbols: Vec<String>) -> Result<Self> {
        if symbols.len() < RESERVED
            || symbols[..RESERVED] != [UNK_SYMBOL, BOS_SYMBOL, END_SYMBOL]
        {
            return Err(Error::invalid("vocabulary must start with <unk> <s> </s>"));
        }
        let mut index = HashMap::default();
        for (i, s) in symbols.iter().enumerate().skip(RESERVED) {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(Error::invalid(alloc::format!("duplicate vocabulary entry {s:?}")));
            }
        }
        Ok(Vocabulary { symbols, index })
    }

    pub fn id(&self, unit: &str) -> u32 {
        self.index.get(unit).copied().unwrap_or(UNK)
    }

    pub fn contains(&self, unit: &str) -> bool {
        self.index.contains_key(unit)
    }

    pub fn symbol(&self, id: u32) -> &str {
        &self.symbols[id as usize]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Number of real units, reserved symbols excluded.
    pub fn unit_count(&self) -> usize {
        self.symbols.len() - RESERVED
    }
}

/// Values at one order plus per-history totals.
#[derive(Debug, Clone, Default)]
struct OrderTable {
    grams: HashMap<Vec<u32>, u64>,
    /// history -> (sum of values, distinct followers, backoff weight)
    histories: HashMap<Vec<u32>, HistoryStats>,
    discount: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct HistoryStats {
    sum: u64,
    distinct: u64,
    alpha: f64,
}

impl OrderTable {
    fn from_values(grams: HashMap<Vec<u32>, u64>) -> Self {
        let mut histories: HashMap<Vec<u32>, HistoryStats> = HashMap::default();
        for (g, &v) in &grams {
            let h = histories.entry(g[..g.len() - 1].to_vec()).or_default();
            h.sum += v;
            h.distinct += 1;
        }
        OrderTable {
            grams,
            histories,
            discount: FALLBACK_DISCOUNT,
        }
    }

}

fn count_of_counts_discount(counts: &HashMap<Vec<u32>, u64>) -> f64 {
    let n1 = counts.values().filter(|&&v| v == 1).count() as f64;
    let n2 = counts.values().filter(|&&v| v == 2).count() as f64;
    if n1 == 0.0 || n2 == 0.0 {
        FALLBACK_DISCOUNT
    } else {
        n1 / (n1 + 2.0 * n2)
    }
}

/// A trained n-gram model. Immutable after construction.
#[derive(Debug, Clone)]
pub struct NGramModel {
    config: LmConfig,
    vocab: Vocabulary,
    /// Raw counts per order, index `k - 1` for k-grams.
    raw: Vec<HashMap<Vec<u32>, u64>>,
    /// The tables probabilities are read from, index `k - 1`.
    tables: Vec<OrderTable>,
    uniform_size: usize,
}

impl NGramModel {
    /// Counts `corpus` and estimates a model.
    pub fn train(corpus: &Corpus, config: LmConfig) -> Result<Self> {
        validate_config(&config)?;
        if corpus.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut vocab = Vocabulary::new();
        let n = config.order;
        let mut raw: Vec<HashMap<Vec<u32>, u64>> = (0..n).map(|_| HashMap::default()).collect();
        let mut seq: Vec<u32> = Vec::new();
        for sentence in corpus.sentences() {
            seq.clear();
            seq.resize(n - 1, BOS);
            for unit in sentence_units(sentence, config.level) {
                seq.push(vocab.intern(&unit));
            }
            if config.sentence_end {
                seq.push(END);
            }
            for p in (n - 1)..seq.len() {
                for k in 1..=n {
                    *raw[k - 1].entry(seq[p + 1 - k..=p].to_vec()).or_insert(0) += 1;
                }
            }
        }
        if raw[0].is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self::build(config, vocab, raw))
    }

    /// Rebuilds a model from its vocabulary and raw counts; the result is
    /// identical to the model those counts were taken from.
    pub fn from_counts(
        config: LmConfig,
        symbols: Vec<String>,
        counts: Vec<Vec<(Vec<u32>, u64)>>,
    ) -> Result<Self> {
        validate_config(&config)?;
        let vocab = Vocabulary::from_symbols(symbols)?;
        if counts.len() != config.order {
            return Err(Error::invalid("one count block per order is required"));
        }
        let mut raw = Vec::with_capacity(config.order);
        for (k, block) in counts.into_iter().enumerate() {
            let mut map = HashMap::with_capacity_and_hasher(block.len(), Default::default());
            for (g, c) in block {
                if g.len() != k + 1 || c == 0 || g.iter().any(|&id| id as usize >= vocab.symbols.len()) {
                    return Err(Error::invalid(alloc::format!("bad {}-gram entry", k + 1)));
                }
                map.insert(g, c);
            }
            raw.push(map);
        }
        if raw[0].is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self::build(config, vocab, raw))
    }

    fn build(config: LmConfig, vocab: Vocabulary, raw: Vec<HashMap<Vec<u32>, u64>>) -> Self {
        let n = config.order;
        let mut tables: Vec<OrderTable> = Vec::with_capacity(n);
        for k in 1..=n {
            let values = if config.smoothing == Smoothing::KneserNey && k < n {
                let mut cont: HashMap<Vec<u32>, u64> = HashMap::default();
                for g in raw[k].keys() {
                    *cont.entry(g[1..].to_vec()).or_insert(0) += 1;
                }
                cont
            } else {
                raw[k - 1].clone()
            };
            let mut table = OrderTable::from_values(values);
            table.discount = config
                .discount
                .unwrap_or_else(|| count_of_counts_discount(&table.grams));
            tables.push(table);
        }
        let uniform_size = vocab.unit_count() + 1;
        let mut model = NGramModel {
            config,
            vocab,
            raw,
            tables,
            uniform_size,
        };
        if model.config.smoothing == Smoothing::KatzBackoff {
            model.compute_backoff_weights();
        }
        model
    }

    fn compute_backoff_weights(&mut self) {
        let n = self.config.order;
        for k in 2..=n {
            // Seen followers per history at this order.
            let mut followers: HashMap<Vec<u32>, Vec<u32>> = HashMap::default();
            for g in self.tables[k - 1].grams.keys() {
                followers
                    .entry(g[..k - 1].to_vec())
                    .or_default()
                    .push(g[k - 1]);
            }
            let d = self.tables[k - 1].discount;
            let mut alphas: Vec<(Vec<u32>, f64)> = Vec::with_capacity(followers.len());
            let mut gram = Vec::with_capacity(k);
            for (h, ws) in &followers {
                let stats = self.tables[k - 1].histories[h];
                let mut seen_lower = 0.0;
                for &w in ws {
                    gram.clear();
                    gram.extend_from_slice(&h[1..]);
                    gram.push(w);
                    seen_lower += self.katz(&gram);
                }
                let freed = d * stats.distinct as f64 / stats.sum as f64;
                let rest = 1.0 - seen_lower;
                alphas.push((h.clone(), if rest > 0.0 { freed / rest } else { 0.0 }));
            }
            for (h, a) in alphas {
                if let Some(s) = self.tables[k - 1].histories.get_mut(&h) {
                    s.alpha = a;
                }
            }
        }
    }

    pub fn config(&self) -> &LmConfig {
        &self.config
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn order(&self) -> usize {
        self.config.order
    }

    /// Discount in effect at order `k`.
    pub fn discount(&self, k: usize) -> f64 {
        self.tables[k - 1].discount
    }

    /// Raw counts of order `k`, sorted by n-gram ids.
    pub fn counts(&self, k: usize) -> Vec<(Vec<u32>, u64)> {
        let mut v: Vec<(Vec<u32>, u64)> = self.raw[k - 1]
            .iter()
            .map(|(g, &c)| (g.clone(), c))
            .collect();
        v.sort_unstable();
        v
    }

    /// Ids that can be predicted: every unit, the unknown symbol and, when
    /// enabled, the end symbol.
    pub fn prediction_vocab(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = (RESERVED as u32..self.vocab.symbols.len() as u32).collect();
        ids.push(UNK);
        if self.config.sentence_end {
            ids.push(END);
        }
        ids
    }

    /// Histories observed at order `k` (length `k - 1`), sorted.
    pub fn histories(&self, k: usize) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.raw[k - 1]
            .keys()
            .map(|g| g[..k - 1].to_vec())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `p(w | history)`; only the last `order - 1` history ids are used and
    /// shorter histories are left-padded with the begin symbol.
    pub fn prob(&self, history: &[u32], w: u32) -> f64 {
        let n = self.config.order;
        let mut gram = Vec::with_capacity(n);
        let keep = history.len().min(n - 1);
        gram.resize(n - 1 - keep, BOS);
        gram.extend_from_slice(&history[history.len() - keep..]);
        gram.push(w);
        self.gram_prob(&gram)
    }

    fn gram_prob(&self, gram: &[u32]) -> f64 {
        match self.config.smoothing {
            Smoothing::Mle => self.mle(gram),
            Smoothing::KatzBackoff => self.katz(gram),
            Smoothing::KneserNey => self.kneser_ney(gram),
        }
    }

    fn mle(&self, gram: &[u32]) -> f64 {
        let table = &self.tables[gram.len() - 1];
        match table.histories.get(&gram[..gram.len() - 1]) {
            None => 0.0,
            Some(h) => table.grams.get(gram).copied().unwrap_or(0) as f64 / h.sum as f64,
        }
    }

    fn unigram(&self, w: u32) -> f64 {
        let table = &self.tables[0];
        let h = table.histories[&[][..]];
        let c = table.grams.get(&[w][..]).copied().unwrap_or(0) as f64;
        let d = table.discount;
        let uniform = if w == UNK || w as usize >= RESERVED {
            1.0 / self.uniform_size as f64
        } else {
            0.0
        };
        let sum = h.sum as f64;
        (c - d).max(0.0) / sum + d * h.distinct as f64 / sum * uniform
    }

    fn katz(&self, gram: &[u32]) -> f64 {
        if gram.len() == 1 {
            return self.unigram(gram[0]);
        }
        let table = &self.tables[gram.len() - 1];
        match table.histories.get(&gram[..gram.len() - 1]) {
            None => self.katz(&gram[1..]),
            Some(h) => match table.grams.get(gram) {
                Some(&c) => (c as f64 - table.discount) / h.sum as f64,
                None => h.alpha * self.katz(&gram[1..]),
            },
        }
    }

    fn kneser_ney(&self, gram: &[u32]) -> f64 {
        if gram.len() == 1 {
            return self.unigram(gram[0]);
        }
        let lower = self.kneser_ney(&gram[1..]);
        let table = &self.tables[gram.len() - 1];
        match table.histories.get(&gram[..gram.len() - 1]) {
            None => lower,
            Some(h) => {
                let c = table.grams.get(gram).copied().unwrap_or(0) as f64;
                let d = table.discount;
                let sum = h.sum as f64;
                (c - d).max(0.0) / sum + d * h.distinct as f64 / sum * lower
            }
        }
    }

    /// Model units of a sentence at this model's level.
    pub fn units(&self, sentence: &Sentence) -> Vec<String> {
        sentence_units(sentence, self.config.level)
    }

    /// Scores pre-split units (no padding needed from the caller).
    pub fn score_units<S: AsRef<str>>(&self, units: &[S]) -> EvalResult {
        let n = self.config.order;
        let mut seq: Vec<u32> = Vec::with_capacity(units.len() + n);
        seq.resize(n - 1, BOS);
        let mut oov = 0;
        for u in units {
            let id = self.vocab.id(u.as_ref());
            oov += usize::from(id == UNK);
            seq.push(id);
        }
        if self.config.sentence_end {
            seq.push(END);
        }
        let mut total = 0.0;
        let mut zero = 0;
        for p in (n - 1)..seq.len() {
            let pr = self.gram_prob(&seq[p + 1 - n..=p]);
            if pr > 0.0 {
                total += math::log10(pr);
            } else {
                zero += 1;
                total = f64::NEG_INFINITY;
            }
        }
        EvalResult::from_parts(total, seq.len() + 1 - n, oov, zero)
    }

    /// Log probability of one sentence. An empty sentence scores only the
    /// end symbol.
    pub fn sequence_logprob(&self, sentence: &Sentence) -> EvalResult {
        self.score_units(&self.units(sentence))
    }

    /// Corpus-level cross entropy and perplexity.
    pub fn perplexity(&self, corpus: &Corpus) -> Result<EvalResult> {
        if corpus.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut acc = EvalResult::from_parts(0.0, 0, 0, 0);
        for s in corpus.sentences() {
            acc.merge(&self.sequence_logprob(s));
        }
        if acc.zero_prob_events > 0 {
            return Err(Error::ZeroProbability);
        }
        Ok(acc)
    }

    /// Bits per unit of `corpus` under this model.
    pub fn cross_entropy(&self, corpus: &Corpus) -> Result<f64> {
        Ok(self.perplexity(corpus)?.cross_entropy)
    }
}

fn validate_config(config: &LmConfig) -> Result<()> {
    if config.order < 1 {
        return Err(Error::invalid("order must be at least 1"));
    }
    if let Some(d) = config.discount {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::invalid("discount must lie in (0, 1)"));
        }
    }
    Ok(())
}

/// Splits a sentence into model units. Character models insert
/// [`WORD_BOUNDARY`] between words.
pub fn sentence_units(sentence: &Sentence, level: Level) -> Vec<String> {
    match level {
        Level::Word => sentence.tokens().to_vec(),
        Level::Char => {
            let mut out = Vec::new();
            for (i, t) in sentence.tokens().iter().enumerate() {
                if i > 0 {
                    out.push(WORD_BOUNDARY.to_string());
                }
                out.extend(t.chars().map(|c| c.to_string()));
            }
            out
        }
    }
}

/// Convenience wrapper around [`NGramModel::train`].
pub fn train(corpus: &Corpus, config: LmConfig) -> Result<NGramModel> {
    NGramModel::train(corpus, config)
}
