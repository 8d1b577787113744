//! Cross-lingual similarity from character language model scores, and a
//! perplexity-based distance.
//!
//! Each corpus is split in half with a seeded shuffle. A character
//! Kneser-Ney model trained on the first half of language `sl` scores the
//! second half of language `tl`; the ordered-pair scores are min-max
//! scaled over the whole matrix, self pairs included.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ngramlm::{Level, LmConfig, NGramModel, Smoothing};
use crate::sampling::{derive_seed, shuffle_split};
use crate::textcore::Corpus;

pub const DEFAULT_SIMILARITY_ORDER: usize = 5;
pub const DEFAULT_DISTANCE_ORDER: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScoreMode {
    /// Sum of sentence log10 probabilities over the test half.
    RawSum,
    /// Mean log10 probability per character unit.
    PerCharMean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub languages: Vec<String>,
    pub raw: Vec<Vec<f64>>,
    pub scaled: Vec<Vec<f64>>,
    pub mode: ScoreMode,
    pub symmetrized: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub languages: Vec<String>,
    /// Cross perplexities before scaling.
    pub raw: Vec<Vec<f64>>,
    pub scaled: Vec<Vec<f64>>,
}

/// Train and test halves of a corpus for a given seed. The train half has
/// `floor(m / 2)` sentences.
pub fn split_halves(corpus: &Corpus, seed: u64) -> (Corpus, Corpus) {
    let idx: Vec<usize> = (0..corpus.sentence_count()).collect();
    let (train, test) = shuffle_split(&idx, 0.5, derive_seed(seed, &corpus.language_id));
    (corpus.select(&train), corpus.select(&test))
}

struct Prepared {
    languages: Vec<String>,
    models: Vec<NGramModel>,
    tests: Vec<Corpus>,
}

fn prepare(corpora: &[Corpus], order: usize, seed: u64) -> Result<Prepared> {
    if corpora.len() < 2 {
        return Err(Error::TooFewLanguages {
            needed: 2,
            got: corpora.len(),
        });
    }
    let mut sorted: Vec<&Corpus> = corpora.iter().collect();
    sorted.sort_by(|a, b| a.language_id.cmp(&b.language_id));
    if sorted.windows(2).any(|w| w[0].language_id == w[1].language_id) {
        return Err(Error::invalid("duplicate language id"));
    }
    let mut out = Prepared {
        languages: Vec::new(),
        models: Vec::new(),
        tests: Vec::new(),
    };
    for c in sorted {
        if c.sentence_count() < 2 {
            return Err(Error::invalid("each corpus needs at least 2 sentences"));
        }
        let (train, test) = split_halves(c, seed);
        let cfg = LmConfig::new(Level::Char, order, Smoothing::KneserNey);
        out.models.push(NGramModel::train(&train, cfg)?);
        out.tests.push(test);
        out.languages.push(c.language_id.clone());
    }
    Ok(out)
}

fn min_max(raw: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in raw.iter().flatten() {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DegenerateScale);
    }
    Ok(raw
        .iter()
        .map(|row| row.iter().map(|v| (v - lo) / (hi - lo)).collect())
        .collect())
}

/// Similarity scores for every ordered pair (row = model language,
/// column = scored language).
pub fn ssnglm_matrix(
    corpora: &[Corpus],
    order: usize,
    seed: u64,
    mode: ScoreMode,
    symmetrize: bool,
) -> Result<SimilarityMatrix> {
    let p = prepare(corpora, order, seed)?;
    let k = p.languages.len();
    let mut raw = vec![vec![0.0; k]; k];
    for (i, model) in p.models.iter().enumerate() {
        for (j, test) in p.tests.iter().enumerate() {
            let r = model.perplexity(test)?;
            raw[i][j] = match mode {
                ScoreMode::RawSum => r.total_logprob,
                ScoreMode::PerCharMean => r.mean_logprob(),
            };
        }
    }
    let mut scaled = min_max(&raw)?;
    if symmetrize {
        for i in 0..k {
            for j in (i + 1)..k {
                let m = (scaled[i][j] + scaled[j][i]) / 2.0;
                scaled[i][j] = m;
                scaled[j][i] = m;
            }
        }
    }
    Ok(SimilarityMatrix {
        languages: p.languages,
        raw,
        scaled,
        mode,
        symmetrized: symmetrize,
    })
}

/// Scaled cross perplexities with the diagonal set to zero.
pub fn distance_matrix(corpora: &[Corpus], order: usize, seed: u64) -> Result<DistanceMatrix> {
    let p = prepare(corpora, order, seed)?;
    let k = p.languages.len();
    let mut raw = vec![vec![0.0; k]; k];
    for (i, model) in p.models.iter().enumerate() {
        for (j, test) in p.tests.iter().enumerate() {
            raw[i][j] = model.perplexity(test)?.perplexity;
        }
    }
    let mut scaled = min_max(&raw)?;
    for (i, row) in scaled.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    Ok(DistanceMatrix {
        languages: p.languages,
        raw,
        scaled,
    })
}
