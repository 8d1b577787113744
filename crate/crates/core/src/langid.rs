//! Language identification with per-language character models.
//!
//! `LmScore` picks the language whose character Kneser-Ney model gives the
//! highest mean log10 probability per unit. `RankProfile` compares ranked
//! character n-gram lists by out-of-place distance. Ties go to the
//! language id that sorts first.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use crate::collections::HashMap;

use crate::error::{Error, Result};
use crate::metrics::ClassificationReport;
use crate::ngramlm::{Level, LmConfig, NGramModel, Smoothing};
use crate::sampling::{derive_seed, shuffle_split};
use crate::textcore::{tokenize, Corpus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    LmScore,
    RankProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentifierConfig {
    pub backend: Backend,
    pub order: usize,
    /// Profile length for the rank backend.
    pub profile_size: usize,
    /// Longest n-gram kept in rank profiles.
    pub profile_max_n: usize,
}

impl Default for IdentifierConfig {
    fn default() -> Self {
        IdentifierConfig {
            backend: Backend::LmScore,
            order: 5,
            profile_size: 400,
            profile_max_n: 5,
        }
    }
}

/// Ranked n-gram list, most frequent first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    ngrams: Vec<String>,
    ranks: HashMap<String, usize>,
}

impl RankProfile {
    pub fn from_ranked(ngrams: Vec<String>) -> Self {
        let ranks = ngrams
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        RankProfile { ngrams, ranks }
    }

    /// Builds a profile from token stream counts of `_token_` substrings of
    /// length `1..=max_n`, keeping the `size` most frequent.
    pub fn build<'a, I: IntoIterator<Item = &'a str>>(tokens: I, max_n: usize, size: usize) -> Self {
        let mut counts: HashMap<String, u64> = HashMap::default();
        for t in tokens {
            let mut padded: Vec<char> = Vec::with_capacity(t.chars().count() + 2);
            padded.push('_');
            padded.extend(t.chars());
            padded.push('_');
            for n in 1..=max_n {
                for w in padded.windows(n) {
                    if n == 1 && w[0] == '_' {
                        continue;
                    }
                    *counts.entry(w.iter().collect()).or_insert(0) += 1;
                }
            }
        }
        let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(size);
        Self::from_ranked(ranked.into_iter().map(|(g, _)| g).collect())
    }

    pub fn ngrams(&self) -> &[String] {
        &self.ngrams
    }

    /// Out-of-place distance of `doc` from this profile; n-grams missing
    /// here cost `penalty`.
    pub fn distance(&self, doc: &RankProfile, penalty: usize) -> u64 {
        doc.ngrams
            .iter()
            .enumerate()
            .map(|(i, g)| match self.ranks.get(g) {
                Some(&r) => r.abs_diff(i) as u64,
                None => penalty as u64,
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub language: String,
    /// Per-language scores in language order: mean log10 probability for
    /// `LmScore` (higher wins), out-of-place distance for `RankProfile`
    /// (lower wins).
    pub scores: Vec<(String, f64)>,
}

#[derive(Debug, Clone)]
pub struct IdentifierModel {
    config: IdentifierConfig,
    languages: Vec<String>,
    models: Vec<NGramModel>,
    profiles: Vec<RankProfile>,
}

impl IdentifierModel {
    /// Trains one component per language. Languages are kept sorted by id.
    pub fn train(corpora: &[Corpus], config: IdentifierConfig) -> Result<Self> {
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
        let mut model = IdentifierModel {
            config: config.clone(),
            languages: Vec::new(),
            models: Vec::new(),
            profiles: Vec::new(),
        };
        for c in sorted {
            if c.is_empty() {
                return Err(Error::EmptyInput);
            }
            model.languages.push(c.language_id.clone());
            match config.backend {
                Backend::LmScore => {
                    let cfg = LmConfig::new(Level::Char, config.order, Smoothing::KneserNey);
                    model.models.push(NGramModel::train(c, cfg)?);
                }
                Backend::RankProfile => model.profiles.push(RankProfile::build(
                    c.tokens(),
                    config.profile_max_n,
                    config.profile_size,
                )),
            }
        }
        Ok(model)
    }

    /// Reassembles a trained LM-score identifier.
    pub fn from_models(config: IdentifierConfig, languages: Vec<String>, models: Vec<NGramModel>) -> Result<Self> {
        check_parts(&languages, models.len())?;
        Ok(IdentifierModel {
            config: IdentifierConfig {
                backend: Backend::LmScore,
                ..config
            },
            languages,
            models,
            profiles: Vec::new(),
        })
    }

    /// Reassembles a trained rank-profile identifier.
    pub fn from_profiles(config: IdentifierConfig, languages: Vec<String>, profiles: Vec<RankProfile>) -> Result<Self> {
        check_parts(&languages, profiles.len())?;
        Ok(IdentifierModel {
            config: IdentifierConfig {
                backend: Backend::RankProfile,
                ..config
            },
            languages,
            models: Vec::new(),
            profiles,
        })
    }

    pub fn config(&self) -> &IdentifierConfig {
        &self.config
    }

    pub fn languages(&self) -> &[String] {
        &self.languages
    }

    pub fn models(&self) -> &[NGramModel] {
        &self.models
    }

    pub fn profiles(&self) -> &[RankProfile] {
        &self.profiles
    }

    pub fn identify(&self, text: &str) -> Result<Prediction> {
        let doc = tokenize(text);
        if doc.is_empty() {
            return Err(Error::EmptyInput);
        }
        let scores: Vec<f64> = match self.config.backend {
            Backend::LmScore => self
                .models
                .iter()
                .map(|m| {
                    let (total, n) = doc.sentences().iter().fold((0.0, 0usize), |(t, n), s| {
                        let r = m.sequence_logprob(s);
                        (t + r.total_logprob, n + r.token_count)
                    });
                    total / n as f64
                })
                .collect(),
            Backend::RankProfile => {
                let d = RankProfile::build(doc.tokens(), self.config.profile_max_n, self.config.profile_size);
                self.profiles
                    .iter()
                    .map(|p| p.distance(&d, self.config.profile_size) as f64)
                    .collect()
            }
        };
        let higher_wins = self.config.backend == Backend::LmScore;
        let mut best = 0;
        for (i, &s) in scores.iter().enumerate().skip(1) {
            let better = if higher_wins { s > scores[best] } else { s < scores[best] };
            if better {
                best = i;
            }
        }
        Ok(Prediction {
            language: self.languages[best].clone(),
            scores: self.languages.iter().cloned().zip(scores).collect(),
        })
    }

    /// Scores labelled sentences `(language, text)`.
    pub fn evaluate<S: AsRef<str>>(&self, test: &[(S, S)]) -> Result<ClassificationReport> {
        if test.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut gold = Vec::with_capacity(test.len());
        let mut predicted = Vec::with_capacity(test.len());
        for (label, text) in test {
            let label = label.as_ref();
            if !self.languages.iter().any(|l| l == label) {
                return Err(Error::UnknownLabel(label.to_string()));
            }
            gold.push(label.to_string());
            predicted.push(self.identify(text.as_ref())?.language);
        }
        ClassificationReport::from_pairs(&self.languages, &gold, &predicted)
    }
}

fn check_parts(languages: &[String], parts: usize) -> Result<()> {
    if languages.len() < 2 {
        return Err(Error::TooFewLanguages {
            needed: 2,
            got: languages.len(),
        });
    }
    if languages.len() != parts {
        return Err(Error::LengthMismatch {
            left: languages.len(),
            right: parts,
        });
    }
    if languages.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("languages must be sorted and unique"));
    }
    Ok(())
}

pub fn train_identifier(corpora: &[Corpus], config: IdentifierConfig) -> Result<IdentifierModel> {
    IdentifierModel::train(corpora, config)
}

/// Seeded per-language split: `fraction` of each corpus for training, the
/// rest returned as `(language, sentence text)` test items.
pub fn train_test_split(corpora: &[Corpus], fraction: f64, seed: u64) -> (Vec<Corpus>, Vec<(String, String)>) {
    let mut train = Vec::with_capacity(corpora.len());
    let mut test = Vec::new();
    for c in corpora {
        let idx: Vec<usize> = (0..c.sentence_count()).collect();
        let (a, b) = shuffle_split(&idx, fraction, derive_seed(seed, &c.language_id));
        train.push(c.select(&a));
        for i in b {
            test.push((c.language_id.clone(), c.sentences()[i].text()));
        }
    }
    (train, test)
}
