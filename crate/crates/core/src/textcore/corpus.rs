use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::clean::DEFAULT_PUNCT_DETACH;

/// One tokenized sentence. Tokens are non-empty and whitespace-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sentence {
    tokens: Vec<String>,
}

impl Sentence {
    /// Builds a sentence, splitting any token that contains whitespace and
    /// discarding empty pieces.
    pub fn new<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let tokens = tokens
            .into_iter()
            .flat_map(|t| {
                t.as_ref()
                    .split_whitespace()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
            })
            .collect();
        Sentence { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// An ordered collection of sentences in one language.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub language_id: String,
    pub source_tag: String,
    sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn new(language_id: impl Into<String>, sentences: Vec<Sentence>) -> Self {
        Corpus {
            language_id: language_id.into(),
            source_tag: String::new(),
            sentences: sentences.into_iter().filter(|s| !s.is_empty()).collect(),
        }
    }

    /// Tokenizes `text` (one sentence per line) with the default
    /// punctuation list.
    pub fn from_text(language_id: impl Into<String>, text: &str) -> Self {
        let mut c = tokenize(text);
        c.language_id = language_id.into();
        c
    }

    pub fn with_source(mut self, source_tag: impl Into<String>) -> Self {
        self.source_tag = source_tag.into();
        self
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// All tokens in corpus order.
    pub fn tokens(&self) -> impl Iterator<Item = &str> + '_ {
        self.sentences
            .iter()
            .flat_map(|s| s.tokens.iter().map(String::as_str))
    }

    /// The first `n` sentences as a new corpus.
    pub fn truncated(&self, n: usize) -> Corpus {
        Corpus {
            language_id: self.language_id.clone(),
            source_tag: self.source_tag.clone(),
            sentences: self.sentences.iter().take(n).cloned().collect(),
        }
    }

    /// A corpus over a subset of sentences, by index.
    pub fn select(&self, indices: &[usize]) -> Corpus {
        Corpus {
            language_id: self.language_id.clone(),
            source_tag: self.source_tag.clone(),
            sentences: indices.iter().map(|&i| self.sentences[i].clone()).collect(),
        }
    }

    /// One sentence per line, tokens separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(&s.text());
            out.push('\n');
        }
        out
    }
}

/// Tokenizes one-sentence-per-line text, detaching the default
/// punctuation.
pub fn tokenize(text: &str) -> Corpus {
    tokenize_with(text, &DEFAULT_PUNCT_DETACH)
}

/// Tokenizes with an explicit list of characters to peel off word edges.
pub fn tokenize_with(text: &str, detach: &[char]) -> Corpus {
    let sentences = text
        .lines()
        .map(|line| {
            let mut tokens = Vec::new();
            for raw in line.split_whitespace() {
                split_token(raw, detach, &mut tokens);
            }
            Sentence { tokens }
        })
        .filter(|s| !s.is_empty())
        .collect();
    Corpus {
        language_id: String::new(),
        source_tag: String::new(),
        sentences,
    }
}

fn split_token(raw: &str, detach: &[char], out: &mut Vec<String>) {
    let mut core = raw;
    let mut leading = Vec::new();
    while let Some(c) = core.chars().next().filter(|c| detach.contains(c)) {
        leading.push(c);
        core = &core[c.len_utf8()..];
    }
    let mut trailing = Vec::new();
    while let Some(c) = core.chars().next_back().filter(|c| detach.contains(c)) {
        trailing.push(c);
        core = &core[..core.len() - c.len_utf8()];
    }
    out.extend(leading.into_iter().map(String::from));
    if !core.is_empty() {
        out.push(core.to_string());
    }
    out.extend(trailing.into_iter().rev().map(String::from));
}
