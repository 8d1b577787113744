//! Linear sequence labeling: an averaged structured perceptron with Viterbi
//! decoding, used for POS tagging and BIO chunking.
//!
//! Feature templates are cumulative:
//!
//! | level | features added at position `i` |
//! |-------|--------------------------------|
//! | 0 | `w0=W` |
//! | 1 | `w-1=W`, `w-2=W` |
//! | 2 | `w+1=W`, `w+2=W` |
//! | 3 | transition `t-1=T`; with gold POS present also `p0=P`, `p-1=P`, `p+1=P` |
//! | 4 | `w-1w0=A\|B`, `w0w+1=A\|B` |
//!
//! Positions before the sentence read `<s>` and positions after it read
//! `</s>`. The transition feature for the first token is `t-1=<s>`.
//! Values are escaped (`\` as `\\`, `|` as `\|`, `<` as `\<`) so no token
//! can collide with a placeholder or a bigram separator.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::annotio::{SsfChunk, SsfDocument, SsfNode, SsfSentence, SsfToken};
use crate::collections::HashMap;
use crate::error::{Error, Result};
use crate::metrics::ClassificationReport;
use crate::sampling;

pub const MAX_LEVEL: u8 = 4;
pub const DEFAULT_EPOCHS: usize = 10;
pub const ALGORITHM: &str = "averaged-perceptron";
const START: &str = "<s>";
const END: &str = "</s>";
const TRANSITION: &str = "t-1=";

/// One sentence with an optional POS layer and an optional BIO chunk layer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TaggedSentence {
    pub id: String,
    pub tokens: Vec<String>,
    pub pos: Option<Vec<String>>,
    pub chunks: Option<Vec<String>>,
    /// Addresses and feature structures of the SSF source, if any.
    pub layout: Option<SsfLayout>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SsfLayout {
    pub bio: Vec<String>,
    pub token_addresses: Vec<String>,
    pub token_fs: Vec<Option<String>>,
    pub chunk_addresses: Vec<String>,
    pub chunk_fs: Vec<Option<String>>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<String>, pos: Option<Vec<String>>, chunks: Option<Vec<String>>) -> Self {
        TaggedSentence {
            id: String::new(),
            tokens,
            pos,
            chunks,
            layout: None,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The label sequence for `target`.
    pub fn labels(&self, target: Target) -> Result<&[String]> {
        let layer = match target {
            Target::Pos => self.pos.as_deref(),
            Target::Chunk => self.chunks.as_deref(),
        };
        let layer = layer.ok_or_else(|| Error::invalid(format!("sentence {:?} lacks the {target:?} layer", self.id)))?;
        if layer.len() != self.tokens.len() {
            return Err(Error::LengthMismatch {
                left: self.tokens.len(),
                right: layer.len(),
            });
        }
        Ok(layer)
    }

    /// Gold POS usable as chunking features.
    fn pos_features(&self, target: Target) -> Option<&[String]> {
        match target {
            Target::Chunk => self.pos.as_deref().filter(|p| p.len() == self.tokens.len()),
            Target::Pos => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Pos,
    Chunk,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '\\' | '|' | '<') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn at(tokens: &[String], i: isize) -> String {
    if i < 0 {
        START.to_string()
    } else if i as usize >= tokens.len() {
        END.to_string()
    } else {
        escape(&tokens[i as usize])
    }
}

/// Observation features at position `i`. The level-3 transition feature is
/// not included here since it depends on the previous tag.
pub fn extract_features(tokens: &[String], pos: Option<&[String]>, i: usize, level: u8) -> Vec<String> {
    let i = i as isize;
    let w = |d: isize| at(tokens, i + d);
    let mut f = vec![format!("w0={}", w(0))];
    if level >= 1 {
        f.push(format!("w-1={}", w(-1)));
        f.push(format!("w-2={}", w(-2)));
    }
    if level >= 2 {
        f.push(format!("w+1={}", w(1)));
        f.push(format!("w+2={}", w(2)));
    }
    if level >= 3 {
        if let Some(p) = pos {
            f.push(format!("p0={}", at(p, i)));
            f.push(format!("p-1={}", at(p, i - 1)));
            f.push(format!("p+1={}", at(p, i + 1)));
        }
    }
    if level >= 4 {
        f.push(format!("w-1w0={}|{}", w(-1), w(0)));
        f.push(format!("w0w+1={}|{}", w(0), w(1)));
    }
    f
}

/// `O`, `B-X` or `I-X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bio<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

fn parse_bio(tag: &str) -> Option<Bio<'_>> {
    if tag == "O" {
        Some(Bio::Outside)
    } else if let Some(x) = tag.strip_prefix("B-").filter(|x| !x.is_empty()) {
        Some(Bio::Begin(x))
    } else {
        tag.strip_prefix("I-").filter(|x| !x.is_empty()).map(Bio::Inside)
    }
}

fn bio_allowed(prev: Option<Bio<'_>>, cur: Bio<'_>) -> bool {
    match cur {
        Bio::Inside(x) => matches!(prev, Some(Bio::Begin(y)) | Some(Bio::Inside(y)) if y == x),
        _ => true,
    }
}

/// True when every tag is `O`, `B-X` or `I-X` and no `I-X` follows
/// anything but `B-X` or `I-X`.
pub fn is_well_formed_bio<S: AsRef<str>>(tags: &[S]) -> bool {
    let mut prev = None;
    for t in tags {
        let Some(cur) = parse_bio(t.as_ref()) else {
            return false;
        };
        if !bio_allowed(prev, cur) {
            return false;
        }
        prev = Some(cur);
    }
    true
}

/// `O` followed by `B-X`, `I-X` for each chunk tag.
pub fn bio_tagset<S: AsRef<str>>(chunk_tags: &[S]) -> Vec<String> {
    let mut out = vec!["O".to_string()];
    for t in chunk_tags {
        out.push(format!("B-{}", t.as_ref()));
        out.push(format!("I-{}", t.as_ref()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BioMode {
    Strict,
    /// Orphan `I-X` tags become `B-X`.
    Lenient,
}

/// Checks a BIO sequence, repairing orphans in lenient mode. Returns the
/// sequence and the number of repairs.
pub fn repair_bio<S: AsRef<str>>(tags: &[S], mode: BioMode) -> Result<(Vec<String>, usize)> {
    let mut out: Vec<String> = Vec::with_capacity(tags.len());
    let mut repairs = 0;
    for (i, t) in tags.iter().enumerate() {
        let t = t.as_ref();
        let malformed = || Error::MalformedBio {
            position: i,
            tag: t.to_string(),
        };
        let cur = parse_bio(t).ok_or_else(malformed)?;
        let prev = out.last().and_then(|p| parse_bio(p));
        if bio_allowed(prev, cur) {
            out.push(t.to_string());
        } else if mode == BioMode::Lenient {
            let Bio::Inside(x) = cur else { unreachable!() };
            out.push(format!("B-{x}"));
            repairs += 1;
        } else {
            return Err(malformed());
        }
    }
    Ok((out, repairs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainConfig {
    pub level: u8,
    pub epochs: usize,
    pub seed: u64,
    pub averaged: bool,
    /// Declared tagset in tie-break order; defaults to the sorted gold tags.
    pub tagset: Option<Vec<String>>,
    pub target: Target,
}

impl TrainConfig {
    pub fn new(target: Target, level: u8) -> Self {
        TrainConfig {
            level,
            epochs: DEFAULT_EPOCHS,
            seed: 0,
            averaged: true,
            tagset: None,
            target,
        }
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tagset(mut self, tagset: Vec<String>) -> Self {
        self.tagset = Some(tagset);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TrainMeta {
    pub epochs: usize,
    pub seed: u64,
    /// Sentences decoded wrongly per epoch.
    pub mistakes: Vec<usize>,
}

/// A trained linear tagger. Emission weights are indexed by feature and
/// tag; transition weights by previous tag (or start) and tag.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggerModel {
    tagset: Vec<String>,
    level: u8,
    averaged: bool,
    bio_constrained: bool,
    features: HashMap<String, usize>,
    emission: Vec<f64>,
    /// `(tags + 1) x tags`; the last row is the start state.
    transition: Vec<f64>,
    meta: TrainMeta,
}

impl TaggerModel {
    /// Builds a model from `(feature, tag, weight)` triples. Transition
    /// weights use features `t-1=T` and `t-1=<s>`.
    pub fn from_weights(
        tagset: Vec<String>,
        level: u8,
        averaged: bool,
        weights: &[(String, String, f64)],
    ) -> Result<Self> {
        if tagset.is_empty() {
            return Err(Error::EmptyInput);
        }
        if level > MAX_LEVEL {
            return Err(Error::invalid(format!("template level {level} exceeds {MAX_LEVEL}")));
        }
        let mut m = TaggerModel::empty(tagset, level, averaged);
        for (feature, tag, w) in weights {
            let t = m.tag_index(tag)?;
            if let Some(prev) = feature.strip_prefix(TRANSITION) {
                let p = if prev == START {
                    m.tagset.len()
                } else {
                    m.tag_index(&unescape(prev))?
                };
                m.transition[p * m.tagset.len() + t] = *w;
            } else {
                let f = m.intern(feature);
                m.emission[f * m.tagset.len() + t] = *w;
            }
        }
        Ok(m)
    }

    fn empty(tagset: Vec<String>, level: u8, averaged: bool) -> Self {
        let k = tagset.len();
        let bio_constrained = tagset.iter().all(|t| parse_bio(t).is_some())
            && tagset.iter().any(|t| t.starts_with("I-"));
        TaggerModel {
            tagset,
            level,
            averaged,
            bio_constrained,
            features: HashMap::default(),
            emission: Vec::new(),
            transition: vec![0.0; (k + 1) * k],
            meta: TrainMeta::default(),
        }
    }

    fn intern(&mut self, feature: &str) -> usize {
        if let Some(&f) = self.features.get(feature) {
            return f;
        }
        let f = self.features.len();
        self.features.insert(feature.to_string(), f);
        self.emission.resize(self.emission.len() + self.tagset.len(), 0.0);
        f
    }

    fn tag_index(&self, tag: &str) -> Result<usize> {
        self.tagset
            .iter()
            .position(|t| t == tag)
            .ok_or_else(|| Error::UnknownLabel(tag.to_string()))
    }

    pub fn tagset(&self) -> &[String] {
        &self.tagset
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn averaged(&self) -> bool {
        self.averaged
    }

    /// Whether decoding forbids ill-formed BIO transitions. Set when every
    /// tag has BIO form.
    pub fn bio_constrained(&self) -> bool {
        self.bio_constrained
    }

    pub fn meta(&self) -> &TrainMeta {
        &self.meta
    }

    pub fn with_meta(mut self, meta: TrainMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Non-zero weights as `(feature, tag, weight)`, sorted by feature and
    /// then tagset order.
    pub fn weights(&self) -> Vec<(String, String, f64)> {
        let k = self.tagset.len();
        let mut names: Vec<(&String, usize)> = self.features.iter().map(|(s, &f)| (s, f)).collect();
        names.sort();
        let mut out = Vec::new();
        for (name, f) in names {
            for t in 0..k {
                let w = self.emission[f * k + t];
                if w != 0.0 {
                    out.push((name.clone(), self.tagset[t].clone(), w));
                }
            }
        }
        let mut trans = Vec::new();
        for p in 0..=k {
            let prev = if p == k {
                START.to_string()
            } else {
                escape(&self.tagset[p])
            };
            for t in 0..k {
                let w = self.transition[p * k + t];
                if w != 0.0 {
                    trans.push((format!("{TRANSITION}{prev}"), self.tagset[t].clone(), w));
                }
            }
        }
        trans.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(trans);
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn feature_ids(&self, tokens: &[String], pos: Option<&[String]>) -> Vec<Vec<usize>> {
        (0..tokens.len())
            .map(|i| {
                extract_features(tokens, pos, i, self.level)
                    .iter()
                    .filter_map(|f| self.features.get(f.as_str()).copied())
                    .collect()
            })
            .collect()
    }

    fn emissions(&self, feats: &[Vec<usize>], weights: &[f64]) -> Vec<f64> {
        let k = self.tagset.len();
        let mut e = vec![0.0; feats.len() * k];
        for (i, fs) in feats.iter().enumerate() {
            let row = &mut e[i * k..(i + 1) * k];
            for &f in fs {
                for (r, w) in row.iter_mut().zip(&weights[f * k..(f + 1) * k]) {
                    *r += w;
                }
            }
        }
        e
    }

    fn allowed(&self, prev: Option<usize>, cur: usize) -> bool {
        !self.bio_constrained
            || bio_allowed(prev.and_then(|p| parse_bio(&self.tagset[p])), parse_bio(&self.tagset[cur]).unwrap())
    }

    /// Viterbi over precomputed emissions. Ties go to the lower tag index.
    fn viterbi(&self, emit: &[f64], n: usize, transition: &[f64], constrained: bool) -> (Vec<usize>, f64) {
        let k = self.tagset.len();
        if n == 0 {
            return (Vec::new(), 0.0);
        }
        let use_trans = self.level >= 3;
        let trans = |p: usize, t: usize| if use_trans { transition[p * k + t] } else { 0.0 };
        let ok = |p: Option<usize>, t: usize| !constrained || self.allowed(p, t);
        let mut score = vec![f64::NEG_INFINITY; n * k];
        let mut back = vec![0usize; n * k];
        for t in 0..k {
            if ok(None, t) {
                score[t] = emit[t] + trans(k, t);
            }
        }
        for i in 1..n {
            for t in 0..k {
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for p in 0..k {
                    let s = score[(i - 1) * k + p];
                    if s == f64::NEG_INFINITY || !ok(Some(p), t) {
                        continue;
                    }
                    let s = s + trans(p, t);
                    if s > best {
                        best = s;
                        arg = p;
                    }
                }
                if best > f64::NEG_INFINITY {
                    score[i * k + t] = best + emit[i * k + t];
                    back[i * k + t] = arg;
                }
            }
        }
        let last = &score[(n - 1) * k..];
        let mut arg = 0;
        for t in 1..k {
            if last[t] > last[arg] {
                arg = t;
            }
        }
        let best = last[arg];
        if best == f64::NEG_INFINITY && constrained {
            return self.viterbi(emit, n, transition, false);
        }
        let mut path = vec![arg; n];
        for i in (1..n).rev() {
            path[i - 1] = back[i * k + path[i]];
        }
        (path, best)
    }

    /// Best tag sequence and its score.
    pub fn decode_scored(&self, tokens: &[String], pos: Option<&[String]>) -> (Vec<String>, f64) {
        let feats = self.feature_ids(tokens, pos);
        let emit = self.emissions(&feats, &self.emission);
        let (path, s) = self.viterbi(&emit, tokens.len(), &self.transition, self.bio_constrained);
        (path.into_iter().map(|t| self.tagset[t].clone()).collect(), s)
    }

    pub fn decode(&self, tokens: &[String], pos: Option<&[String]>) -> Vec<String> {
        self.decode_scored(tokens, pos).0
    }

    /// Decodes the sentence for `target`, using gold POS as features when
    /// chunking.
    pub fn tag(&self, sentence: &TaggedSentence, target: Target) -> Vec<String> {
        self.decode(&sentence.tokens, sentence.pos_features(target))
    }

    /// Linear score of a given tag sequence.
    pub fn score(&self, tokens: &[String], pos: Option<&[String]>, tags: &[String]) -> Result<f64> {
        if tags.len() != tokens.len() {
            return Err(Error::LengthMismatch {
                left: tokens.len(),
                right: tags.len(),
            });
        }
        let k = self.tagset.len();
        let feats = self.feature_ids(tokens, pos);
        let emit = self.emissions(&feats, &self.emission);
        let mut s = 0.0;
        let mut prev = k;
        for (i, tag) in tags.iter().enumerate() {
            let t = self.tag_index(tag)?;
            s += emit[i * k + t];
            if self.level >= 3 {
                s += self.transition[prev * k + t];
            }
            prev = t;
        }
        Ok(s)
    }
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

struct Averager {
    w: Vec<f64>,
    u: Vec<f64>,
}

impl Averager {
    fn new(n: usize) -> Self {
        Averager {
            w: vec![0.0; n],
            u: vec![0.0; n],
        }
    }

    fn add(&mut self, i: usize, delta: f64, c: f64) {
        self.w[i] += delta;
        self.u[i] += c * delta;
    }

    fn finish(self, c: f64, averaged: bool) -> Vec<f64> {
        if !averaged {
            return self.w;
        }
        self.w.iter().zip(&self.u).map(|(w, u)| w - u / c).collect()
    }
}

/// Trains an averaged structured perceptron. Sentences are visited in a
/// seeded shuffle each epoch.
pub fn train_tagger(gold: &[TaggedSentence], config: &TrainConfig) -> Result<TaggerModel> {
    if gold.iter().all(TaggedSentence::is_empty) {
        return Err(Error::EmptyInput);
    }
    if config.level > MAX_LEVEL {
        return Err(Error::invalid(format!("template level {} exceeds {MAX_LEVEL}", config.level)));
    }
    let tagset = match &config.tagset {
        Some(t) if t.is_empty() => return Err(Error::EmptyInput),
        Some(t) => t.clone(),
        None => {
            let mut t: Vec<String> = Vec::new();
            for s in gold {
                t.extend(s.labels(config.target)?.iter().cloned());
            }
            t.sort();
            t.dedup();
            t
        }
    };
    let mut model = TaggerModel::empty(tagset, config.level, config.averaged);
    let k = model.tagset.len();
    let tag_ids: HashMap<String, usize> = model.tagset.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();

    let mut data: Vec<(Vec<Vec<usize>>, Vec<usize>)> = Vec::with_capacity(gold.len());
    for s in gold {
        let labels = s.labels(config.target)?;
        if s.is_empty() {
            continue;
        }
        let tags = labels
            .iter()
            .map(|t| tag_ids.get(t.as_str()).copied().ok_or_else(|| Error::UnknownLabel(t.clone())))
            .collect::<Result<Vec<_>>>()?;
        let pos = s.pos_features(config.target);
        let feats = (0..s.len())
            .map(|i| {
                extract_features(&s.tokens, pos, i, config.level)
                    .iter()
                    .map(|f| model.intern(f))
                    .collect()
            })
            .collect();
        data.push((feats, tags));
    }

    let mut em = Averager::new(model.emission.len());
    let mut tr = Averager::new(model.transition.len());
    let mut rng = sampling::rng(config.seed);
    let mut c = 1.0;
    let mut mistakes = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        let order = sampling::permutation(&mut rng, data.len());
        let mut wrong = 0;
        for idx in order {
            let (feats, gold_tags) = &data[idx];
            let n = gold_tags.len();
            let emit = model.emissions(feats, &em.w);
            let (pred, _) = model.viterbi(&emit, n, &tr.w, model.bio_constrained);
            if pred != *gold_tags {
                wrong += 1;
                for i in 0..n {
                    let (g, p) = (gold_tags[i], pred[i]);
                    if g != p {
                        for &f in &feats[i] {
                            em.add(f * k + g, 1.0, c);
                            em.add(f * k + p, -1.0, c);
                        }
                    }
                    if config.level >= 3 {
                        let pg = if i == 0 { k } else { gold_tags[i - 1] };
                        let pp = if i == 0 { k } else { pred[i - 1] };
                        if (pg, g) != (pp, p) {
                            tr.add(pg * k + g, 1.0, c);
                            tr.add(pp * k + p, -1.0, c);
                        }
                    }
                }
            }
            c += 1.0;
        }
        mistakes.push(wrong);
        if wrong == 0 {
            break;
        }
    }
    model.emission = em.finish(c, config.averaged);
    model.transition = tr.finish(c, config.averaged);
    model.meta = TrainMeta {
        epochs: config.epochs,
        seed: config.seed,
        mistakes,
    };
    Ok(model)
}

/// Token-level report over the model's tagset.
pub fn evaluate_tagger(model: &TaggerModel, gold: &[TaggedSentence], target: Target) -> Result<ClassificationReport> {
    let mut g = Vec::new();
    let mut p = Vec::new();
    for s in gold {
        let labels = s.labels(target)?;
        g.extend(labels.iter().cloned());
        p.extend(model.tag(s, target));
    }
    if g.is_empty() {
        return Err(Error::EmptyInput);
    }
    ClassificationReport::from_pairs(model.tagset(), &g, &p)
}

/// Trains and evaluates one model per template level.
pub fn ablate(
    train: &[TaggedSentence],
    test: &[TaggedSentence],
    config: &TrainConfig,
    levels: &[u8],
) -> Result<Vec<(u8, ClassificationReport)>> {
    levels
        .iter()
        .map(|&level| {
            let c = TrainConfig { level, ..config.clone() };
            let m = train_tagger(train, &c)?;
            Ok((level, evaluate_tagger(&m, test, config.target)?))
        })
        .collect()
}

/// Chunk trees as BIO token tags. Chunks must not nest.
pub fn to_bio(doc: &SsfDocument) -> Result<Vec<TaggedSentence>> {
    doc.sentences.iter().map(sentence_to_bio).collect()
}

fn sentence_to_bio(s: &SsfSentence) -> Result<TaggedSentence> {
    let mut tokens = Vec::new();
    let mut pos = Vec::new();
    let mut bio = Vec::new();
    let mut layout = SsfLayout::default();
    let mut push = |t: &SsfToken, tag: String, layout: &mut SsfLayout| {
        tokens.push(t.token.clone());
        pos.push(t.pos.clone());
        bio.push(tag);
        layout.token_addresses.push(t.address.clone());
        layout.token_fs.push(t.fs.clone());
    };
    for node in &s.nodes {
        match node {
            SsfNode::Token(t) => push(t, "O".to_string(), &mut layout),
            SsfNode::Chunk(c) => {
                layout.chunk_addresses.push(c.address.clone());
                layout.chunk_fs.push(c.fs.clone());
                for (j, child) in c.children.iter().enumerate() {
                    let SsfNode::Token(t) = child else {
                        return Err(Error::invalid(format!(
                            "sentence {}: nested chunk under {} cannot be encoded as BIO",
                            s.id, c.address
                        )));
                    };
                    let prefix = if j == 0 { "B-" } else { "I-" };
                    push(t, format!("{prefix}{}", c.tag), &mut layout);
                }
            }
        }
    }
    layout.bio = bio.clone();
    Ok(TaggedSentence {
        id: s.id.clone(),
        tokens,
        pos: Some(pos),
        chunks: Some(bio),
        layout: Some(layout),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FromBio {
    pub document: SsfDocument,
    pub repairs: usize,
}

/// Rebuilds chunk trees from BIO tags. The SSF layout carried by a
/// sentence is reused when its BIO layer is unchanged; otherwise addresses
/// are regenerated as `k` for top-level nodes and `k.j` inside chunks.
pub fn from_bio(sentences: &[TaggedSentence], mode: BioMode) -> Result<FromBio> {
    let mut doc = SsfDocument::default();
    let mut repairs = 0;
    for (si, s) in sentences.iter().enumerate() {
        let chunks = s.labels(Target::Chunk)?;
        let pos = s.labels(Target::Pos)?;
        let (bio, r) = repair_bio(chunks, mode)?;
        repairs += r;
        let layout = s.layout.as_ref().filter(|l| l.bio == bio);
        let token_fs = |i: usize| s.layout.as_ref().and_then(|l| l.token_fs.get(i).cloned().flatten());
        let mut nodes: Vec<SsfNode> = Vec::new();
        let mut chunk_no = 0;
        for (i, tag) in bio.iter().enumerate() {
            let bio_tag = parse_bio(tag).unwrap();
            let top = nodes.len();
            let token = |address: String| SsfToken {
                address,
                token: s.tokens[i].clone(),
                pos: pos[i].clone(),
                fs: token_fs(i),
            };
            match bio_tag {
                Bio::Outside => {
                    let addr = layout.map_or_else(|| (top + 1).to_string(), |l| l.token_addresses[i].clone());
                    nodes.push(SsfNode::Token(token(addr)));
                }
                Bio::Begin(x) => {
                    let addr = layout.map_or_else(|| (top + 1).to_string(), |l| l.chunk_addresses[chunk_no].clone());
                    let fs = layout.and_then(|l| l.chunk_fs[chunk_no].clone());
                    chunk_no += 1;
                    let taddr = layout.map_or_else(|| format!("{addr}.1"), |l| l.token_addresses[i].clone());
                    nodes.push(SsfNode::Chunk(SsfChunk {
                        address: addr,
                        tag: x.to_string(),
                        fs,
                        children: vec![SsfNode::Token(token(taddr))],
                    }));
                }
                Bio::Inside(_) => {
                    let Some(SsfNode::Chunk(c)) = nodes.last_mut() else {
                        unreachable!()
                    };
                    let taddr = layout.map_or_else(
                        || format!("{}.{}", c.address, c.children.len() + 1),
                        |l| l.token_addresses[i].clone(),
                    );
                    c.children.push(SsfNode::Token(token(taddr)));
                }
            }
        }
        let id = if s.id.is_empty() { (si + 1).to_string() } else { s.id.clone() };
        doc.sentences.push(SsfSentence { id, nodes });
    }
    Ok(FromBio { document: doc, repairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotio::{parse_ssf, serialize_ssf};

    fn s(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn feature_templates() {
        let ab = s(&["a", "b"]);
        assert_eq!(extract_features(&ab, None, 0, 0), ["w0=a"]);
        let f = extract_features(&ab, None, 0, 2);
        assert_eq!(f, ["w0=a", "w-1=<s>", "w-2=<s>", "w+1=b", "w+2=</s>"]);
        let abc = s(&["a", "b", "c"]);
        let f = extract_features(&abc, None, 1, 4);
        assert_eq!(
            f,
            ["w0=b", "w-1=a", "w-2=<s>", "w+1=c", "w+2=</s>", "w-1w0=a|b", "w0w+1=b|c"]
        );
        let p = s(&["NN", "VM", "SYM"]);
        let f = extract_features(&abc, Some(&p), 0, 3);
        assert!(f.contains(&"p0=NN".to_string()) && f.contains(&"p-1=<s>".to_string()));
        assert!(!extract_features(&abc, Some(&p), 0, 2).iter().any(|x| x.starts_with('p')));
    }

    #[test]
    fn features_are_collision_free() {
        let a = extract_features(&s(&["x|y", "z"]), None, 1, 4);
        let b = extract_features(&s(&["x", "y|z"]), None, 1, 4);
        let bigram = |v: &[String]| v.iter().find(|f| f.starts_with("w-1w0=")).cloned().unwrap();
        assert_eq!(bigram(&a), "w-1w0=x\\|y|z");
        assert_eq!(bigram(&b), "w-1w0=x|y\\|z");
        let lit = extract_features(&s(&["<s>"]), None, 0, 1);
        assert_eq!(lit, ["w0=\\<s>", "w-1=<s>", "w-2=<s>"]);
    }

    #[test]
    fn decode_example() {
        let w = vec![
            ("w0=a".to_string(), "X".to_string(), 1.0),
            ("w0=b".to_string(), "Y".to_string(), 1.0),
            ("t-1=X".to_string(), "Y".to_string(), 1.0),
        ];
        let m = TaggerModel::from_weights(s(&["X", "Y"]), 3, false, &w).unwrap();
        let (tags, score) = m.decode_scored(&s(&["a", "b"]), None);
        assert_eq!(tags, ["X", "Y"]);
        assert_eq!(score, 3.0);
        assert_eq!(m.weights(), {
            let mut w = w.clone();
            w.sort_by(|a, b| a.0.cmp(&b.0));
            w
        });
    }

    #[test]
    fn zero_weights_pick_first_tag() {
        let m = TaggerModel::from_weights(s(&["Z", "A"]), 4, false, &[]).unwrap();
        assert_eq!(m.decode(&s(&["p", "q", "r"]), None), ["Z", "Z", "Z"]);
        let w = [("w0=q".to_string(), "A".to_string(), 0.5)];
        let m = TaggerModel::from_weights(s(&["Z", "A"]), 0, false, &w).unwrap();
        assert_eq!(m.decode(&s(&["q"]), None), ["A"]);
    }

    #[test]
    fn separable_corpus_converges() {
        let data: Vec<TaggedSentence> = [("the dog runs", "D N V"), ("a cat sleeps", "D N V"), ("dog the", "N D")]
            .iter()
            .map(|(w, t)| {
                TaggedSentence::new(
                    w.split(' ').map(String::from).collect(),
                    Some(t.split(' ').map(String::from).collect()),
                    None,
                )
            })
            .collect();
        let m = train_tagger(&data, &TrainConfig::new(Target::Pos, 0).with_epochs(50)).unwrap();
        assert_eq!(*m.meta().mistakes.last().unwrap(), 0);
        let r = evaluate_tagger(&m, &data, Target::Pos).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.weighted_avg.f1, 1.0);

        let zero = train_tagger(&data, &TrainConfig::new(Target::Pos, 2).with_epochs(0)).unwrap();
        assert!(zero.weights().is_empty());
        assert_eq!(zero.decode(&s(&["dog"]), None), ["D"]);
    }

    #[test]
    fn unknown_gold_tag_is_rejected() {
        let data = [TaggedSentence::new(s(&["a"]), Some(s(&["NOPE"])), None)];
        let c = TrainConfig::new(Target::Pos, 0).with_tagset(s(&["NN"]));
        assert_eq!(train_tagger(&data, &c).unwrap_err(), Error::UnknownLabel("NOPE".into()));
    }

    #[test]
    fn bio_repair_modes() {
        assert!(is_well_formed_bio(&["B-NP", "I-NP", "O", "B-VGF"]));
        assert!(!is_well_formed_bio(&["O", "I-NP"]));
        assert!(!is_well_formed_bio(&["B-NP", "I-VGF"]));
        assert!(matches!(
            repair_bio(&["O", "I-NP"], BioMode::Strict),
            Err(Error::MalformedBio { position: 1, .. })
        ));
        let (fixed, n) = repair_bio(&["I-NP", "I-NP", "B-X", "I-Y"], BioMode::Lenient).unwrap();
        assert_eq!(fixed, ["B-NP", "I-NP", "B-X", "B-Y"]);
        assert_eq!(n, 2);
    }

    #[test]
    fn constrained_decode_never_emits_orphans() {
        let tagset = bio_tagset(&["NP"]);
        let w = [("w0=a".to_string(), "I-NP".to_string(), 5.0)];
        let m = TaggerModel::from_weights(tagset, 0, false, &w).unwrap();
        assert!(m.bio_constrained());
        let tags = m.decode(&s(&["a", "a"]), None);
        assert_eq!(tags, ["B-NP", "I-NP"]);
    }

    const CHUNKED: &str = "<Sentence id=\"3\">\n1\t((\tNP\n1.1\tlaikA\tNN\n1.2\tgeMxa\tNN\n\t))\n2\t((\tVGF\t<fs name='v'>\n2.1\tKelalasa\tVM\t<fs af='Kela,v'>\n\t))\n3\t((\tBLK\n3.1\t.\tSYM\n\t))\n</Sentence>\n";

    #[test]
    fn bio_round_trip() {
        let doc = parse_ssf(CHUNKED).unwrap();
        let bio = to_bio(&doc).unwrap();
        assert_eq!(bio[0].chunks.as_deref().unwrap(), ["B-NP", "I-NP", "B-VGF", "B-BLK"]);
        let back = from_bio(&bio, BioMode::Strict).unwrap();
        assert_eq!(back.repairs, 0);
        assert_eq!(serialize_ssf(&back.document), CHUNKED);

        let mut bare = bio.clone();
        bare[0].layout = None;
        let canon = serialize_ssf(&from_bio(&bare, BioMode::Strict).unwrap().document);
        assert_eq!(canon, CHUNKED.replace("\t<fs name='v'>", "").replace("\t<fs af='Kela,v'>", ""));
    }

    #[test]
    fn outside_tokens_are_o() {
        let doc = parse_ssf("<Sentence id=\"1\">\n1\ta\tNN\n2\t((\tNP\n2.1\tb\tNN\n\t))\n3\tc\tSYM\n</Sentence>\n").unwrap();
        let bio = to_bio(&doc).unwrap();
        assert_eq!(bio[0].chunks.as_deref().unwrap(), ["O", "B-NP", "O"]);
        let mut bare = bio.clone();
        bare[0].layout = None;
        assert_eq!(from_bio(&bare, BioMode::Strict).unwrap().document, doc);
    }
}
