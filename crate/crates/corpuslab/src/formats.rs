//! Versioned text formats for trained models and labeled data.
//!
//! Every model file starts with `#corpuslab-<kind>\tv1` followed by
//! `key\tvalue` header lines and a counted body block.

use std::fs;
use std::path::Path;

use corpuslab_core::langid::{Backend, IdentifierConfig, IdentifierModel, RankProfile};
use corpuslab_core::morphseg::SegmentationModel;
use corpuslab_core::ngramlm::{Level, LmConfig, NGramModel, Smoothing};
use corpuslab_core::tagger::{TaggedSentence, TaggerModel, TrainMeta, ALGORITHM};
use corpuslab_core::Error as CoreError;

use crate::config::{check_language_id, read_text, write_text};
use crate::error::{Error, Result};

pub const VERSION: &str = "v1";

fn parse_err(line: usize, message: impl Into<String>) -> CoreError {
    CoreError::Parse {
        line,
        message: message.into(),
    }
}

/// Line cursor with 1-based numbering for error messages.
struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    fn line_no(&self) -> usize {
        self.pos
    }

    fn next(&mut self) -> std::result::Result<&'a str, CoreError> {
        let l = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| parse_err(self.pos + 1, "unexpected end of file"))?;
        self.pos += 1;
        Ok(l)
    }

    fn header(&mut self, kind: &str) -> std::result::Result<(), CoreError> {
        let l = self.next()?;
        let expected = format!("#corpuslab-{kind}\t{VERSION}");
        if l != expected {
            return Err(parse_err(1, format!("expected header {expected:?}")));
        }
        Ok(())
    }

    fn field(&mut self, key: &str) -> std::result::Result<&'a str, CoreError> {
        let l = self.next()?;
        match l.split_once('\t') {
            Some((k, v)) if k == key => Ok(v),
            _ => Err(parse_err(self.line_no(), format!("expected field {key:?}"))),
        }
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str) -> std::result::Result<T, CoreError> {
        let v = self.field(key)?;
        v.parse()
            .map_err(|_| parse_err(self.line_no(), format!("{key}: cannot parse {v:?}")))
    }

    fn finish(&self) -> std::result::Result<(), CoreError> {
        if self.lines[self.pos..].iter().any(|l| !l.is_empty()) {
            return Err(parse_err(self.pos + 1, "trailing content"));
        }
        Ok(())
    }
}

pub fn level_name(l: Level) -> &'static str {
    match l {
        Level::Word => "word",
        Level::Char => "char",
    }
}

pub fn parse_level(s: &str) -> Option<Level> {
    match s {
        "word" => Some(Level::Word),
        "char" => Some(Level::Char),
        _ => None,
    }
}

pub fn smoothing_name(s: Smoothing) -> &'static str {
    match s {
        Smoothing::Mle => "mle",
        Smoothing::KatzBackoff => "backoff",
        Smoothing::KneserNey => "kn",
    }
}

pub fn parse_smoothing(s: &str) -> Option<Smoothing> {
    match s {
        "mle" => Some(Smoothing::Mle),
        "backoff" | "katz" => Some(Smoothing::KatzBackoff),
        "kn" | "kneser-ney" => Some(Smoothing::KneserNey),
        _ => None,
    }
}

/// Header, vocabulary in id order, then one block of raw counts per order.
pub fn write_lm(model: &NGramModel) -> String {
    let c = model.config();
    let mut out = format!("#corpuslab-lm\t{VERSION}\n");
    out.push_str(&format!("level\t{}\n", level_name(c.level)));
    out.push_str(&format!("order\t{}\n", c.order));
    out.push_str(&format!("smoothing\t{}\n", smoothing_name(c.smoothing)));
    match c.discount {
        Some(d) => out.push_str(&format!("discount\t{d}\n")),
        None => out.push_str("discount\tauto\n"),
    }
    out.push_str(&format!("sentence_end\t{}\n", c.sentence_end));
    let symbols = model.vocab().symbols();
    out.push_str(&format!("vocab\t{}\n", symbols.len()));
    for s in symbols {
        out.push_str(s);
        out.push('\n');
    }
    for k in 1..=c.order {
        let block = model.counts(k);
        out.push_str(&format!("ngrams\t{k}\t{}\n", block.len()));
        for (ids, count) in block {
            let ids: Vec<String> = ids.iter().map(u32::to_string).collect();
            out.push_str(&format!("{}\t{count}\n", ids.join(" ")));
        }
    }
    out
}

pub fn read_lm(text: &str) -> std::result::Result<NGramModel, CoreError> {
    let mut l = Lines::new(text);
    l.header("lm")?;
    let level = parse_level(l.field("level")?).ok_or_else(|| parse_err(2, "level must be word or char"))?;
    let order: usize = l.parsed("order")?;
    let smoothing =
        parse_smoothing(l.field("smoothing")?).ok_or_else(|| parse_err(4, "smoothing must be mle, backoff or kn"))?;
    let discount = match l.field("discount")? {
        "auto" => None,
        v => Some(v.parse::<f64>().map_err(|_| parse_err(5, "bad discount"))?),
    };
    let sentence_end: bool = l.parsed("sentence_end")?;
    let n: usize = l.parsed("vocab")?;
    let mut symbols = Vec::with_capacity(n);
    for _ in 0..n {
        symbols.push(l.next()?.to_string());
    }
    let mut blocks = Vec::with_capacity(order);
    for k in 1..=order {
        let head = l.next()?;
        let parts: Vec<&str> = head.split('\t').collect();
        if parts.len() != 3 || parts[0] != "ngrams" || parts[1] != k.to_string() {
            return Err(parse_err(l.line_no(), format!("expected ngrams block {k}")));
        }
        let m: usize = parts[2].parse().map_err(|_| parse_err(l.line_no(), "bad block size"))?;
        let mut block = Vec::with_capacity(m);
        for _ in 0..m {
            let row = l.next()?;
            let line = l.line_no();
            let (ids, count) = row.split_once('\t').ok_or_else(|| parse_err(line, "expected ids TAB count"))?;
            let ids = ids
                .split(' ')
                .map(|x| x.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| parse_err(line, "bad id"))?;
            let count: u64 = count.parse().map_err(|_| parse_err(line, "bad count"))?;
            block.push((ids, count));
        }
        blocks.push(block);
    }
    l.finish()?;
    let config = LmConfig {
        level,
        order,
        smoothing,
        discount,
        sentence_end,
    };
    NGramModel::from_counts(config, symbols, blocks)
}

pub fn write_tagger(model: &TaggerModel) -> String {
    let m = model.meta();
    let mut out = format!("#corpuslab-tagger\t{VERSION}\n");
    out.push_str(&format!("algorithm\t{ALGORITHM}\n"));
    out.push_str(&format!("level\t{}\n", model.level()));
    out.push_str(&format!("averaged\t{}\n", model.averaged()));
    out.push_str(&format!("epochs\t{}\n", m.epochs));
    out.push_str(&format!("seed\t{}\n", m.seed));
    let mistakes: Vec<String> = m.mistakes.iter().map(usize::to_string).collect();
    out.push_str(&format!("mistakes\t{}\n", mistakes.join(" ")));
    out.push_str(&format!("tagset\t{}\n", model.tagset().join("\t")));
    let weights = model.weights();
    out.push_str(&format!("weights\t{}\n", weights.len()));
    for (f, t, w) in weights {
        out.push_str(&format!("{f}\t{t}\t{w}\n"));
    }
    out
}

pub fn read_tagger(text: &str) -> std::result::Result<TaggerModel, CoreError> {
    let mut l = Lines::new(text);
    l.header("tagger")?;
    let algorithm = l.field("algorithm")?;
    if algorithm != ALGORITHM {
        return Err(parse_err(2, format!("unsupported algorithm {algorithm:?}")));
    }
    let level: u8 = l.parsed("level")?;
    let averaged: bool = l.parsed("averaged")?;
    let epochs: usize = l.parsed("epochs")?;
    let seed: u64 = l.parsed("seed")?;
    let mistakes = l
        .field("mistakes")?
        .split(' ')
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<std::result::Result<Vec<usize>, _>>()
        .map_err(|_| parse_err(l.line_no(), "bad mistakes list"))?;
    let tagset: Vec<String> = l.field("tagset")?.split('\t').map(String::from).collect();
    let n: usize = l.parsed("weights")?;
    let mut weights = Vec::with_capacity(n);
    for _ in 0..n {
        let row = l.next()?;
        let parts: Vec<&str> = row.split('\t').collect();
        let w = match parts.as_slice() {
            [_, _, w] => w.parse::<f64>().ok(),
            _ => None,
        }
        .ok_or_else(|| parse_err(l.line_no(), "expected feature TAB tag TAB weight"))?;
        weights.push((parts[0].to_string(), parts[1].to_string(), w));
    }
    l.finish()?;
    let meta = TrainMeta { epochs, seed, mistakes };
    Ok(TaggerModel::from_weights(tagset, level, averaged, &weights)?.with_meta(meta))
}

pub fn write_morph(model: &SegmentationModel) -> String {
    let mut out = format!("#corpuslab-morph\t{VERSION}\n");
    out.push_str(&format!("morph_cost\t{}\n", model.morph_cost()));
    out.push_str(&format!("char_cost\t{}\n", model.char_cost()));
    out.push_str(&format!("lexicon\t{}\n", model.lexicon().len()));
    for (m, c) in model.lexicon() {
        out.push_str(&format!("{m}\t{c}\n"));
    }
    out
}

pub fn read_morph(text: &str) -> std::result::Result<SegmentationModel, CoreError> {
    let mut l = Lines::new(text);
    l.header("morph")?;
    let morph_cost: f64 = l.parsed("morph_cost")?;
    let char_cost: f64 = l.parsed("char_cost")?;
    let n: usize = l.parsed("lexicon")?;
    let mut lexicon = Vec::with_capacity(n);
    for _ in 0..n {
        let row = l.next()?;
        let (m, c) = row
            .split_once('\t')
            .and_then(|(m, c)| Some((m, c.parse::<u64>().ok()?)))
            .ok_or_else(|| parse_err(l.line_no(), "expected morph TAB count"))?;
        lexicon.push((m.to_string(), c));
    }
    l.finish()?;
    SegmentationModel::from_lexicon(lexicon, morph_cost, char_cost)
}

pub fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::LmScore => "lm-score",
        Backend::RankProfile => "rank-profile",
    }
}

pub fn parse_backend(s: &str) -> Option<Backend> {
    match s {
        "lm-score" | "lm" => Some(Backend::LmScore),
        "rank-profile" | "rank" => Some(Backend::RankProfile),
        _ => None,
    }
}

const LANGID_INDEX: &str = "langid.tsv";

/// Writes an index file plus one `<lang>.lm` or `<lang>.profile` per
/// language into `dir`.
pub fn write_langid(model: &IdentifierModel, dir: &Path) -> Result<()> {
    let c = model.config();
    let mut index = format!("#corpuslab-langid\t{VERSION}\n");
    index.push_str(&format!("backend\t{}\n", backend_name(c.backend)));
    index.push_str(&format!("order\t{}\n", c.order));
    index.push_str(&format!("profile_size\t{}\n", c.profile_size));
    index.push_str(&format!("profile_max_n\t{}\n", c.profile_max_n));
    index.push_str(&format!("languages\t{}\n", model.languages().join("\t")));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_text(&dir.join(LANGID_INDEX), &index)?;
    for (i, lang) in model.languages().iter().enumerate() {
        check_language_id(lang)?;
        match c.backend {
            Backend::LmScore => write_text(&dir.join(format!("{lang}.lm")), &write_lm(&model.models()[i]))?,
            Backend::RankProfile => {
                let mut text = format!("#corpuslab-profile\t{VERSION}\n");
                for g in model.profiles()[i].ngrams() {
                    text.push_str(g);
                    text.push('\n');
                }
                write_text(&dir.join(format!("{lang}.profile")), &text)?;
            }
        }
    }
    Ok(())
}

pub fn read_langid(dir: &Path) -> Result<IdentifierModel> {
    let index_path = dir.join(LANGID_INDEX);
    let text = read_text(&index_path)?;
    let wrap = |e| Error::file(&index_path, e);
    let mut l = Lines::new(&text);
    l.header("langid").map_err(wrap)?;
    let backend = parse_backend(l.field("backend").map_err(wrap)?)
        .ok_or_else(|| wrap(parse_err(2, "unknown backend")))?;
    let config = IdentifierConfig {
        backend,
        order: l.parsed("order").map_err(wrap)?,
        profile_size: l.parsed("profile_size").map_err(wrap)?,
        profile_max_n: l.parsed("profile_max_n").map_err(wrap)?,
    };
    let languages: Vec<String> = l.field("languages").map_err(wrap)?.split('\t').map(String::from).collect();
    l.finish().map_err(wrap)?;
    for lang in &languages {
        check_language_id(lang)?;
    }
    match backend {
        Backend::LmScore => {
            let mut models = Vec::new();
            for lang in &languages {
                let p = dir.join(format!("{lang}.lm"));
                models.push(read_lm(&read_text(&p)?).map_err(|e| Error::file(&p, e))?);
            }
            IdentifierModel::from_models(config, languages, models).map_err(wrap)
        }
        Backend::RankProfile => {
            let mut profiles = Vec::new();
            for lang in &languages {
                let p = dir.join(format!("{lang}.profile"));
                let text = read_text(&p)?;
                let mut lines = text.lines();
                if lines.next() != Some(&format!("#corpuslab-profile\t{VERSION}")[..]) {
                    return Err(Error::file(&p, parse_err(1, "expected profile header")));
                }
                profiles.push(RankProfile::from_ranked(lines.map(String::from).collect()));
            }
            IdentifierModel::from_profiles(config, languages, profiles).map_err(wrap)
        }
    }
}

/// Column-per-layer TSV: `token TAB tag` or `token TAB pos TAB chunk`, a
/// blank line between sentences.
pub fn read_tagged_tsv(text: &str) -> std::result::Result<Vec<TaggedSentence>, CoreError> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<String>> = Vec::new();
    let mut width = 0;
    let flush = |cur: &mut Vec<Vec<String>>, out: &mut Vec<TaggedSentence>| {
        if cur.is_empty() {
            return;
        }
        let tokens = cur.iter().map(|r| r[0].clone()).collect();
        let pos = (cur[0].len() >= 2).then(|| cur.iter().map(|r| r[1].clone()).collect());
        let chunks = (cur[0].len() >= 3).then(|| cur.iter().map(|r| r[2].clone()).collect());
        let mut s = TaggedSentence::new(tokens, pos, chunks);
        s.id = (out.len() + 1).to_string();
        out.push(s);
        cur.clear();
    };
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            flush(&mut cur, &mut out);
            continue;
        }
        let cols: Vec<String> = line.split('\t').map(String::from).collect();
        if cols.len() > 3 || cols.iter().any(String::is_empty) {
            return Err(parse_err(i + 1, "expected 1 to 3 non-empty tab-separated columns"));
        }
        if width == 0 {
            width = cols.len();
        } else if cols.len() != width {
            return Err(parse_err(i + 1, format!("expected {width} columns, found {}", cols.len())));
        }
        cur.push(cols);
    }
    flush(&mut cur, &mut out);
    Ok(out)
}

pub fn write_tagged_tsv(sentences: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for (k, s) in sentences.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for i in 0..s.len() {
            out.push_str(&s.tokens[i]);
            for layer in [&s.pos, &s.chunks].into_iter().flatten() {
                out.push('\t');
                out.push_str(&layer[i]);
            }
            out.push('\n');
        }
    }
    out
}

/// `label TAB sentence` rows.
pub fn read_labeled(text: &str) -> std::result::Result<Vec<(String, String)>, CoreError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (label, sentence) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(i + 1, "expected label TAB sentence"))?;
        out.push((label.to_string(), sentence.to_string()));
    }
    Ok(out)
}
