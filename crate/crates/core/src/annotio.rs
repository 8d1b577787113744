//! Shakti Standard Format (SSF) documents, BIS tagsets, inter-annotator
//! agreement and annotation statistics.
//!
//! Canonical SSF handled here:
//!
//! ```text
//! <Sentence id="1">
//! 1	((	NP	<fs name='x'>
//! 1.1	मोहन	NNP
//! 	))
//! 2	घर	NN
//! </Sentence>
//! ```
//!
//! Token lines have 3 or 4 tab-separated columns (address, token, POS,
//! optional feature structure). Chunks open with `((` in the token column
//! and close with a line whose second column is `))`. Feature structures
//! are kept as opaque strings.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::stats::{self, FrequencyTable};

/// The 25 BIS part-of-speech tags.
pub const BIS_POS: [&str; 25] = [
    "NN", "NNP", "PRP", "VM", "VAUX", "DEM", "PSP", "QC", "JJ", "RB", "NST", "WQ", "RP", "QO", "SYM", "CC", "CL",
    "QF", "INJ", "INTF", "NEG", "RDP", "ECH", "UNK", "UT",
];

/// The 11 BIS chunk tags.
pub const BIS_CHUNK: [&str; 11] = [
    "NP", "VGF", "VGNF", "VGINF", "VGNN", "JJP", "RBP", "NEGP", "CCP", "FRAGP", "BLK",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tagset {
    BisPos,
    BisChunk,
}

impl Tagset {
    pub fn tags(self) -> &'static [&'static str] {
        match self {
            Tagset::BisPos => &BIS_POS,
            Tagset::BisChunk => &BIS_CHUNK,
        }
    }

    pub fn contains(self, tag: &str) -> bool {
        self.tags().contains(&tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsfToken {
    pub address: String,
    pub token: String,
    pub pos: String,
    pub fs: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsfChunk {
    pub address: String,
    pub tag: String,
    pub fs: Option<String>,
    pub children: Vec<SsfNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SsfNode {
    Token(SsfToken),
    Chunk(SsfChunk),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SsfSentence {
    pub id: String,
    pub nodes: Vec<SsfNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SsfDocument {
    pub sentences: Vec<SsfSentence>,
}

fn collect_tokens<'a>(nodes: &'a [SsfNode], out: &mut Vec<&'a SsfToken>) {
    for n in nodes {
        match n {
            SsfNode::Token(t) => out.push(t),
            SsfNode::Chunk(c) => collect_tokens(&c.children, out),
        }
    }
}

fn collect_chunks<'a>(nodes: &'a [SsfNode], out: &mut Vec<&'a SsfChunk>) {
    for n in nodes {
        if let SsfNode::Chunk(c) = n {
            out.push(c);
            collect_chunks(&c.children, out);
        }
    }
}

fn depth(nodes: &[SsfNode]) -> usize {
    nodes
        .iter()
        .map(|n| match n {
            SsfNode::Token(_) => 0,
            SsfNode::Chunk(c) => 1 + depth(&c.children),
        })
        .max()
        .unwrap_or(0)
}

impl SsfSentence {
    /// Tokens in order, chunk structure flattened.
    pub fn tokens(&self) -> Vec<&SsfToken> {
        let mut out = Vec::new();
        collect_tokens(&self.nodes, &mut out);
        out
    }

    /// Chunks in document order (outer before inner).
    pub fn chunks(&self) -> Vec<&SsfChunk> {
        let mut out = Vec::new();
        collect_chunks(&self.nodes, &mut out);
        out
    }

    pub fn chunk_depth(&self) -> usize {
        depth(&self.nodes)
    }
}

impl SsfDocument {
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|s| s.tokens().len()).sum()
    }

    /// Deepest chunk nesting; more than 1 is outside the canonical subset.
    pub fn max_chunk_depth(&self) -> usize {
        self.sentences.iter().map(SsfSentence::chunk_depth).max().unwrap_or(0)
    }

    pub fn is_chunked(&self) -> bool {
        self.max_chunk_depth() > 0
    }
}

fn parse_address(s: &str) -> Option<Vec<u64>> {
    if s.is_empty() {
        return None;
    }
    s.split('.').map(|p| p.parse::<u64>().ok()).collect()
}

fn compare_addresses(a: &[u64], b: &[u64]) -> Ordering {
    a.cmp(b)
}

struct OpenChunk {
    chunk: SsfChunk,
    line: usize,
}

/// Parses SSF text. Blank lines between sentences are ignored.
pub fn parse_ssf(text: &str) -> Result<SsfDocument> {
    let mut doc = SsfDocument::default();
    let mut current: Option<(SsfSentence, usize)> = None;
    let mut stack: Vec<OpenChunk> = Vec::new();
    let mut last_address: Option<Vec<u64>> = None;

    let body = text.strip_suffix('\n').unwrap_or(text);
    for (i, raw) in body.split('\n').enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if let Some(rest) = line.strip_prefix("<Sentence") {
            if current.is_some() {
                return Err(Error::parse(line_no, "sentence opened inside another sentence"));
            }
            let id = rest
                .trim()
                .strip_prefix("id=\"")
                .and_then(|r| r.strip_suffix("\">"))
                .ok_or_else(|| Error::parse(line_no, "expected <Sentence id=\"...\">"))?;
            current = Some((
                SsfSentence {
                    id: id.to_string(),
                    nodes: Vec::new(),
                },
                line_no,
            ));
            last_address = None;
            continue;
        }
        if line == "</Sentence>" {
            let Some((sentence, _)) = current.take() else {
                return Err(Error::parse(line_no, "</Sentence> without an open sentence"));
            };
            if let Some(open) = stack.last() {
                return Err(Error::parse(open.line, "unclosed chunk"));
            }
            doc.sentences.push(sentence);
            continue;
        }
        if line.trim().is_empty() {
            if current.is_some() {
                return Err(Error::parse(line_no, "blank line inside a sentence"));
            }
            continue;
        }
        let Some((sentence, _)) = current.as_mut() else {
            return Err(Error::parse(line_no, "content outside a sentence"));
        };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() >= 2 && cols[1] == "))" {
            if cols.len() != 2 || !cols[0].is_empty() {
                return Err(Error::parse(line_no, "chunk close must be a tab followed by ))"));
            }
            let Some(open) = stack.pop() else {
                return Err(Error::parse(line_no, "chunk close without an open chunk"));
            };
            let node = SsfNode::Chunk(open.chunk);
            match stack.last_mut() {
                Some(parent) => parent.chunk.children.push(node),
                None => sentence.nodes.push(node),
            }
            continue;
        }
        if cols.len() < 3 || cols.len() > 4 {
            return Err(Error::parse(line_no, format!("expected 3 or 4 columns, found {}", cols.len())));
        }
        let address = parse_address(cols[0])
            .ok_or_else(|| Error::parse(line_no, format!("bad address {:?}", cols[0])))?;
        if let Some(prev) = &last_address {
            if compare_addresses(prev, &address) != Ordering::Less {
                return Err(Error::parse(line_no, format!("address {} out of order", cols[0])));
            }
        }
        last_address = Some(address);
        if cols[2].is_empty() {
            return Err(Error::parse(line_no, "empty tag column"));
        }
        let fs = cols.get(3).map(|s| s.to_string());
        if cols[1] == "((" {
            stack.push(OpenChunk {
                chunk: SsfChunk {
                    address: cols[0].to_string(),
                    tag: cols[2].to_string(),
                    fs,
                    children: Vec::new(),
                },
                line: line_no,
            });
        } else {
            if cols[1].is_empty() {
                return Err(Error::parse(line_no, "empty token column"));
            }
            let node = SsfNode::Token(SsfToken {
                address: cols[0].to_string(),
                token: cols[1].to_string(),
                pos: cols[2].to_string(),
                fs,
            });
            match stack.last_mut() {
                Some(parent) => parent.chunk.children.push(node),
                None => sentence.nodes.push(node),
            }
        }
    }
    if let Some((_, line)) = current {
        return Err(Error::parse(line, "unclosed sentence"));
    }
    Ok(doc)
}

fn write_nodes(nodes: &[SsfNode], out: &mut String) {
    for n in nodes {
        match n {
            SsfNode::Token(t) => {
                out.push_str(&t.address);
                out.push('\t');
                out.push_str(&t.token);
                out.push('\t');
                out.push_str(&t.pos);
                if let Some(fs) = &t.fs {
                    out.push('\t');
                    out.push_str(fs);
                }
                out.push('\n');
            }
            SsfNode::Chunk(c) => {
                out.push_str(&c.address);
                out.push_str("\t((\t");
                out.push_str(&c.tag);
                if let Some(fs) = &c.fs {
                    out.push('\t');
                    out.push_str(fs);
                }
                out.push('\n');
                write_nodes(&c.children, out);
                out.push_str("\t))\n");
            }
        }
    }
}

/// Canonical text of a document.
pub fn serialize_ssf(doc: &SsfDocument) -> String {
    let mut out = String::new();
    for s in &doc.sentences {
        out.push_str("<Sentence id=\"");
        out.push_str(&s.id);
        out.push_str("\">\n");
        write_nodes(&s.nodes, &mut out);
        out.push_str("</Sentence>\n");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub sentence_id: String,
    pub address: String,
    pub tag: String,
}

/// Every POS tag (for [`Tagset::BisPos`]) or chunk tag (for
/// [`Tagset::BisChunk`]) outside the tagset.
pub fn validate_tags(doc: &SsfDocument, tagset: Tagset) -> Vec<Violation> {
    let mut out = Vec::new();
    for s in &doc.sentences {
        match tagset {
            Tagset::BisPos => {
                for t in s.tokens() {
                    if !tagset.contains(&t.pos) {
                        out.push(Violation {
                            sentence_id: s.id.clone(),
                            address: t.address.clone(),
                            tag: t.pos.clone(),
                        });
                    }
                }
            }
            Tagset::BisChunk => {
                for c in s.chunks() {
                    if !tagset.contains(&c.tag) {
                        out.push(Violation {
                            sentence_id: s.id.clone(),
                            address: c.address.clone(),
                            tag: c.tag.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Cohen's kappa of two aligned label sequences. Returns 1.0 when the
/// annotators agree on every item.
pub fn cohen_kappa<S: AsRef<str> + Ord>(a: &[S], b: &[S]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x.as_ref() == y.as_ref()).count() as f64;
    let p_o = agree / n;
    if agree == n {
        return Ok(1.0);
    }
    let mut ma: alloc::collections::BTreeMap<&str, u64> = Default::default();
    let mut mb: alloc::collections::BTreeMap<&str, u64> = Default::default();
    for (x, y) in a.iter().zip(b) {
        *ma.entry(x.as_ref()).or_insert(0) += 1;
        *mb.entry(y.as_ref()).or_insert(0) += 1;
    }
    // integer products keep the statistic exactly symmetric
    let chance: u64 = ma.iter().map(|(k, ca)| ca * mb.get(k).copied().unwrap_or(0)).sum();
    let p_e = chance as f64 / (n * n);
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    Pos,
    /// BIO chunk tags per token.
    Chunk,
}

/// Per-token labels of one layer for a sentence.
pub fn token_labels(sentence: &SsfSentence, layer: Layer) -> Vec<String> {
    match layer {
        Layer::Pos => sentence.tokens().iter().map(|t| t.pos.clone()).collect(),
        Layer::Chunk => {
            let mut out = Vec::new();
            for n in &sentence.nodes {
                match n {
                    SsfNode::Token(_) => out.push("O".to_string()),
                    SsfNode::Chunk(c) => {
                        let mut inner = Vec::new();
                        collect_tokens(&c.children, &mut inner);
                        for i in 0..inner.len() {
                            let prefix = if i == 0 { "B-" } else { "I-" };
                            out.push(format!("{prefix}{}", c.tag));
                        }
                    }
                }
            }
            out
        }
    }
}

/// Label pairs for tokens present in both documents: same sentence id,
/// same token index and same token text.
pub fn align_labels(a: &SsfDocument, b: &SsfDocument, layer: Layer) -> (Vec<String>, Vec<String>) {
    let mut la = Vec::new();
    let mut lb = Vec::new();
    for sa in &a.sentences {
        let Some(sb) = b.sentences.iter().find(|s| s.id == sa.id) else {
            continue;
        };
        let (ta, tb) = (sa.tokens(), sb.tokens());
        let (xa, xb) = (token_labels(sa, layer), token_labels(sb, layer));
        for i in 0..ta.len().min(tb.len()) {
            if ta[i].token == tb[i].token {
                la.push(xa[i].clone());
                lb.push(xb[i].clone());
            }
        }
    }
    (la, lb)
}

/// Kappa between two annotations of the same sentences.
pub fn document_kappa(a: &SsfDocument, b: &SsfDocument, layer: Layer) -> Result<f64> {
    let (la, lb) = align_labels(a, b, layer);
    cohen_kappa(&la, &lb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamStats {
    pub units: usize,
    pub entropy: f64,
    pub ttr: f64,
    pub mattr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationStats {
    pub sentences: usize,
    pub tokens: usize,
    pub chunks: usize,
    pub pos: StreamStats,
    /// Word and POS joined by a tab.
    pub word_pos: StreamStats,
    pub chunk: Option<StreamStats>,
    pub pos_table: FrequencyTable,
    pub chunk_table: Option<FrequencyTable>,
}

fn stream_stats(units: &[String], window: usize) -> Result<StreamStats> {
    Ok(StreamStats {
        units: units.len(),
        entropy: stats::entropy(units)?,
        ttr: stats::ttr(units)?,
        mattr: stats::mattr(units, window)?,
    })
}

/// Counts, diversity and tag distributions over annotated documents.
pub fn annotated_stats(docs: &[SsfDocument], window: usize) -> Result<AnnotationStats> {
    let mut pos = Vec::new();
    let mut pairs = Vec::new();
    let mut chunk_tags = Vec::new();
    let mut sentences = 0;
    for d in docs {
        for s in &d.sentences {
            sentences += 1;
            for t in s.tokens() {
                pos.push(t.pos.clone());
                pairs.push(format!("{}\t{}", t.token, t.pos));
            }
            chunk_tags.extend(s.chunks().iter().map(|c| c.tag.clone()));
        }
    }
    if pos.is_empty() {
        return Err(Error::EmptyInput);
    }
    let chunk = if chunk_tags.is_empty() {
        None
    } else {
        Some(stream_stats(&chunk_tags, window)?)
    };
    Ok(AnnotationStats {
        sentences,
        tokens: pos.len(),
        chunks: chunk_tags.len(),
        pos: stream_stats(&pos, window)?,
        word_pos: stream_stats(&pairs, window)?,
        chunk,
        pos_table: stats::freq_table(&pos)?,
        chunk_table: if chunk_tags.is_empty() {
            None
        } else {
            Some(stats::freq_table(&chunk_tags)?)
        },
    })
}
