//! Bilingual dictionary and synset resources in a versioned TSV layout.
//!
//! ```text
//! #lexres	v1	synset
//! 123	noun	a tree	रुख|पेड़
//! ```
//!
//! Synset rows are `id, category, gloss, synonyms`. Dictionary rows are
//! `headword, equivalents` with an optional third `category` column. List
//! fields are `|`-separated. The header is optional on input and always
//! written on output.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const HEADER_TAG: &str = "#lexres";
pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexKind {
    Dictionary,
    Synset,
}

impl LexKind {
    pub fn name(self) -> &'static str {
        match self {
            LexKind::Dictionary => "dict",
            LexKind::Synset => "synset",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "dict" | "dictionary" => Some(LexKind::Dictionary),
            "synset" => Some(LexKind::Synset),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynsetEntry {
    pub id: String,
    pub lexical_category: String,
    pub gloss: String,
    pub synonyms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub headword: String,
    pub equivalents: Vec<String>,
    pub category: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lexicon {
    Dictionary(Vec<DictEntry>),
    Synset(Vec<SynsetEntry>),
}

impl Lexicon {
    pub fn kind(&self) -> LexKind {
        match self {
            Lexicon::Dictionary(_) => LexKind::Dictionary,
            Lexicon::Synset(_) => LexKind::Synset,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Lexicon::Dictionary(e) => e.len(),
            Lexicon::Synset(e) => e.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Synonyms per synset, or equivalents per headword.
    pub fn list_sizes(&self) -> Vec<usize> {
        match self {
            Lexicon::Dictionary(e) => e.iter().map(|d| d.equivalents.len()).collect(),
            Lexicon::Synset(e) => e.iter().map(|s| s.synonyms.len()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub lexicon: Lexicon,
    /// Duplicate list items collapsed.
    pub warnings: usize,
}

fn split_list(field: &str, line: usize, what: &str, warnings: &mut usize) -> Result<Vec<String>> {
    if field.is_empty() {
        return Err(Error::parse(line, format!("empty {what} list")));
    }
    let mut out: Vec<String> = Vec::new();
    for item in field.split('|') {
        if item.is_empty() {
            return Err(Error::parse(line, format!("empty item in {what} list")));
        }
        if out.iter().any(|x| x == item) {
            *warnings += 1;
        } else {
            out.push(item.to_string());
        }
    }
    Ok(out)
}

/// Parses a resource file of the given kind.
pub fn parse_lexicon(text: &str, kind: LexKind) -> Result<Parsed> {
    let mut warnings = 0;
    let mut dict = Vec::new();
    let mut syn = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix(HEADER_TAG) {
            let cols: Vec<&str> = rest.split('\t').collect();
            if line_no != 1 || cols.len() != 3 || !cols[0].is_empty() {
                return Err(Error::parse(line_no, "malformed header"));
            }
            if cols[1] != FORMAT_VERSION {
                return Err(Error::parse(line_no, format!("unsupported version {}", cols[1])));
            }
            if LexKind::from_name(cols[2]) != Some(kind) {
                return Err(Error::parse(line_no, format!("file holds {} entries, expected {}", cols[2], kind.name())));
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        match kind {
            LexKind::Synset => {
                if cols.len() != 4 {
                    return Err(Error::parse(line_no, format!("synset row needs 4 columns, found {}", cols.len())));
                }
                if cols[0].is_empty() {
                    return Err(Error::parse(line_no, "empty synset id"));
                }
                syn.push(SynsetEntry {
                    id: cols[0].to_string(),
                    lexical_category: cols[1].to_string(),
                    gloss: cols[2].to_string(),
                    synonyms: split_list(cols[3], line_no, "synonym", &mut warnings)?,
                });
            }
            LexKind::Dictionary => {
                if cols.len() != 2 && cols.len() != 3 {
                    return Err(Error::parse(
                        line_no,
                        format!("dictionary row needs 2 or 3 columns, found {}", cols.len()),
                    ));
                }
                if cols[0].is_empty() {
                    return Err(Error::parse(line_no, "empty headword"));
                }
                dict.push(DictEntry {
                    headword: cols[0].to_string(),
                    equivalents: split_list(cols[1], line_no, "equivalent", &mut warnings)?,
                    category: cols.get(2).map(|c| c.to_string()),
                });
            }
        }
    }
    let lexicon = match kind {
        LexKind::Synset => Lexicon::Synset(syn),
        LexKind::Dictionary => Lexicon::Dictionary(dict),
    };
    Ok(Parsed { lexicon, warnings })
}

/// Canonical text, header first.
pub fn serialize_lexicon(lexicon: &Lexicon) -> String {
    let mut out = format!("{HEADER_TAG}\t{FORMAT_VERSION}\t{}\n", lexicon.kind().name());
    match lexicon {
        Lexicon::Synset(entries) => {
            for e in entries {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\n",
                    e.id,
                    e.lexical_category,
                    e.gloss,
                    e.synonyms.join("|")
                ));
            }
        }
        Lexicon::Dictionary(entries) => {
            for e in entries {
                out.push_str(&e.headword);
                out.push('\t');
                out.push_str(&e.equivalents.join("|"));
                if let Some(c) = &e.category {
                    out.push('\t');
                    out.push_str(c);
                }
                out.push('\n');
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynonymStats {
    pub entries: usize,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

/// Minimum, maximum and mean list size per entry.
pub fn synonym_stats(lexicon: &Lexicon) -> Result<SynonymStats> {
    let sizes = lexicon.list_sizes();
    if sizes.is_empty() {
        return Err(Error::EmptyInput);
    }
    let total: usize = sizes.iter().sum();
    Ok(SynonymStats {
        entries: sizes.len(),
        min: *sizes.iter().min().unwrap(),
        max: *sizes.iter().max().unwrap(),
        mean: total as f64 / sizes.len() as f64,
    })
}
