//! Cleaning policies, corpus registries and the report configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use corpuslab_core::lexres::LexKind;
use corpuslab_core::textcore::CleaningPolicy;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

/// Parses `key=value` lines. Keys: `nfc`, `script_filter`,
/// `min_devanagari_fraction`, `punct_detach` (whitespace-separated
/// characters). Unset keys keep their defaults.
pub fn parse_policy(text: &str) -> Result<CleaningPolicy> {
    let mut p = CleaningPolicy::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "nfc" => p.nfc = parse_bool(key, value)?,
            "script_filter" => p.script_filter = parse_bool(key, value)?,
            "min_devanagari_fraction" => {
                let f: f64 = value
                    .parse()
                    .map_err(|_| Error::Config(format!("{key}: not a number: {value:?}")))?;
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::Config(format!("{key} must lie in [0, 1]")));
                }
                p.min_devanagari_fraction = f;
            }
            "punct_detach" => {
                let mut chars = Vec::new();
                for item in value.split_whitespace() {
                    let mut it = item.chars();
                    match (it.next(), it.next()) {
                        (Some(c), None) => chars.push(c),
                        _ => return Err(Error::Config(format!("{key}: {item:?} is not a single character"))),
                    }
                }
                p.punct_detach = chars;
            }
            _ => return Err(Error::Config(format!("line {}: unknown key {key:?}", i + 1))),
        }
    }
    Ok(p)
}

/// Language ids usable as file names.
pub fn check_language_id(id: &str) -> Result<()> {
    if !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        Ok(())
    } else {
        Err(Error::Config(format!("language id {id:?} must be ASCII letters, digits, '_' or '-'")))
    }
}

/// `language = path` lines (a tab also separates). Relative paths resolve
/// against `base`.
pub fn parse_registry(text: &str, base: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (lang, path) = line
            .split_once('=')
            .or_else(|| line.split_once('\t'))
            .ok_or_else(|| Error::Config(format!("registry line {}: expected language = path", i + 1)))?;
        let (lang, path) = (lang.trim(), path.trim());
        check_language_id(lang)?;
        if out.insert(lang.to_string(), base.join(path)).is_some() {
            return Err(Error::Config(format!("registry line {}: duplicate language {lang:?}", i + 1)));
        }
    }
    Ok(out)
}

pub fn read_registry(path: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let base = path.parent().unwrap_or(Path::new(""));
    parse_registry(&read_text(path)?, base)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Tsv,
    Json,
}

impl TableFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Tsv => "tsv",
            TableFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityMode {
    RawSum,
    #[default]
    PerCharMean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconSource {
    pub language: String,
    pub kind: String,
    pub path: PathBuf,
}

impl LexiconSource {
    pub fn lex_kind(&self) -> Result<LexKind> {
        LexKind::from_name(&self.kind)
            .ok_or_else(|| Error::Config(format!("lexicon kind {:?} is neither synset nor dict", self.kind)))
    }
}

fn default_window() -> usize {
    corpuslab_core::stats::DEFAULT_WINDOW
}
fn default_lm_orders() -> Vec<usize> {
    vec![1, 2, 3]
}
fn default_similarity_order() -> usize {
    corpuslab_core::similarity::DEFAULT_SIMILARITY_ORDER
}
fn default_distance_order() -> usize {
    corpuslab_core::similarity::DEFAULT_DISTANCE_ORDER
}
fn default_level() -> u8 {
    corpuslab_core::tagger::MAX_LEVEL
}
fn default_epochs() -> usize {
    corpuslab_core::tagger::DEFAULT_EPOCHS
}
fn default_top_k() -> usize {
    10
}
fn default_coverage() -> Vec<f64> {
    vec![0.5, 0.6, 0.7, 0.8, 0.9]
}
fn default_char_ngram_max() -> usize {
    7
}
fn default_true() -> bool {
    true
}
fn default_output() -> PathBuf {
    PathBuf::from("report")
}

/// Everything `report` needs. Paths are relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_lm_orders")]
    pub lm_orders: Vec<usize>,
    #[serde(default = "default_similarity_order")]
    pub similarity_order: usize,
    #[serde(default = "default_distance_order")]
    pub distance_order: usize,
    #[serde(default)]
    pub similarity_mode: SimilarityMode,
    #[serde(default = "default_level")]
    pub template_level: u8,
    #[serde(default = "default_epochs")]
    pub tagger_epochs: usize,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default = "default_coverage")]
    pub coverage: Vec<f64>,
    #[serde(default = "default_char_ngram_max")]
    pub char_ngram_max: usize,
    #[serde(default = "default_true")]
    pub morph: bool,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub format: TableFormat,
    pub corpora: BTreeMap<String, PathBuf>,
    /// SSF files with POS and chunk annotation, by language.
    #[serde(default)]
    pub annotated: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub lexicons: Vec<LexiconSource>,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let c = Self::from_toml(&read_text(path)?)?;
        Ok((c, path.parent().unwrap_or(Path::new("")).to_path_buf()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.corpora.is_empty() {
            return Err(Error::Config("at least one corpus is required".into()));
        }
        for lang in self.corpora.keys().chain(self.annotated.keys()) {
            check_language_id(lang)?;
        }
        if self.window == 0 {
            return Err(Error::Config("window must be positive".into()));
        }
        if self.lm_orders.is_empty() || self.lm_orders.contains(&0) {
            return Err(Error::Config("lm_orders must be non-empty and positive".into()));
        }
        if self.template_level > corpuslab_core::tagger::MAX_LEVEL {
            return Err(Error::Config(format!("template_level must be at most {}", corpuslab_core::tagger::MAX_LEVEL)));
        }
        if self.coverage.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
            return Err(Error::Config("coverage fractions must lie in (0, 1]".into()));
        }
        for l in &self.lexicons {
            l.lex_kind()?;
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form of the config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        hex(&Sha256::digest(canonical.as_bytes()))
    }
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
