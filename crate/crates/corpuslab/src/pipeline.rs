//! The `report` pipeline: every per-corpus and per-pair analysis, collected
//! into named tables.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use corpuslab_core::akshara::{position_stats, syllable_stream, syllable_table};
use corpuslab_core::annotio::{annotated_stats, parse_ssf, SsfDocument, StreamStats};
use corpuslab_core::langid::{train_test_split, IdentifierConfig, IdentifierModel};
use corpuslab_core::lexres::{parse_lexicon, synonym_stats};
use corpuslab_core::metrics::ClassificationReport;
use corpuslab_core::morphseg::{morph_table, train_segmenter, word_counts, MorphConfig};
use corpuslab_core::ngramlm::{Level, LmConfig, NGramModel, Smoothing};
use corpuslab_core::sampling::{derive_seed, rng, sample_indices, shuffle_split};
use corpuslab_core::similarity::{distance_matrix, ssnglm_matrix, ScoreMode};
use corpuslab_core::stats::{self, Basis, FrequencyTable};
use corpuslab_core::tagger::{ablate, evaluate_tagger, to_bio, train_tagger, TaggedSentence, Target, TrainConfig};
use corpuslab_core::Corpus;

use crate::config::{read_text, write_text, PipelineConfig, SimilarityMode, TableFormat};
use crate::error::{Error, InModule, Result};
use crate::formats::level_name;
use crate::tables::{Cell, Table};

/// Share of each corpus used for training in the identification and
/// tagging experiments.
pub const TRAIN_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub config_hash: String,
    pub artifacts: BTreeMap<String, Table>,
}

impl ReportBundle {
    pub fn names(&self) -> Vec<&str> {
        self.artifacts.keys().map(String::as_str).collect()
    }

    fn add(&mut self, t: Table) {
        let prev = self.artifacts.insert(t.name.clone(), t);
        debug_assert!(prev.is_none());
    }
}

pub fn load_corpus(language: &str, path: &Path) -> Result<Corpus> {
    if !path.is_file() {
        return Err(Error::Registry {
            key: language.to_string(),
            message: format!("no such file {}", path.display()),
        });
    }
    Ok(Corpus::from_text(language, &read_text(path)?).with_source(path.display().to_string()))
}

/// Seeded sentence sample of `corpus` with `n` sentences, in corpus order.
pub fn restrict(corpus: &Corpus, n: usize, seed: u64) -> Corpus {
    if corpus.sentence_count() <= n {
        return corpus.clone();
    }
    let mut r = rng(derive_seed(seed, &format!("restrict:{}", corpus.language_id)));
    let mut idx = sample_indices(&mut r, corpus.sentence_count(), n);
    idx.sort_unstable();
    corpus.select(&idx)
}

fn words(c: &Corpus) -> Vec<&str> {
    c.tokens().collect()
}

pub fn run_pipeline(config: &PipelineConfig, base: &Path) -> Result<ReportBundle> {
    config.validate()?;
    let resolve = |p: &PathBuf| base.join(p);
    let mut bundle = ReportBundle {
        config_hash: config.hash(),
        artifacts: BTreeMap::new(),
    };
    let mut notes = Vec::new();

    let corpora = config
        .corpora
        .iter()
        .map(|(lang, p)| load_corpus(lang, &resolve(p)))
        .collect::<Result<Vec<_>>>()?;
    for c in &corpora {
        if c.token_count() == 0 {
            return Err(Error::Registry {
                key: c.language_id.clone(),
                message: "corpus has no tokens".into(),
            });
        }
    }
    let min_sentences = corpora.iter().map(Corpus::sentence_count).min().unwrap_or(0);
    let restricted: Vec<Corpus> = corpora.iter().map(|c| restrict(c, min_sentences, config.seed)).collect();
    notes.push(format!(
        "starred columns use a seeded sample of {min_sentences} sentences per corpus"
    ));

    bundle.add(unigram(&corpora, "unigram", config.window)?);
    bundle.add(unigram(&restricted, "unigram_restricted", config.window)?);
    bundle.add(coverage(&corpora, &restricted, config)?);
    bundle.add(lengths(&corpora, &restricted)?);
    bundle.add(length_histogram(&corpora)?);
    bundle.add(entropy(&corpora)?);
    bundle.add(perplexity(&corpora, &restricted, &config.lm_orders)?);
    bundle.add(zipf(&corpora)?);
    bundle.add(zipf_slope(&corpora)?);

    let mut top_words = top_table("top_words", &["stats"]);
    let mut top_syllables = top_table("top_syllables", &["akshara"]);
    let mut syllable_div = Table::new(
        "syllable_diversity",
        &["akshara", "stats"],
        &["Language", "Syllables", "Types", "RareTypes", "TTR", "MATTR", "Entropy"],
    );
    let mut positions = Table::new(
        "syllable_positions",
        &["akshara"],
        &["Language", "Basis", "Total", "Initial%", "Medial%", "Final%"],
    );
    let mut ngrams = Table::new(
        "char_ngrams",
        &["stats"],
        &["Language", "N", "Tokens", "Types", "RareTypes", "TTR", "MATTR"],
    );
    for c in &corpora {
        let lang = &c.language_id;
        push_top(&mut top_words, lang, &stats::freq_table(&words(c)).in_module("stats")?, config.top_k);
        let sylls = syllable_stream(c);
        if sylls.is_empty() {
            notes.push(format!("{lang}: no Devanagari tokens, syllable tables skipped"));
        } else {
            push_top(&mut top_syllables, lang, &syllable_table(c).in_module("akshara")?, config.top_k);
            let d = stats::diversity(&sylls, config.window).in_module("stats")?;
            syllable_div.push(vec![
                Cell::text(lang),
                Cell::count(d.tokens),
                Cell::count(d.types),
                Cell::count(d.rare_types),
                Cell::Ratio(d.ttr),
                Cell::Ratio(d.mattr),
                Cell::Real(stats::entropy(&sylls).in_module("stats")?),
            ]);
            for basis in [Basis::Types, Basis::Tokens] {
                let p = position_stats(c, basis).in_module("akshara")?;
                let (a, b, f) = p.percentages();
                positions.push(vec![
                    Cell::text(lang),
                    Cell::text(basis_name(basis)),
                    Cell::Count(p.total),
                    Cell::Percent(a),
                    Cell::Percent(b),
                    Cell::Percent(f),
                ]);
            }
        }
        for p in stats::char_ngram_profile(c, config.char_ngram_max, config.window).in_module("stats")? {
            let mut row = vec![Cell::text(lang), Cell::count(p.n)];
            match p.report {
                Some(d) => row.extend([
                    Cell::count(d.tokens),
                    Cell::count(d.types),
                    Cell::count(d.rare_types),
                    Cell::Ratio(d.ttr),
                    Cell::Ratio(d.mattr),
                ]),
                None => row.extend([Cell::Count(0), Cell::Count(0), Cell::Count(0), Cell::Missing, Cell::Missing]),
            }
            ngrams.push(row);
        }
    }
    bundle.add(top_words);
    bundle.add(top_syllables);
    bundle.add(syllable_div);
    bundle.add(positions);
    bundle.add(ngrams);

    if config.morph {
        let mut top = top_table("top_morphemes", &["morphseg"]);
        for c in &corpora {
            let model = train_segmenter(&word_counts(c), &MorphConfig::default()).in_module("morphseg")?;
            push_top(&mut top, &c.language_id, &morph_table(c, &model).in_module("morphseg")?, config.top_k);
        }
        bundle.add(top);
    }

    if corpora.len() >= 2 {
        let mode = match config.similarity_mode {
            SimilarityMode::RawSum => ScoreMode::RawSum,
            SimilarityMode::PerCharMean => ScoreMode::PerCharMean,
        };
        let sim = ssnglm_matrix(&corpora, config.similarity_order, config.seed, mode, false).in_module("similarity")?;
        bundle.add(Table::matrix("similarity", &["similarity", "ngramlm"], &sim.languages, &sim.scaled));
        bundle.add(Table::matrix("similarity_raw", &["similarity", "ngramlm"], &sim.languages, &sim.raw));
        let dist = distance_matrix(&corpora, config.distance_order, config.seed).in_module("similarity")?;
        bundle.add(Table::matrix("distance", &["similarity", "ngramlm"], &dist.languages, &dist.scaled));
        bundle.add(Table::matrix("distance_raw", &["similarity", "ngramlm"], &dist.languages, &dist.raw));

        let (train, test) = train_test_split(&corpora, TRAIN_FRACTION, derive_seed(config.seed, "langid"));
        if test.is_empty() {
            notes.push("language identification skipped: no held-out sentences".into());
        } else {
            let model = IdentifierModel::train(&train, IdentifierConfig::default()).in_module("langid")?;
            let report = model.evaluate(&test).in_module("langid")?;
            bundle.add(report_table("langid", &["langid", "ngramlm"], &report));
            bundle.add(confusion_table("langid_confusion", &["langid"], &report));
        }
    } else {
        notes.push("pair analyses (similarity, distance, language identification) skipped: one corpus".into());
    }

    if !config.annotated.is_empty() {
        annotation(&mut bundle, &mut notes, config, base)?;
    }

    if !config.lexicons.is_empty() {
        let mut t = Table::new(
            "synonym_stats",
            &["lexres"],
            &["Language", "Kind", "Entries", "Min", "Max", "Mean"],
        );
        for src in &config.lexicons {
            let kind = src.lex_kind()?;
            let path = resolve(&src.path);
            let parsed = parse_lexicon(&read_text(&path)?, kind).map_err(|e| Error::file(&path, e))?;
            if parsed.warnings > 0 {
                notes.push(format!("{}: {} duplicate items collapsed", path.display(), parsed.warnings));
            }
            let s = synonym_stats(&parsed.lexicon).in_module("lexres")?;
            t.push(vec![
                Cell::text(&src.language),
                Cell::text(kind.name()),
                Cell::count(s.entries),
                Cell::count(s.min),
                Cell::count(s.max),
                Cell::Real(s.mean),
            ]);
        }
        bundle.add(t);
    }

    let mut t = Table::new("notes", &[], &["Note"]);
    for n in notes {
        t.push(vec![Cell::Text(n)]);
    }
    bundle.add(t);
    Ok(bundle)
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Tokens => "tokens",
        Basis::Types => "types",
    }
}

fn unigram(corpora: &[Corpus], name: &str, window: usize) -> Result<Table> {
    let mut t = Table::new(
        name,
        &["stats", "textcore"],
        &["Language", "Sentences", "Tokens", "Types", "RareTypes", "TTR", "MATTR"],
    );
    for c in corpora {
        let d = stats::diversity(&words(c), window).in_module("stats")?;
        t.push(vec![
            Cell::text(&c.language_id),
            Cell::count(c.sentence_count()),
            Cell::count(d.tokens),
            Cell::count(d.types),
            Cell::count(d.rare_types),
            Cell::Ratio(d.ttr),
            Cell::Ratio(d.mattr),
        ]);
    }
    Ok(t)
}

fn percent_label(p: f64) -> String {
    format!("{}%", p * 100.0)
}

fn coverage(corpora: &[Corpus], restricted: &[Corpus], config: &PipelineConfig) -> Result<Table> {
    let mut columns = vec!["Language".to_string()];
    columns.extend(config.coverage.iter().map(|&p| percent_label(p)));
    columns.extend(config.coverage.iter().map(|&p| percent_label(p) + "*"));
    let mut t = Table::with_columns("coverage", &["stats"], columns);
    for (c, r) in corpora.iter().zip(restricted) {
        let seed = derive_seed(config.seed, &format!("coverage:{}", c.language_id));
        let mut row = vec![Cell::text(&c.language_id)];
        for corpus in [c, r] {
            let cov = stats::type_coverage(&words(corpus), &config.coverage, seed).in_module("stats")?;
            row.extend(cov.iter().map(|&(_, v)| Cell::Percent(100.0 * v)));
        }
        t.push(row);
    }
    Ok(t)
}

fn top_table(name: &str, modules: &[&'static str]) -> Table {
    Table::new(name, modules, &["Language", "Rank", "Unit", "Freq", "RF"])
}

fn push_top(t: &mut Table, lang: &str, table: &FrequencyTable, k: usize) {
    for (i, r) in table.top(k).iter().enumerate() {
        t.push(vec![
            Cell::text(lang),
            Cell::count(i + 1),
            Cell::text(&r.unit),
            Cell::Count(r.freq),
            Cell::Ratio(r.rf),
        ]);
    }
}

fn lengths(corpora: &[Corpus], restricted: &[Corpus]) -> Result<Table> {
    let mut t = Table::new(
        "lengths",
        &["stats"],
        &["Language", "Basis", "Min", "Max", "Mean", "Median", "StdDev", "Max*"],
    );
    for (c, r) in corpora.iter().zip(restricted) {
        for basis in [Basis::Types, Basis::Tokens] {
            let s = stats::length_stats(c, basis).in_module("stats")?;
            let star = stats::length_stats(r, basis).in_module("stats")?;
            t.push(vec![
                Cell::text(&c.language_id),
                Cell::text(basis_name(basis)),
                Cell::count(s.min),
                Cell::count(s.max),
                Cell::Real(s.mean),
                Cell::Real(s.median),
                Cell::Real(s.stddev),
                Cell::count(star.max),
            ]);
        }
    }
    Ok(t)
}

fn length_histogram(corpora: &[Corpus]) -> Result<Table> {
    let mut t = Table::new("length_histogram", &["stats"], &["Language", "Basis", "Length", "Count"]);
    for c in corpora {
        for basis in [Basis::Types, Basis::Tokens] {
            for (len, n) in stats::length_stats(c, basis).in_module("stats")?.histogram {
                t.push(vec![
                    Cell::text(&c.language_id),
                    Cell::text(basis_name(basis)),
                    Cell::count(len),
                    Cell::count(n),
                ]);
            }
        }
    }
    Ok(t)
}

fn entropy(corpora: &[Corpus]) -> Result<Table> {
    let mut t = Table::new("entropy", &["stats", "akshara"], &["Language", "Unit", "Entropy"]);
    for c in corpora {
        let streams = [
            ("word", words(c).into_iter().map(String::from).collect::<Vec<_>>()),
            ("char", stats::char_stream(c)),
            ("syllable", syllable_stream(c)),
        ];
        for (unit, s) in streams {
            let h = if s.is_empty() {
                Cell::Missing
            } else {
                Cell::Real(stats::entropy(&s).in_module("stats")?)
            };
            t.push(vec![Cell::text(&c.language_id), Cell::text(unit), h]);
        }
    }
    Ok(t)
}

/// Kneser-Ney models scored on their own training text.
fn perplexity(corpora: &[Corpus], restricted: &[Corpus], orders: &[usize]) -> Result<Table> {
    let mut t = Table::new(
        "perplexity",
        &["ngramlm"],
        &["Language", "Level", "Order", "CrossEntropy", "PP", "PP*"],
    );
    for (c, r) in corpora.iter().zip(restricted) {
        for level in [Level::Word, Level::Char] {
            for &order in orders {
                let config = LmConfig::new(level, order, Smoothing::KneserNey);
                let eval = |corpus: &Corpus| -> Result<_> {
                    NGramModel::train(corpus, config.clone())
                        .and_then(|m| m.perplexity(corpus))
                        .in_module("ngramlm")
                };
                let full = eval(c)?;
                let star = eval(r)?;
                t.push(vec![
                    Cell::text(&c.language_id),
                    Cell::text(level_name(level)),
                    Cell::count(order),
                    Cell::Real(full.cross_entropy),
                    Cell::Real(full.perplexity),
                    Cell::Real(star.perplexity),
                ]);
            }
        }
    }
    Ok(t)
}

fn zipf(corpora: &[Corpus]) -> Result<Table> {
    let mut t = Table::new("zipf", &["stats"], &["Language", "Rank", "Freq", "LogRank", "LogFreq"]);
    for c in corpora {
        let table = stats::freq_table(&words(c)).in_module("stats")?;
        for (rank, freq) in stats::zipf_points(&table) {
            t.push(vec![
                Cell::text(&c.language_id),
                Cell::count(rank),
                Cell::Count(freq),
                Cell::Real((rank as f64).log10()),
                Cell::Real((freq as f64).log10()),
            ]);
        }
    }
    Ok(t)
}

fn zipf_slope(corpora: &[Corpus]) -> Result<Table> {
    let mut t = Table::new("zipf_slope", &["stats"], &["Language", "Slope"]);
    for c in corpora {
        let table = stats::freq_table(&words(c)).in_module("stats")?;
        let slope = match stats::zipf_slope(&stats::zipf_points(&table)) {
            Ok(s) => Cell::Real(s),
            Err(_) => Cell::Missing,
        };
        t.push(vec![Cell::text(&c.language_id), slope]);
    }
    Ok(t)
}

/// Per-class precision, recall, F1 and support, then the averages.
pub fn report_table(name: &str, modules: &[&'static str], r: &ClassificationReport) -> Table {
    let mut t = Table::new(name, modules, &["Label", "Precision", "Recall", "F1", "Support"]);
    for c in &r.classes {
        t.push(vec![
            Cell::text(&c.label),
            Cell::Ratio(c.precision),
            Cell::Ratio(c.recall),
            Cell::Ratio(c.f1),
            Cell::count(c.support),
        ]);
    }
    t.push(vec![Cell::text("accuracy"), Cell::Missing, Cell::Missing, Cell::Ratio(r.accuracy), Cell::count(r.total)]);
    for (label, a) in [("macro avg", r.macro_avg), ("weighted avg", r.weighted_avg)] {
        t.push(vec![
            Cell::text(label),
            Cell::Ratio(a.precision),
            Cell::Ratio(a.recall),
            Cell::Ratio(a.f1),
            Cell::count(r.total),
        ]);
    }
    t
}

/// Gold labels down, predictions across.
pub fn confusion_table(name: &str, modules: &[&'static str], r: &ClassificationReport) -> Table {
    let mut columns = vec!["Gold".to_string()];
    columns.extend(r.labels.iter().cloned());
    let mut t = Table::with_columns(name, modules, columns);
    for (label, row) in r.labels.iter().zip(&r.confusion) {
        let mut cells = vec![Cell::text(label)];
        cells.extend(row.iter().map(|&n| Cell::count(n)));
        t.push(cells);
    }
    t
}

pub fn ablation_table(name: &str, grid: &[(u8, ClassificationReport)]) -> Table {
    let mut t = Table::new(
        name,
        &["tagger"],
        &["Level", "Accuracy", "MacroPrecision", "MacroRecall", "MacroF1", "WeightedF1"],
    );
    for (level, r) in grid {
        t.push(vec![
            Cell::Count(u64::from(*level)),
            Cell::Ratio(r.accuracy),
            Cell::Ratio(r.macro_avg.precision),
            Cell::Ratio(r.macro_avg.recall),
            Cell::Ratio(r.macro_avg.f1),
            Cell::Ratio(r.weighted_avg.f1),
        ]);
    }
    t
}

fn pos_sentences(doc: &SsfDocument) -> Vec<TaggedSentence> {
    doc.sentences
        .iter()
        .map(|s| {
            let toks = s.tokens();
            let mut t = TaggedSentence::new(
                toks.iter().map(|t| t.token.clone()).collect(),
                Some(toks.iter().map(|t| t.pos.clone()).collect()),
                None,
            );
            t.id = s.id.clone();
            t
        })
        .filter(|s| !s.is_empty())
        .collect()
}

fn tagger_experiment(
    bundle: &mut ReportBundle,
    notes: &mut Vec<String>,
    config: &PipelineConfig,
    lang: &str,
    target: Target,
    sentences: Vec<TaggedSentence>,
) -> Result<()> {
    let name = match target {
        Target::Pos => "pos",
        Target::Chunk => "chunk",
    };
    let (train, test) = shuffle_split(&sentences, TRAIN_FRACTION, derive_seed(config.seed, &format!("{name}:{lang}")));
    if train.is_empty() || test.is_empty() {
        notes.push(format!("{lang}: too few sentences for the {name} tagger"));
        return Ok(());
    }
    let tc = TrainConfig::new(target, config.template_level)
        .with_epochs(config.tagger_epochs)
        .with_seed(config.seed);
    // tags only seen in the test split still need a column
    let mut tagset: Vec<String> = Vec::new();
    for s in &sentences {
        tagset.extend(s.labels(target).in_module("tagger")?.iter().cloned());
    }
    tagset.sort();
    tagset.dedup();
    let tc = tc.with_tagset(tagset);
    let levels: Vec<u8> = (0..=config.template_level).collect();
    let grid = ablate(&train, &test, &tc, &levels).in_module("tagger")?;
    bundle.add(ablation_table(&format!("{name}_ablation_{lang}"), &grid));
    let model = train_tagger(&train, &tc).in_module("tagger")?;
    let report = evaluate_tagger(&model, &test, target).in_module("tagger")?;
    bundle.add(report_table(&format!("{name}_results_{lang}"), &["tagger"], &report));
    Ok(())
}

fn stream_row(lang: &str, stream: &str, s: &StreamStats) -> Vec<Cell> {
    vec![
        Cell::text(lang),
        Cell::text(stream),
        Cell::count(s.units),
        Cell::Real(s.entropy),
        Cell::Ratio(s.ttr),
        Cell::Ratio(s.mattr),
    ]
}

fn annotation(bundle: &mut ReportBundle, notes: &mut Vec<String>, config: &PipelineConfig, base: &Path) -> Result<()> {
    let mut counts = Table::new("annotation_stats", &["annotio"], &["Language", "Sentences", "Tokens", "Chunks"]);
    let mut diversity = Table::new(
        "annotation_diversity",
        &["annotio", "stats"],
        &["Language", "Stream", "Units", "Entropy", "TTR", "MATTR"],
    );
    let mut pos_dist = Table::new("pos_distribution", &["annotio"], &["Language", "Tag", "Count", "Percent"]);
    let mut chunk_dist = Table::new("chunk_distribution", &["annotio"], &["Language", "Tag", "Count", "Percent"]);
    for (lang, p) in &config.annotated {
        let path = base.join(p);
        if !path.is_file() {
            return Err(Error::Registry {
                key: lang.clone(),
                message: format!("no such annotated file {}", path.display()),
            });
        }
        let doc = parse_ssf(&read_text(&path)?).map_err(|e| Error::file(&path, e))?;
        let s = annotated_stats(std::slice::from_ref(&doc), config.window).in_module("annotio")?;
        counts.push(vec![Cell::text(lang), Cell::count(s.sentences), Cell::count(s.tokens), Cell::count(s.chunks)]);
        diversity.push(stream_row(lang, "pos", &s.pos));
        diversity.push(stream_row(lang, "word_pos", &s.word_pos));
        if let Some(c) = &s.chunk {
            diversity.push(stream_row(lang, "chunk", c));
        }
        for (table, dist) in [(Some(&s.pos_table), &mut pos_dist), (s.chunk_table.as_ref(), &mut chunk_dist)] {
            for r in table.map(|t| t.rows.as_slice()).unwrap_or_default() {
                dist.push(vec![Cell::text(lang), Cell::text(&r.unit), Cell::Count(r.freq), Cell::Percent(100.0 * r.rf)]);
            }
        }

        tagger_experiment(bundle, notes, config, lang, Target::Pos, pos_sentences(&doc))?;
        if doc.is_chunked() {
            match to_bio(&doc) {
                Ok(sentences) => {
                    let sentences = sentences.into_iter().filter(|s| !s.is_empty()).collect();
                    tagger_experiment(bundle, notes, config, lang, Target::Chunk, sentences)?;
                }
                Err(e) => notes.push(format!("{lang}: chunk tagger skipped: {e}")),
            }
        }
    }
    bundle.add(counts);
    bundle.add(diversity);
    bundle.add(pos_dist);
    if !chunk_dist.rows.is_empty() {
        bundle.add(chunk_dist);
    }
    Ok(())
}

/// Renders one artifact.
pub fn emit(bundle: &ReportBundle, name: &str, format: TableFormat) -> Result<String> {
    if bundle.artifacts.is_empty() {
        return Err(Error::Usage("the report bundle is empty".into()));
    }
    let t = bundle.artifacts.get(name).ok_or_else(|| {
        Error::Usage(format!("unknown artifact {name:?}; available: {}", bundle.names().join(", ")))
    })?;
    Ok(t.render(format, &bundle.config_hash))
}

/// Writes `<name>.<ext>` for every artifact and returns the paths.
pub fn write_bundle(bundle: &ReportBundle, dir: &Path, format: TableFormat) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for name in bundle.artifacts.keys() {
        let path = dir.join(format!("{name}.{}", format.extension()));
        write_text(&path, &emit(bundle, name, format)?)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restrict_is_seeded_and_ordered() {
        let c = Corpus::from_text("x", &(0..20).map(|i| format!("w{i}\n")).collect::<String>());
        let a = restrict(&c, 5, 1);
        assert_eq!(a.sentence_count(), 5);
        assert_eq!(a, restrict(&c, 5, 1));
        let idx: Vec<usize> = a.tokens().map(|t| t[1..].parse().unwrap()).collect();
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(restrict(&c, 30, 1), c);
    }

    #[test]
    fn emit_errors() {
        let mut b = ReportBundle {
            config_hash: "h".into(),
            artifacts: BTreeMap::new(),
        };
        assert!(emit(&b, "unigram", TableFormat::Tsv).is_err());
        b.add(Table::new("unigram", &[], &["Language"]));
        let e = emit(&b, "nope", TableFormat::Tsv).unwrap_err().to_string();
        assert!(e.contains("unigram"), "{e}");
    }
}
