//! Command-line front end.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use corpuslab_core::akshara::position_stats;
use corpuslab_core::annotio::{annotated_stats, document_kappa, parse_ssf, serialize_ssf, validate_tags, Layer, SsfDocument, Tagset};
use corpuslab_core::langid::{Backend, IdentifierConfig, IdentifierModel};
use corpuslab_core::lexres::{parse_lexicon, synonym_stats, LexKind};
use corpuslab_core::morphseg::{morph_table, train_segmenter, word_counts, MorphConfig};
use corpuslab_core::ngramlm::{Level, LmConfig, NGramModel, Smoothing};
use corpuslab_core::similarity::{distance_matrix, ssnglm_matrix, ScoreMode};
use corpuslab_core::stats::{self, Basis, FrequencyTable};
use corpuslab_core::tagger::{
    ablate, evaluate_tagger, from_bio, to_bio, train_tagger, BioMode, TaggedSentence, Target, TrainConfig,
};
use corpuslab_core::textcore::{normalize, tokenize_with, transliterate, Direction};
use corpuslab_core::Corpus;

use crate::config::{parse_policy, read_registry, read_text, write_text, PipelineConfig, TableFormat};
use crate::error::{Error, InModule, Result};
use crate::formats;
use crate::pipeline::{ablation_table, confusion_table, load_corpus, report_table, run_pipeline, write_bundle};
use crate::tables::{Cell, Table};

#[derive(Debug, Parser)]
#[command(name = "corpuslab", version, about = "Corpus statistics, language models and taggers for Devanagari text")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize and tokenize raw text, one sentence per line.
    Clean(CleanArgs),
    /// Transliterate between Devanagari and WX.
    Wx(WxArgs),
    /// Akshara position counts.
    Akshara(AksharaArgs),
    /// Frequency, diversity, length and Zipf tables.
    Stats(StatsArgs),
    /// N-gram language models.
    #[command(subcommand)]
    Lm(LmCommand),
    /// Pairwise similarity and distance matrices.
    Similarity(SimilarityArgs),
    /// Language identification.
    #[command(subcommand)]
    Langid(LangidCommand),
    /// Unsupervised morph segmentation.
    #[command(subcommand)]
    Morph(MorphCommand),
    /// POS and chunk taggers.
    #[command(subcommand)]
    Tag(TagCommand),
    /// SSF validation, statistics and BIO conversion.
    #[command(subcommand)]
    Ssf(SsfCommand),
    /// Cohen's kappa between two annotations of the same text.
    Kappa(KappaArgs),
    /// Synonym or translation list sizes of a lexical resource.
    Lexstats(LexstatsArgs),
    /// Every table for a configured set of corpora.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Tsv,
    Json,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Tsv => TableFormat::Tsv,
            FormatArg::Json => TableFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    Tokens,
    Types,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Tokens => Basis::Tokens,
            BasisArg::Types => Basis::Types,
        }
    }
}

#[derive(Debug, Args)]
pub struct Output {
    /// Table format.
    #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
    pub format: FormatArg,
    /// Write to a file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CleanArgs {
    /// key=value cleaning policy.
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Input file; standard input when absent.
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WxArgs {
    /// WX to Devanagari.
    #[arg(long)]
    pub reverse: bool,
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AksharaArgs {
    #[arg(long, value_enum, default_value_t = BasisArg::Types)]
    pub mode: BasisArg,
    /// Corpus files, optionally as `lang=path`.
    #[arg(required = true)]
    pub corpora: Vec<String>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StatsKind {
    Unigram,
    Chars,
    Lengths,
    Zipf,
    Coverage,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(value_enum)]
    pub kind: StatsKind,
    /// Corpus files, optionally as `lang=path`.
    #[arg(required = true)]
    pub corpora: Vec<String>,
    #[arg(long, default_value_t = stats::DEFAULT_WINDOW)]
    pub window: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = BasisArg::Types)]
    pub basis: BasisArg,
    /// Rows per corpus in frequency listings.
    #[arg(long)]
    pub top: Option<usize>,
    /// Longest character n-gram order.
    #[arg(long, default_value_t = 7)]
    pub max_n: usize,
    /// Coverage sample fractions.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.6, 0.7, 0.8, 0.9])]
    pub fractions: Vec<f64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LevelArg {
    Word,
    Char,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Word => Level::Word,
            LevelArg::Char => Level::Char,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SmoothingArg {
    Mle,
    Backoff,
    Kn,
}

impl From<SmoothingArg> for Smoothing {
    fn from(s: SmoothingArg) -> Self {
        match s {
            SmoothingArg::Mle => Smoothing::Mle,
            SmoothingArg::Backoff => Smoothing::KatzBackoff,
            SmoothingArg::Kn => Smoothing::KneserNey,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum LmCommand {
    Train {
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_enum, default_value_t = LevelArg::Word)]
        level: LevelArg,
        #[arg(long, value_enum, default_value_t = SmoothingArg::Kn)]
        smoothing: SmoothingArg,
        /// Fixed absolute discount; estimated from counts when absent.
        #[arg(long)]
        discount: Option<f64>,
        /// Do not predict an end-of-sentence symbol.
        #[arg(long)]
        no_sentence_end: bool,
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-sentence log10 probability, cross-entropy and perplexity.
    Score { model: PathBuf, input: Option<PathBuf> },
    /// Corpus perplexity.
    Ppl {
        model: PathBuf,
        corpus: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    #[value(name = "raw_sum")]
    RawSum,
    #[value(name = "per_char_mean")]
    PerCharMean,
}

#[derive(Debug, Args)]
pub struct SimilarityArgs {
    #[arg(long, default_value_t = corpuslab_core::similarity::DEFAULT_SIMILARITY_ORDER)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::PerCharMean)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Average each scaled score with its transpose.
    #[arg(long)]
    pub symmetrize: bool,
    /// Order of the perplexity distance models.
    #[arg(long, default_value_t = corpuslab_core::similarity::DEFAULT_DISTANCE_ORDER)]
    pub distance_order: usize,
    /// Registry of `language = path` lines.
    pub registry: PathBuf,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendArg {
    LmScore,
    RankProfile,
}

#[derive(Debug, Subcommand)]
pub enum LangidCommand {
    Train {
        #[arg(long, value_enum, default_value_t = BackendArg::LmScore)]
        backend: BackendArg,
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, default_value_t = 400)]
        profile_size: usize,
        #[arg(long)]
        out: PathBuf,
        registry: PathBuf,
    },
    /// One `language TAB sentence` line per input sentence.
    Predict { model: PathBuf, input: Option<PathBuf> },
    /// Scores a `label TAB sentence` file.
    Eval {
        model: PathBuf,
        test: PathBuf,
        /// Also print the confusion matrix.
        #[arg(long)]
        confusion: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum MorphCommand {
    Train {
        #[arg(long, default_value_t = corpuslab_core::morphseg::DEFAULT_MORPH_COST)]
        morph_cost: f64,
        /// Bits per character; the corpus character entropy when absent.
        #[arg(long)]
        char_cost: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        corpus: PathBuf,
    },
    /// Segments one word per line, morphs joined by spaces.
    Segment { model: PathBuf, input: Option<PathBuf> },
    /// Morph frequency table of a corpus.
    Table {
        model: PathBuf,
        corpus: PathBuf,
        #[arg(long)]
        top: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetArg {
    Pos,
    Chunk,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Pos => Target::Pos,
            TargetArg::Chunk => Target::Chunk,
        }
    }
}

#[derive(Debug, Args)]
pub struct TagOptions {
    #[arg(long, value_enum, default_value_t = TargetArg::Pos)]
    pub target: TargetArg,
    #[arg(long, default_value_t = corpuslab_core::tagger::MAX_LEVEL)]
    pub level: u8,
    #[arg(long, default_value_t = corpuslab_core::tagger::DEFAULT_EPOCHS)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Plain perceptron weights instead of averaged ones.
    #[arg(long)]
    pub no_average: bool,
}

impl TagOptions {
    fn config(&self) -> TrainConfig {
        let mut c = TrainConfig::new(self.target.into(), self.level)
            .with_epochs(self.epochs)
            .with_seed(self.seed);
        c.averaged = !self.no_average;
        c
    }
}

#[derive(Debug, Subcommand)]
pub enum TagCommand {
    /// Gold data: SSF or `token TAB tag` / `token TAB pos TAB chunk` TSV.
    Train {
        #[command(flatten)]
        opts: TagOptions,
        gold: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Appends a predicted column to a token (or token TAB pos) TSV.
    Predict {
        model: PathBuf,
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TargetArg::Pos)]
        target: TargetArg,
    },
    Eval {
        model: PathBuf,
        gold: PathBuf,
        #[arg(long, value_enum, default_value_t = TargetArg::Pos)]
        target: TargetArg,
        #[command(flatten)]
        out: Output,
    },
    /// Accuracy per template level.
    Ablate {
        #[command(flatten)]
        opts: TagOptions,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TagsetArg {
    Pos,
    Chunk,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum SsfCommand {
    /// Lists tags outside the BIS tagsets; exits 2 when any are found.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TagsetArg::Both)]
        tagset: TagsetArg,
    },
    Stats {
        file: PathBuf,
        #[arg(long, default_value_t = stats::DEFAULT_WINDOW)]
        window: usize,
        #[command(flatten)]
        out: Output,
    },
    /// `token TAB pos TAB bio` TSV.
    ToBio {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Chunk trees from a three-column BIO TSV.
    FromBio {
        file: PathBuf,
        /// Repair ill-formed I- tags instead of failing.
        #[arg(long)]
        lenient: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LayerArg {
    Pos,
    Chunk,
}

#[derive(Debug, Args)]
pub struct KappaArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = LayerArg::Pos)]
    pub layer: LayerArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Synset,
    Dict,
}

#[derive(Debug, Args)]
pub struct LexstatsArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    pub file: PathBuf,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides `output_dir` from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `format` from the config.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn input_text(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => read_text(p),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::io("<stdin>", e))?;
            Ok(s)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn emit_table(t: &Table, out: &Output) -> Result<()> {
    write_out(out.output.as_deref(), &t.render(out.format.into(), ""))
}

/// `lang=path` or a path whose file stem names the language.
fn corpus_arg(arg: &str) -> Result<Corpus> {
    let (lang, path) = match arg.split_once('=') {
        Some((l, p)) => (l.to_string(), PathBuf::from(p)),
        None => {
            let p = PathBuf::from(arg);
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .ok_or_else(|| Error::Usage(format!("cannot name a language after {arg:?}")))?;
            (stem, p)
        }
    };
    let c = load_corpus(&lang, &path)?;
    if c.token_count() == 0 {
        return Err(Error::file(path, corpuslab_core::Error::EmptyInput));
    }
    Ok(c)
}

fn corpora_args(args: &[String]) -> Result<Vec<Corpus>> {
    args.iter().map(|a| corpus_arg(a)).collect()
}

fn registry_corpora(path: &Path) -> Result<Vec<Corpus>> {
    read_registry(path)?
        .iter()
        .map(|(lang, p)| load_corpus(lang, p))
        .collect()
}

fn read_corpus(path: &Path) -> Result<Corpus> {
    let lang = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(Corpus::from_text(lang, &read_text(path)?))
}

fn looks_like_ssf(text: &str) -> bool {
    text.trim_start().starts_with("<Sentence")
}

/// Gold sentences from SSF (POS plus BIO chunks) or column TSV.
pub fn read_gold(path: &Path) -> Result<Vec<TaggedSentence>> {
    let text = read_text(path)?;
    let sentences = if looks_like_ssf(&text) {
        let doc = parse_ssf(&text).map_err(|e| Error::file(path, e))?;
        to_bio(&doc).map_err(|e| Error::file(path, e))?
    } else {
        formats::read_tagged_tsv(&text).map_err(|e| Error::file(path, e))?
    };
    Ok(sentences.into_iter().filter(|s| !s.is_empty()).collect())
}

fn read_doc(path: &Path) -> Result<SsfDocument> {
    parse_ssf(&read_text(path)?).map_err(|e| Error::file(path, e))
}

fn freq_rows(t: &mut Table, lang: &str, table: &FrequencyTable, top: Option<usize>) {
    let rows = match top {
        Some(k) => table.top(k),
        None => &table.rows,
    };
    for (i, r) in rows.iter().enumerate() {
        t.push(vec![
            Cell::text(lang),
            Cell::count(i + 1),
            Cell::text(&r.unit),
            Cell::Count(r.freq),
            Cell::Ratio(r.rf),
            Cell::Ratio(r.cc),
        ]);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Clean(a) => clean(a),
        Command::Wx(a) => {
            let text = input_text(a.input.as_deref())?;
            let dir = if a.reverse { Direction::FromWx } else { Direction::ToWx };
            let t = transliterate(&text, dir);
            if t.warnings > 0 {
                eprintln!("{} characters passed through unchanged", t.warnings);
            }
            write_out(None, &t.text)
        }
        Command::Akshara(a) => {
            let mut t = Table::new("akshara", &["akshara"], &["Language", "Basis", "Total", "Initial%", "Medial%", "Final%"]);
            for c in corpora_args(&a.corpora)? {
                let p = position_stats(&c, a.mode.into()).in_module("akshara")?;
                let (i, m, f) = p.percentages();
                t.push(vec![
                    Cell::text(&c.language_id),
                    Cell::text(match a.mode {
                        BasisArg::Tokens => "tokens",
                        BasisArg::Types => "types",
                    }),
                    Cell::Count(p.total),
                    Cell::Percent(i),
                    Cell::Percent(m),
                    Cell::Percent(f),
                ]);
            }
            emit_table(&t, &a.out)
        }
        Command::Stats(a) => stats_cmd(a),
        Command::Lm(c) => lm(c),
        Command::Similarity(a) => similarity(a),
        Command::Langid(c) => langid(c),
        Command::Morph(c) => morph(c),
        Command::Tag(c) => tag(c),
        Command::Ssf(c) => ssf(c),
        Command::Kappa(a) => {
            let layer = match a.layer {
                LayerArg::Pos => Layer::Pos,
                LayerArg::Chunk => Layer::Chunk,
            };
            let k = document_kappa(&read_doc(&a.a)?, &read_doc(&a.b)?, layer).in_module("annotio")?;
            write_out(None, &format!("{k:.4}\n"))
        }
        Command::Lexstats(a) => {
            let kind = match a.kind {
                KindArg::Synset => LexKind::Synset,
                KindArg::Dict => LexKind::Dictionary,
            };
            let parsed = parse_lexicon(&read_text(&a.file)?, kind).map_err(|e| Error::file(&a.file, e))?;
            if parsed.warnings > 0 {
                eprintln!("{} duplicate items collapsed", parsed.warnings);
            }
            let s = synonym_stats(&parsed.lexicon).in_module("lexres")?;
            let mut t = Table::new("synonym_stats", &["lexres"], &["Kind", "Entries", "Min", "Max", "Mean"]);
            t.push(vec![
                Cell::text(kind.name()),
                Cell::count(s.entries),
                Cell::count(s.min),
                Cell::count(s.max),
                Cell::Real(s.mean),
            ]);
            emit_table(&t, &a.out)
        }
        Command::Report(a) => {
            let (config, base) = PipelineConfig::load(&a.config)?;
            let bundle = run_pipeline(&config, &base)?;
            let dir = a.out.unwrap_or_else(|| base.join(&config.output_dir));
            let format = a.format.map_or(config.format, Into::into);
            let paths = write_bundle(&bundle, &dir, format)?;
            eprintln!("wrote {} artifacts to {}", paths.len(), dir.display());
            Ok(())
        }
    }
}

fn clean(a: CleanArgs) -> Result<()> {
    let policy = match &a.policy {
        Some(p) => parse_policy(&read_text(p)?)?,
        None => Default::default(),
    };
    let (text, report) = normalize(&input_text(a.input.as_deref())?, &policy);
    let corpus = tokenize_with(&text, &policy.punct_detach);
    eprintln!(
        "lines in {}, lines out {}, characters removed {}",
        report.lines_in, report.lines_out, report.chars_removed
    );
    for (reason, n) in &report.reasons {
        eprintln!("  {reason}: {n}");
    }
    write_out(a.output.as_deref(), &corpus.to_text())
}

fn stats_cmd(a: StatsArgs) -> Result<()> {
    let corpora = corpora_args(&a.corpora)?;
    let t = match a.kind {
        StatsKind::Unigram => {
            if let Some(k) = a.top {
                let mut t = Table::new("unigram_top", &["stats"], &["Language", "Rank", "Unit", "Freq", "RF", "CC"]);
                for c in &corpora {
                    let words: Vec<&str> = c.tokens().collect();
                    freq_rows(&mut t, &c.language_id, &stats::freq_table(&words).in_module("stats")?, Some(k));
                }
                t
            } else {
                let mut t = Table::new(
                    "unigram",
                    &["stats"],
                    &["Language", "Sentences", "Tokens", "Types", "RareTypes", "TTR", "MATTR"],
                );
                for c in &corpora {
                    let words: Vec<&str> = c.tokens().collect();
                    let d = stats::diversity(&words, a.window).in_module("stats")?;
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
                t
            }
        }
        StatsKind::Chars => {
            let mut t = Table::new("chars", &["stats"], &["Language", "N", "Tokens", "Types", "RareTypes", "TTR", "MATTR"]);
            for c in &corpora {
                for p in stats::char_ngram_profile(c, a.max_n, a.window).in_module("stats")? {
                    let mut row = vec![Cell::text(&c.language_id), Cell::count(p.n)];
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
                    t.push(row);
                }
            }
            t
        }
        StatsKind::Lengths => {
            let mut t = Table::new(
                "lengths",
                &["stats"],
                &["Language", "Min", "Max", "Mean", "Median", "StdDev", "Length", "Count"],
            );
            for c in &corpora {
                let s = stats::length_stats(c, a.basis.into()).in_module("stats")?;
                let summary = [
                    Cell::count(s.min),
                    Cell::count(s.max),
                    Cell::Real(s.mean),
                    Cell::Real(s.median),
                    Cell::Real(s.stddev),
                ];
                for (len, n) in &s.histogram {
                    let mut row = vec![Cell::text(&c.language_id)];
                    row.extend(summary.iter().cloned());
                    row.extend([Cell::count(*len), Cell::count(*n)]);
                    t.push(row);
                }
            }
            t
        }
        StatsKind::Zipf => {
            let mut t = Table::new("zipf", &["stats"], &["Language", "Rank", "Freq", "LogRank", "LogFreq"]);
            for c in &corpora {
                let words: Vec<&str> = c.tokens().collect();
                let table = stats::freq_table(&words).in_module("stats")?;
                let points = stats::zipf_points(&table);
                if let Ok(s) = stats::zipf_slope(&points) {
                    eprintln!("{}: slope {s:.4}", c.language_id);
                }
                for (rank, freq) in points.into_iter().take(a.top.unwrap_or(usize::MAX)) {
                    t.push(vec![
                        Cell::text(&c.language_id),
                        Cell::count(rank),
                        Cell::Count(freq),
                        Cell::Real((rank as f64).log10()),
                        Cell::Real((freq as f64).log10()),
                    ]);
                }
            }
            t
        }
        StatsKind::Coverage => {
            let mut columns = vec!["Language".to_string()];
            columns.extend(a.fractions.iter().map(|p| format!("{}%", p * 100.0)));
            let mut t = Table::with_columns("coverage", &["stats"], columns);
            for c in &corpora {
                let words: Vec<&str> = c.tokens().collect();
                let cov = stats::type_coverage(&words, &a.fractions, a.seed).in_module("stats")?;
                let mut row = vec![Cell::text(&c.language_id)];
                row.extend(cov.iter().map(|&(_, v)| Cell::Percent(100.0 * v)));
                t.push(row);
            }
            t
        }
    };
    emit_table(&t, &a.out)
}

fn load_lm(path: &Path) -> Result<NGramModel> {
    formats::read_lm(&read_text(path)?).map_err(|e| Error::file(path, e))
}

fn lm(c: LmCommand) -> Result<()> {
    match c {
        LmCommand::Train {
            order,
            level,
            smoothing,
            discount,
            no_sentence_end,
            corpus,
            out,
        } => {
            let mut config = LmConfig::new(level.into(), order, smoothing.into());
            if let Some(d) = discount {
                config = config.with_discount(d);
            }
            if no_sentence_end {
                config = config.without_sentence_end();
            }
            let model = NGramModel::train(&read_corpus(&corpus)?, config).in_module("ngramlm")?;
            write_text(&out, &formats::write_lm(&model))
        }
        LmCommand::Score { model, input } => {
            let m = load_lm(&model)?;
            let corpus = Corpus::from_text("input", &input_text(input.as_deref())?);
            let mut out = String::from("LogProb\tUnits\tCrossEntropy\tPerplexity\tOOV\n");
            for s in corpus.sentences() {
                let r = m.sequence_logprob(s);
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    Cell::Real(r.total_logprob).to_tsv(),
                    r.token_count,
                    Cell::Real(r.cross_entropy).to_tsv(),
                    Cell::Real(r.perplexity).to_tsv(),
                    r.oov_count
                ));
            }
            write_out(None, &out)
        }
        LmCommand::Ppl { model, corpus, out } => {
            let m = load_lm(&model)?;
            let r = m.perplexity(&read_corpus(&corpus)?).in_module("ngramlm")?;
            let mut t = Table::new(
                "perplexity",
                &["ngramlm"],
                &["LogProb", "Units", "CrossEntropy", "Perplexity", "OOV", "ZeroProb"],
            );
            t.push(vec![
                Cell::Real(r.total_logprob),
                Cell::count(r.token_count),
                Cell::Real(r.cross_entropy),
                Cell::Real(r.perplexity),
                Cell::count(r.oov_count),
                Cell::count(r.zero_prob_events),
            ]);
            emit_table(&t, &out)
        }
    }
}

fn similarity(a: SimilarityArgs) -> Result<()> {
    let corpora = registry_corpora(&a.registry)?;
    let mode = match a.mode {
        ModeArg::RawSum => ScoreMode::RawSum,
        ModeArg::PerCharMean => ScoreMode::PerCharMean,
    };
    let sim = ssnglm_matrix(&corpora, a.order, a.seed, mode, a.symmetrize).in_module("similarity")?;
    let dist = distance_matrix(&corpora, a.distance_order, a.seed).in_module("similarity")?;
    let format: TableFormat = a.out.format.into();
    let tables = [
        Table::matrix("similarity", &["similarity"], &sim.languages, &sim.scaled),
        Table::matrix("similarity_raw", &["similarity"], &sim.languages, &sim.raw),
        Table::matrix("distance", &["similarity"], &dist.languages, &dist.scaled),
        Table::matrix("distance_raw", &["similarity"], &dist.languages, &dist.raw),
    ];
    match &a.out.output {
        // one file per matrix inside the given directory
        Some(dir) => {
            for t in &tables {
                write_text(&dir.join(format!("{}.{}", t.name, format.extension())), &t.render(format, ""))?;
            }
            Ok(())
        }
        None => {
            let parts: Vec<String> = tables.iter().map(|t| t.render(format, "")).collect();
            write_out(None, &parts.join("\n"))
        }
    }
}

fn langid(c: LangidCommand) -> Result<()> {
    match c {
        LangidCommand::Train {
            backend,
            order,
            profile_size,
            out,
            registry,
        } => {
            let corpora = registry_corpora(&registry)?;
            let config = IdentifierConfig {
                backend: match backend {
                    BackendArg::LmScore => Backend::LmScore,
                    BackendArg::RankProfile => Backend::RankProfile,
                },
                order,
                profile_size,
                ..IdentifierConfig::default()
            };
            let model = IdentifierModel::train(&corpora, config).in_module("langid")?;
            formats::write_langid(&model, &out)
        }
        LangidCommand::Predict { model, input } => {
            let m = formats::read_langid(&model)?;
            let mut out = String::new();
            for line in input_text(input.as_deref())?.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let p = m.identify(line).in_module("langid")?;
                out.push_str(&format!("{}\t{line}\n", p.language));
            }
            write_out(None, &out)
        }
        LangidCommand::Eval {
            model,
            test,
            confusion,
            out,
        } => {
            let m = formats::read_langid(&model)?;
            let items = formats::read_labeled(&read_text(&test)?).map_err(|e| Error::file(&test, e))?;
            let report = m.evaluate(&items).in_module("langid")?;
            let mut text = report_table("langid", &["langid"], &report).render(out.format.into(), "");
            if confusion {
                text.push('\n');
                text.push_str(&confusion_table("langid_confusion", &["langid"], &report).render(out.format.into(), ""));
            }
            write_out(out.output.as_deref(), &text)
        }
    }
}

fn load_morph(path: &Path) -> Result<corpuslab_core::morphseg::SegmentationModel> {
    formats::read_morph(&read_text(path)?).map_err(|e| Error::file(path, e))
}

fn morph(c: MorphCommand) -> Result<()> {
    match c {
        MorphCommand::Train {
            morph_cost,
            char_cost,
            out,
            corpus,
        } => {
            let config = MorphConfig {
                morph_cost,
                char_cost,
                ..MorphConfig::default()
            };
            let model = train_segmenter(&word_counts(&read_corpus(&corpus)?), &config).in_module("morphseg")?;
            write_text(&out, &formats::write_morph(&model))
        }
        MorphCommand::Segment { model, input } => {
            let m = load_morph(&model)?;
            let mut out = String::new();
            for w in input_text(input.as_deref())?.split_whitespace() {
                out.push_str(&m.segment(w).join(" "));
                out.push('\n');
            }
            write_out(None, &out)
        }
        MorphCommand::Table {
            model,
            corpus,
            top,
            out,
        } => {
            let m = load_morph(&model)?;
            let c = read_corpus(&corpus)?;
            let table = morph_table(&c, &m).in_module("morphseg")?;
            let mut t = Table::new("morphemes", &["morphseg"], &["Language", "Rank", "Unit", "Freq", "RF", "CC"]);
            freq_rows(&mut t, &c.language_id, &table, top);
            emit_table(&t, &out)
        }
    }
}

fn load_tagger(path: &Path) -> Result<corpuslab_core::tagger::TaggerModel> {
    formats::read_tagger(&read_text(path)?).map_err(|e| Error::file(path, e))
}

fn tag(c: TagCommand) -> Result<()> {
    match c {
        TagCommand::Train { opts, gold, out } => {
            let model = train_tagger(&read_gold(&gold)?, &opts.config()).in_module("tagger")?;
            write_text(&out, &formats::write_tagger(&model))
        }
        TagCommand::Predict { model, input, target } => {
            let m = load_tagger(&model)?;
            let text = input_text(input.as_deref())?;
            let sentences = formats::read_tagged_tsv(&text).in_module("tagger")?;
            let mut tagged = Vec::with_capacity(sentences.len());
            for s in sentences {
                let tags = m.tag(&s, target.into());
                let mut t = s.clone();
                match target {
                    TargetArg::Pos => {
                        t.pos = Some(tags);
                        t.chunks = None;
                    }
                    TargetArg::Chunk => {
                        if s.pos.is_none() && m.level() >= 3 {
                            return Err(Error::Usage("chunk tagging at level 3 or above needs a POS column".into()));
                        }
                        t.chunks = Some(tags);
                    }
                }
                tagged.push(t);
            }
            write_out(None, &formats::write_tagged_tsv(&tagged))
        }
        TagCommand::Eval {
            model,
            gold,
            target,
            out,
        } => {
            let m = load_tagger(&model)?;
            let report = evaluate_tagger(&m, &read_gold(&gold)?, target.into()).in_module("tagger")?;
            emit_table(&report_table("tagger", &["tagger"], &report), &out)
        }
        TagCommand::Ablate { opts, train, test, out } => {
            let levels: Vec<u8> = (0..=opts.level).collect();
            let grid = ablate(&read_gold(&train)?, &read_gold(&test)?, &opts.config(), &levels).in_module("tagger")?;
            emit_table(&ablation_table("ablation", &grid), &out)
        }
    }
}

fn ssf(c: SsfCommand) -> Result<()> {
    match c {
        SsfCommand::Validate { file, tagset } => {
            let doc = read_doc(&file)?;
            let sets: &[Tagset] = match tagset {
                TagsetArg::Pos => &[Tagset::BisPos],
                TagsetArg::Chunk => &[Tagset::BisChunk],
                TagsetArg::Both => &[Tagset::BisPos, Tagset::BisChunk],
            };
            let mut out = String::from("Sentence\tAddress\tTag\n");
            let mut n = 0;
            for &s in sets {
                for v in validate_tags(&doc, s) {
                    out.push_str(&format!("{}\t{}\t{}\n", v.sentence_id, v.address, v.tag));
                    n += 1;
                }
            }
            write_out(None, &out)?;
            if n > 0 {
                return Err(Error::file(
                    &file,
                    corpuslab_core::Error::InvalidArgument(format!("{n} tags outside the tagset")),
                ));
            }
            Ok(())
        }
        SsfCommand::Stats { file, window, out } => {
            let doc = read_doc(&file)?;
            let s = annotated_stats(std::slice::from_ref(&doc), window).in_module("annotio")?;
            let mut t = Table::new("ssf_stats", &["annotio"], &["Stream", "Units", "Entropy", "TTR", "MATTR"]);
            let streams = [("pos", Some(&s.pos)), ("word_pos", Some(&s.word_pos)), ("chunk", s.chunk.as_ref())];
            for (name, st) in streams {
                if let Some(st) = st {
                    t.push(vec![
                        Cell::text(name),
                        Cell::count(st.units),
                        Cell::Real(st.entropy),
                        Cell::Ratio(st.ttr),
                        Cell::Ratio(st.mattr),
                    ]);
                }
            }
            eprintln!("sentences {}, tokens {}, chunks {}", s.sentences, s.tokens, s.chunks);
            emit_table(&t, &out)
        }
        SsfCommand::ToBio { file, output } => {
            let doc = read_doc(&file)?;
            let bio = to_bio(&doc).map_err(|e| Error::file(&file, e))?;
            write_out(output.as_deref(), &formats::write_tagged_tsv(&bio))
        }
        SsfCommand::FromBio { file, lenient, output } => {
            let sentences = formats::read_tagged_tsv(&read_text(&file)?).map_err(|e| Error::file(&file, e))?;
            let mode = if lenient { BioMode::Lenient } else { BioMode::Strict };
            let r = from_bio(&sentences, mode).map_err(|e| Error::file(&file, e))?;
            if r.repairs > 0 {
                eprintln!("{} tags repaired", r.repairs);
            }
            write_out(output.as_deref(), &serialize_ssf(&r.document))
        }
    }
}
