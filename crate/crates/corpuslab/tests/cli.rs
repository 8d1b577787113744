mod support;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use corpuslab::tables::{parse_json, parse_tsv};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corpuslab"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn run_stdin(dir: &Path, args: &[&str], input: &str) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_corpuslab"))
        .current_dir(dir)
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn setup(sentences: usize) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let registry = support::write_corpora(dir.path(), &support::four_languages(sentences, 3));
    (dir, registry)
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["--version"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["stats", "unigram", "missing.txt"]).status.code(), Some(2));
    let out = run(dir.path(), &["lm", "ppl", "missing.lm", "missing.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.lm"));
}

#[test]
fn clean_and_wx() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_stdin(dir.path(), &["clean"], "राम घर गया।\nhello world\n\n");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("राम"));
    assert!(!text.contains("hello"));

    let wx = run_stdin(dir.path(), &["wx"], "राम घर गया\n");
    let wx = String::from_utf8(wx.stdout).unwrap();
    assert!(wx.is_ascii(), "{wx}");
    let back = run_stdin(dir.path(), &["wx", "--reverse"], &wx);
    assert_eq!(String::from_utf8(back.stdout).unwrap(), "राम घर गया\n");
}

#[test]
fn stats_tables_parse() {
    let (dir, _) = setup(200);
    let d = dir.path();
    for kind in ["unigram", "chars", "lengths", "zipf", "coverage"] {
        let tsv = ok(d, &["stats", kind, "aa.txt", "bb=bb.txt"]);
        let parsed = parse_tsv(&tsv).unwrap();
        assert!(!parsed.rows.is_empty(), "{kind}");
        let json = ok(d, &["stats", kind, "aa.txt", "--format", "json"]);
        assert!(!parse_json(&json).unwrap().rows.is_empty(), "{kind}");
    }
    let tsv = ok(d, &["akshara", "aa.txt", "cc.txt"]);
    assert!(parse_tsv(&tsv).unwrap().rows.len() >= 2);
}

#[test]
fn lm_train_and_perplexity() {
    let (dir, _) = setup(200);
    let d = dir.path();
    ok(d, &["lm", "train", "--order", "3", "--level", "char", "aa.txt", "--out", "aa.lm"]);
    let own = parse_tsv(&ok(d, &["lm", "ppl", "aa.lm", "aa.txt"])).unwrap();
    let other = parse_tsv(&ok(d, &["lm", "ppl", "aa.lm", "bb.txt"])).unwrap();
    let pp = |t: &corpuslab::tables::Parsed<String>| -> f64 {
        let col = t.columns.iter().position(|c| c == "Perplexity" || c == "PP").unwrap();
        t.rows[0][col].parse().unwrap()
    };
    assert!(pp(&own) < pp(&other));
    let scored = run_stdin(d, &["lm", "score", "aa.lm"], "कका\n");
    assert!(scored.status.success());
}

#[test]
fn similarity_and_langid() {
    let (dir, registry) = setup(400);
    let d = dir.path();
    let reg = registry.to_str().unwrap();
    let out = ok(d, &["similarity", reg]);
    assert_eq!(out.split("\n\n").filter(|t| !t.trim().is_empty()).count(), 4);
    ok(d, &["similarity", reg, "-o", "sim"]);
    assert!(std::fs::read_dir(d.join("sim")).unwrap().count() >= 4);

    ok(d, &["langid", "train", reg, "--out", "lid"]);
    let text = std::fs::read_to_string(d.join("cc.txt")).unwrap();
    let first: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
    let predicted = String::from_utf8(run_stdin(d, &["langid", "predict", "lid"], &first).stdout).unwrap();
    assert_eq!(predicted.lines().count(), 5);
    assert!(predicted.lines().all(|l| l.starts_with("cc\t")), "{predicted}");

    let labeled: String = ["aa", "dd"]
        .iter()
        .flat_map(|l| {
            let t = std::fs::read_to_string(d.join(format!("{l}.txt"))).unwrap();
            t.lines().take(10).map(|s| format!("{l}\t{s}\n")).collect::<Vec<_>>()
        })
        .collect();
    std::fs::write(d.join("test.tsv"), labeled).unwrap();
    let report = parse_tsv(&ok(d, &["langid", "eval", "lid", "test.tsv"])).unwrap();
    let acc = report.rows.iter().find(|r| r[0] == "accuracy").unwrap();
    assert!(acc.iter().any(|c| c == "1.0000"), "{acc:?}");
}

#[test]
fn morph_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("en.txt"), "walked walking talked talking\nwalked talking talked walking\n").unwrap();
    ok(d, &["morph", "train", "en.txt", "--out", "en.morph"]);
    let seg = String::from_utf8(run_stdin(d, &["morph", "segment", "en.morph"], "walked\ntalking\n").stdout).unwrap();
    assert!(seg.lines().all(|l| l.contains(' ')), "{seg}");
    let table = parse_tsv(&ok(d, &["morph", "table", "en.morph", "en.txt"])).unwrap();
    assert!(!table.rows.is_empty());
}

#[test]
fn tagging_and_ssf() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("gold.ssf"), support::golden_ssf()).unwrap();
    let code = run(d, &["ssf", "validate", "gold.ssf"]).status.code();
    assert_eq!(code, Some(0));
    let stats = parse_tsv(&ok(d, &["ssf", "stats", "gold.ssf"])).unwrap();
    assert!(!stats.rows.is_empty());

    ok(d, &["ssf", "to-bio", "gold.ssf", "-o", "gold.tsv"]);
    ok(d, &["ssf", "from-bio", "gold.tsv", "-o", "back.ssf"]);
    let back = std::fs::read_to_string(d.join("back.ssf")).unwrap();
    assert_eq!(back.matches("<Sentence").count(), 100);
    assert_eq!(ok(d, &["ssf", "to-bio", "back.ssf"]), std::fs::read_to_string(d.join("gold.tsv")).unwrap());

    ok(d, &["tag", "train", "--epochs", "3", "gold.ssf", "--out", "pos.tagger"]);
    ok(d, &["tag", "train", "--target", "chunk", "--epochs", "3", "gold.tsv", "--out", "chunk.tagger"]);
    let eval = parse_tsv(&ok(d, &["tag", "eval", "pos.tagger", "gold.tsv"])).unwrap();
    assert!(eval.rows.iter().any(|r| r[0] == "accuracy"));
    let predicted = String::from_utf8(run_stdin(d, &["tag", "predict", "pos.tagger"], "राम\nघर\n\nगया\n").stdout).unwrap();
    let lines: Vec<&str> = predicted.lines().collect();
    assert_eq!(lines.len(), 4, "{predicted}");
    assert!(lines[0].starts_with("राम\t") && lines[2].is_empty());

    let ablation = parse_tsv(&ok(d, &["tag", "ablate", "--epochs", "2", "--train", "gold.tsv", "--test", "gold.tsv"])).unwrap();
    assert_eq!(ablation.rows.len(), 5);

    assert_eq!(ok(d, &["kappa", "gold.ssf", "back.ssf"]), "1.0000\n");
    assert_eq!(ok(d, &["kappa", "--layer", "chunk", "gold.ssf", "back.ssf"]), "1.0000\n");

    let bad = support::golden_ssf().replacen("\tNN\t", "\tXYZ\t", 1);
    std::fs::write(d.join("bad.ssf"), bad).unwrap();
    let out = run(d, &["ssf", "validate", "bad.ssf"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("XYZ"));
}

#[test]
fn lexstats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("syn.tsv"), "#lexres\tv1\tsynset\n1\tnoun\ta tree\tरुख|पेड़\n2\tverb\tto go\tजा\n").unwrap();
    std::fs::write(d.join("dict.tsv"), "घर\thouse|home\tnoun\n").unwrap();
    assert!(!parse_tsv(&ok(d, &["lexstats", "--kind", "synset", "syn.tsv"])).unwrap().rows.is_empty());
    assert!(!parse_tsv(&ok(d, &["lexstats", "--kind", "dict", "dict.tsv"])).unwrap().rows.is_empty());
}

fn write_config(d: &Path, corpora: &[&str], extra: &str) {
    let mut toml = format!("seed = 9\nlm_orders = [1, 2]\ntagger_epochs = 2\noutput_dir = \"out\"\n{extra}\n[corpora]\n");
    for c in corpora {
        toml.push_str(&format!("{c} = \"{c}.txt\"\n"));
    }
    std::fs::write(d.join("report.toml"), toml).unwrap();
}

#[test]
fn report_bundle_parses_in_both_formats() {
    let (dir, _) = setup(150);
    let d = dir.path();
    write_config(d, &["aa", "bb", "cc"], "");
    ok(d, &["report", "--config", "report.toml"]);
    ok(d, &["report", "--config", "report.toml", "--format", "json", "--out", "json"]);
    let mut names = Vec::new();
    for entry in std::fs::read_dir(d.join("out")).unwrap() {
        let path = entry.unwrap().path();
        let tsv = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_tsv(&tsv).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        let json = std::fs::read_to_string(d.join("json").join(format!("{stem}.json"))).unwrap();
        let pj = parse_json(&json).unwrap();
        assert_eq!(parsed.columns, pj.columns, "{stem}");
        assert_eq!(parsed.rows.len(), pj.rows.len(), "{stem}");
        names.push(stem);
    }
    for want in ["unigram", "coverage", "perplexity", "zipf", "similarity", "distance", "langid"] {
        assert!(names.iter().any(|n| n == want), "{want} missing from {names:?}");
    }

    let first: Vec<(String, Vec<u8>)> = read_all(&d.join("out"));
    ok(d, &["report", "--config", "report.toml"]);
    assert_eq!(first, read_all(&d.join("out")));
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn report_single_corpus_has_notes_and_no_similarity() {
    let (dir, _) = setup(100);
    let d = dir.path();
    write_config(d, &["aa"], "");
    ok(d, &["report", "--config", "report.toml"]);
    let out = d.join("out");
    assert!(out.join("notes.tsv").exists());
    assert!(!out.join("similarity.tsv").exists());
    let notes = std::fs::read_to_string(out.join("notes.tsv")).unwrap();
    assert!(notes.contains("similarity"), "{notes}");
}

#[test]
fn report_missing_corpus_names_key() {
    let (dir, _) = setup(20);
    let d = dir.path();
    write_config(d, &["aa", "zz"], "");
    let out = run(d, &["report", "--config", "report.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zz"));
}

#[test]
fn report_rejects_unknown_keys() {
    let (dir, _) = setup(20);
    let d = dir.path();
    write_config(d, &["aa"], "colour = 1");
    assert_eq!(run(d, &["report", "--config", "report.toml"]).status.code(), Some(2));
}
