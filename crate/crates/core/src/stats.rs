//! Frequency-distribution measures: ranked tables, TTR, MATTR, type
//! coverage, word lengths, Zipf points, entropy and character n-gram
//! profiles.
//!
//! All ratios are on the `[0, 1]` scale.

use alloc::string::String;
use alloc::vec::Vec;
use crate::collections::HashMap;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::math;
use crate::textcore::{classify_char, CharClass, Corpus};

/// Default MATTR window.
pub const DEFAULT_WINDOW: usize = 500;

/// Whether a count ranges over distinct items or over occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Basis {
    #[default]
    Types,
    Tokens,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqRow {
    pub unit: String,
    pub freq: u64,
    /// Relative frequency.
    pub rf: f64,
    /// Cumulative coverage: running sum of `rf`.
    pub cc: f64,
}

/// Rows sorted by frequency descending, ties by code point order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    pub rows: Vec<FreqRow>,
    pub total: u64,
}

impl FrequencyTable {
    pub fn top(&self, n: usize) -> &[FreqRow] {
        &self.rows[..n.min(self.rows.len())]
    }

    pub fn types(&self) -> usize {
        self.rows.len()
    }

    /// Number of units occurring exactly once.
    pub fn hapaxes(&self) -> usize {
        self.rows.iter().filter(|r| r.freq == 1).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub tokens: usize,
    pub types: usize,
    /// Types with frequency one.
    pub rare_types: usize,
    pub ttr: f64,
    pub mattr: f64,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthStats {
    pub basis: Basis,
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub stddev: f64,
    /// `(length, count)` pairs in increasing length order.
    pub histogram: Vec<(usize, usize)>,
}

/// Maps units to dense ids in first-seen order.
struct Interned {
    ids: Vec<u32>,
    types: usize,
}

fn intern<S: AsRef<str>>(units: &[S]) -> Interned {
    let mut map: HashMap<&str, u32> = HashMap::default();
    let ids = units
        .iter()
        .map(|u| {
            let next = map.len() as u32;
            *map.entry(u.as_ref()).or_insert(next)
        })
        .collect();
    Interned {
        ids,
        types: map.len(),
    }
}

fn counts<S: AsRef<str>>(units: &[S]) -> HashMap<&str, u64> {
    let mut map: HashMap<&str, u64> = HashMap::default();
    for u in units {
        *map.entry(u.as_ref()).or_insert(0) += 1;
    }
    map
}

/// Ranked frequency table of a unit stream.
pub fn freq_table<S: AsRef<str>>(units: &[S]) -> Result<FrequencyTable> {
    if units.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pairs: Vec<(&str, u64)> = counts(units).into_iter().collect();
    pairs.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let total = units.len() as u64;
    let mut running = 0u64;
    let rows = pairs
        .into_iter()
        .map(|(unit, freq)| {
            running += freq;
            FreqRow {
                unit: unit.into(),
                freq,
                rf: freq as f64 / total as f64,
                cc: running as f64 / total as f64,
            }
        })
        .collect();
    Ok(FrequencyTable { rows, total })
}

/// Distinct units over total units.
pub fn ttr<S: AsRef<str>>(units: &[S]) -> Result<f64> {
    if units.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(intern(units).types as f64 / units.len() as f64)
}

/// Mean TTR over every contiguous window of exactly `window` units; plain
/// TTR when the stream is no longer than the window.
pub fn mattr<S: AsRef<str>>(units: &[S], window: usize) -> Result<f64> {
    if window == 0 {
        return Err(Error::invalid("MATTR window must be at least 1"));
    }
    if units.is_empty() {
        return Err(Error::EmptyInput);
    }
    let interned = intern(units);
    Ok(mattr_ids(&interned.ids, interned.types, window))
}

fn mattr_ids(ids: &[u32], types: usize, window: usize) -> f64 {
    let n = ids.len();
    if n <= window {
        return types as f64 / n as f64;
    }
    let mut seen = alloc::vec![0u32; types];
    let mut distinct = 0u64;
    for &id in &ids[..window] {
        if seen[id as usize] == 0 {
            distinct += 1;
        }
        seen[id as usize] += 1;
    }
    let mut sum = distinct;
    for i in window..n {
        let out = ids[i - window] as usize;
        seen[out] -= 1;
        if seen[out] == 0 {
            distinct -= 1;
        }
        let inc = ids[i] as usize;
        if seen[inc] == 0 {
            distinct += 1;
        }
        seen[inc] += 1;
        sum += distinct;
    }
    let windows = (n - window + 1) as f64;
    sum as f64 / (windows * window as f64)
}

/// Counts, TTR and MATTR of one unit stream.
pub fn diversity<S: AsRef<str>>(units: &[S], window: usize) -> Result<DiversityReport> {
    if window == 0 {
        return Err(Error::invalid("MATTR window must be at least 1"));
    }
    if units.is_empty() {
        return Err(Error::EmptyInput);
    }
    let interned = intern(units);
    let mut freq = alloc::vec![0u64; interned.types];
    for &id in &interned.ids {
        freq[id as usize] += 1;
    }
    Ok(DiversityReport {
        tokens: units.len(),
        types: interned.types,
        rare_types: freq.iter().filter(|&&f| f == 1).count(),
        ttr: interned.types as f64 / units.len() as f64,
        mattr: mattr_ids(&interned.ids, interned.types, window),
        window,
    })
}

/// Share of all types seen in a seeded random sample of token positions.
///
/// For each fraction `p` in `percents`, `floor(p * tokens)` positions are
/// drawn without replacement with a generator seeded by `seed`. Every
/// fraction uses a fresh generator, so smaller samples are subsets of
/// larger ones.
pub fn type_coverage<S: AsRef<str>>(
    units: &[S],
    percents: &[f64],
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if units.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(p) = percents.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(Error::invalid(alloc::format!(
            "coverage fraction {p} outside (0, 1]"
        )));
    }
    let interned = intern(units);
    let n = units.len();
    let mut out = Vec::with_capacity(percents.len());
    for &p in percents {
        let k = math::floor(p * n as f64) as usize;
        let mut rng = crate::sampling::rng(seed);
        let picks = crate::sampling::sample_indices(&mut rng, n, k);
        let mut seen = alloc::vec![false; interned.types];
        let mut distinct = 0usize;
        for i in picks {
            let id = interned.ids[i] as usize;
            if !seen[id] {
                seen[id] = true;
                distinct += 1;
            }
        }
        out.push((p, distinct as f64 / interned.types as f64));
    }
    Ok(out)
}

/// Word lengths in code points after NFC.
pub fn length_stats(corpus: &Corpus, basis: Basis) -> Result<LengthStats> {
    let lengths: Vec<usize> = match basis {
        Basis::Tokens => corpus.tokens().map(nfc_len).collect(),
        Basis::Types => {
            let mut types: Vec<&str> = corpus.tokens().collect();
            types.sort_unstable();
            types.dedup();
            types.into_iter().map(nfc_len).collect()
        }
    };
    lengths_summary(lengths, basis)
}

fn nfc_len(token: &str) -> usize {
    token.nfc().count()
}

fn lengths_summary(mut lengths: Vec<usize>, basis: Basis) -> Result<LengthStats> {
    if lengths.is_empty() {
        return Err(Error::EmptyInput);
    }
    lengths.sort_unstable();
    let n = lengths.len();
    let mean = lengths.iter().sum::<usize>() as f64 / n as f64;
    let median = if n % 2 == 1 {
        lengths[n / 2] as f64
    } else {
        (lengths[n / 2 - 1] + lengths[n / 2]) as f64 / 2.0
    };
    let var = lengths
        .iter()
        .map(|&l| {
            let d = l as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n as f64;
    let mut histogram: Vec<(usize, usize)> = Vec::new();
    for &l in &lengths {
        match histogram.last_mut() {
            Some((len, count)) if *len == l => *count += 1,
            _ => histogram.push((l, 1)),
        }
    }
    Ok(LengthStats {
        basis,
        min: lengths[0],
        max: lengths[n - 1],
        mean,
        median,
        stddev: math::sqrt(var),
        histogram,
    })
}

/// `(rank, freq)` pairs, ranks starting at 1.
pub fn zipf_points(table: &FrequencyTable) -> Vec<(usize, u64)> {
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i + 1, r.freq))
        .collect()
}

/// Least-squares slope of `ln freq` against `ln rank`.
pub fn zipf_slope(points: &[(usize, u64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two points for a slope"));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(r, _)| math::ln(r as f64)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, f)| math::ln(f as f64)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    Ok(sxy / sxx)
}

/// Shannon entropy in bits of the empirical unigram distribution.
pub fn entropy<S: AsRef<str>>(units: &[S]) -> Result<f64> {
    if units.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = units.len() as f64;
    let h = counts(units)
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            -p * math::log2(p)
        })
        .sum::<f64>();
    Ok(h.max(0.0))
}

/// Diversity of the character n-grams of one order.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramProfile {
    pub n: usize,
    /// `None` when no word segment is long enough for this order.
    pub report: Option<DiversityReport>,
}

fn excluded_from_ngrams(c: char) -> bool {
    matches!(classify_char(c), CharClass::Punctuation | CharClass::Space)
}

/// All word-internal character n-grams of order `n`, in corpus order.
///
/// Punctuation splits a word into segments; n-grams never span a segment
/// or word boundary.
pub fn char_ngrams(corpus: &Corpus, n: usize) -> Vec<String> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for token in corpus.tokens() {
        for segment in token.split(excluded_from_ngrams) {
            let chars: Vec<char> = segment.chars().collect();
            if chars.len() >= n {
                out.extend(chars.windows(n).map(|w| w.iter().collect::<String>()));
            }
        }
    }
    out
}

/// TTR and MATTR for character n-grams of orders `1..=n_max`.
pub fn char_ngram_profile(corpus: &Corpus, n_max: usize, window: usize) -> Result<Vec<NgramProfile>> {
    if n_max == 0 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    if char_ngrams(corpus, 1).is_empty() {
        return Err(Error::EmptyInput);
    }
    (1..=n_max)
        .map(|n| {
            let grams = char_ngrams(corpus, n);
            let report = if grams.is_empty() {
                None
            } else {
                Some(diversity(&grams, window)?)
            };
            Ok(NgramProfile { n, report })
        })
        .collect()
}

/// Every character of every token, punctuation and spaces excluded.
pub fn char_stream(corpus: &Corpus) -> Vec<String> {
    char_ngrams(corpus, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn freq_table_examples() {
        let t = freq_table(&["a", "b", "a"]).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!((t.rows[0].unit.as_str(), t.rows[0].freq), ("a", 2));
        assert!(close(t.rows[0].rf, 2.0 / 3.0) && close(t.rows[0].cc, 2.0 / 3.0));
        assert!(close(t.rows[1].rf, 1.0 / 3.0) && close(t.rows[1].cc, 1.0));
        let t = freq_table(&["a", "a", "a"]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(close(t.rows[0].rf, 1.0) && close(t.rows[0].cc, 1.0));
        assert_eq!(freq_table::<&str>(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn ties_break_by_code_point() {
        let t = freq_table(&["walk", "ed", "b", "a"]).unwrap();
        let units: Vec<&str> = t.rows.iter().map(|r| r.unit.as_str()).collect();
        assert_eq!(units, ["a", "b", "ed", "walk"]);
    }

    #[test]
    fn ttr_examples() {
        assert_eq!(ttr(&["a", "b", "c", "d", "e"]).unwrap(), 1.0);
        assert_eq!(ttr(&["a", "a", "a", "a"]).unwrap(), 0.25);
        assert!(ttr::<&str>(&[]).is_err());
    }

    #[test]
    fn mattr_examples() {
        let short: Vec<String> = (0..10).map(|i| alloc::format!("{}", i % 3)).collect();
        assert_eq!(mattr(&short, 500).unwrap(), ttr(&short).unwrap());
        assert_eq!(mattr(&["a", "b", "a", "b", "a", "b"], 2).unwrap(), 1.0);
        let v = mattr(&["a", "a", "b", "b"], 2).unwrap();
        assert!(close(v, (0.5 + 1.0 + 0.5) / 3.0));
        assert!(mattr(&["a"], 0).is_err());
    }

    #[test]
    fn coverage_edges() {
        let units = ["a", "a", "b", "c"];
        let cov = type_coverage(&units, &[1.0], 9).unwrap();
        assert_eq!(cov, vec![(1.0, 1.0)]);
        let cov = type_coverage(&["x"; 20], &[0.1, 0.5], 3).unwrap();
        assert!(cov.iter().all(|&(_, v)| v == 1.0));
        assert!(type_coverage(&units, &[0.0], 1).is_err());
        assert!(type_coverage::<&str>(&[], &[0.5], 1).is_err());
    }

    #[test]
    fn lengths() {
        let c = Corpus::from_text("x", "क कम");
        let s = length_stats(&c, Basis::Types).unwrap();
        assert_eq!((s.min, s.max), (1, 2));
        assert!(close(s.mean, 1.5) && close(s.median, 1.5));
        assert_eq!(s.histogram, vec![(1, 1), (2, 1)]);
        let c = Corpus::from_text("x", "कम कम कम");
        let s = length_stats(&c, Basis::Tokens).unwrap();
        assert_eq!(s.stddev, 0.0);
        assert!(length_stats(&Corpus::default(), Basis::Tokens).is_err());
    }

    #[test]
    fn zipf_pairs() {
        let t = freq_table(&["a", "a", "a", "a", "b", "b", "c"]).unwrap();
        assert_eq!(zipf_points(&t), vec![(1, 4), (2, 2), (3, 1)]);
        let t = freq_table(&["z", "z"]).unwrap();
        assert_eq!(zipf_points(&t), vec![(1, 2)]);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&["a", "b"]).unwrap(), 1.0);
        assert_eq!(entropy(&["a", "a", "a"]).unwrap(), 0.0);
        assert_eq!(entropy(&["a", "b", "c", "d"]).unwrap(), 2.0);
    }

    #[test]
    fn char_ngram_examples() {
        let c = Corpus::from_text("x", "कककक");
        let p = char_ngram_profile(&c, 1, 500).unwrap();
        let r = p[0].report.as_ref().unwrap();
        assert_eq!((r.tokens, r.types), (4, 1));
        assert_eq!(r.ttr, 0.25);

        let c = Corpus::from_text("x", "कमल");
        let p = char_ngram_profile(&c, 7, 500).unwrap();
        assert!(p[6].report.is_none());
        assert_eq!(char_ngrams(&c, 7).len(), 0);

        let c = Corpus::from_text("x", "कमल मलय");
        assert_eq!(char_ngrams(&c, 2), ["कम", "मल", "मल", "लय"]);
        let p = char_ngram_profile(&c, 2, 500).unwrap();
        assert_eq!(p[1].report.as_ref().unwrap().ttr, 0.75);
    }

    #[test]
    fn ngrams_skip_punctuation() {
        let c = Corpus::from_text("x", "क-ख ग।");
        assert_eq!(char_ngrams(&c, 1), ["क", "ख", "ग"]);
        assert!(char_ngrams(&c, 2).is_empty());
        assert_eq!(
            char_ngram_profile(&Corpus::from_text("x", "। ?"), 3, 5),
            Err(Error::EmptyInput)
        );
    }
}
