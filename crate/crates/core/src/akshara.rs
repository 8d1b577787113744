//! Orthographic syllable (akshara) segmentation and positional counts.
//!
//! An akshara is a maximal run
//! `(C [nukta] halant)* C [nukta] [vowel sign] [anusvara|candrabindu] [visarga]`,
//! or an independent vowel with the same optional marks. A cluster that
//! ends in a halant at the end of a word forms an akshara without a vowel.
//! Avagraha belongs to the akshara before it.

use alloc::string::String;
use alloc::vec::Vec;
use crate::collections::HashSet;

use crate::error::{Error, Result};
use crate::stats::{self, Basis, FrequencyTable};
use crate::textcore::{classify_char, is_devanagari_letter, CharClass, Corpus};

const ZWJ: char = '\u{200D}';
const ZWNJ: char = '\u{200C}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Initial,
    Medial,
    Final,
    /// The only akshara of its word.
    Sole,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Akshara {
    pub text: String,
    pub index: usize,
    pub position: Position,
}

/// Aksharas of one word plus a tally of ill-formed sequences that were
/// attached to a neighbour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllabification {
    pub aksharas: Vec<Akshara>,
    pub warnings: usize,
}

pub fn syllabify(word: &str) -> Vec<Akshara> {
    syllabify_checked(word).aksharas
}

pub fn syllabify_checked(word: &str) -> Syllabification {
    let spans = if word.chars().any(is_devanagari_letter) {
        split_spans(word)
    } else {
        SpanResult {
            spans: alloc::vec![(0, word.len())],
            warnings: 0,
        }
    };
    let k = spans.spans.len();
    let aksharas = spans
        .spans
        .iter()
        .enumerate()
        .filter(|(_, (s, e))| s < e)
        .map(|(index, &(s, e))| Akshara {
            text: word[s..e].into(),
            index,
            position: position_of(index, k),
        })
        .collect();
    Syllabification {
        aksharas,
        warnings: spans.warnings,
    }
}

fn position_of(index: usize, k: usize) -> Position {
    if k == 1 {
        Position::Sole
    } else if index == 0 {
        Position::Initial
    } else if index + 1 == k {
        Position::Final
    } else {
        Position::Medial
    }
}

struct SpanResult {
    spans: Vec<(usize, usize)>,
    warnings: usize,
}

fn split_spans(word: &str) -> SpanResult {
    let chars: Vec<(usize, char)> = word.char_indices().collect();
    let n = chars.len();
    let offset = |i: usize| if i < n { chars[i].0 } else { word.len() };
    let class = |i: usize| {
        if i < n {
            Some(classify_char(chars[i].1))
        } else {
            None
        }
    };
    let is_joiner = |i: usize| i < n && matches!(chars[i].1, ZWJ | ZWNJ);

    let mut spans: Vec<(usize, usize)> = Vec::new();
    let mut warnings = 0;
    // Start of leading marks that had no base to attach to.
    let mut orphan_start: Option<usize> = None;
    let mut i = 0;

    let push = |spans: &mut Vec<(usize, usize)>, orphan: &mut Option<usize>, s: usize, e: usize| {
        let start = orphan.take().unwrap_or(s);
        spans.push((start, e));
    };

    while i < n {
        let start = offset(i);
        match class(i) {
            Some(CharClass::Consonant) => {
                loop {
                    i += 1;
                    if class(i) == Some(CharClass::Nukta) {
                        i += 1;
                    }
                    if class(i) == Some(CharClass::Halant) {
                        let mut j = i + 1;
                        while is_joiner(j) {
                            j += 1;
                        }
                        if class(j) == Some(CharClass::Consonant) {
                            i = j;
                            continue;
                        }
                        // Vowelless cluster; only well-formed at the word end.
                        i = j;
                        if i < n {
                            warnings += 1;
                        }
                        break;
                    }
                    take_vowel_marks(&mut i, &class);
                    break;
                }
                push(&mut spans, &mut orphan_start, start, offset(i));
            }
            Some(CharClass::IndependentVowel) => {
                i += 1;
                take_vowel_marks(&mut i, &class);
                push(&mut spans, &mut orphan_start, start, offset(i));
            }
            Some(CharClass::Avagraha) => {
                i += 1;
                match spans.last_mut() {
                    Some(last) if orphan_start.is_none() => last.1 = offset(i),
                    _ => {
                        warnings += 1;
                        push(&mut spans, &mut orphan_start, start, offset(i));
                    }
                }
            }
            Some(
                CharClass::DependentVowelSign
                | CharClass::Halant
                | CharClass::Nukta
                | CharClass::Anusvara
                | CharClass::Candrabindu
                | CharClass::Visarga,
            ) => {
                i += 1;
                warnings += 1;
                match spans.last_mut() {
                    Some(last) if orphan_start.is_none() => last.1 = offset(i),
                    _ => {
                        orphan_start.get_or_insert(start);
                    }
                }
            }
            _ if is_joiner(i) => {
                i += 1;
                match spans.last_mut() {
                    Some(last) if orphan_start.is_none() => last.1 = offset(i),
                    _ => {
                        orphan_start.get_or_insert(start);
                    }
                }
            }
            _ => {
                // Digits, Latin letters, symbols: one unit per run.
                while i < n
                    && !is_joiner(i)
                    && matches!(
                        class(i),
                        Some(CharClass::Digit | CharClass::Punctuation | CharClass::Space | CharClass::Other)
                    )
                {
                    i += 1;
                }
                warnings += 1;
                push(&mut spans, &mut orphan_start, start, offset(i));
            }
        }
    }
    if let Some(s) = orphan_start {
        spans.push((s, word.len()));
    }
    SpanResult { spans, warnings }
}

fn take_vowel_marks(i: &mut usize, class: &impl Fn(usize) -> Option<CharClass>) {
    if class(*i) == Some(CharClass::DependentVowelSign) {
        *i += 1;
    }
    if matches!(class(*i), Some(CharClass::Anusvara | CharClass::Candrabindu)) {
        *i += 1;
    }
    if class(*i) == Some(CharClass::Visarga) {
        *i += 1;
    }
}

/// Number of vowel nuclei in one akshara: independent vowels, vowel
/// signs, and the inherent vowel of a cluster that does not end in a
/// halant.
pub fn nucleus_count(akshara: &str) -> usize {
    let chars: Vec<char> = akshara.chars().collect();
    let mut count = 0;
    for (k, &c) in chars.iter().enumerate() {
        match classify_char(c) {
            CharClass::IndependentVowel | CharClass::DependentVowelSign => count += 1,
            CharClass::Consonant => {
                let next = chars[k + 1..]
                    .iter()
                    .copied()
                    .find(|&d| classify_char(d) != CharClass::Nukta);
                let carries_inherent = match next.map(classify_char) {
                    Some(CharClass::Halant | CharClass::DependentVowelSign) => false,
                    _ => true,
                };
                count += usize::from(carries_inherent);
            }
            _ => {}
        }
    }
    count
}

/// Positional counts over a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionStats {
    pub mode: Basis,
    pub total: u64,
    pub initial: u64,
    pub medial: u64,
    pub word_final: u64,
}

impl PositionStats {
    /// Percentages of `(initial, medial, final)`.
    pub fn percentages(&self) -> (f64, f64, f64) {
        let t = self.total as f64;
        (
            100.0 * self.initial as f64 / t,
            100.0 * self.medial as f64 / t,
            100.0 * self.word_final as f64 / t,
        )
    }
}

/// Tokens that carry at least one Devanagari letter.
fn syllabic_tokens(corpus: &Corpus) -> impl Iterator<Item = &str> + '_ {
    corpus
        .tokens()
        .filter(|t| t.chars().any(is_devanagari_letter))
}

/// Counts aksharas by word position.
///
/// Single-akshara words count as initial; two-akshara words as initial
/// plus final. In `Types` mode each distinct `(akshara, position)` pair
/// counts once.
pub fn position_stats(corpus: &Corpus, mode: Basis) -> Result<PositionStats> {
    let mut counts = [0u64; 3];
    let mut seen: HashSet<(String, u8)> = HashSet::default();
    for token in syllabic_tokens(corpus) {
        let sylls = syllabify(token);
        let k = sylls.len();
        for (idx, a) in sylls.into_iter().enumerate() {
            let slot: u8 = if idx == 0 {
                0
            } else if idx + 1 == k {
                2
            } else {
                1
            };
            match mode {
                Basis::Tokens => counts[slot as usize] += 1,
                Basis::Types => {
                    if seen.insert((a.text, slot)) {
                        counts[slot as usize] += 1;
                    }
                }
            }
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(PositionStats {
        mode,
        total,
        initial: counts[0],
        medial: counts[1],
        word_final: counts[2],
    })
}

/// The corpus as a stream of aksharas, word by word.
pub fn syllable_stream(corpus: &Corpus) -> Vec<String> {
    syllabic_tokens(corpus)
        .flat_map(|t| syllabify(t).into_iter().map(|a| a.text))
        .collect()
}

/// Ranked frequency table of aksharas.
pub fn syllable_table(corpus: &Corpus) -> Result<FrequencyTable> {
    stats::freq_table(&syllable_stream(corpus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(word: &str) -> Vec<String> {
        syllabify(word).into_iter().map(|a| a.text).collect()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(texts("कमल"), ["क", "म", "ल"]);
        assert_eq!(texts("हिन्दी"), ["हि", "न्दी"]);
        assert_eq!(texts("मंच"), ["मं", "च"]);
    }

    #[test]
    fn positions() {
        let a = syllabify("कमल");
        assert_eq!(
            a.iter().map(|x| x.position).collect::<Vec<_>>(),
            [Position::Initial, Position::Medial, Position::Final]
        );
        assert_eq!(syllabify("क")[0].position, Position::Sole);
    }

    #[test]
    fn marks_and_final_halant() {
        assert_eq!(texts("दुःख"), ["दुः", "ख"]);
        assert_eq!(texts("आँख"), ["आँ", "ख"]);
        assert_eq!(texts("वाक्"), ["वा", "क्"]);
        assert_eq!(texts("सोऽहम्"), ["सोऽ", "ह", "म्"]);
        assert_eq!(texts("पढ़लस"), ["प", "ढ़", "ल", "स"]);
        assert_eq!(texts("स्त्री"), ["स्त्री"]);
        assert_eq!(texts("क्\u{200D}ष"), ["क्\u{200D}ष"]);
    }

    #[test]
    fn ill_formed_input_is_kept_and_counted() {
        let s = syllabify_checked("\u{093E}कम");
        let t: Vec<&str> = s.aksharas.iter().map(|a| a.text.as_str()).collect();
        assert_eq!(t, ["\u{093E}क", "म"]);
        assert_eq!(s.warnings, 1);
        let s = syllabify_checked("कम१२");
        assert_eq!(s.aksharas.len(), 3);
        assert_eq!(s.warnings, 1);
        assert_eq!(texts("abc"), ["abc"]);
        assert_eq!(texts("।"), ["।"]);
    }

    #[test]
    fn nuclei() {
        assert_eq!(nucleus_count("न्दी"), 1);
        assert_eq!(nucleus_count("क"), 1);
        assert_eq!(nucleus_count("क्"), 0);
        assert_eq!(nucleus_count("ढ़"), 1);
        assert_eq!(nucleus_count("आँ"), 1);
    }

    #[test]
    fn position_stats_examples() {
        let c = Corpus::from_text("x", "कमल");
        let s = position_stats(&c, Basis::Tokens).unwrap();
        assert_eq!((s.initial, s.medial, s.word_final, s.total), (1, 1, 1, 3));
        let c = Corpus::from_text("x", "क");
        let s = position_stats(&c, Basis::Tokens).unwrap();
        assert_eq!((s.initial, s.medial, s.word_final), (1, 0, 0));
        assert_eq!(
            position_stats(&Corpus::default(), Basis::Types),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn types_mode_counts_distinct_pairs() {
        let c = Corpus::from_text("x", "कमल कमल मक");
        let s = position_stats(&c, Basis::Types).unwrap();
        // (क,I) (म,M) (ल,F) (म,I) (क,F)
        assert_eq!((s.initial, s.medial, s.word_final), (2, 1, 2));
        let t = position_stats(&c, Basis::Tokens).unwrap();
        assert_eq!(t.total, 8);
    }

    #[test]
    fn syllable_tables() {
        let c = Corpus::from_text("x", "क क क क");
        let t = syllable_table(&c).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!((t.rows[0].freq, t.rows[0].rf, t.rows[0].cc), (4, 1.0, 1.0));
        let c = Corpus::from_text("x", "कमल मन");
        assert_eq!(syllable_stream(&c), ["क", "म", "ल", "म", "न"]);
        let t = syllable_table(&c).unwrap();
        assert_eq!((t.rows[0].unit.as_str(), t.rows[0].freq), ("म", 2));
        assert!((t.rows[0].rf - 0.4).abs() < 1e-12);
    }
}
