use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use unicode_normalization::UnicodeNormalization;

use super::chars::{classify_char, is_devanagari, CharClass};

/// Danda, double danda and the ASCII sentence punctuation.
pub const DEFAULT_PUNCT_DETACH: [char; 7] = ['\u{0964}', '\u{0965}', '.', '?', '!', ',', ';'];

/// Explicit cleaning configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CleaningPolicy {
    pub nfc: bool,
    pub script_filter: bool,
    /// Minimum share of Devanagari among a line's non-space characters.
    pub min_devanagari_fraction: f64,
    /// Characters that the tokenizer peels off word edges.
    pub punct_detach: Vec<char>,
}

impl Default for CleaningPolicy {
    fn default() -> Self {
        CleaningPolicy {
            nfc: true,
            script_filter: true,
            min_devanagari_fraction: 0.7,
            punct_detach: DEFAULT_PUNCT_DETACH.to_vec(),
        }
    }
}

/// What [`normalize`] removed.
///
/// `reasons` tallies characters for `control` and `whitespace`, and whole
/// lines for `script` and `empty`. `chars_removed` counts characters
/// stripped from inside lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CleaningReport {
    pub lines_in: usize,
    pub lines_out: usize,
    pub chars_removed: usize,
    pub reasons: BTreeMap<String, usize>,
}

impl CleaningReport {
    fn bump(&mut self, reason: &str, by: usize) {
        if by > 0 {
            *self.reasons.entry(reason.to_string()).or_insert(0) += by;
        }
    }
}

fn is_strippable_control(c: char) -> bool {
    (c.is_control() && c != '\t') || c == '\u{FEFF}'
}

fn is_collapsible_space(c: char) -> bool {
    c == '\t' || (c.is_whitespace() && !c.is_control())
}

/// Cleans raw text line by line.
///
/// Output lines are each terminated by `\n`; dropped lines vanish. The
/// function is idempotent.
pub fn normalize(text: &str, policy: &CleaningPolicy) -> (String, CleaningReport) {
    let mut report = CleaningReport::default();
    let mut out = String::with_capacity(text.len());

    let mut lines: Vec<&str> = text.split('\n').collect();
    if text.ends_with('\n') || text.is_empty() {
        lines.pop();
    }
    report.lines_in = lines.len();

    for raw in lines {
        let mut control = 0usize;
        let stripped: String = raw
            .chars()
            .filter(|&c| {
                let strip = is_strippable_control(c);
                control += usize::from(strip);
                !strip
            })
            .collect();
        report.bump("control", control);
        report.chars_removed += control;

        let composed: String = if policy.nfc {
            stripped.nfc().collect()
        } else {
            stripped
        };

        let (line, ws_removed) = collapse_spaces(&composed);
        report.bump("whitespace", ws_removed);
        report.chars_removed += ws_removed;

        if line.is_empty() {
            report.bump("empty", 1);
            continue;
        }
        if policy.script_filter && devanagari_fraction(&line) < policy.min_devanagari_fraction {
            report.bump("script", 1);
            continue;
        }
        out.push_str(&line);
        out.push('\n');
        report.lines_out += 1;
    }
    (out, report)
}

/// Collapses runs of spaces and tabs to one space and trims both ends.
fn collapse_spaces(s: &str) -> (String, usize) {
    let mut out = String::with_capacity(s.len());
    let mut removed = 0usize;
    let mut pending = 0usize;
    for c in s.chars() {
        if is_collapsible_space(c) {
            pending += 1;
            continue;
        }
        if pending > 0 {
            if out.is_empty() {
                removed += pending;
            } else {
                out.push(' ');
                removed += pending - 1;
            }
            pending = 0;
        }
        out.push(c);
    }
    removed += pending;
    (out, removed)
}

fn devanagari_fraction(line: &str) -> f64 {
    let mut total = 0usize;
    let mut deva = 0usize;
    for c in line.chars() {
        if classify_char(c) == CharClass::Space {
            continue;
        }
        total += 1;
        deva += usize::from(is_devanagari(c));
    }
    if total == 0 {
        0.0
    } else {
        deva as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_filter() -> CleaningPolicy {
        CleaningPolicy {
            script_filter: false,
            ..CleaningPolicy::default()
        }
    }

    #[test]
    fn decomposed_input_comes_out_composed() {
        // ऩ written as न + nukta composes under NFC.
        let (out, report) = normalize("\u{0928}\u{093C}\u{0941}", &CleaningPolicy::default());
        assert_eq!(out, "\u{0929}\u{0941}\n");
        assert_eq!(report.chars_removed, 0);
        let (out, report) = normalize("\u{0915}\u{0941}", &CleaningPolicy::default());
        assert_eq!(out, "\u{0915}\u{0941}\n");
        assert_eq!(report.chars_removed, 0);
    }

    #[test]
    fn latin_line_is_dropped_by_script_filter() {
        let policy = CleaningPolicy {
            min_devanagari_fraction: 0.5,
            ..CleaningPolicy::default()
        };
        let (out, report) = normalize("abc xyz 123", &policy);
        assert_eq!(out, "");
        assert_eq!(report.reasons.get("script"), Some(&1));
        assert_eq!(report.reasons.len(), 1);
        assert_eq!((report.lines_in, report.lines_out), (1, 0));
    }

    #[test]
    fn control_and_double_spaces() {
        let (out, report) = normalize("क\u{0000}ख  ग", &no_filter());
        assert_eq!(out, "कख ग\n");
        assert_eq!(report.reasons.get("control"), Some(&1));
        assert_eq!(report.reasons.get("whitespace"), Some(&1));
        assert_eq!(report.chars_removed, 2);
    }

    #[test]
    fn trims_and_drops_blank_lines() {
        let (out, report) = normalize("  क\t\tख \r\n\n   \nग", &no_filter());
        assert_eq!(out, "क ख\nग\n");
        assert_eq!(report.lines_in, 4);
        assert_eq!(report.lines_out, 2);
        assert_eq!(report.reasons.get("empty"), Some(&2));
        assert!(report.lines_out <= report.lines_in);
    }

    #[test]
    fn idempotent_on_mixed_input() {
        let policy = CleaningPolicy::default();
        let input = "मोहन  किताब पढ़लस।\n\u{0007}abc\n  राम\u{093C}  \n";
        let (once, _) = normalize(input, &policy);
        let (twice, report) = normalize(&once, &policy);
        assert_eq!(once, twice);
        assert_eq!(report.chars_removed, 0);
        assert!(report.reasons.is_empty());
    }
}
