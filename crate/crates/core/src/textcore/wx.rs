//! WX romanization of Devanagari.
//!
//! A consonant without a following vowel sign carries the inherent vowel
//! `a`; a consonant followed directly by another consonant, a non-letter
//! or the end of input implies a halant. Nukta is written `Z`.

use alloc::string::String;
use alloc::vec::Vec;
use unicode_normalization::UnicodeNormalization;

const HALANT: char = '\u{094D}';
const NUKTA: char = '\u{093C}';

const CONSONANTS: &[(char, &str)] = &[
    ('क', "k"), ('ख', "K"), ('ग', "g"), ('घ', "G"), ('ङ', "f"),
    ('च', "c"), ('छ', "C"), ('ज', "j"), ('झ', "J"), ('ञ', "F"),
    ('ट', "t"), ('ठ', "T"), ('ड', "d"), ('ढ', "D"), ('ण', "N"),
    ('त', "w"), ('थ', "W"), ('द', "x"), ('ध', "X"), ('न', "n"),
    ('प', "p"), ('फ', "P"), ('ब', "b"), ('भ', "B"), ('म', "m"),
    ('य', "y"), ('र', "r"), ('ल', "l"), ('व', "v"),
    ('श', "S"), ('ष', "R"), ('स', "s"), ('ह', "h"), ('ळ', "lY"),
];

/// (independent vowel, dependent sign, code). `अ` has no sign.
const VOWELS: &[(char, Option<char>, &str)] = &[
    ('अ', None, "a"),
    ('आ', Some('\u{093E}'), "A"),
    ('इ', Some('\u{093F}'), "i"),
    ('ई', Some('\u{0940}'), "I"),
    ('उ', Some('\u{0941}'), "u"),
    ('ऊ', Some('\u{0942}'), "U"),
    ('ऋ', Some('\u{0943}'), "q"),
    ('ॠ', Some('\u{0944}'), "Q"),
    ('ऌ', Some('\u{0962}'), "L"),
    ('ए', Some('\u{0947}'), "e"),
    ('ऐ', Some('\u{0948}'), "E"),
    ('ओ', Some('\u{094B}'), "o"),
    ('औ', Some('\u{094C}'), "O"),
    ('ऍ', Some('\u{0945}'), "eV"),
    ('ऑ', Some('\u{0949}'), "oV"),
];

const MARKS: &[(char, &str)] = &[
    ('\u{0902}', "M"),
    ('\u{0901}', "z"),
    ('\u{0903}', "H"),
    ('\u{093D}', "'"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToWx,
    FromWx,
}

/// Transliterated text plus the number of characters that had no mapping
/// and were passed through unchanged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transliteration {
    pub text: String,
    pub warnings: usize,
}

pub fn transliterate(text: &str, direction: Direction) -> Transliteration {
    match direction {
        Direction::ToWx => encode(text),
        Direction::FromWx => decode(text),
    }
}

/// Devanagari to WX, dropping the warning tally.
pub fn to_wx(text: &str) -> String {
    encode(text).text
}

/// WX to Devanagari (NFC), dropping the warning tally.
pub fn from_wx(text: &str) -> String {
    decode(text).text
}

fn consonant_code(c: char) -> Option<&'static str> {
    CONSONANTS.iter().find(|(d, _)| *d == c).map(|(_, w)| *w)
}

fn independent_code(c: char) -> Option<&'static str> {
    VOWELS.iter().find(|(d, _, _)| *d == c).map(|(_, _, w)| *w)
}

fn sign_code(c: char) -> Option<&'static str> {
    VOWELS
        .iter()
        .find(|(_, s, _)| *s == Some(c))
        .map(|(_, _, w)| *w)
}

fn mark_code(c: char) -> Option<&'static str> {
    MARKS.iter().find(|(d, _)| *d == c).map(|(_, w)| *w)
}

fn encode(text: &str) -> Transliteration {
    let chars: Vec<char> = text.nfd().collect();
    let mut out = String::with_capacity(text.len());
    let mut warnings = 0;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        if let Some(code) = consonant_code(c) {
            out.push_str(code);
            if chars.get(i) == Some(&NUKTA) {
                out.push('Z');
                i += 1;
            }
            match chars.get(i).copied() {
                Some(HALANT) => i += 1,
                Some(next) => match sign_code(next) {
                    Some(v) => {
                        out.push_str(v);
                        i += 1;
                    }
                    None => out.push('a'),
                },
                None => out.push('a'),
            }
        } else if let Some(code) = independent_code(c).or_else(|| mark_code(c)) {
            out.push_str(code);
        } else {
            if crate::textcore::is_devanagari(c) && !matches!(c, '\u{0964}' | '\u{0965}') {
                warnings += 1;
            }
            out.push(c);
        }
    }
    Transliteration {
        text: out,
        warnings,
    }
}

/// Longest code from `table` that matches at `pos`.
fn match_code<'a, T: Copy>(
    chars: &[char],
    pos: usize,
    table: impl Iterator<Item = (T, &'a str)>,
) -> Option<(T, usize)> {
    let mut best: Option<(T, usize)> = None;
    for (item, code) in table {
        let len = code.chars().count();
        if pos + len <= chars.len()
            && code.chars().zip(&chars[pos..]).all(|(a, &b)| a == b)
            && best.is_none_or(|(_, l)| len > l)
        {
            best = Some((item, len));
        }
    }
    best
}

fn decode(text: &str) -> Transliteration {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() * 3);
    let mut warnings = 0;
    let mut pending = false;
    let mut i = 0;
    while i < chars.len() {
        if let Some((c, len)) = match_code(&chars, i, CONSONANTS.iter().map(|&(d, w)| (d, w))) {
            if pending {
                out.push(HALANT);
            }
            out.push(c);
            i += len;
            if chars.get(i) == Some(&'Z') {
                out.push(NUKTA);
                i += 1;
            }
            pending = true;
        } else if let Some((idx, len)) =
            match_code(&chars, i, VOWELS.iter().enumerate().map(|(k, v)| (k, v.2)))
        {
            let (independent, sign, _) = VOWELS[idx];
            if pending {
                if let Some(s) = sign {
                    out.push(s);
                }
            } else {
                out.push(independent);
            }
            pending = false;
            i += len;
        } else if let Some((m, len)) = match_code(&chars, i, MARKS.iter().map(|&(d, w)| (d, w))) {
            if pending {
                out.push(HALANT);
                pending = false;
            }
            out.push(m);
            i += len;
        } else {
            if pending {
                out.push(HALANT);
                pending = false;
            }
            let c = chars[i];
            if c.is_ascii_alphabetic() {
                warnings += 1;
            }
            out.push(c);
            i += 1;
        }
    }
    if pending {
        out.push(HALANT);
    }
    Transliteration {
        text: out.nfc().collect(),
        warnings,
    }
}
