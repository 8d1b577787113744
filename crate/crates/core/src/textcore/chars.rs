/// Coarse class of a code point, laid out after the Devanagari block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharClass {
    Consonant,
    IndependentVowel,
    DependentVowelSign,
    Halant,
    Anusvara,
    Candrabindu,
    Visarga,
    Avagraha,
    Nukta,
    Digit,
    Punctuation,
    Space,
    Other,
}

/// Classifies a single code point. Total and pure.
pub fn classify_char(c: char) -> CharClass {
    use CharClass::*;
    match c as u32 {
        0x0900 | 0x0901 => Candrabindu,
        0x0902 => Anusvara,
        0x0903 => Visarga,
        0x0904..=0x0914 => IndependentVowel,
        0x0915..=0x0939 => Consonant,
        0x093A | 0x093B => DependentVowelSign,
        0x093C => Nukta,
        0x093D => Avagraha,
        0x093E..=0x094C => DependentVowelSign,
        0x094D => Halant,
        0x094E | 0x094F => DependentVowelSign,
        0x0950..=0x0954 => Other,
        0x0955..=0x0957 => DependentVowelSign,
        0x0958..=0x095F => Consonant,
        0x0960 | 0x0961 => IndependentVowel,
        0x0962 | 0x0963 => DependentVowelSign,
        0x0964 | 0x0965 | 0x0970 => Punctuation,
        0x0966..=0x096F => Digit,
        0x0971 => Other,
        0x0972..=0x0977 => IndependentVowel,
        0x0978..=0x097F => Consonant,
        _ => classify_outside_block(c),
    }
}

fn classify_outside_block(c: char) -> CharClass {
    if c.is_whitespace() {
        CharClass::Space
    } else if c.is_ascii_digit() {
        CharClass::Digit
    } else if c.is_ascii_punctuation() || is_general_punctuation(c) {
        CharClass::Punctuation
    } else {
        CharClass::Other
    }
}

fn is_general_punctuation(c: char) -> bool {
    matches!(c as u32,
        0x00A1..=0x00BF if !matches!(c as u32, 0x00AA | 0x00AD | 0x00B2 | 0x00B3 | 0x00B5 | 0x00B9 | 0x00BA | 0x00BC..=0x00BE)
    ) || matches!(c as u32, 0x2010..=0x2027 | 0x2030..=0x205E | 0x3000..=0x3003 | 0xFF01..=0xFF0F)
}

/// True for any code point in the Devanagari block.
pub fn is_devanagari(c: char) -> bool {
    matches!(c as u32, 0x0900..=0x097F)
}

/// True for consonants and independent vowels.
pub fn is_devanagari_letter(c: char) -> bool {
    matches!(
        classify_char(c),
        CharClass::Consonant | CharClass::IndependentVowel
    ) && is_devanagari(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use CharClass::*;

    #[test]
    fn block_examples() {
        assert_eq!(classify_char('\u{0915}'), Consonant);
        assert_eq!(classify_char('\u{093E}'), DependentVowelSign);
        assert_eq!(classify_char('\u{093D}'), Avagraha);
        assert_eq!(classify_char('\u{0902}'), Anusvara);
        assert_eq!(classify_char('\u{094D}'), Halant);
        assert_eq!(classify_char('\u{0901}'), Candrabindu);
        assert_eq!(classify_char('\u{0903}'), Visarga);
        assert_eq!(classify_char('\u{093C}'), Nukta);
        assert_eq!(classify_char('\u{0905}'), IndependentVowel);
        assert_eq!(classify_char('\u{095C}'), Consonant);
        assert_eq!(classify_char('\u{0964}'), Punctuation);
        assert_eq!(classify_char('\u{0967}'), Digit);
    }

    #[test]
    fn outside_block() {
        assert_eq!(classify_char(' '), Space);
        assert_eq!(classify_char('\t'), Space);
        assert_eq!(classify_char('7'), Digit);
        assert_eq!(classify_char('?'), Punctuation);
        assert_eq!(classify_char('\u{2014}'), Punctuation);
        assert_eq!(classify_char('a'), Other);
        assert_eq!(classify_char('\u{200D}'), Other);
    }

    #[test]
    fn total_over_all_code_points() {
        for cp in 0..=0x10FFFFu32 {
            if let Some(c) = char::from_u32(cp) {
                let a = classify_char(c);
                assert_eq!(a, classify_char(c));
            }
        }
    }
}
