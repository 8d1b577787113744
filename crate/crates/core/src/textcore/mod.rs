//! Text substrate: character classes, cleaning, tokenization and WX
//! transliteration.

mod chars;
mod clean;
mod corpus;
mod wx;

pub use chars::{classify_char, is_devanagari, is_devanagari_letter, CharClass};
pub use clean::{normalize, CleaningPolicy, CleaningReport, DEFAULT_PUNCT_DETACH};
pub use corpus::{tokenize, tokenize_with, Corpus, Sentence};
pub use wx::{from_wx, to_wx, transliterate, Direction, Transliteration};
