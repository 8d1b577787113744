//! Corpus analytics and baseline sequence models for closely related
//! Devanagari-script languages.
//!
//! Everything in this crate is a pure function of its inputs and runs
//! without `std`; file handling, model persistence and the command line
//! live in the `corpuslab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod akshara;
pub mod annotio;
pub mod error;
pub mod langid;
pub mod lexres;
pub mod metrics;
pub mod morphseg;
pub mod ngramlm;
pub mod sampling;
pub mod similarity;
pub mod stats;
pub mod tagger;
pub mod textcore;

mod collections;
mod math;

pub use error::{Error, Result};
pub use textcore::{Corpus, Sentence};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
