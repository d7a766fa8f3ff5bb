//! Code-mixed Hinglish generation and evaluation.
//!
//! The crate turns parallel English-Hindi sentence pairs into code-mixed
//! Hinglish via two rule-based generators (word-aligned and phrase-aligned
//! substitution with Hindi as the matrix language), and evaluates generated
//! text with token-level MT metrics plus human-rating correlation analytics.
//!
//! Pipeline order: build a seed English-Hindi dictionary, extend it with
//! embedding-induced and alignment-induced pairs, generate, score, evaluate.

pub mod align;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod eval;
pub mod generate;
pub mod keyphrase;
pub mod lexicon;
pub mod metrics;
pub mod translit;

pub use error::{Error, Result};
