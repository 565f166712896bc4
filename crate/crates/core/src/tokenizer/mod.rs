//! Tokenization: dictionary-driven word segmentation for Chinese text,
//! whitespace tokenization for alphabetic text, and punctuation
//! classification shared by both.

mod latin;
mod lexicon;
mod policy;
mod segment;

pub use latin::tokenize_latin;
pub use lexicon::{lexicon_from_reader, load_lexicon, Lexicon, LexiconError};
pub use policy::{classify_scalar, PunctClass, PunctPolicy};
pub use segment::segment_cjk;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::ScriptClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Word,
    Punct,
    TerminalPunct,
    Newline,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub char_len: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, kind: TokenKind) -> Self {
        let surface = surface.into();
        let char_len = surface.chars().count();
        Token {
            surface,
            kind,
            char_len,
        }
    }

    pub fn word(surface: impl Into<String>) -> Self {
        Token::new(surface, TokenKind::Word)
    }
}

/// Ordered token stream for one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    pub source_id: String,
    pub script: ScriptClass,
    pub tokens: Vec<Token>,
}

impl TokenSequence {
    pub fn word_count(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| t.kind == TokenKind::Word)
            .count()
    }

    /// Serialize as JSON Lines, one token per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            out.push_str(&serde_json::to_string(t).expect("token serializes"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum TokenizeError {
    #[error("document {id} has script {actual}, expected {expected}")]
    ScriptMismatch {
        id: String,
        expected: ScriptClass,
        actual: ScriptClass,
    },
}
