//! Word-frequency dictionary driving the Chinese segmenter.
//!
//! The file format is one entry per line, `word<TAB or space>frequency`,
//! compatible with the published dictionaries of common segmentation tools
//! (extra trailing columns such as part-of-speech tags are ignored).

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed lexicon line {content:?}")]
    Parse {
        path: String,
        line: usize,
        content: String,
    },
    #[error("{path}: lexicon has no entries")]
    Empty { path: String },
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, u64>,
    max_word_len: usize,
    total_mass: u64,
}

impl Lexicon {
    pub fn from_entries(pairs: impl IntoIterator<Item = (String, u64)>) -> Option<Self> {
        let mut entries: HashMap<String, u64> = HashMap::new();
        for (word, freq) in pairs {
            let slot = entries.entry(word).or_insert(0);
            *slot = (*slot).max(freq);
        }
        if entries.is_empty() {
            return None;
        }
        let max_word_len = entries.keys().map(|w| w.chars().count()).max().unwrap();
        let total_mass = entries.values().sum();
        Some(Lexicon {
            entries,
            max_word_len,
            total_mass,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    /// Log-probability of a lexicon word under the unigram model.
    pub fn log_prob(&self, word: &str) -> Option<f64> {
        self.frequency(word)
            .map(|f| (f as f64).ln() - (self.total_mass as f64).ln())
    }

    /// Floor log-probability assigned to out-of-lexicon single scalars:
    /// strictly below every real entry.
    pub fn floor_log_prob(&self) -> f64 {
        (0.5f64).ln() - (self.total_mass as f64).ln()
    }
}

pub fn lexicon_from_reader(content: &str, path: &str) -> Result<Lexicon, LexiconError> {
    let mut pairs = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next();
        let freq = parts.next().and_then(|f| f.parse::<u64>().ok());
        match (word, freq) {
            (Some(w), Some(f)) => pairs.push((w.to_string(), f)),
            _ => {
                return Err(LexiconError::Parse {
                    path: path.to_string(),
                    line: idx + 1,
                    content: line.to_string(),
                })
            }
        }
    }
    Lexicon::from_entries(pairs).ok_or_else(|| LexiconError::Empty {
        path: path.to_string(),
    })
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexiconError> {
    let display = path.display().to_string();
    let content = fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: display.clone(),
        source,
    })?;
    lexicon_from_reader(&content, &display)
}
