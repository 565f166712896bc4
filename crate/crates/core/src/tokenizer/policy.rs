//! Punctuation classification policy.
//!
//! The terminal set decides where sentences end; the nonterminal set marks
//! intra-sentence pauses; the excluded set lists marks (brackets, quotes,
//! hyphens) that are dropped from the token stream entirely.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PunctClass {
    Terminal,
    NonTerminal,
    Dropped,
    Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunctPolicy {
    pub terminal_set: BTreeSet<String>,
    pub nonterminal_set: BTreeSet<String>,
    pub excluded_set: BTreeSet<String>,
    pub newline_is_terminal: bool,
}

fn set_of(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl PunctPolicy {
    /// Policy for Chinese text: terminals 。！？…； plus the conditional
    /// newline; nonterminals ，、： by default.
    pub fn cjk_default() -> Self {
        PunctPolicy {
            terminal_set: set_of(&["。", "！", "？", "…", "；"]),
            nonterminal_set: set_of(&["，", "、", "："]),
            excluded_set: set_of(&[
                "【", "】", "〈", "〉", "「", "」", "『", "』", "《", "》", "（", "）", "(",
                ")", "—", "―", "－", "–", "-", "“", "”", "‘", "’", "\"", "'", "·",
            ]),
            newline_is_terminal: true,
        }
    }

    /// Policy for alphabetic text: terminals . ! ? … and the three-dot
    /// ellipsis; nonterminals , ; : following the prior-work convention.
    pub fn latin_default() -> Self {
        PunctPolicy {
            terminal_set: set_of(&[".", "!", "?", "…", "..."]),
            nonterminal_set: set_of(&[",", ";", ":"]),
            excluded_set: set_of(&[
                "\"", "'", "(", ")", "[", "]", "{", "}", "“", "”", "‘", "’", "«", "»", "—",
                "–", "-", "_", "*",
            ]),
            newline_is_terminal: true,
        }
    }

    /// The three sets must be pairwise disjoint.
    pub fn validate(&self) -> Result<(), String> {
        for s in &self.terminal_set {
            if self.nonterminal_set.contains(s) || self.excluded_set.contains(s) {
                return Err(format!("mark {s:?} appears in more than one set"));
            }
        }
        for s in &self.nonterminal_set {
            if self.excluded_set.contains(s) {
                return Err(format!("mark {s:?} appears in more than one set"));
            }
        }
        Ok(())
    }

    /// Classify a single scalar (or recognized multi-scalar mark).
    /// Total: anything unclassified is a word scalar.
    pub fn classify(&self, s: &str) -> PunctClass {
        if self.terminal_set.contains(s) {
            PunctClass::Terminal
        } else if self.nonterminal_set.contains(s) {
            PunctClass::NonTerminal
        } else if self.excluded_set.contains(s) {
            PunctClass::Dropped
        } else {
            PunctClass::Word
        }
    }

    pub fn classify_char(&self, c: char) -> PunctClass {
        let mut buf = [0u8; 4];
        self.classify(c.encode_utf8(&mut buf))
    }
}

/// Free-function form of [`PunctPolicy::classify`].
pub fn classify_scalar(s: &str, policy: &PunctPolicy) -> PunctClass {
    policy.classify(s)
}
