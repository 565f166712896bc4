//! Loading and normalization of raw text files.
//!
//! Everything downstream works on a [`Document`]: BOM-free, NFC-normalized,
//! with `\n` line separators only. Script detection decides whether the
//! dictionary segmenter or the whitespace tokenizer runs on it.

use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Default CJK fraction above which a document is classified as [`ScriptClass::Cjk`].
pub const DEFAULT_CJK_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ScriptClass {
    Cjk,
    Latin,
}

impl fmt::Display for ScriptClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptClass::Cjk => write!(f, "cjk"),
            ScriptClass::Latin => write!(f, "latin"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8")]
    Encoding { path: String },
    #[error("{path} contains no non-whitespace text")]
    EmptyDocument { path: String },
}

/// A normalized input text, immutable after construction.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub script: ScriptClass,
    pub source_path: String,
    pub char_count: usize,
}

/// True for scalars in the CJK Unified Ideographs blocks (base, extension A,
/// and the compatibility block).
pub fn is_cjk_scalar(c: char) -> bool {
    matches!(c,
        '\u{4E00}'..='\u{9FFF}'
        | '\u{3400}'..='\u{4DBF}'
        | '\u{F900}'..='\u{FAFF}'
        | '\u{20000}'..='\u{2A6DF}')
}

fn is_punct_like(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c,
            '\u{3000}'..='\u{303F}'   // CJK symbols and punctuation
            | '\u{FF00}'..='\u{FF0F}' // fullwidth forms (punctuation part)
            | '\u{FF1A}'..='\u{FF20}'
            | '\u{FF3B}'..='\u{FF40}'
            | '\u{FF5B}'..='\u{FF65}'
            | '\u{2000}'..='\u{206F}' // general punctuation incl. ellipsis, dashes, quotes
        )
}

/// Normalize raw text: strip BOM, canonicalize newlines, apply NFC.
pub fn normalize_text(raw: &str) -> String {
    let stripped = raw.strip_prefix('\u{FEFF}').unwrap_or(raw);
    let unified = stripped.replace("\r\n", "\n").replace('\r', "\n");
    unified.nfc().collect()
}

/// Fraction of CJK scalars among non-whitespace, non-punctuation scalars.
/// Returns 0.0 when there are no such scalars.
pub fn cjk_fraction(text: &str) -> f64 {
    let mut total = 0usize;
    let mut cjk = 0usize;
    for c in text.chars() {
        if c.is_whitespace() || is_punct_like(c) {
            continue;
        }
        total += 1;
        if is_cjk_scalar(c) {
            cjk += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        cjk as f64 / total as f64
    }
}

pub fn detect_script(text: &str, threshold: f64) -> ScriptClass {
    if cjk_fraction(text) > threshold {
        ScriptClass::Cjk
    } else {
        ScriptClass::Latin
    }
}

/// Build a [`Document`] from an in-memory string. The `id` is typically the
/// file stem of the source.
pub fn document_from_text(
    id: &str,
    raw: &str,
    source_path: &str,
    forced_script: Option<ScriptClass>,
    cjk_threshold: f64,
) -> Result<Document, CorpusError> {
    let text = normalize_text(raw);
    if text.chars().all(char::is_whitespace) {
        return Err(CorpusError::EmptyDocument {
            path: source_path.to_string(),
        });
    }
    let script = forced_script.unwrap_or_else(|| detect_script(&text, cjk_threshold));
    let char_count = text.chars().count();
    Ok(Document {
        id: id.to_string(),
        text,
        script,
        source_path: source_path.to_string(),
        char_count,
    })
}

/// Load a UTF-8 text file and normalize it.
pub fn load_document(
    path: &Path,
    forced_script: Option<ScriptClass>,
) -> Result<Document, CorpusError> {
    load_document_with_threshold(path, forced_script, DEFAULT_CJK_THRESHOLD)
}

pub fn load_document_with_threshold(
    path: &Path,
    forced_script: Option<ScriptClass>,
    cjk_threshold: f64,
) -> Result<Document, CorpusError> {
    let display = path.display().to_string();
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: display.clone(),
        source,
    })?;
    let raw = String::from_utf8(bytes).map_err(|_| CorpusError::Encoding {
        path: display.clone(),
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| display.clone());
    document_from_text(&id, &raw, &display, forced_script, cjk_threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_newlines_and_bom() {
        let doc =
            document_from_text("t", "\u{FEFF}你好。\r\n再见。", "t.txt", None, 0.5).unwrap();
        assert_eq!(doc.text, "你好。\n再见。");
        assert_eq!(doc.script, ScriptClass::Cjk);
        // 3 + newline + 3 scalars after normalization.
        assert_eq!(doc.char_count, 7);
    }

    #[test]
    fn latin_document() {
        let doc = document_from_text("t", "Hello, world.", "t.txt", None, 0.5).unwrap();
        assert_eq!(doc.script, ScriptClass::Latin);
        assert_eq!(doc.char_count, 13);
    }

    #[test]
    fn mixed_below_threshold_is_latin() {
        // 2 CJK out of 5 letters: fraction 0.4, not above 0.5.
        let doc = document_from_text("t", "abc你好", "t.txt", None, 0.5).unwrap();
        assert!((cjk_fraction(&doc.text) - 0.4).abs() < 1e-12);
        assert_eq!(doc.script, ScriptClass::Latin);
    }

    #[test]
    fn forced_script_wins() {
        let doc =
            document_from_text("t", "abc", "t.txt", Some(ScriptClass::Cjk), 0.5).unwrap();
        assert_eq!(doc.script, ScriptClass::Cjk);
    }

    #[test]
    fn empty_document_rejected() {
        let err = document_from_text("t", "  \n\t ", "t.txt", None, 0.5).unwrap_err();
        assert!(matches!(err, CorpusError::EmptyDocument { .. }));
    }

    #[test]
    fn normalization_is_idempotent() {
        let once = normalize_text("Café\r\nnaïve…");
        assert_eq!(once, normalize_text(&once));
    }

    #[test]
    fn punctuation_does_not_count_toward_script() {
        // Only CJK letters remain after ignoring punctuation.
        let doc = document_from_text("t", "你好。，！？", "t.txt", None, 0.5).unwrap();
        assert_eq!(doc.script, ScriptClass::Cjk);
    }
}
