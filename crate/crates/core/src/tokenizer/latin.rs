//! Whitespace tokenization for alphabetic text.
//!
//! Words are maximal runs of non-whitespace scalars; classified punctuation
//! is split off only at word edges, so internal apostrophes and hyphens
//! survive. Runs of three or more periods and runs of the ellipsis scalar
//! are merged into single terminal tokens.

use crate::corpus::{Document, ScriptClass};
use crate::tokenizer::{PunctClass, PunctPolicy, Token, TokenKind, TokenizeError};
use crate::tokenizer::TokenSequence;

/// Emit the scalars of a pure-punctuation span as individual marks,
/// merging ellipsis runs.
fn emit_marks(span: &[char], policy: &PunctPolicy, out: &mut Vec<Token>) {
    let mut i = 0;
    while i < span.len() {
        let c = span[i];
        // "..." and "…" runs collapse into one terminal token.
        if c == '.' {
            let mut j = i;
            while j < span.len() && span[j] == '.' {
                j += 1;
            }
            if j - i >= 3 {
                let surface: String = span[i..j].iter().collect();
                out.push(Token::new(surface, TokenKind::TerminalPunct));
                i = j;
                continue;
            }
        }
        if c == '…' {
            let mut j = i;
            while j < span.len() && span[j] == '…' {
                j += 1;
            }
            let surface: String = span[i..j].iter().collect();
            out.push(Token::new(surface, TokenKind::TerminalPunct));
            i = j;
            continue;
        }
        match policy.classify_char(c) {
            PunctClass::Terminal => {
                out.push(Token::new(c.to_string(), TokenKind::TerminalPunct))
            }
            PunctClass::NonTerminal => out.push(Token::new(c.to_string(), TokenKind::Punct)),
            PunctClass::Dropped | PunctClass::Word => {}
        }
        i += 1;
    }
}

fn tokenize_chunk(chunk: &str, policy: &PunctPolicy, out: &mut Vec<Token>) {
    let chars: Vec<char> = chunk.chars().collect();
    let mut lo = 0;
    while lo < chars.len() && policy.classify_char(chars[lo]) != PunctClass::Word {
        lo += 1;
    }
    let mut hi = chars.len();
    while hi > lo && policy.classify_char(chars[hi - 1]) != PunctClass::Word {
        hi -= 1;
    }
    emit_marks(&chars[..lo], policy, out);
    if hi > lo {
        let surface: String = chars[lo..hi].iter().collect();
        out.push(Token::word(surface));
    }
    emit_marks(&chars[hi..], policy, out);
}

pub fn tokenize_latin(
    doc: &Document,
    policy: &PunctPolicy,
) -> Result<TokenSequence, TokenizeError> {
    if doc.script != ScriptClass::Latin {
        return Err(TokenizeError::ScriptMismatch {
            id: doc.id.clone(),
            expected: ScriptClass::Latin,
            actual: doc.script,
        });
    }
    let mut tokens = Vec::new();
    let mut first_line = true;
    for line in doc.text.split('\n') {
        if !first_line {
            tokens.push(Token::new("\n", TokenKind::Newline));
        }
        first_line = false;
        for chunk in line.split_whitespace() {
            tokenize_chunk(chunk, policy, &mut tokens);
        }
    }
    Ok(TokenSequence {
        source_id: doc.id.clone(),
        script: ScriptClass::Latin,
        tokens,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::document_from_text;

    fn seq(text: &str) -> Vec<(String, TokenKind)> {
        let doc = document_from_text("t", text, "t.txt", Some(ScriptClass::Latin), 0.5).unwrap();
        tokenize_latin(&doc, &PunctPolicy::latin_default())
            .unwrap()
            .tokens
            .into_iter()
            .map(|t| (t.surface, t.kind))
            .collect()
    }

    #[test]
    fn splits_edge_punctuation() {
        let got = seq("Hello, world.");
        assert_eq!(
            got,
            vec![
                ("Hello".into(), TokenKind::Word),
                (",".into(), TokenKind::Punct),
                ("world".into(), TokenKind::Word),
                (".".into(), TokenKind::TerminalPunct),
            ]
        );
    }

    #[test]
    fn three_dot_ellipsis_is_one_token() {
        let got = seq("Wait... done");
        assert_eq!(
            got,
            vec![
                ("Wait".into(), TokenKind::Word),
                ("...".into(), TokenKind::TerminalPunct),
                ("done".into(), TokenKind::Word),
            ]
        );
    }

    #[test]
    fn internal_apostrophe_kept() {
        let got = seq("don't stop");
        assert_eq!(got[0].0, "don't");
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn quotes_are_dropped() {
        let got = seq("\"Why?\" she asked.");
        let surfaces: Vec<&str> = got.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(surfaces, vec!["Why", "?", "she", "asked", "."]);
    }

    #[test]
    fn double_period_stays_separate_marks() {
        let got = seq("end..");
        assert_eq!(got.len(), 3);
        assert_eq!(got[1].0, ".");
        assert_eq!(got[2].0, ".");
    }

    #[test]
    fn newlines_are_tokens() {
        let got = seq("one\ntwo");
        assert_eq!(got[1], ("\n".into(), TokenKind::Newline));
    }

    #[test]
    fn bare_dash_chunk_emits_nothing() {
        let got = seq("a -- b");
        let surfaces: Vec<&str> = got.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(surfaces, vec!["a", "b"]);
    }
}
