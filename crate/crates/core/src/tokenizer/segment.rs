//! Dictionary-driven segmentation of Chinese text.
//!
//! Each maximal punctuation-free run is split by dynamic programming that
//! maximizes the sum of log unigram probabilities over a path of lexicon
//! words; scalars outside the lexicon are admitted as single-character
//! words at the floor log-probability.

use crate::corpus::{Document, ScriptClass};
use crate::tokenizer::{
    Lexicon, PunctClass, PunctPolicy, Token, TokenKind, TokenSequence, TokenizeError,
};

const SCORE_EPS: f64 = 1e-12;

/// True when `cand` beats `best`: higher score, then fewer tokens.
fn better(cand: (f64, usize), best: (f64, usize)) -> bool {
    if cand.0 > best.0 + SCORE_EPS {
        return true;
    }
    if (cand.0 - best.0).abs() <= SCORE_EPS && cand.1 < best.1 {
        return true;
    }
    false
}

/// Segment one punctuation-free run into word tokens.
fn segment_run(run: &[char], lexicon: &Lexicon, out: &mut Vec<Token>) {
    let n = run.len();
    if n == 0 {
        return;
    }
    let max_len = lexicon.max_word_len().max(1);
    let floor = lexicon.floor_log_prob();
    // best[i]: (score, token count) of the best split of run[..i]; parent[i]
    // is the start of the last word on that path. Iterating word length
    // ascending makes ties deterministic.
    let mut best = vec![(f64::NEG_INFINITY, 0usize); n + 1];
    let mut parent = vec![0usize; n + 1];
    best[0] = (0.0, 0);
    let mut word = String::new();
    for i in 1..=n {
        for len in 1..=max_len.min(i) {
            let start = i - len;
            word.clear();
            word.extend(&run[start..i]);
            let lp = match lexicon.log_prob(&word) {
                Some(lp) => lp,
                None if len == 1 => floor,
                None => continue,
            };
            let cand = (best[start].0 + lp, best[start].1 + 1);
            if better(cand, best[i]) {
                best[i] = cand;
                parent[i] = start;
            }
        }
    }
    let mut cuts = Vec::new();
    let mut i = n;
    while i > 0 {
        cuts.push(i);
        i = parent[i];
    }
    cuts.push(0);
    cuts.reverse();
    for w in cuts.windows(2) {
        let surface: String = run[w[0]..w[1]].iter().collect();
        out.push(Token::word(surface));
    }
}

/// Tokenize a Chinese document. Consecutive horizontal-ellipsis scalars
/// merge into a single terminal token; excluded marks are dropped.
pub fn segment_cjk(
    doc: &Document,
    lexicon: &Lexicon,
    policy: &PunctPolicy,
) -> Result<TokenSequence, TokenizeError> {
    if doc.script != ScriptClass::Cjk {
        return Err(TokenizeError::ScriptMismatch {
            id: doc.id.clone(),
            expected: ScriptClass::Cjk,
            actual: doc.script,
        });
    }
    let mut tokens = Vec::new();
    let mut run: Vec<char> = Vec::new();
    let mut chars = doc.text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\n' {
            segment_run(&run, lexicon, &mut tokens);
            run.clear();
            tokens.push(Token::new("\n", TokenKind::Newline));
            continue;
        }
        if c.is_whitespace() {
            segment_run(&run, lexicon, &mut tokens);
            run.clear();
            continue;
        }
        match policy.classify_char(c) {
            PunctClass::Terminal => {
                segment_run(&run, lexicon, &mut tokens);
                run.clear();
                if c == '…' {
                    let mut surface = String::from(c);
                    while chars.peek() == Some(&'…') {
                        surface.push(chars.next().unwrap());
                    }
                    tokens.push(Token::new(surface, TokenKind::TerminalPunct));
                } else {
                    tokens.push(Token::new(c.to_string(), TokenKind::TerminalPunct));
                }
            }
            PunctClass::NonTerminal => {
                segment_run(&run, lexicon, &mut tokens);
                run.clear();
                tokens.push(Token::new(c.to_string(), TokenKind::Punct));
            }
            PunctClass::Dropped => {
                segment_run(&run, lexicon, &mut tokens);
                run.clear();
            }
            PunctClass::Word => run.push(c),
        }
    }
    segment_run(&run, lexicon, &mut tokens);
    Ok(TokenSequence {
        source_id: doc.id.clone(),
        script: ScriptClass::Cjk,
        tokens,
    })
}
