//! Distance series extraction: gaps between consecutive punctuation marks
//! and sentence lengths, measured in words or characters.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tokenizer::{TokenKind, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Words,
    Characters,
}

impl std::fmt::Display for Unit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Unit::Words => write!(f, "words"),
            Unit::Characters => write!(f, "characters"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every punctuation mark is a boundary: gaps are inter-punctuation distances.
    AllPunct,
    /// Only sentence-terminal marks (and unterminated newlines) are boundaries:
    /// gaps are sentence lengths.
    TerminalOnly,
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scope::AllPunct => write!(f, "all_punct"),
            Scope::TerminalOnly => write!(f, "terminal_only"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "m")]
pub enum OutlierPolicy {
    None,
    DropLargest(usize),
}

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("no boundary marker in scope for {id}")]
    NoBoundaries { id: String },
    #[error("series {id} is empty")]
    EmptySeries { id: String },
    #[error("cannot drop {m} outliers from a series of length {len}")]
    PolicyError { m: usize, len: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceSeries {
    pub values: Vec<u64>,
    pub unit: Unit,
    pub scope: Scope,
    pub source_id: String,
    /// Original (index, value) pairs removed by the outlier policy.
    pub outliers_removed: Vec<(usize, u64)>,
}

impl DistanceSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| v as f64).collect()
    }

    /// CSV body with header `index,value`; metadata travels in the JSON sidecar.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }
}

/// Empirical PMF/CMF over the observed support.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionTable {
    pub support: Vec<u64>,
    pub pmf: Vec<f64>,
    pub cmf: Vec<f64>,
    pub n: usize,
}

/// Extract the gap series between consecutive boundary markers.
///
/// A nonzero prefix before the first boundary counts as a gap; text after
/// the last boundary is dropped; zero-length gaps are skipped. With
/// `Scope::TerminalOnly`, a newline acts as a boundary only when the symbol
/// run before it was not already terminated.
pub fn extract_distances(
    tokens: &TokenSequence,
    unit: Unit,
    scope: Scope,
) -> Result<DistanceSeries, SeriesError> {
    let mut values = Vec::new();
    let mut gap: u64 = 0;
    let mut saw_boundary = false;
    let mut last_non_newline: Option<TokenKind> = None;
    for tok in &tokens.tokens {
        let is_boundary = match (scope, tok.kind) {
            (Scope::AllPunct, TokenKind::Punct | TokenKind::TerminalPunct) => true,
            (Scope::TerminalOnly, TokenKind::TerminalPunct) => true,
            (Scope::TerminalOnly, TokenKind::Newline) => {
                last_non_newline != Some(TokenKind::TerminalPunct)
            }
            _ => false,
        };
        if is_boundary {
            saw_boundary = true;
            if gap > 0 {
                values.push(gap);
            }
            gap = 0;
        } else if tok.kind == TokenKind::Word {
            gap += match unit {
                Unit::Words => 1,
                Unit::Characters => tok.char_len as u64,
            };
        }
        if tok.kind != TokenKind::Newline {
            last_non_newline = Some(tok.kind);
        }
    }
    if !saw_boundary {
        return Err(SeriesError::NoBoundaries {
            id: tokens.source_id.clone(),
        });
    }
    Ok(DistanceSeries {
        values,
        unit,
        scope,
        source_id: tokens.source_id.clone(),
        outliers_removed: Vec::new(),
    })
}

/// Remove the `m` largest values (first-encountered maximum on ties),
/// preserving the order of the remainder.
pub fn trim_outliers(
    series: &DistanceSeries,
    policy: OutlierPolicy,
) -> Result<DistanceSeries, SeriesError> {
    let m = match policy {
        OutlierPolicy::None => return Ok(series.clone()),
        OutlierPolicy::DropLargest(m) => m,
    };
    if m >= series.values.len() {
        return Err(SeriesError::PolicyError {
            m,
            len: series.values.len(),
        });
    }
    let mut keep: Vec<Option<u64>> = series.values.iter().copied().map(Some).collect();
    let mut removed = Vec::new();
    for _ in 0..m {
        let (idx, _) = keep
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty by precondition");
        removed.push((idx, keep[idx].take().unwrap()));
    }
    removed.sort_unstable();
    let mut out = series.clone();
    out.values = keep.into_iter().flatten().collect();
    out.outliers_removed.extend(removed);
    Ok(out)
}

/// Empirical distribution of a distance series.
pub fn empirical_distribution(series: &DistanceSeries) -> Result<DistributionTable, SeriesError> {
    if series.values.is_empty() {
        return Err(SeriesError::EmptySeries {
            id: series.source_id.clone(),
        });
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in &series.values {
        *counts.entry(v).or_insert(0) += 1;
    }
    let n = series.values.len();
    let mut support = Vec::with_capacity(counts.len());
    let mut pmf = Vec::with_capacity(counts.len());
    let mut cmf = Vec::with_capacity(counts.len());
    let mut acc = 0.0;
    for (k, c) in counts {
        let p = c as f64 / n as f64;
        acc += p;
        support.push(k);
        pmf.push(p);
        cmf.push(acc);
    }
    Ok(DistributionTable {
        support,
        pmf,
        cmf,
        n,
    })
}
