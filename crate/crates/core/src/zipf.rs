//! Rank-frequency tables and power-law fits, including two-regime fits
//! with a crossover rank.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::linear_fit;
use crate::tokenizer::{TokenKind, TokenSequence};

#[derive(Debug, Error)]
pub enum ZipfError {
    #[error("no countable tokens in {id}")]
    EmptyInput { id: String },
    #[error("fit range holds {got} ranks, need at least {need}")]
    RangeTooSmall { got: usize, need: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankEntry {
    pub rank: usize,
    pub token: String,
    pub count: u64,
    pub prob: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankTable {
    pub entries: Vec<RankEntry>,
    pub include_punct: bool,
    pub total_tokens: u64,
}

impl RankTable {
    /// Build a table directly from exact probabilities (rank order given),
    /// scaling counts so the nonincreasing-count invariant holds.
    pub fn from_probabilities(probs: &[f64]) -> RankTable {
        let total: f64 = probs.iter().sum();
        let entries = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| RankEntry {
                rank: i + 1,
                token: format!("t{}", i + 1),
                count: (p / total * 1e12).round() as u64,
                prob: p / total,
            })
            .collect();
        RankTable {
            entries,
            include_punct: false,
            total_tokens: 1_000_000_000_000,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,token,count,prob\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{},{}\n", e.rank, e.token, e.count, e.prob));
        }
        out
    }

    /// Largest rank with count >= 2, i.e. the end of the pre-hapax region.
    fn hapax_cutoff(&self) -> usize {
        self.entries
            .iter()
            .rev()
            .find(|e| e.count >= 2)
            .map(|e| e.rank)
            .unwrap_or(self.entries.len())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub fit_range: (usize, usize),
    pub ssr: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossoverFit {
    pub breakpoint: usize,
    pub fit_low: PowerLawFit,
    pub fit_high: PowerLawFit,
    pub single_fit: PowerLawFit,
    /// 1 - (two-segment SSR / single-fit SSR); near zero means no crossover.
    pub residual_improvement: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitRange {
    Auto,
    Manual(usize, usize),
}

/// Count token types and order them by descending count, ties broken by
/// first occurrence.
pub fn rank_frequency(
    tokens: &TokenSequence,
    include_punct: bool,
    case_fold: bool,
) -> Result<RankTable, ZipfError> {
    let mut counts: HashMap<String, (u64, usize)> = HashMap::new();
    let mut order = 0usize;
    for tok in &tokens.tokens {
        let countable = match tok.kind {
            TokenKind::Word => true,
            TokenKind::Punct | TokenKind::TerminalPunct => include_punct,
            TokenKind::Newline => false,
        };
        if !countable {
            continue;
        }
        let key = if case_fold && tok.kind == TokenKind::Word {
            tok.surface.to_lowercase()
        } else {
            tok.surface.clone()
        };
        let entry = counts.entry(key).or_insert_with(|| {
            order += 1;
            (0, order)
        });
        entry.0 += 1;
    }
    if counts.is_empty() {
        return Err(ZipfError::EmptyInput {
            id: tokens.source_id.clone(),
        });
    }
    let total: u64 = counts.values().map(|(c, _)| c).sum();
    let mut items: Vec<(String, u64, usize)> =
        counts.into_iter().map(|(t, (c, o))| (t, c, o)).collect();
    items.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let entries = items
        .into_iter()
        .enumerate()
        .map(|(i, (token, count, _))| RankEntry {
            rank: i + 1,
            token,
            count,
            prob: count as f64 / total as f64,
        })
        .collect();
    Ok(RankTable {
        entries,
        include_punct,
        total_tokens: total,
    })
}

fn fit_on_ranks(table: &RankTable, lo: usize, hi: usize) -> PowerLawFit {
    let pts: Vec<(f64, f64)> = table.entries[lo - 1..hi]
        .iter()
        .map(|e| ((e.rank as f64).ln(), e.prob.ln()))
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let fit = linear_fit(&xs, &ys);
    PowerLawFit {
        gamma: -fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        fit_range: (lo, hi),
        ssr: fit.ssr,
    }
}

/// Least squares on (log rank, log prob). `Auto` fits from rank 1 up to the
/// hapax plateau.
pub fn fit_power_law(table: &RankTable, range: FitRange) -> Result<PowerLawFit, ZipfError> {
    let (lo, hi) = match range {
        FitRange::Auto => (1, table.hapax_cutoff()),
        FitRange::Manual(lo, hi) => (lo, hi.min(table.entries.len())),
    };
    if lo >= hi || hi - lo + 1 < 10 {
        return Err(ZipfError::RangeTooSmall {
            got: hi.saturating_sub(lo) + 1,
            need: 10,
        });
    }
    Ok(fit_on_ranks(table, lo, hi))
}

/// Exhaustive breakpoint scan: fit two power laws on ranks `[1, b]` and
/// `(b, hi]` and keep the split with the smallest total squared residual.
pub fn detect_crossover(
    table: &RankTable,
    min_segment: usize,
) -> Result<CrossoverFit, ZipfError> {
    let hi = table.hapax_cutoff();
    if hi < 2 * min_segment {
        return Err(ZipfError::RangeTooSmall {
            got: hi,
            need: 2 * min_segment,
        });
    }
    let single_fit = fit_on_ranks(table, 1, hi);
    let mut best: Option<(usize, PowerLawFit, PowerLawFit, f64)> = None;
    for b in min_segment..=hi - min_segment {
        let low = fit_on_ranks(table, 1, b);
        let high = fit_on_ranks(table, b + 1, hi);
        let total = low.ssr + high.ssr;
        if best.as_ref().map_or(true, |(_, _, _, t)| total < *t) {
            best = Some((b, low, high, total));
        }
    }
    let (breakpoint, fit_low, fit_high, total) = best.expect("range checked above");
    let residual_improvement = if single_fit.ssr > 0.0 {
        1.0 - total / single_fit.ssr
    } else {
        0.0
    };
    Ok(CrossoverFit {
        breakpoint,
        fit_low,
        fit_high,
        single_fit,
        residual_improvement,
    })
}
