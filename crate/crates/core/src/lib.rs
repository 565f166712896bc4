//! Quantitative analysis of punctuation patterns in literary texts.
//!
//! The crate turns a plain-text document into token streams, punctuation
//! distance and sentence-length series, and three families of statistics:
//! Zipf rank-frequency fits, discrete Weibull fits with hazard functions,
//! and multifractal detrended fluctuation analysis.

pub mod corpus;
pub mod mfdfa;
pub mod pipeline;
pub mod plot;
pub mod series;
pub mod stats;
pub mod tokenizer;
pub mod weibull;
pub mod zipf;
