//! Synthetic data generators used as independent oracles by the
//! integration tests. Everything here is seeded and deterministic.

#![allow(dead_code)]

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use punctstats::series::{DistanceSeries, Scope, Unit};
use punctstats::tokenizer::{Token, TokenSequence};
use punctstats::corpus::ScriptClass;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Inverse-CMF sampler for the discrete Weibull distribution:
/// k = ceil((ln(1-u) / ln(1-p))^(1/beta)).
pub fn sample_discrete_weibull(rng: &mut impl Rng, p: f64, beta: f64, n: usize) -> Vec<u64> {
    let log_q = (1.0 - p).ln();
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen_range(0.0..1.0);
            let k = ((1.0 - u).ln() / log_q).powf(1.0 / beta).ceil();
            (k as u64).max(1)
        })
        .collect()
}

pub fn series_of(values: Vec<u64>) -> DistanceSeries {
    DistanceSeries {
        values,
        unit: Unit::Words,
        scope: Scope::AllPunct,
        source_id: "synthetic".into(),
        outliers_removed: vec![],
    }
}

/// Gaussian white noise, unit variance.
pub fn white_noise(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Fractional Gaussian noise of Hurst exponent `h` via Davies-Harte
/// circulant embedding. Exact covariance; O(n log n).
pub fn fgn(rng: &mut impl Rng, h: f64, n: usize) -> Vec<f64> {
    let m = 2 * n;
    let gamma = |k: f64| {
        0.5 * ((k + 1.0).powf(2.0 * h) - 2.0 * k.powf(2.0 * h)
            + (k - 1.0).abs().powf(2.0 * h))
    };
    let mut c: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
    for j in 0..=n {
        c[j].re = gamma(j as f64);
    }
    for j in n + 1..m {
        c[j].re = gamma((m - j) as f64);
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut c);
    // Circulant eigenvalues; tiny negatives are embedding round-off.
    let lambda: Vec<f64> = c.iter().map(|v| v.re.max(0.0)).collect();

    let mut w: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
    let mf = m as f64;
    w[0] = Complex::new((lambda[0] / mf).sqrt() * rng.sample::<f64, _>(StandardNormal), 0.0);
    w[n] = Complex::new((lambda[n] / mf).sqrt() * rng.sample::<f64, _>(StandardNormal), 0.0);
    for k in 1..n {
        let s = (lambda[k] / (2.0 * mf)).sqrt();
        let u: f64 = rng.sample(StandardNormal);
        let v: f64 = rng.sample(StandardNormal);
        w[k] = Complex::new(s * u, s * v);
        w[m - k] = Complex::new(s * u, -s * v);
    }
    fft.process(&mut w);
    w[..n].iter().map(|z| z.re).collect()
}

/// Deterministic binomial multiplicative cascade of `levels` halvings:
/// 2^levels cells, left child weighted `a`, right child `1 - a`.
pub fn binomial_cascade(a: f64, levels: u32) -> Vec<f64> {
    let mut series = vec![1.0];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(series.len() * 2);
        for &v in &series {
            next.push(v * a);
            next.push(v * (1.0 - a));
        }
        series = next;
    }
    series
}

/// Analytic generalized Hurst exponent of the binomial cascade, q != 0.
pub fn cascade_hq(a: f64, q: f64) -> f64 {
    1.0 / q - ((a.powf(q) + (1.0 - a).powf(q)).log2()) / q
}

/// Analytic Holder exponent alpha(q) = tau'(q) of the binomial cascade.
pub fn cascade_alpha(a: f64, q: f64) -> f64 {
    let b = 1.0 - a;
    let (aq, bq) = (a.powf(q), b.powf(q));
    -(aq * a.ln() + bq * b.ln()) / ((aq + bq) * std::f64::consts::LN_2)
}

/// Multinomial sample of `n_tokens` draws from an exact Zipf law
/// P(R) proportional to R^(-gamma) over `n_types` types, wrapped as a
/// token sequence whose surfaces encode the true rank.
pub fn zipf_token_sequence(
    rng: &mut impl Rng,
    n_types: usize,
    gamma: f64,
    n_tokens: usize,
) -> TokenSequence {
    let weights: Vec<f64> = (1..=n_types).map(|r| (r as f64).powf(-gamma)).collect();
    let dist = WeightedIndex::new(&weights).unwrap();
    let tokens = (0..n_tokens)
        .map(|_| Token::word(format!("w{:06}", dist.sample(rng) + 1)))
        .collect();
    TokenSequence {
        source_id: "zipf-synthetic".into(),
        script: ScriptClass::Latin,
        tokens,
    }
}

pub fn shuffled(rng: &mut impl Rng, values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    out.shuffle(rng);
    out
}
