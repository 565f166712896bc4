//! Multifractal detrended fluctuation analysis.
//!
//! Pipeline: mean-centered profile -> per-window polynomial detrending from
//! both ends of the profile -> q-order fluctuation functions F_q(s) ->
//! generalized Hurst exponents h(q) by log-log regression -> singularity
//! spectrum (alpha, f(alpha)) via the Legendre transform of tau(q) = q h(q) - 1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::DistanceSeries;
use crate::stats::linear_fit;

/// Shortest series accepted for analysis.
pub const MIN_SERIES_LEN: usize = 64;
/// Smallest scale in the default grid.
pub const DEFAULT_MIN_SCALE: usize = 16;
/// Number of scales in the default grid before deduplication.
pub const DEFAULT_SCALE_COUNT: usize = 24;
/// Minimum number of scales in a fitting window.
pub const MIN_RANGE_POINTS: usize = 6;

#[derive(Debug, Error)]
pub enum MfdfaError {
    #[error("series of length {got} is shorter than the minimum {min}")]
    SeriesTooShort { got: usize, min: usize },
    #[error("scale {scale} outside the valid range [{min}, {max}]")]
    ScaleOutOfRange { scale: usize, min: usize, max: usize },
    #[error("zero variance in window {window} at scale {scale}; widen the minimum scale")]
    ZeroVariance { scale: usize, window: usize },
    #[error("scaling range holds {got} scales, need at least {need}")]
    RangeTooSmall { got: usize, need: usize },
    #[error("need at least {need} q points, got {got}")]
    TooFewPoints { got: usize, need: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfdfaOptions {
    pub detrend_order: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_step: f64,
    pub min_scale: usize,
    pub scale_count: usize,
    pub scaling_mode: ScalingMode,
}

impl Default for MfdfaOptions {
    fn default() -> Self {
        MfdfaOptions {
            detrend_order: 2,
            q_min: -4.0,
            q_max: 4.0,
            q_step: 0.25,
            min_scale: DEFAULT_MIN_SCALE,
            scale_count: DEFAULT_SCALE_COUNT,
            scaling_mode: ScalingMode::Auto,
        }
    }
}

impl MfdfaOptions {
    pub fn q_grid(&self) -> Vec<f64> {
        let mut qs = Vec::new();
        let steps = ((self.q_max - self.q_min) / self.q_step).round() as i64;
        for i in 0..=steps {
            let q = self.q_min + i as f64 * self.q_step;
            // Snap the zero crossing so the q = 0 branch is hit exactly.
            qs.push(if q.abs() < 1e-9 { 0.0 } else { q });
        }
        qs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ScalingMode {
    Auto,
    Manual { s_lo: usize, s_hi: usize },
    TwoRanges,
}

/// F_q(s) for every (scale, q) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FluctuationMatrix {
    pub scales: Vec<usize>,
    pub qs: Vec<f64>,
    /// values[i][j] = F_{qs[j]}(scales[i]).
    pub values: Vec<Vec<f64>>,
    pub detrend_order: usize,
    pub n: usize,
}

impl FluctuationMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,q,Fq\n");
        for (i, &s) in self.scales.iter().enumerate() {
            for (j, &q) in self.qs.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", s, q, self.values[i][j]));
            }
        }
        out
    }

    fn q_index(&self, q: f64) -> Option<usize> {
        self.qs.iter().position(|&v| (v - q).abs() < 1e-9)
    }

    /// Indices of scales inside [s_lo, s_hi].
    fn scale_indices(&self, s_lo: usize, s_hi: usize) -> Vec<usize> {
        self.scales
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >= s_lo && s <= s_hi)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HurstFunction {
    pub qs: Vec<f64>,
    pub h: Vec<f64>,
    pub stderr: Vec<f64>,
    pub scale_range: (usize, usize),
}

impl HurstFunction {
    pub fn h_at(&self, q: f64) -> Option<f64> {
        self.qs
            .iter()
            .position(|&v| (v - q).abs() < 1e-9)
            .map(|i| self.h[i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,h,stderr\n");
        for i in 0..self.qs.len() {
            out.push_str(&format!("{},{},{}\n", self.qs[i], self.h[i], self.stderr[i]));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub qs: Vec<f64>,
    pub tau: Vec<f64>,
    pub alpha: Vec<f64>,
    pub f: Vec<f64>,
    pub delta_alpha: f64,
    /// True where local concavity fails (alpha not decreasing in q); flagged
    /// points are excluded from delta_alpha.
    pub nonphysical_mask: Vec<bool>,
}

impl Spectrum {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,tau,alpha,f,nonphysical\n");
        for i in 0..self.qs.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.qs[i], self.tau[i], self.alpha[i], self.f[i], self.nonphysical_mask[i]
            ));
        }
        out
    }
}

/// Mean-centered cumulative sum. No length check; callers that feed the
/// full analysis go through [`compute_profile`].
pub fn profile_of(values: &[f64]) -> Vec<f64> {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut acc = 0.0;
    values
        .iter()
        .map(|&v| {
            acc += v - mean;
            acc
        })
        .collect()
}

pub fn compute_profile(series: &DistanceSeries) -> Result<Vec<f64>, MfdfaError> {
    if series.values.len() < MIN_SERIES_LEN {
        return Err(MfdfaError::SeriesTooShort {
            got: series.values.len(),
            min: MIN_SERIES_LEN,
        });
    }
    Ok(profile_of(&series.values_f64()))
}

/// Logarithmically spaced integer scales from `min_scale` to T/4, deduplicated.
pub fn default_scales(t: usize, min_scale: usize, count: usize) -> Vec<usize> {
    let max_scale = t / 4;
    if max_scale <= min_scale {
        return vec![min_scale];
    }
    let lo = (min_scale as f64).ln();
    let hi = (max_scale as f64).ln();
    let mut scales: Vec<usize> = (0..count)
        .map(|i| {
            let f = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            f.exp().round() as usize
        })
        .collect();
    scales.sort_unstable();
    scales.dedup();
    scales
}

/// Solve the (m+1)x(m+1) system A c = b by Gaussian elimination with
/// partial pivoting. A is the Vandermonde normal matrix, well-conditioned
/// after mapping the window abscissa onto [-1, 1].
fn solve_small(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, pivot);
        let diag = m[col][col];
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = m[row][col] / diag;
            for k in col..=n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    (0..n).map(|i| m[i][n] / m[i][i]).collect()
}

/// Detrend every window of length `s` (from both ends of the profile) with a
/// polynomial of order `m` and return the per-window residual variances.
fn window_variances(
    profile: &[f64],
    s: usize,
    m: usize,
) -> Result<Vec<f64>, MfdfaError> {
    let t = profile.len();
    let m_s = t / s;
    // Normalized abscissa and its power sums are shared by every window of
    // this scale, so the normal matrix is factored once.
    let xs: Vec<f64> = (0..s)
        .map(|k| (2.0 * k as f64 - (s as f64 - 1.0)) / (s as f64 - 1.0))
        .collect();
    let mut pow_sums = vec![0.0; 2 * m + 1];
    let mut powers: Vec<Vec<f64>> = Vec::with_capacity(s);
    for &x in &xs {
        let mut row = Vec::with_capacity(m + 1);
        let mut p = 1.0;
        for j in 0..=2 * m {
            if j <= m {
                row.push(p);
            }
            pow_sums[j] += p;
            p *= x;
        }
        powers.push(row);
    }
    let normal: Vec<Vec<f64>> = (0..=m)
        .map(|i| (0..=m).map(|j| pow_sums[i + j]).collect())
        .collect();

    let mut variances = Vec::with_capacity(2 * m_s);
    let window_of = |start: usize, index: usize| -> Result<f64, MfdfaError> {
        let y = &profile[start..start + s];
        let mut rhs = vec![0.0; m + 1];
        let mut mean_sq = 0.0;
        for (k, &yk) in y.iter().enumerate() {
            mean_sq += yk * yk;
            for j in 0..=m {
                rhs[j] += yk * powers[k][j];
            }
        }
        mean_sq /= s as f64;
        let coef = solve_small(&normal, &rhs);
        let mut res = Vec::with_capacity(s);
        let mut res_mean = 0.0;
        for (k, &yk) in y.iter().enumerate() {
            let mut trend = 0.0;
            for j in 0..=m {
                trend += coef[j] * powers[k][j];
            }
            let r = yk - trend;
            res_mean += r;
            res.push(r);
        }
        res_mean /= s as f64;
        let f2 = res.iter().map(|r| (r - res_mean) * (r - res_mean)).sum::<f64>() / s as f64;
        if f2 < 1e-20 * (mean_sq + 1.0) {
            return Err(MfdfaError::ZeroVariance {
                scale: s,
                window: index,
            });
        }
        Ok(f2)
    };
    for nu in 0..m_s {
        variances.push(window_of(nu * s, nu)?);
    }
    for nu in 0..m_s {
        variances.push(window_of(t - (nu + 1) * s, m_s + nu)?);
    }
    Ok(variances)
}

fn fq_from_variances(f2: &[f64], q: f64) -> f64 {
    let n = f2.len() as f64;
    if q == 0.0 {
        // Logarithmic form: the q -> 0 limit of the generalized mean.
        (0.5 * f2.iter().map(|v| v.ln()).sum::<f64>() / n).exp()
    } else {
        let mean = f2.iter().map(|v| v.powf(q / 2.0)).sum::<f64>() / n;
        mean.powf(1.0 / q)
    }
}

pub fn fluctuation_matrix(
    profile: &[f64],
    scales: &[usize],
    qs: &[f64],
    detrend_order: usize,
) -> Result<FluctuationMatrix, MfdfaError> {
    let t = profile.len();
    let min_scale = detrend_order + 2;
    let max_scale = t / 4;
    for &s in scales {
        if s < min_scale || s > max_scale {
            return Err(MfdfaError::ScaleOutOfRange {
                scale: s,
                min: min_scale,
                max: max_scale,
            });
        }
    }
    let mut values = Vec::with_capacity(scales.len());
    for &s in scales {
        let f2 = window_variances(profile, s, detrend_order)?;
        values.push(qs.iter().map(|&q| fq_from_variances(&f2, q)).collect());
    }
    Ok(FluctuationMatrix {
        scales: scales.to_vec(),
        qs: qs.to_vec(),
        values,
        detrend_order,
        n: t,
    })
}

/// Log-log points of F_q2(s) over the given scale indices.
fn q2_loglog(matrix: &FluctuationMatrix, idx: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let j = matrix
        .q_index(2.0)
        .unwrap_or(matrix.qs.len().saturating_sub(1));
    let xs = idx.iter().map(|&i| (matrix.scales[i] as f64).ln()).collect();
    let ys = idx.iter().map(|&i| matrix.values[i][j].ln()).collect();
    (xs, ys)
}

fn window_mse(matrix: &FluctuationMatrix, lo: usize, hi: usize) -> f64 {
    let idx: Vec<usize> = (lo..=hi).collect();
    let (xs, ys) = q2_loglog(matrix, &idx);
    linear_fit(&xs, &ys).ssr / idx.len() as f64
}

/// Pick the scaling window(s) used for the h(q) regression.
pub fn select_scaling_range(
    matrix: &FluctuationMatrix,
    mode: ScalingMode,
) -> Result<Vec<(usize, usize)>, MfdfaError> {
    let n = matrix.scales.len();
    if n < 8 {
        return Err(MfdfaError::RangeTooSmall { got: n, need: 8 });
    }
    match mode {
        ScalingMode::Manual { s_lo, s_hi } => {
            let min = matrix.scales[0];
            let max = matrix.scales[n - 1];
            if s_lo < min || s_hi > max || s_lo >= s_hi {
                return Err(MfdfaError::RangeTooSmall {
                    got: 0,
                    need: MIN_RANGE_POINTS,
                });
            }
            let idx = matrix.scale_indices(s_lo, s_hi);
            if idx.len() < MIN_RANGE_POINTS {
                return Err(MfdfaError::RangeTooSmall {
                    got: idx.len(),
                    need: MIN_RANGE_POINTS,
                });
            }
            Ok(vec![(s_lo, s_hi)])
        }
        ScalingMode::Auto => {
            // Smallest q=2 fit MSE; on near-ties prefer the longer window.
            let mut best: Option<(f64, usize, usize)> = None;
            for lo in 0..n {
                for hi in lo + MIN_RANGE_POINTS - 1..n {
                    let mse = window_mse(matrix, lo, hi);
                    let replace = match best {
                        None => true,
                        Some((bmse, blo, bhi)) => {
                            let tied = mse <= bmse * (1.0 + 1e-6) + 1e-18
                                && bmse <= mse * (1.0 + 1e-6) + 1e-18;
                            if tied {
                                hi - lo > bhi - blo
                            } else {
                                mse < bmse
                            }
                        }
                    };
                    if replace {
                        best = Some((mse, lo, hi));
                    }
                }
            }
            let (_, lo, hi) = best.unwrap();
            Ok(vec![(matrix.scales[lo], matrix.scales[hi])])
        }
        ScalingMode::TwoRanges => {
            let mut best: Option<(f64, usize)> = None;
            for split in MIN_RANGE_POINTS..=n - MIN_RANGE_POINTS {
                let idx_lo: Vec<usize> = (0..split).collect();
                let idx_hi: Vec<usize> = (split..n).collect();
                let (xl, yl) = q2_loglog(matrix, &idx_lo);
                let (xh, yh) = q2_loglog(matrix, &idx_hi);
                let total = linear_fit(&xl, &yl).ssr + linear_fit(&xh, &yh).ssr;
                if best.map_or(true, |(t, _)| total < t) {
                    best = Some((total, split));
                }
            }
            let (_, split) = best.ok_or(MfdfaError::RangeTooSmall {
                got: n,
                need: 2 * MIN_RANGE_POINTS,
            })?;
            Ok(vec![
                (matrix.scales[0], matrix.scales[split - 1]),
                (matrix.scales[split], matrix.scales[n - 1]),
            ])
        }
    }
}

/// Per-q log-log regression of F_q(s) over the scale range.
pub fn estimate_hq(
    matrix: &FluctuationMatrix,
    range: (usize, usize),
) -> Result<HurstFunction, MfdfaError> {
    let idx = matrix.scale_indices(range.0, range.1);
    if idx.len() < MIN_RANGE_POINTS {
        return Err(MfdfaError::RangeTooSmall {
            got: idx.len(),
            need: MIN_RANGE_POINTS,
        });
    }
    let xs: Vec<f64> = idx.iter().map(|&i| (matrix.scales[i] as f64).ln()).collect();
    let mut h = Vec::with_capacity(matrix.qs.len());
    let mut stderr = Vec::with_capacity(matrix.qs.len());
    for j in 0..matrix.qs.len() {
        let ys: Vec<f64> = idx.iter().map(|&i| matrix.values[i][j].ln()).collect();
        let fit = linear_fit(&xs, &ys);
        h.push(fit.slope);
        stderr.push(fit.slope_stderr);
    }
    Ok(HurstFunction {
        qs: matrix.qs.clone(),
        h,
        stderr,
        scale_range: range,
    })
}

/// Legendre transform of tau(q) = q h(q) - 1 by finite differences.
pub fn singularity_spectrum(hq: &HurstFunction) -> Result<Spectrum, MfdfaError> {
    let n = hq.qs.len();
    if n < 5 {
        return Err(MfdfaError::TooFewPoints { got: n, need: 5 });
    }
    let qs = &hq.qs;
    let h = &hq.h;
    let dh: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                (h[1] - h[0]) / (qs[1] - qs[0])
            } else if i == n - 1 {
                (h[n - 1] - h[n - 2]) / (qs[n - 1] - qs[n - 2])
            } else {
                (h[i + 1] - h[i - 1]) / (qs[i + 1] - qs[i - 1])
            }
        })
        .collect();
    let tau: Vec<f64> = (0..n).map(|i| qs[i] * h[i] - 1.0).collect();
    let alpha: Vec<f64> = (0..n).map(|i| h[i] + qs[i] * dh[i]).collect();
    let f: Vec<f64> = (0..n).map(|i| qs[i] * (alpha[i] - h[i]) + 1.0).collect();
    // alpha must decrease as q grows; violations are non-physical.
    let mut mask = vec![false; n];
    for i in 1..n {
        if alpha[i] > alpha[i - 1] + 1e-12 {
            mask[i] = true;
        }
    }
    let kept: Vec<f64> = alpha
        .iter()
        .zip(&mask)
        .filter(|(_, &m)| !m)
        .map(|(&a, _)| a)
        .collect();
    let delta_alpha = if kept.is_empty() {
        0.0
    } else {
        kept.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - kept.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    Ok(Spectrum {
        qs: qs.clone(),
        tau,
        alpha,
        f,
        delta_alpha,
        nonphysical_mask: mask,
    })
}

/// Multifractality label used in reports.
pub fn fractality_label(delta_alpha: f64) -> &'static str {
    if delta_alpha <= 0.1 {
        "monofractal"
    } else if delta_alpha >= 0.2 {
        "multifractal"
    } else {
        "indecisive"
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangeResult {
    pub range: (usize, usize),
    pub hurst: HurstFunction,
    pub spectrum: Spectrum,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MfdfaResult {
    pub matrix: FluctuationMatrix,
    pub ranges: Vec<RangeResult>,
    /// Set when the series is short enough that a continuous-looking
    /// spectrum may be a finite-size artifact.
    pub finite_size_warning: bool,
}

/// Full analysis of one distance series.
pub fn run_mfdfa(
    series: &DistanceSeries,
    options: &MfdfaOptions,
) -> Result<MfdfaResult, MfdfaError> {
    let profile = compute_profile(series)?;
    let scales = default_scales(profile.len(), options.min_scale, options.scale_count);
    let qs = options.q_grid();
    let matrix = fluctuation_matrix(&profile, &scales, &qs, options.detrend_order)?;
    let ranges = select_scaling_range(&matrix, options.scaling_mode)?;
    let mut results = Vec::with_capacity(ranges.len());
    for range in ranges {
        let hurst = estimate_hq(&matrix, range)?;
        let spectrum = singularity_spectrum(&hurst)?;
        let label = fractality_label(spectrum.delta_alpha).to_string();
        results.push(RangeResult {
            range,
            hurst,
            spectrum,
            label,
        });
    }
    Ok(MfdfaResult {
        matrix,
        ranges: results,
        finite_size_warning: series.values.len() < 5000,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_of_constant_series_is_zero() {
        assert_eq!(profile_of(&[5.0, 5.0, 5.0, 5.0]), vec![0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn profile_hand_example() {
        let p = profile_of(&[1.0, 2.0, 3.0]);
        assert_eq!(p, vec![-1.0, -1.0, 0.0]);
    }

    #[test]
    fn alternating_profile_is_bounded() {
        let u: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { 3.0 }).collect();
        let p = profile_of(&u);
        assert!(p.iter().all(|v| v.abs() <= 1.0 + 1e-12));
    }

    #[test]
    fn short_series_rejected() {
        let s = DistanceSeries {
            values: vec![1; 10],
            unit: crate::series::Unit::Words,
            scope: crate::series::Scope::AllPunct,
            source_id: "t".into(),
            outliers_removed: vec![],
        };
        assert!(matches!(
            compute_profile(&s),
            Err(MfdfaError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn linear_trend_triggers_zero_variance() {
        let profile: Vec<f64> = (0..1024).map(|i| 3.0 * i as f64 + 7.0).collect();
        let err = fluctuation_matrix(&profile, &[16, 32], &[2.0], 1).unwrap_err();
        assert!(matches!(err, MfdfaError::ZeroVariance { .. }));
    }

    #[test]
    fn generalized_mean_orders_fq() {
        // Deterministic bumpy signal.
        let u: Vec<f64> = (0..4096)
            .map(|i| ((i as f64 * 0.7).sin() * 10.0).powi(2) + (i % 17) as f64)
            .collect();
        let profile = profile_of(&u);
        let scales = default_scales(profile.len(), 16, 12);
        let matrix = fluctuation_matrix(&profile, &scales, &[-2.0, 0.0, 2.0], 2).unwrap();
        for row in &matrix.values {
            assert!(row[0] <= row[1] + 1e-12 && row[1] <= row[2] + 1e-12, "{row:?}");
        }
    }

    #[test]
    fn exact_power_law_gives_flat_hq_and_full_auto_range() {
        let scales = vec![16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512];
        let qs = vec![-2.0, -1.0, 0.0, 1.0, 2.0];
        let values: Vec<Vec<f64>> = scales
            .iter()
            .map(|&s| qs.iter().map(|_| (s as f64).powf(0.7)).collect())
            .collect();
        let matrix = FluctuationMatrix {
            scales: scales.clone(),
            qs,
            values,
            detrend_order: 2,
            n: 4096,
        };
        let ranges = select_scaling_range(&matrix, ScalingMode::Auto).unwrap();
        assert_eq!(ranges, vec![(16, 512)]);
        let hq = estimate_hq(&matrix, ranges[0]).unwrap();
        for &h in &hq.h {
            assert!((h - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn spliced_slopes_recovered_by_two_ranges() {
        let scales: Vec<usize> = (0..16).map(|i| 16 << (i / 2) | (i % 2) * (8 << (i / 2))).collect();
        let split_at = 8;
        let qs = vec![2.0];
        let values: Vec<Vec<f64>> = scales
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let h = if i < split_at { 0.62 } else { 0.83 };
                // Keep the two branches continuous at the splice.
                let c = if i < split_at {
                    1.0
                } else {
                    (scales[split_at - 1] as f64).powf(0.62 - 0.83)
                };
                vec![c * (s as f64).powf(h)]
            })
            .collect();
        let matrix = FluctuationMatrix {
            scales: scales.clone(),
            qs,
            values,
            detrend_order: 2,
            n: 65536,
        };
        let ranges = select_scaling_range(&matrix, ScalingMode::TwoRanges).unwrap();
        assert_eq!(ranges.len(), 2);
        let boundary_idx = scales.iter().position(|&s| s == ranges[0].1).unwrap();
        assert!((boundary_idx as i64 - (split_at as i64 - 1)).abs() <= 1);
    }

    #[test]
    fn manual_range_bounds_checked() {
        let scales: Vec<usize> = (1..=12).map(|i| 16 * i).collect();
        let qs = vec![2.0];
        let values = scales
            .iter()
            .map(|&s| vec![(s as f64).powf(0.5)])
            .collect();
        let matrix = FluctuationMatrix {
            scales,
            qs,
            values,
            detrend_order: 2,
            n: 4096,
        };
        assert!(matches!(
            select_scaling_range(&matrix, ScalingMode::Manual { s_lo: 4, s_hi: 10000 }),
            Err(MfdfaError::RangeTooSmall { .. })
        ));
        assert_eq!(
            select_scaling_range(&matrix, ScalingMode::Manual { s_lo: 16, s_hi: 192 }).unwrap(),
            vec![(16, 192)]
        );
    }

    #[test]
    fn constant_hq_collapses_spectrum() {
        let qs: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.5).collect();
        let hq = HurstFunction {
            h: vec![0.65; qs.len()],
            stderr: vec![0.0; qs.len()],
            qs,
            scale_range: (16, 512),
        };
        let spec = singularity_spectrum(&hq).unwrap();
        assert!(spec.delta_alpha.abs() < 1e-12);
        for (&a, &f) in spec.alpha.iter().zip(&spec.f) {
            assert!((a - 0.65).abs() < 1e-12);
            assert!((f - 1.0).abs() < 1e-12);
        }
        assert!(spec.nonphysical_mask.iter().all(|&m| !m));
    }

    #[test]
    fn f_at_q_zero_is_exactly_one() {
        let qs: Vec<f64> = (-8..=8).map(|i| i as f64 * 0.5).collect();
        let h: Vec<f64> = qs.iter().map(|&q| 0.8 - 0.02 * q).collect();
        let hq = HurstFunction {
            h,
            stderr: vec![0.0; qs.len()],
            qs: qs.clone(),
            scale_range: (16, 512),
        };
        let spec = singularity_spectrum(&hq).unwrap();
        let i0 = qs.iter().position(|&q| q == 0.0).unwrap();
        assert_eq!(spec.f[i0], 1.0);
    }

    #[test]
    fn decreasing_hq_gives_concave_spectrum() {
        let qs: Vec<f64> = (-16..=16).map(|i| i as f64 * 0.25).collect();
        let h: Vec<f64> = qs.iter().map(|&q| 0.75 - 0.05 * (q / 4.0).tanh()).collect();
        let hq = HurstFunction {
            h,
            stderr: vec![0.0; qs.len()],
            qs,
            scale_range: (16, 512),
        };
        let spec = singularity_spectrum(&hq).unwrap();
        assert!(spec.delta_alpha > 0.0);
        // Concavity of f over alpha at interior unflagged points.
        for i in 1..spec.alpha.len() - 1 {
            if spec.nonphysical_mask[i - 1]
                || spec.nonphysical_mask[i]
                || spec.nonphysical_mask[i + 1]
            {
                continue;
            }
            let (a0, a1, a2) = (spec.alpha[i - 1], spec.alpha[i], spec.alpha[i + 1]);
            let (f0, f1, f2) = (spec.f[i - 1], spec.f[i], spec.f[i + 1]);
            if (a2 - a0).abs() < 1e-9 {
                continue;
            }
            let interp = f0 + (f2 - f0) * (a1 - a0) / (a2 - a0);
            assert!(f1 >= interp - 1e-9, "convex kink at index {i}");
        }
    }

    #[test]
    fn default_scale_grid_shape() {
        let scales = default_scales(65536, 16, 24);
        assert_eq!(scales.first(), Some(&16));
        assert_eq!(scales.last(), Some(&16384));
        assert!(scales.windows(2).all(|w| w[0] < w[1]));
    }
}
