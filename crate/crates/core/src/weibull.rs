//! Discrete Weibull distribution: evaluation, maximum-likelihood fitting,
//! hazard functions, and (rescaled) Weibull plot coordinates.
//!
//! All mass evaluations go through log space: (1-p)^(k^beta) underflows for
//! moderate k once beta approaches 2.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{DistanceSeries, DistributionTable};

/// Default minimum sample size accepted by the fitter.
pub const DEFAULT_FIT_FLOOR: usize = 30;

#[derive(Debug, Error)]
pub enum WeibullError {
    #[error("invalid parameters or support point (k={k}, p={p}, beta={beta})")]
    Domain { k: u64, p: f64, beta: f64 },
    #[error("sample of {got} values is below the fitting floor {floor}")]
    SampleTooSmall { got: usize, floor: usize },
    #[error("likelihood refinement left the parameter domain")]
    FitDiverged,
    #[error("need at least two support points with CMF < 1")]
    DegenerateSupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeibullParams {
    pub p: f64,
    pub beta: f64,
}

impl WeibullParams {
    pub fn new(p: f64, beta: f64) -> Result<Self, WeibullError> {
        if !(p > 0.0 && p < 1.0) || !(beta > 0.0) || !p.is_finite() || !beta.is_finite() {
            return Err(WeibullError::Domain { k: 1, p, beta });
        }
        Ok(WeibullParams { p, beta })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WeibullEval {
    pub pmf: f64,
    pub cmf: f64,
    pub hazard: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeibullFit {
    pub params: WeibullParams,
    pub log_likelihood: f64,
    pub n: usize,
    /// Max |empirical CMF - fitted CMF| over the observed support.
    pub ks_distance: f64,
}

/// log of the survival exponent: k^beta * ln(1-p), always <= 0.
fn log_survival(k: u64, params: WeibullParams) -> f64 {
    (k as f64).powf(params.beta) * (-params.p).ln_1p()
}

/// PMF, CMF, and hazard at k >= 1.
pub fn dweibull_eval(k: u64, params: WeibullParams) -> Result<WeibullEval, WeibullError> {
    if k < 1 {
        return Err(WeibullError::Domain {
            k,
            p: params.p,
            beta: params.beta,
        });
    }
    WeibullParams::new(params.p, params.beta)?;
    if k == 1 {
        // Exact head: the exponent k^beta - (k-1)^beta is exactly 1, so
        // pmf, cmf, and hazard all equal p with no rounding.
        return Ok(WeibullEval {
            pmf: params.p,
            cmf: params.p,
            hazard: params.p,
        });
    }
    let a = log_survival(k - 1, params);
    let b = log_survival(k, params);
    // pmf = e^a - e^b with b <= a <= 0.
    let hazard = -(b - a).exp_m1();
    let pmf = a.exp() * hazard;
    let cmf = -b.exp_m1();
    Ok(WeibullEval { pmf, cmf, hazard })
}

/// Log PMF, stable for large k^beta.
pub fn dweibull_log_pmf(k: u64, params: WeibullParams) -> f64 {
    let a = log_survival(k - 1, params);
    let b = log_survival(k, params);
    a + (-(b - a).exp_m1()).ln()
}

fn log_likelihood(counts: &BTreeMap<u64, usize>, params: WeibullParams) -> f64 {
    counts
        .iter()
        .map(|(&k, &c)| c as f64 * dweibull_log_pmf(k, params))
        .sum()
}

fn in_domain(p: f64, beta: f64) -> bool {
    p > 1e-9 && p < 1.0 - 1e-9 && beta > 1e-9 && beta.is_finite()
}

/// Maximum-likelihood fit: coarse grid over (p, beta) followed by
/// derivative-free compass-search refinement.
pub fn fit_discrete_weibull(series: &DistanceSeries) -> Result<WeibullFit, WeibullError> {
    fit_discrete_weibull_with_floor(series, DEFAULT_FIT_FLOOR)
}

pub fn fit_discrete_weibull_with_floor(
    series: &DistanceSeries,
    floor: usize,
) -> Result<WeibullFit, WeibullError> {
    let n = series.values.len();
    if n < floor {
        return Err(WeibullError::SampleTooSmall { got: n, floor });
    }
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in &series.values {
        *counts.entry(v.max(1)).or_insert(0) += 1;
    }

    let mut best = (f64::NEG_INFINITY, WeibullParams { p: 0.5, beta: 1.0 });
    for pi in 1..=99 {
        let p = pi as f64 * 0.01;
        for bi in 0..=56 {
            let beta = 0.2 + bi as f64 * 0.05;
            let ll = log_likelihood(&counts, WeibullParams { p, beta });
            if ll > best.0 {
                best = (ll, WeibullParams { p, beta });
            }
        }
    }

    // Compass search from the best grid point.
    let (mut ll, mut params) = best;
    let mut step_p = 0.005;
    let mut step_b = 0.025;
    while step_p > 1e-6 * params.p.max(0.01) || step_b > 1e-6 * params.beta.max(0.01) {
        let mut moved = false;
        for (dp, db) in [
            (step_p, 0.0),
            (-step_p, 0.0),
            (0.0, step_b),
            (0.0, -step_b),
        ] {
            let p = params.p + dp;
            let beta = params.beta + db;
            if !in_domain(p, beta) {
                continue;
            }
            let cand = WeibullParams { p, beta };
            let cand_ll = log_likelihood(&counts, cand);
            if cand_ll > ll {
                ll = cand_ll;
                params = cand;
                moved = true;
            }
        }
        if !moved {
            step_p *= 0.5;
            step_b *= 0.5;
        }
    }
    if !in_domain(params.p, params.beta) || !ll.is_finite() {
        return Err(WeibullError::FitDiverged);
    }

    // KS-style distance over the observed support.
    let mut acc = 0usize;
    let mut ks = 0.0f64;
    for (&k, &c) in &counts {
        acc += c;
        let emp = acc as f64 / n as f64;
        let fitted = dweibull_eval(k, params)?.cmf;
        ks = ks.max((emp - fitted).abs());
    }
    Ok(WeibullFit {
        params,
        log_likelihood: ll,
        n,
        ks_distance: ks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Empirical,
    Fitted,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub kind: PointKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotSeries {
    pub points: Vec<PlotPoint>,
    pub rescaled: bool,
}

impl PlotSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,kind\n");
        for pt in &self.points {
            let kind = match pt.kind {
                PointKind::Empirical => "empirical",
                PointKind::Fitted => "fitted",
            };
            out.push_str(&format!("{},{},{}\n", pt.x, pt.y, kind));
        }
        out
    }
}

/// Survival masses below this are indistinguishable from the rounding of a
/// CMF stored near 1.0; the double-log transform of such points is noise.
const SURVIVAL_FLOOR: f64 = 1e-8;

/// Weibull-plot coordinates (log k, log(-log(1 - F(k)))) for the empirical
/// CMF, with an optional fitted line at the same abscissas. The rescaled
/// variant min-max normalizes the empirical points onto the unit square and
/// maps the fitted line with the same affine transform. Points with
/// 1 - F(k) below [`SURVIVAL_FLOOR`] (including the final F = 1 point,
/// whose transform is infinite) are dropped.
pub fn weibull_plot(
    table: &DistributionTable,
    params: Option<WeibullParams>,
    rescaled: bool,
) -> Result<PlotSeries, WeibullError> {
    let mut emp: Vec<(f64, f64)> = Vec::new();
    for (&k, &f) in table.support.iter().zip(&table.cmf) {
        if f < 1.0 - SURVIVAL_FLOOR && k >= 1 {
            let x = (k as f64).ln();
            let y = (-(1.0 - f).ln()).ln();
            emp.push((x, y));
        }
    }
    if emp.len() < 2 {
        return Err(WeibullError::DegenerateSupport);
    }
    let mut fitted: Vec<(f64, f64)> = Vec::new();
    if let Some(params) = params {
        let intercept = (-(1.0 - params.p).ln()).ln();
        for &(x, _) in &emp {
            fitted.push((x, params.beta * x + intercept));
        }
    }
    // Division (rather than multiplying by a reciprocal) makes the extreme
    // empirical points land on exactly 0 and 1 after rescaling.
    let (mut x0, mut xspan, mut y0, mut yspan) = (0.0, 1.0, 0.0, 1.0);
    if rescaled {
        let xmin = emp.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let xmax = emp.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let ymin = emp.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let ymax = emp.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        if xmax <= xmin || ymax <= ymin {
            return Err(WeibullError::DegenerateSupport);
        }
        x0 = xmin;
        xspan = xmax - xmin;
        y0 = ymin;
        yspan = ymax - ymin;
    }
    let map = |(x, y): (f64, f64)| ((x - x0) / xspan, (y - y0) / yspan);
    let mut points = Vec::with_capacity(emp.len() + fitted.len());
    for &pt in &emp {
        let (x, y) = map(pt);
        points.push(PlotPoint {
            x,
            y,
            kind: PointKind::Empirical,
        });
    }
    for &pt in &fitted {
        let (x, y) = map(pt);
        points.push(PlotPoint {
            x,
            y,
            kind: PointKind::Fitted,
        });
    }
    Ok(PlotSeries { points, rescaled })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Scope, Unit};

    fn params(p: f64, beta: f64) -> WeibullParams {
        WeibullParams::new(p, beta).unwrap()
    }

    #[test]
    fn first_trial_mass_equals_p() {
        for beta in [0.5, 1.0, 1.7, 2.5] {
            let e = dweibull_eval(1, params(0.3, beta)).unwrap();
            assert!((e.pmf - 0.3).abs() < 1e-15);
            assert!((e.cmf - 0.3).abs() < 1e-15);
            assert!((e.hazard - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn geometric_reduction_at_beta_one() {
        let e = dweibull_eval(2, params(0.5, 1.0)).unwrap();
        assert!((e.pmf - 0.25).abs() < 1e-15);
        assert!((e.cmf - 0.75).abs() < 1e-15);
        assert!((e.hazard - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pmf_is_cmf_difference() {
        let pr = params(0.2, 1.5);
        let e4 = dweibull_eval(4, pr).unwrap();
        let e3 = dweibull_eval(3, pr).unwrap();
        assert!((e4.pmf - (e4.cmf - e3.cmf)).abs() < 1e-15);
    }

    #[test]
    fn log_pmf_survives_extreme_tails() {
        // Direct evaluation of (1-p)^(k^beta) underflows here.
        let lp = dweibull_log_pmf(5000, params(0.5, 2.0));
        assert!(lp.is_finite());
        assert!(lp < -1e6);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(dweibull_eval(0, params(0.5, 1.0)).is_err());
        assert!(WeibullParams::new(0.0, 1.0).is_err());
        assert!(WeibullParams::new(0.5, 0.0).is_err());
        assert!(WeibullParams::new(1.0, 1.0).is_err());
    }

    #[test]
    fn small_sample_rejected() {
        let s = DistanceSeries {
            values: vec![1; 10],
            unit: Unit::Words,
            scope: Scope::AllPunct,
            source_id: "t".into(),
            outliers_removed: vec![],
        };
        assert!(matches!(
            fit_discrete_weibull(&s),
            Err(WeibullError::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn exact_cmf_points_are_collinear() {
        let pr = params(0.3, 1.6);
        let mut support = Vec::new();
        let mut cmf = Vec::new();
        for k in 1..=50u64 {
            support.push(k);
            cmf.push(dweibull_eval(k, pr).unwrap().cmf);
        }
        let pmf: Vec<f64> = cmf
            .iter()
            .scan(0.0, |prev, &c| {
                let p = c - *prev;
                *prev = c;
                Some(p)
            })
            .collect();
        let table = DistributionTable {
            support,
            pmf,
            cmf,
            n: 1,
        };
        let plot = weibull_plot(&table, None, false).unwrap();
        let pts: Vec<&PlotPoint> = plot.points.iter().collect();
        let intercept = (-(1.0 - 0.3f64).ln()).ln();
        for pt in pts {
            let expect = 1.6 * pt.x + intercept;
            assert!((pt.y - expect).abs() < 1e-9, "residual {}", pt.y - expect);
        }
    }

    #[test]
    fn rescaled_plot_fills_unit_square() {
        let pr = params(0.2, 1.2);
        let mut support = Vec::new();
        let mut cmf = Vec::new();
        for k in 1..=30u64 {
            support.push(k);
            cmf.push(dweibull_eval(k, pr).unwrap().cmf);
        }
        let table = DistributionTable {
            support: support.clone(),
            pmf: vec![0.0; support.len()],
            cmf,
            n: 1,
        };
        let plot = weibull_plot(&table, Some(pr), true).unwrap();
        let emp: Vec<&PlotPoint> = plot
            .points
            .iter()
            .filter(|p| p.kind == PointKind::Empirical)
            .collect();
        let xs: Vec<f64> = emp.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = emp.iter().map(|p| p.y).collect();
        for (&x, &y) in xs.iter().zip(&ys) {
            assert!((-1e-12..=1.0 + 1e-12).contains(&x));
            assert!((-1e-12..=1.0 + 1e-12).contains(&y));
        }
        assert!(xs.iter().cloned().fold(f64::INFINITY, f64::min).abs() < 1e-12);
        assert!((xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - 1.0).abs() < 1e-12);
        assert!(ys.iter().cloned().fold(f64::INFINITY, f64::min).abs() < 1e-12);
        assert!((ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_support_rejected() {
        let table = DistributionTable {
            support: vec![5],
            pmf: vec![1.0],
            cmf: vec![1.0],
            n: 3,
        };
        assert!(matches!(
            weibull_plot(&table, None, false),
            Err(WeibullError::DegenerateSupport)
        ));
    }
}
