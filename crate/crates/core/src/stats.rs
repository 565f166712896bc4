//! Small numeric helpers shared by the fitting modules.

/// Ordinary least squares for y = slope*x + intercept.
#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope (NaN when fewer than 3 points).
    pub slope_stderr: f64,
    /// Sum of squared residuals.
    pub ssr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need at least two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    // Explicit residual sum; the textbook syy - slope*sxy form cancels
    // catastrophically when the fit is near-exact.
    let mut ssr = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = (yi - my) - slope * (xi - mx);
        ssr += r * r;
    }
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    let slope_stderr = if x.len() > 2 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    LinearFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
        ssr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let fit = linear_fit(&x, &y);
        assert!((fit.slope - 2.5).abs() < 1e-12);
        assert!((fit.intercept + 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.ssr < 1e-20);
    }

    #[test]
    fn stderr_positive_with_noise() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [1.1, 1.9, 3.2, 3.8, 5.1];
        let fit = linear_fit(&x, &y);
        assert!(fit.slope_stderr > 0.0);
        assert!(fit.r_squared > 0.9);
    }
}
