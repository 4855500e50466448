use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// Log10-space window `lo < log10(v) <= hi` on one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBounds {
    pub lo: f64,
    pub hi: f64,
    pub axis: Axis,
}

impl RegimeBounds {
    pub fn new(lo: f64, hi: f64, axis: Axis) -> Result<Self> {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(Error::InvalidParam(format!("regime lower bound {lo} not below upper bound {hi}")));
        }
        Ok(RegimeBounds { lo, hi, axis })
    }

    /// A window wide enough to include every positive finite value.
    pub fn unbounded(axis: Axis) -> Self {
        RegimeBounds {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            axis,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let v = match self.axis {
            Axis::X => x,
            Axis::Y => y,
        }
        .log10();
        self.lo < v && v <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Slope in log-log space: β for Heaps, -α for Zipf.
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub ses: f64,
    pub r2: f64,
    pub n_points: usize,
    pub regime: RegimeBounds,
}

/// Ordinary least squares of log10 y on log10 x, restricted to `regime`.
pub fn fit_loglog(points: &[(f64, f64)], regime: RegimeBounds) -> Result<FitResult> {
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::NonPositive { x, y });
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| regime.contains(*x, *y))
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let n = logs.len();
    if n < 3 {
        return Err(Error::TooFewPoints {
            surviving: n,
            lo: regime.lo,
            hi: regime.hi,
        });
    }
    let nf = n as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &logs {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate("all regime points share one x value".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ssr: f64 = logs
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let ses = (ssr / (nf - 2.0) / sxx).sqrt();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - ssr / syy).clamp(0.0, 1.0) };
    Ok(FitResult {
        exponent: slope,
        intercept,
        ses,
        r2,
        n_points: n,
        regime,
    })
}

/// Significance-style notation for a slope standard error: none below .01,
/// `^` for [.01, .05), `*` from .05 up.
pub fn ses_flag(ses: f64) -> &'static str {
    if ses < 0.01 {
        ""
    } else if ses < 0.05 {
        "^"
    } else {
        "*"
    }
}
