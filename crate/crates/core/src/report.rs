//! Plot-ready and tabular outputs: CSV reports, two-column curve files and
//! log10-binned histograms.
//!
//! Every writer takes an optional provenance line which is emitted first as a
//! `# ...` comment.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::scaling::{ses_flag, FitResult};

/// Histogram bin width in log10 units.
pub const LOG10_BIN_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub unit: String,
    pub corpus: String,
    pub exponent: f64,
    pub ses: f64,
    pub ses_flag: String,
    pub r2: f64,
    pub n_points: usize,
    pub regime_lo: f64,
    pub regime_hi: f64,
}

impl FitRow {
    pub fn new(unit: impl ToString, corpus: impl ToString, fit: &FitResult) -> Self {
        FitRow {
            unit: unit.to_string(),
            corpus: corpus.to_string(),
            exponent: fit.exponent,
            ses: fit.ses,
            ses_flag: ses_flag(fit.ses).to_string(),
            r2: fit.r2,
            n_points: fit.n_points,
            regime_lo: fit.regime.lo,
            regime_hi: fit.regime.hi,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BmRow {
    pub label: String,
    pub b: Option<f64>,
    pub m: Option<f64>,
    pub shuffled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistBin {
    /// Lower edge in log10 units.
    pub log10_lo: f64,
    pub log10_hi: f64,
    pub count: u64,
    /// Fraction of all values in this bin.
    pub fraction: f64,
}

fn write_comment<W: Write>(out: &mut W, comment: Option<&str>) -> std::io::Result<()> {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    Ok(())
}

pub fn write_csv<W: Write, S: Serialize>(mut out: W, comment: Option<&str>, rows: &[S]) -> Result<()> {
    write_comment(&mut out, comment).map_err(csv::Error::from)?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Tab-separated `x<TAB>y` lines with a header.
pub fn write_two_column<W: Write>(
    mut out: W,
    comment: Option<&str>,
    header: (&str, &str),
    points: &[(f64, f64)],
) -> std::io::Result<()> {
    write_comment(&mut out, comment)?;
    writeln!(out, "{}\t{}", header.0, header.1)?;
    for (x, y) in points {
        writeln!(out, "{x}\t{y}")?;
    }
    out.flush()
}

/// Log10-binned histogram of positive values (bins of width 0.1, lower edge
/// inclusive). Empty bins between the first and last occupied bin are kept.
pub fn log10_histogram(values: &[usize]) -> Vec<HistBin> {
    let positive: Vec<usize> = values.iter().copied().filter(|&v| v > 0).collect();
    if positive.is_empty() {
        return Vec::new();
    }
    // the epsilon keeps exact powers of ten in the bin they open
    let index = |v: usize| ((v as f64).log10() / LOG10_BIN_WIDTH + 1e-9).floor() as i64;
    let lo = positive.iter().map(|&v| index(v)).min().unwrap_or(0);
    let hi = positive.iter().map(|&v| index(v)).max().unwrap_or(0);
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &v in &positive {
        counts[(index(v) - lo) as usize] += 1;
    }
    let total = positive.len() as f64;
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let k = lo + i as i64;
            HistBin {
                log10_lo: round9(k as f64 * LOG10_BIN_WIDTH),
                log10_hi: round9((k + 1) as f64 * LOG10_BIN_WIDTH),
                count,
                fraction: count as f64 / total,
            }
        })
        .collect()
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::{Axis, RegimeBounds};

    #[test]
    fn histogram_bins() {
        let h = log10_histogram(&[1, 1, 10, 100, 1000, 0]);
        assert_eq!(h.first().unwrap().log10_lo, 0.0);
        assert_eq!(h.len(), 31);
        assert_eq!(h[0].count, 2);
        assert_eq!(h[10].count, 1);
        assert_eq!(h[10].log10_lo, 1.0);
        assert_eq!(h[30].count, 1);
        assert_eq!(h[30].log10_lo, 3.0);
        assert!((h.iter().map(|b| b.fraction).sum::<f64>() - 1.0).abs() < 1e-12);
        // log10(2) = 0.301 → bin [0.3, 0.4)
        assert_eq!(log10_histogram(&[2])[0].log10_lo, 0.3);
        assert!(log10_histogram(&[]).is_empty());
    }

    #[test]
    fn fit_rows_as_csv() {
        let fit = FitResult {
            exponent: 0.65,
            intercept: 0.1,
            ses: 0.02,
            r2: 0.99,
            n_points: 10,
            regime: RegimeBounds::new(2.0, 3.4, Axis::Y).unwrap(),
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, Some("config_hash=abc"), &[FitRow::new("all", "candor", &fit)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# config_hash=abc\nunit,corpus,exponent,ses,ses_flag,r2,n_points,regime_lo,regime_hi\nall,candor,0.65,0.02,^,0.99,10,2.0,3.4\n"
        );
    }

    #[test]
    fn bm_rows_with_undefined_values() {
        let mut buf = Vec::new();
        let rows = [BmRow { label: "noun".into(), b: Some(-0.5), m: None, shuffled: true }];
        write_csv(&mut buf, None, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "label,b,m,shuffled\nnoun,-0.5,,true\n");
    }

    #[test]
    fn two_column() {
        let mut buf = Vec::new();
        write_two_column(&mut buf, None, ("t", "n_unique"), &[(1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t\tn_unique\n1\t1\n2\t1.5\n");
    }
}
