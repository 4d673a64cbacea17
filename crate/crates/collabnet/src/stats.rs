// SPDX-License-Identifier: Apache-2.0

//! Correlation analysis with significance stars, quantile-binned trend
//! tables, and median binarization of a continuous outcome.
//!
//! Significance stars follow the usual convention: `***` for p < 0.001,
//! `**` for p < 0.01, `*` for p < 0.05.

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::fmt::format_significant;
use crate::measures::{MeasureRow, NodeMeasures};
use crate::model::{combined_visit_frequency, log_visit_frequency, Dataset};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("zero variance in input")]
    ZeroVariance,
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },
    #[error("input lengths differ: {x} vs {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("need at least {bins} samples for {bins} bins, got {got}")]
    TooFewForBins { got: usize, bins: usize },
    #[error("no rows with both measures and success values")]
    NoJoinedRows,
    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

/// Significance stars for a p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stars {
    None,
    One,
    Two,
    Three,
}

impl fmt::Display for Stars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stars::None => "",
            Stars::One => "*",
            Stars::Two => "**",
            Stars::Three => "***",
        };
        f.write_str(s)
    }
}

/// `***` iff p < 0.001, `**` iff 0.001 <= p < 0.01, `*` iff 0.01 <= p < 0.05.
pub fn stars_for_p(p: f64) -> Stars {
    if p < 0.001 {
        Stars::Three
    } else if p < 0.01 {
        Stars::Two
    } else if p < 0.05 {
        Stars::One
    } else {
        Stars::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub p_value: f64,
    pub stars: Stars,
    pub n: usize,
}

// Lanczos approximation, g = 7, n = 9.
fn ln_gamma(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection formula.
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 3e-15;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

// Regularized incomplete beta I_x(a, b).
fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_bt = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let bt = ln_bt.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * beta_cf(a, b, x) / a
    } else {
        1.0 - bt * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    reg_inc_beta(df / 2.0, 0.5, df / (df + t * t)).clamp(0.0, 1.0)
}

/// Sample Pearson correlation with a two-sided significance test via
/// t = r sqrt((n-2)/(1-r^2)) against Student-t with n-2 degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { x: x.len(), y: y.len() });
    }
    let n = x.len();
    if n < 3 {
        return Err(StatsError::TooFewSamples { got: n, min: 3 });
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mean_x;
        let dy = b - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let denom = 1.0 - r * r;
    let p = if denom <= 0.0 {
        0.0
    } else {
        student_t_two_sided_p(r * (df / denom).sqrt(), df)
    };
    Ok(CorrelationResult {
        r,
        p_value: p,
        stars: stars_for_p(p),
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendBin {
    pub mean_x: f64,
    pub mean_y: f64,
    pub count: usize,
}

/// Per-quantile-bin means of a predictor and a response.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendTable {
    pub bins: Vec<TrendBin>,
}

/// Sorts by x (stable) and partitions into `n_bins` contiguous equal-count
/// groups; the first n mod n_bins groups take one extra element.
pub fn quantile_trend(x: &[f64], y: &[f64], n_bins: usize) -> Result<TrendTable, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch { x: x.len(), y: y.len() });
    }
    let n = x.len();
    if n_bins == 0 || n < n_bins {
        return Err(StatsError::TooFewForBins { got: n, bins: n_bins });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(std::cmp::Ordering::Equal));

    let base = n / n_bins;
    let extra = n % n_bins;
    let mut bins = Vec::with_capacity(n_bins);
    let mut start = 0usize;
    for b in 0..n_bins {
        let size = base + usize::from(b < extra);
        let members = &order[start..start + size];
        let mean_x = members.iter().map(|&i| x[i]).sum::<f64>() / size as f64;
        let mean_y = members.iter().map(|&i| y[i]).sum::<f64>() / size as f64;
        bins.push(TrendBin {
            mean_x,
            mean_y,
            count: size,
        });
        start += size;
    }
    Ok(TrendTable { bins })
}

/// Binary hi/lo label from comparison against the sample median.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HiLo {
    Lo,
    Hi,
}

impl fmt::Display for HiLo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HiLo::Lo => "lo",
            HiLo::Hi => "hi",
        })
    }
}

/// Labels each value hi iff it exceeds the lower-interpolation sample median;
/// values tied with the median go lo.
pub fn median_binarize(values: &[f64]) -> Vec<HiLo> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let median = sorted[(sorted.len() - 1) / 2];
    values
        .iter()
        .map(|&v| if v > median { HiLo::Hi } else { HiLo::Lo })
        .collect()
}

/// One analysis row: the measure vector joined with the success proxies.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRow {
    pub group_id: String,
    pub measures: NodeMeasures,
    pub pagerank: u8,
    pub visit_frequency: f64,
    pub log_visit_frequency: f64,
}

/// Inner-joins measure rows with success records; groups without a success
/// record are dropped here, not zero-filled.
pub fn join_success(rows: &[MeasureRow], ds: &Dataset) -> Result<Vec<AnalysisRow>, StatsError> {
    let mut joined = Vec::new();
    for row in rows {
        let Some(rec) = ds.success.get(&row.group_id) else {
            continue;
        };
        let freq = combined_visit_frequency(rec)?;
        joined.push(AnalysisRow {
            group_id: row.group_id.clone(),
            measures: row.measures,
            pagerank: rec.pagerank,
            visit_frequency: freq,
            log_visit_frequency: log_visit_frequency(freq)?,
        });
    }
    if joined.is_empty() {
        return Err(StatsError::NoJoinedRows);
    }
    Ok(joined)
}

/// Named column accessor: (label, value extractor).
pub type Column<T> = (&'static str, fn(&T) -> f64);

/// Measure columns in correlation-table row order.
pub const MEASURE_COLUMNS: [Column<NodeMeasures>; 6] = [
    ("clustering", |m| m.clustering),
    ("eigenvector", |m| m.eigenvector),
    ("betweenness", |m| m.betweenness),
    ("avg_neighbor_degree", |m| m.avg_neighbor_degree),
    ("degree_centrality", |m| m.degree_centrality),
    ("closeness", |m| m.closeness),
];

/// Success-proxy columns in correlation-table column order.
pub const PROXY_COLUMNS: [Column<AnalysisRow>; 3] = [
    ("pagerank", |r| r.pagerank as f64),
    ("visit_frequency", |r| r.visit_frequency),
    ("log_visit_frequency", |r| r.log_visit_frequency),
];

/// 6 measures x 3 proxies of correlation results in fixed layout.
#[derive(Debug, Clone)]
pub struct CorrelationTable {
    /// cells[measure][proxy], ordered as the column constants.
    pub cells: Vec<Vec<CorrelationResult>>,
}

pub fn correlation_table(rows: &[AnalysisRow]) -> Result<CorrelationTable, StatsError> {
    let mut cells = Vec::with_capacity(MEASURE_COLUMNS.len());
    for (_, measure) in MEASURE_COLUMNS {
        let x: Vec<f64> = rows.iter().map(|r| measure(&r.measures)).collect();
        let mut row = Vec::with_capacity(PROXY_COLUMNS.len());
        for (_, proxy) in PROXY_COLUMNS {
            let y: Vec<f64> = rows.iter().map(proxy).collect();
            row.push(pearson(&x, &y)?);
        }
        cells.push(row);
    }
    Ok(CorrelationTable { cells })
}

/// Writes the correlation table as CSV: rows are measures, columns are
/// proxies, cells are `r` with significance stars appended.
pub fn write_correlation_csv(table: &CorrelationTable, path: &Path) -> Result<(), StatsError> {
    let csv_err = |source| StatsError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = vec!["measure"];
    header.extend(PROXY_COLUMNS.iter().map(|(name, _)| *name));
    w.write_record(&header).map_err(csv_err)?;
    for (i, (name, _)) in MEASURE_COLUMNS.iter().enumerate() {
        let mut rec = vec![name.to_string()];
        for cell in &table.cells[i] {
            rec.push(format!("{:.6}{}", cell.r, cell.stars));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|source| StatsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Writes one trend table as CSV with header `mean_x,mean_y,count`.
pub fn write_trend_csv(table: &TrendTable, path: &Path) -> Result<(), StatsError> {
    let csv_err = |source| StatsError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["mean_x", "mean_y", "count"]).map_err(csv_err)?;
    for bin in &table.bins {
        w.write_record([
            format_significant(bin.mean_x, 12),
            format_significant(bin.mean_y, 12),
            bin.count.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|source| StatsError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

/// Renders a minimal scatter of bin means as a standalone SVG document.
pub fn trend_svg(table: &TrendTable, x_label: &str, y_label: &str) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    let xs: Vec<f64> = table.bins.iter().map(|b| b.mean_x).collect();
    let ys: Vec<f64> = table.bins.iter().map(|b| b.mean_y).collect();
    let lo = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (x0, x1) = (lo(&xs), hi(&xs));
    let (y0, y1) = (lo(&ys), hi(&ys));
    let sx = |x: f64| {
        if x1 > x0 {
            PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD)
        } else {
            W / 2.0
        }
    };
    let sy = |y: f64| {
        if y1 > y0 {
            H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD)
        } else {
            H / 2.0
        }
    };
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "  <line x1=\"{PAD}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - PAD,
        W - PAD,
        H - PAD
    ));
    svg.push_str(&format!(
        "  <line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - PAD
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n",
        W / 2.0,
        H - 12.0,
        x_label
    ));
    svg.push_str(&format!(
        "  <text x=\"14\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        y_label
    ));
    for bin in &table.bins {
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"steelblue\"/>\n",
            sx(bin.mean_x),
            sy(bin.mean_y)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_identical_vectors() {
        let x = [1.0, 2.0, 5.0, 9.0];
        let res = pearson(&x, &x).unwrap();
        assert!((res.r - 1.0).abs() < 1e-15);
        assert!(res.p_value < 1e-10);
    }

    #[test]
    fn pearson_hand_computed_case() {
        let res = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 2.0]).unwrap();
        assert!((res.r - 3f64.sqrt() / 2.0).abs() < 1e-12);
        // df = 1: the t CDF is Cauchy, so p = 2*(1 - (1/2 + atan(sqrt(3))/pi)) = 1/3.
        assert!((res.p_value - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn pearson_perfect_anticorrelation() {
        let res = pearson(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]).unwrap();
        assert!((res.r + 1.0).abs() < 1e-12);
        assert!(res.p_value < 1e-10);
        assert_eq!(res.stars, Stars::Three);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::ZeroVariance)
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0]),
            Err(StatsError::TooFewSamples { .. })
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(StatsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn t_distribution_closed_forms() {
        // df = 2: p = 1 - t/sqrt(2 + t^2).
        for t in [0.5f64, 1.0, 2.0, 5.0] {
            let expected = 1.0 - t / (2.0 + t * t).sqrt();
            assert!((student_t_two_sided_p(t, 2.0) - expected).abs() < 1e-12);
        }
        // df = 1: Cauchy.
        for t in [0.3f64, 1.0, 3.0] {
            let expected = 1.0 - 2.0 * t.atan() / std::f64::consts::PI;
            assert!((student_t_two_sided_p(t, 1.0) - expected).abs() < 1e-12);
        }
        // Symmetric in t.
        assert_eq!(
            student_t_two_sided_p(1.7, 9.0),
            student_t_two_sided_p(-1.7, 9.0)
        );
        // Critical values from the standard t table (alpha = 0.05).
        assert!((student_t_two_sided_p(2.228, 10.0) - 0.05).abs() < 2e-4);
        assert!((student_t_two_sided_p(2.042, 30.0) - 0.05).abs() < 2e-4);
        assert!((student_t_two_sided_p(1.96, 1000.0) - 0.0503).abs() < 2e-4);
    }

    #[test]
    fn correlation_table_propagates_zero_variance() {
        use crate::measures::NodeMeasures;
        let rows: Vec<AnalysisRow> = (0..10)
            .map(|i| AnalysisRow {
                group_id: format!("g{i}"),
                measures: NodeMeasures {
                    degree: i,
                    degree_centrality: i as f64 / 10.0,
                    avg_neighbor_degree: i as f64,
                    closeness: i as f64 / 20.0,
                    betweenness: i as f64 / 30.0,
                    eigenvector: i as f64 / 40.0,
                    clustering: 0.0, // constant column
                    group_size: 3,
                },
                pagerank: (i % 11) as u8,
                visit_frequency: i as f64,
                log_visit_frequency: (1.0 + i as f64).ln(),
            })
            .collect();
        assert!(matches!(
            correlation_table(&rows),
            Err(StatsError::ZeroVariance)
        ));
    }

    #[test]
    fn stars_thresholds() {
        assert_eq!(stars_for_p(0.05), Stars::None);
        assert_eq!(stars_for_p(0.0499), Stars::One);
        assert_eq!(stars_for_p(0.01), Stars::One);
        assert_eq!(stars_for_p(0.0099), Stars::Two);
        assert_eq!(stars_for_p(0.001), Stars::Two);
        assert_eq!(stars_for_p(0.0009), Stars::Three);
    }

    #[test]
    fn quantile_trend_two_bins() {
        let x: Vec<f64> = (1..=10).map(|v| v as f64).collect();
        let t = quantile_trend(&x, &x, 2).unwrap();
        assert_eq!(
            t.bins,
            vec![
                TrendBin { mean_x: 3.0, mean_y: 3.0, count: 5 },
                TrendBin { mean_x: 8.0, mean_y: 8.0, count: 5 },
            ]
        );
    }

    #[test]
    fn quantile_trend_parabola_has_interior_minimum() {
        let x: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let y: Vec<f64> = x.iter().map(|v| (v - 0.25) * (v - 0.25)).collect();
        let t = quantile_trend(&x, &y, 10).unwrap();
        let min_bin = t
            .bins
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.mean_y.partial_cmp(&b.1.mean_y).unwrap())
            .unwrap()
            .0;
        assert!(min_bin > 0 && min_bin < 9, "minimum at bin {min_bin}");
    }

    #[test]
    fn quantile_trend_constant_response() {
        let x: Vec<f64> = (0..12).map(|v| v as f64).collect();
        let y = vec![7.0; 12];
        let t = quantile_trend(&x, &y, 3).unwrap();
        assert!(t.bins.iter().all(|b| b.mean_y == 7.0));
        assert!(matches!(
            quantile_trend(&x[..2], &y[..2], 3),
            Err(StatsError::TooFewForBins { .. })
        ));
    }

    #[test]
    fn median_binarize_cases() {
        use HiLo::*;
        assert_eq!(
            median_binarize(&[1.0, 2.0, 3.0, 4.0]),
            vec![Lo, Lo, Hi, Hi]
        );
        assert_eq!(
            median_binarize(&[1.0, 2.0, 2.0, 5.0]),
            vec![Lo, Lo, Lo, Hi]
        );
        assert_eq!(median_binarize(&[3.0, 3.0, 3.0]), vec![Lo, Lo, Lo]);
    }
}
