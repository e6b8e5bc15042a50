//! Across-run statistics of node-averaged regret curves.

/// Normal-approximation multiplier for a 95% interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRecord {
    pub algorithm: String,
    pub alpha: f64,
    pub sweep_value: f64,
    pub t: u64,
    pub mean_regret: f64,
    pub ci_half_width: f64,
}

/// Mean and `1.96 * sd / sqrt(R)` with the `R - 1` sample deviation.
///
/// Sums run in slice order so recomputation from a CSV reproduces the same
/// bits. One value, or all values equal, gives a zero half-width.
pub fn mean_and_half_width(values: &[f64]) -> (f64, f64) {
    assert!(!values.is_empty(), "summary needs at least one run");
    let r = values.len() as f64;
    if values.iter().all(|&v| v == values[0]) {
        return (values[0], 0.0);
    }
    let mean = values.iter().sum::<f64>() / r;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (r - 1.0)).sqrt();
    (mean, Z_95 * sd / r.sqrt())
}

/// One record per grid point from per-run curves sampled on `grid`.
pub fn summarize(
    algorithm: &str,
    alpha: f64,
    sweep_value: f64,
    grid: &[u64],
    curves: &[Vec<f64>],
) -> Vec<SummaryRecord> {
    grid.iter()
        .enumerate()
        .map(|(g, &t)| {
            let column: Vec<f64> = curves.iter().map(|c| c[g]).collect();
            let (mean_regret, ci_half_width) = mean_and_half_width(&column);
            SummaryRecord {
                algorithm: algorithm.to_string(),
                alpha,
                sweep_value,
                t,
                mean_regret,
                ci_half_width,
            }
        })
        .collect()
}
