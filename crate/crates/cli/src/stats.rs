//! Box-plot statistics.

/// Quantile by linear interpolation between order statistics
/// (`h = (n−1)p`). `sorted` must be ascending and nonempty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub median: f64,
    pub lower_quartile: f64,
    pub upper_quartile: f64,
    /// Values more than 1.5 interquartile ranges outside the quartiles.
    pub outliers: usize,
}

/// `None` for an empty sample. NaNs are ignored.
pub fn summarize(values: &[f64]) -> Option<Summary> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let (q1, q3) = (quantile(&v, 0.25), quantile(&v, 0.75));
    let fence = 1.5 * (q3 - q1);
    Some(Summary {
        count: v.len(),
        median: quantile(&v, 0.5),
        lower_quartile: q1,
        upper_quartile: q3,
        outliers: v.iter().filter(|&&x| x > q3 + fence || x < q1 - fence).count(),
    })
}
