use crate::error::{Error, Result};

/// Groups consecutive eigenvalues whose gap is at most `gap_tol` and returns the 1-based
/// indices of the `target`-th group.
pub fn estimate_index_set(eigenvalues: &[f64], target: usize, gap_tol: f64) -> Result<Vec<usize>> {
    if eigenvalues.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::ConfigInvalid("eigenvalues must be non-increasing".into()));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in eigenvalues.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if eigenvalues[i - 1] - l <= gap_tol => g.push(i + 1),
            _ => groups.push(vec![i + 1]),
        }
    }
    if target == 0 || target > groups.len() {
        return Err(Error::RankOutOfRange {
            rank: target,
            clusters: groups.len(),
        });
    }
    Ok(groups.swap_remove(target - 1))
}

/// Median of a sample; `NaN` when empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
