//! Small numeric helpers shared across modules.

/// Neumaier-compensated running sum. The rounding error of the total is
/// bounded by roughly `2 * eps * sum |x_i|`, independent of the term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Bound on the accumulated rounding error.
    pub fn rounding_bound(&self) -> f64 {
        4.0 * f64::EPSILON * self.abs
    }
}

/// `1, 2, 4, ...` up to `k_max`, with `k_max` itself appended when it is not
/// a power of two.
pub fn dyadic_checkpoints(k_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 1u64;
    while k <= k_max {
        out.push(k);
        match k.checked_mul(2) {
            Some(next) => k = next,
            None => break,
        }
    }
    if out.last() != Some(&k_max) && k_max > 0 {
        out.push(k_max);
    }
    out
}

/// Least-squares line through `(x, y)`: returns `(slope, rms_residual)`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - icept - slope * p.0).powi(2))
        .sum();
    Some((slope, (rss / n).sqrt()))
}
