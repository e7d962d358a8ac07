//! Log-log least squares.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PowerFit {
    pub slope: f64,
    /// `C` in `y = C x^slope`.
    pub constant: f64,
    pub points: usize,
}

/// Fits `log y = slope log x + log C` over the pairs with both entries positive.
/// Returns `None` with fewer than two usable pairs or no spread in `x`.
pub fn power_fit(pairs: &[(f64, f64)]) -> Option<PowerFit> {
    let logs: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = logs.len();
    if n < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(PowerFit {
        slope,
        constant: (my - slope * mx).exp(),
        points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let pairs: Vec<(f64, f64)> = [0.1, 0.2, 0.5, 1.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        let fit = power_fit(&pairs).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.constant - 3.0).abs() < 1e-12);
    }

    #[test]
    fn skips_non_positive_pairs() {
        let fit = power_fit(&[(0.0, 0.0), (1.0, 2.0), (2.0, 4.0)]).unwrap();
        assert_eq!(fit.points, 2);
        assert!(power_fit(&[(0.0, 0.0), (1.0, 2.0)]).is_none());
        assert!(power_fit(&[(1.0, 1.0), (1.0, 2.0)]).is_none());
    }
}
