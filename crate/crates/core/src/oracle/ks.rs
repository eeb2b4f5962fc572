use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcdfReport {
    pub ks_distance: f64,
    pub n_samples: usize,
    pub max_deviation_location: f64,
}

/// One-sample Kolmogorov–Smirnov distance `sup_t |ECDF(t) - F(t)|`, taken
/// over the sample points and their left limits.
pub fn ks_distance<F>(values: &[f64], cdf: F) -> Result<EcdfReport>
where
    F: Fn(f64) -> f64,
{
    if values.is_empty() {
        return Err(Error::InvalidData(
            "KS distance needs at least one sample".into(),
        ));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut report = EcdfReport {
        ks_distance: 0.0,
        n_samples: sorted.len(),
        max_deviation_location: sorted[0],
    };
    for (i, &t) in sorted.iter().enumerate() {
        let f = cdf(t);
        let above = ((i + 1) as f64 / n - f).abs();
        let below = (i as f64 / n - f).abs();
        let d = above.max(below);
        if d > report.ks_distance {
            report.ks_distance = d;
            report.max_deviation_location = t;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_at_median() {
        let r = ks_distance(&[1.0], |_| 0.5).unwrap();
        assert_eq!(r.ks_distance, 0.5);
        assert_eq!(r.n_samples, 1);
        assert_eq!(r.max_deviation_location, 1.0);
    }

    #[test]
    fn uniform_grid_against_uniform_cdf() {
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let r = ks_distance(&xs, |t| t.clamp(0.0, 1.0)).unwrap();
        assert!((r.ks_distance - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn order_does_not_matter() {
        let a = ks_distance(&[3.0, 1.0, 2.0], |t| t / 4.0).unwrap();
        let b = ks_distance(&[1.0, 2.0, 3.0], |t| t / 4.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(ks_distance(&[], |t| t).is_err());
    }
}
