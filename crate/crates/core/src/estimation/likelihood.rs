use rayon::prelude::*;

use super::ObservationSet;
use crate::convolution::{MixtureRepresentation, ParamVector};

/// Observations per parallel block; blocks are summed in order so the total
/// does not depend on the thread count.
const BLOCK: usize = 2048;

/// Above this cancellation ratio the fit objective treats a density value as
/// unresolved and rejects the candidate.
pub const CANCELLATION_LIMIT: f64 = 1e16;

pub(crate) fn blocked_sum<F>(values: &[f64], term: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    if values.len() <= BLOCK {
        return values.iter().map(|&t| term(t)).sum();
    }
    let partial: Vec<f64> = values
        .par_chunks(BLOCK)
        .map(|chunk| chunk.iter().map(|&t| term(t)).sum::<f64>())
        .collect();
    partial.iter().sum()
}

fn ln_density(value: f64) -> f64 {
    if value > 0.0 {
        value.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `Σ_u ln f(t_u)`; negative infinity when any density is not positive.
pub fn log_likelihood(params: &ParamVector, data: &ObservationSet) -> f64 {
    let mixture = MixtureRepresentation::new(params);
    blocked_sum(data.values(), |t| ln_density(mixture.pdf(t)))
}

/// Log-likelihood for the optimizer: additionally negative infinity when a
/// density value is lost to cancellation.
pub(crate) fn guarded_log_likelihood(params: &ParamVector, data: &ObservationSet) -> f64 {
    let mixture = MixtureRepresentation::new(params);
    blocked_sum(data.values(), |t| {
        let (value, ratio) = mixture.pdf_with_cancellation(t);
        if ratio > CANCELLATION_LIMIT {
            f64::NEG_INFINITY
        } else {
            ln_density(value)
        }
    })
}

/// Central-difference gradient with step `h_p = rel_step · max(|x_p|, 1e-8)`.
pub fn central_gradient<F>(f: F, x: &[f64], rel_step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    (0..x.len())
        .map(|p| {
            let h = rel_step * x[p].abs().max(1e-8);
            partial(&f, x, p, h)
        })
        .collect()
}

/// Richardson-extrapolated central differences, `(4 D(h/2) - D(h)) / 3`.
pub fn richardson_gradient<F>(f: F, x: &[f64], rel_step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    (0..x.len())
        .map(|p| {
            let h = rel_step * x[p].abs().max(1e-8);
            (4.0 * partial(&f, x, p, 0.5 * h) - partial(&f, x, p, h)) / 3.0
        })
        .collect()
}

fn partial<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], p: usize, h: f64) -> f64 {
    let mut up = x.to_vec();
    let mut down = x.to_vec();
    up[p] += h;
    down[p] -= h;
    (f(&up) - f(&down)) / (up[p] - down[p])
}

pub const SCORE_STEP: f64 = 1e-5;

/// `∂l/∂θ_p` by Richardson-extrapolated central differences. Components
/// come back NaN if a perturbed vector leaves the valid parameter region.
pub fn score_check(params: &ParamVector, data: &ObservationSet) -> Vec<f64> {
    richardson_gradient(
        |x| match ParamVector::new(x.to_vec()) {
            Ok(p) => log_likelihood(&p, data),
            Err(_) => f64::NAN,
        },
        params.rates(),
        SCORE_STEP,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::XGammaParams;

    #[test]
    fn single_xgamma_observation() {
        let p = ParamVector::new(vec![1.0]).unwrap();
        let d = ObservationSet::new(vec![2.0], "x").unwrap();
        let l = log_likelihood(&p, &d);
        assert!((l - (1.5f64.ln() - 2.0)).abs() < 1e-14);
        assert!((l - XGammaParams::new(1.0).unwrap().pdf(2.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn additive_over_observations() {
        let p = ParamVector::new(vec![1.0, 2.0]).unwrap();
        let one = log_likelihood(&p, &ObservationSet::new(vec![1.0], "x").unwrap());
        let two = log_likelihood(&p, &ObservationSet::new(vec![1.0, 1.0], "x").unwrap());
        assert!((two - 2.0 * one).abs() < 1e-14);
    }

    #[test]
    fn blocked_sum_matches_serial_reverse_order() {
        let p = ParamVector::new(vec![0.7, 1.9, 4.0]).unwrap();
        let values: Vec<f64> = (1..=5000).map(|i| i as f64 * 1e-3).collect();
        let d = ObservationSet::new(values.clone(), "grid").unwrap();
        let m = MixtureRepresentation::new(&p);
        let serial: f64 = values.iter().rev().map(|&t| m.pdf(t).ln()).sum();
        let l = log_likelihood(&p, &d);
        assert!(((l - serial) / serial).abs() < 1e-10);
    }

    #[test]
    fn guard_agrees_on_well_separated_rates() {
        let p = ParamVector::new(vec![0.5, 3.0]).unwrap();
        let d = ObservationSet::new(vec![0.3, 1.0, 4.0], "x").unwrap();
        assert_eq!(log_likelihood(&p, &d), guarded_log_likelihood(&p, &d));
    }

    #[test]
    fn gradients_of_a_quadratic() {
        let f = |x: &[f64]| x[0] * x[0] * 3.0 + x[0] * x[1] - x[1].powi(3);
        let g = richardson_gradient(f, &[1.5, -2.0], 1e-5);
        assert!((g[0] - (9.0 - 2.0)).abs() < 1e-8);
        assert!((g[1] - (1.5 - 12.0)).abs() < 1e-8);
        let c = central_gradient(f, &[1.5, -2.0], 1e-4);
        assert!((c[1] - g[1]).abs() < 1e-6);
    }
}
