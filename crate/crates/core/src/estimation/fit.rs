use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::hypoexp::Hypoexp2;
use super::likelihood::guarded_log_likelihood;
use super::simplex::{minimize, SimplexOptions, SimplexOutcome};
use super::ObservationSet;
use crate::convolution::ParamVector;
use crate::error::{Error, Result};
use crate::oracle::stream_rng;

/// Generator stream reserved for restart points.
const RESTART_STREAM: u64 = 0x05ee_df17;
const MAX_RESTART_DRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    /// Random starts besides the moment-matched one.
    pub restarts: usize,
    pub seed: u64,
    /// Evaluation budget per start.
    pub max_evaluations: usize,
    pub rtol: f64,
    pub lower: f64,
    pub upper: f64,
    /// Random starts are drawn log-uniformly within this factor of the
    /// moment-matched rate.
    pub restart_spread: f64,
    /// Initial simplex edge in log-rate units.
    pub initial_step: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 0,
            max_evaluations: 100_000,
            rtol: 1e-10,
            lower: 1e-8,
            upper: 1e8,
            restart_spread: 100.0,
            initial_step: 0.3,
        }
    }
}

impl OptimizerOptions {
    fn simplex(&self) -> SimplexOptions {
        SimplexOptions {
            max_evaluations: self.max_evaluations,
            rtol: self.rtol,
            initial_step: self.initial_step,
            ..SimplexOptions::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lower > 0.0 && self.upper > self.lower && self.upper.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "search box [{}, {}] is not a positive interval",
                self.lower, self.upper
            )));
        }
        if !(self.rtol > 0.0) || self.max_evaluations == 0 || !(self.restart_spread >= 1.0) {
            return Err(Error::InvalidParameter(
                "optimizer tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSpec {
    HypoXg { n: usize },
    Hypoexp2,
}

impl ModelSpec {
    pub fn parameter_count(&self) -> usize {
        match self {
            ModelSpec::HypoXg { n } => *n,
            ModelSpec::Hypoexp2 => 2,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::HypoXg { n } => write!(f, "hypoxg:{n}"),
            ModelSpec::Hypoexp2 => f.write_str("hypoexp2"),
        }
    }
}

/// Accepts `hypoxg:<n>` and `hypoexp2` (case-insensitive).
impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        if lower == "hypoexp2" || lower == "hypoexp:2" {
            return Ok(ModelSpec::Hypoexp2);
        }
        if let Some(n) = lower.strip_prefix("hypoxg:") {
            let n: usize = n.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad component count in model '{s}'"))
            })?;
            if n == 0 {
                return Err(Error::InvalidParameter(
                    "hypoxg needs at least one component".into(),
                ));
            }
            return Ok(ModelSpec::HypoXg { n });
        }
        Err(Error::InvalidParameter(format!(
            "unknown model '{s}'; expected hypoxg:<n> or hypoexp2"
        )))
    }
}

impl Serialize for ModelSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: ModelSpec,
    /// Fitted rates in ascending order.
    pub estimates: Vec<f64>,
    pub log_likelihood: f64,
    pub aic: f64,
    pub n_evaluations: usize,
    pub converged: bool,
    pub restarts_used: usize,
    /// Best-so-far log-likelihood of the winning start, one entry per
    /// simplex iteration.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

/// Rate at which XGamma has mean `m`: the positive root of
/// `m θ² + (m - 1) θ - 3 = 0`.
pub fn moment_matched_rate(mean: f64) -> f64 {
    let b = mean - 1.0;
    (-b + (b * b + 12.0 * mean).sqrt()) / (2.0 * mean)
}

fn check_data(data: &ObservationSet, parameters: usize) -> Result<()> {
    if data.len() < parameters {
        return Err(Error::InvalidData(format!(
            "{} observations cannot identify {parameters} rates",
            data.len()
        )));
    }
    if data.is_degenerate() {
        return Err(Error::DegenerateData(data.len()));
    }
    Ok(())
}

/// Spread around `center`: `center · (0.8 .. 1.2)` over `n` points.
fn spread_start(center: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![center];
    }
    (0..n)
        .map(|i| center * (0.8 + 0.4 * i as f64 / (n - 1) as f64))
        .collect()
}

struct MultiStart {
    winner: SimplexOutcome,
    total_evaluations: usize,
    restarts_used: usize,
}

/// Runs the simplex in log-rate space from the given start and from seeded
/// random restarts. `objective` maps rates to negative log-likelihood.
fn multistart<F>(
    objective: F,
    first: Vec<f64>,
    center: f64,
    options: &OptimizerOptions,
) -> MultiStart
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let n = first.len();
    let (lo, hi) = (options.lower.ln(), options.upper.ln());
    let in_log = |x: &[f64]| -> f64 {
        if x.iter().any(|&v| !(v >= lo && v <= hi)) {
            return f64::INFINITY;
        }
        let rates: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        objective(&rates)
    };

    let clamp = |r: f64| r.clamp(options.lower, options.upper).ln();
    let mut starts = vec![first.iter().map(|&r| clamp(r)).collect::<Vec<f64>>()];
    let mut rng = stream_rng(options.seed, RESTART_STREAM);
    let half_width = options.restart_spread.ln();
    for _ in 0..options.restarts {
        for _ in 0..MAX_RESTART_DRAWS {
            let x: Vec<f64> = (0..n)
                .map(|_| clamp(center * rng.gen_range(-half_width..=half_width).exp()))
                .collect();
            if in_log(&x).is_finite() {
                starts.push(x);
                break;
            }
        }
    }
    let restarts_used = starts.len() - 1;

    let outcomes: Vec<SimplexOutcome> = starts
        .par_iter()
        .map(|x0| minimize(&in_log, x0, &options.simplex()))
        .collect();
    let total_evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let winner = outcomes
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(_, o)| o)
        .expect("at least one start");
    MultiStart {
        winner,
        total_evaluations,
        restarts_used,
    }
}

fn finish(model: ModelSpec, run: MultiStart) -> FitResult {
    let mut estimates: Vec<f64> = run.winner.point.iter().map(|v| v.exp()).collect();
    estimates.sort_by(f64::total_cmp);
    let log_likelihood = -run.winner.value;
    FitResult {
        model,
        aic: 2.0 * model.parameter_count() as f64 - 2.0 * log_likelihood,
        estimates,
        log_likelihood,
        n_evaluations: run.total_evaluations,
        converged: run.winner.converged && log_likelihood.is_finite(),
        restarts_used: run.restarts_used,
        trace: run.winner.trace.iter().map(|v| -v).collect(),
    }
}

/// Maximum-likelihood HypoXG rates for `n` components.
pub fn fit_mle(data: &ObservationSet, n: usize, options: &OptimizerOptions) -> Result<FitResult> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "number of components must be >= 1".into(),
        ));
    }
    check_data(data, n)?;
    let center = moment_matched_rate(data.mean() / n as f64);
    fit_mle_from(data, &spread_start(center, n), options)
}

/// As [`fit_mle`], with an explicit first start. Random restarts are drawn
/// around the geometric mean of `start`.
pub fn fit_mle_from(
    data: &ObservationSet,
    start: &[f64],
    options: &OptimizerOptions,
) -> Result<FitResult> {
    let n = start.len();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "number of components must be >= 1".into(),
        ));
    }
    options.validate()?;
    check_data(data, n)?;
    ParamVector::new(start.to_vec())?;
    let center = (start.iter().map(|r| r.ln()).sum::<f64>() / n as f64).exp();
    let objective = |rates: &[f64]| match ParamVector::new(rates.to_vec()) {
        Ok(p) => -guarded_log_likelihood(&p, data),
        Err(_) => f64::INFINITY,
    };
    let run = multistart(objective, start.to_vec(), center, options);
    let result = finish(ModelSpec::HypoXg { n }, run);
    if !result.log_likelihood.is_finite() {
        return Err(Error::InvalidData(
            "no start produced a finite likelihood".into(),
        ));
    }
    Ok(result)
}

/// Maximum-likelihood rates for the two-stage hypoexponential.
pub fn fit_hypoexp2(data: &ObservationSet, options: &OptimizerOptions) -> Result<FitResult> {
    options.validate()?;
    check_data(data, 2)?;
    let center = 2.0 / data.mean();
    let objective = |rates: &[f64]| match Hypoexp2::new(rates[0], rates[1]) {
        Ok(h) => -h.log_likelihood(data),
        Err(_) => f64::INFINITY,
    };
    let run = multistart(objective, spread_start(center, 2), center, options);
    let result = finish(ModelSpec::Hypoexp2, run);
    if !result.log_likelihood.is_finite() {
        return Err(Error::InvalidData(
            "no start produced a finite likelihood".into(),
        ));
    }
    Ok(result)
}

pub fn fit_model(
    data: &ObservationSet,
    model: ModelSpec,
    options: &OptimizerOptions,
) -> Result<FitResult> {
    match model {
        ModelSpec::HypoXg { n } => fit_mle(data, n, options),
        ModelSpec::Hypoexp2 => fit_hypoexp2(data, options),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::XGammaParams;

    #[test]
    fn model_spec_round_trip() {
        for s in ["hypoxg:2", "hypoexp2", "hypoxg:1"] {
            assert_eq!(s.parse::<ModelSpec>().unwrap().to_string(), s);
        }
        assert_eq!(
            "HypoXG:3".parse::<ModelSpec>().unwrap(),
            ModelSpec::HypoXg { n: 3 }
        );
        assert!("hypoxg:0".parse::<ModelSpec>().is_err());
        assert!("weibull".parse::<ModelSpec>().is_err());
    }

    #[test]
    fn moment_match_inverts_mean() {
        for theta in [0.05, 1.0, 7.0] {
            let m = XGammaParams::new(theta).unwrap().mean();
            assert!((moment_matched_rate(m) - theta).abs() < 1e-12 * theta.max(1.0));
        }
    }

    #[test]
    fn degenerate_and_short_data_rejected() {
        let same = ObservationSet::new(vec![3.0; 5], "x").unwrap();
        assert_eq!(
            fit_mle(&same, 1, &OptimizerOptions::default()),
            Err(Error::DegenerateData(5))
        );
        let short = ObservationSet::new(vec![1.0, 2.0], "x").unwrap();
        assert!(matches!(
            fit_mle(&short, 3, &OptimizerOptions::default()),
            Err(Error::InvalidData(_))
        ));
        assert!(fit_mle(&short, 0, &OptimizerOptions::default()).is_err());
    }

    #[test]
    fn small_fit_is_deterministic_with_monotone_trace() {
        let data = ObservationSet::new(vec![0.4, 1.1, 1.9, 2.5, 3.3, 0.8, 5.1], "x").unwrap();
        let a = fit_mle(&data, 2, &OptimizerOptions::default()).unwrap();
        let b = fit_mle(&data, 2, &OptimizerOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.converged);
        assert!(a.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!((a.aic - (4.0 - 2.0 * a.log_likelihood)).abs() < 1e-12);
        assert!(a.estimates[0] <= a.estimates[1]);
    }
}
