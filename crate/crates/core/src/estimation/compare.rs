use rayon::prelude::*;
use serde::Serialize;

use super::fit::{fit_model, FitResult, ModelSpec, OptimizerOptions};
use super::hypoexp::Hypoexp2;
use super::ObservationSet;
use crate::convolution::{MixtureRepresentation, ParamVector};
use crate::error::{Error, Result};
use crate::oracle::ks_distance;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub model: ModelSpec,
    pub estimates: Vec<f64>,
    pub log_likelihood: Option<f64>,
    pub aic: Option<f64>,
    pub ks_distance: Option<f64>,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ModelComparison {
    pub rows: Vec<ComparisonRow>,
}

impl ModelComparison {
    pub fn best(&self) -> Option<&ComparisonRow> {
        self.rows.first().filter(|r| r.error.is_none())
    }
}

fn fitted_ks(data: &ObservationSet, fit: &FitResult) -> Result<f64> {
    let report = match fit.model {
        ModelSpec::HypoXg { .. } => {
            let mixture = MixtureRepresentation::new(&ParamVector::new(fit.estimates.clone())?);
            ks_distance(data.values(), |t| mixture.cdf(t))?
        }
        ModelSpec::Hypoexp2 => {
            let h = Hypoexp2::new(fit.estimates[0], fit.estimates[1])?;
            ks_distance(data.values(), |t| h.cdf(t))?
        }
    };
    Ok(report.ks_distance)
}

fn row(data: &ObservationSet, model: ModelSpec, options: &OptimizerOptions) -> ComparisonRow {
    let outcome = fit_model(data, model, options).and_then(|fit| {
        let ks = fitted_ks(data, &fit)?;
        Ok((fit, ks))
    });
    match outcome {
        Ok((fit, ks)) => ComparisonRow {
            model,
            estimates: fit.estimates,
            log_likelihood: Some(fit.log_likelihood),
            aic: Some(fit.aic),
            ks_distance: Some(ks),
            converged: fit.converged,
            error: None,
        },
        Err(e) => ComparisonRow {
            model,
            estimates: Vec::new(),
            log_likelihood: None,
            aic: None,
            ks_distance: None,
            converged: false,
            error: Some(format!("{}: {e}", e.category().prefix())),
        },
    }
}

/// Fits every model and orders the rows by ascending AIC. Failed fits are
/// kept as rows with an error message and sorted last.
pub fn compare_models(
    data: &ObservationSet,
    specs: &[ModelSpec],
    options: &OptimizerOptions,
) -> Result<ModelComparison> {
    if specs.is_empty() {
        return Err(Error::NoModels);
    }
    let mut rows: Vec<ComparisonRow> = specs.par_iter().map(|&m| row(data, m, options)).collect();
    rows.sort_by(|a, b| {
        let key = |r: &ComparisonRow| r.aic.unwrap_or(f64::INFINITY);
        key(a).total_cmp(&key(b))
    });
    Ok(ModelComparison { rows })
}
