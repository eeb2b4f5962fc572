//! Maximum-likelihood fitting of HypoXG rates, a two-stage hypoexponential
//! baseline and AIC-based model comparison.

mod compare;
mod fit;
mod hypoexp;
mod likelihood;
mod observations;
pub mod simplex;

pub use compare::{compare_models, ComparisonRow, ModelComparison};
pub use fit::{
    fit_hypoexp2, fit_mle, fit_mle_from, fit_model, moment_matched_rate, FitResult, ModelSpec,
    OptimizerOptions,
};
pub use hypoexp::{Hypoexp2, CONFLUENT_SWITCH};
pub use likelihood::{
    central_gradient, log_likelihood, richardson_gradient, score_check, CANCELLATION_LIMIT,
    SCORE_STEP,
};
pub use observations::{ball_bearing_data, ObservationSet, BALL_BEARING_LIFETIMES};
