use thiserror::Error;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Data,
    Numeric,
    Budget,
}

impl Category {
    pub fn prefix(self) -> &'static str {
        match self {
            Category::Config => "config",
            Category::Data => "data",
            Category::Numeric => "numeric",
            Category::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("rates {first} and {second} are closer than the relative separation floor {floor:e}")]
    RatesTooClose { first: f64, second: f64, floor: f64 },

    #[error("MGF evaluated at t = {t}, outside its convergence region t < {limit}")]
    MgfDomain { t: f64, limit: f64 },

    #[error("hazard undefined at t = {t}: reliability underflowed to zero")]
    HazardUndefined { t: f64 },

    #[error("quadrature did not reach tolerance {tol:e} within {intervals} subintervals (error estimate {estimate:e})")]
    QuadratureBudget {
        tol: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("quantile bracket failed: F({upper}) = {value} is still below p = {p}")]
    QuantileBracket { p: f64, upper: f64, value: f64 },

    #[error("invalid observations: {0}")]
    InvalidData(String),

    #[error("degenerate data: all {0} observations are identical")]
    DegenerateData(usize),

    #[error("no models given for comparison")]
    NoModels,
}

impl Error {
    pub fn category(&self) -> Category {
        match self {
            Error::InvalidParameter(_) | Error::RatesTooClose { .. } | Error::NoModels => {
                Category::Config
            }
            Error::InvalidData(_) | Error::DegenerateData(_) => Category::Data,
            Error::MgfDomain { .. }
            | Error::HazardUndefined { .. }
            | Error::QuantileBracket { .. } => Category::Numeric,
            Error::QuadratureBudget { .. } => Category::Budget,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
