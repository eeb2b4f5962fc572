//! The sum `S_n = X_1 + ... + X_n` of independent XGamma variables with
//! distinct rates, represented as a signed mixture of Erlang components.

mod mixture;
mod residues;

pub use mixture::{build_mixture, MixtureComponent, MixtureRepresentation};
pub use residues::{compute_residues, ResidueTriple};

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum relative gap `min |θ_i - θ_j| / max θ` accepted by [`ParamVector`].
pub const SEPARATION_FLOOR: f64 = 1e-6;

/// Ordered, pairwise-distinct positive rates `(θ_1, ..., θ_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamVector {
    rates: Vec<f64>,
    #[serde(skip)]
    separation: f64,
}

impl ParamVector {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one rate is required".into(),
            ));
        }
        if let Some(&bad) = rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "rates must be positive and finite, got {bad}"
            )));
        }
        let max = rates.iter().cloned().fold(0.0, f64::max);
        let mut separation = f64::INFINITY;
        for (i, &a) in rates.iter().enumerate() {
            for &b in &rates[i + 1..] {
                let gap = (a - b).abs();
                if gap < SEPARATION_FLOOR * max {
                    return Err(Error::RatesTooClose {
                        first: a,
                        second: b,
                        floor: SEPARATION_FLOOR,
                    });
                }
                separation = separation.min(gap);
            }
        }
        Ok(Self { rates, separation })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Minimum pairwise `|θ_i - θ_j|`; infinite for a single rate.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn min_rate(&self) -> f64 {
        self.rates.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_rate(&self) -> f64 {
        self.rates.iter().cloned().fold(0.0, f64::max)
    }
}
