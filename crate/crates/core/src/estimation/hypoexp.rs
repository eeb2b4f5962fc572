use serde::Serialize;

use super::likelihood::blocked_sum;
use super::ObservationSet;
use crate::distributions::UNDERFLOW_ARGUMENT;
use crate::error::{Error, Result};

/// Relative rate gap below which the Erlang(2) limit is used.
pub const CONFLUENT_SWITCH: f64 = 1e-7;

/// Sum of two independent exponentials with rates `α_1, α_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hypoexp2 {
    first: f64,
    second: f64,
}

impl Hypoexp2 {
    pub fn new(first: f64, second: f64) -> Result<Self> {
        for r in [first, second] {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "rate must be positive and finite, got {r}"
                )));
            }
        }
        Ok(Self { first, second })
    }

    pub fn rates(&self) -> [f64; 2] {
        [self.first, self.second]
    }

    fn ordered(&self) -> (f64, f64) {
        (self.first.min(self.second), self.first.max(self.second))
    }

    pub fn is_confluent(&self) -> bool {
        let (lo, hi) = self.ordered();
        (hi - lo) / (0.5 * (hi + lo)) < CONFLUENT_SWITCH
    }

    /// `α_1 α_2 e^{-α_lo t} (1 - e^{-Δt}) / Δ`, with `Δ = α_hi - α_lo`.
    pub fn pdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let (lo, hi) = self.ordered();
        if lo * t > UNDERFLOW_ARGUMENT {
            return 0.0;
        }
        if self.is_confluent() {
            let a = 0.5 * (lo + hi);
            return a * a * t * (-a * t).exp();
        }
        let gap = hi - lo;
        lo * hi * (-lo * t).exp() * (-(-gap * t).exp_m1()) / gap
    }

    pub fn reliability(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        let (lo, hi) = self.ordered();
        if lo * t > UNDERFLOW_ARGUMENT {
            return 0.0;
        }
        if self.is_confluent() {
            let a = 0.5 * (lo + hi);
            return (-a * t).exp() * (1.0 + a * t);
        }
        let gap = hi - lo;
        (-lo * t).exp() * (1.0 + lo * (-(-gap * t).exp_m1()) / gap)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        1.0 - self.reliability(t)
    }

    pub fn mean(&self) -> f64 {
        1.0 / self.first + 1.0 / self.second
    }

    pub fn log_likelihood(&self, data: &ObservationSet) -> f64 {
        blocked_sum(data.values(), |t| {
            let f = self.pdf(t);
            if f > 0.0 {
                f.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
    }
}
