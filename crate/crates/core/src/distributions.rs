//! Exponential, Erlang and XGamma scalar primitives.
//!
//! All functions take the rate parameterization (`θ`, units 1/time). Densities
//! are zero for negative arguments. Once `θt` exceeds [`UNDERFLOW_ARGUMENT`]
//! the exponential factor is treated as zero, so densities return 0 and
//! distribution functions return 1.

use rand::Rng;

use crate::error::{Error, Result};

/// Largest `θt` for which `e^{-θt}` is evaluated.
pub const UNDERFLOW_ARGUMENT: f64 = 700.0;

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "rate must be positive and finite, got {rate}"
        )))
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Erlang(shape, rate): the sum of `shape` i.i.d. Exponential(rate) stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErlangParams {
    shape: u32,
    rate: f64,
}

impl ErlangParams {
    pub fn new(shape: u32, rate: f64) -> Result<Self> {
        if shape == 0 {
            return Err(Error::InvalidParameter("Erlang shape must be >= 1".into()));
        }
        check_rate(rate)?;
        Ok(Self { shape, rate })
    }

    pub fn shape(&self) -> u32 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let x = self.rate * t;
        if x > UNDERFLOW_ARGUMENT {
            return 0.0;
        }
        x.powi(self.shape as i32 - 1) * self.rate * (-x).exp() / factorial(self.shape - 1)
    }

    /// Poisson tail sum `e^{-x} Σ_{j<n} x^j/j!`, built term by term.
    pub fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        let x = self.rate * t;
        if x > UNDERFLOW_ARGUMENT {
            return 0.0;
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..self.shape {
            term *= x / j as f64;
            sum += term;
        }
        (-x).exp() * sum
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let x = self.rate * t;
        if x > UNDERFLOW_ARGUMENT {
            return 1.0;
        }
        if x < 1.0 {
            // e^{-x} Σ_{j>=n} x^j/j! keeps full relative precision near the origin
            let mut term = x.powi(self.shape as i32) / factorial(self.shape);
            let mut sum = term;
            let mut j = self.shape;
            while term > 1e-17 * sum {
                j += 1;
                term *= x / j as f64;
                sum += term;
            }
            return ((-x).exp() * sum).min(1.0);
        }
        (1.0 - self.survival(t)).clamp(0.0, 1.0)
    }

    /// `θ^n / (θ - t)^n`, defined for `t < θ`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        if !(t < self.rate) {
            return Err(Error::MgfDomain {
                t,
                limit: self.rate,
            });
        }
        Ok((self.rate / (self.rate - t)).powi(self.shape as i32))
    }

    /// Laplace transform of the density, `θ^n / (θ + s)^n` for `s > -θ`.
    pub fn laplace_transform(&self, s: f64) -> Result<f64> {
        self.mgf(-s).map_err(|_| Error::MgfDomain {
            t: s,
            limit: -self.rate,
        })
    }

    /// Raw moment `E[Y^k] = (n+k-1)! / ((n-1)! θ^k)`.
    pub fn moment(&self, k: u32) -> f64 {
        let rising: f64 = (self.shape..self.shape + k).map(|j| j as f64).product();
        rising / self.rate.powi(k as i32)
    }
}

/// XGamma(θ): Exponential(θ) with probability `θ/(1+θ)`, otherwise Erlang(3, θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XGammaParams {
    rate: f64,
}

impl XGammaParams {
    pub fn new(rate: f64) -> Result<Self> {
        check_rate(rate)?;
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Weight of the exponential component.
    pub fn exponential_weight(&self) -> f64 {
        self.rate / (1.0 + self.rate)
    }

    /// Weight of the Erlang(3) component.
    pub fn erlang3_weight(&self) -> f64 {
        1.0 / (1.0 + self.rate)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let theta = self.rate;
        let x = theta * t;
        if x > UNDERFLOW_ARGUMENT {
            return 0.0;
        }
        theta * theta / (1.0 + theta) * (1.0 + 0.5 * theta * t * t) * (-x).exp()
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let theta = self.rate;
        let x = theta * t;
        if x > UNDERFLOW_ARGUMENT {
            return 1.0;
        }
        if x < 1.0 {
            // mixture of the two Erlang CDFs avoids 1 - (1 - small)
            let exp1 = ErlangParams {
                shape: 1,
                rate: theta,
            };
            let erl3 = ErlangParams {
                shape: 3,
                rate: theta,
            };
            return self.exponential_weight() * exp1.cdf(t) + self.erlang3_weight() * erl3.cdf(t);
        }
        let tail = (-x).exp() * (1.0 + theta + x + 0.5 * x * x) / (1.0 + theta);
        (1.0 - tail).clamp(0.0, 1.0)
    }

    pub fn survival(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        let theta = self.rate;
        let x = theta * t;
        if x > UNDERFLOW_ARGUMENT {
            return 0.0;
        }
        (-x).exp() * (1.0 + theta + x + 0.5 * x * x) / (1.0 + theta)
    }

    /// `θ²((θ-t)² + θ) / ((1+θ)(θ-t)³)`, defined for `t < θ`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let theta = self.rate;
        if !(t < theta) {
            return Err(Error::MgfDomain { t, limit: theta });
        }
        let gap = theta - t;
        Ok(theta * theta * (gap * gap + theta) / ((1.0 + theta) * gap * gap * gap))
    }

    pub fn mean(&self) -> f64 {
        let theta = self.rate;
        (theta + 3.0) / (theta * (1.0 + theta))
    }

    pub fn second_moment(&self) -> f64 {
        let theta = self.rate;
        (2.0 * theta + 12.0) / (theta * theta * (1.0 + theta))
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    /// One draw by composition: pick the component with the mixing weight,
    /// then sum one or three inverse-transform exponential draws.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let stages = if u < self.exponential_weight() { 1 } else { 3 };
        (0..stages)
            .map(|_| sample_exponential(self.rate, rng))
            .sum()
    }
}

/// Inverse-transform exponential draw, `-ln(1-u)/θ` with `u` uniform on [0, 1).
pub fn sample_exponential<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    -(-u).ln_1p() / rate
}
