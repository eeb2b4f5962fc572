use std::sync::OnceLock;

use serde::Serialize;

use super::residues::residues_dd;
use super::ParamVector;
use crate::dd::Dd;
use crate::distributions::{ErlangParams, UNDERFLOW_ARGUMENT};
use crate::error::{Error, Result};

/// Relative size, against the density peak, below which negative round-off
/// is reported as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// One signed term `R_ik · Erlang(4-k, θ_i)` of the mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureComponent {
    pub weight: f64,
    #[serde(serialize_with = "serialize_erlang")]
    pub erlang: ErlangParams,
    /// Zero-based index of the rate this component belongs to.
    pub pole: usize,
    /// Heaviside order `k ∈ {1, 2, 3}`; the Erlang shape is `4 - k`.
    pub order: u32,
}

fn serialize_erlang<S: serde::Serializer>(
    e: &ErlangParams,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Erlang", 2)?;
    st.serialize_field("shape", &e.shape())?;
    st.serialize_field("rate", &e.rate())?;
    st.end()
}

#[derive(Debug, Clone)]
struct Pole {
    rate: f64,
    /// `R_i1, R_i2, R_i3` on Erlang shapes 3, 2, 1.
    weights: [Dd; 3],
}

/// Per-pole exponential data at one evaluation point.
struct Stage {
    x: Dd,
    decay: Dd,
}

/// Closed-form representation `f(t) = Σ_i Σ_k R_ik f_{Erl(4-k, θ_i)}(t)` with
/// `R_ik = K A_ik / θ_i^{4-k}` and `K = Π θ_l² / (1+θ_l)`.
///
/// Weights are held in double-double precision and every evaluation is
/// carried out in that precision before rounding, since the weights
/// alternate in sign and grow like inverse powers of the rate gaps.
#[derive(Debug)]
pub struct MixtureRepresentation {
    params: ParamVector,
    poles: Vec<Pole>,
    components: Vec<MixtureComponent>,
    normalizer: f64,
    peak: OnceLock<f64>,
}

impl Clone for MixtureRepresentation {
    fn clone(&self) -> Self {
        Self {
            params: self.params.clone(),
            poles: self.poles.clone(),
            components: self.components.clone(),
            normalizer: self.normalizer,
            peak: OnceLock::new(),
        }
    }
}

pub fn build_mixture(params: &ParamVector) -> MixtureRepresentation {
    MixtureRepresentation::new(params)
}

impl MixtureRepresentation {
    pub fn new(params: &ParamVector) -> Self {
        let rates = params.rates();
        let normalizer = rates
            .iter()
            .fold(Dd::ONE, |acc, &r| acc * Dd::prod(r, r) / (Dd::new(1.0) + r));

        let mut poles = Vec::with_capacity(rates.len());
        let mut components = Vec::with_capacity(3 * rates.len());
        for (i, &rate) in rates.iter().enumerate() {
            let residues = residues_dd(rates, i);
            let mut weights = [Dd::ZERO; 3];
            for (k, (w, a)) in weights.iter_mut().zip(residues).enumerate() {
                let shape = 3 - k as u32;
                *w = normalizer * a / Dd::new(rate).powi(shape);
                components.push(MixtureComponent {
                    weight: w.to_f64(),
                    erlang: ErlangParams::new(shape, rate).expect("validated rate"),
                    pole: i,
                    order: k as u32 + 1,
                });
            }
            poles.push(Pole { rate, weights });
        }
        Self {
            params: params.clone(),
            poles,
            components,
            normalizer: normalizer.to_f64(),
            peak: OnceLock::new(),
        }
    }

    pub fn params(&self) -> &ParamVector {
        &self.params
    }

    pub fn components(&self) -> &[MixtureComponent] {
        &self.components
    }

    /// `K = Π θ_l² / (1 + θ_l)`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    fn weight_sum_dd(&self) -> Dd {
        self.poles
            .iter()
            .flat_map(|p| p.weights)
            .fold(Dd::ZERO, |acc, w| acc + w)
    }

    /// `Σ R_ik`, accumulated in extended precision.
    pub fn weight_sum(&self) -> f64 {
        self.weight_sum_dd().to_f64()
    }

    /// `Σ |R_ik|`; the factor by which cancellation amplifies rounding error.
    pub fn absolute_weight_sum(&self) -> f64 {
        self.components.iter().map(|c| c.weight.abs()).sum()
    }

    fn stages(&self, t: f64) -> impl Iterator<Item = (&Pole, Option<Stage>)> + '_ {
        self.poles.iter().map(move |pole| {
            let x = Dd::prod(pole.rate, t);
            if x.hi > UNDERFLOW_ARGUMENT {
                (pole, None)
            } else {
                (
                    pole,
                    Some(Stage {
                        x,
                        decay: (-x).exp(),
                    }),
                )
            }
        })
    }

    /// Density terms per pole: `e^{-x} θ (R_i1 x²/2 + R_i2 x + R_i3)`.
    fn density_terms(&self, t: f64) -> impl Iterator<Item = Dd> + '_ {
        self.stages(t).filter_map(|(pole, stage)| {
            let Stage { x, decay } = stage?;
            let [w1, w2, w3] = pole.weights;
            let poly = w1 * x.sqr() * 0.5 + w2 * x + w3;
            Some(decay * poly * pole.rate)
        })
    }

    /// Survival terms per pole: `e^{-x} (R_i1 (1+x+x²/2) + R_i2 (1+x) + R_i3)`.
    fn survival_terms(&self, t: f64) -> impl Iterator<Item = Dd> + '_ {
        self.stages(t).filter_map(|(pole, stage)| {
            let Stage { x, decay } = stage?;
            let [w1, w2, w3] = pole.weights;
            let one_x = x + 1.0;
            let poly = w1 * (one_x + x.sqr() * 0.5) + w2 * one_x + w3;
            Some(decay * poly)
        })
    }

    fn density_dd(&self, t: f64) -> Dd {
        self.density_terms(t).fold(Dd::ZERO, |acc, v| acc + v)
    }

    fn survival_dd(&self, t: f64) -> Dd {
        self.survival_terms(t).fold(Dd::ZERO, |acc, v| acc + v)
    }

    /// Density without clamping; for `t >= 0` this is the raw signed sum.
    pub fn pdf_unclamped(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        self.density_dd(t).to_f64()
    }

    pub fn pdf(&self, t: f64) -> f64 {
        let v = self.pdf_unclamped(t);
        if v < 0.0 && -v < NEGATIVE_CLAMP * self.peak() {
            0.0
        } else {
            v
        }
    }

    /// Ratio of `Σ |R_ik f_ik(t)|` to `|f(t)|`. Values near 1 mean no
    /// cancellation; the double-double evaluation keeps about 31 digits, so
    /// the density is resolved while this stays well below 1e30.
    pub fn cancellation_ratio(&self, t: f64) -> f64 {
        self.pdf_with_cancellation(t).1
    }

    /// Unclamped density together with its [`cancellation_ratio`](Self::cancellation_ratio).
    pub fn pdf_with_cancellation(&self, t: f64) -> (f64, f64) {
        if t < 0.0 {
            return (0.0, 1.0);
        }
        let mut total = Dd::ZERO;
        let mut magnitude = 0.0;
        for (pole, stage) in self.stages(t) {
            let Some(Stage { x, decay }) = stage else {
                continue;
            };
            let [w1, w2, w3] = pole.weights;
            let scaled = decay * pole.rate;
            for part in [w1 * x.sqr() * 0.5, w2 * x, w3] {
                let term = scaled * part;
                total += term;
                magnitude += term.to_f64().abs();
            }
        }
        let value = total.to_f64();
        let ratio = if value == 0.0 {
            if magnitude == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            magnitude / value.abs()
        };
        (value, ratio)
    }

    /// Approximate maximum of the density, found on a grid covering the
    /// bulk of the distribution. Computed on first use.
    pub fn peak(&self) -> f64 {
        *self.peak.get_or_init(|| {
            let mean = self.moment(1);
            let sd = (self.moment(2) - mean * mean).max(0.0).sqrt();
            let upper = mean + 12.0 * sd;
            (0..=512)
                .map(|j| self.pdf_unclamped(upper * j as f64 / 512.0))
                .fold(0.0, f64::max)
        })
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (self.weight_sum_dd() - self.survival_dd(t))
            .to_f64()
            .clamp(0.0, 1.0)
    }

    pub fn reliability(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        self.survival_dd(t).to_f64().clamp(0.0, 1.0)
    }

    /// `f(t) / R(t)`, computed as the ratio of the two mixture sums.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Ok(0.0);
        }
        let survival = self.survival_dd(t);
        if !(survival.hi > 0.0) {
            return Err(Error::HazardUndefined { t });
        }
        let h = (self.density_dd(t) / survival).to_f64();
        Ok(h.max(0.0))
    }

    /// `Σ R_ik (θ_i / (θ_i - t))^{4-k}`, defined for `t < min θ`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let limit = self.params.min_rate();
        if !(t < limit) {
            return Err(Error::MgfDomain { t, limit });
        }
        let sum = self.poles.iter().fold(Dd::ZERO, |acc, pole| {
            let u = Dd::new(pole.rate) / Dd::diff(pole.rate, t);
            let [w1, w2, w3] = pole.weights;
            let u2 = u.sqr();
            acc + w1 * u2 * u + w2 * u2 + w3 * u
        });
        Ok(sum.to_f64())
    }

    /// Raw moment `E[S^r] = Σ R_ik E[Y_ik^r]`.
    ///
    /// # Panics
    /// If `r == 0`.
    pub fn moment(&self, r: u32) -> f64 {
        assert!(r >= 1, "moment order must be >= 1");
        let rising = |shape: u32| -> f64 { (shape..shape + r).map(|j| j as f64).product() };
        let sum = self.poles.iter().fold(Dd::ZERO, |acc, pole| {
            let [w1, w2, w3] = pole.weights;
            let scale = Dd::new(pole.rate).powi(r);
            acc + (w1 * rising(3) + w2 * rising(2) + w3 * rising(1)) / scale
        });
        sum.to_f64()
    }
}
