use serde::Serialize;

use crate::error::{Error, Result};

/// Positive lifetimes `t_1, ..., t_N` with a free-form provenance label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationSet {
    values: Vec<f64>,
    source_label: String,
}

impl ObservationSet {
    pub fn new(values: Vec<f64>, source_label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidData("no observations".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidData(format!(
                "observation {} is {v}; lifetimes must be positive and finite",
                i + 1
            )));
        }
        Ok(Self {
            values,
            source_label: source_label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_degenerate(&self) -> bool {
        self.values.iter().all(|&v| v == self.values[0])
    }
}

/// Million revolutions before failure for 23 deep-groove ball bearings in
/// an endurance test.
pub const BALL_BEARING_LIFETIMES: [f64; 23] = [
    17.88, 28.92, 33.00, 41.52, 42.12, 45.60, 48.48, 51.84, 51.96, 54.12, 55.56, 67.80, 68.64,
    68.64, 68.88, 84.12, 93.12, 98.64, 105.12, 105.84, 127.92, 128.04, 173.40,
];

pub fn ball_bearing_data() -> ObservationSet {
    ObservationSet::new(
        BALL_BEARING_LIFETIMES.to_vec(),
        "ball bearings (million revolutions)",
    )
    .expect("static data is valid")
}
