use serde::Serialize;

use super::ParamVector;
use crate::dd::Dd;

/// Heaviside coefficients `(A_i1, A_i2, A_i3)` of the pole at `-θ_i`, i.e. the
/// coefficients of `1/(θ_i+s)^3`, `1/(θ_i+s)^2` and `1/(θ_i+s)` in the
/// partial-fraction expansion of `Π_j ((θ_j+s)² + θ_j) / (θ_j+s)³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueTriple {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// Residues of pole `index` (zero-based).
///
/// # Panics
/// If `index >= params.len()`.
pub fn compute_residues(params: &ParamVector, index: usize) -> ResidueTriple {
    let [a1, a2, a3] = residues_dd(params.rates(), index);
    ResidueTriple {
        a1: a1.to_f64(),
        a2: a2.to_f64(),
        a3: a3.to_f64(),
    }
}

/// With `Y(s) = ((θ_i+s)²+θ_i) Π_{j≠i} ((θ_j+s)²+θ_j)/(θ_j+s)³`:
/// `A_i1 = Y(-θ_i)`, `A_i2 = Y'(-θ_i)`, `A_i3 = Y''(-θ_i)/2`, evaluated through
/// the logarithmic derivative `Y'/Y` and its derivative at `s = -θ_i`.
pub(crate) fn residues_dd(rates: &[f64], index: usize) -> [Dd; 3] {
    let theta = rates[index];
    let mut a1 = Dd::new(theta);
    let mut log_slope = Dd::ZERO;
    let mut log_curvature = Dd::new(2.0) / theta;
    for (j, &other) in rates.iter().enumerate() {
        if j == index {
            continue;
        }
        let d = Dd::diff(other, theta);
        let d2 = d.sqr();
        let q = d2 + other;
        a1 = a1 * q / (d2 * d);
        log_slope += d * 2.0 / q - Dd::new(3.0) / d;
        log_curvature += (d2 - other) * -2.0 / q.sqr() + Dd::new(3.0) / d2;
    }
    let a2 = a1 * log_slope;
    let a3 = a1 * 0.5 * (log_slope.sqr() + log_curvature);
    [a1, a2, a3]
}
