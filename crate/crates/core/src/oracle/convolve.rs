use crate::convolution::ParamVector;
use crate::distributions::XGammaParams;
use crate::error::{Error, Result};
use crate::oracle::quadrature::{try_adaptive_quadrature, MAX_INTERVALS};

/// Absolute tolerance of the outermost convolution integral.
pub const CONVOLUTION_TOLERANCE: f64 = 1e-10;

/// Density of `S_n` by iterated numerical convolution,
/// `f_{1..n}(t) = ∫_0^t f_{XG(θ_1)}(x) f_{2..n}(t - x) dx`, using only the
/// XGamma density. Each nested level runs at a tenth of the tolerance of the
/// level above it.
pub fn convolve_pdf_quadrature(params: &ParamVector, t: f64) -> Result<f64> {
    if params.len() < 2 {
        return Err(Error::InvalidParameter(
            "numerical convolution needs at least two rates".into(),
        ));
    }
    let factors: Vec<XGammaParams> = params
        .rates()
        .iter()
        .map(|&r| XGammaParams::new(r))
        .collect::<Result<_>>()?;
    convolve(&factors, t, CONVOLUTION_TOLERANCE)
}

fn convolve(factors: &[XGammaParams], t: f64, tol: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let (head, rest) = factors.split_first().expect("nonempty");
    if rest.is_empty() {
        return Ok(head.pdf(t));
    }
    let inner_tol = 0.1 * tol;
    let q = try_adaptive_quadrature(
        |x| Ok(head.pdf(x) * convolve(rest, t - x, inner_tol)?),
        0.0,
        t,
        tol,
        MAX_INTERVALS,
    )?;
    Ok(q.value.max(0.0))
}
