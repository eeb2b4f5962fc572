//! Independent realizations of the distribution used to validate the closed
//! form: Monte Carlo simulation, numerical convolution, adaptive quadrature,
//! KS distance and quantile inversion. Nothing here uses the partial-fraction
//! mixture.

pub mod convolve;
pub mod ks;
pub mod mc;
pub mod quadrature;
pub mod quantile;

pub use convolve::convolve_pdf_quadrature;
pub use ks::{ks_distance, EcdfReport};
pub use mc::{mc_sample_sum, stream_rng, SampleBatch};
pub use quadrature::{adaptive_quadrature, try_adaptive_quadrature, Quadrature};
pub use quantile::quantile;
