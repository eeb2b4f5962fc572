//! Distribution of the sum of independent XGamma random variables.
//!
//! The density of `S_n = X_1 + ... + X_n`, `X_j ~ XGamma(θ_j)` with distinct
//! rates, is a signed mixture of Erlang densities. This crate builds that
//! mixture ([`convolution`]), evaluates the derived functions (CDF,
//! reliability, hazard, MGF, raw moments), checks them against independent
//! numerical oracles ([`oracle`]), and fits rates to lifetime data by
//! maximum likelihood ([`estimation`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolution;
mod dd;
pub mod distributions;
pub mod error;
pub mod estimation;
pub mod oracle;

pub use convolution::{
    build_mixture, compute_residues, MixtureRepresentation, ParamVector, ResidueTriple,
};
pub use distributions::{ErlangParams, XGammaParams};
pub use error::{Category, Error, Result};
