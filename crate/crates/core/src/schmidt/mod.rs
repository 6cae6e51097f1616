//! Schmidt decomposition of joint spectral amplitudes, numerically by SVD
//! and analytically for the Gaussian model source.

mod analytic;
mod hermite;
mod svd;

pub use analytic::{
    analytic_eigenvalues, analytic_k, analytic_mu, mehler_closed_form, mehler_params_for_model,
    mehler_reconstruct, MehlerComparison, MehlerParams,
};
pub use hermite::{hermite_mode, hermite_mode_orthonormal, hermite_modes_orthonormal};
pub use svd::{
    cooperativity, purity_from_kernel, reduced_kernel, schmidt_svd, schmidt_svd_with_threshold,
    SchmidtDecomposition, DEFAULT_THRESHOLD,
};
