//! Discretized joint spectral amplitudes.
//!
//! Every amplitude lives on a pair of uniform detuning grids `ν = ω − ω0`
//! and is normalized so that `Σ|S|²·dνs·dνi = 1`.

mod builders;
mod grid;
pub mod io;
mod jsa;
mod model;

pub use builders::{
    build_jsa_collinear, build_jsa_noncollinear_gaussian_beam, build_jsa_sinc,
    gaussian_beam_default_grid, gaussian_beam_factors, gaussian_beam_surfaces, BeamGeometry, CrystalConfig, GaussianBeamSlopes,
};
pub use grid::FrequencyGrid;
pub use jsa::JointSpectralAmplitude;
pub use model::{
    apply_gaussian_filter, default_model_grid, gaussian_model_jsa, gaussian_sinc_gamma, pump_envelope_value,
    sinc, sinc_half_width, sinc_phasematch, GaussianSourceModel, PumpEnvelope,
};
