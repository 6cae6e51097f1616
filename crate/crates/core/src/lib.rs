//! Two-photon spectral state engineering for parametric down-conversion.
//!
//! The crate is organised around the life of a photon pair:
//!
//! - [`dispersion`]: crystal refractive indices, wavevectors, group slopes and
//!   phase-matching geometry.
//! - [`spectra`]: discretised joint spectral amplitudes (pump envelope times
//!   phase matching, the Gaussian model source, Gaussian-beam engineering).
//! - [`schmidt`]: numerical and analytic Schmidt decompositions and the
//!   cooperativity parameter.
//! - [`interference`]: two-source Hong-Ou-Mandel rates, Bell-analyzer and
//!   polarization-correlation observables.
//! - [`design`]: source-engineering solvers (factorable waist, pump threshold,
//!   regime checks) and the economy figure of merit.
//! - [`focksim`]: a linear-optics Fock simulator over channel and spectral
//!   mode, used for the nonlinear sign gate and the six-fold test.
//!
//! The `pdcsim` binary in this crate is a thin front end over [`cli`].

pub mod cli;
pub mod design;
pub mod dispersion;
pub mod error;
pub mod focksim;
pub mod interference;
pub mod json;
pub mod numerics;
pub mod presets;
pub mod schmidt;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
