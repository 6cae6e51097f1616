//! Crystal dispersion: refractive indices, wavevectors, group slopes and
//! birefringent phase-matching geometry.
//!
//! Indices come from shipped Sellmeier data (see [`MaterialLibrary`]). The
//! extraordinary index at angle θ from the optic axis follows the index
//! ellipsoid, `n(θ)⁻² = cos²θ/n_o² + sin²θ/n_e²`.

mod phasematch;
mod sellmeier;

pub use phasematch::{
    collinear_type_i_cut_angle, cut_angle_for_emission, degenerate_noncollinear_angle, gvm_wavelength,
    type_ii_contour_slope, type_ii_cut_angle, type_ii_rays, type_i_rays, CutGeometry, PdcType,
};
pub use sellmeier::{
    refractive_index, wave_props, Material, MaterialId, MaterialLibrary, Ray, SellmeierAxis,
    WaveProps,
};
