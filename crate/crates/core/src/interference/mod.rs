//! Two-source Hong-Ou-Mandel rates, Bell-analyzer rates and
//! polarization-correlation fringes.

mod homi;
mod polarization;

pub use homi::{
    default_tau_grid, factorability_residual, homi_baseline_analytic, homi_dip_analytic,
    homi_dip_width, homi_visibility_analytic, symmetry_residual, two_crystal_homi_numeric,
    DipCurve,
};
pub use polarization::{
    bell_analyzer_rates, bell_condition_residual, effective_mode_factorization, fringe_visibility,
    half_wave_transform, polarization_condition_residual, polarization_fringe, EffectiveModes,
    PairFamily, PairSign, PolarizedPairState,
};
