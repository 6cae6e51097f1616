//! Linear-optics Fock simulation over channels and Schmidt spectral modes.

mod fock;
mod network;
mod ns;
mod permanent;
mod sixfold;

pub use fock::{
    all_patterns, fock_amplitude, fock_output_state, pattern_probability, shared_basis_deviation,
    total_probability_check, DetectionPattern, PairSource, Photon, ProbabilityCheck, SpectralLabel,
    SpectralPhotonInput, SHARED_BASIS_TOL,
};
pub use network::{beamsplitter, BsConvention, Element, LinearNetwork};
pub use ns::{
    homi_mz_network, homi_mz_stage_states, ns_amplitudes, ns_conditional_map, ns_network, ns_optimize,
    HomiMzStage, NSGateConfig, NsConditionalMap, NsOptimum, NS_A, NS_B, NS_C, NS_CONVENTION, NS_TOPOLOGY,
};
pub use permanent::{permanent, MAX_PERMANENT_SIZE};
pub use sixfold::{
    modes_for_truncation, ns_sixfold_rate, rate_curve_csv, sixfold_input, sixfold_network, sixfold_pattern,
    sixfold_rate_curve, sixfold_rate_mu, sixfold_rate_on, sixfold_total_probability, SixfoldRate,
    ANCILLA_B, ANCILLA_C, DEFAULT_N_MODES, LOWER, N_CHANNELS, SOURCES, T1, T2, T3, TRUNCATION_LIMIT, UPPER,
};
