//! Three heralded sources feeding the sign-test interferometer with an NS
//! gate in its lower arm.

use serde::Serialize;

use super::fock::{pattern_probability, total_probability_check, DetectionPattern, PairSource, ProbabilityCheck, SpectralPhotonInput};
use super::network::{BsConvention, LinearNetwork};
use super::ns::{ns_network, NSGateConfig};
use crate::schmidt::{analytic_k, analytic_mu};
use crate::spectra::GaussianSourceModel;
use crate::{Error, Result};

pub const T1: usize = 0;
pub const T2: usize = 1;
pub const T3: usize = 2;
/// Upper interferometer arm, detector D1.
pub const UPPER: usize = 3;
/// Lower arm, through the NS signal port, detector D2.
pub const LOWER: usize = 4;
/// NS ancilla port B, detector C1.
pub const ANCILLA_B: usize = 5;
/// NS ancilla port C, detector C2.
pub const ANCILLA_C: usize = 6;
pub const N_CHANNELS: usize = 7;

/// `(herald, signal)` channel of each source.
pub const SOURCES: [(usize, usize); 3] = [(T1, UPPER), (T2, LOWER), (T3, ANCILLA_B)];

pub const DEFAULT_N_MODES: usize = 8;
pub const TRUNCATION_LIMIT: f64 = 1e-3;

pub fn sixfold_pattern() -> DetectionPattern {
    DetectionPattern::new(vec![1, 1, 1, 1, 1, 1, 0])
}

/// 50:50 splitter, NS gate on (lower, B, C), 50:50 splitter.
pub fn sixfold_network(cfg: &NSGateConfig) -> Result<LinearNetwork> {
    let mut net = LinearNetwork::new(N_CHANNELS)?;
    net.bs(UPPER, LOWER, 0.5, BsConvention::Standard)?;
    net.embed(&ns_network(cfg.r, cfg.s)?, &[LOWER, ANCILLA_B, ANCILLA_C])?;
    net.bs(UPPER, LOWER, 0.5, BsConvention::Standard)?;
    Ok(net)
}

pub fn sixfold_input(mu: f64, n_modes: usize) -> Result<SpectralPhotonInput> {
    let sources = SOURCES
        .iter()
        .map(|&(h, s)| PairSource::analytic(h, s, mu, n_modes))
        .collect::<Result<Vec<_>>>()?;
    SpectralPhotonInput::new(sources, Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SixfoldRate {
    pub mu: f64,
    pub k: f64,
    pub rate: f64,
    pub truncation_mass: f64,
    pub n_modes: usize,
}

/// Six-fold probability on an arbitrary seven-channel network, refusing
/// truncations above [`TRUNCATION_LIMIT`].
pub fn sixfold_rate_on(net: &LinearNetwork, mu: f64, n_modes: usize) -> Result<SixfoldRate> {
    let input = sixfold_input(mu, n_modes)?;
    let mass = input.truncation_mass();
    if mass > TRUNCATION_LIMIT {
        return Err(Error::Truncation { mass, limit: TRUNCATION_LIMIT });
    }
    Ok(SixfoldRate {
        mu,
        k: analytic_k(mu)?,
        rate: pattern_probability(net, &input, &sixfold_pattern())?,
        truncation_mass: mass,
        n_modes,
    })
}

pub fn sixfold_rate_mu(mu: f64, cfg: &NSGateConfig, n_modes: usize) -> Result<SixfoldRate> {
    sixfold_rate_on(&sixfold_network(cfg)?, mu, n_modes)
}

/// Six-fold coincidence probability for three identical sources of the
/// given model, each truncated to `n_modes` Schmidt modes.
pub fn ns_sixfold_rate(model: &GaussianSourceModel, cfg: &NSGateConfig, n_modes: usize) -> Result<SixfoldRate> {
    sixfold_rate_mu(analytic_mu(model), cfg, n_modes)
}

/// Smallest mode count, not below `floor`, whose three-source truncation
/// stays within `limit`.
pub fn modes_for_truncation(mu: f64, floor: usize, limit: f64) -> Result<usize> {
    let mut n = floor.max(1);
    loop {
        let mass = 1.0 - (1.0 - mu.powi(2 * n as i32)).powi(3);
        if mass <= limit {
            return Ok(n);
        }
        n += 1;
        if n > 200 {
            return Err(Error::Truncation { mass, limit });
        }
    }
}

/// Rate against cooperativity; `n_modes = None` picks the mode count per
/// point from the truncation limit.
pub fn sixfold_rate_curve(mus: &[f64], cfg: &NSGateConfig, n_modes: Option<usize>) -> Result<Vec<SixfoldRate>> {
    let net = sixfold_network(cfg)?;
    mus.iter()
        .map(|&mu| {
            let n = match n_modes {
                Some(n) => n,
                None => modes_for_truncation(mu, DEFAULT_N_MODES, TRUNCATION_LIMIT)?,
            };
            sixfold_rate_on(&net, mu, n)
        })
        .collect()
}

pub fn sixfold_total_probability(mu: f64, cfg: &NSGateConfig, n_modes: usize) -> Result<ProbabilityCheck> {
    total_probability_check(&sixfold_network(cfg)?, &sixfold_input(mu, n_modes)?)
}

pub fn rate_curve_csv(rows: &[SixfoldRate]) -> String {
    let mut s = String::from("K,rate,trunc_mass\n");
    for r in rows {
        s.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", r.k, r.rate, r.truncation_mass));
    }
    s
}
