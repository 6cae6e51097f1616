use num_complex::Complex64;
use serde::Serialize;

use super::fock::{fock_amplitude, fock_output_state};
use super::network::{BsConvention, LinearNetwork};
use crate::{Error, Result};

/// Channels of the gate: A carries the signal, B the ancilla photon, C the
/// vacuum ancilla.
pub const NS_A: usize = 0;
pub const NS_B: usize = 1;
pub const NS_C: usize = 2;

/// `BS_r(B, C)`, then `BS_s(A, B)` with the sign on the signal side, then
/// `BS_r(B, C)`.
pub const NS_TOPOLOGY: &str = "rsr_three_channel";
/// Splitters are `[[√r, √(1−r)], [√(1−r), −√r]]`; the middle one is flipped.
pub const NS_CONVENTION: &str = "standard_with_flipped_s";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSGateConfig {
    pub r: f64,
    pub s: f64,
    pub topology: String,
    pub convention: String,
}

impl NSGateConfig {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("s", s)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Invalid(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(NSGateConfig {
            r,
            s,
            topology: NS_TOPOLOGY.into(),
            convention: NS_CONVENTION.into(),
        })
    }

    /// `r = 1/(4 − 2√2)`, `s = (√2 − 1)²`.
    pub fn ideal() -> Self {
        let r2 = 2f64.sqrt();
        Self::new(1.0 / (4.0 - 2.0 * r2), (r2 - 1.0).powi(2)).expect("ideal values lie inside (0, 1)")
    }
}

/// Three-channel gate network. Accepts the closed interval so the
/// decoupled limits can be probed.
pub fn ns_network(r: f64, s: f64) -> Result<LinearNetwork> {
    let mut net = LinearNetwork::new(3)?;
    net.bs(NS_B, NS_C, r, BsConvention::Standard)?
        .bs(NS_A, NS_B, s, BsConvention::Flipped)?
        .bs(NS_B, NS_C, r, BsConvention::Standard)?;
    Ok(net)
}

/// `cn = ⟨n,1,0|U|n,1,0⟩`: the signal component `|n⟩` heralded by one
/// photon at B and none at C.
pub fn ns_amplitudes(r: f64, s: f64) -> Result<[Complex64; 3]> {
    let net = ns_network(r, s)?;
    let mut c = [Complex64::new(0.0, 0.0); 3];
    for (n, slot) in c.iter_mut().enumerate() {
        *slot = fock_amplitude(&net.unitary, &[n, 1, 0], &[n, 1, 0])?;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsConditionalMap {
    pub config: NSGateConfig,
    pub amplitudes: [Complex64; 3],
    /// `|c0|²`, the heralding probability when the map is proportional to
    /// `(1, 1, −1)`.
    pub success_probability: f64,
    /// `|c1/c0 − 1| + |c2/c0 + 1|`.
    pub map_residual: f64,
}

pub fn ns_conditional_map(cfg: &NSGateConfig) -> Result<NsConditionalMap> {
    let c = ns_amplitudes(cfg.r, cfg.s)?;
    let map_residual = if c[0].norm() > 0.0 {
        (c[1] / c[0] - 1.0).norm() + (c[2] / c[0] + 1.0).norm()
    } else {
        f64::INFINITY
    };
    Ok(NsConditionalMap {
        config: cfg.clone(),
        amplitudes: c,
        success_probability: c[0].norm_sqr(),
        map_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NsOptimum {
    pub r: f64,
    pub s: f64,
    pub success_probability: f64,
    pub map_residual: f64,
}

fn residual(r: f64, s: f64) -> Result<[f64; 2]> {
    let c = ns_amplitudes(r, s)?;
    Ok([(c[1] - c[0]).re, (c[2] + c[0]).re])
}

/// Grid scan of `(r, s)` for the `(1, 1, −1)` map, Newton refinement of the
/// best candidates, and the converged point with the largest `|c0|²`.
pub fn ns_optimize(grid: usize) -> Result<NsOptimum> {
    if grid < 4 {
        return Err(Error::Invalid("optimizer grid needs at least 4 points per axis".into()));
    }
    let mut scan = Vec::with_capacity(grid * grid);
    for i in 1..grid {
        for j in 1..grid {
            let (r, s) = (i as f64 / grid as f64, j as f64 / grid as f64);
            let f = residual(r, s)?;
            scan.push((f[0] * f[0] + f[1] * f[1], r, s));
        }
    }
    scan.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best: Option<NsOptimum> = None;
    for &(_, r0, s0) in scan.iter().take(40) {
        let Some((r, s)) = newton(r0, s0)? else { continue };
        let cfg = NSGateConfig::new(r, s)?;
        let m = ns_conditional_map(&cfg)?;
        if m.map_residual > 1e-9 {
            continue;
        }
        if best.as_ref().is_none_or(|b| m.success_probability > b.success_probability + 1e-12) {
            best = Some(NsOptimum {
                r,
                s,
                success_probability: m.success_probability,
                map_residual: m.map_residual,
            });
        }
    }
    best.ok_or_else(|| Error::NoRoot("no (r, s) realizes the (1, 1, −1) map".into()))
}

fn newton(mut r: f64, mut s: f64) -> Result<Option<(f64, f64)>> {
    let h = 1e-7;
    for _ in 0..50 {
        let f = residual(r, s)?;
        if f[0].abs() + f[1].abs() < 1e-14 {
            return Ok(Some((r, s)));
        }
        let fr = residual(r + h, s)?;
        let fs = residual(r, s + h)?;
        let j = [
            [(fr[0] - f[0]) / h, (fs[0] - f[0]) / h],
            [(fr[1] - f[1]) / h, (fs[1] - f[1]) / h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-14 {
            return Ok(None);
        }
        let dr = (j[1][1] * f[0] - j[0][1] * f[1]) / det;
        let ds = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        r = (r - dr).clamp(1e-9, 1.0 - 1e-6);
        s = (s - ds).clamp(1e-9, 1.0 - 1e-6);
    }
    let f = residual(r, s)?;
    Ok((f[0].abs() + f[1].abs() < 1e-10).then_some((r, s)))
}

/// Two-photon states through the Mach–Zehnder of the sign test. `phase` is
/// the phase picked up by the two-photon component of arm 0 between the
/// splitters (π for an ideal sign flip).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomiMzStage {
    pub phase: f64,
    pub after_first: Vec<(Vec<usize>, Complex64)>,
    pub output: Vec<(Vec<usize>, Complex64)>,
    pub coincidence: f64,
}

pub fn homi_mz_network(phase: f64) -> Result<LinearNetwork> {
    let mut net = LinearNetwork::new(2)?;
    net.bs(0, 1, 0.5, BsConvention::Standard)?
        .phase(0, phase / 2.0)?
        .bs(0, 1, 0.5, BsConvention::Standard)?;
    Ok(net)
}

pub fn homi_mz_stage_states(phase: f64) -> Result<HomiMzStage> {
    let mut first = LinearNetwork::new(2)?;
    first.bs(0, 1, 0.5, BsConvention::Standard)?;
    let net = homi_mz_network(phase)?;
    let output = fock_output_state(&net.unitary, &[1, 1])?;
    let coincidence = output
        .iter()
        .find(|(p, _)| p == &vec![1, 1])
        .map(|(_, a)| a.norm_sqr())
        .unwrap_or(0.0);
    Ok(HomiMzStage {
        phase,
        after_first: fock_output_state(&first.unitary, &[1, 1])?,
        output,
        coincidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ideal_map() {
        let m = ns_conditional_map(&NSGateConfig::ideal()).unwrap();
        assert!((m.success_probability - 0.25).abs() < 1e-12);
        assert!(m.map_residual < 1e-12);
        assert!((m.amplitudes[2] / m.amplitudes[0] + 1.0).norm() < 1e-12);
        assert!(ns_network(0.85, 0.17).unwrap().unitarity_error() < 1e-14);
    }

    #[test]
    fn decoupled_limit() {
        // the signal splitter becomes a mirror; the ancilla passes BS_r twice
        // and returns to B
        for r in [0.2, 0.5, 0.9] {
            let c = ns_amplitudes(r, 1.0).unwrap();
            assert!((c[2] / c[0] - 1.0).norm() < 1e-12);
            assert!((c[0].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn config_bounds() {
        assert!(NSGateConfig::new(0.0, 0.5).is_err());
        assert!(NSGateConfig::new(0.5, 1.0).is_err());
        assert_eq!(NSGateConfig::ideal().topology, NS_TOPOLOGY);
    }

    #[test]
    fn optimizer_recovers_ideal() {
        let o = ns_optimize(60).unwrap();
        let i = NSGateConfig::ideal();
        assert!((o.r - i.r).abs() < 1e-3 && (o.s - i.s).abs() < 1e-3, "{o:?}");
        assert!((o.success_probability - 0.25).abs() < 1e-6);
    }

    #[test]
    fn mz_phase_law() {
        assert!((homi_mz_stage_states(0.0).unwrap().coincidence - 1.0).abs() < 1e-12);
        assert!(homi_mz_stage_states(PI).unwrap().coincidence < 1e-12);
        for k in 0..=12 {
            let phi = k as f64 * PI / 6.0;
            // (e^{iφ}|2,0⟩ − |0,2⟩)/√2 behind the second splitter
            let amp = (Complex64::from_polar(1.0, phi) + 1.0) / 2.0;
            let got = homi_mz_stage_states(phi).unwrap().coincidence;
            assert!((got - amp.norm_sqr()).abs() < 1e-12);
            assert!((got - (phi / 2.0).cos().powi(2)).abs() < 1e-12);
        }
        let mid = homi_mz_stage_states(0.0).unwrap();
        let c11 = mid.after_first.iter().find(|(p, _)| p == &vec![1, 1]).unwrap().1;
        assert!(c11.norm() < 1e-15);
    }
}
