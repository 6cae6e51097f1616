use rayon::prelude::*;

use crate::schmidt::{reduced_kernel, schmidt_svd_with_threshold};
use crate::spectra::{GaussianSourceModel, JointSpectralAmplitude};
use crate::{Error, Result};

/// A four-fold coincidence dip, normalized so the rate far from the dip is
/// the baseline.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DipCurve {
    /// s
    pub tau: Vec<f64>,
    pub rates: Vec<f64>,
    pub visibility: f64,
    pub baseline: f64,
}

/// `V = √(1 − σF⁴/(σF²+σ²)²)`, evaluated as `σ√(2σF²+σ²)/(σF²+σ²)`.
pub fn homi_visibility_analytic(model: &GaussianSourceModel) -> f64 {
    if !model.is_filtered() {
        return 0.0;
    }
    let (s2, f2) = (model.sigma.powi(2), model.sigma_f.powi(2));
    (s2 * (2.0 * f2 + s2)).sqrt() / (f2 + s2)
}

/// `R0 = 2σF²/(2σF²+σ²)`.
pub fn homi_baseline_analytic(model: &GaussianSourceModel) -> f64 {
    if !model.is_filtered() {
        return 1.0;
    }
    let (s2, f2) = (model.sigma.powi(2), model.sigma_f.powi(2));
    2.0 * f2 / (2.0 * f2 + s2)
}

fn dip_exponent_scale(model: &GaussianSourceModel) -> f64 {
    // σ²σF²/(8(σF²+σ²)), with the σF → ∞ limit σ²/8
    if model.is_filtered() {
        let (s2, f2) = (model.sigma.powi(2), model.sigma_f.powi(2));
        s2 * f2 / (8.0 * (f2 + s2))
    } else {
        model.sigma.powi(2) / 8.0
    }
}

/// Half-depth delay, where the dip exponent equals ln 2.
pub fn homi_dip_width(model: &GaussianSourceModel) -> f64 {
    (std::f64::consts::LN_2 / dip_exponent_scale(model)).sqrt()
}

/// `R0[1 − V·exp(−σ²σF²τ²/(8(σF²+σ²)))]`.
pub fn homi_dip_analytic(model: &GaussianSourceModel, tau: &[f64]) -> DipCurve {
    let v = homi_visibility_analytic(model);
    let r0 = homi_baseline_analytic(model);
    let a = dip_exponent_scale(model);
    DipCurve {
        tau: tau.to_vec(),
        rates: tau.iter().map(|t| r0 * (1.0 - v * (-a * t * t).exp())).collect(),
        visibility: v,
        baseline: r0,
    }
}

/// 41 delays spanning ±4 half-depth widths.
pub fn default_tau_grid(width: f64) -> Vec<f64> {
    (0..41).map(|k| width * (k as f64 - 20.0) / 5.0).collect()
}

/// Two identical crystals whose signals meet on a 50:50 beamsplitter with
/// delay τ, idlers detected as heralds. With `ρ` the reduced signal kernel,
/// `Rc(τ) = 1 − Σ |ρ(ωa, ωb)|² cos((ωa − ωb)τ)·dω²`, so `Rc(∞) = 1` and the
/// visibility is `Tr ρ²`.
pub fn two_crystal_homi_numeric(jsa: &JointSpectralAmplitude, tau: &[f64]) -> Result<DipCurve> {
    jsa.ensure_normalized()?;
    let rho = reduced_kernel(jsa);
    let h = jsa.grid_s.spacing();
    let nu = jsa.grid_s.detunings();
    let n = nu.len();
    let w: Vec<f64> = rho.iter().map(|z| z.norm_sqr() * h * h).collect();
    let cross = |t: f64| -> f64 {
        // column-major storage: entry (a, b) sits at a + n·b
        let mut s = 0.0;
        for b in 0..n {
            for a in 0..n {
                s += w[a + n * b] * ((nu[a] - nu[b]) * t).cos();
            }
        }
        s
    };
    let rates: Vec<f64> = tau.par_iter().map(|&t| 1.0 - cross(t)).collect();
    let purity: f64 = w.iter().sum();
    Ok(DipCurve {
        tau: tau.to_vec(),
        rates,
        visibility: purity,
        baseline: 1.0,
    })
}

/// `1 − λ0`: the weight outside the leading Schmidt mode.
pub fn factorability_residual(jsa: &JointSpectralAmplitude) -> Result<f64> {
    let d = schmidt_svd_with_threshold(jsa, 0.0)?;
    Ok((1.0 - d.eigenvalues[0]).max(0.0))
}

/// `‖S(νs, νi) − S(νi, νs)‖` under the grid measure.
pub fn symmetry_residual(jsa: &JointSpectralAmplitude) -> Result<f64> {
    if !jsa.grid_s.same_as(&jsa.grid_i) {
        return Err(Error::GridMismatch("symmetry needs identical signal and idler grids".into()));
    }
    let d = &jsa.values - jsa.values.transpose();
    Ok((d.iter().map(|z| z.norm_sqr()).sum::<f64>() * jsa.cell()).sqrt())
}
