use std::sync::OnceLock;

use num_complex::Complex64;

use super::grid::FrequencyGrid;
use super::jsa::JointSpectralAmplitude;
use crate::units::{fwhm_nm_to_delta_omega, fwhm_to_sigma, Wavelength};
use crate::{Error, Result};

/// Gaussian pump spectrum `α = exp[−(νs+νi)²/σp²]` centred at `2·omega0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PumpEnvelope {
    /// Degenerate daughter frequency (rad/s); the pump sits at twice this.
    pub omega0: f64,
    /// rad/s
    pub sigma_p: f64,
}

impl PumpEnvelope {
    pub fn new(omega0: f64, sigma_p: f64) -> Result<Self> {
        if !(sigma_p > 0.0 && sigma_p.is_finite()) {
            return Err(Error::Invalid(format!("pump bandwidth must be positive, got {sigma_p}")));
        }
        if !(omega0 > 0.0) {
            return Err(Error::Invalid(format!("bad centre frequency {omega0}")));
        }
        Ok(PumpEnvelope { omega0, sigma_p })
    }

    /// Pump at `pump` wavelength with an intensity FWHM of `fwhm_nm`.
    pub fn from_fwhm_nm(pump: Wavelength, fwhm_nm: f64) -> Result<Self> {
        Self::new(
            pump.omega() / 2.0,
            fwhm_to_sigma(fwhm_nm_to_delta_omega(pump, fwhm_nm)),
        )
    }

    pub fn pump_wavelength(&self) -> Wavelength {
        Wavelength::from_omega(2.0 * self.omega0)
    }
}

/// `exp[−(νs+νi)²/σp²]` as a function of the summed detuning.
pub fn pump_envelope_value(pump: &PumpEnvelope, nu_sum: f64) -> f64 {
    (-(nu_sum / pump.sigma_p).powi(2)).exp()
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `sinc(L·Δk/2)`.
pub fn sinc_phasematch(delta_k: f64, length: f64) -> f64 {
    sinc(0.5 * length * delta_k)
}

fn half_width() -> f64 {
    static X: OnceLock<f64> = OnceLock::new();
    *X.get_or_init(|| {
        // Newton on sin(x)/x = ½
        let mut x = 1.9f64;
        for _ in 0..50 {
            let f = x.sin() / x - 0.5;
            let df = (x * x.cos() - x.sin()) / (x * x);
            let step = f / df;
            x -= step;
            if step.abs() < 1e-16 * x {
                break;
            }
        }
        x
    })
}

/// The point `x½` where `sinc(x½) = ½`.
pub fn sinc_half_width() -> f64 {
    half_width()
}

/// Width constant γ of the Gaussian `exp(−γx²)` sharing the sinc's FWHM,
/// `γ = ln2/x½²`.
pub fn gaussian_sinc_gamma() -> f64 {
    std::f64::consts::LN_2 / half_width().powi(2)
}

/// Gaussian model source `exp[−2(νs²+νi²)/σF² − 2(νs+νi)²/σ²]`. A
/// `sigma_f` of `f64::INFINITY` means no filter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GaussianSourceModel {
    pub sigma: f64,
    pub sigma_f: f64,
}

impl GaussianSourceModel {
    pub fn new(sigma: f64, sigma_f: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Invalid(format!("sigma must be positive, got {sigma}")));
        }
        if !(sigma_f > 0.0) || sigma_f.is_nan() {
            return Err(Error::Invalid(format!("sigma_F must be positive, got {sigma_f}")));
        }
        Ok(GaussianSourceModel { sigma, sigma_f })
    }

    pub fn unfiltered(sigma: f64) -> Result<Self> {
        Self::new(sigma, f64::INFINITY)
    }

    pub fn is_filtered(&self) -> bool {
        self.sigma_f.is_finite()
    }

    /// Unnormalized amplitude at `(νs, νi)`.
    pub fn value(&self, nu_s: f64, nu_i: f64) -> f64 {
        let inv_f2 = if self.is_filtered() {
            1.0 / (self.sigma_f * self.sigma_f)
        } else {
            0.0
        };
        let sum = nu_s + nu_i;
        (-2.0 * (nu_s * nu_s + nu_i * nu_i) * inv_f2 - 2.0 * sum * sum / (self.sigma * self.sigma))
            .exp()
    }

    /// 1/e amplitude widths along the sum and difference directions in
    /// (νs, νi) coordinates: `(w_u, w_v)`.
    pub fn principal_widths(&self) -> (f64, f64) {
        let inv_f2 = 1.0 / (self.sigma_f * self.sigma_f);
        let wu = 1.0 / (2.0 * inv_f2 + 4.0 / (self.sigma * self.sigma)).sqrt();
        let wv = self.sigma_f / 2f64.sqrt();
        (wu, wv)
    }
}

/// Default grid for the model: `half_span = 4·max(w_u, w_v)`.
pub fn default_model_grid(
    model: &GaussianSourceModel,
    omega0: f64,
    n_points: usize,
) -> Result<FrequencyGrid> {
    if !model.is_filtered() {
        return Err(Error::Invalid(
            "the unfiltered model is unbounded along νs = −νi; give an explicit grid".into(),
        ));
    }
    let (wu, wv) = model.principal_widths();
    FrequencyGrid::new(omega0, 4.0 * wu.max(wv), n_points)
}

/// Samples and normalizes the Gaussian model on the grid pair.
pub fn gaussian_model_jsa(
    model: &GaussianSourceModel,
    grid_s: &FrequencyGrid,
    grid_i: &FrequencyGrid,
) -> Result<JointSpectralAmplitude> {
    let narrow = model.sigma.min(model.sigma_f);
    let span = 2.0 * grid_s.half_span.min(grid_i.half_span);
    if span < 3.0 * narrow {
        return Err(Error::Invalid(format!(
            "grid span {span:.3e} rad/s is below 3x the narrowest width {narrow:.3e}"
        )));
    }
    JointSpectralAmplitude::from_real_fn(*grid_s, *grid_i, |a, b| model.value(a, b))?.normalize()
}

/// Multiplies by `exp(−2νs²/σF²)·exp(−2νi²/σF²)` and renormalizes. Also
/// returns the transmitted fraction `‖filtered‖²/‖input‖²` before
/// renormalization.
pub fn apply_gaussian_filter(
    jsa: &JointSpectralAmplitude,
    sigma_f: f64,
) -> Result<(JointSpectralAmplitude, f64)> {
    if !(sigma_f > 0.0) || sigma_f.is_nan() {
        return Err(Error::Invalid(format!("sigma_F must be positive, got {sigma_f}")));
    }
    if sigma_f.is_infinite() {
        return Ok((jsa.clone(), 1.0));
    }
    let before = jsa.norm_sq();
    let ds = jsa.grid_s.detunings();
    let di = jsa.grid_i.detunings();
    let t = |x: f64| (-2.0 * x * x / (sigma_f * sigma_f)).exp();
    let mut out = jsa.clone();
    for a in 0..ds.len() {
        for b in 0..di.len() {
            out.values[(a, b)] *= Complex64::new(t(ds[a]) * t(di[b]), 0.0);
        }
    }
    let fraction = out.norm_sq() / before;
    Ok((out.normalize()?, fraction))
}
