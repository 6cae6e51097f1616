use num_complex::Complex64;

use super::grid::FrequencyGrid;
use super::jsa::JointSpectralAmplitude;
use super::model::{gaussian_sinc_gamma, pump_envelope_value, sinc_phasematch, PumpEnvelope};
use crate::dispersion::{
    cut_angle_for_emission, type_i_rays, type_ii_rays, wave_props, CutGeometry, Material, PdcType,
    Ray,
};
use crate::units::Wavelength;
use crate::{Error, Result};

/// A crystal of given length and cut.
#[derive(Debug, Clone)]
pub struct CrystalConfig {
    pub material: Material,
    /// m
    pub length: f64,
    pub geometry: CutGeometry,
}

impl CrystalConfig {
    pub fn new(material: Material, length: f64, geometry: CutGeometry) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Invalid(format!("crystal length must be positive, got {length}")));
        }
        Ok(CrystalConfig {
            material,
            length,
            geometry,
        })
    }

    fn rays(&self) -> (Ray, Ray, Ray) {
        let t = self.geometry.theta_pm;
        match self.geometry.pdc_type {
            PdcType::TypeI => {
                let (p, d) = type_i_rays(&self.material, t);
                (p, d, d)
            }
            PdcType::TypeII => type_ii_rays(&self.material, t),
        }
    }
}

fn k_at(material: &Material, omega: f64, ray: Ray) -> Result<f64> {
    Ok(wave_props(material, Wavelength::from_omega(omega), ray)?.k)
}

/// Pump envelope times the true sinc, `α(νs+νi)·sinc(LΔk/2)` with
/// `Δk = kp − (ks + ki)·cosθ` along the pump axis. Handles type I and II,
/// collinear or at the geometry's emission angle.
pub fn build_jsa_sinc(
    crystal: &CrystalConfig,
    pump: &PumpEnvelope,
    grid_s: &FrequencyGrid,
    grid_i: &FrequencyGrid,
) -> Result<JointSpectralAmplitude> {
    let (pr, sr, ir) = crystal.rays();
    let m = &crystal.material;
    let ks: Vec<f64> = grid_s
        .omegas()
        .iter()
        .map(|&w| k_at(m, w, sr))
        .collect::<Result<_>>()?;
    let ki: Vec<f64> = grid_i
        .omegas()
        .iter()
        .map(|&w| k_at(m, w, ir))
        .collect::<Result<_>>()?;
    let cos_t = crystal.geometry.theta.cos();
    let ds = grid_s.detunings();
    let di = grid_i.detunings();
    let centre = grid_s.omega0 + grid_i.omega0;
    let mut values = nalgebra::DMatrix::<Complex64>::zeros(ds.len(), di.len());
    for a in 0..ds.len() {
        for b in 0..di.len() {
            let kp = k_at(m, centre + (ds[a] + di[b]), pr)?;
            let dk = kp - (ks[a] + ki[b]) * cos_t;
            // the pump envelope is centred on 2ω0 of the pump, not the grid
            let nu_sum = (centre - 2.0 * pump.omega0) + (ds[a] + di[b]);
            let v = pump_envelope_value(pump, nu_sum) * sinc_phasematch(dk, crystal.length);
            values[(a, b)] = Complex64::new(v, 0.0);
        }
    }
    JointSpectralAmplitude::new(*grid_s, *grid_i, values)?.normalize()
}

/// Collinear form of [`build_jsa_sinc`]; rejects a noncollinear geometry.
pub fn build_jsa_collinear(
    crystal: &CrystalConfig,
    pump: &PumpEnvelope,
    grid_s: &FrequencyGrid,
    grid_i: &FrequencyGrid,
) -> Result<JointSpectralAmplitude> {
    if crystal.geometry.theta != 0.0 {
        return Err(Error::Invalid(format!(
            "collinear build needs θ = 0, got {:.4}°",
            crystal.geometry.theta.to_degrees()
        )));
    }
    build_jsa_sinc(crystal, pump, grid_s, grid_i)
}

/// Focused-pump geometry. `w0` is the waist diameter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BeamGeometry {
    /// m
    pub w0: f64,
    /// Internal emission angle (rad).
    pub theta: f64,
    /// m
    pub length: f64,
}

impl BeamGeometry {
    pub fn new(w0: f64, theta: f64, length: f64) -> Result<Self> {
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(Error::Invalid(format!("waist must be positive, got {w0}")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Invalid(format!("crystal length must be positive, got {length}")));
        }
        if !(theta.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Invalid(format!("emission angle {theta} rad out of range")));
        }
        Ok(BeamGeometry { w0, theta, length })
    }

    /// `(w0/L)/(√γ·sin²θ)`; the Taylor-expanded form needs this ≫ 1.
    pub fn validity_ratio(&self) -> f64 {
        (self.w0 / self.length) / (gaussian_sinc_gamma().sqrt() * self.theta.sin().powi(2))
    }
}

/// Group slopes entering the Gaussian-beam phase matching for degenerate
/// type-I emission at `theta`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GaussianBeamSlopes {
    /// Cut angle that phase-matches emission at `theta` (rad).
    pub theta_pm: f64,
    pub theta: f64,
    /// Pump group slope at 2ω0 (s/m).
    pub kp_prime: f64,
    /// Daughter group slope at ω0 (s/m).
    pub k_prime: f64,
}

impl GaussianBeamSlopes {
    /// `kp' − k'·cosθ`.
    pub fn longitudinal(&self) -> f64 {
        self.kp_prime - self.k_prime * self.theta.cos()
    }

    /// `k'·sinθ`.
    pub fn transverse(&self) -> f64 {
        self.k_prime * self.theta.sin()
    }
}

/// Slopes for a pump at `pump` wavelength; the cut is solved from `theta`.
pub fn gaussian_beam_factors(
    material: &Material,
    pump: Wavelength,
    theta: f64,
) -> Result<GaussianBeamSlopes> {
    let theta_pm = cut_angle_for_emission(material, pump, theta)?;
    let (pr, dr) = type_i_rays(material, theta_pm);
    Ok(GaussianBeamSlopes {
        theta_pm,
        theta,
        kp_prime: wave_props(material, pump, pr)?.k_prime,
        k_prime: wave_props(material, Wavelength::from_m(2.0 * pump.m()), dr)?.k_prime,
    })
}

/// Grid half span `4·max(min(σp, w_z), w_⊥)` from the longitudinal and
/// transverse 1/e widths.
pub fn gaussian_beam_default_grid(
    slopes: &GaussianBeamSlopes,
    pump: &PumpEnvelope,
    beam: &BeamGeometry,
    n_points: usize,
) -> Result<FrequencyGrid> {
    let g = gaussian_sinc_gamma();
    let wz = 2.0 / (g.sqrt() * beam.length * slopes.longitudinal());
    let wt = 2.0 / (slopes.transverse() * beam.w0);
    if !wt.is_finite() {
        return Err(Error::Invalid("collinear beam has no transverse width; give an explicit grid".into()));
    }
    FrequencyGrid::new(pump.omega0, 4.0 * pump.sigma_p.min(wz.abs()).max(wt.abs()), n_points)
}

/// The three factors of the focused-beam amplitude and their product:
/// `(longitudinal, transverse, pump, product)`, each unnormalized except
/// the product.
pub fn gaussian_beam_surfaces(
    slopes: &GaussianBeamSlopes,
    pump: &PumpEnvelope,
    beam: &BeamGeometry,
    grid_s: &FrequencyGrid,
    grid_i: &FrequencyGrid,
) -> Result<[JointSpectralAmplitude; 4]> {
    let g = gaussian_sinc_gamma();
    let (kl, kt) = (slopes.longitudinal(), slopes.transverse());
    let l = beam.length;
    let w0 = beam.w0;
    let long = move |a: f64, b: f64| {
        let dz = kl * (a + b);
        (-g * dz * dz * l * l / 4.0).exp()
    };
    let trans = move |a: f64, b: f64| {
        let dt = -kt * (a - b);
        (-dt * dt * w0 * w0 / 4.0).exp()
    };
    let pmp = |a: f64, b: f64| pump_envelope_value(pump, a + b);
    Ok([
        JointSpectralAmplitude::from_real_fn(*grid_s, *grid_i, long)?,
        JointSpectralAmplitude::from_real_fn(*grid_s, *grid_i, trans)?,
        JointSpectralAmplitude::from_real_fn(*grid_s, *grid_i, pmp)?,
        JointSpectralAmplitude::from_real_fn(*grid_s, *grid_i, |a, b| {
            pmp(a, b) * long(a, b) * trans(a, b)
        })?
        .normalize()?,
    ])
}

/// Focused-pump type-I amplitude
/// `α·exp[−γΔkz²L²/4]·exp[−Δk⊥²w0²/4]` with `Δkz = (kp' − k'cosθ)(νs+νi)`
/// and `Δk⊥ = −k'sinθ(νs−νi)`. Errors when `w0/L < 10·√γ·sin²θ`.
pub fn build_jsa_noncollinear_gaussian_beam(
    material: &Material,
    pump: &PumpEnvelope,
    beam: &BeamGeometry,
    grid_s: &FrequencyGrid,
    grid_i: &FrequencyGrid,
) -> Result<JointSpectralAmplitude> {
    let required = 10.0 * gaussian_sinc_gamma().sqrt() * beam.theta.sin().powi(2);
    let actual = beam.w0 / beam.length;
    if actual < required {
        return Err(Error::Regime {
            what: "w0/L ≥ 10·√γ·sin²θ".into(),
            required,
            actual,
        });
    }
    let slopes = gaussian_beam_factors(material, pump.pump_wavelength(), beam.theta)?;
    let [_, _, _, product] = gaussian_beam_surfaces(&slopes, pump, beam, grid_s, grid_i)?;
    Ok(product)
}
