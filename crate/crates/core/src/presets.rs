//! Configurations behind each reproduced figure.

use serde::Serialize;

use crate::design::factorable_waist;
use crate::dispersion::{cut_angle_for_emission, type_ii_cut_angle, CutGeometry, Material, PdcType};
use crate::focksim::{sixfold_rate_curve, NSGateConfig, SixfoldRate};
use crate::interference::{homi_baseline_analytic, homi_visibility_analytic};
use crate::spectra::{
    build_jsa_collinear, build_jsa_noncollinear_gaussian_beam, build_jsa_sinc, gaussian_beam_default_grid,
    gaussian_beam_factors, gaussian_beam_surfaces, BeamGeometry, CrystalConfig, FrequencyGrid,
    GaussianSourceModel, JointSpectralAmplitude, PumpEnvelope,
};
use crate::units::Wavelength;
use crate::Result;

/// Ultrafast 1 mm BBO pumped at 400 nm with 15 nm FWHM.
#[derive(Debug, Clone, Serialize)]
pub struct UltrafastConfig {
    pub pump_nm: f64,
    pub fwhm_nm: f64,
    pub length_m: f64,
    /// Internal emission angle of the type-I pair.
    pub theta_type_i_rad: f64,
    pub half_span_rad_s: f64,
    pub n_points: usize,
}

impl Default for UltrafastConfig {
    fn default() -> Self {
        UltrafastConfig {
            pump_nm: 400.0,
            fwhm_nm: 15.0,
            length_m: 1e-3,
            theta_type_i_rad: 3f64.to_radians(),
            half_span_rad_s: 1.2e15,
            n_points: 256,
        }
    }
}

/// Noncollinear type-I and collinear type-II amplitudes, both with the true
/// sinc phase matching.
pub fn ultrafast_pair(
    material: &Material,
    cfg: &UltrafastConfig,
) -> Result<(JointSpectralAmplitude, JointSpectralAmplitude)> {
    let pump_wl = Wavelength::from_nm(cfg.pump_nm);
    let pump = PumpEnvelope::from_fwhm_nm(pump_wl, cfg.fwhm_nm)?;
    let grid = FrequencyGrid::new(pump.omega0, cfg.half_span_rad_s, cfg.n_points)?;

    let t1 = cut_angle_for_emission(material, pump_wl, cfg.theta_type_i_rad)?;
    let c1 = CrystalConfig::new(
        material.clone(),
        cfg.length_m,
        CutGeometry::new(t1, cfg.theta_type_i_rad, PdcType::TypeI)?,
    )?;
    let type_i = build_jsa_sinc(&c1, &pump, &grid, &grid)?;

    let t2 = type_ii_cut_angle(material, Wavelength::from_nm(2.0 * cfg.pump_nm))?;
    let c2 = CrystalConfig::new(material.clone(), cfg.length_m, CutGeometry::new(t2, 0.0, PdcType::TypeII)?)?;
    let type_ii = build_jsa_collinear(&c2, &pump, &grid, &grid)?;
    Ok((type_i, type_ii))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TradeoffRow {
    pub sigma_f: f64,
    pub ratio: f64,
    pub visibility: f64,
    pub baseline: f64,
}

/// Dip visibility and coincidence baseline over a log sweep of filter
/// widths `σF/σ ∈ [lo, hi]`.
pub fn visibility_tradeoff(sigma: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<TradeoffRow>> {
    let n = n.max(2);
    (0..n)
        .map(|k| {
            let ratio = lo * (hi / lo).powf(k as f64 / (n - 1) as f64);
            let m = GaussianSourceModel::new(sigma, ratio * sigma)?;
            Ok(TradeoffRow {
                sigma_f: ratio * sigma,
                ratio,
                visibility: homi_visibility_analytic(&m),
                baseline: homi_baseline_analytic(&m),
            })
        })
        .collect()
}

/// Focused-pump type-I source.
#[derive(Debug, Clone, Serialize)]
pub struct BeamDesignConfig {
    pub pump_nm: f64,
    pub fwhm_nm: f64,
    pub length_m: f64,
    pub theta_rad: f64,
    pub w0_m: f64,
    pub n_points: usize,
}

impl BeamDesignConfig {
    /// 1 mm BBO, 3°, 10 nm pump, with the factorable waist.
    pub fn factorable(material: &Material) -> Result<Self> {
        let (pump_nm, length_m, theta_rad) = (400.0, 1e-3, 3f64.to_radians());
        Ok(BeamDesignConfig {
            pump_nm,
            fwhm_nm: 10.0,
            length_m,
            theta_rad,
            w0_m: factorable_waist(material, Wavelength::from_nm(pump_nm), length_m, theta_rad)?,
            n_points: 256,
        })
    }

    /// 200 µm BBO, 3°, 1 mm waist, 15 nm pump.
    pub fn correlated() -> Self {
        BeamDesignConfig {
            pump_nm: 400.0,
            fwhm_nm: 15.0,
            length_m: 200e-6,
            theta_rad: 3f64.to_radians(),
            w0_m: 1e-3,
            n_points: 256,
        }
    }

    fn parts(&self, material: &Material) -> Result<(PumpEnvelope, BeamGeometry, FrequencyGrid)> {
        let wl = Wavelength::from_nm(self.pump_nm);
        let pump = PumpEnvelope::from_fwhm_nm(wl, self.fwhm_nm)?;
        let beam = BeamGeometry::new(self.w0_m, self.theta_rad, self.length_m)?;
        let slopes = gaussian_beam_factors(material, wl, self.theta_rad)?;
        let grid = gaussian_beam_default_grid(&slopes, &pump, &beam, self.n_points)?;
        Ok((pump, beam, grid))
    }

    pub fn jsa(&self, material: &Material) -> Result<JointSpectralAmplitude> {
        let (pump, beam, grid) = self.parts(material)?;
        build_jsa_noncollinear_gaussian_beam(material, &pump, &beam, &grid, &grid)
    }

    /// Longitudinal, transverse, pump and normalized product surfaces.
    pub fn surfaces(&self, material: &Material) -> Result<[JointSpectralAmplitude; 4]> {
        let (pump, beam, grid) = self.parts(material)?;
        let slopes = gaussian_beam_factors(material, Wavelength::from_nm(self.pump_nm), self.theta_rad)?;
        gaussian_beam_surfaces(&slopes, &pump, &beam, &grid, &grid)
    }
}

/// Cooperativity values `μ` sampled for the six-fold curve.
pub const SIXFOLD_MUS: [f64; 8] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];

pub fn sixfold_curve(n_modes: Option<usize>) -> Result<Vec<SixfoldRate>> {
    sixfold_rate_curve(&SIXFOLD_MUS, &NSGateConfig::ideal(), n_modes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{MaterialId, MaterialLibrary};
    use crate::schmidt::schmidt_svd;

    #[test]
    fn ultrafast_ordering() {
        let bbo = MaterialLibrary::builtin().get(MaterialId::Bbo).unwrap().clone();
        let (a, b) = ultrafast_pair(&bbo, &UltrafastConfig::default()).unwrap();
        let (ka, kb) = (schmidt_svd(&a).unwrap().k, schmidt_svd(&b).unwrap().k);
        assert!(ka > kb && kb > 1.0, "{ka} {kb}");
        let fine = UltrafastConfig { n_points: 512, ..Default::default() };
        let (af, bf) = ultrafast_pair(&bbo, &fine).unwrap();
        assert!((schmidt_svd(&af).unwrap().k / ka - 1.0).abs() < 5e-3);
        assert!((schmidt_svd(&bf).unwrap().k / kb - 1.0).abs() < 5e-3);
    }

    #[test]
    fn tradeoff_endpoints() {
        let rows = visibility_tradeoff(4e13, 1e-3, 1e3, 7).unwrap();
        assert!(rows[0].visibility > 0.999 && rows[0].baseline < 0.01);
        let last = rows.last().unwrap();
        assert!(last.visibility < 0.01 && last.baseline > 0.99);
        let mid = &rows[3];
        assert!((mid.ratio - 1.0).abs() < 1e-12);
        assert!((mid.visibility - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((mid.baseline - 2.0 / 3.0).abs() < 1e-12);
    }
}
