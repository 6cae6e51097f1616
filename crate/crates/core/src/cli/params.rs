use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::dispersion::{Material, MaterialId, MaterialLibrary};
use crate::interference::{PairFamily, PairSign};
use crate::units::{parse_angle, parse_bandwidth, parse_length, Wavelength};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    /// Gaussian model with pump width `sigma` and filter width `sigma_f`.
    Model,
    /// Collinear crystal with the true sinc, type I or II.
    Collinear,
    /// Noncollinear type I at `theta` with the true sinc.
    Noncollinear,
    /// Focused-pump type I at `theta` with waist `w0`.
    Beam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum PdcKind {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    II,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `g(ωs, ωi) = f(ωi, ωs)`.
    Transpose,
    /// `g = f`.
    Same,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Psi,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<FamilyArg> for PairFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Psi => PairFamily::Psi,
            FamilyArg::Phi => PairFamily::Phi,
        }
    }
}

impl From<SignArg> for PairSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => PairSign::Plus,
            SignArg::Minus => PairSign::Minus,
        }
    }
}

/// Physical parameters shared by the subcommands. Each may come from a flag
/// or from the `--config` JSON file (same key names); flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Where the amplitude comes from.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceKind>,
    /// Read the amplitude from a CSV written by `jsa` instead.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jsa: Option<PathBuf>,
    /// BBO, KTP or KDP.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub material: Option<String>,
    #[arg(long = "type", value_enum)]
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub pdc_type: Option<PdcKind>,
    /// Crystal length, e.g. 1mm.
    #[arg(long = "L")]
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<String>,
    /// Pump wavelength, e.g. 400nm.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pump: Option<String>,
    /// Pump bandwidth, e.g. 10nm_fwhm or 1e14rad_s.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<String>,
    /// Internal emission angle, e.g. 3deg.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    /// Pump waist, e.g. 287um.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w0: Option<String>,
    /// Model pump width, e.g. 4e13rad_s (FWHM in nm refers to the pump).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
    /// Model filter width (FWHM in nm refers to the daughter wavelength).
    #[arg(long = "sigma-f")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_f: Option<String>,
    /// Grid points per axis.
    #[arg(long = "n-points")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    /// Grid half-span in rad/s, e.g. 1.2e15rad_s.
    #[arg(long = "half-span")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_span: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<Pairing>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyArg>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignArg>,
    /// Second analyzer angle for fringes, e.g. 45deg.
    #[arg(long = "theta-b")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_b: Option<String>,
    /// NS gate reflectivity r.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// NS gate reflectivity s.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Schmidt modes kept per source.
    #[arg(long = "n-modes")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_modes: Option<usize>,
    /// Economy table.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($a:ident, $b:ident, $($f:ident),*) => {
        Params { $($f: $a.$f.or($b.$f)),* }
    };
}

impl Params {
    /// Flags in `self` override values from `file`.
    pub fn merged_over(self, file: Params) -> Params {
        let (a, b) = (self, file);
        merge_fields!(
            a, b, source, jsa, material, pdc_type, length, pump, bandwidth, theta, w0, sigma, sigma_f,
            n_points, half_span, pairing, family, sign, theta_b, r, s, n_modes, csv
        )
    }

    pub fn from_json(text: &str) -> Result<Params> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config file: {e}")))
    }

    pub fn source(&mut self) -> SourceKind {
        *self.source.get_or_insert(SourceKind::Model)
    }

    pub fn material_id(&mut self) -> Result<MaterialId> {
        self.material.get_or_insert_with(|| "BBO".into()).parse()
    }

    pub fn material(&mut self, lib: &MaterialLibrary) -> Result<Material> {
        Ok(lib.get(self.material_id()?)?.clone())
    }

    pub fn pdc_type(&mut self) -> PdcKind {
        *self.pdc_type.get_or_insert(PdcKind::I)
    }

    pub fn length(&mut self) -> Result<f64> {
        positive("L", parse_length(self.length.get_or_insert_with(|| "1mm".into()))?)
    }

    pub fn pump(&mut self) -> Result<Wavelength> {
        Ok(Wavelength::from_m(positive(
            "pump",
            parse_length(self.pump.get_or_insert_with(|| "400nm".into()))?,
        )?))
    }

    pub fn pump_sigma(&mut self) -> Result<f64> {
        let bw = parse_bandwidth(self.bandwidth.get_or_insert_with(|| "10nm_fwhm".into()))?;
        let pump = self.pump()?;
        positive("bandwidth", bw.sigma(pump))
    }

    pub fn pump_sigma_opt(&mut self) -> Result<Option<f64>> {
        if self.bandwidth.is_none() {
            return Ok(None);
        }
        self.pump_sigma().map(Some)
    }

    pub fn theta(&mut self) -> Result<f64> {
        parse_angle(self.theta.get_or_insert_with(|| "3deg".into()))
    }

    /// Explicit waist, or `fallback` (recorded in the resolved parameters).
    pub fn w0_or(&mut self, fallback: impl FnOnce() -> Result<f64>) -> Result<f64> {
        match &self.w0 {
            Some(s) => positive("w0", parse_length(s)?),
            None => {
                let w = fallback()?;
                self.w0 = Some(format!("{w:.17e}m"));
                Ok(w)
            }
        }
    }

    pub fn w0_required(&mut self) -> Result<f64> {
        let s = self.w0.as_ref().ok_or_else(|| Error::Invalid("--w0 is required".into()))?;
        positive("w0", parse_length(s)?)
    }

    pub fn model_widths(&mut self) -> Result<(f64, f64)> {
        let pump = self.pump()?;
        let sigma = parse_bandwidth(self.sigma.get_or_insert_with(|| "4e13rad_s".into()))?.sigma(pump);
        let sigma_f = parse_bandwidth(self.sigma_f.get_or_insert_with(|| "4e13rad_s".into()))?
            .sigma(Wavelength::from_m(2.0 * pump.m()));
        Ok((positive("sigma", sigma)?, positive("sigma_f", sigma_f)?))
    }

    pub fn n_points(&mut self) -> Result<usize> {
        let n = *self.n_points.get_or_insert(256);
        if !(8..=4096).contains(&n) {
            return Err(Error::Invalid(format!("n-points must lie in [8, 4096], got {n}")));
        }
        Ok(n)
    }

    pub fn half_span(&self) -> Result<Option<f64>> {
        match &self.half_span {
            None => Ok(None),
            Some(s) => match parse_bandwidth(s)? {
                crate::units::Bandwidth::RadPerSecond(v) => positive("half-span", v).map(Some),
                _ => Err(Error::Parse(format!("half-span '{s}' needs a rad_s suffix"))),
            },
        }
    }

    pub fn pairing(&mut self) -> Pairing {
        *self.pairing.get_or_insert(Pairing::Transpose)
    }

    pub fn family(&mut self) -> PairFamily {
        (*self.family.get_or_insert(FamilyArg::Psi)).into()
    }

    pub fn sign(&mut self) -> PairSign {
        (*self.sign.get_or_insert(SignArg::Plus)).into()
    }

    pub fn theta_b(&mut self) -> Result<f64> {
        parse_angle(self.theta_b.get_or_insert_with(|| "45deg".into()))
    }

    pub fn n_modes(&mut self, default: usize) -> Result<usize> {
        let n = *self.n_modes.get_or_insert(default);
        if !(1..=64).contains(&n) {
            return Err(Error::Invalid(format!("n-modes must lie in [1, 64], got {n}")));
        }
        Ok(n)
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Invalid(format!("{name} must be positive, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = Params::from_json(r#"{"L": "2mm", "pump": "405nm", "n_points": 64}"#).unwrap();
        let flags = Params { length: Some("1mm".into()), ..Default::default() };
        let mut p = flags.merged_over(file);
        assert_eq!(p.length().unwrap(), 1e-3);
        assert!((p.pump().unwrap().nm() - 405.0).abs() < 1e-9);
        assert_eq!(p.n_points().unwrap(), 64);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Params::from_json(r#"{"lenght": "1mm"}"#).is_err());
        assert!(Params::from_json(r#"{"L": 1}"#).is_err());
    }

    #[test]
    fn defaults_are_recorded() {
        let mut p = Params::default();
        p.theta().unwrap();
        p.model_widths().unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["theta"], "3deg");
        assert_eq!(v["sigma_f"], "4e13rad_s");
        assert!(v.get("w0").is_none());
        let mut q = Params { length: Some("-1mm".into()), ..Default::default() };
        assert!(q.length().is_err());
    }
}
