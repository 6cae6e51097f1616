//! Physical constants, unit conversions and unit-suffixed value parsing.
//!
//! All library APIs work in SI units with angular frequencies in rad/s.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;

/// A vacuum wavelength, stored in metres.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
pub struct Wavelength(f64);

impl Wavelength {
    pub fn from_m(m: f64) -> Self {
        Wavelength(m)
    }

    pub fn from_um(um: f64) -> Self {
        Wavelength(um * 1e-6)
    }

    pub fn from_nm(nm: f64) -> Self {
        Wavelength(nm * 1e-9)
    }

    pub fn from_omega(omega: f64) -> Self {
        Wavelength(2.0 * PI * C / omega)
    }

    pub fn m(self) -> f64 {
        self.0
    }

    pub fn um(self) -> f64 {
        self.0 * 1e6
    }

    pub fn nm(self) -> f64 {
        self.0 * 1e9
    }

    /// Angular frequency 2πc/λ in rad/s.
    pub fn omega(self) -> f64 {
        2.0 * PI * C / self.0
    }

    pub fn half(self) -> Self {
        Wavelength(self.0 / 2.0)
    }
}

/// Converts a FWHM bandwidth in wavelength to an angular-frequency width
/// Δω = 2πc·Δλ/λ².
pub fn fwhm_nm_to_delta_omega(center: Wavelength, fwhm_nm: f64) -> f64 {
    2.0 * PI * C * (fwhm_nm * 1e-9) / (center.m() * center.m())
}

/// Converts an intensity FWHM (rad/s) into σ of an amplitude `exp(-x²/σ²)`.
///
/// The intensity `exp(-2x²/σ²)` falls to one half at `x = σ·sqrt(ln2/2)`, so
/// FWHM = σ·sqrt(2 ln 2).
pub fn fwhm_to_sigma(fwhm: f64) -> f64 {
    fwhm / (2.0 * std::f64::consts::LN_2).sqrt()
}

pub fn deg(x: f64) -> f64 {
    x.to_radians()
}

fn split_suffix<'a>(s: &'a str, suffixes: &[&'a str]) -> Option<(f64, &'a str)> {
    let s = s.trim();
    // longest suffix first so that "um" is not mistaken for "m"
    let mut sorted: Vec<&str> = suffixes.to_vec();
    sorted.sort_by_key(|x| std::cmp::Reverse(x.len()));
    for suf in sorted {
        if let Some(num) = s.strip_suffix(suf) {
            if let Ok(v) = num.trim().parse::<f64>() {
                return Some((v, suf));
            }
        }
    }
    None
}

/// Parses a length with a `m|mm|um|nm` suffix into metres.
pub fn parse_length(s: &str) -> Result<f64> {
    match split_suffix(s, &["m", "mm", "um", "nm"]) {
        Some((v, "m")) => Ok(v),
        Some((v, "mm")) => Ok(v * 1e-3),
        Some((v, "um")) => Ok(v * 1e-6),
        Some((v, "nm")) => Ok(v * 1e-9),
        _ => Err(Error::Parse(format!("length '{s}' needs a m|mm|um|nm suffix"))),
    }
}

/// Parses an angle with a `deg|rad` suffix into radians.
pub fn parse_angle(s: &str) -> Result<f64> {
    match split_suffix(s, &["deg", "rad"]) {
        Some((v, "deg")) => Ok(v.to_radians()),
        Some((v, "rad")) => Ok(v),
        _ => Err(Error::Parse(format!("angle '{s}' needs a deg|rad suffix"))),
    }
}

/// A bandwidth as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// Intensity FWHM in nanometres, relative to some center wavelength.
    FwhmNm(f64),
    /// Amplitude width σ in rad/s (the `exp(-x²/σ²)` convention).
    RadPerSecond(f64),
}

impl Bandwidth {
    /// Resolves to σ in rad/s; `center` is the wavelength the FWHM refers to.
    pub fn sigma(self, center: Wavelength) -> f64 {
        match self {
            Bandwidth::FwhmNm(nm) => fwhm_to_sigma(fwhm_nm_to_delta_omega(center, nm)),
            Bandwidth::RadPerSecond(s) => s,
        }
    }
}

/// Parses a bandwidth with a `nm_fwhm|rad_s` suffix.
pub fn parse_bandwidth(s: &str) -> Result<Bandwidth> {
    match split_suffix(s, &["nm_fwhm", "rad_s"]) {
        Some((v, "nm_fwhm")) => Ok(Bandwidth::FwhmNm(v)),
        Some((v, "rad_s")) => Ok(Bandwidth::RadPerSecond(v)),
        _ => Err(Error::Parse(format!(
            "bandwidth '{s}' needs a nm_fwhm|rad_s suffix"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_units() {
        assert!((parse_length("1mm").unwrap() - 1e-3).abs() < 1e-18);
        assert!((parse_length("287 um").unwrap() - 287e-6).abs() < 1e-18);
        assert!((parse_length("400nm").unwrap() - 400e-9).abs() < 1e-20);
        assert!((parse_length("2m").unwrap() - 2.0).abs() < 1e-15);
        assert!(parse_length("3").is_err());
        assert!((parse_angle("180deg").unwrap() - PI).abs() < 1e-15);
        assert!((parse_angle("0.5rad").unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(parse_bandwidth("10nm_fwhm").unwrap(), Bandwidth::FwhmNm(10.0));
        assert_eq!(
            parse_bandwidth("4e13rad_s").unwrap(),
            Bandwidth::RadPerSecond(4e13)
        );
    }

    #[test]
    fn fwhm_round_trip() {
        // intensity exp(-2x²/σ²) at x = FWHM/2 is one half
        let sigma = fwhm_to_sigma(1.0);
        let half = (-2.0 * 0.25 / (sigma * sigma)).exp();
        assert!((half - 0.5).abs() < 1e-14);
    }

    #[test]
    fn wavelength_omega() {
        let w = Wavelength::from_nm(800.0);
        assert!((Wavelength::from_omega(w.omega()).nm() - 800.0).abs() < 1e-9);
        assert!((w.half().nm() - 400.0).abs() < 1e-12);
    }
}
