use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::units::{Wavelength, C};
use crate::{Error, Result};

const BUILTIN: &str = include_str!("../../data/materials.txt");

/// One principal axis of a crystal in the `sellmeier_v1` form, λ in µm:
/// `n² = c1 + c2/(λ² − c3) − c4·λ² + c5·λ²/(λ² − c6)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SellmeierAxis {
    pub coeffs: [f64; 6],
    pub range_um: (f64, f64),
}

impl SellmeierAxis {
    pub fn new(coeffs: &[f64], range_um: (f64, f64)) -> Result<Self> {
        if coeffs.len() != 4 && coeffs.len() != 6 {
            return Err(Error::Parse(format!(
                "sellmeier_v1 takes 4 or 6 coefficients, got {}",
                coeffs.len()
            )));
        }
        if !(range_um.0 > 0.0 && range_um.1 > range_um.0) {
            return Err(Error::Parse(format!("bad validity range {range_um:?}")));
        }
        let mut c = [0.0; 6];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Ok(SellmeierAxis { coeffs: c, range_um })
    }

    pub fn contains(&self, lambda_um: f64) -> bool {
        lambda_um >= self.range_um.0 && lambda_um <= self.range_um.1
    }

    /// Returns `(n, dn/dλ)` with the derivative per µm. No range check.
    pub fn eval_um(&self, l: f64) -> (f64, f64) {
        let [c1, c2, c3, c4, c5, c6] = self.coeffs;
        let l2 = l * l;
        let a = l2 - c3;
        let b = l2 - c6;
        let (pole, dpole) = if c5 == 0.0 {
            (0.0, 0.0)
        } else {
            (c5 * l2 / b, -2.0 * l * c5 * c6 / (b * b))
        };
        let n2 = c1 + c2 / a - c4 * l2 + pole;
        let dn2 = -2.0 * l * c2 / (a * a) - 2.0 * c4 * l + dpole;
        let n = n2.sqrt();
        (n, dn2 / (2.0 * n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MaterialId {
    Bbo,
    Ktp,
    Kdp,
}

impl MaterialId {
    pub const ALL: [MaterialId; 3] = [MaterialId::Bbo, MaterialId::Ktp, MaterialId::Kdp];
}

impl fmt::Display for MaterialId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaterialId::Bbo => "BBO",
            MaterialId::Ktp => "KTP",
            MaterialId::Kdp => "KDP",
        })
    }
}

impl FromStr for MaterialId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BBO" => Ok(MaterialId::Bbo),
            "KTP" => Ok(MaterialId::Ktp),
            "KDP" => Ok(MaterialId::Kdp),
            other => Err(Error::Parse(format!("unknown material '{other}' (BBO|KTP|KDP)"))),
        }
    }
}

/// A uniaxial crystal.
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub id: MaterialId,
    pub ordinary: SellmeierAxis,
    pub extraordinary: SellmeierAxis,
}

impl Material {
    pub fn name(&self) -> String {
        self.id.to_string()
    }

    /// Overlap of the two axis validity ranges (µm).
    pub fn range_um(&self) -> (f64, f64) {
        (
            self.ordinary.range_um.0.max(self.extraordinary.range_um.0),
            self.ordinary.range_um.1.min(self.extraordinary.range_um.1),
        )
    }

    /// True when n_e < n_o across the range (BBO, KDP).
    pub fn is_negative_uniaxial(&self) -> bool {
        let (lo, hi) = self.range_um();
        let l = 0.5 * (lo + hi).min(2.0 * lo.max(0.5));
        self.extraordinary.eval_um(l).0 < self.ordinary.eval_um(l).0
    }

    fn check(&self, w: Wavelength) -> Result<f64> {
        let l = w.um();
        let (lo, hi) = self.range_um();
        if l.is_finite() && l >= lo && l <= hi {
            Ok(l)
        } else {
            Err(Error::OutOfRange {
                material: self.name(),
                wavelength_um: l,
                lo_um: lo,
                hi_um: hi,
            })
        }
    }

    /// `(n, dn/dλ per µm)` for the given ray.
    pub fn index_and_slope(&self, w: Wavelength, ray: Ray) -> Result<(f64, f64)> {
        let l = self.check(w)?;
        let (no, dno) = self.ordinary.eval_um(l);
        match ray {
            Ray::Ordinary => Ok((no, dno)),
            Ray::Extraordinary { theta_pm } => {
                let (ne, dne) = self.extraordinary.eval_um(l);
                let (s2, c2) = (theta_pm.sin().powi(2), theta_pm.cos().powi(2));
                let inv = c2 / (no * no) + s2 / (ne * ne);
                let n = inv.powf(-0.5);
                let dn = n.powi(3) * (c2 * dno / no.powi(3) + s2 * dne / ne.powi(3));
                Ok((n, dn))
            }
        }
    }
}

/// Polarization of a ray relative to the crystal: ordinary, or extraordinary
/// propagating at `theta_pm` (rad) from the optic axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ray {
    Ordinary,
    Extraordinary { theta_pm: f64 },
}

/// Wavevector data at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WaveProps {
    /// rad/s
    pub omega: f64,
    /// rad/m
    pub k: f64,
    /// dk/dω in s/m
    pub k_prime: f64,
}

pub fn refractive_index(material: &Material, wavelength: Wavelength, ray: Ray) -> Result<f64> {
    Ok(material.index_and_slope(wavelength, ray)?.0)
}

/// `k = nω/c` and `k' = (n − λ dn/dλ)/c`.
pub fn wave_props(material: &Material, wavelength: Wavelength, ray: Ray) -> Result<WaveProps> {
    let (n, dn) = material.index_and_slope(wavelength, ray)?;
    let omega = wavelength.omega();
    Ok(WaveProps {
        omega,
        k: n * omega / C,
        k_prime: (n - wavelength.um() * dn) / C,
    })
}

/// The set of crystals available to a run.
#[derive(Debug, Clone)]
pub struct MaterialLibrary {
    materials: Vec<Material>,
}

impl MaterialLibrary {
    /// The embedded data file.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("embedded materials file parses")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses the key-value block format. Each block names one axis of one
    /// material; a material needs both axes.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks: Vec<Vec<(String, String)>> = vec![Vec::new()];
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                if raw.trim().is_empty() && !blocks.last().unwrap().is_empty() {
                    blocks.push(Vec::new());
                }
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("materials line {}: expected key=value", lineno + 1))
            })?;
            blocks
                .last_mut()
                .unwrap()
                .push((k.trim().to_string(), v.trim().to_string()));
        }

        let mut axes: Vec<(MaterialId, bool, SellmeierAxis)> = Vec::new();
        for block in blocks.into_iter().filter(|b| !b.is_empty()) {
            let get = |key: &str| -> Result<&str> {
                block
                    .iter()
                    .find(|(k, _)| k == key)
                    .map(|(_, v)| v.as_str())
                    .ok_or_else(|| Error::Parse(format!("materials block missing '{key}'")))
            };
            for (k, _) in &block {
                if !matches!(k.as_str(), "material" | "axis" | "form" | "coeffs" | "range_um") {
                    return Err(Error::Parse(format!("unknown materials key '{k}'")));
                }
            }
            let id: MaterialId = get("material")?.parse()?;
            let ordinary = match get("axis")? {
                "o" => true,
                "e" => false,
                a => return Err(Error::Parse(format!("axis must be o or e, got '{a}'"))),
            };
            let form = get("form")?;
            if form != "sellmeier_v1" {
                return Err(Error::Parse(format!("unsupported form '{form}'")));
            }
            let coeffs = parse_list(get("coeffs")?)?;
            let range = parse_list(get("range_um")?)?;
            if range.len() != 2 {
                return Err(Error::Parse("range_um needs two values".into()));
            }
            axes.push((id, ordinary, SellmeierAxis::new(&coeffs, (range[0], range[1]))?));
        }

        let mut materials = Vec::new();
        for id in MaterialId::ALL {
            let find = |o: bool| {
                let mut hits = axes.iter().filter(|(i, oo, _)| *i == id && *oo == o);
                let first = hits.next().map(|(_, _, a)| a.clone());
                if hits.next().is_some() {
                    return Err(Error::Parse(format!("{id}: axis given twice")));
                }
                Ok(first)
            };
            match (find(true)?, find(false)?) {
                (Some(o), Some(e)) => materials.push(Material {
                    id,
                    ordinary: o,
                    extraordinary: e,
                }),
                (None, None) => {}
                _ => return Err(Error::Parse(format!("{id}: both o and e axes required"))),
            }
        }
        if materials.is_empty() {
            return Err(Error::Parse("materials file defines no material".into()));
        }
        Ok(MaterialLibrary { materials })
    }

    pub fn get(&self, id: MaterialId) -> Result<&Material> {
        self.materials
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| Error::Invalid(format!("material {id} not in the loaded library")))
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{x}'")))
        })
        .collect()
}
