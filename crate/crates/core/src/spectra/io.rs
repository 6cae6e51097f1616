//! CSV dump of a joint spectral amplitude plus a JSON metadata sidecar.
//!
//! ```text
//! # config={...}
//! # omega0_rad_s=2.35e15
//! # n_s=256 n_i=256
//! nu_s,nu_i,re,im
//! ...
//! ```
//! Rows run over the idler index fastest. When the two grids have different
//! centres a second header `# omega0_i_rad_s=` follows the first.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{FrequencyGrid, JointSpectralAmplitude};
use crate::{Error, Result};

#[derive(Debug, Serialize)]
pub struct JsaMetadata {
    pub grid_s: FrequencyGrid,
    pub grid_i: FrequencyGrid,
    pub normalized: bool,
    pub norm_sq: f64,
    pub boundary_ratio: f64,
    pub grid_too_narrow: bool,
}

pub fn metadata(jsa: &JointSpectralAmplitude) -> JsaMetadata {
    JsaMetadata {
        grid_s: jsa.grid_s,
        grid_i: jsa.grid_i,
        normalized: jsa.normalized,
        norm_sq: jsa.norm_sq(),
        boundary_ratio: jsa.boundary_ratio(),
        grid_too_narrow: jsa.grid_too_narrow(),
    }
}

pub fn to_csv_string(jsa: &JointSpectralAmplitude, config: Option<&serde_json::Value>) -> String {
    let mut out = String::new();
    if let Some(c) = config {
        writeln!(out, "# config={c}").unwrap();
    }
    writeln!(out, "# omega0_rad_s={:.17e}", jsa.grid_s.omega0).unwrap();
    if jsa.grid_i.omega0 != jsa.grid_s.omega0 {
        writeln!(out, "# omega0_i_rad_s={:.17e}", jsa.grid_i.omega0).unwrap();
    }
    writeln!(out, "# n_s={} n_i={}", jsa.grid_s.n_points, jsa.grid_i.n_points).unwrap();
    out.push_str("nu_s,nu_i,re,im\n");
    let ds = jsa.grid_s.detunings();
    let di = jsa.grid_i.detunings();
    for (a, x) in ds.iter().enumerate() {
        for (b, y) in di.iter().enumerate() {
            let z = jsa.values[(a, b)];
            writeln!(out, "{x:.17e},{y:.17e},{:.17e},{:.17e}", z.re, z.im).unwrap();
        }
    }
    out
}

pub fn from_csv_str(text: &str) -> Result<JointSpectralAmplitude> {
    let mut omega_s = None;
    let mut omega_i = None;
    let mut dims = None;
    let mut rows: Vec<[f64; 4]> = Vec::new();
    let mut seen_header = false;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if let Some(v) = c.strip_prefix("omega0_rad_s=") {
                omega_s = Some(parse_f(v)?);
            } else if let Some(v) = c.strip_prefix("omega0_i_rad_s=") {
                omega_i = Some(parse_f(v)?);
            } else if c.starts_with("n_s=") {
                let mut it = c.split_whitespace();
                let ns = it.next().and_then(|t| t.strip_prefix("n_s=")).map(str::parse::<usize>);
                let ni = it.next().and_then(|t| t.strip_prefix("n_i=")).map(str::parse::<usize>);
                match (ns, ni) {
                    (Some(Ok(a)), Some(Ok(b))) => dims = Some((a, b)),
                    _ => return Err(Error::Parse(format!("line {}: bad grid size header", k + 1))),
                }
            }
            continue;
        }
        if !seen_header {
            if line != "nu_s,nu_i,re,im" {
                return Err(Error::Parse(format!("line {}: expected column header", k + 1)));
            }
            seen_header = true;
            continue;
        }
        let f: Vec<f64> = line.split(',').map(parse_f).collect::<Result<_>>()?;
        if f.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected 4 columns", k + 1)));
        }
        rows.push([f[0], f[1], f[2], f[3]]);
    }
    let omega_s = omega_s.ok_or_else(|| Error::Parse("missing omega0_rad_s header".into()))?;
    let omega_i = omega_i.unwrap_or(omega_s);
    let (ns, ni) = dims.ok_or_else(|| Error::Parse("missing n_s/n_i header".into()))?;
    if rows.len() != ns * ni {
        return Err(Error::Parse(format!("expected {} rows, found {}", ns * ni, rows.len())));
    }
    let grid_s = FrequencyGrid::new(omega_s, rows[(ns - 1) * ni][0], ns)?;
    let grid_i = FrequencyGrid::new(omega_i, rows[ni - 1][1], ni)?;
    let values = DMatrix::from_fn(ns, ni, |a, b| {
        let r = rows[a * ni + b];
        Complex64::new(r[2], r[3])
    });
    let mut jsa = JointSpectralAmplitude::new(grid_s, grid_i, values)?;
    jsa.normalized = (jsa.norm_sq() - 1.0).abs() <= 1e-10;
    Ok(jsa)
}

fn parse_f(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad number '{}'", s.trim())))
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn write_jsa(
    dir: &Path,
    stem: &str,
    jsa: &JointSpectralAmplitude,
    config: Option<&serde_json::Value>,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{stem}.csv")), to_csv_string(jsa, config))?;
    let mut meta = serde_json::to_value(metadata(jsa))?;
    if let Some(c) = config {
        meta["config"] = c.clone();
    }
    std::fs::write(dir.join(format!("{stem}.json")), crate::json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub fn read_jsa(path: &Path) -> Result<JointSpectralAmplitude> {
    from_csv_str(&std::fs::read_to_string(path)?)
}
