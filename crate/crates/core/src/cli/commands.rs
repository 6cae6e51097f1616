use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::params::{Pairing, Params, PdcKind, SourceKind};
use crate::design::{
    correlated_design, factorable_design, factorable_waist, freq_correlated_margin, parse_economy_csv, table1,
    threshold_design, validate_waist_regime, DesignReport, EconomyRecord,
};
use crate::dispersion::{
    collinear_type_i_cut_angle, cut_angle_for_emission, type_ii_cut_angle, CutGeometry, Material, MaterialLibrary,
    PdcType,
};
use crate::focksim::{
    homi_mz_stage_states, ns_conditional_map, ns_optimize, rate_curve_csv, NSGateConfig, NS_CONVENTION, NS_TOPOLOGY,
};
use crate::interference::{
    bell_analyzer_rates, bell_condition_residual, default_tau_grid, fringe_visibility, homi_dip_analytic,
    homi_dip_width, polarization_condition_residual, polarization_fringe, two_crystal_homi_numeric,
    PolarizedPairState,
};
use crate::presets::{sixfold_curve, ultrafast_pair, visibility_tradeoff, BeamDesignConfig, UltrafastConfig};
use crate::schmidt::{analytic_k, analytic_mu, schmidt_svd, SchmidtDecomposition};
use crate::spectra::io::{read_jsa, to_csv_string, write_jsa};
use crate::spectra::{
    build_jsa_collinear, build_jsa_noncollinear_gaussian_beam, build_jsa_sinc, default_model_grid,
    gaussian_beam_default_grid, gaussian_beam_factors, gaussian_model_jsa, BeamGeometry, CrystalConfig,
    FrequencyGrid, GaussianSourceModel, JointSpectralAmplitude, PumpEnvelope,
};
use crate::units::{Wavelength, C};
use crate::{Error, Result};

/// Output directory, material data and the parameters as resolved so far.
pub struct Ctx {
    pub command: String,
    pub out: PathBuf,
    pub materials_file: Option<PathBuf>,
    pub lib: MaterialLibrary,
    pub params: Params,
}

impl Ctx {
    /// The full resolved configuration; call after every parameter has
    /// been read so defaults are included.
    pub fn config(&self) -> Value {
        json!({
            "command": self.command,
            "materials": self.materials_file.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "builtin".into()),
            "params": self.params,
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out)?;
        let p = self.path(name);
        std::fs::write(&p, text)?;
        Ok(p)
    }

    /// CSV with the configuration on a leading comment line.
    fn write_csv(&self, name: &str, body: &str) -> Result<PathBuf> {
        let header = format!("# config={}\n", serde_json::to_string(&self.config())?);
        self.write(name, &(header + body))
    }

    fn write_json(&self, name: &str, mut value: Value) -> Result<PathBuf> {
        value["config"] = self.config();
        self.write(name, &crate::json::to_string_pretty(&value)?)
    }

    fn write_jsa(&self, stem: &str, jsa: &JointSpectralAmplitude) -> Result<Vec<PathBuf>> {
        write_jsa(&self.out, stem, jsa, Some(&self.config()))?;
        Ok(vec![self.path(&format!("{stem}.csv")), self.path(&format!("{stem}.json"))])
    }
}

/// What a command reports on stdout.
pub struct Outcome {
    pub summary: Value,
    pub files: Vec<PathBuf>,
}

fn f(x: f64) -> String {
    format!("{x:.17e}")
}

/// Largest half-span that keeps the signal, idler and pump inside the
/// material's tabulated range, capped at 8σp.
fn auto_sinc_span(material: &Material, omega0: f64, sigma_p: f64) -> f64 {
    let (lo, hi) = material.range_um();
    let w = |um: f64| 2.0 * std::f64::consts::PI * C / (um * 1e-6);
    let room = (omega0 - w(hi)).min((w(lo) - 2.0 * omega0) / 2.0);
    (8.0 * sigma_p).min(0.95 * room)
}

pub struct Source {
    pub jsa: JointSpectralAmplitude,
    pub model: Option<GaussianSourceModel>,
}

pub fn build_source(ctx: &mut Ctx) -> Result<Source> {
    let p = &mut ctx.params;
    if let Some(path) = p.jsa.clone() {
        let jsa = read_jsa(&path)?;
        let jsa = if jsa.normalized { jsa } else { jsa.normalize()? };
        return Ok(Source { jsa, model: None });
    }
    let n = p.n_points()?;
    let pump_wl = p.pump()?;
    let omega0 = pump_wl.omega() / 2.0;
    let span = p.half_span()?;
    match p.source() {
        SourceKind::Model => {
            let (sigma, sigma_f) = p.model_widths()?;
            let model = GaussianSourceModel::new(sigma, sigma_f)?;
            let grid = match span {
                Some(h) => FrequencyGrid::new(omega0, h, n)?,
                None => default_model_grid(&model, omega0, n)?,
            };
            Ok(Source { jsa: gaussian_model_jsa(&model, &grid, &grid)?, model: Some(model) })
        }
        SourceKind::Collinear | SourceKind::Noncollinear => {
            let material = p.material(&ctx.lib)?;
            let length = p.length()?;
            let pump = PumpEnvelope::new(omega0, p.pump_sigma()?)?;
            let grid = FrequencyGrid::new(omega0, span.unwrap_or_else(|| auto_sinc_span(&material, omega0, pump.sigma_p)), n)?;
            let jsa = if p.source() == SourceKind::Collinear {
                let geometry = match p.pdc_type() {
                    PdcKind::I => CutGeometry::new(collinear_type_i_cut_angle(&material, pump_wl)?, 0.0, PdcType::TypeI)?,
                    PdcKind::II => CutGeometry::new(
                        type_ii_cut_angle(&material, Wavelength::from_m(2.0 * pump_wl.m()))?,
                        0.0,
                        PdcType::TypeII,
                    )?,
                };
                build_jsa_collinear(&CrystalConfig::new(material, length, geometry)?, &pump, &grid, &grid)?
            } else {
                if p.pdc_type() != PdcKind::I {
                    return Err(Error::Invalid("the noncollinear source is type I only".into()));
                }
                let theta = p.theta()?;
                let geometry = CutGeometry::new(cut_angle_for_emission(&material, pump_wl, theta)?, theta, PdcType::TypeI)?;
                build_jsa_sinc(&CrystalConfig::new(material, length, geometry)?, &pump, &grid, &grid)?
            };
            Ok(Source { jsa, model: None })
        }
        SourceKind::Beam => {
            let material = p.material(&ctx.lib)?;
            let length = p.length()?;
            let theta = p.theta()?;
            let pump = PumpEnvelope::new(omega0, p.pump_sigma()?)?;
            let w0 = p.w0_or(|| factorable_waist(&material, pump_wl, length, theta))?;
            let beam = BeamGeometry::new(w0, theta, length)?;
            let grid = match span {
                Some(h) => FrequencyGrid::new(omega0, h, n)?,
                None => gaussian_beam_default_grid(&gaussian_beam_factors(&material, pump_wl, theta)?, &pump, &beam, n)?,
            };
            Ok(Source {
                jsa: build_jsa_noncollinear_gaussian_beam(&material, &pump, &beam, &grid, &grid)?,
                model: None,
            })
        }
    }
}

fn jsa_summary(jsa: &JointSpectralAmplitude) -> Value {
    json!({
        "n_s": jsa.grid_s.n_points,
        "n_i": jsa.grid_i.n_points,
        "omega0_rad_s": jsa.grid_s.omega0,
        "half_span_rad_s": jsa.grid_s.half_span,
        "boundary_ratio": jsa.boundary_ratio(),
        "grid_too_narrow": jsa.grid_too_narrow(),
        "intensity_correlation": jsa.intensity_correlation(),
    })
}

pub fn jsa(ctx: &mut Ctx) -> Result<Outcome> {
    let s = build_source(ctx)?;
    let files = ctx.write_jsa("jsa", &s.jsa)?;
    Ok(Outcome { summary: jsa_summary(&s.jsa), files })
}

fn schmidt_summary(d: &SchmidtDecomposition, model: Option<&GaussianSourceModel>) -> Result<Value> {
    let mut v = json!({
        "k": d.k,
        "n_modes": d.n_modes(),
        "truncated_mass": d.truncated_mass,
        "eigenvalues_head": d.eigenvalues.iter().take(16).collect::<Vec<_>>(),
    });
    if let Some(m) = model {
        let mu = analytic_mu(m);
        v["analytic"] = json!({ "mu": mu, "k": analytic_k(mu)? });
    }
    Ok(v)
}

pub fn schmidt(ctx: &mut Ctx) -> Result<Outcome> {
    let s = build_source(ctx)?;
    let d = schmidt_svd(&s.jsa)?;
    let mut eig = String::from("n,lambda\n");
    for (n, l) in d.eigenvalues.iter().enumerate() {
        eig.push_str(&format!("{n},{}\n", f(*l)));
    }
    let shown = d.n_modes().min(4);
    let mut modes = String::from("nu_s");
    for n in 0..shown {
        modes.push_str(&format!(",re_psi{n},im_psi{n}"));
    }
    modes.push('\n');
    for j in 0..d.grid_s.n_points {
        modes.push_str(&f(d.grid_s.nu(j)));
        for n in 0..shown {
            let z = d.signal_modes[(j, n)];
            modes.push_str(&format!(",{},{}", f(z.re), f(z.im)));
        }
        modes.push('\n');
    }
    let summary = schmidt_summary(&d, s.model.as_ref())?;
    let files = vec![
        ctx.write_csv("schmidt_eigenvalues.csv", &eig)?,
        ctx.write_csv("schmidt_modes.csv", &modes)?,
        ctx.write_json("schmidt.json", summary.clone())?,
    ];
    Ok(Outcome { summary, files })
}

/// Half-depth delay scale from the spread of `νs − νi`.
fn numeric_tau_width(jsa: &JointSpectralAmplitude) -> f64 {
    let (ds, di) = (jsa.grid_s.detunings(), jsa.grid_i.detunings());
    let mut m2 = 0.0;
    for a in 0..ds.len() {
        for b in 0..di.len() {
            m2 += jsa.values[(a, b)].norm_sqr() * (ds[a] - di[b]).powi(2);
        }
    }
    let rms = (m2 * jsa.cell()).sqrt();
    if rms > 0.0 {
        2.0 / rms
    } else {
        1e-12
    }
}

fn tau_grid(s: &Source) -> Vec<f64> {
    default_tau_grid(match &s.model {
        Some(m) => homi_dip_width(m),
        None => numeric_tau_width(&s.jsa),
    })
}

pub fn homi(ctx: &mut Ctx) -> Result<Outcome> {
    let s = build_source(ctx)?;
    let tau = tau_grid(&s);
    let dip = two_crystal_homi_numeric(&s.jsa, &tau)?;
    let analytic = s.model.as_ref().map(|m| homi_dip_analytic(m, &tau));
    let mut csv = String::from(if analytic.is_some() { "tau_s,rate,rate_analytic\n" } else { "tau_s,rate\n" });
    for (k, t) in tau.iter().enumerate() {
        csv.push_str(&format!("{},{}", f(*t), f(dip.rates[k])));
        if let Some(a) = &analytic {
            csv.push_str(&format!(",{}", f(a.rates[k])));
        }
        csv.push('\n');
    }
    let mut summary = json!({ "visibility": dip.visibility, "baseline": dip.baseline });
    if let Some(a) = &analytic {
        summary["analytic"] = json!({ "visibility": a.visibility, "baseline": a.baseline });
    }
    let files = vec![ctx.write_csv("homi_dip.csv", &csv)?, ctx.write_json("homi.json", summary.clone())?];
    Ok(Outcome { summary, files })
}

fn pair_state(ctx: &mut Ctx) -> Result<(Source, PolarizedPairState)> {
    let s = build_source(ctx)?;
    let g = match ctx.params.pairing() {
        Pairing::Transpose => s.jsa.transpose(),
        Pairing::Same => s.jsa.clone(),
    };
    let family = ctx.params.family();
    let sign = ctx.params.sign();
    let pair = PolarizedPairState::new(s.jsa.clone(), g, sign, family)?;
    Ok((s, pair))
}

pub fn bell(ctx: &mut Ctx) -> Result<Outcome> {
    let (s, pair) = pair_state(ctx)?;
    let tau = tau_grid(&s);
    let mut csv = String::from("tau_s,rc_plus,rc_minus\n");
    for t in &tau {
        let (p, m) = bell_analyzer_rates(&pair, *t)?;
        csv.push_str(&format!("{},{},{}\n", f(*t), f(p), f(m)));
    }
    let (p0, m0) = bell_analyzer_rates(&pair, 0.0)?;
    let summary = json!({
        "rc_plus_at_zero": p0,
        "rc_minus_at_zero": m0,
        "bell_condition_residual": bell_condition_residual(&pair)?,
    });
    let files = vec![ctx.write_csv("bell.csv", &csv)?, ctx.write_json("bell.json", summary.clone())?];
    Ok(Outcome { summary, files })
}

pub fn polcorr(ctx: &mut Ctx) -> Result<Outcome> {
    let (_, pair) = pair_state(ctx)?;
    let theta_b = ctx.params.theta_b()?;
    let mut csv = String::from("theta_a_rad,rate\n");
    for k in 0..=180 {
        let ta = (k as f64).to_radians();
        csv.push_str(&format!("{},{}\n", f(ta), f(polarization_fringe(&pair, ta, theta_b))));
    }
    let summary = json!({
        "fringe_visibility": fringe_visibility(&pair),
        "bell_condition_residual": bell_condition_residual(&pair)?,
        "polarization_condition_residual": polarization_condition_residual(&pair),
    });
    let files = vec![ctx.write_csv("polcorr.csv", &csv)?, ctx.write_json("polcorr.json", summary.clone())?];
    Ok(Outcome { summary, files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DesignMode {
    Factorable,
    Threshold,
    Correlated,
    Regime,
}

pub fn design(ctx: &mut Ctx, mode: DesignMode) -> Result<Outcome> {
    let p = &mut ctx.params;
    let material = p.material(&ctx.lib)?;
    let pump = p.pump()?;
    let length = p.length()?;
    let theta = p.theta()?;
    let (name, report): (&str, DesignReport) = match mode {
        DesignMode::Factorable => ("factorable", factorable_design(&material, pump, length, theta)?),
        DesignMode::Threshold => {
            let sp = p.pump_sigma_opt()?;
            ("threshold", threshold_design(&material, pump, length, theta, sp)?)
        }
        DesignMode::Correlated => {
            let w0 = p.w0_required()?;
            ("correlated", correlated_design(&material, pump, length, theta, w0)?)
        }
        DesignMode::Regime => {
            let w0 = p.w0_or(|| factorable_waist(&material, pump, length, theta))?;
            let check = validate_waist_regime(w0, length, theta);
            let report = DesignReport {
                inputs: json!({ "w0_m": w0, "length_m": length, "theta_rad": theta }),
                quantity: "waist_regime_ratio".into(),
                value: check.ratio,
                unit: "1".into(),
                checks: vec![check],
                slopes: None,
            };
            ("regime", report)
        }
    };
    let summary = serde_json::to_value(&report)?;
    let files = vec![ctx.write_json(&format!("design_{name}.json"), summary.clone())?];
    Ok(Outcome { summary, files })
}

pub fn nsgate(ctx: &mut Ctx, optimize: bool, grid: usize) -> Result<Outcome> {
    let ideal = NSGateConfig::ideal();
    let r = *ctx.params.r.get_or_insert(ideal.r);
    let s = *ctx.params.s.get_or_insert(ideal.s);
    let map = ns_conditional_map(&NSGateConfig::new(r, s)?)?;
    let mz0 = homi_mz_stage_states(0.0)?;
    let mzpi = homi_mz_stage_states(std::f64::consts::PI)?;
    let mut summary = json!({
        "topology": NS_TOPOLOGY,
        "convention": NS_CONVENTION,
        "map": map,
        "homi_mz": { "coincidence_phase_0": mz0.coincidence, "coincidence_phase_pi": mzpi.coincidence },
    });
    if optimize {
        summary["optimum"] = serde_json::to_value(ns_optimize(grid)?)?;
    }
    let files = vec![ctx.write_json("nsgate.json", summary.clone())?];
    Ok(Outcome { summary, files })
}

fn economy_csv(rows: &[EconomyRecord]) -> String {
    let mut s = String::from("label,L_mm,P_W,Rs_Hz,ratio,R,reported_R,discrepancy\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.label,
            r.length_mm,
            r.power_w,
            r.singles_hz,
            r.coincidence_ratio,
            f(r.r),
            r.reported_r.map(|x| x.to_string()).unwrap_or_default(),
            r.discrepancy
        ));
    }
    s
}

pub fn economy(ctx: &mut Ctx) -> Result<Outcome> {
    let rows = match &ctx.params.csv {
        Some(path) => parse_economy_csv(&std::fs::read_to_string(path)?)?,
        None => table1(),
    };
    let summary = json!({ "unit": "Hz/(mm W)", "rows": rows });
    let files = vec![
        ctx.write_csv("economy.csv", &economy_csv(&rows))?,
        ctx.write_json("economy.json", summary.clone())?,
    ];
    Ok(Outcome { summary, files })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig3,
    Fig5,
    Fig7,
    Fig9,
}

const SURFACE_PLOT: &str = "set datafile separator ','; splot '{}' every ::1 using 1:2:($3**2+$4**2) with pm3d";

fn surface_plot(file: &str) -> String {
    SURFACE_PLOT.replace("{}", file)
}

pub fn reproduce(ctx: &mut Ctx, figure: Figure) -> Result<Outcome> {
    let mut files = Vec::new();
    let summary = match figure {
        Figure::Fig1 => {
            let material = ctx.params.material(&ctx.lib)?;
            let mut cfg = UltrafastConfig::default();
            cfg.n_points = ctx.params.n_points.unwrap_or(cfg.n_points);
            let (a, b) = ultrafast_pair(&material, &cfg)?;
            let (ka, kb) = (schmidt_svd(&a)?.k, schmidt_svd(&b)?.k);
            files.extend(ctx.write_jsa("fig1_type_i", &a)?);
            files.extend(ctx.write_jsa("fig1_type_ii", &b)?);
            json!({
                "preset": cfg,
                "k_type_i_noncollinear": ka,
                "k_type_ii_collinear": kb,
                "type_i_more_entangled": ka > kb,
                "plot": surface_plot("fig1_type_i.csv"),
            })
        }
        Figure::Fig3 => {
            let (sigma, _) = ctx.params.model_widths()?;
            let rows = visibility_tradeoff(sigma, 1e-2, 1e2, 81)?;
            let mut csv = String::from("sigma_f_rad_s,ratio,visibility,baseline\n");
            for r in &rows {
                csv.push_str(&format!("{},{},{},{}\n", f(r.sigma_f), f(r.ratio), f(r.visibility), f(r.baseline)));
            }
            files.push(ctx.write_csv("fig3.csv", &csv)?);
            json!({
                "sigma_rad_s": sigma,
                "points": rows.len(),
                "plot": "set datafile separator ','; set logscale x; plot 'fig3.csv' every ::1 using 2:3 with lines title 'V', '' every ::1 using 2:4 with lines title 'R0'",
            })
        }
        Figure::Fig5 | Figure::Fig7 => {
            let material = ctx.params.material(&ctx.lib)?;
            let mut cfg = if figure == Figure::Fig5 {
                BeamDesignConfig::factorable(&material)?
            } else {
                BeamDesignConfig::correlated()
            };
            cfg.n_points = ctx.params.n_points.unwrap_or(cfg.n_points);
            let tag = if figure == Figure::Fig5 { "fig5" } else { "fig7" };
            let surfaces = cfg.surfaces(&material)?;
            for (name, s) in ["longitudinal", "transverse", "pump", "product"].iter().zip(surfaces.iter()) {
                files.push(ctx.write(&format!("{tag}_{name}.csv"), &to_csv_string(s, Some(&ctx.config())))?);
            }
            let jsa = cfg.jsa(&material)?;
            let k = schmidt_svd(&jsa)?.k;
            let pump = Wavelength::from_nm(cfg.pump_nm);
            let margin = freq_correlated_margin(&material, pump, cfg.length_m, cfg.theta_rad, cfg.w0_m)?;
            json!({
                "preset": cfg,
                "k": k,
                "intensity_correlation": jsa.intensity_correlation(),
                "frequency_correlated_margin": margin,
                "waist_regime": validate_waist_regime(cfg.w0_m, cfg.length_m, cfg.theta_rad),
                "plot": surface_plot(&format!("{tag}_product.csv")),
            })
        }
        Figure::Fig9 => {
            let rows = sixfold_curve(ctx.params.n_modes)?;
            files.push(ctx.write_csv("fig9.csv", &rate_curve_csv(&rows))?);
            json!({
                "rows": rows,
                "topology": NS_TOPOLOGY,
                "convention": NS_CONVENTION,
                "plot": "set datafile separator ','; plot 'fig9.csv' every ::1 using 1:2 with linespoints",
            })
        }
    };
    let name = format!("{}.json", serde_json::to_value(figure)?.as_str().unwrap_or("figure"));
    files.push(ctx.write_json(&name, summary.clone())?);
    Ok(Outcome { summary, files })
}

pub fn out_dir(out: Option<&Path>) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("pdcsim_out"))
}
