//! Command-line front end. Every artifact lands under `--out` with a fixed
//! name per subcommand and embeds the resolved configuration.

mod commands;
mod params;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

pub use commands::{DesignMode, Figure};
pub use params::{FamilyArg, Pairing, Params, PdcKind, SignArg, SourceKind};

use crate::dispersion::MaterialLibrary;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "pdcsim", version, about = "Spectral engineering of photon pairs from parametric down-conversion")]
pub struct Cli {
    /// Sellmeier data file replacing the built-in materials.
    #[arg(long, global = true)]
    pub materials: Option<PathBuf>,
    /// Output directory (default ./pdcsim_out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file of parameters; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a joint spectral amplitude: jsa.csv, jsa.json.
    Jsa(#[command(flatten)] Params),
    /// Schmidt decomposition: schmidt.json, schmidt_eigenvalues.csv, schmidt_modes.csv.
    Schmidt(#[command(flatten)] Params),
    /// Two-source HOM dip: homi.json, homi_dip.csv.
    Homi(#[command(flatten)] Params),
    /// Bell-analyzer rates versus delay: bell.json, bell.csv.
    Bell(#[command(flatten)] Params),
    /// Polarization-correlation fringe: polcorr.json, polcorr.csv.
    Polcorr(#[command(flatten)] Params),
    /// Source design solvers: design_<mode>.json.
    Design {
        #[arg(value_enum)]
        mode: DesignMode,
        #[command(flatten)]
        params: Params,
    },
    /// NS gate conditional map and interferometer test: nsgate.json.
    Nsgate {
        /// Also search (r, s) for the sign-flip map.
        #[arg(long)]
        optimize: bool,
        /// Points per axis of the optimizer scan.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[command(flatten)]
        params: Params,
    },
    /// Economy figure of merit: economy.csv, economy.json.
    Economy(#[command(flatten)] Params),
    /// Data behind a figure: <fig>.json plus CSV tables.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        #[command(flatten)]
        params: Params,
    },
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Jsa(_) => "jsa".into(),
            Command::Schmidt(_) => "schmidt".into(),
            Command::Homi(_) => "homi".into(),
            Command::Bell(_) => "bell".into(),
            Command::Polcorr(_) => "polcorr".into(),
            Command::Design { mode, .. } => format!("design {}", value_name(mode)),
            Command::Nsgate { .. } => "nsgate".into(),
            Command::Economy(_) => "economy".into(),
            Command::Reproduce { figure, .. } => format!("reproduce {}", value_name(figure)),
        }
    }

    fn params(&self) -> &Params {
        match self {
            Command::Jsa(p)
            | Command::Schmidt(p)
            | Command::Homi(p)
            | Command::Bell(p)
            | Command::Polcorr(p)
            | Command::Economy(p)
            | Command::Design { params: p, .. }
            | Command::Nsgate { params: p, .. }
            | Command::Reproduce { params: p, .. } => p,
        }
    }
}

fn value_name<T: clap::ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// Exit status for an error: 2 for invalid input, 3 when the numerics or an
/// approximation regime refuse the request, 1 for I/O.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

/// Runs one parsed command and returns its stdout summary.
pub fn execute(cli: Cli) -> Result<serde_json::Value> {
    let lib = match &cli.materials {
        Some(p) => MaterialLibrary::from_file(p)?,
        None => MaterialLibrary::builtin(),
    };
    let file = match &cli.config {
        Some(p) => Params::from_json(&std::fs::read_to_string(p)?)?,
        None => Params::default(),
    };
    let mut ctx = commands::Ctx {
        command: cli.command.name(),
        out: commands::out_dir(cli.out.as_deref()),
        materials_file: cli.materials.clone(),
        lib,
        params: cli.command.params().clone().merged_over(file),
    };
    let outcome = match &cli.command {
        Command::Jsa(_) => commands::jsa(&mut ctx)?,
        Command::Schmidt(_) => commands::schmidt(&mut ctx)?,
        Command::Homi(_) => commands::homi(&mut ctx)?,
        Command::Bell(_) => commands::bell(&mut ctx)?,
        Command::Polcorr(_) => commands::polcorr(&mut ctx)?,
        Command::Design { mode, .. } => commands::design(&mut ctx, *mode)?,
        Command::Nsgate { optimize, grid, .. } => commands::nsgate(&mut ctx, *optimize, *grid)?,
        Command::Economy(_) => commands::economy(&mut ctx)?,
        Command::Reproduce { figure, .. } => commands::reproduce(&mut ctx, *figure)?,
    };
    Ok(json!({
        "command": ctx.command,
        "result": outcome.summary,
        "files": outcome.files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    }))
}

fn error_json(kind: &str, message: &str, code: i32) -> String {
    json!({ "error": { "kind": kind, "message": message, "exit_code": code } }).to_string()
}

/// Parses `argv`, runs the command, prints the summary or a JSON error and
/// returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "{}", error_json("usage", &e.to_string(), 2));
            return 2;
        }
    };
    match execute(cli).and_then(|v| crate::json::to_string_pretty(&v)) {
        Ok(text) => {
            let _ = write!(stdout, "{text}");
            0
        }
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(stderr, "{}", error_json(e.kind(), &e.to_string(), code));
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_capture(&["pdcsim", "bogus"]);
        assert_eq!(code, 2);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "usage");
        let (code, out, _) = run_capture(&["pdcsim", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("reproduce"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Invalid("x".into())), 2);
        assert_eq!(exit_code(&Error::Regime { what: "w".into(), required: 1.0, actual: 0.5 }), 3);
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 1);
    }
}
