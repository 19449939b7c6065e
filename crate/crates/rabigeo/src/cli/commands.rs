//! Argument parsing, config merging, and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
//! singularity.

use super::config::RunConfig;
use super::figures;
use super::probe;
use super::validate::{run_validation, Fault};
use crate::error::Error;
use clap::{Parser, Subcommand};
use std::io::Write as _;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "rabigeo",
    about = "Information geometry of off-resonant two-level driving: figure data, validation, probes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Detuning value(s) β₀, comma separated
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    beta0: Option<Vec<f64>>,

    /// Driving scheme: constant | oscillatory | powerlaw | exponential
    #[arg(long, global = true)]
    scheme: Option<String>,

    /// Transverse intensity rate Γ/ħ
    #[arg(long, global = true)]
    gamma_rate: Option<f64>,

    /// Envelope rate λ
    #[arg(long, global = true)]
    lambda: Option<f64>,

    /// Initial position θ₀
    #[arg(long, global = true)]
    theta0: Option<f64>,

    /// Initial velocity θ'₀
    #[arg(long, global = true)]
    theta_dot0: Option<f64>,

    /// Integrator tolerance (absolute = relative)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Sample count / grid resolution override
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Output path (stdout when omitted); fig4 derives one file per table
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Machine-readable JSON where supported
    #[arg(long, global = true)]
    json: bool,

    /// Also write a gnuplot script stub next to --out
    #[arg(long, global = true)]
    gnuplot: bool,

    /// JSON config file with the same keys as the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Success probability vs θ, one column per detuning
    Fig1,
    /// Geodesic paths θ(ξ) for all schemes, resonant and detuned panels
    Fig2,
    /// Off-resonance speed vs θ₀: closed form against the integrated geodesic
    Fig3,
    /// Speeds and robustness coefficients vs θ₀ (three tables)
    Fig4,
    /// Dominance-region grid over (β₀, θ₀)
    Fig5,
    /// Run the cross-validation suites and emit a JSON report
    Validate {
        /// Scale factor applied to suite thresholds and integrator tolerances
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
        /// Negative control: corrupt a formula and expect the suites to fail
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Evaluate one operation with explicit parameters
    Probe {
        /// Operation name; run with an unknown name to list all operations
        operation: String,
        /// Positional parameters; `default` keeps a slot at its default
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Io(_) | Error::Json(_) => 2,
        Error::TanPole { .. }
        | Error::StepUnderflow { .. }
        | Error::MaxSteps { .. }
        | Error::UnitarityLoss { .. }
        | Error::QuadratureDepth { .. }
        | Error::DivisionByZero(_)
        | Error::NoResonance { .. } => 3,
    }
}

/// Merge defaults ← config file ← flags; report whether β₀ was set explicitly.
fn merge_config(cli: &Cli) -> crate::error::Result<(RunConfig, bool)> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let mut beta0_explicit = cli.config.is_some();
    if let Some(b) = &cli.beta0 {
        cfg.beta0 = b.clone();
        beta0_explicit = true;
    }
    if let Some(s) = &cli.scheme {
        cfg.scheme = Some(s.clone());
    }
    if let Some(v) = cli.gamma_rate {
        cfg.gamma_rate = v;
    }
    if let Some(v) = cli.lambda {
        cfg.lambda = v;
    }
    if let Some(v) = cli.theta0 {
        cfg.theta0 = v;
    }
    if let Some(v) = cli.theta_dot0 {
        cfg.theta_dot0 = v;
    }
    if let Some(v) = cli.tol {
        cfg.tol = v;
    }
    if let Some(v) = cli.grid {
        cfg.grid = Some(v);
    }
    cfg.validate()?;
    Ok((cfg, beta0_explicit))
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8], gnuplot: bool) -> crate::error::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            if gnuplot {
                write_gnuplot_stub(path)?;
            }
        }
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn write_gnuplot_stub(csv_path: &Path) -> crate::error::Result<()> {
    let name = csv_path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data.csv".to_string());
    std::fs::write(csv_path.with_extension("gp"), figures::gnuplot_stub(&name))?;
    Ok(())
}

fn fig4_path(base: &Path, label: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = base.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}_{label}.{ext}"))
}

fn execute(cli: &Cli) -> crate::error::Result<i32> {
    let (cfg, beta0_explicit) = merge_config(cli)?;
    match &cli.command {
        Command::Fig1 => write_output(&cli.out, &figures::emit_fig1(&cfg)?, cli.gnuplot)?,
        Command::Fig2 => write_output(&cli.out, &figures::emit_fig2(&cfg, beta0_explicit)?, cli.gnuplot)?,
        Command::Fig3 => write_output(&cli.out, &figures::emit_fig3(&cfg, beta0_explicit)?, cli.gnuplot)?,
        Command::Fig4 => {
            let parts = figures::emit_fig4(&cfg, beta0_explicit)?;
            match &cli.out {
                Some(base) => {
                    for (label, bytes) in &parts {
                        let path = fig4_path(base, label);
                        std::fs::write(&path, bytes)?;
                        if cli.gnuplot {
                            write_gnuplot_stub(&path)?;
                        }
                    }
                }
                None => {
                    let mut stdout = std::io::stdout();
                    for (label, bytes) in &parts {
                        writeln!(stdout, "# table: {label}")?;
                        stdout.write_all(bytes)?;
                    }
                }
            }
        }
        Command::Fig5 => {
            let bytes = if cli.json { figures::emit_fig5_json(&cfg)? } else { figures::emit_fig5(&cfg)? };
            write_output(&cli.out, &bytes, cli.gnuplot && !cli.json)?;
        }
        Command::Validate { tol_scale, inject_fault } => {
            let fault = inject_fault.as_deref().map(Fault::parse).transpose()?;
            let report = run_validation(&cfg, *tol_scale, fault)?;
            for s in &report.suites {
                eprintln!(
                    "{}: {} (max deviation {:.3e}, threshold {:.3e}, margin {:.1}x)",
                    s.name,
                    if s.pass { "PASS" } else { "FAIL" },
                    s.max_deviation,
                    s.threshold,
                    s.margin_factor
                );
                if !s.pass {
                    eprintln!("  worst case: {}", s.worst_case);
                }
            }
            let bytes = serde_json::to_vec_pretty(&report)?;
            write_output(&cli.out, &bytes, false)?;
            println!();
            return Ok(if report.pass { 0 } else { 1 });
        }
        Command::Probe { operation, args } => {
            let values = probe::evaluate(&cfg, operation, args)?;
            let bytes = if cli.json {
                let map: serde_json::Map<String, serde_json::Value> = values
                    .iter()
                    .map(|(k, v)| {
                        let jv = serde_json::Number::from_f64(*v)
                            .map(serde_json::Value::Number)
                            .unwrap_or(serde_json::Value::Null);
                        (k.clone(), jv)
                    })
                    .collect();
                let obj = serde_json::json!({ "operation": operation, "result": map });
                let mut b = serde_json::to_vec_pretty(&obj)?;
                b.push(b'\n');
                b
            } else {
                let line = values.iter().map(|(_, v)| format!("{v:.17e}")).collect::<Vec<_>>().join(",");
                format!("{line}\n").into_bytes()
            };
            write_output(&cli.out, &bytes, false)?;
        }
    }
    Ok(0)
}

/// Parse arguments from the environment, run, and return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
