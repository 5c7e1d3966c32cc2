//! Command-line front end: single-point solves, dark-mode diagnostics,
//! parameter sweeps, and figure-dataset generation.
//!
//! Exit codes (stable, scriptable):
//!   0  success; for `darkmode`, the dark mode exists
//!   1  internal/numerical/IO failure
//!   2  configuration or argument error
//!   3  no steady state (unstable or marginal drift)
//!   4  `darkmode` only: the dark mode is broken

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use optonet::config;
use optonet::error::Error;
use optonet::model::NetworkParams;
use optonet::presets::figure_preset;
use optonet::report::{self, Tolerances};
use optonet::sweep::{self, GridSpec, Manifest, OutputKind, SweepAxis, SweepSpec};

#[derive(Parser)]
#[command(
    name = "optonet",
    version,
    about = "Steady-state entanglement and dark-mode diagnostics for a four-mode optomechanical network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sweeps (defaults to the number of cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Parameter file (flat `key = value` lines, `#` comments).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Inline override `key=value`; repeatable, wins over --config.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<NetworkParams, Error> {
        let mut params = match &self.config {
            Some(path) => config::load_config(path)?,
            None => NetworkParams::default(),
        };
        config::apply_overrides(&mut params, &self.set)?;
        Ok(params)
    }
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Stability margin on max Re eig(A).
    #[arg(long = "tol-stability", default_value_t = optonet::DEFAULT_STABILITY_MARGIN)]
    tol_stability: f64,

    /// Lyapunov residual bound relative to the largest diffusion entry.
    #[arg(long = "tol-residual", default_value_t = optonet::lyapunov::RESIDUAL_RTOL)]
    tol_residual: f64,

    /// Relative tolerance of the dark-mode verdicts.
    #[arg(long = "tol-dark", default_value_t = optonet::darkmode::DEFAULT_DARK_MODE_TOL)]
    tol_dark: f64,

    /// Clamp tolerance for the negativity discriminant.
    #[arg(long = "tol-clamp", default_value_t = optonet::entanglement::DISCRIMINANT_CLAMP_TOL)]
    tol_clamp: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            stability_margin: self.tol_stability,
            residual_rtol: self.tol_residual,
            dark_mode_tol: self.tol_dark,
            clamp_tol: self.tol_clamp,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one parameter point: stability, covariance, all pair negativities.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tols: TolArgs,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Dark-mode conditions, hybrid modes, and collective-coordinate analysis.
    Darkmode {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tols: TolArgs,
        /// Also classify all fourteen switch-off configurations.
        #[arg(long)]
        taxonomy: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one or two parameters over a grid.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tols: TolArgs,
        /// Axis spec `field[+field]=linear:START:STOP:COUNT`,
        /// `...=log10:START:STOP:COUNT` or `...=list:V1,V2,...`; repeat for a
        /// second axis.
        #[arg(long, value_name = "AXIS", required = true)]
        axis: Vec<String>,
        /// Requested outputs (comma-separated): en_a_b1, en_a_b2, en_b1_b2,
        /// sigma_a_b1, sigma_a_b2, sigma_b1_b2, max_re_eig, m1, m2.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "en_a_b1,en_a_b2,en_b1_b2"
        )]
        output: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Generate a named figure dataset (CSV + JSON manifest per variant).
    Figure {
        /// Preset name, e.g. fig2a or fig6c.
        name: String,
        /// Output directory for `<preset>__<variant>.csv` / `.json`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        tols: TolArgs,
    },
}

fn parse_axis(raw: &str) -> Result<SweepAxis, Error> {
    let bad = |msg: String| Error::Sweep(msg);
    let (lhs, rhs) = raw
        .split_once('=')
        .ok_or_else(|| bad(format!("axis `{raw}` is missing `=`")))?;
    let fields: Vec<&str> = lhs.trim().split('+').map(str::trim).collect();
    let parts: Vec<&str> = rhs.trim().split(':').collect();
    let parse_f = |s: &str| -> Result<f64, Error> {
        s.parse()
            .map_err(|_| bad(format!("`{s}` in axis `{raw}` is not a number")))
    };
    let grid = match parts.as_slice() {
        ["linear", start, stop, count] => GridSpec::Linear {
            start: parse_f(start)?,
            stop: parse_f(stop)?,
            count: count
                .parse()
                .map_err(|_| bad(format!("bad count `{count}` in axis `{raw}`")))?,
        },
        ["log10", start, stop, count] => GridSpec::Log10 {
            start: parse_f(start)?,
            stop: parse_f(stop)?,
            count: count
                .parse()
                .map_err(|_| bad(format!("bad count `{count}` in axis `{raw}`")))?,
        },
        ["list", values] => GridSpec::Explicit {
            values: values
                .split(',')
                .map(parse_f)
                .collect::<Result<Vec<_>, _>>()?,
        },
        _ => {
            return Err(bad(format!(
                "axis `{raw}` must use linear:START:STOP:COUNT, log10:START:STOP:COUNT \
                 or list:V1,V2,..."
            )))
        }
    };
    Ok(SweepAxis::joint(lhs.trim(), &fields, grid))
}

fn parse_outputs(names: &[String]) -> Result<Vec<OutputKind>, Error> {
    let all = [
        OutputKind::EnAB1,
        OutputKind::EnAB2,
        OutputKind::EnB1B2,
        OutputKind::SigmaAB1,
        OutputKind::SigmaAB2,
        OutputKind::SigmaB1B2,
        OutputKind::MaxReEig,
        OutputKind::M1,
        OutputKind::M2,
    ];
    names
        .iter()
        .map(|name| {
            all.iter()
                .copied()
                .find(|k| k.column() == name.trim())
                .ok_or_else(|| {
                    Error::Sweep(format!(
                        "unknown output `{name}`; valid outputs: {}",
                        all.map(|k| k.column()).join(", ")
                    ))
                })
        })
        .collect()
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidParam { .. }
        | Error::Config { .. }
        | Error::UnknownMode(_)
        | Error::ModeAbsent(_)
        | Error::UnknownPreset { .. }
        | Error::Sweep(_)
        | Error::DegenerateConfiguration(_)
        | Error::UnsupportedConfiguration(_)
        | Error::Contract(_) => 2,
        Error::Unstable { .. } | Error::Marginal { .. } => 3,
        Error::Numerical(_) | Error::UnphysicalCovariance(_) | Error::Io(_) => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve {
            params,
            tols,
            out,
            format,
        } => {
            let params = params.resolve()?;
            let report = report::solve_point(&params, &tols.tolerances())?;
            let rendered = match format {
                Format::Json => report::to_json(&report),
                Format::Csv => report::report_to_csv(&report),
            };
            write_output(&out, &rendered)?;
            if !report.is_stable() {
                eprintln!(
                    "no steady state: drift is {} (max Re eig = {:.6e})",
                    report.stability.class, report.stability.max_re
                );
                return Ok(3);
            }
            Ok(0)
        }
        Command::Darkmode {
            params,
            tols,
            taxonomy,
            out,
        } => {
            let params = params.resolve()?;
            params.validate()?;
            let diag = report::darkmode_diagnostics(&params, &tols.tolerances(), taxonomy)?;
            let exists = diag.dark_mode.dark_mode_exists;
            write_output(&out, &report::to_json(&diag))?;
            Ok(if exists { 0 } else { 4 })
        }
        Command::Sweep {
            params,
            tols,
            axis,
            output,
            out,
            format,
        } => {
            if axis.len() > 2 {
                return Err(Error::Sweep(format!(
                    "a sweep takes at most 2 axes, got {}",
                    axis.len()
                )));
            }
            let base = params.resolve()?;
            let axes = axis
                .iter()
                .map(|a| parse_axis(a))
                .collect::<Result<Vec<_>, _>>()?;
            let outputs = parse_outputs(&output)?;
            let mut spec = SweepSpec::new(base, axes, outputs);
            spec.stability_margin = tols.tol_stability;
            let started = Instant::now();
            let result = sweep::run_sweep(&spec)?;
            let (ok, unstable, error) = result.count_status();
            eprintln!(
                "swept {} points in {:.2?} ({ok} ok, {unstable} unstable, {error} error)",
                result.n_points(),
                started.elapsed()
            );
            let rendered = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    sweep::write_csv(&result, &mut buf)?;
                    String::from_utf8(buf).expect("csv is utf-8")
                }
                Format::Json => report::to_json(&result),
            };
            write_output(&out, &rendered)?;
            Ok(0)
        }
        Command::Figure {
            name,
            out_dir,
            tols,
        } => {
            let preset = figure_preset(&name)?;
            fs::create_dir_all(&out_dir)?;
            for variant in &preset.variants {
                let mut spec = variant.spec.clone();
                spec.stability_margin = tols.tol_stability;
                let started = Instant::now();
                let result = sweep::run_sweep(&spec)?;
                let base = format!("{}__{}", preset.name, variant.label);
                let csv_path = out_dir.join(format!("{base}.csv"));
                let json_path = out_dir.join(format!("{base}.json"));
                let mut buf = Vec::new();
                sweep::write_csv(&result, &mut buf)?;
                fs::write(&csv_path, &buf)?;
                let manifest = Manifest::new(&result, Some(preset.name), Some(&variant.label));
                fs::write(&json_path, manifest.to_json())?;
                eprintln!(
                    "{}: {} points in {:.2?} -> {}",
                    base,
                    result.n_points(),
                    started.elapsed(),
                    csv_path.display()
                );
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: could not configure {n} workers: {err}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
