mod config;
mod svg;
mod table;

use clap::{Parser, Subcommand};
use config::{load_suite, ConfigArgs};
use porism_core::centers::CenterId;
use porism_core::locus::{classify_sweep, sweep_center, MIN_SAMPLES};
use porism_core::verify::{verify_all, verify_only};
use porism_core::PorismError;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "porism", version, about = "Steiner chain porisms: sweeps, loci, checks and figures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// CSV of the polygon, contacts, caustic and half-tangent sums per phase.
    Sweep {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the registered checks and report PASS / FAIL / SUSPECTED_TYPO.
    Verify {
        /// `default` or a JSON suite file.
        #[arg(long, default_value = "default")]
        suite: String,
        /// Comma-separated claim ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Write the JSON report here (`-` for stdout instead of the table).
        #[arg(long)]
        json: Option<PathBuf>,
        /// List the registered claim ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// CSV of a triangle-center locus (N = 3).
    Locus {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        center: u32,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        /// Prepend the classification as a JSON comment line.
        #[arg(long)]
        classify: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG of the outer conic, caustic, chain at t = 0 and a center locus.
    Render {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Center whose locus is drawn; N = 3 defaults to 2.
        #[arg(long)]
        center: Option<u32>,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit code 2.
    Config(String),
    /// Checks failed or output could not be written: exit code 1.
    Runtime(String),
}

impl From<PorismError> for CliError {
    fn from(e: PorismError) -> Self {
        match e {
            PorismError::InvalidConfig(_) | PorismError::UnsupportedCenter(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display())))
        }
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn center_id(k: u32) -> Result<CenterId, CliError> {
    CenterId::new(k).map_err(|e| {
        let list: Vec<String> = CenterId::all().map(|c| c.index().to_string()).collect();
        CliError::Config(format!("{e}; supported: {}", list.join(", ")))
    })
}

fn check_samples(samples: usize) -> Result<(), CliError> {
    if samples < MIN_SAMPLES {
        return Err(CliError::Config(format!("--samples must be at least {MIN_SAMPLES}, got {samples}")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Sweep { cfg, samples, out } => {
            let (cfg, tol) = cfg.resolve()?;
            if samples == 0 {
                return Err(CliError::Config("--samples must be positive".into()));
            }
            emit(out.as_deref(), &table::sweep_csv(&cfg, samples, &tol)?)
        }
        Cmd::Verify { suite, only, json, list } => {
            if list {
                for id in porism_core::verify::claim_ids() {
                    println!("{id}");
                }
                return Ok(());
            }
            let suite = load_suite(&suite)?;
            let report = if only.is_empty() {
                verify_all(&suite)?
            } else {
                let ids: Vec<&str> = only.iter().map(|s| s.trim()).collect();
                verify_only(&suite, &ids)?
            };
            let mut body = report.to_json();
            body.push('\n');
            match json.as_deref() {
                Some(p) if p == Path::new("-") => print!("{body}"),
                Some(p) => {
                    emit(Some(p), &body)?;
                    print!("{}", report.to_table());
                }
                None => print!("{}", report.to_table()),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Runtime(format!("{} claim(s) failed", report.failures())))
            }
        }
        Cmd::Locus { cfg, center, samples, classify, svg: svg_out, out } => {
            let id = center_id(center)?;
            check_samples(samples)?;
            let (cfg, tol) = cfg.resolve()?;
            let sweep = sweep_center(&cfg, id, samples, &tol)?;
            let result = if classify {
                Some(classify_sweep(&sweep, &tol).map_err(|e| CliError::Runtime(e.to_string()))?)
            } else {
                None
            };
            if let Some(p) = &svg_out {
                emit(Some(p), &svg::render(&cfg, &tol, Some((id.index(), &sweep.points))))?;
            }
            emit(out.as_deref(), &table::locus_csv(&sweep, result.as_ref())?)
        }
        Cmd::Render { cfg, center, samples, out } => {
            let (cfg, tol) = cfg.resolve()?;
            let center = match center {
                Some(k) => Some(center_id(k)?),
                None if cfg.n() == 3 => Some(center_id(2)?),
                None => None,
            };
            let figure = match center {
                Some(id) => {
                    check_samples(samples)?;
                    let sweep = sweep_center(&cfg, id, samples, &tol)?;
                    svg::render(&cfg, &tol, Some((id.index(), &sweep.points)))
                }
                None => svg::render(&cfg, &tol, None),
            };
            emit(out.as_deref(), &figure)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
