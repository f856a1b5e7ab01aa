//! `pseudoprob` — pseudo-probability schemes, negativity sweeps, classical
//! regions, spectrum audits and the entanglement monotone from the command line.
//!
//! Exit codes: 0 success, 2 usage or input-parse error, 3 domain error.

mod input;

use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pseudoprob::entanglement::{entanglement_report, TwoQubitPureState};
use pseudoprob::scan::{self, Family, Metadata, ScanResult};
use pseudoprob::scheme::build_scheme;
use pseudoprob::states::{density_from_bloch, BlochVector, Observable};
use serde::Serialize;
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(pseudoprob::Error),
}

impl From<pseudoprob::Error> for CliError {
    fn from(e: pseudoprob::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "pseudoprob", version, about = "Pseudo-probability schemes for qubit observables")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Tolerance below zero still counted as classical.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eps: f64,
    /// Angle inputs are in degrees.
    #[arg(long, global = true)]
    degrees: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    OrthogonalPair,
    OrthogonalTriple,
    FreePair,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::OrthogonalPair => Family::OrthogonalPair,
            FamilyArg::OrthogonalTriple => Family::OrthogonalTriple,
            FamilyArg::FreePair => Family::FreePair,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full pseudo-probability scheme of a qubit state for a list of directions.
    Scheme {
        /// Bloch vector `x,y,z`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "state", required_unless_present = "state")]
        bloch: Option<String>,
        /// State JSON: `{"bloch":[..]}` or `{"rho":{"dim":2,"re":[[..]],"im":[[..]]}}`.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Directions: `x`, `y`, `z`, `a,b,c`, or a preset (`coplanar120`, `orthogonal`).
        /// A leading `-` flips a named axis (write it as `--dirs=-z`).
        #[arg(long, num_args = 1.., allow_negative_numbers = true, required_unless_present = "dirs_file")]
        dirs: Vec<String>,
        /// JSON array of `{"m":[x,y,z]}`.
        #[arg(long, conflicts_with = "dirs")]
        dirs_file: Option<PathBuf>,
        /// `weyl`, `unit:K` or `weights:W1,W2,...`.
        #[arg(long, default_value = "weyl")]
        recipe: String,
    },
    /// Negativity of the aligned pair geometry as a function of θ.
    ScanNegativity {
        #[arg(long)]
        pnorm: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta_min: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta_max: Option<f64>,
        #[arg(long, default_value_t = 179, value_parser = clap::value_parser!(u64).range(2..))]
        steps: u64,
    },
    /// Monte Carlo estimate of the classical part of the Bloch ball.
    ClassicalRegion {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Number of pair angles tried per state (free-pair family).
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        geometry_grid: u64,
    },
    /// Minimum eigenvalue of ½{P,Q} for random projector pairs.
    Spectrum {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=16))]
        dim: u64,
        /// Ranks `r1,r2`.
        #[arg(long, default_value = "1,1")]
        ranks: String,
        #[arg(long, default_value_t = 1000)]
        pairs: u64,
        /// Draw pairs diagonal in a shared random basis.
        #[arg(long)]
        commuting: bool,
    },
    /// Entanglement monotone of a pure two-qubit state.
    Entanglement {
        /// State `cos α|00⟩ + sin α|11⟩`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "state", required_unless_present = "state")]
        schmidt_alpha: Option<f64>,
        /// JSON `{"amps_re":[..4..],"amps_im":[..4..]}` or `{"schmidt_alpha":α}`.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Qubit whose reduced state is used (0 or 1).
        #[arg(long, default_value_t = 0)]
        subsystem: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|text| emit(&cli.common, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(3)
        }
    }
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let c = &cli.common;
    let metadata = || Metadata::new(c.eps, c.deterministic);
    match &cli.command {
        Command::Scheme { bloch, state, dirs, dirs_file, recipe } => {
            let rho = match (bloch, state) {
                (Some(b), _) => density_from_bloch(&BlochVector::new(input::parse_vec3(b)?)?),
                (None, Some(path)) => input::load_state(path)?,
                (None, None) => unreachable!("clap requires one state source"),
            };
            let directions = match dirs_file {
                Some(path) => input::load_dirs(path)?,
                None => input::parse_dirs(dirs)?,
            };
            let recipe = input::parse_recipe(recipe)?;
            let observables: Vec<Observable> = directions.into_iter().map(Observable::qubit).collect();
            let scheme = build_scheme(&rho, &observables, &recipe)?;
            let report = scheme.to_report(c.eps);
            Ok(match c.format {
                Format::Json => to_json(&report),
                Format::Csv => {
                    let n = observables.len();
                    let mut out: Vec<String> = (1..=n).map(|k| format!("a{k}")).collect();
                    out.push("p".into());
                    let mut text = out.join(",") + "\n";
                    for e in &report.entries {
                        let mut row: Vec<String> = e.a.iter().map(|v| v.to_string()).collect();
                        row.push(scan::fmt_f64(e.p));
                        text += &(row.join(",") + "\n");
                    }
                    text += &format!("# negativity={}\n# classical={}\n", scan::fmt_f64(report.negativity), report.classical);
                    text
                }
            })
        }
        Command::ScanNegativity { pnorm, theta_min, theta_max, steps } => {
            let lo = theta_min.map_or(PI / 180.0, |t| input::angle(t, c.degrees));
            let hi = theta_max.map_or(PI - PI / 180.0, |t| input::angle(t, c.degrees));
            let sweep = scan::scan_negativity(*pnorm, lo, hi, *steps as usize)?;
            if sweep.clipped {
                eprintln!("warning: theta range clipped to ({}, π − {})", scan::THETA_MARGIN, scan::THETA_MARGIN);
            }
            let result = ScanResult {
                kind: "scan-negativity",
                params: json!({"pnorm": pnorm, "theta_min": lo, "theta_max": hi, "steps": steps, "seed": c.seed, "angle_unit": "rad"}),
                rows: sweep.rows,
                summary: None,
                metadata: metadata(),
            };
            Ok(render(c.format, &result))
        }
        Command::ClassicalRegion { family, samples, geometry_grid } => {
            let row = scan::classical_region((*family).into(), *samples as usize, c.seed, *geometry_grid as usize, c.eps)?;
            let result = ScanResult {
                kind: "classical-region",
                params: json!({"family": row.family, "samples": samples, "geometry_grid": geometry_grid, "seed": c.seed, "eps": c.eps}),
                rows: vec![row],
                summary: None,
                metadata: metadata(),
            };
            Ok(render(c.format, &result))
        }
        Command::Spectrum { dim, ranks, pairs, commuting } => {
            let r = input::parse_floats(ranks)?;
            let rank = |x: f64| {
                if x.fract() == 0.0 && x >= 1.0 {
                    Ok(x as usize)
                } else {
                    Err(CliError::Usage(format!("rank {x} is not a positive integer")))
                }
            };
            let [r1, r2] = <[f64; 2]>::try_from(r).map_err(|_| CliError::Usage(format!("--ranks expects r1,r2, got '{ranks}'")))?;
            let (r1, r2) = (rank(r1)?, rank(r2)?);
            let (rows, summary) = scan::spectrum_scan(*dim as usize, (r1, r2), *pairs as usize, c.seed, *commuting)?;
            let result = ScanResult {
                kind: "spectrum",
                params: json!({"dim": dim, "ranks": [r1, r2], "pairs": pairs, "commuting": commuting, "seed": c.seed}),
                rows,
                summary: Some(serde_json::to_value(summary).expect("serialisable")),
                metadata: metadata(),
            };
            if c.format == Format::Csv {
                eprintln!("pairs={} noncommuting={} violations={}", summary.pairs, summary.noncommuting, summary.violations);
            }
            Ok(render(c.format, &result))
        }
        Command::Entanglement { schmidt_alpha, state, subsystem } => {
            let psi = match (schmidt_alpha, state) {
                (Some(a), _) => TwoQubitPureState::schmidt(input::angle(*a, c.degrees)),
                (None, Some(path)) => input::load_pure_state(path, c.degrees)?,
                (None, None) => unreachable!("clap requires one state source"),
            };
            let report = entanglement_report(&psi, *subsystem)?;
            Ok(match c.format {
                Format::Json => to_json(&report),
                Format::Csv => format!(
                    "reduced_bloch_norm,n_max_reduced,monotone\n{},{},{}\n",
                    scan::fmt_f64(report.reduced_bloch_norm),
                    scan::fmt_f64(report.n_max_reduced),
                    scan::fmt_f64(report.monotone)
                ),
            })
        }
    }
}

fn render<R: Serialize + scan::CsvRow>(format: Format, result: &ScanResult<R>) -> String {
    match format {
        Format::Json => to_json(result),
        Format::Csv => result.to_csv(),
    }
}
