//! `wco`: certification sweeps and algebraic classification for weighted
//! composition operators, reported as JSON.

mod config;
mod report;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wco_core::theorems::FamilyTag;

use config::{parse_params, ClassifyConfig, InputError, ParamSource, RunConfig};
use report::ReportDocument;

/// Relative `--out` paths are resolved against this directory when it is set.
const OUT_DIR_VAR: &str = "WCO_OUT_DIR";

#[derive(Parser)]
#[command(name = "wco", version, about = "Certify weighted composition operator identities on H^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one family on random draws or explicit parameters.
    Certify(CertifyArgs),
    /// Classify `W_{psi,phi}` as algebraic of degree at most 2 or not.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// cs-2.3 (alias cs), unitary, hermitian, normal-interior, boundary-normal or algebraic.
    #[arg(long)]
    family: FamilyTag,
    #[arg(long, default_value_t = 128)]
    order: usize,
    #[arg(long = "tol", default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random parameter sets.
    #[arg(long, conflicts_with = "params", required_unless_present = "params")]
    draws: Option<usize>,
    /// Explicit parameters as a JSON object, e.g. '{"q": 0.5, "mu1": 1, "mu2": "0+1i"}'.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 0.6)]
    safety_radius: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    psi: String,
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    #[arg(long, default_value_t = 128)]
    order: usize,
    #[arg(long = "tol", default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn certify(args: CertifyArgs) -> Result<ReportDocument, InputError> {
    let source = match (args.draws, &args.params) {
        (_, Some(json)) => ParamSource::Explicit(parse_params(args.family, json)?),
        (Some(k), None) => ParamSource::Draws(k),
        (None, None) => unreachable!("clap requires one of --draws and --params"),
    };
    let config = RunConfig {
        family: args.family,
        order: args.order,
        tolerance: args.tolerance,
        seed: args.seed,
        safety_radius: args.safety_radius,
        source,
    };
    run::certify(&config)
}

fn classify(args: ClassifyArgs) -> Result<ReportDocument, InputError> {
    run::classify(&ClassifyConfig { psi: args.psi, phi: args.phi, order: args.order, tolerance: args.tolerance })
}

fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(doc: &ReportDocument, out: Option<&Path>) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(doc).expect("report serializes") + "\n";
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let path = resolve_out(path);
            let fail = |source| InputError::Output { path: path.display().to_string(), source };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(fail)?;
            }
            std::fs::write(&path, text).map_err(fail)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (doc, out) = match cli.command {
        Command::Certify(args) => {
            let out = args.out.clone();
            (certify(args), out)
        }
        Command::Classify(args) => {
            let out = args.out.clone();
            (classify(args), out)
        }
    };
    let result = doc.and_then(|doc| emit(&doc, out.as_deref()).map(|_| doc));
    match result {
        Ok(doc) => {
            let s = &doc.summary;
            eprintln!("{}/{} passed, {} of {} checks failed", s.draws_passed, s.draws, s.checks_failed, s.checks);
            if doc.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
