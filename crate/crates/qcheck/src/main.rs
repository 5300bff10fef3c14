use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qc_core::cli::{emit_report, parse_d_params, run_suite, ConfigFile, Format, Suite};

/// Run a verification suite for quaternionic contact structures.
#[derive(Parser, Debug)]
#[command(name = "qcheck", version)]
struct Args {
    /// check-canonical, check-galicki, check-conformal, perturb, bianchi, symbols or deform-linearization
    suite: String,
    /// JSON config file; command-line options override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Ten parameters of the skew-hermitian D, comma or space separated
    #[arg(long = "D", num_args = 1..=10, allow_negative_numbers = true)]
    d: Option<Vec<String>>,
    /// json or text
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("qcheck: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let format: Format = match args.format.parse() {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let file = match &args.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match ConfigFile::parse(&text) {
                Ok(c) => c,
                Err(e) => return usage(e),
            },
            Err(e) => return usage(format!("{}: {e}", path.display())),
        },
        None => ConfigFile::default(),
    };
    let d = match args.d.as_ref().map(|parts| parse_d_params(&parts.join(","))) {
        Some(Ok(d)) => Some(d),
        Some(Err(e)) => return usage(e),
        None => None,
    };
    let overrides = ConfigFile {
        suite: Some(suite),
        seed: args.seed,
        points: args.points,
        fd_step: args.fd_step,
        tol: args.tol,
        d,
        ..Default::default()
    };
    let config = match file.overridden_by(overrides).resolve() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qcheck: {e}");
            return ExitCode::from(1);
        }
    };
    let bytes = emit_report(&report, format);
    let written = match &args.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("qcheck: {e}");
        return ExitCode::from(1);
    }
    if report.aggregate.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
