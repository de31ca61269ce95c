use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hallaire::study::{
    emit_report, parse_config, run_study, self_check, write_report, ReportFormat, StudySettings,
};

/// Runs a convergence study on a bundled manufactured problem.
///
/// Exit status: 0 on success or a passing self-check, 1 when the self-check
/// fails, 2 on usage or configuration errors.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Flat `key = value` configuration file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fractional orders, comma separated.
    #[arg(long)]
    alpha: Option<String>,
    /// Spatial ladder: counts (`6,12`) or steps (`1/6,1/12`).
    #[arg(long)]
    nx: Option<String>,
    /// Temporal ladder: counts or steps.
    #[arg(long)]
    nt: Option<String>,
    /// `spatial` or `temporal`.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    problem: Option<String>,
    /// `woodbury` or `dense`.
    #[arg(long)]
    backend: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `csv` or `markdown`.
    #[arg(long)]
    format: Option<String>,
    /// Compare against a bundled table (`table1` or `table2`).
    #[arg(long)]
    self_check: Option<String>,
    /// Include the expensive temporal rungs of `table2` (M up to 5120).
    #[arg(long)]
    deep: bool,
}

fn overrides(args: &Args) -> hallaire::Result<StudySettings> {
    let mut s = StudySettings::default();
    let pairs = [
        ("alpha", &args.alpha),
        ("nx", &args.nx),
        ("nt", &args.nt),
        ("mode", &args.mode),
        ("problem", &args.problem),
        ("backend", &args.backend),
        ("format", &args.format),
        ("reference", &args.self_check),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            s.set(key, v)?;
        }
    }
    s.out = args.out.clone();
    if args.deep {
        s.deep = Some(true);
    }
    Ok(s)
}

fn settings(args: &Args) -> hallaire::Result<StudySettings> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| hallaire::Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_config(&text)?
        }
        None => StudySettings::default(),
    };
    Ok(file.overridden_by(overrides(args)?))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let settings = match settings(&args) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let config = match settings.to_study() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format = settings.format.unwrap_or(ReportFormat::Csv);

    if let Some(table) = settings.reference_table() {
        let table = match table {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        };
        return match self_check(&config, &table) {
            Ok(summary) => {
                println!("{summary}");
                if summary.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }

    let report = match run_study(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &settings.out {
        Some(path) => write_report(&report, format, path),
        None => emit_report(&report, format).map(|text| print!("{text}")),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
