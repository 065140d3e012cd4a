use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lifshitz_cli::output::timestamp_line;
use lifshitz_cli::{has_errors, run_scenario, validate_config, write_records, CliError, Format, ScenarioConfig};

/// Van der Waals and Casimir-Polder calculations near a planar interface.
///
/// Exit codes: 0 success, 1 config error, 2 unconverged results, 3 internal error.
#[derive(Parser, Debug)]
#[command(name = "vdwcalc", version)]
struct Args {
    /// Scenario config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the config. Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format; overrides the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Relative quadrature tolerance; overrides the config.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Exit 0 even when some quadratures did not converge.
    #[arg(long)]
    allow_unconverged: bool,
    /// Omit the `# generated` header line.
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("vdwcalc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<u8, CliError> {
    let cfg = ScenarioConfig::load(&args.config)?;
    let diags = validate_config(&cfg);
    for d in &diags {
        eprintln!("{}: {d}", args.config.display());
    }
    if has_errors(&diags) {
        return Err(CliError::Invalid(format!("{} error(s) in {}", diags.iter().filter(|d| d.severity == lifshitz_cli::Severity::Error).count(), args.config.display())));
    }
    if let Some(t) = args.rel_tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Invalid(format!("--rel-tol: must lie in (0, 1), got {t}")));
        }
    }

    let quad = cfg.quadrature.spec(args.rel_tol);
    let out = run_scenario(&cfg, &quad)?;
    for note in &out.notes {
        eprintln!("{note}");
    }

    let format = args.format.or(cfg.output.format).unwrap_or_default();
    let header = (!args.no_timestamp).then(timestamp_line);
    let io_err = |e: io::Error| CliError::Io(format!("writing output: {e}"));
    match args.output.as_ref().or(cfg.output.path.as_ref()) {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_records(&out.records, format, header.as_deref(), &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => write_records(&out.records, format, header.as_deref(), io::stdout().lock()).map_err(io_err)?,
    }

    let unconverged = out.records.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        eprintln!("{unconverged} of {} results did not reach the requested tolerance", out.records.len());
        if !args.allow_unconverged {
            return Ok(2);
        }
    }
    Ok(0)
}
