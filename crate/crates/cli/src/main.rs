use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghostsim_cli::sweep::{run_sweep, write_outputs, SweepSpec};
use ghostsim_cli::verify::{verify, VerifyOptions};
use ghostsim_cli::{as_config_file, threshold, CliError, ResultRecord, Setup};

#[derive(Parser)]
#[command(name = "ghostsim", version, about = "Charge superpositions entangled with scalar field modes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a parameter sweep and write CSV/JSON records.
    Sweep { config: PathBuf },
    /// Report the charges at which a superposition stops being detectable.
    Threshold { config: PathBuf },
    /// Run the Fock-space self-checks.
    Verify {
        #[arg(long = "fock-N", default_value_t = ghostsim::fock::DEFAULT_TRUNCATION)]
        fock_n: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate a single geometry or scenario and print its record as JSON.
    Scenario { config: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep { config } => {
            let spec = SweepSpec::load(&config)?;
            let outcome = run_sweep(&spec)?;
            for path in write_outputs(&spec, &outcome)? {
                eprintln!("wrote {}", path.display());
            }
            if let Some(fit) = outcome.summary.log_slope {
                eprintln!("slope of n vs ln(delta_r): {:.6e}", fit.slope);
                if let (Some(e), Some(r)) = (fit.expected, fit.relative_error) {
                    eprintln!("expected (2 alpha/pi) q^2:  {e:.6e} (relative difference {r:.2e})");
                }
            }
        }
        Command::Threshold { config } => {
            let (spec, ctx) = threshold::load(&config)?;
            println!("{}", threshold::report_threshold(&spec, &ctx)?);
        }
        Command::Verify { fock_n, tol } => {
            if let Some(t) = tol.filter(|t| !(t.is_finite() && *t >= 0.0)) {
                return Err(CliError::Config(format!("--tol must be a nonnegative number, got {t}")));
            }
            let report = verify(&VerifyOptions { fock_n, tol, flip_ghost_sign: false });
            println!("{report}");
            if !report.passed() {
                return Err(CliError::Numeric("verification failed".into()));
            }
        }
        Command::Scenario { config } => {
            let cfg = as_config_file(&config, &["units", "geometry", "scenario"])?;
            let mut record = ResultRecord::evaluate(&Setup::from_config(&cfg)?, 0.0, 0.0)?;
            record.axis_value = record.delta_r;
            println!("{}", serde_json::to_string_pretty(&record).expect("record serializes"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
