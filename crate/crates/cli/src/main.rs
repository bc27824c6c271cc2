use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qkz_cli::config::{OutputFormat, RunConfig};
use qkz_cli::report::Report;
use qkz_cli::suites::{self, SUITE_NAMES};
use qkz_cli::HarnessError;

#[derive(Parser)]
#[command(name = "qkz-kit", version, about = "Seeded verification harness for the integrable time-dependent spin-exchange model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Key-value configuration file (dotted keys, '#' comments)
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override kinematics.samples
    #[arg(long)]
    samples: Option<usize>,

    /// Override kinematics.seed (env QKZ_KIT_SEED also applies)
    #[arg(long)]
    seed: Option<u64>,

    /// Override the default tolerance of the selected suites
    #[arg(long)]
    tol: Option<f64>,

    /// Write the report to this path
    #[arg(long)]
    report: Option<PathBuf>,

    /// Report format
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite (or 'all')
    Verify {
        /// Suite name: coupling, ybe, matching, path-independence,
        /// transport, pbc, constant-mode, analytic-diff, qkz,
        /// jackson-convergence, or 'all'
        suite: String,

        /// Replace the linear f by f(x) = x² (integrability-breaking
        /// negative control; applies to the ybe and transport suites)
        #[arg(long = "break-f")]
        break_f: Option<String>,

        #[command(flatten)]
        common: CommonOpts,
    },

    /// Off-shell solution commands
    Qkz {
        #[command(subcommand)]
        action: QkzAction,
    },

    /// Re-emit an existing JSON report in another format
    Report {
        /// Input JSON report
        #[arg(long = "in")]
        input: PathBuf,

        /// Output path
        #[arg(long)]
        out: PathBuf,

        /// Output format
        #[arg(long, default_value = "json")]
        format: String,
    },
}

#[derive(Subcommand)]
enum QkzAction {
    /// Build the truncated Jackson solution and report the difference-
    /// equation residual along a truncation schedule
    Solve {
        /// Number of flipped spins (0, 1 or 2)
        #[arg(long)]
        m: usize,

        /// Comma-separated truncation radii, e.g. 5,10,20
        #[arg(long)]
        trunc: String,

        #[command(flatten)]
        common: CommonOpts,
    },
}

fn load_config(common: &CommonOpts) -> Result<RunConfig, HarnessError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => {
            let mut c = RunConfig::default();
            c.apply_env();
            c
        }
    };
    if let Some(s) = common.samples {
        cfg.samples = s;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    cfg.output_format = OutputFormat::parse(&common.format)?;
    if let Some(p) = &common.report {
        cfg.output_path = Some(p.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(report: &Report, cfg: &RunConfig) -> Result<(), HarnessError> {
    report.print_summary();
    if let Some(path) = &cfg.output_path {
        let body = match cfg.output_format {
            OutputFormat::Json => report.to_json(),
            OutputFormat::Csv => report.to_csv(),
        };
        std::fs::write(path, body).map_err(|e| HarnessError::Io(format!("{path}: {e}")))?;
    }
    Ok(())
}

fn run() -> Result<bool, HarnessError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            suite,
            break_f,
            common,
        } => {
            let mut cfg = load_config(&common)?;
            cfg.break_f = break_f;
            cfg.validate()?;
            let names: Vec<String> = if suite == "all" {
                SUITE_NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                vec![suite]
            };
            if let Some(t) = common.tol {
                for n in &names {
                    cfg.tolerances.insert(n.clone(), t);
                }
            }
            let mut results = Vec::new();
            for name in &names {
                results.push(suites::run_suite(name, &cfg)?);
            }
            let report = Report::new(cfg.seed, cfg.digest(), results);
            emit(&report, &cfg)?;
            Ok(report.all_passed())
        }
        Command::Qkz {
            action: QkzAction::Solve { m, trunc, common },
        } => {
            let cfg = load_config(&common)?;
            let schedule: Vec<i64> = trunc
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<i64>()
                        .map_err(|_| HarnessError::Config(format!("bad truncation '{v}'")))
                })
                .collect::<Result<_, _>>()?;
            if schedule.is_empty() {
                return Err(HarnessError::Config("empty truncation schedule".into()));
            }
            let result = suites::qkz_solve(&cfg, m, &schedule)?;
            let report = Report::new(cfg.seed, cfg.digest(), vec![result]);
            emit(&report, &cfg)?;
            Ok(report.all_passed())
        }
        Command::Report { input, out, format } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", input.display())))?;
            let report = Report::from_json(&text)
                .map_err(|e| HarnessError::Config(format!("bad report JSON: {e}")))?;
            let body = match OutputFormat::parse(&format)? {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => report.to_csv(),
            };
            std::fs::write(&out, body)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", out.display())))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
