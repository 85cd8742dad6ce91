use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use scatter_cli::config::{format_complex, parse_complex};
use scatter_cli::{compare_tables, design, design_text, load_config, run, CliError};

/// Scalar wave scattering by many small impedance particles.
#[derive(Parser)]
#[command(name = "scatter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured formulations and write tables, slices and reports.
    Run { config: PathBuf },
    /// Compute the impedance that produces a target refraction coefficient.
    Design {
        config: PathBuf,
        /// Target refraction coefficient, e.g. -1+0.001i.
        #[arg(long = "n", allow_hyphen_values = true)]
        n: String,
    },
    /// Difference between two point tables; B must be a regular grid.
    Compare {
        table_a: PathBuf,
        table_b: PathBuf,
        /// Subcubes per side used for aggregation.
        #[arg(long)]
        partition: usize,
        #[arg(long, default_value_t = 1.0)]
        domain_side: f64,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SCATTER_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| CliError::Invalid(format!("SCATTER_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Invalid(e.to_string()))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let summary = run(&cfg)?;
            for sol in &summary.solutions {
                println!(
                    "{}: {} unknowns, {} iterations, residual {:.3e}",
                    sol.formulation,
                    sol.values().len(),
                    sol.report.iterations,
                    sol.report.rel_residual
                );
            }
            for d in &summary.diffs {
                println!("{}: {:.4}", d.pair.map_or("?".into(), |p| p.to_string()), d.rounded());
            }
            println!("wrote {} files to {}", summary.files.len(), cfg.output.display());
        }
        Command::Design { config, n } => {
            let cfg = load_config(&config)?;
            let n = parse_complex(&n).ok_or_else(|| CliError::Invalid(format!("--n: cannot parse {n:?}")))?;
            let d = design(&cfg, n)?;
            println!("h = {:.5E} + i{:.5E}", d.impedance.re, d.impedance.im);
            println!("n(h) = {}", format_complex(d.round_trip));
            std::fs::create_dir_all(&cfg.output).map_err(|source| CliError::Io {
                path: cfg.output.clone(),
                source,
            })?;
            let path = cfg.output.join("design.txt");
            std::fs::write(&path, design_text(&cfg.hash(), &d)).map_err(|source| CliError::Io { path, source })?;
        }
        Command::Compare {
            table_a,
            table_b,
            partition,
            domain_side,
        } => {
            let d = compare_tables(&table_a, &table_b, partition, domain_side)?;
            let pair = d.pair.map_or("A-B".into(), |p| p.to_string());
            println!("{pair}: {:.4} ({:e})", d.rounded(), d.metric);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
