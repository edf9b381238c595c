use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use winkler_limit::commands::{run, Command};
use winkler_limit::config::{parse_eps_list, RunConfig};
use winkler_limit::Error;

#[derive(Parser)]
#[command(name = "winkler", version, about = "Thin film on a compliant bonding layer: 3D solves, limit models, convergence studies")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// JSON run configuration ("schema": "winkler-limit/1").
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: the config's out_dir, else ".").
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated eps values; overrides the config.
    #[arg(long, global = true, value_name = "LIST")]
    eps: Option<String>,
    /// Elements per layer; overrides the config.
    #[arg(long, global = true)]
    mesh_n: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "WINKLER_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Exponents, regime and limit coefficients.
    Classify,
    /// Rescaled 3D solve for every eps.
    Solve3d,
    /// Membrane over in-plane foundation, per mode.
    SolveMembrane,
    /// Plate over transverse foundation, per mode.
    SolvePlate,
    /// eps-sweep against the matching limit model.
    Converge,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("winkler: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let path = cli
        .config
        .ok_or_else(|| Error::Config("--config <path> is required".into()))?;
    let eps = cli.eps.as_deref().map(parse_eps_list).transpose()?;
    let cfg = RunConfig::from_path(&path)?.with_overrides(eps, cli.mesh_n)?;
    let out_dir = cli
        .out
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let cmd = match cli.cmd {
        Cmd::Classify => Command::Classify,
        Cmd::Solve3d => Command::Solve3d,
        Cmd::SolveMembrane => Command::SolveMembrane,
        Cmd::SolvePlate => Command::SolvePlate,
        Cmd::Converge => Command::Converge,
    };
    let outcome = run(cmd, &cfg, &out_dir)?;
    std::io::stdout().lock().write_all(outcome.stdout.as_bytes())?;
    Ok(())
}
