//! Subcommand bodies of the `winkler` binary, usable without a process.
//!
//! Each command returns what it would print plus the files it wrote, so
//! tests and examples can drive the same code paths as the CLI.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::coefficients::{limit_coefficients, nondimensional_coefficients, LimitCoefficients, NondimensionalCoefficients};
use crate::config::{RunConfig, DEFAULT_MESH_N};
use crate::convergence::{run_sweep, SweepOptions, SweepReport};
use crate::error::{Error, Result};
use crate::mesh::ThicknessMesh;
use crate::reduced::{solve_membrane_mode, solve_plate_mode, Model, ReducedSolution};
use crate::regime::{Regime, RegimeWarning};
use crate::solver3d::{energy, solve3d, stationarity_residual};

/// Largest normalized stationarity residual accepted from a 3D solve.
pub const STATIONARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Solve3d,
    SolveMembrane,
    SolvePlate,
    Converge,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    /// Text for standard output (JSON, newline-terminated).
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

pub fn run(cmd: Command, cfg: &RunConfig, out_dir: &Path) -> Result<Outcome> {
    match cmd {
        Command::Classify => Ok(Outcome {
            stdout: to_json_line(&classify(cfg)?)?,
            files: vec![],
        }),
        Command::Solve3d => cmd_solve3d(cfg, out_dir),
        Command::SolveMembrane => cmd_solve_reduced(cfg, Model::Membrane, out_dir),
        Command::SolvePlate => cmd_solve_reduced(cfg, Model::Plate, out_dir),
        Command::Converge => cmd_converge(cfg, out_dir),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub regime: Regime,
    pub coefficients: LimitCoefficients,
    pub ell_in: f64,
    pub ell_tr: f64,
    pub nondimensional: NondimensionalCoefficients,
    pub warnings: Vec<RegimeWarning>,
}

pub fn classify(cfg: &RunConfig) -> Result<Classification> {
    let p = &cfg.parameters;
    let e = p.exponents();
    let c = limit_coefficients(p)?;
    Ok(Classification {
        alpha: p.alpha,
        beta: p.beta,
        gamma: e.gamma,
        delta: e.delta,
        regime: e.regime,
        coefficients: c,
        ell_in: c.ell_in,
        ell_tr: c.ell_tr,
        nondimensional: nondimensional_coefficients(p, &c),
        warnings: e.warnings(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solve3dSummary {
    pub eps: f64,
    pub mesh_n: usize,
    pub file: PathBuf,
    pub stationarity: f64,
    pub residual_l2: f64,
    pub energy: f64,
}

/// One field file per `eps`: `field3d_<index>.json`.
fn cmd_solve3d(cfg: &RunConfig, out_dir: &Path) -> Result<Outcome> {
    let p = &cfg.parameters;
    let n = cfg.mesh_n.unwrap_or(DEFAULT_MESH_N);
    let mesh = ThicknessMesh::for_stack(p, n)?;
    fs::create_dir_all(out_dir)?;
    let mut out = Outcome::default();
    let mut summary = Vec::new();
    for (i, eps) in cfg.eps_or_default().into_iter().enumerate() {
        let field = solve3d(p, eps, &cfg.load, &mesh)?;
        let stat = stationarity_residual(&field, p, eps, &cfg.load)?;
        if !(stat.normalized <= STATIONARITY_TOL) {
            return Err(Error::Numerical(format!(
                "stationarity residual {:e} at eps = {eps} exceeds {STATIONARITY_TOL:e}",
                stat.normalized
            )));
        }
        let file = out_dir.join(format!("field3d_{i}.json"));
        fs::write(&file, serde_json::to_string(&field)?)?;
        summary.push(Solve3dSummary {
            eps,
            mesh_n: n,
            file: file.clone(),
            stationarity: stat.normalized,
            residual_l2: stat.l2,
            energy: energy(&field, p, eps, &cfg.load)?,
        });
        out.files.push(file);
    }
    out.stdout = to_json_line(&summary)?;
    Ok(out)
}

pub fn solve_reduced_model(cfg: &RunConfig, model: Model) -> Result<Vec<ReducedSolution>> {
    let p = &cfg.parameters;
    let c = limit_coefficients(p)?;
    let solve = match model {
        Model::Membrane => solve_membrane_mode,
        Model::Plate => solve_plate_mode,
    };
    cfg.load.iter().map(|m| solve(&c, p, m)).collect()
}

/// Writes `reduced_membrane.json` or `reduced_plate.json`.
fn cmd_solve_reduced(cfg: &RunConfig, model: Model, out_dir: &Path) -> Result<Outcome> {
    let sols = solve_reduced_model(cfg, model)?;
    let text = to_json_line(&sols)?;
    fs::create_dir_all(out_dir)?;
    let name = match model {
        Model::Membrane => "reduced_membrane.json",
        Model::Plate => "reduced_plate.json",
    };
    let file = out_dir.join(name);
    fs::write(&file, &text)?;
    Ok(Outcome {
        stdout: text,
        files: vec![file],
    })
}

pub fn converge(cfg: &RunConfig) -> Result<SweepReport> {
    run_sweep(
        &cfg.parameters,
        &cfg.load,
        &cfg.eps_or_default(),
        SweepOptions {
            mesh_n: cfg.mesh_n,
            timing: cfg.timing,
        },
    )
}

/// Writes `sweep.csv` and `sweep.json`; prints the CSV.
fn cmd_converge(cfg: &RunConfig, out_dir: &Path) -> Result<Outcome> {
    let report = converge(cfg)?;
    fs::create_dir_all(out_dir)?;
    let csv = report.to_csv_string();
    let csv_file = out_dir.join("sweep.csv");
    let json_file = out_dir.join("sweep.json");
    fs::write(&csv_file, &csv)?;
    fs::write(&json_file, serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(Outcome {
        stdout: csv,
        files: vec![csv_file, json_file],
    })
}

fn to_json_line<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::load::Mode;
    use crate::params::StackParameters;
    use crate::C64;

    fn cfg(alpha: f64, beta: f64, load: Vec<Mode>) -> RunConfig {
        RunConfig {
            schema: crate::config::SCHEMA.into(),
            parameters: StackParameters::unit().with_exponents(alpha, beta),
            load,
            eps: vec![0.25],
            mesh_n: Some(8),
            out_dir: None,
            timing: false,
        }
    }

    #[test]
    fn classify_membrane_point() {
        let c = classify(&cfg(0.0, 2.0, vec![])).unwrap();
        assert_eq!((c.gamma, c.delta), (1.0, 0.0));
        assert_eq!(c.regime, Regime::MembraneInPlaneFoundation);
        assert_eq!(c.ell_in, c.coefficients.ell_in);
    }

    #[test]
    fn reduced_regime_mismatch_is_exit_3() {
        let load = vec![Mode::pressure([0, 0], C64::new(1.0, 0.0))];
        let err = solve_reduced_model(&cfg(0.0, 2.0, load), Model::Plate).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn plate_spring_at_zero_mode() {
        let load = vec![Mode::pressure([0, 0], C64::new(1.0, 0.0))];
        let c = cfg(0.0, 4.0, load);
        let sols = solve_reduced_model(&c, Model::Plate).unwrap();
        let k_tr = limit_coefficients(&c.parameters).unwrap().k_tr;
        assert!((sols[0].zeta[2].re - 1.0 / k_tr).abs() <= 1e-12);
    }

    #[test]
    fn solve3d_writes_one_file_per_eps() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(0.0, 2.0, vec![Mode::eigenstrain([1, 0], 0, 0, C64::new(1.0, 0.0))]);
        c.eps = vec![0.5, 0.25];
        let out = run(Command::Solve3d, &c, dir.path()).unwrap();
        assert_eq!(out.files.len(), 2);
        assert!(out.files.iter().all(|f| f.exists()));
    }
}
