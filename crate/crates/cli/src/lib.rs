//! Batch front-end for the scattering solver: `run`, `design` and `compare`.

pub mod config;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use scatter_core::compare::{cells_around, diff_grids, diff_ori_red, diff_samples, DiffReport, Pair};
use scatter_core::fftconv::FieldCube;
use scatter_core::material::{h_from_target_n, n_from_h};
use scatter_core::{partition, solve, Complex64, Formulation, Solution};

use config::{format_complex, ConfigError, ExperimentConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Invalid(String),
    #[error("solver failed for {formulation}: {message}")]
    Solver { formulation: Formulation, message: String },
    #[error("no convergence for {}", .0.iter().map(|f| f.tag()).collect::<Vec<_>>().join(", "))]
    NotConverged(Vec<Formulation>),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Invalid(_) => 2,
            CliError::Solver { .. } | CliError::NotConverged(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<String>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io_err(&path))?;
    written.push(name.to_string());
    Ok(())
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(ExperimentConfig::parse(&text)?)
}

/// What a `run` produced.
#[derive(Debug)]
pub struct RunSummary {
    pub hash: String,
    pub solutions: Vec<Solution>,
    pub diffs: Vec<DiffReport>,
    pub files: Vec<String>,
}

/// Solves every requested formulation and writes all artifacts to
/// `cfg.output`. Non-converged solves still write their artifacts; the
/// MANIFEST records the failure and the error is returned afterwards.
pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary, CliError> {
    let spec = cfg.material()?;
    let dir = cfg.output.as_path();
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let hash = cfg.hash();
    let mut files = Vec::new();
    write(dir, "config.txt", &cfg.canonical(), &mut files)?;

    let lattice = cfg.build_lattice()?;
    for warning in lattice.scale_warnings(cfg.wave_number) {
        log::warn!("{warning}");
    }

    let mut solutions = Vec::new();
    let mut failed = Vec::new();
    for &formulation in &cfg.formulations {
        let scfg = cfg.scattering(spec, formulation)?;
        log::info!("solving {formulation}");
        let sol = solve(&scfg).map_err(|err| match err {
            scatter_core::Error::NonFinite(_) => CliError::Solver {
                formulation,
                message: err.to_string(),
            },
            other => CliError::Invalid(format!("{formulation}: {other}")),
        })?;
        let tag = formulation.tag();
        write(dir, &format!("report_{tag}.txt"), &output::solve_report(&hash, &sol), &mut files)?;
        let samples = sol.sample(&cfg.report);
        write(dir, &format!("table_{tag}.csv"), &output::point_table(&hash, tag, &samples), &mut files)?;
        write(dir, &format!("slice_{tag}.csv"), &output::slice_table(&hash, tag, &sol.central_slice()), &mut files)?;
        if cfg.write_solutions {
            write(dir, &format!("solution_{tag}.csv"), &output::solution_table(&hash, &sol), &mut files)?;
        }
        if !sol.report.converged {
            log::error!("{formulation} did not converge: residual {:e}", sol.report.rel_residual);
            failed.push(formulation);
        }
        solutions.push(sol);
    }

    let converged: Vec<&Solution> = solutions.iter().filter(|s| s.report.converged).collect();
    let mut diffs = Vec::new();
    if converged.len() >= 2 {
        let part = partition(&lattice, cfg.p_side).map_err(|e| CliError::Invalid(e.to_string()))?;
        for (i, a) in converged.iter().enumerate() {
            for b in &converged[i + 1..] {
                let report = match Pair::of(a.formulation, b.formulation) {
                    Some(Pair::OriRed) => {
                        let (ori, red) = if a.formulation == Formulation::Ori { (a, b) } else { (b, a) };
                        let field = FieldCube::new(lattice.per_side(), ori.values().to_vec())
                            .map_err(|e| CliError::Invalid(e.to_string()))?;
                        diff_ori_red(&field, red.values(), &part)
                    }
                    _ => diff_grids(a, b, &part),
                }
                .map_err(|e| CliError::Invalid(e.to_string()))?;
                log::info!("{}: {:.4}", report.pair.map_or("?".into(), |p| p.to_string()), report.metric);
                diffs.push(report);
            }
        }
        write(dir, "diffs.csv", &output::diff_table(&hash, &diffs), &mut files)?;
    }

    let mut manifest = format!(
        "config_hash={hash}\nstatus={}\n",
        if failed.is_empty() { "ok" } else { "failed" }
    );
    for sol in &solutions {
        manifest.push_str(&format!(
            "solve {} converged={} iterations={} rel_residual={:e}\n",
            sol.formulation, sol.report.converged, sol.report.iterations, sol.report.rel_residual
        ));
    }
    for f in &files {
        manifest.push_str(&format!("file {f}\n"));
    }
    let path = dir.join("MANIFEST");
    fs::write(&path, manifest).map_err(io_err(&path))?;
    files.push("MANIFEST".into());

    if !failed.is_empty() {
        return Err(CliError::NotConverged(failed));
    }
    Ok(RunSummary {
        hash,
        solutions,
        diffs,
        files,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design {
    pub n_target: Complex64,
    pub impedance: Complex64,
    pub round_trip: Complex64,
}

/// Impedance realizing `n_target`, with the refraction it reproduces.
pub fn design(cfg: &ExperimentConfig, n_target: Complex64) -> Result<Design, CliError> {
    let mut spec = cfg.base_material();
    spec.impedance = h_from_target_n(n_target, &spec).map_err(|e| CliError::Invalid(e.to_string()))?;
    if spec.impedance.im > 0.0 {
        log::warn!("designed impedance has Im(h) = {:e} > 0", spec.impedance.im);
    }
    Ok(Design {
        n_target,
        impedance: spec.impedance,
        round_trip: n_from_h(&spec),
    })
}

pub fn design_text(hash: &str, d: &Design) -> String {
    format!(
        "config_hash={hash}\nn_target={}\nh={}\nn_round_trip={}\n",
        format_complex(d.n_target),
        format_complex(d.impedance),
        format_complex(d.round_trip)
    )
}

/// Compares the samples of `a` against the piecewise-constant field of `b`
/// (which must be a regular grid), averaging over `p_side³` subcubes of
/// `[0, domain_side]³`.
pub fn compare_tables(a: &Path, b: &Path, p_side: usize, domain_side: f64) -> Result<DiffReport, CliError> {
    let read = |p: &Path| {
        output::read_point_table(p).map_err(|e| match e {
            output::TableError::Io(source) => CliError::Io {
                path: p.to_path_buf(),
                source,
            },
            other => CliError::Invalid(format!("{}: {other}", p.display())),
        })
    };
    let (ta, tb) = (read(a)?, read(b)?);
    let (grid, values) =
        output::infer_grid(&tb).map_err(|e| CliError::Invalid(format!("{}: {e}", b.display())))?;
    let aggregation = output::aggregation_cells(p_side, domain_side).map_err(CliError::Invalid)?;
    let tag = |t: &output::Table| t.header("formulation").and_then(|f| f.parse::<Formulation>().ok());
    let pair = tag(&ta).zip(tag(&tb)).and_then(|(x, y)| Pair::of(x, y));
    diff_samples(ta.rows, &cells_around(&grid), &values, &aggregation, pair)
        .map_err(|e| CliError::Invalid(e.to_string()))
}
