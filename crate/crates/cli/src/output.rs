//! CSV tables and text reports.
//!
//! Every table starts with `# key=value` header lines carrying the config
//! hash and the formulation tag, followed by a CSV header row.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use scatter_core::compare::DiffReport;
use scatter_core::lattice::{CellGrid, NodeGrid};
use scatter_core::{Complex64, Point, Solution};

/// Point-sampled field with its provenance headers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<(String, String)>,
    pub rows: Vec<(Point, Complex64)>,
}

impl Table {
    pub fn header(&self, key: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn preamble(hash: &str, formulation: &str) -> String {
    format!("# config_hash={hash}\n# formulation={formulation}\n")
}

/// Rows `x,y,z,re,im`; values use shortest round-trip formatting.
pub fn point_table(hash: &str, formulation: &str, rows: &[(Point, Complex64)]) -> String {
    let mut out = preamble(hash, formulation);
    out.push_str("x,y,z,re,im\n");
    for ([x, y, z], u) in rows {
        let _ = writeln!(out, "{x},{y},{z},{},{}", u.re, u.im);
    }
    out
}

/// Rows `i,j,re,im` of a plane of node values.
pub fn slice_table(hash: &str, formulation: &str, slice: &[(usize, usize, Complex64)]) -> String {
    let mut out = preamble(hash, formulation);
    out.push_str("i,j,re,im\n");
    for (i, j, u) in slice {
        let _ = writeln!(out, "{i},{j},{},{}", u.re, u.im);
    }
    out
}

pub fn solution_table(hash: &str, sol: &Solution) -> String {
    let rows: Vec<(Point, Complex64)> = sol.positions().zip(sol.values().iter().copied()).collect();
    point_table(hash, sol.formulation.tag(), &rows)
}

/// Solver summary as `key=value` lines.
pub fn solve_report(hash: &str, sol: &Solution) -> String {
    let r = &sol.report;
    format!(
        "config_hash={hash}\nformulation={}\nunknowns={}\niterations={}\nrel_residual={:e}\nconverged={}\nbreakdown={}\nelapsed_seconds={:.3}\n",
        sol.formulation,
        sol.values().len(),
        r.iterations,
        r.rel_residual,
        r.converged,
        r.breakdown,
        r.elapsed.as_secs_f64()
    )
}

/// Rows `pair,metric,rounded`.
pub fn diff_table(hash: &str, diffs: &[DiffReport]) -> String {
    let mut out = format!("# config_hash={hash}\npair,metric,rounded\n");
    for d in diffs {
        let pair = d.pair.map_or("custom".to_string(), |p| p.to_string());
        let _ = writeln!(out, "{pair},{:e},{:.4}", d.metric, d.rounded());
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Reads a table written by [`point_table`].
pub fn read_point_table(path: &Path) -> Result<Table, TableError> {
    parse_point_table(&fs::read_to_string(path)?)
}

pub fn parse_point_table(text: &str) -> Result<Table, TableError> {
    let mut headers = Vec::new();
    let mut rows = Vec::new();
    let mut seen_columns = false;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        let err = |message: String| TableError::Format { line: n + 1, message };
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            if let Some((k, v)) = h.split_once('=') {
                headers.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if !seen_columns {
            if line.replace(' ', "") != "x,y,z,re,im" {
                return Err(err(format!("expected columns x,y,z,re,im, found {line:?}")));
            }
            seen_columns = true;
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| err(e.to_string()))?;
        let [x, y, z, re, im] = fields[..] else {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        };
        rows.push(([x, y, z], Complex64::new(re, im)));
    }
    if !seen_columns {
        return Err(TableError::Format {
            line: 0,
            message: "missing column header x,y,z,re,im".into(),
        });
    }
    Ok(Table { headers, rows })
}

/// Recovers the regular grid a table was sampled on, with its values in
/// grid order.
pub fn infer_grid(table: &Table) -> Result<(NodeGrid, Vec<Complex64>), String> {
    let n = table.rows.len();
    let side = (1..=n).find(|s| s * s * s >= n).unwrap_or(0);
    if side == 0 || side * side * side != n {
        return Err(format!("{n} rows do not form a cubic grid"));
    }
    let mut origin = [f64::INFINITY; 3];
    let mut upper = [f64::NEG_INFINITY; 3];
    for (x, _) in &table.rows {
        for a in 0..3 {
            origin[a] = origin[a].min(x[a]);
            upper[a] = upper[a].max(x[a]);
        }
    }
    let spacing = if side > 1 { (upper[0] - origin[0]) / (side - 1) as f64 } else { 1.0 };
    if side > 1 {
        for a in 1..3 {
            let s = (upper[a] - origin[a]) / (side - 1) as f64;
            if (s - spacing).abs() > 1e-9 * spacing {
                return Err("grid spacing differs between axes".into());
            }
        }
    }
    let grid = NodeGrid { side, spacing, origin };
    let mut values = vec![None; n];
    for (x, u) in &table.rows {
        let mut m = [0usize; 3];
        for a in 0..3 {
            let t = (x[a] - origin[a]) / spacing;
            let r = t.round();
            if (t - r).abs() > 1e-6 {
                return Err(format!("point ({}, {}, {}) is off the grid", x[0], x[1], x[2]));
            }
            m[a] = r as usize;
        }
        let idx = grid.index(m).map_err(|e| e.to_string())?;
        if values[idx].replace(*u).is_some() {
            return Err(format!("point ({}, {}, {}) appears twice", x[0], x[1], x[2]));
        }
    }
    let values = values.into_iter().collect::<Option<Vec<_>>>().ok_or("grid has holes")?;
    Ok((grid, values))
}

/// Subcube partition of `[0, domain_side]³` used to aggregate comparisons.
pub fn aggregation_cells(p_side: usize, domain_side: f64) -> Result<CellGrid, String> {
    CellGrid::covering(p_side, domain_side).map_err(|e| e.to_string())
}
