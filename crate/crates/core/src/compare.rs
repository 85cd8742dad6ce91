//! Differences between solutions living on different grids.
//!
//! The metric is `sup_q (1/𝒩_q) Σ_{i ∈ Δ_q} |x_i − y(i)|`: every sample `x_i`
//! is compared with the value `y(i)` of the reference cell containing it, the
//! absolute differences are averaged over each aggregation cell `Δ_q`, and
//! the worst cell is reported.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fftconv::FieldCube;
use crate::lattice::{CellGrid, NodeGrid, Point, SubcubePartition};
use crate::scattering::{Formulation, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    OriRed,
    RedIe,
    OriIe,
}

impl Pair {
    pub fn of(a: Formulation, b: Formulation) -> Option<Pair> {
        use Formulation::*;
        match (a.min(b), a.max(b)) {
            (Ori, Red) => Some(Pair::OriRed),
            (Red, Ie) => Some(Pair::RedIe),
            (Ori, Ie) => Some(Pair::OriIe),
            _ => None,
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::OriRed => "ORI-RED",
            Pair::RedIe => "RED-IE",
            Pair::OriIe => "ORI-IE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    /// Largest per-cell mean absolute difference.
    pub metric: f64,
    pub pair: Option<Pair>,
    /// `(aggregation cell, mean absolute difference)` for every cell.
    pub per_cell: Vec<(usize, f64)>,
}

impl DiffReport {
    /// Metric rounded to four decimals, for tables.
    pub fn rounded(&self) -> f64 {
        (self.metric * 1e4).round() / 1e4
    }

    fn from_sums(sums: &[f64], counts: &[usize], pair: Option<Pair>) -> Result<Self> {
        let mut per_cell = Vec::with_capacity(sums.len());
        let mut metric: f64 = 0.0;
        for (q, (&s, &c)) in sums.iter().zip(counts).enumerate() {
            if c == 0 {
                return Err(Error::EmptyCell(q));
            }
            let mean = s / c as f64;
            metric = metric.max(mean);
            per_cell.push((q, mean));
        }
        Ok(DiffReport {
            metric,
            pair,
            per_cell,
        })
    }
}

/// ORI particle values against RED subcube values, grouping particles by the
/// subcube that holds them.
pub fn diff_ori_red(u_ori: &FieldCube, u_red: &[Complex64], part: &SubcubePartition) -> Result<DiffReport> {
    if u_red.len() != part.len() {
        return Err(Error::ShapeMismatch {
            expected: part.len(),
            found: u_red.len(),
        });
    }
    let assignment = part.assignment();
    if assignment.len() != u_ori.values().len() {
        return Err(Error::ShapeMismatch {
            expected: assignment.len(),
            found: u_ori.values().len(),
        });
    }
    let mut sums = vec![0.0; part.len()];
    let mut counts = vec![0usize; part.len()];
    for (&q, x) in assignment.iter().zip(u_ori.values()) {
        sums[q] += (x - u_red[q]).norm();
        counts[q] += 1;
    }
    DiffReport::from_sums(&sums, &counts, Some(Pair::OriRed))
}

/// Compares point samples against a piecewise-constant reference field.
///
/// Each sample is matched to the `reference` cell containing it and to the
/// `aggregation` cell containing it; samples outside either grid are an error.
pub fn diff_samples(
    samples: impl IntoIterator<Item = (Point, Complex64)>,
    reference: &CellGrid,
    reference_values: &[Complex64],
    aggregation: &CellGrid,
    pair: Option<Pair>,
) -> Result<DiffReport> {
    if reference_values.len() != reference.len() {
        return Err(Error::ShapeMismatch {
            expected: reference.len(),
            found: reference_values.len(),
        });
    }
    let mut sums = vec![0.0; aggregation.len()];
    let mut counts = vec![0usize; aggregation.len()];
    for (x, v) in samples {
        let (Some(r), Some(q)) = (reference.cell_of_point(&x), aggregation.cell_of_point(&x)) else {
            return Err(Error::InvalidOption(format!(
                "sample at ({}, {}, {}) lies outside the comparison grids",
                x[0], x[1], x[2]
            )));
        };
        sums[q] += (v - reference_values[r]).norm();
        counts[q] += 1;
    }
    DiffReport::from_sums(&sums, &counts, pair)
}

/// The cells whose midpoints are the nodes of `nodes`.
pub fn cells_around(nodes: &NodeGrid) -> CellGrid {
    let h = 0.5 * nodes.spacing;
    CellGrid {
        side: nodes.side,
        cell_len: nodes.spacing,
        corner: [nodes.origin[0] - h, nodes.origin[1] - h, nodes.origin[2] - h],
    }
}

/// Compares two solutions, aggregating over `part`'s subcubes.
///
/// The coarser solution (fewer nodes) is the reference: each of its nodes owns
/// the cell around it, and the finer solution's nodes are the samples.
pub fn diff_grids(a: &Solution, b: &Solution, part: &SubcubePartition) -> Result<DiffReport> {
    let (fine, coarse) = if a.nodes.len() >= b.nodes.len() { (a, b) } else { (b, a) };
    let reference = cells_around(&coarse.nodes);
    let samples = fine.positions().zip(fine.values().iter().copied());
    diff_samples(
        samples,
        &reference,
        coarse.values(),
        part.cells(),
        Pair::of(a.formulation, b.formulation),
    )
}
