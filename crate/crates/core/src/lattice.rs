//! Particle lattice geometry.
//!
//! Particles sit on the nodes `origin + d·(m1, m2, m3)` of a `b×b×b` grid with
//! `0 <= mi < b`. Linear indices run with `m3` fastest, and every cube of
//! values in the crate (fields, kernels, spectra) uses the same ordering.

use crate::error::{Error, Result};

pub type Point = [f64; 3];

/// Euclidean distance between two points.
pub fn distance(x: &Point, y: &Point) -> f64 {
    let dx = x[0] - y[0];
    let dy = x[1] - y[1];
    let dz = x[2] - y[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// How the size of a lattice is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeSize {
    /// Total particle count `M`; must be a perfect cube.
    Particles(u64),
    /// Particles per side `b`.
    PerSide(usize),
}

impl LatticeSize {
    pub fn per_side(self) -> Result<usize> {
        match self {
            LatticeSize::PerSide(0) => Err(Error::NonPositive {
                what: "particles per side",
                value: 0.0,
            }),
            LatticeSize::PerSide(b) => Ok(b),
            LatticeSize::Particles(m) => exact_cube_root(m),
        }
    }
}

fn exact_cube_root(m: u64) -> Result<usize> {
    if m == 0 {
        return Err(Error::NonPositive {
            what: "particle count",
            value: 0.0,
        });
    }
    let mut root = (m as f64).cbrt().round() as u64;
    // correct the float estimate in either direction
    while root > 0 && root.saturating_pow(3) > m {
        root -= 1;
    }
    while (root + 1).saturating_pow(3) <= m {
        root += 1;
    }
    if root.pow(3) == m {
        Ok(root as usize)
    } else {
        Err(Error::NotPerfectCube {
            count: m,
            lower: root.pow(3),
            lower_side: root,
            upper: (root + 1).pow(3),
            upper_side: root + 1,
        })
    }
}

/// A cubic grid of nodes `origin + spacing·(i, j, k)`, `0 <= i, j, k < side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeGrid {
    pub side: usize,
    pub spacing: f64,
    pub origin: Point,
}

impl NodeGrid {
    pub fn len(&self) -> usize {
        self.side * self.side * self.side
    }

    pub fn is_empty(&self) -> bool {
        self.side == 0
    }

    pub fn triple(&self, index: usize) -> [usize; 3] {
        let s = self.side;
        [index / (s * s), (index / s) % s, index % s]
    }

    pub fn index(&self, m: [usize; 3]) -> Result<usize> {
        let s = self.side;
        if m.iter().any(|&c| c >= s) {
            return Err(Error::IndexOutOfRange(m[0], m[1], m[2], s));
        }
        Ok((m[0] * s + m[1]) * s + m[2])
    }

    pub fn position(&self, m: [usize; 3]) -> Point {
        [
            self.origin[0] + self.spacing * m[0] as f64,
            self.origin[1] + self.spacing * m[1] as f64,
            self.origin[2] + self.spacing * m[2] as f64,
        ]
    }

    pub fn position_of(&self, index: usize) -> Point {
        self.position(self.triple(index))
    }

    pub fn positions(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.position_of(i))
    }
}

/// The `b×b×b` particle lattice filling a cube of side `domain_side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformLattice {
    grid: NodeGrid,
    radius: f64,
    kappa: f64,
    domain_side: f64,
}

/// Builds the lattice with `d = domain_side / b` and particle radius
/// `a = d^(3/(2-κ))`, so that `a^(2-κ) = d³`.
pub fn build_lattice(size: LatticeSize, kappa: f64, domain_side: f64) -> Result<UniformLattice> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::InvalidKappa(kappa));
    }
    if !(domain_side > 0.0 && domain_side.is_finite()) {
        return Err(Error::NonPositive {
            what: "domain side",
            value: domain_side,
        });
    }
    let b = size.per_side()?;
    let spacing = domain_side / b as f64;
    let radius = spacing.powf(3.0 / (2.0 - kappa));
    Ok(UniformLattice {
        grid: NodeGrid {
            side: b,
            spacing,
            origin: [0.0; 3],
        },
        radius,
        kappa,
        domain_side,
    })
}

impl UniformLattice {
    pub fn per_side(&self) -> usize {
        self.grid.side
    }

    /// Total particle count `M = b³`.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Neighbor spacing `d`.
    pub fn spacing(&self) -> f64 {
        self.grid.spacing
    }

    /// Particle radius `a`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn domain_side(&self) -> f64 {
        self.domain_side
    }

    pub fn origin(&self) -> Point {
        self.grid.origin
    }

    pub fn grid(&self) -> &NodeGrid {
        &self.grid
    }

    /// `a^(2-κ)`, the per-particle coupling scale.
    pub fn coupling_scale(&self) -> f64 {
        self.radius.powf(2.0 - self.kappa)
    }

    pub fn particle_position(&self, m: [usize; 3]) -> Result<Point> {
        self.grid.index(m)?;
        Ok(self.grid.position(m))
    }

    /// Warnings for a violated `a << d << λ` chain at wave number `k`.
    pub fn scale_warnings(&self, wave_number: f64) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.spacing();
        let ratio = self.radius / d;
        if ratio > 0.1 {
            out.push(format!("a/d = {ratio:.3e} exceeds 0.1"));
        }
        if wave_number > 0.0 {
            let lambda = 2.0 * std::f64::consts::PI / wave_number;
            let ratio = d / lambda;
            if ratio > 0.1 {
                out.push(format!("d/lambda = {ratio:.3e} exceeds 0.1"));
            }
        }
        for w in &out {
            log::warn!("lattice scale separation: {w}");
        }
        out
    }
}

/// A cube of `side³` equal cells starting at `corner`. Cell `i` along an axis
/// covers `[corner + i·cell_len, corner + (i+1)·cell_len)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGrid {
    pub side: usize,
    pub cell_len: f64,
    pub corner: Point,
}

impl CellGrid {
    /// `side³` cells covering the cube `[0, domain_side)³`.
    pub fn covering(side: usize, domain_side: f64) -> Result<Self> {
        if side == 0 {
            return Err(Error::NonPositive {
                what: "cells per side",
                value: 0.0,
            });
        }
        Ok(CellGrid {
            side,
            cell_len: domain_side / side as f64,
            corner: [0.0; 3],
        })
    }

    pub fn len(&self) -> usize {
        self.side * self.side * self.side
    }

    pub fn is_empty(&self) -> bool {
        self.side == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_len.powi(3)
    }

    /// Cell midpoints as a node grid.
    pub fn centers(&self) -> NodeGrid {
        let h = 0.5 * self.cell_len;
        NodeGrid {
            side: self.side,
            spacing: self.cell_len,
            origin: [self.corner[0] + h, self.corner[1] + h, self.corner[2] + h],
        }
    }

    pub fn center(&self, index: usize) -> Point {
        self.centers().position_of(index)
    }

    /// Index of the cell containing `x`; points on the far faces are clamped
    /// into the last cell, points outside the cube give `None`. A point within
    /// rounding of an interior face belongs to the upper cell.
    pub fn cell_of_point(&self, x: &Point) -> Option<usize> {
        let mut m = [0usize; 3];
        for axis in 0..3 {
            let t = (x[axis] - self.corner[axis]) / self.cell_len;
            let slack = 1e-9;
            if t < -slack || t > self.side as f64 + slack {
                return None;
            }
            m[axis] = ((t + slack).max(0.0).floor() as usize).min(self.side - 1);
        }
        Some((m[0] * self.side + m[1]) * self.side + m[2])
    }
}

/// The RED subcube partition of a particle lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcubePartition {
    cells: CellGrid,
    lattice_side: usize,
}

pub fn partition(lat: &UniformLattice, p_side: usize) -> Result<SubcubePartition> {
    if p_side == 0 {
        return Err(Error::NonPositive {
            what: "subcubes per side",
            value: 0.0,
        });
    }
    let b = lat.per_side();
    if p_side > b {
        return Err(Error::PartitionTooFine { p_side, b });
    }
    let mut cells = CellGrid::covering(p_side, lat.domain_side())?;
    cells.corner = lat.origin();
    if cells.cell_len < 10.0 * lat.spacing() {
        log::warn!(
            "subcube side {:.3e} is not much larger than particle spacing {:.3e}",
            cells.cell_len,
            lat.spacing()
        );
    }
    if !b.is_multiple_of(p_side) {
        log::warn!("{p_side} subcubes per side do not evenly divide {b} particles per side");
    }
    Ok(SubcubePartition {
        cells,
        lattice_side: b,
    })
}

impl SubcubePartition {
    pub fn p_side(&self) -> usize {
        self.cells.side
    }

    /// Number of subcubes `P`.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn side_length(&self) -> f64 {
        self.cells.cell_len
    }

    pub fn volume(&self) -> f64 {
        self.cells.cell_volume()
    }

    pub fn cells(&self) -> &CellGrid {
        &self.cells
    }

    pub fn centers(&self) -> NodeGrid {
        self.cells.centers()
    }

    /// Subcube holding lattice node `m`. Exact integer arithmetic: the node at
    /// `m·d` lies in subcube `floor(m·p_side / b)` along each axis.
    pub fn subcube_of_particle(&self, m: [usize; 3]) -> usize {
        let p = self.cells.side;
        let b = self.lattice_side;
        let q = m.map(|c| c * p / b);
        (q[0] * p + q[1]) * p + q[2]
    }

    /// Subcube index of every lattice particle, in lattice order.
    pub fn assignment(&self) -> Vec<usize> {
        let b = self.lattice_side;
        let grid = NodeGrid {
            side: b,
            spacing: 1.0,
            origin: [0.0; 3],
        };
        (0..grid.len())
            .map(|i| self.subcube_of_particle(grid.triple(i)))
            .collect()
    }

    pub fn particle_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.len()];
        for q in self.assignment() {
            counts[q] += 1;
        }
        counts
    }
}
