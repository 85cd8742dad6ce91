//! The three discretizations of the many-particle scattering problem.
//!
//! All three share one algebraic form on a uniform node grid:
//!
//! ```text
//! u_j + c · Σ_{m≠j} G(x_j, x_m)·u_m = u0(x_j)
//! ```
//!
//! * ORI: nodes are the particles, `c = c_S·a^(2−κ)·h`.
//! * RED: nodes are subcube centers, `c = c_S·h·N·|Δ|`.
//! * IE: nodes are collocation cell centers, `c = c_S·N·h·w` with `w` the
//!   cell volume (a Riemann sum of the limiting integral equation).
//!
//! Off the nodes the field follows the representation formula
//! `u(x) = u0(x) − c·Σ_m G(x, x_m)·u_m`, which for ORI is `u0 + Σ G·Q_m`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fftconv::{FieldCube, Precision, SpectralEngine};
use crate::kernel::{green_at_distance, Padding};
use crate::lattice::{distance, partition, CellGrid, NodeGrid, Point, UniformLattice};
use crate::material::{ImpedancePolicy, MaterialSpec};
use crate::solvers::{cocg, gmres, LinearOperator, SolveOptions, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formulation {
    Ori,
    Red,
    Ie,
}

impl Formulation {
    pub const ALL: [Formulation; 3] = [Formulation::Ori, Formulation::Red, Formulation::Ie];

    pub fn tag(self) -> &'static str {
        match self {
            Formulation::Ori => "ORI",
            Formulation::Red => "RED",
            Formulation::Ie => "IE",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ORI" => Ok(Formulation::Ori),
            "RED" => Ok(Formulation::Red),
            "IE" => Ok(Formulation::Ie),
            other => Err(Error::InvalidOption(format!("unknown formulation {other:?}"))),
        }
    }
}

/// Which Krylov method solves the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    /// COCG for ORI, GMRES for RED and IE.
    #[default]
    Auto,
    Cocg,
    Gmres,
}

impl FromStr for SolverChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(SolverChoice::Auto),
            "cocg" => Ok(SolverChoice::Cocg),
            "gmres" => Ok(SolverChoice::Gmres),
            other => Err(Error::InvalidOption(format!("unknown solver {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringConfig {
    pub lattice: UniformLattice,
    pub spec: MaterialSpec,
    pub formulation: Formulation,
    /// Subcubes per side for RED.
    pub p_side: usize,
    /// Collocation cells per side for IE.
    pub c_side: usize,
    pub solve: SolveOptions,
    pub solver: SolverChoice,
    pub precision: Precision,
    pub padding: Padding,
    /// Solve IE with the direct O(C²) operator instead of the FFT.
    pub ie_dense: bool,
    pub impedance_policy: ImpedancePolicy,
}

impl ScatteringConfig {
    /// Reference partition sizes: `P = 20³ = 8000`, `C = 40³ = 64000`.
    pub fn new(lattice: UniformLattice, spec: MaterialSpec, formulation: Formulation) -> Self {
        ScatteringConfig {
            lattice,
            spec,
            formulation,
            p_side: 20,
            c_side: 40,
            solve: SolveOptions::default(),
            solver: SolverChoice::Auto,
            precision: Precision::Double,
            padding: Padding::Exact,
            ie_dense: false,
            impedance_policy: ImpedancePolicy::default(),
        }
    }

    pub fn with_formulation(mut self, formulation: Formulation) -> Self {
        self.formulation = formulation;
        self
    }
}

/// `u0(x) = e^{ik α·x}`.
pub fn incident_field(spec: &MaterialSpec, x: &Point) -> Complex64 {
    let phase = spec.wave_number
        * (spec.direction[0] * x[0] + spec.direction[1] * x[1] + spec.direction[2] * x[2]);
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// Interaction term of a grid system.
enum Backend {
    /// A single node: the sum over `m ≠ j` is empty.
    Empty,
    Spectral(SpectralEngine),
    /// Direct O(n²) summation with `G` tabulated by integer offset.
    Direct(DirectKernel),
}

struct DirectKernel {
    side: usize,
    table: Vec<Complex64>,
}

impl DirectKernel {
    fn new(nodes: &NodeGrid, wave_number: f64) -> Self {
        let s = nodes.side;
        let mut table = vec![Complex64::new(0.0, 0.0); s * s * s];
        for (idx, slot) in table.iter_mut().enumerate().skip(1) {
            let [i, j, k] = nodes.triple(idx);
            let r = nodes.spacing * ((i * i + j * j + k * k) as f64).sqrt();
            *slot = green_at_distance(r, wave_number);
        }
        DirectKernel { side: s, table }
    }

    fn sum(&self, x: &[Complex64], out: &mut [Complex64]) {
        let s = self.side;
        out.par_iter_mut().enumerate().for_each(|(j, o)| {
            let (j1, j2, j3) = (j / (s * s), (j / s) % s, j % s);
            let mut acc = Complex64::new(0.0, 0.0);
            for m1 in 0..s {
                let d1 = j1.abs_diff(m1);
                for m2 in 0..s {
                    let d2 = j2.abs_diff(m2);
                    let row = &self.table[(d1 * s + d2) * s..(d1 * s + d2 + 1) * s];
                    let xs = &x[(m1 * s + m2) * s..(m1 * s + m2 + 1) * s];
                    for (m3, xv) in xs.iter().enumerate() {
                        acc += row[j3.abs_diff(m3)] * xv;
                    }
                }
            }
            *o = acc;
        });
    }
}

/// The operator `u ↦ u + c·Σ_{m≠j} G_jm u_m` on a node grid.
pub struct GridSystem {
    nodes: NodeGrid,
    coupling: Complex64,
    wave_number: f64,
    backend: Backend,
}

impl GridSystem {
    /// FFT-backed operator (falls back to the empty sum for a single node).
    pub fn spectral(
        nodes: NodeGrid,
        coupling: Complex64,
        wave_number: f64,
        padding: Padding,
        precision: Precision,
    ) -> Result<Self> {
        let backend = if nodes.side < 2 {
            Backend::Empty
        } else {
            Backend::Spectral(SpectralEngine::for_grid(
                nodes.side,
                nodes.spacing,
                wave_number,
                padding,
                precision,
            )?)
        };
        Ok(GridSystem {
            nodes,
            coupling,
            wave_number,
            backend,
        })
    }

    /// Direct-summation operator.
    pub fn direct(nodes: NodeGrid, coupling: Complex64, wave_number: f64) -> Self {
        let backend = if nodes.side < 2 {
            Backend::Empty
        } else {
            Backend::Direct(DirectKernel::new(&nodes, wave_number))
        };
        GridSystem {
            nodes,
            coupling,
            wave_number,
            backend,
        }
    }

    pub fn nodes(&self) -> &NodeGrid {
        &self.nodes
    }

    pub fn coupling(&self) -> Complex64 {
        self.coupling
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }

    /// `Σ_{m≠j} G_jm x_m` for every `j`.
    pub fn interaction(&self, x: &[Complex64], out: &mut [Complex64]) {
        match &self.backend {
            Backend::Empty => out.fill(Complex64::new(0.0, 0.0)),
            Backend::Spectral(engine) => engine.convolve_into(x, out),
            Backend::Direct(kernel) => kernel.sum(x, out),
        }
    }
}

impl LinearOperator for GridSystem {
    fn dim(&self) -> usize {
        self.nodes.len()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        if self.coupling == Complex64::new(0.0, 0.0) {
            y.copy_from_slice(x);
            return;
        }
        self.interaction(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = xi + self.coupling * *yi;
        }
    }
}

/// Converged (or not) field values on a formulation's nodes.
#[derive(Debug, Clone)]
pub struct Solution {
    pub formulation: Formulation,
    pub nodes: NodeGrid,
    pub coupling: Complex64,
    pub spec: MaterialSpec,
    pub domain_side: f64,
    pub report: SolveReport,
}

impl Solution {
    pub fn values(&self) -> &[Complex64] {
        &self.report.solution
    }

    pub fn positions(&self) -> impl Iterator<Item = Point> + '_ {
        self.nodes.positions()
    }

    /// Field at `x` by the representation formula; a node coinciding with
    /// `x` is skipped.
    pub fn field_at(&self, x: &Point) -> Complex64 {
        let q = self.coupling;
        let k = self.spec.wave_number;
        let skip = 1e-9 * self.nodes.spacing;
        let sum: Complex64 = self
            .nodes
            .positions()
            .zip(self.values())
            .filter_map(|(y, u)| {
                let r = distance(x, &y);
                (r > skip).then(|| green_at_distance(r, k) * u)
            })
            .sum();
        incident_field(&self.spec, x) - q * sum
    }

    /// Field values at every point of `grid`, in grid order.
    pub fn sample(&self, grid: &ReportGrid) -> Vec<(Point, Complex64)> {
        grid.points()
            .into_par_iter()
            .map(|x| (x, self.field_at(&x)))
            .collect()
    }

    /// Node values on the node plane nearest `x = domain_side/2`, as
    /// `(j, k, value)` with `j` along y and `k` along z.
    pub fn central_slice(&self) -> Vec<(usize, usize, Complex64)> {
        let s = self.nodes.side;
        let t = (0.5 * self.domain_side - self.nodes.origin[0]) / self.nodes.spacing;
        let i = (t.round().max(0.0) as usize).min(s - 1);
        let values = self.values();
        (0..s * s)
            .map(|jk| (jk / s, jk % s, values[i * s * s + jk]))
            .collect()
    }

    /// Recomputed `‖b − Ax‖/‖b‖` is stored on the report.
    pub fn rel_residual(&self) -> f64 {
        self.report.rel_residual
    }
}

/// Points `{0, step, …, (n−1)·step}³`, x slowest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportGrid {
    pub points_per_side: usize,
    pub step: f64,
}

impl Default for ReportGrid {
    fn default() -> Self {
        ReportGrid {
            points_per_side: 5,
            step: 0.2,
        }
    }
}

impl ReportGrid {
    pub fn points(&self) -> Vec<Point> {
        let grid = NodeGrid {
            side: self.points_per_side,
            spacing: self.step,
            origin: [0.0; 3],
        };
        grid.positions().collect()
    }
}

fn solve_system(
    system: &GridSystem,
    rhs: &[Complex64],
    formulation: Formulation,
    cfg: &ScatteringConfig,
) -> Result<SolveReport> {
    let use_cocg = match cfg.solver {
        SolverChoice::Cocg => true,
        SolverChoice::Gmres => false,
        SolverChoice::Auto => formulation == Formulation::Ori,
    };
    let report = if use_cocg {
        cocg(system, rhs, &cfg.solve)?
    } else {
        gmres(system, rhs, &cfg.solve)?
    };
    log::info!(
        "{formulation}: {} unknowns, {} iterations, residual {:.3e}, converged {}",
        rhs.len(),
        report.iterations,
        report.rel_residual,
        report.converged
    );
    Ok(report)
}

fn incident_on(spec: &MaterialSpec, nodes: &NodeGrid) -> Vec<Complex64> {
    (0..nodes.len())
        .into_par_iter()
        .map(|i| incident_field(spec, &nodes.position_of(i)))
        .collect()
}

fn expect(cfg: &ScatteringConfig, formulation: Formulation) -> Result<()> {
    if cfg.formulation != formulation {
        return Err(Error::InvalidOption(format!(
            "config requests {}, solver is {formulation}",
            cfg.formulation
        )));
    }
    cfg.spec.validate(cfg.impedance_policy)?;
    cfg.solve.validate()
}

/// Builds the ORI operator for a configuration.
pub fn ori_system(cfg: &ScatteringConfig) -> Result<GridSystem> {
    let lat = &cfg.lattice;
    let coupling = crate::fftconv::ori_coupling(&cfg.spec, lat);
    GridSystem::spectral(
        *lat.grid(),
        coupling,
        cfg.spec.wave_number,
        cfg.padding,
        cfg.precision,
    )
}

/// Effective field at every particle.
pub fn solve_ori(cfg: &ScatteringConfig) -> Result<Solution> {
    expect(cfg, Formulation::Ori)?;
    let lat = &cfg.lattice;
    lat.scale_warnings(cfg.spec.wave_number);
    let system = ori_system(cfg)?;
    let rhs = incident_on(&cfg.spec, lat.grid());
    let report = solve_system(&system, &rhs, Formulation::Ori, cfg)?;
    Ok(Solution {
        formulation: Formulation::Ori,
        nodes: *lat.grid(),
        coupling: system.coupling(),
        spec: cfg.spec,
        domain_side: lat.domain_side(),
        report,
    })
}

/// Builds the RED operator for a configuration.
pub fn red_system(cfg: &ScatteringConfig) -> Result<GridSystem> {
    let part = partition(&cfg.lattice, cfg.p_side)?;
    let spec = &cfg.spec;
    let coupling = spec.impedance * (spec.shape_constant * spec.density * part.volume());
    Ok(GridSystem::direct(part.centers(), coupling, spec.wave_number))
}

/// Field at every subcube center.
pub fn solve_red(cfg: &ScatteringConfig) -> Result<Solution> {
    expect(cfg, Formulation::Red)?;
    let system = red_system(cfg)?;
    let rhs = incident_on(&cfg.spec, system.nodes());
    let report = solve_system(&system, &rhs, Formulation::Red, cfg)?;
    Ok(Solution {
        formulation: Formulation::Red,
        nodes: *system.nodes(),
        coupling: system.coupling(),
        spec: cfg.spec,
        domain_side: cfg.lattice.domain_side(),
        report,
    })
}

/// Collocation cells of the IE discretization.
pub fn collocation_grid(cfg: &ScatteringConfig) -> Result<CellGrid> {
    let mut cells = CellGrid::covering(cfg.c_side, cfg.lattice.domain_side())?;
    cells.corner = cfg.lattice.origin();
    Ok(cells)
}

/// Builds the IE collocation operator for a configuration.
pub fn ie_system(cfg: &ScatteringConfig) -> Result<GridSystem> {
    let cells = collocation_grid(cfg)?;
    let coupling = cfg.spec.potential() * cells.cell_volume();
    let k = cfg.spec.wave_number;
    if cfg.ie_dense {
        Ok(GridSystem::direct(cells.centers(), coupling, k))
    } else {
        GridSystem::spectral(cells.centers(), coupling, k, cfg.padding, cfg.precision)
    }
}

/// Field at every collocation point.
pub fn solve_ie(cfg: &ScatteringConfig) -> Result<Solution> {
    expect(cfg, Formulation::Ie)?;
    let system = ie_system(cfg)?;
    let rhs = incident_on(&cfg.spec, system.nodes());
    let report = solve_system(&system, &rhs, Formulation::Ie, cfg)?;
    Ok(Solution {
        formulation: Formulation::Ie,
        nodes: *system.nodes(),
        coupling: system.coupling(),
        spec: cfg.spec,
        domain_side: cfg.lattice.domain_side(),
        report,
    })
}

/// Dispatches on `cfg.formulation`.
pub fn solve(cfg: &ScatteringConfig) -> Result<Solution> {
    match cfg.formulation {
        Formulation::Ori => solve_ori(cfg),
        Formulation::Red => solve_red(cfg),
        Formulation::Ie => solve_ie(cfg),
    }
}

/// Particle charges `Q_m = −c_S·a^(2−κ)·h·u_e(x_m)` (leading order).
#[derive(Debug, Clone, PartialEq)]
pub struct Charges {
    pub values: Vec<Complex64>,
}

pub fn charges(u_e: &FieldCube, lat: &UniformLattice, spec: &MaterialSpec) -> Result<Charges> {
    if u_e.side() != lat.per_side() {
        return Err(Error::ShapeMismatch {
            expected: lat.per_side(),
            found: u_e.side(),
        });
    }
    let c = crate::fftconv::ori_coupling(spec, lat);
    Ok(Charges {
        values: u_e.values().iter().map(|u| -c * u).collect(),
    })
}

/// `u(x) = u0(x) + Σ_m G(x, x_m)·Q_m`, skipping a particle located at `x`.
pub fn evaluate_field(x: &Point, q: &Charges, lat: &UniformLattice, spec: &MaterialSpec) -> Complex64 {
    let skip = 1e-9 * lat.spacing();
    let sum: Complex64 = lat
        .grid()
        .positions()
        .zip(&q.values)
        .filter_map(|(y, qm)| {
            let r = distance(x, &y);
            (r > skip).then(|| green_at_distance(r, spec.wave_number) * qm)
        })
        .sum();
    incident_field(spec, x) + sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::green;
    use crate::lattice::{build_lattice, LatticeSize};
    use crate::material::{h_from_target_n, SPHERE_SHAPE_CONSTANT};
    use std::f64::consts::PI;

    fn reference_spec() -> MaterialSpec {
        let mut spec = MaterialSpec {
            wave_number: 2.0 * PI * 1000.0 / 34400.0,
            shape_constant: SPHERE_SHAPE_CONSTANT,
            kappa: 0.5,
            density: 1.0,
            impedance: Complex64::new(0.0, 0.0),
            background: Complex64::new(1.0, 0.0),
            direction: [1.0, 0.0, 0.0],
        };
        spec.impedance = h_from_target_n(Complex64::new(-1.0, 0.001), &spec).unwrap();
        spec
    }

    #[test]
    fn incident_examples() {
        let spec = MaterialSpec {
            wave_number: 0.182651,
            ..reference_spec()
        };
        assert_eq!(incident_field(&spec, &[0.0; 3]), Complex64::new(1.0, 0.0));
        let u = incident_field(&spec, &[0.8, 0.0, 0.0]);
        assert!((u.re - 0.989343337).abs() < 1e-8);
        assert!((u.im - 0.145601377).abs() < 1e-8);
        let across = MaterialSpec {
            direction: [0.0, 1.0, 0.0],
            ..spec
        };
        for t in [0.1, 0.5, 3.0] {
            assert_eq!(incident_field(&across, &[t, 0.0, 0.0]), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn zero_impedance_gives_incident_field() {
        let lat = build_lattice(LatticeSize::PerSide(4), 0.5, 1.0).unwrap();
        let spec = MaterialSpec {
            impedance: Complex64::new(0.0, 0.0),
            ..reference_spec()
        };
        let cfg = ScatteringConfig::new(lat, spec, Formulation::Ori);
        let sol = solve_ori(&cfg).unwrap();
        assert_eq!(sol.report.iterations, 1);
        for (x, u) in sol.positions().zip(sol.values()) {
            assert!((u - incident_field(&spec, &x)).norm() < 1e-15);
        }
    }

    #[test]
    fn single_particle_is_identity() {
        let lat = build_lattice(LatticeSize::Particles(1), 0.0, 1.0).unwrap();
        let spec = MaterialSpec {
            impedance: Complex64::new(0.3, -0.2),
            ..reference_spec()
        };
        let sol = solve_ori(&ScatteringConfig::new(lat, spec, Formulation::Ori)).unwrap();
        assert_eq!(sol.values(), &[Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn zero_density_red_and_zero_potential_ie() {
        let lat = build_lattice(LatticeSize::PerSide(8), 0.5, 1.0).unwrap();
        let spec = MaterialSpec {
            density: 0.0,
            ..reference_spec()
        };
        let mut cfg = ScatteringConfig::new(lat, spec, Formulation::Red);
        cfg.p_side = 2;
        cfg.c_side = 3;
        let red = solve_red(&cfg).unwrap();
        let ie = solve_ie(&cfg.with_formulation(Formulation::Ie)).unwrap();
        for sol in [red, ie] {
            for (x, u) in sol.positions().zip(sol.values()) {
                assert!((u - incident_field(&spec, &x)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn direct_and_spectral_backends_agree() {
        let nodes = NodeGrid {
            side: 5,
            spacing: 0.2,
            origin: [0.1; 3],
        };
        let k = 0.7;
        let c = Complex64::new(0.01, -0.02);
        let a = GridSystem::direct(nodes, c, k);
        let b = GridSystem::spectral(nodes, c, k, Padding::Exact, Precision::Double).unwrap();
        let x: Vec<Complex64> = (0..125).map(|i| Complex64::new((i as f64).cos(), 0.3)).collect();
        let mut ya = vec![Complex64::new(0.0, 0.0); 125];
        let mut yb = ya.clone();
        a.apply(&x, &mut ya);
        b.apply(&x, &mut yb);
        for (p, q) in ya.iter().zip(&yb) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn charges_arithmetic() {
        // u_e = 1 and h = i give Q = −c_S·a^(2−κ)·i
        let lat = build_lattice(LatticeSize::PerSide(2), 0.5, 1.0).unwrap();
        let spec = MaterialSpec {
            impedance: Complex64::new(0.0, 1.0),
            ..reference_spec()
        };
        let ue = FieldCube::new(2, vec![Complex64::new(1.0, 0.0); 8]).unwrap();
        let q = charges(&ue, &lat, &spec).unwrap();
        let want = Complex64::new(0.0, -4.0 * PI * lat.coupling_scale());
        for v in &q.values {
            assert!((v - want).norm() < 1e-15);
        }
        let zero = MaterialSpec {
            impedance: Complex64::new(0.0, 0.0),
            ..spec
        };
        assert!(charges(&ue, &lat, &zero).unwrap().values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn field_with_no_charges_is_incident() {
        let lat = build_lattice(LatticeSize::PerSide(3), 0.5, 1.0).unwrap();
        let spec = reference_spec();
        let q = Charges {
            values: vec![Complex64::new(0.0, 0.0); 27],
        };
        let x = [0.3, 0.7, 0.1];
        assert_eq!(evaluate_field(&x, &q, &lat, &spec), incident_field(&spec, &x));
    }

    #[test]
    fn far_field_of_one_particle() {
        let lat = build_lattice(LatticeSize::Particles(1), 0.0, 1.0).unwrap();
        let spec = reference_spec();
        let q = Charges {
            values: vec![Complex64::new(0.2, -0.1)],
        };
        let x = [10.0, 3.0, -4.0];
        let want = incident_field(&spec, &x) + q.values[0] * green(&x, &[0.0; 3], spec.wave_number).unwrap();
        assert!((evaluate_field(&x, &q, &lat, &spec) - want).norm() < 1e-15);
        // at the particle itself the self term is skipped
        assert_eq!(evaluate_field(&[0.0; 3], &q, &lat, &spec), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn ori_field_at_matches_evaluate_field() {
        let lat = build_lattice(LatticeSize::PerSide(3), 0.5, 1.0).unwrap();
        let spec = MaterialSpec {
            impedance: Complex64::new(0.5, -2.0),
            ..reference_spec()
        };
        let sol = solve_ori(&ScatteringConfig::new(lat, spec, Formulation::Ori)).unwrap();
        let ue = FieldCube::new(3, sol.values().to_vec()).unwrap();
        let q = charges(&ue, &lat, &spec).unwrap();
        for x in [[0.0; 3], [0.2, 0.4, 0.6], [0.5, 0.5, 0.5]] {
            assert!((sol.field_at(&x) - evaluate_field(&x, &q, &lat, &spec)).norm() < 1e-14);
        }
    }

    #[test]
    fn formulation_mismatch_rejected() {
        let lat = build_lattice(LatticeSize::PerSide(2), 0.5, 1.0).unwrap();
        let cfg = ScatteringConfig::new(lat, reference_spec(), Formulation::Red);
        assert!(solve_ori(&cfg).is_err());
        assert!("ie".parse::<Formulation>().unwrap() == Formulation::Ie);
        assert!("XYZ".parse::<Formulation>().is_err());
    }

    #[test]
    fn report_grid_layout() {
        let pts = ReportGrid::default().points();
        assert_eq!(pts.len(), 125);
        assert_eq!(pts[0], [0.0; 3]);
        assert_eq!(pts[1], [0.0, 0.0, 0.2]);
        assert!((pts[124][0] - 0.8).abs() < 1e-15);
    }
}
