//! Scalar wave scattering by many small impedance particles.
//!
//! Three discretizations of the same problem share one solver stack:
//!
//! * **ORI**: one unknown per particle on a uniform lattice.
//! * **RED**: one unknown per subcube of a coarse partition.
//! * **IE**: collocation of the limiting volume integral equation.
//!
//! Each reduces to `u_j + c·Σ_{m≠j} G(x_j, x_m)·u_m = u0(x_j)` on a uniform
//! node grid with `G(x, y) = e^{ik|x−y|}/(4π|x−y|)`. The sum is a discrete
//! convolution applied by FFT ([`fftconv`]) and the system is solved by COCG
//! or GMRES ([`solvers`]).

pub mod compare;
pub mod error;
pub mod fft3;
pub mod fftconv;
pub mod kernel;
pub mod lattice;
pub mod material;
pub mod scattering;
pub mod solvers;

pub use num_complex::Complex64;

pub use compare::{diff_grids, diff_ori_red, DiffReport, Pair};
pub use error::{Error, Result};
pub use lattice::{build_lattice, partition, LatticeSize, Point, UniformLattice};
pub use material::{MaterialSpec, ImpedancePolicy};
pub use scattering::{solve, Formulation, ReportGrid, ScatteringConfig, Solution, SolverChoice};
pub use solvers::{SolveOptions, SolveReport};
