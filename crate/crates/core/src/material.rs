//! Refraction-coefficient design: converting between a target refraction
//! coefficient `n` and the boundary impedance `h` of the embedded particles.
//!
//! With `p = c_S·N·h`, the limiting medium has `n² = n0² − p/k²`, so a target
//! `n` needs `h = k²(n0² − n²) / (c_S·N)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Point;

/// Default bound on a positive `Im(h)` accepted without the force flag.
pub const DEFAULT_POSITIVE_IM_H_THRESHOLD: f64 = 1e-4;

/// Shape constant `c_S` of a sphere (`|S| = 4πa²`).
pub const SPHERE_SHAPE_CONSTANT: f64 = 4.0 * PI;

/// Physical parameters of the medium and the embedded particles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    /// Wave number `k` in cm⁻¹.
    pub wave_number: f64,
    /// Shape constant `c_S`.
    pub shape_constant: f64,
    pub kappa: f64,
    /// Particle density `N` of the distribution law.
    pub density: f64,
    /// Boundary impedance function value `h` (uniform).
    pub impedance: Complex64,
    /// Original refraction coefficient `n0`.
    pub background: Complex64,
    /// Unit direction `α` of the incident plane wave.
    pub direction: Point,
}

/// Admission rule for impedances with `Im(h) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedancePolicy {
    pub positive_im_threshold: f64,
    pub force: bool,
}

impl Default for ImpedancePolicy {
    fn default() -> Self {
        ImpedancePolicy {
            positive_im_threshold: DEFAULT_POSITIVE_IM_H_THRESHOLD,
            force: false,
        }
    }
}

impl MaterialSpec {
    /// Checks the invariants on `k`, `c_S`, `κ`, `N`, `α` and `n0`, then the
    /// sign of `Im(h)` against `policy`.
    pub fn validate(&self, policy: ImpedancePolicy) -> Result<()> {
        for (what, value) in [
            ("wave number", self.wave_number),
            ("shape constant", self.shape_constant),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositive { what, value });
            }
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::InvalidKappa(self.kappa));
        }
        if !(self.density >= 0.0 && self.density.is_finite()) {
            return Err(Error::NonPositive {
                what: "particle density",
                value: self.density,
            });
        }
        let norm = self.direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDirection(norm));
        }
        let im_n0_sq = (self.background * self.background).im;
        if im_n0_sq < -1e-15 {
            return Err(Error::LossyBackground(im_n0_sq));
        }
        check_impedance(self.impedance, policy)
    }

    /// `p = c_S·N·h`, the potential of the limiting medium.
    pub fn potential(&self) -> Complex64 {
        self.impedance * (self.shape_constant * self.density)
    }

    /// `n² = n0² − k⁻²·c_S·h·N`.
    pub fn refraction_squared(&self) -> Complex64 {
        self.background * self.background - self.potential() / (self.wave_number * self.wave_number)
    }
}

/// `Im(h) <= 0` always passes; a small positive `Im(h)` passes with a warning.
pub fn check_impedance(h: Complex64, policy: ImpedancePolicy) -> Result<()> {
    if h.im <= 0.0 {
        return Ok(());
    }
    if h.im <= policy.positive_im_threshold || policy.force {
        log::warn!(
            "Im(h) = {:e} > 0: outside the uniqueness theory, relying on the solution operator staying invertible",
            h.im
        );
        Ok(())
    } else {
        Err(Error::PositiveImpedance {
            im: h.im,
            threshold: policy.positive_im_threshold,
        })
    }
}

/// Square root with the cut along `[0, +∞)`: `|z|^½·e^{iφ/2}`, `φ = arg z ∈ [0, 2π)`.
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    let mut phi = z.im.atan2(z.re);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    Complex64::from_polar(z.norm().sqrt(), 0.5 * phi)
}

/// Impedance `h` that turns background `spec.background` into `n_target`.
pub fn h_from_target_n(n_target: Complex64, spec: &MaterialSpec) -> Result<Complex64> {
    if spec.density == 0.0 {
        return Err(Error::ZeroDensity);
    }
    for (what, value) in [
        ("wave number", spec.wave_number),
        ("shape constant", spec.shape_constant),
        ("particle density", spec.density),
    ] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositive { what, value });
        }
    }
    let k2 = spec.wave_number * spec.wave_number;
    let n0 = spec.background;
    let p = (n0 * n0 - n_target * n_target) * k2;
    Ok(p / (spec.shape_constant * spec.density))
}

/// Refraction coefficient produced by `spec.impedance`, on the branch of
/// [`branch_sqrt`].
pub fn n_from_h(spec: &MaterialSpec) -> Complex64 {
    branch_sqrt(spec.refraction_squared())
}
