//! Free-space Helmholtz Green's function and the padded kernel cube that
//! replaces the dense interaction matrix of a uniform grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{distance, Point, UniformLattice};

/// `e^{ikr} / (4πr)` for `r > 0`.
#[inline]
pub fn green_at_distance(r: f64, wave_number: f64) -> Complex64 {
    let (s, c) = (wave_number * r).sin_cos();
    Complex64::new(c, s) / (4.0 * PI * r)
}

/// `G(x, y) = e^{ik|x−y|} / (4π|x−y|)`.
pub fn green(x: &Point, y: &Point, wave_number: f64) -> Result<Complex64> {
    let r = distance(x, y);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(green_at_distance(r, wave_number))
}

/// Smallest length `>= 2b − 2` whose only prime factors are 2, 3, 5 and 7.
pub fn fft_friendly_len(b: usize) -> usize {
    let mut n = (2 * b).saturating_sub(2).max(1);
    loop {
        let mut m = n;
        for p in [2, 3, 5, 7] {
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        if m == 1 {
            return n;
        }
        n += 1;
    }
}

/// Per-axis padded length for the kernel and field cubes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Padding {
    /// Exactly `2b − 2`.
    #[default]
    Exact,
    /// Next 7-smooth length `>= 2b − 2`.
    FftFriendly,
}

impl Padding {
    pub fn padded_len(self, b: usize) -> usize {
        match self {
            Padding::Exact => 2 * b - 2,
            Padding::FftFriendly => fft_friendly_len(b),
        }
    }
}

/// Green's function values over all wrapped grid offsets, `L×L×L` with
/// `L >= 2b − 2`.
///
/// Along each axis slot `t` holds the offset magnitude `min(t, L − t)` so that
/// the cube is periodic and even; slots whose magnitude exceeds `b − 1` are
/// never reached by a zero-padded field and hold zero. Slot `(0, 0, 0)` is the
/// excluded self-interaction and holds zero.
#[derive(Debug, Clone)]
pub struct KernelCube {
    b: usize,
    len: usize,
    spacing: f64,
    wave_number: f64,
    values: Vec<Complex64>,
}

impl KernelCube {
    /// Kernel for the particle lattice, padded to exactly `2b − 2`.
    pub fn new(lat: &UniformLattice, wave_number: f64) -> Result<Self> {
        Self::for_grid(lat.per_side(), lat.spacing(), wave_number, Padding::Exact)
    }

    /// Kernel for any `b³` grid with node spacing `spacing`.
    pub fn for_grid(b: usize, spacing: f64, wave_number: f64, padding: Padding) -> Result<Self> {
        if b < 2 {
            return Err(Error::LatticeTooSmall(b));
        }
        let len = padding.padded_len(b);
        // per-axis offset magnitude of each slot, or None in the dead zone
        let offsets: Vec<Option<usize>> = (0..len)
            .map(|t| {
                let m = t.min(len - t);
                (m < b).then_some(m)
            })
            .collect();
        let mut values = vec![Complex64::new(0.0, 0.0); len * len * len];
        values
            .par_chunks_mut(len * len)
            .enumerate()
            .for_each(|(i, plane)| {
                let Some(oi) = offsets[i] else { return };
                for (j, row) in plane.chunks_mut(len).enumerate() {
                    let Some(oj) = offsets[j] else { continue };
                    for (slot, ok) in row.iter_mut().zip(&offsets) {
                        let Some(ok) = *ok else { continue };
                        if oi == 0 && oj == 0 && ok == 0 {
                            continue;
                        }
                        let r = spacing * ((oi * oi + oj * oj + ok * ok) as f64).sqrt();
                        *slot = green_at_distance(r, wave_number);
                    }
                }
            });
        Ok(KernelCube {
            b,
            len,
            spacing,
            wave_number,
            values,
        })
    }

    /// Grid nodes per side `b`.
    pub fn grid_side(&self) -> usize {
        self.b
    }

    /// Padded length per axis.
    pub fn side(&self) -> usize {
        self.len
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, t: [usize; 3]) -> Complex64 {
        let l = self.len;
        self.values[(t[0] * l + t[1]) * l + t[2]]
    }
}

/// One padded axis of a kernel row: `[G0 .. G(b−1)]` followed by the mirrored
/// interior entries, e.g. `[1 2 3 4] -> [1 2 3 4 3 2]`.
pub fn pad_row<T: Copy>(row: &[T]) -> Result<Vec<T>> {
    let b = row.len();
    if b < 2 {
        return Err(Error::LatticeTooSmall(b));
    }
    let mut out = row.to_vec();
    out.extend(row[1..b - 1].iter().rev().copied());
    Ok(out)
}
