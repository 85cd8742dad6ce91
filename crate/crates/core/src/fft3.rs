//! Cubic 3D FFT over a flat `L×L×L` buffer (last index fastest).
//!
//! Each axis is transformed with batched 1D transforms. The z axis is
//! contiguous; y lines are made contiguous by a per-plane transpose and x lines
//! by a full transpose into a work buffer. Planes are processed in parallel.
//!
//! The forward transform accepts an `active` extent: input outside
//! `[0, active)³` must be zero, and lines that are entirely zero are skipped.
//! The inverse accepts a `needed` extent: only output inside `[0, needed)³` is
//! valid afterwards.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftNum, FftPlanner};

pub struct Fft3<T: FftNum> {
    len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: FftNum> Fft3<T> {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft3 {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    /// Transform length per axis.
    pub fn side(&self) -> usize {
        self.len
    }

    /// Unnormalized forward transform.
    pub fn forward(&self, data: &mut [Complex<T>], active: usize, work: &mut Vec<Complex<T>>) {
        let fft = &self.forward;
        let active = active.min(self.len);
        self.z_pass(data, fft, active);
        self.y_pass(data, fft, active);
        self.x_pass(data, fft, self.len, work);
    }

    /// Unnormalized inverse transform (the round trip scales by `L³`).
    pub fn inverse(&self, data: &mut [Complex<T>], needed: usize, work: &mut Vec<Complex<T>>) {
        let fft = &self.inverse;
        let needed = needed.min(self.len);
        self.x_pass(data, fft, needed, work);
        self.y_pass(data, fft, needed);
        self.z_pass(data, fft, needed);
    }

    fn scratch(fft: &Arc<dyn Fft<T>>) -> Vec<Complex<T>> {
        vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()]
    }

    /// Lines along z for `x, y < rows`.
    fn z_pass(&self, data: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>, rows: usize) {
        let l = self.len;
        data.par_chunks_mut(l * l)
            .take(rows)
            .for_each_init(
                || Self::scratch(fft),
                |scratch, plane| fft.process_with_scratch(&mut plane[..rows * l], scratch),
            );
    }

    /// Lines along y for planes `x < planes`.
    fn y_pass(&self, data: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>, planes: usize) {
        let l = self.len;
        data.par_chunks_mut(l * l).take(planes).for_each_init(
            || (Self::scratch(fft), vec![Complex::new(T::zero(), T::zero()); l * l]),
            |(scratch, tmp), plane| {
                transpose(plane, tmp, l);
                fft.process_with_scratch(tmp, scratch);
                transpose(tmp, plane, l);
            },
        );
    }

    /// Lines along x, written back only for planes `x < keep`.
    fn x_pass(
        &self,
        data: &mut [Complex<T>],
        fft: &Arc<dyn Fft<T>>,
        keep: usize,
        work: &mut Vec<Complex<T>>,
    ) {
        let l = self.len;
        let n = l * l * l;
        if work.len() < n {
            work.resize(n, Complex::new(T::zero(), T::zero()));
        }
        let work = &mut work[..n];
        {
            let src: &[Complex<T>] = data;
            // work[(j*L + k)*L + i] = data[(i*L + j)*L + k]
            work.par_chunks_mut(l * l).enumerate().for_each_init(
                || Self::scratch(fft),
                |scratch, (j, slab)| {
                    for k in 0..l {
                        let line = &mut slab[k * l..(k + 1) * l];
                        for (i, v) in line.iter_mut().enumerate() {
                            *v = src[(i * l + j) * l + k];
                        }
                    }
                    fft.process_with_scratch(slab, scratch);
                },
            );
        }
        let work: &[Complex<T>] = work;
        data.par_chunks_mut(l * l)
            .take(keep)
            .enumerate()
            .for_each(|(i, plane)| {
                for (jk, v) in plane.iter_mut().enumerate() {
                    *v = work[jk * l + i];
                }
            });
    }
}

/// Square transpose of an `l×l` block from `src` into `dst`.
fn transpose<T: Copy>(src: &[T], dst: &mut [T], l: usize) {
    const TILE: usize = 16;
    for r0 in (0..l).step_by(TILE) {
        for c0 in (0..l).step_by(TILE) {
            for r in r0..(r0 + TILE).min(l) {
                for c in c0..(c0 + TILE).min(l) {
                    dst[c * l + r] = src[r * l + c];
                }
            }
        }
    }
}
