//! Matrix-free application of the lattice interaction matrix.
//!
//! `Σ_{m≠j} G(x_j − x_m)·u_m` is a linear convolution of the field cube with
//! the kernel cube. The field is zero-padded to the kernel's periodic extent,
//! both are transformed, multiplied pointwise, transformed back and cropped
//! to the leading `b³` block.

use num_complex::{Complex, Complex64};
use num_traits::{Float, NumCast};
use rustfft::FftNum;

use crate::error::{Error, Result};
use crate::fft3::Fft3;
use crate::kernel::{KernelCube, Padding};
use crate::lattice::UniformLattice;
use crate::material::MaterialSpec;

/// Complex field values on a `b×b×b` grid, lattice order.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCube {
    side: usize,
    values: Vec<Complex64>,
}

impl FieldCube {
    pub fn new(side: usize, values: Vec<Complex64>) -> Result<Self> {
        let expected = side * side * side;
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                found: values.len(),
            });
        }
        Ok(FieldCube { side, values })
    }

    pub fn zeros(side: usize) -> Self {
        FieldCube {
            side,
            values: vec![Complex64::new(0.0, 0.0); side * side * side],
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Floating-point width of the FFT path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    Single,
    #[default]
    Double,
}

/// Forward transform of a [`KernelCube`], reusable across convolutions.
pub struct SpectralKernel<T: FftNum> {
    b: usize,
    fft: Fft3<T>,
    spectrum: Vec<Complex<T>>,
}

fn cast<T: NumCast>(x: f64) -> T {
    T::from(x).expect("value representable in FFT precision")
}

impl<T: FftNum + Float> SpectralKernel<T> {
    pub fn new(kernel: &KernelCube) -> Self {
        let len = kernel.side();
        let fft = Fft3::new(len);
        let mut spectrum: Vec<Complex<T>> = kernel
            .values()
            .iter()
            .map(|c| Complex::new(cast(c.re), cast(c.im)))
            .collect();
        let mut work = Vec::new();
        fft.forward(&mut spectrum, len, &mut work);
        SpectralKernel {
            b: kernel.grid_side(),
            fft,
            spectrum,
        }
    }

    /// Grid nodes per side of the fields this kernel convolves.
    pub fn grid_side(&self) -> usize {
        self.b
    }

    /// Padded FFT length per axis.
    pub fn side(&self) -> usize {
        self.fft.side()
    }

    pub fn spectrum(&self) -> &[Complex<T>] {
        &self.spectrum
    }

    /// Inverse transform of the stored spectrum (normalized), for checks.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let len = self.side();
        let mut data = self.spectrum.clone();
        let mut work = Vec::new();
        self.fft.inverse(&mut data, len, &mut work);
        let scale = 1.0 / (len * len * len) as f64;
        data.iter()
            .map(|c| Complex64::new(c.re.to_f64().unwrap(), c.im.to_f64().unwrap()) * scale)
            .collect()
    }

    /// `out_j = Σ_{m≠j} G(x_j − x_m)·u_m`.
    pub fn convolve(&self, u: &FieldCube) -> Result<FieldCube> {
        if u.side() != self.b {
            return Err(Error::ShapeMismatch {
                expected: self.b,
                found: u.side(),
            });
        }
        let mut out = FieldCube::zeros(self.b);
        self.convolve_into(u.values(), out.values_mut());
        Ok(out)
    }

    /// Slice form of [`convolve`](Self::convolve); both slices hold `b³` values.
    pub fn convolve_into(&self, input: &[Complex64], output: &mut [Complex64]) {
        let b = self.b;
        let len = self.side();
        assert_eq!(input.len(), b * b * b);
        assert_eq!(output.len(), b * b * b);
        let zero = Complex::new(T::zero(), T::zero());
        let mut data = vec![zero; len * len * len];
        for (row_in, row) in input.chunks(b).enumerate() {
            let (i, j) = (row_in / b, row_in % b);
            let start = (i * len + j) * len;
            for (slot, v) in data[start..start + b].iter_mut().zip(row) {
                *slot = Complex::new(cast(v.re), cast(v.im));
            }
        }
        let mut work = Vec::new();
        self.fft.forward(&mut data, b, &mut work);
        for (d, s) in data.iter_mut().zip(&self.spectrum) {
            *d = *d * *s;
        }
        self.fft.inverse(&mut data, b, &mut work);
        let scale = 1.0 / (len * len * len) as f64;
        for (row_out, row) in output.chunks_mut(b).enumerate() {
            let (i, j) = (row_out / b, row_out % b);
            let start = (i * len + j) * len;
            for (o, d) in row.iter_mut().zip(&data[start..start + b]) {
                *o = Complex64::new(d.re.to_f64().unwrap(), d.im.to_f64().unwrap()) * scale;
            }
        }
    }
}

/// A spectral kernel in either precision.
pub enum SpectralEngine {
    Single(SpectralKernel<f32>),
    Double(SpectralKernel<f64>),
}

impl SpectralEngine {
    pub fn new(kernel: &KernelCube, precision: Precision) -> Self {
        match precision {
            Precision::Single => SpectralEngine::Single(SpectralKernel::new(kernel)),
            Precision::Double => SpectralEngine::Double(SpectralKernel::new(kernel)),
        }
    }

    /// Builds the kernel for a `b³` grid of spacing `spacing` and transforms it.
    pub fn for_grid(
        b: usize,
        spacing: f64,
        wave_number: f64,
        padding: Padding,
        precision: Precision,
    ) -> Result<Self> {
        let kernel = KernelCube::for_grid(b, spacing, wave_number, padding)?;
        Ok(Self::new(&kernel, precision))
    }

    pub fn grid_side(&self) -> usize {
        match self {
            SpectralEngine::Single(k) => k.grid_side(),
            SpectralEngine::Double(k) => k.grid_side(),
        }
    }

    pub fn side(&self) -> usize {
        match self {
            SpectralEngine::Single(k) => k.side(),
            SpectralEngine::Double(k) => k.side(),
        }
    }

    pub fn convolve(&self, u: &FieldCube) -> Result<FieldCube> {
        match self {
            SpectralEngine::Single(k) => k.convolve(u),
            SpectralEngine::Double(k) => k.convolve(u),
        }
    }

    pub fn convolve_into(&self, input: &[Complex64], output: &mut [Complex64]) {
        match self {
            SpectralEngine::Single(k) => k.convolve_into(input, output),
            SpectralEngine::Double(k) => k.convolve_into(input, output),
        }
    }
}

/// Interaction strength `c_S·a^(2−κ)·h` of the lattice system.
pub fn ori_coupling(spec: &MaterialSpec, lat: &UniformLattice) -> Complex64 {
    spec.impedance * (spec.shape_constant * lat.coupling_scale())
}

/// Left-hand side of the lattice system: `u + c_S·a^(2−κ)·G*(h·u)`.
pub fn ori_apply(
    engine: &SpectralEngine,
    spec: &MaterialSpec,
    lat: &UniformLattice,
    u: &FieldCube,
) -> Result<FieldCube> {
    if u.side() != lat.per_side() {
        return Err(Error::ShapeMismatch {
            expected: lat.per_side(),
            found: u.side(),
        });
    }
    let coupling = ori_coupling(spec, lat);
    let mut out = engine.convolve(u)?;
    for (o, v) in out.values_mut().iter_mut().zip(u.values()) {
        *o = *v + coupling * *o;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::green;
    use crate::lattice::{build_lattice, LatticeSize};

    fn brute_force(lat: &UniformLattice, k: f64, u: &[Complex64]) -> Vec<Complex64> {
        let g = lat.grid();
        (0..g.len())
            .map(|j| {
                let xj = g.position_of(j);
                (0..g.len())
                    .filter(|&m| m != j)
                    .map(|m| green(&xj, &g.position_of(m), k).unwrap() * u[m])
                    .sum()
            })
            .collect()
    }

    #[test]
    fn point_source_reproduces_green() {
        let lat = build_lattice(LatticeSize::PerSide(3), 0.5, 1.0).unwrap();
        let k = 0.3;
        let engine = SpectralEngine::new(&KernelCube::new(&lat, k).unwrap(), Precision::Double);
        let mut u = FieldCube::zeros(3);
        u.values_mut()[0] = Complex64::new(1.0, 0.0);
        let out = engine.convolve(&u).unwrap();
        assert!(out.values()[0].norm() < 1e-14);
        for j in 1..27 {
            let want = green(&lat.grid().position_of(j), &[0.0; 3], k).unwrap();
            assert!((out.values()[j] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn ones_give_row_sums() {
        let lat = build_lattice(LatticeSize::PerSide(4), 0.5, 1.0).unwrap();
        let k = 0.182651;
        let engine = SpectralEngine::new(&KernelCube::new(&lat, k).unwrap(), Precision::Double);
        let ones = vec![Complex64::new(1.0, 0.0); 64];
        let out = engine.convolve(&FieldCube::new(4, ones.clone()).unwrap()).unwrap();
        let want = brute_force(&lat, k, &ones);
        let err: f64 = out.values().iter().zip(&want).map(|(a, b)| (a - b).norm_sqr()).sum();
        let norm: f64 = want.iter().map(|b| b.norm_sqr()).sum();
        assert!((err / norm).sqrt() < 1e-10);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let engine = SpectralEngine::for_grid(3, 0.5, 1.0, Padding::Exact, Precision::Double).unwrap();
        assert!(matches!(
            engine.convolve(&FieldCube::zeros(4)),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(FieldCube::new(2, vec![Complex64::new(0.0, 0.0); 7]).is_err());
    }

    #[test]
    fn spectrum_round_trip() {
        let kernel = KernelCube::for_grid(5, 0.2, 0.8, Padding::Exact).unwrap();
        let sk = SpectralKernel::<f64>::new(&kernel);
        let back = sk.reconstruct();
        let err: f64 = back.iter().zip(kernel.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
        let norm: f64 = kernel.values().iter().map(|b| b.norm_sqr()).sum();
        assert!((err / norm).sqrt() <= 1e-12);
    }

    #[test]
    fn friendly_padding_matches_exact() {
        for (b, exact_len, friendly_len) in [(6, 10, 10), (9, 16, 16), (12, 22, 24)] {
            let w = FieldCube::new(
                b,
                (0..b * b * b)
                    .map(|i| Complex64::new((i as f64 * 0.3).sin(), (i as f64 * 0.7).cos()))
                    .collect(),
            )
            .unwrap();
            let exact =
                SpectralEngine::for_grid(b, 0.1, 0.5, Padding::Exact, Precision::Double).unwrap();
            let friendly =
                SpectralEngine::for_grid(b, 0.1, 0.5, Padding::FftFriendly, Precision::Double)
                    .unwrap();
            assert_eq!(exact.side(), exact_len);
            assert_eq!(friendly.side(), friendly_len);
            let a = exact.convolve(&w).unwrap();
            let f = friendly.convolve(&w).unwrap();
            for (x, y) in a.values().iter().zip(f.values()) {
                assert!((x - y).norm() < 1e-12 * x.norm().max(1.0));
            }
        }
    }

    #[test]
    fn single_precision_close_to_double() {
        let b = 5;
        let u = FieldCube::new(b, vec![Complex64::new(1.0, 0.5); b * b * b]).unwrap();
        let d = SpectralEngine::for_grid(b, 0.2, 0.4, Padding::Exact, Precision::Double).unwrap();
        let s = SpectralEngine::for_grid(b, 0.2, 0.4, Padding::Exact, Precision::Single).unwrap();
        let (d, s) = (d.convolve(&u).unwrap(), s.convolve(&u).unwrap());
        for (x, y) in d.values().iter().zip(s.values()) {
            assert!((x - y).norm() < 1e-5 * x.norm());
        }
    }

    #[test]
    fn zero_impedance_is_identity() {
        let lat = build_lattice(LatticeSize::PerSide(3), 0.5, 1.0).unwrap();
        let spec = MaterialSpec {
            wave_number: 0.2,
            shape_constant: 4.0 * std::f64::consts::PI,
            kappa: 0.5,
            density: 1.0,
            impedance: Complex64::new(0.0, 0.0),
            background: Complex64::new(1.0, 0.0),
            direction: [1.0, 0.0, 0.0],
        };
        let engine = SpectralEngine::new(&KernelCube::new(&lat, 0.2).unwrap(), Precision::Double);
        let u = FieldCube::new(3, (0..27).map(|i| Complex64::new(i as f64, 1.0)).collect()).unwrap();
        assert_eq!(ori_apply(&engine, &spec, &lat, &u).unwrap(), u);
    }

    #[test]
    fn deterministic() {
        let engine = SpectralEngine::for_grid(7, 0.1, 0.9, Padding::Exact, Precision::Double).unwrap();
        let u = FieldCube::new(7, (0..343).map(|i| Complex64::new((i as f64).sin(), 0.1)).collect())
            .unwrap();
        let a = engine.convolve(&u).unwrap();
        let b = engine.convolve(&u).unwrap();
        assert_eq!(a, b);
    }
}
