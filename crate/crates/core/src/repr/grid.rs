//! Frequency grids on the half-space, the matching time grids, and HSIG v1 files.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{BufRead, Write};
use std::sync::Arc;

/// Uniform axis of `n` cells on `[min, max)`; samples sit at the cell centers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) || n == 0 {
            return Err(Error::InvalidParameter(format!("axis [{min}, {max}) with {n} cells")));
        }
        Ok(Axis { min, max, n })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    pub fn center(&self, k: usize) -> f64 {
        self.min + (k as f64 + 0.5) * self.step()
    }

    /// Fractional sample index of `x`.
    pub fn position(&self, x: f64) -> f64 {
        (x - self.min) / self.step() - 0.5
    }

    /// Spacing of the dual time grid.
    pub fn time_step(&self) -> f64 {
        1.0 / (self.n as f64 * self.step())
    }

    /// Time sample `x_m = (m - n/2) dx`.
    pub fn time(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.time_step()
    }

    /// Nearest time index, if `x` lies in the time window.
    pub fn time_index(&self, x: f64) -> Option<usize> {
        let p = (x / self.time_step() + (self.n / 2) as f64 + 0.5).floor();
        (p >= 0.0 && p < self.n as f64).then_some(p as usize)
    }
}

/// Half-space grid `[-xi, 0) x [-xi, xi)^{d-1}` with `n` cells per axis.
pub fn half_space_axes(d: usize, n: usize, xi: f64) -> Result<Vec<Axis>> {
    let mut axes = vec![Axis::new(-xi, 0.0, n)?];
    for _ in 1..d {
        axes.push(Axis::new(-xi, xi, n)?);
    }
    Ok(axes)
}

/// Reference grid: `d = 2`, 256 cells per axis, `xi = 8`.
pub fn reference_axes() -> Vec<Axis> {
    half_space_axes(2, 256, 8.0).expect("valid reference grid")
}

/// Number of samples and row-major strides.
pub fn shape(axes: &[Axis]) -> (usize, Vec<usize>) {
    let mut strides = vec![1; axes.len()];
    for i in (0..axes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * axes[i + 1].n;
    }
    (axes.iter().map(|a| a.n).product(), strides)
}

/// Multi-index of a flat row-major index.
pub fn unflatten(axes: &[Axis], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; axes.len()];
    for i in (0..axes.len()).rev() {
        out[i] = idx % axes[i].n;
        idx /= axes[i].n;
    }
    out
}

/// Frequency of a flat index.
pub fn frequency(axes: &[Axis], idx: usize) -> Vec<f64> {
    unflatten(axes, idx).iter().zip(axes).map(|(&k, a)| a.center(k)).collect()
}

/// Time point of a flat index.
pub fn time_point(axes: &[Axis], idx: usize) -> Vec<f64> {
    unflatten(axes, idx).iter().zip(axes).map(|(&m, a)| a.time(m)).collect()
}

pub fn cell_volume(axes: &[Axis]) -> f64 {
    axes.iter().map(Axis::step).product()
}

pub fn time_cell_volume(axes: &[Axis]) -> f64 {
    axes.iter().map(Axis::time_step).product()
}

fn same_axes(a: &[Axis], b: &[Axis]) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch("signals live on different grids".into()));
    }
    Ok(())
}

/// Samples of a Fourier transform supported in `xi_1 <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpaceSignal {
    pub axes: Vec<Axis>,
    pub values: Vec<Complex64>,
}

impl HalfSpaceSignal {
    pub fn new(axes: Vec<Axis>, values: Vec<Complex64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidParameter("signal needs at least one axis".into()));
        }
        if axes[0].max > 0.0 {
            return Err(Error::DomainError("first axis must lie in xi_1 <= 0".into()));
        }
        if shape(&axes).0 != values.len() {
            return Err(Error::DimensionMismatch(format!("{} values for grid of {}", values.len(), shape(&axes).0)));
        }
        Ok(HalfSpaceSignal { axes, values })
    }

    pub fn zeros(axes: Vec<Axis>) -> Result<Self> {
        let n = shape(&axes).0;
        Self::new(axes, vec![Complex64::new(0.0, 0.0); n])
    }

    /// Samples `f(xi)` at every grid point.
    pub fn from_fn(axes: Vec<Axis>, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Result<Self> {
        use rayon::prelude::*;
        let n = shape(&axes).0;
        let values = (0..n).into_par_iter().map(|i| f(&frequency(&axes, i))).collect();
        Self::new(axes, values)
    }

    pub fn d(&self) -> usize {
        self.axes.len()
    }

    pub fn frequency(&self, idx: usize) -> Vec<f64> {
        frequency(&self.axes, idx)
    }

    /// `sum |f|^2` times the cell volume, summed in index order.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell_volume(&self.axes)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `<f, g> = sum f conj(g)` times the cell volume.
    pub fn inner(&self, o: &Self) -> Result<Complex64> {
        same_axes(&self.axes, &o.axes)?;
        let s: Complex64 = self.values.iter().zip(&o.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s * cell_volume(&self.axes))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        HalfSpaceSignal { axes: self.axes.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        same_axes(&self.axes, &o.axes)?;
        Ok(HalfSpaceSignal { axes: self.axes.clone(), values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `||f - g|| / ||g||`.
    pub fn relative_gap(&self, reference: &Self) -> Result<f64> {
        Ok(self.sub(reference)?.norm() / reference.norm())
    }

    /// Separable linear interpolation; samples outside the grid read as zero.
    pub fn interp(&self, x: &[f64]) -> Complex64 {
        let d = self.axes.len();
        let (_, strides) = shape(&self.axes);
        let mut base = Vec::with_capacity(d);
        let mut frac = Vec::with_capacity(d);
        for (a, &xi) in self.axes.iter().zip(x) {
            let p = a.position(xi);
            if !(p > -1.0 && p < a.n as f64) {
                return Complex64::new(0.0, 0.0);
            }
            let f = p.floor();
            base.push(f as i64);
            frac.push(p - f);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut idx = 0usize;
            let mut inside = true;
            for k in 0..d {
                let hi = (corner >> k) & 1 == 1;
                let i = base[k] + hi as i64;
                if i < 0 || i >= self.axes[k].n as i64 {
                    inside = false;
                    break;
                }
                w *= if hi { frac[k] } else { 1.0 - frac[k] };
                idx += i as usize * strides[k];
            }
            if inside && w != 0.0 {
                acc += self.values[idx] * w;
            }
        }
        acc
    }

    /// Writes the HSIG v1 format.
    pub fn write_hsig<W: Write>(&self, mut w: W) -> Result<()> {
        let header = HsigHeader { d: self.d(), axes: self.axes.clone() };
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads the HSIG v1 format.
    pub fn read_hsig<R: BufRead>(mut r: R) -> Result<Self> {
        let mut line = String::new();
        r.read_line(&mut line)?;
        let header: HsigHeader = serde_json::from_str(line.trim_end())?;
        if header.d != header.axes.len() {
            return Err(Error::Parse(format!("header d = {} with {} axes", header.d, header.axes.len())));
        }
        for a in &header.axes {
            Axis::new(a.min, a.max, a.n).map_err(|e| Error::Parse(e.to_string()))?;
        }
        let n = shape(&header.axes).0;
        let mut buf = vec![0u8; 16 * n];
        r.read_exact(&mut buf)?;
        let values = buf
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                Complex64::new(re, im)
            })
            .collect();
        Self::new(header.axes, values)
    }
}

#[derive(Serialize, Deserialize)]
struct HsigHeader {
    d: usize,
    axes: Vec<Axis>,
}

/// Separable DFT between a frequency grid and its time grid.
///
/// Synthesis is `f(x_m) = sum_k fhat(xi_k) e^{2 pi i x_m xi_k} h` and analysis its exact inverse.
pub struct Dft {
    pub axes: Vec<Axis>,
    plans: Vec<(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>,
}

impl Dft {
    pub fn new(axes: &[Axis]) -> Self {
        let mut planner = FftPlanner::new();
        let plans = axes.iter().map(|a| (planner.plan_fft_forward(a.n), planner.plan_fft_inverse(a.n))).collect();
        Dft { axes: axes.to_vec(), plans }
    }

    fn pass(&self, data: &mut [Complex64], axis: usize, synth: bool) {
        let a = self.axes[axis];
        let n = a.n;
        let (_, strides) = shape(&self.axes);
        let stride = strides[axis];
        let total = data.len();
        let dx = a.time_step();
        let h = a.step();
        let half = (n / 2) as f64;
        let nf = n as f64;
        let c0 = -half * dx * a.min - half / (2.0 * nf);
        let lin = dx * a.min + 0.5 / nf;
        let shift = |k: usize| 2.0 * PI * (c0 - half * k as f64 / nf);
        let (pre, post): (Vec<Complex64>, Vec<Complex64>) = if synth {
            (
                (0..n).map(|k| Complex64::from_polar(h, shift(k))).collect(),
                (0..n).map(|m| Complex64::from_polar(1.0, 2.0 * PI * lin * m as f64)).collect(),
            )
        } else {
            (
                (0..n).map(|m| Complex64::from_polar(dx, -2.0 * PI * lin * m as f64)).collect(),
                (0..n).map(|k| Complex64::from_polar(1.0, -shift(k))).collect(),
            )
        };
        let plan = if synth { &self.plans[axis].1 } else { &self.plans[axis].0 };
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let outer = total / (n * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for k in 0..n {
                    line[k] = data[base + k * stride] * pre[k];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for m in 0..n {
                    data[base + m * stride] = line[m] * post[m];
                }
            }
        }
    }

    /// Frequency samples to time samples.
    pub fn synthesize(&self, fhat: &[Complex64]) -> Vec<Complex64> {
        let mut data = fhat.to_vec();
        for axis in 0..self.axes.len() {
            self.pass(&mut data, axis, true);
        }
        data
    }

    /// Time samples to frequency samples.
    pub fn analyze(&self, f: &[Complex64]) -> Vec<Complex64> {
        let mut data = f.to_vec();
        for axis in 0..self.axes.len() {
            self.pass(&mut data, axis, false);
        }
        data
    }
}

/// Time-domain samples on the grid dual to `axes`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSignal {
    pub axes: Vec<Axis>,
    pub values: Vec<Complex64>,
}

impl TimeSignal {
    pub fn from_spectrum(dft: &Dft, fhat: &HalfSpaceSignal) -> Result<Self> {
        same_axes(&dft.axes, &fhat.axes)?;
        Ok(TimeSignal { axes: fhat.axes.clone(), values: dft.synthesize(&fhat.values) })
    }

    pub fn to_spectrum(&self, dft: &Dft) -> Result<HalfSpaceSignal> {
        same_axes(&dft.axes, &self.axes)?;
        HalfSpaceSignal::new(self.axes.clone(), dft.analyze(&self.values))
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * time_cell_volume(&self.axes)).sqrt()
    }
}
