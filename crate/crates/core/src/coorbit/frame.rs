//! Frame operator `S f = sum_i w_i <f, psi_i> psi_i` on a snapped well-spread set, frame bounds by power
//! iteration, and Richardson reconstruction.

use super::lattice::SnappedGrid;
use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec};
use crate::repr::grid::{frequency, time_cell_volume, Dft, HalfSpaceSignal};
use crate::repr::ops::Warp;
use crate::repr::spectrum::Spectrum;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Coefficients `<f, psi_i>` per block, in the order of the block entries.
pub type BlockCoefficients = Vec<Vec<Complex64>>;

/// Analysis, synthesis and frame operators of one atom on a snapped grid.
pub struct FrameOperator {
    pub grid: SnappedGrid,
    atoms: Vec<Vec<Complex64>>,
    band: Option<Vec<bool>>,
    dft: Dft,
}

/// Estimated frame bounds on the band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Output of the Richardson iteration.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub signal: HalfSpaceSignal,
    pub residual_history: Vec<f64>,
    pub lambda: f64,
}

/// Relative tolerance below which the lower bound counts as zero.
pub const FRAME_TOL: f64 = 1e-3;
/// Relative residual at which the iteration stops.
pub const RESIDUAL_FLOOR: f64 = 1e-13;
/// Safety factor on the estimated upper bound.
pub const UPPER_INFLATION: f64 = 1.01;

impl FrameOperator {
    /// `band` restricts the operator to the samples inside the box.
    pub fn new(spec: &GroupSpec, grid: SnappedGrid, psi: &dyn Spectrum, band: Option<&(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        let axes = grid.axes.clone();
        let total = crate::repr::grid::shape(&axes).0;
        let atoms = grid
            .blocks
            .par_iter()
            .map(|b| {
                let w = Warp::new(spec, &Element::new(b.a, b.s.clone(), vec![0.0; spec.d]))?;
                let c = w.det.abs().sqrt();
                Ok((0..total).map(|idx| psi.eval(&w.freq_arg(&frequency(&axes, idx))) * c).collect())
            })
            .collect::<Result<Vec<Vec<Complex64>>>>()?;
        let band = band.map(|(lo, hi)| {
            (0..total)
                .map(|idx| frequency(&axes, idx).iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| x >= l && x <= h))
                .collect()
        });
        Ok(FrameOperator { dft: Dft::new(&axes), grid, atoms, band })
    }

    pub fn project(&self, f: &HalfSpaceSignal) -> HalfSpaceSignal {
        match &self.band {
            None => f.clone(),
            Some(mask) => {
                let values = f.values.iter().zip(mask).map(|(v, &m)| if m { *v } else { Complex64::new(0.0, 0.0) }).collect();
                HalfSpaceSignal { axes: f.axes.clone(), values }
            }
        }
    }

    /// `<f, psi_i>` for every point.
    pub fn analysis(&self, f: &HalfSpaceSignal) -> BlockCoefficients {
        self.grid
            .blocks
            .par_iter()
            .zip(&self.atoms)
            .map(|(b, atom)| {
                let g: Vec<Complex64> = f.values.iter().zip(atom).map(|(x, y)| x * y.conj()).collect();
                let image = self.dft.synthesize(&g);
                b.entries.iter().map(|&(idx, _)| image[idx]).collect()
            })
            .collect()
    }

    /// `sum_i w_i c_i psi_i`.
    pub fn synthesis(&self, coeffs: &BlockCoefficients) -> HalfSpaceSignal {
        let axes = &self.grid.axes;
        let total = self.atoms.first().map_or(0, Vec::len);
        let inv_dx = 1.0 / time_cell_volume(axes);
        let parts: Vec<Vec<Complex64>> = self
            .grid
            .blocks
            .par_iter()
            .zip(&self.atoms)
            .zip(coeffs)
            .map(|((b, atom), c)| {
                let mut line = vec![Complex64::new(0.0, 0.0); total];
                for (&(idx, w), v) in b.entries.iter().zip(c) {
                    line[idx] = v * w;
                }
                let spec = self.dft.analyze(&line);
                spec.iter().zip(atom).map(|(x, y)| x * y * inv_dx).collect()
            })
            .collect();
        let mut values = vec![Complex64::new(0.0, 0.0); total];
        for p in parts {
            for (v, x) in values.iter_mut().zip(p) {
                *v += x;
            }
        }
        HalfSpaceSignal { axes: axes.clone(), values }
    }

    /// `P S P f`.
    pub fn apply(&self, f: &HalfSpaceSignal) -> HalfSpaceSignal {
        let pf = self.project(f);
        self.project(&self.synthesis(&self.analysis(&pf)))
    }

    fn random_start(&self, seed: u64) -> HalfSpaceSignal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..self.atoms.first().map_or(0, Vec::len))
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        self.project(&HalfSpaceSignal { axes: self.grid.axes.clone(), values })
    }

    /// Power iteration for the largest eigenvalue of `S` and of `B I - S`, starting from `start`
    /// or from a seeded random band signal.
    pub fn bounds(&self, start: Option<&HalfSpaceSignal>, iterations: usize, seed: u64) -> Result<FrameBounds> {
        let x0 = match start {
            Some(s) => self.project(s),
            None => self.random_start(seed),
        };
        if x0.norm() == 0.0 {
            return Err(Error::InvalidParameter("power iteration from a zero vector".into()));
        }
        let rayleigh = |x: &HalfSpaceSignal, sx: &HalfSpaceSignal| -> Result<f64> { Ok(x.inner(sx)?.re / x.norm_sq()) };
        let mut x = x0.scale(Complex64::new(1.0 / x0.norm(), 0.0));
        let mut upper = 0.0;
        for _ in 0..iterations.max(1) {
            let sx = self.apply(&x);
            upper = rayleigh(&x, &sx)?;
            let n = sx.norm();
            if n == 0.0 {
                break;
            }
            x = sx.scale(Complex64::new(1.0 / n, 0.0));
        }
        let shift = upper * UPPER_INFLATION;
        let mut y = x0.scale(Complex64::new(1.0 / x0.norm(), 0.0));
        let mut top = 0.0;
        for _ in 0..iterations.max(1) {
            let sy = self.apply(&y);
            let by = y.scale(Complex64::new(shift, 0.0)).sub(&sy)?;
            top = rayleigh(&y, &by)?;
            let n = by.norm();
            if n == 0.0 {
                break;
            }
            y = by.scale(Complex64::new(1.0 / n, 0.0));
        }
        let bounds = FrameBounds { lower: shift - top, upper: shift };
        if !(bounds.lower > FRAME_TOL * bounds.upper) {
            return Err(Error::NotAFrame { lower: bounds.lower, upper: bounds.upper });
        }
        Ok(bounds)
    }

    /// Richardson iteration `f_{n+1} = f_n + lambda (S f - S f_n)` from the coefficients of `f`, stopping early
    /// once the relative residual reaches [`RESIDUAL_FLOOR`].
    pub fn reconstruct(&self, coeffs: &BlockCoefficients, bounds: FrameBounds, iterations: usize) -> Result<Reconstruction> {
        let sf = self.project(&self.synthesis(coeffs));
        let norm = sf.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("all coefficients vanish".into()));
        }
        let lambda = 2.0 / (bounds.lower + bounds.upper);
        let mut f = HalfSpaceSignal { axes: sf.axes.clone(), values: vec![Complex64::new(0.0, 0.0); sf.values.len()] };
        let mut r = sf.clone();
        let mut history = Vec::with_capacity(iterations);
        for _ in 0..iterations {
            f = f.add(&r.scale(Complex64::new(lambda, 0.0)))?;
            r = sf.sub(&self.apply(&f))?;
            let rel = r.norm() / norm;
            history.push(rel);
            if rel <= RESIDUAL_FLOOR {
                break;
            }
        }
        Ok(Reconstruction { signal: f, residual_history: history, lambda })
    }
}

/// `sum_i w_i |<f, psi_i>|^2`, the discrete counterpart of `C_psi ||f||^2`.
pub fn weighted_energy(grid: &SnappedGrid, coeffs: &BlockCoefficients) -> f64 {
    let mut acc = 0.0;
    for (b, c) in grid.blocks.iter().zip(coeffs) {
        for (&(_, w), v) in b.entries.iter().zip(c) {
            acc += w * v.norm_sqr();
        }
    }
    acc
}
