//! The continuous shearlet transform on a signal grid, the admissibility constant and the
//! square-integrability quadrature.

use super::grid::{shape, unflatten, Axis, Dft, HalfSpaceSignal};
use super::ops::{PiHat, Warp};
use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::groups::{left_haar_density, Element, GroupSpec};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// A group point with its quadrature or frame weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub a: f64,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub weight: f64,
}

impl GroupPoint {
    pub fn new(a: f64, s: Vec<f64>, t: Vec<f64>, weight: f64) -> Result<Self> {
        if !(a > 0.0) || !(weight > 0.0) {
            return Err(Error::InvalidParameter(format!("group point needs a > 0 and weight > 0, got a = {a}, w = {weight}")));
        }
        Ok(GroupPoint { a, s, t, weight })
    }

    pub fn element(&self) -> Element<f64> {
        Element::new(self.a, self.s.clone(), self.t.clone())
    }
}

fn conj_atom_samples(spec: &GroupSpec, psi: &dyn Spectrum, axes: &[Axis], a: f64, s: &[f64]) -> Result<Vec<Complex64>> {
    let zero_t = vec![0.0; spec.d];
    let w = Warp::new(spec, &Element::new(a, s.to_vec(), zero_t))?;
    let scale = w.det.abs().sqrt();
    let (total, _) = shape(axes);
    Ok((0..total)
        .into_par_iter()
        .map(|idx| {
            let xi = super::grid::frequency(axes, idx);
            (psi.eval(&w.freq_arg(&xi)) * scale).conj()
        })
        .collect())
}

/// `f^ . conj(psi^_{a,s,0})` on the grid of `f`.
pub fn correlation_spectrum(spec: &GroupSpec, f: &HalfSpaceSignal, psi: &dyn Spectrum, a: f64, s: &[f64]) -> Result<Vec<Complex64>> {
    let c = conj_atom_samples(spec, psi, &f.axes, a, s)?;
    Ok(f.values.iter().zip(&c).map(|(x, y)| x * y).collect())
}

/// `SH_f(a, s, t_m) = <f, psi_{a,s,t_m}>` on the whole time grid, via one inverse DFT.
pub fn shearlet_image(spec: &GroupSpec, f: &HalfSpaceSignal, psi: &dyn Spectrum, dft: &Dft, a: f64, s: &[f64]) -> Result<Vec<Complex64>> {
    Ok(dft.synthesize(&correlation_spectrum(spec, f, psi, a, s)?))
}

fn grid_time_index(axes: &[Axis], t: &[f64]) -> Option<usize> {
    let (_, strides) = shape(axes);
    let mut idx = 0;
    for ((ax, &x), st) in axes.iter().zip(t).zip(&strides) {
        let m = ax.time_index(x)?;
        if (ax.time(m) - x).abs() > 1e-9 * ax.time_step() {
            return None;
        }
        idx += m * st;
    }
    Some(idx)
}

fn off_grid_value(axes: &[Axis], g: &[Complex64], t: &[f64]) -> Complex64 {
    let vol = super::grid::cell_volume(axes);
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, v) in g.iter().enumerate() {
        let xi = super::grid::frequency(axes, idx);
        let ph: f64 = xi.iter().zip(t).map(|(a, b)| a * b).sum();
        acc += v * Complex64::from_polar(1.0, 2.0 * PI * ph);
    }
    acc * vol
}

fn shear_key(a: f64, s: &[f64]) -> Vec<u64> {
    std::iter::once(a.to_bits()).chain(s.iter().map(|v| v.to_bits())).collect()
}

/// Shearlet coefficients at arbitrary group points: one DFT per distinct `(a, s)`, translations
/// on the time grid read off directly and others summed exactly.
pub fn shearlet_transform(spec: &GroupSpec, f: &HalfSpaceSignal, psi: &dyn Spectrum, points: &[GroupPoint]) -> Result<Vec<Complex64>> {
    if f.d() != spec.d {
        return Err(Error::DimensionMismatch(format!("signal dimension {} for a d = {} group", f.d(), spec.d)));
    }
    for ax in &f.axes {
        if ax.n < super::ops::MIN_CELLS {
            return Err(Error::GridTooCoarse(format!("{} cells", ax.n)));
        }
    }
    let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        groups.entry(shear_key(p.a, &p.s)).or_default().push(i);
    }
    let dft = Dft::new(&f.axes);
    let batches: Vec<Vec<usize>> = groups.into_values().collect();
    let results: Vec<Result<Vec<(usize, Complex64)>>> = batches
        .par_iter()
        .map(|members| {
            let p0 = &points[members[0]];
            let g = correlation_spectrum(spec, f, psi, p0.a, &p0.s)?;
            let image = dft.synthesize(&g);
            Ok(members
                .iter()
                .map(|&i| {
                    let t = &points[i].t;
                    let v = match grid_time_index(&f.axes, t) {
                        Some(m) => image[m],
                        None => off_grid_value(&f.axes, &g, t),
                    };
                    (i, v)
                })
                .collect())
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); points.len()];
    for r in results {
        for (i, v) in r? {
            out[i] = v;
        }
    }
    Ok(out)
}

/// Brute-force `<f, psi_{a,s,t}>` from sampled atoms.
pub fn direct_coefficient(spec: &GroupSpec, f: &HalfSpaceSignal, psi: &dyn Spectrum, g: &Element<f64>) -> Result<Complex64> {
    let atom = PiHat::new(spec, g, psi)?;
    let vol = super::grid::cell_volume(&f.axes);
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, v) in f.values.iter().enumerate() {
        let xi = super::grid::frequency(&f.axes, idx);
        acc += v * atom.eval(&xi).conj();
    }
    Ok(acc * vol)
}

/// Riemann sum of `int |psi^(w)|^2 / |w_1|^d dw` over the grid of `psihat`.
pub fn admissibility_constant(psihat: &HalfSpaceSignal) -> Result<f64> {
    let d = psihat.d() as i32;
    let h1 = psihat.axes[0].step();
    let mut acc = 0.0;
    for (idx, v) in psihat.values.iter().enumerate() {
        let w1 = psihat.axes[0].center(unflatten(&psihat.axes, idx)[0]);
        let m = v.norm_sqr();
        if m == 0.0 {
            continue;
        }
        if w1.abs() < h1 {
            return Err(Error::SingularSupport);
        }
        acc += m / w1.abs().powi(d);
    }
    Ok(acc * super::grid::cell_volume(&psihat.axes))
}

/// Admissibility constant of an analytic spectrum with a compact support box, by the midpoint rule
/// with `n` points per axis.
pub fn admissibility_constant_analytic(psi: &dyn Spectrum, n: usize) -> Result<f64> {
    let (lo, hi) = psi.support().ok_or_else(|| Error::Unsupported("admissibility needs a bounded support".into()))?;
    if hi[0] > 0.0 {
        return Err(Error::DomainError("support leaves the half-space".into()));
    }
    if hi[0] == 0.0 {
        return Err(Error::SingularSupport);
    }
    let axes: Vec<Axis> = lo.iter().zip(&hi).map(|(&l, &h)| Axis::new(l, h, n)).collect::<Result<_>>()?;
    let sampled = HalfSpaceSignal::from_fn(axes, |xi| psi.eval(xi))?;
    admissibility_constant(&sampled)
}

/// Midpoint quadrature over `(log a, s)`; translations are integrated exactly on the signal grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsQuadrature {
    pub a_min: f64,
    pub a_max: f64,
    pub n_a: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub n_s: usize,
}

impl AsQuadrature {
    /// `a` in `[1/4, 4]` with 32 log-steps, `s` in `[-2, 2]` with 32 steps.
    pub fn reference() -> Self {
        AsQuadrature { a_min: 0.25, a_max: 4.0, n_a: 32, s_min: -2.0, s_max: 2.0, n_s: 32 }
    }

    /// Halves both steps.
    pub fn refined(&self) -> Self {
        AsQuadrature { n_a: 2 * self.n_a, n_s: 2 * self.n_s, ..self.clone() }
    }

    /// Nodes `(a, s, w)` for `d - 1` shear coordinates; `w` is `d(log a) ds a` times the left Haar density.
    pub fn nodes(&self, spec: &GroupSpec) -> Result<Vec<(f64, Vec<f64>, f64)>> {
        if !(self.a_min > 0.0 && self.a_max > self.a_min && self.s_max > self.s_min && self.n_a > 0 && self.n_s > 0) {
            return Err(Error::InvalidParameter("degenerate quadrature box".into()));
        }
        let dl = (self.a_max / self.a_min).ln() / self.n_a as f64;
        let ds = (self.s_max - self.s_min) / self.n_s as f64;
        let m = spec.d - 1;
        let shear_count = self.n_s.pow(m as u32);
        let mut out = Vec::with_capacity(self.n_a * shear_count);
        for i in 0..self.n_a {
            let a = self.a_min * ((i as f64 + 0.5) * dl).exp();
            for mut c in 0..shear_count {
                let mut s = Vec::with_capacity(m);
                for _ in 0..m {
                    s.push(self.s_min + ((c % self.n_s) as f64 + 0.5) * ds);
                    c /= self.n_s;
                }
                let g = Element::new(a, s.clone(), vec![0.0; spec.d]);
                let w = dl * ds.powi(m as i32) * a * left_haar_density(spec, &g);
                out.push((a, s, w));
            }
        }
        Ok(out)
    }
}

/// Result of the square-integrability quadrature.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SquareIntegrability {
    pub lhs: f64,
    pub c_psi: f64,
    pub f_norm_sq: f64,
    pub ratio: f64,
}

/// `sum_t |SH_f(a, s, t)|^2 dt` through Parseval, restricted to the support box of `f` when known.
pub fn translation_energy(spec: &GroupSpec, f: &dyn Spectrum, psi: &dyn Spectrum, axes: &[Axis], a: f64, s: &[f64]) -> Result<f64> {
    let w = Warp::new(spec, &Element::new(a, s.to_vec(), vec![0.0; spec.d]))?;
    let ranges = index_ranges(axes, f.support());
    let vol = super::grid::cell_volume(axes);
    let mut acc = 0.0;
    let mut idx = vec![0usize; axes.len()];
    for_each_index(&ranges, &mut idx, 0, &mut |k| {
        let xi: Vec<f64> = axes.iter().zip(k).map(|(ax, &i)| ax.center(i)).collect();
        let fv = f.eval(&xi).norm_sqr();
        if fv != 0.0 {
            acc += fv * psi.eval(&w.freq_arg(&xi)).norm_sqr();
        }
    });
    Ok(acc * w.det.abs() * vol)
}

fn index_ranges(axes: &[Axis], support: Option<(Vec<f64>, Vec<f64>)>) -> Vec<(usize, usize)> {
    axes.iter()
        .enumerate()
        .map(|(j, ax)| match &support {
            Some((lo, hi)) => {
                let a = ax.position(lo[j]).floor().max(0.0) as usize;
                let b = (ax.position(hi[j]).ceil() + 1.0).clamp(0.0, ax.n as f64) as usize;
                (a.min(ax.n), b)
            }
            None => (0, ax.n),
        })
        .collect()
}

fn for_each_index(ranges: &[(usize, usize)], idx: &mut Vec<usize>, j: usize, f: &mut impl FnMut(&[usize])) {
    if j == ranges.len() {
        f(idx);
        return;
    }
    for i in ranges[j].0..ranges[j].1 {
        idx[j] = i;
        for_each_index(ranges, idx, j + 1, f);
    }
}

/// `int |<f, psi_g>|^2 dmu(g) / (C_psi ||f||^2)` with `C_psi` given.
pub fn square_integrability_ratio(
    spec: &GroupSpec,
    f: &dyn Spectrum,
    psi: &dyn Spectrum,
    c_psi: f64,
    axes: &[Axis],
    quad: &AsQuadrature,
) -> Result<SquareIntegrability> {
    if !(c_psi > 0.0) {
        return Err(Error::InvalidParameter(format!("C_psi = {c_psi}")));
    }
    let nodes = quad.nodes(spec)?;
    let parts: Vec<Result<f64>> =
        nodes.par_iter().map(|(a, s, w)| Ok(w * translation_energy(spec, f, psi, axes, *a, s)?)).collect();
    let mut lhs = 0.0;
    for p in parts {
        lhs += p?;
    }
    let f_norm_sq = HalfSpaceSignal::from_fn(axes.to_vec(), |xi| f.eval(xi))?.norm_sq();
    Ok(SquareIntegrability { lhs, c_psi, f_norm_sq, ratio: lhs / (c_psi * f_norm_sq) })
}
