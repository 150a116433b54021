//! Weighted sequence and group norms, and the local-sup surrogate for amalgam membership.

use super::weights::WeightSpec;
use crate::error::{Error, Result};
use crate::groups::{Element, GroupSpec};
use crate::repr::grid::{Axis, Dft, HalfSpaceSignal};
use crate::repr::spectrum::Spectrum;
use crate::repr::transform::{shearlet_image, AsQuadrature, GroupPoint};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Coefficients on a list of group points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientSequence {
    pub points: Vec<GroupPoint>,
    pub values: Vec<Complex64>,
}

impl CoefficientSequence {
    pub fn new(points: Vec<GroupPoint>, values: Vec<Complex64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch(format!("{} points, {} values", points.len(), values.len())));
        }
        Ok(CoefficientSequence { points, values })
    }

    /// CSV with columns `a,s...,t...,re,im,weight`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let d = self.points.first().map_or(0, |p| p.t.len());
        let mut header = vec!["a".to_string()];
        header.extend((1..d).map(|i| format!("s{i}")));
        header.extend((1..=d).map(|i| format!("t{i}")));
        header.extend(["re", "im", "weight"].map(String::from));
        out.write_record(&header).map_err(csv_err)?;
        for (p, v) in self.points.iter().zip(&self.values) {
            let mut row = vec![p.a.to_string()];
            row.extend(p.s.iter().map(f64::to_string));
            row.extend(p.t.iter().map(f64::to_string));
            row.extend([v.re.to_string(), v.im.to_string(), p.weight.to_string()]);
            out.write_record(&row).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} is not in [1, inf]")));
    }
    Ok(())
}

fn p_norm(terms: impl Iterator<Item = (f64, f64)>, p: f64) -> f64 {
    if p.is_infinite() {
        return terms.map(|(x, _)| x).fold(0.0, f64::max);
    }
    terms.map(|(x, w)| w * x.powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `||(c_i m(g_i))||_p`.
pub fn lpm_norm(seq: &CoefficientSequence, p: f64, m: &WeightSpec) -> Result<f64> {
    check_p(p)?;
    Ok(p_norm(seq.points.iter().zip(&seq.values).map(|(g, v)| (v.norm() * m.m(&g.element()), 1.0)), p))
}

/// `(sum_i w_i |F(g_i) m(g_i)|^p)^{1/p}` with the quadrature weights of the points; `p = inf` is the weighted sup.
pub fn lpm_group_norm(seq: &CoefficientSequence, p: f64, m: &WeightSpec) -> Result<f64> {
    check_p(p)?;
    Ok(p_norm(seq.points.iter().zip(&seq.values).map(|(g, v)| (v.norm() * m.m(&g.element()), g.weight)), p))
}

/// `L_{1,w}` norms of `|V_psi f|` and of its local supremum over neighbouring quadrature cells.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalSupReport {
    pub l1_voice: f64,
    pub l1_local_sup: f64,
    pub ratio: f64,
}

/// Local-sup surrogate `H_F(g) = max |F|` over the `3 x 3^{d-1} x 3^d` neighbouring cells of a quadrature node,
/// with `F = V_psi f` on `quad` times the time grid; `d = 2` only.
pub fn local_sup_surrogate(
    spec: &GroupSpec,
    f: &HalfSpaceSignal,
    psi: &dyn Spectrum,
    quad: &AsQuadrature,
    weight: &WeightSpec,
) -> Result<LocalSupReport> {
    if spec.d != 2 {
        return Err(Error::Unsupported("local-sup surrogate is implemented for d = 2".into()));
    }
    let axes: &[Axis] = &f.axes;
    let (n0, n1) = (axes[0].n, axes[1].n);
    let dft = Dft::new(axes);
    let nodes = quad.nodes(spec)?;
    let images: Vec<(Vec<f64>, Vec<f64>)> = nodes
        .par_iter()
        .map(|(a, s, _)| {
            let img = shearlet_image(spec, f, psi, &dft, *a, s)?;
            let abs: Vec<f64> = img.iter().map(|v| v.norm()).collect();
            let mut out = vec![0.0; abs.len()];
            for i in 0..n0 {
                for j in 0..n1 {
                    let mut m: f64 = 0.0;
                    for di in i.saturating_sub(1)..=(i + 1).min(n0 - 1) {
                        for dj in j.saturating_sub(1)..=(j + 1).min(n1 - 1) {
                            m = m.max(abs[di * n1 + dj]);
                        }
                    }
                    out[i * n1 + j] = m;
                }
            }
            Ok((abs, out))
        })
        .collect::<Result<_>>()?;
    let dt = crate::repr::grid::time_cell_volume(axes);
    let (na, ns) = (quad.n_a, quad.n_s);
    let mut l1_voice = 0.0;
    let mut l1_sup = 0.0;
    for ia in 0..na {
        for is in 0..ns {
            let node = ia * ns + is;
            let (a, s, w) = &nodes[node];
            let raw = &images[node].0;
            for (idx, v) in raw.iter().enumerate() {
                let t = crate::repr::grid::time_point(axes, idx);
                let mw = weight.m(&Element::new(*a, s.clone(), t)) * w * dt;
                let mut h: f64 = 0.0;
                for da in ia.saturating_sub(1)..=(ia + 1).min(na - 1) {
                    for ds in is.saturating_sub(1)..=(is + 1).min(ns - 1) {
                        h = h.max(images[da * ns + ds].1[idx]);
                    }
                }
                l1_voice += v * mw;
                l1_sup += h * mw;
            }
        }
    }
    Ok(LocalSupReport { l1_voice, l1_local_sup: l1_sup, ratio: l1_sup / l1_voice })
}
