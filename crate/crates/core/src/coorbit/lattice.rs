//! Well-spread sets `(beta^j, beta^{j(1-gamma)} alpha k, S_s A_a tau l)` and their time-grid snapping.

use crate::error::{Error, Result};
use crate::groups::{affine_matrix, compose, inverse, Element, GroupKind, GroupSpec};
use crate::repr::grid::{shape, Axis};
use crate::repr::spectrum::Spectrum;
use crate::repr::GroupPoint;
use crate::scalar::q_to_f64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How a grid was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridRole {
    Quadrature,
    WellSpread,
}

/// Index ranges of a well-spread set; `k_max = None` derives the shear range per scale from a band.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ranges {
    pub j_min: i64,
    pub j_max: i64,
    #[serde(default)]
    pub k_max: Option<i64>,
}

/// Lattice steps and ranges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellSpreadParams {
    pub beta: f64,
    pub alpha: f64,
    pub tau: f64,
    pub ranges: Ranges,
}

impl WellSpreadParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 1.0 && self.alpha > 0.0 && self.tau > 0.0) || self.ranges.j_min > self.ranges.j_max {
            return Err(Error::InvalidParameter(format!(
                "well-spread parameters beta = {}, alpha = {}, tau = {}, j in [{}, {}]",
                self.beta, self.alpha, self.tau, self.ranges.j_min, self.ranges.j_max
            )));
        }
        if matches!(self.ranges.k_max, Some(k) if k < 0) {
            return Err(Error::InvalidParameter("k_max < 0".into()));
        }
        Ok(())
    }

    /// Haar volume `ln(beta) alpha^{d-1} tau^d` of one lattice cell.
    pub fn cell_weight(&self, d: usize) -> f64 {
        self.beta.ln() * self.alpha.powi(d as i32 - 1) * self.tau.powi(d as i32)
    }
}

/// Points of a group grid; `labels[i] = (j, k, l)` for well-spread sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupGrid {
    pub role: GridRole,
    pub params: Option<WellSpreadParams>,
    pub points: Vec<GroupPoint>,
    pub labels: Vec<(i64, Vec<i64>, Vec<i64>)>,
}

/// Half-open translation window `[lo, hi)` per axis.
pub type Window = Vec<(f64, f64)>;

/// The window covered by the time grid of `axes`, shrunk by `1e-9` steps against rounding at the edges.
pub fn time_window(axes: &[Axis]) -> Window {
    let h = 0.5 - 1e-9;
    axes.iter().map(|a| (a.time(0) - h * a.time_step(), a.time(a.n - 1) + h * a.time_step())).collect()
}

fn require_shearlet(spec: &GroupSpec) -> Result<()> {
    if spec.kind != GroupKind::ShearletConn {
        return Err(Error::KindMismatch(format!("well-spread sets are built for the connected shearlet group, not {}", spec.kind.name())));
    }
    Ok(())
}

/// Largest `|s|` for which `psi^(M^T w)` meets a band box at scale `a`; zero when no `w_1` matches.
pub fn shear_bound(spec: &GroupSpec, a: f64, band: &(Vec<f64>, Vec<f64>), psi_box: &(Vec<f64>, Vec<f64>)) -> f64 {
    let gamma = q_to_f64(&spec.gamma);
    let w1_min = band.1[0].abs().max(psi_box.1[0].abs() / a);
    let w1_max = band.0[0].abs().min(psi_box.0[0].abs() / a);
    if w1_min >= w1_max || w1_min == 0.0 {
        return 0.0;
    }
    let p = psi_box.0[1..].iter().chain(&psi_box.1[1..]).fold(0.0f64, |m, v| m.max(v.abs()));
    let w2 = band.0[1..].iter().chain(&band.1[1..]).fold(0.0f64, |m, v| m.max(v.abs()));
    (p * a.powf(-gamma) + w2) / w1_min
}

fn multi_range(dims: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dims {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Generates the truncated lattice inside `window`; without `k_max` the shear range per scale covers
/// every shear whose atom meets `band`.
pub fn well_spread_generate(
    spec: &GroupSpec,
    params: &WellSpreadParams,
    window: &Window,
    band: Option<(&(Vec<f64>, Vec<f64>), &dyn Spectrum)>,
) -> Result<GroupGrid> {
    require_shearlet(spec)?;
    params.validate()?;
    let d = spec.d;
    if window.len() != d {
        return Err(Error::DimensionMismatch("window dimension".into()));
    }
    let gamma = q_to_f64(&spec.gamma);
    let weight = params.cell_weight(d);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for j in params.ranges.j_min..=params.ranges.j_max {
        let a = params.beta.powi(j as i32);
        let s_step = a.powf(1.0 - gamma) * params.alpha;
        let k_max = match (params.ranges.k_max, band) {
            (Some(k), _) => k,
            (None, Some((b, psi))) => {
                let sup = psi.support().ok_or_else(|| Error::Unsupported("atom without a support box".into()))?;
                (shear_bound(spec, a, b, &sup) / s_step).ceil() as i64
            }
            (None, None) => return Err(Error::InvalidParameter("k_max or a band is required".into())),
        };
        for k in multi_range(d - 1, -k_max, k_max) {
            let s: Vec<f64> = k.iter().map(|&ki| s_step * ki as f64).collect();
            let g = Element::new(a, s.clone(), vec![0.0; d]);
            let m = affine_matrix(spec, &g)?.block(0, 0, d, d).scale(&params.tau);
            let mi = m.inverse()?;
            let mut lo = vec![f64::INFINITY; d];
            let mut hi = vec![f64::NEG_INFINITY; d];
            for corner in 0..(1usize << d) {
                let c: Vec<f64> = (0..d).map(|i| if corner >> i & 1 == 1 { window[i].1 } else { window[i].0 }).collect();
                for (i, v) in mi.mul_vec(&c).into_iter().enumerate() {
                    lo[i] = lo[i].min(v);
                    hi[i] = hi[i].max(v);
                }
            }
            let mut ls = vec![vec![]];
            for i in 0..d {
                let (l0, l1) = (lo[i].floor() as i64, hi[i].ceil() as i64);
                ls = ls.into_iter().flat_map(|v| (l0..=l1).map(move |x| [v.clone(), vec![x]].concat())).collect();
            }
            for l in ls {
                let lf: Vec<f64> = l.iter().map(|&x| x as f64).collect();
                let t = m.mul_vec(&lf);
                if t.iter().zip(window).all(|(x, (w0, w1))| x >= w0 && x < w1) {
                    points.push(GroupPoint::new(a, s.clone(), t, weight)?);
                    labels.push((j, k.clone(), l));
                }
            }
        }
    }
    Ok(GroupGrid { role: GridRole::WellSpread, params: Some(params.clone()), points, labels })
}

/// Empirical overlap constant: the most points `g_i` with `g_i^{-1} x` in the box `K`, over the probes `x`.
/// `K = [1/beta, beta] x [-alpha, alpha]^{d-1} x [-tau, tau]^d`.
pub fn overlap_constant(spec: &GroupSpec, grid: &GroupGrid, probes: &[Element<f64>]) -> Result<usize> {
    let p = grid.params.as_ref().ok_or_else(|| Error::InvalidParameter("overlap needs a well-spread grid".into()))?;
    let inv: Vec<Element<f64>> = grid.points.iter().map(|g| inverse(spec, &g.element())).collect::<Result<_>>()?;
    let mut best = 0;
    for x in probes {
        let mut count = 0;
        for gi in &inv {
            let y = compose(spec, gi, x)?;
            let inside = y.a >= 1.0 / p.beta
                && y.a <= p.beta
                && y.s.iter().all(|v| v.abs() <= p.alpha)
                && y.t.iter().all(|v| v.abs() <= p.tau);
            if inside {
                count += 1;
            }
        }
        best = best.max(count);
    }
    Ok(best)
}

/// Well-spread points collected per `(a, s)` with translations snapped to time-grid indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SnappedGrid {
    pub axes: Vec<Axis>,
    pub blocks: Vec<ShearBlock>,
}

/// One `(a, s)` with its weighted time-grid translations.
#[derive(Clone, Debug, PartialEq)]
pub struct ShearBlock {
    pub a: f64,
    pub s: Vec<f64>,
    pub entries: Vec<(usize, f64)>,
}

impl SnappedGrid {
    /// Moves every translation to the nearest time sample; points landing on one sample merge with summed weights.
    pub fn new(grid: &GroupGrid, axes: &[Axis]) -> Result<Self> {
        let (_, strides) = shape(axes);
        let mut blocks: BTreeMap<Vec<u64>, (f64, Vec<f64>, BTreeMap<usize, f64>)> = BTreeMap::new();
        for p in &grid.points {
            let mut idx = 0;
            for ((ax, &t), st) in axes.iter().zip(&p.t).zip(&strides) {
                let m = ax.time_index(t).ok_or_else(|| Error::GridMismatch(format!("translation {t} outside the time window")))?;
                idx += m * st;
            }
            let key: Vec<u64> = std::iter::once(p.a.to_bits()).chain(p.s.iter().map(|v| v.to_bits())).collect();
            let e = blocks.entry(key).or_insert_with(|| (p.a, p.s.clone(), BTreeMap::new()));
            *e.2.entry(idx).or_insert(0.0) += p.weight;
        }
        let blocks = blocks.into_values().map(|(a, s, e)| ShearBlock { a, s, entries: e.into_iter().collect() }).collect();
        Ok(SnappedGrid { axes: axes.to_vec(), blocks })
    }

    pub fn point_count(&self) -> usize {
        self.blocks.iter().map(|b| b.entries.len()).sum()
    }

    /// The snapped points as a grid.
    pub fn to_points(&self) -> Vec<GroupPoint> {
        let mut out = Vec::with_capacity(self.point_count());
        for b in &self.blocks {
            for &(idx, w) in &b.entries {
                let t = crate::repr::grid::time_point(&self.axes, idx);
                out.push(GroupPoint { a: b.a, s: b.s.clone(), t, weight: w });
            }
        }
        out
    }
}
