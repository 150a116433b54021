//! Transfer of shearlet coefficients to the metaplectic picture: `V_psi f(g)` against
//! `<Psi^{-1} f, pi^m(g) Psi^{-1} psi>`, since `Psi^ pi^m Psi^{-1} = pi^`.

use super::norms::{lpm_norm, CoefficientSequence};
use super::weights::WeightSpec;
use crate::error::Result;
use crate::groups::GroupSpec;
use crate::repr::grid::{Axis, HalfSpaceSignal};
use crate::repr::ops::{metaplectic_apply, psi_hat_apply, psi_hat_inverse, MetaKind};
use crate::repr::spectrum::Spectrum;
use crate::repr::transform::{shearlet_transform, GroupPoint};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which side the input signals live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ToMetaplectic,
    FromMetaplectic,
}

/// Both coefficient sequences with their largest difference and weighted norms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    pub shearlet: CoefficientSequence,
    pub metaplectic: CoefficientSequence,
    pub max_gap: f64,
    pub norm_shearlet: f64,
    pub norm_metaplectic: f64,
}

fn unit(s: HalfSpaceSignal) -> HalfSpaceSignal {
    let n = s.norm();
    s.scale(Complex64::new(1.0 / n, 0.0))
}

/// Coefficients of unit-norm `f` and `psi` on both sides at `points`, sampled on `axes`.
pub fn coorbit_transfer(
    spec: &GroupSpec,
    f: &dyn Spectrum,
    psi: &dyn Spectrum,
    points: &[GroupPoint],
    axes: &[Axis],
    direction: Direction,
    p: f64,
    weight: &WeightSpec,
) -> Result<TransferReport> {
    let kind = MetaKind::for_group(spec.kind)?;
    let (f_sh, psi_sh, f_me, psi_me) = match direction {
        Direction::ToMetaplectic => {
            let f_sh = unit(HalfSpaceSignal::from_fn(axes.to_vec(), |x| f.eval(x))?);
            let psi_sh = unit(HalfSpaceSignal::from_fn(axes.to_vec(), |x| psi.eval(x))?);
            let f_me = psi_hat_inverse(&f_sh)?;
            let psi_me = psi_hat_inverse(&psi_sh)?;
            (f_sh, psi_sh, f_me, psi_me)
        }
        Direction::FromMetaplectic => {
            let f_me = unit(HalfSpaceSignal::from_fn(axes.to_vec(), |x| f.eval(x))?);
            let psi_me = unit(HalfSpaceSignal::from_fn(axes.to_vec(), |x| psi.eval(x))?);
            let f_sh = psi_hat_apply(&f_me)?;
            let psi_sh = psi_hat_apply(&psi_me)?;
            (f_sh, psi_sh, f_me, psi_me)
        }
    };
    let shearlet = shearlet_transform(spec, &f_sh, &psi_sh, points)?;
    let metaplectic = points
        .par_iter()
        .map(|g| {
            let moved = metaplectic_apply(kind, spec, &g.element(), &psi_me)?;
            f_me.inner(&moved)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    let max_gap = shearlet.iter().zip(&metaplectic).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let shearlet = CoefficientSequence::new(points.to_vec(), shearlet)?;
    let metaplectic = CoefficientSequence::new(points.to_vec(), metaplectic)?;
    Ok(TransferReport {
        norm_shearlet: lpm_norm(&shearlet, p, weight)?,
        norm_metaplectic: lpm_norm(&metaplectic, p, weight)?,
        shearlet,
        metaplectic,
        max_gap,
    })
}
