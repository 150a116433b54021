//! Weights, well-spread sets, frame reconstruction and coefficient transfer between the shearlet and
//! metaplectic pictures.

pub mod frame;
pub mod lattice;
pub mod norms;
pub mod transfer;
pub mod weights;

pub use frame::{FrameBounds, FrameOperator, Reconstruction};
pub use lattice::{overlap_constant, time_window, well_spread_generate, GridRole, GroupGrid, Ranges, SnappedGrid, WellSpreadParams};
pub use norms::{lpm_group_norm, lpm_norm, CoefficientSequence};
pub use transfer::{coorbit_transfer, Direction, TransferReport};
pub use weights::{check_weight_laws, WeightLawReport, WeightSpec};

use crate::error::{Error, Result};
use crate::groups::{GroupKind, GroupSpec};
use crate::repr::grid::{half_space_axes, HalfSpaceSignal};
use crate::repr::spectrum::{Atom, Spectrum};
use crate::repr::transform::GroupPoint;
use crate::scalar::parse_q;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Configuration of a coorbit run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoorbitConfig {
    pub gamma: String,
    pub weight: WeightSpec,
    pub grid: WellSpreadParams,
    pub p: f64,
    pub iterations: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_cells")]
    pub cells: usize,
    #[serde(default = "default_xi")]
    pub xi: f64,
    #[serde(default = "default_power")]
    pub power_iterations: usize,
    #[serde(default = "default_transfer_points")]
    pub transfer_points: usize,
    #[serde(default = "default_transfer_cells")]
    pub transfer_cells: usize,
    #[serde(default = "default_weight_samples")]
    pub weight_samples: usize,
    /// Also measures the transfer gap at twice the transfer resolution.
    #[serde(default)]
    pub transfer_refine: bool,
}

fn default_seed() -> u64 {
    1
}
fn default_cells() -> usize {
    128
}
fn default_xi() -> f64 {
    8.0
}
fn default_power() -> usize {
    40
}
fn default_transfer_points() -> usize {
    200
}
fn default_transfer_cells() -> usize {
    256
}
fn default_weight_samples() -> usize {
    10_000
}

impl CoorbitConfig {
    /// Reference run: `gamma = 1/2`, `beta = sqrt 2`, `alpha = 1/2`, `tau = 1/4`, `j` in `[-4, 5]`.
    pub fn reference() -> Self {
        CoorbitConfig {
            gamma: "1/2".into(),
            weight: WeightSpec::unit(),
            grid: WellSpreadParams {
                beta: std::f64::consts::SQRT_2,
                alpha: 0.5,
                tau: 0.25,
                ranges: Ranges { j_min: -4, j_max: 5, k_max: None },
            },
            p: 2.0,
            iterations: 50,
            seed: default_seed(),
            cells: default_cells(),
            xi: default_xi(),
            power_iterations: default_power(),
            transfer_points: default_transfer_points(),
            transfer_cells: default_transfer_cells(),
            weight_samples: default_weight_samples(),
            transfer_refine: false,
        }
    }

    pub fn spec(&self) -> Result<GroupSpec> {
        GroupSpec::new(GroupKind::ShearletConn, 2, parse_q(&self.gamma)?)
    }
}

/// Signal of the frame experiments, supported in `[-4,-1/2] x [-2,2]`.
pub fn frame_signal() -> Atom {
    Atom::reference_bump()
}

/// Atom of the frame experiments, supported in `[-3,-1] x [-2,2]`.
pub fn frame_atom() -> Atom {
    Atom::bump(&[-3.0, -2.0], &[-1.0, 2.0])
}

/// Everything a coorbit run reports.
#[derive(Clone, Debug, Serialize)]
pub struct CoorbitRun {
    pub points: usize,
    pub shear_blocks: usize,
    pub weight_laws: WeightLawReport,
    pub frame_bounds_est: FrameBounds,
    pub lambda: f64,
    pub residual_history: Vec<f64>,
    pub reconstruction_error: f64,
    pub norm_lpm: f64,
    pub norm_group: f64,
    pub transfer_gap: f64,
    pub transfer_norms: (f64, f64),
    pub transfer_gap_refined: Option<f64>,
    #[serde(skip)]
    pub coefficients: CoefficientSequence,
}

/// Random subset of at most `count` points with every translation coordinate in `[-1/2, 1/2]`.
pub fn transfer_subset(points: &[GroupPoint], count: usize, seed: u64) -> Vec<GroupPoint> {
    let mut near: Vec<GroupPoint> = points.iter().filter(|p| p.t.iter().all(|x| x.abs() <= 0.5)).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    near.shuffle(&mut rng);
    near.truncate(count);
    near
}

/// Frame bounds, reconstruction, norms and transfer gap for one configuration.
pub fn run(config: &CoorbitConfig) -> Result<CoorbitRun> {
    if !(config.p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {}", config.p)));
    }
    let spec = config.spec()?;
    let axes = half_space_axes(2, config.cells, config.xi)?;
    let f = frame_signal();
    let psi = frame_atom();
    let band = f.support().expect("bump support");
    let weight_laws = check_weight_laws(&spec, &config.weight, config.weight_samples, config.seed)?;
    let grid = well_spread_generate(&spec, &config.grid, &time_window(&axes), Some((&band, &psi)))?;
    let snapped = SnappedGrid::new(&grid, &axes)?;
    let op = FrameOperator::new(&spec, snapped, &psi, Some(&band))?;
    let bounds = op.bounds(None, config.power_iterations, config.seed)?;
    let fhat = op.project(&HalfSpaceSignal::from_fn(axes.clone(), |x| f.eval(x))?);
    let coeffs = op.analysis(&fhat);
    let rec = op.reconstruct(&coeffs, bounds, config.iterations)?;
    let reconstruction_error = rec.signal.relative_gap(&fhat)?;
    let points = op.grid.to_points();
    let values: Vec<Complex64> = coeffs.into_iter().flatten().collect();
    let coefficients = CoefficientSequence::new(points, values)?;
    let subset = transfer_subset(&coefficients.points, config.transfer_points, config.seed);
    let taxes = half_space_axes(2, config.transfer_cells, config.xi)?;
    let tr = coorbit_transfer(&spec, &f, &psi, &subset, &taxes, Direction::ToMetaplectic, config.p, &config.weight)?;
    let transfer_gap_refined = if config.transfer_refine {
        let fine = half_space_axes(2, 2 * config.transfer_cells, config.xi)?;
        let tr = coorbit_transfer(&spec, &f, &psi, &subset, &fine, Direction::ToMetaplectic, config.p, &config.weight)?;
        Some(tr.max_gap)
    } else {
        None
    };
    Ok(CoorbitRun {
        points: coefficients.points.len(),
        shear_blocks: op.grid.blocks.len(),
        weight_laws,
        frame_bounds_est: bounds,
        lambda: rec.lambda,
        residual_history: rec.residual_history,
        reconstruction_error,
        norm_lpm: lpm_norm(&coefficients, config.p, &config.weight)?,
        norm_group: lpm_group_norm(&coefficients, config.p, &config.weight)?,
        transfer_gap: tr.max_gap,
        transfer_norms: (tr.norm_shearlet, tr.norm_metaplectic),
        transfer_gap_refined,
        coefficients,
    })
}
