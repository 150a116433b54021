//! The shearlet and Toeplitz representations, the quadratic map `Q`, the isometry `Psi` and the
//! metaplectic representation on half-space signals.

use super::grid::{shape, Axis, Dft, HalfSpaceSignal, TimeSignal};
use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::groups::{affine_matrix, toeplitz_matrix, validate, Element, GroupKind, GroupSpec};
use crate::matrix::Mat;
use crate::symplectic::{a_tilde, s_tilde};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Minimum number of cells per axis for transform operations.
pub const MIN_CELLS: usize = 8;

/// Linear part `M` and translation `t` of a connected shearlet or Toeplitz element.
#[derive(Clone, Debug, PartialEq)]
pub struct Warp {
    pub m: Mat<f64>,
    pub det: f64,
    pub t: Vec<f64>,
}

impl Warp {
    pub fn new(spec: &GroupSpec, g: &Element<f64>) -> Result<Self> {
        if !matches!(spec.kind, GroupKind::ShearletConn | GroupKind::ToeplitzConn) {
            return Err(Error::KindMismatch(format!("{} has no representation on the half-space", spec.kind.name())));
        }
        validate(spec, g)?;
        let aff = affine_matrix(spec, g)?;
        let d = spec.d;
        let m = aff.block(0, 0, d, d);
        let det = m.det();
        Ok(Warp { m, det, t: g.t.clone() })
    }

    /// `M^T xi`.
    pub fn freq_arg(&self, xi: &[f64]) -> Vec<f64> {
        self.m.transpose().mul_vec(xi)
    }

    /// `|det M|^{1/2} f(M^T xi) e^{-2 pi i <t, xi>}` given `f(M^T xi)`.
    pub fn freq_value(&self, xi: &[f64], f_at: Complex64) -> Complex64 {
        let ph: f64 = self.t.iter().zip(xi).map(|(a, b)| a * b).sum();
        f_at * self.det.abs().sqrt() * Complex64::from_polar(1.0, -2.0 * PI * ph)
    }
}

fn check_grid(axes: &[Axis], factor: f64) -> Result<()> {
    for a in axes {
        if a.n < MIN_CELLS {
            return Err(Error::GridTooCoarse(format!("{} cells < {MIN_CELLS}", a.n)));
        }
    }
    let span = axes.iter().map(|a| a.max - a.min).fold(f64::INFINITY, f64::min);
    let step = axes.iter().map(Axis::step).fold(0.0, f64::max);
    if !(factor * step < span) {
        return Err(Error::GridTooCoarse(format!("warp factor {factor:.3e} exceeds the grid span")));
    }
    Ok(())
}

fn warp_factor(m: &Mat<f64>) -> f64 {
    m.max_abs() * m.rows() as f64
}

fn resample(axes: &[Axis], f: impl Fn(&[f64]) -> Complex64 + Sync) -> Result<HalfSpaceSignal> {
    HalfSpaceSignal::from_fn(axes.to_vec(), f)
}

/// `pi^(g) f^(omega) = |det M|^{1/2} f^(M^T omega) e^{-2 pi i <t, omega>}` by linear interpolation.
pub fn pi_hat_apply(spec: &GroupSpec, g: &Element<f64>, fhat: &HalfSpaceSignal) -> Result<HalfSpaceSignal> {
    pi_hat_sample(spec, g, fhat, &fhat.axes)
}

/// As [`pi_hat_apply`] for any spectrum, sampled on `axes`.
pub fn pi_hat_sample(spec: &GroupSpec, g: &Element<f64>, f: &dyn Spectrum, axes: &[Axis]) -> Result<HalfSpaceSignal> {
    let w = Warp::new(spec, g)?;
    check_dims(spec, axes)?;
    check_grid(axes, warp_factor(&w.m))?;
    resample(axes, |xi| w.freq_value(xi, f.eval(&w.freq_arg(xi))))
}

fn check_dims(spec: &GroupSpec, axes: &[Axis]) -> Result<()> {
    if spec.d != axes.len() {
        return Err(Error::DimensionMismatch(format!("group dimension {} on a {}-axis grid", spec.d, axes.len())));
    }
    Ok(())
}

/// Analytic `pi^(g) f`.
pub struct PiHat<'a> {
    pub warp: Warp,
    pub base: &'a dyn Spectrum,
}

impl<'a> PiHat<'a> {
    pub fn new(spec: &GroupSpec, g: &Element<f64>, base: &'a dyn Spectrum) -> Result<Self> {
        Ok(PiHat { warp: Warp::new(spec, g)?, base })
    }
}

impl Spectrum for PiHat<'_> {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        self.warp.freq_value(xi, self.base.eval(&self.warp.freq_arg(xi)))
    }
}

/// Band-limited evaluation of one line of time samples at arbitrary points; zero outside the window.
fn resample_line(axis: &Axis, dft: &Dft, line: &[Complex64], at: &[f64]) -> Vec<Complex64> {
    let coeffs = dft.analyze(line);
    let h = axis.step();
    let dx = axis.time_step();
    let lo = axis.time(0) - 0.5 * dx;
    let hi = axis.time(axis.n - 1) + 0.5 * dx;
    let first = axis.center(0);
    at.iter()
        .map(|&u| {
            if !(u >= lo && u < hi) {
                return Complex64::new(0.0, 0.0);
            }
            let step = Complex64::from_polar(1.0, 2.0 * PI * u * h);
            let mut e = Complex64::from_polar(1.0, 2.0 * PI * u * first);
            let mut acc = Complex64::new(0.0, 0.0);
            for c in &coeffs {
                acc += c * e;
                e *= step;
            }
            acc * h
        })
        .collect()
}

/// `pi(g) f(x) = |det M|^{-1/2} f(M^{-1}(x - t))` on the time grid, by two band-limited resampling passes.
pub fn pi_time_apply(spec: &GroupSpec, g: &Element<f64>, f: &TimeSignal) -> Result<TimeSignal> {
    use rayon::prelude::*;
    let w = Warp::new(spec, g)?;
    check_dims(spec, &f.axes)?;
    if spec.d != 2 {
        return Err(Error::Unsupported("time-domain warps are implemented for d = 2".into()));
    }
    check_grid(&f.axes, warp_factor(&w.m))?;
    let (ax0, ax1) = (f.axes[0], f.axes[1]);
    let (n0, n1) = (ax0.n, ax1.n);
    let (m00, m01, m11) = (w.m[(0, 0)], w.m[(0, 1)], w.m[(1, 1)]);
    let (t0, t1) = (w.t[0], w.t[1]);
    let dft0 = Dft::new(&[ax0]);
    let dft1 = Dft::new(&[ax1]);
    let u1: Vec<f64> = (0..n1).map(|m| (ax1.time(m) - t1) / m11).collect();
    let rows: Vec<Vec<Complex64>> =
        (0..n0).into_par_iter().map(|i| resample_line(&ax1, &dft1, &f.values[i * n1..(i + 1) * n1], &u1)).collect();
    let cols: Vec<Vec<Complex64>> = (0..n1)
        .into_par_iter()
        .map(|m| {
            let line: Vec<Complex64> = (0..n0).map(|i| rows[i][m]).collect();
            let at: Vec<f64> = (0..n0).map(|l| (ax0.time(l) - t0 - m01 * (ax1.time(m) - t1) / m11) / m00).collect();
            resample_line(&ax0, &dft0, &line, &at)
        })
        .collect();
    let c = w.det.abs().powf(-0.5);
    let mut values = vec![Complex64::new(0.0, 0.0); n0 * n1];
    for (m, col) in cols.iter().enumerate() {
        for (l, v) in col.iter().enumerate() {
            values[l * n1 + m] = v * c;
        }
    }
    Ok(TimeSignal { axes: f.axes.clone(), values })
}

/// `Q(xi) = -1/2 (xi_1^2, xi_1 xi_2, ..., xi_1 xi_d)` on `xi_1 < 0`.
pub fn q_map(xi: &[f64]) -> Result<Vec<f64>> {
    if !(xi[0] < 0.0) {
        return Err(Error::DomainError(format!("Q needs xi_1 < 0, got {}", xi[0])));
    }
    Ok(xi.iter().map(|x| -0.5 * xi[0] * x).collect())
}

/// Inverse of [`q_map`] on `eta_1 < 0`.
pub fn q_inverse(eta: &[f64]) -> Result<Vec<f64>> {
    if !(eta[0] < 0.0) {
        return Err(Error::DomainError(format!("Q^-1 needs eta_1 < 0, got {}", eta[0])));
    }
    let x1 = -(-2.0 * eta[0]).sqrt();
    let mut out = vec![x1];
    out.extend(eta[1..].iter().map(|e| -2.0 * e / x1));
    Ok(out)
}

/// `|det J_Q(xi)| = 2^{1-d} |xi_1|^d`.
pub fn jac_q(xi: &[f64]) -> f64 {
    let d = xi.len() as i32;
    2f64.powi(1 - d) * xi[0].abs().powi(d)
}

/// `|det J_{Q^-1}(eta)| = sqrt(2)^{d-2} |eta_1|^{-d/2}`.
pub fn jac_q_inverse(eta: &[f64]) -> f64 {
    let d = eta.len() as f64;
    2f64.sqrt().powf(d - 2.0) * eta[0].abs().powf(-d / 2.0)
}

/// Both Jacobian determinants at `xi`: `(|det J_Q(xi)|, |det J_{Q^-1}(xi)|)`.
pub fn q_jacobian_dets(xi: &[f64]) -> Result<(f64, f64)> {
    if !(xi[0] < 0.0) {
        return Err(Error::DomainError(format!("xi_1 = {} is not negative", xi[0])));
    }
    Ok((jac_q(xi), jac_q_inverse(xi)))
}

fn require_half_space(axes: &[Axis]) -> Result<()> {
    if axes[0].max > 0.0 {
        return Err(Error::DomainError("grid leaves the half-space".into()));
    }
    Ok(())
}

/// `Psi^ f^(xi) = |det J_{Q^-1}(xi)|^{1/2} f^(Q^{-1}(xi))`.
pub fn psi_hat_apply(fhat: &HalfSpaceSignal) -> Result<HalfSpaceSignal> {
    psi_hat_sample(fhat, &fhat.axes)
}

pub fn psi_hat_sample(f: &dyn Spectrum, axes: &[Axis]) -> Result<HalfSpaceSignal> {
    require_half_space(axes)?;
    check_grid(axes, 1.0)?;
    resample(axes, |xi| PsiHat { base: f }.eval(xi))
}

/// `Psi^{-1} g(xi) = |det J_Q(xi)|^{1/2} g(Q(xi))`.
pub fn psi_hat_inverse(g: &HalfSpaceSignal) -> Result<HalfSpaceSignal> {
    psi_hat_inverse_sample(g, &g.axes)
}

pub fn psi_hat_inverse_sample(g: &dyn Spectrum, axes: &[Axis]) -> Result<HalfSpaceSignal> {
    require_half_space(axes)?;
    check_grid(axes, 1.0)?;
    resample(axes, |xi| PsiHatInverse { base: g }.eval(xi))
}

/// Analytic `Psi^ f`.
pub struct PsiHat<'a> {
    pub base: &'a dyn Spectrum,
}

impl Spectrum for PsiHat<'_> {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        match q_inverse(xi) {
            Ok(x) => self.base.eval(&x) * jac_q_inverse(xi).sqrt(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

/// Analytic `Psi^{-1} g`.
pub struct PsiHatInverse<'a> {
    pub base: &'a dyn Spectrum,
}

impl Spectrum for PsiHatInverse<'_> {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        match q_map(xi) {
            Ok(e) => self.base.eval(&e) * jac_q(xi).sqrt(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

/// The two metaplectic pictures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetaKind {
    /// Image of the shearlet group.
    Tds,
    /// Image of the Toeplitz shearlet group.
    TdsT,
}

impl MetaKind {
    pub fn for_group(kind: GroupKind) -> Result<Self> {
        match kind {
            GroupKind::ShearletConn => Ok(MetaKind::Tds),
            GroupKind::ToeplitzConn => Ok(MetaKind::TdsT),
            k => Err(Error::KindMismatch(format!("no metaplectic picture for {}", k.name()))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MetaKind::Tds => "TDS",
            MetaKind::TdsT => "TDS_T",
        }
    }
}

/// Linear argument map `L` and prefactor of the metaplectic representation:
/// `TDS`: `L = A~^{-1} S~^{-1}`, `a^{1/2 - d/4 + gamma (d-1)/2}`; `TDS_T`: `L = sqrt(a) T_s^T`, `a^{d/4}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Metaplectic {
    pub l: Mat<f64>,
    pub prefactor: f64,
    pub t: Vec<f64>,
}

impl Metaplectic {
    pub fn new(kind: MetaKind, spec: &GroupSpec, g: &Element<f64>) -> Result<Self> {
        let d = spec.d;
        if !(g.a > 0.0) {
            return Err(Error::DomainError(format!("metaplectic representation needs a > 0, got {}", g.a)));
        }
        if g.s.len() != d - 1 || g.t.len() != d {
            return Err(Error::DimensionMismatch("element does not match the dimension".into()));
        }
        let gamma = crate::scalar::q_to_f64(&spec.gamma);
        let df = d as f64;
        let (l, prefactor) = match kind {
            MetaKind::Tds => {
                let m = s_tilde(&g.s).mul(&a_tilde(d, &spec.gamma, &g.a)?);
                (m.inverse()?, g.a.powf(0.5 - df / 4.0 + gamma * (df - 1.0) / 2.0))
            }
            MetaKind::TdsT => (toeplitz_matrix(&g.s).transpose().scale(&g.a.sqrt()), g.a.powf(df / 4.0)),
        };
        Ok(Metaplectic { l, prefactor, t: g.t.clone() })
    }

    pub fn value(&self, xi: &[f64], f: &dyn Spectrum) -> Complex64 {
        let Ok(qx) = q_map(xi) else { return Complex64::new(0.0, 0.0) };
        let ph: f64 = self.t.iter().zip(&qx).map(|(a, b)| a * b).sum();
        f.eval(&self.l.mul_vec(xi)) * self.prefactor * Complex64::from_polar(1.0, -2.0 * PI * ph)
    }
}

/// `pi^m(g) f^(xi) = c e^{-2 pi i <t, Q(xi)>} f^(L xi)` by linear interpolation.
pub fn metaplectic_apply(kind: MetaKind, spec: &GroupSpec, g: &Element<f64>, fhat: &HalfSpaceSignal) -> Result<HalfSpaceSignal> {
    metaplectic_sample(kind, spec, g, fhat, &fhat.axes)
}

pub fn metaplectic_sample(
    kind: MetaKind,
    spec: &GroupSpec,
    g: &Element<f64>,
    f: &dyn Spectrum,
    axes: &[Axis],
) -> Result<HalfSpaceSignal> {
    let m = Metaplectic::new(kind, spec, g)?;
    check_dims(spec, axes)?;
    require_half_space(axes)?;
    check_grid(axes, warp_factor(&m.l))?;
    resample(axes, |xi| m.value(xi, f))
}

/// Analytic `pi^m(g) f`.
pub struct MetaHat<'a> {
    pub op: Metaplectic,
    pub base: &'a dyn Spectrum,
}

impl Spectrum for MetaHat<'_> {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        self.op.value(xi, self.base)
    }
}

/// Relative gap `|Q(L xi) - M^T Q(xi)| / max(1, |M^T Q(xi)|)` of the covariance identity.
pub fn q_covariance_residual(spec: &GroupSpec, g: &Element<f64>, xi: &[f64]) -> Result<f64> {
    let kind = MetaKind::for_group(spec.kind)?;
    let w = Warp::new(spec, g)?;
    let m = Metaplectic::new(kind, spec, g)?;
    let lhs = q_map(&m.l.mul_vec(xi))?;
    let rhs = w.m.transpose().mul_vec(&q_map(xi)?);
    let scale = rhs.iter().map(|v| v.abs()).fold(1.0, f64::max);
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale)
}

/// `||Psi^ pi^m(kappa(g)) Psi^{-1} f^ - pi^(g) f^|| / ||f^||` on the grid of `fhat`.
pub fn equivalence_residual(spec: &GroupSpec, g: &Element<f64>, fhat: &HalfSpaceSignal) -> Result<f64> {
    let kind = MetaKind::for_group(spec.kind)?;
    let lifted = psi_hat_inverse(fhat)?;
    let moved = metaplectic_apply(kind, spec, g, &lifted)?;
    let back = psi_hat_apply(&moved)?;
    let direct = pi_hat_apply(spec, g, fhat)?;
    Ok(back.sub(&direct)?.norm() / fhat.norm())
}

/// Number of samples on a grid.
pub fn sample_count(axes: &[Axis]) -> usize {
    shape(axes).0
}
