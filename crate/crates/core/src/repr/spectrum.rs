//! Fourier-side test functions: analytic atoms and sampled signals.

use super::grid::HalfSpaceSignal;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A function on the frequency side.
pub trait Spectrum: Sync {
    fn eval(&self, xi: &[f64]) -> Complex64;

    /// Axis-aligned box outside which the function vanishes.
    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }
}

impl Spectrum for HalfSpaceSignal {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        self.interp(xi)
    }
}

/// One-dimensional bump `exp(1 - 1/(1 - y^2))` on `(lo, hi)`, peak value 1.
pub fn bump1(x: f64, lo: f64, hi: f64) -> f64 {
    let y = (2.0 * x - lo - hi) / (hi - lo);
    if y.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - y * y)).exp()
    }
}

/// Test atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Atom {
    /// Tensor bump on the open box `(lo, hi)`.
    Bump { lo: Vec<f64>, hi: Vec<f64> },
    /// Indicator of the half-open box `[lo, hi)`.
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Atom {
    pub fn bump(lo: &[f64], hi: &[f64]) -> Self {
        Atom::Bump { lo: lo.to_vec(), hi: hi.to_vec() }
    }

    pub fn indicator(lo: &[f64], hi: &[f64]) -> Self {
        Atom::Box { lo: lo.to_vec(), hi: hi.to_vec() }
    }

    /// Default atom of the transform tests, supported in `[-4,-1/2] x [-2,2]`.
    pub fn reference_bump() -> Self {
        Atom::bump(&[-4.0, -2.0], &[-0.5, 2.0])
    }

    /// Indicator of `[-2,-1] x [0,1]`, with `C_psi = 1/2`.
    pub fn reference_box() -> Self {
        Atom::indicator(&[-2.0, 0.0], &[-1.0, 1.0])
    }

    pub fn name(&self) -> &'static str {
        match self {
            Atom::Bump { .. } => "bump",
            Atom::Box { .. } => "box",
        }
    }
}

impl Spectrum for Atom {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        let v = match self {
            Atom::Bump { lo, hi } => xi.iter().zip(lo.iter().zip(hi)).map(|(&x, (&l, &h))| bump1(x, l, h)).product(),
            Atom::Box { lo, hi } => {
                let inside = xi.iter().zip(lo.iter().zip(hi)).all(|(&x, (&l, &h))| x >= l && x < h);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
        };
        Complex64::new(v, 0.0)
    }

    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Atom::Bump { lo, hi } | Atom::Box { lo, hi } => Some((lo.clone(), hi.clone())),
        }
    }
}

/// `c * f(xi) * exp(-2 pi i <x0, xi>)`.
pub struct Modulated<'a> {
    pub base: &'a dyn Spectrum,
    pub scale: Complex64,
    pub shift: Vec<f64>,
}

impl Spectrum for Modulated<'_> {
    fn eval(&self, xi: &[f64]) -> Complex64 {
        let ph: f64 = xi.iter().zip(&self.shift).map(|(a, b)| a * b).sum();
        self.scale * self.base.eval(xi) * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * ph)
    }

    fn support(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.base.support()
    }
}
