//! Power weights `m(a, s, t) = a^{r1} (1 + |s|)^{r2} (1 + |t|)^{r3}` and their control weights.

use crate::error::Result;
use crate::groups::{compose, inverse, Element, GroupSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Exponents of a power weight.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl WeightSpec {
    pub const fn new(r1: f64, r2: f64, r3: f64) -> Self {
        WeightSpec { r1, r2, r3 }
    }

    pub const fn unit() -> Self {
        WeightSpec::new(0.0, 0.0, 0.0)
    }

    /// Shipped presets; shear and translation factors are not dominated by the symmetrized control weight.
    pub fn presets() -> Vec<(&'static str, WeightSpec)> {
        vec![
            ("unit", WeightSpec::unit()),
            ("dilation", WeightSpec::new(1.0, 0.0, 0.0)),
            ("inverse-dilation", WeightSpec::new(-1.0, 0.0, 0.0)),
            ("half-dilation", WeightSpec::new(0.5, 0.0, 0.0)),
            ("square-dilation", WeightSpec::new(2.0, 0.0, 0.0)),
        ]
    }

    pub fn m(&self, g: &Element<f64>) -> f64 {
        g.a.abs().powf(self.r1) * (1.0 + norm(&g.s)).powf(self.r2) * (1.0 + norm(&g.t)).powf(self.r3)
    }

    /// The same form with `|r_i|`.
    pub fn m_abs(&self, g: &Element<f64>) -> f64 {
        WeightSpec::new(self.r1.abs(), self.r2.abs(), self.r3.abs()).m(g)
    }

    /// Control weight `w(g) = max(m^(g), m^(g^-1))`.
    pub fn w(&self, spec: &GroupSpec, g: &Element<f64>) -> Result<f64> {
        Ok(self.m_abs(g).max(self.m_abs(&inverse(spec, g)?)))
    }
}

/// Largest violations of `w(gh) <= w(g) w(h)` and `m(xyz) <= w(x) m(y) w(z)`, relative to the right-hand sides.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightLawReport {
    pub samples: usize,
    pub submultiplicative_excess: f64,
    pub moderate_excess: f64,
    pub pass: bool,
}

/// Slack allowed in the weight-law checks.
pub const WEIGHT_SLACK: f64 = 1e-12;

/// Random element with `log a` in `[-2, 2]`, `s` in `[-2, 2]^{d-1}`, `t` in `[-2, 2]^d`.
pub fn random_element(spec: &GroupSpec, rng: &mut impl Rng) -> Element<f64> {
    let a = rng.gen_range(-2.0..2.0f64).exp();
    let s = (0..spec.d - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let t = (0..spec.d).map(|_| rng.gen_range(-2.0..2.0)).collect();
    Element::new(a, s, t)
}

pub fn check_weight_laws(spec: &GroupSpec, weight: &WeightSpec, samples: usize, seed: u64) -> Result<WeightLawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sub: f64 = 0.0;
    let mut modr: f64 = 0.0;
    for _ in 0..samples {
        let x = random_element(spec, &mut rng);
        let y = random_element(spec, &mut rng);
        let z = random_element(spec, &mut rng);
        let xy = compose(spec, &x, &y)?;
        let rhs = weight.w(spec, &x)? * weight.w(spec, &y)?;
        sub = sub.max((weight.w(spec, &xy)? - rhs) / rhs);
        let xyz = compose(spec, &xy, &z)?;
        let rhs = weight.w(spec, &x)? * weight.m(&y) * weight.w(spec, &z)?;
        modr = modr.max((weight.m(&xyz) - rhs) / rhs);
    }
    Ok(WeightLawReport {
        samples,
        submultiplicative_excess: sub,
        moderate_excess: modr,
        pass: sub <= WEIGHT_SLACK && modr <= WEIGHT_SLACK,
    })
}
