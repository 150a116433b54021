//! Verification suites behind the command-line interface. Each suite returns a [`Report`].

pub mod algebra;
pub mod analysis;
pub mod input;

pub use algebra::{
    classify_matrix, classify_selftest, embed_search, groups_verify, mgamma_case, mgamma_random, obstruct,
    sympl_check_exact, sympl_check_float, table_verify, Which,
};
pub use analysis::{admissibility, coorbit_run, equivalence, square_int, transform, AdmissibilityAtom};

use crate::error::{Error, Result};
use crate::groups::{Element, GroupKind, GroupSpec};
use crate::scalar::{q, Scalar, Q};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

/// Numeric backend of the algebraic suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(Error::Parse(format!("unknown backend {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

/// Relative tolerance of the float backend.
pub const FLOAT_TOL: f64 = 1e-12;

/// Random rational `n/m` with `|n| <= num` and `1 <= m <= den`.
pub fn random_q(rng: &mut impl Rng, num: i64, den: i64) -> Q {
    q(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Random positive rational whose powers `a^gamma`, `a^{1 - gamma}` and `a^{1/2}` are all rational.
pub fn random_dilation(rng: &mut impl Rng, gamma: &Q) -> Q {
    let den = gamma.denom().to_i64().unwrap_or(1);
    let k = 2i64.lcm(&den);
    let r = q(rng.gen_range(1..=3), rng.gen_range(1..=3));
    num_traits::pow(r, k as usize)
}

/// Random valid element of `spec` with rational entries.
pub fn random_element(spec: &GroupSpec, rng: &mut impl Rng) -> Element<Q> {
    let a = if spec.kind.is_unimodular_heis() {
        q(1, 1)
    } else {
        let a = random_dilation(rng, &spec.gamma);
        let signed = matches!(spec.kind, GroupKind::ShearletFull | GroupKind::ToeplitzFull);
        if signed && rng.gen_bool(0.5) {
            -a
        } else {
            a
        }
    };
    let s = (0..spec.d - 1).map(|_| random_q(rng, 6, 4)).collect();
    let t = (0..spec.d).map(|_| random_q(rng, 6, 4)).collect();
    Element::new(a, s, t)
}

/// Element in the chosen backend.
pub fn to_backend<S: Scalar>(g: &Element<Q>) -> Element<S> {
    Element::new(S::from_q(&g.a), g.s.iter().map(S::from_q).collect(), g.t.iter().map(S::from_q).collect())
}

fn element_scale<S: Scalar>(g: &Element<S>) -> f64 {
    g.s.iter().chain(&g.t).chain(std::iter::once(&g.a)).map(|x| x.to_f64().abs()).fold(1.0, f64::max)
}

/// Exact equality, or agreement to [`FLOAT_TOL`] relative to the larger element.
pub fn same_element<S: Scalar>(x: &Element<S>, y: &Element<S>) -> bool {
    if S::EXACT {
        x == y
    } else {
        x.max_diff(y) <= FLOAT_TOL * element_scale(x).max(element_scale(y))
    }
}

/// Exact equality, or agreement to [`FLOAT_TOL`] relative to the larger matrix.
pub fn same_matrix<S: Scalar>(x: &crate::matrix::Mat<S>, y: &crate::matrix::Mat<S>) -> bool {
    if S::EXACT {
        x == y
    } else {
        x.sub(y).max_abs() <= FLOAT_TOL * x.max_abs().max(y.max_abs()).max(1.0)
    }
}
