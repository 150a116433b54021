//! Shearlet, Toeplitz shearlet and Heisenberg-type groups.
//!
//! Elements share one storage layout: a dilation `a`, a shear vector `s` of
//! length `d-1` and a translation `t` of length `d`.  For the Heisenberg kinds
//! `s` holds `p`, `t[0]` holds `tau` and `t[1..]` holds `q`; `a` is fixed to 1
//! for the kinds without a dilation.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{fmt_q, parse_q, q, Scalar, Q};
use serde::{Deserialize, Serialize};

/// Group families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Heis,
    HeisPol,
    HeisExt,
    HeisExtPol,
    ShearletConn,
    ShearletFull,
    ToeplitzConn,
    ToeplitzFull,
}

impl GroupKind {
    pub const ALL: [GroupKind; 8] = [
        GroupKind::Heis,
        GroupKind::HeisPol,
        GroupKind::HeisExt,
        GroupKind::HeisExtPol,
        GroupKind::ShearletConn,
        GroupKind::ShearletFull,
        GroupKind::ToeplitzConn,
        GroupKind::ToeplitzFull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Heis => "Heis",
            GroupKind::HeisPol => "HeisPol",
            GroupKind::HeisExt => "HeisExt",
            GroupKind::HeisExtPol => "HeisExtPol",
            GroupKind::ShearletConn => "ShearletConn",
            GroupKind::ShearletFull => "ShearletFull",
            GroupKind::ToeplitzConn => "ToeplitzConn",
            GroupKind::ToeplitzFull => "ToeplitzFull",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown group kind {s:?}")))
    }

    /// Kinds whose dilation is restricted to `a > 0`.
    pub fn is_connected(self) -> bool {
        matches!(self, GroupKind::ShearletConn | GroupKind::ToeplitzConn | GroupKind::HeisExt | GroupKind::HeisExtPol)
    }

    /// Kinds without a dilation parameter.
    pub fn is_unimodular_heis(self) -> bool {
        matches!(self, GroupKind::Heis | GroupKind::HeisPol)
    }

    pub fn is_toeplitz(self) -> bool {
        matches!(self, GroupKind::ToeplitzConn | GroupKind::ToeplitzFull)
    }

    pub fn is_shearlet(self) -> bool {
        matches!(self, GroupKind::ShearletConn | GroupKind::ShearletFull)
    }
}

/// A concrete group: kind, dimension and anisotropy exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub d: usize,
    pub gamma: Q,
}

impl GroupSpec {
    /// Requires `d >= 2` and `gamma` in `(0,1)`.
    pub fn new(kind: GroupKind, d: usize, gamma: Q) -> Result<Self> {
        if gamma <= q(0, 1) || gamma >= q(1, 1) {
            return Err(Error::InvalidParameter(format!("gamma {} outside (0,1)", fmt_q(&gamma))));
        }
        Self::with_any_gamma(kind, d, gamma)
    }

    /// Accepts any rational `gamma` other than 0 and 1.
    pub fn with_any_gamma(kind: GroupKind, d: usize, gamma: Q) -> Result<Self> {
        if gamma == q(0, 1) || gamma == q(1, 1) {
            return Err(Error::InvalidParameter(format!("gamma {} is excluded", fmt_q(&gamma))));
        }
        if d < 2 {
            return Err(Error::InvalidParameter(format!("dimension d = {d} < 2")));
        }
        Ok(GroupSpec { kind, d, gamma })
    }

    pub fn with_kind(&self, kind: GroupKind) -> Self {
        GroupSpec { kind, ..self.clone() }
    }
}

/// Group element `(a, s, t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<S> {
    pub a: S,
    pub s: Vec<S>,
    pub t: Vec<S>,
}

impl<S: Scalar> Element<S> {
    pub fn new(a: S, s: Vec<S>, t: Vec<S>) -> Self {
        Element { a, s, t }
    }

    pub fn to_f64(&self) -> Element<f64> {
        Element {
            a: self.a.to_f64(),
            s: self.s.iter().map(Scalar::to_f64).collect(),
            t: self.t.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Largest absolute difference between two elements.
    pub fn max_diff(&self, o: &Self) -> f64 {
        let mut m = (self.a.to_f64() - o.a.to_f64()).abs();
        for (x, y) in self.s.iter().zip(&o.s).chain(self.t.iter().zip(&o.t)) {
            m = m.max((x.to_f64() - y.to_f64()).abs());
        }
        m
    }
}

impl Element<f64> {
    pub fn from_q(g: &Element<Q>) -> Self {
        g.to_f64()
    }
}

fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

fn axpy<S: Scalar>(x: &[S], c: &S, y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() + c.clone() * b.clone()).collect()
}

fn sgn<S: Scalar>(a: &S) -> S {
    if *a < S::zero() {
        -S::one()
    } else {
        S::one()
    }
}

/// `|a|^e` in the chosen backend.
pub fn abs_pow<S: Scalar>(a: &S, e: &Q) -> Result<S> {
    a.abs().pow_q(e)
}

/// `sgn(a) |a|^gamma`.
pub fn signed_pow<S: Scalar>(a: &S, gamma: &Q) -> Result<S> {
    Ok(sgn(a) * abs_pow(a, gamma)?)
}

/// Checks dimensions and the dilation constraint of `spec.kind`.
pub fn validate<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<()> {
    if g.s.len() != spec.d - 1 || g.t.len() != spec.d {
        return Err(Error::DimensionMismatch(format!(
            "expected |s| = {} and |t| = {}, got {} and {}",
            spec.d - 1,
            spec.d,
            g.s.len(),
            g.t.len()
        )));
    }
    if spec.kind.is_unimodular_heis() {
        if g.a != S::one() {
            return Err(Error::InvalidParameter(format!("{} elements carry a = 1", spec.kind.name())));
        }
    } else if g.a.is_zero() {
        return Err(Error::InvalidParameter("dilation a = 0".into()));
    } else if spec.kind.is_connected() && g.a < S::zero() {
        return Err(Error::InvalidParameter(format!("{} requires a > 0", spec.kind.name())));
    }
    Ok(())
}

/// Neutral element.
pub fn identity<S: Scalar>(spec: &GroupSpec) -> Element<S> {
    Element { a: S::one(), s: vec![S::zero(); spec.d - 1], t: vec![S::zero(); spec.d] }
}

/// Dilation matrix: `diag(a, sgn(a)|a|^gamma I)` or `a I` for the Toeplitz kinds.
pub fn dilation_matrix<S: Scalar>(spec: &GroupSpec, a: &S) -> Result<Mat<S>> {
    let d = spec.d;
    if spec.kind.is_toeplitz() {
        return Ok(Mat::identity(d).scale(a));
    }
    let ag = signed_pow(a, &spec.gamma)?;
    let mut diag = vec![ag; d];
    diag[0] = a.clone();
    Ok(Mat::diag(&diag))
}

/// Shear matrix `[[1, s^T], [0, I]]`.
pub fn shear_matrix<S: Scalar>(s: &[S]) -> Mat<S> {
    let d = s.len() + 1;
    let mut m = Mat::identity(d);
    for (j, sj) in s.iter().enumerate() {
        m[(0, j + 1)] = sj.clone();
    }
    m
}

/// Upper triangular Toeplitz matrix with unit diagonal and `s_k` on the k-th superdiagonal.
pub fn toeplitz_matrix<S: Scalar>(s: &[S]) -> Mat<S> {
    let d = s.len() + 1;
    Mat::from_fn(d, d, |i, j| match j.checked_sub(i) {
        Some(0) => S::one(),
        Some(k) => s[k - 1].clone(),
        None => S::zero(),
    })
}

/// Parameter of `T_s T_{s'}`: `(s#s')_i = s_i + s'_i + sum_{j+k=i} s'_j s_k`.
pub fn toeplitz_product<S: Scalar>(s: &[S], sp: &[S]) -> Vec<S> {
    let n = s.len();
    (1..=n)
        .map(|i| {
            let mut v = s[i - 1].clone() + sp[i - 1].clone();
            for j in 1..i {
                v = v + sp[j - 1].clone() * s[i - j - 1].clone();
            }
            v
        })
        .collect()
}

/// Parameter `u` with `T_u = T_s^{-1}`.
pub fn toeplitz_inverse<S: Scalar>(s: &[S]) -> Vec<S> {
    let n = s.len();
    let mut u: Vec<S> = Vec::with_capacity(n);
    for i in 1..=n {
        let mut v = -s[i - 1].clone();
        for j in 1..i {
            v = v - u[j - 1].clone() * s[i - j - 1].clone();
        }
        u.push(v);
    }
    u
}

/// Group product `g o h`.
pub fn compose<S: Scalar>(spec: &GroupSpec, g: &Element<S>, h: &Element<S>) -> Result<Element<S>> {
    validate(spec, g)?;
    validate(spec, h)?;
    let gamma = &spec.gamma;
    let one_minus = q(1, 1) - gamma;
    let (p, tau, qv) = (&g.s, &g.t[0], &g.t[1..]);
    let (p2, tau2, q2) = (&h.s, &h.t[0], &h.t[1..]);
    let half = S::one() / S::from_i64(2);
    let out = match spec.kind {
        GroupKind::Heis => {
            let tau_n = tau.clone() + tau2.clone() + half * (dot(p, q2) - dot(qv, p2));
            heis_pack(axpy(p, &S::one(), p2), tau_n, axpy(qv, &S::one(), q2), S::one())
        }
        GroupKind::HeisPol => {
            let tau_n = tau.clone() + tau2.clone() + dot(p, q2);
            heis_pack(axpy(p, &S::one(), p2), tau_n, axpy(qv, &S::one(), q2), S::one())
        }
        GroupKind::HeisExt | GroupKind::HeisExtPol => {
            let a = &g.a;
            let ag = signed_pow(a, gamma)?;
            let a1g = abs_pow(a, &one_minus)?;
            let tau_n = if spec.kind == GroupKind::HeisExt {
                tau.clone()
                    + a.clone() * tau2.clone()
                    + half * (ag.clone() * dot(p, q2) - a1g.clone() * dot(qv, p2))
            } else {
                tau.clone() + a.clone() * tau2.clone() + ag.clone() * dot(p, q2)
            };
            heis_pack(axpy(p, &a1g, p2), tau_n, axpy(qv, &ag, q2), a.clone() * h.a.clone())
        }
        GroupKind::ShearletConn | GroupKind::ShearletFull => {
            let a = &g.a;
            let ag = signed_pow(a, gamma)?;
            let a1g = abs_pow(a, &one_minus)?;
            let s = axpy(&g.s, &a1g, &h.s);
            let t1 = g.t[0].clone() + a.clone() * h.t[0].clone() + ag.clone() * dot(&g.s, &h.t[1..]);
            let mut t = vec![t1];
            t.extend(axpy(&g.t[1..], &ag, &h.t[1..]));
            Element { a: a.clone() * h.a.clone(), s, t }
        }
        GroupKind::ToeplitzConn | GroupKind::ToeplitzFull => {
            let ts = toeplitz_matrix(&g.s);
            let tt = ts.mul_vec(&h.t);
            let t = axpy(&g.t, &g.a, &tt);
            Element { a: g.a.clone() * h.a.clone(), s: toeplitz_product(&g.s, &h.s), t }
        }
    };
    Ok(out)
}

fn heis_pack<S: Scalar>(p: Vec<S>, tau: S, qv: Vec<S>, a: S) -> Element<S> {
    let mut t = vec![tau];
    t.extend(qv);
    Element { a, s: p, t }
}

/// Group inverse.
pub fn inverse<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Element<S>> {
    validate(spec, g)?;
    let gamma = &spec.gamma;
    let one_minus = q(1, 1) - gamma;
    let neg = |v: &[S]| v.iter().map(|x| -x.clone()).collect::<Vec<S>>();
    let out = match spec.kind {
        GroupKind::Heis => Element { a: S::one(), s: neg(&g.s), t: neg(&g.t) },
        GroupKind::HeisPol => {
            let tau = -g.t[0].clone() + dot(&g.s, &g.t[1..]);
            heis_pack(neg(&g.s), tau, neg(&g.t[1..]), S::one())
        }
        GroupKind::HeisExt | GroupKind::HeisExtPol | GroupKind::ShearletConn | GroupKind::ShearletFull => {
            let a = &g.a;
            let ai = S::one() / a.clone();
            let aig = signed_pow(&ai, gamma)?;
            let ai1g = abs_pow(&ai, &one_minus)?;
            let p = g.s.iter().map(|x| -(ai1g.clone() * x.clone())).collect::<Vec<_>>();
            let qv = g.t[1..].iter().map(|x| -(aig.clone() * x.clone())).collect::<Vec<_>>();
            let tau = match spec.kind {
                GroupKind::HeisExt => -(ai.clone() * g.t[0].clone()),
                _ => -(ai.clone() * g.t[0].clone()) + ai.clone() * dot(&g.s, &g.t[1..]),
            };
            heis_pack(p, tau, qv, ai)
        }
        GroupKind::ToeplitzConn | GroupKind::ToeplitzFull => {
            let u = toeplitz_inverse(&g.s);
            let ai = S::one() / g.a.clone();
            let tu = toeplitz_matrix(&u).mul_vec(&g.t);
            Element { a: ai.clone(), s: u, t: tu.into_iter().map(|x| -(ai.clone() * x)).collect() }
        }
    };
    Ok(out)
}

/// Left Haar density `1/|a|^{d+1}` (1 for the Heisenberg groups).
pub fn left_haar_density(spec: &GroupSpec, g: &Element<f64>) -> f64 {
    if spec.kind.is_unimodular_heis() {
        1.0
    } else {
        g.a.abs().powi(-(spec.d as i32 + 1))
    }
}

/// Right Haar density `1/|a|` (1 for the Heisenberg groups).
pub fn right_haar_density(spec: &GroupSpec, g: &Element<f64>) -> f64 {
    if spec.kind.is_unimodular_heis() {
        1.0
    } else {
        1.0 / g.a.abs()
    }
}

/// Modular function `|a|^{-d}`, the ratio of left to right densities.
pub fn modular_function(spec: &GroupSpec, g: &Element<f64>) -> f64 {
    left_haar_density(spec, g) / right_haar_density(spec, g)
}

/// Polarization `tau -> tau + p^T q / 2` from `Heis` to `HeisPol` or `HeisExt` to `HeisExtPol`.
pub fn polarize<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Element<S>> {
    if !matches!(spec.kind, GroupKind::Heis | GroupKind::HeisExt) {
        return Err(Error::KindMismatch(format!("polarization acts on Heis/HeisExt, not {}", spec.kind.name())));
    }
    validate(spec, g)?;
    let mut out = g.clone();
    out.t[0] = g.t[0].clone() + dot(&g.s, &g.t[1..]) / S::from_i64(2);
    Ok(out)
}

/// Inverse polarization.
pub fn depolarize<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Element<S>> {
    if !matches!(spec.kind, GroupKind::HeisPol | GroupKind::HeisExtPol) {
        return Err(Error::KindMismatch(format!(
            "inverse polarization acts on HeisPol/HeisExtPol, not {}",
            spec.kind.name()
        )));
    }
    validate(spec, g)?;
    let mut out = g.clone();
    out.t[0] = g.t[0].clone() - dot(&g.s, &g.t[1..]) / S::from_i64(2);
    Ok(out)
}

/// `(p, tau, q, a) -> (a, s = p, t_1 = tau, t~ = q)` from `HeisExtPol` to `ShearletConn`.
pub fn heis_ext_pol_to_shearlet<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Element<S>> {
    if spec.kind != GroupKind::HeisExtPol {
        return Err(Error::KindMismatch("expected a HeisExtPol element".into()));
    }
    validate(spec, g)?;
    Ok(g.clone())
}

/// Inverse of [`heis_ext_pol_to_shearlet`].
pub fn shearlet_to_heis_ext_pol<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Element<S>> {
    if spec.kind != GroupKind::ShearletConn {
        return Err(Error::KindMismatch("expected a ShearletConn element".into()));
    }
    validate(spec, g)?;
    Ok(g.clone())
}

/// `R_eps(a, s, t_1, t~) = (a, s, eps t_1, eps t~)`.
pub fn reflect<S: Scalar>(g: &Element<S>, eps: i32) -> Element<S> {
    if eps >= 0 {
        return g.clone();
    }
    Element { a: g.a.clone(), s: g.s.clone(), t: g.t.iter().map(|x| -x.clone()).collect() }
}

/// Splits a `ShearletFull` element into `(x, eps)` with `x` in the connected component.
pub fn split_sign<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<(Element<S>, i32)> {
    if spec.kind != GroupKind::ShearletFull {
        return Err(Error::KindMismatch("sign split acts on ShearletFull".into()));
    }
    validate(spec, g)?;
    let eps = g.a.sign();
    Ok((Element { a: g.a.abs(), s: g.s.clone(), t: g.t.clone() }, eps))
}

/// Inverse of [`split_sign`].
pub fn merge_sign<S: Scalar>(x: &Element<S>, eps: i32) -> Element<S> {
    let a = if eps < 0 { -x.a.clone() } else { x.a.clone() };
    Element { a, s: x.s.clone(), t: x.t.clone() }
}

/// Product in the split picture: `(x, e)(x', e') = (x o R_e x', e e')`.
pub fn split_compose<S: Scalar>(
    conn: &GroupSpec,
    (x, e): &(Element<S>, i32),
    (y, f): &(Element<S>, i32),
) -> Result<(Element<S>, i32)> {
    Ok((compose(conn, x, &reflect(y, *e))?, e * f))
}

/// Affine matrix `[[S_s A_a, t], [0, 1]]` (or `[[a T_s, t], [0, 1]]`) of a shearlet-type element.
pub fn affine_matrix<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Mat<S>> {
    validate(spec, g)?;
    let d = spec.d;
    let lin = if spec.kind.is_toeplitz() {
        toeplitz_matrix(&g.s).scale(&g.a)
    } else if spec.kind.is_shearlet() {
        shear_matrix(&g.s).mul(&dilation_matrix(spec, &g.a)?)
    } else {
        return Err(Error::KindMismatch("affine matrix needs a shearlet or Toeplitz kind".into()));
    };
    let mut m = Mat::identity(d + 1);
    m.set_block(0, 0, &lin);
    for i in 0..d {
        m[(i, d)] = g.t[i].clone();
    }
    Ok(m)
}

/// JSON form `{kind, d, gamma, a, s, t}` with rationals as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub kind: GroupKind,
    pub d: usize,
    pub gamma: String,
    pub a: Option<String>,
    pub s: Vec<String>,
    pub t: Vec<String>,
}

/// Serializes an exact element.
pub fn to_json(spec: &GroupSpec, g: &Element<Q>) -> Result<ElementJson> {
    validate(spec, g)?;
    Ok(ElementJson {
        kind: spec.kind,
        d: spec.d,
        gamma: fmt_q(&spec.gamma),
        a: if spec.kind.is_unimodular_heis() { None } else { Some(fmt_q(&g.a)) },
        s: g.s.iter().map(fmt_q).collect(),
        t: g.t.iter().map(fmt_q).collect(),
    })
}

/// Parses an exact element; `gamma` may lie outside `(0,1)` only if `any_gamma` is set.
pub fn from_json(j: &ElementJson, any_gamma: bool) -> Result<(GroupSpec, Element<Q>)> {
    let gamma = parse_q(&j.gamma)?;
    let spec = if any_gamma {
        GroupSpec::with_any_gamma(j.kind, j.d, gamma)?
    } else {
        GroupSpec::new(j.kind, j.d, gamma)?
    };
    let a = match &j.a {
        Some(a) => parse_q(a)?,
        None => q(1, 1),
    };
    let parse_all = |v: &[String]| v.iter().map(|x| parse_q(x)).collect::<Result<Vec<Q>>>();
    let g = Element { a, s: parse_all(&j.s)?, t: parse_all(&j.t)? };
    validate(&spec, &g)?;
    Ok((spec, g))
}
