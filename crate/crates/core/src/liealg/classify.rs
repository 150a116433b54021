//! Normal-form classification of Hamiltonian 4x4 matrices from eigenvalue and Jordan data.

use super::canonical::CanonicalForm;
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{q, q_to_f64, Scalar, Q};
use crate::symplectic::j_matrix;
use num_traits::{FromPrimitive, Signed};
use serde_json::{json, Value};

/// Rank cutoff relative to the matrix scale.
pub const RANK_TOL: f64 = 1e-8;
/// Eigenvalue clusters closer than this, relative to the scale, are refused.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Eigenvalue differences below this, relative to the scale, count as exact coincidences.
pub const MERGE_TOL: f64 = 1e-7;

/// Eigenvalue configuration of `lambda^4 + c lambda^2 + e` together with the Jordan data needed to pick a family.
#[derive(Clone, Debug, PartialEq)]
enum Shape {
    /// All eigenvalues zero; rank of `X`.
    Nilpotent(usize),
    /// `0, 0, +-a`; rank of `X`.
    ZeroReal(Q, usize),
    /// `0, 0, +-ib`; rank of `X`.
    ZeroImag(Q, usize),
    RealReal(Q, Q),
    ImagImag(Q, Q),
    RealImag(Q, Q),
    /// Double `+-a`; whether `X^2 = a^2 I`.
    DoubleReal(Q, bool),
    /// Double `+-ib`; whether `X^2 = -b^2 I`.
    DoubleImag(Q, bool),
    Complex(Q, Q),
}

fn candidates(shape: &Shape) -> Vec<CanonicalForm> {
    use CanonicalForm as F;
    let z = || q(0, 1);
    let signs6 = [(1, 1), (1, -1), (-1, -1)];
    let d6 = |b1: &Q, b2: &Q| {
        let mut v = Vec::new();
        for (x, y) in [(b1, b2), (b2, b1)] {
            for (eps, eta) in signs6 {
                v.push(F::D6 { b1: x.clone(), b2: y.clone(), eps, eta });
            }
        }
        v
    };
    match shape {
        Shape::Nilpotent(0) => vec![F::D1 { a1: z(), a2: z() }],
        Shape::Nilpotent(1) => [1, -1].map(|eps| F::D5 { a: z(), b: z(), eps }).to_vec(),
        Shape::Nilpotent(2) => d6(&z(), &z()),
        Shape::Nilpotent(_) => [1, -1].map(|eps| F::D4 { eps }).to_vec(),
        Shape::ZeroReal(a, 2) => vec![F::D1 { a1: a.clone(), a2: z() }],
        Shape::ZeroReal(a, _) => [1, -1].map(|eps| F::D5 { a: a.clone(), b: z(), eps }).to_vec(),
        Shape::ZeroImag(b, 2) => [1, -1].map(|eps| F::D5 { a: z(), b: b.clone(), eps }).to_vec(),
        Shape::ZeroImag(b, _) => d6(b, &z()),
        Shape::RealReal(a1, a2) => vec![F::D1 { a1: a1.clone(), a2: a2.clone() }],
        Shape::ImagImag(b1, b2) => d6(b1, b2),
        Shape::RealImag(a, b) => [1, -1].map(|eps| F::D5 { a: a.clone(), b: b.clone(), eps }).to_vec(),
        Shape::DoubleReal(a, true) => vec![F::D1 { a1: a.clone(), a2: a.clone() }],
        Shape::DoubleReal(a, false) => vec![F::D2 { a: a.clone() }],
        Shape::DoubleImag(b, true) => d6(b, b),
        Shape::DoubleImag(b, false) => [1, -1].map(|eps| F::D7 { b: b.clone(), eps }).to_vec(),
        Shape::Complex(a, b) => vec![F::D3 { a: a.clone(), b: b.clone() }],
    }
    .into_iter()
    .filter(|f| f.validate().is_ok())
    .collect()
}

/// Classification result.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub form: CanonicalForm,
    /// Eigenvalue-squared roots `mu` of `mu^2 + c mu + e`, as `(re, im)`.
    pub mu: [(f64, f64); 2],
}

impl Classification {
    pub fn case(&self) -> u8 {
        self.form.case()
    }

    /// Parameters as floats, signs as `+-1`.
    pub fn params_f64(&self) -> Vec<(&'static str, f64)> {
        self.form.params().into_iter().map(|(k, v)| (k, crate::scalar::parse_q(&v).map(|x| q_to_f64(&x)).unwrap_or(f64::NAN))).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut p = serde_json::Map::new();
        for (k, v) in self.params_f64() {
            p.insert(k.to_string(), json!(v));
        }
        json!({ "case": self.case(), "params": p })
    }
}

/// Odd polynomials `p` whose forms `J p(X)` separate sign variants.
fn sign_polys(form: &CanonicalForm) -> Vec<Vec<Q>> {
    let mut mus: Vec<Q> = Vec::new();
    let push = |m: Q, mus: &mut Vec<Q>| {
        if !mus.contains(&m) {
            mus.push(m)
        }
    };
    match form {
        CanonicalForm::D5 { a, b, .. } => {
            push(a * a, &mut mus);
            push(-(b * b), &mut mus);
        }
        CanonicalForm::D6 { b1, b2, .. } => {
            push(-(b1 * b1), &mut mus);
            push(-(b2 * b2), &mut mus);
        }
        CanonicalForm::D7 { b, .. } => push(-(b * b), &mut mus),
        _ => {}
    }
    let mut out = vec![vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]];
    for m in mus {
        out.push(vec![q(0, 1), -m, q(0, 1), q(1, 1)]);
    }
    out
}

fn poly_apply<S: Scalar>(x: &Mat<S>, coeffs: &[Q]) -> Mat<S> {
    let mut acc = Mat::<S>::zeros(4, 4);
    let mut pw = Mat::<S>::identity(4);
    for c in coeffs {
        acc = acc.add(&pw.scale(&S::from_q(c)));
        pw = pw.mul(x);
    }
    acc
}

type Inertia = (usize, usize, usize);

fn inertia_f64(m: &Mat<f64>, scale: f64) -> Inertia {
    let sym = m.add(&m.transpose()).scale(&0.5).to_nalgebra();
    let ev = sym.symmetric_eigenvalues();
    let tol = RANK_TOL * scale.max(f64::MIN_POSITIVE);
    let p = ev.iter().filter(|&&v| v > tol).count();
    let n = ev.iter().filter(|&&v| v < -tol).count();
    (p, n, ev.len() - p - n)
}

/// Characteristic polynomial by Faddeev-LeVerrier, lowest degree first.
fn charpoly(m: &Mat<Q>) -> Poly {
    let n = m.rows();
    let mut coeffs = vec![q(0, 1); n + 1];
    coeffs[n] = q(1, 1);
    let mut mk = Mat::<Q>::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk.add(&Mat::identity(n).scale(&coeffs[n - k + 1])));
        let tr = (0..n).fold(q(0, 1), |acc, i| acc + &mk[(i, i)]);
        coeffs[n - k] = -tr / Q::from_usize(k).expect("small");
    }
    Poly::new(coeffs)
}

fn sign_changes(c: &[Q]) -> usize {
    let s: Vec<bool> = c.iter().filter(|v| !Scalar::is_zero(*v)).map(|v| v.is_positive()).collect();
    s.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Exact inertia of a rational symmetric matrix via Descartes' rule on its characteristic polynomial.
fn inertia_exact(m: &Mat<Q>) -> Inertia {
    let cp = charpoly(m);
    let c = cp.coeffs().to_vec();
    let zeros = c.iter().take_while(|v| Scalar::is_zero(*v)).count();
    let pos = sign_changes(&c);
    let neg_c: Vec<Q> = c.iter().enumerate().map(|(i, v)| if i % 2 == 1 { -v.clone() } else { v.clone() }).collect();
    (pos, sign_changes(&neg_c), zeros)
}

fn pick<F: Fn(&CanonicalForm, &[Q]) -> Inertia>(
    cands: Vec<CanonicalForm>,
    target: impl Fn(&[Q]) -> Inertia,
    candidate: F,
) -> Result<CanonicalForm> {
    if cands.len() == 1 {
        return Ok(cands.into_iter().next().expect("one"));
    }
    let matches: Vec<CanonicalForm> = cands
        .into_iter()
        .filter(|f| sign_polys(f).iter().all(|p| candidate(f, p) == target(p)))
        .collect();
    matches.into_iter().next().ok_or_else(|| Error::IllConditioned("no normal form matches the sign invariants".into()))
}

fn hamiltonian_residual(x: &Mat<f64>) -> f64 {
    let jx = j_matrix::<f64>(2).mul(x);
    jx.sub(&jx.transpose()).max_abs()
}

fn to_q(v: f64) -> Q {
    Q::from_float(v).unwrap_or_else(|| q(0, 1))
}

/// Classifies a Hamiltonian matrix in floating point.
pub fn classify_hamiltonian(x: &Mat<f64>) -> Result<Classification> {
    if x.rows() != 4 || x.cols() != 4 {
        return Err(Error::DimensionMismatch("classification expects a 4x4 matrix".into()));
    }
    let s = x.frobenius();
    if !s.is_finite() {
        return Err(Error::InvalidParameter("non-finite entries".into()));
    }
    if hamiltonian_residual(x) > 1e-9 * s.max(1.0) {
        return Err(Error::NotHamiltonian);
    }
    if s == 0.0 {
        return Ok(Classification { form: CanonicalForm::D1 { a1: q(0, 1), a2: q(0, 1) }, mu: [(0.0, 0.0); 2] });
    }
    let x2 = x.mul(x);
    let c = -(0..4).map(|i| x2[(i, i)]).sum::<f64>() / 2.0;
    let e = x.det();
    let s2 = s * s;
    let disc = c * c - 4.0 * e;
    let gap = disc.abs().sqrt();
    let rank = |m: &Mat<f64>| {
        let sv = m.to_nalgebra().singular_values();
        sv.iter().filter(|&&v| v > RANK_TOL * s.max(1e-300)).count()
    };
    let rank_sq = |m: &Mat<f64>| {
        let sv = m.to_nalgebra().singular_values();
        sv.iter().filter(|&&v| v > RANK_TOL * s2).count()
    };
    let refuse = |what: &str| Err(Error::IllConditioned(format!("{what} closer than {CLUSTER_TOL:e}")));
    let (shape, mu) = if gap <= MERGE_TOL * s2 {
        let m = -c / 2.0;
        let mu = [(m, 0.0); 2];
        if m.abs() <= MERGE_TOL * s2 {
            (Shape::Nilpotent(rank(x)), mu)
        } else if m.abs() <= CLUSTER_TOL * s2 {
            return refuse("eigenvalues near zero");
        } else {
            let r = rank_sq(&x2.sub(&Mat::identity(4).scale(&m)));
            let root = to_q(m.abs().sqrt());
            (if m > 0.0 { Shape::DoubleReal(root, r == 0) } else { Shape::DoubleImag(root, r == 0) }, mu)
        }
    } else if gap <= CLUSTER_TOL * s2 {
        return refuse("eigenvalue clusters");
    } else if disc < 0.0 {
        let (mr, mi) = (-c / 2.0, gap / 2.0);
        let modulus = e.abs().sqrt();
        let a = ((modulus + mr) / 2.0).max(0.0).sqrt();
        let b = mi / (2.0 * a);
        (Shape::Complex(to_q(a), to_q(b)), [(mr, mi), (mr, -mi)])
    } else {
        let sq = disc.sqrt();
        let (m1, m2) = if c <= 0.0 {
            let big = (-c + sq) / 2.0;
            (big, if big == 0.0 { 0.0 } else { e / big })
        } else {
            let small = (-c - sq) / 2.0;
            (if small == 0.0 { 0.0 } else { e / small }, small)
        };
        let mut ms = [m1, m2];
        ms.sort_by(|a, b| f64::abs(*b).partial_cmp(&f64::abs(*a)).expect("finite"));
        let mu = [(ms[0], 0.0), (ms[1], 0.0)];
        let root = |m: f64| to_q(m.abs().sqrt());
        if ms[1].abs() <= MERGE_TOL * s2 {
            let r = rank(x);
            (if ms[0] > 0.0 { Shape::ZeroReal(root(ms[0]), r) } else { Shape::ZeroImag(root(ms[0]), r) }, mu)
        } else if ms[1].abs() <= CLUSTER_TOL * s2 {
            return refuse("eigenvalues near zero");
        } else {
            let (p, n): (Vec<f64>, Vec<f64>) = ms.iter().partition(|&&m| m > 0.0);
            let shape = match (p.len(), n.len()) {
                (2, _) => {
                    let (a1, a2) = (p[0].max(p[1]).sqrt(), p[0].min(p[1]).sqrt());
                    Shape::RealReal(to_q(a1), to_q(a2))
                }
                (0, _) => {
                    let (b1, b2) = ((-n[0]).max(-n[1]).sqrt(), (-n[0]).min(-n[1]).sqrt());
                    Shape::ImagImag(to_q(b1), to_q(b2))
                }
                _ => Shape::RealImag(to_q(p[0].sqrt()), to_q((-n[0]).sqrt())),
            };
            (shape, mu)
        }
    };
    let jm = j_matrix::<f64>(2);
    let degree_scale = |p: &[Q], base: f64| base.powi(p.len() as i32 - 1);
    let form = pick(
        candidates(&shape),
        |p| inertia_f64(&jm.mul(&poly_apply(x, p)), degree_scale(p, s)),
        |f, p| {
            let m = f.matrix().to_f64();
            inertia_f64(&jm.mul(&poly_apply(&m, p)), degree_scale(p, m.frobenius()))
        },
    )?;
    Ok(Classification { form, mu })
}

fn exact_sqrt(v: &Q) -> Result<Q> {
    if v.is_negative() {
        return Err(Error::InvalidParameter("square root of a negative rational".into()));
    }
    q_pow_half(v).ok_or_else(|| Error::Unsupported("eigenvalue data is not rational".into()))
}

fn q_pow_half(v: &Q) -> Option<Q> {
    if Scalar::is_zero(v) {
        return Some(q(0, 1));
    }
    crate::scalar::q_pow(v, &q(1, 2)).ok()
}

/// Exact classification of a rational Hamiltonian matrix whose eigenvalue data is rational.
pub fn classify_hamiltonian_exact(x: &Mat<Q>) -> Result<Classification> {
    if x.rows() != 4 || x.cols() != 4 {
        return Err(Error::DimensionMismatch("classification expects a 4x4 matrix".into()));
    }
    let jm = j_matrix::<Q>(2);
    let jx = jm.mul(x);
    if jx != jx.transpose() {
        return Err(Error::NotHamiltonian);
    }
    let x2 = x.mul(x);
    let c = -(0..4).fold(q(0, 1), |acc, i| acc + &x2[(i, i)]) / q(2, 1);
    let e = x.det();
    let disc = &c * &c - q(4, 1) * &e;
    let f = q_to_f64;
    let shape = if disc.is_negative() {
        let im = exact_sqrt(&-disc.clone())? / q(2, 1);
        let re = -c.clone() / q(2, 1);
        let modulus = exact_sqrt(&e)?;
        let a = exact_sqrt(&((&modulus + &re) / q(2, 1)))?;
        let b = &im / (q(2, 1) * &a);
        let mu = [(f(&re), f(&im)), (f(&re), -f(&im))];
        return finish_exact(x, Shape::Complex(a, b), mu);
    } else if Scalar::is_zero(&disc) {
        let m = -c.clone() / q(2, 1);
        if Scalar::is_zero(&m) {
            Shape::Nilpotent(x.rank())
        } else {
            let semisimple = x2.sub(&Mat::identity(4).scale(&m)).is_zero();
            let r = exact_sqrt(&Scalar::abs(&m))?;
            if m.is_positive() {
                Shape::DoubleReal(r, semisimple)
            } else {
                Shape::DoubleImag(r, semisimple)
            }
        }
    } else {
        let sq = exact_sqrt(&disc)?;
        let m1 = (-c.clone() + &sq) / q(2, 1);
        let m2 = (-c.clone() - &sq) / q(2, 1);
        let (big, small) = if Scalar::abs(&m1) >= Scalar::abs(&m2) { (m1, m2) } else { (m2, m1) };
        if Scalar::is_zero(&small) {
            let r = exact_sqrt(&Scalar::abs(&big))?;
            if big.is_positive() {
                Shape::ZeroReal(r, x.rank())
            } else {
                Shape::ZeroImag(r, x.rank())
            }
        } else {
            let rb = exact_sqrt(&Scalar::abs(&big))?;
            let rs = exact_sqrt(&Scalar::abs(&small))?;
            match (big.is_positive(), small.is_positive()) {
                (true, true) => Shape::RealReal(rb.clone().max(rs.clone()), rb.min(rs)),
                (false, false) => Shape::ImagImag(rb.clone().max(rs.clone()), rb.min(rs)),
                (true, false) => Shape::RealImag(rb, rs),
                (false, true) => Shape::RealImag(rs, rb),
            }
        }
    };
    let mu = mu_of(&c, &disc);
    finish_exact(x, shape, mu)
}

fn mu_of(c: &Q, disc: &Q) -> [(f64, f64); 2] {
    let cf = q_to_f64(c);
    let sq = q_to_f64(disc).max(0.0).sqrt();
    let (m1, m2) = ((-cf + sq) / 2.0, (-cf - sq) / 2.0);
    if Scalar::abs(&m1) >= Scalar::abs(&m2) {
        [(m1, 0.0), (m2, 0.0)]
    } else {
        [(m2, 0.0), (m1, 0.0)]
    }
}

fn finish_exact(x: &Mat<Q>, shape: Shape, mu: [(f64, f64); 2]) -> Result<Classification> {
    let jm = j_matrix::<Q>(2);
    let form = pick(
        candidates(&shape),
        |p| inertia_exact(&jm.mul(&poly_apply(x, p))),
        |f, p| inertia_exact(&jm.mul(&poly_apply(&f.matrix(), p))),
    )?;
    Ok(Classification { form, mu })
}
