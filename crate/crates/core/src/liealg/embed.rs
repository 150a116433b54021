//! Extended-Heisenberg quadruples `(D, P, Q, T)` in `sp(2, R)` and the embedding search.

use super::basis::{self, bracket, describe, h, scale, unit, SpVec, X_2AB, X_A, X_AB, X_N2AB, X_NA, X_NAB};
use super::canonical::{eigenspace, CanonicalForm};
use super::poly::{self, Poly, PolyVec};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{fmt_q, q, Q};
use serde_json::{json, Value};

/// Generators `D, P, Q, T` as coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub d: SpVec,
    pub p: SpVec,
    pub q: SpVec,
    pub t: SpVec,
}

impl Quadruple {
    pub fn matrices(&self) -> [Mat<Q>; 4] {
        [basis::to_matrix(&self.d), basis::to_matrix(&self.p), basis::to_matrix(&self.q), basis::to_matrix(&self.t)]
    }

    pub fn to_json(&self) -> Value {
        json!({ "D": describe(&self.d), "P": describe(&self.p), "Q": describe(&self.q), "T": describe(&self.t) })
    }
}

/// Tangent generators of the standard embedding:
/// `D = -H_{1,0} + (1-2 gamma) H_{0,1}`, `P = X_{-a}`, `Q = -X_{-a-b}`, `T = -X_{-2a-b}`.
pub fn standard_generators(gamma: &Q) -> Quadruple {
    Quadruple {
        d: h(q(-1, 1), q(1, 1) - q(2, 1) * gamma),
        p: unit(X_NA),
        q: scale(&q(-1, 1), &unit(X_NAB)),
        t: scale(&q(-1, 1), &unit(X_N2AB)),
    }
}

/// Positive-root presentation: `(i)` for `gamma <= 1/2` and `(ii)` for `gamma >= 1/2`.
pub fn conjugated_presentation(gamma: &Q, second: bool) -> Quadruple {
    let c = q(1, 1) - q(2, 1) * gamma;
    if !second {
        Quadruple { d: h(q(1, 1), c), p: unit(X_AB), q: unit(X_A), t: scale(&q(-1, 1), &unit(X_2AB)) }
    } else {
        Quadruple { d: h(q(1, 1), -c), p: unit(X_A), q: unit(X_AB), t: unit(X_2AB) }
    }
}

/// Conjugating matrix and scalings `(B, u, z)` for presentation `(i)` or `(ii)`.
pub fn presentation_conjugator(second: bool) -> (Mat<Q>, Q, Q) {
    if !second {
        let b = Mat::from_rows(vec![
            vec![q(0, 1), q(0, 1), q(-1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)],
            vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
        ])
        .expect("square literal");
        (b, q(-1, 1), q(-1, 1))
    } else {
        (crate::symplectic::j_matrix::<Q>(2).neg(), q(1, 1), q(-1, 1))
    }
}

/// `Phi(P, Q, T) = (u P, z Q, u z T)`.
pub fn phi_scale(x: &Quadruple, u: &Q, z: &Q) -> Quadruple {
    Quadruple { d: x.d.clone(), p: scale(u, &x.p), q: scale(z, &x.q), t: scale(&(u * z), &x.t) }
}

/// `B X B^{-1}` applied to each generator.
pub fn conjugate(x: &Quadruple, b: &Mat<Q>) -> Result<Quadruple> {
    let bi = b.inverse()?;
    let f = |v: &SpVec| basis::coords(&b.mul(&basis::to_matrix(v)).mul(&bi));
    Ok(Quadruple { d: f(&x.d)?, p: f(&x.p)?, q: f(&x.q)?, t: f(&x.t)? })
}

/// Outcome of the relation check for a quadruple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub dp: bool,
    pub dq: bool,
    pub pq: bool,
    pub dt: bool,
    pub pt: bool,
    pub qt: bool,
    pub independent: bool,
}

impl RelationReport {
    pub fn all(&self) -> bool {
        self.dp && self.dq && self.pq && self.dt && self.pt && self.qt && self.independent
    }

    pub fn to_json(&self) -> Value {
        json!({
            "DP": self.dp, "DQ": self.dq, "PQ": self.pq, "DT": self.dt,
            "PT": self.pt, "QT": self.qt, "independent": self.independent, "ok": self.all()
        })
    }
}

/// Rank of a list of coordinate vectors.
pub fn span_rank(vs: &[&SpVec]) -> usize {
    Mat::from_rows(vs.iter().map(|v| v.to_vec()).collect()).expect("equal lengths").rank()
}

/// `[D,P] = 2(1-gamma)P`, `[D,Q] = 2 gamma Q`, `[P,Q] = T`, `[D,T] = 2T`, `[P,T] = [Q,T] = 0`.
pub fn check_relations(gamma: &Q, x: &Quadruple) -> RelationReport {
    let gp = q(2, 1) * (q(1, 1) - gamma);
    let gq = q(2, 1) * gamma;
    RelationReport {
        dp: bracket(&x.d, &x.p) == scale(&gp, &x.p),
        dq: bracket(&x.d, &x.q) == scale(&gq, &x.q),
        pq: bracket(&x.p, &x.q) == x.t,
        dt: bracket(&x.d, &x.t) == scale(&q(2, 1), &x.t),
        pt: basis::is_zero(&bracket(&x.p, &x.t)),
        qt: basis::is_zero(&bracket(&x.q, &x.t)),
        independent: span_rank(&[&x.d, &x.p, &x.q, &x.t]) == 4,
    }
}

/// Why a candidate normal form admits no quadruple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// One of `M_{2(1-gamma)}`, `M_{2 gamma}` is invertible for every admissible parameter.
    FullRank,
    /// The two eigenspaces commute, so `T = [P, Q] = 0`.
    CommutingKernel,
    /// Every choice with `T != 0` violates `[P, T] = 0` or `[Q, T] = 0`.
    TNoncommuting,
}

impl RejectReason {
    pub fn name(self) -> &'static str {
        match self {
            RejectReason::FullRank => "full-rank",
            RejectReason::CommutingKernel => "commuting-kernel",
            RejectReason::TNoncommuting => "T-noncommuting",
        }
    }
}

/// A rejected case or parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub case: u8,
    pub form: Option<CanonicalForm>,
    pub free: Vec<String>,
    pub reason: RejectReason,
}

impl Rejection {
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "form": self.form.as_ref().map(CanonicalForm::to_json),
            "free": self.free,
            "reason": self.reason.name(),
        })
    }
}

/// A family of quadruples `P in span(p_space)`, `Q in span(q_space)` with `T = [P, Q] != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub form: CanonicalForm,
    pub p_space: Vec<SpVec>,
    pub q_space: Vec<SpVec>,
    /// Matrix ranks of `(P, Q, T)` for a generic member.
    pub rank_signature: [usize; 3],
    pub standard: bool,
    /// Standard sub-families excluded from a non-standard family.
    pub excluded: Vec<(Vec<SpVec>, Vec<SpVec>)>,
    pub representative: Quadruple,
}

impl Family {
    pub fn to_json(&self) -> Value {
        let sp = |v: &Vec<SpVec>| v.iter().map(|x| describe(x)).collect::<Vec<_>>();
        json!({
            "form": self.form.to_json(),
            "P_span": sp(&self.p_space),
            "Q_span": sp(&self.q_space),
            "rank_signature": self.rank_signature,
            "standard": self.standard,
            "excluded": self.excluded.iter().map(|(p, q)| json!({"P_span": sp(p), "Q_span": sp(q)})).collect::<Vec<_>>(),
            "representative": self.representative.to_json(),
        })
    }
}

/// Result of [`embedding_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbedReport {
    pub gamma: Q,
    pub families: Vec<Family>,
    pub rejections: Vec<Rejection>,
}

impl EmbedReport {
    pub fn to_json(&self) -> Value {
        json!({
            "gamma": fmt_q(&self.gamma),
            "families": self.families.iter().map(Family::to_json).collect::<Vec<_>>(),
            "rejections": self.rejections.iter().map(Rejection::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Linear condition `coeffs . params = rhs`.
#[derive(Clone, Debug)]
struct LinEq {
    coeffs: Vec<Q>,
    rhs: Q,
}

fn eq(coeffs: &[i64], rhs: Q) -> LinEq {
    LinEq { coeffs: coeffs.iter().map(|&c| q(c, 1)).collect(), rhs }
}

/// A family of normal forms with its parameter count, sign variants and vanishing conditions.
struct CaseSpec {
    case: u8,
    names: &'static [&'static str],
    signs: Vec<(i32, i32)>,
    /// Alternatives making `det M_Gamma = 0` for `Gamma > 0`, read off the closed-form factorization.
    alternatives: fn(&Q) -> Vec<Vec<LinEq>>,
    build: fn(&[Q], (i32, i32)) -> CanonicalForm,
}

fn case_specs() -> Vec<CaseSpec> {
    let one = vec![(1, 1)];
    let eps = vec![(1, 1), (-1, 1)];
    vec![
        CaseSpec {
            case: 1,
            names: &["a1", "a2"],
            signs: one.clone(),
            alternatives: |g| {
                vec![
                    vec![eq(&[1, -1], g.clone())],
                    vec![eq(&[0, 2], g.clone())],
                    vec![eq(&[1, 1], g.clone())],
                    vec![eq(&[2, 0], g.clone())],
                ]
            },
            build: |p, _| CanonicalForm::D1 { a1: p[0].clone(), a2: p[1].clone() },
        },
        CaseSpec {
            case: 2,
            names: &["a"],
            signs: one.clone(),
            alternatives: |g| vec![vec![eq(&[2], g.clone())]],
            build: |p, _| CanonicalForm::D2 { a: p[0].clone() },
        },
        CaseSpec {
            case: 3,
            names: &["a", "b"],
            signs: one.clone(),
            alternatives: |g| vec![vec![eq(&[2, 0], g.clone())]],
            build: |p, _| CanonicalForm::D3 { a: p[0].clone(), b: p[1].clone() },
        },
        CaseSpec {
            case: 4,
            names: &[],
            signs: eps.clone(),
            alternatives: |_| Vec::new(),
            build: |_, s| CanonicalForm::D4 { eps: s.0 },
        },
        CaseSpec {
            case: 5,
            names: &["a", "b"],
            signs: eps.clone(),
            alternatives: |g| vec![vec![eq(&[2, 0], g.clone())], vec![eq(&[1, 0], g.clone()), eq(&[0, 1], q(0, 1))]],
            build: |p, s| CanonicalForm::D5 { a: p[0].clone(), b: p[1].clone(), eps: s.0 },
        },
        CaseSpec {
            case: 6,
            names: &["b1", "b2"],
            signs: vec![(1, 1), (1, -1), (-1, -1)],
            alternatives: |_| Vec::new(),
            build: |p, s| CanonicalForm::D6 { b1: p[0].clone(), b2: p[1].clone(), eps: s.0, eta: s.1 },
        },
        CaseSpec {
            case: 7,
            names: &["b"],
            signs: eps,
            alternatives: |_| Vec::new(),
            build: |p, s| CanonicalForm::D7 { b: p[0].clone(), eps: s.0 },
        },
    ]
}

/// Values tried for free parameters, in order.
const SAMPLES: [(i64, i64); 6] = [(7, 3), (11, 5), (13, 4), (17, 7), (2, 9), (3, 11)];

/// Solves the stacked conditions; returns parameter points (free parameters sampled) and the free names.
fn solve_params(spec: &CaseSpec, eqs: &[LinEq]) -> Option<(Vec<Vec<Q>>, Vec<String>)> {
    let n = spec.names.len();
    if n == 0 {
        return if eqs.is_empty() { Some((vec![Vec::new()], Vec::new())) } else { None };
    }
    let rows: Vec<Vec<Q>> = eqs
        .iter()
        .map(|e| {
            let mut r = e.coeffs.clone();
            r.push(e.rhs.clone());
            r
        })
        .collect();
    let (rref, pivots) = if rows.is_empty() {
        (Mat::zeros(0, n + 1), Vec::new())
    } else {
        Mat::from_rows(rows).expect("equal lengths").rref()
    };
    if pivots.contains(&n) {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let free_names = free.iter().map(|&c| spec.names[c].to_string()).collect();
    let mut points = Vec::new();
    let combos: Vec<Vec<Q>> = if free.is_empty() {
        vec![Vec::new()]
    } else {
        let vals: Vec<Q> = SAMPLES.iter().map(|&(a, b)| q(a, b)).collect();
        let mut out: Vec<Vec<Q>> = vec![Vec::new()];
        for _ in &free {
            out = out.into_iter().flat_map(|pre| vals.iter().map(move |v| [pre.clone(), vec![v.clone()]].concat())).collect();
        }
        out
    };
    for vals in combos {
        let mut p = vec![q(0, 1); n];
        for (k, &f) in free.iter().enumerate() {
            p[f] = vals[k].clone();
        }
        for (r, &pc) in pivots.iter().enumerate() {
            let mut v = rref[(r, n)].clone();
            for &f in &free {
                v = v - &rref[(r, f)] * &p[f];
            }
            p[pc] = v;
        }
        points.push(p);
    }
    Some((points, free_names))
}

fn commutes(ps: &[SpVec], qs: &[SpVec]) -> bool {
    ps.iter().all(|p| qs.iter().all(|x| basis::is_zero(&bracket(p, x))))
}

/// `[P,[P,Q]] = 0` and `[Q,[P,Q]] = 0` for all `P in span(ps)`, `Q in span(qs)`.
fn identically(ps: &[SpVec], qs: &[SpVec]) -> bool {
    let quad_vanishes = |xs: &[SpVec], ys: &[SpVec]| {
        for i in 0..xs.len() {
            for k in i..xs.len() {
                for y in ys {
                    let a = bracket(&xs[i], &bracket(&xs[k], y));
                    let b = bracket(&xs[k], &bracket(&xs[i], y));
                    if !basis::is_zero(&basis::add(&a, &b)) {
                        return false;
                    }
                }
            }
        }
        true
    };
    quad_vanishes(ps, qs) && quad_vanishes(qs, ps)
}

type Component = (Vec<SpVec>, Vec<SpVec>);

fn combine(basis_vecs: &[SpVec], coeffs: &[Q]) -> SpVec {
    basis_vecs.iter().zip(coeffs).fold(basis::zero(), |acc, (v, c)| basis::add(&acc, &scale(c, v)))
}

/// Components with `P = p` fixed.
fn fixed_p(p: &SpVec, qs: &[SpVec]) -> Result<Vec<Component>> {
    if qs.is_empty() {
        return Ok(Vec::new());
    }
    let cols: Vec<SpVec> = qs.iter().map(|x| bracket(p, &bracket(p, x))).collect();
    let m = Mat::from_fn(basis::DIM, qs.len(), |i, j| cols[j][i].clone());
    let kernel: Vec<SpVec> = m.nullspace().iter().map(|c| combine(qs, c)).collect();
    if kernel.is_empty() || commutes(std::slice::from_ref(p), &kernel) {
        return Ok(Vec::new());
    }
    let ps = vec![p.clone()];
    if identically(&ps, &kernel) {
        return Ok(vec![(ps, kernel)]);
    }
    if kernel.len() == 1 {
        return Ok(Vec::new());
    }
    if kernel.len() != 2 {
        return Err(Error::Unsupported(format!("kernel of dimension {} in the embedding search", kernel.len())));
    }
    let mut out = Vec::new();
    let mut try_point = |x: SpVec| {
        let xs = vec![x];
        if !commutes(&ps, &xs) && identically(&ps, &xs) {
            out.push((ps.clone(), xs));
        }
    };
    try_point(kernel[1].clone());
    let qy = poly::line(&kernel[0], &kernel[1]);
    let pc = poly::constant(p);
    let c = poly::bracket(&qy, &poly::bracket(&pc, &qy));
    let g = poly::gcd_all(&c);
    if g.has_irrational_real_root() {
        return Err(Error::Unsupported("irrational solution in the embedding search".into()));
    }
    for y in g.rational_roots() {
        try_point(poly::eval(&qy, &y));
    }
    Ok(out)
}

/// All components of `{(P, Q) : [P,[P,Q]] = [Q,[P,Q]] = 0, [P,Q] != 0}`.
fn solve_components(ps: &[SpVec], qs: &[SpVec]) -> Result<Vec<Component>> {
    if identically(ps, qs) {
        return Ok(vec![(ps.to_vec(), qs.to_vec())]);
    }
    let swap = |v: Vec<Component>| v.into_iter().map(|(a, b)| (b, a)).collect::<Vec<_>>();
    match (ps.len(), qs.len()) {
        (1, _) => fixed_p(&ps[0], qs),
        (_, 1) => Ok(swap(fixed_p(&qs[0], ps)?)),
        (2, 2) => {
            let mut out = fixed_p(&ps[1], qs)?;
            let px: PolyVec = poly::line(&ps[0], &ps[1]);
            let cols: Vec<PolyVec> =
                qs.iter().map(|x| poly::bracket(&px, &poly::bracket(&px, &poly::constant(x)))).collect();
            let a: Vec<Vec<Poly>> = (0..basis::DIM).map(|i| vec![cols[0][i].clone(), cols[1][i].clone()]).collect();
            let g = poly::minors_gcd(&a, 2);
            let mut xs: Vec<Q> = Vec::new();
            let check_roots = |g: &Poly, xs: &mut Vec<Q>| -> Result<()> {
                if g.has_irrational_real_root() {
                    return Err(Error::Unsupported("irrational solution in the embedding search".into()));
                }
                xs.extend(g.rational_roots());
                Ok(())
            };
            if !g.is_zero() {
                check_roots(&g, &mut xs)?;
            } else {
                let Some(r0) = a.iter().position(|row| !row[0].is_zero() || !row[1].is_zero()) else {
                    return Err(Error::Unsupported("degenerate pencil in the embedding search".into()));
                };
                let kernel_vec: PolyVec = (0..basis::DIM)
                    .map(|i| a[r0][0].mul(&poly::constant(&qs[1])[i]).sub(&a[r0][1].mul(&poly::constant(&qs[0])[i])))
                    .collect();
                let t = poly::bracket(&px, &kernel_vec);
                check_roots(&a[r0][0].gcd(&a[r0][1]), &mut xs)?;
                if !poly::is_zero(&t) {
                    let c = poly::bracket(&kernel_vec, &t);
                    if poly::is_zero(&c) {
                        return Err(Error::Unsupported("curve of solutions in the embedding search".into()));
                    }
                    check_roots(&poly::gcd_all(&c), &mut xs)?;
                }
            }
            for x in xs {
                out.extend(fixed_p(&poly::eval(&px, &x), qs)?);
            }
            Ok(out)
        }
        (m, n) => Err(Error::Unsupported(format!("eigenspaces of dimensions {m} and {n}"))),
    }
}

fn matrix_rank(x: &SpVec) -> usize {
    basis::to_matrix(x).rank()
}

const GENERIC: [(i64, i64); 3] = [(1, 1), (3, 2), (-5, 7)];

fn generic(vs: &[SpVec], shift: usize) -> SpVec {
    let c: Vec<Q> = (0..vs.len()).map(|i| {
        let (a, b) = GENERIC[(i + shift) % GENERIC.len()];
        q(a, b)
    }).collect();
    combine(vs, &c)
}

/// A generic member with `T != 0` and `{D, P, Q, T}` independent.
fn generic_member(d: &SpVec, ps: &[SpVec], qs: &[SpVec]) -> Option<Quadruple> {
    for s1 in 0..3 {
        for s2 in 0..3 {
            let p = generic(ps, s1);
            let x = generic(qs, s2);
            let t = bracket(&p, &x);
            if basis::is_zero(&t) {
                continue;
            }
            let quad = Quadruple { d: d.clone(), p, q: x, t };
            if span_rank(&[&quad.d, &quad.p, &quad.q, &quad.t]) == 4 {
                return Some(quad);
            }
        }
    }
    None
}

fn signature(x: &Quadruple) -> [usize; 3] {
    [matrix_rank(&x.p), matrix_rank(&x.q), matrix_rank(&x.t)]
}

/// Points of a two-dimensional span whose matrix rank is at most `r`.
fn rank_drop_points(vs: &[SpVec], r: usize) -> Result<Vec<SpVec>> {
    let mut out = Vec::new();
    if matrix_rank(&vs[1]) <= r {
        out.push(vs[1].clone());
    }
    let m = basis::to_matrix(&vs[0]);
    let n = basis::to_matrix(&vs[1]);
    let pm: Vec<Vec<Poly>> =
        (0..4).map(|i| (0..4).map(|j| Poly::linear(m[(i, j)].clone(), n[(i, j)].clone())).collect()).collect();
    let g = poly::minors_gcd(&pm, r + 1);
    if g.is_zero() {
        return Ok(vec![]);
    }
    if g.has_irrational_real_root() {
        return Err(Error::Unsupported("irrational rank-drop locus".into()));
    }
    for y in g.rational_roots() {
        out.push(basis::add(&vs[0], &scale(&y, &vs[1])));
    }
    Ok(out)
}

fn families_of(form: &CanonicalForm, comp: &Component, std_sig: [usize; 3]) -> Result<Vec<Family>> {
    let d = form.coords();
    let (ps, qs) = comp;
    let Some(rep) = generic_member(&d, ps, qs) else { return Ok(Vec::new()) };
    let sig = signature(&rep);
    if sig == std_sig {
        let rep = generic_member(&d, &ps[..1], &qs[..1]).filter(|x| signature(x) == std_sig).unwrap_or(rep);
        return Ok(vec![Family {
            form: form.clone(),
            p_space: ps.clone(),
            q_space: qs.clone(),
            rank_signature: sig,
            standard: true,
            excluded: Vec::new(),
            representative: rep,
        }]);
    }
    let mut std_parts: Vec<Component> = Vec::new();
    let sides = [(ps, std_sig[0]), (qs, std_sig[1])];
    for (k, (vs, r)) in sides.iter().enumerate() {
        if vs.len() == 1 {
            continue;
        }
        if vs.len() != 2 {
            return Err(Error::Unsupported("rank-drop locus on a span of dimension > 2".into()));
        }
        for x in rank_drop_points(vs, *r)? {
            let comp = if k == 0 { (vec![x], qs.clone()) } else { (ps.clone(), vec![x]) };
            if let Some(m) = generic_member(&d, &comp.0, &comp.1) {
                if signature(&m) == std_sig {
                    std_parts.push(comp);
                }
            }
        }
    }
    let mut out = Vec::new();
    for comp in &std_parts {
        let rep = generic_member(&d, &comp.0, &comp.1).expect("checked above");
        out.push(Family {
            form: form.clone(),
            p_space: comp.0.clone(),
            q_space: comp.1.clone(),
            rank_signature: std_sig,
            standard: true,
            excluded: Vec::new(),
            representative: rep,
        });
    }
    out.push(Family {
        form: form.clone(),
        p_space: ps.clone(),
        q_space: qs.clone(),
        rank_signature: sig,
        standard: false,
        excluded: std_parts,
        representative: rep,
    });
    Ok(out)
}

/// Analyzes one parameter point; `Ok(Err(reason))` marks a rejection.
fn analyze_point(form: &CanonicalForm, gamma: &Q, std_sig: [usize; 3]) -> Result<std::result::Result<Vec<Family>, RejectReason>> {
    let d = form.coords();
    let gp = q(2, 1) * (q(1, 1) - gamma);
    let gq = q(2, 1) * gamma;
    let vp = eigenspace(&d, &gp);
    let vq = eigenspace(&d, &gq);
    if vp.is_empty() || vq.is_empty() {
        return Ok(Err(RejectReason::FullRank));
    }
    if commutes(&vp, &vq) {
        return Ok(Err(RejectReason::CommutingKernel));
    }
    let mut fams = Vec::new();
    for comp in solve_components(&vp, &vq)? {
        for f in families_of(form, &comp, std_sig)? {
            if !fams.contains(&f) {
                fams.push(f);
            }
        }
    }
    if fams.is_empty() {
        return Ok(Err(RejectReason::TNoncommuting));
    }
    Ok(Ok(fams))
}

/// Enumerates all quadruples `(D, P, Q, T)` with `D` in canonical form, up to the free scalings of `P` and `Q`.
pub fn embedding_search(gamma: &Q) -> Result<EmbedReport> {
    if *gamma <= q(0, 1) || *gamma >= q(1, 1) {
        return Err(Error::InvalidParameter(format!("gamma {} outside (0,1)", fmt_q(gamma))));
    }
    let std_sig = signature(&standard_generators(gamma));
    let gp = q(2, 1) * (q(1, 1) - gamma);
    let gq = q(2, 1) * gamma;
    let mut families: Vec<Family> = Vec::new();
    let mut rejections = Vec::new();
    for spec in case_specs() {
        for &signs in &spec.signs {
            let mut seen: Vec<CanonicalForm> = Vec::new();
            let mut any = false;
            for ap in (spec.alternatives)(&gp) {
                for aq in (spec.alternatives)(&gq) {
                    let eqs: Vec<LinEq> = ap.iter().chain(aq.iter()).cloned().collect();
                    let Some((points, free)) = solve_params(&spec, &eqs) else { continue };
                    let valid: Vec<CanonicalForm> =
                        points.iter().map(|p| (spec.build)(p, signs)).filter(|f| f.validate().is_ok()).collect();
                    let Some(form) = pick_generic(&valid, &gp, &gq) else { continue };
                    any = true;
                    if seen.contains(&form) {
                        continue;
                    }
                    seen.push(form.clone());
                    match analyze_point(&form, gamma, std_sig)? {
                        Ok(fams) => families.extend(fams),
                        Err(reason) => rejections.push(Rejection { case: spec.case, form: Some(form), free, reason }),
                    }
                }
            }
            if !any {
                let form = if spec.names.is_empty() { Some((spec.build)(&[], signs)) } else { None };
                let free = spec.names.iter().map(|s| s.to_string()).collect();
                rejections.push(Rejection { case: spec.case, form, free, reason: RejectReason::FullRank });
            }
        }
    }
    Ok(EmbedReport { gamma: gamma.clone(), families, rejections })
}

/// Among sampled points of a parameter line, the one with the smallest eigenspaces.
fn pick_generic(valid: &[CanonicalForm], gp: &Q, gq: &Q) -> Option<CanonicalForm> {
    valid
        .iter()
        .take(3)
        .min_by_key(|f| {
            let d = f.coords();
            eigenspace(&d, gp).len() + eigenspace(&d, gq).len()
        })
        .cloned()
}
