//! Group laws checked against faithful matrix representations built here from scratch.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use shearlet_core::groups::*;
use shearlet_core::scalar::{q, Q};
use shearlet_core::Error;

type M = Vec<Vec<Q>>;

fn mat_id(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

fn mat_mul(x: &M, y: &M) -> M {
    let n = x.len();
    let k = y.len();
    let m = y[0].len();
    (0..n).map(|i| (0..m).map(|j| (0..k).fold(Q::zero(), |acc, l| acc + &x[i][l] * &y[l][j])).collect()).collect()
}

/// Dilation `a = r^l` with `l = lcm(2, den gamma)`, so that `|a|^gamma = r^{l gamma}` exactly.
struct Dil {
    r: Q,
    l: i32,
    neg: bool,
}

impl Dil {
    fn a(&self) -> Q {
        let v = num_traits::pow(self.r.clone(), self.l as usize);
        if self.neg {
            -v
        } else {
            v
        }
    }

    fn abs_pow(&self, gamma: &Q) -> Q {
        let e = gamma * Q::from_integer(self.l.into());
        assert!(e.is_integer());
        num_traits::pow::Pow::pow(&self.r, e.to_integer().try_into().unwrap_or(0i32))
    }
}

fn lcm2(gamma: &Q) -> i32 {
    let den: i32 = gamma.denom().try_into().unwrap();
    if den % 2 == 0 {
        den
    } else {
        2 * den
    }
}

/// `[[S_s A_a, t], [0, 1]]` or `[[a T_s, t], [0, 1]]` assembled entry by entry.
fn affine_oracle(toeplitz: bool, gamma: &Q, dil: &Dil, s: &[Q], t: &[Q]) -> M {
    let d = t.len();
    let a = dil.a();
    let mut m = mat_id(d + 1);
    if toeplitz {
        for i in 0..d {
            for j in i..d {
                m[i][j] = if i == j { a.clone() } else { &a * &s[j - i - 1] };
            }
        }
    } else {
        let sg = if dil.neg { -Q::one() } else { Q::one() };
        let ag = sg * dil.abs_pow(gamma);
        m[0][0] = a.clone();
        for j in 1..d {
            m[0][j] = &s[j - 1] * &ag;
            m[j][j] = ag.clone();
        }
    }
    for i in 0..d {
        m[i][d] = t[i].clone();
    }
    m
}

/// Polarized Heisenberg matrix `[[1, p^T, tau], [0, I, q], [0, 0, 1]]`.
fn heis_pol_oracle(p: &[Q], tau: &Q, qv: &[Q]) -> M {
    let n = p.len();
    let mut m = mat_id(n + 2);
    for j in 0..n {
        m[0][j + 1] = p[j].clone();
        m[j + 1][n + 1] = qv[j].clone();
    }
    m[0][n + 1] = tau.clone();
    m
}

fn dot(x: &[Q], y: &[Q]) -> Q {
    x.iter().zip(y).fold(Q::zero(), |acc, (a, b)| acc + a * b)
}

fn rat() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn vec_q(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rat(), n)
}

fn gamma_strategy() -> impl Strategy<Value = Q> {
    prop::sample::select(vec![q(1, 2), q(1, 3), q(2, 3), q(1, 4), q(3, 4), q(2, 5)])
}

fn dil_strategy(signed: bool) -> impl Strategy<Value = (i64, i64, bool)> {
    (1i64..=3, 1i64..=3, any::<bool>()).prop_map(move |(n, d, b)| (n, d, signed && b))
}

fn mk_dil(gamma: &Q, (n, d, neg): (i64, i64, bool)) -> Dil {
    Dil { r: q(n, d), l: lcm2(gamma), neg }
}

fn elem(a: Q, s: Vec<Q>, t: Vec<Q>) -> Element<Q> {
    Element::new(a, s, t)
}

fn spec(kind: GroupKind, d: usize, gamma: Q) -> GroupSpec {
    GroupSpec::new(kind, d, gamma).unwrap()
}

#[test]
fn shearlet_full_product_example() {
    let sp = spec(GroupKind::ShearletFull, 2, q(1, 2));
    let g = elem(q(4, 1), vec![q(1, 1)], vec![q(0, 1), q(0, 1)]);
    let h = elem(q(1, 1), vec![q(2, 1)], vec![q(5, 1), q(6, 1)]);
    assert_eq!(compose(&sp, &g, &h).unwrap(), elem(q(4, 1), vec![q(5, 1)], vec![q(32, 1), q(12, 1)]));
}

#[test]
fn toeplitz_sharp_example() {
    assert_eq!(toeplitz_product(&[q(1, 1), q(2, 1)], &[q(3, 1), q(4, 1)]), vec![q(4, 1), q(9, 1)]);
    let prod = toeplitz_matrix(&[q(1, 1), q(2, 1)]).mul(&toeplitz_matrix(&[q(3, 1), q(4, 1)]));
    assert_eq!(prod, toeplitz_matrix(&[q(4, 1), q(9, 1)]));
}

#[test]
fn identity_is_neutral_for_every_kind() {
    for kind in GroupKind::ALL {
        let sp = spec(kind, 3, q(1, 2));
        let e = identity::<Q>(&sp);
        let a = if kind.is_unimodular_heis() { q(1, 1) } else { q(9, 4) };
        let g = elem(a, vec![q(1, 3), q(-2, 1)], vec![q(5, 2), q(0, 1), q(-7, 3)]);
        assert_eq!(compose(&sp, &g, &e).unwrap(), g, "{kind:?}");
        assert_eq!(compose(&sp, &e, &g).unwrap(), g, "{kind:?}");
        assert_eq!(inverse(&sp, &e).unwrap(), e, "{kind:?}");
    }
}

#[test]
fn shearlet_inverse_example() {
    let sp = spec(GroupKind::ShearletConn, 2, q(1, 2));
    let g = elem(q(4, 1), vec![q(3, 1)], vec![q(0, 1), q(0, 1)]);
    let x = inverse(&sp, &g).unwrap();
    // Solve g x = e componentwise: a' = 1/4, s + 2 s' = 0, translations vanish.
    assert_eq!(x, elem(q(1, 4), vec![q(-3, 2)], vec![q(0, 1), q(0, 1)]));
    assert_eq!(compose(&sp, &g, &x).unwrap(), identity(&sp));
}

#[test]
fn heisenberg_inverse_example() {
    let sp = spec(GroupKind::Heis, 2, q(1, 2));
    let g = elem(q(1, 1), vec![q(1, 1)], vec![q(0, 1), q(2, 1)]);
    assert_eq!(inverse(&sp, &g).unwrap(), elem(q(1, 1), vec![q(-1, 1)], vec![q(0, 1), q(-2, 1)]));
}

#[test]
fn polarization_examples() {
    let sp = spec(GroupKind::Heis, 2, q(1, 2));
    let g = elem(q(1, 1), vec![q(2, 1)], vec![q(0, 1), q(3, 1)]);
    assert_eq!(polarize(&sp, &g).unwrap(), elem(q(1, 1), vec![q(2, 1)], vec![q(3, 1), q(3, 1)]));
    let fixed = elem(q(1, 1), vec![q(5, 1)], vec![q(7, 2), q(0, 1)]);
    assert_eq!(polarize(&sp, &fixed).unwrap(), fixed);
}

#[test]
fn sign_split_examples() {
    let sp = spec(GroupKind::ShearletFull, 2, q(1, 2));
    let g = elem(q(-1, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    let (x, eps) = split_sign(&sp, &g).unwrap();
    assert_eq!((x, eps), (identity(&sp), -1));
    let y = elem(q(4, 1), vec![q(1, 1)], vec![q(2, 1), q(3, 1)]);
    assert_eq!(reflect(&y, 1), y);
}

#[test]
fn haar_densities() {
    let sp = spec(GroupKind::ShearletConn, 2, q(1, 2));
    let g = Element::new(2.0, vec![0.3], vec![1.0, -1.0]);
    assert_eq!(left_haar_density(&sp, &g), 1.0 / 8.0);
    assert_eq!(right_haar_density(&sp, &g), 0.5);
    assert_eq!(modular_function(&sp, &g), 0.25);
    let e = identity::<f64>(&sp);
    assert_eq!(left_haar_density(&sp, &e), 1.0);
    assert_eq!(right_haar_density(&sp, &e), 1.0);
}

#[test]
fn wrong_kinds_and_bad_elements_are_rejected() {
    let conn = spec(GroupKind::ShearletConn, 2, q(1, 2));
    let neg = elem(q(-4, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    assert!(matches!(compose(&conn, &neg, &neg), Err(Error::InvalidParameter(_))));
    let zero = elem(q(0, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    let full = spec(GroupKind::ShearletFull, 2, q(1, 2));
    assert!(matches!(inverse(&full, &zero), Err(Error::InvalidParameter(_))));
    let short = elem(q(1, 1), vec![], vec![q(0, 1), q(0, 1)]);
    assert!(matches!(compose(&full, &short, &short), Err(Error::DimensionMismatch(_))));
    let g = elem(q(1, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    assert!(matches!(polarize(&conn, &g), Err(Error::KindMismatch(_))));
    assert!(matches!(split_sign(&conn, &g), Err(Error::KindMismatch(_))));
    assert!(matches!(heis_ext_pol_to_shearlet(&conn, &g), Err(Error::KindMismatch(_))));
    assert!(GroupSpec::new(GroupKind::Heis, 1, q(1, 2)).is_err());
    assert!(GroupSpec::new(GroupKind::ShearletConn, 2, q(3, 2)).is_err());
    assert!(GroupSpec::with_any_gamma(GroupKind::ShearletConn, 2, q(3, 2)).is_ok());
}

#[test]
fn json_round_trip() {
    let sp = spec(GroupKind::ToeplitzFull, 3, q(1, 3));
    let g = elem(q(-9, 4), vec![q(1, 2), q(-3, 1)], vec![q(0, 1), q(7, 5), q(1, 1)]);
    let j = to_json(&sp, &g).unwrap();
    assert_eq!(j.a.as_deref(), Some("-9/4"));
    let text = serde_json::to_string(&j).unwrap();
    let back: ElementJson = serde_json::from_str(&text).unwrap();
    assert_eq!(from_json(&back, false).unwrap(), (sp, g));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shearlet_and_toeplitz_laws_match_affine_products(
        gamma in gamma_strategy(),
        d in 2usize..=4,
        toeplitz in any::<bool>(),
        full in any::<bool>(),
        dg in dil_strategy(true),
        dh in dil_strategy(true),
        s1 in vec_q(3), s2 in vec_q(3), t1 in vec_q(4), t2 in vec_q(4),
    ) {
        let kind = match (toeplitz, full) {
            (false, false) => GroupKind::ShearletConn,
            (false, true) => GroupKind::ShearletFull,
            (true, false) => GroupKind::ToeplitzConn,
            (true, true) => GroupKind::ToeplitzFull,
        };
        let sp = spec(kind, d, gamma.clone());
        let (dg, dh) = (mk_dil(&gamma, (dg.0, dg.1, full && dg.2)), mk_dil(&gamma, (dh.0, dh.1, full && dh.2)));
        let g = elem(dg.a(), s1[..d - 1].to_vec(), t1[..d].to_vec());
        let h = elem(dh.a(), s2[..d - 1].to_vec(), t2[..d].to_vec());
        let gh = compose(&sp, &g, &h).unwrap();
        let product = mat_mul(&affine_oracle(toeplitz, &gamma, &dg, &g.s, &g.t), &affine_oracle(toeplitz, &gamma, &dh, &h.s, &h.t));
        let dgh = Dil { r: &dg.r * &dh.r, l: dg.l, neg: dg.neg != dh.neg };
        prop_assert_eq!(affine_oracle(toeplitz, &gamma, &dgh, &gh.s, &gh.t), product);
        let gi = inverse(&sp, &g).unwrap();
        prop_assert_eq!(compose(&sp, &g, &gi).unwrap(), identity(&sp));
        prop_assert_eq!(compose(&sp, &gi, &g).unwrap(), identity(&sp));
    }

    #[test]
    fn heisenberg_laws_match_unipotent_products(
        d in 2usize..=4,
        ext in any::<bool>(),
        pol in any::<bool>(),
        gamma in gamma_strategy(),
        dg in dil_strategy(false),
        dh in dil_strategy(false),
        p1 in vec_q(3), p2 in vec_q(3), t1 in vec_q(4), t2 in vec_q(4),
    ) {
        let kind = match (ext, pol) {
            (false, false) => GroupKind::Heis,
            (false, true) => GroupKind::HeisPol,
            (true, false) => GroupKind::HeisExt,
            (true, true) => GroupKind::HeisExtPol,
        };
        let sp = spec(kind, d, gamma.clone());
        let (dg, dh) = (mk_dil(&gamma, dg), mk_dil(&gamma, dh));
        let (ag, ah) = if ext { (dg.a(), dh.a()) } else { (q(1, 1), q(1, 1)) };
        let g = elem(ag, p1[..d - 1].to_vec(), t1[..d].to_vec());
        let h = elem(ah, p2[..d - 1].to_vec(), t2[..d].to_vec());
        let gh = compose(&sp, &g, &h).unwrap();
        // The polarized coordinates of an unpolarized element are tau + p.q/2.
        let lift = |x: &Element<Q>| {
            let tau = if pol { x.t[0].clone() } else { &x.t[0] + dot(&x.s, &x.t[1..]) / q(2, 1) };
            (x.s.clone(), tau, x.t[1..].to_vec())
        };
        if ext {
            // The extended polarized law is the shearlet law in permuted variables.
            let (pg, tg, qg) = lift(&g);
            let (ph, th, qh) = lift(&h);
            let (pgh, tgh, qgh) = lift(&gh);
            let join = |tau: Q, qv: Vec<Q>| [vec![tau], qv].concat();
            let dgh = Dil { r: &dg.r * &dh.r, l: dg.l, neg: false };
            let product = mat_mul(&affine_oracle(false, &gamma, &dg, &pg, &join(tg, qg)), &affine_oracle(false, &gamma, &dh, &ph, &join(th, qh)));
            prop_assert_eq!(affine_oracle(false, &gamma, &dgh, &pgh, &join(tgh, qgh)), product);
            prop_assert_eq!(gh.a.clone(), dgh.a());
        } else {
            let (pg, tg, qg) = lift(&g);
            let (ph, th, qh) = lift(&h);
            let (pgh, tgh, qgh) = lift(&gh);
            prop_assert_eq!(heis_pol_oracle(&pgh, &tgh, &qgh), mat_mul(&heis_pol_oracle(&pg, &tg, &qg), &heis_pol_oracle(&ph, &th, &qh)));
        }
        let gi = inverse(&sp, &g).unwrap();
        prop_assert_eq!(compose(&sp, &g, &gi).unwrap(), identity(&sp));
    }

    #[test]
    fn associativity_exact(
        kind_ix in 0usize..8,
        gamma in gamma_strategy(),
        ds in prop::collection::vec(dil_strategy(true), 3),
        ss in prop::collection::vec(vec_q(2), 3),
        ts in prop::collection::vec(vec_q(3), 3),
    ) {
        let kind = GroupKind::ALL[kind_ix];
        let sp = spec(kind, 3, gamma.clone());
        let els: Vec<Element<Q>> = (0..3).map(|i| {
            let a = if kind.is_unimodular_heis() {
                q(1, 1)
            } else {
                let signed = matches!(kind, GroupKind::ShearletFull | GroupKind::ToeplitzFull);
                mk_dil(&gamma, (ds[i].0, ds[i].1, signed && ds[i].2)).a()
            };
            elem(a, ss[i].clone(), ts[i].clone())
        }).collect();
        let left = compose(&sp, &compose(&sp, &els[0], &els[1]).unwrap(), &els[2]).unwrap();
        let right = compose(&sp, &els[0], &compose(&sp, &els[1], &els[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn polarization_is_an_isomorphism(
        ext in any::<bool>(),
        gamma in gamma_strategy(),
        dg in dil_strategy(false), dh in dil_strategy(false),
        p1 in vec_q(1), p2 in vec_q(1), t1 in vec_q(2), t2 in vec_q(2),
    ) {
        let (from, to) = if ext { (GroupKind::HeisExt, GroupKind::HeisExtPol) } else { (GroupKind::Heis, GroupKind::HeisPol) };
        let (sf, st) = (spec(from, 2, gamma.clone()), spec(to, 2, gamma.clone()));
        let (ag, ah) = if ext { (mk_dil(&gamma, dg).a(), mk_dil(&gamma, dh).a()) } else { (q(1, 1), q(1, 1)) };
        let g = elem(ag, p1, t1);
        let h = elem(ah, p2, t2);
        let lhs = polarize(&sf, &compose(&sf, &g, &h).unwrap()).unwrap();
        let rhs = compose(&st, &polarize(&sf, &g).unwrap(), &polarize(&sf, &h).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(depolarize(&st, &polarize(&sf, &g).unwrap()).unwrap(), g);
    }

    #[test]
    fn heisenberg_to_shearlet_is_an_isomorphism(
        gamma in gamma_strategy(),
        dg in dil_strategy(false), dh in dil_strategy(false),
        p1 in vec_q(1), p2 in vec_q(1), t1 in vec_q(2), t2 in vec_q(2),
    ) {
        let he = spec(GroupKind::HeisExtPol, 2, gamma.clone());
        let sh = spec(GroupKind::ShearletConn, 2, gamma.clone());
        let g = elem(mk_dil(&gamma, dg).a(), p1, t1);
        let h = elem(mk_dil(&gamma, dh).a(), p2, t2);
        let map = |x: &Element<Q>| heis_ext_pol_to_shearlet(&he, x).unwrap();
        prop_assert_eq!(map(&compose(&he, &g, &h).unwrap()), compose(&sh, &map(&g), &map(&h)).unwrap());
        prop_assert_eq!(shearlet_to_heis_ext_pol(&sh, &map(&g)).unwrap(), g);
    }

    #[test]
    fn sign_split_law_reproduces_compose(
        gamma in gamma_strategy(),
        dg in dil_strategy(true), dh in dil_strategy(true),
        s1 in vec_q(2), s2 in vec_q(2), t1 in vec_q(3), t2 in vec_q(3),
    ) {
        let full = spec(GroupKind::ShearletFull, 3, gamma.clone());
        let conn = full.with_kind(GroupKind::ShearletConn);
        let g = elem(mk_dil(&gamma, dg).a(), s1, t1);
        let h = elem(mk_dil(&gamma, dh).a(), s2, t2);
        let (xg, xh) = (split_sign(&full, &g).unwrap(), split_sign(&full, &h).unwrap());
        prop_assert!(xg.0.a.is_positive());
        prop_assert_eq!(merge_sign(&xg.0, xg.1), g.clone());
        let (x, e) = split_compose(&conn, &xg, &xh).unwrap();
        prop_assert_eq!(merge_sign(&x, e), compose(&full, &g, &h).unwrap());
    }

    #[test]
    fn toeplitz_sharp_matches_matrix_product(d in 2usize..=6, s in vec_q(5), sp in vec_q(5)) {
        let (s, sp) = (&s[..d - 1], &sp[..d - 1]);
        prop_assert_eq!(toeplitz_matrix(&toeplitz_product(s, sp)), toeplitz_matrix(s).mul(&toeplitz_matrix(sp)));
        prop_assert_eq!(toeplitz_matrix(&toeplitz_inverse(s)), toeplitz_matrix(s).inverse().unwrap());
    }

    #[test]
    fn modular_function_is_multiplicative(
        a1 in 0.25f64..4.0, a2 in 0.25f64..4.0, n1 in any::<bool>(), n2 in any::<bool>(),
        s1 in -2.0f64..2.0, s2 in -2.0f64..2.0,
    ) {
        let sp = spec(GroupKind::ShearletFull, 2, q(1, 3));
        let g = Element::new(if n1 { -a1 } else { a1 }, vec![s1], vec![0.5, -1.0]);
        let h = Element::new(if n2 { -a2 } else { a2 }, vec![s2], vec![2.0, 0.25]);
        let gh = compose(&sp, &g, &h).unwrap();
        let lhs = modular_function(&sp, &gh);
        let rhs = modular_function(&sp, &g) * modular_function(&sp, &h);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        prop_assert!((modular_function(&sp, &g) - g.a.abs().powi(-2)).abs() <= 1e-12 * modular_function(&sp, &g));
    }
}
