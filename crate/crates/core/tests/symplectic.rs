//! Symplectic embeddings checked against block matrices assembled here and a cofactor determinant.

use num_traits::{One, Zero};
use proptest::prelude::*;
use shearlet_core::groups::{compose, toeplitz_matrix, Element, GroupKind, GroupSpec};
use shearlet_core::matrix::Mat;
use shearlet_core::scalar::{q, Q};
use shearlet_core::symplectic::*;
use shearlet_core::Error;

fn mq(rows: &[&[i64]]) -> Mat<Q> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()).unwrap()
}

fn to_rows(m: &Mat<Q>) -> Vec<Vec<Q>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

/// Cofactor expansion along the first row.
fn det_oracle(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    (0..n).fold(Q::zero(), |acc, j| {
        let minor: Vec<Vec<Q>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &m[0][j] * det_oracle(&minor);
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// `B^T J B` computed with explicit index sums.
fn btjb(b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = b.len();
    let d = n / 2;
    let j = |r: usize, c: usize| -> Q {
        if c == r + d {
            Q::one()
        } else if r == c + d {
            -Q::one()
        } else {
            Q::zero()
        }
    };
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut acc = Q::zero();
                    for k in 0..n {
                        for l in 0..n {
                            let jk = j(k, l);
                            if !jk.is_zero() {
                                acc += &b[k][r] * jk * &b[l][c];
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `kappa_plus` assembled entry by entry for `a = r^2`, `gamma = 1/2`.
fn kappa_oracle(r: &Q, s: &[Q], t: &[Q]) -> Vec<Vec<Q>> {
    let d = t.len();
    let ri = Q::one() / r;
    // M = S~_s A~ with A~ = diag(1/r, 1, ..., 1).
    let mut m = vec![vec![Q::zero(); d]; d];
    m[0][0] = ri.clone();
    for i in 1..d {
        m[i][0] = -(&s[i - 1] * &ri);
        m[i][i] = Q::one();
    }
    // M^{-T} = [[r, s^T], [0, I]].
    let mut mit = vec![vec![Q::zero(); d]; d];
    mit[0][0] = r.clone();
    for i in 1..d {
        mit[0][i] = s[i - 1].clone();
        mit[i][i] = Q::one();
    }
    let mut sig = vec![vec![Q::zero(); d]; d];
    sig[0][0] = t[0].clone();
    for i in 1..d {
        sig[0][i] = &t[i] / q(2, 1);
        sig[i][0] = &t[i] / q(2, 1);
    }
    let mut out = vec![vec![Q::zero(); 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            out[i][j] = m[i][j].clone();
            out[d + i][d + j] = mit[i][j].clone();
            out[d + i][j] = (0..d).fold(Q::zero(), |acc, k| acc + &sig[i][k] * &m[k][j]);
        }
    }
    out
}

fn rat() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn vec_q(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rat(), n)
}

fn pos() -> impl Strategy<Value = Q> {
    (1i64..=4, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn gamma_and_power() -> impl Strategy<Value = (Q, usize)> {
    prop::sample::select(vec![(q(1, 2), 2usize), (q(1, 3), 6), (q(2, 3), 6), (q(1, 4), 4), (q(3, 4), 4)])
}

#[test]
fn residual_examples() {
    let id = Mat::<Q>::identity(4);
    assert!(is_symplectic_exact(&id).unwrap());
    assert_eq!(symplectic_residual(&id).unwrap(), 0.0);
    let j = j_matrix::<Q>(2);
    assert!(is_symplectic_exact(&j).unwrap());
    let b = mq(&[&[2, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    assert!(!is_symplectic_exact(&b).unwrap());
    let diff: f64 = btjb(&to_rows(&b))
        .iter()
        .zip(to_rows(&j))
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| shearlet_core::scalar::q_to_f64(&(u - v)).powi(2)).collect::<Vec<_>>())
        .sum::<f64>()
        .sqrt();
    assert_eq!(symplectic_residual(&b).unwrap(), diff);
    assert!((diff - 2f64.sqrt()).abs() < 1e-15);
    assert!(matches!(require_symplectic(&b, 1e-10), Err(Error::NonSymplectic(_))));
    assert!(matches!(symplectic_residual(&Mat::<Q>::identity(3)), Err(Error::DimensionMismatch(_))));
}

#[test]
fn kappa_plus_examples() {
    let sp = GroupSpec::new(GroupKind::ShearletConn, 2, q(1, 2)).unwrap();
    let e = Element::new(q(1, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    assert_eq!(kappa_plus(&sp, &e).unwrap(), Mat::identity(4));
    let g = Element::new(q(4, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    assert_eq!(kappa_plus(&sp, &g).unwrap(), Mat::diag(&[q(1, 2), q(1, 1), q(2, 1), q(1, 1)]));
    let neg = Element::new(q(-4, 1), vec![q(0, 1)], vec![q(0, 1), q(0, 1)]);
    let full = sp.with_kind(GroupKind::ShearletFull);
    assert!(matches!(kappa_plus(&full, &neg), Err(Error::InvalidParameter(_))));
    let tsp = sp.with_kind(GroupKind::ToeplitzConn);
    assert!(matches!(kappa_plus(&tsp, &e), Err(Error::KindMismatch(_))));
    assert!(matches!(kappa_plus_toeplitz(&sp, &e), Err(Error::KindMismatch(_))));
    assert_eq!(kappa_plus_toeplitz(&tsp, &e).unwrap(), Mat::identity(4));
}

#[test]
fn tds_identity_and_sigma_coordinates() {
    assert_eq!(tds_general(&Mat::<Q>::identity(3), &Mat::zeros(3, 3)).unwrap(), Mat::identity(6));
    let t = vec![q(3, 1), q(-1, 2), q(5, 7)];
    assert_eq!(sigma_coords(&sigma(&t)).unwrap(), t);
    assert!(matches!(sigma_coords(&Mat::<Q>::identity(2)), Err(Error::NotInSpan)));
    assert!(matches!(tds_general(&Mat::<Q>::zeros(2, 2), &Mat::zeros(2, 2)), Err(Error::Singular)));
}

#[test]
fn toeplitz_conjugation_identity_d3() {
    let s = vec![q(2, 3), q(-5, 2)];
    let tp = vec![q(1, 1), q(4, 3), q(-2, 1)];
    let ts = toeplitz_matrix(&s);
    let lhs = ts.mul(&sigma(&tp)).mul(&ts.transpose());
    // t'_1 + s^T t~' and T_{[s]} t~' with T_{[s]} = [[1, s_1], [0, 1]].
    let first = &tp[0] + &s[0] * &tp[1] + &s[1] * &tp[2];
    let rest = vec![&tp[1] + &s[0] * &tp[2], tp[2].clone()];
    let expected = sigma(&[vec![first], rest].concat());
    assert_eq!(lhs, expected);
    assert_eq!(sigma(&toeplitz_sigma_conjugate(&s, &tp).unwrap()), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kappa_plus_matches_block_oracle(d in 2usize..=4, r in pos(), s in vec_q(3), t in vec_q(4)) {
        let sp = GroupSpec::new(GroupKind::ShearletConn, d, q(1, 2)).unwrap();
        let g = Element::new(&r * &r, s[..d - 1].to_vec(), t[..d].to_vec());
        let k = kappa_plus(&sp, &g).unwrap();
        let oracle = kappa_oracle(&r, &g.s, &g.t);
        prop_assert_eq!(to_rows(&k), oracle.clone());
        prop_assert_eq!(btjb(&oracle), to_rows(&j_matrix::<Q>(d)));
        prop_assert_eq!(det_oracle(&oracle), Q::one());
    }

    #[test]
    fn kappa_maps_are_symplectic_homomorphisms(
        (gamma, pw) in gamma_and_power(),
        d in 2usize..=3,
        toeplitz in any::<bool>(),
        r1 in pos(), r2 in pos(),
        s1 in vec_q(2), s2 in vec_q(2), t1 in vec_q(3), t2 in vec_q(3),
    ) {
        let kind = if toeplitz { GroupKind::ToeplitzConn } else { GroupKind::ShearletConn };
        let sp = GroupSpec::new(kind, d, gamma).unwrap();
        let g = Element::new(num_traits::pow(r1, pw), s1[..d - 1].to_vec(), t1[..d].to_vec());
        let h = Element::new(num_traits::pow(r2, pw), s2[..d - 1].to_vec(), t2[..d].to_vec());
        let (kg, kh) = (embed(&sp, &g).unwrap(), embed(&sp, &h).unwrap());
        let kgh = embed(&sp, &compose(&sp, &g, &h).unwrap()).unwrap();
        prop_assert_eq!(kgh, kg.mul(&kh));
        prop_assert_eq!(btjb(&to_rows(&kg)), to_rows(&j_matrix::<Q>(d)));
        prop_assert_eq!(det_oracle(&to_rows(&kg)), Q::one());
        let (m, sig) = tds_split(&kg).unwrap();
        prop_assert_eq!(tds_general(&m, &sig).unwrap(), kg);
        prop_assert_eq!(sigma_coords(&sig).unwrap(), g.t.clone());
    }

    #[test]
    fn tds_products_stay_in_tds(
        a1 in pos(), a2 in pos(), s1 in rat(), s2 in rat(), t1 in vec_q(2), t2 in vec_q(2),
    ) {
        let m1 = m_matrix(2, &q(1, 2), &(&a1 * &a1), &[s1]).unwrap();
        let m2 = m_matrix(2, &q(1, 2), &(&a2 * &a2), &[s2]).unwrap();
        let b = tds_general(&m1, &sigma(&t1)).unwrap().mul(&tds_general(&m2, &sigma(&t2)).unwrap());
        prop_assert!(is_symplectic_exact(&b).unwrap());
        prop_assert!(b.block(0, 2, 2, 2).is_zero());
        let (m, sig) = tds_split(&b).unwrap();
        prop_assert_eq!(b.block(2, 2, 2, 2), m.inverse().unwrap().transpose());
        prop_assert!(sigma_coords(&sig).is_ok());
    }

    #[test]
    fn sigma_span_is_invariant(
        d in 2usize..=4, r in pos(), s in vec_q(3), t in vec_q(4),
    ) {
        let a = &r * &r;
        let sig = sigma(&t[..d]);
        let m = m_matrix(d, &q(1, 2), &a, &s[..d - 1]).unwrap();
        prop_assert!(conjugated_sigma(&m, &sig).is_ok());
        let mt = toeplitz_matrix(&s[..d - 1]).inverse().unwrap().transpose().scale(&(Q::one() / &r));
        prop_assert!(conjugated_sigma(&mt, &sig).is_ok());
        // sigma is linear and injective.
        let u: Vec<Q> = t[..d].iter().map(|x| x * q(3, 1) - q(1, 2)).collect();
        let lin = sigma(&t[..d]).scale(&q(3, 1)).sub(&sigma(&vec![q(1, 2); d]));
        prop_assert_eq!(sigma(&u), lin);
    }

    #[test]
    fn float_backend_agrees(r in pos(), s in rat(), t in vec_q(2)) {
        let sp = GroupSpec::new(GroupKind::ShearletConn, 2, q(1, 2)).unwrap();
        let g = Element::new(&r * &r, vec![s], t);
        let exact = kappa_plus(&sp, &g).unwrap().to_f64();
        let float = kappa_plus(&sp, &g.to_f64()).unwrap();
        prop_assert!(exact.sub(&float).max_abs() <= 1e-12 * exact.max_abs());
        prop_assert!(symplectic_residual(&float).unwrap() <= 1e-10);
    }
}
