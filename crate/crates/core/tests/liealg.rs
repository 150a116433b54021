//! sp(2,R) structure constants, normal forms, M_Gamma determinants, generator relations,
//! embedding search, reflection obstruction and classification.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use shearlet_core::liealg::basis::*;
use shearlet_core::liealg::canonical::{build_m_gamma, det_m_gamma, eigenspace, eigenspace_f64, CanonicalForm};
use shearlet_core::liealg::classify::{classify_hamiltonian, classify_hamiltonian_exact};
use shearlet_core::liealg::embed::{
    check_relations, conjugate, conjugated_presentation, embedding_search, phi_scale, standard_generators, Quadruple,
};
use shearlet_core::liealg::obstruct::{is_witness, obstruction_solve};
use shearlet_core::matrix::Mat;
use shearlet_core::scalar::{q, q_to_f64, Q};
use shearlet_core::symplectic::{embed, is_symplectic_exact, j_matrix};
use shearlet_core::groups::{Element, GroupKind, GroupSpec};

type M4 = [[Q; 4]; 4];

fn m4(m: &Mat<Q>) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)].clone()))
}

fn mul4(x: &M4, y: &M4) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).fold(Q::zero(), |acc, k| acc + &x[i][k] * &y[k][j])))
}

fn sub4(x: &M4, y: &M4) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| &x[i][j] - &y[i][j]))
}

fn comb4(c: &[Q]) -> M4 {
    let mut out: M4 = std::array::from_fn(|_| std::array::from_fn(|_| Q::zero()));
    for (k, ck) in c.iter().enumerate() {
        let b = m4(&basis_matrix(k));
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += ck * &b[i][j];
            }
        }
    }
    out
}

fn v(terms: &[(usize, i64)]) -> SpVec {
    combo(&terms.iter().map(|&(k, c)| (k, q(c, 1))).collect::<Vec<_>>())
}

fn sym(m: &Mat<Q>) -> Mat<Q> {
    m.transpose().mul(&j_matrix(2)).add(&j_matrix::<Q>(2).mul(m))
}

#[test]
fn basis_matrices_match_displays() {
    let xa = basis_matrix(X_A);
    assert_eq!(xa[(0, 1)], q(1, 1));
    assert_eq!(xa[(3, 2)], q(-1, 1));
    assert_eq!(xa.frobenius(), 2f64.sqrt());
    for (pos, neg) in [(X_A, X_NA), (X_B, X_NB), (X_AB, X_NAB), (X_2AB, X_N2AB)] {
        assert_eq!(basis_matrix(neg), basis_matrix(pos).transpose().neg());
    }
    assert_eq!(basis_matrix(H10), Mat::diag(&[q(1, 1), q(0, 1), q(-1, 1), q(0, 1)]));
    for k in 0..DIM {
        assert!(sym(&basis_matrix(k)).is_zero(), "B_{k} is not Hamiltonian");
        assert_eq!(coords(&basis_matrix(k)).unwrap(), unit(k));
    }
}

#[test]
fn table_entries_match_matrix_commutators() {
    for i in 0..DIM {
        for j in 0..DIM {
            let (bi, bj) = (m4(&basis_matrix(i)), m4(&basis_matrix(j)));
            let comm = sub4(&mul4(&bi, &bj), &mul4(&bj, &bi));
            assert_eq!(comb4(&table_entry(i, j)), comm, "[B_{i}, B_{j}]");
        }
    }
    assert!(table_verify().passed());
}

#[test]
fn bracket_examples() {
    assert_eq!(bracket(&unit(X_A), &unit(X_B)), unit(X_AB));
    assert_eq!(bracket(&unit(X_A), &unit(X_NA)), h(q(-1, 1), q(1, 1)));
    assert!(is_zero(&bracket(&unit(H10), &unit(H01))));
}

#[test]
fn root_space_decomposition() {
    // alpha(H_{a,b}) = a - b, beta(H_{a,b}) = 2b.
    let roots: [(usize, i64, i64); 8] =
        [(X_A, 1, 0), (X_B, 0, 1), (X_AB, 1, 1), (X_2AB, 2, 1), (X_NA, -1, 0), (X_NB, 0, -1), (X_NAB, -1, -1), (X_N2AB, -2, -1)];
    for (a, b) in [(1, 0), (0, 1), (3, -2)] {
        for &(k, ca, cb) in &roots {
            let nu = q(ca * (a - b) + cb * 2 * b, 1);
            assert_eq!(bracket(&h(q(a, 1), q(b, 1)), &unit(k)), scale(&nu, &unit(k)));
        }
    }
}

#[test]
fn case1_ad_is_diagonal() {
    let (a1, a2) = (q(5, 2), q(1, 3));
    let d = h(a1.clone(), a2.clone());
    let diag = [&a1 - &a2, q(2, 1) * &a2, &a1 + &a2, q(2, 1) * &a1, &a2 - &a1, q(-2, 1) * &a2, -(&a1 + &a2), q(-2, 1) * &a1, q(0, 1), q(0, 1)];
    let gamma = q(3, 7);
    let m = build_m_gamma(&d, &gamma);
    let expected = Mat::diag(&diag.iter().map(|x| x - &gamma).collect::<Vec<_>>());
    assert_eq!(m, expected);
    assert_eq!(build_m_gamma(&zero(), &q(0, 1)), Mat::zeros(DIM, DIM));
    // [D, X_a] = (a1 - a2) X_a with D = H_{1,0}.
    assert_eq!(bracket(&unit(H10), &unit(X_A)), unit(X_A));
}

#[test]
fn case2_matrix_matches_display() {
    let a = q(1, 1);
    let gamma = q(1, 1);
    let form = CanonicalForm::D2 { a: a.clone() };
    let x = form.coords();
    let t = q(2, 1) * &a;
    let g = gamma.clone();
    let z = Q::zero;
    let e = |n: i64| q(n, 1);
    let rows: Vec<Vec<Q>> = vec![
        vec![-g.clone(), z(), z(), z(), z(), z(), z(), z(), z(), z()],
        vec![z(), &t - &g, e(-2), z(), z(), z(), z(), z(), z(), z()],
        vec![z(), z(), &t - &g, e(-2), z(), z(), z(), z(), z(), z()],
        vec![z(), z(), z(), &t - &g, z(), z(), z(), z(), z(), z()],
        vec![z(), z(), z(), z(), -g.clone(), z(), z(), z(), e(1), e(-1)],
        vec![z(), z(), z(), z(), z(), -&t - &g, z(), z(), z(), z()],
        vec![z(), z(), z(), z(), z(), e(1), -&t - &g, z(), z(), z()],
        vec![z(), z(), z(), z(), z(), z(), e(1), -&t - &g, z(), z()],
        vec![e(1), z(), z(), z(), z(), z(), z(), z(), -g.clone(), z()],
        vec![e(-1), z(), z(), z(), z(), z(), z(), z(), z(), -g.clone()],
    ];
    assert_eq!(build_m_gamma(&x, &gamma), Mat::from_rows(rows).unwrap());
    // Brackets of the same display.
    assert_eq!(bracket(&x, &unit(X_A)), h(q(1, 1), q(-1, 1)));
    assert_eq!(bracket(&x, &unit(X_NB)), v(&[(X_NB, -2), (X_NAB, 1)]));
    assert_eq!(bracket(&x, &unit(H01)), v(&[(X_NA, -1)]));
}

#[test]
fn determinant_examples() {
    let d2 = CanonicalForm::D2 { a: q(1, 1) };
    assert_eq!(d2.closed_form_det(&q(1, 1)), q(-27, 1));
    assert_eq!(det_m_gamma(&d2.coords(), &q(1, 1)), q(-27, 1));
    assert_eq!(d2.closed_form_det(&q(2, 1)), q(0, 1));
    assert_eq!(det_m_gamma(&d2.coords(), &q(2, 1)), q(0, 1));
    let d4 = CanonicalForm::D4 { eps: 1 };
    assert_eq!(det_m_gamma(&d4.coords(), &q(2, 1)), q(1024, 1));
    assert_eq!(d4.closed_form_det(&q(2, 1)), q(1024, 1));
    let d6 = CanonicalForm::D6 { b1: q(0, 1), b2: q(0, 1), eps: 1, eta: 1 };
    assert_eq!(det_m_gamma(&d6.coords(), &q(1, 1)), q(1, 1));
    assert_eq!(d6.closed_form_det(&q(1, 1)), q(1, 1));
}

#[test]
fn kernel_examples() {
    let gamma = q(1, 4);
    let d = h(q(1, 1), q(1, 1) - q(2, 1) * &gamma);
    let ker = eigenspace(&d, &(q(2, 1) * &gamma));
    assert!(ker.contains(&unit(X_A)) || ker.iter().any(|k| k[X_A] != Q::zero()));
    assert_eq!(bracket(&d, &unit(X_A)), scale(&q(1, 2), &unit(X_A)));
    let kf = eigenspace_f64(&d, &(q(2, 1) * &gamma));
    assert_eq!(kf.len(), ker.len());
    assert!(Mat::<Q>::identity(10).nullspace().is_empty());
}

#[test]
fn canonical_constraints() {
    assert!(CanonicalForm::from_parts(1, &[q(1, 1), q(2, 1)], &[]).is_err());
    assert!(CanonicalForm::from_parts(1, &[q(2, 1), q(1, 1)], &[]).is_ok());
    assert!(CanonicalForm::from_parts(6, &[q(1, 1), q(1, 1)], &[-1, 1]).is_err());
    assert!(CanonicalForm::from_parts(4, &[], &[2]).is_err());
    assert!(CanonicalForm::from_parts(8, &[], &[]).is_err());
    assert!(CanonicalForm::from_parts(7, &[q(1, 1)], &[]).is_err());
}

#[test]
fn standard_generator_relations() {
    let s = standard_generators(&q(1, 2));
    assert_eq!(s.d, h(q(-1, 1), q(0, 1)));
    assert_eq!(bracket(&s.p, &s.q), s.t);
    assert!(is_zero(&bracket(&s.p, &s.t)) && is_zero(&bracket(&s.q, &s.t)));
    // P = X_{-a}, Q = -X_{-a-b}, T = -X_{-2a-b} commute as matrices.
    let (pm, tm) = (m4(&basis_matrix(X_NA)), m4(&basis_matrix(X_N2AB)));
    assert_eq!(mul4(&pm, &tm), mul4(&tm, &pm));
    for gamma in [q(1, 5), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)] {
        assert!(check_relations(&gamma, &standard_generators(&gamma)).all());
        let second = gamma >= q(1, 2);
        assert!(check_relations(&gamma, &conjugated_presentation(&gamma, second)).all());
    }
    let gamma = q(1, 4);
    let st = standard_generators(&gamma);
    let scaled = phi_scale(&st, &q(1, 1), &q(3, 1));
    assert_eq!(scaled.t, scale(&q(3, 1), &st.t));
    assert!(check_relations(&gamma, &scaled).all());
    let swapped = Quadruple { d: st.d.clone(), p: st.q.clone(), q: st.p.clone(), t: scale(&q(-1, 1), &st.t) };
    let r = check_relations(&gamma, &swapped);
    assert!(!r.dp);
}

#[test]
fn standard_generators_are_tangent_to_the_embedding() {
    // kappa^+ of one-parameter subgroups through exact rational points.
    let gamma = q(1, 2);
    let sp = GroupSpec::new(GroupKind::ShearletConn, 2, gamma.clone()).unwrap();
    let st = standard_generators(&gamma);
    let id = Mat::<Q>::identity(4);
    let k_s = embed(&sp, &Element::new(q(1, 1), vec![q(1, 1)], vec![q(0, 1), q(0, 1)])).unwrap();
    assert_eq!(k_s.sub(&id), to_matrix(&st.p));
    let k_t1 = embed(&sp, &Element::new(q(1, 1), vec![q(0, 1)], vec![q(1, 1), q(0, 1)])).unwrap();
    assert_eq!(k_t1.sub(&id), to_matrix(&st.t).scale(&q(1, 2)));
}

#[test]
fn embedding_search_families() {
    for gamma in [q(1, 5), q(1, 4), q(2, 5), q(3, 5), q(3, 4)] {
        let rep = embedding_search(&gamma).unwrap();
        assert_eq!(rep.families.len(), 1, "gamma = {gamma}");
        let f = &rep.families[0];
        let c = (q(1, 1) - q(2, 1) * &gamma).abs();
        assert_eq!(f.form, CanonicalForm::D1 { a1: q(1, 1), a2: c });
        assert!(f.standard);
        assert!(check_relations(&gamma, &f.representative).all());
        assert!(rep.rejections.iter().all(|r| !r.reason.name().is_empty()));
    }
    let half = embedding_search(&q(1, 2)).unwrap();
    assert_eq!(half.families.len(), 1);
    assert_eq!(half.families[0].form, CanonicalForm::D1 { a1: q(1, 1), a2: q(0, 1) });
    let span: Vec<SpVec> = half.families[0].p_space.iter().chain(&half.families[0].q_space).cloned().collect();
    assert!(span.iter().all(|x| x.iter().enumerate().all(|(k, c)| c.is_zero() || k == X_A || k == X_AB)));
    for gamma in [q(1, 3), q(2, 3)] {
        let rep = embedding_search(&gamma).unwrap();
        assert_eq!(rep.families.iter().filter(|f| f.standard).count(), 1);
        assert!(rep.families.iter().any(|f| !f.standard));
        for f in &rep.families {
            assert!(check_relations(&gamma, &f.representative).all());
        }
    }
    let third = embedding_search(&q(1, 3)).unwrap();
    let ns = third.families.iter().find(|f| !f.standard).unwrap();
    let qx = &ns.representative.q;
    assert!(qx.iter().enumerate().all(|(k, c)| c.is_zero() || k == X_A || k == X_B));
}

#[test]
fn reflection_obstruction() {
    let st = standard_generators(&q(1, 2));
    let rep = obstruction_solve(&st);
    assert_eq!(rep.exists, Some(false));
    assert_eq!(rep.certificate_column, Some(1));
    for b in &rep.full.basis {
        assert!((0..4).all(|i| b[(i, 0)].is_zero()));
    }
    let bm = Mat::from_rows(vec![
        vec![q(1, 1), q(2, 1), q(0, 1), q(0, 1)],
        vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)],
        vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)],
        vec![q(0, 1), q(0, 1), q(-2, 1), q(1, 1)],
    ])
    .unwrap();
    assert!(is_symplectic_exact(&bm).unwrap());
    let conj = conjugate(&st, &bm).unwrap();
    assert!(check_relations(&q(1, 2), &conj).all());
    assert_eq!(obstruction_solve(&conj).exists, Some(false));
    let third = embedding_search(&q(1, 3)).unwrap();
    let ns = third.families.iter().find(|f| !f.standard).unwrap();
    assert_eq!(obstruction_solve(&ns.representative).exists, Some(false));
    // A = diag(1, -1, 1, -1) anticommutes with X_{-a} but is no witness for the standard quadruple.
    let a = Mat::diag(&[q(1, 1), q(-1, 1), q(1, 1), q(-1, 1)]);
    assert!(!is_witness(&st, &a));
}

#[test]
fn classification_examples() {
    let d3 = CanonicalForm::D3 { a: q(1, 1), b: q(2, 1) };
    let c = classify_hamiltonian(&d3.matrix().to_f64()).unwrap();
    assert_eq!(c.case(), 3);
    let p = c.params_f64();
    assert!((p[0].1 - 1.0).abs() < 1e-8 && (p[1].1 - 2.0).abs() < 1e-8);
    let d4 = CanonicalForm::D4 { eps: 1 };
    assert_eq!(classify_hamiltonian(&d4.matrix().to_f64()).unwrap().form, d4);
    let d1 = CanonicalForm::D1 { a1: q(2, 1), a2: q(1, 1) };
    let s = embed(
        &GroupSpec::new(GroupKind::ShearletConn, 2, q(1, 2)).unwrap(),
        &Element::new(q(9, 4), vec![q(1, 2)], vec![q(-1, 1), q(1, 3)]),
    )
    .unwrap();
    let x = s.mul(&d1.matrix()).mul(&s.inverse().unwrap());
    let c = classify_hamiltonian(&x.to_f64()).unwrap();
    assert_eq!(c.case(), 1);
    let p = c.params_f64();
    assert!((p[0].1 - 2.0).abs() < 1e-8 && (p[1].1 - 1.0).abs() < 1e-8);
    assert_eq!(classify_hamiltonian_exact(&x).unwrap().form, d1);
}

fn rat() -> impl Strategy<Value = Q> {
    (-8i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn nonneg() -> impl Strategy<Value = Q> {
    (0i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn form_strategy() -> impl Strategy<Value = CanonicalForm> {
    let sign = prop::sample::select(vec![1, -1]);
    let pos = (1i64..=8, 1i64..=4).prop_map(|(n, d)| q(n, d));
    prop_oneof![
        (nonneg(), nonneg()).prop_map(|(x, y)| if x >= y { CanonicalForm::D1 { a1: x, a2: y } } else { CanonicalForm::D1 { a1: y, a2: x } }),
        pos.clone().prop_map(|a| CanonicalForm::D2 { a }),
        (pos.clone(), pos.clone()).prop_map(|(a, b)| CanonicalForm::D3 { a, b }),
        sign.clone().prop_map(|eps| CanonicalForm::D4 { eps }),
        (nonneg(), nonneg(), sign.clone()).prop_map(|(a, b, eps)| CanonicalForm::D5 { a, b, eps }),
        (nonneg(), nonneg(), prop::sample::select(vec![(1, 1), (1, -1), (-1, -1)]))
            .prop_map(|(x, y, (eps, eta))| if x >= y { CanonicalForm::D6 { b1: x, b2: y, eps, eta } } else { CanonicalForm::D6 { b1: y, b2: x, eps, eta } }),
        (pos, sign).prop_map(|(b, eps)| CanonicalForm::D7 { b, eps }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_agrees_with_matrix_commutator(x in prop::collection::vec(rat(), DIM), y in prop::collection::vec(rat(), DIM)) {
        let (mx, my) = (comb4(&x), comb4(&y));
        prop_assert_eq!(comb4(&bracket(&x, &y)), sub4(&mul4(&mx, &my), &mul4(&my, &mx)));
        prop_assert_eq!(bracket_table(&x, &y), bracket_matrix(&x, &y));
        prop_assert_eq!(bracket(&x, &y), scale(&q(-1, 1), &bracket(&y, &x)));
        prop_assert_eq!(coords(&to_matrix(&x)).unwrap(), x.clone());
        prop_assert!(sym(&to_matrix(&x)).is_zero());
    }

    #[test]
    fn jacobi_identity(x in prop::collection::vec(rat(), DIM), y in prop::collection::vec(rat(), DIM), z in prop::collection::vec(rat(), DIM)) {
        let s = add(&add(&bracket(&x, &bracket(&y, &z)), &bracket(&y, &bracket(&z, &x))), &bracket(&z, &bracket(&x, &y)));
        prop_assert!(is_zero(&s));
    }

    #[test]
    fn closed_form_determinants(form in form_strategy(), g in rat()) {
        let exact = det_m_gamma(&form.coords(), &g);
        prop_assert_eq!(&form.closed_form_det(&g), &exact);
        // Float LU through nalgebra as a second opinion.
        let m = build_m_gamma(&form.coords(), &g).to_f64();
        let lu = DMatrix::from_fn(10, 10, |i, j| m[(i, j)]).determinant();
        let e = q_to_f64(&exact);
        prop_assert!((lu - e).abs() <= 1e-8 * e.abs().max(1.0));
        prop_assert!(sym(&form.matrix()).is_zero());
        prop_assert_eq!(to_matrix(&form.coords()), form.matrix());
    }

    #[test]
    fn rank_nullity(entries in prop::collection::vec(-2i64..=2, 100)) {
        let m = Mat::from_fn(10, 10, |i, j| q(entries[10 * i + j], 1));
        let ker = m.nullspace();
        prop_assert_eq!(m.rank() + ker.len(), 10);
        for k in &ker {
            prop_assert!(m.mul_vec(k).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn phi_scaling_preserves_relations(gi in 0usize..6, u in rat(), z in rat()) {
        prop_assume!(!u.is_zero() && !z.is_zero());
        let gamma = [q(1, 5), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4)][gi].clone();
        let x = phi_scale(&standard_generators(&gamma), &u, &z);
        prop_assert!(check_relations(&gamma, &x).all());
        prop_assert_eq!(obstruction_solve(&x).exists, Some(false));
    }
}
