//! Root basis of `sp(2, R)`, coordinates and structure constants.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{q, Scalar, Q};
use serde::Serialize;

/// Dimension of `sp(2, R)`.
pub const DIM: usize = 10;

/// Coordinates in the ordered basis `B`.
pub type SpVec = Vec<Q>;

/// Display names of the basis elements in order.
pub const NAMES: [&str; DIM] =
    ["X_a", "X_b", "X_a+b", "X_2a+b", "X_-a", "X_-b", "X_-a-b", "X_-2a-b", "H_1,0", "H_0,1"];

pub const X_A: usize = 0;
pub const X_B: usize = 1;
pub const X_AB: usize = 2;
pub const X_2AB: usize = 3;
pub const X_NA: usize = 4;
pub const X_NB: usize = 5;
pub const X_NAB: usize = 6;
pub const X_N2AB: usize = 7;
pub const H10: usize = 8;
pub const H01: usize = 9;

/// The zero vector.
pub fn zero() -> SpVec {
    vec![q(0, 1); DIM]
}

/// Unit vector of basis element `k`.
pub fn unit(k: usize) -> SpVec {
    let mut v = zero();
    v[k] = q(1, 1);
    v
}

/// Sparse combination `sum c_k B_k` from `(k, c_k)` pairs.
pub fn combo(terms: &[(usize, Q)]) -> SpVec {
    let mut v = zero();
    for (k, c) in terms {
        v[*k] = v[*k].clone() + c.clone();
    }
    v
}

pub fn add(x: &[Q], y: &[Q]) -> SpVec {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[Q], y: &[Q]) -> SpVec {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn scale(c: &Q, x: &[Q]) -> SpVec {
    x.iter().map(|a| c * a).collect()
}

pub fn is_zero(x: &[Q]) -> bool {
    x.iter().all(Scalar::is_zero)
}

/// `H_{a,b} = diag(a, b, -a, -b)` as coordinates.
pub fn h(a: Q, b: Q) -> SpVec {
    combo(&[(H10, a), (H01, b)])
}

/// Integer 4x4 matrix of basis element `k`.
pub fn basis_matrix(k: usize) -> Mat<Q> {
    let mut m = Mat::zeros(4, 4);
    let mut set = |i: usize, j: usize, v: i64| m[(i - 1, j - 1)] = q(v, 1);
    match k {
        X_A => {
            set(1, 2, 1);
            set(4, 3, -1);
        }
        X_B => set(2, 4, 1),
        X_AB => {
            set(1, 4, 1);
            set(2, 3, 1);
        }
        X_2AB => set(1, 3, 2),
        X_NA => {
            set(2, 1, -1);
            set(3, 4, 1);
        }
        X_NB => set(4, 2, -1),
        X_NAB => {
            set(4, 1, -1);
            set(3, 2, -1);
        }
        X_N2AB => set(3, 1, -2),
        H10 => {
            set(1, 1, 1);
            set(3, 3, -1);
        }
        H01 => {
            set(2, 2, 1);
            set(4, 4, -1);
        }
        _ => panic!("basis index {k} out of range"),
    }
    m
}

/// Matrix of a coordinate vector.
pub fn to_matrix(x: &[Q]) -> Mat<Q> {
    let mut m = Mat::zeros(4, 4);
    for (k, c) in x.iter().enumerate() {
        if !c.is_zero() {
            m = m.add(&basis_matrix(k).scale(c));
        }
    }
    m
}

/// Coordinates of a Hamiltonian 4x4 matrix.
pub fn coords(m: &Mat<Q>) -> Result<SpVec> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch("sp(2,R) elements are 4x4".into()));
    }
    let half = q(1, 2);
    let v = vec![
        m[(0, 1)].clone(),
        m[(1, 3)].clone(),
        m[(0, 3)].clone(),
        &m[(0, 2)] * &half,
        -m[(1, 0)].clone(),
        -m[(3, 1)].clone(),
        -m[(3, 0)].clone(),
        -(&m[(2, 0)] * &half),
        m[(0, 0)].clone(),
        m[(1, 1)].clone(),
    ];
    if to_matrix(&v) != *m {
        return Err(Error::NotHamiltonian);
    }
    Ok(v)
}

/// Float coordinates of a Hamiltonian matrix, with entrywise tolerance `tol` relative to the largest entry.
pub fn coords_f64(m: &Mat<f64>, tol: f64) -> Result<Vec<f64>> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch("sp(2,R) elements are 4x4".into()));
    }
    let v = vec![
        m[(0, 1)],
        m[(1, 3)],
        m[(0, 3)],
        m[(0, 2)] / 2.0,
        -m[(1, 0)],
        -m[(3, 1)],
        -m[(3, 0)],
        -m[(2, 0)] / 2.0,
        m[(0, 0)],
        m[(1, 1)],
    ];
    let mut rebuilt = Mat::<f64>::zeros(4, 4);
    for (k, c) in v.iter().enumerate() {
        rebuilt = rebuilt.add(&basis_matrix(k).to_f64().scale(c));
    }
    if rebuilt.sub(m).max_abs() > tol * m.max_abs().max(1.0) {
        return Err(Error::NotHamiltonian);
    }
    Ok(v)
}

/// Bracket through 4x4 matrix commutators.
pub fn bracket_matrix(x: &[Q], y: &[Q]) -> SpVec {
    coords(&to_matrix(x).commutator(&to_matrix(y))).expect("commutator of Hamiltonian matrices is Hamiltonian")
}

type Entry = &'static [(usize, i64)];

/// Structure constants `[B_i, B_j]` as sparse integer combinations.
pub const TABLE: [[Entry; DIM]; DIM] = [
    [&[], &[(X_AB, 1)], &[(X_2AB, 1)], &[], &[(H10, -1), (H01, 1)], &[], &[(X_NB, -2)], &[(X_NAB, -2)], &[(X_A, -1)], &[(X_A, 1)]],
    [&[(X_AB, -1)], &[], &[], &[], &[], &[(H01, -1)], &[(X_NA, 1)], &[], &[], &[(X_B, -2)]],
    [
        &[(X_2AB, -1)],
        &[],
        &[],
        &[],
        &[(X_B, 2)],
        &[(X_A, -1)],
        &[(H10, -1), (H01, -1)],
        &[(X_NA, 2)],
        &[(X_AB, -1)],
        &[(X_AB, -1)],
    ],
    [&[], &[], &[], &[], &[(X_AB, 2)], &[], &[(X_A, -2)], &[(H10, -4)], &[(X_2AB, -2)], &[]],
    [
        &[(H10, 1), (H01, -1)],
        &[],
        &[(X_B, -2)],
        &[(X_AB, -2)],
        &[],
        &[(X_NAB, 1)],
        &[(X_N2AB, 1)],
        &[],
        &[(X_NA, 1)],
        &[(X_NA, -1)],
    ],
    [&[], &[(H01, 1)], &[(X_A, 1)], &[], &[(X_NAB, -1)], &[], &[], &[], &[], &[(X_NB, 2)]],
    [
        &[(X_NB, 2)],
        &[(X_NA, -1)],
        &[(H10, 1), (H01, 1)],
        &[(X_A, 2)],
        &[(X_N2AB, -1)],
        &[],
        &[],
        &[],
        &[(X_NAB, 1)],
        &[(X_NAB, 1)],
    ],
    [&[(X_NAB, 2)], &[], &[(X_NA, -2)], &[(H10, 4)], &[], &[], &[], &[], &[(X_N2AB, 2)], &[]],
    [&[(X_A, 1)], &[], &[(X_AB, 1)], &[(X_2AB, 2)], &[(X_NA, -1)], &[], &[(X_NAB, -1)], &[(X_N2AB, -2)], &[], &[]],
    [&[(X_A, -1)], &[(X_B, 2)], &[(X_AB, 1)], &[], &[(X_NA, 1)], &[(X_NB, -2)], &[(X_NAB, -1)], &[], &[], &[]],
];

/// Table entry `[B_i, B_j]` as coordinates.
pub fn table_entry(i: usize, j: usize) -> SpVec {
    let terms: Vec<(usize, Q)> = TABLE[i][j].iter().map(|&(k, c)| (k, q(c, 1))).collect();
    combo(&terms)
}

/// Bracket through the bilinear extension of the structure constants.
pub fn bracket_table(x: &[Q], y: &[Q]) -> SpVec {
    let mut out = zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let c = xi * yj;
            for &(k, v) in TABLE[i][j] {
                out[k] = &out[k] + &c * q(v, 1);
            }
        }
    }
    out
}

/// Default bracket.
pub fn bracket(x: &[Q], y: &[Q]) -> SpVec {
    bracket_table(x, y)
}

/// One disagreement between the table and the matrix commutator.
#[derive(Clone, Debug, Serialize)]
pub struct TableMismatch {
    pub i: usize,
    pub j: usize,
    pub table: Vec<String>,
    pub matrix: Vec<String>,
}

/// Outcome of the structure-constant verification.
#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub entries_checked: usize,
    pub mismatches: Vec<TableMismatch>,
    pub antisymmetry_violations: usize,
    pub jacobi_triples_checked: usize,
    pub jacobi_violations: usize,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.antisymmetry_violations == 0 && self.jacobi_violations == 0
    }
}

/// Compares all 100 table entries with integer commutators and checks antisymmetry and Jacobi.
pub fn table_verify() -> TableReport {
    let fmt = |v: &SpVec| v.iter().map(crate::scalar::fmt_q).collect::<Vec<_>>();
    let mut mismatches = Vec::new();
    let mut anti = 0;
    for i in 0..DIM {
        for j in 0..DIM {
            let t = table_entry(i, j);
            let m = bracket_matrix(&unit(i), &unit(j));
            if t != m {
                mismatches.push(TableMismatch { i, j, table: fmt(&t), matrix: fmt(&m) });
            }
            if add(&t, &table_entry(j, i)) != zero() {
                anti += 1;
            }
        }
    }
    let mut jac = 0;
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let (x, y, z) = (unit(i), unit(j), unit(k));
                let s = add(
                    &add(&bracket_table(&x, &bracket_table(&y, &z)), &bracket_table(&y, &bracket_table(&z, &x))),
                    &bracket_table(&z, &bracket_table(&x, &y)),
                );
                if !is_zero(&s) {
                    jac += 1;
                }
            }
        }
    }
    TableReport {
        entries_checked: DIM * DIM,
        mismatches,
        antisymmetry_violations: anti,
        jacobi_triples_checked: DIM * DIM * DIM,
        jacobi_violations: jac,
    }
}

/// Renders a coordinate vector as `c*B_k + ...`.
pub fn describe(x: &[Q]) -> String {
    let terms: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("{}*{}", crate::scalar::fmt_q(c), NAMES[k]))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
