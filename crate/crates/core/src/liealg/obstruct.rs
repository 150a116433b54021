//! Linear obstruction to extending a quadruple by a reflection `A` with `A^2 = I`, `A^T J A = J`.

use super::embed::Quadruple;
use crate::matrix::Mat;
use crate::scalar::{q, Q};
use crate::symplectic::j_matrix;
use serde_json::{json, Value};

/// Solution space of the linear constraints on `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub equations: usize,
    pub rank: usize,
    /// Basis of solutions, each a 4x4 matrix.
    pub basis: Vec<Mat<Q>>,
    /// Columns (1-indexed) vanishing in every solution.
    pub zero_columns: Vec<usize>,
}

impl LinearSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "equations": self.equations,
            "unknowns": 16,
            "rank": self.rank,
            "solution_dim": self.basis.len(),
            "zero_columns": self.zero_columns,
        })
    }
}

/// Result of [`obstruction_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    /// `Some(false)` when a zero-column certificate exists, `None` when undecided.
    pub exists: Option<bool>,
    pub certificate_column: Option<usize>,
    pub full: LinearSolution,
    /// Constraints from `Q`, `T` and `A^T J = J A` alone.
    pub translation_only: LinearSolution,
}

impl ObstructionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "exists": self.exists,
            "certificate": self.certificate_column.map(|c| json!({"zero_column": c})),
            "linear_system": self.full.to_json(),
            "translation_only": self.translation_only.to_json(),
        })
    }
}

/// Rows of `A X - s X A = 0` in the unknowns `A_{ij}` at index `4i + j`.
fn commutation_rows(x: &Mat<Q>, s: i64, rows: &mut Vec<Vec<Q>>) {
    let sq = q(s, 1);
    for i in 0..4 {
        for k in 0..4 {
            let mut r = vec![q(0, 1); 16];
            for j in 0..4 {
                r[4 * i + j] += &x[(j, k)];
                r[4 * j + k] -= &sq * &x[(i, j)];
            }
            rows.push(r);
        }
    }
}

/// Rows of `A^T J - J A = 0`.
fn symmetry_rows(rows: &mut Vec<Vec<Q>>) {
    let jm = j_matrix::<Q>(2);
    for i in 0..4 {
        for k in 0..4 {
            let mut r = vec![q(0, 1); 16];
            for j in 0..4 {
                r[4 * j + i] += &jm[(j, k)];
                r[4 * j + k] -= &jm[(i, j)];
            }
            rows.push(r);
        }
    }
}

fn solve(rows: Vec<Vec<Q>>) -> LinearSolution {
    let equations = rows.len();
    let m = Mat::from_rows(rows).expect("16 columns");
    let rank = m.rank();
    let basis: Vec<Mat<Q>> = m.nullspace().into_iter().map(|v| Mat::from_fn(4, 4, |i, j| v[4 * i + j].clone())).collect();
    let zero_columns =
        (0..4).filter(|&c| basis.iter().all(|a| (0..4).all(|r| a[(r, c)] == q(0, 1)))).map(|c| c + 1).collect();
    LinearSolution { equations, rank, basis, zero_columns }
}

/// Solves `AD = DA`, `AP = PA`, `AQ = -QA`, `AT = -TA`, `A^T J = J A` exactly.
pub fn obstruction_solve(x: &Quadruple) -> ObstructionReport {
    let [d, p, qm, t] = x.matrices();
    let mut rows = Vec::new();
    commutation_rows(&d, 1, &mut rows);
    commutation_rows(&p, 1, &mut rows);
    commutation_rows(&qm, -1, &mut rows);
    commutation_rows(&t, -1, &mut rows);
    symmetry_rows(&mut rows);
    let full = solve(rows);
    let mut rows = Vec::new();
    commutation_rows(&qm, -1, &mut rows);
    commutation_rows(&t, -1, &mut rows);
    symmetry_rows(&mut rows);
    let translation_only = solve(rows);
    let certificate_column = full.zero_columns.first().copied();
    let exists = certificate_column.map(|_| false);
    ObstructionReport { exists, certificate_column, full, translation_only }
}

/// Whether `A` satisfies every constraint, including `A^2 = I` and `A^T J A = J`.
pub fn is_witness(x: &Quadruple, a: &Mat<Q>) -> bool {
    let [d, p, qm, t] = x.matrices();
    let jm = j_matrix::<Q>(2);
    a.mul(&d) == d.mul(a)
        && a.mul(&p) == p.mul(a)
        && a.mul(&qm) == qm.mul(a).neg()
        && a.mul(&t) == t.mul(a).neg()
        && a.mul(a) == Mat::identity(4)
        && a.transpose().mul(&jm).mul(a) == jm
}

