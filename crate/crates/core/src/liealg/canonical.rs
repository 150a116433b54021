//! The seven canonical families of `sp(2, R)` and the matrices `M_Gamma`.

use super::basis::{bracket, combo, unit, SpVec, DIM, H01, H10, X_2AB, X_A, X_AB, X_B, X_N2AB, X_NA, X_NB};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{fmt_q, q, Q};
use serde_json::{json, Value};

/// Canonical normal forms `D_1, ..., D_7` with their parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalForm {
    D1 { a1: Q, a2: Q },
    D2 { a: Q },
    D3 { a: Q, b: Q },
    D4 { eps: i32 },
    D5 { a: Q, b: Q, eps: i32 },
    D6 { b1: Q, b2: Q, eps: i32, eta: i32 },
    D7 { b: Q, eps: i32 },
}

fn unit_sign(e: i32) -> Result<()> {
    if e == 1 || e == -1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("sign {e} is not +-1")))
    }
}

impl CanonicalForm {
    pub fn case(&self) -> u8 {
        match self {
            CanonicalForm::D1 { .. } => 1,
            CanonicalForm::D2 { .. } => 2,
            CanonicalForm::D3 { .. } => 3,
            CanonicalForm::D4 { .. } => 4,
            CanonicalForm::D5 { .. } => 5,
            CanonicalForm::D6 { .. } => 6,
            CanonicalForm::D7 { .. } => 7,
        }
    }

    /// Checks the parameter domain of each family.
    pub fn validate(&self) -> Result<()> {
        let zero = q(0, 1);
        let bad = |m: &str| Err(Error::InvalidParameter(format!("D{}: {m}", self.case())));
        match self {
            CanonicalForm::D1 { a1, a2 } if !(a1 >= a2 && *a2 >= zero) => bad("requires a1 >= a2 >= 0"),
            CanonicalForm::D2 { a } if *a <= zero => bad("requires a > 0"),
            CanonicalForm::D3 { a, b } if *a <= zero || *b <= zero => bad("requires a > 0 and b > 0"),
            CanonicalForm::D4 { eps } => unit_sign(*eps),
            CanonicalForm::D5 { a, b, eps } => {
                if *a < zero || *b < zero {
                    return bad("requires a >= 0 and b >= 0");
                }
                unit_sign(*eps)
            }
            CanonicalForm::D6 { b1, b2, eps, eta } => {
                if *b1 < zero || *b2 < zero {
                    return bad("requires b1, b2 >= 0");
                }
                unit_sign(*eps)?;
                unit_sign(*eta)?;
                if *eps == -1 && *eta == 1 {
                    return bad("(eps, eta) = (-1, 1) is written as (1, -1) with b1, b2 swapped");
                }
                Ok(())
            }
            CanonicalForm::D7 { b, eps } => {
                if *b <= zero {
                    return bad("requires b > 0");
                }
                unit_sign(*eps)
            }
            _ => Ok(()),
        }
    }

    /// Builds case `case` from its rational parameters and signs in declaration order, then validates.
    pub fn from_parts(case: u8, params: &[Q], signs: &[i32]) -> Result<Self> {
        let need = |np: usize, ns: usize| {
            if params.len() != np || signs.len() != ns {
                Err(Error::InvalidParameter(format!(
                    "D{case} takes {np} parameters and {ns} signs, got {} and {}",
                    params.len(),
                    signs.len()
                )))
            } else {
                Ok(())
            }
        };
        let p = |i: usize| params[i].clone();
        let form = match case {
            1 => need(2, 0).map(|_| CanonicalForm::D1 { a1: p(0), a2: p(1) }),
            2 => need(1, 0).map(|_| CanonicalForm::D2 { a: p(0) }),
            3 => need(2, 0).map(|_| CanonicalForm::D3 { a: p(0), b: p(1) }),
            4 => need(0, 1).map(|_| CanonicalForm::D4 { eps: signs[0] }),
            5 => need(2, 1).map(|_| CanonicalForm::D5 { a: p(0), b: p(1), eps: signs[0] }),
            6 => need(2, 2).map(|_| CanonicalForm::D6 { b1: p(0), b2: p(1), eps: signs[0], eta: signs[1] }),
            7 => need(1, 1).map(|_| CanonicalForm::D7 { b: p(0), eps: signs[0] }),
            _ => Err(Error::InvalidParameter(format!("no canonical case {case}"))),
        }?;
        form.validate()?;
        Ok(form)
    }

    /// Explicit 4x4 matrix of the normal form.
    pub fn matrix(&self) -> Mat<Q> {
        let z = || q(0, 1);
        let e = |v: i32| q(v as i64, 1);
        let rows: Vec<Vec<Q>> = match self {
            CanonicalForm::D1 { a1, a2 } => {
                return Mat::diag(&[a1.clone(), a2.clone(), -a1.clone(), -a2.clone()]);
            }
            CanonicalForm::D2 { a } => vec![
                vec![a.clone(), z(), z(), z()],
                vec![e(-1), a.clone(), z(), z()],
                vec![z(), z(), -a.clone(), e(1)],
                vec![z(), z(), z(), -a.clone()],
            ],
            CanonicalForm::D3 { a, b } => vec![
                vec![a.clone(), b.clone(), z(), z()],
                vec![-b.clone(), a.clone(), z(), z()],
                vec![z(), z(), -a.clone(), b.clone()],
                vec![z(), z(), -b.clone(), -a.clone()],
            ],
            CanonicalForm::D4 { eps } => vec![
                vec![z(), z(), z(), e(*eps)],
                vec![e(1), z(), e(*eps), z()],
                vec![e(*eps), z(), z(), e(-1)],
                vec![z(), z(), z(), z()],
            ],
            CanonicalForm::D5 { a, b, eps } => vec![
                vec![z(), z(), e(*eps), z()],
                vec![z(), a.clone(), z(), z()],
                vec![-(b * b * e(*eps)), z(), z(), z()],
                vec![z(), z(), z(), -a.clone()],
            ],
            CanonicalForm::D6 { b1, b2, eps, eta } => vec![
                vec![z(), z(), e(*eps), z()],
                vec![z(), z(), z(), e(*eta)],
                vec![-(b1 * b1 * e(*eps)), z(), z(), z()],
                vec![z(), -(b2 * b2 * e(*eta)), z(), z()],
            ],
            CanonicalForm::D7 { b, eps } => {
                let b2 = b * b;
                vec![
                    vec![z(), e(-1), e(*eps) / &b2, z()],
                    vec![b2.clone(), z(), z(), e(*eps)],
                    vec![z(), z(), z(), -b2.clone()],
                    vec![z(), z(), e(1), z()],
                ]
            }
        };
        Mat::from_rows(rows).expect("square literal")
    }

    /// The normal form as a combination of the root basis.
    pub fn coords(&self) -> SpVec {
        let half = q(1, 2);
        let e = |v: i32| q(v as i64, 1);
        match self {
            CanonicalForm::D1 { a1, a2 } => combo(&[(H10, a1.clone()), (H01, a2.clone())]),
            CanonicalForm::D2 { a } => combo(&[(X_NA, e(1)), (H10, a.clone()), (H01, a.clone())]),
            CanonicalForm::D3 { a, b } => {
                combo(&[(X_A, b.clone()), (X_NA, b.clone()), (H10, a.clone()), (H01, a.clone())])
            }
            CanonicalForm::D4 { eps } => {
                combo(&[(X_AB, e(*eps)), (X_NA, e(-1)), (X_N2AB, -(e(*eps) * &half))])
            }
            CanonicalForm::D5 { a, b, eps } => combo(&[
                (X_2AB, e(*eps) * &half),
                (X_N2AB, b * b * e(*eps) * &half),
                (H01, a.clone()),
            ]),
            CanonicalForm::D6 { b1, b2, eps, eta } => combo(&[
                (X_B, e(*eta)),
                (X_2AB, e(*eps) * &half),
                (X_NB, b2 * b2 * e(*eta)),
                (X_N2AB, b1 * b1 * e(*eps) * &half),
            ]),
            CanonicalForm::D7 { b, eps } => combo(&[
                (X_A, e(-1)),
                (X_B, e(*eps)),
                (X_2AB, e(*eps) / (b * b * e(2))),
                (X_NA, -(b * b)),
            ]),
        }
    }

    /// Named parameters as `"p/q"` strings.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        let s = |v: i32| v.to_string();
        match self {
            CanonicalForm::D1 { a1, a2 } => vec![("a1", fmt_q(a1)), ("a2", fmt_q(a2))],
            CanonicalForm::D2 { a } => vec![("a", fmt_q(a))],
            CanonicalForm::D3 { a, b } => vec![("a", fmt_q(a)), ("b", fmt_q(b))],
            CanonicalForm::D4 { eps } => vec![("eps", s(*eps))],
            CanonicalForm::D5 { a, b, eps } => vec![("a", fmt_q(a)), ("b", fmt_q(b)), ("eps", s(*eps))],
            CanonicalForm::D6 { b1, b2, eps, eta } => {
                vec![("b1", fmt_q(b1)), ("b2", fmt_q(b2)), ("eps", s(*eps)), ("eta", s(*eta))]
            }
            CanonicalForm::D7 { b, eps } => vec![("b", fmt_q(b)), ("eps", s(*eps))],
        }
    }

    pub fn to_json(&self) -> Value {
        let mut p = serde_json::Map::new();
        for (k, v) in self.params() {
            p.insert(k.to_string(), Value::String(v));
        }
        json!({ "case": self.case(), "params": p })
    }

    /// `det M_Gamma` in closed form.
    pub fn closed_form_det(&self, gamma: &Q) -> Q {
        let g = gamma.clone();
        let four = q(4, 1);
        let pw = |x: Q, n: u32| num_traits::pow(x, n as usize);
        match self {
            CanonicalForm::D1 { a1, a2 } => {
                let entries = diag_entries_d1(a1, a2, &g);
                entries.into_iter().fold(q(1, 1), |acc, x| acc * x)
            }
            CanonicalForm::D2 { a } => {
                pw(g.clone(), 4) * pw(&g - q(2, 1) * a, 3) * pw(&g + q(2, 1) * a, 3)
            }
            CanonicalForm::D3 { a, b } => {
                let b2 = &four * b * b;
                pw(g.clone(), 2)
                    * (&g * &g + &b2)
                    * (&g - q(2, 1) * a)
                    * (&g + q(2, 1) * a)
                    * (pw(&g - q(2, 1) * a, 2) + &b2)
                    * (pw(&g + q(2, 1) * a, 2) + &b2)
            }
            CanonicalForm::D4 { .. } => pw(g, 10),
            CanonicalForm::D5 { a, b, .. } => {
                let bb = b * b;
                pw(g.clone(), 2)
                    * (&g - q(2, 1) * a)
                    * (&g + q(2, 1) * a)
                    * (&g * &g + &four * &bb)
                    * (pw(&g - a, 2) + &bb)
                    * (pw(&g + a, 2) + &bb)
            }
            CanonicalForm::D6 { b1, b2, .. } => {
                let g2 = &g * &g;
                pw(g.clone(), 2)
                    * (&g2 + &four * b2 * b2)
                    * (&g2 + &four * b1 * b1)
                    * (&g2 + pw(b1 - b2, 2))
                    * (&g2 + pw(b1 + b2, 2))
            }
            CanonicalForm::D7 { b, .. } => pw(g.clone(), 4) * pw(&g * &g + &four * b * b, 3),
        }
    }
}

/// Diagonal of `M_Gamma` for `D_1(a1, a2)`.
pub fn diag_entries_d1(a1: &Q, a2: &Q, g: &Q) -> Vec<Q> {
    vec![
        a1 - a2 - g,
        q(2, 1) * a2 - g,
        a1 + a2 - g,
        q(2, 1) * a1 - g,
        a2 - a1 - g,
        -(q(2, 1) * a2) - g,
        -a2 - a1 - g,
        -(q(2, 1) * a1) - g,
        -g.clone(),
        -g.clone(),
    ]
}

/// `M_Gamma` with entry `(j, k)` the `B_j`-coefficient of `[D, B_k]` minus `Gamma delta_{jk}`.
pub fn build_m_gamma(d: &[Q], gamma: &Q) -> Mat<Q> {
    let cols: Vec<SpVec> = (0..DIM).map(|k| bracket(d, &unit(k))).collect();
    Mat::from_fn(DIM, DIM, |j, k| {
        let v = cols[k][j].clone();
        if j == k {
            v - gamma
        } else {
            v
        }
    })
}

/// Exact kernel of `M_Gamma`, i.e. solutions of `[D, X] = Gamma X`.
pub fn eigenspace(d: &[Q], gamma: &Q) -> Vec<SpVec> {
    build_m_gamma(d, gamma).nullspace()
}

/// Numerical kernel with singular-value cutoff `1e-10 sigma_max`.
pub fn eigenspace_f64(d: &[Q], gamma: &Q) -> Vec<Vec<f64>> {
    build_m_gamma(d, gamma).to_f64().nullspace_tol(1e-10)
}

/// Exact determinant of `M_Gamma`.
pub fn det_m_gamma(d: &[Q], gamma: &Q) -> Q {
    build_m_gamma(d, gamma).det()
}

