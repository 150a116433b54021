//! Symplectic matrices and the embeddings of the shearlet groups into `Sp(d, R)`.

use crate::error::{Error, Result};
use crate::groups::{toeplitz_matrix, validate, Element, GroupSpec};
use crate::matrix::Mat;
use crate::scalar::{q, Scalar, Q};

/// `J = [[0, I], [-I, 0]]` of size `2d`.
pub fn j_matrix<S: Scalar>(d: usize) -> Mat<S> {
    Mat::from_fn(2 * d, 2 * d, |i, j| {
        if j == i + d {
            S::one()
        } else if i == j + d {
            -S::one()
        } else {
            S::zero()
        }
    })
}

fn half_dim<S: Scalar>(b: &Mat<S>) -> Result<usize> {
    if !b.is_square() || b.rows() % 2 != 0 {
        return Err(Error::DimensionMismatch(format!("expected an even square matrix, got {}x{}", b.rows(), b.cols())));
    }
    Ok(b.rows() / 2)
}

/// Frobenius norm of `B^T J B - J`.
pub fn symplectic_residual<S: Scalar>(b: &Mat<S>) -> Result<f64> {
    let d = half_dim(b)?;
    let j = j_matrix::<S>(d);
    Ok(b.transpose().mul(&j).mul(b).sub(&j).frobenius())
}

/// Exact test of `B^T J B = J`.
pub fn is_symplectic_exact(b: &Mat<Q>) -> Result<bool> {
    let d = half_dim(b)?;
    let j = j_matrix::<Q>(d);
    Ok(b.transpose().mul(&j).mul(b) == j)
}

/// Fails with [`Error::NonSymplectic`] when the residual exceeds `tol`.
pub fn require_symplectic<S: Scalar>(b: &Mat<S>, tol: f64) -> Result<()> {
    let r = symplectic_residual(b)?;
    if r > tol {
        return Err(Error::NonSymplectic(r));
    }
    Ok(())
}

/// `A~_{a,gamma} = diag(a^{-1/2}, a^{1/2-gamma} I)`.
pub fn a_tilde<S: Scalar>(d: usize, gamma: &Q, a: &S) -> Result<Mat<S>> {
    let first = a.pow_q(&q(-1, 2))?;
    let rest = a.pow_q(&(q(1, 2) - gamma))?;
    let mut diag = vec![rest; d];
    diag[0] = first;
    Ok(Mat::diag(&diag))
}

/// `S~_s = [[1, 0], [-s, I]]`.
pub fn s_tilde<S: Scalar>(s: &[S]) -> Mat<S> {
    let d = s.len() + 1;
    let mut m = Mat::identity(d);
    for (j, sj) in s.iter().enumerate() {
        m[(j + 1, 0)] = -sj.clone();
    }
    m
}

/// `M(s, a) = S~_s A~_{a,gamma}`.
pub fn m_matrix<S: Scalar>(d: usize, gamma: &Q, a: &S, s: &[S]) -> Result<Mat<S>> {
    Ok(s_tilde(s).mul(&a_tilde(d, gamma, a)?))
}

/// `sigma(t) = [[t_1, t~^T/2], [t~/2, 0]]`.
pub fn sigma<S: Scalar>(t: &[S]) -> Mat<S> {
    let d = t.len();
    let half = S::one() / S::from_i64(2);
    let mut m = Mat::zeros(d, d);
    m[(0, 0)] = t[0].clone();
    for j in 1..d {
        m[(0, j)] = half.clone() * t[j].clone();
        m[(j, 0)] = half.clone() * t[j].clone();
    }
    m
}

/// Recovers `t` from a matrix of the form `sigma(t)`.
pub fn sigma_coords<S: Scalar>(m: &Mat<S>) -> Result<Vec<S>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("sigma must be square".into()));
    }
    let d = m.rows();
    for i in 0..d {
        for j in 0..d {
            if m[(i, j)] != m[(j, i)] || (i > 0 && j > 0 && !m[(i, j)].is_zero()) {
                return Err(Error::NotInSpan);
            }
        }
    }
    let mut t = vec![m[(0, 0)].clone()];
    t.extend((1..d).map(|j| S::from_i64(2) * m[(0, j)].clone()));
    Ok(t)
}

/// Tolerant variant of [`sigma_coords`] for floating-point input.
pub fn sigma_coords_tol(m: &Mat<f64>, tol: f64) -> Result<Vec<f64>> {
    let d = m.rows();
    let scale = m.max_abs().max(1.0);
    for i in 0..d {
        for j in 0..d {
            let off = (m[(i, j)] - m[(j, i)]).abs();
            let low = if i > 0 && j > 0 { m[(i, j)].abs() } else { 0.0 };
            if off > tol * scale || low > tol * scale {
                return Err(Error::NotInSpan);
            }
        }
    }
    let mut t = vec![m[(0, 0)]];
    t.extend((1..d).map(|j| m[(0, j)] + m[(j, 0)]));
    Ok(t)
}

/// `[[M, 0], [sigma M, M^{-T}]]`.
pub fn tds_general<S: Scalar>(m: &Mat<S>, sig: &Mat<S>) -> Result<Mat<S>> {
    if !m.is_square() || sig.rows() != m.rows() || !sig.is_square() {
        return Err(Error::DimensionMismatch("M and sigma must be square of equal size".into()));
    }
    let d = m.rows();
    let mit = m.inverse()?.transpose();
    let mut out = Mat::zeros(2 * d, 2 * d);
    out.set_block(0, 0, m);
    out.set_block(d, 0, &sig.mul(m));
    out.set_block(d, d, &mit);
    Ok(out)
}

/// Splits `[[M, 0], [C, M^{-T}]]` into `(M, sigma)` with `sigma = C M^{-1}`.
pub fn tds_split<S: Scalar>(b: &Mat<S>) -> Result<(Mat<S>, Mat<S>)> {
    let d = half_dim(b)?;
    let m = b.block(0, 0, d, d);
    let c = b.block(d, 0, d, d);
    Ok((m.clone(), c.mul(&m.inverse()?)))
}

fn require_positive<S: Scalar>(g: &Element<S>) -> Result<()> {
    if g.a <= S::zero() {
        return Err(Error::InvalidParameter("the embedding is defined for a > 0".into()));
    }
    Ok(())
}

/// Embedding of the connected shearlet group: `[[M, 0], [sigma(t) M, M^{-T}]]`.
pub fn kappa_plus<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Mat<S>> {
    if !spec.kind.is_shearlet() {
        return Err(Error::KindMismatch("kappa_plus expects a shearlet group".into()));
    }
    validate(spec, g)?;
    require_positive(g)?;
    let m = m_matrix(spec.d, &spec.gamma, &g.a, &g.s)?;
    tds_general(&m, &sigma(&g.t))
}

/// Embedding of the connected Toeplitz shearlet group:
/// `[[a^{-1/2} T_s^{-T}, 0], [a^{-1/2} sigma(t) T_s^{-T}, a^{1/2} T_s]]`.
pub fn kappa_plus_toeplitz<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Mat<S>> {
    if !spec.kind.is_toeplitz() {
        return Err(Error::KindMismatch("kappa_plus_toeplitz expects a Toeplitz group".into()));
    }
    validate(spec, g)?;
    require_positive(g)?;
    let d = spec.d;
    let ts = toeplitz_matrix(&g.s);
    let tsit = ts.inverse()?.transpose();
    let am = g.a.pow_q(&q(-1, 2))?;
    let ap = g.a.pow_q(&q(1, 2))?;
    let ul = tsit.scale(&am);
    let mut out = Mat::zeros(2 * d, 2 * d);
    out.set_block(0, 0, &ul);
    out.set_block(d, 0, &sigma(&g.t).mul(&ul));
    out.set_block(d, d, &ts.scale(&ap));
    Ok(out)
}

/// Embedding matching the kind of `spec`.
pub fn embed<S: Scalar>(spec: &GroupSpec, g: &Element<S>) -> Result<Mat<S>> {
    if spec.kind.is_toeplitz() {
        kappa_plus_toeplitz(spec, g)
    } else {
        kappa_plus(spec, g)
    }
}

/// Coordinates of `M^{-T} sigma M^{-1}` in the span of the `sigma(t)`.
pub fn conjugated_sigma<S: Scalar>(m: &Mat<S>, sig: &Mat<S>) -> Result<Vec<S>> {
    let mi = m.inverse()?;
    sigma_coords(&mi.transpose().mul(sig).mul(&mi))
}

/// `t''` with `T_s sigma(t') T_s^T = sigma(t'')`: `(t'_1 + s^T t~', T_{[s]} t~')`.
pub fn toeplitz_sigma_conjugate<S: Scalar>(s: &[S], tp: &[S]) -> Result<Vec<S>> {
    let d = s.len() + 1;
    if tp.len() != d {
        return Err(Error::DimensionMismatch(format!("expected |t'| = {d}")));
    }
    let tt = &tp[1..];
    let first = tp[0].clone() + s.iter().zip(tt).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    let mut out = vec![first];
    out.extend(toeplitz_matrix(&s[..d - 2]).mul_vec(tt));
    Ok(out)
}
