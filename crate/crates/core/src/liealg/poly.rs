//! Univariate polynomials over the rationals.

use crate::scalar::{q, Scalar, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial, coefficients from degree 0 upwards, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|v| Zero::is_zero(v)) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly::new(vec![c])
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: Q, c1: Q) -> Self {
        Poly::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(|| q(0, 1))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let get = |p: &Poly, i: usize| p.0.get(i).cloned().unwrap_or_else(|| q(0, 1));
        Poly::new((0..n).map(|i| get(self, i) + get(o, i)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![q(0, 1); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::new(out)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(q(0, 1), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64, 1)).collect())
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap_or(0);
        let mut r = self.clone();
        let mut quo = vec![q(0, 1); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead() / d.lead();
            let shift = rd - dd;
            quo[shift] = c.clone();
            let mut sub = vec![q(0, 1); shift];
            sub.extend(d.0.iter().map(|v| v * &c));
            r = r.sub(&Poly::new(sub));
        }
        (Poly::new(quo), r)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        Poly::new(self.0.iter().map(|c| c / &l).collect())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Distinct rational roots.
    pub fn rational_roots(&self) -> Vec<Q> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let mut roots = Vec::new();
        if low > 0 {
            roots.push(q(0, 1));
        }
        let ints = &ints[low..];
        if ints.len() <= 1 {
            return roots;
        }
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        for p in divisors(&a0) {
            for d in divisors(&an) {
                for sign in [1, -1] {
                    let cand = Q::new(&p * BigInt::from(sign), d.clone());
                    if !roots.contains(&cand) && Scalar::is_zero(&self.eval(&cand)) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Removes every rational root (with multiplicity).
    pub fn deflate_rational(&self) -> Poly {
        let mut p = self.clone();
        for r in self.rational_roots() {
            let lin = Poly::linear(-r.clone(), q(1, 1));
            loop {
                let (quo, rem) = p.divrem(&lin);
                if !rem.is_zero() || p.degree().unwrap_or(0) == 0 {
                    break;
                }
                p = quo;
            }
        }
        p
    }

    /// Number of distinct real roots by a Sturm sequence.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].divrem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let sign_changes = |signs: Vec<i32>| {
            let nz: Vec<i32> = signs.into_iter().filter(|s| *s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_pos = seq.iter().map(|p| p.lead().sign()).collect();
        let at_neg = seq
            .iter()
            .map(|p| {
                let s = p.lead().sign();
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        sign_changes(at_neg).saturating_sub(sign_changes(at_pos))
    }

    /// True when the polynomial has a real root that is not rational.
    pub fn has_irrational_real_root(&self) -> bool {
        self.deflate_rational().count_real_roots() > 0
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let small = n.to_u64().expect("coefficients stay small in the embedding search");
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= small {
        if small % k == 0 {
            out.push(BigInt::from(k));
            if k * k != small {
                out.push(BigInt::from(small / k));
            }
        }
        k += 1;
    }
    out
}

/// Lie-algebra vector with polynomial coordinates.
pub type PolyVec = Vec<Poly>;

/// `x + y t` as a polynomial vector.
pub fn line(x: &[Q], y: &[Q]) -> PolyVec {
    x.iter().zip(y).map(|(a, b)| Poly::linear(a.clone(), b.clone())).collect()
}

/// Constant polynomial vector.
pub fn constant(x: &[Q]) -> PolyVec {
    x.iter().map(|a| Poly::constant(a.clone())).collect()
}

/// Bracket of polynomial vectors through the structure constants.
pub fn bracket(x: &PolyVec, y: &PolyVec) -> PolyVec {
    let mut out = vec![Poly::zero(); super::basis::DIM];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let prod = xi.mul(yj);
            for &(k, c) in super::basis::TABLE[i][j] {
                out[k] = out[k].add(&prod.scale(&q(c, 1)));
            }
        }
    }
    out
}

/// Evaluates a polynomial vector at `x`.
pub fn eval(v: &PolyVec, x: &Q) -> Vec<Q> {
    v.iter().map(|p| p.eval(x)).collect()
}

pub fn is_zero(v: &PolyVec) -> bool {
    v.iter().all(Poly::is_zero)
}

/// Gcd of all coordinates; zero when the vector vanishes identically.
pub fn gcd_all(v: &[Poly]) -> Poly {
    v.iter().fold(Poly::zero(), |acc, p| acc.gcd(p))
}

/// Determinant of a small square polynomial matrix by cofactor expansion.
pub fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::constant(q(1, 1));
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][c].mul(&det(&minor));
        acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Gcd of all `k x k` minors of a polynomial matrix.
pub fn minors_gcd(m: &[Vec<Poly>], k: usize) -> Poly {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut g = Poly::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<Poly>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
            g = g.gcd(&det(&sub));
            if g.degree() == Some(0) {
                return g;
            }
        }
    }
    g
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
