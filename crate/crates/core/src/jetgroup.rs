//! The jet groups `L^n` of `n`-jets at 0 of diffeomorphisms of `R` fixing 0,
//! their Lie algebras and the exponential map on the nilpotent kernel `K^n`.
//!
//! An element is stored by its derivatives `(y_1, ..., y_n)` at 0. The
//! product is the row vector `xi` times the upper triangular matrix
//! `B(eta)` of Bell polynomials, which is the jet of the composite `xi o eta`.

use std::ops::{Add, Mul};

use num::{BigInt, BigRational, One, Zero};

use crate::jetcalc::{delta_field, VectorField};
use crate::symexpr::Expr;
use crate::{Error, Result};

/// Scalars the Bell-polynomial machinery can run over.
pub trait Scalar: Clone + Add<Output = Self> + Mul<Output = Self> {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn zero() -> Self {
        Self::from_ratio(0, 1)
    }

    /// True only when the value is known to be exactly zero.
    fn is_exact_zero(&self) -> bool;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for Expr {
    fn from_ratio(num: i64, den: i64) -> Self {
        Expr::rational(num, den)
    }

    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

pub(crate) fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Coefficients `0..=n` of `eta(x)^r` where `eta(x) = sum_p eta_p x^p / p!`.
fn series_powers<T: Scalar>(eta: &[T], n: usize) -> Vec<Vec<T>> {
    let mut base = vec![T::zero(); n + 1];
    for (p, e) in eta.iter().enumerate().take(n) {
        base[p + 1] = e.clone() * T::from_ratio(1, factorial(p + 1));
    }
    let mut powers = Vec::with_capacity(n + 1);
    let mut cur = vec![T::zero(); n + 1];
    cur[0] = T::from_ratio(1, 1);
    powers.push(cur.clone());
    for _ in 1..=n {
        let mut next = vec![T::zero(); n + 1];
        for (a, ca) in cur.iter().enumerate() {
            if ca.is_exact_zero() {
                continue;
            }
            for b in 1..=n - a {
                if base[b].is_exact_zero() {
                    continue;
                }
                next[a + b] = next[a + b].clone() + ca.clone() * base[b].clone();
            }
        }
        powers.push(next.clone());
        cur = next;
    }
    powers
}

/// Bell polynomial `B_n^r(eta_1, ..., eta_{n+1-r})`, via truncated power-series powering.
///
/// `eta` may be longer than needed; extra entries are ignored.
pub fn bell<T: Scalar>(n: usize, r: usize, eta: &[T]) -> Result<T> {
    if r < 1 || r > n {
        return Err(Error::InvalidArgument(format!("bell index r={r} outside 1..={n}")));
    }
    if eta.len() < n + 1 - r {
        return Err(Error::InvalidArgument(format!(
            "bell B_{n}^{r} needs {} arguments, got {}",
            n + 1 - r,
            eta.len()
        )));
    }
    let powers = series_powers(&eta[..n + 1 - r], n);
    Ok(powers[r][n].clone() * T::from_ratio(factorial(n), factorial(r)))
}

/// The `n x n` matrix with entry `(p, q)` equal to `B_q^p(eta)` (0-based storage, upper triangular).
pub fn b_matrix<T: Scalar>(n: usize, eta: &[T]) -> Vec<Vec<T>> {
    assert!(eta.len() >= n, "b_matrix needs {n} coordinates");
    let powers = series_powers(&eta[..n], n);
    (1..=n)
        .map(|p| {
            (1..=n)
                .map(|q| {
                    if q < p {
                        T::zero()
                    } else {
                        powers[p][q].clone() * T::from_ratio(factorial(q), factorial(p))
                    }
                })
                .collect()
        })
        .collect()
}

/// Row vector times Bell matrix: the group law on raw coordinates.
pub fn compose<T: Scalar>(xi: &[T], eta: &[T]) -> Vec<T> {
    let n = xi.len();
    assert_eq!(eta.len(), n, "compose needs equal orders");
    let b = b_matrix(n, eta);
    (0..n)
        .map(|q| {
            (0..=q).fold(T::zero(), |acc, p| {
                if b[p][q].is_exact_zero() || xi[p].is_exact_zero() {
                    acc
                } else {
                    acc + xi[p].clone() * b[p][q].clone()
                }
            })
        })
        .collect()
}

/// An element of `L^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct JetGroupElement {
    coords: Vec<f64>,
}

impl JetGroupElement {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        match coords.first() {
            None => Err(Error::InvalidArgument("jet group order must be at least 1".into())),
            Some(&y1) if y1 == 0.0 || !y1.is_finite() => {
                Err(Error::InvalidArgument(format!("first coordinate must be nonzero, got {y1}")))
            }
            _ if coords.iter().any(|c| !c.is_finite()) => {
                Err(Error::InvalidArgument("non-finite coordinate".into()))
            }
            _ => Ok(JetGroupElement { coords }),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut coords = vec![0.0; n];
        coords[0] = 1.0;
        JetGroupElement { coords }
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Whether the element lies in the identity component `L^{n+}`.
    pub fn is_positive(&self) -> bool {
        self.coords[0] > 0.0
    }

    /// Whether the element lies in the kernel `K^n` of the projection to `L^1`.
    pub fn in_kernel(&self) -> bool {
        self.coords[0] == 1.0
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { expected: self.order(), found: other.order() });
        }
        Ok(JetGroupElement { coords: compose(&self.coords, &other.coords) })
    }

    /// Group inverse by forward substitution on the triangular system `xi B(zeta) = e_1`.
    pub fn inv(&self) -> Self {
        let n = self.order();
        let xi = &self.coords;
        let mut zeta = vec![0.0; n];
        zeta[0] = 1.0 / xi[0];
        for q in 2..=n {
            // B_q^p(zeta) for p >= 2 only involves zeta_1..zeta_{q-1}
            let rest: f64 = (2..=q)
                .map(|p| xi[p - 1] * bell(q, p, &zeta[..q + 1 - p]).expect("valid indices"))
                .sum();
            zeta[q - 1] = -rest / xi[0];
        }
        JetGroupElement { coords: zeta }
    }

    /// Truncation to `L^k`, a homomorphism.
    pub fn project(&self, k: usize) -> Result<Self> {
        if k == 0 || k >= self.order() {
            return Err(Error::InvalidArgument(format!(
                "projection order {k} must be in 1..{}",
                self.order()
            )));
        }
        Ok(JetGroupElement { coords: self.coords[..k].to_vec() })
    }

    /// Bell matrix of this element.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        b_matrix(self.order(), &self.coords)
    }

    /// Split `g = embed_l1(g_1) * k` with `k` in `K^n`.
    pub fn split(&self) -> (f64, JetGroupElement) {
        let a = self.coords[0];
        let k = embed_l1(a, self.order()).expect("nonzero").inv().mul(self).expect("same order");
        (a, k)
    }
}

/// The dilation `x -> a x` in `L^n`.
pub fn embed_l1(a: f64, n: usize) -> Result<JetGroupElement> {
    if a == 0.0 {
        return Err(Error::InvalidArgument("dilation factor must be nonzero".into()));
    }
    let mut coords = vec![0.0; n];
    coords[0] = a;
    JetGroupElement::new(coords)
}

/// The Moebius map `x -> a^2 x / (a - b x)` in `L^n`; coordinates `r! b^(r-1) / a^(r-2)`.
pub fn embed_l2(a: f64, b: f64, n: usize) -> Result<JetGroupElement> {
    if a == 0.0 {
        return Err(Error::InvalidArgument("Moebius parameter a must be nonzero".into()));
    }
    let coords = (1..=n)
        .map(|r| factorial(r) as f64 * b.powi(r as i32 - 1) / a.powi(r as i32 - 2))
        .collect();
    JetGroupElement::new(coords)
}

/// An element `sum_r c_r delta^r` of the Lie algebra of `L^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    coeffs: Vec<f64>,
}

impl AlgebraElement {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "algebra order must be at least 1");
        AlgebraElement { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        AlgebraElement { coeffs: vec![0.0; n] }
    }

    /// The basis element `delta^r` (1-based `r`).
    pub fn basis(r: usize, n: usize) -> Self {
        let mut coeffs = vec![0.0; n];
        coeffs[r - 1] = 1.0;
        AlgebraElement { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `delta^r` (1-based).
    pub fn coeff(&self, r: usize) -> f64 {
        self.coeffs[r - 1]
    }

    /// Whether the element lies in the subalgebra of `K^n` (no `delta^1` part).
    pub fn in_kernel_algebra(&self) -> bool {
        self.coeffs[0] == 0.0
    }

    pub fn scale(&self, t: f64) -> Self {
        AlgebraElement { coeffs: self.coeffs.iter().map(|c| c * t).collect() }
    }

    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let n = self.order();
        if other.order() != n {
            return Err(Error::OrderMismatch { expected: n, found: other.order() });
        }
        let mut out = vec![0.0; n];
        for r in 1..=n {
            for s in 1..=n {
                let c = self.coeff(r) * other.coeff(s);
                if c != 0.0 && r + s <= n + 1 {
                    out[r + s - 2] += c * (r as f64 - s as f64);
                }
            }
        }
        Ok(AlgebraElement { coeffs: out })
    }
}

/// `[delta^r, delta^s] = (r - s) delta^(r+s-1)` when `r + s <= n + 1`, else 0.
pub fn algebra_bracket(r: usize, s: usize, n: usize) -> Result<AlgebraElement> {
    if !(1..=n).contains(&r) || !(1..=n).contains(&s) {
        return Err(Error::InvalidArgument(format!("generator indices ({r},{s}) outside 1..={n}")));
    }
    AlgebraElement::basis(r, n).bracket(&AlgebraElement::basis(s, n))
}

/// `delta^r` realised as a vector field on the coordinates `y_1..y_n` of `L^n`
/// (component `y1_s` of the returned field).
pub fn generator_field(r: usize, n: usize) -> VectorField {
    let mut v = delta_field(n, r, 1);
    v.retain_orders(1..=n);
    v
}

/// The strictly lower triangular matrix `K_n` of an element of the kernel algebra.
pub fn k_matrix(kappa: &AlgebraElement) -> Vec<Vec<f64>> {
    let n = kappa.order();
    let mut k = vec![vec![0.0; n]; n];
    for r in 1..=n {
        for s in 1..r {
            k[r - 1][s - 1] = factorial(r) as f64 / factorial(s - 1) as f64 * kappa.coeff(r + 1 - s);
        }
    }
    k
}

/// Exponential of an element of the kernel algebra, as the first column of `exp K_n`.
pub fn exp_k(kappa: &AlgebraElement) -> Result<JetGroupElement> {
    if !kappa.in_kernel_algebra() {
        return Err(Error::InvalidArgument(format!(
            "exp_k needs a zero delta^1 coefficient, got {}",
            kappa.coeff(1)
        )));
    }
    let n = kappa.order();
    let k = k_matrix(kappa);
    let mut term = vec![0.0; n];
    term[0] = 1.0;
    let mut acc = term.clone();
    for j in 1..n {
        let next: Vec<f64> = (0..n)
            .map(|r| (0..r).map(|s| k[r][s] * term[s]).sum::<f64>() / j as f64)
            .collect();
        acc.iter_mut().zip(&next).for_each(|(a, t)| *a += t);
        term = next;
    }
    JetGroupElement::new(acc)
}

/// Inverse of [`exp_k`], one level at a time.
pub fn log_k(y: &JetGroupElement) -> Result<AlgebraElement> {
    if y.coords[0] != 1.0 {
        return Err(Error::InvalidArgument(format!(
            "log_k needs first coordinate 1, got {}",
            y.coords[0]
        )));
    }
    let n = y.order();
    let mut k = vec![0.0; n];
    for j in 2..=n {
        // level j of exp depends on k_j only through the term j! k_j
        let partial = exp_k(&AlgebraElement::new(k[..j].to_vec()))?;
        k[j - 1] = (y.coords[j - 1] - partial.coords[j - 1]) / factorial(j) as f64;
    }
    Ok(AlgebraElement::new(k))
}

/// The map from vector fields `X(x) d/dx` on `R` vanishing at 0 to the algebra of `L^n`;
/// `poly[p]` is the coefficient of `x^p` in `X`.
pub fn phi_map(poly: &[f64], n: usize) -> Result<AlgebraElement> {
    if poly.first().is_some_and(|c| *c != 0.0) {
        return Err(Error::InvalidArgument("vector field must vanish at the origin".into()));
    }
    Ok(AlgebraElement::new((1..=n).map(|p| poly.get(p).copied().unwrap_or(0.0)).collect()))
}

/// Bracket `[X, Y] = X Y' - Y X'` of polynomial vector fields on `R`.
pub fn polynomial_bracket(x: &[f64], y: &[f64]) -> Vec<f64> {
    let deriv = |p: &[f64]| -> Vec<f64> { p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect() };
    let (dx, dy) = (deriv(x), deriv(y));
    let len = (x.len() + y.len()).saturating_sub(1).max(1);
    let mut out = vec![0.0; len];
    for (a, ca) in x.iter().enumerate() {
        for (b, cb) in dy.iter().enumerate() {
            out[a + b] += ca * cb;
        }
    }
    for (a, ca) in y.iter().enumerate() {
        for (b, cb) in dx.iter().enumerate() {
            out[a + b] -= ca * cb;
        }
    }
    out
}

/// Exact Bell polynomial over the rationals.
pub fn bell_exact(n: usize, r: usize, eta: &[BigRational]) -> Result<BigRational> {
    bell(n, r, eta)
}

/// Identity of `L^n` as exact rationals.
pub fn identity_exact(n: usize) -> Vec<BigRational> {
    (0..n).map(|k| if k == 0 { BigRational::one() } else { <BigRational as Zero>::zero() }).collect()
}
