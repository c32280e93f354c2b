//! Homogeneity of differential equation fields.
//!
//! A field `y^i_{n+1} = Gamma^i(y_0, ..., y_n)` on `T^n R^m` is homogeneous
//! when `Gamma` together with the fundamental fields `Delta^r` spans an
//! involutive distribution. In coordinates this means there are functions
//! `lambda^r` with
//!
//! ```text
//! Delta^1(Gamma^i) = (n+1) Gamma^i + n! lambda^1 y^i_1
//! Delta^r(Gamma^i) = (n+1)!/(n+1-r)! y^i_{n+2-r} + n! lambda^r y^i_1     (r >= 2)
//! ```
//!
//! This module extracts the `lambda^r`, checks their consistency relations,
//! compares fields up to projective equivalence, transports fields by the
//! jet group and normalises a homogeneous field to a generalized spray.

use std::collections::BTreeMap;

use crate::jetcalc::{act, act_rows, apply_vf, delta_field, vf_bracket, JetPoint, VectorField};
use crate::jetgroup::{embed_l1, exp_k, factorial, AlgebraElement, JetGroupElement};
use crate::symexpr::{
    dot, equal_prob_pairs, parse, subst, zero_prob, Expr, SampleConfig, Sampler, Tape, Var,
};
use crate::{Error, Result};

/// An order-`(n+1)` differential equation field on `T^n R^m`.
#[derive(Debug, Clone)]
pub struct DEField {
    m: usize,
    n: usize,
    gamma: Vec<Expr>,
}

impl DEField {
    pub fn new(m: usize, n: usize, gamma: Vec<Expr>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!("need m >= 1 and n >= 1, got m={m}, n={n}")));
        }
        if gamma.len() != m {
            return Err(Error::InvalidArgument(format!("expected {m} components, got {}", gamma.len())));
        }
        for g in &gamma {
            let (mi, ni) = g.dims();
            if mi > m || ni > n {
                return Err(Error::InvalidArgument(format!(
                    "component {g} uses coordinates outside m={m}, order {n}"
                )));
            }
        }
        Ok(DEField { m, n, gamma })
    }

    /// Parse one expression per component.
    pub fn parse<S: AsRef<str>>(m: usize, n: usize, components: &[S]) -> Result<Self> {
        let gamma = components
            .iter()
            .map(|s| parse(s.as_ref(), m, n))
            .collect::<Result<Vec<_>>>()?;
        DEField::new(m, n, gamma)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Order of the base jet space; the equations have order `n + 1`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Expr] {
        &self.gamma
    }

    pub fn component(&self, i: usize) -> &Expr {
        &self.gamma[i - 1]
    }

    /// The field as a vector field `sum y^i_{r+1} d/dy^i_r + Gamma^i d/dy^i_n` on `T^n`.
    pub fn vector_field(&self) -> VectorField {
        let mut v = VectorField::new(self.m, self.n);
        for i in 1..=self.m as u32 {
            for r in 0..self.n as u32 {
                v.set(i, r, Expr::var(i, r + 1));
            }
            v.set(i, self.n as u32, self.gamma[i as usize - 1].clone());
        }
        v
    }

    pub fn tape(&self) -> Tape {
        Tape::compile(&self.gamma, self.m)
    }

    /// Values of `Gamma^i` at a point of `T^n` (or higher).
    pub fn eval(&self, p: &JetPoint) -> Result<Vec<f64>> {
        Ok(self.tape().eval_vec(p.coords())?)
    }

    pub fn map(&self, f: impl Fn(usize, &Expr) -> Expr) -> DEField {
        let gamma = self.gamma.iter().enumerate().map(|(k, g)| f(k + 1, g)).collect();
        DEField { m: self.m, n: self.n, gamma }
    }
}

/// The term of `Delta^r(Gamma^i)` forced by the field being an equation field.
fn forced_term(gamma: &Expr, i: u32, n: usize, r: usize) -> Expr {
    if r == 1 {
        Expr::int(n as i64 + 1) * gamma
    } else {
        let c = factorial(n + 1) / factorial(n + 1 - r);
        Expr::int(c) * Expr::var(i, (n + 2 - r) as u32)
    }
}

/// `sum_i y^i_1 v^i / |y_1|^2`, the coefficient of `y_1` in a vector `v`.
fn y1_coefficient(m: usize, v: &[Expr]) -> Expr {
    let num = Expr::sum(v.iter().enumerate().map(|(k, e)| Expr::var(k as u32 + 1, 1) * e));
    num * dot(m as u32, 1, 1).recip()
}

/// Result of a homogeneity analysis.
#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    pub homogeneous: bool,
    /// `lambda^1, ..., lambda^n`.
    pub lambda: Vec<Expr>,
    /// Largest disagreement between components (`lambda^r` must not depend on `i`).
    pub component_residual: f64,
    pub consistency: Vec<ConsistencyResidual>,
    pub tolerance: f64,
}

impl HomogeneityReport {
    pub fn max_consistency_residual(&self) -> f64 {
        self.consistency.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Residual of one consistency relation between the `lambda^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyResidual {
    /// 1: `Delta^1 lambda^r - Delta^r lambda^1`; 2: `r+s <= n+1`; 3: `r+s = n+2`; 4: `r+s > n+2`.
    pub family: u8,
    pub r: usize,
    pub s: usize,
    pub residual: f64,
}

/// Extract the `lambda^r` of a field and decide whether it is homogeneous.
///
/// Each `lambda^r` is the coefficient of `y_1` in `Delta^r(Gamma) - forced`,
/// obtained by projection; homogeneity requires the remainder to vanish in
/// every component and the consistency relations to hold.
pub fn lambda_extract(field: &DEField, cfg: &SampleConfig) -> Result<HomogeneityReport> {
    let (m, n) = (field.m, field.n);
    let nf = Expr::int(factorial(n));
    let mut lambda = Vec::with_capacity(n);
    let mut pairs = Vec::new();
    for r in 1..=n {
        let delta = delta_field(n, r, m);
        let diffs: Vec<Expr> = field
            .gamma
            .iter()
            .enumerate()
            .map(|(k, g)| apply_vf(&delta, g) - forced_term(g, k as u32 + 1, n, r))
            .collect();
        let lam = y1_coefficient(m, &diffs) * nf.recip();
        for (k, d) in diffs.iter().enumerate() {
            pairs.push((d.clone(), &nf * &lam * Expr::var(k as u32 + 1, 1)));
        }
        lambda.push(lam);
    }
    let component_residual = equal_prob_pairs(&pairs, m, n, cfg).max_residual;
    let lambda: Vec<Expr> = lambda
        .into_iter()
        .map(|l| {
            if zero_prob(std::slice::from_ref(&l), m, n, &cfg.clone().with_tolerance(1e-13)).equal {
                Expr::zero()
            } else {
                l
            }
        })
        .collect();
    let consistency = consistency_check(&lambda, m, n, cfg);
    let homogeneous = component_residual <= cfg.tolerance
        && consistency.iter().all(|c| c.residual <= cfg.tolerance);
    Ok(HomogeneityReport {
        homogeneous,
        lambda,
        component_residual,
        consistency,
        tolerance: cfg.tolerance,
    })
}

/// Check the relations the `lambda^r` of a homogeneous field must satisfy.
pub fn consistency_check(lambda: &[Expr], m: usize, n: usize, cfg: &SampleConfig) -> Vec<ConsistencyResidual> {
    assert_eq!(lambda.len(), n, "need lambda^1..lambda^n");
    let deltas: Vec<VectorField> = (1..=n).map(|r| delta_field(n, r, m)).collect();
    let lam = |r: usize| &lambda[r - 1];
    let d = |r: usize, e: &Expr| apply_vf(&deltas[r - 1], e);
    let mut out = Vec::new();
    let mut check = |family: u8, r: usize, s: usize, lhs: Expr, rhs: Expr| {
        let residual = equal_prob_pairs(&[(lhs, rhs)], m, n, cfg).max_residual;
        out.push(ConsistencyResidual { family, r, s, residual });
    };
    for r in 2..=n {
        let lhs = d(1, lam(r)) - d(r, lam(1));
        check(1, 1, r, lhs, Expr::int((n + 1 - r) as i64) * lam(r));
    }
    for r in 2..=n {
        for s in r + 1..=n {
            let lhs = d(r, lam(s)) - d(s, lam(r));
            let diff = r as i64 - s as i64;
            let (family, rhs) = if r + s <= n + 1 {
                (2, Expr::int(diff) * lam(r + s - 1))
            } else if r + s == n + 2 {
                (3, Expr::int(-(n as i64 + 1) * diff))
            } else {
                (4, Expr::zero())
            };
            check(family, r, s, lhs, rhs);
        }
    }
    out
}

/// Residuals of the bracket relations `[Delta^1, Gamma] = Gamma + lambda^1 Delta^n`
/// and `[Delta^r, Gamma] = r Delta^{r-1} + lambda^r Delta^n`, one per `r`.
pub fn bracket_check(field: &DEField, lambda: &[Expr], cfg: &SampleConfig) -> Vec<f64> {
    let (m, n) = (field.m, field.n);
    let gamma = field.vector_field();
    let delta_n = delta_field(n, n, m);
    (1..=n)
        .map(|r| {
            let lhs = vf_bracket(&delta_field(n, r, m), &gamma);
            let base = if r == 1 {
                gamma.clone()
            } else {
                delta_field(n, r - 1, m).scale(&Expr::int(r as i64))
            };
            let rhs = base.add(&delta_n.scale(&lambda[r - 1]));
            equal_prob_pairs(&lhs.component_pairs(&rhs), m, n, cfg).max_residual
        })
        .collect()
}

/// `Gamma + mu Delta^n`, i.e. `Gamma^i + n! mu y^i_1`.
pub fn projective_shift(field: &DEField, mu: &Expr) -> DEField {
    let c = Expr::int(factorial(field.n)) * mu;
    field.map(|i, g| g + &c * Expr::var(i as u32, 1))
}

/// Outcome of comparing two fields up to projective equivalence.
#[derive(Debug, Clone)]
pub struct ProjectiveComparison {
    pub equivalent: bool,
    pub homogeneous: (bool, bool),
    /// The candidate `mu` with `Gamma' - Gamma = mu Delta^n`.
    pub mu: Expr,
    /// How far `Gamma' - Gamma` is from a multiple of `Delta^n`.
    pub residual: f64,
    /// `mu` at the first few sample points.
    pub mu_samples: Vec<f64>,
}

pub fn are_proj_equivalent(a: &DEField, b: &DEField, cfg: &SampleConfig) -> Result<ProjectiveComparison> {
    if a.n != b.n {
        return Err(Error::OrderMismatch { expected: a.n, found: b.n });
    }
    if a.m != b.m {
        return Err(Error::InvalidArgument(format!("dimension mismatch: {} vs {}", a.m, b.m)));
    }
    let (m, n) = (a.m, a.n);
    let ha = lambda_extract(a, cfg)?.homogeneous;
    let hb = lambda_extract(b, cfg)?.homogeneous;
    let diffs: Vec<Expr> = b.gamma.iter().zip(&a.gamma).map(|(x, y)| x - y).collect();
    let nf = Expr::int(factorial(n));
    let mu = y1_coefficient(m, &diffs) * nf.recip();
    let pairs: Vec<(Expr, Expr)> = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| (d.clone(), &nf * &mu * Expr::var(k as u32 + 1, 1)))
        .collect();
    let residual = equal_prob_pairs(&pairs, m, n, cfg).max_residual;
    let tape = Tape::compile(std::slice::from_ref(&mu), m);
    let mut sampler = Sampler::new(cfg);
    let mu_samples = (0..cfg.count.min(5))
        .filter_map(|_| tape.eval_vec(sampler.point(m, n).coords()).ok().map(|v| v[0]))
        .collect();
    Ok(ProjectiveComparison {
        equivalent: ha && hb && residual <= cfg.tolerance,
        homogeneous: (ha, hb),
        mu,
        residual,
        mu_samples,
    })
}

fn symbolic_rows(m: usize, n: usize) -> Vec<Vec<Expr>> {
    (0..=n as u32)
        .map(|r| (1..=m as u32).map(|i| Expr::var(i, r)).collect())
        .collect()
}

/// Transport a field by a jet-group element of order `n + 1`.
///
/// Moves the point by the order-`n` part of `phi`, evaluates the field there,
/// and brings the resulting `(n+1)`-jet back with `phi^{-1}`; the new field is
/// the top row. With the right action, `(Gamma_a)_b = Gamma_{b a}`.
pub fn group_transform(field: &DEField, phi: &JetGroupElement) -> Result<DEField> {
    let (m, n) = (field.m, field.n);
    if phi.order() != n + 1 {
        return Err(Error::OrderMismatch { expected: n + 1, found: phi.order() });
    }
    if !phi.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "group element must have positive first coordinate, got {}",
            phi.coords()[0]
        )));
    }
    let to_expr = |g: &JetGroupElement| g.coords().iter().map(|&c| Expr::from_f64(c)).collect::<Vec<_>>();
    let inner = to_expr(&phi.project(n)?);
    let moved = act_rows(&inner, &symbolic_rows(m, n));
    let bindings: BTreeMap<Var, Expr> = moved
        .iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(move |(k, e)| (Var::new(k as u32 + 1, r as u32), e.clone()))
        })
        .collect();
    let mut rows = moved.clone();
    rows.push(field.gamma.iter().map(|g| subst(g, &bindings)).collect());
    let back = act_rows(&to_expr(&phi.inv()), &rows);
    DEField::new(m, n, back[n + 1].clone())
}

/// Settings for the adaptive Simpson rule used by [`SprayNormalizer`].
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    pub tolerance: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { tolerance: 1e-12, max_depth: 40 }
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` (either orientation).
pub fn adaptive_simpson(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (fa, fb) = (f(a)?, f(b)?);
    let c = 0.5 * (a + b);
    let fc = f(c)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fc, fb, whole, cfg.tolerance.max(f64::EPSILON), cfg.max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &mut dyn FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fc: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d)?, f(e)?);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "no convergence on [{a}, {b}] (error estimate {:e})",
            delta.abs() / 15.0
        )));
    }
    Ok(simpson_step(f, a, c, fa, fd, fc, left, tol / 2.0, depth - 1)?
        + simpson_step(f, c, b, fc, fe, fb, right, tol / 2.0, depth - 1)?)
}

/// Pointwise construction of `mu` with `Gamma = Gamma_hat + mu Delta^n`
/// satisfying `[Delta^1, Gamma] = Gamma` and `[Delta^2, Gamma] = 2 Delta^1`.
///
/// `mu` solves `Delta^1(mu) - n mu = -lambda^1` and, on `|y_1| = 1`,
/// `Delta^2(mu) = -lambda^2`, with `mu = 0` on `|y_1| = 1, y_1 . y_2 = 0`.
/// Both equations are integrated along the explicit flows of `Delta^1`
/// (dilation) and `Delta^2` (`exp(t delta^2)`).
#[derive(Debug, Clone)]
pub struct SprayNormalizer {
    field: DEField,
    lambda: Tape,
    quad: QuadratureConfig,
}

impl SprayNormalizer {
    pub fn new(field: &DEField, cfg: &SampleConfig, quad: &QuadratureConfig) -> Result<Self> {
        if field.n < 2 {
            return Err(Error::InvalidArgument("spray normalisation needs n >= 2".into()));
        }
        let report = lambda_extract(field, cfg)?;
        if !report.homogeneous {
            return Err(Error::InvalidArgument(format!(
                "field is not homogeneous (component residual {:e})",
                report.component_residual
            )));
        }
        Ok(SprayNormalizer {
            field: field.clone(),
            lambda: Tape::compile(&report.lambda[..2], field.m),
            quad: quad.clone(),
        })
    }

    fn lambda_at(&self, p: &JetPoint, k: usize) -> Result<f64> {
        Ok(self.lambda.eval_vec(p.coords())?[k])
    }

    /// Flow of `Delta^1` for time `t`: `y_r -> e^{r t} y_r`.
    pub fn dilation_flow(&self, p: &JetPoint, t: f64) -> Result<JetPoint> {
        act(&embed_l1(t.exp(), p.order())?, p)
    }

    /// Flow of `Delta^2` for time `t`.
    pub fn delta2_flow(&self, p: &JetPoint, t: f64) -> Result<JetPoint> {
        let mut c = vec![0.0; p.order()];
        c[1] = t;
        act(&exp_k(&AlgebraElement::new(c))?, p)
    }

    /// The value of `mu` at `p`.
    pub fn mu(&self, p: &JetPoint) -> Result<f64> {
        p.require_slit()?;
        let n = self.field.n;
        let p = p.truncate(n);
        let tau = p.row_norm(1).ln();
        let q = self.dilation_flow(&p, -tau)?;
        // inside |y_1| = 1: move to y_1 . y_2 = 0 along Delta^2
        let t_star = -q.dot(1, 2) / (2.0 * q.dot(1, 1));
        let z = self.delta2_flow(&q, t_star)?;
        let mu_q = -adaptive_simpson(
            &mut |s| self.lambda_at(&self.delta2_flow(&z, s)?, 1),
            0.0,
            -t_star,
            &self.quad,
        )?;
        let nf = n as f64;
        let source = adaptive_simpson(
            &mut |s| Ok((-nf * s).exp() * self.lambda_at(&self.dilation_flow(&q, s)?, 0)?),
            0.0,
            tau,
            &self.quad,
        )?;
        Ok((nf * tau).exp() * (mu_q - source))
    }

    /// Components of the normalised field at `p`.
    pub fn normalized_at(&self, p: &JetPoint) -> Result<Vec<f64>> {
        let mu = self.mu(p)?;
        let c = factorial(self.field.n) as f64 * mu;
        let mut g = self.field.eval(p)?;
        g.iter_mut().zip(p.row(1)).for_each(|(x, y)| *x += c * y);
        Ok(g)
    }
}

/// `mu` at a single point; see [`SprayNormalizer`].
pub fn spray_normalize(field: &DEField, p: &JetPoint, quad: &QuadratureConfig) -> Result<f64> {
    SprayNormalizer::new(field, &SampleConfig::default(), quad)?.mu(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{equal_prob, sample_point};
    use crate::systems;

    #[test]
    fn circle_lambdas_vanish() {
        let rep = lambda_extract(&systems::circle(2), &SampleConfig::default()).unwrap();
        assert!(rep.homogeneous);
        assert!(rep.lambda.iter().all(Expr::is_zero));
        assert!(rep.max_consistency_residual() < 1e-9);
    }

    #[test]
    fn simpler_circle_lambdas() {
        let cfg = SampleConfig::default();
        let rep = lambda_extract(&systems::circle_simple(3), &cfg).unwrap();
        assert!(rep.homogeneous);
        assert!(rep.lambda[0].is_zero());
        // derived from the coordinate conditions with the n! normalisation
        let expected = Expr::int(3) * dot(3, 1, 2) / dot(3, 1, 1);
        assert!(equal_prob(&rep.lambda[1], &expected, &cfg).equal);
        let l2 = &rep.lambda[1];
        let d1 = apply_vf(&delta_field(2, 1, 3), l2);
        assert!(equal_prob(&d1, l2, &cfg).equal);
    }

    #[test]
    fn non_homogeneous_field_is_rejected() {
        let rep = lambda_extract(&systems::nonhomogeneous(2), &SampleConfig::default()).unwrap();
        assert!(!rep.homogeneous);
        assert!(rep.component_residual > 1e-3);
    }

    #[test]
    fn shift_keeps_homogeneity() {
        let cfg = SampleConfig::default();
        let mu = Expr::var(1, 0) * Expr::var(2, 2) + dot(2, 1, 2).powi(2);
        let shifted = projective_shift(&systems::circle(2), &mu);
        assert!(lambda_extract(&shifted, &cfg).unwrap().homogeneous);
        let same = projective_shift(&systems::circle(2), &Expr::zero());
        assert_eq!(same.components(), systems::circle(2).components());
    }

    #[test]
    fn circles_are_projectively_equivalent() {
        let cfg = SampleConfig::default();
        let a = systems::circle(2);
        let b = systems::circle_simple(2);
        let cmp = are_proj_equivalent(&a, &b, &cfg).unwrap();
        assert!(cmp.equivalent);
        let own = are_proj_equivalent(&a, &a, &cfg).unwrap();
        assert!(own.equivalent && own.mu.is_zero());
        assert!(matches!(
            are_proj_equivalent(&a, &systems::curvature_field(2), &cfg),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn bracket_relations_hold() {
        let cfg = SampleConfig::default().with_count(40);
        for field in [systems::circle(2), systems::circle_simple(2)] {
            let rep = lambda_extract(&field, &cfg).unwrap();
            assert!(bracket_check(&field, &rep.lambda, &cfg).iter().all(|r| *r < 1e-9));
        }
    }

    #[test]
    fn transform_by_dilation_and_identity() {
        let cfg = SampleConfig::default();
        let circle = systems::circle(2);
        for phi in [embed_l1(1.7, 3).unwrap(), JetGroupElement::identity(3)] {
            let t = group_transform(&circle, &phi).unwrap();
            let pairs: Vec<_> = t.components().iter().cloned().zip(circle.components().iter().cloned()).collect();
            assert!(equal_prob_pairs(&pairs, 2, 2, &cfg.clone().with_tolerance(1e-12)).equal);
        }
        assert!(group_transform(&circle, &embed_l1(-1.0, 3).unwrap()).is_err());
        assert!(group_transform(&circle, &embed_l1(1.0, 2).unwrap()).is_err());
    }

    #[test]
    fn quadrature() {
        let v = adaptive_simpson(&mut |x| Ok(x.sin()), 0.0, std::f64::consts::PI, &QuadratureConfig::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let w = adaptive_simpson(&mut |x| Ok(x * x), 1.0, 0.0, &QuadratureConfig::default()).unwrap();
        assert!((w + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn spray_normalisation_of_simpler_circle() {
        let field = systems::circle_simple(2);
        let norm = SprayNormalizer::new(&field, &SampleConfig::default(), &QuadratureConfig::default()).unwrap();
        for seed in 0..5 {
            let p = sample_point(2, 2, seed);
            let (d12, d11) = (p.dot(1, 2), p.dot(1, 1));
            // lambda^2 = 3 y1.y2/|y1|^2 and Delta^2 = 2 y1 . d/dy2 give mu = -3 (y1.y2)^2 / (4 |y1|^4)
            let oracle = -3.0 * d12 * d12 / (4.0 * d11 * d11);
            let mu = norm.mu(&p).unwrap();
            assert!((mu - oracle).abs() < 1e-9, "{mu} vs {oracle}");
        }
        // gauge: mu vanishes where |y_1| = 1 and y_1 . y_2 = 0
        let p = JetPoint::from_rows(&[vec![0.3, 0.1], vec![0.6, 0.8], vec![-0.8, 0.6]]).unwrap();
        assert!(norm.mu(&p).unwrap().abs() < 1e-14);
        let spray = norm.mu(&sample_point(2, 2, 7)).unwrap();
        assert!(spray.is_finite());
        let zero = spray_normalize(&systems::circle(2), &sample_point(2, 2, 3), &QuadratureConfig::default()).unwrap();
        assert!(zero.abs() < 1e-14);
    }
}
