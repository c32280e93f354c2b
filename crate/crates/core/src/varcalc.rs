//! Higher-order Lagrangians: the Zermelo conditions, the Hilbert form,
//! the Euler-Lagrange form and the characteristic distribution of `d theta`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::homog::DEField;
use crate::jetcalc::{apply_vf, delta_field, dt_oneform, s_oneform, JetPoint, OneForm, VectorField};
use crate::jetgroup::factorial;
use crate::linalg;
use crate::symexpr::{
    diff, equal_prob_pairs, parse, subst, total_derivative, zero_prob, Expr, SampleConfig, Sampler, Tape, Var,
};
use crate::{Error, Result};

/// A Lagrangian function on `T^n R^m`.
#[derive(Debug, Clone)]
pub struct Lagrangian {
    m: usize,
    n: usize,
    l: Expr,
}

impl Lagrangian {
    pub fn new(m: usize, n: usize, l: Expr) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!("need m >= 1 and n >= 1, got m={m}, n={n}")));
        }
        let (mi, ni) = l.dims();
        if mi > m || ni > n {
            return Err(Error::InvalidArgument(format!("{l} uses coordinates outside m={m}, order {n}")));
        }
        Ok(Lagrangian { m, n, l })
    }

    pub fn parse(m: usize, n: usize, text: &str) -> Result<Self> {
        Lagrangian::new(m, n, parse(text, m, n)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn expr(&self) -> &Expr {
        &self.l
    }
}

/// Residuals of `Delta^1 L = L` and `Delta^r L = 0` for `r = 2..n`.
#[derive(Debug, Clone)]
pub struct ZermeloReport {
    /// Entry `r - 1` belongs to `Delta^r`.
    pub residuals: Vec<f64>,
    pub parametric: bool,
}

pub fn zermelo_check(lag: &Lagrangian, cfg: &SampleConfig) -> ZermeloReport {
    let (m, n) = (lag.m, lag.n);
    let residuals: Vec<f64> = (1..=n)
        .map(|r| {
            let d = apply_vf(&delta_field(n, r, m), &lag.l);
            let target = if r == 1 { lag.l.clone() } else { Expr::zero() };
            equal_prob_pairs(&[(d, target)], m, n, cfg).max_residual
        })
        .collect();
    let parametric = residuals.iter().all(|r| *r <= cfg.tolerance);
    ZermeloReport { residuals, parametric }
}

fn iterate(alpha: &OneForm, f: fn(&OneForm) -> OneForm, times: usize) -> OneForm {
    (0..times).fold(alpha.clone(), |a, _| f(&a))
}

/// Hilbert form `sum_{p=0}^{n-1} (-1)^p/(p+1)! d_T^p S^{p+1} dL`, a 1-form on `T^{2n-1}`.
pub fn hilbert_form(lag: &Lagrangian) -> OneForm {
    let dl = OneForm::exact(&lag.l);
    (0..lag.n).fold(OneForm::new(), |acc, p| {
        let term = iterate(&iterate(&dl, s_oneform, p + 1), dt_oneform, p);
        let sign = if p % 2 == 0 { 1 } else { -1 };
        acc.add(&term.scale(&Expr::rational(sign, factorial(p + 1))))
    })
}

/// Euler-Lagrange form `sum_{p=0}^{n} (-1)^p/p! d_T^p S^p dL`, a 1-form on `T^{2n}`.
pub fn el_form(lag: &Lagrangian) -> OneForm {
    let dl = OneForm::exact(&lag.l);
    (0..=lag.n).fold(OneForm::new(), |acc, p| {
        let term = iterate(&iterate(&dl, s_oneform, p), dt_oneform, p);
        let sign = if p % 2 == 0 { 1 } else { -1 };
        acc.add(&term.scale(&Expr::rational(sign, factorial(p))))
    })
}

/// Classical Euler-Lagrange expressions `sum_p (-1)^p d_T^p (dL/dy^i_p)`.
pub fn el_classical(lag: &Lagrangian) -> Vec<Expr> {
    (1..=lag.m as u32)
        .map(|i| {
            Expr::sum((0..=lag.n as u32).map(|p| {
                let mut e = diff(&lag.l, i, p);
                for _ in 0..p {
                    e = total_derivative(&e);
                }
                if p % 2 == 0 {
                    e
                } else {
                    -e
                }
            }))
        })
        .collect()
}

/// Symbolic data derived from a Lagrangian once and reused by the checks.
#[derive(Debug, Clone)]
pub struct Variational {
    pub lagrangian: Lagrangian,
    pub theta: OneForm,
    pub eps_form: OneForm,
    pub eps: Vec<Expr>,
}

impl Variational {
    pub fn new(lag: &Lagrangian) -> Self {
        Variational {
            lagrangian: lag.clone(),
            theta: hilbert_form(lag),
            eps_form: el_form(lag),
            eps: el_classical(lag),
        }
    }

    fn m(&self) -> usize {
        self.lagrangian.m
    }

    fn n(&self) -> usize {
        self.lagrangian.n
    }

    /// Dimension of `T^{2n-1} R^m`, where `d theta` lives.
    pub fn phase_dim(&self) -> usize {
        2 * self.n() * self.m()
    }

    /// `i_T theta - L`.
    pub fn theta_residual(&self, cfg: &SampleConfig) -> f64 {
        let lhs = self.theta.contract_total_expr();
        equal_prob_pairs(&[(lhs, self.lagrangian.l.clone())], self.m(), 2 * self.n(), cfg).max_residual
    }

    /// Largest non-horizontal component of the Euler-Lagrange form.
    pub fn horizontality_residual(&self, cfg: &SampleConfig) -> f64 {
        let vertical: Vec<Expr> = self
            .eps_form
            .components()
            .iter()
            .filter(|(k, _)| k.r > 0)
            .map(|(_, e)| e.clone())
            .collect();
        if vertical.is_empty() {
            return 0.0;
        }
        zero_prob(&vertical, self.m(), 2 * self.n(), cfg).max_residual
    }

    /// `S eps`.
    pub fn s_eps_residual(&self, cfg: &SampleConfig) -> f64 {
        let s = s_oneform(&self.eps_form);
        let comps: Vec<Expr> = s.components().values().cloned().collect();
        if comps.is_empty() {
            return 0.0;
        }
        zero_prob(&comps, self.m(), 2 * self.n(), cfg).max_residual
    }

    /// The `dy^i_0` components of the form construction against the classical sum.
    pub fn classical_residual(&self, cfg: &SampleConfig) -> f64 {
        let pairs: Vec<(Expr, Expr)> = self
            .eps
            .iter()
            .enumerate()
            .map(|(k, e)| (self.eps_form.get(k as u32 + 1, 0), e.clone()))
            .collect();
        equal_prob_pairs(&pairs, self.m(), 2 * self.n(), cfg).max_residual
    }

    /// `i_{Delta^r} theta` for `r = 1..2n-1`.
    pub fn theta_delta_residuals(&self, cfg: &SampleConfig) -> Vec<f64> {
        let top = 2 * self.n() - 1;
        (1..=top)
            .map(|r| {
                let c = self.theta.contract(&delta_field(top, r, self.m()));
                zero_prob(&[c], self.m(), top.max(1), cfg).max_residual
            })
            .collect()
    }

    pub fn dtheta(&self) -> DTheta {
        DTheta::new(&self.theta, self.m(), 2 * self.n() - 1)
    }

    /// `i_T d theta + eps`, contracting the pointwise skew matrix with the total derivative.
    pub fn it_dtheta_residual(&self, cfg: &SampleConfig) -> f64 {
        let dtheta = self.dtheta();
        let (m, top) = (self.m(), 2 * self.n());
        let eps_tape = Tape::compile(&self.eps_form_dense(top - 1), m);
        let mut sampler = Sampler::new(cfg);
        let mut worst: f64 = 0.0;
        let mut taken = 0;
        let mut attempts = 0;
        while taken < cfg.count && attempts < cfg.count * cfg.retries.max(1) {
            attempts += 1;
            let p = sampler.point(m, top);
            let (w, eps) = match (dtheta.matrix_at(&p.truncate(top - 1)), eps_tape.eval_vec(p.coords())) {
                (Ok(w), Ok(e)) => (w, e),
                _ => continue,
            };
            taken += 1;
            let t = total_direction(&p, top - 1);
            let contracted = w.transpose() * t;
            for (a, b) in contracted.iter().zip(&eps) {
                worst = worst.max((a + b).abs() / (1.0 + a.abs() + b.abs()));
            }
        }
        if taken == 0 {
            f64::INFINITY
        } else {
            worst
        }
    }

    /// Components of the Euler-Lagrange form on every coordinate of `T^{order}`, row-major.
    fn eps_form_dense(&self, order: usize) -> Vec<Expr> {
        let m = self.m();
        (0..=order as u32)
            .flat_map(|r| (1..=m as u32).map(move |i| (i, r)))
            .map(|(i, r)| self.eps_form.get(i, r))
            .collect()
    }

    /// Euler-Lagrange expressions with `y_{2n}` replaced by an equation field.
    pub fn on_shell(&self, field: &DEField) -> Result<Vec<Expr>> {
        let top = 2 * self.n();
        if field.n() + 1 != top {
            return Err(Error::OrderMismatch { expected: top, found: field.n() + 1 });
        }
        let bindings: BTreeMap<Var, Expr> = field
            .components()
            .iter()
            .enumerate()
            .map(|(k, g)| (Var::new(k as u32 + 1, top as u32), g.clone()))
            .collect();
        Ok(self.eps.iter().map(|e| subst(e, &bindings)).collect())
    }

    pub fn verify_field(&self, field: &DEField, cfg: &SampleConfig) -> Result<f64> {
        let on_shell = self.on_shell(field)?;
        Ok(zero_prob(&on_shell, self.m(), field.n(), cfg).max_residual)
    }
}

/// Total-derivative direction `(y_1, ..., y_{top+1})` at a point of `T^{top+1}`.
fn total_direction(p: &JetPoint, top: usize) -> DVector<f64> {
    let m = p.m();
    DVector::from_iterator((top + 1) * m, p.coords()[m..(top + 2) * m].iter().copied())
}

/// `d theta` as a pointwise skew matrix `W[a][b] = d_a theta_b - d_b theta_a`
/// over the coordinates of `T^top R^m` in row-major order.
#[derive(Debug, Clone)]
pub struct DTheta {
    m: usize,
    top: usize,
    jacobian: Tape,
}

impl DTheta {
    pub fn new(theta: &OneForm, m: usize, top: usize) -> Self {
        let dim = (top + 1) * m;
        let coords: Vec<Var> = (0..=top as u32)
            .flat_map(|r| (1..=m as u32).map(move |i| Var::new(i, r)))
            .collect();
        // jacobian[b * dim + a] = d theta_b / d x_a
        let mut exprs = Vec::with_capacity(dim * dim);
        for b in &coords {
            let tb = theta.get(b.i, b.r);
            for a in &coords {
                exprs.push(if tb.may_contain(*a) { diff(&tb, a.i, a.r) } else { Expr::zero() });
            }
        }
        DTheta { m, top, jacobian: Tape::compile(&exprs, m) }
    }

    pub fn dim(&self) -> usize {
        (self.top + 1) * self.m
    }

    pub fn matrix_at(&self, p: &JetPoint) -> Result<DMatrix<f64>> {
        if p.order() != self.top || p.m() != self.m {
            return Err(Error::OrderMismatch { expected: self.top, found: p.order() });
        }
        let dim = self.dim();
        let j = self.jacobian.eval_vec(p.coords())?;
        Ok(DMatrix::from_fn(dim, dim, |a, b| j[b * dim + a] - j[a * dim + b]))
    }
}

/// Numeric rank data of `d theta` at a point.
#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub singular_values: Vec<f64>,
    /// Ratio of the smallest retained to the largest discarded singular value.
    pub gap: f64,
    /// Relative residual `|W v| / (sigma_max |v|)` for `Delta^1 .. Delta^{2n-1}`.
    pub delta_residuals: Vec<f64>,
    pub field_residual: Option<f64>,
}

const RANK_THRESHOLD: f64 = 1e-8;

fn vector_at(v: &VectorField, p: &JetPoint) -> Result<DVector<f64>> {
    Ok(DVector::from_vec(v.eval_at(p)?))
}

fn kernel_residual(w: &DMatrix<f64>, v: &DVector<f64>, smax: f64) -> f64 {
    let nv = v.norm();
    if nv == 0.0 {
        return 0.0;
    }
    if smax == 0.0 {
        return (w * v).norm();
    }
    (w * v).norm() / (smax * nv)
}

/// Rank of `d theta` at a slit point of `T^{2n-1}` and kernel membership of the
/// fundamental fields (and of an equation field, when given).
pub fn regularity_rank(var: &Variational, p: &JetPoint, field: Option<&DEField>) -> Result<RegularityReport> {
    p.require_slit()?;
    let (m, n) = (var.m(), var.n());
    let top = 2 * n - 1;
    if p.order() != top {
        return Err(Error::OrderMismatch { expected: top, found: p.order() });
    }
    let w = var.dtheta().matrix_at(p)?;
    let dim = w.nrows();
    let singular_values = linalg::singular_values(&w);
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|s| **s > RANK_THRESHOLD * smax && **s > 0.0).count();
    let gap = match (rank.checked_sub(1).map(|k| singular_values[k]), singular_values.get(rank)) {
        (Some(kept), Some(&dropped)) if dropped > 0.0 => kept / dropped,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => f64::NAN,
    };
    let delta_residuals = (1..=top)
        .map(|r| Ok(kernel_residual(&w, &vector_at(&delta_field(top, r, m), p)?, smax)))
        .collect::<Result<Vec<_>>>()?;
    let field_residual = match field {
        Some(f) => {
            if f.n() != top {
                return Err(Error::OrderMismatch { expected: top, found: f.n() });
            }
            Some(kernel_residual(&w, &vector_at(&f.vector_field(), p)?, smax))
        }
        None => None,
    };
    Ok(RegularityReport {
        dim,
        rank,
        kernel_dim: dim - rank,
        singular_values,
        gap,
        delta_residuals,
        field_residual,
    })
}

/// Pointwise solution of the Euler-Lagrange equations for `y_{2n}`.
#[derive(Debug, Clone)]
pub struct ExtractedField {
    /// Minimum-norm solution.
    pub particular: Vec<f64>,
    /// Orthonormal basis of the directions along which `y_{2n}` is undetermined.
    pub kernel: Vec<Vec<f64>>,
    /// `|A x + b| / (1 + |b|)` for the affine system `A y_{2n} + b = 0`.
    pub residual: f64,
}

const INCONSISTENCY_TOLERANCE: f64 = 1e-6;

/// Solve `eps(p, y_{2n}) = 0` for `y_{2n}` at a slit point of `T^{2n-1}`.
///
/// `eps` is affine in `y_{2n}`, so `m + 1` evaluations determine it.
pub fn extract_el_field_at(var: &Variational, p: &JetPoint) -> Result<ExtractedField> {
    p.require_slit()?;
    let (m, n) = (var.m(), var.n());
    if p.order() != 2 * n - 1 {
        return Err(Error::OrderMismatch { expected: 2 * n - 1, found: p.order() });
    }
    let tape = Tape::compile(&var.eps, m);
    let at = |top: &[f64]| -> Result<DVector<f64>> { Ok(DVector::from_vec(tape.eval_vec(p.extend(top).coords())?)) };
    let b = at(&vec![0.0; m])?;
    let mut a = DMatrix::zeros(m, m);
    for j in 0..m {
        let mut e = vec![0.0; m];
        e[j] = 1.0;
        a.set_column(j, &(at(&e)? - &b));
    }
    let (x, kernel) = linalg::min_norm_solve(&a, &(-&b), RANK_THRESHOLD);
    let kernel = kernel.into_iter().map(|v| v.iter().copied().collect()).collect();
    let residual = (&a * &x + &b).norm() / (1.0 + b.norm());
    if residual > INCONSISTENCY_TOLERANCE {
        return Err(Error::Inconsistent { residual });
    }
    Ok(ExtractedField { particular: x.iter().copied().collect(), kernel, residual })
}

/// Summary of the variational identities for one Lagrangian.
#[derive(Debug, Clone)]
pub struct ELReport {
    pub eps: Vec<Expr>,
    pub zermelo: ZermeloReport,
    pub horizontality_residual: f64,
    pub s_eps_residual: f64,
    pub theta_residual: f64,
    pub dtheta_residual: f64,
    pub classical_residual: f64,
}

pub fn el_report(lag: &Lagrangian, cfg: &SampleConfig) -> ELReport {
    let var = Variational::new(lag);
    ELReport {
        zermelo: zermelo_check(lag, cfg),
        horizontality_residual: var.horizontality_residual(cfg),
        s_eps_residual: var.s_eps_residual(cfg),
        theta_residual: var.theta_residual(cfg),
        dtheta_residual: var.it_dtheta_residual(cfg),
        classical_residual: var.classical_residual(cfg),
        eps: var.eps,
    }
}

/// `i_T d theta + eps` for any Lagrangian; equals `d(L - i_T theta)`.
pub fn check_it_dtheta(lag: &Lagrangian, cfg: &SampleConfig) -> f64 {
    Variational::new(lag).it_dtheta_residual(cfg)
}

/// Residual of the Euler-Lagrange expressions along an equation field of order `2n`.
pub fn verify_el_field(lag: &Lagrangian, field: &DEField, cfg: &SampleConfig) -> Result<f64> {
    Variational::new(lag).verify_field(field, cfg)
}
