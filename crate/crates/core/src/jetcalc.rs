//! Points, vector fields and 1-forms on `T^N R^m`, the right action of the
//! jet group, the fundamental vector fields and the vertical endomorphism.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::jetgroup::{b_matrix, factorial, JetGroupElement, Scalar};
use crate::symexpr::{derivation, total_derivative, Expr, SampleConfig, Tape, Var};
use crate::{Error, EvalError, Result};

/// A point of `T^N R^m`: rows `y_0, ..., y_N`, each with `m` components.
#[derive(Debug, Clone, PartialEq)]
pub struct JetPoint {
    m: usize,
    order: usize,
    coords: Vec<f64>,
}

impl JetPoint {
    pub fn new(m: usize, order: usize, coords: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("dimension m must be positive".into()));
        }
        if coords.len() != (order + 1) * m {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates for m={m}, order {order}, got {}",
                (order + 1) * m,
                coords.len()
            )));
        }
        Ok(JetPoint { m, order, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidArgument("rows of unequal length".into()));
        }
        JetPoint::new(m, rows.len().saturating_sub(1), rows.concat())
    }

    pub fn zeros(m: usize, order: usize) -> Self {
        JetPoint { m, order, coords: vec![0.0; (order + 1) * m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.coords
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.coords[r * self.m..(r + 1) * self.m]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.coords[r * self.m..(r + 1) * self.m]
    }

    /// Coordinate `y^i_r` with 1-based `i`.
    pub fn get(&self, i: usize, r: usize) -> f64 {
        self.coords[r * self.m + i - 1]
    }

    pub fn set(&mut self, i: usize, r: usize, value: f64) {
        self.coords[r * self.m + i - 1] = value;
    }

    pub fn row_norm(&self, r: usize) -> f64 {
        self.row(r).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, r: usize, s: usize) -> f64 {
        self.row(r).iter().zip(self.row(s)).map(|(a, b)| a * b).sum()
    }

    /// Whether the point lies in the slit bundle (nonzero velocity row).
    pub fn is_slit(&self) -> bool {
        self.order >= 1 && self.row_norm(1) > 0.0
    }

    pub fn require_slit(&self) -> Result<()> {
        if self.is_slit() {
            Ok(())
        } else {
            Err(Error::OutsideSlit { norm: if self.order >= 1 { self.row_norm(1) } else { 0.0 } })
        }
    }

    /// Projection to `T^k`.
    pub fn truncate(&self, k: usize) -> JetPoint {
        assert!(k <= self.order, "cannot truncate order {} to {k}", self.order);
        JetPoint { m: self.m, order: k, coords: self.coords[..(k + 1) * self.m].to_vec() }
    }

    /// Append a new top row.
    pub fn extend(&self, row: &[f64]) -> JetPoint {
        assert_eq!(row.len(), self.m);
        let mut coords = self.coords.clone();
        coords.extend_from_slice(row);
        JetPoint { m: self.m, order: self.order + 1, coords }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.coords.chunks(self.m).map(<[f64]>::to_vec).collect()
    }
}

/// Right action on rows `1..=n` of a jet (row 0 is fixed); generic so it runs on numbers and on symbols.
pub fn act_rows<T: Scalar>(eta: &[T], rows: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = eta.len();
    assert_eq!(rows.len(), n + 1, "group order must equal jet order");
    let b = b_matrix(n, eta);
    let mut out = Vec::with_capacity(n + 1);
    out.push(rows[0].clone());
    for r in 1..=n {
        let row = (0..rows[0].len())
            .map(|i| {
                (1..=r).fold(T::zero(), |acc, p| {
                    let c = &b[p - 1][r - 1];
                    if c.is_exact_zero() {
                        acc
                    } else {
                        acc + rows[p][i].clone() * c.clone()
                    }
                })
            })
            .collect();
        out.push(row);
    }
    out
}

/// The right action of `L^n` on `T^n R^m` by reparametrisation of jets.
pub fn act(eta: &JetGroupElement, p: &JetPoint) -> Result<JetPoint> {
    if eta.order() != p.order() {
        return Err(Error::OrderMismatch { expected: p.order(), found: eta.order() });
    }
    let rows = act_rows(eta.coords(), &p.rows());
    JetPoint::new(p.m, p.order, rows.concat())
}

/// Recover `eta` from `p` and `q = act(eta, p)`, one level at a time.
///
/// At level `r` the unknown `eta_r` enters only as `y_1 eta_r`, so it is the
/// least-squares coefficient of `y_1` in what remains. Returns the element
/// and the largest residual of the per-level fits.
pub fn solve_action(p: &JetPoint, q: &JetPoint) -> Result<(JetGroupElement, f64)> {
    p.require_slit()?;
    if p.order() != q.order() || p.m() != q.m() {
        return Err(Error::OrderMismatch { expected: p.order(), found: q.order() });
    }
    let n = p.order();
    let y1 = p.row(1);
    let norm2: f64 = y1.iter().map(|x| x * x).sum();
    let mut eta = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    for r in 1..=n {
        let mut rest = q.row(r).to_vec();
        if r >= 2 {
            for pp in 2..=r {
                let c = crate::jetgroup::bell(r, pp, &eta[..r + 1 - pp])?;
                rest.iter_mut().zip(p.row(pp)).for_each(|(x, y)| *x -= y * c);
            }
        }
        let coef = rest.iter().zip(y1).map(|(a, b)| a * b).sum::<f64>() / norm2;
        let res = rest.iter().zip(y1).map(|(a, b)| (a - coef * b).abs()).fold(0.0, f64::max);
        residual = residual.max(res);
        eta.push(coef);
    }
    Ok((JetGroupElement::new(eta)?, residual))
}

/// A vector field on `T^N R^m` stored by its nonzero components.
#[derive(Debug, Clone)]
pub struct VectorField {
    m: usize,
    order: usize,
    comps: BTreeMap<Var, Expr>,
}

impl VectorField {
    pub fn new(m: usize, order: usize) -> Self {
        VectorField { m, order, comps: BTreeMap::new() }
    }

    pub fn from_components(m: usize, order: usize, comps: BTreeMap<Var, Expr>) -> Self {
        let mut v = VectorField::new(m, order);
        for (k, e) in comps {
            v.set(k.i, k.r, e);
        }
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Set the component along `d/dy^i_r`.
    pub fn set(&mut self, i: u32, r: u32, e: Expr) {
        assert!(
            i as usize <= self.m && r as usize <= self.order,
            "component ({i},{r}) outside m={}, order {}",
            self.m,
            self.order
        );
        if e.is_zero() {
            self.comps.remove(&Var::new(i, r));
        } else {
            self.comps.insert(Var::new(i, r), e);
        }
    }

    pub fn component(&self, i: u32, r: u32) -> Expr {
        self.comps.get(&Var::new(i, r)).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn components(&self) -> &BTreeMap<Var, Expr> {
        &self.comps
    }

    pub fn retain_orders(&mut self, orders: RangeInclusive<usize>) {
        self.comps.retain(|v, _| orders.contains(&(v.r as usize)));
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        let comps = self.comps.iter().map(|(k, e)| (*k, e * f)).collect();
        VectorField::from_components(self.m, self.order, comps)
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        out.order = out.order.max(other.order);
        out.m = out.m.max(other.m);
        for (k, e) in &other.comps {
            let sum = out.component(k.i, k.r) + e;
            out.set(k.i, k.r, sum);
        }
        out
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.scale(&Expr::int(-1)))
    }

    /// All components as `(a, b)` pairs against another field, for sampling.
    pub fn component_pairs(&self, other: &VectorField) -> Vec<(Expr, Expr)> {
        let mut keys: Vec<Var> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().map(|k| (self.component(k.i, k.r), other.component(k.i, k.r))).collect()
    }

    /// Numeric values of all `(N+1) m` components at a point, in row-major order.
    pub fn eval_at(&self, p: &JetPoint) -> Result<Vec<f64>, EvalError> {
        let mut out = vec![0.0; (self.order + 1) * self.m];
        let keys: Vec<Var> = self.comps.keys().copied().collect();
        let exprs: Vec<Expr> = self.comps.values().cloned().collect();
        let vals = Tape::compile(&exprs, p.m()).eval_vec(p.coords())?;
        for (k, v) in keys.iter().zip(vals) {
            out[k.index(self.m)] = v;
        }
        Ok(out)
    }
}

/// The fundamental vector field `Delta^r = sum_{s=r}^n s!/(s-r)! y^i_{s+1-r} d/dy^i_s` on `T^n R^m`.
pub fn delta_field(n: usize, r: usize, m: usize) -> VectorField {
    assert!((1..=n).contains(&r), "Delta^{r} needs 1 <= r <= {n}");
    let mut v = VectorField::new(m, n);
    for s in r..=n {
        let c = factorial(s) / factorial(s - r);
        for i in 1..=m as u32 {
            v.set(i, s as u32, Expr::int(c) * Expr::var(i, (s + 1 - r) as u32));
        }
    }
    v
}

/// `V(f) = sum V^i_r df/dy^i_r`.
pub fn apply_vf(v: &VectorField, f: &Expr) -> Expr {
    derivation(f, &v.comps)
}

/// Lie bracket `[X, Y]`.
pub fn vf_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    let mut keys: Vec<Var> = x.comps.keys().chain(y.comps.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let mut out = VectorField::new(x.m.max(y.m), x.order.max(y.order));
    for k in keys {
        let c = apply_vf(x, &y.component(k.i, k.r)) - apply_vf(y, &x.component(k.i, k.r));
        out.set(k.i, k.r, c);
    }
    out
}

/// A 1-form `sum a_{i,r} dy^i_r`, stored sparsely.
#[derive(Debug, Clone, Default)]
pub struct OneForm {
    comps: BTreeMap<Var, Expr>,
}

impl OneForm {
    pub fn new() -> Self {
        OneForm::default()
    }

    /// The basis form `dy^i_r`.
    pub fn basis(i: u32, r: u32) -> Self {
        let mut a = OneForm::new();
        a.set(i, r, Expr::one());
        a
    }

    /// Exterior derivative of a function.
    pub fn exact(f: &Expr) -> Self {
        let mut a = OneForm::new();
        for v in f.vars() {
            a.set(v.i, v.r, crate::symexpr::diff(f, v.i, v.r));
        }
        a
    }

    pub fn set(&mut self, i: u32, r: u32, e: Expr) {
        if e.is_zero() {
            self.comps.remove(&Var::new(i, r));
        } else {
            self.comps.insert(Var::new(i, r), e);
        }
    }

    pub fn add_to(&mut self, i: u32, r: u32, e: Expr) {
        let sum = self.get(i, r) + e;
        self.set(i, r, sum);
    }

    pub fn get(&self, i: u32, r: u32) -> Expr {
        self.comps.get(&Var::new(i, r)).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn components(&self) -> &BTreeMap<Var, Expr> {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Highest order `r` carrying a component, if any.
    pub fn max_order(&self) -> Option<usize> {
        self.comps.keys().map(|v| v.r as usize).max()
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (k, e) in &other.comps {
            out.add_to(k.i, k.r, e.clone());
        }
        out
    }

    pub fn scale(&self, c: &Expr) -> OneForm {
        let mut out = OneForm::new();
        for (k, e) in &self.comps {
            out.set(k.i, k.r, e * c);
        }
        out
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        self.add(&other.scale(&Expr::int(-1)))
    }

    /// Component pairs against another form, for sampling.
    pub fn component_pairs(&self, other: &OneForm) -> Vec<(Expr, Expr)> {
        let mut keys: Vec<Var> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().map(|k| (self.get(k.i, k.r), other.get(k.i, k.r))).collect()
    }

    /// Contraction with a vector field.
    pub fn contract(&self, v: &VectorField) -> Expr {
        Expr::sum(self.comps.iter().map(|(k, a)| a * &v.component(k.i, k.r)))
    }

    /// Symbolic contraction with the total derivative, `sum a_{i,r} y^i_{r+1}`.
    pub fn contract_total_expr(&self) -> Expr {
        Expr::sum(self.comps.iter().map(|(k, a)| a * &Expr::from_var(k.raised())))
    }
}

/// Vertical endomorphism on 1-forms: `a dy^i_r -> r a dy^i_{r-1}`.
pub fn s_oneform(alpha: &OneForm) -> OneForm {
    let mut out = OneForm::new();
    for (k, a) in &alpha.comps {
        if k.r >= 1 {
            out.add_to(k.i, k.r - 1, Expr::int(k.r as i64) * a);
        }
    }
    out
}

/// Total derivative on 1-forms: `a dy^i_r -> d_T(a) dy^i_r + a dy^i_{r+1}`.
pub fn dt_oneform(alpha: &OneForm) -> OneForm {
    let mut out = OneForm::new();
    for (k, a) in &alpha.comps {
        out.add_to(k.i, k.r, total_derivative(a));
        out.add_to(k.i, k.r + 1, a.clone());
    }
    out
}

/// `i_T alpha` at a point of one order higher than the form.
pub fn contract_total(alpha: &OneForm, p: &JetPoint) -> Result<f64> {
    Ok(alpha.contract_total_expr().eval(p)?)
}

/// The total derivative realised as a vector field on `T^{N+1}` (components up to order `N`).
pub fn total_field(m: usize, n: usize) -> VectorField {
    let mut v = VectorField::new(m, n + 1);
    for r in 0..=n as u32 {
        for i in 1..=m as u32 {
            v.set(i, r, Expr::var(i, r + 1));
        }
    }
    v
}

/// Check `lhs == rhs` componentwise by sampling.
pub fn forms_equal(a: &OneForm, b: &OneForm, m: usize, order: usize, cfg: &SampleConfig) -> f64 {
    crate::symexpr::equal_prob_pairs(&a.component_pairs(b), m, order, cfg).max_residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetgroup::embed_l1;
    use crate::symexpr::{equal_prob, equal_prob_pairs, sample_point};

    fn y(i: u32, r: u32) -> Expr {
        Expr::var(i, r)
    }

    #[test]
    fn jet_point_basics() {
        let p = JetPoint::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(p.order(), 2);
        assert_eq!(p.get(2, 1), 4.0);
        assert_eq!(p.row_norm(1), 5.0);
        assert!(p.is_slit());
        assert!(!JetPoint::zeros(2, 2).is_slit());
        assert!(JetPoint::new(2, 1, vec![0.0; 3]).is_err());
        assert_eq!(p.truncate(1).coords(), &[0.0, 0.0, 3.0, 4.0]);
    }

    #[test]
    fn action_examples() {
        let p = sample_point(3, 2, 5);
        assert_eq!(act(&JetGroupElement::identity(2), &p).unwrap(), p);
        let q = sample_point(2, 1, 1);
        let k = 2.5;
        let scaled = act(&embed_l1(k, 1).unwrap(), &q).unwrap();
        assert_eq!(scaled.row(0), q.row(0));
        assert!(scaled.row(1).iter().zip(q.row(1)).all(|(a, b)| (a - k * b).abs() < 1e-15));
        assert!(act(&JetGroupElement::identity(3), &p).is_err());
    }

    #[test]
    fn delta_field_examples() {
        let d1 = delta_field(2, 1, 1);
        assert_eq!(d1.component(1, 1), y(1, 1));
        assert_eq!(d1.component(1, 2), Expr::int(2) * y(1, 2));
        assert!(d1.component(1, 0).is_zero());
        let d2 = delta_field(3, 2, 1);
        assert_eq!(d2.component(1, 2), Expr::int(2) * y(1, 1));
        assert_eq!(d2.component(1, 3), Expr::int(6) * y(1, 2));
        assert!(d2.component(1, 1).is_zero());
        for n in 1..=5 {
            let dn = delta_field(n, n, 2);
            assert_eq!(dn.components().len(), 2);
            assert_eq!(dn.component(2, n as u32), Expr::int(factorial(n)) * y(2, 1));
        }
    }

    #[test]
    fn apply_vf_examples() {
        let sq = y(1, 1).powi(2) + y(2, 1).powi(2);
        let r = apply_vf(&delta_field(1, 1, 2), &sq);
        assert!(equal_prob(&r, &(Expr::int(2) * &sq), &SampleConfig::default()).equal);
    }

    #[test]
    fn vertical_endomorphism() {
        let s = s_oneform(&OneForm::basis(1, 2));
        assert_eq!(s.get(1, 1), Expr::int(2));
        assert_eq!(s.components().len(), 1);
        let a = OneForm::basis(1, 1);
        let comm = s_oneform(&dt_oneform(&a)).sub(&dt_oneform(&s_oneform(&a)));
        let pairs = comm.component_pairs(&a);
        assert!(equal_prob_pairs(&pairs, 1, 3, &SampleConfig::default()).equal);
    }

    #[test]
    fn action_freeness() {
        for seed in 0..20 {
            let p = sample_point(2, 4, seed);
            let (eta, res) = solve_action(&p, &p).unwrap();
            assert!(res < 1e-12);
            assert!(eta.coords().iter().zip(JetGroupElement::identity(4).coords()).all(|(a, b)| (a - b).abs() < 1e-12));
        }
    }

    #[test]
    fn solve_action_recovers_element() {
        let p = sample_point(3, 3, 9);
        let eta = JetGroupElement::new(vec![1.3, -0.4, 0.9]).unwrap();
        let q = act(&eta, &p).unwrap();
        let (back, res) = solve_action(&p, &q).unwrap();
        assert!(res < 1e-12);
        assert!(back.coords().iter().zip(eta.coords()).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
