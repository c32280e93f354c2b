//! Integration of equation fields and comparison of the resulting paths.

use std::io;

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::homog::DEField;
use crate::jetcalc::{act, JetPoint};
use crate::jetgroup::JetGroupElement;
use crate::linalg;
use crate::symexpr::Tape;
use crate::{Error, Result};

/// Integration halts when `|y_1|` drops below this.
pub const SLIT_GUARD: f64 = 0.05;

/// Why an integration stopped before reaching its end.
#[derive(Debug, Clone, PartialEq)]
pub enum Halt {
    Slit { t: f64, norm: f64 },
    NonFinite { t: f64 },
}

/// Sampled integral curve of an equation field on `T^n R^m`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<JetPoint>,
    pub h: f64,
    /// Largest per-step Richardson estimate `|y_h - y_{h/2}| / 15`.
    pub max_step_error: f64,
    /// Sum of the per-step estimates.
    pub error_bound: f64,
    pub halt: Option<Halt>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn completed(&self) -> bool {
        self.halt.is_none()
    }

    pub fn last(&self) -> &JetPoint {
        self.states.last().expect("trajectories hold the initial state")
    }

    pub fn positions(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|p| p.row(0).to_vec()).collect()
    }

    /// CSV header `t,y1_0,y2_0,...,ym_n`.
    pub fn csv_header(&self) -> Vec<String> {
        let p = &self.states[0];
        let mut cols = vec!["t".to_string()];
        for r in 0..=p.order() {
            for i in 1..=p.m() {
                cols.push(format!("y{i}_{r}"));
            }
        }
        cols
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io_err = |e: csv::Error| Error::InvalidArgument(format!("csv output failed: {e}"));
        w.write_record(self.csv_header()).map_err(io_err)?;
        for (t, p) in self.t.iter().zip(&self.states) {
            let row = std::iter::once(*t).chain(p.coords().iter().copied()).map(|x| x.to_string());
            w.write_record(row).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))
    }
}

struct Stepper<'a> {
    tape: &'a Tape,
    m: usize,
    n: usize,
}

impl Stepper<'_> {
    fn rhs(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        let m = self.m;
        out[..self.n * m].copy_from_slice(&y[m..]);
        self.tape.eval(y, &mut out[self.n * m..])?;
        Ok(())
    }

    fn rk4(&self, y: &[f64], h: f64) -> Result<Vec<f64>> {
        let d = y.len();
        let mut k1 = vec![0.0; d];
        let mut k2 = vec![0.0; d];
        let mut k3 = vec![0.0; d];
        let mut k4 = vec![0.0; d];
        let axpy = |a: f64, k: &[f64]| -> Vec<f64> { y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect() };
        self.rhs(y, &mut k1)?;
        self.rhs(&axpy(h / 2.0, &k1), &mut k2)?;
        self.rhs(&axpy(h / 2.0, &k2), &mut k3)?;
        self.rhs(&axpy(h, &k3), &mut k4)?;
        Ok((0..d).map(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])).collect())
    }

    /// Full step plus the Richardson estimate against two half steps.
    fn step(&self, y: &[f64], h: f64) -> Result<(Vec<f64>, f64)> {
        let full = self.rk4(y, h)?;
        let half = self.rk4(&self.rk4(y, h / 2.0)?, h / 2.0)?;
        let err = full.iter().zip(&half).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / 15.0;
        Ok((full, err))
    }
}

fn check_init(field: &DEField, init: &JetPoint, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    if init.m() != field.m() || init.order() != field.n() {
        return Err(Error::OrderMismatch { expected: field.n(), found: init.order() });
    }
    init.require_slit()?;
    if init.row_norm(1) < SLIT_GUARD {
        return Err(Error::OutsideSlit { norm: init.row_norm(1) });
    }
    Ok(())
}

/// Classical fixed-step RK4 for `y_r' = y_{r+1}` (`r < n`), `y_n' = Gamma` on `[0, t_end]`.
///
/// The final step is shortened to land on `t_end`. Leaving the slit guard or
/// producing non-finite values stops the run and returns the partial trajectory.
pub fn integrate(field: &DEField, init: &JetPoint, t_end: f64, h: f64) -> Result<Trajectory> {
    check_init(field, init, h)?;
    if !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("end time must be non-negative, got {t_end}")));
    }
    let tape = field.tape();
    let stepper = Stepper { tape: &tape, m: field.m(), n: field.n() };
    let mut tr = Trajectory {
        t: vec![0.0],
        states: vec![init.clone()],
        h,
        max_step_error: 0.0,
        error_bound: 0.0,
        halt: None,
    };
    let steps = (t_end / h).ceil() as usize;
    let mut y = init.coords().to_vec();
    for k in 0..steps {
        let t0 = k as f64 * h;
        let dt = (t_end - t0).min(h);
        let t1 = if k + 1 == steps { t_end } else { (k + 1) as f64 * h };
        let (next, err) = match stepper.step(&y, dt) {
            Ok(v) => v,
            Err(Error::Eval(_)) => {
                tr.halt = Some(Halt::NonFinite { t: t0 });
                break;
            }
            Err(e) => return Err(e),
        };
        if next.iter().any(|x| !x.is_finite()) {
            tr.halt = Some(Halt::NonFinite { t: t0 });
            break;
        }
        let p = JetPoint::new(field.m(), field.n(), next)?;
        let norm = p.row_norm(1);
        if norm < SLIT_GUARD {
            tr.halt = Some(Halt::Slit { t: t1, norm });
            break;
        }
        tr.max_step_error = tr.max_step_error.max(err);
        tr.error_bound += err;
        y.copy_from_slice(p.coords());
        tr.t.push(t1);
        tr.states.push(p);
    }
    Ok(tr)
}

/// The element of `L^{n+}` moving `p` to `|y_1| = 1`, `y_1 . y_2 = 0`.
pub fn unit_speed_element(p: &JetPoint) -> Result<JetGroupElement> {
    p.require_slit()?;
    let n = p.order();
    let s11 = p.dot(1, 1);
    let a = 1.0 / s11.sqrt();
    let mut coords = vec![0.0; n];
    coords[0] = a;
    if n >= 2 {
        coords[1] = -a * a * p.dot(1, 2) / s11;
    }
    JetGroupElement::new(coords)
}

/// Integrate until the traced path has cumulative chord length `length`.
///
/// After every step the jet is moved back to unit speed with `y_1 . y_2 = 0` by
/// an element of `L^{n+}`. Such an action keeps the oriented path, and it keeps
/// the parameter close to arc length even when the field itself drives the
/// speed to infinity in finite time.
pub fn trace_path(field: &DEField, init: &JetPoint, length: f64, h: f64) -> Result<Trajectory> {
    check_init(field, init, h)?;
    let tape = field.tape();
    let stepper = Stepper { tape: &tape, m: field.m(), n: field.n() };
    let start = act(&unit_speed_element(init)?, init)?;
    let mut tr = Trajectory {
        t: vec![0.0],
        states: vec![start.clone()],
        h,
        max_step_error: 0.0,
        error_bound: 0.0,
        halt: None,
    };
    let mut p = start;
    let mut travelled = 0.0;
    // a unit-speed step covers about h, so this bound only guards runaway loops
    let max_steps = (4.0 * length / h).ceil() as usize + 16;
    for _ in 0..max_steps {
        if travelled >= length {
            break;
        }
        let dt = (length - travelled).min(h);
        let (next, err) = match stepper.step(p.coords(), dt) {
            Ok(v) => v,
            Err(Error::Eval(_)) => {
                tr.halt = Some(Halt::NonFinite { t: travelled });
                break;
            }
            Err(e) => return Err(e),
        };
        let q = JetPoint::new(field.m(), field.n(), next)?;
        if q.coords().iter().any(|x| !x.is_finite()) {
            tr.halt = Some(Halt::NonFinite { t: travelled });
            break;
        }
        if q.row_norm(1) < SLIT_GUARD {
            tr.halt = Some(Halt::Slit { t: travelled, norm: q.row_norm(1) });
            break;
        }
        let chord = q.row(0).iter().zip(p.row(0)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        travelled += chord;
        tr.max_step_error = tr.max_step_error.max(err);
        tr.error_bound += err;
        p = act(&unit_speed_element(&q)?, &q)?;
        tr.t.push(tr.t.last().unwrap() + dt);
        tr.states.push(p.clone());
    }
    Ok(tr)
}

/// A curve in `R^m` sampled at equal arc-length spacing `ds`.
#[derive(Debug, Clone)]
pub struct Path {
    pub points: Vec<Vec<f64>>,
    pub ds: f64,
}

impl Path {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest relative deviation of consecutive spacing from `ds`.
    pub fn spacing_deviation(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (dist(&w[0], &w[1]) / self.ds - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Resample by cumulative chord length, interpolating each step with the cubic
/// Hermite polynomial built from positions and velocities.
pub fn arclength_resample(tr: &Trajectory, ds: f64) -> Result<Path> {
    if !(ds > 0.0) {
        return Err(Error::InvalidArgument(format!("spacing must be positive, got {ds}")));
    }
    let n = tr.len();
    let mut cum = vec![0.0; n];
    for k in 1..n {
        cum[k] = cum[k - 1] + dist(tr.states[k - 1].row(0), tr.states[k].row(0));
    }
    let total = cum[n - 1];
    if total <= 0.0 {
        return Err(Error::Degenerate("path has zero length".into()));
    }
    let count = (total / ds * (1.0 + 1e-12)).floor() as usize;
    let mut points = Vec::with_capacity(count + 1);
    let mut k = 0;
    for j in 0..=count {
        let s = (j as f64 * ds).min(total);
        while k + 2 < n && cum[k + 1] < s {
            k += 1;
        }
        let seg = cum[k + 1] - cum[k];
        let u = if seg > 0.0 { ((s - cum[k]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        let dt = tr.t[k + 1] - tr.t[k];
        let (a, b) = (&tr.states[k], &tr.states[k + 1]);
        let (h00, h10, h01, h11) = (
            2.0 * u.powi(3) - 3.0 * u * u + 1.0,
            u.powi(3) - 2.0 * u * u + u,
            -2.0 * u.powi(3) + 3.0 * u * u,
            u.powi(3) - u * u,
        );
        points.push(
            (0..a.m())
                .map(|i| h00 * a.row(0)[i] + h10 * dt * a.row(1)[i] + h01 * b.row(0)[i] + h11 * dt * b.row(1)[i])
                .collect(),
        );
    }
    Ok(Path { points, ds })
}

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|x| x * x).sum();
    let u = if len2 > 0.0 {
        (p.iter().zip(a).zip(&ab).map(|((pi, ai), d)| (pi - ai) * d).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.iter().zip(a).zip(&ab).map(|((pi, ai), d)| (pi - ai - u * d).powi(2)).sum::<f64>().sqrt()
}

fn directed(a: &Path, b: &Path) -> f64 {
    a.points
        .iter()
        .map(|p| {
            if b.points.len() == 1 {
                return dist(p, &b.points[0]);
            }
            b.points.windows(2).map(|w| point_segment(p, &w[0], &w[1])).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between the samples of each path and the polyline of the other.
pub fn hausdorff(a: &Path, b: &Path) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Degenerate("empty path".into()));
    }
    Ok(directed(a, b).max(directed(b, a)))
}

/// Result of an algebraic least-squares circle fit in the plane.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleFit {
    Circle { center: [f64; 2], radius: f64, residual: f64 },
    /// Points are collinear to within the fit; `residual` is the largest distance to the line.
    Line { point: [f64; 2], direction: [f64; 2], residual: f64 },
}

/// Radii beyond this multiple of the point spread are reported as lines.
const LINE_RADIUS_RATIO: f64 = 1e8;

pub fn circle_fit(path: &Path) -> Result<CircleFit> {
    if path.points.iter().any(|p| p.len() != 2) {
        return Err(Error::InvalidArgument("circle fit needs planar points".into()));
    }
    let k = path.len();
    if k < 3 {
        return Err(Error::Degenerate("circle fit needs at least three points".into()));
    }
    let (cx, cy) = path.points.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
    let (cx, cy) = (cx / k as f64, cy / k as f64);
    let local: Vec<[f64; 2]> = path.points.iter().map(|p| [p[0] - cx, p[1] - cy]).collect();
    let spread = local.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    if spread == 0.0 {
        return Err(Error::Degenerate("all points coincide".into()));
    }
    let line = || {
        let (sxx, sxy, syy) = local.iter().fold((0.0, 0.0, 0.0), |(a, b, c), p| {
            (a + p[0] * p[0], b + p[0] * p[1], c + p[1] * p[1])
        });
        let eig = Matrix2::new(sxx, sxy, sxy, syy).symmetric_eigen();
        let j = if eig.eigenvalues[0] >= eig.eigenvalues[1] { 0 } else { 1 };
        let dir = [eig.eigenvectors[(0, j)], eig.eigenvectors[(1, j)]];
        let residual = local.iter().map(|p| (p[0] * dir[1] - p[1] * dir[0]).abs()).fold(0.0, f64::max);
        CircleFit::Line { point: [cx, cy], direction: dir, residual }
    };
    // x^2 + y^2 + D x + E y + F = 0
    let a = DMatrix::from_fn(k, 3, |r, c| match c {
        0 => local[r][0],
        1 => local[r][1],
        _ => 1.0,
    });
    let rhs = DVector::from_iterator(k, local.iter().map(|p| -(p[0] * p[0] + p[1] * p[1])));
    let (sol, kernel) = linalg::min_norm_solve(&a, &rhs, 1e-12);
    if !kernel.is_empty() {
        return Ok(line());
    }
    let (ux, uy) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let r2 = ux * ux + uy * uy - sol[2];
    if !(r2 > 0.0) || r2.sqrt() > LINE_RADIUS_RATIO * spread {
        return Ok(line());
    }
    let radius = r2.sqrt();
    let residual = local.iter().map(|p| ((p[0] - ux).hypot(p[1] - uy) - radius).abs()).fold(0.0, f64::max);
    let fit = CircleFit::Circle { center: [ux + cx, uy + cy], radius, residual };
    if let CircleFit::Line { residual: lr, .. } = line() {
        if lr <= residual {
            return Ok(line());
        }
    }
    Ok(fit)
}

/// `kappa = sqrt(|y1|^2|y2|^2 - (y1.y2)^2) / |y1|^3`, which is `|y2|` at unit speed.
pub fn curvature(p: &JetPoint) -> f64 {
    let (s11, s12, s22) = (p.dot(1, 1), p.dot(1, 2), p.dot(2, 2));
    (s11 * s22 - s12 * s12).max(0.0).sqrt() / s11.powf(1.5)
}

pub fn curvature_series(tr: &Trajectory) -> Result<Vec<f64>> {
    if tr.states[0].order() < 2 {
        return Err(Error::OrderMismatch { expected: 2, found: tr.states[0].order() });
    }
    Ok(tr.states.iter().map(curvature).collect())
}

/// Largest `|kappa(t) - kappa(0)|`.
pub fn curvature_drift(tr: &Trajectory) -> Result<f64> {
    let k = curvature_series(tr)?;
    Ok(k.iter().map(|x| (x - k[0]).abs()).fold(0.0, f64::max))
}

/// `y3 + 3/2 |y2|^2 y1`.
pub fn conserved_value(p: &JetPoint) -> Vec<f64> {
    let s22 = p.dot(2, 2);
    p.row(3).iter().zip(p.row(1)).map(|(c, a)| c + 1.5 * s22 * a).collect()
}

/// Largest `|v(t) - v(0)|` for `v = y3 + 3/2 |y2|^2 y1`.
pub fn conserved_vector(tr: &Trajectory) -> Result<f64> {
    if tr.states[0].order() < 3 {
        return Err(Error::OrderMismatch { expected: 3, found: tr.states[0].order() });
    }
    let v0 = conserved_value(&tr.states[0]);
    Ok(tr.states.iter().map(|p| dist(&conserved_value(p), &v0)).fold(0.0, f64::max))
}

/// Largest of `||y1| - 1|` and `|y1.y2|` along the trajectory.
pub fn sigma1_drift(tr: &Trajectory) -> f64 {
    tr.states
        .iter()
        .map(|p| (p.row_norm(1) - 1.0).abs().max(p.dot(1, 2).abs()))
        .fold(0.0, f64::max)
}

/// [`sigma1_drift`] together with `|y1.y3 + |y2|^2|`.
pub fn sigma2_drift(tr: &Trajectory) -> Result<f64> {
    if tr.states[0].order() < 3 {
        return Err(Error::OrderMismatch { expected: 3, found: tr.states[0].order() });
    }
    let third = tr.states.iter().map(|p| (p.dot(1, 3) + p.dot(2, 2)).abs()).fold(0.0, f64::max);
    Ok(sigma1_drift(tr).max(third))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetgroup::embed_l1;
    use crate::systems;

    fn std_init() -> JetPoint {
        JetPoint::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    fn circle_error(h: f64) -> f64 {
        let tr = integrate(&systems::circle(2), &std_init(), 2.0 * std::f64::consts::PI, h).unwrap();
        tr.t.iter()
            .zip(&tr.states)
            .map(|(s, p)| (p.get(1, 0) - s.sin()).hypot(p.get(2, 0) - (1.0 - s.cos())))
            .fold(0.0, f64::max)
    }

    #[test]
    fn unit_circle() {
        let tr = integrate(&systems::circle(2), &std_init(), 2.0 * std::f64::consts::PI, 1e-3).unwrap();
        assert!(tr.completed());
        assert_eq!(*tr.t.last().unwrap(), 2.0 * std::f64::consts::PI);
        assert!(circle_error(1e-3) < 1e-6);
        assert!(sigma1_drift(&tr) < 1e-6);
        assert!(curvature_drift(&tr).unwrap() < 1e-6);
    }

    #[test]
    fn fourth_order_convergence() {
        let ratio = circle_error(0.02) / circle_error(0.01);
        assert!((12.0..20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn zero_field_gives_lines() {
        let field = DEField::parse(2, 2, &["0", "0"]).unwrap();
        let init = JetPoint::from_rows(&[vec![1.0, 2.0], vec![0.6, 0.8], vec![0.0, 0.0]]).unwrap();
        let tr = integrate(&field, &init, 3.0, 0.1).unwrap();
        let end = tr.last();
        assert!((end.get(1, 0) - 2.8).abs() < 1e-12 && (end.get(2, 0) - 4.4).abs() < 1e-12);
        let path = arclength_resample(&tr, 0.05).unwrap();
        assert!(matches!(circle_fit(&path).unwrap(), CircleFit::Line { .. }));
        assert!(curvature_series(&tr).unwrap().iter().all(|k| *k == 0.0));
    }

    #[test]
    fn slit_guard_stops_integration() {
        // y1' = -y1 shrinks the velocity exponentially
        let field = DEField::parse(1, 1, &["-y1_1"]).unwrap();
        let init = JetPoint::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let tr = integrate(&field, &init, 10.0, 0.01).unwrap();
        assert!(matches!(tr.halt, Some(Halt::Slit { .. })));
        assert!(tr.last().row_norm(1) >= SLIT_GUARD);
        assert!(integrate(&field, &JetPoint::from_rows(&[vec![0.0], vec![0.0]]).unwrap(), 1.0, 0.1).is_err());
        assert!(integrate(&field, &init, 1.0, 0.0).is_err());
    }

    #[test]
    fn resampling_is_self_consistent() {
        let tr = integrate(&systems::circle(2), &std_init(), 3.0, 1e-2).unwrap();
        let a = arclength_resample(&tr, 0.01).unwrap();
        let b = arclength_resample(&tr, 0.013).unwrap();
        assert!(hausdorff(&a, &b).unwrap() < 0.01);
        assert!(a.spacing_deviation() < 0.1);
        match circle_fit(&a).unwrap() {
            CircleFit::Circle { center, radius, residual } => {
                assert!((radius - 1.0).abs() < 1e-7 && residual < 1e-7);
                assert!(center[0].abs() < 1e-7 && (center[1] - 1.0).abs() < 1e-7);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn traced_paths_agree_for_equivalent_systems() {
        let init = JetPoint::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.3, 0.5]]).unwrap();
        let a = trace_path(&systems::circle(2), &init, 3.0, 1e-2).unwrap();
        let b = trace_path(&systems::circle_simple(2), &init, 3.0, 1e-2).unwrap();
        let scaled = act(&embed_l1(2.0, 2).unwrap(), &init).unwrap();
        let c = trace_path(&systems::circle_simple(2), &scaled, 3.0, 1e-2).unwrap();
        let (pa, pb, pc) = (
            arclength_resample(&a, 0.01).unwrap(),
            arclength_resample(&b, 0.01).unwrap(),
            arclength_resample(&c, 0.01).unwrap(),
        );
        assert!(hausdorff(&pa, &pb).unwrap() < 1e-6);
        assert!(hausdorff(&pb, &pc).unwrap() < 1e-6);
    }

    #[test]
    fn curvature_field_conserves_vector() {
        let k = 0.7;
        let init = JetPoint::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, k], vec![-k * k, 0.4]]).unwrap();
        let tr = integrate(&systems::curvature_field(2), &init, 3.0, 1e-3).unwrap();
        assert!(conserved_vector(&tr).unwrap() < 1e-5);
        assert!(sigma2_drift(&tr).unwrap() < 1e-5);
    }

    #[test]
    fn csv_layout() {
        let tr = integrate(&systems::circle(2), &std_init(), 0.2, 0.1).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,y1_0,y2_0,y1_1,y2_1,y1_2,y2_2");
        assert_eq!(lines.next().unwrap(), "0,0,0,1,0,0,1");
        assert_eq!(text.lines().count(), 4);
    }
}
