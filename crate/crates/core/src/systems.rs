//! Example systems on Euclidean `R^m`, built for any dimension `m`.

use crate::homog::DEField;
use crate::symexpr::{dot, Expr};
use crate::varcalc::Lagrangian;

fn y(i: usize, r: u32) -> Expr {
    Expr::var(i as u32, r)
}

fn field(m: usize, n: usize, f: impl Fn(usize) -> Expr) -> DEField {
    DEField::new(m, n, (1..=m).map(f).collect()).expect("well-formed example")
}

/// Third-order system whose geodesics are circles:
/// `-(2|y1|^2|y2|^2 + (y1.y2)^2)/(2|y1|^4) y1 + 3 (y1.y2)/|y1|^2 y2`.
pub fn circle(m: usize) -> DEField {
    let mm = m as u32;
    let (s11, s12, s22) = (dot(mm, 1, 1), dot(mm, 1, 2), dot(mm, 2, 2));
    let a = -(Expr::int(2) * &s11 * &s22 + s12.powi(2)) / (Expr::int(2) * s11.powi(2));
    let b = Expr::int(3) * &s12 / &s11;
    field(m, 2, |i| &a * y(i, 1) + &b * y(i, 2))
}

/// `3 (y1.y2)/|y1|^2 y2`, projectively equivalent to [`circle`].
pub fn circle_simple(m: usize) -> DEField {
    let mm = m as u32;
    let b = Expr::int(3) * dot(mm, 1, 2) / dot(mm, 1, 1);
    field(m, 2, |i| &b * y(i, 2))
}

/// `Gamma^i = y^i_0` on `T^2`, which is not homogeneous.
pub fn nonhomogeneous(m: usize) -> DEField {
    field(m, 2, |i| y(i, 0))
}

/// Fourth-order Euler-Lagrange field of [`curvature_lagrangian`].
pub fn curvature_field(m: usize) -> DEField {
    let mm = m as u32;
    let (s11, s12, s22) = (dot(mm, 1, 1), dot(mm, 1, 2), dot(mm, 2, 2));
    let (s13, s23) = (dot(mm, 1, 3), dot(mm, 2, 3));
    let c1 = Expr::int(-3) * s23 / &s11;
    let c2 = (Expr::int(5) * &s11 * s22 - Expr::int(35) * s12.powi(2) + Expr::int(8) * &s11 * s13)
        / (Expr::int(2) * s11.powi(2));
    let c3 = Expr::int(6) * s12 / &s11;
    field(m, 3, |i| &c1 * y(i, 1) + &c2 * y(i, 2) + &c3 * y(i, 3))
}

/// `(|y1|^2 |y2|^2 - (y1.y2)^2) / |y1|^5`, the squared curvature times speed.
pub fn curvature_lagrangian(m: usize) -> Lagrangian {
    let mm = m as u32;
    let (s11, s12, s22) = (dot(mm, 1, 1), dot(mm, 1, 2), dot(mm, 2, 2));
    let l = (&s11 * s22 - s12.powi(2)) * s11.pow(crate::symexpr::Exponent::new(-5, 2));
    Lagrangian::new(m, 2, l).expect("well-formed example")
}

/// Free particle `1/2 |y1|^2`, not parametric.
pub fn free_particle(m: usize) -> Lagrangian {
    Lagrangian::new(m, 1, dot(m as u32, 1, 1) * Expr::rational(1, 2)).expect("well-formed example")
}

/// Euclidean arc length `|y1|`.
pub fn arc_length(m: usize) -> Lagrangian {
    Lagrangian::new(m, 1, dot(m as u32, 1, 1).sqrt()).expect("well-formed example")
}
