//! Worked examples checked against independent oracles.

use std::collections::BTreeMap;

use jetfield::geod::{arclength_resample, circle_fit, curvature_series, integrate, CircleFit};
use jetfield::homog::{are_proj_equivalent, group_transform, lambda_extract, projective_shift, DEField};
use jetfield::jetcalc::{act, apply_vf, delta_field, JetPoint, VectorField};
use jetfield::jetgroup::{
    algebra_bracket, bell, embed_l1, embed_l2, exp_k, log_k, phi_map, AlgebraElement, JetGroupElement,
};
use jetfield::symexpr::{
    dot, equal_prob, equal_prob_in, parse, sample_point, subst, total_derivative, zero_prob, Expr, SampleConfig,
    Tape, Var,
};
use jetfield::systems;
use jetfield::varcalc::{extract_el_field_at, Lagrangian, Variational};
use jetfield::Error;

fn cfg() -> SampleConfig {
    SampleConfig::default()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn group_law_by_hand() {
    let x = JetGroupElement::new(vec![2.0, 1.0]).unwrap();
    let y = JetGroupElement::new(vec![3.0, 4.0]).unwrap();
    assert_eq!(x.mul(&y).unwrap().coords(), [6.0, 17.0]);
    assert_eq!(x.inv().coords(), [0.5, -0.125]);
    let z = JetGroupElement::new(vec![2.0, 1.0, 5.0]).unwrap();
    assert_eq!(z.project(1).unwrap().coords(), [2.0]);
    assert_eq!(embed_l1(3.0, 4).unwrap().coords(), [3.0, 0.0, 0.0, 0.0]);
}

#[test]
fn bell_entries() {
    let eta = [1.5, -0.5, 2.0];
    let b42: f64 = bell(4, 2, &eta).unwrap();
    assert!((b42 - (4.0 * 1.5 * 2.0 + 3.0 * 0.25)).abs() < 1e-14);
    let b32: f64 = bell(3, 2, &eta).unwrap();
    assert!((b32 - 3.0 * 1.5 * -0.5).abs() < 1e-14);
    let b55: f64 = bell(5, 5, &eta).unwrap();
    assert!((b55 - 1.5f64.powi(5)).abs() < 1e-12);
}

#[test]
fn moebius_embedding_is_closed() {
    // composite of a^2x/(a-bx) and c^2x/(c-dx) has parameters (ac, ad + bc^2)
    let (a, b, c, d) = (1.5, 0.4, 0.8, -0.3);
    let lhs = embed_l2(a, b, 5).unwrap().mul(&embed_l2(c, d, 5).unwrap()).unwrap();
    let rhs = embed_l2(a * c, a * d + b * c * c, 5).unwrap();
    assert!(close(lhs.coords(), rhs.coords(), 1e-12), "{:?} vs {:?}", lhs.coords(), rhs.coords());
    assert_eq!(embed_l2(2.0, 0.0, 3).unwrap().coords(), [2.0, 0.0, 0.0]);
}

#[test]
fn exp_and_log_by_hand() {
    let (k2, k3) = (0.7, -0.4);
    let y = exp_k(&AlgebraElement::new(vec![0.0, k2, k3])).unwrap();
    assert!(close(y.coords(), &[1.0, 2.0 * k2, 6.0 * k3 + 6.0 * k2 * k2], 1e-14));
    let (y2, y3) = (0.9, 1.3);
    let k = log_k(&JetGroupElement::new(vec![1.0, y2, y3]).unwrap()).unwrap();
    assert!(close(k.coeffs(), &[0.0, y2 / 2.0, (y3 - 1.5 * y2 * y2) / 6.0], 1e-14));
    assert_eq!(exp_k(&AlgebraElement::zero(4)).unwrap(), JetGroupElement::identity(4));
}

#[test]
fn algebra_examples() {
    assert_eq!(algebra_bracket(1, 2, 3).unwrap(), AlgebraElement::basis(2, 3).scale(-1.0));
    assert_eq!(algebra_bracket(2, 3, 4).unwrap(), AlgebraElement::basis(4, 4).scale(-1.0));
    assert_eq!(algebra_bracket(2, 3, 3).unwrap(), AlgebraElement::zero(3));
    let x3 = [0.0, 0.0, 0.0, 1.0];
    assert_eq!(phi_map(&x3, 4).unwrap(), AlgebraElement::basis(3, 4));
    assert_eq!(phi_map(&x3, 2).unwrap(), AlgebraElement::zero(2));
}

#[test]
fn fundamental_fields_by_hand() {
    let d1 = delta_field(2, 1, 1);
    assert_eq!(d1.component(1, 1), Expr::var(1, 1));
    assert_eq!(d1.component(1, 2), Expr::int(2) * Expr::var(1, 2));
    let d2 = delta_field(3, 2, 1);
    assert_eq!(d2.component(1, 2), Expr::int(2) * Expr::var(1, 1));
    assert_eq!(d2.component(1, 3), Expr::int(6) * Expr::var(1, 2));
    assert!(d2.component(1, 1).is_zero());
    let d4 = delta_field(4, 4, 2);
    assert_eq!(d4.component(2, 4), Expr::int(24) * Expr::var(2, 1));
    // dilation with factor k scales y_1 by k
    let p = JetPoint::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
    assert_eq!(act(&embed_l1(3.0, 1).unwrap(), &p).unwrap().row(1), [6.0]);
}

#[test]
fn fields_applied_to_functions() {
    let s11 = dot(2, 1, 1);
    assert!(equal_prob(&apply_vf(&delta_field(2, 1, 2), &s11), &(Expr::int(2) * &s11), &cfg()).equal);
    let circle = systems::circle(2).vector_field();
    assert!(equal_prob(&apply_vf(&circle, &s11), &(Expr::int(2) * dot(2, 1, 2)), &cfg()).equal);
    assert!(equal_prob(&total_derivative(&s11), &(Expr::int(2) * dot(2, 1, 2)), &cfg()).equal);
    let circle_at = systems::circle(2)
        .eval(&JetPoint::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap())
        .unwrap();
    assert_eq!(circle_at, [-1.0, 0.0]);
}

#[test]
fn parse_examples() {
    let e = parse("(y1_1*y2_2 - y2_1*y1_2)^(2)/ (y1_1^2+y2_1^2)^(5/2)", 2, 2).unwrap();
    let l = systems::curvature_lagrangian(2);
    assert!(equal_prob(&e, l.expr(), &cfg()).equal);
    assert!(equal_prob(&parse("sqrt(y1_1^2+y2_1^2)", 2, 1).unwrap(), &dot(2, 1, 1).sqrt(), &cfg()).equal);
    assert!(matches!(parse("y3_1", 2, 1), Err(Error::IndexOutOfRange { .. })));
    assert!(parse("1/y1_1", 1, 1).unwrap().eval_slice(&[0.0, 0.0], 1).is_err());
}

/// Prolonging a field by total differentiation predicts the higher derivatives
/// of its integral curves.
#[test]
fn prolongation_matches_integrated_curve() {
    let field = systems::circle(2);
    let bind: BTreeMap<Var, Expr> =
        (1..=2).map(|i| (Var::new(i, 3), field.component(i as usize).clone())).collect();
    let next: Vec<Expr> = field.components().iter().map(|g| subst(&total_derivative(g), &bind)).collect();
    let tape = Tape::compile(&next, 2);
    let init = JetPoint::from_rows(&[vec![0.2, -0.1], vec![0.6, 1.1], vec![-0.3, 0.5]]).unwrap();
    let h = 1e-3;
    let tr = integrate(&field, &init, 0.2, h).unwrap();
    let gamma = field.tape();
    for k in [20, 100, 180] {
        let fd: Vec<f64> = (0..2)
            .map(|i| {
                let a = gamma.eval_vec(tr.states[k + 1].coords()).unwrap()[i];
                let b = gamma.eval_vec(tr.states[k - 1].coords()).unwrap()[i];
                (a - b) / (2.0 * h)
            })
            .collect();
        let predicted = tape.eval_vec(tr.states[k].coords()).unwrap();
        assert!(close(&fd, &predicted, 1e-6), "{fd:?} vs {predicted:?}");
    }
}

#[test]
fn homogeneity_examples() {
    let simple = lambda_extract(&systems::circle_simple(3), &cfg()).unwrap();
    assert!(simple.homogeneous);
    assert!(simple.lambda[0].is_zero());
    let deg1 = apply_vf(&delta_field(2, 1, 3), &simple.lambda[1]);
    assert!(equal_prob(&deg1, &simple.lambda[1], &cfg()).equal);
    let non = lambda_extract(&systems::nonhomogeneous(2), &cfg()).unwrap();
    assert!(!non.homogeneous);
    let shifted = projective_shift(&systems::circle(2), &(dot(2, 1, 2) / dot(2, 1, 1)));
    assert!(lambda_extract(&shifted, &cfg()).unwrap().homogeneous);
}

#[test]
fn projective_equivalence_examples() {
    let (c, s) = (systems::circle(2), systems::circle_simple(2));
    let cmp = are_proj_equivalent(&c, &s, &cfg()).unwrap();
    assert!(cmp.equivalent);
    let (s11, s12, s22) = (dot(2, 1, 1), dot(2, 1, 2), dot(2, 2, 2));
    let oracle = (Expr::int(2) * &s11 * s22 + s12.powi(2)) / (Expr::int(4) * s11.powi(2));
    assert!(equal_prob(&cmp.mu, &oracle, &cfg()).equal);
    let same = are_proj_equivalent(&c, &c, &cfg()).unwrap();
    assert!(same.equivalent && same.mu.is_zero());
    assert!(matches!(
        are_proj_equivalent(&c, &systems::curvature_field(2), &cfg()),
        Err(Error::OrderMismatch { .. })
    ));
}

#[test]
fn group_transform_composes() {
    let field = systems::circle_simple(2);
    let a = JetGroupElement::new(vec![1.3, 0.4, -0.2]).unwrap();
    let b = JetGroupElement::new(vec![0.7, -0.5, 0.3]).unwrap();
    let lhs = group_transform(&group_transform(&field, &a).unwrap(), &b).unwrap();
    let rhs = group_transform(&field, &b.mul(&a).unwrap()).unwrap();
    let pairs: Vec<(Expr, Expr)> = lhs.components().iter().cloned().zip(rhs.components().iter().cloned()).collect();
    assert!(jetfield::symexpr::equal_prob_pairs(&pairs, 2, 2, &cfg()).equal);
    let id = group_transform(&field, &JetGroupElement::identity(3)).unwrap();
    assert!(equal_prob(id.component(1), field.component(1), &cfg()).equal);
}

#[test]
fn zermelo_and_hilbert_examples() {
    let var = Variational::new(&systems::curvature_lagrangian(2));
    assert!(var.theta_delta_residuals(&cfg()).iter().all(|r| *r < 1e-10));
    assert!(var.theta_residual(&cfg()) < 1e-10);
    let l = systems::curvature_lagrangian(2);
    let d1 = apply_vf(&delta_field(2, 1, 2), l.expr());
    assert!(equal_prob(&d1, l.expr(), &cfg()).equal);
}

#[test]
fn el_form_matches_classical_for_polynomials() {
    for (text, m, n) in [
        ("y1_0*y1_1^2 + y2_2*y1_1", 2, 2),
        ("y1_2^2*y1_0 - 3*y1_1*y1_2", 1, 2),
        ("y1_1^3 + y1_0*y2_1", 2, 1),
    ] {
        let lag = Lagrangian::parse(m, n, text).unwrap();
        let var = Variational::new(&lag);
        assert!(var.classical_residual(&cfg()) < 1e-12, "{text}");
        assert!(var.horizontality_residual(&cfg()) < 1e-12, "{text}");
    }
}

#[test]
fn dtheta_annihilates_total_derivative_on_shell() {
    let var = Variational::new(&systems::curvature_lagrangian(2));
    let field = systems::curvature_field(2);
    let dtheta = var.dtheta();
    for seed in 0..5 {
        let p = sample_point(2, 3, seed);
        let full = p.extend(&field.eval(&p).unwrap());
        let w = dtheta.matrix_at(&p).unwrap();
        let t = nalgebra::DVector::from_row_slice(&full.coords()[2..]);
        let contracted = w.transpose() * t;
        assert!(contracted.amax() < 1e-9 * (1.0 + w.amax()), "{}", contracted.amax());
    }
}

#[test]
fn shifted_field_is_still_extremal() {
    // Gamma + y1 differs from Gamma by a multiple of Delta^3, so its geodesics are the same paths
    let var = Variational::new(&systems::curvature_lagrangian(2));
    let shifted = systems::curvature_field(2).map(|i, g| g + Expr::var(i as u32, 1));
    let on_shell = var.on_shell(&shifted).unwrap();
    assert!(zero_prob(&on_shell, 2, 3, &cfg().with_tolerance(1e-7)).equal);
}

#[test]
fn pointwise_extraction() {
    let var = Variational::new(&systems::curvature_lagrangian(3));
    let field = systems::curvature_field(3);
    for seed in 0..5 {
        let p = sample_point(3, 3, seed);
        let ex = extract_el_field_at(&var, &p).unwrap();
        assert_eq!(ex.kernel.len(), 1);
        let k = &ex.kernel[0];
        let y1 = p.row(1);
        let cos = k.iter().zip(y1).map(|(a, b)| a * b).sum::<f64>().abs() / p.row_norm(1);
        assert!((cos - 1.0).abs() < 1e-8);
        // Gamma(p) - particular has no component orthogonal to the kernel
        let d: Vec<f64> = field.eval(&p).unwrap().iter().zip(&ex.particular).map(|(a, b)| a - b).collect();
        let along = d.iter().zip(k).map(|(a, b)| a * b).sum::<f64>();
        let rest = d.iter().zip(k).map(|(a, b)| (a - along * b).powi(2)).sum::<f64>().sqrt();
        assert!(rest < 1e-6 * (1.0 + d.iter().map(|x| x.abs()).sum::<f64>()), "{rest}");
    }
}

#[test]
fn circles_and_lines() {
    let k = 2.5;
    let init = JetPoint::from_rows(&[vec![1.0, -1.0], vec![1.0, 0.0], vec![0.0, k]]).unwrap();
    let tr = integrate(&systems::circle(2), &init, 2.0, 1e-3).unwrap();
    match circle_fit(&arclength_resample(&tr, 1e-2).unwrap()).unwrap() {
        CircleFit::Circle { radius, residual, .. } => {
            assert!((radius - 1.0 / k).abs() < 1e-7 && residual < 1e-7);
        }
        other => panic!("{other:?}"),
    }
    let line = JetPoint::from_rows(&[vec![0.0, 0.0], vec![0.6, 0.8], vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
    let tr = integrate(&systems::curvature_field(2), &line, 2.0, 1e-2).unwrap();
    assert!(curvature_series(&tr).unwrap().iter().all(|c| *c == 0.0));
    let end = tr.last();
    assert!((end.get(1, 0) - 1.2).abs() < 1e-12 && (end.get(2, 0) - 1.6).abs() < 1e-12);
    assert!(matches!(circle_fit(&arclength_resample(&tr, 0.1).unwrap()).unwrap(), CircleFit::Line { .. }));
}

#[test]
fn de_field_validation() {
    assert!(DEField::parse(2, 2, &["y1_3", "0"]).is_err());
    assert!(DEField::parse(2, 2, &["0"]).is_err());
    let field = DEField::parse(1, 1, &["y1_1^2"]).unwrap();
    let mut v = VectorField::new(1, 1);
    v.set(1, 0, Expr::var(1, 1));
    v.set(1, 1, Expr::var(1, 1).powi(2));
    assert_eq!(field.vector_field().component_pairs(&v).iter().filter(|(a, b)| a != b).count(), 0);
    assert!(equal_prob_in(field.component(1), &Expr::var(1, 1).powi(2), 1, 1, &cfg()).equal);
}
