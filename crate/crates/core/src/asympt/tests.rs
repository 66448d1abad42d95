use super::*;
use crate::critical::{contributing_points, minimal_point};
use crate::kernel::diag_kernel;
use crate::scalar::c_real;
use crate::Mp;

fn model(names: &[&str]) -> StepSet {
    StepSet::from_names(names).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

fn pi() -> f64 {
    std::f64::consts::PI
}

#[test]
fn closed_forms_for_each_regime() {
    let e = asympt_closed::<f64>(&model(&["NE", "NW", "S"])).unwrap();
    let p = e.periodic.unwrap();
    assert_eq!(p.period, 1);
    assert!(close(p.constants[0], 3f64.sqrt() / (2.0 * pi().sqrt()), 1e-14));
    assert_eq!(p.alpha, Rational::new((-1).into(), 2.into()));

    let e = asympt_closed::<f64>(&model(&["N", "SE", "S", "SW"])).unwrap();
    let p = e.periodic.unwrap();
    assert_eq!(p.period, 2);
    assert!(close(p.constants[0], 12.0 * 3f64.sqrt() / pi(), 1e-13));
    assert!(close(p.constants[1], 18.0 / pi(), 1e-13));
    assert!(close(p.modulus, 2.0 * 3f64.sqrt(), 1e-15));
    assert_eq!(p.alpha, Rational::from_integer((-2).into()));

    let e = asympt_closed::<f64>(&model(&["N", "S", "E", "W"])).unwrap();
    assert!(close(e.periodic.unwrap().constants[0], 4.0 / pi(), 1e-14));
}

#[test]
fn engine_matches_known_constants_at_both_points() {
    let s = model(&["N", "SE", "S", "SW"]);
    let k = diag_kernel(&s).unwrap();
    let pts = contributing_points::<Mp>(&s).unwrap();
    for p in &pts {
        let term = smooth_contribution(&s, &k, &k.g, p, 2).unwrap();
        assert!(term.coefficients[0].norm_sqr().to_f64() < 1e-60);
        let sign = p.w[1].re.to_f64().signum();
        let expected = 3.0 * 3f64.sqrt() * (2.0 + sign * 3f64.sqrt()) / pi();
        let got = term.coefficients[1].re.to_f64();
        assert!(close(got, expected, 1e-13), "{got} vs {expected}");
        let (kp, cp) = negative_drift_closed_constant(&s, p).unwrap();
        let closed = kp * cp;
        let diff = (closed - term.coefficients[1].clone()).norm_sqr().to_f64().sqrt();
        assert!(diff < 1e-40);
        let ids = derivative_identities(&s, p).unwrap();
        assert!(ids.max_jet_residual.to_f64() < 1e-40);
        assert!(ids.max_difference_residual.to_f64() < 1e-12);
    }
}

#[test]
fn transverse_reproduces_positive_drift_constant() {
    for (names, expected) in [
        (&["NE", "NW", "S"][..], 3f64.sqrt() / (2.0 * pi().sqrt())),
        (&["N", "NW", "NE", "S"], 4.0 / (3.0 * pi().sqrt())),
    ] {
        let s = model(names);
        let k = diag_kernel(&s).unwrap();
        let p = minimal_point::<f64>(&s).unwrap();
        let det = transverse_gamma_determinant(&k, &p).unwrap();
        assert!((det.re - 1.0).abs() < 1e-14 && det.im.abs() < 1e-14);
        let term = transverse_contribution(&s, &k, &k.g, &p).unwrap();
        assert!(close(term.coefficients[0].re, expected, 1e-13));
    }
    let s = model(&["NE", "NW", "S"]);
    let k = diag_kernel(&s).unwrap();
    let w = vec![c_real(-1.0), c_real(1.0)];
    let p = ContributingPoint::numeric(&s, w, Stratum::TransverseV1V3);
    assert!(transverse_contribution(&s, &k, &k.g, &p).unwrap().higher_order_required);
}

#[test]
fn full_expansion_with_imaginary_points() {
    let s = model(&["N", "SE", "SW"]);
    let e = asympt_full::<Mp>(&s, &EndpointFilter::Anywhere, None).unwrap();
    let p = e.periodic.unwrap();
    assert_eq!(p.period, 2);
    assert!(close(p.constants[0].to_f64(), 24.0 * 2f64.sqrt() / pi(), 1e-13));
    assert!(close(p.constants[1].to_f64(), 32.0 / pi(), 1e-13));

    let x_axis = EndpointFilter::Axes(vec![0]);
    let e = asympt_full::<Mp>(&s, &x_axis, None).unwrap();
    let p = e.periodic.unwrap();
    assert_eq!(p.period, 4);
    assert_eq!(p.alpha, Rational::from_integer((-3).into()));
    let r2 = 2f64.sqrt();
    let want = [448.0 * r2, 640.0, 416.0 * r2, 512.0];
    for (c, w) in p.constants.iter().zip(want) {
        assert!(close(c.to_f64(), w / (9.0 * pi()), 1e-12), "{} vs {}", c.to_f64(), w / (9.0 * pi()));
    }
}

#[test]
fn origin_returns_for_simple_walks() {
    let s = model(&["N", "S", "E", "W"]);
    let e = asympt_full::<f64>(&s, &EndpointFilter::Origin, None).unwrap();
    let p = e.periodic.unwrap();
    assert_eq!(p.period, 2);
    assert_eq!(p.alpha, Rational::from_integer((-3).into()));
    assert!(close(p.constants[0], 32.0 / pi(), 1e-9));
    assert_eq!(p.constants[1], 0.0);
}

#[test]
fn three_dimensional_negative_drift_example() {
    let mut vectors = Vec::new();
    for a in [-1i8, 1] {
        for b in [-1i8, 1] {
            vectors.push(vec![a, b, -1]);
        }
    }
    vectors.push(vec![0, 0, 1]);
    let s = StepSet::from_vectors(3, &vectors).unwrap();
    let closed = asympt_closed::<f64>(&s).unwrap().periodic.unwrap();
    let base = 2f64.powf(4.5) / (9.0 * pi().powf(1.5));
    assert!(close(closed.constants[0], base * 10.0, 1e-13));
    assert!(close(closed.constants[1], base * 8.0, 1e-13));
    let full = asympt_full::<Mp>(&s, &EndpointFilter::Anywhere, None).unwrap().periodic.unwrap();
    for (a, b) in full.constants.iter().zip(&closed.constants) {
        assert!(close(a.to_f64(), *b, 1e-12));
    }
}
