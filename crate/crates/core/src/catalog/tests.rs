use super::*;
use crate::enumerate::{count_walks, CountMode};
use crate::stepset::SymmetryKind;

#[test]
fn twenty_three_models_by_class() {
    let e = entries();
    assert_eq!(e.len(), 23);
    let count = |c: ModelClass| e.iter().filter(|x| x.class == c).count();
    assert_eq!(count(ModelClass::HighlySymmetric), 4);
    assert_eq!(count(ModelClass::PositiveDrift), 6);
    assert_eq!(count(ModelClass::NegativeDrift), 6);
    assert_eq!(count(ModelClass::AlgebraicExceptional), 4);
    assert_eq!(count(ModelClass::NoSymmetryDFinite), 3);
    assert_eq!(e.iter().filter(|x| x.boundary.is_some()).count(), 19);
}

#[test]
fn stored_classes_agree_with_step_sets() {
    for e in entries() {
        let s = e.step_set();
        let c = s.classify();
        match e.class {
            ModelClass::HighlySymmetric => assert!(s.is_highly_symmetric(), "{}", e.name),
            ModelClass::PositiveDrift => assert!(c.drift_sign > 0 && !s.is_highly_symmetric(), "{}", e.name),
            ModelClass::NegativeDrift => assert!(c.drift_sign < 0, "{}", e.name),
            _ => assert_eq!(c.kind, SymmetryKind::Unsupported, "{}", e.name),
        }
        let sum: i64 = e.steps.len() as i64;
        assert_eq!(s.total_weight(), Rational::from_integer(sum.into()));
    }
}

#[test]
fn stored_expressions_parse() {
    for e in entries() {
        let mut forms = vec![e.anywhere];
        if let Some(t) = e.boundary {
            forms.extend([t.x_axis, t.y_axis, t.origin]);
        }
        for f in forms {
            assert!(f.rate_value::<f64>().unwrap() > 1.0, "{}", e.name);
            assert!(f.constant_values::<f64>().unwrap().iter().all(|c| *c >= 0.0), "{}", e.name);
        }
    }
}

#[test]
fn lookup_by_name_alias_and_steps() {
    let pi = std::f64::consts::PI;
    let e = lookup("N,S,E,W").unwrap();
    assert_eq!(e.anywhere.alpha(), Rational::from_integer((-1).into()));
    assert!((e.anywhere.constant_values::<f64>().unwrap()[0] - 4.0 / pi).abs() < 1e-15);
    assert_eq!(e.anywhere.rate_value::<f64>().unwrap(), 4.0);

    let e = lookup("N,SE,S,SW").unwrap();
    let c = e.anywhere.constant_values::<f64>().unwrap();
    assert!((c[0] - 12.0 * 3f64.sqrt() / pi).abs() < 1e-13 && (c[1] - 18.0 / pi).abs() < 1e-13);
    assert!((e.anywhere.rate_value::<f64>().unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-15);

    let e = lookup("{n, w, se}").unwrap();
    assert_eq!(e.gf_closed_form.unwrap().expression, "(1-t-sqrt(1-2t-3t^2))/(2t^2)");
    assert!((e.anywhere.constant_values::<f64>().unwrap()[0] - 3.0 * 3f64.sqrt() / (2.0 * pi.sqrt())).abs() < 1e-14);
    assert_eq!(e.anywhere.alpha(), Rational::new((-3).into(), 2.into()));

    assert_eq!(lookup("gessel").unwrap().name, "NE,E,SW,W");
    assert!(lookup("N,E").is_err());
    assert!(lookup("nonsense").is_err());
}

#[test]
fn algebraic_generating_functions_match_enumeration() {
    for e in entries().iter().filter(|e| e.gf_closed_form.is_some()) {
        let gf = e.gf_closed_form.unwrap();
        let dp = count_walks(&e.step_set(), 20, &EndpointFilter::Anywhere, CountMode::Exact).unwrap();
        assert_eq!(gf.series(20).as_slice(), dp.exact().unwrap(), "{}", e.name);
    }
}

#[test]
fn weighted_family_regimes() {
    let pos = weighted_model([1, 2, 1, 1, 1]).unwrap();
    assert!(pos.classify().drift_sign > 0);
    let (rate, alpha, k) = weighted_closed_form::<f64>([1, 2, 1, 1, 1]).unwrap();
    assert_eq!(rate, 10.0);
    assert_eq!(alpha, Rational::new((-1).into(), 2.into()));
    assert!((k - 0.4 * (10.0 / (4.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-14);
    let neg = weighted_model([1, 1, 1, 2, 2]).unwrap();
    assert!(neg.classify().drift_sign < 0);
    let (rate, _, _) = weighted_closed_form::<f64>([1, 1, 1, 2, 2]).unwrap();
    assert!((rate - (2.0 + 2.0 * 18f64.sqrt())).abs() < 1e-14);
    let (rate, _, k) = weighted_closed_form::<f64>([1, 1, 1, 1, 1]).unwrap();
    assert_eq!(rate, 8.0);
    assert!((k - 8.0 / (3.0 * std::f64::consts::PI)).abs() < 1e-14);
    assert!(weighted_closed_form::<f64>([1, 1, 2, 2, 0]).is_none());
}

#[test]
fn builtins_resolve() {
    for name in BUILTIN_EXTRAS {
        assert!(builtin(name).is_some(), "{name}");
    }
    assert_eq!(builtin("cube-negative").unwrap().steps().len(), 5);
    assert_eq!(builtin("simple").unwrap().label(), "N,S,E,W");
    assert!(builtin("nothing").is_none());
}
