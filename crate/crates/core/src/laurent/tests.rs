use num_complex::Complex;
use num_traits::{One, Zero};

use super::Jet;
use crate::scalar::{c_abs, c_real, Real};
use crate::stepset::StepSet;
use crate::{Mp, Poly, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn sample(seed: u64, nvars: usize) -> Poly {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    let count = 2 + (next() % 5) as usize;
    Poly::from_terms(
        nvars,
        (0..count).map(|_| {
            let e = (0..nvars).map(|_| (next() % 5) as i32 - 2).collect();
            (e, q(next() % 7 - 3, 1 + next() % 4))
        }),
    )
}

fn x_plus_inverse() -> Poly {
    &Poly::var(1, 0) + &Poly::inv_var(1, 0)
}

#[test]
fn squares_and_products_expand() {
    let s = x_plus_inverse();
    let want = Poly::from_terms(1, [(vec![2], q(1, 1)), (vec![0], q(2, 1)), (vec![-2], q(1, 1))]);
    assert_eq!(&s * &s, want);
    assert_eq!(s.pow(2), want);

    let x = &Poly::var(2, 0) - &Poly::inv_var(2, 0);
    let y = &Poly::var(2, 1) - &Poly::inv_var(2, 1);
    let want = Poly::from_terms(
        2,
        [(vec![1, 1], q(1, 1)), (vec![1, -1], q(-1, 1)), (vec![-1, 1], q(-1, 1)), (vec![-1, -1], q(1, 1))],
    );
    assert_eq!(&x * &y, want);
}

#[test]
fn ring_laws_hold_on_samples() {
    for seed in 0..40 {
        let (a, b, c) = (sample(seed, 2), sample(seed + 100, 2), sample(seed + 200, 2));
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert!((&a - &a).is_zero());
        assert!((&a * &b).terms().all(|(e, c)| e.len() == 2 && !c.is_zero()));
    }
}

#[test]
fn inversion_is_an_involution() {
    for seed in 0..20 {
        let p = sample(seed, 3);
        for v in 0..3 {
            assert_eq!(p.invert_var(v).invert_var(v), p);
        }
    }
}

#[test]
fn slices_reassemble() {
    for seed in 0..20 {
        let p = sample(seed, 2);
        for v in 0..2 {
            let (lo, hi) = p.degree_range(v).unwrap();
            let mut back = Poly::zero(2);
            for k in lo..=hi {
                let mut shift = vec![0; 2];
                shift[v] = k;
                back = &back + &p.slice(v, k).shift(&shift);
            }
            assert_eq!(back, p);
        }
    }
}

#[test]
fn exact_evaluation_is_multiplicative() {
    let point = [q(2, 3), q(-5, 7)];
    for seed in 0..30 {
        let (a, b) = (sample(seed, 2), sample(seed + 50, 2));
        let lhs = (&a * &b).eval_exact(&point).unwrap();
        let rhs = a.eval_exact(&point).unwrap() * b.eval_exact(&point).unwrap();
        assert_eq!(lhs, rhs);
    }
    assert!(Poly::inv_var(2, 1).eval_exact(&[q(1, 1), q(0, 1)]).is_err());
}

#[test]
fn simple_walk_evaluations() {
    let s = StepSet::from_names(&["N", "S", "E", "W"]).unwrap();
    assert_eq!(s.poly().eval_exact(&[q(1, 1), q(1, 1)]).unwrap(), q(4, 1));
    let i = Complex::new(0.0f64, 1.0);
    let v = s.poly().eval(&[c_real(1.0f64), i]);
    assert!((v - c_real(2.0)).norm() < 1e-15);
}

fn tandem_point() -> Vec<Complex<Mp>> {
    vec![c_real(Mp::one()), c_real(Mp::one() / Mp::from_i64(3).sqrt())]
}

#[test]
fn conjugate_value_and_slices_at_the_critical_point() {
    let s = StepSet::from_names(&["N", "SE", "S", "SW"]).unwrap();
    let p = tandem_point();
    let v = s.conj_poly().eval(&p);
    let want = Mp::from_i64(2) * Mp::from_i64(3).sqrt();
    assert!(c_abs(&(v - c_real(want))).to_f64() < 1e-50);

    let poly = s.poly();
    assert_eq!(poly.slice(1, 1).drop_var(1), Poly::one(1));
    assert_eq!(poly.slice(1, -1).drop_var(1), &(&Poly::var(1, 0) + &Poly::one(1)) + &Poly::inv_var(1, 0));
    let b1 = poly.slice(0, 1).drop_var(0);
    assert_eq!(b1, Poly::inv_var(1, 0));
    let r = s.conj_poly().slice(0, 1).drop_var(0).eval(&p[1..]);
    assert!(c_abs(&(r - p[1].clone())).to_f64() < 1e-50);
}

#[test]
fn critical_jet_has_no_gradient() {
    let s = StepSet::from_names(&["N", "SE", "S", "SW"]).unwrap();
    let jet = Jet::from_laurent(&s.conj_poly(), &tandem_point(), 3);
    for a in 0..2 {
        let mut e = vec![0u16; 2];
        e[a] = 1;
        assert!(c_abs(&jet.coeff(&e)).to_f64() < 1e-50);
    }
    let want = -Mp::from_i64(2) * Mp::from_i64(3).sqrt();
    let got = jet.second_derivative_at_zero(1, 1);
    assert!(c_abs(&(got - c_real(want))).to_f64() < 1e-50);
}

#[test]
fn constant_jet_is_a_single_coefficient() {
    let five = Poly::constant(2, q(5, 1));
    let center = [Complex::new(0.3f64, 0.7), c_real(-2.0)];
    let jet = Jet::from_laurent(&five, &center, 3);
    assert_eq!(jet.value(), c_real(5.0));
    assert!(jet.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
}

#[test]
fn jet_matches_finite_differences() {
    let h = Mp::from_f64(1e-4);
    let center = vec![Complex::new(Mp::from_f64(0.8), Mp::from_f64(0.3)), c_real(Mp::from_f64(1.7))];
    for seed in 0..8 {
        let p = sample(seed, 2);
        let jet = Jet::from_laurent(&p, &center, 4);
        for axis in 0..2 {
            let at = |t: Mp| {
                let mut th = vec![Mp::zero(); 2];
                th[axis] = t;
                p.eval_on_torus(&center, &th)
            };
            let (f0, fp, fm) = (at(Mp::zero()), at(h.clone()), at(-h.clone()));
            let (fp2, fm2) = (at(h.clone() * Mp::from_i64(2)), at(-h.clone() * Mp::from_i64(2)));
            let mut e = vec![0u16; 2];
            e[axis] = 1;
            let d1 = (fp.clone() - fm.clone()) * c_real(Mp::one() / (Mp::from_i64(2) * h.clone()));
            e[axis] = 2;
            let d2 = (fp.clone() + fm.clone() - f0.clone() * c_real(Mp::from_i64(2))) * c_real(Mp::one() / (h.clone() * h.clone()));
            let d3 = (fp2 - fm2 - (fp - fm) * c_real(Mp::from_i64(2))) * c_real(Mp::one() / (Mp::from_i64(2) * h.clone().powi(3)));
            for (k, fd) in [(1u16, d1), (2, d2), (3, d3)] {
                e[axis] = k;
                let exact = jet.derivative_at_zero(&e);
                let scale = c_abs(&exact).to_f64().max(1.0);
                assert!(c_abs(&(exact - fd)).to_f64() / scale < 1e-6, "seed {seed} axis {axis} order {k}");
            }
        }
    }
}

fn close(a: &Jet<Mp>, b: &Jet<Mp>) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| c_abs(&(x.clone() - y.clone())).to_f64() < 1e-45)
}

#[test]
fn reciprocal_and_logarithm_invert() {
    let center = vec![Complex::new(Mp::from_f64(1.1), Mp::from_f64(-0.2)), c_real(Mp::from_f64(0.9))];
    let p = &Poly::from_terms(2, [(vec![1, 0], q(1, 1)), (vec![0, -1], q(2, 3)), (vec![1, 1], q(-1, 2))]) + &Poly::constant(2, q(3, 1));
    let f = Jet::from_laurent(&p, &center, 5);
    let one = Jet::one(2, 5);
    assert!(close(&(&f * &f.reciprocal().unwrap()), &one));
    assert!(close(&f.ln().unwrap().exp(), &f));
    let g = f.ln().unwrap();
    let want = crate::scalar::c_ln(&f.value());
    assert!(c_abs(&(g.value() - want)).to_f64() < 1e-45);
    assert!(close(&f.powi(3), &(&(&f * &f) * &f)));
    assert!(Jet::<Mp>::zero(2, 3).reciprocal().is_err());
}

#[test]
fn composition_agrees_with_direct_substitution() {
    let center = vec![Complex::new(Mp::from_f64(0.6), Mp::from_f64(0.4))];
    let last_center = Complex::new(Mp::from_f64(1.3), Mp::zero());
    let p = &Poly::from_terms(2, [(vec![1, 2], q(1, 1)), (vec![-1, 1], q(5, 2)), (vec![0, 0], q(-1, 1))]) + &Poly::var(2, 1);
    let last = Jet::from_laurent(&Poly::var(1, 0), std::slice::from_ref(&last_center), 4);
    let composed = Jet::compose_last(&p, &center, &last).unwrap();
    let direct = Jet::from_laurent(&p, &[center[0].clone(), last_center], 4);
    // Both variables share one angle, so the composed jet is the diagonal of the direct one.
    for e in composed.index().exponents() {
        let (k, c) = (e[0], composed.coeff(e));
        let mut sum = c_real(Mp::zero());
        for j in 0..=k {
            sum = sum + direct.coeff(&[k - j, j]);
        }
        assert!(c_abs(&(c - sum)).to_f64() < 1e-45);
    }
}
