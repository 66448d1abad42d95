//! Minimal critical points of the kernel denominator and the contributing
//! singularities that drive coefficient asymptotics.
//!
//! Points are stored in canonical coordinates. Every candidate has its first
//! `d - 1` coordinates in `{+1, -1}` and a last coordinate whose square is
//! rational, so moduli and exponential rates are kept exactly as quadratic
//! surds alongside the floating-point coordinates.

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c_abs, c_inv, c_real, Real, Tolerance};
use crate::stepset::{StepSet, SymmetryKind};
use crate::surd::QuadSurd;
use crate::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stratum {
    /// Smooth point of `{H1 = 0}`.
    SmoothV1,
    /// Transverse intersection of `{H1 = 0}` and `{z_d = 1}`.
    TransverseV1V3,
}

/// Exact description of a point `(s_1, ..., s_{d-1}, x)` with `s_j = +-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoint {
    pub signs: Vec<i8>,
    pub last: QuadSurd,
    pub last_squared: Rational,
    /// Exponential growth `S(w)` (conjugated in the last axis), i.e. `1/(w_1...w_d t)`.
    pub rate: QuadSurd,
}

#[derive(Clone, Debug)]
pub struct ContributingPoint<T> {
    pub w: Vec<Complex<T>>,
    pub t: Complex<T>,
    pub stratum: Stratum,
    /// Exponent `k` of the fourth root of unity `i^k` multiplying the
    /// principal square root for the last coordinate.
    pub nu: Option<u8>,
    pub exact: Option<ExactPoint>,
}

impl<T: Real> ContributingPoint<T> {
    /// A point given only numerically, with `t` solved from `H1 = 0`.
    pub fn numeric(s: &StepSet, w: Vec<Complex<T>>, stratum: Stratum) -> Self {
        let rate = s.conj_poly().eval(&w);
        let prod = w.iter().fold(c_real(T::one()), |acc, x| acc * x.clone());
        let t = c_inv(&(prod * rate));
        ContributingPoint { w, t, stratum, nu: None, exact: None }
    }

    fn from_exact(exact: ExactPoint, stratum: Stratum, nu: Option<u8>) -> Self {
        let mut w: Vec<Complex<T>> = exact.signs.iter().map(|&s| c_real(T::from_i64(s as i64))).collect();
        w.push(exact.last.to_complex());
        let prod = w.iter().fold(c_real(T::one()), |acc, x| acc * x.clone());
        let t = c_inv(&(prod * exact.rate.to_complex::<T>()));
        ContributingPoint { w, t, stratum, nu, exact: Some(exact) }
    }

    pub fn rate(&self) -> Complex<T> {
        match &self.exact {
            Some(e) => e.rate.to_complex(),
            None => {
                let prod = self.w.iter().fold(c_real(T::one()), |acc, x| acc * x.clone());
                c_inv(&(prod * self.t.clone()))
            }
        }
    }

    /// True when every one of the first `d - 1` coordinates equals one.
    pub fn on_positive_axes(&self) -> bool {
        match &self.exact {
            Some(e) => e.signs.iter().all(|&s| s == 1),
            None => {
                let tol = T::from_f64(1e-12);
                let n = self.w.len() - 1;
                self.w[..n].iter().all(|x| c_abs(&(x.clone() - c_real(T::one()))) < tol)
            }
        }
    }
}

fn require_supported(s: &StepSet) -> Result<()> {
    if s.classify().kind == SymmetryKind::Unsupported {
        return Err(Error::Unsupported(format!("{} is outside the supported symmetry classes", s.label())));
    }
    Ok(())
}

fn eval_at_signs(p: &Poly, signs: &[i8]) -> Rational {
    let point: Vec<Rational> = signs.iter().map(|&x| Rational::from_integer((x as i64).into())).collect();
    p.eval_exact(&point).expect("sign points avoid zero coordinates")
}

/// `i * x` for a surd that is either rational or a pure radical.
fn times_i(x: &QuadSurd) -> QuadSurd {
    let minus_one = num_bigint::BigInt::from(-1);
    if x.b.is_zero() {
        return QuadSurd { a: Rational::zero(), b: x.a.clone(), m: minus_one };
    }
    assert!(x.a.is_zero(), "mixed surd");
    if x.m.is_positive() {
        QuadSurd { a: Rational::zero(), b: x.b.clone(), m: -x.m.clone() }
    } else {
        let mag = -x.m.clone();
        let (a, b, m) = if mag.is_one() {
            (-x.b.clone(), Rational::zero(), num_bigint::BigInt::one())
        } else {
            (Rational::zero(), -x.b.clone(), mag)
        };
        QuadSurd { a, b, m }
    }
}

/// Exact rate `Q + x A + B/x` at `(signs, x)` where `x^2 = r`.
fn exact_rate(s: &StepSet, signs: &[i8], x: &QuadSurd, r: &Rational) -> QuadSurd {
    let dec = s.decomposition();
    let a = eval_at_signs(&dec.a, signs);
    let q = eval_at_signs(&dec.q, signs);
    let b = eval_at_signs(&dec.b, signs);
    QuadSurd::rational(q).add(&x.scale(&(a + b / r))).expect("rational plus surd")
}

fn sign_vectors(k: usize) -> Vec<Vec<i8>> {
    (0u32..1 << k)
        .map(|mask| (0..k).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

/// Minimal growth rate `Q(1) + 2 sqrt(A(1) B(1))` of the smooth regime.
pub fn smooth_rate(s: &StepSet) -> QuadSurd {
    let dec = s.decomposition();
    let a1 = dec.a.sum_coeffs();
    let b1 = dec.b.sum_coeffs();
    let q1 = dec.q.sum_coeffs();
    let two = Rational::from_integer(2.into());
    QuadSurd::rational(q1).add(&QuadSurd::sqrt_of(&(a1 * b1)).scale(&two)).expect("rational plus surd")
}

/// Whether contributing points are smooth points with `|w_d|^2 = B(1)/A(1)`
/// rather than transverse points at `w_d = 1`.
fn smooth_regime(s: &StepSet, zero_axes: &[usize]) -> bool {
    let c = s.classify();
    c.drift_sign < 0 || (c.drift_sign > 0 && zero_axes.contains(&(s.dim() - 1)))
}

pub fn minimal_point<T: Real>(s: &StepSet) -> Result<ContributingPoint<T>> {
    require_supported(s)?;
    let signs = vec![1i8; s.dim() - 1];
    if s.classify().drift_sign < 0 {
        let dec = s.decomposition();
        let r = dec.b.sum_coeffs() / dec.a.sum_coeffs();
        let x = QuadSurd::sqrt_of(&r);
        let rate = exact_rate(s, &signs, &x, &r);
        let exact = ExactPoint { signs, last: x, last_squared: r, rate };
        return Ok(ContributingPoint::from_exact(exact, Stratum::SmoothV1, Some(0)));
    }
    let one = Rational::one();
    let rate = QuadSurd::rational(s.total_weight());
    let exact = ExactPoint { signs, last: QuadSurd::rational(one.clone()), last_squared: one, rate };
    let stratum = if s.is_highly_symmetric() { Stratum::SmoothV1 } else { Stratum::TransverseV1V3 };
    Ok(ContributingPoint::from_exact(exact, stratum, None))
}

pub fn contributing_points<T: Real>(s: &StepSet) -> Result<Vec<ContributingPoint<T>>> {
    contributing_points_for(s, &[])
}

/// Contributing points for walks constrained to end with the given
/// canonical coordinates equal to zero.
pub fn contributing_points_for<T: Real>(s: &StepSet, zero_axes: &[usize]) -> Result<Vec<ContributingPoint<T>>> {
    require_supported(s)?;
    let d = s.dim();
    let tol = Tolerance::<T>::for_precision();
    let mut out = Vec::new();
    if s.is_highly_symmetric() {
        let total = s.total_weight();
        for signs in sign_vectors(d) {
            let rate = eval_at_signs(s.poly(), &signs);
            if rate.abs() != total {
                continue;
            }
            let last = Rational::from_integer((signs[d - 1] as i64).into());
            let exact = ExactPoint {
                signs: signs[..d - 1].to_vec(),
                last: QuadSurd::rational(last),
                last_squared: Rational::one(),
                rate: QuadSurd::rational(rate),
            };
            out.push(ContributingPoint::from_exact(exact, Stratum::SmoothV1, None));
        }
    } else if smooth_regime(s, zero_axes) {
        let dec = s.decomposition();
        let target_sq = dec.b.sum_coeffs() / dec.a.sum_coeffs();
        let target_rate_sq = smooth_rate(s).modulus_squared();
        for signs in sign_vectors(d - 1) {
            let a = eval_at_signs(&dec.a, &signs);
            let b = eval_at_signs(&dec.b, &signs);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let root = QuadSurd::sqrt_of(&(&b / &a));
            let mut x = root;
            for k in 0u8..4 {
                let r = x.mul(&x).expect("square of a pure surd").a;
                if r.abs() == target_sq {
                    let rate = exact_rate(s, &signs, &x, &r);
                    if rate.modulus_squared() == target_rate_sq {
                        let exact =
                            ExactPoint { signs: signs.clone(), last: x.clone(), last_squared: r, rate };
                        out.push(ContributingPoint::from_exact(exact, Stratum::SmoothV1, Some(k)));
                    }
                }
                x = times_i(&x);
            }
        }
    } else {
        let total = s.total_weight();
        let one = Rational::one();
        for signs in sign_vectors(d - 1) {
            let mut full: Vec<i8> = signs.clone();
            full.push(1);
            let rate = eval_at_signs(s.poly(), &full);
            if rate.abs() != total {
                continue;
            }
            let exact = ExactPoint {
                signs,
                last: QuadSurd::rational(one.clone()),
                last_squared: one.clone(),
                rate: QuadSurd::rational(rate),
            };
            out.push(ContributingPoint::from_exact(exact, Stratum::TransverseV1V3, None));
        }
    }
    out.retain(|p| check_critical(s, p).accepted(&tol));
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CriticalityReport<T> {
    /// `|d/dz_j S(w)|` for the axes that must vanish.
    pub gradient: Vec<T>,
    pub h1: T,
    /// `|1 - w_d|`.
    pub h3: T,
    pub stratum: Stratum,
}

impl<T: Real> CriticalityReport<T> {
    pub fn max_residual(&self) -> T {
        let mut m = self.h1.clone();
        for g in &self.gradient {
            m = T::max_of(m, g.clone());
        }
        if self.stratum == Stratum::TransverseV1V3 {
            m = T::max_of(m, self.h3.clone());
        }
        m
    }

    pub fn accepted(&self, tol: &Tolerance<T>) -> bool {
        self.max_residual() < tol.residual
    }
}

pub fn check_critical<T: Real>(s: &StepSet, p: &ContributingPoint<T>) -> CriticalityReport<T> {
    let d = s.dim();
    let conj = s.conj_poly();
    let axes = match p.stratum {
        Stratum::SmoothV1 => d,
        Stratum::TransverseV1V3 => d - 1,
    };
    let gradient = (0..axes).map(|j| c_abs(&conj.partial_derivative(j).eval(&p.w))).collect();
    let prod = p.w.iter().fold(c_real(T::one()), |acc, x| acc * x.clone());
    let h1 = c_abs(&(c_real(T::one()) - p.t.clone() * prod * conj.eval(&p.w)));
    let h3 = c_abs(&(c_real(T::one()) - p.w[d - 1].clone()));
    CriticalityReport { gradient, h1, h3, stratum: p.stratum }
}

/// Evidence that `y -> S(1, ..., 1, 1/y)` has a unique positive minimiser at
/// `sqrt(B(1)/A(1))`: the derivative `A(1) - B(1)/y^2` changes sign exactly
/// once on the grid `k/denominator`, `k = 1..=steps`, inside the bracket
/// containing the root.
#[derive(Clone, Debug, Serialize)]
pub struct MinimumWitness {
    pub sign_changes: usize,
    pub bracket: Option<(String, String)>,
    pub root_in_bracket: bool,
}

pub fn minimum_witness(s: &StepSet, denominator: i64, steps: i64) -> MinimumWitness {
    let dec = s.decomposition();
    let a = dec.a.sum_coeffs();
    let b = dec.b.sum_coeffs();
    let target = &b / &a;
    let deriv = |y: &Rational| &a - &b / (y * y);
    let grid: Vec<Rational> = (1..=steps).map(|k| Rational::new(k.into(), denominator.into())).collect();
    let mut changes = 0;
    let mut bracket = None;
    let mut root_in = false;
    for pair in grid.windows(2) {
        let (l, r) = (deriv(&pair[0]), deriv(&pair[1]));
        if l.is_negative() && !r.is_negative() {
            changes += 1;
            root_in = &pair[0] * &pair[0] < target && target <= &pair[1] * &pair[1];
            bracket = Some((pair[0].to_string(), pair[1].to_string()));
        } else if !l.is_negative() && r.is_negative() {
            changes += 1;
        }
    }
    MinimumWitness { sign_changes: changes, bracket, root_in_bracket: root_in }
}
