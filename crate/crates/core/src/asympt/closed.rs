//! Closed-form leading constants for the three drift regimes, and the
//! closed form of the first correction at negative-drift points.

use num_complex::Complex;
use num_traits::One;

use super::{exact_modulus, fold, require_theorem_class, AsymptoticExpansion, ContributionTerm, Method};
use crate::critical::{minimal_point, ContributingPoint};
use crate::error::{Error, Result};
use crate::scalar::{c_inv, c_real, c_sqrt, Real};
use crate::stepset::StepSet;
use crate::surd::QuadSurd;
use crate::Rational;

fn pi_pow_half<T: Real>(k: usize) -> T {
    T::pi().sqrt().powi(k as i32)
}

/// `pi^(-d/2) S(1)^(d/2) / sqrt(b_1 ... b_d)`.
pub fn highly_symmetric_constant<T: Real>(s: &StepSet) -> Result<T> {
    if !s.is_highly_symmetric() {
        return Err(Error::Unsupported("not highly symmetric".into()));
    }
    let d = s.dim();
    let total = T::from_rational(&s.total_weight());
    let prod = s.b_scalars().iter().fold(Rational::one(), |a, b| a * b);
    Ok(total.sqrt().powi(d as i32) / (pi_pow_half::<T>(d) * T::from_rational(&prod).sqrt()))
}

/// `(1 - A(1)/B(1)) (S(1)/pi)^((d-1)/2) / sqrt(b_1 ... b_{d-1})`.
pub fn positive_drift_constant<T: Real>(s: &StepSet) -> Result<T> {
    if s.classify().drift_sign <= 0 || s.is_highly_symmetric() {
        return Err(Error::Unsupported("not a positive-drift model".into()));
    }
    let d = s.dim();
    let dec = s.decomposition();
    let ratio = T::from_rational(&(Rational::one() - dec.a.sum_coeffs() / dec.b.sum_coeffs()));
    let b = s.b_scalars();
    let prod = b[..d - 1].iter().fold(Rational::one(), |a, x| a * x);
    let total = T::from_rational(&s.total_weight());
    Ok(ratio * (total / T::pi()).sqrt().powi(d as i32 - 1) / T::from_rational(&prod).sqrt())
}

#[derive(Clone, Debug)]
pub struct NegativeDriftConstants<T> {
    /// `sqrt(A(1)/B(1))`.
    pub rho: T,
    pub rate_plus: QuadSurd,
    pub plus: T,
    pub rate_minus: QuadSurd,
    /// Present only when no step is flat in the last axis.
    pub minus: Option<T>,
}

fn negative_constant_at<T: Real>(s: &StepSet, r: &T) -> Result<T> {
    let d = s.dim();
    let dec = s.decomposition();
    let a1 = T::from_rational(&dec.a.sum_coeffs());
    let b1 = T::from_rational(&dec.b.sum_coeffs());
    let mut point = vec![T::one(); d];
    point[d - 1] = r.clone();
    let sr = s.poly().eval_real(&point);
    let bprod = s.b_polys().iter().fold(T::one(), |acc, b| acc * b.eval_real(&point));
    let radicand = sr.powi(d as i32) / (r.clone() * bprod * b1);
    if radicand <= T::zero() {
        return Err(Error::Domain("negative radicand in the negative-drift constant".into()));
    }
    let gap = T::one() - T::one() / r.clone();
    let front = sr * r.clone() / (T::from_i64(2) * pi_pow_half::<T>(d) * a1 * gap.clone() * gap);
    Ok(front * radicand.sqrt())
}

pub fn negative_drift_constants<T: Real>(s: &StepSet) -> Result<NegativeDriftConstants<T>> {
    if s.classify().drift_sign >= 0 {
        return Err(Error::Unsupported("not a negative-drift model".into()));
    }
    let dec = s.decomposition();
    let rho = T::from_rational(&(dec.a.sum_coeffs() / dec.b.sum_coeffs())).sqrt();
    let plus = negative_constant_at(s, &rho)?;
    let q_zero = dec.q.is_zero();
    let minus = if q_zero { Some(negative_constant_at(s, &-rho.clone())?) } else { None };
    let rate_plus = exact_modulus(s, &[]);
    let root = QuadSurd::sqrt_of(&(dec.a.sum_coeffs() * dec.b.sum_coeffs())).scale(&Rational::from_integer(2.into()));
    let rate_minus = QuadSurd::rational(dec.q.sum_coeffs()).sub(&root).expect("rational minus surd");
    Ok(NegativeDriftConstants { rho, rate_plus, plus, rate_minus, minus })
}

/// The factors `(K_p, C_p)` of the leading negative-drift contribution at
/// a smooth point, evaluated from slice polynomials.
pub fn negative_drift_closed_constant<T: Real>(
    s: &StepSet,
    p: &ContributingPoint<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    let d = s.dim();
    let one = c_real(T::one());
    let pd = p.w[d - 1].clone();
    if (pd.clone() - one.clone()).norm_sqr() <= T::exp2_neg(T::precision_bits() / 2) {
        return Err(Error::Domain("closed constant is undefined at w_d = 1".into()));
    }
    let hat = &p.w[..d - 1];
    let dec = s.decomposition();
    let sbar = s.conj_poly().eval(&p.w);
    let a = dec.a.eval(hat);
    let b = dec.b.eval(hat);
    let bj: Vec<Complex<T>> = s.bq_pairs().iter().map(|(bj, _)| bj.eval(&p.w)).collect();
    let slices = s.axis_slices();

    let mut k = c_sqrt(&(sbar.clone() * pd.clone() * c_inv(&b)));
    for j in 0..d - 1 {
        k = k * c_sqrt(&(sbar.clone() * c_inv(&(p.w[j].clone() * bj[j].clone()))));
    }
    let scale = T::one() / (T::from_i64(1i64 << d) * pi_pow_half::<T>(d));
    let k = k * c_real(scale);

    let two = c_real(T::from_i64(2));
    let mut bracket = c_inv(&(a.clone() * pd.clone() * (one.clone() - pd.clone())));
    for j in 0..d - 1 {
        let aj = slices[j].a1.eval(hat);
        let bjp = slices[j].b1.eval(hat);
        let diff = aj * c_inv(&a) - bjp * c_inv(&b);
        bracket = bracket
            + (one.clone() - p.w[j].clone()) * c_inv(&(two.clone() * p.w[j].clone() * bj[j].clone())) * diff;
    }
    let mut front = sbar * c_inv(&(one.clone() - pd));
    for j in 0..d - 1 {
        front = front * (one.clone() + p.w[j].clone());
    }
    Ok((k, front * bracket))
}

fn closed_term<T: Real>(
    point: Option<ContributingPoint<T>>,
    rate: QuadSurd,
    alpha: Rational,
    c0: T,
) -> ContributionTerm<T> {
    ContributionTerm {
        point,
        rate: rate.to_complex(),
        rate_exact: Some(rate),
        alpha,
        coefficients: vec![c_real(c0)],
        order_bound: 1,
        higher_order_required: false,
    }
}

/// Leading asymptotics from the closed-form theorems.
pub fn asympt_closed<T: Real>(s: &StepSet) -> Result<AsymptoticExpansion<T>> {
    require_theorem_class(s)?;
    let d = s.dim() as i64;
    let c = s.classify();
    let minimal = minimal_point::<T>(s).ok();
    let total = QuadSurd::rational(s.total_weight());
    let terms = if s.is_highly_symmetric() {
        let alpha = Rational::new((-d).into(), 2.into());
        vec![closed_term(minimal, total, alpha, highly_symmetric_constant(s)?)]
    } else if c.drift_sign > 0 {
        let alpha = Rational::new((-(d - 1)).into(), 2.into());
        vec![closed_term(minimal, total, alpha, positive_drift_constant(s)?)]
    } else {
        let k = negative_drift_constants::<T>(s)?;
        let alpha = Rational::new((-d - 2).into(), 2.into());
        let mut v = vec![closed_term(minimal, k.rate_plus.clone(), alpha.clone(), k.plus)];
        if let Some(m) = k.minus {
            v.push(closed_term(None, k.rate_minus.clone(), alpha, m));
        }
        v
    };
    let modulus = exact_modulus(s, &[]);
    let periodic = fold(&terms, Some(&modulus))?;
    Ok(AsymptoticExpansion { method: Method::ClosedForm, terms, periodic, partial: false, notes: Vec::new() })
}
