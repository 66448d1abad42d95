use num_complex::Complex;
use num_traits::Zero;

use super::ContributionTerm;
use crate::error::{Error, Result};
use crate::scalar::{c_abs, c_powi, c_real, c_scale, Real, Tolerance};
use crate::surd::QuadSurd;
use crate::Rational;

pub const CANDIDATE_PERIODS: [usize; 6] = [1, 2, 3, 4, 6, 8];

/// `s_n ~ modulus^n n^alpha C_{n mod period}`.
#[derive(Clone, Debug)]
pub struct PeriodicForm<T> {
    pub period: usize,
    pub modulus: T,
    pub modulus_exact: Option<QuadSurd>,
    pub alpha: Rational,
    /// Index of the expansion coefficient that carries the leading term.
    pub order: usize,
    pub constants: Vec<T>,
    /// Largest imaginary part discarded while folding.
    pub max_imaginary: T,
}

impl<T: Real> PeriodicForm<T> {
    pub fn constant(&self, n: usize) -> &T {
        &self.constants[n % self.period]
    }
}

/// Folds point contributions into per-residue real constants.
pub fn fold<T: Real>(terms: &[ContributionTerm<T>], modulus_exact: Option<&QuadSurd>) -> Result<Option<PeriodicForm<T>>> {
    let tol = Tolerance::<T>::for_precision();
    let Some(order) = terms.iter().filter_map(|t| t.leading_order(&tol)).min() else {
        return Ok(None);
    };
    let live: Vec<&ContributionTerm<T>> =
        terms.iter().filter(|t| t.coefficients.len() > order && t.alpha == terms[0].alpha).collect();
    let modulus = live.iter().map(|t| c_abs(&t.rate)).fold(T::zero(), T::max_of);
    let units: Vec<Complex<T>> = live.iter().map(|t| c_scale(&t.rate, &(T::one() / modulus.clone()))).collect();
    let loose = tol.imaginary.clone();
    let period = CANDIDATE_PERIODS
        .iter()
        .copied()
        .find(|&p| units.iter().all(|u| c_abs(&(c_powi(u, p as i64) - c_real(T::one()))) < loose))
        .ok_or_else(|| Error::Domain("rates are not roots of unity of small order".into()))?;

    let mut constants = Vec::with_capacity(period);
    let mut max_imaginary = T::zero();
    for r in 0..period {
        let sum = live.iter().zip(&units).fold(Complex::<T>::zero(), |acc, (t, u)| {
            acc + c_powi(u, r as i64) * t.coefficients[order].clone()
        });
        max_imaginary = T::max_of(max_imaginary, sum.im.clone().abs());
        constants.push(sum.re);
    }
    let scale = constants.iter().map(|c| c.abs()).fold(T::zero(), T::max_of);
    for c in constants.iter_mut() {
        if c.abs() <= tol.zero.clone() * (T::one() + scale.clone()) {
            *c = T::zero();
        }
    }
    // Shrink to the smallest period the constants actually have.
    let mut period = period;
    for q in CANDIDATE_PERIODS.iter().copied().filter(|&q| q < period && period % q == 0) {
        let same = (0..period)
            .all(|r| (constants[r].clone() - constants[r % q].clone()).abs() <= loose.clone() * (T::one() + scale.clone()));
        if same {
            constants.truncate(q);
            period = q;
            break;
        }
    }
    let alpha = live[0].alpha.clone() - Rational::from_integer((order as i64).into());
    Ok(Some(PeriodicForm {
        period,
        modulus,
        modulus_exact: modulus_exact.cloned(),
        alpha,
        order,
        constants,
        max_imaginary,
    }))
}
