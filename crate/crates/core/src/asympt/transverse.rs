//! Leading term at a point where `{H1 = 0}` meets `{z_d = 1}` transversally.

use num_complex::Complex;
use num_traits::Zero;

use super::engine::invert_with_root;
use super::ContributionTerm;
use crate::critical::{ContributingPoint, Stratum};
use crate::error::{Error, Result};
use crate::kernel::DiagonalKernel;
use crate::laurent::Jet;
use crate::scalar::{c_abs, c_inv, c_real, c_scale, Real, Tolerance};
use crate::stepset::StepSet;
use crate::{Poly, Rational};

fn full_point<T: Real>(p: &ContributingPoint<T>) -> Vec<Complex<T>> {
    let mut v = p.w.clone();
    v.push(p.t.clone());
    v
}

fn log_gradient<T: Real>(f: &Poly, at: &[Complex<T>]) -> Vec<Complex<T>> {
    (0..at.len()).map(|k| at[k].clone() * f.partial_derivative(k).eval(at)).collect()
}

fn determinant<T: Real>(mut a: Vec<Vec<Complex<T>>>) -> Complex<T> {
    let n = a.len();
    let mut det = c_real(T::one());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| c_abs(&a[x][col]).partial_cmp(&c_abs(&a[y][col])).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty range");
        if c_abs(&a[pivot][col]).is_zero() {
            return Complex::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            let f = a[r][col].clone() * c_inv(&pv);
            for j in col..n {
                a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
            }
        }
    }
    det
}

/// Determinant of the matrix with rows `∇log H3`, `∇log H1` and
/// `p_j e_j` (`j < d`), all in the variables `(z_1, ..., z_d, t)`.
pub fn transverse_gamma_determinant<T: Real>(kernel: &DiagonalKernel, p: &ContributingPoint<T>) -> Result<Complex<T>> {
    let h3 = kernel.h3.as_ref().ok_or_else(|| Error::Domain("kernel has no boundary factor".into()))?;
    let at = full_point(p);
    let n = at.len();
    let mut rows = vec![log_gradient(h3, &at), log_gradient(&kernel.h1, &at)];
    for j in 0..n - 2 {
        let mut row = vec![Complex::zero(); n];
        row[j] = at[j].clone();
        rows.push(row);
    }
    Ok(determinant(rows))
}

/// Leading term `rate^n n^(-(d-1)/2) c_0` at a transverse point, with
/// `c_0 = (2 pi (d+1))^(-(d-1)/2) G_eff / (det Gamma sqrt(det g''))`
/// where `G_eff` is the numerator divided by the non-vanishing factors of
/// the denominator.
pub fn transverse_contribution<T: Real>(
    s: &StepSet,
    kernel: &DiagonalKernel,
    numerator: &Poly,
    p: &ContributingPoint<T>,
) -> Result<ContributionTerm<T>> {
    if p.stratum != Stratum::TransverseV1V3 {
        return Err(Error::Domain("transverse formula requested at a smooth point".into()));
    }
    let d = s.dim();
    let tol = Tolerance::<T>::for_precision();
    let at = full_point(p);
    let mut g_eff = numerator.eval(&at);
    if let Some(h2) = &kernel.h2 {
        g_eff = g_eff * c_inv(&h2.eval(&at));
    }
    let alpha = Rational::new((-(d as i64 - 1)).into(), 2.into());
    let base = ContributionTerm {
        point: Some(p.clone()),
        rate: p.rate(),
        rate_exact: p.exact.as_ref().map(|e| e.rate.clone()),
        alpha,
        coefficients: vec![Complex::zero()],
        order_bound: 1,
        higher_order_required: false,
    };
    if c_abs(&g_eff) <= tol.zero {
        return Ok(ContributionTerm { higher_order_required: true, ..base });
    }

    // Phase function restricted to the symmetric axes, with z_d = 1.
    let conj = s.conj_poly();
    let restricted = Poly::from_terms(
        d - 1,
        conj.terms().map(|(e, c)| (e[..d - 1].to_vec(), c.clone())),
    );
    let jet = Jet::from_laurent(&restricted, &p.w[..d - 1], 2);
    let g = jet.scale(&c_inv(&jet.value())).ln()?.neg();
    let scale = T::one() / T::from_i64(d as i64 + 1);
    let hessian: Vec<Vec<Complex<T>>> =
        g.hessian().into_iter().map(|row| row.into_iter().map(|x| c_scale(&x, &scale)).collect()).collect();
    let (_, det_inv_sqrt) = invert_with_root(&hessian, &tol)?;
    let gamma = transverse_gamma_determinant(kernel, p)?;
    let k = T::from_i64(d as i64 - 1);
    let pref = (T::pi() * T::from_i64(2) * T::from_i64(d as i64 + 1)).powf(&(-k / T::from_i64(2)));
    let c0 = c_scale(&(g_eff * det_inv_sqrt * c_inv(&gamma)), &pref);
    Ok(ContributionTerm { coefficients: vec![c0], ..base })
}
