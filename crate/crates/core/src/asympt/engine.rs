//! Saddle-point expansion at a smooth critical point, computed from jets in
//! the angular coordinates `z_j = p_j exp(i theta_j)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::ContributionTerm;
use crate::critical::{ContributingPoint, Stratum};
use crate::error::{Error, Result};
use crate::kernel::DiagonalKernel;
use crate::laurent::Jet;
use crate::scalar::{c_abs, c_exp, c_inv, c_real, c_scale, c_sqrt, Real, Tolerance};
use crate::stepset::StepSet;
use crate::{Poly, Rational};

#[derive(Clone, Debug)]
pub struct EngineDiagnostics<T> {
    pub hessian: Vec<Vec<Complex<T>>>,
    /// `det(hessian)^(-1/2)`.
    pub det_inv_sqrt: Complex<T>,
    /// The raw `L_k` values.
    pub l: Vec<Complex<T>>,
    pub degree: usize,
}

fn jet_degree(n_terms: usize) -> usize {
    (6 * n_terms.saturating_sub(1)).max(2)
}

/// Inverse and `det^(-1/2)` of a small complex matrix. For a diagonal
/// matrix the root is the product of principal roots of the entries.
pub(crate) fn invert_with_root<T: Real>(
    m: &[Vec<Complex<T>>],
    tol: &Tolerance<T>,
) -> Result<(Vec<Vec<Complex<T>>>, Complex<T>)> {
    let n = m.len();
    let scale = m.iter().flatten().map(c_abs).fold(T::zero(), T::max_of);
    let off_diagonal = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)));
    let diagonal = off_diagonal.clone().all(|(a, b)| c_abs(&m[a][b]) <= tol.zero.clone() * scale.clone());
    if diagonal {
        let mut inv = vec![vec![Complex::zero(); n]; n];
        let mut root = c_real(T::one());
        for a in 0..n {
            if c_abs(&m[a][a]) <= tol.zero.clone() * scale.clone() {
                return Err(Error::VanishingHessian("zero diagonal Hessian entry".into()));
            }
            inv[a][a] = c_inv(&m[a][a]);
            root = root * c_inv(&c_sqrt(&m[a][a]));
        }
        return Ok((inv, root));
    }
    let mut a: Vec<Vec<Complex<T>>> = m.to_vec();
    let mut inv: Vec<Vec<Complex<T>>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { c_real(T::one()) } else { Complex::zero() }).collect()).collect();
    let mut det = c_real(T::one());
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| c_abs(&a[x][col]).partial_cmp(&c_abs(&a[y][col])).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty range");
        if c_abs(&a[pivot][col]) <= tol.zero.clone() * scale.clone() {
            return Err(Error::VanishingHessian("singular Hessian".into()));
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det = det * pv.clone();
        let pinv = c_inv(&pv);
        for j in 0..n {
            a[col][j] = a[col][j].clone() * pinv.clone();
            inv[col][j] = inv[col][j].clone() * pinv.clone();
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
                    inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
                }
            }
        }
    }
    Ok((inv, c_inv(&c_sqrt(&det))))
}

fn factorial<T: Real>(n: usize) -> T {
    (2..=n).fold(T::one(), |acc, k| acc * T::from_i64(k as i64))
}

/// `L_0 .. L_{n_terms-1}` at a smooth point together with the Hessian data.
pub fn engine_terms<T: Real>(
    s: &StepSet,
    kernel: &DiagonalKernel,
    numerator: &Poly,
    p: &ContributingPoint<T>,
    n_terms: usize,
) -> Result<EngineDiagnostics<T>> {
    if p.stratum != Stratum::SmoothV1 {
        return Err(Error::Domain("smooth expansion requested at a transverse point".into()));
    }
    let d = s.dim();
    let tol = Tolerance::<T>::for_precision();
    let degree = jet_degree(n_terms);
    let conj = s.conj_poly();
    let sbar = Jet::from_laurent(&conj, &p.w, degree);
    let s0 = sbar.value();
    if c_abs(&s0) <= tol.zero {
        return Err(Error::Domain("characteristic polynomial vanishes at the point".into()));
    }
    let diag = Poly::monomial(d, vec![1; d], Rational::one());
    let h = Jet::from_laurent(&(&conj * &diag), &p.w, degree).reciprocal()?;
    let g_num = Jet::compose_last(numerator, &p.w, &h)?;
    let dh = Jet::compose_last(&kernel.h().partial_derivative(d), &p.w, &h)?;
    let u = g_num.div(&h.mul(&dh))?.neg();

    let g = sbar.scale(&c_inv(&s0)).ln()?.neg();
    let hessian = g.hessian();
    let (minv, det_inv_sqrt) = invert_with_root(&hessian, &tol)?;
    let g_under = g.without_degree(0).without_degree(1).without_degree(2);

    let mut l = Vec::with_capacity(n_terms);
    for k in 0..n_terms {
        let mut lk: Complex<T> = Complex::zero();
        let mut gpow = Jet::one(d, degree);
        for m in 0..=2 * k {
            if m > 0 {
                gpow = gpow.mul(&g_under);
            }
            let mut f = u.mul(&gpow);
            for _ in 0..k + m {
                f = f.apply_negated_laplacian(&minv);
            }
            let mut denom = T::from_i64(1i64 << (k + m)) * factorial::<T>(m) * factorial::<T>(k + m);
            if k % 2 == 1 {
                denom = -denom;
            }
            lk = lk + c_scale(&f.value(), &(T::one() / denom));
        }
        l.push(lk);
    }
    Ok(EngineDiagnostics { hessian, det_inv_sqrt, l, degree })
}

/// Contribution of a smooth point: `rate^n n^(-d/2) sum_k c_k n^(-k)` with
/// `c_k = (2 pi)^(-d/2) det^(-1/2) L_k`.
pub fn smooth_contribution<T: Real>(
    s: &StepSet,
    kernel: &DiagonalKernel,
    numerator: &Poly,
    p: &ContributingPoint<T>,
    n_terms: usize,
) -> Result<ContributionTerm<T>> {
    let d = s.dim();
    let diag = engine_terms(s, kernel, numerator, p, n_terms)?;
    let two_pi = T::pi() * T::from_i64(2);
    let pref = c_scale(&diag.det_inv_sqrt, &(T::one() / two_pi.powi(d as i32).sqrt()));
    let coefficients = diag.l.iter().map(|x| x.clone() * pref.clone()).collect();
    Ok(ContributionTerm {
        point: Some(p.clone()),
        rate: p.rate(),
        rate_exact: p.exact.as_ref().map(|e| e.rate.clone()),
        alpha: Rational::new((-(d as i64)).into(), 2.into()),
        coefficients,
        order_bound: n_terms,
        higher_order_required: false,
    })
}

/// Residuals of the closed-form derivative identities for the angular jet
/// of `S̄` at a contributing point, checked against both the jet and
/// central finite differences.
#[derive(Clone, Debug)]
pub struct DerivativeIdentityReport<T> {
    pub checked: usize,
    pub max_jet_residual: T,
    pub max_difference_residual: T,
}

pub fn derivative_identities<T: Real>(s: &StepSet, p: &ContributingPoint<T>) -> Result<DerivativeIdentityReport<T>> {
    let d = s.dim();
    let conj = s.conj_poly();
    let jet = Jet::from_laurent(&conj, &p.w, 3);
    let axes = if p.stratum == Stratum::SmoothV1 { d } else { d - 1 };
    let dec = s.decomposition();
    let hat: Vec<Complex<T>> = p.w[..d - 1].to_vec();
    let bq = s.bq_pairs();
    let slices = s.axis_slices();
    let pd = p.w[d - 1].clone();
    let i = Complex::new(T::zero(), T::one());
    let two = c_real(T::from_i64(2));

    let mut expected: Vec<(Vec<u16>, Complex<T>)> = Vec::new();
    for j in 0..axes {
        let mut e = vec![0u16; d];
        e[j] = 1;
        expected.push((e, Complex::zero()));
        for k in j + 1..axes {
            let mut e = vec![0u16; d];
            e[j] = 1;
            e[k] = 1;
            expected.push((e, Complex::zero()));
        }
        let mut e = vec![0u16; d];
        e[j] = 2;
        let value = if j < d - 1 {
            -(two.clone() * p.w[j].clone() * bq[j].0.eval(&p.w))
        } else {
            -(two.clone() * dec.b.eval(&hat) * c_inv(&pd))
        };
        expected.push((e, value));
    }
    if axes == d {
        for j in 0..d - 1 {
            let mut e = vec![0u16; d];
            e[j] = 2;
            e[d - 1] = 1;
            let inner = pd.clone() * slices[j].a1.eval(&hat) - slices[j].b1.eval(&hat) * c_inv(&pd);
            expected.push((e, -(two.clone() * i.clone() * p.w[j].clone() * inner)));
        }
    }

    let h = T::exp2_neg(T::precision_bits() / 6);
    let eval = |theta: &[T]| -> Complex<T> {
        let z: Vec<Complex<T>> = p
            .w
            .iter()
            .zip(theta)
            .map(|(x, t)| x.clone() * c_exp(&Complex::new(T::zero(), t.clone())))
            .collect();
        conj.eval(&z)
    };
    let difference = |exp: &[u16]| -> Complex<T> {
        // Tensor product of one-dimensional central stencils.
        let stencil = |k: u16| -> Vec<(i64, T)> {
            match k {
                0 => vec![(0, T::one())],
                1 => vec![(1, T::one() / (T::from_i64(2) * h.clone())), (-1, -T::one() / (T::from_i64(2) * h.clone()))],
                _ => {
                    let h2 = h.clone() * h.clone();
                    vec![(1, T::one() / h2.clone()), (0, -T::from_i64(2) / h2.clone()), (-1, T::one() / h2)]
                }
            }
        };
        let mut acc: Vec<(Vec<i64>, T)> = vec![(Vec::new(), T::one())];
        for &k in exp {
            let mut next = Vec::new();
            for (offs, w) in &acc {
                for (o, sw) in stencil(k) {
                    let mut v = offs.clone();
                    v.push(o);
                    next.push((v, w.clone() * sw));
                }
            }
            acc = next;
        }
        acc.iter().fold(Complex::zero(), |sum, (offs, w)| {
            let theta: Vec<T> = offs.iter().map(|&o| T::from_i64(o) * h.clone()).collect();
            sum + c_scale(&eval(&theta), w)
        })
    };

    let mut max_jet = T::zero();
    let mut max_fd = T::zero();
    for (e, value) in &expected {
        let norm = T::max_of(T::one(), c_abs(value));
        let from_jet = jet.derivative_at_zero(e);
        max_jet = T::max_of(max_jet, c_abs(&(from_jet - value.clone())) / norm.clone());
        max_fd = T::max_of(max_fd, c_abs(&(difference(e) - value.clone())) / norm);
    }
    Ok(DerivativeIdentityReport { checked: expected.len(), max_jet_residual: max_jet, max_difference_residual: max_fd })
}
