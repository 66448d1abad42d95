use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex;
use num_traits::Zero;

use super::LaurentPoly;
use crate::error::{Error, Result};
use crate::scalar::{c_inv, c_ln, c_powi, c_real, c_scale, Coefficient, Real};

/// Monomial bookkeeping shared by all jets of a given dimension and degree.
#[derive(Debug)]
pub struct JetIndex {
    dim: usize,
    degree: usize,
    exps: Vec<Vec<u16>>,
    total: Vec<usize>,
    lookup: HashMap<Vec<u16>, usize>,
    products: Vec<(u32, u32, u32)>,
    /// `raise[a][i]` is the slot of `exps[i] + e_a`, if within degree.
    raise: Vec<Vec<Option<usize>>>,
}

impl JetIndex {
    fn build(dim: usize, degree: usize) -> JetIndex {
        let mut exps: Vec<Vec<u16>> = Vec::new();
        for total in 0..=degree {
            let mut cur = vec![0u16; dim];
            compositions(total, 0, &mut cur, &mut exps);
        }
        let total: Vec<usize> = exps.iter().map(|e| e.iter().map(|&x| x as usize).sum()).collect();
        let lookup: HashMap<Vec<u16>, usize> =
            exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let mut products = Vec::new();
        for i in 0..exps.len() {
            for j in 0..exps.len() {
                if total[i] + total[j] <= degree {
                    let s: Vec<u16> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                    products.push((i as u32, j as u32, lookup[&s] as u32));
                }
            }
        }
        let raise = (0..dim)
            .map(|a| {
                exps.iter()
                    .map(|e| {
                        let mut r = e.clone();
                        r[a] += 1;
                        lookup.get(&r).copied()
                    })
                    .collect()
            })
            .collect();
        JetIndex { dim, degree, exps, total, lookup, products, raise }
    }

    /// Shared index for `(dim, degree)`.
    pub fn get(dim: usize, degree: usize) -> Arc<JetIndex> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<JetIndex>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("jet index cache poisoned");
        guard
            .entry((dim, degree))
            .or_insert_with(|| Arc::new(JetIndex::build(dim, degree)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u16>] {
        &self.exps
    }

    pub fn slot(&self, exp: &[u16]) -> Option<usize> {
        self.lookup.get(exp).copied()
    }
}

fn compositions(left: usize, pos: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u16;
        out.push(cur.clone());
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k as u16;
        compositions(left - k, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// Truncated Taylor series in `dim` variables, exact through `valid`
/// total degree.
#[derive(Clone, Debug)]
pub struct Jet<T: Real> {
    index: Arc<JetIndex>,
    coeffs: Vec<Complex<T>>,
    valid: usize,
}

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> Jet<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        let index = JetIndex::get(dim, degree);
        let coeffs = vec![czero(); index.len()];
        Jet { index, coeffs, valid: degree }
    }

    pub fn constant(dim: usize, degree: usize, c: Complex<T>) -> Self {
        let mut j = Self::zero(dim, degree);
        j.coeffs[0] = c;
        j
    }

    /// The coordinate function `theta_a`.
    pub fn variable(dim: usize, degree: usize, a: usize) -> Self {
        let mut j = Self::zero(dim, degree);
        let mut e = vec![0u16; dim];
        e[a] = 1;
        if let Some(s) = j.index.slot(&e) {
            j.coeffs[s] = c_real(T::one());
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.index.dim
    }

    pub fn degree(&self) -> usize {
        self.index.degree
    }

    /// Highest total degree whose coefficients are exact.
    pub fn valid_degree(&self) -> usize {
        self.valid
    }

    pub fn index(&self) -> &JetIndex {
        &self.index
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: &[u16]) -> Complex<T> {
        self.index.slot(exp).map(|s| self.coeffs[s].clone()).unwrap_or_else(czero)
    }

    pub fn set_coeff(&mut self, exp: &[u16], c: Complex<T>) {
        let s = self.index.slot(exp).expect("exponent within jet degree");
        self.coeffs[s] = c;
    }

    pub fn value(&self) -> Complex<T> {
        self.coeffs[0].clone()
    }

    /// Exponential substitution `z = center * exp(i theta)` into a Laurent
    /// polynomial.
    pub fn from_laurent<C: Coefficient>(
        poly: &LaurentPoly<C>,
        center: &[Complex<T>],
        degree: usize,
    ) -> Self {
        let dim = poly.nvars();
        assert_eq!(center.len(), dim);
        let mut jet = Self::zero(dim, degree);
        let factorial: Vec<T> = {
            let mut f = vec![T::one()];
            for k in 1..=degree {
                let last = f[k - 1].clone();
                f.push(last * T::from_i64(k as i64));
            }
            f
        };
        for (e, c) in poly.terms() {
            let mut base = c_real(c.to_real::<T>());
            for (x, &k) in center.iter().zip(e) {
                if k != 0 {
                    base = base * c_powi(x, k as i64);
                }
            }
            // (i m)^k / k! for each variable.
            let tables: Vec<Vec<Complex<T>>> = e
                .iter()
                .map(|&m| {
                    let im = Complex::new(T::zero(), T::from_i64(m as i64));
                    let mut row = Vec::with_capacity(degree + 1);
                    let mut p = c_real(T::one());
                    for k in 0..=degree {
                        row.push(c_scale(&p, &(T::one() / factorial[k].clone())));
                        p = p * im.clone();
                    }
                    row
                })
                .collect();
            for (slot, exp) in jet.index.exps.iter().enumerate() {
                let mut term = base.clone();
                for (v, &k) in exp.iter().enumerate() {
                    if k != 0 {
                        term = term * tables[v][k as usize].clone();
                    }
                }
                jet.coeffs[slot] = jet.coeffs[slot].clone() + term;
            }
        }
        jet
    }

    /// Substitutes this family of jets (one per variable) into a polynomial
    /// whose last variable is replaced by `last`, the earlier ones by the
    /// exponential substitution at `center`.
    pub fn compose_last<C: Coefficient>(
        poly: &LaurentPoly<C>,
        center: &[Complex<T>],
        last: &Jet<T>,
    ) -> Result<Self> {
        let n = poly.nvars();
        if n != center.len() + 1 {
            return Err(Error::Domain("composition arity mismatch".into()));
        }
        let (lo, hi) = poly.degree_range(n - 1).unwrap_or((0, 0));
        if lo < 0 {
            return Err(Error::Domain("negative power of the substituted variable".into()));
        }
        let mut out = Self::zero(last.dim(), last.degree());
        out.valid = last.valid;
        let mut power = Self::constant(last.dim(), last.degree(), c_real(T::one()));
        for k in 0..=hi {
            let slice = poly.slice(n - 1, k).drop_var(n - 1);
            if !slice.is_zero() {
                let base = Self::from_laurent(&slice, center, last.degree());
                out = &out + &(&base * &power);
            }
            if k < hi {
                power = &power * last;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        Jet {
            index: self.index.clone(),
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
            valid: self.valid,
        }
    }

    pub fn add_constant(&self, c: &Complex<T>) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + c.clone();
        out
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.index.dim == other.index.dim && self.index.degree == other.index.degree,
            "jet shape mismatch"
        );
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_shape(other);
        let valid = self.valid.min(other.valid);
        let mut coeffs = vec![czero::<T>(); self.coeffs.len()];
        let nonzero_a: Vec<bool> = self.coeffs.iter().map(|c| !c.is_zero()).collect();
        let nonzero_b: Vec<bool> = other.coeffs.iter().map(|c| !c.is_zero()).collect();
        for &(i, j, k) in &self.index.products {
            let (i, j, k) = (i as usize, j as usize, k as usize);
            if nonzero_a[i] && nonzero_b[j] && self.index.total[k] <= valid {
                coeffs[k] = coeffs[k].clone() + self.coeffs[i].clone() * other.coeffs[j].clone();
            }
        }
        Jet { index: self.index.clone(), coeffs, valid }
    }

    /// Zero-constant part.
    fn tail(&self) -> Self {
        let mut t = self.clone();
        t.coeffs[0] = czero();
        t
    }

    /// `sum_k a_k x^k` for `x` with zero constant term.
    fn series_in(&self, a: &[Complex<T>]) -> Self {
        let mut acc = Self::constant(self.dim(), self.degree(), a[0].clone());
        acc.valid = self.valid;
        let mut power = Self::constant(self.dim(), self.degree(), c_real(T::one()));
        for coef in a.iter().skip(1) {
            power = power.mul(self);
            if power.coeffs.iter().all(|c| c.is_zero()) {
                break;
            }
            acc = &acc + &power.scale(coef);
        }
        acc
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.value();
        if c0.is_zero() {
            return Err(Error::Domain("reciprocal of a jet with zero constant term".into()));
        }
        let inv = c_inv(&c0);
        let x = self.tail().scale(&inv);
        let n = self.degree();
        let coefs: Vec<Complex<T>> = (0..=n)
            .map(|k| if k % 2 == 0 { c_real(T::one()) } else { c_real(-T::one()) })
            .collect();
        Ok(x.series_in(&coefs).scale(&inv))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// Principal-branch logarithm.
    pub fn ln(&self) -> Result<Self> {
        let c0 = self.value();
        if c0.is_zero() {
            return Err(Error::Domain("logarithm of a jet with zero constant term".into()));
        }
        let x = self.tail().scale(&c_inv(&c0));
        let n = self.degree();
        let mut coefs = vec![c_ln(&c0)];
        for k in 1..=n {
            let v = T::one() / T::from_i64(k as i64);
            coefs.push(c_real(if k % 2 == 1 { v } else { -v }));
        }
        Ok(x.series_in(&coefs))
    }

    pub fn exp(&self) -> Self {
        let c0 = self.value();
        let x = self.tail();
        let n = self.degree();
        let mut coefs = Vec::with_capacity(n + 1);
        let mut f = T::one();
        coefs.push(c_real(T::one()));
        for k in 1..=n {
            f = f / T::from_i64(k as i64);
            coefs.push(c_real(f.clone()));
        }
        x.series_in(&coefs).scale(&crate::scalar::c_exp(&c0))
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.dim(), self.degree(), c_real(T::one()));
        acc.valid = self.valid;
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in `theta_a`; exact through one degree less.
    pub fn derivative(&self, a: usize) -> Self {
        let mut coeffs = vec![czero::<T>(); self.coeffs.len()];
        for (i, e) in self.index.exps.iter().enumerate() {
            if let Some(r) = self.index.raise[a][i] {
                let f = T::from_i64(e[a] as i64 + 1);
                coeffs[i] = c_scale(&self.coeffs[r], &f);
            }
        }
        Jet { index: self.index.clone(), coeffs, valid: self.valid.saturating_sub(1) }
    }

    /// Drops every coefficient of total degree `k`.
    pub fn without_degree(&self, k: usize) -> Self {
        let mut out = self.clone();
        for (i, &t) in self.index.total.iter().enumerate() {
            if t == k {
                out.coeffs[i] = czero();
            }
        }
        out
    }

    /// `∂_a ∂_b` at the origin.
    pub fn second_derivative_at_zero(&self, a: usize, b: usize) -> Complex<T> {
        let mut e = vec![0u16; self.dim()];
        e[a] += 1;
        e[b] += 1;
        let c = self.coeff(&e);
        if a == b {
            c_scale(&c, &T::from_i64(2))
        } else {
            c
        }
    }

    /// Mixed partial derivative `∂^exp` at the origin.
    pub fn derivative_at_zero(&self, exp: &[u16]) -> Complex<T> {
        let mut f = T::one();
        for &k in exp {
            for j in 2..=k {
                f = f * T::from_i64(j as i64);
            }
        }
        c_scale(&self.coeff(exp), &f)
    }

    pub fn hessian(&self) -> Vec<Vec<Complex<T>>> {
        let d = self.dim();
        (0..d).map(|a| (0..d).map(|b| self.second_derivative_at_zero(a, b)).collect()).collect()
    }

    /// Applies the constant-coefficient operator `-sum M_ab ∂_a ∂_b`.
    pub fn apply_negated_laplacian(&self, m: &[Vec<Complex<T>>]) -> Self {
        let d = self.dim();
        let mut out = Self::zero(d, self.degree());
        out.valid = self.valid.saturating_sub(2);
        let firsts: Vec<Jet<T>> = (0..d).map(|a| self.derivative(a)).collect();
        for a in 0..d {
            for b in 0..d {
                if m[a][b].is_zero() {
                    continue;
                }
                let second = firsts[a].derivative(b);
                out = &out - &second.scale(&m[a][b]);
            }
        }
        out.valid = self.valid.saturating_sub(2);
        out
    }
}

impl<T: Real> std::ops::Add for &Jet<T> {
    type Output = Jet<T>;
    fn add(self, rhs: Self) -> Jet<T> {
        self.same_shape(rhs);
        Jet {
            index: self.index.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
            valid: self.valid.min(rhs.valid),
        }
    }
}

impl<T: Real> std::ops::Sub for &Jet<T> {
    type Output = Jet<T>;
    fn sub(self, rhs: Self) -> Jet<T> {
        self.same_shape(rhs);
        Jet {
            index: self.index.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
            valid: self.valid.min(rhs.valid),
        }
    }
}

impl<T: Real> std::ops::Mul for &Jet<T> {
    type Output = Jet<T>;
    fn mul(self, rhs: Self) -> Jet<T> {
        Jet::mul(self, rhs)
    }
}

impl<T: Real> Jet<T> {
    pub fn neg(&self) -> Self {
        self.scale(&Complex::new(-T::one(), T::zero()))
    }

    pub fn one(dim: usize, degree: usize) -> Self {
        Self::constant(dim, degree, Complex::new(T::one(), T::zero()))
    }
}
