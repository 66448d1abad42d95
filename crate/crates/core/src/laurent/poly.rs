use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c_exp, c_i, c_inv, c_real, Coefficient, Real};

/// Exponent vector of a monomial.
pub type Exponent = Vec<i32>;

/// Sparse Laurent polynomial in a fixed number of variables with exact
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: C) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length must equal variable count");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `z_var` itself.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(nvars, e, C::one())
    }

    /// The monomial `z_var^-1`.
    pub fn inv_var(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = -1;
        Self::monomial(nvars, e, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i32]) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: C) {
        assert_eq!(exp.len(), self.nvars, "exponent length must equal variable count");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Product truncated to monomials whose every exponent is at most `cap`.
    pub fn mul_capped(&self, other: &Self, cap: i32) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if e.iter().any(|&x| x > cap) {
                    continue;
                }
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficient of `z_var^k`, as a polynomial in the same variables that
    /// no longer depends on `z_var`.
    pub fn slice(&self, var: usize, k: i32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == k {
                let mut e2 = e.clone();
                e2[var] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Removes variable `var`, which must not occur.
    pub fn drop_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            assert_eq!(e[var], 0, "dropped variable must not occur");
            let mut e2 = e.clone();
            e2.remove(var);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Inserts a fresh variable at position `var`.
    pub fn insert_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars + 1);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.insert(var, 0);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Appends fresh variables up to `nvars` total.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.resize(nvars, 0);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// `z_var -> 1/z_var`.
    pub fn invert_var(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[var] = -e2[var];
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Reorders variables: new variable `k` is old variable `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(order.iter().map(|&o| e[o]).collect(), c.clone());
        }
        out
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, by: &[i32]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.iter().zip(by).map(|(a, b)| a + b).collect(), c.clone());
        }
        out
    }

    /// Smallest and largest exponent of `var`, or `None` for the zero polynomial.
    pub fn degree_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[var]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] != 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c.clone() * C::from_i64(e[var] as i64));
            }
        }
        out
    }

    /// Keeps the monomials with all exponents non-negative.
    pub fn nonnegative_part(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().all(|&x| x >= 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps the monomials whose exponents all lie in `[lo, hi]`.
    pub fn clamp(&self, lo: i32, hi: i32) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().all(|&x| x >= lo && x <= hi))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sum of all coefficients.
    pub fn sum_coeffs(&self) -> C {
        self.terms.values().fold(C::zero(), |a, c| a + c.clone())
    }

    /// Exact evaluation; fails if a variable with a negative exponent is zero.
    pub fn eval_exact(&self, point: &[C]) -> Result<C> {
        assert_eq!(point.len(), self.nvars);
        let mut total = C::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k < 0 && x.is_zero() {
                    return Err(Error::Domain("negative power of a zero coordinate".into()));
                }
                m = m * exact_pow(x, k);
            }
            total = total + m;
        }
        Ok(total)
    }

    /// Floating evaluation at a complex point.
    pub fn eval<T: Real>(&self, point: &[Complex<T>]) -> Complex<T> {
        assert_eq!(point.len(), self.nvars);
        let powers = PowerCache::new(point, self);
        let mut total = Complex::new(T::zero(), T::zero());
        for (e, c) in &self.terms {
            let mut m = c_real(c.to_real::<T>());
            for (v, &k) in e.iter().enumerate() {
                if k != 0 {
                    m = m * powers.get(v, k).clone();
                }
            }
            total = total + m;
        }
        total
    }

    pub fn eval_real<T: Real>(&self, point: &[T]) -> T {
        let pt: Vec<Complex<T>> = point.iter().cloned().map(c_real).collect();
        self.eval(&pt).re
    }

    /// Evaluation at `center * exp(i theta)` coordinate-wise.
    pub fn eval_on_torus<T: Real>(&self, center: &[Complex<T>], theta: &[T]) -> Complex<T> {
        let pt: Vec<Complex<T>> = center
            .iter()
            .zip(theta)
            .map(|(c, th)| c.clone() * c_exp(&(c_i::<T>() * c_real(th.clone()))))
            .collect();
        self.eval(&pt)
    }

    /// Maps coefficients into another ring.
    pub fn map_coeffs<D: Coefficient, F: Fn(&C) -> D>(&self, f: F) -> LaurentPoly<D> {
        let mut out = LaurentPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
    }
}

fn exact_pow<C: Coefficient>(x: &C, k: i32) -> C {
    let mut acc = C::one();
    let base = if k < 0 { C::one() / x.clone() } else { x.clone() };
    for _ in 0..k.unsigned_abs() {
        acc = acc * base.clone();
    }
    acc
}

struct PowerCache<T: Real> {
    pos: Vec<Vec<Complex<T>>>,
    neg: Vec<Vec<Complex<T>>>,
}

impl<T: Real> PowerCache<T> {
    fn new<C: Coefficient>(point: &[Complex<T>], p: &LaurentPoly<C>) -> Self {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (v, x) in point.iter().enumerate() {
            let (lo, hi) = p.degree_range(v).unwrap_or((0, 0));
            let mut up = vec![Complex::new(T::one(), T::zero())];
            for _ in 0..hi.max(0) {
                let last = up.last().unwrap().clone();
                up.push(last * x.clone());
            }
            let mut down = vec![Complex::new(T::one(), T::zero())];
            if lo < 0 {
                let inv = c_inv(x);
                for _ in 0..(-lo) {
                    let last = down.last().unwrap().clone();
                    down.push(last * inv.clone());
                }
            }
            pos.push(up);
            neg.push(down);
        }
        PowerCache { pos, neg }
    }

    fn get(&self, v: usize, k: i32) -> &Complex<T> {
        if k >= 0 {
            &self.pos[v][k as usize]
        } else {
            &self.neg[v][(-k) as usize]
        }
    }
}

impl<C: Coefficient> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.mul_capped(rhs, i32::MAX)
    }
}

impl<C: Coefficient> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.scale(&-C::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: Self) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = *c < C::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, k) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({self})", self.nvars)
    }
}
