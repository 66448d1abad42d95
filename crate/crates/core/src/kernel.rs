//! The algebraic kernel method: the reflection group of a step set, its
//! orbit sum, the rational diagonal representation of the counting series,
//! exact diagonal extraction and the positive-part identity.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::enumerate::endpoint_table;
use crate::error::{Error, Result};
use crate::stepset::{StepSet, SymmetryKind};
use crate::{Poly, Rational};

/// An element of the group generated by the axis flips `z_j -> 1/z_j`
/// (`j < d`) and the involution `z_d -> A/(B z_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    pub flips: Vec<bool>,
    pub gamma: bool,
}

impl GroupElement {
    pub fn sign(&self) -> i32 {
        let k = self.flips.iter().filter(|&&f| f).count() + self.gamma as usize;
        if k.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            flips: self.flips.iter().zip(&other.flips).map(|(a, b)| a ^ b).collect(),
            gamma: self.gamma ^ other.gamma,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.gamma && self.flips.iter().all(|f| !f)
    }
}

/// A quotient of Laurent polynomials, compared by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RationalFunction { num: p, den: Poly::one(n) }
    }

    pub fn equals(&self, other: &RationalFunction) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

/// All `2^d` group elements in a fixed order (identity first).
pub fn group_elements(s: &StepSet) -> Vec<GroupElement> {
    let k = s.dim() - 1;
    let mut out = Vec::with_capacity(1 << s.dim());
    for gamma in [false, true] {
        for mask in 0u32..(1 << k) {
            out.push(GroupElement { flips: (0..k).map(|j| mask >> j & 1 == 1).collect(), gamma });
        }
    }
    out
}

fn lifted_ab(s: &StepSet) -> (Poly, Poly) {
    let dec = s.decomposition();
    (dec.a.extend_vars(s.dim()), dec.b.extend_vars(s.dim()))
}

/// Applies a group element to a Laurent polynomial in canonical coordinates.
pub fn act_on_poly(s: &StepSet, g: &GroupElement, f: &Poly) -> RationalFunction {
    let d = s.dim();
    let mut p = f.clone();
    for (j, &flip) in g.flips.iter().enumerate() {
        if flip {
            p = p.invert_var(j);
        }
    }
    if !g.gamma {
        return RationalFunction::from_poly(p);
    }
    let (a, b) = lifted_ab(s);
    let last = d - 1;
    let Some((lo, hi)) = p.degree_range(last) else {
        return RationalFunction::from_poly(p);
    };
    let a_pow = (-lo).max(0) as u32;
    let b_pow = hi.max(0) as u32;
    let mut num = Poly::zero(d);
    for k in lo..=hi {
        let slice = p.slice(last, k);
        if slice.is_zero() {
            continue;
        }
        let mut e = vec![0; d];
        e[last] = -k;
        let mono = Poly::monomial(d, e, Rational::one());
        let factor = &a.pow((k + a_pow as i32) as u32) * &b.pow((b_pow as i32 - k) as u32);
        num = &num + &(&(&slice * &mono) * &factor);
    }
    let den = &a.pow(a_pow) * &b.pow(b_pow);
    RationalFunction { num, den }
}

pub fn act(s: &StepSet, g: &GroupElement, f: &RationalFunction) -> RationalFunction {
    let n = act_on_poly(s, g, &f.num);
    let d = act_on_poly(s, g, &f.den);
    RationalFunction { num: &n.num * &d.den, den: &n.den * &d.num }
}

/// Orbit sum `sum_g sign(g) g(z_1...z_d)` written as `numerator / B`.
pub fn orbit_sum(s: &StepSet) -> Result<(Poly, Poly)> {
    require_supported(s)?;
    let d = s.dim();
    let (a, b) = lifted_ab(s);
    let mut num = Poly::zero(d);
    for g in group_elements(s) {
        let mut e = vec![1; d];
        for (j, &f) in g.flips.iter().enumerate() {
            if f {
                e[j] = -1;
            }
        }
        let tail = if g.gamma {
            e[d - 1] = -1;
            &Poly::monomial(d, e, Rational::one()) * &a
        } else {
            &Poly::monomial(d, e, Rational::one()) * &b
        };
        num = if g.sign() > 0 { &num + &tail } else { &num - &tail };
    }
    Ok((num, b))
}

/// `(z_1 - 1/z_1)...(z_{d-1} - 1/z_{d-1}) (z_d B - A / z_d)`.
pub fn orbit_sum_product_form(s: &StepSet) -> Poly {
    let d = s.dim();
    let (a, b) = lifted_ab(s);
    let mut acc = Poly::one(d);
    for j in 0..d - 1 {
        acc = &acc * &(&Poly::var(d, j) - &Poly::inv_var(d, j));
    }
    &acc * &(&(&Poly::var(d, d - 1) * &b) - &(&Poly::inv_var(d, d - 1) * &a))
}

fn require_supported(s: &StepSet) -> Result<()> {
    if s.classify().kind == SymmetryKind::Unsupported {
        return Err(Error::Unsupported(format!(
            "{} lacks the symmetry required by the kernel method",
            s.label()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KernelForm {
    /// `G / (H3 H1 H2)` from the orbit sum.
    OrbitSum,
    /// `prod (1 + z_j) / (1 - t z_1...z_d S)`, valid for highly symmetric sets.
    Symmetric,
}

/// Rational function `G / H` in `(z_1, ..., z_d, t)` (canonical axes, `t`
/// last) whose diagonal counts the walks.
#[derive(Clone, Debug)]
pub struct DiagonalKernel {
    pub form: KernelForm,
    pub dim: usize,
    pub g: Poly,
    pub h1: Poly,
    pub h2: Option<Poly>,
    pub h3: Option<Poly>,
}

impl DiagonalKernel {
    pub fn h(&self) -> Poly {
        let mut h = self.h1.clone();
        if let Some(h2) = &self.h2 {
            h = &h * h2;
        }
        if let Some(h3) = &self.h3 {
            h = &h * h3;
        }
        h
    }

    /// Numerator multiplied by `prod_{j in axes} (1 - z_j)` (canonical axes).
    pub fn boundary_numerator(&self, axes: &[usize]) -> Poly {
        let n = self.dim + 1;
        let mut g = self.g.clone();
        for &j in axes {
            g = &g * &(&Poly::one(n) - &Poly::var(n, j));
        }
        g
    }
}

/// `z_1...z_d` as a polynomial in `d + 1` variables.
fn diag_monomial(d: usize) -> Poly {
    let mut e = vec![1; d + 1];
    e[d] = 0;
    Poly::monomial(d + 1, e, Rational::one())
}

fn t_var(d: usize) -> Poly {
    Poly::var(d + 1, d)
}

pub fn diag_kernel(s: &StepSet) -> Result<DiagonalKernel> {
    require_supported(s)?;
    let d = s.dim();
    let n = d + 1;
    let dec = s.decomposition();
    let (a, q) = (dec.a.extend_vars(n), dec.q.extend_vars(n));
    let zd = Poly::var(n, d - 1);
    let tz = &t_var(d) * &diag_monomial(d);
    let one = Poly::one(n);
    let mut g = one.clone();
    for j in 0..d - 1 {
        g = &g * &(&one + &Poly::var(n, j));
    }
    let two = Rational::from_integer(2.into());
    let g = &g * &(&one - &(&tz * &(&q + &(&zd * &a).scale(&two))));
    let h1 = &one - &(&tz * &s.conj_poly().extend_vars(n));
    let h2 = &one - &(&tz * &(&q + &(&zd * &a)));
    let h3 = &one - &zd;
    Ok(DiagonalKernel { form: KernelForm::OrbitSum, dim: d, g, h1, h2: Some(h2), h3: Some(h3) })
}

pub fn symmetric_kernel(s: &StepSet) -> Result<DiagonalKernel> {
    if !s.is_highly_symmetric() {
        return Err(Error::Unsupported("the symmetric representation needs every axis symmetric".into()));
    }
    let d = s.dim();
    let n = d + 1;
    let one = Poly::one(n);
    let mut g = one.clone();
    for j in 0..d {
        g = &g * &(&one + &Poly::var(n, j));
    }
    let h1 = &one - &(&(&t_var(d) * &diag_monomial(d)) * &s.poly().extend_vars(n));
    Ok(DiagonalKernel { form: KernelForm::Symmetric, dim: d, g, h1, h2: None, h3: None })
}

/// Writes `factor = 1 - t P(z)` and returns `P`.
fn linear_in_t(factor: &Poly, d: usize) -> Result<Poly> {
    let (lo, hi) = factor.degree_range(d).unwrap_or((0, 0));
    if lo < 0 || hi > 1 || factor.slice(d, 0) != Poly::one(d + 1) {
        return Err(Error::Domain("denominator factor is not of the form 1 - tP".into()));
    }
    let p = -&factor.slice(d, 1);
    if p.terms().any(|(e, _)| e.iter().any(|&x| x < 0)) {
        return Err(Error::Domain("denominator factor has negative exponents".into()));
    }
    Ok(p)
}

/// `R_n = sum_{a+b=n} P1^a P2^b`, the `t^n` coefficient of `1/(H1 H2)`,
/// truncated to exponents at most `cap`.
pub fn inverse_denominator_terms(k: &DiagonalKernel, n_max: usize, cap: i32) -> Result<Vec<Poly>> {
    let d = k.dim;
    let p1 = linear_in_t(&k.h1, d)?.drop_var(d);
    let p2 = match &k.h2 {
        Some(h2) => Some(linear_in_t(h2, d)?.drop_var(d)),
        None => None,
    };
    let mut out = vec![Poly::one(d)];
    let mut p2_pow = Poly::one(d);
    for _ in 1..=n_max {
        let prev = out.last().unwrap();
        let mut next = prev.mul_capped(&p1, cap);
        if let Some(p2) = &p2 {
            p2_pow = p2_pow.mul_capped(p2, cap);
            next = &next + &p2_pow;
        }
        out.push(next);
    }
    Ok(out)
}

/// Largest diagonal length accepted by default.
pub const DEFAULT_DIAGONAL_CAP: usize = 16;

/// Diagonal coefficients of `numerator / H` for `n = 0..=n_max`.
pub fn diagonal_coeffs_with(k: &DiagonalKernel, numerator: &Poly, n_max: usize) -> Result<Vec<Rational>> {
    if n_max > DEFAULT_DIAGONAL_CAP {
        return Err(Error::Capacity(format!("diagonal length {n_max} exceeds {DEFAULT_DIAGONAL_CAP}")));
    }
    let d = k.dim;
    let cap = n_max as i32;
    let r = inverse_denominator_terms(k, n_max, cap)?;
    let (t_lo, t_hi) = numerator.degree_range(d).unwrap_or((0, 0));
    if t_lo < 0 || numerator.terms().any(|(e, _)| e.iter().any(|&x| x < 0)) {
        return Err(Error::Domain("numerator must be a polynomial".into()));
    }
    let g_slices: Vec<Poly> = (0..=t_hi).map(|j| numerator.slice(d, j).drop_var(d)).collect();
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut cn = Poly::zero(d);
        for (j, gj) in g_slices.iter().enumerate() {
            if j <= n && !gj.is_zero() {
                cn = &cn + &gj.mul_capped(&r[n - j], cap);
            }
        }
        let target = n as i32;
        let mut total = Rational::zero();
        for (e, c) in cn.terms() {
            let others_match = e[..d - 1].iter().all(|&x| x == target);
            let last_ok = if k.h3.is_some() { e[d - 1] <= target } else { e[d - 1] == target };
            if others_match && last_ok {
                total += c.clone();
            }
        }
        out.push(total);
    }
    Ok(out)
}

pub fn diagonal_coeffs(k: &DiagonalKernel, n_max: usize) -> Result<Vec<Rational>> {
    diagonal_coeffs_with(k, &k.g, n_max)
}

#[derive(Clone, Debug, Serialize)]
pub struct PositivePartReport {
    pub per_n: Vec<bool>,
    pub passed: bool,
}

/// Checks, for `n <= n_max`, that the non-negative part of the `t^n`
/// coefficient of
/// `prod_{j<d}(1 - z_j^-2) (1 - t(2A/z_d + Q)) / ((1 - tS)(1 - t(A/z_d + Q)))`
/// equals the endpoint distribution of `n`-step walks.
pub fn positive_part_check(s: &StepSet, n_max: usize) -> Result<PositivePartReport> {
    require_supported(s)?;
    let d = s.dim();
    let dec = s.decomposition();
    let (a, q) = (dec.a.extend_vars(d), dec.q.extend_vars(d));
    let zd_inv = Poly::inv_var(d, d - 1);
    let u = &(&zd_inv * &a) + &q;
    let two = Rational::from_integer(2.into());
    let v = &(&zd_inv * &a).scale(&two) + &q;
    let mut prefactor = Poly::one(d);
    for j in 0..d - 1 {
        let mut e = vec![0; d];
        e[j] = -2;
        prefactor = &prefactor * &(&Poly::one(d) - &Poly::monomial(d, e, Rational::one()));
    }
    let order = s.canonical_order().to_vec();
    let mut per_n = Vec::with_capacity(n_max + 1);
    let mut t_prev = Poly::one(d);
    let mut u_pow = Poly::one(d);
    for n in 0..=n_max {
        let coeff = if n == 0 {
            prefactor.clone()
        } else {
            u_pow = &u_pow * &u;
            let t_n = &(s.poly() * &t_prev) + &u_pow;
            let c = &prefactor * &(&t_n - &(&v * &t_prev));
            t_prev = t_n;
            c
        };
        let positive = coeff.nonnegative_part();
        let table = endpoint_table(s, n)?;
        let expected = Poly::from_terms(
            d,
            table.iter().map(|(pt, c)| (order.iter().map(|&o| pt[o] as i32).collect(), c.clone())),
        );
        per_n.push(positive == expected);
    }
    let passed = per_n.iter().all(|&b| b);
    Ok(PositivePartReport { per_n, passed })
}

/// Checks that `G` does not vanish identically on the zero set of any
/// denominator factor, by sampling rational points on each factor.
pub fn numerator_coprime_sample(k: &DiagonalKernel) -> bool {
    let d = k.dim;
    let samples: Vec<Vec<Rational>> = (1..=3)
        .map(|i| (0..d).map(|j| Rational::new((i + j as i64 + 1).into(), (i + 2).into())).collect())
        .collect();
    let mut factors = vec![&k.h1];
    if let Some(h2) = &k.h2 {
        factors.push(h2);
    }
    for f in factors {
        // Solve 1 - t P(z) = 0 for t at each sample z.
        let p = match linear_in_t(f, d) {
            Ok(p) => p.drop_var(d),
            Err(_) => return false,
        };
        let mut nonvanishing = false;
        for z in &samples {
            let pv = p.eval_exact(z).unwrap_or_else(|_| Rational::zero());
            if pv.is_zero() {
                continue;
            }
            let mut pt = z.clone();
            pt.push(Rational::one() / pv);
            if !k.g.eval_exact(&pt).unwrap_or_else(|_| Rational::zero()).is_zero() {
                nonvanishing = true;
            }
        }
        if !nonvanishing {
            return false;
        }
    }
    if k.h3.is_some() {
        let mut z = samples[0].clone();
        z[d - 1] = Rational::one();
        z.push(Rational::new(1.into(), 7.into()));
        if k.g.eval_exact(&z).map(|v| v.is_zero()).unwrap_or(true) {
            return false;
        }
    }
    true
}

/// Coefficients of `numerator / H` are non-negative through `n_max`.
pub fn expansion_nonnegative(k: &DiagonalKernel, n_max: usize) -> Result<bool> {
    let r = inverse_denominator_terms(k, n_max, i32::MAX)?;
    Ok(r.iter().all(|p| p.terms().all(|(_, c)| !c.is_negative())))
}

/// Endpoint table as a canonical-coordinate polynomial.
pub fn endpoint_poly(s: &StepSet, n: usize) -> Result<Poly> {
    let order = s.canonical_order().to_vec();
    let table: BTreeMap<Vec<u32>, Rational> = endpoint_table(s, n)?;
    Ok(Poly::from_terms(
        s.dim(),
        table.iter().map(|(pt, c)| (order.iter().map(|&o| pt[o] as i32).collect(), c.clone())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{count_walks, CountMode, EndpointFilter};

    fn ints(v: &[Rational]) -> Vec<i64> {
        v.iter().map(|q| q.to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn group_has_expected_shape() {
        let s = StepSet::from_names(&["N", "SE", "S", "SW"]).unwrap();
        let g = group_elements(&s);
        assert_eq!(g.len(), 4);
        let signs: Vec<i32> = g.iter().map(GroupElement::sign).collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
        for e in &g {
            assert!(e.compose(e).is_identity());
            let img = act_on_poly(&s, e, s.poly());
            assert!(img.equals(&RationalFunction::from_poly(s.poly().clone())));
        }
    }

    #[test]
    fn gamma_maps_last_variable() {
        let s = StepSet::from_names(&["N", "SE", "S", "SW"]).unwrap();
        let gamma = GroupElement { flips: vec![false], gamma: true };
        let img = act_on_poly(&s, &gamma, &Poly::var(2, 1));
        let x = Poly::var(2, 0);
        let xi = Poly::inv_var(2, 0);
        let expected = &Poly::inv_var(2, 1) * &(&(&x + &Poly::one(2)) + &xi);
        assert!(img.equals(&RationalFunction::from_poly(expected)));
    }

    #[test]
    fn orbit_sum_matches_product() {
        for names in [&["NE", "NW", "S"][..], &["N", "S", "E", "W"], &["N", "SE", "SW"]] {
            let s = StepSet::from_names(names).unwrap();
            let (num, _) = orbit_sum(&s).unwrap();
            assert_eq!(num, orbit_sum_product_form(&s), "{names:?}");
        }
    }

    #[test]
    fn kernel_factor_for_nsesw() {
        let s = StepSet::from_names(&["N", "SE", "S", "SW"]).unwrap();
        let k = diag_kernel(&s).unwrap();
        let t = Poly::var(3, 2);
        let mono = |e: Vec<i32>| Poly::monomial(3, e, Rational::one());
        let inner = &(&(&mono(vec![2, 2, 0]) + &mono(vec![1, 2, 0])) + &mono(vec![0, 2, 0])) + &mono(vec![1, 0, 0]);
        assert_eq!(k.h1, &Poly::one(3) - &(&t * &inner));
        assert!(numerator_coprime_sample(&k));
    }

    #[test]
    fn diagonal_matches_enumeration() {
        let s = StepSet::from_names(&["N", "S", "E", "W"]).unwrap();
        let k = diag_kernel(&s).unwrap();
        assert_eq!(ints(&diagonal_coeffs(&k, 5).unwrap()), vec![1, 2, 6, 18, 60, 200]);
        let origin = diagonal_coeffs_with(&k, &k.boundary_numerator(&[0, 1]), 4).unwrap();
        assert_eq!(ints(&origin), vec![1, 0, 2, 0, 10]);
        let sym = symmetric_kernel(&s).unwrap();
        assert_eq!(ints(&diagonal_coeffs(&sym, 5).unwrap()), vec![1, 2, 6, 18, 60, 200]);
        let p = StepSet::from_names(&["NE", "NW", "S"]).unwrap();
        let kp = diag_kernel(&p).unwrap();
        let dp = count_walks(&p, 10, &EndpointFilter::Anywhere, CountMode::Exact).unwrap();
        assert_eq!(diagonal_coeffs(&kp, 10).unwrap(), dp.exact().unwrap());
        assert!(expansion_nonnegative(&kp, 6).unwrap());
    }

    #[test]
    fn positive_part_identity() {
        for names in [&["N", "S", "E", "W"][..], &["N", "SE", "S", "SW"], &["NE", "NW", "S"]] {
            let s = StepSet::from_names(names).unwrap();
            let r = positive_part_check(&s, 5).unwrap();
            assert!(r.passed, "{names:?}: {:?}", r.per_n);
        }
    }
}
