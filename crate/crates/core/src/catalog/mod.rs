//! Stored asymptotics for the 23 D-finite quadrant models, their boundary
//! returns, the weighted one-symmetry family, and a few built-in models in
//! higher dimension.

mod data;
mod reproduce;

pub use reproduce::{compare_symbolic, EMPIRICAL_N, SYMBOLIC_TOLERANCE, reproduce_tables, reproduce_with, CellReport, CellStatus, Column, ReproductionMode, Table, TableReport};

use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::enumerate::EndpointFilter;
use crate::error::{Error, Result};
use crate::expr::eval_expr;
use crate::scalar::Real;
use crate::stepset::{compass_vector, Step, StepSet};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModelClass {
    HighlySymmetric,
    PositiveDrift,
    NegativeDrift,
    AlgebraicExceptional,
    NoSymmetryDFinite,
}

impl ModelClass {
    /// Classes whose asymptotics follow from the closed-form theorems.
    pub fn theorem_covered(self) -> bool {
        matches!(self, ModelClass::HighlySymmetric | ModelClass::PositiveDrift | ModelClass::NegativeDrift)
    }
}

/// `rate^n n^alpha C_{n mod k}` with `k = constants.len()`; rate and
/// constants are radical expressions, `"0"` marks a vanishing class.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StoredForm {
    pub rate: &'static str,
    pub alpha: (i64, i64),
    pub constants: &'static [&'static str],
}

impl StoredForm {
    pub fn alpha(&self) -> Rational {
        Rational::new(self.alpha.0.into(), self.alpha.1.into())
    }

    pub fn period(&self) -> usize {
        self.constants.len()
    }

    pub fn rate_value<T: Real>(&self) -> Result<T> {
        eval_expr(self.rate)
    }

    pub fn constant_values<T: Real>(&self) -> Result<Vec<T>> {
        self.constants.iter().map(|c| eval_expr(c)).collect()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryForms {
    /// Walks ending with first coordinate zero.
    pub x_axis: StoredForm,
    /// Walks ending with second coordinate zero.
    pub y_axis: StoredForm,
    pub origin: StoredForm,
}

/// `F(t) = (1 - a t - sqrt(1 - 2a t - b t^2)) / (c t^2)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlgebraicGf {
    pub expression: &'static str,
    pub linear: i64,
    pub quadratic: i64,
    pub denominator: i64,
}

impl AlgebraicGf {
    /// Maclaurin coefficients `F_0 .. F_{n_max}`, exactly.
    pub fn series(&self, n_max: usize) -> Vec<Rational> {
        let len = n_max + 3;
        let mut radicand = vec![Rational::zero(); len];
        radicand[0] = Rational::one();
        radicand[1] = Rational::from_integer((-2 * self.linear).into());
        if len > 2 {
            radicand[2] = Rational::from_integer((-self.quadratic).into());
        }
        let two = Rational::from_integer(2.into());
        let mut root = vec![Rational::zero(); len];
        root[0] = Rational::one();
        for n in 1..len {
            let mut acc = radicand[n].clone();
            for k in 1..n {
                acc -= &root[k] * &root[n - k];
            }
            root[n] = acc / &two;
        }
        let c = Rational::from_integer(self.denominator.into());
        (0..=n_max).map(|n| -root[n + 2].clone() / &c).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub alias: Option<&'static str>,
    pub steps: &'static [&'static str],
    pub class: ModelClass,
    pub anywhere: StoredForm,
    pub boundary: Option<BoundaryForms>,
    pub gf_closed_form: Option<AlgebraicGf>,
}

impl CatalogEntry {
    pub fn step_set(&self) -> StepSet {
        StepSet::from_names(self.steps).expect("catalog step names are valid")
    }

    /// Stored form for an endpoint filter given in original axes.
    pub fn form_for(&self, filter: &EndpointFilter) -> Option<&StoredForm> {
        match filter.zero_axes(2).as_slice() {
            [] => Some(&self.anywhere),
            [0] => self.boundary.as_ref().map(|t| &t.x_axis),
            [1] => self.boundary.as_ref().map(|t| &t.y_axis),
            [0, 1] => self.boundary.as_ref().map(|t| &t.origin),
            _ => None,
        }
    }
}

/// All 23 entries, in table order.
pub fn entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(data::entries)
}

fn vector_set(names: &[&str]) -> Option<Vec<[i8; 2]>> {
    let mut v: Vec<[i8; 2]> = names.iter().map(|n| compass_vector(n.trim())).collect::<Option<_>>()?;
    v.sort_unstable();
    v.dedup();
    Some(v)
}

/// Finds an entry by name, alias or step list (in any order).
pub fn lookup(key: &str) -> Result<&'static CatalogEntry> {
    let k = key.trim();
    let by_name = entries().iter().find(|e| e.name.eq_ignore_ascii_case(k) || e.alias.is_some_and(|a| a.eq_ignore_ascii_case(k)));
    if let Some(e) = by_name {
        return Ok(e);
    }
    let upper = k.trim_matches(|c| c == '{' || c == '}').to_ascii_uppercase();
    let names: Vec<&str> = upper.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    vector_set(&names)
        .and_then(|want| entries().iter().find(|e| vector_set(e.steps).as_ref() == Some(&want)))
        .ok_or_else(|| Error::UnknownModel(format!("no catalog model {key:?}")))
}

/// Entry with exactly the steps of `s` (unit weights, planar), if any.
pub fn lookup_steps(s: &StepSet) -> Option<&'static CatalogEntry> {
    if s.dim() != 2 || s.steps().iter().any(|st| !st.weight.is_one()) {
        return None;
    }
    let mut want: Vec<[i8; 2]> = s.steps().iter().map(|st| [st.vector[0], st.vector[1]]).collect();
    want.sort_unstable();
    entries().iter().find(|e| vector_set(e.steps).as_ref() == Some(&want))
}

/// The weighted planar family with weights `a` (E, W), `b` (NE, NW),
/// `c` (N), `d` (SE, SW) and `e` (S).
pub fn weighted_model(weights: [i64; 5]) -> Result<StepSet> {
    let [a, b, c, d, e] = weights;
    let layout: [(&str, i64); 8] = [("E", a), ("W", a), ("NE", b), ("NW", b), ("N", c), ("SE", d), ("SW", d), ("S", e)];
    let steps = layout
        .iter()
        .filter(|(_, w)| *w != 0)
        .map(|(n, w)| Step { vector: compass_vector(n).expect("compass name").to_vec(), weight: Rational::from_integer((*w).into()) })
        .collect();
    let label = format!("weighted({a},{b},{c},{d},{e})");
    Ok(StepSet::new(2, steps)?.with_label(label))
}

/// Leading `(rate, alpha, constant)` of the weighted family from its
/// parametric closed forms; `None` outside the three covered regimes or
/// when `a = 0` with negative drift.
pub fn weighted_closed_form<T: Real>(weights: [i64; 5]) -> Option<(T, Rational, T)> {
    let [a, b, c, d, e] = weights.map(|w| T::from_i64(w));
    let (up, down) = (weights[1] * 2 + weights[2], weights[3] * 2 + weights[4]);
    let two = T::from_i64(2);
    let pi = T::pi();
    let total = two.clone() * (a.clone() + b.clone() + d.clone()) + c.clone() + e.clone();
    let b_up = T::from_i64(up);
    let a_down = T::from_i64(down);
    if up > down && down > 0 {
        let k = (T::one() - a_down / b_up) * (total.clone() / ((a + b + d) * pi)).sqrt();
        return Some((total, Rational::new((-1).into(), 2.into()), k));
    }
    if up > 0 && up < down && weights[0] != 0 {
        let prod = b_up.clone() * a_down.clone();
        let rate = two.clone() * a.clone() + two.clone() * prod.sqrt();
        let r = (b_up.clone() / a_down.clone()).sqrt();
        let gap = T::one() - r.clone();
        let inner = d * r.clone() + a + b * (T::one() / r);
        let denom = two * pi * gap.clone() * gap * prod.powf(&(T::from_i64(3) / T::from_i64(4))) * inner.sqrt();
        let k = rate.clone() * rate.clone() / denom;
        return Some((rate, Rational::from_integer((-2).into()), k));
    }
    if up == down && weights[1] == weights[3] && weights[2] == weights[4] {
        let rate = two.clone() * a.clone() + two.clone() * c.clone() + T::from_i64(4) * b.clone();
        let k = rate.clone() / (pi * ((a + two.clone() * b.clone()) * (c + two * b)).sqrt());
        return Some((rate, Rational::from_integer((-1).into()), k));
    }
    None
}

/// Named models accepted wherever a model is expected: catalog names and
/// aliases, the two weighted examples, and three-dimensional models.
pub fn builtin(name: &str) -> Option<StepSet> {
    let key = name.trim().to_ascii_lowercase();
    let cube = |vectors: Vec<Vec<i8>>, label: &str| StepSet::from_vectors(3, &vectors).ok().map(|s| s.with_label(label));
    match key.as_str() {
        "weighted-positive" => return weighted_model([1, 2, 1, 1, 1]).ok(),
        "weighted-negative" => return weighted_model([1, 1, 1, 2, 2]).ok(),
        "cube-negative" => {
            let mut v: Vec<Vec<i8>> = [-1i8, 1].iter().flat_map(|&a| [-1i8, 1].map(|b| vec![a, b, -1])).collect();
            v.push(vec![0, 0, 1]);
            return cube(v, "cube-negative");
        }
        "cube-positive" => {
            let mut v: Vec<Vec<i8>> = [-1i8, 1].iter().flat_map(|&a| [-1i8, 1].map(|b| vec![a, b, 1])).collect();
            v.push(vec![0, 0, -1]);
            return cube(v, "cube-positive");
        }
        "cube-simple" => {
            let v = (0..3).flat_map(|k| [-1i8, 1].map(|s| (0..3).map(|j| if j == k { s } else { 0 }).collect())).collect();
            return cube(v, "cube-simple");
        }
        _ => {}
    }
    lookup(name).ok().map(|e| e.step_set().with_label(e.name))
}

pub const BUILTIN_EXTRAS: [&str; 5] = ["weighted-positive", "weighted-negative", "cube-negative", "cube-positive", "cube-simple"];

#[cfg(test)]
mod tests;
