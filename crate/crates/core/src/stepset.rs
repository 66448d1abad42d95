//! Weighted step sets in `{-1,0,1}^d`, their symmetry classification and
//! the coordinate decompositions used by the kernel method.
//!
//! All derived polynomials live in *canonical* coordinates: the axis lacking
//! reflection symmetry (if any) is moved to the last position, the others
//! keep their relative order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub vector: Vec<i8>,
    pub weight: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymmetryKind {
    HighlySymmetric,
    /// Every axis but this one (original index) is symmetric.
    MissingOneAxis(usize),
    Unsupported,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryClass {
    pub kind: SymmetryKind,
    /// Sign of `B(1) - A(1)` along the canonical last axis.
    pub drift_sign: i8,
    pub drift: Rational,
}

/// `S = A/z_d + Q + B z_d`, with `A`, `Q`, `B` in the first `d-1`
/// canonical variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub a: Poly,
    pub q: Poly,
    pub b: Poly,
}

/// The four slices of `A` and `B` along a symmetric axis `j`:
/// `A = (z_j + 1/z_j) A1 + A0`, same for `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisSlices {
    pub a1: Poly,
    pub a0: Poly,
    pub b1: Poly,
    pub b0: Poly,
}

#[derive(Clone, Debug)]
pub struct StepSet {
    dim: usize,
    steps: Vec<Step>,
    order: Vec<usize>,
    canonical: Poly,
    class: SymmetryClass,
    label: Option<String>,
}

#[cfg(test)]
pub(crate) fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Compass names for the planar steps, `x` first.
pub fn compass_vector(name: &str) -> Option<[i8; 2]> {
    Some(match name.trim().to_ascii_uppercase().as_str() {
        "N" => [0, 1],
        "S" => [0, -1],
        "E" => [1, 0],
        "W" => [-1, 0],
        "NE" => [1, 1],
        "NW" => [-1, 1],
        "SE" => [1, -1],
        "SW" => [-1, -1],
        _ => return None,
    })
}

pub fn compass_name(v: &[i8]) -> Option<&'static str> {
    Some(match v {
        [0, 1] => "N",
        [0, -1] => "S",
        [1, 0] => "E",
        [-1, 0] => "W",
        [1, 1] => "NE",
        [-1, 1] => "NW",
        [1, -1] => "SE",
        [-1, -1] => "SW",
        _ => return None,
    })
}

impl StepSet {
    pub fn new(dim: usize, steps: Vec<Step>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidStepSet("dimension must be at least 2".into()));
        }
        if steps.is_empty() {
            return Err(Error::InvalidStepSet("empty step set".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &steps {
            if s.vector.len() != dim {
                return Err(Error::InvalidStepSet(format!(
                    "step {:?} has length {}, expected {dim}",
                    s.vector,
                    s.vector.len()
                )));
            }
            if s.vector.iter().any(|&x| !(-1..=1).contains(&x)) {
                return Err(Error::InvalidStepSet(format!("step {:?} leaves {{-1,0,1}}^d", s.vector)));
            }
            if s.vector.iter().all(|&x| x == 0) {
                return Err(Error::InvalidStepSet("zero step".into()));
            }
            if !s.weight.is_positive() {
                return Err(Error::InvalidStepSet(format!("step {:?} has non-positive weight", s.vector)));
            }
            if !seen.insert(s.vector.clone()) {
                return Err(Error::InvalidStepSet(format!("duplicate step {:?}", s.vector)));
            }
        }
        for axis in 0..dim {
            let fwd = steps.iter().any(|s| s.vector[axis] == 1);
            let back = steps.iter().any(|s| s.vector[axis] == -1);
            if !(fwd && back) {
                return Err(Error::InvalidStepSet(format!(
                    "axis {} needs steps in both directions",
                    axis + 1
                )));
            }
        }
        let nonsym: Vec<usize> = (0..dim).filter(|&j| !axis_symmetric(&steps, j)).collect();
        let last = nonsym.last().copied().unwrap_or(dim - 1);
        let mut order: Vec<usize> = (0..dim).filter(|&j| j != last).collect();
        order.push(last);
        let canonical = Poly::from_terms(
            dim,
            steps.iter().map(|s| (order.iter().map(|&o| s.vector[o] as i32).collect(), s.weight.clone())),
        );
        let a1 = canonical.slice(dim - 1, -1).sum_coeffs();
        let b1 = canonical.slice(dim - 1, 1).sum_coeffs();
        let drift = b1 - a1;
        let drift_sign = if drift.is_positive() {
            1
        } else if drift.is_negative() {
            -1
        } else {
            0
        };
        let kind = match nonsym.len() {
            0 => SymmetryKind::HighlySymmetric,
            1 if drift_sign != 0 => SymmetryKind::MissingOneAxis(last),
            _ => SymmetryKind::Unsupported,
        };
        Ok(StepSet {
            dim,
            steps,
            order,
            canonical,
            class: SymmetryClass { kind, drift_sign, drift },
            label: None,
        })
    }

    /// Unit-weight planar model from compass names.
    pub fn from_names(names: &[&str]) -> Result<Self> {
        let steps = names
            .iter()
            .map(|n| {
                compass_vector(n)
                    .map(|v| Step { vector: v.to_vec(), weight: Rational::one() })
                    .ok_or_else(|| Error::Parse(format!("unknown step name {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = StepSet::new(2, steps)?;
        s.label = Some(names.join(","));
        Ok(s)
    }

    /// Parses a comma separated compass list such as `"N,SE,SW"`.
    pub fn from_compass_list(list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::from_names(&names)
    }

    /// Unit-weight model from explicit vectors.
    pub fn from_vectors(dim: usize, vectors: &[Vec<i8>]) -> Result<Self> {
        Self::new(
            dim,
            vectors.iter().map(|v| Step { vector: v.clone(), weight: Rational::one() }).collect(),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let names: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                let base = compass_name(&s.vector)
                    .map(str::to_string)
                    .unwrap_or_else(|| format!("{:?}", s.vector));
                if s.weight.is_one() {
                    base
                } else {
                    format!("{base}:{}", s.weight)
                }
            })
            .collect();
        names.join(",")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `canonical_order()[k]` is the original axis placed at position `k`.
    pub fn canonical_order(&self) -> &[usize] {
        &self.order
    }

    /// Canonical position of an original axis.
    pub fn canonical_axis(&self, original: usize) -> usize {
        self.order.iter().position(|&o| o == original).expect("axis in range")
    }

    pub fn classify(&self) -> &SymmetryClass {
        &self.class
    }

    pub fn is_highly_symmetric(&self) -> bool {
        self.class.kind == SymmetryKind::HighlySymmetric
    }

    /// Inventory `S` in canonical coordinates.
    pub fn poly(&self) -> &Poly {
        &self.canonical
    }

    /// Inventory in the original coordinates.
    pub fn poly_original(&self) -> Poly {
        Poly::from_terms(
            self.dim,
            self.steps.iter().map(|s| (s.vector.iter().map(|&x| x as i32).collect(), s.weight.clone())),
        )
    }

    /// `S(1,...,1)`.
    pub fn total_weight(&self) -> Rational {
        self.steps.iter().fold(Rational::zero(), |a, s| a + s.weight.clone())
    }

    /// `S` with the last canonical variable inverted.
    pub fn conj_poly(&self) -> Poly {
        self.canonical.invert_var(self.dim - 1)
    }

    pub fn decomposition(&self) -> Decomposition {
        let last = self.dim - 1;
        Decomposition {
            a: self.canonical.slice(last, -1).drop_var(last),
            q: self.canonical.slice(last, 0).drop_var(last),
            b: self.canonical.slice(last, 1).drop_var(last),
        }
    }

    /// Total weight of the steps moving forward along each canonical axis.
    pub fn b_scalars(&self) -> Vec<Rational> {
        (0..self.dim).map(|k| self.canonical.slice(k, 1).sum_coeffs()).collect()
    }

    /// `[z_k] S` for each canonical `k < d`, as `d`-variable polynomials
    /// free of `z_k`.
    pub fn b_polys(&self) -> Vec<Poly> {
        (0..self.dim - 1).map(|k| self.canonical.slice(k, 1)).collect()
    }

    /// `(B_j, Q_j)` with `S̄ = (z_j + 1/z_j) B_j + Q_j` for `j < d`, as
    /// `d`-variable polynomials free of `z_j`.
    pub fn bq_pairs(&self) -> Vec<(Poly, Poly)> {
        let conj = self.conj_poly();
        (0..self.dim - 1).map(|j| (conj.slice(j, 1), conj.slice(j, 0))).collect()
    }

    pub fn axis_slices(&self) -> Vec<AxisSlices> {
        let dec = self.decomposition();
        (0..self.dim - 1)
            .map(|j| AxisSlices {
                a1: dec.a.slice(j, 1),
                a0: dec.a.slice(j, 0),
                b1: dec.b.slice(j, 1),
                b0: dec.b.slice(j, 0),
            })
            .collect()
    }

    /// Same steps with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|s| Step { vector: s.vector.clone(), weight: s.weight.clone() * factor.clone() })
            .collect();
        StepSet::new(self.dim, steps)
    }

    /// Relabels axes: new axis `k` is old axis `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|s| Step { vector: perm.iter().map(|&p| s.vector[p]).collect(), weight: s.weight.clone() })
            .collect();
        StepSet::new(self.dim, steps)
    }

    /// Negates one original axis.
    pub fn reflected(&self, axis: usize) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|s| {
                let mut v = s.vector.clone();
                v[axis] = -v[axis];
                Step { vector: v, weight: s.weight.clone() }
            })
            .collect();
        StepSet::new(self.dim, steps)
    }

    pub fn parse_document(text: &str) -> Result<Self> {
        let doc: StepSetDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("step-set document: {e}")))?;
        doc.into_step_set()
    }

    pub fn to_document(&self) -> StepSetDocument {
        StepSetDocument {
            dimension: self.dim,
            steps: self
                .steps
                .iter()
                .map(|s| StepRecord { vector: StepVector::Coords(s.vector.clone()), weight: Some(s.weight.to_string()) })
                .collect(),
        }
    }
}

fn axis_symmetric(steps: &[Step], axis: usize) -> bool {
    steps.iter().all(|s| {
        let mut r = s.vector.clone();
        r[axis] = -r[axis];
        steps.iter().any(|t| t.vector == r && t.weight == s.weight)
    })
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// On-disk description of a step set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepSetDocument {
    pub dimension: usize,
    pub steps: Vec<StepRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepRecord {
    pub vector: StepVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StepVector {
    Coords(Vec<i8>),
    Name(String),
}

impl StepSetDocument {
    pub fn into_step_set(self) -> Result<StepSet> {
        let steps = self
            .steps
            .into_iter()
            .map(|r| {
                let vector = match r.vector {
                    StepVector::Coords(v) => v,
                    StepVector::Name(n) => {
                        if self.dimension != 2 {
                            return Err(Error::Parse(format!("compass name {n:?} requires dimension 2")));
                        }
                        compass_vector(&n)
                            .ok_or_else(|| Error::Parse(format!("unknown step name {n:?}")))?
                            .to_vec()
                    }
                };
                let weight = match r.weight {
                    None => Rational::one(),
                    Some(w) => parse_rational(&w)?,
                };
                Ok(Step { vector, weight })
            })
            .collect::<Result<Vec<_>>>()?;
        StepSet::new(self.dimension, steps)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(q) = Rational::from_str(t) {
        return Ok(q);
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        if let Ok(n) = BigInt::from_str(&digits) {
            let den = num_traits::pow(BigInt::from(10), frac.len());
            let q = Rational::new(n, den);
            return Ok(if neg { -q } else { q });
        }
    }
    Err(Error::Parse(format!("not a rational number: {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_nsesw_decomposition() {
        let s = StepSet::from_names(&["N", "SE", "SW"]).unwrap();
        let dec = s.decomposition();
        let x = Poly::var(1, 0);
        let xi = Poly::inv_var(1, 0);
        assert_eq!(dec.a, &x + &xi);
        assert_eq!(dec.q, Poly::zero(1));
        assert_eq!(dec.b, Poly::one(1));
        assert_eq!(s.classify().drift_sign, -1);
        assert_eq!(s.classify().kind, SymmetryKind::MissingOneAxis(1));
    }

    #[test]
    fn highly_symmetric_and_unsupported() {
        let s = StepSet::from_names(&["N", "S", "E", "W"]).unwrap();
        assert_eq!(s.classify().kind, SymmetryKind::HighlySymmetric);
        let g = StepSet::from_names(&["NE", "W", "S"]).unwrap();
        assert_eq!(g.classify().kind, SymmetryKind::Unsupported);
    }

    #[test]
    fn nonsymmetric_axis_moves_last() {
        // Symmetric in y, not in x.
        let s = StepSet::from_vectors(2, &[vec![1, 0], vec![-1, 1], vec![-1, -1]]).unwrap();
        assert_eq!(s.canonical_order(), &[1, 0]);
        assert_eq!(s.classify().kind, SymmetryKind::MissingOneAxis(0));
        let dec = s.decomposition();
        assert_eq!(dec.b, Poly::one(1));
        assert_eq!(dec.a.sum_coeffs(), rint(2));
    }

    #[test]
    fn zero_drift_nonsymmetric_is_unsupported() {
        let s = StepSet::from_names(&["N", "S", "NE", "SW", "E", "W"]);
        // Not symmetric in either axis.
        assert_eq!(s.unwrap().classify().kind, SymmetryKind::Unsupported);
        let z = StepSet::from_names(&["N", "S", "E", "W", "NE", "NW", "SE", "SW"]).unwrap();
        assert_eq!(z.classify().drift_sign, 0);
    }

    #[test]
    fn rejects_malformed_sets() {
        assert!(StepSet::from_vectors(2, &[vec![2, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).is_err());
        assert!(StepSet::from_vectors(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]).is_err());
        assert!(StepSet::from_vectors(2, &[vec![0, 0], vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]]).is_err());
    }

    #[test]
    fn reconstruction_and_axis_slices() {
        let s = StepSet::from_names(&["NE", "NW", "E", "W", "SE", "SW", "S"]).unwrap();
        let d = s.decomposition();
        let z = Poly::var(2, 1);
        let zi = Poly::inv_var(2, 1);
        let rebuilt = &(&(&zi * &d.a.extend_vars(2)) + &d.q.extend_vars(2)) + &(&z * &d.b.extend_vars(2));
        assert_eq!(&rebuilt, s.poly());
        let sl = &s.axis_slices()[0];
        assert_eq!(sl.a1, Poly::one(1));
        assert_eq!(sl.a0, Poly::one(1));
        assert_eq!(sl.b1, Poly::one(1));
        assert_eq!(sl.b0, Poly::zero(1));
        let (bj, qj) = &s.bq_pairs()[0];
        let x = Poly::var(2, 0);
        let xi = Poly::inv_var(2, 0);
        assert_eq!(&(&(&x + &xi) * bj) + qj, s.conj_poly());
    }

    #[test]
    fn document_round_trip() {
        let text = r#"{"dimension": 2, "steps": [
            {"vector": [0, 1], "weight": "2"},
            {"vector": "SE", "weight": "1/2"},
            {"vector": [-1, -1], "weight": "0.5"}]}"#;
        let s = StepSet::parse_document(text).unwrap();
        assert_eq!(s.total_weight(), rint(3));
        let again = StepSet::parse_document(&serde_json::to_string(&s.to_document()).unwrap()).unwrap();
        assert_eq!(again.poly(), s.poly());
    }
}
