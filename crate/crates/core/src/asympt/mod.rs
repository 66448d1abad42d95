//! Coefficient asymptotics: closed forms, the smooth-point saddle engine,
//! the transverse leading term and periodic folding of several
//! contributions into per-residue constants.

mod closed;
mod engine;
mod periodic;
mod transverse;

pub use closed::{
    asympt_closed, highly_symmetric_constant, negative_drift_closed_constant, negative_drift_constants,
    positive_drift_constant, NegativeDriftConstants,
};
pub use engine::{
    derivative_identities, smooth_contribution, DerivativeIdentityReport, EngineDiagnostics,
};
pub use periodic::{fold, PeriodicForm, CANDIDATE_PERIODS};
pub use transverse::{transverse_contribution, transverse_gamma_determinant};

use num_complex::Complex;
use rayon::prelude::*;

use crate::critical::{contributing_points_for, smooth_rate, ContributingPoint, Stratum};
use crate::enumerate::EndpointFilter;
use crate::error::{Error, Result};
use crate::kernel::{diag_kernel, symmetric_kernel, DiagonalKernel};
use crate::scalar::{c_abs, c_arg, Real, Tolerance};
use crate::stepset::{StepSet, SymmetryKind};
use crate::surd::QuadSurd;
use crate::Rational;

/// One point's contribution `rate^n n^alpha (c_0 + c_1/n + ...)`.
#[derive(Clone, Debug)]
pub struct ContributionTerm<T> {
    pub point: Option<ContributingPoint<T>>,
    pub rate: Complex<T>,
    pub rate_exact: Option<QuadSurd>,
    pub alpha: Rational,
    pub coefficients: Vec<Complex<T>>,
    /// Number of coefficients requested; later corrections are not computed.
    pub order_bound: usize,
    /// The computed orders all vanish and the next one is out of reach.
    pub higher_order_required: bool,
}

impl<T: Real> ContributionTerm<T> {
    /// Index of the first coefficient above the zero threshold.
    pub fn leading_order(&self, tol: &Tolerance<T>) -> Option<usize> {
        self.coefficients.iter().position(|c| c_abs(c) > tol.zero)
    }

    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        out.rate = self.rate.conj();
        out.coefficients = self.coefficients.iter().map(|c| c.conj()).collect();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    ClosedForm,
    Engine,
}

#[derive(Clone, Debug)]
pub struct AsymptoticExpansion<T> {
    pub method: Method,
    pub terms: Vec<ContributionTerm<T>>,
    /// `None` when every contribution vanishes to the computed order.
    pub periodic: Option<PeriodicForm<T>>,
    pub partial: bool,
    pub notes: Vec<String>,
}

/// Largest expansion depth tried when searching for the first
/// non-vanishing order.
pub fn max_depth(dim: usize) -> usize {
    if dim <= 2 {
        4
    } else {
        3
    }
}

/// Exact `|rate|` of the contributing points for the given zero axes.
pub fn exact_modulus(s: &StepSet, zero_axes: &[usize]) -> QuadSurd {
    let c = s.classify();
    if c.drift_sign < 0 || (c.drift_sign > 0 && zero_axes.contains(&(s.dim() - 1))) {
        smooth_rate(s)
    } else {
        QuadSurd::rational(s.total_weight())
    }
}

pub(crate) fn require_theorem_class(s: &StepSet) -> Result<()> {
    let c = s.classify();
    match c.kind {
        SymmetryKind::Unsupported if c.drift_sign == 0 => Err(Error::Unsupported(format!(
            "{}: zero drift without full symmetry is conjectural and not supported",
            s.label()
        ))),
        SymmetryKind::Unsupported => {
            Err(Error::Unsupported(format!("{}: more than one asymmetric axis", s.label())))
        }
        _ => Ok(()),
    }
}

/// Kernel used for the asymptotic analysis of `s`.
pub fn analysis_kernel(s: &StepSet) -> Result<DiagonalKernel> {
    if s.is_highly_symmetric() {
        symmetric_kernel(s)
    } else {
        diag_kernel(s)
    }
}

/// Canonical zero axes for an endpoint filter given in original axes.
pub fn canonical_zero_axes(s: &StepSet, filter: &EndpointFilter) -> Vec<usize> {
    let mut v: Vec<usize> = filter.zero_axes(s.dim()).iter().map(|&a| s.canonical_axis(a)).collect();
    v.sort_unstable();
    v
}

/// Full asymptotic expansion for walks with the given endpoint constraint.
/// `depth` fixes the number of correction terms; `None` searches for the
/// first non-vanishing order.
pub fn asympt_full<T: Real>(
    s: &StepSet,
    filter: &EndpointFilter,
    depth: Option<usize>,
) -> Result<AsymptoticExpansion<T>> {
    require_theorem_class(s)?;
    let tol = Tolerance::<T>::for_precision();
    let zero_axes = canonical_zero_axes(s, filter);
    let kernel = analysis_kernel(s)?;
    let numerator = kernel.boundary_numerator(&zero_axes);
    let points = contributing_points_for::<T>(s, &zero_axes)?;
    let mut notes = Vec::new();
    let mut partial = false;

    let smooth: Vec<&ContributingPoint<T>> = points.iter().filter(|p| p.stratum == Stratum::SmoothV1).collect();
    let transverse: Vec<&ContributingPoint<T>> =
        points.iter().filter(|p| p.stratum == Stratum::TransverseV1V3).collect();

    let mut terms: Vec<ContributionTerm<T>> = Vec::new();
    if !smooth.is_empty() {
        let depths: Vec<usize> = match depth {
            Some(n) => vec![n.max(1)],
            None => (1..=max_depth(s.dim())).collect(),
        };
        for (i, &n) in depths.iter().enumerate() {
            let batch: Result<Vec<ContributionTerm<T>>> = smooth
                .par_iter()
                .map(|p| smooth_contribution(s, &kernel, &numerator, p, n))
                .collect();
            let batch = batch?;
            let found = batch.iter().any(|t| t.leading_order(&tol).is_some());
            let last = i + 1 == depths.len();
            if found || last {
                terms = batch;
                if !found {
                    partial = true;
                    notes.push(format!("all contributions vanish through order {}", n - 1));
                    for t in &mut terms {
                        t.higher_order_required = true;
                    }
                }
                break;
            }
        }
    }
    for p in transverse {
        let term = transverse_contribution(s, &kernel, &numerator, p)?;
        if term.higher_order_required {
            if zero_axes.is_empty() {
                notes.push("transverse point with vanishing numerator omitted".into());
                continue;
            }
            partial = true;
            notes.push("transverse point needs a higher-order term".into());
        }
        terms.push(term);
    }
    terms.sort_by(|a, b| {
        let (x, y) = (c_arg(&a.rate).to_f64(), c_arg(&b.rate).to_f64());
        x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
    });
    let modulus = exact_modulus(s, &zero_axes);
    let periodic = if partial { None } else { fold(&terms, Some(&modulus))? };
    if periodic.is_none() && !partial {
        partial = true;
        notes.push("no non-vanishing contribution found".into());
    }
    Ok(AsymptoticExpansion { method: Method::Engine, terms, periodic, partial, notes })
}

#[cfg(test)]
mod tests;
