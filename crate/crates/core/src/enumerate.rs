//! Dynamic-programming enumeration of weighted walks confined to the
//! non-negative orthant, started at the origin.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stepset::StepSet;
use crate::Rational;

/// Which endpoints are counted. Axis indices are original and zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EndpointFilter {
    Anywhere,
    /// Walks ending with every listed coordinate equal to zero.
    Axes(Vec<usize>),
    Origin,
}

impl EndpointFilter {
    /// Sorted zero-based axes forced to zero.
    pub fn zero_axes(&self, dim: usize) -> Vec<usize> {
        match self {
            EndpointFilter::Anywhere => vec![],
            EndpointFilter::Origin => (0..dim).collect(),
            EndpointFilter::Axes(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    /// Parses `anywhere`, `origin` or `axes=1,2` (one-based axes).
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "anywhere" => return Ok(EndpointFilter::Anywhere),
            "origin" => return Ok(EndpointFilter::Origin),
            _ => {}
        }
        let list = t
            .strip_prefix("axes=")
            .ok_or_else(|| Error::Parse(format!("unknown endpoint filter {s:?}")))?;
        let axes = list
            .split(',')
            .map(|a| match a.trim().parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::Parse(format!("bad axis {a:?} in endpoint filter"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if axes.is_empty() {
            return Err(Error::Parse("empty axis list".into()));
        }
        Ok(EndpointFilter::Axes(axes))
    }

    fn accepts(&self, coords: &[usize], zero_axes: &[usize]) -> bool {
        match self {
            EndpointFilter::Anywhere => true,
            _ => zero_axes.iter().all(|&j| coords[j] == 0),
        }
    }
}

impl fmt::Display for EndpointFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndpointFilter::Anywhere => write!(f, "anywhere"),
            EndpointFilter::Origin => write!(f, "origin"),
            EndpointFilter::Axes(v) => {
                let s: Vec<String> = v.iter().map(|a| (a + 1).to_string()).collect();
                write!(f, "axes={}", s.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMode {
    Exact,
    Float,
}

/// `s_n = mantissa * exp(log_scale)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn ln(&self) -> Option<f64> {
        (self.mantissa > 0.0).then(|| self.mantissa.ln() + self.log_scale)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CountValues {
    Exact(Vec<Rational>),
    Float(Vec<ScaledValue>),
}

/// Counts `s_0, ..., s_{n_max}` for one filter.
#[derive(Clone, Debug, PartialEq)]
pub struct CountSeries {
    pub filter: EndpointFilter,
    pub values: CountValues,
}

impl CountSeries {
    pub fn len(&self) -> usize {
        match &self.values {
            CountValues::Exact(v) => v.len(),
            CountValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Natural logarithm of `s_n`, `None` when `s_n = 0`.
    pub fn ln(&self, n: usize) -> Option<f64> {
        match &self.values {
            CountValues::Exact(v) => ln_rational(&v[n]),
            CountValues::Float(v) => v[n].ln(),
        }
    }

    pub fn is_zero(&self, n: usize) -> bool {
        match &self.values {
            CountValues::Exact(v) => v[n].is_zero(),
            CountValues::Float(v) => v[n].mantissa == 0.0,
        }
    }

    pub fn exact(&self) -> Option<&[Rational]> {
        match &self.values {
            CountValues::Exact(v) => Some(v),
            CountValues::Float(_) => None,
        }
    }
}

pub(crate) fn ln_rational(q: &Rational) -> Option<f64> {
    if q <= &Rational::zero() {
        return None;
    }
    Some(ln_bigint(q.numer()) - ln_bigint(q.denom()))
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Largest number of lattice cells the DP may allocate.
pub const DEFAULT_CELL_CAP: usize = 80_000_000;

struct Grid {
    dim: usize,
    side: usize,
    strides: Vec<usize>,
}

impl Grid {
    fn new(dim: usize, n_max: usize, cap: usize) -> Result<Self> {
        let side = n_max + 1;
        let mut total: usize = 1;
        for _ in 0..dim {
            total = total
                .checked_mul(side)
                .filter(|&t| t <= cap)
                .ok_or_else(|| Error::Capacity(format!("(n+1)^d exceeds {cap} cells for n={n_max}, d={dim}")))?;
        }
        // Axis 0 is the slowest.
        let mut strides = vec![1; dim];
        for k in (0..dim.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * side;
        }
        Ok(Grid { dim, side, strides })
    }

    fn cells(&self) -> usize {
        self.strides[0] * self.side
    }

    fn slab(&self) -> usize {
        self.strides[0]
    }

    fn coords(&self, mut idx: usize, out: &mut [usize]) {
        for k in 0..self.dim {
            out[k] = idx / self.strides[k];
            idx %= self.strides[k];
        }
    }
}

/// One DP transition: `next[x] = sum_s w_s cur[x - s]` on `[0, reach]^d`.
fn transition<K>(grid: &Grid, steps: &[(Vec<i8>, K)], cur: &[K], next: &mut [K], reach: usize)
where
    K: Clone + Zero + Add<Output = K> + Mul<Output = K> + Send + Sync,
{
    let dim = grid.dim;
    let prev_reach = reach.saturating_sub(1);
    next.par_chunks_mut(grid.slab()).enumerate().for_each(|(x0, slab)| {
        for v in slab.iter_mut() {
            *v = K::zero();
        }
        if x0 > reach {
            return;
        }
        let mut x = vec![0usize; dim];
        x[0] = x0;
        let inner = dim - 1;
        loop {
            let mut acc = K::zero();
            for (s, w) in steps {
                let mut ok = true;
                let mut src = 0usize;
                for k in 0..dim {
                    let c = x[k] as i64 - s[k] as i64;
                    if c < 0 || c as usize > prev_reach {
                        ok = false;
                        break;
                    }
                    src += c as usize * grid.strides[k];
                }
                if ok {
                    let v = &cur[src];
                    if !v.is_zero() {
                        acc = acc + w.clone() * v.clone();
                    }
                }
            }
            let local: usize = (1..dim).map(|k| x[k] * grid.strides[k]).sum();
            slab[local] = acc;
            // Odometer over axes 1..dim within [0, reach].
            let mut k = inner;
            loop {
                if k == 0 {
                    return;
                }
                if x[k] < reach {
                    x[k] += 1;
                    break;
                }
                x[k] = 0;
                k -= 1;
            }
        }
    });
}

fn filter_sums<K>(grid: &Grid, cells: &[K], filters: &[(EndpointFilter, Vec<usize>)], reach: usize) -> Vec<K>
where
    K: Clone + Zero + Add<Output = K>,
{
    let mut sums = vec![K::zero(); filters.len()];
    let mut coords = vec![0usize; grid.dim];
    for (idx, v) in cells.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        grid.coords(idx, &mut coords);
        if coords.iter().any(|&c| c > reach) {
            continue;
        }
        for (slot, (f, axes)) in filters.iter().enumerate() {
            if f.accepts(&coords, axes) {
                sums[slot] = sums[slot].clone() + v.clone();
            }
        }
    }
    sums
}

fn integral_weights(s: &StepSet) -> Option<Vec<(Vec<i8>, BigInt)>> {
    s.steps()
        .iter()
        .map(|st| st.weight.is_integer().then(|| (st.vector.clone(), st.weight.to_integer())))
        .collect()
}

/// Counts walks of every length up to `n_max` for each filter in one pass.
pub fn count_walks_multi(
    s: &StepSet,
    n_max: usize,
    filters: &[EndpointFilter],
    mode: CountMode,
) -> Result<Vec<CountSeries>> {
    count_walks_capped(s, n_max, filters, mode, DEFAULT_CELL_CAP)
}

pub fn count_walks_capped(
    s: &StepSet,
    n_max: usize,
    filters: &[EndpointFilter],
    mode: CountMode,
    cap: usize,
) -> Result<Vec<CountSeries>> {
    let dim = s.dim();
    for f in filters {
        if let EndpointFilter::Axes(v) = f {
            if v.iter().any(|&a| a >= dim) {
                return Err(Error::Parse(format!("filter {f} names an axis beyond dimension {dim}")));
            }
        }
    }
    let tagged: Vec<(EndpointFilter, Vec<usize>)> =
        filters.iter().map(|f| (f.clone(), f.zero_axes(dim))).collect();
    match mode {
        CountMode::Exact => {
            let mut out: Vec<Vec<Rational>> = vec![Vec::with_capacity(n_max + 1); filters.len()];
            if let Some(w) = integral_weights(s) {
                run_exact(dim, BigInt::from(1), &w, n_max, cap, &tagged, |sums| {
                    for (o, v) in out.iter_mut().zip(sums) {
                        o.push(Rational::from_integer(v));
                    }
                })?;
            } else {
                let w: Vec<(Vec<i8>, Rational)> =
                    s.steps().iter().map(|st| (st.vector.clone(), st.weight.clone())).collect();
                run_exact(dim, Rational::from_integer(BigInt::from(1)), &w, n_max, cap, &tagged, |sums| {
                    for (o, v) in out.iter_mut().zip(sums) {
                        o.push(v);
                    }
                })?;
            }
            Ok(filters
                .iter()
                .cloned()
                .zip(out)
                .map(|(filter, v)| CountSeries { filter, values: CountValues::Exact(v) })
                .collect())
        }
        CountMode::Float => count_float(s, n_max, &tagged, cap),
    }
}

fn run_exact<K, F>(
    dim: usize,
    unit: K,
    list: &[(Vec<i8>, K)],
    n_max: usize,
    cap: usize,
    filters: &[(EndpointFilter, Vec<usize>)],
    mut sink: F,
) -> Result<()>
where
    K: Clone + Zero + Add<Output = K> + Mul<Output = K> + Send + Sync,
    F: FnMut(Vec<K>),
{
    let grid = Grid::new(dim, n_max, cap)?;
    let mut cur = vec![K::zero(); grid.cells()];
    let mut next = vec![K::zero(); grid.cells()];
    cur[0] = unit;
    sink(filter_sums(&grid, &cur, filters, 0));
    for n in 1..=n_max {
        transition(&grid, list, &cur, &mut next, n);
        std::mem::swap(&mut cur, &mut next);
        sink(filter_sums(&grid, &cur, filters, n));
    }
    Ok(())
}

fn count_float(
    s: &StepSet,
    n_max: usize,
    filters: &[(EndpointFilter, Vec<usize>)],
    cap: usize,
) -> Result<Vec<CountSeries>> {
    let dim = s.dim();
    let total = s.total_weight().to_f64().unwrap();
    let steps: Vec<(Vec<i8>, f64)> = s
        .steps()
        .iter()
        .map(|st| (st.vector.clone(), st.weight.to_f64().unwrap() / total))
        .collect();
    let log_total = total.ln();
    let grid = Grid::new(dim, n_max, cap)?;
    let mut cur = vec![0.0f64; grid.cells()];
    let mut next = vec![0.0f64; grid.cells()];
    cur[0] = 1.0;
    let mut out: Vec<Vec<ScaledValue>> = vec![Vec::with_capacity(n_max + 1); filters.len()];
    let mut extra_scale = 0.0f64;
    let push = |out: &mut Vec<Vec<ScaledValue>>, sums: Vec<f64>, n: usize, extra: f64| -> Result<()> {
        for (o, v) in out.iter_mut().zip(sums) {
            if v != 0.0 && v < f64::MIN_POSITIVE {
                return Err(Error::Underflow(format!("count at n={n} fell below the double range")));
            }
            o.push(ScaledValue { mantissa: v, log_scale: n as f64 * log_total + extra });
        }
        Ok(())
    };
    push(&mut out, filter_sums(&grid, &cur, filters, 0), 0, 0.0)?;
    for n in 1..=n_max {
        transition(&grid, &steps, &cur, &mut next, n);
        std::mem::swap(&mut cur, &mut next);
        let mass: f64 = cur.iter().sum();
        if mass == 0.0 {
            return Err(Error::Underflow(format!("all mass vanished at n={n}")));
        }
        if mass < 1e-200 {
            let inv = 1.0 / mass;
            cur.par_iter_mut().for_each(|v| *v *= inv);
            extra_scale += mass.ln();
        }
        push(&mut out, filter_sums(&grid, &cur, filters, n), n, extra_scale)?;
    }
    Ok(filters
        .iter()
        .map(|(f, _)| f.clone())
        .zip(out)
        .map(|(filter, v)| CountSeries { filter, values: CountValues::Float(v) })
        .collect())
}

pub fn count_walks(s: &StepSet, n_max: usize, filter: &EndpointFilter, mode: CountMode) -> Result<CountSeries> {
    Ok(count_walks_multi(s, n_max, std::slice::from_ref(filter), mode)?.remove(0))
}

/// Exact number of walks of length `n` ending at each lattice point, keyed
/// by endpoint in original coordinates.
pub fn endpoint_table(s: &StepSet, n: usize) -> Result<BTreeMap<Vec<u32>, Rational>> {
    let dim = s.dim();
    let w: Vec<(Vec<i8>, Rational)> = s.steps().iter().map(|st| (st.vector.clone(), st.weight.clone())).collect();
    let grid = Grid::new(dim, n, DEFAULT_CELL_CAP)?;
    let mut cur = vec![Rational::zero(); grid.cells()];
    let mut next = cur.clone();
    cur[0] = Rational::from_integer(BigInt::from(1));
    for k in 1..=n {
        transition(&grid, &w, &cur, &mut next, k);
        std::mem::swap(&mut cur, &mut next);
    }
    let mut table = BTreeMap::new();
    let mut coords = vec![0usize; dim];
    for (idx, v) in cur.iter().enumerate() {
        if !v.is_zero() {
            grid.coords(idx, &mut coords);
            table.insert(coords.iter().map(|&c| c as u32).collect(), v.clone());
        }
    }
    Ok(table)
}
