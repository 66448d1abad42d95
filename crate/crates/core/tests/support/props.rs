//! Invariant checks shared by the property suite and the acceptance run.

use latwalk::asympt::{asympt_full, AsymptoticExpansion};
use latwalk::enumerate::{count_walks, CountMode, CountValues, EndpointFilter};
use latwalk::kernel::{act, group_elements, orbit_sum, RationalFunction};
use latwalk::stepset::{Step, StepSet, SymmetryKind};
use latwalk::{Mp, Rational, Real};
use num_traits::{One, Zero};
use rand::Rng;

pub type Check = Result<(), String>;

pub const COUNT_N: usize = 8;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Non-zero vectors of `{-1,0,1}^d` in a fixed order.
pub fn all_vectors(d: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for code in 0..3usize.pow(d as u32) {
        let v: Vec<i8> = (0..d).map(|k| ((code / 3usize.pow(k as u32)) % 3) as i8 - 1).collect();
        if v.iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    out
}

/// Closes `(vector, weight)` picks under reflection in every axis but the
/// last, so the result is covered by the kernel method whenever valid.
pub fn symmetric_closure(d: usize, picks: &[(usize, u32)]) -> Option<StepSet> {
    let vectors = all_vectors(d);
    let mut steps: Vec<Step> = Vec::new();
    for &(i, w) in picks {
        let v = &vectors[i % vectors.len()];
        for mask in 0..1u32 << (d - 1) {
            let r: Vec<i8> = v.iter().enumerate().map(|(k, &x)| if k < d - 1 && mask >> k & 1 == 1 { -x } else { x }).collect();
            if !steps.iter().any(|s| s.vector == r) {
                steps.push(Step { vector: r, weight: Rational::from_integer(w.into()) });
            }
        }
    }
    let s = StepSet::new(d, steps).ok()?;
    let c = s.classify();
    (c.kind != SymmetryKind::Unsupported).then_some(s)
}

pub fn random_step_set<R: Rng>(rng: &mut R) -> StepSet {
    loop {
        let d = rng.gen_range(2..=3);
        let k = rng.gen_range(2..=5);
        let picks: Vec<(usize, u32)> = (0..k).map(|_| (rng.gen_range(0..100), rng.gen_range(1..=3))).collect();
        if let Some(s) = symmetric_closure(d, &picks) {
            return s;
        }
    }
}

fn exact_counts(s: &StepSet, n: usize, f: &EndpointFilter) -> Result<Vec<Rational>, String> {
    match count_walks(s, n, f, CountMode::Exact).map_err(|e| e.to_string())?.values {
        CountValues::Exact(v) => Ok(v),
        CountValues::Float(_) => Err("exact mode returned floats".into()),
    }
}

fn rebuild(s: &StepSet, f: impl Fn(&Step) -> Step) -> StepSet {
    StepSet::new(s.dim(), s.steps().iter().map(f).collect()).expect("transformed step set stays valid")
}

/// Depth-limited expansion for random models; `None` when it is partial or
/// the model is outside the theorems.
pub fn expansion(s: &StepSet) -> Option<AsymptoticExpansion<Mp>> {
    if s.classify().drift_sign == 0 && !s.is_highly_symmetric() {
        return None;
    }
    asympt_full::<Mp>(s, &EndpointFilter::Anywhere, None).ok().filter(|e| !e.partial && e.periodic.is_some())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300)
}

fn same_leading(a: &AsymptoticExpansion<Mp>, b: &AsymptoticExpansion<Mp>, rate_factor: f64) -> Check {
    let (p, q) = (a.periodic.as_ref().unwrap(), b.periodic.as_ref().unwrap());
    ensure(p.alpha == q.alpha, || format!("exponent {} vs {}", p.alpha, q.alpha))?;
    ensure(close(p.modulus.to_f64() * rate_factor, q.modulus.to_f64()), || {
        format!("rate {} * {rate_factor} vs {}", p.modulus.to_f64(), q.modulus.to_f64())
    })?;
    let period = num_integer::lcm(p.period, q.period);
    for r in 0..period {
        let (x, y) = (p.constant(r).to_f64(), q.constant(r).to_f64());
        ensure(close(x, y) || (x.abs() < 1e-20 && y.abs() < 1e-20), || format!("constant[{r}] {x} vs {y}"))?;
    }
    Ok(())
}

/// Multiplying every weight by `lambda` multiplies `s_n` by `lambda^n`,
/// keeps the class, and scales the growth rate only.
pub fn check_scaling(s: &StepSet, lambda: &Rational, with_asymptotics: bool) -> Check {
    let t = rebuild(s, |st| Step { vector: st.vector.clone(), weight: &st.weight * lambda });
    ensure(t.classify().kind == s.classify().kind && t.classify().drift_sign == s.classify().drift_sign, || {
        "class changed under scaling".into()
    })?;
    let (a, b) = (exact_counts(s, COUNT_N, &EndpointFilter::Anywhere)?, exact_counts(&t, COUNT_N, &EndpointFilter::Anywhere)?);
    let mut power = Rational::one();
    for (n, (x, y)) in a.iter().zip(&b).enumerate() {
        ensure(&(x * &power) == y, || format!("n = {n}: {x} * {lambda}^n != {y}"))?;
        power *= lambda;
    }
    if with_asymptotics {
        if let (Some(e), Some(f)) = (expansion(s), expansion(&t)) {
            use num_traits::ToPrimitive;
            same_leading(&e, &f, lambda.to_f64().unwrap())?;
        }
    }
    Ok(())
}

/// Reflecting a symmetric axis changes nothing; reflecting the remaining
/// axis negates the drift.
pub fn check_reflection(s: &StepSet) -> Check {
    let d = s.dim();
    let last = (0..d).find(|&a| s.canonical_axis(a) == d - 1).unwrap();
    for axis in 0..d {
        let r = s.reflected(axis).map_err(|e| e.to_string())?;
        if axis == last {
            ensure(r.classify().drift == -s.classify().drift.clone(), || "drift not negated".into())?;
        } else {
            ensure(r.poly() == s.poly(), || format!("axis {axis} is not a symmetry"))?;
            ensure(
                exact_counts(&r, COUNT_N, &EndpointFilter::Anywhere)? == exact_counts(s, COUNT_N, &EndpointFilter::Anywhere)?,
                || "counts changed under a symmetry".into(),
            )?;
        }
    }
    Ok(())
}

/// Permuting coordinates permutes filters and leaves counts, class and
/// asymptotics unchanged.
pub fn check_relabeling(s: &StepSet, perm: &[usize], with_asymptotics: bool) -> Check {
    let d = s.dim();
    let t = rebuild(s, |st| Step { vector: perm.iter().map(|&k| st.vector[k]).collect(), weight: st.weight.clone() });
    ensure(t.classify().drift == s.classify().drift && t.is_highly_symmetric() == s.is_highly_symmetric(), || {
        "class changed under relabeling".into()
    })?;
    for axis in 0..d {
        let new_axis = perm.iter().position(|&k| k == axis).unwrap();
        let a = exact_counts(s, COUNT_N, &EndpointFilter::Axes(vec![axis]))?;
        let b = exact_counts(&t, COUNT_N, &EndpointFilter::Axes(vec![new_axis]))?;
        ensure(a == b, || format!("axis {axis} counts differ after relabeling"))?;
    }
    ensure(
        exact_counts(s, COUNT_N, &EndpointFilter::Origin)? == exact_counts(&t, COUNT_N, &EndpointFilter::Origin)?,
        || "origin counts differ after relabeling".into(),
    )?;
    if with_asymptotics {
        if let (Some(e), Some(f)) = (expansion(s), expansion(&t)) {
            same_leading(&e, &f, 1.0)?;
        }
    }
    Ok(())
}

/// Every group element maps the orbit sum to itself times its sign.
pub fn check_orbit_antisymmetry(s: &StepSet) -> Check {
    let (num, den) = orbit_sum(s).map_err(|e| e.to_string())?;
    let f = RationalFunction { num, den };
    for g in group_elements(s) {
        let image = act(s, &g, &f);
        let want = if g.sign() > 0 { f.clone() } else { f.neg() };
        ensure(image.equals(&want), || format!("orbit sum not antisymmetric under {g:?}"))?;
    }
    Ok(())
}

/// Origin returns are at most returns to any one hyperplane, which are at
/// most all walks; all axes at once is the origin.
pub fn check_filter_nesting(s: &StepSet, n: usize) -> Check {
    let d = s.dim();
    let all = exact_counts(s, n, &EndpointFilter::Anywhere)?;
    let origin = exact_counts(s, n, &EndpointFilter::Origin)?;
    ensure(origin == exact_counts(s, n, &EndpointFilter::Axes((0..d).collect()))?, || "all axes differ from origin".into())?;
    for axis in 0..d {
        let one = exact_counts(s, n, &EndpointFilter::Axes(vec![axis]))?;
        for k in 0..=n {
            ensure(origin[k] <= one[k] && one[k] <= all[k] && origin[k] >= Rational::zero(), || {
                format!("n = {k}, axis {axis}: {} <= {} <= {} fails", origin[k], one[k], all[k])
            })?;
        }
    }
    Ok(())
}

/// Non-real contributions come in conjugate pairs with conjugate
/// coefficients, and folded constants are non-negative.
pub fn check_conjugate_pairs_and_signs(s: &StepSet) -> Check {
    let Some(e) = expansion(s) else { return Ok(()) };
    let tol = 1e-25;
    for t in &e.terms {
        if t.rate.im.to_f64().abs() < tol {
            continue;
        }
        let partner = e.terms.iter().find(|u| {
            (u.rate.clone() - t.rate.conj()).norm_sqr().to_f64().sqrt() < tol
                && u.coefficients.iter().zip(&t.coefficients).all(|(a, b)| (a.clone() - b.conj()).norm_sqr().to_f64().sqrt() < tol)
        });
        ensure(partner.is_some(), || format!("no conjugate partner for rate {}", t.rate.re.to_f64()))?;
    }
    let p = e.periodic.as_ref().unwrap();
    let scale = p.constants.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
    for (r, c) in p.constants.iter().enumerate() {
        ensure(c.to_f64() >= -1e-20 * scale, || format!("constant[{r}] = {} is negative", c.to_f64()))?;
    }
    Ok(())
}

pub fn all_checks(s: &StepSet, perm_seed: usize) -> Check {
    let d = s.dim();
    let mut perm: Vec<usize> = (0..d).collect();
    perm.rotate_left(perm_seed % d);
    let asymptotics = d == 2;
    check_scaling(s, &Rational::new(3.into(), 2.into()), asymptotics)?;
    check_reflection(s)?;
    check_relabeling(s, &perm, asymptotics)?;
    check_orbit_antisymmetry(s)?;
    check_filter_nesting(s, COUNT_N)?;
    if asymptotics || s.steps().len() <= 6 {
        check_conjugate_pairs_and_signs(s)?;
    }
    Ok(())
}
