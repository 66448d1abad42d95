use anyhow::Result;
use latwalk::asympt::{analysis_kernel, asympt_closed, asympt_full, canonical_zero_axes, AsymptoticExpansion};
use latwalk::catalog::{self, reproduce_with, CellStatus, Column, ReproductionMode, StoredForm, Table as CatalogTable, TableReport};
use latwalk::critical::{check_critical, contributing_points_for, minimum_witness};
use latwalk::enumerate::{count_walks, CountMode, CountValues, ScaledValue};
use latwalk::kernel::{diagonal_coeffs_with, group_elements, orbit_sum, orbit_sum_product_form};
use latwalk::scalar::{Real, Tolerance};
use latwalk::stepset::StepSet;
use latwalk::verify::{default_n_max, verify_model, ModelDescriptor, Status};
use latwalk::Mp;
use num_complex::Complex;
use serde_json::{json, Value};

use crate::model::{self, UsageError};
use crate::render::{Report, Table};
use crate::{Common, Mode};

const DEFAULT_COUNT_N: usize = 20;
const DIGITS: usize = 30;

fn mp(x: &Mp) -> String {
    x.to_decimal(DIGITS)
}

fn complex(z: &Complex<Mp>) -> Value {
    json!({ "re": mp(&z.re), "im": mp(&z.im) })
}

fn complex_text(z: &Complex<Mp>) -> String {
    let im = z.im.to_f64();
    if im.abs() < 1e-30 {
        mp(&z.re)
    } else {
        format!("{}{}{}i", mp(&z.re), if im < 0.0 { "-" } else { "+" }, mp(&z.im.abs()))
    }
}

/// Decimal scientific rendering of `mantissa * e^log_scale`.
fn scaled_text(v: &ScaledValue) -> String {
    if v.mantissa == 0.0 {
        return "0".into();
    }
    let log10 = (v.mantissa.ln() + v.log_scale) / std::f64::consts::LN_10;
    let exp = log10.floor();
    format!("{:.15}e{}", 10f64.powf(log10 - exp), exp as i64)
}

fn setup(c: &Common) -> Result<(StepSet, latwalk::enumerate::EndpointFilter)> {
    let s = model::load(c.model.as_deref())?;
    let f = model::filter(&c.endpoint, &s)?;
    Ok((s, f))
}

fn model_json(s: &StepSet) -> Value {
    serde_json::to_value(ModelDescriptor::of(s)).expect("descriptor serializes")
}

pub fn count(c: &Common) -> Result<Report> {
    let (s, filter) = setup(c)?;
    let n = c.n.unwrap_or(DEFAULT_COUNT_N);
    let mode = match c.mode.unwrap_or(Mode::Exact) {
        Mode::Exact => CountMode::Exact,
        Mode::Float => CountMode::Float,
    };
    let series = count_walks(&s, n, &filter, mode)?;
    let values: Vec<String> = match &series.values {
        CountValues::Exact(v) => v.iter().map(ToString::to_string).collect(),
        CountValues::Float(v) => v.iter().map(scaled_text).collect(),
    };
    let mut table = Table::new(&["n", "count"]);
    for (k, v) in values.iter().enumerate() {
        table.push(vec![k.to_string(), v.clone()]);
    }
    let body = json!({
        "model": model_json(&s),
        "endpoint": filter.to_string(),
        "mode": mode,
        "counts": values,
    });
    Ok(Report::new("count", Status::Pass, body, table))
}

pub fn diagonal(c: &Common) -> Result<Report> {
    let (s, filter) = setup(c)?;
    let n = c.n.unwrap_or(12);
    let kernel = analysis_kernel(&s)?;
    let numerator = kernel.boundary_numerator(&canonical_zero_axes(&s, &filter));
    let diag = diagonal_coeffs_with(&kernel, &numerator, n)?;
    let counts = match count_walks(&s, n, &filter, CountMode::Exact)?.values {
        CountValues::Exact(v) => v,
        CountValues::Float(_) => unreachable!("exact mode"),
    };
    let mut table = Table::new(&["n", "diagonal", "count", "match"]);
    let mut all = true;
    for (k, (d, w)) in diag.iter().zip(&counts).enumerate() {
        all &= d == w;
        table.push(vec![k.to_string(), d.to_string(), w.to_string(), (d == w).to_string()]);
    }
    let body = json!({
        "model": model_json(&s),
        "endpoint": filter.to_string(),
        "kernel_form": kernel.form,
        "diagonal": diag.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "counts": counts.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "matches": all,
    });
    Ok(Report::new("diagonal", if all { Status::Pass } else { Status::Fail }, body, table))
}

pub fn orbitsum(c: &Common) -> Result<Report> {
    let (s, _) = setup(c)?;
    let (num, den) = orbit_sum(&s)?;
    let product = orbit_sum_product_form(&s);
    let consistent = num == product;
    let kernel = analysis_kernel(&s)?;
    let group: Vec<Value> = group_elements(&s)
        .iter()
        .map(|g| json!({ "flips": g.flips, "involution": g.gamma, "sign": g.sign() }))
        .collect();
    let mut table = Table::new(&["quantity", "value"]);
    table.push(vec!["orbit sum numerator".into(), num.to_string()]);
    table.push(vec!["orbit sum denominator".into(), den.to_string()]);
    table.push(vec!["product form agrees".into(), consistent.to_string()]);
    table.push(vec!["kernel numerator".into(), kernel.g.to_string()]);
    table.push(vec!["kernel factor 1".into(), kernel.h1.to_string()]);
    if let Some(h2) = &kernel.h2 {
        table.push(vec!["kernel factor 2".into(), h2.to_string()]);
    }
    if let Some(h3) = &kernel.h3 {
        table.push(vec!["kernel factor 3".into(), h3.to_string()]);
    }
    let body = json!({
        "model": model_json(&s),
        "group": group,
        "orbit_sum": { "numerator": num.to_string(), "denominator": den.to_string() },
        "product_form_agrees": consistent,
        "kernel": {
            "form": kernel.form,
            "numerator": kernel.g.to_string(),
            "factors": [Some(kernel.h1.to_string()), kernel.h2.as_ref().map(ToString::to_string), kernel.h3.as_ref().map(ToString::to_string)],
        },
    });
    Ok(Report::new("orbitsum", if consistent { Status::Pass } else { Status::Fail }, body, table))
}

pub fn critical(c: &Common) -> Result<Report> {
    let (s, filter) = setup(c)?;
    let tol = Tolerance::<Mp>::for_precision();
    let points = contributing_points_for::<Mp>(&s, &canonical_zero_axes(&s, &filter))?;
    let mut table = Table::new(&["index", "stratum", "point", "rate", "exact rate", "max residual"]);
    let mut rows = Vec::new();
    let mut all = !points.is_empty();
    for (k, p) in points.iter().enumerate() {
        let report = check_critical(&s, p);
        all &= report.accepted(&tol);
        let coords: Vec<String> = p.w.iter().map(complex_text).collect();
        let exact = p.exact.as_ref().map(|e| e.rate.to_string());
        table.push(vec![
            k.to_string(),
            format!("{:?}", p.stratum),
            format!("({})", coords.join(", ")),
            complex_text(&p.rate()),
            exact.clone().unwrap_or_default(),
            format!("{:.3e}", report.max_residual().to_f64()),
        ]);
        rows.push(json!({
            "stratum": p.stratum,
            "w": p.w.iter().map(complex).collect::<Vec<_>>(),
            "t": complex(&p.t),
            "rate": complex(&p.rate()),
            "rate_exact": exact,
            "max_residual": mp(&report.max_residual()),
        }));
    }
    let witness = (s.classify().drift_sign != 0).then(|| minimum_witness(&s, 1000, 10_000));
    let body = json!({
        "model": model_json(&s),
        "endpoint": filter.to_string(),
        "points": rows,
        "minimum_witness": witness,
    });
    Ok(Report::new("critical", if all { Status::Pass } else { Status::Fail }, body, table))
}

fn expansion_json(e: &AsymptoticExpansion<Mp>) -> Value {
    let terms: Vec<Value> = e
        .terms
        .iter()
        .map(|t| {
            json!({
                "stratum": t.point.as_ref().map(|p| p.stratum),
                "rate": complex(&t.rate),
                "rate_exact": t.rate_exact.as_ref().map(ToString::to_string),
                "alpha": t.alpha.to_string(),
                "coefficients": t.coefficients.iter().map(complex).collect::<Vec<_>>(),
                "higher_order_required": t.higher_order_required,
            })
        })
        .collect();
    let periodic = e.periodic.as_ref().map(|p| {
        json!({
            "period": p.period,
            "modulus": mp(&p.modulus),
            "modulus_exact": p.modulus_exact.as_ref().map(ToString::to_string),
            "alpha": p.alpha.to_string(),
            "order": p.order,
            "constants": p.constants.iter().map(mp).collect::<Vec<_>>(),
        })
    });
    json!({ "method": e.method, "partial": e.partial, "notes": e.notes, "terms": terms, "periodic": periodic })
}

fn push_periodic(table: &mut Table, route: &str, e: &AsymptoticExpansion<Mp>) {
    if let Some(p) = &e.periodic {
        let rate = p.modulus_exact.as_ref().map(ToString::to_string).unwrap_or_else(|| mp(&p.modulus));
        for (r, c) in p.constants.iter().enumerate() {
            table.push(vec![route.into(), rate.clone(), p.alpha.to_string(), format!("{r} mod {}", p.period), mp(c)]);
        }
    }
}

pub fn asympt(c: &Common) -> Result<Report> {
    let (s, filter) = setup(c)?;
    let engine = asympt_full::<Mp>(&s, &filter, c.order)?;
    let closed = if filter.zero_axes(s.dim()).is_empty() { asympt_closed::<Mp>(&s).ok() } else { None };
    let mut table = Table::new(&["route", "rate", "alpha", "residue", "constant"]);
    push_periodic(&mut table, "engine", &engine);
    let mut agree = true;
    if let Some(cl) = &closed {
        push_periodic(&mut table, "closed form", cl);
        if let (Some(a), Some(b)) = (&engine.periodic, &cl.periodic) {
            let period = num_integer::lcm(a.period, b.period);
            agree = a.alpha == b.alpha
                && (0..period).all(|r| {
                    let (x, y) = (a.constant(r).to_f64(), b.constant(r).to_f64());
                    (x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
                });
        }
    }
    let status = if !agree {
        Status::Fail
    } else if engine.partial || engine.periodic.is_none() {
        Status::Partial
    } else {
        Status::Pass
    };
    let body = json!({
        "model": model_json(&s),
        "endpoint": filter.to_string(),
        "engine": expansion_json(&engine),
        "closed_form": closed.as_ref().map(expansion_json),
        "routes_agree": agree,
    });
    Ok(Report::new("asympt", status, body, table))
}

pub fn verify(c: &Common) -> Result<Report> {
    let (s, filter) = setup(c)?;
    let n = c.n.unwrap_or_else(|| default_n_max(s.dim()));
    if n < 64 {
        return Err(UsageError(format!("--n {n} is too short for a growth fit (at least 64)")).into());
    }
    let report = verify_model(&s, n, &filter);
    let mut table = Table::new(&["check", "predicted", "observed", "tolerance", "passed"]);
    for e in &report.exact_checks {
        table.push(vec![format!("{} (n <= {})", e.name, e.n_max), String::new(), String::new(), String::new(), e.passed.to_string()]);
    }
    for k in &report.comparisons {
        table.push(vec![k.quantity.clone(), k.predicted.to_string(), k.observed.to_string(), k.tolerance.to_string(), k.passed.to_string()]);
    }
    let status = report.status;
    Ok(Report::new("verify", status, serde_json::to_value(&report)?, table))
}

fn form_text(f: &StoredForm) -> String {
    let alpha = f.alpha();
    let power = if alpha.numer() == &0.into() { String::new() } else { format!(" n^({alpha})") };
    match f.constants {
        [c] => format!("{c} ({})^n{power}", f.rate),
        cs => format!("({})^n{power} C[n mod {}], C = [{}]", f.rate, cs.len(), cs.join(", ")),
    }
}

fn class_text(class: catalog::ModelClass) -> &'static str {
    use catalog::ModelClass::*;
    match class {
        HighlySymmetric => "highly symmetric",
        PositiveDrift => "positive drift",
        NegativeDrift => "negative drift",
        AlgebraicExceptional => "algebraic",
        NoSymmetryDFinite => "D-finite, no symmetry",
    }
}

fn catalog_list() -> Report {
    let mut table = Table::new(&["model", "alias", "steps", "class", "anywhere", "x-axis", "y-axis", "origin"]);
    let mut first = Table::new(&["Model", "Steps", "Class", "Asymptotics"]);
    let mut second = Table::new(&["Model", "x-axis", "y-axis", "origin"]);
    for e in catalog::entries() {
        let steps = format!("{{{}}}", e.steps.join(","));
        let boundary = e.boundary.map(|t| [form_text(&t.x_axis), form_text(&t.y_axis), form_text(&t.origin)]);
        let mut row = vec![e.name.to_string(), e.alias.unwrap_or("").to_string(), steps.clone(), class_text(e.class).into(), form_text(&e.anywhere)];
        row.extend(boundary.clone().unwrap_or_default());
        table.push(row);
        first.push(vec![e.name.into(), steps, class_text(e.class).into(), form_text(&e.anywhere)]);
        if let Some([x, y, o]) = boundary {
            second.push(vec![e.name.into(), x, y, o]);
        }
    }
    let body = json!({ "entries": catalog::entries(), "builtin_extras": catalog::BUILTIN_EXTRAS });
    let mut r = Report::new("catalog", Status::Pass, body, table);
    r.markdown = Some(format!("## Walks anywhere\n\n{}\n## Returns to the boundary\n\n{}", first.markdown(), second.markdown()));
    r
}

fn column_text(c: Column) -> &'static str {
    match c {
        Column::Anywhere => "anywhere",
        Column::XAxis => "x-axis",
        Column::YAxis => "y-axis",
        Column::Origin => "origin",
    }
}

fn catalog_check(c: &Common) -> Report {
    let mode = match c.mode.unwrap_or(Mode::Exact) {
        Mode::Exact => ReproductionMode::Symbolic,
        Mode::Float => ReproductionMode::Empirical,
    };
    let n = c.n.unwrap_or(catalog::EMPIRICAL_N);
    let reports: Vec<TableReport> =
        [CatalogTable::Anywhere, CatalogTable::Boundary].into_iter().map(|t| reproduce_with(t, mode, n)).collect();
    let mut table = Table::new(&["table", "model", "column", "route", "status", "detail"]);
    let mut md = String::new();
    for rep in &reports {
        let heading = match rep.table {
            CatalogTable::Anywhere => "Walks anywhere",
            CatalogTable::Boundary => "Returns to the boundary",
        };
        let mut grid = match rep.table {
            CatalogTable::Anywhere => Table::new(&["Model", "anywhere"]),
            CatalogTable::Boundary => Table::new(&["Model", "x-axis", "y-axis", "origin"]),
        };
        for cell in &rep.cells {
            let status = serde_json::to_value(cell.status).expect("status serializes").as_str().unwrap_or("").to_string();
            table.push(vec![
                format!("{:?}", rep.table),
                cell.model.into(),
                column_text(cell.column).into(),
                cell.route.clone(),
                status.clone(),
                cell.detail.clone().unwrap_or_default(),
            ]);
            match grid.rows.last_mut() {
                Some(row) if row[0] == cell.model => row.push(status),
                _ => grid.push(vec![cell.model.into(), status]),
            }
        }
        md.push_str(&format!(
            "## {heading}\n\n{}\n{} passed, {} failed, {} skipped\n\n",
            grid.markdown(),
            rep.passed,
            rep.failed,
            rep.skipped
        ));
    }
    let failed = reports.iter().any(|r| !r.all_passed());
    let any_cell_passed = reports.iter().flat_map(|r| &r.cells).any(|c| c.status == CellStatus::Pass);
    let status = if failed {
        Status::Fail
    } else if any_cell_passed {
        Status::Pass
    } else {
        Status::Partial
    };
    let body = json!({ "mode": mode, "n": n, "tables": reports });
    let mut r = Report::new("catalog", status, body, table);
    r.markdown = Some(md);
    r
}

pub fn catalog(c: &Common, check: bool) -> Result<Report> {
    Ok(if check { catalog_check(c) } else { catalog_list() })
}
