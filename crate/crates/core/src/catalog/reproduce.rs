//! Reproduction of the stored tables, either from the asymptotic routes
//! (symbolic) or from enumeration and growth fits (empirical).

use rayon::prelude::*;
use serde::Serialize;

use super::{entries, CatalogEntry, StoredForm};
use crate::asympt::{asympt_closed, asympt_full, AsymptoticExpansion};
use crate::enumerate::{count_walks_multi, CountMode, EndpointFilter};
use crate::verify::{compare_form, estimate_growth, Comparison, GrowthHints, PredictedForm};
use crate::scalar::Real;
use crate::Mp;

/// Relative agreement required between a computed and a stored constant.
pub const SYMBOLIC_TOLERANCE: f64 = 1e-12;

/// Series length of the empirical fits.
pub const EMPIRICAL_N: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Table {
    Anywhere,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReproductionMode {
    Symbolic,
    Empirical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Column {
    Anywhere,
    XAxis,
    YAxis,
    Origin,
}

impl Column {
    pub fn filter(self) -> EndpointFilter {
        match self {
            Column::Anywhere => EndpointFilter::Anywhere,
            Column::XAxis => EndpointFilter::Axes(vec![0]),
            Column::YAxis => EndpointFilter::Axes(vec![1]),
            Column::Origin => EndpointFilter::Origin,
        }
    }

    fn of(table: Table) -> &'static [Column] {
        match table {
            Table::Anywhere => &[Column::Anywhere],
            Table::Boundary => &[Column::XAxis, Column::YAxis, Column::Origin],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Pass,
    Fail,
    /// Not reachable by this mode (outside the theorems, or the expansion is
    /// flagged partial).
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub model: &'static str,
    pub column: Column,
    pub route: String,
    pub status: CellStatus,
    pub stored: PredictedForm,
    pub computed: Vec<PredictedForm>,
    pub comparisons: Vec<Comparison>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub table: Table,
    pub mode: ReproductionMode,
    pub cells: Vec<CellReport>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn relative(name: String, want: f64, got: f64, tol: f64) -> Comparison {
    let passed = if want == 0.0 { got.abs() < tol } else { (got / want - 1.0).abs() < tol };
    Comparison { quantity: name, predicted: want, observed: got, tolerance: tol, passed }
}

/// Exact comparison of a computed leading form with a stored one: equal
/// exponents, and rate and per-residue constants to the symbolic tolerance.
pub fn compare_symbolic(stored: &StoredForm, e: &AsymptoticExpansion<Mp>, route: &str) -> (Vec<Comparison>, Option<PredictedForm>) {
    let Some(p) = e.periodic.as_ref() else {
        return (Vec::new(), None);
    };
    let want_rate: Mp = stored.rate_value().expect("stored rate parses");
    let want_constants: Vec<Mp> = stored.constant_values().expect("stored constants parse");
    let mut out = vec![
        relative(format!("{route} rate"), want_rate.to_f64(), p.modulus.to_f64(), SYMBOLIC_TOLERANCE),
        Comparison {
            quantity: format!("{route} alpha"),
            predicted: crate::verify::rational_to_f64(&stored.alpha()),
            observed: crate::verify::rational_to_f64(&p.alpha),
            tolerance: 0.0,
            passed: p.alpha == stored.alpha(),
        },
    ];
    let period = num_integer::lcm(want_constants.len(), p.period);
    for r in 0..period {
        let want = want_constants[r % want_constants.len()].to_f64();
        let got = p.constants[r % p.period].to_f64();
        let scale = want_constants.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        let name = format!("{route} constant[n≡{r} mod {period}]");
        out.push(if want == 0.0 {
            relative(name, 0.0, got / scale, SYMBOLIC_TOLERANCE)
        } else {
            relative(name, want, got, SYMBOLIC_TOLERANCE)
        });
    }
    (out, PredictedForm::from_expansion(route, e))
}

fn symbolic_cell(entry: &'static CatalogEntry, column: Column, stored: &StoredForm) -> CellReport {
    let s = entry.step_set();
    let filter = column.filter();
    let stored_form = PredictedForm::from_stored("stored", stored).expect("stored values parse");
    let mut cell = CellReport {
        model: entry.name,
        column,
        route: "engine".into(),
        status: CellStatus::Skipped,
        stored: stored_form,
        computed: Vec::new(),
        comparisons: Vec::new(),
        detail: None,
    };
    if !entry.class.theorem_covered() {
        cell.detail = Some("outside the closed-form theorems".into());
        return cell;
    }
    match asympt_full::<Mp>(&s, &filter, None) {
        Ok(e) if e.partial => {
            cell.detail = Some(format!("expansion flagged partial: {}", e.notes.join("; ")));
            return cell;
        }
        Ok(e) => {
            let (cmp, form) = compare_symbolic(stored, &e, "engine");
            cell.comparisons.extend(cmp);
            cell.computed.extend(form);
        }
        Err(err) => {
            cell.status = CellStatus::Fail;
            cell.detail = Some(err.to_string());
            return cell;
        }
    }
    if column == Column::Anywhere {
        cell.route = "engine+closed form".into();
        match asympt_closed::<Mp>(&s) {
            Ok(e) => {
                let (cmp, form) = compare_symbolic(stored, &e, "closed form");
                cell.comparisons.extend(cmp);
                cell.computed.extend(form);
            }
            Err(err) => cell.detail = Some(err.to_string()),
        }
    }
    cell.status = if !cell.comparisons.is_empty() && cell.comparisons.iter().all(|c| c.passed) {
        CellStatus::Pass
    } else {
        CellStatus::Fail
    };
    cell
}

fn empirical_cells(entry: &'static CatalogEntry, columns: &[Column], n: usize) -> Vec<CellReport> {
    let s = entry.step_set();
    let filters: Vec<EndpointFilter> = columns.iter().map(|c| c.filter()).collect();
    let series = count_walks_multi(&s, n, &filters, CountMode::Float);
    columns
        .iter()
        .enumerate()
        .filter_map(|(i, &column)| {
            let stored = entry.form_for(&column.filter())?;
            let stored_form = PredictedForm::from_stored("stored", stored).expect("stored values parse");
            let mut cell = CellReport {
                model: entry.name,
                column,
                route: format!("enumeration to n = {n}"),
                status: CellStatus::Fail,
                stored: stored_form.clone(),
                computed: Vec::new(),
                comparisons: Vec::new(),
                detail: None,
            };
            let fitted = series
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|v| {
                    let hints = GrowthHints { rate: Some(stored_form.rate), alpha: Some(stored_form.alpha) };
                    estimate_growth(&v[i], &hints).map_err(|e| e.to_string())
                });
            match fitted {
                Ok(fit) => {
                    cell.comparisons = compare_form("", &stored_form, &fit);
                    cell.computed.push(PredictedForm {
                        source: "fit".into(),
                        rate: fit.rho,
                        alpha: fit.alpha,
                        alpha_exact: format!("{:.4}", fit.alpha),
                        constants: fit.constants.iter().map(|c| c.unwrap_or(0.0)).collect(),
                    });
                    if cell.comparisons.iter().all(|c| c.passed) {
                        cell.status = CellStatus::Pass;
                    }
                }
                Err(e) => cell.detail = Some(e),
            }
            Some(cell)
        })
        .collect()
}

/// Reproduces one table in one mode, in parallel over models.
pub fn reproduce_tables(table: Table, mode: ReproductionMode) -> TableReport {
    reproduce_with(table, mode, EMPIRICAL_N)
}

pub fn reproduce_with(table: Table, mode: ReproductionMode, n: usize) -> TableReport {
    let columns = Column::of(table);
    let cells: Vec<CellReport> = entries()
        .par_iter()
        .flat_map_iter(|entry| match mode {
            ReproductionMode::Symbolic => columns
                .iter()
                .filter_map(|&c| entry.form_for(&c.filter()).map(|f| symbolic_cell(entry, c, f)))
                .collect::<Vec<_>>(),
            ReproductionMode::Empirical => empirical_cells(entry, columns, n),
        })
        .collect();
    let count = |st: CellStatus| cells.iter().filter(|c| c.status == st).count();
    TableReport {
        table,
        mode,
        passed: count(CellStatus::Pass),
        failed: count(CellStatus::Fail),
        skipped: count(CellStatus::Skipped),
        cells,
    }
}
