//! Recompute the reference landscape tables and diff them cell by cell.
//!
//! The reference values are the published landscapes for three systems: the
//! built-in toy system, the shipped 551 = 19×29 reduction, and the shipped
//! 841 = 29×29 reduction. Most cells are asserted: any difference means the
//! data files or the pipeline changed, and the run fails. The degeneracy
//! columns of the 841 table are reported but not asserted — the reference
//! labels that system as 17 qubits while the shipped file has 16 variables,
//! so those columns carry a note instead of a verdict.

use elmkit_api::SpectrumReport;
use elmkit_core::WeightScheme;
use serde::Serialize;

use crate::output::{exact_decimal, grid, landscape_row, LANDSCAPE_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Asserted and equal.
    Ok,
    /// Asserted and different: fails the run.
    Mismatch,
    /// Reported only; differences are printed but never fail the run.
    Noted,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellCheck {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub name: String,
    pub cells: Vec<CellCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCheck {
    pub title: String,
    pub rows: Vec<RowCheck>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproduction {
    pub tables: Vec<TableCheck>,
    pub cells_checked: usize,
    pub mismatches: usize,
}

/// One characterized landscape plus, for transformed Hamiltonians, the
/// ground-state preservation verdict of the transform that produced it.
pub struct LandscapeInput<'a> {
    pub report: &'a SpectrumReport,
    pub preserved: Option<bool>,
}

pub struct TableInputs<'a> {
    pub toy: [LandscapeInput<'a>; 2],
    pub plan_551: &'a WeightScheme,
    pub sys_551: [LandscapeInput<'a>; 3],
    pub sys_841: [LandscapeInput<'a>; 3],
}

const TOY_CELLS: [usize; 6] = [0, 1, 2, 3, 8, 9];
const TOY_EXPECTED: [[&str; 6]; 2] = [
    ["1", "2", "2", "1", "17", "289"],
    ["4", "4", "5", "1", "20", "6.25"],
];

/// Per-equation maxima and weights: (side a, side b, energy, λ).
const PLAN_551_EXPECTED: [(i64, i64, i64, i64); 9] = [
    (2, 1, 4, 13),
    (2, 1, 4, 13),
    (4, 6, 36, 2),
    (6, 6, 36, 2),
    (6, 7, 49, 1),
    (5, 6, 36, 2),
    (4, 6, 36, 2),
    (3, 2, 9, 6),
    (2, 1, 4, 13),
];

const ALL_CELLS: [usize; 10] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9];
const SYS_551_EXPECTED: [[&str; 10]; 3] = [
    ["1", "2", "2", "20", "3", "60", "4", "113", "133", "17689"],
    ["2", "2", "3", "8", "4", "4", "5", "16", "296", "10952"],
    ["2", "2", "3", "12", "4", "8", "5", "35", "238", "7081"],
];
const SYS_841_EXPECTED: [[&str; 10]; 3] = [
    ["1", "4", "2", "5", "3", "14", "4", "38", "166", "27556"],
    ["1", "2", "2", "7", "3", "14", "4", "36", "169", "28561"],
    ["2", "8", "3", "10", "4", "32", "5", "54", "171", "3655"],
];

/// The R column: the reference prints either the half-up integer or, for
/// the toy table, the exact decimal — accept a match through both routes.
fn ratio_check(expected: &str, report: &SpectrumReport) -> CellCheck {
    let (computed, matches) = match &report.ratio {
        Some(r) => {
            let exact = exact_decimal(r.num, r.den);
            let display = r.display.to_string();
            let matches = expected == display || exact.as_deref() == Some(expected);
            (exact.unwrap_or(display), matches)
        }
        None => ("-".to_string(), false),
    };
    CellCheck {
        label: "R".to_string(),
        expected: expected.to_string(),
        computed,
        status: if matches { Status::Ok } else { Status::Mismatch },
    }
}

fn landscape_checks(
    cells: &[usize],
    expected: &[&str],
    input: &LandscapeInput,
    degeneracies_noted: bool,
) -> Vec<CellCheck> {
    let computed = landscape_row(input.report);
    let mut out = Vec::new();
    for (&cell, &exp) in cells.iter().zip(expected) {
        if cell == 9 {
            out.push(ratio_check(exp, input.report));
            continue;
        }
        let is_degeneracy = matches!(cell, 1 | 3 | 5 | 7);
        let equal = computed[cell] == exp;
        out.push(CellCheck {
            label: LANDSCAPE_COLUMNS[cell].to_string(),
            expected: exp.to_string(),
            computed: computed[cell].clone(),
            status: match (equal, is_degeneracy && degeneracies_noted) {
                (true, _) => Status::Ok,
                (false, true) => Status::Noted,
                (false, false) => Status::Mismatch,
            },
        });
    }
    if let Some(preserved) = input.preserved {
        out.push(CellCheck {
            label: "preserved".to_string(),
            expected: "true".to_string(),
            computed: preserved.to_string(),
            status: if preserved { Status::Ok } else { Status::Mismatch },
        });
    }
    out
}

fn landscape_table(
    title: String,
    cells: &[usize],
    expected: &[&[&str]],
    inputs: &[LandscapeInput],
    degeneracies_noted: bool,
    notes: Vec<String>,
) -> TableCheck {
    let rows = inputs
        .iter()
        .zip(expected)
        .enumerate()
        .map(|(k, (input, exp))| RowCheck {
            name: format!("H{k}"),
            cells: landscape_checks(cells, exp, input, degeneracies_noted),
        })
        .collect();
    TableCheck { title, rows, notes }
}

fn plan_table(title: String, plan: &WeightScheme) -> TableCheck {
    let rows = plan
        .per_equation
        .iter()
        .zip(&PLAN_551_EXPECTED)
        .enumerate()
        .map(|(k, (w, &(a, b, energy, lambda)))| {
            let energy_cell = |sides: (i64, i64), e: i64| format!("max({},{})^2 = {e}", sides.0, sides.1);
            let expected_energy = energy_cell((a, b), energy);
            let computed_energy = energy_cell(w.sides, w.energy);
            RowCheck {
                name: (k + 1).to_string(),
                cells: vec![
                    CellCheck {
                        label: "max energy".to_string(),
                        computed: computed_energy.clone(),
                        status: if computed_energy == expected_energy {
                            Status::Ok
                        } else {
                            Status::Mismatch
                        },
                        expected: expected_energy,
                    },
                    CellCheck {
                        label: "lambda".to_string(),
                        expected: lambda.to_string(),
                        computed: w.lambda.to_string(),
                        status: if w.lambda == lambda {
                            Status::Ok
                        } else {
                            Status::Mismatch
                        },
                    },
                ],
            }
        })
        .collect();
    TableCheck {
        title,
        rows,
        notes: Vec::new(),
    }
}

pub fn check_tables(inputs: &TableInputs, data_dir: &str) -> Reproduction {
    let tables = vec![
        landscape_table(
            "toy landscape (built-in system)".to_string(),
            &TOY_CELLS,
            &TOY_EXPECTED.each_ref().map(|r| r.as_slice()),
            &inputs.toy,
            false,
            vec!["R shown exactly; the reference prints 6.25 unrounded".to_string()],
        ),
        plan_table(
            format!("per-equation maxima and weights ({data_dir}/551.eqs)"),
            inputs.plan_551,
        ),
        landscape_table(
            format!("landscape 551 = 19 x 29 ({data_dir}/551.eqs)"),
            &ALL_CELLS,
            &SYS_551_EXPECTED.each_ref().map(|r| r.as_slice()),
            &inputs.sys_551,
            false,
            vec!["R shown exactly; the reference rounds half-up (7080.5 -> 7081)".to_string()],
        ),
        landscape_table(
            format!("landscape 841 = 29 x 29 ({data_dir}/841.eqs)"),
            &ALL_CELLS,
            &SYS_841_EXPECTED.each_ref().map(|r| r.as_slice()),
            &inputs.sys_841,
            true,
            vec![
                "the reference calls this a 17-qubit system; the shipped file has 16 variables, \
                 so the degeneracy columns are reported, not asserted"
                    .to_string(),
                "R shown exactly; the reference rounds half-up (3655.125 -> 3655)".to_string(),
            ],
        ),
    ];
    let mut cells_checked = 0;
    let mut mismatches = 0;
    for table in &tables {
        for row in &table.rows {
            for cell in &row.cells {
                match cell.status {
                    Status::Ok => cells_checked += 1,
                    Status::Mismatch => {
                        cells_checked += 1;
                        mismatches += 1;
                    }
                    Status::Noted => {}
                }
            }
        }
    }
    Reproduction {
        tables,
        cells_checked,
        mismatches,
    }
}

pub fn reproduction_text(rep: &Reproduction) -> String {
    let mut out = String::new();
    for table in &rep.tables {
        out.push_str(&format!("== {} ==\n", table.title));
        let mut rows = Vec::new();
        // Rows differ in length: transformed Hamiltonians carry an extra
        // `preserved` cell, so take the header from the widest row.
        let widest = table
            .rows
            .iter()
            .max_by_key(|r| r.cells.len())
            .expect("every table has rows");
        let mut header = vec![String::new()];
        header.extend(widest.cells.iter().map(|c| c.label.clone()));
        rows.push(header);
        for row in &table.rows {
            let mut cells = vec![row.name.clone()];
            cells.extend(row.cells.iter().map(|c| c.computed.clone()));
            rows.push(cells);
        }
        out.push_str(&grid(&rows));
        for row in &table.rows {
            for cell in &row.cells {
                match cell.status {
                    Status::Mismatch => out.push_str(&format!(
                        "MISMATCH {}.{}: expected {}, computed {}\n",
                        row.name, cell.label, cell.expected, cell.computed
                    )),
                    Status::Noted if cell.computed != cell.expected => {
                        out.push_str(&format!(
                            "note {}.{}: reference {}, computed {}\n",
                            row.name, cell.label, cell.expected, cell.computed
                        ))
                    }
                    _ => {}
                }
            }
        }
        for note in &table.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push('\n');
    }
    if rep.mismatches == 0 {
        out.push_str(&format!(
            "{} asserted cells checked, all match\n",
            rep.cells_checked
        ));
    } else {
        out.push_str(&format!(
            "{} asserted cells checked, {} MISMATCHED\n",
            rep.cells_checked, rep.mismatches
        ));
    }
    out
}

pub fn reproduction_csv(rep: &Reproduction) -> String {
    let mut rows = vec![vec![
        "table".to_string(),
        "row".to_string(),
        "cell".to_string(),
        "expected".to_string(),
        "computed".to_string(),
        "status".to_string(),
    ]];
    for table in &rep.tables {
        for row in &table.rows {
            for cell in &row.cells {
                rows.push(vec![
                    table.title.clone(),
                    row.name.clone(),
                    cell.label.clone(),
                    cell.expected.clone(),
                    cell.computed.clone(),
                    match cell.status {
                        Status::Ok => "ok",
                        Status::Mismatch => "mismatch",
                        Status::Noted => "noted",
                    }
                    .to_string(),
                ]);
            }
        }
    }
    crate::output::csv_section(&rows)
}
