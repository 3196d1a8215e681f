//! Report rendering for the three output formats.
//!
//! Every run prints its resolved configuration first so an output file is
//! self-describing: as a `# key = value` header in `text` and `csv` modes,
//! and as a `config` object wrapped around the report in `json` mode. With
//! identical configuration and inputs the bytes are identical run to run.

use clap::ValueEnum;
use elmkit_api::{BoundReport, CompareResponse, ElmResponse, GenerateResponse, SpectrumReport};
use elmkit_core::{Fraction, Ratio, WeightScheme};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable tables, columns in the reference order.
    #[value(alias = "text-table")]
    Text,
    Csv,
    Json,
}

impl Format {
    pub fn label(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// The fully resolved configuration of one run, in presentation order.
pub struct RunConfig {
    pairs: Vec<(&'static str, Value)>,
}

impl RunConfig {
    pub fn new(subcommand: &'static str) -> Self {
        RunConfig {
            pairs: vec![("subcommand", Value::from(subcommand))],
        }
    }

    pub fn push(&mut self, key: &'static str, value: impl Into<Value>) {
        self.pairs.push((key, value.into()));
    }

    fn header(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.pairs {
            let plain = match value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("# {key} = {plain}\n"));
        }
        out
    }

    fn to_value(&self) -> Value {
        let mut map = serde_json::Map::new();
        for (key, value) in &self.pairs {
            map.insert((*key).to_string(), value.clone());
        }
        Value::Object(map)
    }
}

/// One report rendered for all formats; `emit` picks the requested one.
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub csv: String,
}

/// Write to stdout, treating a closed pipe (`elmkit ... | head`) as a
/// normal early exit rather than a panic.
pub fn print_out(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout();
    if stdout.write_all(text.as_bytes()).is_err() || stdout.flush().is_err() {
        std::process::exit(0);
    }
}

pub fn emit(format: Format, config: &RunConfig, rendered: &Rendered) {
    match format {
        Format::Json => {
            let doc = json!({ "config": config.to_value(), "report": rendered.json });
            let body = serde_json::to_string_pretty(&doc).expect("report serializes");
            print_out(&format!("{body}\n"));
        }
        Format::Text => {
            print_out(&format!("{}\n{}", config.header(), rendered.text));
        }
        Format::Csv => {
            print_out(&format!("{}\n{}", config.header(), rendered.csv));
        }
    }
}

/// Left-aligned column layout with two-space gutters.
pub fn grid(rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = Vec::new();
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            if k >= widths.len() {
                widths.push(0);
            }
            widths[k] = widths[k].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (k, cell) in row.iter().enumerate() {
            if k + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<width$}  ", width = widths[k]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Write one CSV section; sections in a report are separated by blank lines.
pub fn csv_section(rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(row).expect("write to Vec cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("flush to Vec cannot fail"))
        .expect("csv output is UTF-8")
}

pub fn fraction_string(f: &Fraction) -> String {
    if f.den == 1 {
        f.num.to_string()
    } else {
        format!("{}/{}", f.num, f.den)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// `num/den` as an exact decimal when it terminates within six digits.
pub fn exact_decimal(num: i64, den: i64) -> Option<String> {
    let g = gcd(num, den);
    let (n, d) = (num / g, den / g);
    if d == 1 {
        return Some(n.to_string());
    }
    let mut rest = d;
    let mut twos = 0u32;
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    let mut fives = 0u32;
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    let digits = twos.max(fives);
    if rest != 1 || digits > 6 {
        return None;
    }
    let scaled = (n as i128 * 10i128.pow(digits) / d as i128).to_string();
    let (whole, frac) = scaled.split_at(scaled.len() - digits as usize);
    let whole = if whole.is_empty() { "0" } else { whole };
    Some(format!("{whole}.{frac}"))
}

/// The half-up integer shown in the R column, with the exact value kept on
/// a separate line by the text renderers when rounding lost something.
pub fn ratio_cell(ratio: Option<&Ratio>) -> String {
    match ratio {
        Some(r) => r.display.to_string(),
        None => "-".to_string(),
    }
}

pub const LANDSCAPE_COLUMNS: [&str; 10] = [
    "E_gap", "n1", "E|2>", "n2", "E|3>", "n3", "E|4>", "n4", "E_max", "R",
];

/// One landscape as a row in the reference column order: the gap, the first
/// four excited levels with their degeneracies, the top of the spectrum,
/// and the width²/gap³ ratio.
pub fn landscape_row(report: &SpectrumReport) -> Vec<String> {
    let mut cells = Vec::with_capacity(10);
    cells.push(match report.e_gap {
        Some(gap) => gap.to_string(),
        None => "-".to_string(),
    });
    for k in 1..=4 {
        match report.levels.get(k) {
            Some(level) if k == 1 => cells.push(level.count.to_string()),
            Some(level) => {
                cells.push(level.energy.to_string());
                cells.push(level.count.to_string());
            }
            None if k == 1 => cells.push("-".to_string()),
            None => {
                cells.push("-".to_string());
                cells.push("-".to_string());
            }
        }
    }
    cells.push(report.max_energy().to_string());
    cells.push(ratio_cell(report.ratio.as_ref()));
    cells
}

fn header_row() -> Vec<String> {
    LANDSCAPE_COLUMNS.iter().map(|c| c.to_string()).collect()
}

fn spectrum_summary_lines(report: &SpectrumReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "states: 2^{} = {}, {} distinct levels, ground energy {}\n",
        report.n,
        1u128 << report.n,
        report.levels.len(),
        report.ground_energy()
    ));
    let shown = report.ground_states.len() as u64;
    out.push_str(&format!(
        "ground states ({} of {}):",
        shown, report.total_ground_states
    ));
    for gs in &report.ground_states {
        out.push_str(&format!(" {gs}"));
    }
    out.push('\n');
    if report.e_gap.is_none() {
        out.push_str("E_gap: undefined (single-level landscape)\n");
    }
    if let Some(r) = &report.ratio {
        if r.den != 1 {
            out.push_str(&format!("R exact: {}/{}", r.num, r.den));
            if let Some(d) = exact_decimal(r.num, r.den) {
                out.push_str(&format!(" = {d}"));
            }
            out.push('\n');
        }
    }
    for note in &report.mode_notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

pub fn spectrum_text(report: &SpectrumReport) -> String {
    let rows = vec![header_row(), landscape_row(report)];
    format!("{}{}", grid(&rows), spectrum_summary_lines(report))
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut summary = vec![vec!["key".to_string(), "value".to_string()]];
    let mut push = |key: &str, value: String| {
        summary.push(vec![key.to_string(), value]);
    };
    push("variables", report.n.to_string());
    push("ground_energy", report.ground_energy().to_string());
    push(
        "e_gap",
        report
            .e_gap
            .map(|g| g.to_string())
            .unwrap_or_else(|| "undefined".into()),
    );
    push("e_width", report.e_width.to_string());
    if let Some(r) = &report.ratio {
        push("ratio_exact", format!("{}/{}", r.num, r.den));
        push("ratio_display", r.display.to_string());
    }
    push("total_ground_states", report.total_ground_states.to_string());

    let mut levels = vec![vec!["energy".to_string(), "count".to_string()]];
    for level in &report.levels {
        levels.push(vec![level.energy.to_string(), level.count.to_string()]);
    }
    format!("{}\n{}", csv_section(&summary), csv_section(&levels))
}

pub fn generate_text(resp: &GenerateResponse, written_to: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "variables ({}): {}\n",
        resp.variables.len(),
        resp.variables.join(" ")
    ));
    out.push_str(&format!("equations: {}\n", resp.equations));
    if resp.deductions.is_empty() {
        out.push_str("deductions applied: none\n");
    } else {
        out.push_str(&format!("deductions applied ({}):\n", resp.deductions.len()));
        for d in &resp.deductions {
            out.push_str(&format!("  {d}\n"));
        }
    }
    match written_to {
        Some(path) => out.push_str(&format!("system written to {path}\n")),
        None => out.push_str(&format!("system:\n{}", resp.system)),
    }
    out
}

pub fn generate_csv(resp: &GenerateResponse) -> String {
    let mut summary = vec![
        vec!["key".to_string(), "value".to_string()],
        vec!["variables".to_string(), resp.variables.len().to_string()],
        vec!["equations".to_string(), resp.equations.to_string()],
    ];
    summary.push(vec![
        "variable_names".to_string(),
        resp.variables.join(" "),
    ]);
    let mut deductions = vec![vec!["deduction".to_string()]];
    for d in &resp.deductions {
        deductions.push(vec![d.clone()]);
    }
    format!("{}\n{}", csv_section(&summary), csv_section(&deductions))
}

/// The per-equation weight table in the reference layout:
/// `max(a, b)² = E` next to the chosen λ.
pub fn scheme_rows(scheme: &WeightScheme) -> Vec<Vec<String>> {
    let mut rows = vec![vec![
        "equation".to_string(),
        "max energy".to_string(),
        "lambda".to_string(),
    ]];
    for (k, w) in scheme.per_equation.iter().enumerate() {
        rows.push(vec![
            (k + 1).to_string(),
            format!("max({},{})^2 = {}", w.sides.0, w.sides.1, w.energy),
            w.lambda.to_string(),
        ]);
    }
    rows
}

fn preservation_lines(resp: &ElmResponse) -> String {
    if !resp.preservation.checked {
        return "preservation: not checked (system above the exhaustive cap)\n".to_string();
    }
    if resp.preservation.preserved {
        "preservation: verified, ground-state set unchanged\n".to_string()
    } else {
        format!(
            "preservation: FAILED, witness {}\n",
            resp.preservation.witness.as_deref().unwrap_or("?")
        )
    }
}

pub fn elm_text(resp: &ElmResponse, written_to: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(scheme) = &resp.scheme {
        out.push_str(&format!(
            "scheme: {} over {} energies, E_max = {}\n",
            scheme.kind.label(),
            scheme.mode.label(),
            scheme.e_max
        ));
        out.push_str(&grid(&scheme_rows(scheme)));
    }
    if let Some(deductions) = &resp.deductions {
        out.push_str(&format!("penalties added ({}):\n", deductions.len()));
        for d in deductions {
            out.push_str(&format!("  + {d}\n"));
        }
    }
    out.push_str(&preservation_lines(resp));
    match written_to {
        Some(path) => out.push_str(&format!("artifact written to {path}\n")),
        None => {
            out.push_str("artifact:\n");
            out.push_str(&resp.artifact.to_json());
            out.push('\n');
        }
    }
    out
}

pub fn elm_csv(resp: &ElmResponse) -> String {
    let mut out = String::new();
    if let Some(scheme) = &resp.scheme {
        let mut rows = vec![vec![
            "equation".to_string(),
            "side_a".to_string(),
            "side_b".to_string(),
            "max_energy".to_string(),
            "lambda".to_string(),
        ]];
        for (k, w) in scheme.per_equation.iter().enumerate() {
            rows.push(vec![
                (k + 1).to_string(),
                w.sides.0.to_string(),
                w.sides.1.to_string(),
                w.energy.to_string(),
                w.lambda.to_string(),
            ]);
        }
        out.push_str(&csv_section(&rows));
        out.push('\n');
    }
    if let Some(deductions) = &resp.deductions {
        let mut rows = vec![vec!["penalty".to_string()]];
        for d in deductions {
            rows.push(vec![d.clone()]);
        }
        out.push_str(&csv_section(&rows));
        out.push('\n');
    }
    let verdict = vec![
        vec!["key".to_string(), "value".to_string()],
        vec![
            "preservation_checked".to_string(),
            resp.preservation.checked.to_string(),
        ],
        vec![
            "preserved".to_string(),
            resp.preservation.preserved.to_string(),
        ],
        vec![
            "witness".to_string(),
            resp.preservation.witness.clone().unwrap_or_default(),
        ],
    ];
    out.push_str(&csv_section(&verdict));
    out
}

pub fn compare_text(resp: &CompareResponse) -> String {
    let mut header = vec!["H".to_string()];
    header.extend(header_row());
    let mut row_a = vec!["a".to_string()];
    row_a.extend(landscape_row(&resp.a));
    let mut row_b = vec!["b".to_string()];
    row_b.extend(landscape_row(&resp.b));
    let mut out = grid(&[header, row_a, row_b]);

    match &resp.comparison.factor {
        Some(f) => {
            out.push_str(&format!(
                "ratio factor R_a/R_b: {} = {:.4}\n",
                fraction_string(f),
                f.to_f64()
            ));
        }
        None => out.push_str("ratio factor R_a/R_b: undefined (a landscape is flat)\n"),
    }
    out.push_str(&format!(
        "ground-state sets: {}\n",
        if resp.comparison.ground_states_equal {
            "identical"
        } else {
            "DIFFERENT"
        }
    ));
    if !resp.comparison.first_levels.is_empty() {
        let mut rows = vec![vec![
            "level".to_string(),
            "E_a".to_string(),
            "n_a".to_string(),
            "E_b".to_string(),
            "n_b".to_string(),
            "shift".to_string(),
        ]];
        for (k, pair) in resp.comparison.first_levels.iter().enumerate() {
            rows.push(vec![
                k.to_string(),
                pair.energy_a.to_string(),
                pair.count_a.to_string(),
                pair.energy_b.to_string(),
                pair.count_b.to_string(),
                format!("{:+}", pair.shift),
            ]);
        }
        out.push_str(&grid(&rows));
    }
    out
}

pub fn compare_csv(resp: &CompareResponse) -> String {
    let mut summary = vec![vec!["key".to_string(), "value".to_string()]];
    if let Some(f) = &resp.comparison.factor {
        summary.push(vec!["factor_exact".to_string(), fraction_string(f)]);
        summary.push(vec!["factor".to_string(), format!("{}", f.to_f64())]);
    }
    summary.push(vec![
        "ground_states_equal".to_string(),
        resp.comparison.ground_states_equal.to_string(),
    ]);
    let mut levels = vec![vec![
        "level".to_string(),
        "energy_a".to_string(),
        "count_a".to_string(),
        "energy_b".to_string(),
        "count_b".to_string(),
        "shift".to_string(),
    ]];
    for (k, pair) in resp.comparison.first_levels.iter().enumerate() {
        levels.push(vec![
            k.to_string(),
            pair.energy_a.to_string(),
            pair.count_a.to_string(),
            pair.energy_b.to_string(),
            pair.count_b.to_string(),
            pair.shift.to_string(),
        ]);
    }
    format!("{}\n{}", csv_section(&summary), csv_section(&levels))
}

fn bound_pairs(report: &BoundReport) -> Vec<(&'static str, String)> {
    let mut rows = vec![
        ("qubits", report.qubits.to_string()),
        ("epsilon", fraction_string(&report.epsilon)),
        ("spectral_norm_diff", format!("{:.6}", report.spectral_norm_diff)),
        ("min_gap", format!("{:.6}", report.min_gap)),
        ("min_gap_at_s", format!("{:.6}", report.min_gap_argmin)),
        ("final_gap", report.final_gap.to_string()),
        ("ground_multiplicity", report.ground_multiplicity.to_string()),
    ];
    rows.push((
        "tight_bound",
        match report.tight_bound {
            Some(b) => format!("{b:.3}"),
            None => "undefined (interpolation gap closes)".to_string(),
        },
    ));
    rows.push(("final_time_term", format!("{:.3}", report.final_time_term)));
    rows.push((
        "loose_bound",
        format!(
            "{} (exact {})",
            report.loose_bound,
            fraction_string(&report.loose_bound_exact)
        ),
    ));
    rows.push((
        "weyl_triangle_check",
        if report.weyl_check.triangle_holds {
            "holds".to_string()
        } else {
            "VIOLATED".to_string()
        },
    ));
    rows
}

pub fn bound_text(report: &BoundReport) -> String {
    let mut out = String::new();
    for (key, value) in bound_pairs(report) {
        out.push_str(&format!("{key}: {value}\n"));
    }
    if report.degenerate_ground {
        out.push_str("note: the final ground level is degenerate; the gap is measured to the first level above it\n");
    }
    out
}

pub fn bound_csv(report: &BoundReport) -> String {
    let mut rows = vec![vec!["key".to_string(), "value".to_string()]];
    for (key, value) in bound_pairs(report) {
        rows.push(vec![key.to_string(), value]);
    }
    csv_section(&rows)
}
