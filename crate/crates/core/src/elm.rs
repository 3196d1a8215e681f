//! The two energy-landscape manipulations.
//!
//! Both start from a Hamiltonian whose ground states are the solutions of
//! an equation system, and reshape the rest of the landscape while leaving
//! that ground-state set alone:
//!
//! * **Deduction penalties** ([`deduc_elm`]): facts known to hold at every
//!   solution — a relation `f = g`, or an implication "v = 1 forces these
//!   bits" — become non-negative penalty terms that vanish wherever the
//!   fact holds. Adding them raises only non-solutions.
//! * **Reweighting** ([`multiplicity_elm`]): each squared residual is
//!   scaled by a positive integer λ_i chosen from its maximum possible
//!   energy ([`plan_weights`]), evening out how much each equation can
//!   contribute. Positive weights never move the zero set.
//!
//! Neither transform proves the facts it is handed;
//! [`verify_ground_state_preserved`] checks the outcome exhaustively.
//!
//! Deduction file format, one per line (`#` comments):
//!
//! ```text
//! relation: <poly> == <poly> lambda=<int>
//! imply: <var> -> <var>=<0|1>, <var>=<0|1>, ... lambda=<int>
//! ```
//!
//! The `lambda=` tail is optional and defaults to 1.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::parse::{format_polynomial, parse_polynomial};
use crate::poly::BinaryPolynomial;
use crate::system::{Equation, EquationSystem, Hamiltonian};
use crate::vars::VarTable;

/// How the per-equation maximum energy is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMode {
    /// `max(S_L, S_R)^2` over the coefficient sums of the normalized sides.
    /// Total: works for any equation.
    #[default]
    SideMax,
    /// `max(S_L - c_R, S_R - c_L)^2`, maximizing one side while the other
    /// sits at its constant. Requires the sides to share no variable.
    DiffMax,
}

impl EnergyMode {
    pub fn label(self) -> &'static str {
        match self {
            EnergyMode::SideMax => "side_max",
            EnergyMode::DiffMax => "diff_max",
        }
    }
}

/// How weights are derived from the per-equation maximum energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// λ_i = ⌈E_max / E_i⌉.
    #[default]
    CeilRatio,
    /// λ_i = 1 for the equations already at E_max, 2 for the rest.
    Indicator,
    /// λ_i = 1.
    Uniform,
}

impl SchemeKind {
    pub fn label(self) -> &'static str {
        match self {
            SchemeKind::CeilRatio => "ceil_ratio",
            SchemeKind::Indicator => "indicator",
            SchemeKind::Uniform => "uniform",
        }
    }
}

/// Maximum energy and chosen weight for one equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationWeight {
    /// The two values whose larger square is `energy` — the per-side
    /// maxima, so reports can show `max(a, b)² = E`.
    pub sides: (i64, i64),
    pub energy: i64,
    pub lambda: i64,
}

/// A complete weighting plan for a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightScheme {
    pub kind: SchemeKind,
    pub mode: EnergyMode,
    pub per_equation: Vec<EquationWeight>,
    pub e_max: i64,
}

impl WeightScheme {
    pub fn lambdas(&self) -> Vec<i64> {
        self.per_equation.iter().map(|w| w.lambda).collect()
    }

    pub fn energies(&self) -> Vec<i64> {
        self.per_equation.iter().map(|w| w.energy).collect()
    }
}

/// A fact claimed to hold at every ground state, with the weight its
/// penalty carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Deduction {
    /// `f = g` at every ground state; penalty λ·(f−g)².
    Relation {
        f: BinaryPolynomial,
        g: BinaryPolynomial,
        lambda: i64,
    },
    /// `trigger = 1` forces each listed variable to the paired constant;
    /// penalty λ·v·Σ (1−w) or w per consequence.
    Implication {
        trigger: u32,
        consequences: Vec<(u32, bool)>,
        lambda: i64,
    },
}

impl Deduction {
    pub fn relation(
        f: BinaryPolynomial,
        g: BinaryPolynomial,
        lambda: i64,
    ) -> Result<Self, CoreError> {
        if lambda <= 0 {
            return Err(CoreError::NonPositiveLambda { value: lambda });
        }
        let d = Deduction::Relation { f, g, lambda };
        d.penalty()?; // surface overflow now rather than at use
        Ok(d)
    }

    pub fn implication(
        trigger: u32,
        consequences: Vec<(u32, bool)>,
        lambda: i64,
    ) -> Result<Self, CoreError> {
        if lambda <= 0 {
            return Err(CoreError::NonPositiveLambda { value: lambda });
        }
        let d = Deduction::Implication {
            trigger,
            consequences,
            lambda,
        };
        d.penalty()?;
        Ok(d)
    }

    pub fn lambda(&self) -> i64 {
        match self {
            Deduction::Relation { lambda, .. } | Deduction::Implication { lambda, .. } => *lambda,
        }
    }

    /// The weighted penalty polynomial: ≥ 0 everywhere, = 0 exactly where
    /// the deduced fact holds.
    pub fn penalty(&self) -> Result<BinaryPolynomial, CoreError> {
        match self {
            Deduction::Relation { f, g, lambda } => {
                if *lambda <= 0 {
                    return Err(CoreError::NonPositiveLambda { value: *lambda });
                }
                f.sub(g)?.square()?.scale(*lambda)
            }
            Deduction::Implication {
                trigger,
                consequences,
                lambda,
            } => {
                if *lambda <= 0 {
                    return Err(CoreError::NonPositiveLambda { value: *lambda });
                }
                let mut miss_count = BinaryPolynomial::zero();
                for &(w, forced_to) in consequences {
                    let wv = BinaryPolynomial::variable(w)?;
                    let miss = if forced_to {
                        BinaryPolynomial::constant(1).sub(&wv)?
                    } else {
                        wv
                    };
                    miss_count = miss_count.add(&miss)?;
                }
                BinaryPolynomial::variable(*trigger)?
                    .mul(&miss_count)?
                    .scale(*lambda)
            }
        }
    }

    /// Human-readable form; implications render as `v*(k - ...)` with one
    /// unit of `k` per bit forced to 1.
    pub fn describe(&self, table: &VarTable) -> String {
        let prefix = |lambda: i64| {
            if lambda == 1 {
                String::new()
            } else {
                format!("{lambda}*")
            }
        };
        match self {
            Deduction::Relation { f, g, lambda } => match f.sub(g) {
                Ok(diff) => format!("{}({})^2", prefix(*lambda), format_polynomial(&diff, table)),
                Err(_) => format!(
                    "{}(({}) - ({}))^2",
                    prefix(*lambda),
                    format_polynomial(f, table),
                    format_polynomial(g, table)
                ),
            },
            Deduction::Implication {
                trigger,
                consequences,
                lambda,
            } => {
                let ones = consequences.iter().filter(|&&(_, to)| to).count();
                let mut inner = if ones > 0 {
                    ones.to_string()
                } else {
                    String::new()
                };
                for (w, forced_to) in consequences {
                    let name = table.name(*w);
                    if *forced_to {
                        inner.push_str(&format!(" - {name}"));
                    } else if inner.is_empty() {
                        inner.push_str(name);
                    } else {
                        inner.push_str(&format!(" + {name}"));
                    }
                }
                format!("{}{}*({})", prefix(*lambda), table.name(*trigger), inner)
            }
        }
    }
}

/// Strip `# ...` and whitespace.
fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => line[..k].trim(),
        None => line.trim(),
    }
}

/// Byte offset of `slice` within `whole` (both from the same string).
fn offset_in(whole: &str, slice: &str) -> usize {
    slice.as_ptr() as usize - whole.as_ptr() as usize
}

/// Shift a parse error's position by the offset of the slice it came from.
fn reposition(err: CoreError, offset: usize) -> CoreError {
    match err {
        CoreError::Parse { pos, msg } => CoreError::Parse {
            pos: pos + offset,
            msg,
        },
        other => other,
    }
}

/// Split an optional trailing `lambda=<int>` off a deduction body.
fn split_lambda(line: &str, body: &str) -> Result<(String, i64), CoreError> {
    let trimmed = body.trim();
    if let Some(k) = trimmed.rfind("lambda=") {
        let preceded_ok = k == 0 || trimmed[..k].ends_with(char::is_whitespace);
        let digits = &trimmed[k + "lambda=".len()..];
        if preceded_ok && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let value: i64 = digits.parse().map_err(|_| CoreError::Parse {
                pos: offset_in(line, digits),
                msg: format!("weight `{digits}` is out of range"),
            })?;
            if value <= 0 {
                return Err(CoreError::NonPositiveLambda { value });
            }
            return Ok((trimmed[..k].trim().to_string(), value));
        }
    }
    Ok((trimmed.to_string(), 1))
}

/// Parse one deduction line (without comment handling).
fn parse_deduction_line(line: &str, table: &VarTable) -> Result<Deduction, CoreError> {
    let colon = line.find(':').ok_or_else(|| CoreError::Parse {
        pos: line.len(),
        msg: "expected `relation:` or `imply:`".into(),
    })?;
    let head = line[..colon].trim();
    let body = &line[colon + 1..];
    let (body, lambda) = split_lambda(line, body)?;
    match head {
        "relation" => {
            let mut parts = body.splitn(2, "==");
            let f_text = parts.next().unwrap();
            let g_text = parts.next().ok_or_else(|| CoreError::Parse {
                pos: line.len(),
                msg: "expected `==` between the two sides of a relation".into(),
            })?;
            let f = parse_polynomial(f_text, table)?;
            let g = parse_polynomial(g_text, table)?;
            Deduction::relation(f, g, lambda)
        }
        "imply" => {
            let mut parts = body.splitn(2, "->");
            let trigger_text = parts.next().unwrap().trim();
            let rest = parts
                .next()
                .ok_or_else(|| CoreError::Parse {
                    pos: line.len(),
                    msg: "expected `->` after the triggering variable".into(),
                })?
                .trim();
            let trigger = table
                .index_of(trigger_text)
                .ok_or_else(|| CoreError::UnknownVariable {
                    name: trigger_text.to_string(),
                })?;
            if rest.is_empty() {
                return Err(CoreError::Parse {
                    pos: line.len(),
                    msg: "an implication needs at least one `var=0` or `var=1`".into(),
                });
            }
            let mut consequences = Vec::new();
            for piece in rest.split(',') {
                let piece = piece.trim();
                let (name, bit) = piece.split_once('=').ok_or_else(|| CoreError::Parse {
                    pos: 0,
                    msg: format!("expected `var=0` or `var=1`, found `{piece}`"),
                })?;
                let name = name.trim();
                let var = table
                    .index_of(name)
                    .ok_or_else(|| CoreError::UnknownVariable { name: name.into() })?;
                let forced_to = match bit.trim() {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(CoreError::Parse {
                            pos: 0,
                            msg: format!("a variable can only be forced to 0 or 1, found `{other}`"),
                        });
                    }
                };
                consequences.push((var, forced_to));
            }
            Deduction::implication(trigger, consequences, lambda)
        }
        other => Err(CoreError::Parse {
            pos: offset_in(line, head),
            msg: format!("unknown deduction kind `{other}`; expected `relation` or `imply`"),
        }),
    }
}

/// Parse a deduction file against the variable table of the system the
/// deductions talk about.
pub fn parse_deductions(text: &str, table: &VarTable) -> Result<Vec<Deduction>, CoreError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        out.push(parse_deduction_line(line, table).map_err(|e| {
            reposition(e, offset_in(raw, line)).at_line(k + 1)
        })?);
    }
    Ok(out)
}

/// Render deductions in the file format [`parse_deductions`] accepts.
pub fn format_deductions(deductions: &[Deduction], table: &VarTable) -> String {
    let mut out = String::new();
    for d in deductions {
        match d {
            Deduction::Relation { f, g, lambda } => {
                out.push_str(&format!(
                    "relation: {} == {} lambda={lambda}\n",
                    format_polynomial(f, table),
                    format_polynomial(g, table)
                ));
            }
            Deduction::Implication {
                trigger,
                consequences,
                lambda,
            } => {
                let list = consequences
                    .iter()
                    .map(|(w, to)| format!("{}={}", table.name(*w), *to as u8))
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push_str(&format!(
                    "imply: {} -> {list} lambda={lambda}\n",
                    table.name(*trigger)
                ));
            }
        }
    }
    out
}

/// Add every deduction's penalty to the Hamiltonian. The result dominates
/// the input pointwise and agrees with it exactly where all deductions
/// hold — in particular on every ground state, if the deductions are true
/// there.
pub fn deduc_elm(h: &Hamiltonian, deductions: &[Deduction]) -> Result<Hamiltonian, CoreError> {
    let mut out = h.clone();
    for d in deductions {
        out = out.add_term(&d.penalty()?)?;
    }
    Ok(out)
}

/// Coefficient sum (the side's maximum value) and constant term (its
/// minimum) of a normalized side.
fn side_stats(p: &BinaryPolynomial) -> (i128, i128) {
    let mut sum = 0i128;
    for (_, c) in p.terms() {
        sum += c as i128;
    }
    (sum, p.constant_term() as i128)
}

fn to_energy(value: i128) -> Result<i64, CoreError> {
    let sq = value * value;
    i64::try_from(sq).map_err(|_| CoreError::Overflow)
}

/// The two per-side values whose larger square bounds the equation's
/// energy under `mode` (what a weight table's `max(a, b)²` column shows).
pub fn equation_energy_sides(
    eq: &Equation,
    mode: EnergyMode,
    table: &VarTable,
) -> Result<(i64, i64), CoreError> {
    let norm = eq.normalize()?;
    let (s_l, c_l) = side_stats(&norm.lhs);
    let (s_r, c_r) = side_stats(&norm.rhs);
    let pair = match mode {
        EnergyMode::SideMax => (s_l, s_r),
        EnergyMode::DiffMax => {
            let shared = norm.lhs.support_mask() & norm.rhs.support_mask();
            if shared != 0 {
                let index = shared.trailing_zeros();
                return Err(CoreError::SharedVariable {
                    name: table.name(index).to_string(),
                });
            }
            (s_l - c_r, s_r - c_l)
        }
    };
    let narrow = |v: i128| i64::try_from(v).map_err(|_| CoreError::Overflow);
    Ok((narrow(pair.0)?, narrow(pair.1)?))
}

/// Largest energy `(lhs − rhs)²` the equation can contribute, bounded per
/// `mode`. The equation is normalized internally, so any orientation is
/// accepted.
pub fn max_equation_energy(
    eq: &Equation,
    mode: EnergyMode,
    table: &VarTable,
) -> Result<i64, CoreError> {
    let (a, b) = equation_energy_sides(eq, mode, table)?;
    to_energy(a.max(b) as i128)
}

/// Exact maximum of `(lhs − rhs)²` by brute force over the equation's own
/// variables. The fallback when [`EnergyMode::DiffMax`] refuses an
/// equation whose sides share a variable.
pub fn exact_max_energy(eq: &Equation, max_vars: u32) -> Result<i64, CoreError> {
    let residual = eq.residual()?;
    let support = residual.support();
    let s = support.len() as u32;
    if s > max_vars {
        return Err(CoreError::CapExceeded { n: s, cap: max_vars });
    }
    let mut best = 0i64;
    for pattern in 0..(1u64 << s) {
        let mut assignment = 0u64;
        for (k, &v) in support.iter().enumerate() {
            assignment |= (pattern >> k & 1) << v;
        }
        let r = residual.evaluate(assignment, 64)?;
        let e = r.checked_mul(r).ok_or(CoreError::Overflow)?;
        best = best.max(e);
    }
    Ok(best)
}

/// Choose weights for every equation from its maximum energy.
pub fn plan_weights(
    sys: &EquationSystem,
    kind: SchemeKind,
    mode: EnergyMode,
) -> Result<WeightScheme, CoreError> {
    if sys.is_empty() {
        return Err(CoreError::EmptySystem);
    }
    let sides: Vec<(i64, i64)> = sys
        .equations()
        .iter()
        .map(|eq| equation_energy_sides(eq, mode, sys.table()))
        .collect::<Result<_, _>>()?;
    let energies: Vec<i64> = sides
        .iter()
        .map(|&(a, b)| to_energy(a.max(b) as i128))
        .collect::<Result<_, _>>()?;
    let e_max = *energies.iter().max().expect("system is non-empty");
    let per_equation = energies
        .iter()
        .zip(&sides)
        .enumerate()
        .map(|(k, (&e, &sides))| {
            let lambda = match kind {
                SchemeKind::CeilRatio => {
                    if e == 0 {
                        return Err(CoreError::ZeroMaxEnergy { equation: k + 1 });
                    }
                    // ⌈E_max / E_i⌉ without floats.
                    (e_max + e - 1) / e
                }
                SchemeKind::Indicator => {
                    if e == e_max {
                        1
                    } else {
                        2
                    }
                }
                SchemeKind::Uniform => 1,
            };
            Ok(EquationWeight { sides, energy: e, lambda })
        })
        .collect::<Result<Vec<_>, CoreError>>()?;
    Ok(WeightScheme {
        kind,
        mode,
        per_equation,
        e_max,
    })
}

/// Build the reweighted Hamiltonian `Σ λ_i·(lhs_i − rhs_i)²`.
pub fn multiplicity_elm(
    sys: &EquationSystem,
    scheme: &WeightScheme,
) -> Result<Hamiltonian, CoreError> {
    sys.to_hamiltonian(Some(&scheme.lambdas()))
}

/// Outcome of comparing two Hamiltonians' ground-state sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundStateCheck {
    pub preserved: bool,
    /// An assignment that is a ground state of exactly one of the two,
    /// present when `preserved` is false.
    pub witness: Option<u64>,
}

/// Exhaustively decide whether two Hamiltonians over the same variables
/// have identical ground-state (argmin) sets.
pub fn verify_ground_state_preserved(
    before: &Hamiltonian,
    after: &Hamiltonian,
) -> Result<GroundStateCheck, CoreError> {
    const CAP: u32 = 24;
    if before.table() != after.table() {
        return Err(CoreError::UniverseMismatch);
    }
    let n = before.n_vars();
    if n > CAP {
        return Err(CoreError::CapExceeded { n, cap: CAP });
    }
    let total = 1u64 << n;
    let mut min_before = i64::MAX;
    let mut min_after = i64::MAX;
    for a in 0..total {
        min_before = min_before.min(before.evaluate(a)?);
        min_after = min_after.min(after.evaluate(a)?);
    }
    for a in 0..total {
        let in_before = before.evaluate(a)? == min_before;
        let in_after = after.evaluate(a)? == min_after;
        if in_before != in_after {
            return Ok(GroundStateCheck {
                preserved: false,
                witness: Some(a),
            });
        }
    }
    Ok(GroundStateCheck {
        preserved: true,
        witness: None,
    })
}
