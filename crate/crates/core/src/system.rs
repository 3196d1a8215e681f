//! Equation systems over binary variables and their Hamiltonians.
//!
//! A system is a list of equations `lhs = rhs` between polynomials, sharing
//! one variable table. Its Hamiltonian is the weighted sum of squared
//! residuals
//!
//! ```text
//! H = sum_i  w_i * (lhs_i - rhs_i)^2
//! ```
//!
//! which is non-negative everywhere and zero exactly on the solutions of the
//! system, so the ground states of `H` are the solutions regardless of the
//! (positive) weights.
//!
//! The text format is one equation per line, `#` starts a comment:
//!
//! ```text
//! # example
//! p1 + q1 = 1 + 2*z12
//! ```

use crate::error::CoreError;
use crate::parse::{format_polynomial, parse_polynomial, scan_identifiers};
use crate::poly::BinaryPolynomial;
use crate::vars::VarTable;

/// One equation `lhs = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: BinaryPolynomial,
    pub rhs: BinaryPolynomial,
}

impl Equation {
    /// `lhs - rhs`; the equation holds exactly where this vanishes.
    pub fn residual(&self) -> Result<BinaryPolynomial, CoreError> {
        self.lhs.sub(&self.rhs)
    }

    /// `(lhs - rhs)^2`: non-negative, zero exactly on the equation's
    /// solutions.
    pub fn penalty(&self) -> Result<BinaryPolynomial, CoreError> {
        self.residual()?.square()
    }

    /// Rewrite so both sides carry only non-negative coefficients, moving
    /// offending terms across the equals sign. The residual — and with it
    /// the penalty — is unchanged.
    pub fn normalize(&self) -> Result<Equation, CoreError> {
        let residual = self.residual()?;
        let mut lhs = BinaryPolynomial::zero();
        let mut rhs = BinaryPolynomial::zero();
        for (m, c) in residual.terms() {
            if c > 0 {
                lhs.add_term(m, c)?;
            } else {
                rhs.add_term(m, c.checked_neg().ok_or(CoreError::Overflow)?)?;
            }
        }
        Ok(Equation { lhs, rhs })
    }
}

/// Strip a trailing `#` comment and surrounding whitespace.
fn strip_comment(line: &str) -> &str {
    let body = match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    };
    body.trim()
}

/// A system of equations over one variable table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationSystem {
    table: VarTable,
    equations: Vec<Equation>,
}

impl EquationSystem {
    /// Parse the line-based text format. The variable table covers every
    /// identifier in the file, in canonical order.
    pub fn parse(text: &str) -> Result<Self, CoreError> {
        // First pass: collect names across all lines, so every polynomial is
        // parsed against the same table.
        let mut names = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            for side in line.split('=') {
                names.extend(scan_identifiers(side).map_err(|e| e.at_line(k + 1))?);
            }
        }
        let table = VarTable::from_names(names)?;

        let mut equations = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let equation = Self::parse_equation(line, &table).map_err(|e| e.at_line(k + 1))?;
            equations.push(equation);
        }
        Ok(EquationSystem { table, equations })
    }

    fn parse_equation(line: &str, table: &VarTable) -> Result<Equation, CoreError> {
        let mut sides = line.splitn(2, '=');
        let lhs_text = sides.next().unwrap();
        let rhs_text = sides.next().ok_or_else(|| CoreError::Parse {
            pos: line.len(),
            msg: "expected `=` between two polynomials".into(),
        })?;
        if rhs_text.contains('=') {
            return Err(CoreError::Parse {
                pos: line.find('=').unwrap() + 1 + rhs_text.find('=').unwrap(),
                msg: "expected exactly one `=` per equation".into(),
            });
        }
        Ok(Equation {
            lhs: parse_polynomial(lhs_text, table)?,
            rhs: parse_polynomial(rhs_text, table)?,
        })
    }

    /// Assemble from parts; every variable used by the equations must be
    /// covered by the table.
    pub fn from_parts(table: VarTable, equations: Vec<Equation>) -> Result<Self, CoreError> {
        let allowed = if table.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << table.len()) - 1
        };
        for eq in &equations {
            let used = eq.lhs.support_mask() | eq.rhs.support_mask();
            let outside = used & !allowed;
            if outside != 0 {
                let index = outside.trailing_zeros();
                return Err(CoreError::UnboundVariable {
                    index,
                    name: format!("#{index}"),
                });
            }
        }
        Ok(EquationSystem { table, equations })
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn n_vars(&self) -> u32 {
        self.table.len() as u32
    }

    /// Render in the same line-based format `parse` accepts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for eq in &self.equations {
            out.push_str(&format_polynomial(&eq.lhs, &self.table));
            out.push_str(" = ");
            out.push_str(&format_polynomial(&eq.rhs, &self.table));
            out.push('\n');
        }
        out
    }

    /// Weighted sum of squared residuals. `weights` must be positive and
    /// match the equation count; `None` means all ones.
    pub fn to_hamiltonian(&self, weights: Option<&[i64]>) -> Result<Hamiltonian, CoreError> {
        if let Some(w) = weights {
            if w.len() != self.equations.len() {
                return Err(CoreError::WeightCountMismatch {
                    count: w.len(),
                    expected: self.equations.len(),
                });
            }
            if let Some(&bad) = w.iter().find(|&&v| v <= 0) {
                return Err(CoreError::NonPositiveWeight { value: bad });
            }
        }
        let mut poly = BinaryPolynomial::zero();
        for (k, eq) in self.equations.iter().enumerate() {
            let weight = weights.map(|w| w[k]).unwrap_or(1);
            poly = poly.add(&eq.penalty()?.scale(weight)?)?;
        }
        Ok(Hamiltonian {
            table: self.table.clone(),
            poly,
        })
    }

    /// True if the assignment satisfies every equation.
    pub fn is_solution(&self, assignment: u64) -> Result<bool, CoreError> {
        let n = self.n_vars();
        for eq in &self.equations {
            if eq.residual()?.evaluate(assignment, n)? != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All solutions, by exhaustive enumeration over `2^n` assignments.
    /// Refuses systems with more than `max_vars` variables.
    pub fn solve_exhaustive(&self, max_vars: u32) -> Result<Vec<u64>, CoreError> {
        let n = self.n_vars();
        if n > max_vars {
            return Err(CoreError::CapExceeded { n, cap: max_vars });
        }
        let residuals: Vec<BinaryPolynomial> = self
            .equations
            .iter()
            .map(|eq| eq.residual())
            .collect::<Result<_, _>>()?;
        let mut solutions = Vec::new();
        for assignment in 0..(1u64 << n) {
            if residuals
                .iter()
                .all(|r| r.evaluate(assignment, n).map(|v| v == 0).unwrap_or(false))
            {
                solutions.push(assignment);
            }
        }
        Ok(solutions)
    }
}

/// A pseudo-Boolean Hamiltonian together with the table naming its
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hamiltonian {
    table: VarTable,
    poly: BinaryPolynomial,
}

impl Hamiltonian {
    /// Wrap a polynomial; its support must be covered by the table.
    pub fn new(table: VarTable, poly: BinaryPolynomial) -> Result<Self, CoreError> {
        let allowed = if table.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << table.len()) - 1
        };
        let outside = poly.support_mask() & !allowed;
        if outside != 0 {
            let index = outside.trailing_zeros();
            return Err(CoreError::UnboundVariable {
                index,
                name: format!("#{index}"),
            });
        }
        Ok(Hamiltonian { table, poly })
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn poly(&self) -> &BinaryPolynomial {
        &self.poly
    }

    pub fn n_vars(&self) -> u32 {
        self.table.len() as u32
    }

    pub fn evaluate(&self, assignment: u64) -> Result<i64, CoreError> {
        self.poly.evaluate(assignment, self.n_vars())
    }

    /// Add a term (for instance a deduction penalty) over the same table.
    pub fn add_term(&self, term: &BinaryPolynomial) -> Result<Hamiltonian, CoreError> {
        Hamiltonian::new(self.table.clone(), self.poly.add(term)?)
    }

    pub fn to_text(&self) -> String {
        format_polynomial(&self.poly, &self.table)
    }
}
