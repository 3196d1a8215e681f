//! Elementary deduction rules that shrink an equation system without
//! changing its solution set.
//!
//! Four rule classes, applied to one normalized equation at a time until
//! none fires:
//!
//! (a) a sum of non-negative terms equals 0 — every degree-one term's
//!     variable is 0;
//! (b) a sum equals the largest value it can reach — every term is at its
//!     maximum, so every variable in it is 1 (this resolves products too:
//!     `x*y = 1` forces both);
//! (c) an equation in a single variable — test both values, substitute the
//!     surviving one, or drop the equation if both work;
//! (d) `x = y` — substitute one variable for the other.
//!
//! Each substitution is recorded; [`Simplified::lift`] replays the record
//! backwards to turn a solution of the reduced system into a solution of
//! the original. The map is a bijection between the two solution sets, so
//! counting arguments transfer. A detected contradiction (an equation no
//! assignment can satisfy) is an error: the systems this pass is meant for
//! encode factorizations that exist.

use std::collections::BTreeSet;

use crate::error::CoreError;
use crate::parse::format_polynomial;
use crate::poly::{BinaryPolynomial, Monomial, Replacement};
use crate::system::{Equation, EquationSystem};
use crate::vars::VarTable;

/// What a deduced variable was replaced by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Zero,
    One,
    SameAs(String),
}

/// One recorded substitution: `var` was eliminated in favor of `binding`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deduced {
    pub var: String,
    pub binding: Binding,
}

impl std::fmt::Display for Deduced {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.binding {
            Binding::Zero => write!(f, "{} = 0", self.var),
            Binding::One => write!(f, "{} = 1", self.var),
            Binding::SameAs(other) => write!(f, "{} = {}", self.var, other),
        }
    }
}

/// Result of [`apply_simple_deductions`]: the reduced system plus the
/// substitution record connecting it to the original.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub system: EquationSystem,
    pub deductions: Vec<Deduced>,
    original: VarTable,
}

impl Simplified {
    pub fn original_table(&self) -> &VarTable {
        &self.original
    }

    /// Extend a solution of the reduced system to one of the original, by
    /// replaying the deductions newest-first (a variable bound to another
    /// is resolved only after that other variable got its own value back).
    pub fn lift(&self, reduced: u64) -> Result<u64, CoreError> {
        let n = self.system.n_vars();
        if n < 64 && reduced >> n != 0 {
            let index = 63 - reduced.leading_zeros();
            return Err(CoreError::UnboundVariable {
                index,
                name: format!("#{index}"),
            });
        }
        let mut full = 0u64;
        for (k, name) in self.system.table().names().iter().enumerate() {
            let index = self
                .original
                .index_of(name)
                .expect("reduced table is a subset of the original");
            full |= (reduced >> k & 1) << index;
        }
        for d in self.deductions.iter().rev() {
            let index = self
                .original
                .index_of(&d.var)
                .expect("deduced variables come from the original table");
            let value = match &d.binding {
                Binding::Zero => 0,
                Binding::One => 1,
                Binding::SameAs(other) => {
                    let o = self
                        .original
                        .index_of(other)
                        .expect("binding targets come from the original table");
                    full >> o & 1
                }
            };
            full |= value << index;
        }
        Ok(full)
    }
}

/// Split a normalized side into (constant, non-constant part, coefficient
/// sum of the non-constant part). The sum is widened so it cannot overflow.
fn side_shape(p: &BinaryPolynomial) -> (i64, BinaryPolynomial, i128) {
    let c = p.constant_term();
    let mut rest = BinaryPolynomial::zero();
    let mut sum = 0i128;
    for (m, coeff) in p.terms() {
        if !m.is_constant() {
            // Rebuilding term by term cannot overflow: `p` already holds them.
            rest.add_term(m, coeff).expect("copying existing terms");
            sum += coeff as i128;
        }
    }
    (c, rest, sum)
}

enum Step {
    Deduce(Vec<(u32, Replacement)>),
    DropEquation,
}

/// Find the first rule that fires on this normalized equation.
fn find_step(eq: &Equation, table: &VarTable) -> Result<Option<Step>, CoreError> {
    let residual = eq.residual()?;
    if residual.is_zero() {
        return Ok(Some(Step::DropEquation));
    }

    let equation_text = || {
        format!(
            "{} = {}",
            format_polynomial(&eq.lhs, table),
            format_polynomial(&eq.rhs, table)
        )
    };

    // Rules (a) and (b): one side is a bare constant.
    for (this, other) in [(&eq.lhs, &eq.rhs), (&eq.rhs, &eq.lhs)] {
        let (c_other, rest_other, _) = side_shape(other);
        if !rest_other.is_zero() {
            continue;
        }
        let (c_this, rest, sum) = side_shape(this);
        let target = c_other as i128 - c_this as i128;
        if target < 0 || target > sum {
            return Err(CoreError::Contradiction {
                detail: format!("equation `{}` cannot be satisfied", equation_text()),
            });
        }
        if rest.is_zero() {
            // Pure constant identity; target == 0 here, so it's trivial.
            return Ok(Some(Step::DropEquation));
        }
        if target == 0 {
            // (a) every term vanishes; only single-variable terms pin a bit.
            let subs: Vec<(u32, Replacement)> = rest
                .terms()
                .filter(|(m, _)| m.degree() == 1)
                .map(|(m, _)| (m.indices().next().unwrap(), Replacement::Zero))
                .collect();
            if !subs.is_empty() {
                return Ok(Some(Step::Deduce(subs)));
            }
        } else if target == sum {
            // (b) every term is at its maximum, so every variable is 1.
            let vars: BTreeSet<u32> = rest.terms().flat_map(|(m, _)| m.indices()).collect();
            let subs = vars.into_iter().map(|v| (v, Replacement::One)).collect();
            return Ok(Some(Step::Deduce(subs)));
        }
    }

    // Rule (c): a single variable; try both values.
    let support = residual.support();
    if support.len() == 1 {
        let v = support[0];
        let at0 = residual.substitute(v, Replacement::Zero)?.constant_term();
        let at1 = residual.substitute(v, Replacement::One)?.constant_term();
        return match (at0 == 0, at1 == 0) {
            (true, true) => Ok(Some(Step::DropEquation)),
            (true, false) => Ok(Some(Step::Deduce(vec![(v, Replacement::Zero)]))),
            (false, true) => Ok(Some(Step::Deduce(vec![(v, Replacement::One)]))),
            (false, false) => Err(CoreError::Contradiction {
                detail: format!("equation `{}` cannot be satisfied", equation_text()),
            }),
        };
    }

    // Rule (d): exactly `x - y`; substitute the later variable by the
    // earlier so the surviving name is the canonically smaller one.
    let terms: Vec<(Monomial, i64)> = residual.terms().collect();
    if terms.len() == 2
        && terms.iter().all(|(m, c)| m.degree() == 1 && c.abs() == 1)
        && terms[0].1 + terms[1].1 == 0
    {
        let a = terms[0].0.indices().next().unwrap();
        let b = terms[1].0.indices().next().unwrap();
        let (eliminated, kept) = if a > b { (a, b) } else { (b, a) };
        return Ok(Some(Step::Deduce(vec![(
            eliminated,
            Replacement::Var(kept),
        )])));
    }

    Ok(None)
}

/// Run the deduction rules to a fixpoint.
pub fn apply_simple_deductions(sys: &EquationSystem) -> Result<Simplified, CoreError> {
    let original = sys.table().clone();
    let mut equations: Vec<Equation> = sys
        .equations()
        .iter()
        .map(|eq| eq.normalize())
        .collect::<Result<_, _>>()?;
    let mut deductions: Vec<Deduced> = Vec::new();
    let mut eliminated = 0u64;

    'rounds: loop {
        for k in 0..equations.len() {
            match find_step(&equations[k], &original)? {
                None => continue,
                Some(Step::DropEquation) => {
                    equations.remove(k);
                    continue 'rounds;
                }
                Some(Step::Deduce(subs)) => {
                    for (index, replacement) in &subs {
                        let binding = match replacement {
                            Replacement::Zero => Binding::Zero,
                            Replacement::One => Binding::One,
                            Replacement::Var(w) => Binding::SameAs(original.name(*w).to_string()),
                        };
                        deductions.push(Deduced {
                            var: original.name(*index).to_string(),
                            binding,
                        });
                        eliminated |= 1 << index;
                        for eq in &mut equations {
                            let lhs = eq.lhs.substitute(*index, *replacement)?;
                            let rhs = eq.rhs.substitute(*index, *replacement)?;
                            *eq = Equation { lhs, rhs }.normalize()?;
                        }
                    }
                    continue 'rounds;
                }
            }
        }
        break;
    }

    // Variables never eliminated keep their place, renumbered densely.
    let kept: Vec<&str> = original
        .names()
        .iter()
        .enumerate()
        .filter(|(i, _)| eliminated >> i & 1 == 0)
        .map(|(_, name)| name.as_str())
        .collect();
    let table = VarTable::from_names(kept)?;
    let remap: Vec<Option<u32>> = (0..original.len() as u32)
        .map(|old| table.index_of(original.name(old)))
        .collect();
    let remap_poly = |p: &BinaryPolynomial| -> Result<BinaryPolynomial, CoreError> {
        BinaryPolynomial::from_terms(
            p.terms()
                .map(|(m, c)| {
                    let moved = Monomial::from_indices(m.indices().map(|i| {
                        remap[i as usize].expect("surviving polynomials use only kept variables")
                    }))?;
                    Ok((moved, c))
                })
                .collect::<Result<Vec<_>, CoreError>>()?,
        )
    };
    let equations = equations
        .iter()
        .map(|eq| {
            Ok(Equation {
                lhs: remap_poly(&eq.lhs)?,
                rhs: remap_poly(&eq.rhs)?,
            })
        })
        .collect::<Result<Vec<_>, CoreError>>()?;

    Ok(Simplified {
        system: EquationSystem::from_parts(table, equations)?,
        deductions,
        original,
    })
}
