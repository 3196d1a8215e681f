//! Multilinear pseudo-Boolean polynomials with exact integer coefficients.
//!
//! A polynomial is a finite sum of monomials over binary variables. Because
//! the variables only ever take values 0 and 1, `x*x` reduces to `x`; a
//! monomial is therefore a *set* of variable indices, stored as a 64-bit
//! mask. The representation is canonical by construction: no zero
//! coefficients, no repeated variables, terms keyed by mask. Two polynomials
//! are structurally equal exactly when they agree on every assignment.
//!
//! All coefficient arithmetic is checked; an overflow is reported as an
//! error, never wrapped.

use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::vars::MAX_VARS;

/// A monomial: the set of variable indices it multiplies, as a bitmask.
/// The empty set is the constant monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const CONSTANT: Monomial = Monomial(0);

    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Result<Self, CoreError> {
        let mut mask = 0u64;
        for i in indices {
            if i as usize >= MAX_VARS {
                return Err(CoreError::TooManyVariables {
                    count: i as usize + 1,
                    max: MAX_VARS,
                });
            }
            mask |= 1 << i;
        }
        Ok(Monomial(mask))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    /// Number of variables in the monomial (its degree).
    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_constant(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: u32) -> bool {
        self.0 >> index & 1 == 1
    }

    /// Product of two monomials; idempotence makes this the set union.
    pub fn product(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    /// Ascending variable indices.
    pub fn indices(self) -> impl Iterator<Item = u32> {
        let mask = self.0;
        (0..64u32).filter(move |i| mask >> i & 1 == 1)
    }

    /// 1 on assignments where every variable of the monomial is set.
    pub fn eval(self, assignment: u64) -> i64 {
        (assignment & self.0 == self.0) as i64
    }
}

/// A multilinear polynomial over binary variables, exact-integer valued.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BinaryPolynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl BinaryPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: i64) -> Self {
        let mut terms = BTreeMap::new();
        if value != 0 {
            terms.insert(Monomial::CONSTANT, value);
        }
        BinaryPolynomial { terms }
    }

    /// The single variable `x_index`.
    pub fn variable(index: u32) -> Result<Self, CoreError> {
        let m = Monomial::from_indices([index])?;
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        Ok(BinaryPolynomial { terms })
    }

    /// Build from an iterator of (monomial, coefficient); like terms are
    /// collected, zeros dropped.
    pub fn from_terms<I>(terms: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut poly = BinaryPolynomial::zero();
        for (m, c) in terms {
            poly.add_term(m, c)?;
        }
        Ok(poly)
    }

    pub(crate) fn add_term(&mut self, monomial: Monomial, coeff: i64) -> Result<(), CoreError> {
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(monomial).or_insert(0);
        *entry = entry.checked_add(coeff).ok_or(CoreError::Overflow)?;
        if *entry == 0 {
            self.terms.remove(&monomial);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coefficient(&self, monomial: Monomial) -> i64 {
        self.terms.get(&monomial).copied().unwrap_or(0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> i64 {
        self.coefficient(Monomial::CONSTANT)
    }

    /// Highest monomial degree (0 for constants and the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Mask of every variable index that appears in some term.
    pub fn support_mask(&self) -> u64 {
        self.terms.keys().fold(0, |acc, m| acc | m.mask())
    }

    /// Ascending list of variable indices appearing in the polynomial.
    pub fn support(&self) -> Vec<u32> {
        Monomial(self.support_mask()).indices().collect()
    }

    pub fn add(&self, other: &BinaryPolynomial) -> Result<BinaryPolynomial, CoreError> {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BinaryPolynomial) -> Result<BinaryPolynomial, CoreError> {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.checked_neg().ok_or(CoreError::Overflow)?)?;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: i64) -> Result<BinaryPolynomial, CoreError> {
        let mut out = BinaryPolynomial::zero();
        for (m, c) in self.terms() {
            out.add_term(m, c.checked_mul(factor).ok_or(CoreError::Overflow)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BinaryPolynomial) -> Result<BinaryPolynomial, CoreError> {
        let mut out = BinaryPolynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let c = ca.checked_mul(cb).ok_or(CoreError::Overflow)?;
                out.add_term(ma.product(mb), c)?;
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Result<BinaryPolynomial, CoreError> {
        self.mul(self)
    }

    /// Exact value at an assignment. `n_vars` is the instance size; an error
    /// names the first variable index outside the assignment's range.
    ///
    /// Variable `i` is read from bit `i` of `assignment`.
    pub fn evaluate(&self, assignment: u64, n_vars: u32) -> Result<i64, CoreError> {
        let allowed = if n_vars >= 64 {
            u64::MAX
        } else {
            (1u64 << n_vars) - 1
        };
        let outside = self.support_mask() & !allowed;
        if outside != 0 {
            let index = outside.trailing_zeros();
            return Err(CoreError::UnboundVariable {
                index,
                name: format!("#{index}"),
            });
        }
        let mut sum: i64 = 0;
        for (m, c) in self.terms() {
            if m.eval(assignment) == 1 {
                sum = sum.checked_add(c).ok_or(CoreError::Overflow)?;
            }
        }
        Ok(sum)
    }

    /// Sum of |coefficient| over all terms, in i128 (cannot overflow).
    /// Any partial evaluation sum is bounded by this value in magnitude.
    pub fn coeff_magnitude_sum(&self) -> i128 {
        self.terms().map(|(_, c)| (c as i128).abs()).sum()
    }

    /// Substitute a variable by a constant or by another variable,
    /// preserving the value on every assignment consistent with the
    /// substitution.
    pub fn substitute(
        &self,
        index: u32,
        replacement: Replacement,
    ) -> Result<BinaryPolynomial, CoreError> {
        let mut out = BinaryPolynomial::zero();
        for (m, c) in self.terms() {
            if !m.contains(index) {
                out.add_term(m, c)?;
                continue;
            }
            let stripped = Monomial(m.mask() & !(1 << index));
            match replacement {
                Replacement::Zero => {}
                Replacement::One => out.add_term(stripped, c)?,
                Replacement::Var(w) => {
                    let with_w = Monomial::from_indices([w])?.product(stripped);
                    out.add_term(with_w, c)?;
                }
            }
        }
        Ok(out)
    }
}

/// Target of a variable substitution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Replacement {
    Zero,
    One,
    Var(u32),
}
