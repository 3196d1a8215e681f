//! Variable names and the per-instance variable table.
//!
//! Every problem instance fixes a finite set of named binary variables and
//! assigns each a dense index `0..n`. The assignment is deterministic:
//! names are sorted in natural order (digit runs compare numerically, so
//! `z5 < z23` and `p2 < p10`), which keeps state enumeration and report
//! output reproducible across runs.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Upper limit on variables per instance, imposed by the bitmask monomial
/// representation.
pub const MAX_VARS: usize = 64;

/// Compare identifiers in natural order: contiguous digit runs are compared
/// numerically, everything else byte-wise. Ties between numerically equal
/// runs (`z07` vs `z7`) fall back to the raw text so the order stays total.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut ab = a.as_bytes();
    let mut bb = b.as_bytes();
    loop {
        match (ab.first(), bb.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(&ca), Some(&cb)) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let (ra, rest_a) = split_digit_run(ab);
                    let (rb, rest_b) = split_digit_run(bb);
                    let na = trim_zeros(ra);
                    let nb = trim_zeros(rb);
                    let ord = na.len().cmp(&nb.len()).then_with(|| na.cmp(nb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    ab = rest_a;
                    bb = rest_b;
                } else {
                    if ca != cb {
                        return ca.cmp(&cb);
                    }
                    ab = &ab[1..];
                    bb = &bb[1..];
                }
            }
        }
    }
}

fn split_digit_run(s: &[u8]) -> (&[u8], &[u8]) {
    let end = s.iter().position(|c| !c.is_ascii_digit()).unwrap_or(s.len());
    s.split_at(end)
}

fn trim_zeros(s: &[u8]) -> &[u8] {
    let start = s.iter().position(|&c| c != b'0').unwrap_or(s.len() - 1);
    &s[start..]
}

/// True if `name` is a legal variable identifier: `[a-zA-Z][a-zA-Z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The variable table of one problem instance: a bijection between names and
/// dense indices `0..n`, ordered by [`natural_cmp`].
///
/// Tables are immutable once built; polynomials refer to variables by index
/// and are only meaningful together with the table they were built against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct VarTable {
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

impl VarTable {
    /// Build a table from a set of names (duplicates collapse, order is
    /// recomputed). Errors if a name is not a valid identifier or the
    /// variable cap is exceeded.
    pub fn from_names<I, S>(names: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort_by(|a, b| natural_cmp(a, b));
        names.dedup();
        for name in &names {
            if !is_identifier(name) {
                return Err(CoreError::InvalidIdentifier { name: name.clone() });
            }
        }
        if names.len() > MAX_VARS {
            return Err(CoreError::TooManyVariables {
                count: names.len(),
                max: MAX_VARS,
            });
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        Ok(VarTable { names, index })
    }

    /// The empty table (zero variables, one assignment).
    pub fn empty() -> Self {
        VarTable {
            names: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    /// Name for a dense index; panics if out of range.
    pub fn name(&self, index: u32) -> &str {
        &self.names[index as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Render an assignment as a bitstring, character `i` holding the value
    /// of variable index `i`.
    pub fn bitstring(&self, assignment: u64) -> String {
        (0..self.len() as u32)
            .map(|i| if assignment >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl TryFrom<Vec<String>> for VarTable {
    type Error = CoreError;

    fn try_from(names: Vec<String>) -> Result<Self, CoreError> {
        // Deserialized tables must already be in canonical order so that
        // stored artifacts cannot silently reindex.
        let table = VarTable::from_names(names.clone())?;
        if table.names != names {
            return Err(CoreError::UnsortedVariables);
        }
        Ok(table)
    }
}

impl From<VarTable> for Vec<String> {
    fn from(t: VarTable) -> Vec<String> {
        t.names
    }
}
