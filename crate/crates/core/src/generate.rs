//! Generator for integer-factoring equation systems.
//!
//! Long multiplication of two odd factors `p` (p_bits wide) and `q` (q_bits
//! wide) is written column by column. Bit 0 and the top bit of each factor
//! are fixed to 1, the bits in between are variables. For product column
//! `c ≥ 1` the generator emits
//!
//! ```text
//! sum_{i+j=c} p_i*q_j + (carries into c)  =  bit_c(N) + sum_m 2^m * z{c}{c+m}
//! ```
//!
//! where `z{c}{d}` is the carry produced in column `c` that lands in column
//! `d`. Column `c` emits exactly enough carry bits to cover the largest
//! value its left side can reach, and never past the top column of `N`.
//! Column 0 is omitted: both factors are odd, so it reads `1 = 1`.
//!
//! Any simultaneous solution of the column equations satisfies `p·q = N`:
//! multiplying column `c` by `2^c` and summing makes every carry variable
//! cancel between its producing and receiving column, leaving the product
//! identity. Conversely a factorization with the requested widths yields a
//! solution by running the multiplication and reading off its carries.

use crate::error::CoreError;
use crate::poly::BinaryPolynomial;
use crate::system::{Equation, EquationSystem};
use crate::vars::VarTable;

/// Name of the carry from column `c` into column `d`. Single-digit columns
/// concatenate (`z23`, matching how the systems are usually written); an
/// underscore keeps larger indices unambiguous (`z9_10`).
pub fn carry_name(c: u32, d: u32) -> String {
    if c <= 9 && d <= 9 {
        format!("z{c}{d}")
    } else {
        format!("z{c}_{d}")
    }
}

/// One factor bit in a product column: fixed to a constant or a named
/// variable.
enum Bit {
    Const(u64),
    Var(String),
}

/// Bit `i` of an odd `width`-bit factor named by `prefix`.
fn factor_bit(prefix: &str, i: u32, width: u32) -> Bit {
    if i >= width {
        Bit::Const(0)
    } else if i == 0 || i == width - 1 {
        Bit::Const(1)
    } else {
        Bit::Var(format!("{prefix}{i}"))
    }
}

/// Build the factoring system for `N = p·q` with the given factor widths.
///
/// The system is satisfiable exactly when `N` has a factorization into odd
/// factors of those widths, and every solution encodes one.
pub fn generate_factoring_system(
    n: u64,
    p_bits: u32,
    q_bits: u32,
) -> Result<EquationSystem, CoreError> {
    if n < 9 || n % 2 == 0 {
        return Err(CoreError::InvalidModulus { n });
    }
    let n_bits = 64 - n.leading_zeros();
    if p_bits < 2 || q_bits < 2 || p_bits + q_bits < n_bits || p_bits + q_bits > n_bits + 1 {
        return Err(CoreError::InconsistentBitLength {
            n,
            n_bits,
            p_bits,
            q_bits,
        });
    }
    let cmax = n_bits - 1;

    // Carry layout, one forward pass: by the time column c is sized, every
    // carry that can land in it has been emitted by an earlier column.
    // Column c's left side is at most M = (#product terms) + (#carries in),
    // so ilog2(M) outgoing carry bits 2, 4, ..., 2^k cover it; the product
    // equals N exactly, so no carry can land past column cmax.
    let mut emitted: Vec<u32> = vec![0; cmax as usize + 1]; // k_c per column
    let mut incoming: Vec<Vec<u32>> = vec![Vec::new(); cmax as usize + 1]; // source columns
    for c in 1..=cmax {
        let terms = (0..p_bits)
            .filter(|&i| c >= i && c - i < q_bits)
            .count() as u32;
        let m = terms + incoming[c as usize].len() as u32;
        let k = m.max(1).ilog2().min(cmax - c);
        emitted[c as usize] = k;
        for d in c + 1..=c + k {
            incoming[d as usize].push(c);
        }
    }

    let mut names: Vec<String> = Vec::new();
    for i in 1..p_bits.saturating_sub(1) {
        names.push(format!("p{i}"));
    }
    for j in 1..q_bits.saturating_sub(1) {
        names.push(format!("q{j}"));
    }
    for c in 1..=cmax {
        for d in c + 1..=c + emitted[c as usize] {
            names.push(carry_name(c, d));
        }
    }
    let table = VarTable::from_names(names)?;

    let var = |name: &str| -> Result<BinaryPolynomial, CoreError> {
        let index = table
            .index_of(name)
            .expect("generator names are all in the table");
        BinaryPolynomial::variable(index)
    };

    let mut equations = Vec::new();
    for c in 1..=cmax {
        let mut lhs = BinaryPolynomial::zero();
        for i in 0..p_bits {
            if c < i || c - i >= q_bits {
                continue;
            }
            let term = match (factor_bit("p", i, p_bits), factor_bit("q", c - i, q_bits)) {
                (Bit::Const(a), Bit::Const(b)) => BinaryPolynomial::constant((a * b) as i64),
                (Bit::Const(a), Bit::Var(name)) | (Bit::Var(name), Bit::Const(a)) => {
                    var(&name)?.scale(a as i64)?
                }
                (Bit::Var(pa), Bit::Var(qa)) => var(&pa)?.mul(&var(&qa)?)?,
            };
            lhs = lhs.add(&term)?;
        }
        for &b in &incoming[c as usize] {
            lhs = lhs.add(&var(&carry_name(b, c))?)?;
        }

        let mut rhs = BinaryPolynomial::constant((n >> c & 1) as i64);
        for d in c + 1..=c + emitted[c as usize] {
            rhs = rhs.add(&var(&carry_name(c, d))?.scale(1 << (d - c))?)?;
        }

        if lhs.is_zero() && rhs.is_zero() {
            continue;
        }
        equations.push(Equation { lhs, rhs });
    }
    EquationSystem::from_parts(table, equations)
}

/// Read the factors `(p, q)` off a satisfying assignment of a system built
/// by [`generate_factoring_system`] with the same widths. Bits whose
/// variables are absent from the table (eliminated by simplification, or
/// fixed by construction) follow the fixed-bit convention.
pub fn decode_factors(
    table: &VarTable,
    assignment: u64,
    p_bits: u32,
    q_bits: u32,
) -> (u64, u64) {
    let read = |prefix: &str, width: u32| -> u64 {
        let mut value = 1 | 1 << (width - 1);
        for i in 1..width.saturating_sub(1) {
            if let Some(index) = table.index_of(&format!("{prefix}{i}")) {
                value |= (assignment >> index & 1) << i;
            }
        }
        value
    };
    (read("p", p_bits), read("q", q_bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carry_names_follow_column_indices() {
        assert_eq!(carry_name(2, 3), "z23");
        assert_eq!(carry_name(7, 9), "z79");
        assert_eq!(carry_name(9, 10), "z9_10");
        assert_eq!(carry_name(11, 13), "z11_13");
    }

    #[test]
    fn rejects_bad_moduli_and_widths() {
        assert!(matches!(
            generate_factoring_system(8, 2, 2),
            Err(CoreError::InvalidModulus { n: 8 })
        ));
        assert!(matches!(
            generate_factoring_system(7, 2, 2),
            Err(CoreError::InvalidModulus { n: 7 })
        ));
        // 9 has 4 bits; 2+2 widths are consistent, 2+6 are not.
        assert!(matches!(
            generate_factoring_system(9, 2, 6),
            Err(CoreError::InconsistentBitLength { .. })
        ));
        assert!(matches!(
            generate_factoring_system(35, 1, 5),
            Err(CoreError::InconsistentBitLength { .. })
        ));
    }

    #[test]
    fn nine_as_three_by_three() {
        // Both factor bits are fixed, so only carries remain and the system
        // pins them to the one genuine multiplication transcript.
        let sys = generate_factoring_system(9, 2, 2).unwrap();
        let solutions = sys.solve_exhaustive(20).unwrap();
        assert_eq!(solutions.len(), 1);
        let (p, q) = decode_factors(sys.table(), solutions[0], 2, 2);
        assert_eq!((p, q), (3, 3));
    }

    #[test]
    fn fifteen_as_three_by_five() {
        let sys = generate_factoring_system(15, 2, 3).unwrap();
        let solutions = sys.solve_exhaustive(20).unwrap();
        let factors: Vec<(u64, u64)> = solutions
            .iter()
            .map(|&a| decode_factors(sys.table(), a, 2, 3))
            .collect();
        assert_eq!(factors, vec![(3, 5)]);
    }

    #[test]
    fn mismatched_widths_give_unsatisfiable_systems() {
        // 9 = 3*3 only; a 2x3 split is width-consistent but has no solution.
        let sys = generate_factoring_system(9, 2, 3).unwrap();
        assert!(sys.solve_exhaustive(20).unwrap().is_empty());
    }

    #[test]
    fn balanced_split_recovers_both_orderings() {
        // 35 = 5*7 with both factors 3 bits wide.
        let sys = generate_factoring_system(35, 3, 3).unwrap();
        let mut factors: Vec<(u64, u64)> = sys
            .solve_exhaustive(20)
            .unwrap()
            .iter()
            .map(|&a| decode_factors(sys.table(), a, 3, 3))
            .collect();
        factors.sort();
        assert_eq!(factors, vec![(5, 7), (7, 5)]);
    }

    #[test]
    fn every_solution_multiplies_to_n() {
        for (n, pb, qb) in [(21u64, 2, 3), (33, 2, 4), (49, 3, 3), (77, 3, 4)] {
            let sys = generate_factoring_system(n, pb, qb).unwrap();
            let solutions = sys.solve_exhaustive(24).unwrap();
            assert!(!solutions.is_empty(), "N = {n} should be satisfiable");
            for &a in &solutions {
                let (p, q) = decode_factors(sys.table(), a, pb, qb);
                assert_eq!(p * q, n, "assignment must encode a factorization of {n}");
            }
        }
    }
}
