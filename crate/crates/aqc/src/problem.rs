//! Problem statement and operator construction.

use elmkit_core::Hamiltonian;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::AqcError;

/// Largest qubit count the dense eigensolver accepts (4096×4096).
pub const DENSE_CAP: u32 = 12;

/// Error budget ε, kept as the exact decimal the caller wrote so that
/// `R/ε` stays an integer arithmetic problem (e.g. `0.1` is exactly 1/10,
/// which no binary float can say).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    pub num: i64,
    pub den: i64,
}

impl Epsilon {
    /// Parse a plain decimal literal such as `0.1`, `.05`, or `0.25`.
    pub fn parse(text: &str) -> Result<Self, AqcError> {
        let reject = || AqcError::InvalidEpsilon {
            text: text.to_string(),
        };
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(reject());
        }
        let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 18 {
            return Err(reject());
        }
        let mut num: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| reject())?
        };
        let mut den: i64 = 1;
        for b in frac_part.bytes() {
            num = num
                .checked_mul(10)
                .and_then(|n| n.checked_add((b - b'0') as i64))
                .ok_or_else(reject)?;
            den *= 10;
        }
        if num <= 0 || num >= den {
            return Err(reject());
        }
        Ok(Epsilon { num, den })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The initial Hamiltonian of the interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitKind {
    /// `c·Σ_j (I − X_j)/2`: ground state is the uniform superposition at
    /// energy 0, top of the spectrum at `n·c`.
    TransverseField { scale: f64 },
    /// No driver at all; `H(t) = (t/T)·H_final`.
    Zero,
    /// An arbitrary diagonal operator (one entry per basis state).
    Diagonal { entries: Vec<f64> },
}

impl Default for InitKind {
    fn default() -> Self {
        InitKind::TransverseField { scale: 1.0 }
    }
}

/// One annealing instance: final Hamiltonian, driver, error budget, and
/// how many `t/T` samples the gap scan takes.
#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    pub h_final: Hamiltonian,
    pub h_init: InitKind,
    pub epsilon: Epsilon,
    pub grid: usize,
}

impl InterpolationProblem {
    pub fn new(h_final: Hamiltonian, epsilon: Epsilon) -> Self {
        InterpolationProblem {
            h_final,
            h_init: InitKind::default(),
            epsilon,
            grid: 64,
        }
    }

    pub fn qubits(&self) -> u32 {
        self.h_final.n_vars()
    }

    pub fn validate(&self) -> Result<(), AqcError> {
        let n = self.qubits();
        if n > DENSE_CAP {
            return Err(elmkit_core::CoreError::CapExceeded { n, cap: DENSE_CAP }.into());
        }
        if self.grid < 2 {
            return Err(AqcError::InvalidGrid { grid: self.grid });
        }
        match &self.h_init {
            InitKind::TransverseField { scale } if *scale <= 0.0 => {
                Err(AqcError::NonPositiveScale { scale: *scale })
            }
            InitKind::Diagonal { entries } if entries.len() != 1 << n => {
                Err(AqcError::DiagonalLength {
                    got: entries.len(),
                    expected: 1 << n,
                    qubits: n,
                })
            }
            _ => Ok(()),
        }
    }
}

/// The two endpoint operators, dense, plus the exact integer diagonal of
/// the final one.
pub struct Operators {
    pub h_init: DMatrix<f64>,
    pub h_final: DMatrix<f64>,
    /// `diagonal[x]` = value of the final polynomial at assignment `x`.
    pub diagonal: Vec<i64>,
}

/// Materialize both endpoint Hamiltonians as dense real symmetric
/// matrices in the computational basis.
pub fn build_operators(p: &InterpolationProblem) -> Result<Operators, AqcError> {
    p.validate()?;
    let n = p.qubits();
    let dim = 1usize << n;

    let mut diagonal = Vec::with_capacity(dim);
    for x in 0..dim as u64 {
        diagonal.push(p.h_final.evaluate(x).map_err(AqcError::Core)?);
    }
    let h_final = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            diagonal[r] as f64
        } else {
            0.0
        }
    });

    let h_init = match &p.h_init {
        InitKind::TransverseField { scale } => {
            // Each (I − X_j)/2 contributes ½ on the diagonal and −½ between
            // the two states that differ in bit j.
            let half = scale / 2.0;
            DMatrix::from_fn(dim, dim, |r, c| {
                if r == c {
                    n as f64 * half
                } else if (r ^ c).count_ones() == 1 {
                    -half
                } else {
                    0.0
                }
            })
        }
        InitKind::Zero => DMatrix::zeros(dim, dim),
        InitKind::Diagonal { entries } => DMatrix::from_fn(dim, dim, |r, c| {
            if r == c {
                entries[r]
            } else {
                0.0
            }
        }),
    };

    Ok(Operators {
        h_init,
        h_final,
        diagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use elmkit_core::EquationSystem;

    fn toy_hamiltonian() -> Hamiltonian {
        EquationSystem::parse("x1 + x2 = x3 + 1\nx1 + x1*x2 = 2*x2*x3 + x2 + 1\n")
            .unwrap()
            .to_hamiltonian(None)
            .unwrap()
    }

    fn one_qubit() -> Hamiltonian {
        EquationSystem::parse("x1 = 0\n")
            .unwrap()
            .to_hamiltonian(None)
            .unwrap()
    }

    #[test]
    fn epsilon_parses_exact_decimals() {
        assert_eq!(Epsilon::parse("0.1").unwrap(), Epsilon { num: 1, den: 10 });
        assert_eq!(Epsilon::parse(".25").unwrap(), Epsilon { num: 25, den: 100 });
        assert_eq!(
            Epsilon::parse("0.015").unwrap(),
            Epsilon { num: 15, den: 1000 }
        );
        for bad in ["0", "1", "1.0", "0.0", "-0.1", "0.1e0", "", ".", "half"] {
            assert!(Epsilon::parse(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn transverse_field_matrix_is_the_textbook_one() {
        let p = InterpolationProblem::new(one_qubit(), Epsilon::parse("0.1").unwrap());
        let ops = build_operators(&p).unwrap();
        // 1 qubit, c = 1: [[½, −½], [−½, ½]]; final = diag(0, 1).
        assert_eq!(ops.h_init[(0, 0)], 0.5);
        assert_eq!(ops.h_init[(0, 1)], -0.5);
        assert_eq!(ops.h_init[(1, 0)], -0.5);
        assert_eq!(ops.h_init[(1, 1)], 0.5);
        assert_eq!(ops.diagonal, vec![0, 1]);
        // Ground state of the driver is the uniform superposition at 0.
        let uniform = nalgebra::DVector::from_element(2, std::f64::consts::FRAC_1_SQRT_2);
        let image = &ops.h_init * &uniform;
        assert!(image.amax() < 1e-12);
    }

    #[test]
    fn final_operator_diagonal_matches_polynomial_values() {
        let h = toy_hamiltonian();
        let p = InterpolationProblem::new(h.clone(), Epsilon::parse("0.1").unwrap());
        let ops = build_operators(&p).unwrap();
        for x in 0..8u64 {
            assert_eq!(ops.diagonal[x as usize], h.evaluate(x).unwrap());
            assert_eq!(ops.h_final[(x as usize, x as usize)], h.evaluate(x).unwrap() as f64);
        }
    }

    #[test]
    fn operators_are_symmetric() {
        let p = InterpolationProblem::new(toy_hamiltonian(), Epsilon::parse("0.5").unwrap());
        let ops = build_operators(&p).unwrap();
        assert_eq!(ops.h_init, ops.h_init.transpose());
        assert_eq!(ops.h_final, ops.h_final.transpose());
    }

    #[test]
    fn bad_problems_are_rejected() {
        let mut p = InterpolationProblem::new(one_qubit(), Epsilon::parse("0.1").unwrap());
        p.grid = 1;
        assert!(matches!(p.validate(), Err(AqcError::InvalidGrid { .. })));
        p.grid = 64;
        p.h_init = InitKind::TransverseField { scale: 0.0 };
        assert!(matches!(p.validate(), Err(AqcError::NonPositiveScale { .. })));
        p.h_init = InitKind::Diagonal { entries: vec![0.0; 3] };
        assert!(matches!(p.validate(), Err(AqcError::DiagonalLength { .. })));
    }
}
