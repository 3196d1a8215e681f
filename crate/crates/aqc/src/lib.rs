//! Adiabatic runtime-bound analysis for the Hamiltonians produced by
//! `elmkit-core`.
//!
//! The annealing interpolation `H(t) = (1 − t/T)·H_init + (t/T)·H_final`
//! runs from a driver with a known ground state to the diagonal problem
//! Hamiltonian. How long `T` must be is governed by the smallest spectral
//! gap along the way; this crate materializes both operators densely for
//! desk-scale instances (up to [`DENSE_CAP`] qubits), scans the
//! interpolation for its minimum gap, and evaluates the runtime bounds —
//! the norm-based tight form and the classical `width²/(ε·gap³)` loose
//! form — side by side.
//!
//! Everything classical stays exact: the final operator's diagonal is
//! integer, ε is the exact decimal the caller wrote, and the loose bound
//! is integer arithmetic end to end. Only eigensolves are floating point.

mod bounds;
mod error;
mod gap;
mod problem;

pub use bounds::{runtime_bounds, BoundReport, WeylCheck};
pub use error::AqcError;
pub use gap::{min_interpolated_gap, GapScan};
pub use problem::{build_operators, Epsilon, InitKind, InterpolationProblem, Operators, DENSE_CAP};
