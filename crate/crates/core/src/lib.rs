//! Exact pseudo-Boolean energy landscapes for binary equation systems.
//!
//! The pipeline this crate implements:
//!
//! 1. model a problem as a system of polynomial equations over binary
//!    variables (the built-in generator produces integer-factoring systems);
//! 2. compile the system into a Hamiltonian — a weighted sum of squared
//!    equation residuals whose minima are exactly the solutions;
//! 3. reshape the energy landscape without moving the minima, either by
//!    adding penalty terms for deduced relations or by reweighting the
//!    equations;
//! 4. enumerate the spectrum exhaustively and report the figures that govern
//!    annealing-time bounds: minimum gap, spectral width, and their
//!    width²/gap³ ratio.
//!
//! All arithmetic is exact `i64` with overflow detection.

pub mod artifact;
pub mod datasets;
pub mod elm;
pub mod error;
pub mod generate;
pub mod parse;
pub mod poly;
pub mod simplify;
pub mod spectrum;
pub mod system;
pub mod vars;

pub use artifact::{sha256_hex, ArtifactTerm, HamiltonianArtifact, Provenance, ARTIFACT_FORMAT};
pub use elm::{
    deduc_elm, equation_energy_sides, exact_max_energy, format_deductions, max_equation_energy,
    multiplicity_elm, parse_deductions, plan_weights, verify_ground_state_preserved, Deduction,
    EnergyMode, EquationWeight, GroundStateCheck, SchemeKind, WeightScheme,
};
pub use error::CoreError;
pub use generate::{decode_factors, generate_factoring_system};
pub use parse::{format_polynomial, parse_polynomial, scan_identifiers};
pub use poly::{BinaryPolynomial, Monomial, Replacement};
pub use simplify::{apply_simple_deductions, Binding, Deduced, Simplified};
pub use spectrum::{
    compare_spectra, enumerate_spectrum, enumerate_spectrum_naive, spectral_ratio,
    EnumerateOptions, Fraction, Level, LevelPair, Ratio, SpectrumComparison, SpectrumReport,
};
pub use system::{Equation, EquationSystem, Hamiltonian};
pub use vars::{is_identifier, natural_cmp, VarTable, MAX_VARS};
