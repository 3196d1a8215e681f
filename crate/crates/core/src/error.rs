//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("integer overflow in exact coefficient arithmetic")]
    Overflow,

    #[error("invalid variable identifier {name:?}")]
    InvalidIdentifier { name: String },

    #[error("instance has {count} variables, more than the supported {max}")]
    TooManyVariables { count: usize, max: usize },

    #[error("variable list is not in canonical natural order")]
    UnsortedVariables,

    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("line {line}: {source}")]
    ParseLine {
        line: usize,
        #[source]
        source: Box<CoreError>,
    },

    #[error("unknown variable {name:?}")]
    UnknownVariable { name: String },

    #[error("assignment does not cover variable {name:?} (index {index})")]
    UnboundVariable { index: u32, name: String },

    #[error("{count} weights supplied for {expected} equations")]
    WeightCountMismatch { count: usize, expected: usize },

    #[error("weight {value} is not positive; every equation weight must be >= 1")]
    NonPositiveWeight { value: i64 },

    #[error("deduction weight {value} is not positive")]
    NonPositiveLambda { value: i64 },

    #[error("cannot plan weights for an empty equation system")]
    EmptySystem,

    #[error(
        "equation has maximum energy 0 (both sides empty); it cannot be weighted by energy ratio"
    )]
    ZeroMaxEnergy { equation: usize },

    #[error(
        "variable {name:?} appears on both sides of the equation; the two-candidate \
         difference procedure is not a true maximum there — use exact_max_energy \
         (exhaustive) instead"
    )]
    SharedVariable { name: String },

    #[error("{n} variables exceed the enumeration cap of {cap}; raise the cap to proceed")]
    CapExceeded { n: u32, cap: u32 },

    #[error("the two Hamiltonians are over different variable universes")]
    UniverseMismatch,

    #[error("contradiction while simplifying: {detail}")]
    Contradiction { detail: String },

    #[error("N = {n} must be odd and at least 9")]
    InvalidModulus { n: u64 },

    #[error(
        "bit lengths p_bits = {p_bits}, q_bits = {q_bits} are inconsistent with N = {n} \
         ({n} has {n_bits} bits; p_bits + q_bits must be {n_bits} or {}, and both at least 2)",
        n_bits + 1
    )]
    InconsistentBitLength {
        n: u64,
        n_bits: u32,
        p_bits: u32,
        q_bits: u32,
    },

    #[error("spectral ratio is undefined when the energy gap is zero")]
    ZeroGap,

    #[error("invalid Hamiltonian artifact: {detail}")]
    InvalidArtifact { detail: String },

    #[error("spectrum report does not correspond to this Hamiltonian: {detail}")]
    SpectrumMismatch { detail: String },
}

impl CoreError {
    pub(crate) fn at_line(self, line: usize) -> CoreError {
        CoreError::ParseLine {
            line,
            source: Box::new(self),
        }
    }
}
