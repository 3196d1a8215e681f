//! Request and response types of the elmkit HTTP service, shared by the
//! server and the client so the two cannot drift apart.
//!
//! All endpoints live under `/api/v1` and speak JSON. Domain payloads
//! (spectrum reports, weight schemes, Hamiltonian artifacts, bound
//! reports) are the serialization of the library types themselves; this
//! crate only adds the envelopes around them.

use serde::{Deserialize, Serialize};

pub use elmkit_aqc::BoundReport;
pub use elmkit_core::{
    HamiltonianArtifact, SpectrumComparison, SpectrumReport, WeightScheme,
};

/// Where errors came from, mirrored in the process exit codes of the CLI:
/// `usage` → 1, `verification` → 2, `cap` → 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// The request itself is wrong: parse errors, bad identifiers,
    /// inconsistent parameters.
    Usage,
    /// Inputs are well-formed but inconsistent with each other or with a
    /// claimed property (contradictions, mismatched spectra).
    Verification,
    /// A resource limit refused the work (variable caps, overflow).
    Cap,
    /// A bug on the server side.
    Internal,
}

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorResponse {
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub version: String,
}

/// `POST /api/v1/generate` — build a factoring system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub n: u64,
    pub p_bits: u32,
    pub q_bits: u32,
    /// Run the elementary deduction pass after generating (the default).
    #[serde(default = "default_true")]
    pub simplify: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerateResponse {
    /// The system in equation-file text form.
    pub system: String,
    pub variables: Vec<String>,
    pub equations: usize,
    /// Human-readable record of each simplification applied.
    pub deductions: Vec<String>,
}

/// A Hamiltonian given either as a saved artifact or as equation text
/// (optionally weighted), wherever one is accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianSource {
    Artifact(HamiltonianArtifact),
    System {
        text: String,
        #[serde(default)]
        weights: Option<Vec<i64>>,
    },
}

/// Which landscape transform `POST /api/v1/elm` should apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformSpec {
    /// Inject penalty terms from a deduction file.
    Deductions { text: String },
    /// Reweight the equations from per-equation maximum energies.
    Weights {
        scheme: elmkit_core::SchemeKind,
        #[serde(default)]
        mode: elmkit_core::EnergyMode,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElmRequest {
    /// Equation-file text of the system to transform.
    pub system: String,
    pub transform: TransformSpec,
    /// Check ground-state preservation against the uniform baseline
    /// (skipped automatically above the exhaustive cap).
    #[serde(default = "default_true")]
    pub verify: bool,
}

/// Outcome of the ground-state preservation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationVerdict {
    /// False when the system was too large to check exhaustively.
    pub checked: bool,
    pub preserved: bool,
    /// A state that is a ground state of exactly one side, as a bitstring
    /// over the system's variables.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElmResponse {
    pub artifact: HamiltonianArtifact,
    /// Present for weight transforms.
    pub scheme: Option<WeightScheme>,
    /// Present for deduction transforms: one description per penalty.
    pub deductions: Option<Vec<String>>,
    pub preservation: PreservationVerdict,
}

/// `POST /api/v1/spectrum` — exhaustively characterize a landscape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRequest {
    pub source: HamiltonianSource,
    #[serde(default)]
    pub workers: Option<usize>,
    /// Refuse instances above this variable count (default 28).
    #[serde(default)]
    pub max_vars: Option<u32>,
    /// Keep at most this many ground states in the listing (default 64).
    #[serde(default)]
    pub ground_state_cap: Option<usize>,
}

/// `POST /api/v1/compare` — two landscapes side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRequest {
    pub a: HamiltonianSource,
    pub b: HamiltonianSource,
    #[serde(default)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareResponse {
    pub a: SpectrumReport,
    pub b: SpectrumReport,
    pub comparison: SpectrumComparison,
}

/// The driver Hamiltonian for `POST /api/v1/bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitChoice {
    #[default]
    Transverse,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRequest {
    pub source: HamiltonianSource,
    /// Error budget as a decimal literal, e.g. `"0.1"`; kept exact.
    pub epsilon: String,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub hinit: InitChoice,
    #[serde(default = "default_scale")]
    pub tf_scale: f64,
}

fn default_grid() -> usize {
    64
}

fn default_scale() -> f64 {
    1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requests_round_trip_and_defaults_fill_in() {
        let req: GenerateRequest =
            serde_json::from_str(r#"{"n": 841, "p_bits": 5, "q_bits": 5}"#).unwrap();
        assert!(req.simplify);

        let req: BoundRequest = serde_json::from_str(
            r#"{"source": {"system": {"text": "x1 = 0\n"}}, "epsilon": "0.1"}"#,
        )
        .unwrap();
        assert_eq!(req.grid, 64);
        assert_eq!(req.hinit, InitChoice::Transverse);
        assert_eq!(req.tf_scale, 1.0);

        let spec: ElmRequest = serde_json::from_str(
            r#"{"system": "p1 + q1 = 1\n", "transform": {"weights": {"scheme": "ceil_ratio"}}}"#,
        )
        .unwrap();
        assert!(spec.verify);
        match spec.transform {
            TransformSpec::Weights { scheme, mode } => {
                assert_eq!(scheme, elmkit_core::SchemeKind::CeilRatio);
                assert_eq!(mode, elmkit_core::EnergyMode::SideMax);
            }
            other => panic!("unexpected transform {other:?}"),
        }
    }

    #[test]
    fn error_kinds_use_snake_case_tags() {
        let err = ErrorResponse {
            kind: ErrorKind::Verification,
            message: "ground state moved".into(),
        };
        let json = serde_json::to_string(&err).unwrap();
        assert!(json.contains(r#""kind":"verification""#));
        let back: ErrorResponse = serde_json::from_str(&json).unwrap();
        assert_eq!(back, err);
    }
}
