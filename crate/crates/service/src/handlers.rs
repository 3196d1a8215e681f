use axum::extract::State;
use axum::Json;
use elmkit_api::{
    BoundRequest, CompareRequest, CompareResponse, ElmRequest, ElmResponse, GenerateRequest,
    GenerateResponse, HamiltonianSource, HealthResponse, InitChoice, PreservationVerdict,
    SpectrumRequest, TransformSpec,
};
use elmkit_aqc::{runtime_bounds, Epsilon, InitKind, InterpolationProblem};
use elmkit_core::{
    apply_simple_deductions, compare_spectra, deduc_elm, enumerate_spectrum,
    generate_factoring_system, multiplicity_elm, parse_deductions, plan_weights,
    verify_ground_state_preserved, EnumerateOptions, EquationSystem, Hamiltonian,
    HamiltonianArtifact, SpectrumReport,
};

use crate::error::ApiError;
use crate::ServiceState;

/// Exhaustive preservation checks stop above this many variables.
const VERIFY_CAP: u32 = 24;

/// Run CPU-heavy work off the async executor.
async fn blocking<T, F>(work: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(work)
        .await
        .map_err(|e| ApiError::internal(format!("worker panicked: {e}")))?
}

fn hamiltonian_from(source: &HamiltonianSource) -> Result<Hamiltonian, ApiError> {
    match source {
        HamiltonianSource::Artifact(artifact) => Ok(artifact.hamiltonian()?),
        HamiltonianSource::System { text, weights } => {
            let sys = EquationSystem::parse(text)?;
            Ok(sys.to_hamiltonian(weights.as_deref())?)
        }
    }
}

fn enumerate_options(
    state: &ServiceState,
    workers: Option<usize>,
    max_vars: Option<u32>,
    ground_state_cap: Option<usize>,
) -> EnumerateOptions {
    let defaults = EnumerateOptions::default();
    EnumerateOptions {
        max_vars: max_vars.unwrap_or(defaults.max_vars),
        ground_state_cap: ground_state_cap.unwrap_or(defaults.ground_state_cap),
        workers: workers.or(state.default_workers),
    }
}

pub async fn health() -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

pub async fn generate(
    Json(req): Json<GenerateRequest>,
) -> Result<Json<GenerateResponse>, ApiError> {
    let raw = generate_factoring_system(req.n, req.p_bits, req.q_bits)?;
    let (system, deductions) = if req.simplify {
        let reduced = apply_simple_deductions(&raw)?;
        let shown = reduced.deductions.iter().map(|d| d.to_string()).collect();
        (reduced.system, shown)
    } else {
        (raw, Vec::new())
    };
    Ok(Json(GenerateResponse {
        system: system.to_text(),
        variables: system.table().names().to_vec(),
        equations: system.equations().len(),
        deductions,
    }))
}

pub async fn elm(Json(req): Json<ElmRequest>) -> Result<Json<ElmResponse>, ApiError> {
    blocking(move || {
        let sys = EquationSystem::parse(&req.system)?;
        let baseline = sys.to_hamiltonian(None)?;

        let (transformed, scheme, deductions, chain) = match &req.transform {
            TransformSpec::Deductions { text } => {
                let parsed = parse_deductions(text, sys.table())?;
                let shown: Vec<String> =
                    parsed.iter().map(|d| d.describe(sys.table())).collect();
                let chain: Vec<String> =
                    shown.iter().map(|d| format!("penalty {d}")).collect();
                let h = deduc_elm(&baseline, &parsed)?;
                (h, None, Some(shown), chain)
            }
            TransformSpec::Weights { scheme, mode } => {
                let plan = plan_weights(&sys, *scheme, *mode)?;
                let lambdas: Vec<String> =
                    plan.lambdas().iter().map(|l| l.to_string()).collect();
                let chain = vec![format!(
                    "weights {} {} lambda=({})",
                    plan.kind.label(),
                    plan.mode.label(),
                    lambdas.join(",")
                )];
                let h = multiplicity_elm(&sys, &plan)?;
                (h, Some(plan), None, chain)
            }
        };

        let preservation = if req.verify && sys.table().len() as u32 <= VERIFY_CAP {
            let check = verify_ground_state_preserved(&baseline, &transformed)?;
            PreservationVerdict {
                checked: true,
                preserved: check.preserved,
                witness: check.witness.map(|w| sys.table().bitstring(w)),
            }
        } else {
            PreservationVerdict {
                checked: false,
                preserved: true,
                witness: None,
            }
        };

        let artifact = HamiltonianArtifact::capture(&transformed, &req.system, chain);
        Ok(Json(ElmResponse {
            artifact,
            scheme,
            deductions,
            preservation,
        }))
    })
    .await
}

pub async fn spectrum(
    State(state): State<ServiceState>,
    Json(req): Json<SpectrumRequest>,
) -> Result<Json<SpectrumReport>, ApiError> {
    let options = enumerate_options(&state, req.workers, req.max_vars, req.ground_state_cap);
    blocking(move || {
        let h = hamiltonian_from(&req.source)?;
        Ok(Json(enumerate_spectrum(&h, &options)?))
    })
    .await
}

pub async fn compare(
    State(state): State<ServiceState>,
    Json(req): Json<CompareRequest>,
) -> Result<Json<CompareResponse>, ApiError> {
    let options = enumerate_options(&state, req.workers, None, None);
    blocking(move || {
        let a = enumerate_spectrum(&hamiltonian_from(&req.a)?, &options)?;
        let b = enumerate_spectrum(&hamiltonian_from(&req.b)?, &options)?;
        let comparison = compare_spectra(&a, &b)?;
        Ok(Json(CompareResponse { a, b, comparison }))
    })
    .await
}

pub async fn bound(
    State(state): State<ServiceState>,
    Json(req): Json<BoundRequest>,
) -> Result<Json<elmkit_api::BoundReport>, ApiError> {
    let epsilon = Epsilon::parse(&req.epsilon).map_err(ApiError::from)?;
    blocking(move || {
        let h = hamiltonian_from(&req.source)?;
        let mut problem = InterpolationProblem::new(h.clone(), epsilon);
        problem.grid = req.grid;
        problem.h_init = match req.hinit {
            InitChoice::Transverse => InitKind::TransverseField {
                scale: req.tf_scale,
            },
            InitChoice::None => InitKind::Zero,
        };
        // The dense cap is far below the enumeration cap, so the exact
        // spectrum is always affordable here.
        let options = EnumerateOptions {
            max_vars: elmkit_aqc::DENSE_CAP,
            workers: state.default_workers,
            ..EnumerateOptions::default()
        };
        let spectrum = enumerate_spectrum(&h, &options)?;
        Ok(Json(runtime_bounds(&problem, &spectrum)?))
    })
    .await
}
