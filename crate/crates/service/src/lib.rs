//! The elmkit HTTP service: every pipeline operation behind a JSON
//! endpoint, so one long-lived process can serve many clients (and so
//! heavy enumerations run where the cores are, not in each caller).
//!
//! Endpoints, all under `/api/v1` except the health probe:
//!
//! | route                | operation                                    |
//! |----------------------|----------------------------------------------|
//! | `GET /health`        | liveness + version                           |
//! | `POST /api/v1/generate` | factoring system construction             |
//! | `POST /api/v1/elm`   | landscape transform + preservation check     |
//! | `POST /api/v1/spectrum` | exhaustive landscape characterization     |
//! | `POST /api/v1/compare`  | two landscapes side by side               |
//! | `POST /api/v1/bound` | adiabatic runtime-bound report               |
//!
//! Errors are JSON `{kind, message}` with `kind` one of `usage`,
//! `verification`, `cap`, `internal`.

use std::net::SocketAddr;

use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;

mod error;
mod handlers;

pub use error::ApiError;

/// Shared configuration for all handlers.
#[derive(Debug, Clone, Default)]
pub struct ServiceState {
    /// Worker-thread default for enumerations when requests don't say;
    /// `None` uses each machine's available parallelism.
    pub default_workers: Option<usize>,
}

/// The full service router.
pub fn router(state: ServiceState) -> Router {
    Router::new()
        .route("/health", get(handlers::health))
        .route("/api/v1/generate", post(handlers::generate))
        .route("/api/v1/elm", post(handlers::elm))
        .route("/api/v1/spectrum", post(handlers::spectrum))
        .route("/api/v1/compare", post(handlers::compare))
        .route("/api/v1/bound", post(handlers::bound))
        .with_state(state)
}

/// Serve on an OS-assigned local port; returns the bound address and the
/// server task. Used by the CLI (and tests) to run everything in-process.
pub async fn spawn_ephemeral(
    state: ServiceState,
) -> std::io::Result<(SocketAddr, tokio::task::JoinHandle<()>)> {
    let listener = TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    let app = router(state);
    let handle = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, app).await {
            eprintln!("server error: {e}");
        }
    });
    Ok((addr, handle))
}

/// Serve on a fixed address until the task is dropped or ctrl-c arrives.
pub async fn serve(addr: SocketAddr, state: ServiceState) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    let app = router(state);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
