use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use elmkit_api::{ErrorKind, ErrorResponse};
use elmkit_aqc::AqcError;
use elmkit_core::CoreError;

/// An error ready to leave the service: HTTP status plus the JSON body.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorResponse,
}

impl ApiError {
    pub fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorResponse {
                kind: ErrorKind::Internal,
                message: message.into(),
            },
        }
    }
}

fn kind_of_core(e: &CoreError) -> ErrorKind {
    match e {
        CoreError::CapExceeded { .. } | CoreError::TooManyVariables { .. } | CoreError::Overflow => {
            ErrorKind::Cap
        }
        CoreError::Contradiction { .. }
        | CoreError::SpectrumMismatch { .. }
        | CoreError::UniverseMismatch => ErrorKind::Verification,
        _ => ErrorKind::Usage,
    }
}

fn status_of(kind: ErrorKind) -> StatusCode {
    match kind {
        ErrorKind::Usage => StatusCode::BAD_REQUEST,
        ErrorKind::Verification | ErrorKind::Cap => StatusCode::UNPROCESSABLE_ENTITY,
        ErrorKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let kind = kind_of_core(&e);
        ApiError {
            status: status_of(kind),
            body: ErrorResponse {
                kind,
                message: e.to_string(),
            },
        }
    }
}

impl From<AqcError> for ApiError {
    fn from(e: AqcError) -> Self {
        match e {
            AqcError::Core(inner) => inner.into(),
            other => ApiError {
                status: StatusCode::BAD_REQUEST,
                body: ErrorResponse {
                    kind: ErrorKind::Usage,
                    message: other.to_string(),
                },
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
