//! Typed client for the elmkit HTTP service.
//!
//! One method per endpoint; request and response types come from
//! [`elmkit_api`]. Errors split into transport failures and structured
//! rejections from the service, so callers can branch on
//! [`ErrorKind`](elmkit_api::ErrorKind) without parsing messages.

use elmkit_api::{
    BoundReport, BoundRequest, CompareRequest, CompareResponse, ElmRequest, ElmResponse,
    ErrorKind, ErrorResponse, GenerateRequest, GenerateResponse, HealthResponse, SpectrumReport,
    SpectrumRequest,
};
use serde::{de::DeserializeOwned, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    /// The request never produced a response: connection refused, timeout,
    /// or a body that did not decode.
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),
    /// The service answered with a non-2xx status and a structured body.
    #[error("{status}: {}", error.message)]
    Api { status: u16, error: ErrorResponse },
}

impl ClientError {
    /// The service-side error category, when there is one.
    pub fn kind(&self) -> Option<ErrorKind> {
        match self {
            ClientError::Api { error, .. } => Some(error.kind),
            ClientError::Transport(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ElmkitClient {
    base: String,
    http: reqwest::Client,
}

impl ElmkitClient {
    /// `base` is the service root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        ElmkitClient {
            base: base.into().trim_end_matches('/').to_string(),
            http: reqwest::Client::new(),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub async fn health(&self) -> Result<HealthResponse, ClientError> {
        let res = self.http.get(format!("{}/health", self.base)).send().await?;
        decode(res).await
    }

    pub async fn generate(&self, req: &GenerateRequest) -> Result<GenerateResponse, ClientError> {
        self.post("generate", req).await
    }

    pub async fn elm(&self, req: &ElmRequest) -> Result<ElmResponse, ClientError> {
        self.post("elm", req).await
    }

    pub async fn spectrum(&self, req: &SpectrumRequest) -> Result<SpectrumReport, ClientError> {
        self.post("spectrum", req).await
    }

    pub async fn compare(&self, req: &CompareRequest) -> Result<CompareResponse, ClientError> {
        self.post("compare", req).await
    }

    pub async fn bound(&self, req: &BoundRequest) -> Result<BoundReport, ClientError> {
        self.post("bound", req).await
    }

    async fn post<Req: Serialize, Res: DeserializeOwned>(
        &self,
        endpoint: &str,
        req: &Req,
    ) -> Result<Res, ClientError> {
        let res = self
            .http
            .post(format!("{}/api/v1/{endpoint}", self.base))
            .json(req)
            .send()
            .await?;
        decode(res).await
    }
}

async fn decode<Res: DeserializeOwned>(res: reqwest::Response) -> Result<Res, ClientError> {
    let status = res.status();
    if status.is_success() {
        return Ok(res.json().await?);
    }
    let text = res.text().await.unwrap_or_default();
    // Anything non-JSON here did not come from the service's error path.
    let error = serde_json::from_str(&text).unwrap_or_else(|_| ErrorResponse {
        kind: ErrorKind::Internal,
        message: text,
    });
    Err(ClientError::Api {
        status: status.as_u16(),
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_url_is_normalized() {
        let client = ElmkitClient::new("http://localhost:8080/");
        assert_eq!(client.base(), "http://localhost:8080");
    }
}
