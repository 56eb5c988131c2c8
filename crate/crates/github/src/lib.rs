//! Harvests issues and commits from the GitHub REST API into
//! [`RepoSnapshot`](issuescope_core::model::RepoSnapshot)s.
//!
//! All calls block. Internally, per-item detail requests run on a bounded
//! pool of `max_in_flight` threads. The [`Transport`] seam lets tests replay
//! recorded responses with no network.

mod client;
pub mod fixture;
mod pool;
pub mod rate;
pub mod transport;

use issuescope_core::model::{format_timestamp, Timestamp};
use thiserror::Error;

pub use client::{fetch_commits, fetch_issues, fetch_snapshot, GitHubClient};
pub use fixture::{CountingTransport, FixtureTransport, Recorded};
pub use rate::{respect_rate_limit, Clock, Decision, ManualClock, RateLimitPolicy, RateLimitState, SystemClock};
pub use transport::{HttpTransport, Request, Response, Transport, TransportError};

pub const DEFAULT_API_BASE_URL: &str = "https://api.github.com";
pub const TOKEN_ENV: &str = "GITHUB_TOKEN";
/// Page size used for every listing request (the API maximum).
pub const PER_PAGE: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchConfig {
    pub max_issues: usize,
    /// Falls back to `$GITHUB_TOKEN` when unset.
    pub auth_token: Option<String>,
    pub max_in_flight: usize,
    pub retry_limit: u32,
    pub api_base_url: String,
    pub rate_limit_policy: RateLimitPolicy,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            max_issues: 100,
            auth_token: None,
            max_in_flight: 4,
            retry_limit: 3,
            api_base_url: DEFAULT_API_BASE_URL.into(),
            rate_limit_policy: RateLimitPolicy::Wait,
        }
    }
}

impl FetchConfig {
    pub fn check(&self) -> Result<(), FetchError> {
        if self.max_issues == 0 {
            return Err(FetchError::InvalidConfig("max_issues must be at least 1".into()));
        }
        if self.max_in_flight == 0 {
            return Err(FetchError::InvalidConfig("max_in_flight must be at least 1".into()));
        }
        if self.auth_token.as_deref().is_some_and(|t| t.trim().is_empty()) {
            return Err(FetchError::Auth("auth token is empty".into()));
        }
        Ok(())
    }

    /// The explicit token, else a non-empty `$GITHUB_TOKEN`, else anonymous.
    pub fn resolved_token(&self) -> Option<String> {
        self.auth_token
            .clone()
            .or_else(|| std::env::var(TOKEN_ENV).ok().filter(|t| !t.trim().is_empty()))
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum FetchError {
    #[error("NetworkError: {0}")]
    Network(String),
    #[error("AuthError: {0}")]
    Auth(String),
    #[error("RateLimited: budget exhausted until {}", format_timestamp(.0))]
    RateLimited(Timestamp),
    #[error("NotFound: {0}")]
    NotFound(String),
    #[error("DecodeError: {0}")]
    Decode(String),
    #[error("DetailError: {id}: {source}")]
    Detail { id: String, source: Box<FetchError> },
    #[error("UnexpectedStatus: HTTP {status} from {path}")]
    UnexpectedStatus { status: u16, path: String },
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

impl FetchError {
    pub fn name(&self) -> &'static str {
        match self {
            FetchError::Network(_) => "NetworkError",
            FetchError::Auth(_) => "AuthError",
            FetchError::RateLimited(_) => "RateLimited",
            FetchError::NotFound(_) => "NotFound",
            FetchError::Decode(_) => "DecodeError",
            FetchError::Detail { .. } => "DetailError",
            FetchError::UnexpectedStatus { .. } => "UnexpectedStatus",
            FetchError::InvalidConfig(_) => "InvalidConfig",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = FetchConfig::default();
        assert_eq!(cfg.max_issues, 100);
        assert_eq!(cfg.max_in_flight, 4);
        assert_eq!(cfg.retry_limit, 3);
        assert!(cfg.check().is_ok());
    }

    #[test]
    fn rejects_zero_limits_and_blank_tokens() {
        let zero = FetchConfig { max_issues: 0, ..Default::default() };
        assert_eq!(zero.check().unwrap_err().name(), "InvalidConfig");
        let pool = FetchConfig { max_in_flight: 0, ..Default::default() };
        assert!(pool.check().is_err());
        let blank = FetchConfig { auth_token: Some("  ".into()), ..Default::default() };
        assert_eq!(blank.check().unwrap_err().name(), "AuthError");
    }

    #[test]
    fn error_display_leads_with_name() {
        let e = FetchError::Network("connection refused".into());
        assert_eq!(e.to_string(), "NetworkError: connection refused");
        let d = FetchError::Detail { id: "abc".into(), source: Box::new(FetchError::NotFound("x".into())) };
        assert!(d.to_string().starts_with("DetailError: abc"));
    }
}
