use std::collections::BTreeSet;
use std::sync::Arc;

use axum::extract::rejection::{PathRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use issuescope_core::analytics::{BinRange, SummaryOptions, TimelineMode};
use issuescope_core::graph::{GraphOptions, LayoutParams};
use issuescope_core::model::{format_timestamp, RepoSnapshot};
use issuescope_core::payload::{graph_payload, histogram_payload, summary_payload, timeline_payload, BinPayload, RepoEntry};
use sha2::{Digest, Sha256};

use crate::catalog::Catalog;
use crate::error::ApiError;
use crate::AppState;

type Params = Result<Query<Vec<(String, String)>>, QueryRejection>;
type RepoPath = Result<Path<(String, String)>, PathRejection>;
type IssuePath = Result<Path<(String, String, String)>, PathRejection>;

/// Query parameters, rejecting names the endpoint does not know.
struct Q(Vec<(String, String)>);

impl Q {
    fn parse(raw: Params, known: &[&str]) -> Result<Q, ApiError> {
        let Query(pairs) = raw.map_err(|e| ApiError::bad_request("invalid_query", e.body_text()))?;
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            return Err(ApiError::bad_request(
                "unknown_parameter",
                format!("unknown query parameter {k:?}; expected one of {}", known.join(", ")),
            ));
        }
        Ok(Q(pairs))
    }

    /// The single value of `key`; repeating it is an error.
    fn one(&self, key: &str) -> Result<Option<&str>, ApiError> {
        let mut values = self.0.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let first = values.next();
        if values.next().is_some() {
            return Err(ApiError::bad_request("invalid_parameter", format!("{key} given more than once")));
        }
        Ok(first)
    }

    fn all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.0.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn flag(&self, key: &str) -> Result<bool, ApiError> {
        match self.one(key)? {
            None | Some("false") | Some("0") => Ok(false),
            Some("true") | Some("1") | Some("") => Ok(true),
            Some(v) => Err(ApiError::bad_request("invalid_parameter", format!("{key} must be true or false, got {v:?}"))),
        }
    }
}

fn path_error(e: PathRejection) -> ApiError {
    ApiError::bad_request("invalid_path", e.body_text())
}

fn catalog(state: &AppState) -> Result<Arc<Catalog>, ApiError> {
    let c = state.catalog();
    match c.unreadable() {
        Some(why) => Err(ApiError::internal("data_dir_unreadable", why.to_string())),
        None => Ok(c),
    }
}

fn snapshot(state: &AppState, owner: &str, name: &str) -> Result<Arc<RepoSnapshot>, ApiError> {
    catalog(state)?
        .get(owner, name)
        .cloned()
        .ok_or_else(|| ApiError::not_found("unknown_repo", format!("no snapshot for {owner}/{name}")))
}

pub async fn repos(State(state): State<Arc<AppState>>) -> Result<Json<Vec<RepoEntry>>, ApiError> {
    Ok(Json(catalog(&state)?.entries()))
}

pub async fn timeline(State(state): State<Arc<AppState>>, path: RepoPath, q: Params) -> Result<Response, ApiError> {
    let Path((owner, name)) = path.map_err(path_error)?;
    let q = Q::parse(q, &["mode"])?;
    let s = snapshot(&state, &owner, &name)?;
    let mode: TimelineMode = match q.one("mode")? {
        None => TimelineMode::default(),
        Some(m) => m.parse().map_err(|e: String| ApiError::bad_request("invalid_mode", e))?,
    };
    Ok(Json(timeline_payload(&s, mode, &state.theme)).into_response())
}

/// Strong validator for a graph: the only inputs that vary per request.
pub fn graph_etag(s: &RepoSnapshot, number: u64, seed: u64) -> String {
    let digest = Sha256::digest(format!("{}|{number}|{seed}", format_timestamp(&s.snapshot_time())));
    let hex: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
    format!("\"{hex}\"")
}

fn matches_etag(headers: &HeaderMap, etag: &str) -> bool {
    headers
        .get_all(header::IF_NONE_MATCH)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(','))
        .map(str::trim)
        .any(|tag| tag == "*" || tag == etag)
}

pub async fn graph(
    State(state): State<Arc<AppState>>,
    path: IssuePath,
    q: Params,
    headers: HeaderMap,
) -> Result<Response, ApiError> {
    let Path((owner, name, number)) = path.map_err(path_error)?;
    let q = Q::parse(q, &["seed"])?;
    let s = snapshot(&state, &owner, &name)?;
    let number: u64 = number
        .parse()
        .map_err(|_| ApiError::bad_request("invalid_path", format!("issue number must be an integer, got {number:?}")))?;
    let seed = match q.one("seed")? {
        None => LayoutParams::default().seed,
        Some(v) => v
            .parse()
            .map_err(|_| ApiError::bad_request("invalid_parameter", format!("seed must be an unsigned integer, got {v:?}")))?,
    };
    if s.issue(number).is_none() {
        return Err(ApiError::not_found("unknown_issue", format!("{owner}/{name} has no issue #{number}")));
    }

    let etag = graph_etag(&s, number, seed);
    let etag_value = HeaderValue::from_str(&etag).expect("hex etag is a valid header");
    if matches_etag(&headers, &etag) {
        return Ok((StatusCode::NOT_MODIFIED, [(header::ETAG, etag_value)]).into_response());
    }

    let theme = state.theme.clone();
    let payload = tokio::task::spawn_blocking(move || {
        let issue = s.issue(number).expect("checked above");
        graph_payload(issue, &s, &theme, GraphOptions::default(), &LayoutParams::with_seed(seed))
    })
    .await
    .map_err(|e| ApiError::internal("layout_failed", e.to_string()))?
    .map_err(|e| ApiError::internal("layout_failed", e.to_string()))?;
    Ok(([(header::ETAG, etag_value), (header::CACHE_CONTROL, HeaderValue::from_static("no-cache"))], Json(payload))
        .into_response())
}

fn summary_options(q: &Q) -> Result<SummaryOptions, ApiError> {
    let mut opts = SummaryOptions { bug_only: q.flag("bugOnly")?, ..Default::default() };
    opts.excluded = q.all("exclude").filter(|p| !p.is_empty()).map(str::to_string).collect::<BTreeSet<_>>();
    if let Some(bin) = q.one("bin")?.filter(|b| !b.is_empty()) {
        let range: BinRange = bin.parse().map_err(|e: issuescope_core::analytics::BinRangeError| {
            ApiError::bad_request("malformed_bin", e.to_string())
        })?;
        opts.bin_filter = Some(range);
    }
    if let Some(top) = q.one("top")? {
        opts.top_n = match top.parse::<usize>() {
            Ok(n) if n >= 1 => n,
            _ => return Err(ApiError::bad_request("invalid_parameter", format!("top must be a positive integer, got {top:?}"))),
        };
    }
    Ok(opts)
}

pub async fn summary(State(state): State<Arc<AppState>>, path: RepoPath, q: Params) -> Result<Response, ApiError> {
    let Path((owner, name)) = path.map_err(path_error)?;
    let q = Q::parse(q, &["bugOnly", "exclude", "bin", "top"])?;
    let opts = summary_options(&q)?;
    let s = snapshot(&state, &owner, &name)?;
    Ok(Json(summary_payload(&s, &opts, &state.theme)).into_response())
}

pub async fn histogram(State(state): State<Arc<AppState>>, path: RepoPath, q: Params) -> Result<Json<Vec<BinPayload>>, ApiError> {
    let Path((owner, name)) = path.map_err(path_error)?;
    let q = Q::parse(q, &["bugOnly"])?;
    let bug_only = q.flag("bugOnly")?;
    let s = snapshot(&state, &owner, &name)?;
    Ok(Json(histogram_payload(&s, bug_only)))
}

pub async fn not_found() -> ApiError {
    ApiError::not_found("not_found", "no such route")
}

pub async fn method_not_allowed() -> ApiError {
    ApiError::new(StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed", "the API is read-only; use GET")
}
