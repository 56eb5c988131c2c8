//! Read-only JSON API over a directory of snapshots.
//!
//! Snapshots are loaded once into an immutable [`Catalog`] held behind an
//! atomic pointer. Handlers take a cheap snapshot of that pointer, so the read
//! path has no locks, and [`AppState::reload`] swaps in a fresh catalog
//! without disturbing requests already in flight.
//!
//! | Route | Body |
//! |---|---|
//! | `GET /api/repos` | `[{owner, name, snapshot_time}]` |
//! | `GET /api/repos/{owner}/{name}/timeline?mode=status\|labels` | `{bars, legend}` |
//! | `GET /api/repos/{owner}/{name}/issues/{number}/graph?seed=S` | `{nodes, edges, meta}` |
//! | `GET /api/repos/{owner}/{name}/files/summary?bugOnly=&exclude=&bin=&top=` | `{wedges, total}` |
//! | `GET /api/repos/{owner}/{name}/files/histogram?bugOnly=` | `[{lower, upper, token, file_count}]` |
//!
//! Errors are `{code, message}` JSON. The committed `openapi.json` and
//! `schemas/` describe every body.

mod catalog;
mod error;
mod routes;

use std::future::Future;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use arc_swap::ArcSwap;
use axum::http::{HeaderValue, Method};
use axum::routing::get;
use axum::Router;
use issuescope_core::theme::Theme;
use thiserror::Error;
use tokio::net::TcpListener;
use tower_http::catch_panic::CatchPanicLayer;
use tower_http::cors::{AllowOrigin, CorsLayer};
use tower_http::services::ServeDir;
use tracing::info;

pub use catalog::Catalog;
pub use error::ApiError;
pub use routes::graph_etag;

pub const DATA_ENV: &str = "ISSUESCOPE_DATA";
pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub data_dir: PathBuf,
    pub bind_address: String,
    pub cors_allowed_origin: String,
    /// Built web UI assets, served for every non-API path when set.
    pub static_dir: Option<PathBuf>,
}

impl ServerConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        ServerConfig {
            data_dir: data_dir.into(),
            bind_address: DEFAULT_BIND.into(),
            cors_allowed_origin: "*".into(),
            static_dir: None,
        }
    }

    /// `$ISSUESCOPE_DATA`, when set and non-empty, replaces `data_dir`.
    pub fn with_env_override(mut self) -> Self {
        if let Some(dir) = std::env::var_os(DATA_ENV).filter(|d| !d.is_empty()) {
            self.data_dir = dir.into();
        }
        self
    }
}

pub struct AppState {
    data_dir: PathBuf,
    catalog: ArcSwap<Catalog>,
    pub theme: Arc<Theme>,
}

impl AppState {
    pub fn load(data_dir: &Path, theme: Theme) -> Arc<AppState> {
        Arc::new(AppState {
            data_dir: data_dir.to_path_buf(),
            catalog: ArcSwap::from_pointee(Catalog::scan(data_dir)),
            theme: Arc::new(theme),
        })
    }

    pub fn from_catalog(catalog: Catalog, theme: Theme) -> Arc<AppState> {
        Arc::new(AppState { data_dir: PathBuf::new(), catalog: ArcSwap::from_pointee(catalog), theme: Arc::new(theme) })
    }

    pub fn catalog(&self) -> Arc<Catalog> {
        self.catalog.load_full()
    }

    /// Rescans the data directory and swaps the result in atomically.
    pub fn reload(&self) -> usize {
        let fresh = Catalog::scan(&self.data_dir);
        let n = fresh.len();
        self.catalog.store(Arc::new(fresh));
        info!(repos = n, "catalog reloaded");
        n
    }
}

fn cors(origin: &str) -> CorsLayer {
    let allow = if origin == "*" {
        AllowOrigin::any()
    } else {
        AllowOrigin::exact(HeaderValue::from_str(origin).unwrap_or_else(|_| HeaderValue::from_static("null")))
    };
    CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::HEAD, Method::OPTIONS])
        .allow_headers([axum::http::header::IF_NONE_MATCH])
        .expose_headers([axum::http::header::ETAG])
}

fn panic_response(_: Box<dyn std::any::Any + Send + 'static>) -> axum::response::Response {
    use axum::response::IntoResponse;
    ApiError::internal("internal", "request handler failed").into_response()
}

pub fn router(state: Arc<AppState>, cors_origin: &str, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/repos", get(routes::repos))
        .route("/api/repos/{owner}/{name}/timeline", get(routes::timeline))
        .route("/api/repos/{owner}/{name}/issues/{number}/graph", get(routes::graph))
        .route("/api/repos/{owner}/{name}/files/summary", get(routes::summary))
        .route("/api/repos/{owner}/{name}/files/histogram", get(routes::histogram))
        .route("/api", get(routes::not_found))
        .route("/api/{*rest}", get(routes::not_found))
        .method_not_allowed_fallback(routes::method_not_allowed)
        .with_state(state);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(routes::not_found),
    };
    app.layer(CatchPanicLayer::custom(panic_response)).layer(cors(cors_origin))
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("data directory {0} does not exist")]
    MissingDataDir(PathBuf),
    #[error("address {0} is already in use")]
    AddrInUse(String),
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: String, source: std::io::Error },
    #[error("server failed: {0}")]
    Io(#[from] std::io::Error),
}

/// A bound listener plus the state it will serve.
pub struct Server {
    listener: TcpListener,
    state: Arc<AppState>,
    router: Router,
}

impl Server {
    pub async fn bind(cfg: &ServerConfig, theme: Theme) -> Result<Server, ServeError> {
        if !cfg.data_dir.is_dir() {
            return Err(ServeError::MissingDataDir(cfg.data_dir.clone()));
        }
        let listener = TcpListener::bind(&cfg.bind_address).await.map_err(|source| {
            if source.kind() == std::io::ErrorKind::AddrInUse {
                ServeError::AddrInUse(cfg.bind_address.clone())
            } else {
                ServeError::Bind { addr: cfg.bind_address.clone(), source }
            }
        })?;
        let state = AppState::load(&cfg.data_dir, theme);
        let router = router(state.clone(), &cfg.cors_allowed_origin, cfg.static_dir.as_deref());
        Ok(Server { listener, state, router })
    }

    pub fn local_addr(&self) -> std::io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    pub fn state(&self) -> Arc<AppState> {
        self.state.clone()
    }

    /// Serves until `shutdown` resolves, reloading the catalog on SIGHUP.
    pub async fn run(self, shutdown: impl Future<Output = ()> + Send + 'static) -> Result<(), ServeError> {
        let reloader = tokio::spawn(reload_on_hangup(self.state.clone()));
        let out = axum::serve(self.listener, self.router).with_graceful_shutdown(shutdown).await;
        reloader.abort();
        Ok(out?)
    }
}

#[cfg(unix)]
async fn reload_on_hangup(state: Arc<AppState>) {
    use tokio::signal::unix::{signal, SignalKind};
    let Ok(mut hup) = signal(SignalKind::hangup()) else { return };
    while hup.recv().await.is_some() {
        let s = state.clone();
        let _ = tokio::task::spawn_blocking(move || s.reload()).await;
    }
}

#[cfg(not(unix))]
async fn reload_on_hangup(_: Arc<AppState>) {}
