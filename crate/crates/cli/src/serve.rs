use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use issuescope_core::theme::Theme;
use issuescope_server::{ServeError, Server, ServerConfig, DEFAULT_BIND};
use serde::Serialize;

use crate::{data, emit, exit, CliError, OutputFormat};

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Directory of snapshot directories [default: $ISSUESCOPE_DATA, else ./data]
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_BIND)]
    pub bind: String,
    /// Allowed CORS origin, or * for any.
    #[arg(long, default_value = "*")]
    pub cors_origin: String,
    /// Built web UI to serve for non-API paths.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    /// Colour theme TOML file.
    #[arg(long)]
    pub theme: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct Listening {
    url: String,
    repos: usize,
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}

pub(crate) fn run(a: &ServeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let theme = match &a.theme {
        Some(p) => Theme::load(p).map_err(|e| CliError::new(exit::USAGE, format!("theme {}: {e}", p.display())))?,
        None => Theme::default(),
    };
    let cfg = ServerConfig {
        data_dir: a.data.clone().unwrap_or_else(data::default_data_dir),
        bind_address: a.bind.clone(),
        cors_allowed_origin: a.cors_origin.clone(),
        static_dir: a.static_dir.clone(),
    };
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::new(exit::DATA, format!("cannot start runtime: {e}")))?;
    rt.block_on(async {
        let server = Server::bind(&cfg, theme).await.map_err(|e| match e {
            ServeError::AddrInUse(_) => CliError::new(exit::PORT_IN_USE, e.to_string()),
            ServeError::MissingDataDir(_) => CliError::new(exit::DATA, e.to_string()),
            other => CliError::new(exit::USAGE, other.to_string()),
        })?;
        let addr = server.local_addr().map_err(|e| CliError::new(exit::DATA, e.to_string()))?;
        let report = Listening { url: format!("http://{addr}"), repos: server.state().catalog().len() };
        let line = match a.format {
            OutputFormat::Json => format!("{}\n", serde_json::to_string(&report).expect("report serializes")),
            OutputFormat::Text => format!("listening on {} ({} repositories)\n", report.url, report.repos),
        };
        emit(out, line.as_bytes())?;
        server.run(shutdown_signal()).await.map_err(|e| CliError::new(exit::DATA, e.to_string()))
    })
}
