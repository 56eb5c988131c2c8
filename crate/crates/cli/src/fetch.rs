use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use issuescope_core::model::{format_timestamp, RepoRef};
use issuescope_core::store::save_snapshot_atomic;
use issuescope_github::{FetchConfig, GitHubClient, RateLimitPolicy, DEFAULT_API_BASE_URL};
use serde::Serialize;
use tracing::info;

use crate::{data, emit, exit, json_line, CliError, OutputFormat};

#[derive(Debug, Args)]
pub struct FetchArgs {
    /// OWNER/NAME
    #[arg(long)]
    pub repo: String,
    /// Most recent issues to keep (pull requests are skipped).
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_issues: u64,
    /// Snapshot directory [default: DATA/OWNER-NAME]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_API_BASE_URL)]
    pub api_url: String,
    /// Concurrent detail requests.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_in_flight: u64,
    /// Retries per request on network errors and 5xx responses.
    #[arg(long, default_value_t = 3)]
    pub retries: u32,
    /// Fail instead of sleeping when the rate limit is exhausted.
    #[arg(long)]
    pub fail_on_rate_limit: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

#[derive(Serialize)]
struct Fetched {
    repo: String,
    issues: usize,
    commits: usize,
    snapshot_time: String,
    out: String,
}

pub(crate) fn run(a: &FetchArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<(), CliError> {
    let repo: RepoRef = a.repo.parse().map_err(|e| CliError::new(exit::USAGE, format!("--repo: {e}")))?;
    let dir = a
        .out
        .clone()
        .unwrap_or_else(|| data::default_data_dir().join(format!("{}-{}", repo.owner(), repo.name())));
    let cfg = FetchConfig {
        max_issues: a.max_issues as usize,
        max_in_flight: a.max_in_flight as usize,
        retry_limit: a.retries,
        api_base_url: a.api_url.clone(),
        rate_limit_policy: if a.fail_on_rate_limit { RateLimitPolicy::Fail } else { RateLimitPolicy::Wait },
        ..FetchConfig::default()
    };
    let fetch_err = |e: issuescope_github::FetchError| CliError::new(exit::FETCH, e.to_string());
    let client = GitHubClient::connect(cfg).map_err(fetch_err)?;
    info!(%repo, "fetching");
    let snap = client.fetch_snapshot(&repo).map_err(fetch_err)?;
    save_snapshot_atomic(&snap, &dir)
        .map_err(|e| CliError::new(exit::DATA, format!("cannot write snapshot to {}: {e}", dir.display())))?;
    let report = Fetched {
        repo: repo.to_string(),
        issues: snap.issues().len(),
        commits: snap.commits().len(),
        snapshot_time: format_timestamp(&snap.snapshot_time()),
        out: dir.display().to_string(),
    };
    let text = match a.format {
        OutputFormat::Json => json_line(&report),
        OutputFormat::Text => format!(
            "{}: {} issues, {} commits, snapshot time {}\nwrote {}\n",
            report.repo, report.issues, report.commits, report.snapshot_time, report.out
        ),
    };
    emit(out, text.as_bytes())
}
