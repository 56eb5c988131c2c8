//! The `issuescope` command line.
//!
//! ```text
//! issuescope fetch   --repo OWNER/NAME [--max-issues N] [--out DIR]
//! issuescope analyze --data DIR --question Q
//! issuescope export  --data DIR --view timeline|summary|graph:N --format svg|json [--out FILE]
//! issuescope serve   --data DIR [--bind ADDR]
//! ```
//!
//! Results go to stdout, diagnostics to stderr. Exit codes are listed in
//! [`exit`].

pub mod analyze;
pub mod data;
pub mod export;
mod fetch;
mod serve;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const FETCH: u8 = 2;
    /// Unreadable or invalid data, or a failed write.
    pub const DATA: u8 = 3;
    pub const UNKNOWN_TARGET: u8 = 4;
    pub const UNANSWERABLE: u8 = 5;
    pub const PORT_IN_USE: u8 = 6;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "issuescope", version, about = "Visual analytics for GitHub issues and commits")]
pub struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download a repository snapshot from the GitHub API.
    Fetch(fetch::FetchArgs),
    /// Answer one question about a snapshot.
    Analyze(AnalyzeArgs),
    /// Render a chart or its payload to a file.
    Export(export::ExportArgs),
    /// Serve the JSON API over a data directory.
    Serve(serve::ServeArgs),
}

/// Where to find a snapshot: a snapshot directory, or a data directory
/// holding several, narrowed down with `--repo`.
#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Snapshot or data directory [default: $ISSUESCOPE_DATA, else ./data]
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// OWNER/NAME, when the data directory holds more than one snapshot.
    #[arg(long)]
    pub repo: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// longest-closed, longest-open, label-majority, longest-bug, top-file or top-file-bugfix
    #[arg(long, short)]
    pub question: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
}

fn analyze_cmd(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let q: analyze::Question = a.question.parse().map_err(|e: String| CliError::new(exit::UNKNOWN_TARGET, e))?;
    let snap = data::resolve(&a.data)?;
    let answer = analyze::answer(&snap, q)
        .map_err(|u| CliError::new(exit::UNANSWERABLE, format!("{} cannot be answered: {}", q.as_str(), u.0)))?;
    let text = match a.format {
        OutputFormat::Text => analyze::render_text(&answer),
        OutputFormat::Json => json_line(&answer),
    };
    emit(out, text.as_bytes())
}

pub(crate) fn json_line(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("answers serialize");
    s.push('\n');
    s
}

pub(crate) fn emit(out: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::new(exit::DATA, format!("cannot write output: {e}")))
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => tracing::Level::WARN,
        1 => tracing::Level::INFO,
        _ => tracing::Level::DEBUG,
    };
    let _ = tracing_subscriber::fmt().with_max_level(level).with_writer(std::io::stderr).with_target(false).try_init();
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// code; errors are reported on `err`.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let rendered = e.render().to_string();
            if code == exit::OK {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    init_logging(cli.verbose);
    let result = match &cli.command {
        Command::Fetch(a) => fetch::run(a, out, err),
        Command::Analyze(a) => analyze_cmd(a, out),
        Command::Export(a) => export::run(a, out, err),
        Command::Serve(a) => serve::run(a, out),
    };
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
