//! Rendering one view of a snapshot to SVG, or to the same JSON the API serves.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use issuescope_core::analytics::{BinRange, SummaryOptions, TimelineMode};
use issuescope_core::graph::{GraphOptions, LayoutParams};
use issuescope_core::model::RepoSnapshot;
use issuescope_core::payload::{graph_payload, histogram_payload, summary_payload, timeline_payload};
use issuescope_core::svg::{graph_svg, summary_svg, timeline_svg};
use issuescope_core::theme::Theme;

use crate::{data, emit, exit, json_line, CliError, DataArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Timeline,
    Summary,
    Graph(u64),
}

impl FromStr for View {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "timeline" => Ok(View::Timeline),
            "summary" => Ok(View::Summary),
            _ => s
                .strip_prefix("graph:")
                .and_then(|n| n.parse().ok())
                .map(View::Graph)
                .ok_or_else(|| format!("unknown view {s:?}; expected timeline, summary or graph:NUMBER")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    #[default]
    Svg,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub mode: TimelineMode,
    pub seed: u64,
    pub demo_nodes: bool,
    pub summary: SummaryOptions,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            mode: TimelineMode::default(),
            seed: LayoutParams::default().seed,
            demo_nodes: false,
            summary: SummaryOptions::default(),
        }
    }
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// timeline, summary, or graph:NUMBER
    #[arg(long)]
    pub view: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: ExportFormat,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Timeline colouring: status or labels.
    #[arg(long, default_value = "status")]
    pub mode: String,
    /// Graph layout seed.
    #[arg(long, default_value_t = LayoutParams::default().seed)]
    pub seed: u64,
    /// Add placeholder assignee and closer nodes to the graph.
    #[arg(long)]
    pub demo_nodes: bool,
    /// Summary: only count bug-fix commits.
    #[arg(long)]
    pub bug_only: bool,
    /// Summary: number of named wedges before OTHERS.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub top: u64,
    /// Summary: leave this path out (repeatable).
    #[arg(long)]
    pub exclude: Vec<String>,
    /// Summary: only files whose total falls in this histogram bin, e.g. 8-15.
    #[arg(long)]
    pub bin: Option<String>,
    /// Colour theme TOML file.
    #[arg(long)]
    pub theme: Option<PathBuf>,
}

impl ExportArgs {
    fn options(&self) -> Result<RenderOptions, CliError> {
        let usage = |m: String| CliError::new(exit::USAGE, m);
        let bin_filter = self
            .bin
            .as_deref()
            .map(|b| b.parse::<BinRange>().map_err(|e| usage(format!("--bin {b:?}: {e}"))))
            .transpose()?;
        Ok(RenderOptions {
            mode: self.mode.parse().map_err(usage)?,
            seed: self.seed,
            demo_nodes: self.demo_nodes,
            summary: SummaryOptions {
                top_n: self.top as usize,
                bug_only: self.bug_only,
                excluded: self.exclude.iter().cloned().collect::<BTreeSet<_>>(),
                bin_filter,
            },
        })
    }
}

/// Renders `view`. Output depends only on the arguments, so repeated calls
/// give identical bytes.
pub fn render(s: &RepoSnapshot, view: View, format: ExportFormat, opts: &RenderOptions, theme: &Theme) -> Result<Vec<u8>, CliError> {
    let text = match view {
        View::Timeline => {
            let p = timeline_payload(s, opts.mode, theme);
            match format {
                ExportFormat::Svg => timeline_svg(&p),
                ExportFormat::Json => json_line(&p),
            }
        }
        View::Summary => {
            let p = summary_payload(s, &opts.summary, theme);
            match format {
                ExportFormat::Svg => summary_svg(&p, &histogram_payload(s, opts.summary.bug_only), theme),
                ExportFormat::Json => json_line(&p),
            }
        }
        View::Graph(number) => {
            let issue = s
                .issue(number)
                .ok_or_else(|| CliError::new(exit::UNKNOWN_TARGET, format!("issue #{number} is not in the snapshot of {}", s.repo())))?;
            let p = graph_payload(issue, s, theme, GraphOptions { demo_nodes: opts.demo_nodes }, &LayoutParams::with_seed(opts.seed))
                .map_err(|e| CliError::new(exit::DATA, format!("layout failed: {e}")))?;
            match format {
                ExportFormat::Svg => graph_svg(&p, theme),
                ExportFormat::Json => json_line(&p),
            }
        }
    };
    Ok(text.into_bytes())
}

/// Writes through a temporary file in the same directory, so a failed
/// export never leaves a truncated file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::new(exit::DATA, format!("cannot write {}: {e}", path.display()));
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

pub(crate) fn run(a: &ExportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let view: View = a.view.parse().map_err(|e: String| CliError::new(exit::UNKNOWN_TARGET, e))?;
    let opts = a.options()?;
    let theme = match &a.theme {
        Some(p) => Theme::load(p).map_err(|e| CliError::new(exit::USAGE, format!("theme {}: {e}", p.display())))?,
        None => Theme::default(),
    };
    let snap = data::resolve(&a.data)?;
    let bytes = render(&snap, view, a.format, &opts, &theme)?;
    match &a.out {
        Some(path) => {
            write_atomic(path, &bytes)?;
            let _ = writeln!(err, "wrote {} ({} bytes)", path.display(), bytes.len());
            Ok(())
        }
        None => emit(out, &bytes),
    }
}
