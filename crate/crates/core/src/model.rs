//! Domain records shared by every part of issuescope.
//!
//! A [`RepoSnapshot`] is the unit of persistence, analysis and serving. It is
//! built once (by the fetcher or the loader) and then only read.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Current on-disk snapshot schema.
pub const SCHEMA_VERSION: u32 = 1;

/// UTC timestamp used throughout the crate.
pub type Timestamp = DateTime<Utc>;

/// Formats a timestamp as ISO-8601 with a trailing `Z` and only as many
/// fractional digits as needed, so parsing it back is lossless.
pub fn format_timestamp(ts: &Timestamp) -> String {
    ts.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

pub fn parse_timestamp(s: &str) -> Result<Timestamp, chrono::ParseError> {
    DateTime::parse_from_rfc3339(s).map(|t| t.with_timezone(&Utc))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepoRefError {
    #[error("repository reference must look like owner/name, got {0:?}")]
    Malformed(String),
    #[error("repository owner and name must be non-empty")]
    Empty,
    #[error("repository owner and name must not contain '/'")]
    Slash,
}

/// `owner/name` of a GitHub repository.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepoRef {
    owner: String,
    name: String,
}

impl RepoRef {
    pub fn new(owner: impl Into<String>, name: impl Into<String>) -> Result<Self, RepoRefError> {
        let owner = owner.into();
        let name = name.into();
        if owner.is_empty() || name.is_empty() {
            return Err(RepoRefError::Empty);
        }
        if owner.contains('/') || name.contains('/') {
            return Err(RepoRefError::Slash);
        }
        Ok(Self { owner, name })
    }

    pub fn owner(&self) -> &str {
        &self.owner
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Display for RepoRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.owner, self.name)
    }
}

impl FromStr for RepoRef {
    type Err = RepoRefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (owner, name) = s
            .split_once('/')
            .ok_or_else(|| RepoRefError::Malformed(s.to_string()))?;
        RepoRef::new(owner, name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IssueState {
    Open,
    Closed,
}

impl IssueState {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueState::Open => "open",
            IssueState::Closed => "closed",
        }
    }
}

impl FromStr for IssueState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "open" => Ok(IssueState::Open),
            "closed" => Ok(IssueState::Closed),
            other => Err(format!("unknown issue state {other:?}")),
        }
    }
}

/// A repository label. `color` is six hex digits without `#`, kept in the
/// case GitHub reported it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub name: String,
    pub color: String,
}

impl Label {
    pub fn new(name: impl Into<String>, color: impl Into<String>) -> Self {
        Self { name: name.into(), color: color.into() }
    }
}

/// True for exactly six ASCII hex digits.
pub fn is_rgb_hex(s: &str) -> bool {
    s.len() == 6 && s.bytes().all(|b| b.is_ascii_hexdigit())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueRecord {
    pub number: u64,
    pub title: String,
    pub state: IssueState,
    pub created_at: Timestamp,
    pub closed_at: Option<Timestamp>,
    pub creator: String,
    pub closed_by: Option<String>,
    pub assignees: Vec<String>,
    pub labels: Vec<Label>,
}

impl IssueRecord {
    pub fn is_open(&self) -> bool {
        self.state == IssueState::Open
    }

    /// End of the issue's lifetime as seen from `snapshot_time`.
    pub fn end_time(&self, snapshot_time: Timestamp) -> Timestamp {
        match self.closed_at {
            Some(closed) if self.state == IssueState::Closed => closed,
            _ => snapshot_time,
        }
    }
}

/// Per-file line statistics of one commit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileChange {
    pub path: String,
    pub additions: u64,
    pub deletions: u64,
    pub changes: u64,
}

impl FileChange {
    pub fn new(path: impl Into<String>, additions: u64, deletions: u64) -> Self {
        Self { path: path.into(), additions, deletions, changes: additions + deletions }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub sha: String,
    pub author: String,
    pub committed_at: Timestamp,
    pub message: String,
    pub files: Vec<FileChange>,
    /// The commit detail carried no line statistics.
    pub stats_missing: bool,
}

/// Immutable point-in-time capture of one repository.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepoSnapshot {
    repo: RepoRef,
    snapshot_time: Timestamp,
    issues: Vec<IssueRecord>,
    commits: Vec<CommitRecord>,
    schema_version: u32,
}

impl RepoSnapshot {
    pub fn new(
        repo: RepoRef,
        snapshot_time: Timestamp,
        issues: Vec<IssueRecord>,
        commits: Vec<CommitRecord>,
    ) -> Self {
        Self { repo, snapshot_time, issues, commits, schema_version: SCHEMA_VERSION }
    }

    pub fn repo(&self) -> &RepoRef {
        &self.repo
    }

    /// Reference "now" for open-issue durations.
    pub fn snapshot_time(&self) -> Timestamp {
        self.snapshot_time
    }

    pub fn issues(&self) -> &[IssueRecord] {
        &self.issues
    }

    pub fn commits(&self) -> &[CommitRecord] {
        &self.commits
    }

    pub fn schema_version(&self) -> u32 {
        self.schema_version
    }

    pub fn issue(&self, number: u64) -> Option<&IssueRecord> {
        self.issues.iter().find(|i| i.number == number)
    }
}
