//! Invariant checks over snapshot records.

use std::collections::HashSet;
use std::fmt;

use crate::model::{is_rgb_hex, CommitRecord, FileChange, IssueRecord, IssueState, RepoSnapshot};

/// Which record a [`Violation`] refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordId {
    Snapshot,
    Issue(u64),
    Commit(String),
    File { sha: String, path: String },
}

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordId::Snapshot => write!(f, "snapshot"),
            RecordId::Issue(n) => write!(f, "issue {n}"),
            RecordId::Commit(sha) => write!(f, "commit {sha}"),
            RecordId::File { sha, path } => write!(f, "file {path} in commit {sha}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    PositiveNumber,
    UniqueNumber,
    ClosedAtMatchesState,
    ClosedAfterCreated,
    LoginPresent,
    LabelColor,
    ShaFormat,
    UniqueSha,
    UniquePath,
    ChangesSum,
    WithinSnapshotTime,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::PositiveNumber => "positive number",
            Rule::UniqueNumber => "unique number",
            Rule::ClosedAtMatchesState => "closed state iff closed_at present",
            Rule::ClosedAfterCreated => "closed_at not before created_at",
            Rule::LoginPresent => "login non-empty",
            Rule::LabelColor => "label color is rgb hex",
            Rule::ShaFormat => "sha is 40 hex digits",
            Rule::UniqueSha => "unique sha",
            Rule::UniquePath => "unique path within commit",
            Rule::ChangesSum => "changes = additions + deletions",
            Rule::WithinSnapshotTime => "timestamp not after snapshot_time",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub record: RecordId,
    pub rule: Rule,
}

impl Violation {
    pub fn new(record: RecordId, rule: Rule) -> Self {
        Self { record, rule }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.record, self.rule)
    }
}

/// Rules that can be judged from one issue alone.
pub(crate) fn issue_rules(issue: &IssueRecord) -> Vec<Rule> {
    let mut out = Vec::new();
    if issue.number == 0 {
        out.push(Rule::PositiveNumber);
    }
    match (issue.state, issue.closed_at) {
        (IssueState::Closed, None) | (IssueState::Open, Some(_)) => {
            out.push(Rule::ClosedAtMatchesState)
        }
        (IssueState::Closed, Some(closed)) if closed < issue.created_at => {
            out.push(Rule::ClosedAfterCreated)
        }
        _ => {}
    }
    let logins_ok = !issue.creator.is_empty()
        && issue.closed_by.as_deref().is_none_or(|s| !s.is_empty())
        && issue.assignees.iter().all(|a| !a.is_empty());
    if !logins_ok {
        out.push(Rule::LoginPresent);
    }
    if issue.labels.iter().any(|l| !is_rgb_hex(&l.color)) {
        out.push(Rule::LabelColor);
    }
    out
}

pub(crate) fn commit_rules(commit: &CommitRecord) -> Vec<Rule> {
    let mut out = Vec::new();
    if commit.sha.len() != 40 || !commit.sha.bytes().all(|b| b.is_ascii_hexdigit()) {
        out.push(Rule::ShaFormat);
    }
    if commit.author.is_empty() {
        out.push(Rule::LoginPresent);
    }
    out
}

pub(crate) fn file_rules(file: &FileChange) -> Vec<Rule> {
    if file.additions.checked_add(file.deletions) == Some(file.changes) {
        Vec::new()
    } else {
        vec![Rule::ChangesSum]
    }
}

/// Checks every record invariant; empty iff the snapshot is well-formed.
pub fn validate_snapshot(s: &RepoSnapshot) -> Vec<Violation> {
    let mut out = Vec::new();
    let now = s.snapshot_time();

    let mut numbers = HashSet::new();
    for issue in s.issues() {
        let id = || RecordId::Issue(issue.number);
        out.extend(issue_rules(issue).into_iter().map(|r| Violation::new(id(), r)));
        if !numbers.insert(issue.number) {
            out.push(Violation::new(id(), Rule::UniqueNumber));
        }
        if issue.created_at > now || issue.closed_at.is_some_and(|c| c > now) {
            out.push(Violation::new(id(), Rule::WithinSnapshotTime));
        }
    }

    let mut shas = HashSet::new();
    for commit in s.commits() {
        let id = || RecordId::Commit(commit.sha.clone());
        out.extend(commit_rules(commit).into_iter().map(|r| Violation::new(id(), r)));
        if !shas.insert(commit.sha.as_str()) {
            out.push(Violation::new(id(), Rule::UniqueSha));
        }
        if commit.committed_at > now {
            out.push(Violation::new(id(), Rule::WithinSnapshotTime));
        }
        let mut paths = HashSet::new();
        for file in &commit.files {
            let fid = || RecordId::File { sha: commit.sha.clone(), path: file.path.clone() };
            out.extend(file_rules(file).into_iter().map(|r| Violation::new(fid(), r)));
            if !paths.insert(file.path.as_str()) {
                out.push(Violation::new(fid(), Rule::UniquePath));
            }
        }
    }
    out
}
