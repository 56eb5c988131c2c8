//! The six repository questions, answered from one snapshot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use issuescope_core::analytics::{
    correlate_commits, detect_bug_fix, issue_duration, label_census, rank_issues, summarize_file_updates, Ranking,
    SummaryOptions,
};
use issuescope_core::model::{format_timestamp, CommitRecord, IssueRecord, RepoSnapshot, Timestamp};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Question {
    /// Which closed issue took longest to resolve, and who opened and closed it.
    LongestClosed,
    /// Which issue has been open the longest.
    LongestOpen,
    /// Which label the most issues carry.
    LabelMajority,
    /// Which bug-related issue took longest, who opened and closed it, and
    /// which commits may have resolved it.
    LongestBug,
    /// Which file has the most updated lines.
    TopFile,
    /// Which file has the most updated lines in bug-fix commits.
    TopFileBugfix,
}

impl Question {
    pub const ALL: [Question; 6] = [
        Question::LongestClosed,
        Question::LongestOpen,
        Question::LabelMajority,
        Question::LongestBug,
        Question::TopFile,
        Question::TopFileBugfix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Question::LongestClosed => "longest-closed",
            Question::LongestOpen => "longest-open",
            Question::LabelMajority => "label-majority",
            Question::LongestBug => "longest-bug",
            Question::TopFile => "top-file",
            Question::TopFileBugfix => "top-file-bugfix",
        }
    }
}

impl FromStr for Question {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Question::ALL.into_iter().find(|q| q.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Question::ALL.iter().map(|q| q.as_str()).collect();
            format!("unknown question {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IssueSummary {
    pub number: u64,
    pub title: String,
    pub opened_by: String,
    pub closed_by: Option<String>,
    pub created_at: Timestamp,
    pub closed_at: Option<Timestamp>,
    pub labels: Vec<String>,
}

impl From<&IssueRecord> for IssueSummary {
    fn from(i: &IssueRecord) -> Self {
        IssueSummary {
            number: i.number,
            title: i.title.clone(),
            opened_by: i.creator.clone(),
            closed_by: i.closed_by.clone(),
            created_at: i.created_at,
            closed_at: i.closed_at,
            labels: i.labels.iter().map(|l| l.name.clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommitSummary {
    pub sha: String,
    pub author: String,
    pub committed_at: Timestamp,
    pub message: String,
}

impl From<&CommitRecord> for CommitSummary {
    fn from(c: &CommitRecord) -> Self {
        CommitSummary { sha: c.sha.clone(), author: c.author.clone(), committed_at: c.committed_at, message: c.message.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "question", rename_all = "kebab-case")]
pub enum Answer {
    LongestClosed {
        issue: IssueSummary,
        duration_days: f64,
    },
    LongestOpen {
        issue: IssueSummary,
        duration_days: f64,
    },
    LabelMajority {
        label: String,
        issues: usize,
        total_issues: usize,
        census: BTreeMap<String, usize>,
    },
    LongestBug {
        issue: IssueSummary,
        duration_days: f64,
        window_commits: usize,
        /// Commits in the issue's window whose message looks like a fix.
        resolving_candidates: Vec<CommitSummary>,
    },
    TopFile {
        path: String,
        lines: u64,
        /// Lines in every file beyond the top five.
        others: u64,
        total: u64,
    },
    TopFileBugfix {
        path: String,
        lines: u64,
        others: u64,
        total: u64,
    },
}

/// A question the snapshot holds no data for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unanswerable(pub String);

/// "Bug-related" means carrying a label whose name contains "bug", in any case.
pub fn is_bug_related(issue: &IssueRecord) -> bool {
    issue.labels.iter().any(|l| l.name.to_lowercase().contains("bug"))
}

fn top_file(s: &RepoSnapshot, bug_only: bool) -> Result<(String, u64, u64, u64), Unanswerable> {
    let summary = summarize_file_updates(s, &SummaryOptions { bug_only, ..Default::default() });
    let top = summary.named().next().ok_or_else(|| {
        Unanswerable(if bug_only { "no bug-fix commit changed any lines".into() } else { "no commit changed any lines".into() })
    })?;
    Ok((top.name.clone(), top.value, summary.others().unwrap_or(0), summary.total))
}

pub fn answer(s: &RepoSnapshot, q: Question) -> Result<Answer, Unanswerable> {
    let now = s.snapshot_time();
    match q {
        Question::LongestClosed => {
            let top = rank_issues(s, Ranking::LongestClosed).into_iter().next().ok_or_else(|| Unanswerable("no closed issues".into()))?;
            Ok(Answer::LongestClosed { issue: top.issue.into(), duration_days: top.duration_days })
        }
        Question::LongestOpen => {
            let top = rank_issues(s, Ranking::LongestOpen).into_iter().next().ok_or_else(|| Unanswerable("no open issues".into()))?;
            Ok(Answer::LongestOpen { issue: top.issue.into(), duration_days: top.duration_days })
        }
        Question::LabelMajority => {
            let census = label_census(s);
            // Highest count; BTreeMap order makes the first name win ties.
            let (label, issues) = census
                .iter()
                .fold(None::<(&String, usize)>, |best, (k, v)| match best {
                    Some((_, b)) if b >= *v => best,
                    _ => Some((k, *v)),
                })
                .ok_or_else(|| Unanswerable("no issues".into()))?;
            Ok(Answer::LabelMajority { label: label.clone(), issues, total_issues: s.issues().len(), census: census.clone() })
        }
        Question::LongestBug => {
            let top = rank_issues(s, Ranking::LongestClosed)
                .into_iter()
                .find(|r| is_bug_related(r.issue))
                .ok_or_else(|| Unanswerable("no closed bug-related issues".into()))?;
            let window = correlate_commits(top.issue, s);
            Ok(Answer::LongestBug {
                issue: top.issue.into(),
                duration_days: issue_duration(top.issue, now),
                window_commits: window.len(),
                resolving_candidates: window.into_iter().filter(|c| detect_bug_fix(&c.message)).map(Into::into).collect(),
            })
        }
        Question::TopFile => {
            let (path, lines, others, total) = top_file(s, false)?;
            Ok(Answer::TopFile { path, lines, others, total })
        }
        Question::TopFileBugfix => {
            let (path, lines, others, total) = top_file(s, true)?;
            Ok(Answer::TopFileBugfix { path, lines, others, total })
        }
    }
}

fn when(t: &Option<Timestamp>) -> String {
    t.as_ref().map_or_else(|| "now".into(), format_timestamp)
}

fn first_line(msg: &str) -> &str {
    msg.lines().next().unwrap_or("")
}

pub fn render_text(a: &Answer) -> String {
    let mut out = String::new();
    match a {
        Answer::LongestClosed { issue, duration_days } | Answer::LongestOpen { issue, duration_days } => {
            let verb = if matches!(a, Answer::LongestClosed { .. }) { "resolved in" } else { "open for" };
            let _ = writeln!(out, "#{} {}", issue.number, issue.title);
            let _ = writeln!(out, "  {verb} {duration_days:.1} days ({} -> {})", format_timestamp(&issue.created_at), when(&issue.closed_at));
            let _ = write!(out, "  opened by {}", issue.opened_by);
            if let Some(c) = &issue.closed_by {
                let _ = write!(out, ", closed by {c}");
            }
            out.push('\n');
        }
        Answer::LabelMajority { label, issues, total_issues, census } => {
            let _ = writeln!(out, "{label}: {issues} of {total_issues} issues");
            let mut rows: Vec<(&String, &usize)> = census.iter().collect();
            rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
            for (name, n) in rows {
                let _ = writeln!(out, "  {n:>4}  {name}");
            }
        }
        Answer::LongestBug { issue, duration_days, window_commits, resolving_candidates } => {
            let _ = writeln!(out, "#{} {}", issue.number, issue.title);
            let _ = writeln!(out, "  resolved in {duration_days:.1} days, labels: {}", issue.labels.join(", "));
            let _ = writeln!(out, "  opened by {}, closed by {}", issue.opened_by, issue.closed_by.as_deref().unwrap_or("unknown"));
            let _ = writeln!(out, "  {window_commits} commits in its window; {} with fix-like messages:", resolving_candidates.len());
            for c in resolving_candidates {
                let _ = writeln!(out, "    {} {} ({})", &c.sha[..c.sha.len().min(10)], first_line(&c.message), c.author);
            }
        }
        Answer::TopFile { path, lines, others, total } | Answer::TopFileBugfix { path, lines, others, total } => {
            let scope = if matches!(a, Answer::TopFileBugfix { .. }) { " in bug-fix commits" } else { "" };
            let _ = writeln!(out, "{path}: {lines} lines updated{scope}");
            let _ = writeln!(out, "  files beyond the top 5: {others} lines; all files: {total} lines");
        }
    }
    out
}
