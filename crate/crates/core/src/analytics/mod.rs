//! Pure computations over a [`RepoSnapshot`].
//!
//! Nothing here mutates its input; every function returns the same output
//! for the same snapshot.

mod churn;
mod correlation;
mod timeline;

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

pub use churn::{
    compute_histogram, donut_geometry, file_totals, histogram_of, summarize_file_updates,
    summarize_totals, BinRange, BinRangeError, DonutWedge, FileUpdateSummary, GeometryError,
    HistogramBin, Segment, SummaryOptions, OTHERS,
};
pub use correlation::{commits_in_window, correlate_commits, correlation_window, detect_bug_fix};
pub use timeline::{
    build_timeline, legend, ColorSegment, LegendEntry, TimelineBar, TimelineMode, TooltipPayload,
};

use crate::model::{IssueRecord, IssueState, RepoSnapshot, Timestamp};

/// Name used for issues that carry no label.
pub const NO_LABEL: &str = "no label";

const MILLIS_PER_DAY: f64 = 86_400_000.0;

/// Length of `[from, to]` in fractional days, clamped at zero.
pub fn days_between(from: Timestamp, to: Timestamp) -> f64 {
    let ms = (to - from).num_milliseconds();
    (ms.max(0) as f64) / MILLIS_PER_DAY
}

/// Days an issue has been open: until `closed_at` when closed, until
/// `snapshot_time` otherwise.
pub fn issue_duration(issue: &IssueRecord, snapshot_time: Timestamp) -> f64 {
    days_between(issue.created_at, issue.end_time(snapshot_time))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ranking {
    LongestOpen,
    LongestClosed,
}

impl FromStr for Ranking {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "longest-open" | "longest_open" => Ok(Ranking::LongestOpen),
            "longest-closed" | "longest_closed" => Ok(Ranking::LongestClosed),
            other => Err(format!("unknown ranking {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedIssue<'a> {
    pub issue: &'a IssueRecord,
    pub duration_days: f64,
}

/// Issues of the matching state, longest first; equal durations keep the
/// lower issue number first.
pub fn rank_issues(s: &RepoSnapshot, which: Ranking) -> Vec<RankedIssue<'_>> {
    let state = match which {
        Ranking::LongestOpen => IssueState::Open,
        Ranking::LongestClosed => IssueState::Closed,
    };
    let now = s.snapshot_time();
    let mut ranked: Vec<RankedIssue<'_>> = s
        .issues()
        .iter()
        .filter(|i| i.state == state)
        .map(|issue| RankedIssue { issue, duration_days: issue_duration(issue, now) })
        .collect();
    ranked.sort_by(|a, b| {
        b.duration_days
            .total_cmp(&a.duration_days)
            .then(a.issue.number.cmp(&b.issue.number))
    });
    ranked
}

/// Issue count per label name. An issue counts once per distinct label;
/// unlabeled issues count under [`NO_LABEL`].
pub fn label_census(s: &RepoSnapshot) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for issue in s.issues() {
        let names: BTreeSet<&str> = issue.labels.iter().map(|l| l.name.as_str()).collect();
        if names.is_empty() {
            *counts.entry(NO_LABEL.to_string()).or_insert(0) += 1;
        }
        for name in names {
            *counts.entry(name.to_string()).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
pub(crate) mod testutil {
    use crate::model::*;

    pub fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    pub fn open_issue(number: u64, created: &str) -> IssueRecord {
        IssueRecord {
            number,
            title: format!("issue {number}"),
            state: IssueState::Open,
            created_at: ts(created),
            closed_at: None,
            creator: "u1".into(),
            closed_by: None,
            assignees: vec![],
            labels: vec![],
        }
    }

    pub fn closed_issue(number: u64, created: &str, closed: &str) -> IssueRecord {
        IssueRecord {
            state: IssueState::Closed,
            closed_at: Some(ts(closed)),
            closed_by: Some("u2".into()),
            ..open_issue(number, created)
        }
    }

    pub fn commit(n: u32, at: &str, message: &str, files: &[(&str, u64, u64)]) -> CommitRecord {
        CommitRecord {
            sha: format!("{n:040x}"),
            author: "u3".into(),
            committed_at: ts(at),
            message: message.into(),
            files: files.iter().map(|(p, a, d)| FileChange::new(*p, *a, *d)).collect(),
            stats_missing: false,
        }
    }

    pub fn snapshot(issues: Vec<IssueRecord>, commits: Vec<CommitRecord>) -> RepoSnapshot {
        RepoSnapshot::new(RepoRef::new("o", "r").unwrap(), ts("2023-06-18T12:00:00Z"), issues, commits)
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use crate::model::Label;

    #[test]
    fn closed_duration_is_whole_days() {
        let i = closed_issue(1, "2023-06-01T00:00:00Z", "2023-06-06T00:00:00Z");
        assert_eq!(issue_duration(&i, ts("2023-06-18T12:00:00Z")), 5.0);
    }

    #[test]
    fn open_duration_runs_to_snapshot() {
        let i = open_issue(1, "2023-06-01T00:00:00Z");
        assert_eq!(issue_duration(&i, ts("2023-06-18T12:00:00Z")), 17.5);
        let fresh = open_issue(2, "2023-06-18T12:00:00Z");
        assert_eq!(issue_duration(&fresh, ts("2023-06-18T12:00:00Z")), 0.0);
    }

    #[test]
    fn ranking_breaks_ties_by_number() {
        let s = snapshot(
            vec![
                closed_issue(3, "2023-06-01T00:00:00Z", "2023-06-06T00:00:00Z"),
                closed_issue(2, "2023-06-01T00:00:00Z", "2023-06-03T00:00:00Z"),
                closed_issue(1, "2023-06-10T00:00:00Z", "2023-06-15T00:00:00Z"),
            ],
            vec![],
        );
        let order: Vec<u64> = rank_issues(&s, Ranking::LongestClosed).iter().map(|r| r.issue.number).collect();
        assert_eq!(order, vec![1, 3, 2]);
        assert!(rank_issues(&s, Ranking::LongestOpen).is_empty());
    }

    #[test]
    fn ranking_open_issues() {
        let s = snapshot(
            vec![open_issue(4, "2023-06-15T12:00:00Z"), open_issue(9, "2023-06-01T00:00:00Z")],
            vec![],
        );
        let ranked = rank_issues(&s, Ranking::LongestOpen);
        assert_eq!(ranked.iter().map(|r| r.issue.number).collect::<Vec<_>>(), vec![9, 4]);
        assert_eq!(ranked[0].duration_days, 17.5);
        assert_eq!(ranked[1].duration_days, 3.0);
    }

    #[test]
    fn census_counts_each_label_once_per_issue() {
        let mut a = open_issue(1, "2023-06-01T00:00:00Z");
        a.labels = vec![Label::new("bug", "d73a4a")];
        let mut b = open_issue(2, "2023-06-01T00:00:00Z");
        b.labels = vec![Label::new("bug", "d73a4a"), Label::new("help", "008672"), Label::new("bug", "d73a4a")];
        let mut c = open_issue(3, "2023-06-01T00:00:00Z");
        c.labels = vec![Label::new("feature", "a2eeef")];
        let census = label_census(&snapshot(vec![a, b, c], vec![]));
        let expected: BTreeMap<String, usize> =
            [("bug", 2), ("feature", 1), ("help", 1)].map(|(k, v)| (k.to_string(), v)).into();
        assert_eq!(census, expected);
    }

    #[test]
    fn census_of_unlabeled() {
        let s = snapshot(vec![open_issue(1, "2023-06-01T00:00:00Z"), open_issue(2, "2023-06-02T00:00:00Z")], vec![]);
        assert_eq!(label_census(&s), BTreeMap::from([(NO_LABEL.to_string(), 2)]));
    }
}
