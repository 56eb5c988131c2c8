use std::collections::BTreeSet;
use std::str::FromStr;

use serde::Serialize;

use super::{issue_duration, NO_LABEL};
use crate::model::{IssueRecord, IssueState, RepoSnapshot, Timestamp};
use crate::theme::Theme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimelineMode {
    #[default]
    Status,
    Labels,
}

impl FromStr for TimelineMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "status" => Ok(TimelineMode::Status),
            "labels" => Ok(TimelineMode::Labels),
            other => Err(format!("unknown timeline mode {other:?}; expected status or labels")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorSegment {
    pub color: String,
    pub label_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TooltipPayload {
    pub title: String,
    pub created_at: Timestamp,
    pub closed_at: Option<Timestamp>,
    pub labels: Vec<String>,
}

/// One Gantt bar. Open issues run to the snapshot time and are `ongoing`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelineBar {
    pub issue_number: u64,
    pub title: String,
    pub start: Timestamp,
    pub end: Timestamp,
    pub ongoing: bool,
    pub duration_days: f64,
    pub segments: Vec<ColorSegment>,
    pub tooltip: TooltipPayload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegendEntry {
    pub color: String,
    pub name: String,
}

fn segments(issue: &IssueRecord, mode: TimelineMode, theme: &Theme) -> Vec<ColorSegment> {
    match mode {
        TimelineMode::Status => vec![ColorSegment {
            color: theme.status_color(issue.state).to_string(),
            label_name: issue.state.as_str().to_string(),
        }],
        TimelineMode::Labels if issue.labels.is_empty() => vec![ColorSegment {
            color: theme.no_label.clone(),
            label_name: NO_LABEL.to_string(),
        }],
        TimelineMode::Labels => issue
            .labels
            .iter()
            .map(|l| ColorSegment { color: l.color.clone(), label_name: l.name.clone() })
            .collect(),
    }
}

/// One bar per issue, ordered by creation time (then number).
pub fn build_timeline(s: &RepoSnapshot, mode: TimelineMode, theme: &Theme) -> Vec<TimelineBar> {
    let now = s.snapshot_time();
    let mut issues: Vec<&IssueRecord> = s.issues().iter().collect();
    issues.sort_by_key(|i| (i.created_at, i.number));
    issues
        .into_iter()
        .map(|issue| TimelineBar {
            issue_number: issue.number,
            title: issue.title.clone(),
            start: issue.created_at,
            end: issue.end_time(now),
            ongoing: issue.state == IssueState::Open,
            duration_days: issue_duration(issue, now),
            segments: segments(issue, mode, theme),
            tooltip: TooltipPayload {
                title: issue.title.clone(),
                created_at: issue.created_at,
                closed_at: issue.closed_at,
                labels: issue.labels.iter().map(|l| l.name.clone()).collect(),
            },
        })
        .collect()
}

/// Legend for a set of bars. Status mode always lists open and closed; label
/// mode lists each (name, color) pair in first-seen order, including
/// "no label" when some bar has no labels.
pub fn legend(bars: &[TimelineBar], mode: TimelineMode, theme: &Theme) -> Vec<LegendEntry> {
    match mode {
        TimelineMode::Status => [IssueState::Open, IssueState::Closed]
            .map(|st| LegendEntry { color: theme.status_color(st).to_string(), name: st.as_str().to_string() })
            .to_vec(),
        TimelineMode::Labels => {
            let mut seen = BTreeSet::new();
            bars.iter()
                .flat_map(|b| &b.segments)
                .filter(|seg| seen.insert((seg.label_name.clone(), seg.color.clone())))
                .map(|seg| LegendEntry { color: seg.color.clone(), name: seg.label_name.clone() })
                .collect()
        }
    }
}
