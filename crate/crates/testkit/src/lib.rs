//! Test support: proptest strategies for well-formed snapshots with hostile
//! text, and property checks whose oracles are computed independently of the
//! code under test.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use chrono::{Duration, TimeZone, Utc};
use issuescope_core::analytics::{
    build_timeline, commits_in_window, compute_histogram, correlation_window, detect_bug_fix, donut_geometry,
    summarize_file_updates, SummaryOptions, TimelineMode,
};
use issuescope_core::model::{CommitRecord, FileChange, IssueRecord, IssueState, Label, RepoRef, RepoSnapshot, Timestamp};
use issuescope_core::store::{load_snapshot, save_snapshot};
use issuescope_core::theme::Theme;
use issuescope_core::validate::validate_snapshot;
use proptest::prelude::*;

/// `fixtures/` at the workspace root.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

const SPAN_SECS: i64 = 60 * 86_400;

fn base() -> Timestamp {
    Utc.with_ymd_and_hms(2023, 1, 1, 0, 0, 0).unwrap()
}

/// Text that stresses CSV quoting: separators, quotes, line breaks, padding,
/// non-ASCII and the store's own packing characters.
pub fn hostile_text() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => "[a-zA-Z0-9 :()#-]{0,24}",
        1 => Just(String::new()),
        1 => Just("a, b, c".to_string()),
        1 => Just("say \"hi\", then \"\"leave\"\"".to_string()),
        1 => Just("line one\nline two\n".to_string()),
        1 => Just("crlf\r\nand lone\rreturn".to_string()),
        1 => Just("  padded with spaces  ".to_string()),
        1 => Just("naïve café ☃ 漢字 🚀".to_string()),
        1 => Just("pipe|hash#percent%".to_string()),
        1 => Just("=SUM(A1:A2)\t'quoted'".to_string()),
        2 => "\\PC{0,30}",
    ]
}

fn login() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => "[a-z][a-z0-9-]{0,9}",
        1 => Just("we|rd%#name".to_string()),
        1 => Just("ünïcode".to_string()),
    ]
}

fn label() -> impl Strategy<Value = Label> {
    let name = prop_oneof![
        4 => prop::sample::select(vec!["bug", "type: bug", "enhancement", "help wanted", "invalid", "Bugfix"]).prop_map(String::from),
        1 => Just("C#|x, \"y\"".to_string()),
        1 => "\\PC{1,12}",
    ];
    (name, "[0-9a-f]{6}").prop_map(|(n, c)| Label::new(n, c))
}

fn path() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => prop::sample::select(vec![
            "README.md", "src/lib.rs", "src/main.rs", "docs/a,b.md", "dir/\"quoted\".txt", "ünï/çødé.md", "with space/x.rs",
        ]).prop_map(String::from),
        2 => "[a-z]{1,3}/[a-z]{1,4}\\.rs",
    ]
}

fn message() -> impl Strategy<Value = String> {
    prop_oneof![
        2 => prop::sample::select(vec![
            "fix: crash on start", "Fixed flaky test", "refactor: prefix helpers", "add feature", "hotfix typo",
            "FIXES #12", "docs", "",
        ]).prop_map(String::from),
        1 => hostile_text(),
    ]
}

type RawIssue = (u64, i64, Option<i64>, String, String, Option<String>, Vec<String>, Vec<Label>);
type RawCommit = (u64, i64, String, String, Vec<(String, u64, u64)>, bool);

fn raw_issue() -> impl Strategy<Value = RawIssue> {
    (
        1u64..100_000,
        0..SPAN_SECS,
        prop::option::of(0..SPAN_SECS),
        hostile_text(),
        login(),
        prop::option::of(login()),
        prop::collection::vec(login(), 0..3),
        prop::collection::vec(label(), 0..4),
    )
}

fn raw_commit() -> impl Strategy<Value = RawCommit> {
    (
        any::<u64>(),
        0..=SPAN_SECS,
        login(),
        message(),
        prop::collection::vec((path(), 0u64..300, 0u64..300), 0..6),
        any::<bool>(),
    )
}

fn build(raw_issues: Vec<RawIssue>, raw_commits: Vec<RawCommit>, owner: String, subsec_ms: u32) -> RepoSnapshot {
    let t0 = base();
    let snapshot_time = t0 + Duration::seconds(SPAN_SECS) + Duration::milliseconds(subsec_ms as i64);
    let mut seen = BTreeSet::new();
    let issues: Vec<IssueRecord> = raw_issues
        .into_iter()
        .filter(|r| seen.insert(r.0))
        .map(|(number, created, close_after, title, creator, closer, assignees, labels)| {
            let created_at = t0 + Duration::seconds(created) + Duration::milliseconds((number % 1000) as i64);
            let closed_at = close_after.map(|d| (created_at + Duration::seconds(d)).min(snapshot_time));
            IssueRecord {
                number,
                title,
                state: if closed_at.is_some() { IssueState::Closed } else { IssueState::Open },
                created_at,
                closed_at,
                creator,
                closed_by: closed_at.and(closer),
                assignees,
                labels,
            }
        })
        .collect();
    let mut shas = BTreeSet::new();
    let commits: Vec<CommitRecord> = raw_commits
        .into_iter()
        .filter(|r| shas.insert(r.0))
        .map(|(n, at, author, message, files, stats_missing)| {
            let mut paths = BTreeSet::new();
            CommitRecord {
                sha: format!("{:016x}{:024x}", n, n.wrapping_mul(0x9e37_79b9_7f4a_7c15) as u128),
                author,
                committed_at: t0 + Duration::seconds(at),
                message,
                files: files
                    .into_iter()
                    .filter(|(p, _, _)| paths.insert(p.clone()))
                    .map(|(p, a, d)| FileChange::new(p, a, d))
                    .collect(),
                stats_missing,
            }
        })
        .collect();
    RepoSnapshot::new(RepoRef::new(owner, "repo.name-1").unwrap(), snapshot_time, issues, commits)
}

/// Well-formed snapshots with up to `max_issues` issues and `max_commits`
/// commits spread over a 60-day span.
pub fn arb_snapshot(max_issues: usize, max_commits: usize) -> impl Strategy<Value = RepoSnapshot> {
    (
        prop::collection::vec(raw_issue(), 0..=max_issues),
        prop::collection::vec(raw_commit(), 0..=max_commits),
        "[A-Za-z0-9_.-]{1,12}",
        0u32..1000,
    )
        .prop_map(|(i, c, owner, ms)| build(i, c, owner, ms))
}

/// Per-path updated lines computed straight from the records.
pub fn oracle_totals(s: &RepoSnapshot, bug_only: bool) -> BTreeMap<String, u64> {
    let mut totals = BTreeMap::new();
    for c in s.commits() {
        let msg = c.message.to_lowercase();
        let is_fix = msg.split(|ch: char| !ch.is_alphanumeric()).any(|t| t.starts_with("fix"));
        if bug_only && !is_fix {
            continue;
        }
        for f in &c.files {
            *totals.entry(f.path.clone()).or_insert(0u64) += f.additions + f.deletions;
        }
    }
    totals.retain(|_, v| *v > 0);
    totals
}

/// Donut and histogram conservation, full wedge sweep, correlation window
/// monotonicity, bug-only containment and timeline completeness.
pub fn check_analytics(s: &RepoSnapshot) -> Result<(), String> {
    let theme = Theme::default();
    for bug_only in [false, true] {
        let totals = oracle_totals(s, bug_only);
        let expected_total: u64 = totals.values().sum();
        for top_n in [1, 5, 50] {
            let opts = SummaryOptions { top_n, bug_only, ..Default::default() };
            let summary = summarize_file_updates(s, &opts);
            let named: u64 = summary.named().map(|g| g.value).sum();
            let others = summary.others().unwrap_or(0);
            if named + others != summary.total || summary.total != expected_total {
                return Err(format!("donut conservation: {named}+{others} vs {} vs oracle {expected_total}", summary.total));
            }
            if summary.named().count() > top_n || summary.others().is_some() != (totals.len() > top_n) {
                return Err(format!("top-{top_n} shape wrong: {:?}", summary.segments));
            }
            if summary.total > 0 {
                let palette = theme.donut_palette(summary.segments.len());
                let wedges = donut_geometry(&summary, &palette).map_err(|e| e.to_string())?;
                let sweep: f64 = wedges.iter().map(|w| w.end_angle - w.start_angle).sum();
                if (sweep - TAU).abs() > 1e-9 {
                    return Err(format!("wedge sweep {sweep}"));
                }
                if wedges.windows(2).any(|w| w[0].end_angle != w[1].start_angle) || wedges[0].start_angle != 0.0 {
                    return Err("wedges not contiguous from 0".into());
                }
            }
        }
        let bins = compute_histogram(s, bug_only);
        let counted: usize = bins.iter().map(|b| b.file_count).sum();
        if counted != totals.len() {
            return Err(format!("histogram counts {counted} files, oracle {}", totals.len()));
        }
        for b in &bins {
            let hand = totals.values().filter(|v| b.range.lower() <= **v && **v < b.range.upper()).count();
            if hand != b.file_count {
                return Err(format!("bin {} has {} files, oracle {hand}", b.range, b.file_count));
            }
        }
    }

    let all = oracle_totals(s, false);
    for (path, v) in oracle_totals(s, true) {
        if all.get(&path).is_none_or(|a| *a < v) {
            return Err(format!("bug-only total for {path} exceeds all-commit total"));
        }
    }
    let bug_summary = summarize_file_updates(s, &SummaryOptions { top_n: usize::MAX >> 1, bug_only: true, ..Default::default() });
    let all_summary = summarize_file_updates(s, &SummaryOptions { top_n: usize::MAX >> 1, ..Default::default() });
    let all_named: BTreeMap<&str, u64> = all_summary.named().map(|g| (g.name.as_str(), g.value)).collect();
    for g in bug_summary.named() {
        if all_named.get(g.name.as_str()).is_none_or(|a| *a < g.value) {
            return Err(format!("bug-only segment {} not within all-commit summary", g.name));
        }
    }

    for issue in s.issues() {
        let (start, end) = correlation_window(issue, s.snapshot_time());
        let inner: BTreeSet<&str> = commits_in_window(s.commits(), start, end).iter().map(|c| c.sha.as_str()).collect();
        let hand: BTreeSet<&str> =
            s.commits().iter().filter(|c| start <= c.committed_at && c.committed_at <= end).map(|c| c.sha.as_str()).collect();
        if inner != hand {
            return Err(format!("window for #{} disagrees with oracle", issue.number));
        }
        for widen in [Duration::seconds(1), Duration::hours(13), Duration::days(9)] {
            let outer: BTreeSet<&str> =
                commits_in_window(s.commits(), start - widen, end + widen).iter().map(|c| c.sha.as_str()).collect();
            if !inner.is_subset(&outer) {
                return Err(format!("widening #{}'s window lost commits", issue.number));
            }
        }
    }

    for mode in [TimelineMode::Status, TimelineMode::Labels] {
        let bars = build_timeline(s, mode, &theme);
        if bars.len() != s.issues().len() {
            return Err("timeline bar count differs from issue count".into());
        }
        for bar in &bars {
            let issue = s.issue(bar.issue_number).ok_or("bar for unknown issue")?;
            let ok = match issue.closed_at {
                Some(closed) if issue.state == IssueState::Closed => !bar.ongoing && bar.end == closed,
                _ => bar.ongoing && bar.end == s.snapshot_time(),
            };
            if !ok || bar.segments.is_empty() || bar.duration_days < 0.0 {
                return Err(format!("bad bar for #{}", issue.number));
            }
        }
    }

    for c in s.commits() {
        if detect_bug_fix(&c.message) != detect_bug_fix(&c.message.to_uppercase()) {
            return Err(format!("fix detection is case-sensitive on {:?}", c.message));
        }
    }
    Ok(())
}

/// Saves `s` under `dir`, loads it back and compares structurally.
pub fn check_roundtrip(s: &RepoSnapshot, dir: &Path) -> Result<(), String> {
    if let Some(v) = validate_snapshot(s).first() {
        return Err(format!("generator produced an invalid snapshot: {v}"));
    }
    save_snapshot(s, dir).map_err(|e| format!("save: {e}"))?;
    let back = load_snapshot(dir).map_err(|e| format!("load: {e}"))?;
    if &back != s {
        return Err(format!("round trip changed the snapshot of {}", s.repo()));
    }
    Ok(())
}
