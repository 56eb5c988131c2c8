use crate::model::{CommitRecord, IssueRecord, RepoSnapshot, Timestamp};

/// `[created_at, closed_at]` for closed issues, `[created_at, snapshot_time]`
/// for open ones.
pub fn correlation_window(issue: &IssueRecord, snapshot_time: Timestamp) -> (Timestamp, Timestamp) {
    (issue.created_at, issue.end_time(snapshot_time))
}

/// Commits whose timestamp lies in `[start, end]`, oldest first.
pub fn commits_in_window(
    commits: &[CommitRecord],
    start: Timestamp,
    end: Timestamp,
) -> Vec<&CommitRecord> {
    let mut hits: Vec<&CommitRecord> = commits
        .iter()
        .filter(|c| start <= c.committed_at && c.committed_at <= end)
        .collect();
    hits.sort_by_key(|c| c.committed_at);
    hits
}

/// Candidate commits for an issue: everything committed while it was open,
/// both ends inclusive.
pub fn correlate_commits<'a>(issue: &IssueRecord, s: &'a RepoSnapshot) -> Vec<&'a CommitRecord> {
    let (start, end) = correlation_window(issue, s.snapshot_time());
    commits_in_window(s.commits(), start, end)
}

/// True when some token of the message starts with "fix" (any ASCII case).
/// Tokens are maximal runs of alphanumeric characters, so "fix:", "Fixed"
/// and "fixes" match while "prefix" and "hotfix" do not.
pub fn detect_bug_fix(message: &str) -> bool {
    message
        .split(|c: char| !c.is_alphanumeric())
        .any(|tok| tok.get(..3).is_some_and(|head| head.eq_ignore_ascii_case("fix")))
}
