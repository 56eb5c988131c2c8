use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use issuescope_core::model::{parse_timestamp, IssueState, RepoRef};
use issuescope_github::{CountingTransport, FetchConfig, FixtureTransport, GitHubClient, ManualClock, Recorded};
use serde_json::Value;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/recorded/acme-widgets")
}

fn repo() -> RepoRef {
    RepoRef::new("acme", "widgets").unwrap()
}

fn cfg(max_issues: usize) -> FetchConfig {
    FetchConfig { max_issues, ..Default::default() }
}

fn client<T: issuescope_github::Transport>(t: T, cfg: FetchConfig) -> GitHubClient<T> {
    let clock = Arc::new(ManualClock::new(parse_timestamp("2023-06-18T12:00:00Z").unwrap()));
    GitHubClient::with_transport(t, cfg).with_clock(clock)
}

/// Issue numbers in the recorded listing, read straight from the files.
fn recorded_issue_numbers() -> BTreeSet<u64> {
    let text = std::fs::read_to_string(dir().join("issues.json")).unwrap();
    let pages: Vec<Recorded> = serde_json::from_str(&text).unwrap();
    pages
        .iter()
        .flat_map(|p| p.body.as_array().unwrap().iter())
        .filter(|v| v.get("pull_request").is_none())
        .map(|v| v["number"].as_u64().unwrap())
        .collect()
}

#[test]
fn recorded_listing_shape() {
    let text = std::fs::read_to_string(dir().join("issues.json")).unwrap();
    let pages: Vec<Recorded> = serde_json::from_str(&text).unwrap();
    let all: Vec<&Value> = pages.iter().flat_map(|p| p.body.as_array().unwrap()).collect();
    let distinct: HashSet<u64> = all.iter().map(|v| v["number"].as_u64().unwrap()).collect();
    assert_eq!(all.len(), 249);
    assert_eq!(distinct.len(), 248);
    assert_eq!(recorded_issue_numbers().len(), 207);
}

#[test]
fn stops_at_max_issues_without_prs() {
    let c = client(FixtureTransport::load(&dir()).unwrap(), cfg(100));
    let issues = c.fetch_issues(&repo()).unwrap();
    assert_eq!(issues.len(), 100);
    let numbers: Vec<u64> = issues.iter().map(|i| i.number).collect();
    let expected: Vec<u64> = recorded_issue_numbers().into_iter().rev().take(100).collect();
    assert_eq!(numbers, expected);
    let pages: Vec<u32> = c.transport().requests().iter().filter(|(p, _)| p.ends_with("/issues")).map(|r| r.1).collect();
    assert_eq!(pages, vec![1, 2]);
}

#[test]
fn exhaustive_pagination_is_duplicate_free() {
    let c = client(FixtureTransport::load(&dir()).unwrap(), cfg(1000));
    let issues = c.fetch_issues(&repo()).unwrap();
    let numbers: Vec<u64> = issues.iter().map(|i| i.number).collect();
    let set: BTreeSet<u64> = numbers.iter().copied().collect();
    assert_eq!(set.len(), numbers.len());
    assert_eq!(set, recorded_issue_numbers());
    let pages: Vec<u32> = c.transport().requests().iter().filter(|(p, _)| p.ends_with("/issues")).map(|r| r.1).collect();
    assert_eq!(pages, vec![1, 2, 3]);
    for i in issues.iter().filter(|i| i.state == IssueState::Closed) {
        assert_eq!(i.closed_by.as_deref(), Some("maintainer"), "#{}", i.number);
    }
}

#[test]
fn snapshot_commits_and_stats() {
    let c = client(FixtureTransport::load(&dir()).unwrap(), cfg(1000));
    let s = c.fetch_snapshot(&repo()).unwrap();
    assert_eq!(s.issues().len(), 207);
    let commits = s.commits();
    assert_eq!(commits.len(), 5, "the commit before the window is dropped");
    assert!(commits.windows(2).all(|w| w[0].committed_at >= w[1].committed_at));
    assert_eq!(commits[0].files[0].changes, 4);
    assert_eq!(commits[1].files[0].changes, 10);
    let missing: Vec<bool> = commits.iter().map(|c| c.stats_missing).collect();
    assert_eq!(missing, vec![false, false, true, true, false]);
    assert!(commits[3].files.is_empty());
    assert_eq!(s.snapshot_time(), parse_timestamp("2023-06-18T12:00:00Z").unwrap());
    assert!(issuescope_core::validate::validate_snapshot(&s).is_empty());
}

#[test]
fn detail_requests_respect_max_in_flight() {
    for workers in [1, 3] {
        let t = CountingTransport::new(FixtureTransport::load(&dir()).unwrap(), Duration::from_millis(2));
        let c = client(t, FetchConfig { max_issues: 1000, max_in_flight: workers, ..Default::default() });
        c.fetch_snapshot(&repo()).unwrap();
        let peak = c.transport().peak();
        assert!(peak <= workers, "peak {peak} > {workers}");
        assert!(c.transport().total() > 40);
        if workers > 1 {
            assert!(peak > 1, "details never overlapped");
        }
    }
}

#[test]
fn anonymous_is_allowed() {
    let c = client(FixtureTransport::load(&dir()).unwrap(), FetchConfig { auth_token: None, ..cfg(5) });
    assert_eq!(c.fetch_issues(&repo()).unwrap().len(), 5);
}
