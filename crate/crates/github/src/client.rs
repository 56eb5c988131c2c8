use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use issuescope_core::model::{
    format_timestamp, is_rgb_hex, parse_timestamp, CommitRecord, FileChange, IssueRecord, IssueState, Label,
    RepoRef, RepoSnapshot, Timestamp,
};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use tracing::{debug, info, warn};

use crate::pool::map_bounded;
use crate::rate::{respect_rate_limit, Clock, Decision, RateLimitPolicy, RateLimitState, SystemClock};
use crate::transport::{HttpTransport, Request, Response, Transport};
use crate::{FetchConfig, FetchError, PER_PAGE};

const BACKOFF_BASE: Duration = Duration::from_millis(500);
/// Guards against a server that keeps answering "rate limited" after resets.
const MAX_RATE_WAITS: u32 = 3;
const MAX_PAGES: u32 = 1000;

pub struct GitHubClient<T> {
    transport: T,
    cfg: FetchConfig,
    clock: Arc<dyn Clock>,
    rate: Mutex<Option<RateLimitState>>,
}

impl GitHubClient<HttpTransport> {
    pub fn connect(cfg: FetchConfig) -> Result<Self, FetchError> {
        cfg.check()?;
        let transport = HttpTransport::new(&cfg.api_base_url, cfg.resolved_token());
        Ok(Self::with_transport(transport, cfg))
    }
}

impl<T: Transport> GitHubClient<T> {
    pub fn with_transport(transport: T, cfg: FetchConfig) -> Self {
        GitHubClient { transport, cfg, clock: Arc::new(SystemClock), rate: Mutex::new(None) }
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    pub fn config(&self) -> &FetchConfig {
        &self.cfg
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    /// The budget reported by the most recent response.
    pub fn rate_limit(&self) -> Option<RateLimitState> {
        *self.rate.lock().unwrap()
    }

    fn backoff(&self, attempt: u32) {
        let jitter: f64 = rand::rng().random_range(0.5..1.5);
        self.clock.sleep(BACKOFF_BASE.mul_f64(2f64.powi(attempt as i32) * jitter));
    }

    /// One logical GET: waits out an exhausted budget, retries transport
    /// failures and 5xx with jittered exponential backoff, and maps the final
    /// status onto [`FetchError`].
    fn get(&self, req: &Request) -> Result<Response, FetchError> {
        let mut attempt = 0;
        let mut rate_waits = 0;
        loop {
            let known = *self.rate.lock().unwrap();
            if let Some(state) = known {
                match respect_rate_limit(&state, self.cfg.rate_limit_policy, self.clock.now()) {
                    Decision::Proceed => {}
                    Decision::Abort { reset_at } => return Err(FetchError::RateLimited(reset_at)),
                    Decision::Sleep(d) => {
                        info!(seconds = d.as_secs(), "rate limit exhausted, waiting for reset");
                        self.clock.sleep(d);
                        *self.rate.lock().unwrap() = None;
                    }
                }
            }

            let resp = match self.transport.send(req) {
                Ok(resp) => resp,
                Err(e) if attempt < self.cfg.retry_limit => {
                    debug!(path = %req.path, attempt, error = %e, "transport failure, retrying");
                    self.backoff(attempt);
                    attempt += 1;
                    continue;
                }
                Err(e) => return Err(FetchError::Network(format!("{e} (after {attempt} retries)"))),
            };

            let state = RateLimitState::from_response(&resp, self.clock.now());
            if let Some(s) = state {
                *self.rate.lock().unwrap() = Some(s);
            }
            let exhausted = state.is_some_and(|s| s.remaining == 0);
            match resp.status {
                200..=299 => return Ok(resp),
                403 | 429 if exhausted || resp.status == 429 => {
                    let reset_at = match state {
                        Some(s) => s.reset_at,
                        None => {
                            let after = resp.header("retry-after").and_then(|v| v.trim().parse().ok()).unwrap_or(60);
                            let reset_at = self.clock.now() + chrono::Duration::seconds(after);
                            *self.rate.lock().unwrap() = Some(RateLimitState { remaining: 0, reset_at });
                            reset_at
                        }
                    };
                    if self.cfg.rate_limit_policy == RateLimitPolicy::Fail || rate_waits >= MAX_RATE_WAITS {
                        return Err(FetchError::RateLimited(reset_at));
                    }
                    rate_waits += 1;
                }
                401 | 403 => return Err(FetchError::Auth(format!("HTTP {} from {}: {}", resp.status, req.path, message(&resp)))),
                404 => return Err(FetchError::NotFound(req.path.clone())),
                500..=599 if attempt < self.cfg.retry_limit => {
                    debug!(path = %req.path, status = resp.status, attempt, "server error, retrying");
                    self.backoff(attempt);
                    attempt += 1;
                }
                500..=599 => {
                    return Err(FetchError::Network(format!(
                        "HTTP {} from {} (after {attempt} retries)",
                        resp.status, req.path
                    )))
                }
                status => return Err(FetchError::UnexpectedStatus { status, path: req.path.clone() }),
            }
        }
    }

    fn get_json<D: DeserializeOwned>(&self, req: &Request) -> Result<D, FetchError> {
        let resp = self.get(req)?;
        serde_json::from_slice(&resp.body).map_err(|e| FetchError::Decode(format!("{}: {e}", req.path)))
    }

    /// Walks `page=1,2,...` until a short or empty page, handing each raw
    /// item to `keep`; stops early once `keep` returns false.
    fn paginate(
        &self,
        base: Request,
        mut keep: impl FnMut(serde_json::Value) -> Result<bool, FetchError>,
    ) -> Result<(), FetchError> {
        for page in 1..=MAX_PAGES {
            let req = base.clone().param("per_page", PER_PAGE).param("page", page);
            let items: Vec<serde_json::Value> = self.get_json(&req)?;
            let n = items.len();
            for item in items {
                if !keep(item)? {
                    return Ok(());
                }
            }
            if n < PER_PAGE {
                return Ok(());
            }
        }
        warn!(path = %base.path, "stopped after {MAX_PAGES} pages");
        Ok(())
    }

    /// Up to `max_issues` issues, newest first, with pull requests removed
    /// before counting. Closed issues missing `closed_by` in the listing are
    /// completed from the per-issue endpoint.
    pub fn fetch_issues(&self, repo: &RepoRef) -> Result<Vec<IssueRecord>, FetchError> {
        self.cfg.check()?;
        let base = Request::get(format!("/repos/{}/{}/issues", repo.owner(), repo.name()))
            .param("state", "all")
            .param("sort", "created")
            .param("direction", "desc");
        let mut seen = HashSet::new();
        let mut raw: Vec<RawIssue> = Vec::new();
        self.paginate(base, |item| {
            if item.get("pull_request").is_some() {
                return Ok(true);
            }
            let issue: RawIssue =
                serde_json::from_value(item).map_err(|e| FetchError::Decode(format!("issue listing: {e}")))?;
            if seen.insert(issue.number) {
                raw.push(issue);
            }
            Ok(raw.len() < self.cfg.max_issues)
        })?;

        let mut issues = raw.into_iter().map(RawIssue::into_record).collect::<Result<Vec<_>, _>>()?;
        sort_issues(&mut issues);
        issues.truncate(self.cfg.max_issues);

        let needs_closer: Vec<u64> = issues
            .iter()
            .filter(|i| i.state == IssueState::Closed && i.closed_by.is_none())
            .map(|i| i.number)
            .collect();
        let closers = map_bounded(&needs_closer, self.cfg.max_in_flight, |&n| {
            let path = format!("/repos/{}/{}/issues/{n}", repo.owner(), repo.name());
            self.get_json::<RawIssue>(&Request::get(path))
                .map(|d| d.closed_by.map(|u| u.login))
                .map_err(|e| FetchError::Detail { id: format!("issue #{n}"), source: Box::new(e) })
        });
        let closers: BTreeMap<u64, Option<String>> =
            needs_closer.into_iter().zip(closers).map(|(n, r)| r.map(|c| (n, c))).collect::<Result<_, _>>()?;
        for issue in &mut issues {
            if let Some(closer) = closers.get(&issue.number) {
                issue.closed_by = closer.clone();
            }
        }
        Ok(issues)
    }

    /// Default-branch commits with commit time at or after `since`, newest
    /// first, each enriched with per-file line counts from its detail.
    pub fn fetch_commits(&self, repo: &RepoRef, since: Timestamp) -> Result<Vec<CommitRecord>, FetchError> {
        self.cfg.check()?;
        let base = Request::get(format!("/repos/{}/{}/commits", repo.owner(), repo.name()))
            .param("since", format_timestamp(&since));
        let mut seen = HashSet::new();
        let mut listed: Vec<(String, Timestamp)> = Vec::new();
        self.paginate(base, |item| {
            let c: RawCommit =
                serde_json::from_value(item).map_err(|e| FetchError::Decode(format!("commit listing: {e}")))?;
            let at = c.committed_at()?;
            if at >= since && seen.insert(c.sha.clone()) {
                listed.push((c.sha, at));
            }
            Ok(true)
        })?;

        let details = map_bounded(&listed, self.cfg.max_in_flight, |(sha, _)| {
            let path = format!("/repos/{}/{}/commits/{sha}", repo.owner(), repo.name());
            self.get_json::<RawCommit>(&Request::get(path))
                .and_then(RawCommit::into_record)
                .map_err(|e| FetchError::Detail { id: sha.clone(), source: Box::new(e) })
        });
        let mut commits = details.into_iter().collect::<Result<Vec<_>, _>>()?;
        commits.sort_by(|a, b| b.committed_at.cmp(&a.committed_at).then_with(|| a.sha.cmp(&b.sha)));
        Ok(commits)
    }

    /// Issues, then every commit since the earliest issue opened minus one
    /// day, stamped with the completion time.
    pub fn fetch_snapshot(&self, repo: &RepoRef) -> Result<RepoSnapshot, FetchError> {
        let issues = self.fetch_issues(repo)?;
        let commits = match issues.iter().map(|i| i.created_at).min() {
            Some(earliest) => self.fetch_commits(repo, earliest - chrono::Duration::days(1))?,
            None => Vec::new(),
        };
        let latest = issues
            .iter()
            .flat_map(|i| [Some(i.created_at), i.closed_at])
            .flatten()
            .chain(commits.iter().map(|c| c.committed_at))
            .max();
        let snapshot_time = latest.map_or(self.clock.now(), |l| l.max(self.clock.now()));
        info!(repo = %repo, issues = issues.len(), commits = commits.len(), "fetched snapshot");
        Ok(RepoSnapshot::new(repo.clone(), snapshot_time, issues, commits))
    }
}

pub fn fetch_issues(repo: &RepoRef, cfg: &FetchConfig) -> Result<Vec<IssueRecord>, FetchError> {
    GitHubClient::connect(cfg.clone())?.fetch_issues(repo)
}

pub fn fetch_commits(repo: &RepoRef, since: Timestamp, cfg: &FetchConfig) -> Result<Vec<CommitRecord>, FetchError> {
    GitHubClient::connect(cfg.clone())?.fetch_commits(repo, since)
}

pub fn fetch_snapshot(repo: &RepoRef, cfg: &FetchConfig) -> Result<RepoSnapshot, FetchError> {
    GitHubClient::connect(cfg.clone())?.fetch_snapshot(repo)
}

fn sort_issues(issues: &mut [IssueRecord]) {
    issues.sort_by(|a, b| b.created_at.cmp(&a.created_at).then(b.number.cmp(&a.number)));
}

fn message(resp: &Response) -> String {
    #[derive(Deserialize)]
    struct Body {
        message: String,
    }
    serde_json::from_slice::<Body>(&resp.body).map(|b| b.message).unwrap_or_else(|_| "no message".into())
}

fn timestamp(field: &str, raw: &str) -> Result<Timestamp, FetchError> {
    parse_timestamp(raw).map_err(|e| FetchError::Decode(format!("{field} {raw:?}: {e}")))
}

#[derive(Deserialize)]
struct RawUser {
    login: String,
}

#[derive(Deserialize)]
struct RawLabel {
    name: String,
    #[serde(default)]
    color: String,
}

#[derive(Deserialize)]
struct RawIssue {
    number: u64,
    title: String,
    state: String,
    created_at: String,
    closed_at: Option<String>,
    user: Option<RawUser>,
    #[serde(default)]
    assignees: Vec<RawUser>,
    #[serde(default)]
    labels: Vec<RawLabel>,
    closed_by: Option<RawUser>,
}

/// Login GitHub shows for deleted accounts.
const GHOST: &str = "ghost";

impl RawIssue {
    fn into_record(self) -> Result<IssueRecord, FetchError> {
        let n = self.number;
        let state: IssueState =
            self.state.parse().map_err(|_| FetchError::Decode(format!("issue #{n}: state {:?}", self.state)))?;
        let created_at = timestamp("created_at", &self.created_at)?;
        let closed_at = match (state, self.closed_at) {
            (IssueState::Closed, Some(at)) => Some(timestamp("closed_at", &at)?),
            (IssueState::Closed, None) => return Err(FetchError::Decode(format!("issue #{n}: closed without closed_at"))),
            // Reopened issues may still report the old closing time.
            (IssueState::Open, _) => None,
        };
        let labels = self
            .labels
            .into_iter()
            .map(|l| {
                if is_rgb_hex(&l.color) {
                    Ok(Label::new(l.name, l.color.to_ascii_lowercase()))
                } else {
                    Err(FetchError::Decode(format!("issue #{n}: label {:?} color {:?}", l.name, l.color)))
                }
            })
            .collect::<Result<_, _>>()?;
        let mut assignees: Vec<String> = Vec::new();
        for a in self.assignees {
            if !assignees.contains(&a.login) {
                assignees.push(a.login);
            }
        }
        Ok(IssueRecord {
            number: n,
            title: self.title,
            state,
            created_at,
            closed_at,
            creator: self.user.map_or_else(|| GHOST.to_string(), |u| u.login),
            closed_by: if state == IssueState::Closed { self.closed_by.map(|u| u.login) } else { None },
            assignees,
            labels,
        })
    }
}

#[derive(Deserialize)]
struct RawActor {
    name: Option<String>,
    date: Option<String>,
}

#[derive(Deserialize)]
struct RawCommitInner {
    message: String,
    author: Option<RawActor>,
    committer: Option<RawActor>,
}

#[derive(Deserialize)]
struct RawFile {
    filename: String,
    additions: Option<u64>,
    deletions: Option<u64>,
}

#[derive(Deserialize)]
struct RawCommit {
    sha: String,
    commit: RawCommitInner,
    author: Option<RawUser>,
    files: Option<Vec<RawFile>>,
}

impl RawCommit {
    /// Committer date, falling back to the author date.
    fn committed_at(&self) -> Result<Timestamp, FetchError> {
        let raw = [&self.commit.committer, &self.commit.author]
            .into_iter()
            .flatten()
            .find_map(|a| a.date.as_deref())
            .ok_or_else(|| FetchError::Decode(format!("commit {}: no date", self.sha)))?;
        timestamp("commit date", raw)
    }

    fn into_record(self) -> Result<CommitRecord, FetchError> {
        if self.sha.len() != 40 || !self.sha.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(FetchError::Decode(format!("bad sha {:?}", self.sha)));
        }
        let committed_at = self.committed_at()?;
        let author = self
            .author
            .map(|u| u.login)
            .or_else(|| self.commit.author.and_then(|a| a.name))
            .filter(|a| !a.is_empty())
            .unwrap_or_else(|| GHOST.to_string());
        let mut stats_missing = self.files.is_none();
        let mut files: Vec<FileChange> = Vec::new();
        for f in self.files.unwrap_or_default() {
            let (add, del) = match (f.additions, f.deletions) {
                (Some(a), Some(d)) => (a, d),
                _ => {
                    stats_missing = true;
                    (0, 0)
                }
            };
            match files.iter_mut().find(|c| c.path == f.filename) {
                Some(c) => *c = FileChange::new(f.filename, c.additions + add, c.deletions + del),
                None => files.push(FileChange::new(f.filename, add, del)),
            }
        }
        Ok(CommitRecord {
            sha: self.sha.to_ascii_lowercase(),
            author,
            committed_at,
            message: self.commit.message,
            files,
            stats_missing,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{FixtureTransport, Recorded};
    use crate::rate::ManualClock;
    use serde_json::{json, Value};

    const ISSUES: &str = "/repos/o/r/issues";
    const COMMITS: &str = "/repos/o/r/commits";

    fn repo() -> RepoRef {
        RepoRef::new("o", "r").unwrap()
    }

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    fn issue(n: u64, created: &str) -> Value {
        json!({
            "number": n, "title": format!("issue {n}"), "state": "open",
            "created_at": created, "closed_at": null, "user": {"login": "alice"},
            "assignees": [], "labels": [{"name": "bug", "color": "D73A4A"}]
        })
    }

    fn pr(n: u64, created: &str) -> Value {
        let mut v = issue(n, created);
        v["pull_request"] = json!({"url": "https://example.invalid/pulls/1"});
        v
    }

    fn sha(n: u64) -> String {
        format!("{n:040x}")
    }

    fn commit(n: u64, date: &str) -> Value {
        json!({
            "sha": sha(n),
            "commit": {"message": format!("change {n}"), "author": {"name": "Bob", "date": date}, "committer": {"name": "Bob", "date": date}},
            "author": {"login": "bob"}
        })
    }

    fn client(t: FixtureTransport) -> GitHubClient<FixtureTransport> {
        let clock = Arc::new(ManualClock::new(ts("2023-06-18T12:00:00Z")));
        GitHubClient::with_transport(t, FetchConfig::default()).with_clock(clock)
    }

    #[test]
    fn pull_requests_are_dropped() {
        let mut t = FixtureTransport::new();
        t.route(
            ISSUES,
            1,
            json!([issue(3, "2023-06-03T00:00:00Z"), pr(2, "2023-06-02T00:00:00Z"), issue(1, "2023-06-01T00:00:00Z")]),
        );
        let issues = client(t).fetch_issues(&repo()).unwrap();
        assert_eq!(issues.iter().map(|i| i.number).collect::<Vec<_>>(), vec![3, 1]);
        assert_eq!(issues[0].labels[0].color, "d73a4a");
    }

    #[test]
    fn empty_repo() {
        let mut t = FixtureTransport::new();
        t.route(ISSUES, 1, json!([]));
        let c = client(t);
        assert!(c.fetch_issues(&repo()).unwrap().is_empty());
        let s = c.fetch_snapshot(&repo()).unwrap();
        assert!(s.commits().is_empty());
        assert_eq!(s.snapshot_time(), ts("2023-06-18T12:00:00Z"));
    }

    #[test]
    fn closed_by_comes_from_detail() {
        let mut t = FixtureTransport::new();
        let mut closed = issue(5, "2023-06-01T00:00:00Z");
        closed["state"] = json!("closed");
        closed["closed_at"] = json!("2023-06-02T00:00:00+02:00");
        t.route(ISSUES, 1, json!([closed.clone()]));
        let mut detail = closed;
        detail["closed_by"] = json!({"login": "carol"});
        t.route("/repos/o/r/issues/5", 1, detail);
        let issues = client(t).fetch_issues(&repo()).unwrap();
        assert_eq!(issues[0].closed_by.as_deref(), Some("carol"));
        assert_eq!(issues[0].closed_at, Some(ts("2023-06-01T22:00:00Z")));
    }

    #[test]
    fn since_is_inclusive() {
        let dates = ["2023-06-05T00:00:00Z", "2023-06-04T00:00:00Z", "2023-06-03T00:00:00Z", "2023-06-02T00:00:00Z", "2023-06-01T00:00:00Z"];
        let mut t = FixtureTransport::new();
        // The listing ignores `since` here; the client filters again.
        t.route(COMMITS, 1, Value::Array(dates.iter().enumerate().map(|(i, d)| commit(i as u64 + 1, d)).collect()));
        for (i, d) in dates.iter().enumerate() {
            let mut detail = commit(i as u64 + 1, d);
            detail["files"] = json!([]);
            t.route(&format!("{COMMITS}/{}", sha(i as u64 + 1)), 1, detail);
        }
        let c = client(t);
        let got = c.fetch_commits(&repo(), ts(dates[2])).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.windows(2).all(|w| w[0].committed_at >= w[1].committed_at));
        assert!(c.fetch_commits(&repo(), ts("2023-06-06T00:00:00Z")).unwrap().is_empty());
    }

    #[test]
    fn detail_file_stats() {
        let mut t = FixtureTransport::new();
        t.route(COMMITS, 1, json!([commit(1, "2023-06-01T00:00:00Z")]));
        let mut detail = commit(1, "2023-06-01T00:00:00Z");
        detail["files"] = json!([
            {"filename": "a.rs", "additions": 3, "deletions": 1, "changes": 4},
            {"filename": "b.rs", "additions": 10, "deletions": 0, "changes": 10}
        ]);
        t.route(&format!("{COMMITS}/{}", sha(1)), 1, detail);
        let got = client(t).fetch_commits(&repo(), ts("2023-05-01T00:00:00Z")).unwrap();
        let changes: Vec<u64> = got[0].files.iter().map(|f| f.changes).collect();
        assert_eq!(changes, vec![4, 10]);
        assert!(!got[0].stats_missing);
        assert_eq!(got[0].author, "bob");
    }

    #[test]
    fn missing_stats_are_flagged() {
        let mut t = FixtureTransport::new();
        t.route(COMMITS, 1, json!([commit(1, "2023-06-01T00:00:00Z"), commit(2, "2023-06-02T00:00:00Z")]));
        let mut no_files = commit(1, "2023-06-01T00:00:00Z");
        no_files["author"] = Value::Null;
        t.route(&format!("{COMMITS}/{}", sha(1)), 1, no_files);
        let mut partial = commit(2, "2023-06-02T00:00:00Z");
        partial["files"] = json!([{"filename": "big.bin"}]);
        t.route(&format!("{COMMITS}/{}", sha(2)), 1, partial);
        let got = client(t).fetch_commits(&repo(), ts("2023-05-01T00:00:00Z")).unwrap();
        assert!(got.iter().all(|c| c.stats_missing));
        assert_eq!(got[0].files, vec![FileChange::new("big.bin", 0, 0)]);
        assert_eq!(got[1].author, "Bob");
    }

    #[test]
    fn failed_detail_names_the_commit() {
        let mut t = FixtureTransport::new();
        t.route(COMMITS, 1, json!([commit(7, "2023-06-01T00:00:00Z")]));
        let err = client(t).fetch_commits(&repo(), ts("2023-05-01T00:00:00Z")).unwrap_err();
        match err {
            FetchError::Detail { id, source } => {
                assert_eq!(id, sha(7));
                assert_eq!(source.name(), "NotFound");
            }
            other => panic!("{other:?}"),
        }
    }

    fn status(path: &str, status: u16, headers: &[(&str, &str)]) -> Recorded {
        Recorded {
            method: "GET".into(),
            path: path.into(),
            page: 1,
            status,
            headers: headers.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            body: json!({"message": "nope"}),
        }
    }

    #[test]
    fn status_mapping() {
        let reset = ts("2023-06-18T12:01:30Z").timestamp().to_string();
        let cases: Vec<(Recorded, &str)> = vec![
            (status(ISSUES, 401, &[]), "AuthError"),
            (status(ISSUES, 403, &[]), "AuthError"),
            (status(ISSUES, 403, &[("X-RateLimit-Remaining", "0"), ("X-RateLimit-Reset", &reset)]), "RateLimited"),
            (status(ISSUES, 404, &[]), "NotFound"),
            (status(ISSUES, 418, &[]), "UnexpectedStatus"),
            (status(ISSUES, 502, &[]), "NetworkError"),
        ];
        for (rec, name) in cases {
            let mut t = FixtureTransport::new();
            t.insert(rec);
            let clock = Arc::new(ManualClock::new(ts("2023-06-18T12:00:00Z")));
            let cfg = FetchConfig { rate_limit_policy: RateLimitPolicy::Fail, ..Default::default() };
            let c = GitHubClient::with_transport(t, cfg).with_clock(clock);
            assert_eq!(c.fetch_issues(&repo()).unwrap_err().name(), name);
        }
    }

    #[test]
    fn server_errors_retry_with_backoff() {
        let mut t = FixtureTransport::new();
        t.route(ISSUES, 1, json!([]));
        t.fail_times(ISSUES, 1, 2);
        let clock = Arc::new(ManualClock::new(ts("2023-06-18T12:00:00Z")));
        let c = GitHubClient::with_transport(t, FetchConfig::default()).with_clock(clock.clone());
        assert!(c.fetch_issues(&repo()).unwrap().is_empty());
        let sleeps = clock.sleeps();
        assert_eq!(sleeps.len(), 2);
        assert!(sleeps[0] >= Duration::from_millis(250) && sleeps[0] < Duration::from_millis(750));
        assert!(sleeps[1] >= Duration::from_millis(500) && sleeps[1] < Duration::from_millis(1500));
    }

    #[test]
    fn retries_run_out() {
        let mut t = FixtureTransport::new();
        t.route(ISSUES, 1, json!([]));
        t.fail_times(ISSUES, 1, 10);
        let clock = Arc::new(ManualClock::new(ts("2023-06-18T12:00:00Z")));
        let c = GitHubClient::with_transport(t, FetchConfig::default()).with_clock(clock.clone());
        assert_eq!(c.fetch_issues(&repo()).unwrap_err().name(), "NetworkError");
        assert_eq!(clock.sleeps().len(), 3);
        assert_eq!(c.transport().requests().len(), 4);
    }

    #[test]
    fn client_errors_are_not_retried() {
        let mut t = FixtureTransport::new();
        t.insert(status(ISSUES, 404, &[]));
        let c = client(t);
        assert!(c.fetch_issues(&repo()).is_err());
        assert_eq!(c.transport().requests().len(), 1);
    }

    #[test]
    fn waits_out_the_rate_limit() {
        let mut t = FixtureTransport::new();
        let reset = ts("2023-06-18T12:01:30Z").timestamp().to_string();
        t.insert(Recorded {
            headers: [("X-RateLimit-Remaining", "0"), ("X-RateLimit-Reset", reset.as_str()), ("Date", "Sun, 18 Jun 2023 12:00:00 GMT")]
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            body: json!([issue(1, "2023-06-01T00:00:00Z")]),
            ..status(ISSUES, 200, &[])
        });
        t.route("/repos/o/r/issues/1", 1, issue(1, "2023-06-01T00:00:00Z"));
        let clock = Arc::new(ManualClock::new(ts("2023-06-18T12:00:00Z")));
        let c = GitHubClient::with_transport(t, FetchConfig::default()).with_clock(clock.clone());
        assert_eq!(c.fetch_issues(&repo()).unwrap().len(), 1);
        assert_eq!(c.rate_limit().unwrap().remaining, 0);
        // The next request has to wait for the window to reset.
        let _ = c.fetch_issues(&repo()).unwrap();
        assert_eq!(clock.sleeps(), vec![Duration::from_secs(90)]);
    }
}
