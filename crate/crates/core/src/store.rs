//! On-disk snapshot format.
//!
//! A snapshot directory holds four files:
//!
//! ```text
//! meta.json    {owner, name, snapshot_time, schema_version}
//! issues.csv   number,title,state,created_at,closed_at,creator,closed_by,assignees,labels
//! commits.csv  sha,author,committed_at,message,stats_missing
//! files.csv    sha,path,additions,deletions,changes
//! ```
//!
//! CSVs are UTF-8, RFC 4180 quoted, LF terminated. Timestamps are ISO-8601
//! with a trailing `Z`. `assignees` is a `|`-separated login list and
//! `labels` a `|`-separated list of `name#color` pairs; `%`, `|` and `#`
//! inside packed values are written as `%25`, `%7C` and `%23`.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    format_timestamp, parse_timestamp, CommitRecord, FileChange, IssueRecord, Label,
    RepoRef, RepoSnapshot, Timestamp, SCHEMA_VERSION,
};
use crate::validate::{commit_rules, file_rules, issue_rules, validate_snapshot, RecordId, Rule};

pub const META_FILE: &str = "meta.json";
pub const ISSUES_FILE: &str = "issues.csv";
pub const COMMITS_FILE: &str = "commits.csv";
pub const FILES_FILE: &str = "files.csv";

const ISSUES_HEADER: [&str; 9] = [
    "number", "title", "state", "created_at", "closed_at", "creator", "closed_by", "assignees",
    "labels",
];
const COMMITS_HEADER: [&str; 5] = ["sha", "author", "committed_at", "message", "stats_missing"];
const FILES_HEADER: [&str; 5] = ["sha", "path", "additions", "deletions", "changes"];

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot serialize {file}: {message}")]
    Serialization { file: &'static str, message: String },
    #[error("snapshot file missing: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("unsupported schema_version {found} (this build reads {expected})")]
    SchemaVersionMismatch { found: u32, expected: u32 },
    #[error("{file} row {row}: {message}")]
    Malformed { file: &'static str, row: usize, message: String },
    #[error("{}: violates rule \"{rule}\"", location(file, *row, record))]
    InvariantViolation { file: &'static str, row: Option<usize>, record: String, rule: Rule },
}

fn location(file: &str, row: Option<usize>, record: &str) -> String {
    match row {
        Some(r) => format!("{file} row {r} ({record})"),
        None => format!("{file} ({record})"),
    }
}

impl StoreError {
    fn io(path: &Path, source: io::Error) -> Self {
        StoreError::Io { path: path.to_path_buf(), source }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    owner: String,
    name: String,
    snapshot_time: String,
    schema_version: u32,
}

fn escape_packed(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            '|' => out.push_str("%7C"),
            '#' => out.push_str("%23"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_packed(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('%') {
        out.push_str(&rest[..pos]);
        let code = rest.get(pos + 1..pos + 3).ok_or_else(|| format!("truncated escape in {s:?}"))?;
        out.push(match code.to_ascii_uppercase().as_str() {
            "25" => '%',
            "7C" => '|',
            "23" => '#',
            other => return Err(format!("unknown escape %{other} in {s:?}")),
        });
        rest = &rest[pos + 3..];
    }
    out.push_str(rest);
    Ok(out)
}

fn pack_logins(logins: &[String]) -> Result<String, String> {
    if logins.iter().any(|l| l.is_empty()) {
        return Err("empty login in list".into());
    }
    Ok(logins.iter().map(|l| escape_packed(l)).collect::<Vec<_>>().join("|"))
}

fn unpack_logins(cell: &str) -> Result<Vec<String>, String> {
    if cell.is_empty() {
        return Ok(Vec::new());
    }
    cell.split('|').map(unescape_packed).collect()
}

fn pack_labels(labels: &[Label]) -> String {
    labels
        .iter()
        .map(|l| format!("{}#{}", escape_packed(&l.name), escape_packed(&l.color)))
        .collect::<Vec<_>>()
        .join("|")
}

fn unpack_labels(cell: &str) -> Result<Vec<Label>, String> {
    if cell.is_empty() {
        return Ok(Vec::new());
    }
    cell.split('|')
        .map(|pair| {
            let (name, color) =
                pair.split_once('#').ok_or_else(|| format!("label {pair:?} lacks '#color'"))?;
            Ok(Label::new(unescape_packed(name)?, unescape_packed(color)?))
        })
        .collect()
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new())
}

fn finish(file: &'static str, w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, StoreError> {
    w.into_inner().map_err(|e| StoreError::Serialization { file, message: e.to_string() })
}

fn ser_err(file: &'static str) -> impl Fn(csv::Error) -> StoreError {
    move |e| StoreError::Serialization { file, message: e.to_string() }
}

fn opt_ts(t: &Option<Timestamp>) -> String {
    t.as_ref().map(format_timestamp).unwrap_or_default()
}

/// Renders the four snapshot files in memory, keyed by file name.
pub fn render_snapshot(s: &RepoSnapshot) -> Result<Vec<(&'static str, Vec<u8>)>, StoreError> {
    let meta = Meta {
        owner: s.repo().owner().to_string(),
        name: s.repo().name().to_string(),
        snapshot_time: format_timestamp(&s.snapshot_time()),
        schema_version: s.schema_version(),
    };
    let mut meta_bytes = serde_json::to_vec_pretty(&meta)
        .map_err(|e| StoreError::Serialization { file: META_FILE, message: e.to_string() })?;
    meta_bytes.push(b'\n');

    let mut w = csv_writer();
    w.write_record(ISSUES_HEADER).map_err(ser_err(ISSUES_FILE))?;
    for i in s.issues() {
        let assignees = pack_logins(&i.assignees).map_err(|m| StoreError::Serialization {
            file: ISSUES_FILE,
            message: format!("issue {}: {m}", i.number),
        })?;
        w.write_record([
            i.number.to_string(),
            i.title.clone(),
            i.state.as_str().to_string(),
            format_timestamp(&i.created_at),
            opt_ts(&i.closed_at),
            i.creator.clone(),
            i.closed_by.clone().unwrap_or_default(),
            assignees,
            pack_labels(&i.labels),
        ])
        .map_err(ser_err(ISSUES_FILE))?;
    }
    let issues = finish(ISSUES_FILE, w)?;

    let mut cw = csv_writer();
    let mut fw = csv_writer();
    cw.write_record(COMMITS_HEADER).map_err(ser_err(COMMITS_FILE))?;
    fw.write_record(FILES_HEADER).map_err(ser_err(FILES_FILE))?;
    for c in s.commits() {
        cw.write_record([
            c.sha.as_str(),
            c.author.as_str(),
            &format_timestamp(&c.committed_at),
            c.message.as_str(),
            if c.stats_missing { "true" } else { "false" },
        ])
        .map_err(ser_err(COMMITS_FILE))?;
        for f in &c.files {
            fw.write_record([
                c.sha.clone(),
                f.path.clone(),
                f.additions.to_string(),
                f.deletions.to_string(),
                f.changes.to_string(),
            ])
            .map_err(ser_err(FILES_FILE))?;
        }
    }
    Ok(vec![
        (META_FILE, meta_bytes),
        (ISSUES_FILE, issues),
        (COMMITS_FILE, finish(COMMITS_FILE, cw)?),
        (FILES_FILE, finish(FILES_FILE, fw)?),
    ])
}

/// Writes the snapshot into `dir`, creating it if needed. Output bytes depend
/// only on the snapshot.
pub fn save_snapshot(s: &RepoSnapshot, dir: &Path) -> Result<(), StoreError> {
    let rendered = render_snapshot(s)?;
    fs::create_dir_all(dir).map_err(|e| StoreError::io(dir, e))?;
    for (name, bytes) in rendered {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| StoreError::io(&path, e))?;
    }
    Ok(())
}

/// Saves into a sibling temporary directory and renames it over `dir`, so a
/// failed save leaves any previous snapshot at `dir` untouched.
pub fn save_snapshot_atomic(s: &RepoSnapshot, dir: &Path) -> Result<(), StoreError> {
    let parent = match dir.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| StoreError::io(&parent, e))?;
    let staging = tempfile::Builder::new()
        .prefix(".issuescope-staging-")
        .tempdir_in(&parent)
        .map_err(|e| StoreError::io(&parent, e))?;
    save_snapshot(s, staging.path())?;

    let staged = staging.keep();
    let backup = if dir.exists() {
        let backup = tempfile::Builder::new()
            .prefix(".issuescope-previous-")
            .tempdir_in(&parent)
            .map_err(|e| StoreError::io(&parent, e))?
            .keep();
        fs::remove_dir(&backup).map_err(|e| StoreError::io(&backup, e))?;
        fs::rename(dir, &backup).map_err(|e| StoreError::io(dir, e))?;
        Some(backup)
    } else {
        None
    };
    if let Err(e) = fs::rename(&staged, dir) {
        if let Some(b) = &backup {
            let _ = fs::rename(b, dir);
        }
        let _ = fs::remove_dir_all(&staged);
        return Err(StoreError::io(dir, e));
    }
    if let Some(b) = backup {
        fs::remove_dir_all(&b).map_err(|e| StoreError::io(&b, e))?;
    }
    Ok(())
}

fn read_file(dir: &Path, name: &str) -> Result<Vec<u8>, StoreError> {
    let path = dir.join(name);
    fs::read(&path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => StoreError::MissingFile(path),
        _ => StoreError::io(&path, e),
    })
}

fn read_rows(
    file: &'static str,
    bytes: &[u8],
    header: &[&str],
) -> Result<Vec<csv::StringRecord>, StoreError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let found = r
        .headers()
        .map_err(|e| StoreError::Malformed { file, row: 0, message: e.to_string() })?;
    if found.iter().ne(header.iter().copied()) {
        return Err(StoreError::Malformed {
            file,
            row: 0,
            message: format!("expected header {}", header.join(",")),
        });
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            rec.map_err(|e| StoreError::Malformed { file, row: i + 1, message: e.to_string() })
        })
        .collect()
}

struct RowCtx {
    file: &'static str,
    row: usize,
}

impl RowCtx {
    fn bad(&self, message: impl Into<String>) -> StoreError {
        StoreError::Malformed { file: self.file, row: self.row, message: message.into() }
    }

    fn violation(&self, record: &RecordId, rule: Rule) -> StoreError {
        StoreError::InvariantViolation {
            file: self.file,
            row: Some(self.row),
            record: record.to_string(),
            rule,
        }
    }

    fn ts(&self, field: &str, v: &str) -> Result<Timestamp, StoreError> {
        parse_timestamp(v).map_err(|e| self.bad(format!("{field}: {e}")))
    }

    fn opt_ts(&self, field: &str, v: &str) -> Result<Option<Timestamp>, StoreError> {
        if v.is_empty() {
            Ok(None)
        } else {
            self.ts(field, v).map(Some)
        }
    }

    fn uint(&self, field: &str, v: &str) -> Result<u64, StoreError> {
        v.parse().map_err(|_| self.bad(format!("{field}: not a non-negative integer: {v:?}")))
    }
}

fn parse_issue(ctx: &RowCtx, r: &csv::StringRecord) -> Result<IssueRecord, StoreError> {
    let issue = IssueRecord {
        number: ctx.uint("number", &r[0])?,
        title: r[1].to_string(),
        state: r[2].parse().map_err(|e: String| ctx.bad(e))?,
        created_at: ctx.ts("created_at", &r[3])?,
        closed_at: ctx.opt_ts("closed_at", &r[4])?,
        creator: r[5].to_string(),
        closed_by: (!r[6].is_empty()).then(|| r[6].to_string()),
        assignees: unpack_logins(&r[7]).map_err(|e| ctx.bad(format!("assignees: {e}")))?,
        labels: unpack_labels(&r[8]).map_err(|e| ctx.bad(format!("labels: {e}")))?,
    };
    if let Some(rule) = issue_rules(&issue).into_iter().next() {
        return Err(ctx.violation(&RecordId::Issue(issue.number), rule));
    }
    Ok(issue)
}

fn parse_bool(ctx: &RowCtx, v: &str) -> Result<bool, StoreError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ctx.bad(format!("stats_missing: expected true/false, got {other:?}"))),
    }
}

/// Loads and validates a snapshot directory written by [`save_snapshot`].
pub fn load_snapshot(dir: &Path) -> Result<RepoSnapshot, StoreError> {
    let raw = [META_FILE, ISSUES_FILE, COMMITS_FILE, FILES_FILE]
        .map(|name| read_file(dir, name));
    let [meta, issues, commits, files] = raw;
    let (meta, issues, commits, files) = (meta?, issues?, commits?, files?);

    let meta: Meta = serde_json::from_slice(&meta).map_err(|e| StoreError::Malformed {
        file: META_FILE,
        row: 0,
        message: e.to_string(),
    })?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(StoreError::SchemaVersionMismatch {
            found: meta.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    let meta_bad = |message: String| StoreError::Malformed { file: META_FILE, row: 0, message };
    let repo = RepoRef::new(meta.owner, meta.name).map_err(|e| meta_bad(e.to_string()))?;
    let snapshot_time =
        parse_timestamp(&meta.snapshot_time).map_err(|e| meta_bad(format!("snapshot_time: {e}")))?;

    let issues = read_rows(ISSUES_FILE, &issues, &ISSUES_HEADER)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_issue(&RowCtx { file: ISSUES_FILE, row: i + 1 }, r))
        .collect::<Result<Vec<_>, _>>()?;

    let mut commit_list = Vec::new();
    let mut by_sha: HashMap<String, usize> = HashMap::new();
    for (i, r) in read_rows(COMMITS_FILE, &commits, &COMMITS_HEADER)?.iter().enumerate() {
        let ctx = RowCtx { file: COMMITS_FILE, row: i + 1 };
        let commit = CommitRecord {
            sha: r[0].to_string(),
            author: r[1].to_string(),
            committed_at: ctx.ts("committed_at", &r[2])?,
            message: r[3].to_string(),
            files: Vec::new(),
            stats_missing: parse_bool(&ctx, &r[4])?,
        };
        let id = RecordId::Commit(commit.sha.clone());
        if let Some(rule) = commit_rules(&commit).into_iter().next() {
            return Err(ctx.violation(&id, rule));
        }
        if by_sha.insert(commit.sha.clone(), commit_list.len()).is_some() {
            return Err(ctx.violation(&id, Rule::UniqueSha));
        }
        commit_list.push(commit);
    }

    for (i, r) in read_rows(FILES_FILE, &files, &FILES_HEADER)?.iter().enumerate() {
        let ctx = RowCtx { file: FILES_FILE, row: i + 1 };
        let file = FileChange {
            path: r[1].to_string(),
            additions: ctx.uint("additions", &r[2])?,
            deletions: ctx.uint("deletions", &r[3])?,
            changes: ctx.uint("changes", &r[4])?,
        };
        let id = RecordId::File { sha: r[0].to_string(), path: file.path.clone() };
        if let Some(rule) = file_rules(&file).into_iter().next() {
            return Err(ctx.violation(&id, rule));
        }
        let idx = *by_sha
            .get(&r[0])
            .ok_or_else(|| ctx.bad(format!("file row references unknown commit {}", &r[0])))?;
        let commit = &mut commit_list[idx];
        if commit.files.iter().any(|f| f.path == file.path) {
            return Err(ctx.violation(&id, Rule::UniquePath));
        }
        commit.files.push(file);
    }

    let snapshot = RepoSnapshot::new(repo, snapshot_time, issues, commit_list);
    if let Some(v) = validate_snapshot(&snapshot).into_iter().next() {
        let (file, row) = match &v.record {
            RecordId::Issue(n) => (
                ISSUES_FILE,
                snapshot.issues().iter().rposition(|i| i.number == *n).map(|p| p + 1),
            ),
            RecordId::Commit(sha) => (
                COMMITS_FILE,
                snapshot.commits().iter().position(|c| &c.sha == sha).map(|p| p + 1),
            ),
            RecordId::File { .. } => (FILES_FILE, None),
            RecordId::Snapshot => (META_FILE, None),
        };
        return Err(StoreError::InvariantViolation {
            file,
            row,
            record: v.record.to_string(),
            rule: v.rule,
        });
    }
    Ok(snapshot)
}

/// Reads only `meta.json`; used to list snapshot directories cheaply.
pub fn read_meta(dir: &Path) -> Result<(RepoRef, Timestamp), StoreError> {
    let bytes = read_file(dir, META_FILE)?;
    let meta: Meta = serde_json::from_slice(&bytes).map_err(|e| StoreError::Malformed {
        file: META_FILE,
        row: 0,
        message: e.to_string(),
    })?;
    if meta.schema_version != SCHEMA_VERSION {
        return Err(StoreError::SchemaVersionMismatch {
            found: meta.schema_version,
            expected: SCHEMA_VERSION,
        });
    }
    let bad = |message: String| StoreError::Malformed { file: META_FILE, row: 0, message };
    let repo = RepoRef::new(meta.owner, meta.name).map_err(|e| bad(e.to_string()))?;
    let t = parse_timestamp(&meta.snapshot_time).map_err(|e| bad(e.to_string()))?;
    Ok((repo, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_timestamp, IssueState};

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    fn sample() -> RepoSnapshot {
        let issues = vec![
            IssueRecord {
                number: 1,
                title: "a \"quoted\", title".into(),
                state: IssueState::Closed,
                created_at: ts("2023-06-01T00:00:00Z"),
                closed_at: Some(ts("2023-06-06T00:00:00Z")),
                creator: "alice".into(),
                closed_by: Some("bob".into()),
                assignees: vec!["bob".into(), "we|ird%".into()],
                labels: vec![Label::new("type: bug", "d73a4a"), Label::new("C#|x", "008672")],
            },
            IssueRecord {
                number: 2,
                title: "ünïcødé ✓".into(),
                state: IssueState::Open,
                created_at: ts("2023-06-02T00:00:00Z"),
                closed_at: None,
                creator: "carol".into(),
                closed_by: None,
                assignees: vec![],
                labels: vec![],
            },
        ];
        let commits = vec![CommitRecord {
            sha: "a".repeat(40),
            author: "dave".into(),
            committed_at: ts("2023-06-03T10:20:30Z"),
            message: "fix: line one\n\nbody, with comma\r\nand crlf".into(),
            files: vec![FileChange::new("src/a.rs", 3, 1), FileChange::new("b,c.md", 10, 0)],
            stats_missing: false,
        }];
        RepoSnapshot::new(RepoRef::new("o", "r").unwrap(), ts("2023-06-18T12:00:00Z"), issues, commits)
    }

    fn file(dir: &Path, name: &str) -> String {
        fs::read_to_string(dir.join(name)).unwrap()
    }

    #[test]
    fn empty_snapshot_writes_headers_only() {
        let tmp = tempfile::tempdir().unwrap();
        let s = RepoSnapshot::new(RepoRef::new("o", "r").unwrap(), ts("2023-06-18T12:00:00Z"), vec![], vec![]);
        save_snapshot(&s, tmp.path()).unwrap();
        assert_eq!(file(tmp.path(), ISSUES_FILE), format!("{}\n", ISSUES_HEADER.join(",")));
        assert_eq!(file(tmp.path(), COMMITS_FILE), "sha,author,committed_at,message,stats_missing\n");
        assert_eq!(file(tmp.path(), FILES_FILE), "sha,path,additions,deletions,changes\n");
        let meta = file(tmp.path(), META_FILE);
        assert!(meta.contains("\"snapshot_time\": \"2023-06-18T12:00:00Z\""));
        assert_eq!(load_snapshot(tmp.path()).unwrap(), s);
    }

    #[test]
    fn quoting_follows_rfc4180() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        let issues = file(tmp.path(), ISSUES_FILE);
        assert!(issues.contains(r#""a ""quoted"", title""#), "{issues}");
        assert!(issues.contains("bob|we%7Cird%25"));
        assert!(issues.contains("type: bug#d73a4a|C%23%7Cx#008672"));
        assert!(!issues.contains('\r'));
    }

    #[test]
    fn file_rows_match_file_changes() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        assert_eq!(file(tmp.path(), FILES_FILE).lines().count(), 1 + 2);
    }

    #[test]
    fn round_trip_and_byte_stable() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), a.path()).unwrap();
        let loaded = load_snapshot(a.path()).unwrap();
        assert_eq!(loaded, sample());
        save_snapshot(&loaded, b.path()).unwrap();
        for name in [META_FILE, ISSUES_FILE, COMMITS_FILE, FILES_FILE] {
            assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
        }
    }

    #[test]
    fn missing_file() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        fs::remove_file(tmp.path().join(FILES_FILE)).unwrap();
        assert!(matches!(load_snapshot(tmp.path()), Err(StoreError::MissingFile(p)) if p.ends_with(FILES_FILE)));
    }

    #[test]
    fn schema_version_mismatch() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        let meta = file(tmp.path(), META_FILE).replace("\"schema_version\": 1", "\"schema_version\": 2");
        fs::write(tmp.path().join(META_FILE), meta).unwrap();
        assert!(matches!(
            load_snapshot(tmp.path()),
            Err(StoreError::SchemaVersionMismatch { found: 2, expected: 1 })
        ));
    }

    #[test]
    fn closed_without_closed_at_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        let issues = file(tmp.path(), ISSUES_FILE)
            .replace("closed,2023-06-01T00:00:00Z,2023-06-06T00:00:00Z", "closed,2023-06-01T00:00:00Z,");
        fs::write(tmp.path().join(ISSUES_FILE), issues).unwrap();
        let err = load_snapshot(tmp.path()).unwrap_err();
        match &err {
            StoreError::InvariantViolation { file, row, rule, .. } => {
                assert_eq!(*file, ISSUES_FILE);
                assert_eq!(*row, Some(1));
                assert_eq!(*rule, Rule::ClosedAtMatchesState);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("issues.csv row 1"));
    }

    #[test]
    fn changes_must_equal_sum() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        let files = file(tmp.path(), FILES_FILE).replace("src/a.rs,3,1,4", "src/a.rs,3,1,5");
        fs::write(tmp.path().join(FILES_FILE), files).unwrap();
        assert!(matches!(
            load_snapshot(tmp.path()),
            Err(StoreError::InvariantViolation { rule: Rule::ChangesSum, row: Some(1), .. })
        ));
    }

    #[test]
    fn duplicate_issue_number_names_row() {
        let tmp = tempfile::tempdir().unwrap();
        save_snapshot(&sample(), tmp.path()).unwrap();
        let issues = file(tmp.path(), ISSUES_FILE).replace("\n2,", "\n1,");
        fs::write(tmp.path().join(ISSUES_FILE), issues).unwrap();
        assert!(matches!(
            load_snapshot(tmp.path()),
            Err(StoreError::InvariantViolation { rule: Rule::UniqueNumber, row: Some(2), .. })
        ));
    }

    #[test]
    fn empty_assignee_cannot_be_packed() {
        let mut issues = sample().issues().to_vec();
        issues[1].assignees = vec![String::new()];
        let s = RepoSnapshot::new(RepoRef::new("o", "r").unwrap(), ts("2023-06-18T12:00:00Z"), issues, vec![]);
        let tmp = tempfile::tempdir().unwrap();
        assert!(matches!(save_snapshot(&s, tmp.path()), Err(StoreError::Serialization { .. })));
    }

    #[test]
    fn atomic_save_keeps_previous_on_failure() {
        let parent = tempfile::tempdir().unwrap();
        let dir = parent.path().join("snap");
        save_snapshot_atomic(&sample(), &dir).unwrap();
        let before = file(&dir, ISSUES_FILE);

        let mut issues = sample().issues().to_vec();
        issues[0].assignees = vec![String::new()];
        let bad = RepoSnapshot::new(RepoRef::new("o", "r").unwrap(), ts("2023-06-18T12:00:00Z"), issues, vec![]);
        assert!(save_snapshot_atomic(&bad, &dir).is_err());
        assert_eq!(file(&dir, ISSUES_FILE), before);

        let entries: Vec<_> = fs::read_dir(parent.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert_eq!(entries, vec![std::ffi::OsString::from("snap")]);
    }

    #[test]
    fn atomic_save_replaces_previous() {
        let parent = tempfile::tempdir().unwrap();
        let dir = parent.path().join("snap");
        save_snapshot_atomic(&sample(), &dir).unwrap();
        let empty = RepoSnapshot::new(RepoRef::new("o", "r").unwrap(), ts("2023-06-18T12:00:00Z"), vec![], vec![]);
        save_snapshot_atomic(&empty, &dir).unwrap();
        assert_eq!(load_snapshot(&dir).unwrap(), empty);
        assert_eq!(fs::read_dir(parent.path()).unwrap().count(), 1);
    }

    #[test]
    fn packed_escape_round_trip() {
        for s in ["", "plain", "%", "a|b#c%d", "%7C literal"] {
            assert_eq!(unescape_packed(&escape_packed(s)).unwrap(), s);
        }
        assert!(unescape_packed("%4").is_err());
        assert!(unescape_packed("%41").is_err());
    }
}
