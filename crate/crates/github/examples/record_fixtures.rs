//! Writes the canned REST exchanges used by the offline client tests.
//!
//! `cargo run -p issuescope-github --example record_fixtures -- fixtures/recorded/acme-widgets`
//!
//! The repository `acme/widgets` has 248 listing items, one in six a pull
//! request. Page 2 repeats the last item of page 1, as GitHub does when an
//! issue is filed mid-pagination, and page 3 is short.

use std::path::PathBuf;

use chrono::{Duration, TimeZone, Utc};
use issuescope_github::Recorded;
use serde_json::{json, Value};

const REPO: &str = "/repos/acme/widgets";
const ITEMS: usize = 248;
const RESET: i64 = 1_687_093_200;

fn at(hours_before: i64) -> String {
    let base = Utc.with_ymd_and_hms(2023, 6, 18, 0, 0, 0).unwrap();
    (base - Duration::hours(hours_before)).format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

fn headers(remaining: usize) -> Value {
    json!({
        "Date": "Sun, 18 Jun 2023 12:00:00 GMT",
        "X-RateLimit-Limit": "5000",
        "X-RateLimit-Remaining": (4900 - remaining).to_string(),
        "X-RateLimit-Reset": RESET.to_string(),
    })
}

fn item(i: usize) -> Value {
    let number = 1000 - i as u64;
    let closed = i % 5 == 2;
    let mut v = json!({
        "number": number,
        "title": format!("Widget misbehaves in case {number}"),
        "state": if closed { "closed" } else { "open" },
        "created_at": at(i as i64 * 3),
        "closed_at": if closed { Value::from(at(i as i64 * 3 - 2)) } else { Value::Null },
        "user": {"login": format!("user{}", i % 7)},
        "assignees": if i.is_multiple_of(4) { json!([{"login": "maintainer"}]) } else { json!([]) },
        "labels": match i % 3 {
            0 => json!([{"name": "bug", "color": "d73a4a"}]),
            1 => json!([{"name": "enhancement", "color": "A2EEEF"}, {"name": "help wanted", "color": "008672"}]),
            _ => json!([]),
        },
    });
    if i % 6 == 5 {
        v["pull_request"] = json!({"url": format!("https://api.github.com{REPO}/pulls/{number}")});
    }
    v
}

fn sha(n: u64) -> String {
    format!("{:040x}", n.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn commit(n: u64, hours_before: i64) -> Value {
    json!({
        "sha": sha(n),
        "commit": {
            "message": format!("change {n}"),
            "author": {"name": "Dev Eloper", "date": at(hours_before + 1)},
            "committer": {"name": "GitHub", "date": at(hours_before)},
        },
        "author": {"login": "developer"},
    })
}

fn main() {
    let out = PathBuf::from(std::env::args().nth(1).expect("usage: record_fixtures OUT_DIR"));
    std::fs::create_dir_all(&out).unwrap();
    let mut calls = 0;
    let mut next = || {
        calls += 1;
        headers(calls)
    };

    let pages = [(1, 0..100), (2, 99..199), (3, 199..ITEMS)];
    let listing: Vec<Value> = pages
        .iter()
        .map(|(page, range)| {
            json!({
                "path": format!("{REPO}/issues"),
                "page": page,
                "headers": next(),
                "body": range.clone().map(item).collect::<Vec<_>>(),
            })
        })
        .collect();

    let details: Vec<Value> = (0..ITEMS)
        .map(item)
        .filter(|v| v["state"] == "closed" && v.get("pull_request").is_none())
        .map(|mut v| {
            v["closed_by"] = json!({"login": "maintainer"});
            json!({"path": format!("{REPO}/issues/{}", v["number"]), "headers": next(), "body": v})
        })
        .collect();

    let oldest = (ITEMS as i64 - 1) * 3;
    let commits: Vec<(u64, i64, Value)> = vec![
        (1, 2, json!([{"filename": "src/lib.rs", "additions": 3, "deletions": 1, "changes": 4}])),
        (2, 30, json!([{"filename": "README.md", "additions": 10, "deletions": 0, "changes": 10}])),
        (3, 200, json!([
            {"filename": "src/lib.rs", "additions": 1, "deletions": 1, "changes": 2},
            {"filename": "assets/logo.png", "changes": 0}
        ])),
        (4, 400, Value::Null),
        (5, oldest + 20, json!([{"filename": "Cargo.toml", "additions": 1, "deletions": 0, "changes": 1}])),
    ];
    let mut listed: Vec<Value> = commits.iter().map(|(n, h, _)| commit(*n, *h)).collect();
    // Older than the window: listed by a server that ignores `since`.
    listed.push(commit(6, oldest + 48));
    let mut commit_calls = vec![json!({"path": format!("{REPO}/commits"), "headers": next(), "body": listed})];
    for (n, h, files) in commits {
        let mut body = commit(n, h);
        if !files.is_null() {
            body["files"] = files;
        }
        commit_calls.push(json!({"path": format!("{REPO}/commits/{}", sha(n)), "headers": next(), "body": body}));
    }

    for (name, entries) in [("issues.json", listing), ("issue_details.json", details), ("commits.json", commit_calls)] {
        // Round-trip through the recording type so the files always load.
        let typed: Vec<Recorded> = serde_json::from_value(Value::Array(entries)).unwrap();
        let text = serde_json::to_string_pretty(&typed).unwrap() + "\n";
        std::fs::write(out.join(name), text).unwrap();
    }
    println!("wrote {}", out.display());
}
