//! Regenerates the committed case-study snapshots under `fixtures/snapshots`.
//!
//!     cargo run -p issuescope-core --example make_fixtures -- fixtures/snapshots

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use issuescope_core::analytics::{
    compute_histogram, correlate_commits, detect_bug_fix, file_totals, label_census, rank_issues, Ranking,
};
use issuescope_core::model::{
    format_timestamp, parse_timestamp, CommitRecord, FileChange, IssueRecord, IssueState, Label, RepoRef, RepoSnapshot, Timestamp,
};
use issuescope_core::store::save_snapshot;
use issuescope_core::validate::validate_snapshot;

const SNAPSHOT_TIME: &str = "2023-06-18T12:00:00Z";

fn ts(s: &str) -> Timestamp {
    parse_timestamp(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

struct Issue<'a> {
    number: u64,
    title: &'a str,
    created: &'a str,
    closed: Option<(&'a str, &'a str)>,
    creator: &'a str,
    assignees: &'a [&'a str],
    labels: &'a [(&'a str, &'a str)],
}

impl Issue<'_> {
    fn record(&self) -> IssueRecord {
        IssueRecord {
            number: self.number,
            title: self.title.into(),
            state: if self.closed.is_some() { IssueState::Closed } else { IssueState::Open },
            created_at: ts(self.created),
            closed_at: self.closed.map(|(at, _)| ts(at)),
            creator: self.creator.into(),
            closed_by: self.closed.map(|(_, by)| by.into()),
            assignees: self.assignees.iter().map(|s| s.to_string()).collect(),
            labels: self.labels.iter().map(|(n, c)| Label::new(*n, *c)).collect(),
        }
    }
}

type Files<'a> = Vec<(&'a str, u64, u64)>;

/// Forty hex digits derived from the repo and commit position.
fn sha(repo: &str, i: usize) -> String {
    let mut out = String::new();
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in repo.bytes().chain(i.to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    while out.len() < 40 {
        h ^= h >> 33;
        h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
        h ^= h >> 29;
        out.push_str(&format!("{h:016x}"));
    }
    out.truncate(40);
    out
}

fn commits(repo: &str, rows: &[(&str, &str, &str, Files)]) -> Vec<CommitRecord> {
    let mut out: Vec<CommitRecord> = rows
        .iter()
        .enumerate()
        .map(|(i, (at, author, message, files))| CommitRecord {
            sha: sha(repo, i),
            author: author.to_string(),
            committed_at: ts(at),
            message: message.to_string(),
            files: files.iter().map(|(p, a, d)| FileChange::new(*p, *a, *d)).collect(),
            stats_missing: false,
        })
        .collect();
    out.sort_by_key(|c| std::cmp::Reverse(c.committed_at));
    out
}

fn snapshot(owner: &str, name: &str, issues: &[Issue], commits: Vec<CommitRecord>) -> RepoSnapshot {
    let mut issues: Vec<IssueRecord> = issues.iter().map(Issue::record).collect();
    issues.sort_by(|a, b| b.created_at.cmp(&a.created_at).then(b.number.cmp(&a.number)));
    let s = RepoSnapshot::new(RepoRef::new(owner, name).unwrap(), ts(SNAPSHOT_TIME), issues, commits);
    let violations = validate_snapshot(&s);
    assert!(violations.is_empty(), "{owner}/{name}: {violations:?}");
    s
}

const BUG: (&str, &str) = ("type: bug", "6f42c1");
const FEATURE: (&str, &str) = ("type: feature request", "8a63d2");
const HELP: (&str, &str) = ("help wanted", "008672");
const TRIAGE: (&str, &str) = ("status: waiting triage", "e99695");
const DISCUSSING: (&str, &str) = ("status: discussing", "fbca04");
const I18N: (&str, &str) = ("scope: i18n", "c5def5");
const CURRICULUM: (&str, &str) = ("scope: curriculum", "bfd4f2");

fn freecodecamp() -> RepoSnapshot {
    let issues = [
        Issue { number: 50481, title: "Add dark mode toggle to curriculum map", created: "2023-05-24T09:00:00Z", closed: Some(("2023-05-26T11:00:00Z", "tomasz-r")), creator: "hnvasquez", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50494, title: "CodeAlly Down flag is too wide", created: "2023-05-25T10:00:00Z", closed: Some(("2023-05-30T10:00:00Z", "tomasz-r")), creator: "pvyas-dev", assignees: &[], labels: &[BUG, HELP] },
        Issue { number: 50502, title: "Typo in Learn Relational Databases step 12", created: "2023-05-26T14:00:00Z", closed: Some(("2023-05-27T08:30:00Z", "lunaleaf")), creator: "quietcoder", assignees: &["lunaleaf"], labels: &[CURRICULUM] },
        Issue { number: 50517, title: "Console output overlaps editor on mobile", created: "2023-05-27T16:00:00Z", closed: Some(("2023-05-29T10:00:00Z", "mkdev42")), creator: "brenna-codes", assignees: &["mkdev42"], labels: &[BUG] },
        Issue { number: 50536, title: "Certification page shows wrong completion date", created: "2023-05-29T12:00:00Z", closed: Some(("2023-06-02T18:00:00Z", "ahmad-dev")), creator: "oj-k", assignees: &[], labels: &[BUG] },
        Issue { number: 50560, title: "Allow a keyboard shortcut to reset the lesson", created: "2023-05-31T08:00:00Z", closed: Some(("2023-06-01T20:00:00Z", "tomasz-r")), creator: "hnvasquez", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50572, title: "Broken link in forum footer", created: "2023-05-31T19:00:00Z", closed: Some(("2023-06-01T07:00:00Z", "mkdev42")), creator: "sam-ortega", assignees: &[], labels: &[TRIAGE] },
        Issue { number: 50580, title: "search bar at top of page unable to find challenge", created: "2023-06-01T00:00:00Z", closed: None, creator: "sukrit-a", assignees: &[], labels: &[FEATURE, DISCUSSING] },
        Issue { number: 50598, title: "Step 31 of the CSS Flexbox project accepts an invalid answer", created: "2023-06-02T13:00:00Z", closed: None, creator: "quietcoder", assignees: &[], labels: &[BUG] },
        Issue { number: 50611, title: "Python challenge tests fail on trailing whitespace", created: "2023-06-03T10:00:00Z", closed: Some(("2023-06-06T22:00:00Z", "ahmad-dev")), creator: "brenna-codes", assignees: &["ahmad-dev"], labels: &[BUG] },
        Issue { number: 50620, title: "Add progress export as CSV", created: "2023-06-04T08:00:00Z", closed: None, creator: "oj-k", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50633, title: "Video transcript missing for a JavaScript lesson", created: "2023-06-05T15:00:00Z", closed: None, creator: "sam-ortega", assignees: &[], labels: &[TRIAGE] },
        Issue { number: 50647, title: "Reset button does not clear hints", created: "2023-06-06T11:00:00Z", closed: None, creator: "pvyas-dev", assignees: &[], labels: &[BUG] },
        Issue { number: 50655, title: "Donation modal appears twice", created: "2023-06-07T09:00:00Z", closed: Some(("2023-06-08T15:00:00Z", "tomasz-r")), creator: "hnvasquez", assignees: &[], labels: &[] },
        Issue { number: 50668, title: "Support offline mode in the mobile app", created: "2023-06-08T19:00:00Z", closed: None, creator: "sukrit-a", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50679, title: "Spanish translation missing for new curriculum", created: "2023-06-09T10:00:00Z", closed: None, creator: "lunaleaf", assignees: &["lunaleaf"], labels: &[I18N] },
        Issue { number: 50690, title: "Profile page loads slowly", created: "2023-06-09T21:00:00Z", closed: None, creator: "brenna-codes", assignees: &[], labels: &[] },
        Issue { number: 50702, title: "Show estimated time per certification", created: "2023-06-10T11:00:00Z", closed: Some(("2023-06-12T11:00:00Z", "mkdev42")), creator: "oj-k", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50715, title: "Hint text cut off in RTL languages", created: "2023-06-11T09:00:00Z", closed: None, creator: "sam-ortega", assignees: &[], labels: &[BUG] },
        Issue { number: 50728, title: "Add search filters to news", created: "2023-06-12T16:00:00Z", closed: None, creator: "quietcoder", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50741, title: "Challenge preview not updating", created: "2023-06-14T08:00:00Z", closed: None, creator: "pvyas-dev", assignees: &[], labels: &[TRIAGE] },
        Issue { number: 50755, title: "Let users pin favourite challenges", created: "2023-06-15T12:00:00Z", closed: None, creator: "hnvasquez", assignees: &[], labels: &[FEATURE] },
        Issue { number: 50763, title: "Chinese curriculum title mismatch", created: "2023-06-16T18:00:00Z", closed: None, creator: "sukrit-a", assignees: &[], labels: &[I18N, TRIAGE] },
        Issue { number: 50770, title: "Question about certification deadlines", created: "2023-06-17T20:00:00Z", closed: None, creator: "oj-k", assignees: &[], labels: &[] },
    ];

    const LOCK: &str = "pnpm-lock.yaml";
    const PKG: &str = "package.json";
    const CLIENT_PKG: &str = "client/package.json";
    const EN: &str = "client/i18n/locales/english/translations.json";
    const FLEX: &str = "curriculum/challenges/english/14-responsive-web-design-22/learn-css-flexbox-by-building-a-photo-gallery";
    let step = |n: u32| format!("{FLEX}/step-{n}.md");
    let steps: Vec<String> = (28..=36).map(step).collect();
    let s = |i: usize| steps[i].as_str();

    let rows: Vec<(&str, &str, &str, Files)> = vec![
        ("2023-05-23T14:10:00Z", "renovate[bot]", "chore(deps): update dependency @babel/core to v7.22.1", vec![(LOCK, 40, 20), (PKG, 1, 1)]),
        ("2023-05-24T11:30:00Z", "lunaleaf", "chore(curriculum): clarify instructions in step 12 (#50490)", vec![("curriculum/challenges/english/13-relational-databases/learn-relational-databases/step-12.md", 2, 1)]),
        ("2023-05-25T08:00:00Z", "tomasz-r", "feat(client): add loading state to donate button (#50488)", vec![("client/src/components/Donation/donate-form.tsx", 14, 6), (EN, 2, 0)]),
        // The two commits inside the CodeAlly issue's window.
        ("2023-05-27T15:20:00Z", "ahmad-dev", "refactor(client): drop unused prefix helpers (#50511)", vec![("client/src/utils/prefix.ts", 0, 3), ("client/src/utils/index.ts", 1, 1)]),
        ("2023-05-29T09:45:00Z", "CallmeHongmaybe", "fix: relocate CodeAlly banner to fit layout (#50534)", vec![("client/src/templates/Challenges/codeally/show.tsx", 9, 3)]),
        ("2023-05-30T16:00:00Z", "renovate[bot]", "chore(deps): update dependency eslint to v8.41.0", vec![(LOCK, 30, 28), (PKG, 1, 1)]),
        ("2023-05-31T12:00:00Z", "mkdev42", "feat(curriculum): add hints to flexbox project (#50561)", vec![(s(0), 2, 1), (s(1), 2, 1)]),
        // Twenty-five commits after the search bar issue opened.
        ("2023-06-01T09:00:00Z", "renovate[bot]", "chore(deps): update dependency typescript to v5.1.3", vec![(LOCK, 36, 36), (PKG, 1, 1), (CLIENT_PKG, 1, 1)]),
        ("2023-06-01T17:30:00Z", "brenna-codes", "feat(client): persist editor font size (#50566)", vec![("client/src/templates/Challenges/classic/editor.tsx", 2, 1), ("client/src/redux/settings.ts", 2, 0)]),
        ("2023-06-02T10:15:00Z", "ahmad-dev", "chore(i18n,learn): processed translations (#50570)", vec![(EN, 2, 1), ("client/i18n/locales/chinese/translations.json", 2, 1)]),
        ("2023-06-02T22:40:00Z", "tomasz-r", "feat(curriculum): add step 33 to flexbox project (#50573)", vec![(s(5), 3, 0), (s(2), 1, 1)]),
        ("2023-06-03T14:05:00Z", "renovate[bot]", "chore(deps): update dependency @testing-library/react to v14.0.1", vec![(LOCK, 22, 18), (CLIENT_PKG, 1, 1)]),
        ("2023-06-04T09:50:00Z", "mkdev42", "fix(client): keep hints visible after reset (#50589)", vec![("client/src/templates/Challenges/components/hint.tsx", 2, 1)]),
        ("2023-06-04T19:20:00Z", "lunaleaf", "chore(curriculum): reword step 30 description (#50592)", vec![(s(3), 1, 1)]),
        ("2023-06-05T11:35:00Z", "oj-k", "docs: clarify local setup for Windows (#50601)", vec![("docs/how-to-setup-freecodecamp-locally.md", 2, 1)]),
        ("2023-06-06T08:10:00Z", "renovate[bot]", "chore(deps): update dependency prettier to v2.8.8", vec![(LOCK, 12, 12), (PKG, 1, 1)]),
        ("2023-06-06T16:45:00Z", "ahmad-dev", "refactor(api): move user routes into plugin (#50612)", vec![("api/src/routes/user.ts", 2, 1), ("api/src/app.ts", 2, 1)]),
        ("2023-06-07T12:00:00Z", "brenna-codes", "feat(client): show streak on profile (#50619)", vec![("client/src/components/profile/components/stats.tsx", 2, 1), (EN, 2, 0)]),
        ("2023-06-08T09:25:00Z", "tomasz-r", "chore(curriculum): add tests to step 34 (#50626)", vec![(s(6), 2, 1)]),
        ("2023-06-08T21:10:00Z", "mkdev42", "feat(api): add rate limit to email endpoint (#50634)", vec![("api/src/plugins/rate-limit.ts", 3, 0), ("api/src/routes/settings.ts", 1, 1)]),
        ("2023-06-09T15:40:00Z", "renovate[bot]", "chore(deps): update dependency webpack to v5.86.0", vec![(LOCK, 48, 32), (CLIENT_PKG, 1, 1)]),
        ("2023-06-10T10:30:00Z", "lunaleaf", "chore(i18n,curriculum): processed translations (#50646)", vec![("curriculum/challenges/chinese/14-responsive-web-design-22/step-31.md", 2, 1)]),
        ("2023-06-11T13:55:00Z", "oj-k", "docs: add section on running api tests (#50652)", vec![("docs/how-to-work-on-the-api.md", 3, 0)]),
        ("2023-06-12T08:20:00Z", "ahmad-dev", "refactor(client): extract search hooks (#50661)", vec![("client/src/components/search/searchBar/search-bar.tsx", 2, 1), ("client/src/components/search/hooks.ts", 3, 0)]),
        ("2023-06-12T19:05:00Z", "brenna-codes", "feat(curriculum): add step 35 to flexbox project (#50667)", vec![(s(7), 2, 1)]),
        ("2023-06-13T11:45:00Z", "renovate[bot]", "chore(deps): update dependency @types/node to v18.16.18", vec![(LOCK, 8, 8), (PKG, 1, 1)]),
        ("2023-06-14T09:30:00Z", "tomasz-r", "feat(client): add aria label to donate button (#50680)", vec![("client/src/components/Donation/donate-form.tsx", 1, 1)]),
        ("2023-06-14T22:15:00Z", "mkdev42", "chore(curriculum): update seed code in step 36 (#50686)", vec![(s(8), 2, 1)]),
        ("2023-06-15T14:40:00Z", "lunaleaf", "chore(i18n,learn): processed translations (#50694)", vec![("client/i18n/locales/espanol/translations.json", 2, 1)]),
        ("2023-06-16T10:05:00Z", "oj-k", "docs: update contributor guide links (#50701)", vec![("docs/index.md", 1, 1)]),
        ("2023-06-17T08:50:00Z", "renovate[bot]", "chore(deps): update dependency stripe to v12.9.0", vec![(LOCK, 24, 18), (CLIENT_PKG, 1, 1)]),
        ("2023-06-18T09:15:00Z", "ahmad-dev", "feat(api): add health check route (#50712)", vec![("api/src/routes/status.ts", 2, 1)]),
    ];
    let s = snapshot("freeCodeCamp", "freeCodeCamp", &issues, commits("freeCodeCamp/freeCodeCamp", &rows));

    let census = label_census(&s);
    assert_eq!(census["type: bug"], 7);
    assert_eq!(census["type: feature request"], 8);
    let totals = file_totals(&s, false);
    let top = totals.iter().max_by_key(|(_, v)| **v).unwrap();
    assert_eq!(top.0, LOCK);
    let search = correlate_commits(s.issue(50580).unwrap(), &s);
    assert_eq!(search.len(), 25);
    let codeally = correlate_commits(s.issue(50494).unwrap(), &s);
    assert_eq!(codeally.len(), 2);
    assert_eq!(codeally.iter().filter(|c| detect_bug_fix(&c.message)).count(), 1);
    let bins = compute_histogram(&s, false);
    let widest = bins.iter().max_by_key(|b| b.file_count).unwrap();
    assert_eq!(widest.range.token(), "2-4", "{bins:?}");
    s
}

const H_BUG: (&str, &str) = ("bug", "d73a4a");
const H_ENH: (&str, &str) = ("enhancement", "a2eeef");
const H_QUESTION: (&str, &str) = ("question", "d876e3");
const H_DOCS: (&str, &str) = ("documentation", "0075ca");

fn hyprland() -> RepoSnapshot {
    let v = "vaxerski";
    let issues = [
        Issue { number: 2291, title: "Crash when closing the last window on a special workspace", created: "2023-05-15T10:00:00Z", closed: Some(("2023-05-17T12:00:00Z", v)), creator: "dn-sk", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2299, title: "Cursor jumps to center after monitor hotplug", created: "2023-05-16T18:00:00Z", closed: Some(("2023-05-21T06:00:00Z", v)), creator: "lmnt-x", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2306, title: "Add option to disable animations per workspace", created: "2023-05-18T09:00:00Z", closed: Some(("2023-05-19T09:00:00Z", v)), creator: "wrgrs", assignees: &[], labels: &[H_ENH] },
        Issue { number: 2318, title: "1 pixel gaps on no-gap settings", created: "2023-05-20T00:00:00Z", closed: None, creator: "ppdot", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2331, title: "Resize window after ungrouping a single window group", created: "2023-05-22T08:00:00Z", closed: Some(("2023-06-02T20:00:00Z", v)), creator: "ilyabrk", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2337, title: "Group bar colors ignore inactive setting", created: "2023-05-23T14:00:00Z", closed: None, creator: "mcorvin", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2344, title: "How to bind a key to toggle gaps?", created: "2023-05-24T20:00:00Z", closed: Some(("2023-05-25T08:00:00Z", "lmnt-x")), creator: "tazo", assignees: &[], labels: &[H_QUESTION] },
        Issue { number: 2352, title: "Screen flickers on resume with nvidia", created: "2023-05-26T07:00:00Z", closed: None, creator: "dn-sk", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2360, title: "hyprctl clients misses xwayland windows", created: "2023-05-27T15:00:00Z", closed: Some(("2023-05-31T03:00:00Z", v)), creator: "wrgrs", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2368, title: "Fullscreen video stutters on secondary monitor", created: "2023-05-28T22:00:00Z", closed: None, creator: "kestrl", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2375, title: "Blur bleeds through rounded corners", created: "2023-05-30T11:00:00Z", closed: None, creator: "ppdot", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2383, title: "Support per-device sensitivity for tablets", created: "2023-05-31T16:00:00Z", closed: None, creator: "ilyabrk", assignees: &[], labels: &[H_ENH] },
        Issue { number: 2390, title: "Workspace swipe gesture inverted", created: "2023-06-01T09:00:00Z", closed: Some(("2023-06-03T09:00:00Z", v)), creator: "mcorvin", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2398, title: "Layer surfaces lose focus after dpms off", created: "2023-06-02T13:00:00Z", closed: None, creator: "tazo", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2405, title: "Wiki page for window rules is outdated", created: "2023-06-03T18:00:00Z", closed: Some(("2023-06-04T10:00:00Z", "wrgrs")), creator: "kestrl", assignees: &[], labels: &[H_DOCS] },
        Issue { number: 2411, title: "Floating windows spawn off-screen on scaled monitors", created: "2023-06-05T08:00:00Z", closed: None, creator: "dn-sk", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2419, title: "Allow gaps_out per side", created: "2023-06-06T12:00:00Z", closed: None, creator: "lmnt-x", assignees: &[], labels: &[H_ENH] },
        Issue { number: 2426, title: "Pinned window disappears after workspace change", created: "2023-06-07T19:00:00Z", closed: Some(("2023-06-09T07:00:00Z", v)), creator: "ppdot", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2433, title: "Drag and drop from firefox freezes compositor", created: "2023-06-08T10:00:00Z", closed: None, creator: "mcorvin", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2440, title: "Border gradient angle ignored in groups", created: "2023-06-09T14:00:00Z", closed: None, creator: "ilyabrk", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2447, title: "Is there a way to exec on monitor connect?", created: "2023-06-10T17:00:00Z", closed: None, creator: "tazo", assignees: &[], labels: &[H_QUESTION] },
        Issue { number: 2453, title: "Dwindle split ratio resets on reload", created: "2023-06-11T21:00:00Z", closed: None, creator: "kestrl", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2460, title: "Steam games start behind other windows", created: "2023-06-12T09:00:00Z", closed: None, creator: "wrgrs", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2466, title: "Add dispatcher to move window to group by direction", created: "2023-06-13T15:00:00Z", closed: None, creator: "dn-sk", assignees: &[], labels: &[H_ENH] },
        Issue { number: 2472, title: "Touchpad scroll factor applies twice", created: "2023-06-14T11:00:00Z", closed: None, creator: "lmnt-x", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2479, title: "Crash on startup with multiple GPUs", created: "2023-06-15T08:00:00Z", closed: None, creator: "ppdot", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2485, title: "How do I get the active window class from a script?", created: "2023-06-16T12:00:00Z", closed: None, creator: "mcorvin", assignees: &[], labels: &[H_QUESTION] },
        Issue { number: 2491, title: "Shadow offset wrong on rotated monitor", created: "2023-06-17T10:00:00Z", closed: None, creator: "kestrl", assignees: &[], labels: &[H_BUG] },
        Issue { number: 2497, title: "Option to hide the cursor while typing", created: "2023-06-17T22:00:00Z", closed: None, creator: "tazo", assignees: &[], labels: &[H_ENH] },
        Issue { number: 2502, title: "Screencopy shows black frames after mode change", created: "2023-06-18T08:00:00Z", closed: None, creator: "ilyabrk", assignees: &[], labels: &[H_BUG] },
    ];

    const CTL: &str = "src/debug/HyprCtl.cpp";
    const WINDOWS: &str = "src/Windows.cpp";
    const WINDOW: &str = "src/Window.cpp";
    const GL: &str = "src/render/OpenGL.cpp";
    const CONFIG: &str = "src/config/ConfigManager.cpp";
    const KEYBIND: &str = "src/managers/KeybindManager.cpp";
    const DWINDLE: &str = "src/layout/DwindleLayout.cpp";
    const COMP: &str = "src/Compositor.cpp";
    const XWL: &str = "src/managers/XWaylandManager.cpp";
    const MONITOR: &str = "src/helpers/Monitor.cpp";
    const GROUPBAR: &str = "src/render/decorations/CHyprGroupBarDecoration.cpp";
    const INPUT: &str = "src/managers/input/InputManager.cpp";

    let rows: Vec<(&str, &str, &str, Files)> = vec![
        ("2023-05-15T12:30:00Z", v, "hyprctl: add activeworkspace request", vec![(CTL, 4, 1)]),
        ("2023-05-17T09:10:00Z", "dn-sk", "readme: update install links", vec![("README.md", 1, 0)]),
        ("2023-05-19T16:40:00Z", v, "config: allow floats in gaps", vec![(CONFIG, 2, 1)]),
        // Twenty-five commits while the ungrouping issue was open, 21 by vaxerski.
        ("2023-05-22T10:00:00Z", v, "hyprctl: expose group members in clients", vec![(CTL, 3, 1)]),
        ("2023-05-22T21:15:00Z", v, "opengl: skip blur on fully opaque surfaces", vec![(GL, 3, 1)]),
        ("2023-05-23T08:40:00Z", v, "windows: fix size after group removal", vec![(WINDOWS, 6, 2)]),
        ("2023-05-23T19:05:00Z", "lmnt-x", "keybinds: add movewindoworgroup dispatcher", vec![(KEYBIND, 2, 1)]),
        ("2023-05-24T07:30:00Z", v, "dwindle: respect preserve_split on reload", vec![(DWINDLE, 3, 1)]),
        ("2023-05-24T18:20:00Z", v, "compositor: guard against null monitor on focus", vec![(COMP, 2, 1)]),
        ("2023-05-25T06:50:00Z", v, "hyprctl: add --batch error reporting", vec![(CTL, 4, 1)]),
        ("2023-05-25T17:35:00Z", v, "window: update decorations on group change", vec![(WINDOW, 2, 1)]),
        ("2023-05-26T05:10:00Z", "wrgrs", "xwayland: set scale hints on map", vec![(XWL, 1, 1)]),
        ("2023-05-26T16:45:00Z", v, "groupbar: use gradient for active group", vec![(GROUPBAR, 1, 1)]),
        ("2023-05-27T04:20:00Z", v, "opengl: cache projection per monitor", vec![(GL, 2, 1)]),
        ("2023-05-27T15:55:00Z", v, "window: recalc on deco remove", vec![(WINDOW, 3, 1)]),
        ("2023-05-28T03:30:00Z", v, "config: parse gradients with angles", vec![(CONFIG, 1, 1)]),
        ("2023-05-28T15:05:00Z", v, "hyprctl: print workspace rules", vec![(CTL, 3, 0)]),
        ("2023-05-29T02:40:00Z", "dn-sk", "meson: bump wlroots wrap", vec![("meson.build", 1, 0)]),
        ("2023-05-29T14:15:00Z", v, "keybinds: allow empty args for togglegroup", vec![(KEYBIND, 2, 1)]),
        ("2023-05-30T01:50:00Z", v, "windows: fix group size when ungrouping", vec![(WINDOWS, 5, 1)]),
        ("2023-05-30T13:25:00Z", v, "monitor: apply transform before scale", vec![(MONITOR, 2, 1)]),
        ("2023-05-31T01:00:00Z", v, "dwindle: keep ratio on swap", vec![(DWINDLE, 1, 1)]),
        ("2023-05-31T12:35:00Z", "kestrl", "input: respect scroll factor for touchpads", vec![(INPUT, 1, 0)]),
        ("2023-06-01T00:10:00Z", v, "compositor: move focus history update", vec![(COMP, 1, 1)]),
        ("2023-06-01T11:45:00Z", v, "window: clamp size to monitor on unfullscreen", vec![(WINDOW, 2, 1)]),
        ("2023-06-01T23:20:00Z", v, "xwayland: use logical size on configure", vec![(XWL, 1, 1)]),
        ("2023-06-02T10:55:00Z", v, "hyprctl: add cursor position request", vec![(CTL, 3, 1), (GL, 1, 1)]),
        ("2023-06-02T19:30:00Z", v, "config: reload animations tree", vec![(CONFIG, 1, 1)]),
        // After the window closes.
        ("2023-06-05T13:00:00Z", v, "windows: fix stale reserved area on close", vec![(WINDOWS, 4, 1)]),
        ("2023-06-08T10:20:00Z", "ppdot", "window: refresh rounding on rule change", vec![(WINDOW, 1, 1)]),
        ("2023-06-12T17:45:00Z", v, "hyprctl: add version json output", vec![(CTL, 2, 0)]),
        ("2023-06-16T09:30:00Z", "lmnt-x", "readme: link to wiki", vec![("README.md", 1, 0)]),
    ];
    let s = snapshot("hyprwm", "Hyprland", &issues, commits("hyprwm/Hyprland", &rows));

    let totals = file_totals(&s, false);
    assert_eq!(totals[CTL], 23);
    assert_eq!(totals[WINDOWS], 19);
    let mut rest: Vec<u64> = totals.values().copied().collect();
    rest.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(rest[..5], [23, 19, 12, 9, 7]);
    assert_eq!(rest[5..].iter().sum::<u64>(), 30);
    let bug = file_totals(&s, true);
    assert_eq!(bug, BTreeMap::from([(WINDOWS.to_string(), 19)]));
    let closed = rank_issues(&s, Ranking::LongestClosed);
    assert_eq!(closed[0].issue.number, 2331);
    let window = correlate_commits(closed[0].issue, &s);
    assert_eq!(window.len(), 25);
    assert_eq!(window.iter().filter(|c| c.author == v).count(), 21);
    let open = s.issues().iter().filter(|i| i.is_open()).count();
    assert!(open * 2 > s.issues().len());
    s
}

const J_INVALID: (&str, &str) = ("invalid", "e4e669");
const J_QUESTION: (&str, &str) = ("question", "cc317c");
const J_EDITORIAL: (&str, &str) = ("editorial", "fef2c0");
const J_PR_WANTED: (&str, &str) = ("pull request wanted", "159818");
const J_REACT: (&str, &str) = ("react", "1d76db");

/// (number, title, created, closed (at, by), creator, labels, assignees)
type OwnedRow<'a> = (u64, String, String, Option<(String, String)>, String, Vec<(&'a str, &'a str)>, Vec<&'a str>);
/// (title, created, closed (at, by), creator, labels, assignees)
type Row<'a> = (&'a str, &'a str, Option<(&'a str, &'a str)>, &'a str, &'a [(&'a str, &'a str)], &'a [&'a str]);

fn javascript() -> RepoSnapshot {
    let spam_titles = [
        "Best online casino bonus 2023",
        "cheap flights booking helpline",
        "Buy followers fast",
        "crypto recovery expert contact",
        "Free gift cards generator",
        "Customer care number support",
        "Watch movies online free HD",
        "Loan approval in 24 hours",
        "weight loss pills that work",
        "Get rich with this trading bot",
    ];
    let spammers = ["spam-acct-01", "spam-acct-02", "spam-acct-03", "spam-acct-04"];
    let mut owned: Vec<OwnedRow> = Vec::new();

    // 28 spam issues, one a day from May 19, each closed as invalid within hours.
    for i in 0..28u64 {
        let created = ts("2023-05-19T03:15:00Z") + chrono::Duration::days(i as i64) + chrono::Duration::hours((i % 17) as i64);
        let closed_at = created + chrono::Duration::hours(1 + (i % 5) as i64);
        owned.push((
            0,
            format!("{} #{}", spam_titles[i as usize % spam_titles.len()], i + 1),
            format_timestamp(&created),
            Some((format_timestamp(&closed_at), "ljharb".into())),
            spammers[i as usize % spammers.len()].into(),
            vec![J_INVALID],
            vec![],
        ));
    }

    let others: [Row; 22] = [
        ("Should arrow functions always have parens?", "2023-01-09T10:00:00Z", Some(("2023-01-10T14:00:00Z", "ljharb")), "coda-w", &[J_QUESTION], &[]),
        ("Rule for max-len in template literals", "2023-01-21T16:00:00Z", None, "pm-soto", &[J_QUESTION], &[]),
        ("Typo in section 7.2", "2023-02-03T09:00:00Z", Some(("2023-02-03T18:00:00Z", "ljharb")), "ikayu", &[J_EDITORIAL], &[]),
        ("Support flat config", "2023-02-14T12:00:00Z", None, "dv-aaron", &[J_PR_WANTED], &["ljharb"]),
        ("React hooks rules in eslint-config-airbnb", "2023-02-27T08:00:00Z", None, "zmiles", &[J_REACT], &[]),
        ("Is no-plusplus still recommended?", "2023-03-08T15:00:00Z", Some(("2023-03-09T07:00:00Z", "ljharb")), "hollis-g", &[J_QUESTION], &[]),
        ("Explain reasoning behind no-param-reassign props", "2023-03-17T11:00:00Z", None, "pm-soto", &[], &[]),
        ("Update TypeScript guidance", "2023-03-25T19:00:00Z", None, "coda-w", &[], &[]),
        ("Broken anchor link in table of contents", "2023-04-02T10:00:00Z", Some(("2023-04-02T21:00:00Z", "ljharb")), "ikayu", &[J_EDITORIAL], &[]),
        ("Add rule for class-methods-use-this exceptions", "2023-04-11T13:00:00Z", None, "zmiles", &[J_PR_WANTED], &[]),
        ("Peer dependency conflict with eslint 8.40", "2023-04-19T09:00:00Z", None, "dv-aaron", &[], &[]),
        ("Why is prefer-destructuring off for arrays?", "2023-04-26T17:00:00Z", Some(("2023-04-27T09:00:00Z", "ljharb")), "hollis-g", &[J_QUESTION], &[]),
        ("Translation of the guide into Ukrainian", "2023-05-02T08:00:00Z", None, "oleks-t", &[], &[]),
        ("jsx-a11y rules too strict for icons", "2023-05-08T14:00:00Z", None, "zmiles", &[J_REACT], &[]),
        ("Inconsistent quote style example", "2023-05-15T10:00:00Z", Some(("2023-05-15T16:00:00Z", "ljharb")), "ikayu", &[J_EDITORIAL], &[]),
        ("Guidance on optional chaining", "2023-05-22T12:00:00Z", None, "coda-w", &[], &[]),
        ("import/extensions with TypeScript paths", "2023-05-29T18:00:00Z", None, "dv-aaron", &[J_QUESTION], &[]),
        ("Consider allowing for-of loops", "2023-06-03T09:00:00Z", None, "pm-soto", &[], &[]),
        ("React 18 guidance for effects", "2023-06-08T15:00:00Z", None, "zmiles", &[], &[]),
        ("Link to css-in-javascript guide is dead", "2023-06-12T11:00:00Z", Some(("2023-06-12T20:00:00Z", "ljharb")), "ikayu", &[], &[]),
        ("Naming convention for async functions", "2023-06-15T08:00:00Z", None, "hollis-g", &[], &[]),
        ("Enforce newline before return?", "2023-06-17T13:00:00Z", None, "coda-w", &[], &[]),
    ];
    for (title, created, closed, creator, labels, assignees) in others.iter() {
        owned.push((
            0,
            title.to_string(),
            created.to_string(),
            closed.map(|(a, b)| (a.to_string(), b.to_string())),
            creator.to_string(),
            labels.to_vec(),
            assignees.to_vec(),
        ));
    }
    owned.sort_by(|a, b| a.2.cmp(&b.2));
    for (rank, row) in owned.iter_mut().enumerate() {
        row.0 = 2651 + 3 * rank as u64;
    }
    let issues: Vec<Issue> = owned
        .iter()
        .map(|(number, title, created, closed, creator, labels, assignees)| Issue {
            number: *number,
            title,
            created,
            closed: closed.as_ref().map(|(a, b)| (a.as_str(), b.as_str())),
            creator,
            assignees,
            labels,
        })
        .collect();

    const README: &str = "README.md";
    const STYLE: &str = "packages/eslint-config-airbnb-base/rules/style.js";
    const BEST: &str = "packages/eslint-config-airbnb-base/rules/best-practices.js";
    const REACT: &str = "packages/eslint-config-airbnb/rules/react.js";
    const BASE_PKG: &str = "packages/eslint-config-airbnb-base/package.json";
    let small = [
        ("packages/eslint-config-airbnb/rules/react-a11y.js", 5),
        ("packages/eslint-config-airbnb-base/rules/es6.js", 4),
        ("packages/eslint-config-airbnb-base/CHANGELOG.md", 3),
        ("packages/eslint-config-airbnb/package.json", 2),
        ("packages/eslint-config-airbnb/CHANGELOG.md", 2),
        ("packages/eslint-config-airbnb-base/rules/imports.js", 2),
        ("packages/eslint-config-airbnb-base/rules/variables.js", 2),
        ("packages/eslint-config-airbnb-base/rules/errors.js", 2),
        ("packages/eslint-config-airbnb-base/rules/node.js", 2),
        ("packages/eslint-config-airbnb/rules/react-hooks.js", 2),
        ("css-in-javascript/README.md", 2),
        ("react/README.md", 2),
        (".github/workflows/node.yml", 2),
        ("packages/eslint-config-airbnb-base/rules/strict.js", 1),
        ("packages/eslint-config-airbnb-base/index.js", 1),
        ("packages/eslint-config-airbnb-base/legacy.js", 1),
        ("packages/eslint-config-airbnb-base/whitespace.js", 1),
        ("packages/eslint-config-airbnb/index.js", 1),
        ("packages/eslint-config-airbnb/legacy.js", 1),
        ("packages/eslint-config-airbnb/hooks.js", 1),
        ("packages/eslint-config-airbnb/whitespace.js", 1),
        ("packages/eslint-config-airbnb/base.js", 1),
        ("packages/eslint-config-airbnb-base/.eslintrc", 1),
        ("packages/eslint-config-airbnb/.eslintrc", 1),
        (".editorconfig", 1),
        (".npmrc", 1),
        ("linters/.markdownlint.json", 1),
    ];
    let small_files: Vec<(&str, u64, u64)> = small.iter().map(|(p, n)| (*p, *n as u64, 0)).collect();

    let rows: Vec<(&str, &str, &str, Files)> = vec![
        ("2023-01-12T10:00:00Z", "ljharb", "[guide] clarify arrow function parens", vec![(README, 30, 12)]),
        ("2023-01-30T15:00:00Z", "ljharb", "[base] [patch] style: allow template literal max-len", vec![(STYLE, 24, 10)]),
        ("2023-02-06T09:00:00Z", "ikayu", "[guide] typo in 7.2", vec![(README, 1, 1)]),
        ("2023-02-20T12:00:00Z", "ljharb", "[base] [minor] best-practices: add new rules", vec![(BEST, 28, 12), (BASE_PKG, 4, 2)]),
        ("2023-03-06T08:00:00Z", "ljharb", "[react] [minor] enable jsx-no-leaked-render", vec![(REACT, 14, 6)]),
        ("2023-03-20T14:00:00Z", "dv-aaron", "[guide] rework destructuring section", vec![(README, 58, 34)]),
        ("2023-04-03T10:00:00Z", "ljharb", "[base] [patch] style: relax operator-linebreak", vec![(STYLE, 30, 18)]),
        ("2023-04-05T16:00:00Z", "ikayu", "[guide] fix broken anchors", vec![(README, 6, 6)]),
        ("2023-04-18T11:00:00Z", "ljharb", "[deps] update eslint-plugin-import", vec![(BASE_PKG, 5, 4), (small_files[0].0, 5, 0)]),
        ("2023-05-01T09:00:00Z", "ljharb", "[base] [minor] style: add logical-assignment-operators", vec![(STYLE, 20, 8)]),
        ("2023-05-16T13:00:00Z", "ljharb", "[guide] add optional chaining section", vec![(README, 44, 20)]),
        ("2023-05-24T17:00:00Z", "ljharb", "[base] es6 and changelog updates", vec![small_files[1], small_files[2]]),
        ("2023-06-01T10:00:00Z", "zmiles", "[guide] update examples for modern syntax", vec![(README, 12, 8)]),
        ("2023-06-05T12:00:00Z", "ljharb", "[meta] tidy package metadata", small_files[3..13].to_vec()),
        ("2023-06-13T15:00:00Z", "ljharb", "[meta] whitespace cleanup", small_files[13..].to_vec()),
    ];
    let s = snapshot("airbnb", "javascript", &issues, commits("airbnb/javascript", &rows));

    let census = label_census(&s);
    assert_eq!(s.issues().len(), 50);
    assert_eq!(census["invalid"], 28);
    assert!(!census.keys().any(|k| k.contains("bug")));
    let totals = file_totals(&s, false);
    assert_eq!(totals[README], 232);
    assert_eq!(totals[STYLE], 110);
    let mut v: Vec<u64> = totals.values().copied().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(v[..5], [232, 110, 40, 20, 15]);
    assert_eq!(v[5..].iter().sum::<u64>(), 46);
    s
}

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("fixtures/snapshots"));
    for (dir, s) in [("freecodecamp", freecodecamp()), ("hyprland", hyprland()), ("javascript", javascript())] {
        let path: &Path = &out.join(dir);
        std::fs::create_dir_all(path).unwrap();
        save_snapshot(&s, path).unwrap();
        println!("{}: {} issues, {} commits -> {}", s.repo(), s.issues().len(), s.commits().len(), path.display());
    }
}
