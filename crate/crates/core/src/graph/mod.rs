//! Per-issue node/edge graph: the issue, the people around it, the commits
//! made while it was open and the files those commits touched.

mod layout;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

pub use layout::{layout, layout_step, LayoutError, LayoutParams, LayoutResult, LayoutState};

use crate::analytics::{correlate_commits, detect_bug_fix};
use crate::model::{IssueRecord, IssueState, RepoSnapshot};
use crate::theme::Theme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Issue,
    User,
    Commit,
    File,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Issue => "issue",
            NodeKind::User => "user",
            NodeKind::Commit => "commit",
            NodeKind::File => "file",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Creator,
    Assignee,
    Closer,
    Author,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    CreatedBy,
    AssignedTo,
    ClosedBy,
    HasCommit,
    AuthoredBy,
    TouchesFile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub id: String,
    pub kind: NodeKind,
    /// Issue title, login, full commit message or file path.
    pub display: String,
    pub color: String,
    /// Only user nodes carry roles.
    pub roles: BTreeSet<Role>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub source: String,
    pub target: String,
    pub kind: EdgeKind,
    /// Set only on `has_commit` edges whose commit looks like a fix.
    pub bug_fix: bool,
}

/// Nodes sorted by id; edges in construction order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IssueGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphOptions {
    /// Add placeholder assignee/closer nodes when the issue has none, to
    /// show what a fully populated graph looks like.
    pub demo_nodes: bool,
}

pub fn issue_node_id(number: u64) -> String {
    format!("issue:{number}")
}

fn user_id(login: &str) -> String {
    format!("user:{login}")
}

// Parentheses never occur in GitHub logins, so these cannot collide.
const DEMO_ASSIGNEE: &str = "(assignee)";
const DEMO_CLOSER: &str = "(closer)";

struct Builder<'t> {
    theme: &'t Theme,
    nodes: BTreeMap<String, GraphNode>,
    edges: Vec<GraphEdge>,
}

impl Builder<'_> {
    fn node(&mut self, id: String, kind: NodeKind, display: &str, color: &str) -> String {
        self.nodes.entry(id.clone()).or_insert_with(|| GraphNode {
            id: id.clone(),
            kind,
            display: display.to_string(),
            color: color.to_string(),
            roles: BTreeSet::new(),
        });
        id
    }

    fn user(&mut self, login: &str, role: Role) -> String {
        let color = self.theme.node.user.clone();
        let id = self.node(user_id(login), NodeKind::User, login, &color);
        self.nodes.get_mut(&id).expect("just inserted").roles.insert(role);
        id
    }

    fn edge(&mut self, source: &str, target: &str, kind: EdgeKind, bug_fix: bool) {
        self.edges.push(GraphEdge { source: source.into(), target: target.into(), kind, bug_fix });
    }
}

/// Builds the graph of `issue` within `s`. Users are keyed by login and
/// files by path, so shared authors and files appear once.
pub fn build_issue_graph(
    issue: &IssueRecord,
    s: &RepoSnapshot,
    theme: &Theme,
    opts: GraphOptions,
) -> IssueGraph {
    let mut b = Builder { theme, nodes: BTreeMap::new(), edges: Vec::new() };
    let issue_id = b.node(
        issue_node_id(issue.number),
        NodeKind::Issue,
        &issue.title,
        theme.status_color(issue.state),
    );

    let creator = b.user(&issue.creator, Role::Creator);
    b.edge(&issue_id, &creator, EdgeKind::CreatedBy, false);

    let assignees: BTreeSet<&str> = issue.assignees.iter().map(String::as_str).collect();
    for login in &assignees {
        let a = b.user(login, Role::Assignee);
        b.edge(&issue_id, &a, EdgeKind::AssignedTo, false);
    }
    if assignees.is_empty() && opts.demo_nodes {
        let a = b.user(DEMO_ASSIGNEE, Role::Assignee);
        b.edge(&issue_id, &a, EdgeKind::AssignedTo, false);
    }

    match (&issue.closed_by, issue.state) {
        (Some(closer), IssueState::Closed) => {
            let c = b.user(closer, Role::Closer);
            b.edge(&issue_id, &c, EdgeKind::ClosedBy, false);
        }
        _ if opts.demo_nodes => {
            let c = b.user(DEMO_CLOSER, Role::Closer);
            b.edge(&issue_id, &c, EdgeKind::ClosedBy, false);
        }
        _ => {}
    }

    for commit in correlate_commits(issue, s) {
        let commit_color = theme.node.commit.clone();
        let cid = b.node(format!("commit:{}", commit.sha), NodeKind::Commit, &commit.message, &commit_color);
        b.edge(&issue_id, &cid, EdgeKind::HasCommit, detect_bug_fix(&commit.message));
        let author = b.user(&commit.author, Role::Author);
        b.edge(&cid, &author, EdgeKind::AuthoredBy, false);
        let file_color = theme.node.file.clone();
        for f in &commit.files {
            let fid = b.node(format!("file:{}", f.path), NodeKind::File, &f.path, &file_color);
            b.edge(&cid, &fid, EdgeKind::TouchesFile, false);
        }
    }

    IssueGraph { nodes: b.nodes.into_values().collect(), edges: b.edges }
}

impl IssueGraph {
    pub fn layout(&self, p: &LayoutParams) -> Result<LayoutResult, LayoutError> {
        layout(
            self.nodes.iter().map(|n| n.id.as_str()),
            self.edges.iter().map(|e| (e.source.as_str(), e.target.as_str())),
            p,
        )
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn degree(&self, id: &str) -> usize {
        self.edges.iter().filter(|e| e.source == id || e.target == id).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::testutil::*;

    fn kinds(g: &IssueGraph) -> [usize; 4] {
        [NodeKind::Issue, NodeKind::User, NodeKind::Commit, NodeKind::File].map(|k| g.count(k))
    }

    #[test]
    fn closed_issue_with_one_commit() {
        let issue = closed_issue(1, "2023-06-01T00:00:00Z", "2023-06-06T00:00:00Z");
        let s = snapshot(
            vec![issue.clone()],
            vec![commit(1, "2023-06-03T00:00:00Z", "fix: banner", &[("a.tsx", 1, 1), ("b.tsx", 2, 0)])],
        );
        let g = build_issue_graph(&issue, &s, &Theme::default(), GraphOptions::default());
        assert_eq!(g.nodes.len(), 7);
        assert_eq!(kinds(&g), [1, 3, 1, 2]);
        assert_eq!(g.edges.len(), 6);
        let has_commit: Vec<&GraphEdge> = g.edges.iter().filter(|e| e.kind == EdgeKind::HasCommit).collect();
        assert_eq!(has_commit.len(), 1);
        assert!(has_commit[0].bug_fix);
        assert!(g.edges.iter().filter(|e| e.kind != EdgeKind::HasCommit).all(|e| !e.bug_fix));
        let issue_node = g.nodes.iter().find(|n| n.kind == NodeKind::Issue).unwrap();
        assert_eq!(issue_node.color, "2da44e");
    }

    #[test]
    fn minimal_open_issue() {
        let issue = open_issue(1, "2023-06-01T00:00:00Z");
        let s = snapshot(vec![issue.clone()], vec![commit(1, "2023-05-01T00:00:00Z", "old", &[("a", 1, 0)])]);
        let g = build_issue_graph(&issue, &s, &Theme::default(), GraphOptions::default());
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].kind, EdgeKind::CreatedBy);
        assert_eq!(g.nodes[0].color, "8957e5");
    }

    #[test]
    fn shared_author_and_file_dedup() {
        let issue = open_issue(1, "2023-06-01T00:00:00Z");
        let s = snapshot(
            vec![issue.clone()],
            vec![
                commit(1, "2023-06-02T00:00:00Z", "one", &[("src/Window.cpp", 1, 0)]),
                commit(2, "2023-06-03T00:00:00Z", "two", &[("src/Window.cpp", 4, 2)]),
            ],
        );
        let g = build_issue_graph(&issue, &s, &Theme::default(), GraphOptions::default());
        assert_eq!(g.count(NodeKind::File), 1);
        assert_eq!(g.degree("user:u3"), 2);
        assert_eq!(g.degree("file:src/Window.cpp"), 2);
    }

    #[test]
    fn roles_merge_on_one_user() {
        let mut issue = closed_issue(1, "2023-06-01T00:00:00Z", "2023-06-06T00:00:00Z");
        issue.creator = "sam".into();
        issue.closed_by = Some("sam".into());
        issue.assignees = vec!["sam".into(), "sam".into()];
        let s = snapshot(vec![issue.clone()], vec![commit(1, "2023-06-02T00:00:00Z", "x", &[])]);
        let mut c = s.commits()[0].clone();
        c.author = "sam".into();
        let s = RepoSnapshot::new(s.repo().clone(), s.snapshot_time(), vec![issue.clone()], vec![c]);
        let g = build_issue_graph(&issue, &s, &Theme::default(), GraphOptions::default());
        let sam = g.nodes.iter().find(|n| n.id == "user:sam").unwrap();
        assert_eq!(sam.roles, BTreeSet::from([Role::Creator, Role::Assignee, Role::Closer, Role::Author]));
        assert_eq!(g.count(NodeKind::User), 1);
        assert_eq!(g.edges.iter().filter(|e| e.kind == EdgeKind::AssignedTo).count(), 1);
    }

    #[test]
    fn demo_nodes_fill_missing_people() {
        let issue = open_issue(1, "2023-06-01T00:00:00Z");
        let s = snapshot(vec![issue.clone()], vec![]);
        let g = build_issue_graph(&issue, &s, &Theme::default(), GraphOptions { demo_nodes: true });
        assert_eq!(g.count(NodeKind::User), 3);
        let kinds: BTreeSet<EdgeKind> = g.edges.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, BTreeSet::from([EdgeKind::CreatedBy, EdgeKind::AssignedTo, EdgeKind::ClosedBy]));
    }

    #[test]
    fn nodes_sorted_by_id() {
        let issue = open_issue(1, "2023-06-01T00:00:00Z");
        let s = snapshot(
            vec![issue.clone()],
            vec![commit(1, "2023-06-02T00:00:00Z", "one", &[("z", 1, 0), ("a", 1, 0)])],
        );
        let g = build_issue_graph(&issue, &s, &Theme::default(), GraphOptions::default());
        let ids: Vec<&str> = g.nodes.iter().map(|n| n.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }
}
