//! JSON views shared by the HTTP API and `export --format json`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::analytics::{
    build_timeline, compute_histogram, donut_geometry, legend, summarize_file_updates, DonutWedge,
    HistogramBin, LegendEntry, SummaryOptions, TimelineBar, TimelineMode,
};
use crate::graph::{
    build_issue_graph, EdgeKind, GraphEdge, GraphOptions, LayoutError, LayoutParams, NodeKind, Role,
};
use crate::model::{IssueRecord, RepoSnapshot, Timestamp};
use crate::theme::Theme;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepoEntry {
    pub owner: String,
    pub name: String,
    pub snapshot_time: Timestamp,
}

impl RepoEntry {
    pub fn of(s: &RepoSnapshot) -> Self {
        RepoEntry {
            owner: s.repo().owner().to_string(),
            name: s.repo().name().to_string(),
            snapshot_time: s.snapshot_time(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelinePayload {
    pub bars: Vec<TimelineBar>,
    pub legend: Vec<LegendEntry>,
}

pub fn timeline_payload(s: &RepoSnapshot, mode: TimelineMode, theme: &Theme) -> TimelinePayload {
    let bars = build_timeline(s, mode, theme);
    let legend = legend(&bars, mode, theme);
    TimelinePayload { bars, legend }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlacedNode {
    pub id: String,
    pub kind: NodeKind,
    pub display: String,
    pub color: String,
    pub roles: BTreeSet<Role>,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphMeta {
    pub seed: u64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphPayload {
    pub nodes: Vec<PlacedNode>,
    pub edges: Vec<GraphEdge>,
    pub meta: GraphMeta,
}

impl GraphPayload {
    pub fn has_commit_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(|e| e.kind == EdgeKind::HasCommit)
    }
}

pub fn graph_payload(
    issue: &IssueRecord,
    s: &RepoSnapshot,
    theme: &Theme,
    opts: GraphOptions,
    params: &LayoutParams,
) -> Result<GraphPayload, LayoutError> {
    let graph = build_issue_graph(issue, s, theme, opts);
    let placed = graph.layout(params)?;
    let nodes = graph
        .nodes
        .into_iter()
        .map(|n| {
            let (x, y) = placed.positions[&n.id];
            PlacedNode { id: n.id, kind: n.kind, display: n.display, color: n.color, roles: n.roles, x, y }
        })
        .collect();
    Ok(GraphPayload {
        nodes,
        edges: graph.edges,
        meta: GraphMeta { seed: params.seed, iterations: placed.iterations },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryPayload {
    pub wedges: Vec<DonutWedge>,
    pub total: u64,
}

/// A zero total yields no wedges rather than an error.
pub fn summary_payload(s: &RepoSnapshot, opts: &SummaryOptions, theme: &Theme) -> SummaryPayload {
    let summary = summarize_file_updates(s, opts);
    let palette = theme.donut_palette(summary.segments.len());
    let wedges = donut_geometry(&summary, &palette).unwrap_or_default();
    SummaryPayload { wedges, total: summary.total }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinPayload {
    pub lower: u64,
    pub upper: u64,
    /// `"L-U"`, accepted verbatim as the summary's `bin` filter.
    pub token: String,
    pub file_count: usize,
}

impl From<HistogramBin> for BinPayload {
    fn from(b: HistogramBin) -> Self {
        BinPayload {
            lower: b.range.lower(),
            upper: b.range.upper(),
            token: b.range.token(),
            file_count: b.file_count,
        }
    }
}

pub fn histogram_payload(s: &RepoSnapshot, bug_only: bool) -> Vec<BinPayload> {
    compute_histogram(s, bug_only).into_iter().map(BinPayload::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::testutil::*;
    use crate::analytics::BinRange;
    use serde_json::json;

    #[test]
    fn graph_payload_shape() {
        let issue = closed_issue(1, "2023-06-01T00:00:00Z", "2023-06-06T00:00:00Z");
        let s = snapshot(
            vec![issue.clone()],
            vec![commit(1, "2023-06-03T00:00:00Z", "fix: banner", &[("a.tsx", 1, 1)])],
        );
        let p = graph_payload(&issue, &s, &Theme::default(), GraphOptions::default(), &LayoutParams::default())
            .unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["meta"]["seed"], 42);
        assert_eq!(v["nodes"].as_array().unwrap().len(), 6);
        let user = v["nodes"].as_array().unwrap().iter().find(|n| n["id"] == "user:u1").unwrap();
        assert_eq!(user["kind"], "user");
        assert_eq!(user["roles"], json!(["creator"]));
        assert!(user["x"].is_f64());
        assert_eq!(p.has_commit_edges().filter(|e| e.bug_fix).count(), 1);
        let edge = &v["edges"].as_array().unwrap()[0];
        assert_eq!(edge["kind"], "created_by");
        assert_eq!(edge["bug_fix"], false);
    }

    #[test]
    fn empty_summary_has_no_wedges() {
        let s = snapshot(vec![], vec![]);
        let p = summary_payload(&s, &SummaryOptions::default(), &Theme::default());
        assert_eq!(p, SummaryPayload { wedges: vec![], total: 0 });
        assert!(histogram_payload(&s, false).is_empty());
    }

    #[test]
    fn bins_carry_tokens() {
        let s = snapshot(
            vec![],
            vec![commit(1, "2023-06-03T00:00:00Z", "m", &[("a", 1, 0), ("b", 2, 1), ("c", 9, 0)])],
        );
        let bins = histogram_payload(&s, false);
        let tokens: Vec<&str> = bins.iter().map(|b| b.token.as_str()).collect();
        assert_eq!(tokens, ["1-2", "2-4", "4-8", "8-16"]);
        assert_eq!(bins[2].file_count, 0);
        for b in &bins {
            assert_eq!(b.token.parse::<BinRange>().unwrap().lower(), b.lower);
        }
        let v = serde_json::to_value(&bins[0]).unwrap();
        assert_eq!(v, json!({"lower": 1, "upper": 2, "token": "1-2", "file_count": 1}));
    }

    #[test]
    fn summary_wedges_use_theme_palette() {
        let files: Vec<(String, u64, u64)> = (0..7).map(|i| (format!("f{i}"), 10 - i, 0)).collect();
        let refs: Vec<(&str, u64, u64)> = files.iter().map(|(p, a, d)| (p.as_str(), *a, *d)).collect();
        let s = snapshot(vec![], vec![commit(1, "2023-06-03T00:00:00Z", "m", &refs)]);
        let p = summary_payload(&s, &SummaryOptions::default(), &Theme::default());
        assert_eq!(p.wedges.len(), 6);
        assert_eq!(p.total, 10 + 9 + 8 + 7 + 6 + 5 + 4);
        assert_eq!(p.wedges[0].color, "66c2a5");
        assert_eq!(p.wedges[5].color, "b3b3b3");
        assert!(p.wedges[5].others);
    }
}
