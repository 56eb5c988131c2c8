use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use super::correlation::detect_bug_fix;
use crate::model::RepoSnapshot;

/// Display name of the aggregate wedge.
pub const OTHERS: &str = "OTHERS";

/// Updated lines (additions + deletions) per path, summed over commits.
/// Paths with zero updated lines are left out.
pub fn file_totals(s: &RepoSnapshot, bug_only: bool) -> BTreeMap<String, u64> {
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    for commit in s.commits() {
        if bug_only && !detect_bug_fix(&commit.message) {
            continue;
        }
        for f in &commit.files {
            *totals.entry(f.path.clone()).or_insert(0) += f.changes;
        }
    }
    totals.retain(|_, v| *v > 0);
    totals
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BinRangeError {
    #[error("bin must look like L-U, got {0:?}")]
    Syntax(String),
    #[error("bin {0:?} is not a histogram bin [2^k, 2^(k+1))")]
    NotABin(String),
}

/// Half-open range `[lower, upper)` of a histogram bin, `lower` a power of
/// two and `upper = 2 * lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinRange {
    lower: u64,
    upper: u64,
}

impl BinRange {
    /// Bin number `k` covers `[2^k, 2^(k+1))`.
    pub fn from_exponent(k: u32) -> Self {
        assert!(k < 63, "bin exponent out of range");
        Self { lower: 1 << k, upper: 1 << (k + 1) }
    }

    /// Bin containing `value` (which must be at least 1).
    pub fn containing(value: u64) -> Self {
        assert!(value >= 1, "only positive totals are binned");
        Self::from_exponent(63 - value.leading_zeros())
    }

    pub fn lower(&self) -> u64 {
        self.lower
    }

    pub fn upper(&self) -> u64 {
        self.upper
    }

    pub fn contains(&self, v: u64) -> bool {
        self.lower <= v && v < self.upper
    }

    /// The `L-U` token accepted by [`FromStr`].
    pub fn token(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BinRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lower, self.upper)
    }
}

impl FromStr for BinRange {
    type Err = BinRangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let syntax = || BinRangeError::Syntax(s.to_string());
        let (l, u) = s.split_once('-').ok_or_else(syntax)?;
        let lower: u64 = l.trim().parse().map_err(|_| syntax())?;
        let upper: u64 = u.trim().parse().map_err(|_| syntax())?;
        if lower == 0 || !lower.is_power_of_two() || lower >= 1 << 62 || upper != lower * 2 {
            return Err(BinRangeError::NotABin(s.to_string()));
        }
        Ok(BinRange { lower, upper })
    }
}

impl Serialize for BinRange {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryOptions {
    pub top_n: usize,
    pub bug_only: bool,
    pub excluded: BTreeSet<String>,
    pub bin_filter: Option<BinRange>,
}

impl Default for SummaryOptions {
    fn default() -> Self {
        Self { top_n: 5, bug_only: false, excluded: BTreeSet::new(), bin_filter: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// File path, or [`OTHERS`] for the aggregate.
    pub name: String,
    pub value: u64,
    pub others: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileUpdateSummary {
    pub segments: Vec<Segment>,
    pub total: u64,
    pub bug_only: bool,
    pub excluded: BTreeSet<String>,
    pub bin_filter: Option<BinRange>,
}

impl FileUpdateSummary {
    pub fn named(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| !s.others)
    }

    pub fn others(&self) -> Option<u64> {
        self.segments.iter().find(|s| s.others).map(|s| s.value)
    }
}

/// Top-N donut segments over precomputed per-path totals.
pub fn summarize_totals(totals: &BTreeMap<String, u64>, opts: &SummaryOptions) -> FileUpdateSummary {
    let mut kept: Vec<(&String, u64)> = totals
        .iter()
        .filter(|(path, _)| !opts.excluded.contains(*path))
        .filter(|(_, v)| opts.bin_filter.is_none_or(|b| b.contains(**v)))
        .map(|(p, v)| (p, *v))
        .collect();
    // BTreeMap order is lexicographic, so a stable sort keeps path order on ties.
    kept.sort_by_key(|&(_, v)| std::cmp::Reverse(v));

    let top_n = opts.top_n.max(1);
    let total = kept.iter().map(|(_, v)| v).sum();
    let mut segments: Vec<Segment> = kept
        .iter()
        .take(top_n)
        .map(|(p, v)| Segment { name: (*p).clone(), value: *v, others: false })
        .collect();
    if kept.len() > top_n {
        segments.push(Segment {
            name: OTHERS.to_string(),
            value: kept[top_n..].iter().map(|(_, v)| v).sum(),
            others: true,
        });
    }
    FileUpdateSummary {
        segments,
        total,
        bug_only: opts.bug_only,
        excluded: opts.excluded.clone(),
        bin_filter: opts.bin_filter,
    }
}

pub fn summarize_file_updates(s: &RepoSnapshot, opts: &SummaryOptions) -> FileUpdateSummary {
    summarize_totals(&file_totals(s, opts.bug_only), opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HistogramBin {
    pub range: BinRange,
    pub file_count: usize,
}

/// Power-of-two histogram of per-path totals. Leading and trailing empty
/// bins are dropped; empty bins between occupied ones stay with count 0.
pub fn histogram_of<'a>(totals: impl IntoIterator<Item = &'a u64>) -> Vec<HistogramBin> {
    let mut counts = [0usize; 64];
    for &v in totals {
        if v > 0 {
            counts[(63 - v.leading_zeros()) as usize] += 1;
        }
    }
    let Some(first) = counts.iter().position(|&c| c > 0) else {
        return Vec::new();
    };
    let last = counts.iter().rposition(|&c| c > 0).expect("some bin is occupied");
    (first..=last)
        .map(|k| HistogramBin { range: BinRange::from_exponent(k as u32), file_count: counts[k] })
        .collect()
}

pub fn compute_histogram(s: &RepoSnapshot, bug_only: bool) -> Vec<HistogramBin> {
    histogram_of(file_totals(s, bug_only).values())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("no updated lines, nothing to draw")]
    ZeroTotal,
    #[error("palette has {have} colors but {need} segments need one each")]
    PaletteTooShort { have: usize, need: usize },
}

/// Wedge of the donut. Angles are radians measured clockwise from 12 o'clock.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DonutWedge {
    pub name: String,
    pub value: u64,
    pub start_angle: f64,
    pub end_angle: f64,
    pub color: String,
    pub others: bool,
}

/// Lays the summary's segments around the circle in order. Named segments
/// take palette colors in order; OTHERS always takes the last palette color.
pub fn donut_geometry(
    summary: &FileUpdateSummary,
    palette: &[String],
) -> Result<Vec<DonutWedge>, GeometryError> {
    if summary.total == 0 {
        return Err(GeometryError::ZeroTotal);
    }
    let need = summary.segments.len();
    if palette.len() < need {
        return Err(GeometryError::PaletteTooShort { have: palette.len(), need });
    }
    let total = summary.total as f64;
    let mut cumulative = 0u64;
    Ok(summary
        .segments
        .iter()
        .enumerate()
        .map(|(i, seg)| {
            let start = TAU * cumulative as f64 / total;
            cumulative += seg.value;
            let end = TAU * cumulative as f64 / total;
            let color = if seg.others { palette[palette.len() - 1].clone() } else { palette[i].clone() };
            DonutWedge {
                name: seg.name.clone(),
                value: seg.value,
                start_angle: start,
                end_angle: end,
                color,
                others: seg.others,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::testutil::*;
    use super::*;
    use std::f64::consts::PI;

    /// Independent oracle: scan every power-of-two interval directly.
    fn brute_force_bins(totals: &[u64]) -> Vec<(u64, u64, usize)> {
        let mut bins: Vec<(u64, u64, usize)> = (0..63)
            .map(|k| {
                let (lo, hi) = (1u64 << k, 1u64 << (k + 1));
                (lo, hi, totals.iter().filter(|&&v| lo <= v && v < hi).count())
            })
            .collect();
        while bins.first().is_some_and(|b| b.2 == 0) {
            bins.remove(0);
        }
        while bins.last().is_some_and(|b| b.2 == 0) {
            bins.pop();
        }
        bins
    }

    fn as_triples(bins: &[HistogramBin]) -> Vec<(u64, u64, usize)> {
        bins.iter().map(|b| (b.range.lower(), b.range.upper(), b.file_count)).collect()
    }

    fn totals(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(p, v)| (p.to_string(), *v)).collect()
    }

    #[test]
    fn histogram_matches_brute_force() {
        let values = [1, 1, 2, 3, 4, 232];
        let expected = brute_force_bins(&values);
        assert_eq!(
            expected,
            vec![(1, 2, 2), (2, 4, 2), (4, 8, 1), (8, 16, 0), (16, 32, 0), (32, 64, 0), (64, 128, 0), (128, 256, 1)]
        );
        assert_eq!(as_triples(&histogram_of(&values)), expected);
    }

    #[test]
    fn histogram_degenerate_cases() {
        assert!(histogram_of(&[]).is_empty());
        assert_eq!(as_triples(&histogram_of(&[1, 1, 1])), vec![(1, 2, 3)]);
    }

    #[test]
    fn summary_top_five_and_others() {
        let t = totals(&[("README", 232), ("a", 20), ("b", 10), ("c", 8), ("d", 6), ("e", 2), ("f", 1)]);
        let s = summarize_totals(&t, &SummaryOptions::default());
        let named: Vec<(&str, u64)> = s.named().map(|s| (s.name.as_str(), s.value)).collect();
        assert_eq!(named, vec![("README", 232), ("a", 20), ("b", 10), ("c", 8), ("d", 6)]);
        assert_eq!(s.others(), Some(3));
        assert_eq!(s.total, 279);
    }

    #[test]
    fn summary_ties_break_by_path() {
        let t = totals(&[("b", 5), ("a", 5), ("c", 5)]);
        let s = summarize_totals(&t, &SummaryOptions { top_n: 2, ..Default::default() });
        let names: Vec<&str> = s.segments.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, vec!["a", "b", OTHERS]);
    }

    #[test]
    fn summary_without_others_when_few_files() {
        let t = totals(&[("a", 5), ("b", 1)]);
        let s = summarize_totals(&t, &SummaryOptions::default());
        assert_eq!(s.others(), None);
        assert_eq!(s.total, 6);
    }

    #[test]
    fn summary_exclusion_and_bin_filter() {
        let t = totals(&[("README.md", 232), ("a", 3), ("b", 2), ("c", 1), ("d", 5)]);
        let excl = SummaryOptions { excluded: ["README.md".to_string()].into(), ..Default::default() };
        let s = summarize_totals(&t, &excl);
        assert!(s.segments.iter().all(|seg| seg.name != "README.md"));
        assert_eq!(s.total, 11);

        let bin = SummaryOptions { bin_filter: Some("2-4".parse().unwrap()), ..Default::default() };
        let s = summarize_totals(&t, &bin);
        let names: Vec<&str> = s.segments.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, vec!["a", "b"]);
        assert_eq!(s.total, 5);
    }

    #[test]
    fn empty_snapshot_summary() {
        let s = summarize_file_updates(&snapshot(vec![], vec![]), &SummaryOptions::default());
        assert!(s.segments.is_empty());
        assert_eq!(s.total, 0);
        assert_eq!(donut_geometry(&s, &["000000".into()]), Err(GeometryError::ZeroTotal));
    }

    #[test]
    fn bug_only_uses_fix_commits() {
        let s = snapshot(
            vec![],
            vec![
                commit(1, "2023-06-01T00:00:00Z", "fix: crash on resize", &[("src/Windows.cpp", 12, 7)]),
                commit(2, "2023-06-02T00:00:00Z", "hyprctl: add json", &[("src/debug/HyprCtl.cpp", 20, 3), ("src/Windows.cpp", 1, 0)]),
            ],
        );
        let s = summarize_file_updates(&s, &SummaryOptions { bug_only: true, ..Default::default() });
        assert_eq!(s.segments, vec![Segment { name: "src/Windows.cpp".into(), value: 19, others: false }]);
    }

    #[test]
    fn stats_free_files_are_not_counted() {
        let s = snapshot(vec![], vec![commit(1, "2023-06-01T00:00:00Z", "x", &[("a", 0, 0), ("b", 1, 0)])]);
        assert_eq!(file_totals(&s, false), totals(&[("b", 1)]));
    }

    fn summary_of(values: &[u64]) -> FileUpdateSummary {
        let t: BTreeMap<String, u64> = values.iter().enumerate().map(|(i, v)| (format!("f{i}"), *v)).collect();
        summarize_totals(&t, &SummaryOptions::default())
    }

    fn palette(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{i:06x}")).collect()
    }

    #[test]
    fn donut_spans_are_proportional() {
        let w = donut_geometry(&summary_of(&[50, 25, 25]), &palette(3)).unwrap();
        let spans: Vec<f64> = w.iter().map(|w| w.end_angle - w.start_angle).collect();
        assert!((spans[0] - PI).abs() < 1e-12);
        assert!((spans[1] - PI / 2.0).abs() < 1e-12);
        assert!((spans[2] - PI / 2.0).abs() < 1e-12);
        assert_eq!(w[0].start_angle, 0.0);
    }

    #[test]
    fn donut_single_segment() {
        let w = donut_geometry(&summary_of(&[7]), &palette(1)).unwrap();
        assert_eq!(w.len(), 1);
        assert!((w[0].end_angle - TAU).abs() < 1e-12);
    }

    #[test]
    fn donut_readme_shaped() {
        let w = donut_geometry(&summary_of(&[232, 46]), &palette(2)).unwrap();
        let expected = [TAU * 232.0 / 278.0, TAU * 46.0 / 278.0];
        for (wedge, e) in w.iter().zip(expected) {
            assert!((wedge.end_angle - wedge.start_angle - e).abs() < 1e-12);
        }
        let sweep: f64 = w.iter().map(|w| w.end_angle - w.start_angle).sum();
        assert!((sweep - TAU).abs() < 1e-12);
    }

    #[test]
    fn donut_others_takes_last_color() {
        let s = summary_of(&[9, 8, 7, 6, 5, 4, 3]);
        let w = donut_geometry(&s, &palette(8)).unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(w[4].color, "000004");
        assert_eq!(w[5].color, "000007");
        assert!(w[5].others);
        assert_eq!(
            donut_geometry(&s, &palette(5)),
            Err(GeometryError::PaletteTooShort { have: 5, need: 6 })
        );
    }

    #[test]
    fn bin_tokens() {
        let b: BinRange = "2-4".parse().unwrap();
        assert_eq!((b.lower(), b.upper()), (2, 4));
        assert_eq!(b.token(), "2-4");
        assert!(b.contains(2) && b.contains(3) && !b.contains(4));
        assert_eq!(BinRange::containing(232).token(), "128-256");
        assert!(matches!("2-5".parse::<BinRange>(), Err(BinRangeError::NotABin(_))));
        assert!(matches!("3-6".parse::<BinRange>(), Err(BinRangeError::NotABin(_))));
        assert!(matches!("0-1".parse::<BinRange>(), Err(BinRangeError::NotABin(_))));
        assert!(matches!("abc".parse::<BinRange>(), Err(BinRangeError::Syntax(_))));
        assert!(matches!("1-x".parse::<BinRange>(), Err(BinRangeError::Syntax(_))));
    }
}
