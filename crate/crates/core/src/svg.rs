//! Static SVG renderings of the three views.
//!
//! Output is a pure function of the payload: coordinates are printed with two
//! decimals, text uses a monospace face at a fixed size, and nothing depends
//! on fonts being available at render time.

use std::f64::consts::TAU;
use std::fmt::Write;

use chrono::Duration;

use crate::analytics::{LegendEntry, TimelineBar};
use crate::graph::NodeKind;
use crate::model::{format_timestamp, Timestamp};
use crate::payload::{BinPayload, GraphPayload, SummaryPayload, TimelinePayload};
use crate::theme::Theme;

const FONT_SIZE: u32 = 11;
/// Advance of one monospace glyph at `FONT_SIZE`.
const CHAR_W: f64 = 7.0;

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" { "0.00".into() } else { s }
}

fn esc(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if c.is_control() && c != '\n' && c != '\t' => {}
            c => out.push(c),
        }
    }
    out
}

fn open_svg(out: &mut String, width: f64, height: f64, view_box: Option<[f64; 4]>) {
    let vb = view_box.unwrap_or([0.0, 0.0, width, height]);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}" font-family="monospace" font-size="{FONT_SIZE}">"#,
        num(width),
        num(height),
        num(vb[0]),
        num(vb[1]),
        num(vb[2]),
        num(vb[3]),
    );
}

fn legend_row(out: &mut String, entries: &[LegendEntry], x0: f64, y: f64) {
    let mut x = x0;
    for e in entries {
        let _ = writeln!(
            out,
            r##"<rect class="legend-swatch" x="{}" y="{}" width="10" height="10" fill="#{}"/><text x="{}" y="{}">{}</text>"##,
            num(x),
            num(y),
            e.color,
            num(x + 14.0),
            num(y + 9.0),
            esc(&e.name)
        );
        x += 14.0 + CHAR_W * e.name.chars().count() as f64 + 16.0;
    }
}

const TL_WIDTH: f64 = 960.0;
const TL_LEFT: f64 = 70.0;
const TL_RIGHT: f64 = 30.0;
const TL_TOP: f64 = 40.0;
const TL_ROW: f64 = 20.0;
const TL_BAR: f64 = 14.0;
const STRIPE: f64 = 6.0;

fn tooltip(bar: &TimelineBar) -> String {
    let t = &bar.tooltip;
    let closed = t.closed_at.as_ref().map(format_timestamp).unwrap_or_else(|| "open".into());
    format!(
        "#{} {}\ncreated {}\nclosed {}\nlabels: {}",
        bar.issue_number,
        t.title,
        format_timestamp(&t.created_at),
        closed,
        t.labels.join(", ")
    )
}

/// Gantt chart: one row per issue, oldest first. Multi-colored bars are
/// filled with diagonal stripes cycling through their segment colors, and
/// every ongoing issue ends in a single `arrowhead` polygon.
pub fn timeline_svg(p: &TimelinePayload) -> String {
    let height = TL_TOP + TL_ROW * p.bars.len().max(1) as f64 + 40.0;
    let mut out = String::new();
    open_svg(&mut out, TL_WIDTH, height, None);
    legend_row(&mut out, &p.legend, TL_LEFT, 12.0);

    if p.bars.is_empty() {
        let _ = writeln!(out, r#"<text x="{}" y="{}">no issues</text>"#, num(TL_LEFT), num(TL_TOP + 12.0));
        out.push_str("</svg>\n");
        return out;
    }

    let t0 = p.bars.iter().map(|b| b.start).min().expect("non-empty");
    let t1 = p.bars.iter().map(|b| b.end).max().expect("non-empty");
    let span = (t1 - t0).num_milliseconds().max(1) as f64;
    let plot_w = TL_WIDTH - TL_LEFT - TL_RIGHT;
    let x_of = |t: Timestamp| TL_LEFT + (t - t0).num_milliseconds() as f64 / span * plot_w;

    let mut patterns: Vec<Vec<&str>> = Vec::new();
    for bar in &p.bars {
        let colors: Vec<&str> = bar.segments.iter().map(|s| s.color.as_str()).collect();
        if colors.len() > 1 && !patterns.contains(&colors) {
            patterns.push(colors);
        }
    }
    if !patterns.is_empty() {
        out.push_str("<defs>\n");
        for (i, colors) in patterns.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<pattern id="stripes-{i}" patternUnits="userSpaceOnUse" width="{}" height="{}" patternTransform="rotate(45)">"#,
                num(STRIPE * colors.len() as f64),
                num(STRIPE)
            );
            for (k, c) in colors.iter().enumerate() {
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="0" width="{}" height="{}" fill="#{c}"/>"##,
                    num(STRIPE * k as f64),
                    num(STRIPE),
                    num(STRIPE)
                );
            }
            out.push_str("</pattern>\n");
        }
        out.push_str("</defs>\n");
    }

    for (row, bar) in p.bars.iter().enumerate() {
        let y = TL_TOP + TL_ROW * row as f64;
        let x = x_of(bar.start);
        let w = (x_of(bar.end) - x).max(1.0);
        let colors: Vec<&str> = bar.segments.iter().map(|s| s.color.as_str()).collect();
        let fill = match patterns.iter().position(|c| *c == colors) {
            Some(i) => format!("url(#stripes-{i})"),
            None => format!("#{}", colors[0]),
        };
        let _ = writeln!(out, r#"<g class="bar" data-issue="{}">"#, bar.issue_number);
        let _ = writeln!(out, "<title>{}</title>", esc(&tooltip(bar)));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">#{}</text>"#,
            num(TL_LEFT - 6.0),
            num(y + TL_BAR - 3.0),
            bar.issue_number
        );
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            num(x),
            num(y),
            num(w),
            num(TL_BAR)
        );
        if bar.ongoing {
            let xe = x + w;
            let _ = writeln!(
                out,
                r##"<polygon class="arrowhead" points="{},{} {},{} {},{}" fill="#{}"/>"##,
                num(xe),
                num(y - 2.0),
                num(xe + 10.0),
                num(y + TL_BAR / 2.0),
                num(xe),
                num(y + TL_BAR + 2.0),
                colors[0]
            );
        }
        out.push_str("</g>\n");
    }

    let axis_y = TL_TOP + TL_ROW * p.bars.len() as f64 + 8.0;
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333333"/>"##,
        num(TL_LEFT),
        num(axis_y),
        num(TL_LEFT + plot_w),
        num(axis_y)
    );
    for i in 0..=4 {
        let t = t0 + Duration::milliseconds((span * i as f64 / 4.0) as i64);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(x_of(t)),
            num(axis_y + 16.0),
            t.format("%Y-%m-%d")
        );
    }
    out.push_str("</svg>\n");
    out
}

const DONUT_CX: f64 = 200.0;
const DONUT_CY: f64 = 200.0;
const DONUT_R: f64 = 150.0;
const DONUT_INNER: f64 = 90.0;

/// Point on a circle for an angle measured clockwise from 12 o'clock.
fn polar(r: f64, angle: f64) -> (f64, f64) {
    (DONUT_CX + r * angle.sin(), DONUT_CY - r * angle.cos())
}

fn annulus_path(start: f64, end: f64) -> String {
    // A single arc cannot span the full circle; split it at the midpoint.
    if end - start >= TAU - 1e-9 {
        let mid = start + (end - start) / 2.0;
        return format!("{} {}", annulus_path(start, mid), annulus_path(mid, end));
    }
    let large = u8::from(end - start > TAU / 2.0);
    let (ox0, oy0) = polar(DONUT_R, start);
    let (ox1, oy1) = polar(DONUT_R, end);
    let (ix1, iy1) = polar(DONUT_INNER, end);
    let (ix0, iy0) = polar(DONUT_INNER, start);
    format!(
        "M{} {} A{} {} 0 {large} 1 {} {} L{} {} A{} {} 0 {large} 0 {} {} Z",
        num(ox0),
        num(oy0),
        num(DONUT_R),
        num(DONUT_R),
        num(ox1),
        num(oy1),
        num(ix1),
        num(iy1),
        num(DONUT_INNER),
        num(DONUT_INNER),
        num(ix0),
        num(iy0)
    )
}

const HIST_X: f64 = 440.0;
const HIST_W: f64 = 500.0;
const HIST_BASE: f64 = 340.0;
const HIST_H: f64 = 260.0;

/// Donut of the top files beside the histogram of per-file totals.
pub fn summary_svg(summary: &SummaryPayload, bins: &[BinPayload], theme: &Theme) -> String {
    let height = 400.0 + 16.0 * summary.wedges.len() as f64;
    let mut out = String::new();
    open_svg(&mut out, 960.0, height, None);

    if summary.wedges.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">no updated lines</text>"#,
            num(DONUT_CX),
            num(DONUT_CY)
        );
    }
    for w in &summary.wedges {
        let class = if w.others { "wedge others" } else { "wedge" };
        let _ = writeln!(
            out,
            r##"<path class="{class}" d="{}" fill="#{}"><title>{} ({} lines)</title></path>"##,
            annulus_path(w.start_angle, w.end_angle),
            w.color,
            esc(&w.name),
            w.value
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="donut-total" x="{}" y="{}" text-anchor="middle">{} lines</text>"#,
        num(DONUT_CX),
        num(DONUT_CY + 4.0),
        summary.total
    );
    for (i, w) in summary.wedges.iter().enumerate() {
        let y = 2.0 * DONUT_CY + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="10" height="10" fill="#{}"/><text x="{}" y="{}">{} {}</text>"##,
            num(DONUT_CX - DONUT_R),
            num(y),
            w.color,
            num(DONUT_CX - DONUT_R + 14.0),
            num(y + 9.0),
            esc(&w.name),
            w.value
        );
    }

    let max = bins.iter().map(|b| b.file_count).max().unwrap_or(0).max(1) as f64;
    let slot = HIST_W / bins.len().max(1) as f64;
    for (i, b) in bins.iter().enumerate() {
        let h = HIST_H * b.file_count as f64 / max;
        let x = HIST_X + slot * i as f64;
        let _ = writeln!(
            out,
            r##"<rect class="bin" data-bin="{}" x="{}" y="{}" width="{}" height="{}" fill="#{}"><title>{} lines: {} files</title></rect>"##,
            b.token,
            num(x + 2.0),
            num(HIST_BASE - h),
            num((slot - 4.0).max(1.0)),
            num(h),
            theme.histogram,
            b.token,
            b.file_count
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(x + slot / 2.0),
            num(HIST_BASE + 14.0),
            b.token
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num(x + slot / 2.0),
            num(HIST_BASE - h - 4.0),
            b.file_count
        );
    }
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333333"/>"##,
        num(HIST_X),
        num(HIST_BASE),
        num(HIST_X + HIST_W),
        num(HIST_BASE)
    );
    out.push_str("</svg>\n");
    out
}

const GRAPH_PAD: f64 = 40.0;

fn node_radius(kind: NodeKind) -> f64 {
    match kind {
        NodeKind::Issue => 12.0,
        NodeKind::Commit => 7.0,
        NodeKind::User | NodeKind::File => 6.0,
    }
}

/// The laid-out issue graph. Bug-fix `has_commit` edges use the theme's
/// bug-fix color; every other edge is drawn in the neutral edge color.
pub fn graph_svg(p: &GraphPayload, theme: &Theme) -> String {
    let xs = p.nodes.iter().map(|n| n.x);
    let ys = p.nodes.iter().map(|n| n.y);
    let min_x = xs.clone().fold(f64::INFINITY, f64::min);
    let max_x = xs.fold(f64::NEG_INFINITY, f64::max);
    let min_y = ys.clone().fold(f64::INFINITY, f64::min);
    let max_y = ys.fold(f64::NEG_INFINITY, f64::max);
    let (min_x, max_x, min_y, max_y) =
        if p.nodes.is_empty() { (0.0, 0.0, 0.0, 0.0) } else { (min_x, max_x, min_y, max_y) };
    let vb = [
        min_x - GRAPH_PAD,
        min_y - GRAPH_PAD - 20.0,
        max_x - min_x + 2.0 * GRAPH_PAD,
        max_y - min_y + 2.0 * GRAPH_PAD + 20.0,
    ];
    let mut out = String::new();
    open_svg(&mut out, vb[2], vb[3], Some(vb));

    let legend = [
        ("issue", "status"),
        ("user", theme.node.user.as_str()),
        ("commit", theme.node.commit.as_str()),
        ("file", theme.node.file.as_str()),
    ];
    let mut lx = vb[0] + 4.0;
    for (name, color) in legend {
        let fill = if color == "status" { format!("#{}", theme.status_open) } else { format!("#{color}") };
        let _ = writeln!(
            out,
            r#"<circle class="legend-swatch" cx="{}" cy="{}" r="5" fill="{fill}"/><text x="{}" y="{}">{name}</text>"#,
            num(lx + 5.0),
            num(vb[1] + 10.0),
            num(lx + 14.0),
            num(vb[1] + 14.0)
        );
        lx += 14.0 + CHAR_W * name.len() as f64 + 16.0;
    }

    let pos = |id: &str| p.nodes.iter().find(|n| n.id == id).map(|n| (n.x, n.y)).unwrap_or((0.0, 0.0));
    for e in &p.edges {
        let (x1, y1) = pos(&e.source);
        let (x2, y2) = pos(&e.target);
        let (class, color, width) =
            if e.bug_fix { ("edge bug-fix", &theme.bug_fix_edge, 2.5) } else { ("edge", &theme.edge, 1.0) };
        let _ = writeln!(
            out,
            r##"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#{color}" stroke-width="{}"/>"##,
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            num(width)
        );
    }
    for n in &p.nodes {
        let kind = n.kind.as_str();
        let _ = writeln!(
            out,
            r##"<circle class="node {kind}" data-id="{}" cx="{}" cy="{}" r="{}" fill="#{}"><title>{}</title></circle>"##,
            esc(&n.id),
            num(n.x),
            num(n.y),
            num(node_radius(n.kind)),
            n.color,
            esc(&n.display)
        );
    }
    out.push_str("</svg>\n");
    out
}
