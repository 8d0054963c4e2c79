//! DOT and SVG output.
//!
//! Level lines are drawn with the level coordinate horizontal and
//! increasing to the left, so the Picard translation moves pictures left.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arrangement::{ExchangeGraph, Kind, LevelArrangement};
use crate::linalg::{fmt_q, Q};
use crate::skms::SkmsDescription;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("no SVG drawing for {0}")]
    Unsupported(String),
}

fn f(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// The exchange graph in Graphviz DOT, one edge per adjacent pair.
pub fn exchange_graph_dot(graph: &ExchangeGraph, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph \"{name}\" {{");
    let _ = writeln!(s, "  node [shape=circle, fontsize=10];");
    for c in &graph.chambers {
        let label = match graph.kind {
            Kind::Finite => format!("C{}", c.id),
            Kind::Affine => {
                let pts: Vec<String> = graph
                    .alcove_vertices(c.id)
                    .iter()
                    .map(|v| v.iter().map(fmt_q).collect::<Vec<_>>().join(","))
                    .collect();
                format!("A{}\\n{}", c.id, pts.join(" "))
            }
        };
        let style = if c.id == ExchangeGraph::BASE { ", style=filled, fillcolor=\"#dddddd\"" } else { "" };
        let _ = writeln!(s, "  c{} [label=\"{}\"{}];", c.id, label, style);
    }
    for c in &graph.chambers {
        for (l, n) in c.neighbours.iter().enumerate() {
            if let Some(n) = n {
                if c.id < *n {
                    let _ = writeln!(s, "  c{} -- c{} [label=\"{}\"];", c.id, n, graph.label_name(l));
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

fn svg_open(s: &mut String, w: u32, h: u32) {
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"serif\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
}

/// The level line of a one-curve datum: a dotted line with a circle at each
/// wall, the rank label above and the position below. The interval
/// `[0, 1)` is shaded.
pub fn level_line_svg(la: &LevelArrangement) -> Result<String, RenderError> {
    if la.fd.n() != 1 {
        return Err(RenderError::Unsupported("level lines of multi-curve data".into()));
    }
    let (w, h, margin) = (960.0_f64, 200.0_f64, 40.0_f64);
    let (lo, hi) = (f(&la.window.lo), f(&la.window.hi));
    let px = |y: f64| margin + (hi - y) / (hi - lo) * (w - 2.0 * margin);
    let mid = h / 2.0;
    let mut s = String::new();
    svg_open(&mut s, w as u32, h as u32);
    let (a, b) = (px(1.0), px(0.0));
    let _ = writeln!(
        s,
        "<rect x=\"{a:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#eeeeee\"/>",
        mid - 50.0,
        b - a,
        100.0
    );
    let _ = writeln!(
        s,
        "<line x1=\"{:.2}\" y1=\"{mid}\" x2=\"{:.2}\" y2=\"{mid}\" stroke=\"black\" stroke-dasharray=\"2,3\"/>",
        margin,
        w - margin
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\">&#8592; y1</text>",
        margin,
        h - 12.0
    );
    let labels = la.level_walls();
    for (_, p) in &labels {
        let x = px(f(p));
        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{mid}\" r=\"4\" fill=\"white\" stroke=\"black\"/>");
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{}</text>",
            mid + 22.0,
            p
        );
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            mid - 12.0,
            p.denom()
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Two-dimensional pictures: finite arrangements as lines through the
/// origin, affine two-curve arrangements as alcove triangles on the level.
pub fn plane_svg(graph: &ExchangeGraph) -> Result<String, RenderError> {
    let size = 480.0_f64;
    let c = size / 2.0;
    let mut s = String::new();
    match (graph.kind, graph.dim) {
        (Kind::Finite, 2) => {
            svg_open(&mut s, size as u32, size as u32);
            let r = size * 0.45;
            for wall in &graph.walls {
                let (a, b) = (wall.covector[0] as f64, wall.covector[1] as f64);
                let norm = (a * a + b * b).sqrt();
                let (dx, dy) = (-b / norm * r, a / norm * r);
                let _ = writeln!(
                    s,
                    "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
                    c - dx,
                    c + dy,
                    c + dx,
                    c - dy
                );
            }
            for ch in &graph.chambers {
                let p = ch.interior_point();
                let (x, y) = (p[0] as f64, p[1] as f64);
                let norm = (x * x + y * y).sqrt();
                let (tx, ty) = (c + x / norm * r * 0.6, c - y / norm * r * 0.6);
                let _ = writeln!(
                    s,
                    "<text x=\"{tx:.2}\" y=\"{ty:.2}\" font-size=\"12\" text-anchor=\"middle\">C{}</text>",
                    ch.id
                );
            }
        }
        (Kind::Affine, 3) => {
            svg_open(&mut s, size as u32, size as u32);
            let pts: Vec<Vec<Vec<f64>>> = (0..graph.len())
                .map(|a| graph.alcove_vertices(a).iter().map(|v| v.iter().map(f).collect()).collect())
                .collect();
            // skew coordinates so that the A2 tiling looks equilateral
            let skew = |v: &[f64]| (v[0] + 0.5 * v[1], v[1] * 0.866);
            let extent = pts
                .iter()
                .flatten()
                .map(|v| {
                    let (x, y) = skew(v);
                    x.abs().max(y.abs())
                })
                .fold(1e-9_f64, f64::max);
            let scale = size * 0.45 / extent;
            let map = |v: &[f64]| {
                let (x, y) = skew(v);
                (c + x * scale, c - y * scale)
            };
            for (a, tri) in pts.iter().enumerate() {
                let pstr: Vec<String> = tri
                    .iter()
                    .map(|v| {
                        let (x, y) = map(v);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                let fill = if a == ExchangeGraph::BASE { "#dddddd" } else { "none" };
                let _ = writeln!(s, "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.7\"/>", pstr.join(" "));
            }
        }
        (kind, dim) => return Err(RenderError::Unsupported(format!("{kind:?} arrangements in dimension {dim}"))),
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// A sphere with two pole punctures and the equator holes, labelled by
/// rank.
pub fn skms_svg(desc: &SkmsDescription) -> String {
    let (w, h) = (420.0_f64, 420.0_f64);
    let (cx, cy, r) = (w / 2.0, h / 2.0, 160.0_f64);
    let ry = r * 0.28;
    let mut s = String::new();
    svg_open(&mut s, w as u32, h as u32);
    let _ = writeln!(s, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"none\" stroke=\"black\"/>");
    let _ = writeln!(
        s,
        "<path d=\"M {:.2} {cy} A {r} {ry} 0 0 1 {:.2} {cy}\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"3,3\"/>",
        cx - r,
        cx + r
    );
    let _ = writeln!(
        s,
        "<path d=\"M {:.2} {cy} A {r} {ry} 0 0 0 {:.2} {cy}\" fill=\"none\" stroke=\"black\"/>",
        cx - r,
        cx + r
    );
    // holes spread over the front half of the equator, in order
    let n = desc.equator_hole_count().max(1) as f64;
    for (k, lab) in desc.hole_labels.iter().enumerate() {
        let t = std::f64::consts::PI * (k as f64 + 0.5) / n;
        let (x, y) = (cx - r * t.cos(), cy + ry * t.sin());
        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"5\" fill=\"white\" stroke=\"black\"/>");
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{lab}</text>",
            y + 18.0
        );
    }
    for py in [cy - r * 0.72, cy + r * 0.72] {
        let _ = writeln!(s, "<circle cx=\"{cx}\" cy=\"{py:.2}\" r=\"5\" fill=\"white\" stroke=\"black\"/>");
    }
    let _ = writeln!(
        s,
        "<text x=\"{cx}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">length {}: {} punctures</text>",
        h - 14.0,
        desc.length,
        desc.total_punctures()
    );
    s.push_str("</svg>\n");
    s
}
