//! Minimal SVG 1.1 rendering of lattice polygons.

use std::fmt::Write as _;

use crate::planar::{convex_hull, Pt};

const UNIT: i64 = 40;
const MARGIN: i64 = 40;

/// Polygon outline with one labelled dot per vertex. Lattice coordinates are
/// scaled by an integer factor and the y axis points up.
pub fn polygon_svg(vertices: &[Pt], title: &str) -> String {
    let hull = convex_hull(vertices);
    let max_x = vertices.iter().map(|p| p[0]).max().unwrap_or(0);
    let min_x = vertices.iter().map(|p| p[0]).min().unwrap_or(0);
    let max_y = vertices.iter().map(|p| p[1]).max().unwrap_or(0);
    let min_y = vertices.iter().map(|p| p[1]).min().unwrap_or(0);
    let width = (max_x - min_x) * UNIT + 2 * MARGIN;
    let height = (max_y - min_y) * UNIT + 2 * MARGIN;
    let map = |p: Pt| (MARGIN + (p[0] - min_x) * UNIT, MARGIN + (max_y - p[1]) * UNIT);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let points: Vec<String> = hull
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(s, r##"<polygon points="{}" fill="#dde8f3" stroke="#1f4e79" stroke-width="2"/>"##, points.join(" "));
    let mut labelled: Vec<Pt> = vertices.to_vec();
    labelled.sort_unstable();
    labelled.dedup();
    for p in labelled {
        let (x, y) = map(p);
        let _ = writeln!(s, r##"<circle cx="{x}" cy="{y}" r="4" fill="#1f4e79"/>"##);
        let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="monospace" font-size="12">({},{})</text>"#, x + 6, y - 6, p[0], p[1]);
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
