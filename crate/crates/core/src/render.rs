//! SVG drawings of template-built diagrams from their stored geometry.

use std::fmt::Write as _;

use crate::diagram::PlanarDiagram;
use crate::error::DiagramError;

const SCALE: f64 = 40.0;
const GAP: f64 = 0.2;
const MARGIN: f64 = 1.0;

/// Cuts `len` off the start of a polyline.
fn trim_start(pts: &[[f64; 2]], mut len: f64) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < pts.len() {
        let (a, b) = (pts[i], pts[i + 1]);
        let seg = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        if seg > len {
            let t = len / seg;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            out.extend_from_slice(&pts[i + 1..]);
            return out;
        }
        len -= seg;
        i += 1;
    }
    out
}

fn trim_end(pts: &[[f64; 2]], len: f64) -> Vec<[f64; 2]> {
    let rev: Vec<[f64; 2]> = pts.iter().rev().copied().collect();
    let mut t = trim_start(&rev, len);
    t.reverse();
    t
}

/// Strands as polylines broken where they pass under, twist boxes with their
/// labels, meridian marks dashed, seams dotted and the band core in red.
pub fn render_svg(d: &PlanarDiagram) -> Result<String, DiagramError> {
    let g = d.geometry.as_ref().ok_or(DiagramError::NoGeometry)?;
    let st = d.structure()?;
    let mut all: Vec<[f64; 2]> = g.arcs.values().flatten().copied().collect();
    all.extend(g.loops.iter().flatten().copied());
    all.extend(g.marks.iter().flat_map(|m| [[m.x0, m.y], [m.x1, m.y]]));
    all.extend(g.boxes.iter().flat_map(|b| [[b.x0, b.y0], [b.x1, b.y1]]));
    if all.is_empty() {
        all.push([0.0, 0.0]);
    }
    let xmin = all.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min) - MARGIN;
    let xmax = all.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max) + MARGIN;
    let ymin = all.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min) - MARGIN;
    let ymax = all.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max) + MARGIN;
    let (w, h) = ((xmax - xmin) * SCALE, (ymax - ymin) * SCALE);
    let tx = |p: [f64; 2]| ((p[0] - xmin) * SCALE, (ymax - p[1]) * SCALE);
    let poly = |pts: &[[f64; 2]]| {
        pts.iter()
            .map(|&p| {
                let (x, y) = tx(p);
                format!("{x:.1},{y:.1}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for b in &g.boxes {
        let (x0, y1) = tx([b.x0, b.y0]);
        let (x1, y0) = tx([b.x1, b.y1]);
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="#eef3ff" stroke="#6a7fb5" stroke-width="1"/>"##,
            x1 - x0,
            y1 - y0
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="12" fill="#334">{}</text>"##,
            x1 + 4.0,
            (y0 + y1) / 2.0,
            escape(&b.label)
        );
    }
    for seam in &g.seams {
        let (x0, y0) = tx(seam[0]);
        let (x1, y1) = tx(seam[1]);
        let _ = writeln!(
            s,
            r##"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x1:.1}" y2="{y1:.1}" stroke="#999" stroke-dasharray="2,4"/>"##
        );
    }
    for m in &g.marks {
        let (x0, y) = tx([m.x0, m.y]);
        let (x1, _) = tx([m.x1, m.y]);
        let _ = writeln!(
            s,
            r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="#2a8" stroke-dasharray="6,3"/>"##
        );
        let _ = writeln!(
            s,
            r##"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11" fill="#2a8">{}</text>"##,
            x0 - 22.0,
            y + 4.0,
            escape(&m.name)
        );
    }
    for (label, pts) in &g.arcs {
        let Some(ends) = st.arcs.get(label) else { continue };
        let mut p = pts.clone();
        if ends.tail.slot % 2 == 0 {
            p = trim_start(&p, GAP);
        }
        if ends.head.slot % 2 == 0 {
            p = trim_end(&p, GAP);
        }
        if p.len() >= 2 {
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, poly(&p));
        }
    }
    for l in &g.loops {
        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="black" stroke-width="2"/>"#, poly(l));
    }
    if let Some(core) = &g.band_core {
        let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#d33" stroke-width="5" opacity="0.6"/>"##, poly(core));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_pattern, FamilyParams};

    #[test]
    fn pattern_renders() {
        let p = build_pattern(&FamilyParams::new(1, 1, 0, 3).unwrap()).unwrap();
        let svg = render_svg(&p.diagram).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), p.diagram.arc_count());
        assert!(svg.contains("[1]") && svg.contains("[-1]"));
        assert_eq!(svg.matches("stroke-dasharray=\"6,3\"").count(), 4);
    }

    #[test]
    fn plain_diagram_is_rejected() {
        let d = PlanarDiagram::parse_pd("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(render_svg(&d), Err(DiagramError::NoGeometry));
    }

    #[test]
    fn trimming() {
        let t = trim_start(&[[0.0, 0.0], [1.0, 0.0]], 0.25);
        assert_eq!(t, vec![[0.25, 0.0], [1.0, 0.0]]);
        assert_eq!(trim_end(&[[0.0, 0.0], [1.0, 0.0]], 0.25), vec![[0.0, 0.0], [0.75, 0.0]]);
    }
}
