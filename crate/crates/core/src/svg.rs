//! SVG drawing of a linkage in one configuration.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::json::LinkageDoc;
use crate::linkage::{Configuration, EdgeKind, PlanePoint, VertexId};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 0.05;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[PlanePoint]) -> Frame {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points.iter().filter(|p| p.re.is_finite() && p.im.is_finite()) {
            lo_x = lo_x.min(p.re);
            hi_x = hi_x.max(p.re);
            lo_y = lo_y.min(p.im);
            hi_y = hi_y.max(p.im);
        }
        if lo_x > hi_x {
            (lo_x, hi_x, lo_y, hi_y) = (-1.0, 1.0, -1.0, 1.0);
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
        let pad = MARGIN * span;
        let (w, h) = (hi_x - lo_x + 2.0 * pad, hi_y - lo_y + 2.0 * pad);
        let scale = WIDTH / w;
        Frame { min_x: lo_x - pad, max_y: hi_y + pad, scale, height: h * scale }
    }

    fn map(&self, p: PlanePoint) -> (f64, f64) {
        ((p.re - self.min_x) * self.scale, (self.max_y - p.im) * self.scale)
    }
}

/// Draws every vertex placed by `conf` and every edge between placed vertices.
/// Cables are dashed; fixed vertices are filled squares, inputs circles and
/// outputs diamonds. A non-empty `overlay` is drawn as a polyline on top.
pub fn render_svg(doc: &LinkageDoc, conf: &Configuration, overlay: &[PlanePoint]) -> String {
    let l = &doc.linkage;
    let pos = |v: &VertexId| conf.get(v).or_else(|| l.anchor(v));
    let mut pts: Vec<PlanePoint> = l.vertex_ids().filter_map(|v| pos(v)).collect();
    pts.extend_from_slice(overlay);
    let f = Frame::fit(&pts);
    let unit = 0.006 * WIDTH;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = WIDTH,
        h = f.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g stroke-width="{:.2}" stroke-linecap="round">"#, unit * 0.4);
    for e in l.edges() {
        let (Some(a), Some(b)) = (pos(&e.u), pos(&e.v)) else { continue };
        let ((x1, y1), (x2, y2)) = (f.map(a), f.map(b));
        let style = match e.kind {
            EdgeKind::Rigid => r##"stroke="#222""##.to_string(),
            EdgeKind::Cable => format!(r##"stroke="#1f6fb4" stroke-dasharray="{:.1} {:.1}""##, unit * 1.5, unit),
        };
        let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#);
    }
    let _ = writeln!(s, "</g>");
    if overlay.len() > 1 {
        let path: Vec<String> = overlay
            .iter()
            .map(|&p| {
                let (x, y) = f.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="trace" fill="none" stroke="#d62728" stroke-width="{:.2}" points="{}"/>"##,
            unit * 0.3,
            path.join(" ")
        );
    }
    let inputs: BTreeSet<&VertexId> = doc.inputs.iter().collect();
    let outputs: BTreeSet<&VertexId> = doc.outputs.iter().collect();
    for v in l.vertex_ids() {
        let Some(p) = pos(v) else { continue };
        let (x, y) = f.map(p);
        let r = unit;
        if l.is_fixed(v) {
            let _ = writeln!(
                s,
                r##"<rect class="fixed" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#000"/>"##,
                x - r,
                y - r,
                2.0 * r,
                2.0 * r
            );
        } else {
            let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="#666"/>"##, r * 0.4);
        }
        if inputs.contains(v) {
            let _ = writeln!(
                s,
                r##"<circle class="input" cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="#2ca02c" stroke-width="{:.2}"/>"##,
                r * 1.6,
                unit * 0.4
            );
        }
        if outputs.contains(v) {
            let d = r * 1.8;
            let _ = writeln!(
                s,
                r##"<polygon class="output" points="{:.3},{y:.3} {x:.3},{:.3} {:.3},{y:.3} {x:.3},{:.3}" fill="none" stroke="#d62728" stroke-width="{:.2}"/>"##,
                x - d,
                y - d,
                x + d,
                y + d,
                unit * 0.4
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::two_bar;

    #[test]
    fn markers_and_dashes() {
        let g = two_bar(2.0, 1.0, PlanePoint::new(0.0, 0.0), true).unwrap();
        let (_, conf) = g.first_branch(&[PlanePoint::new(0.5, 2.0)]).unwrap().unwrap();
        let doc = LinkageDoc::from_gadget(&g);
        let svg = render_svg(&doc, &conf, &[PlanePoint::new(0.0, 0.0), PlanePoint::new(1.0, 1.0)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("stroke-dasharray"));
        assert_eq!(svg.matches("class=\"fixed\"").count(), g.linkage.anchors().count());
        assert_eq!(svg.matches("class=\"input\"").count(), 1);
        assert_eq!(svg.matches("class=\"output\"").count(), 1);
        assert_eq!(svg.matches("class=\"trace\"").count(), 1);
    }
}
