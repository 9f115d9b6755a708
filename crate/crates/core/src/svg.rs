//! Deterministic SVG drawings of forests and networks.
//!
//! A vertex `(i,j,k)` is drawn at `i·A + j·B + k·C` for the corners
//! `A, B, C` of a unit equilateral triangle, so every plane `i+j+k = const`
//! maps affinely onto the page. Vertices are red, green or blue by color;
//! green diagonals are green, blue diagonals are blue.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::groves::{Forest, LozengeRegion};
use crate::lattice::Vertex;
use crate::networks::{CylNetwork, Node};

const SCALE: f64 = 28.0;
const MARGIN: f64 = 20.0;
const COLORS: [&str; 3] = ["#d62728", "#2ca02c", "#1f77b4"];

fn point(v: Vertex) -> (f64, f64) {
    let s = 3f64.sqrt() / 2.0;
    let (i, j, k) = (v.i as f64, v.j as f64, v.k as f64);
    (SCALE * s * (k - j), SCALE * (0.5 * (j + k) - i))
}

fn point4(sum: Vertex) -> (f64, f64) {
    let (x, y) = point(sum);
    (x / 4.0, y / 4.0)
}

struct Canvas {
    body: String,
    min: (f64, f64),
    max: (f64, f64),
}

impl Canvas {
    fn new() -> Self {
        Canvas { body: String::new(), min: (f64::MAX, f64::MAX), max: (f64::MIN, f64::MIN) }
    }

    fn grow(&mut self, (x, y): (f64, f64)) {
        self.min = (self.min.0.min(x), self.min.1.min(y));
        self.max = (self.max.0.max(x), self.max.1.max(y));
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), color: &str, width: f64, arrow: bool) {
        self.grow(a);
        self.grow(b);
        let marker = if arrow { r#" marker-end="url(#arrow)""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="{width}"{marker}/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    fn dot(&mut self, p: (f64, f64), r: f64, color: &str) {
        self.grow(p);
        let _ = writeln!(self.body, r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{color}"/>"#, p.0, p.1);
    }

    fn finish(self) -> String {
        let (w, h) = if self.min.0 > self.max.0 {
            (2.0 * MARGIN, 2.0 * MARGIN)
        } else {
            (self.max.0 - self.min.0 + 2.0 * MARGIN, self.max.1 - self.min.1 + 2.0 * MARGIN)
        };
        let (ox, oy) = if self.min.0 > self.max.0 { (0.0, 0.0) } else { (self.min.0 - MARGIN, self.min.1 - MARGIN) };
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="{ox:.2} {oy:.2} {w:.2} {h:.2}">"#
        );
        s.push_str(
            "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#444\"/></marker></defs>\n",
        );
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

/// The chosen diagonals of `f` over the vertices of `region`.
pub fn forest_svg(region: &LozengeRegion, f: &Forest) -> String {
    let mut c = Canvas::new();
    for (l, g) in region.lozenges.iter().zip(&f.green) {
        let (a, b) = l.diagonal(*g);
        let color = if *g { COLORS[1] } else { COLORS[2] };
        c.line(point(a), point(b), color, 2.5, false);
    }
    for u in &region.vertices {
        let r = if region.is_boundary(*u) { 4.0 } else { 3.0 };
        c.dot(point(*u), r, COLORS[u.color() as usize]);
    }
    c.finish()
}

/// Every edge of `net` as an arrow; lozenge centers are small grey dots.
pub fn network_svg(net: &CylNetwork) -> String {
    let pos = |n: &Node| match n {
        Node::V(v) => point(*v),
        Node::Center(l) => point4(l.center4()),
    };
    let mut c = Canvas::new();
    for e in &net.edges {
        let (a, b) = (pos(&net.nodes[e.from]), pos(&net.nodes[e.to]));
        let color = if e.weight.is_one() { "#888" } else { "#444" };
        c.line(a, b, color, 1.2, true);
    }
    for n in &net.nodes {
        match n {
            Node::V(v) => c.dot(pos(n), 3.0, COLORS[v.color() as usize]),
            Node::Center(_) => c.dot(pos(n), 1.5, "#888"),
        }
    }
    c.finish()
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_groves_draw_differently() {
        let region = LozengeRegion::new(Vertex::default(), 2).unwrap();
        let svgs: Vec<String> = region.enumerate_groves().iter().map(|f| forest_svg(&region, f)).collect();
        assert_eq!(svgs.len(), 3);
        assert!(svgs[0] != svgs[1] && svgs[1] != svgs[2] && svgs[0] != svgs[2]);
        let f = &region.enumerate_groves()[0];
        assert_eq!(forest_svg(&region, f), forest_svg(&region, f));
        assert!(svgs[0].starts_with("<svg") && svgs[0].ends_with("</svg>\n"));
    }
}
