//! Deterministic SVG renderings of lattices and periodic sets.

use std::fmt::Write;

use crate::family::{Point, RectFamily};
use crate::lattice::{enumerate_points, LatticeBasis};
use crate::periodic::{PeriodicSet, Window};

const PX: f64 = 40.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub enum Subject<'a> {
    Lattice(&'a LatticeBasis),
    Periodic(&'a PeriodicSet),
}

/// Points of the subject inside the closed window.
pub fn points_in(subject: &Subject<'_>, w: &Window) -> Vec<Point> {
    match subject {
        Subject::Lattice(b) => enumerate_points(b, (&w.x0, &w.x1), (&w.y0, &w.y1)).into_iter().map(|t| t.0).collect(),
        Subject::Periodic(ps) => {
            let mut v = ps.unfold(w);
            v.sort();
            v
        }
    }
}

/// Dots for every point, one translate of each rectangle anchored at the
/// window's lower-left corner plus a unit offset, and the fundamental cell
/// (parallelogram for a lattice, tile for a periodic set).
pub fn emit_svg(subject: &Subject<'_>, family: &RectFamily, w: &Window) -> String {
    let (x0, y1) = (w.x0.to_f64(), w.y1.to_f64());
    let width = (w.x1.to_f64() - x0) * PX + 2.0 * MARGIN;
    let height = (y1 - w.y0.to_f64()) * PX + 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + (x - x0) * PX;
    let sy = |y: f64| MARGIN + (y1 - y) * PX;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{width:.1}" height="{height:.1}" fill="white"/>"#);

    let cell: Vec<(f64, f64)> = match subject {
        Subject::Lattice(b) => {
            let (u, v) = (b.u(), b.v());
            [Point::origin(), u.clone(), u.add(&v), v].iter().map(|p| (p.x.to_f64(), p.y.to_f64())).collect()
        }
        Subject::Periodic(ps) => {
            let (tw, th) = (ps.tile_w.to_f64(), ps.tile_h.to_f64());
            vec![(0.0, 0.0), (tw, 0.0), (tw, th), (0.0, th)]
        }
    };
    let path: Vec<String> = cell.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let _ = writeln!(
        s,
        r##"<polygon class="cell" points="{}" fill="#eeeeee" stroke="black" stroke-width="1"/>"##,
        path.join(" ")
    );

    for (n, r) in family.rects().iter().enumerate() {
        let (ax, ay) = (x0 + 1.0 + 0.25 * n as f64, w.y0.to_f64() + 1.0 + 0.25 * n as f64);
        let (rw, rh) = (r.w.to_f64(), r.h.to_f64());
        let _ = writeln!(
            s,
            r#"<rect class="family" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="{}" stroke-width="2"><title>{}</title></rect>"#,
            sx(ax),
            sy(ay + rh),
            rw * PX,
            rh * PX,
            PALETTE[n % PALETTE.len()],
            r
        );
    }
    for p in points_in(subject, w) {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#,
            sx(p.x.to_f64()),
            sy(p.y.to_f64())
        );
    }
    s.push_str("</svg>\n");
    s
}
