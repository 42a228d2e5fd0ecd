//! Schematic SVG: each face is a disk whose boundary is split into its
//! sides, labelled with signed edge ids; curve arcs are straight chords.

use std::f64::consts::PI;
use std::fmt::Write;

use surfcurve::curve::CrossCurve;
use surfcurve::overlay::End;
use surfcurve::SurfaceMap;

const CELL: f64 = 240.0;
const RADIUS: f64 = 90.0;
const COLUMNS: usize = 4;

fn centre(f: usize) -> (f64, f64) {
    let (r, c) = (f / COLUMNS, f % COLUMNS);
    (CELL * (c as f64 + 0.5), CELL * (r as f64 + 0.5) + 20.0)
}

/// Position at fraction `t` along side `pos` of face `f`.
fn on_side(m: &SurfaceMap, f: usize, pos: usize, t: f64, radius: f64) -> (f64, f64) {
    let k = m.face(f).len() as f64;
    let a = -PI / 2.0 + 2.0 * PI * (pos as f64 + t) / k;
    let (cx, cy) = centre(f);
    (cx + radius * a.cos(), cy + radius * a.sin())
}

/// Where crossing point `point` sits on occurrence `occ`.
fn point_at(m: &SurfaceMap, c: &CrossCurve, occ: usize, point: usize) -> (f64, f64) {
    let side = m.occ_side(occ);
    let pts = &c.arrangement.edge_points[side.edge];
    let i = pts.iter().position(|&p| p == point).unwrap_or(0);
    let mut t = (i + 1) as f64 / (pts.len() + 1) as f64;
    if side.rev {
        t = 1.0 - t;
    }
    on_side(m, m.occ_face(occ), m.occ_pos(occ), t, RADIUS)
}

pub fn svg(m: &SurfaceMap, curve: Option<&CrossCurve>) -> String {
    let nf = m.num_faces();
    let rows = nf.div_ceil(COLUMNS);
    let (w, h) = (CELL * COLUMNS.min(nf).max(1) as f64, CELL * rows as f64 + 20.0);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" font-family="monospace" font-size="12">"#, w, h).unwrap();
    writeln!(
        s,
        r#"<text x="8" y="16">g={} {} V={} E={} F={}</text>"#,
        m.euler_genus(),
        if m.is_orientable() { "orientable" } else { "non-orientable" },
        m.num_vertices(),
        m.num_edges(),
        nf
    )
    .unwrap();
    for f in 0..nf {
        let (cx, cy) = centre(f);
        writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="{:.1}" fill="none" stroke="black"/>"#, cx, cy, RADIUS).unwrap();
        writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" fill="gray">f{}</text>"#, cx, cy + 4.0, f).unwrap();
        for (pos, side) in m.face(f).iter().enumerate() {
            let (x, y) = on_side(m, f, pos, 0.0, RADIUS);
            writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="black"/>"#, x, y).unwrap();
            let (lx, ly) = on_side(m, f, pos, 0.5, RADIUS + 14.0);
            let label = format!("{}{}", if side.rev { "-" } else { "+" }, side.edge + 1);
            writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, lx, ly + 4.0, label).unwrap();
        }
    }
    if let Some(c) = curve {
        if let Some(f) = c.trivial_face {
            let (cx, cy) = centre(f);
            writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="20" fill="none" stroke="red" stroke-width="2"/>"#, cx, cy).unwrap();
        }
        for arc in &c.arrangement.arcs {
            let end = |e: End| match e {
                End::Point { point, side } => {
                    let edge = c.arrangement.point_edge[point];
                    point_at(m, c, m.edge_occs(edge)[side as usize], point)
                }
                End::Hub(_) => centre(arc.face),
            };
            let ((x1, y1), (x2, y2)) = (end(arc.a), end(arc.b));
            writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="red" stroke-width="2"/>"#, x1, y1, x2, y2).unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
