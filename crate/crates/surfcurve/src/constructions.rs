//! Inconsistent edges, cycle merging and the orienting curve.

use crate::curve::CrossCurve;
use crate::error::{Error, Result};
use crate::flags::Dsu;
use crate::map::SurfaceMap;
use crate::overlay::{trace_curve, Arrangement, End};

/// A choice of orientation per face and the edges whose two sides are then
/// traversed in the same direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconsistentEdgeSet {
    /// `true` when the face is taken against its word direction.
    pub flipped: Vec<bool>,
    pub edges: Vec<usize>,
}

/// Orients faces along a spanning tree of the face adjacency and collects
/// the edges left inconsistent.
pub fn inconsistent_edges(g: &SurfaceMap) -> InconsistentEdgeSet {
    let nf = g.num_faces();
    let mut flipped = vec![false; nf];
    let mut seen = vec![false; nf];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for pos in 0..g.face(f).len() {
            let o = g.occ(f, pos);
            let other = g.other_occ(o);
            let h = g.occ_face(other);
            if seen[h] {
                continue;
            }
            seen[h] = true;
            // Opposite traversal directions after flipping.
            let dir_here = g.occ_side(o).rev ^ flipped[f];
            flipped[h] = g.occ_side(other).rev == dir_here;
            queue.push_back(h);
        }
    }
    let edges = (0..g.num_edges())
        .filter(|&e| {
            let [a, b] = g.edge_occs(e);
            let da = g.occ_side(a).rev ^ flipped[g.occ_face(a)];
            let db = g.occ_side(b).rev ^ flipped[g.occ_face(b)];
            da == db
        })
        .collect();
    InconsistentEdgeSet { flipped, edges }
}

/// Boundary points of a face in traversal order as `(point, side)`.
fn face_points(m: &SurfaceMap, arr: &Arrangement, f: usize) -> Vec<(usize, u8)> {
    let mut out = Vec::new();
    for (pos, side) in m.face(f).iter().enumerate() {
        let occ = m.occ(f, pos);
        let s = if m.edge_occs(side.edge)[0] == occ { 0u8 } else { 1u8 };
        let pts = &arr.edge_points[side.edge];
        if side.rev {
            out.extend(pts.iter().rev().map(|&p| (p, s)));
        } else {
            out.extend(pts.iter().map(|&p| (p, s)));
        }
    }
    out
}

/// Region walk of a non-crossing matching: gap `i` lies between boundary
/// positions `i` and `i + 1`; each region lists its chords as (x, y) pairs
/// traversed from x to y.
fn regions(partner: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let n = partner.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for g0 in 0..n {
        if seen[g0] {
            continue;
        }
        let mut reg = Vec::new();
        let mut g = g0;
        while !seen[g] {
            seen[g] = true;
            let x = (g + 1) % n;
            let y = partner[x];
            reg.push((x, y));
            g = y;
        }
        out.push(reg);
    }
    out
}

/// Draws a simple closed curve on the cross-metric map `m` crossing each
/// edge `e` exactly `mu[e]` times. Edge ids are shared with the dual graph,
/// so `mu` may equally be read as multiplicities on its edges.
pub fn merge_to_simple_cycle(m: &SurfaceMap, mu: &[usize]) -> Result<CrossCurve> {
    if mu.len() != m.num_edges() {
        return Err(Error::SurfaceMismatch("multiplicity table length".into()));
    }
    for f in 0..m.num_faces() {
        let deg: usize = m.face(f).iter().map(|s| mu[s.edge]).sum();
        if deg % 2 == 1 {
            return Err(Error::OddVertexDegree(f));
        }
    }
    let mut face_dsu = Dsu::new(m.num_faces());
    let mut touched = vec![false; m.num_faces()];
    for e in 0..m.num_edges() {
        if mu[e] > 0 {
            let (a, b) = m.edge_faces(e);
            face_dsu.union(a as u32, b as u32);
            touched[a] = true;
            touched[b] = true;
        }
    }
    let mut roots: Vec<u32> = (0..m.num_faces()).filter(|&f| touched[f]).map(|f| face_dsu.find(f as u32)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() != 1 {
        return Err(Error::DisconnectedSupport);
    }

    let mut arr = Arrangement::empty(m.num_edges());
    for e in 0..m.num_edges() {
        for j in 0..mu[e] {
            arr.add_point(e, j);
        }
    }
    let npts = arr.point_edge.len();
    let bpts: Vec<Vec<(usize, u8)>> = (0..m.num_faces()).map(|f| face_points(m, &arr, f)).collect();
    let mut partner: Vec<Vec<usize>> = bpts
        .iter()
        .map(|b| (0..b.len()).map(|i| i ^ 1).collect())
        .collect();
    // Cycles of the initial drawing: points joined by chords.
    let mut cls = Dsu::new(npts);
    for (f, b) in bpts.iter().enumerate() {
        for i in (0..b.len()).step_by(2) {
            cls.union(b[i].0 as u32, b[partner[f][i]].0 as u32);
        }
    }

    for f in 0..m.num_faces() {
        let b = &bpts[f];
        if b.len() < 4 {
            continue;
        }
        loop {
            let mut swapped = false;
            'regions: for reg in regions(&partner[f]) {
                for a in 0..reg.len() {
                    for c in a + 1..reg.len() {
                        let (x1, y1) = reg[a];
                        let (x2, y2) = reg[c];
                        let ca = cls.find(b[x1].0 as u32);
                        let cc = cls.find(b[x2].0 as u32);
                        if ca != cc {
                            let pf = &mut partner[f];
                            pf[y1] = x2;
                            pf[x2] = y1;
                            pf[y2] = x1;
                            pf[x1] = y2;
                            cls.union(ca, cc);
                            swapped = true;
                            break 'regions;
                        }
                    }
                }
            }
            if !swapped {
                break;
            }
        }
    }

    for (f, b) in bpts.iter().enumerate() {
        for i in 0..b.len() {
            let j = partner[f][i];
            if i < j {
                let (p, s) = b[i];
                let (q, t) = b[j];
                arr.add_arc(f, End::Point { point: p, side: s }, End::Point { point: q, side: t }, 0);
            }
        }
    }
    let curve = CrossCurve { arrangement: arr, trivial_face: None };
    trace_curve(&curve.arrangement, 0).map_err(|e| Error::Invariant(format!("merge left several cycles: {}", e)))?;
    if !curve.is_simple(m) {
        return Err(Error::Invariant("merged curve is not simple".into()));
    }
    Ok(curve)
}

/// An orienting curve of multiplicity at most two on a non-orientable
/// cross-metric map.
pub fn orienting_curve(m: &SurfaceMap) -> Result<CrossCurve> {
    if m.is_orientable() {
        return Err(Error::SurfaceOrientable);
    }
    let g = m.dual().map;
    let inc = inconsistent_edges(&g);
    let mut mu = vec![2usize; m.num_edges()];
    for &e in &inc.edges {
        mu[e] = 1;
    }
    merge_to_simple_cycle(m, &mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{CurveClass, Sidedness};
    use crate::cut::cut_edges;
    use crate::map::from_words;

    #[test]
    fn inconsistent_edge_examples() {
        assert!(inconsistent_edges(&from_words(&["+1 +2 -1 -2"]).unwrap()).edges.is_empty());
        assert_eq!(inconsistent_edges(&from_words(&["+1 +1 +2 +2"]).unwrap()).edges, vec![0, 1]);
        assert_eq!(inconsistent_edges(&from_words(&["+1 +1"]).unwrap()).edges, vec![0]);
        let sphere = from_words(&["+1 +2 +3", "-3 -2 -1"]).unwrap();
        assert!(inconsistent_edges(&sphere).edges.is_empty());
    }

    #[test]
    fn cutting_inconsistent_edges_orients() {
        for w in [vec!["+1 +1 +2 +2"], vec!["+1 +2 +3", "+3 +2 -1"], vec!["+1 +2 +1 +3", "-3 +4 -2 +4"]] {
            let m = from_words(&w).unwrap();
            let inc = inconsistent_edges(&m);
            let cut = cut_edges(&m, &inc.edges);
            assert!(cut.orientable.iter().all(|&o| o));
            for v in 0..m.num_vertices() {
                let k: usize = inc
                    .edges
                    .iter()
                    .map(|&e| {
                        let (a, b) = m.edge_ends(e);
                        (a == v) as usize + (b == v) as usize
                    })
                    .sum();
                assert_eq!(k % 2, 0);
            }
        }
    }

    #[test]
    fn merge_examples() {
        let pp = from_words(&["+1 +1"]).unwrap();
        let c = merge_to_simple_cycle(&pp, &[2]).unwrap();
        assert_eq!(c.crossing_counts(), vec![2]);
        assert!(c.is_simple(&pp));
        let kb = from_words(&["+1 +1 +2 +2"]).unwrap();
        let c = merge_to_simple_cycle(&kb, &[1, 1]).unwrap();
        assert_eq!(c.crossing_counts(), vec![1, 1]);
        assert_eq!(merge_to_simple_cycle(&kb, &[0, 0]), Err(Error::DisconnectedSupport));
        let c = merge_to_simple_cycle(&kb, &[1, 0]).unwrap();
        assert_eq!(c.crossing_counts(), vec![1, 0]);
        let sphere = from_words(&["+1 +2", "-2 -1"]).unwrap();
        assert_eq!(merge_to_simple_cycle(&sphere, &[1, 0]), Err(Error::OddVertexDegree(0)));
    }

    #[test]
    fn orienting_curve_examples() {
        let pp = from_words(&["+1 +1"]).unwrap();
        let c = orienting_curve(&pp).unwrap();
        assert_eq!(c.crossing_counts(), vec![1]);
        assert_eq!(c.classify_by_cutting(&pp).unwrap(), CurveClass::NonsepOrienting(Sidedness::OneSided));
        let kb = from_words(&["+1 +1 +2 +2"]).unwrap();
        let c = orienting_curve(&kb).unwrap();
        assert_eq!(c.crossing_counts(), vec![1, 1]);
        assert_eq!(c.classify_by_cutting(&kb).unwrap(), CurveClass::NonsepOrienting(Sidedness::TwoSided));
        assert_eq!(orienting_curve(&from_words(&["+1 +2 -1 -2"]).unwrap()), Err(Error::SurfaceOrientable));
    }
}
