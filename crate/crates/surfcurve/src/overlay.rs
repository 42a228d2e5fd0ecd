//! Curves drawn inside the faces of a map, and the refined map they induce.
//!
//! An [`Arrangement`] places crossing points along base edges and connects
//! them by arcs inside faces. Arcs may also end at hubs, interior nodes with
//! a counter-clockwise ring of arc ends (used for based loop systems).
//! Arcs never cross; a drawing whose arcs would have to cross is rejected.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Side, SurfaceMap};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    /// Crossing point `point` seen from side `side` (index into `edge_occs`).
    Point { point: usize, side: u8 },
    Hub(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub face: usize,
    pub a: End,
    pub b: End,
    pub curve: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hub {
    pub face: usize,
    /// Counter-clockwise ring of `(arc, end)` with end 0 = `a`, 1 = `b`.
    pub ring: Vec<(usize, u8)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    /// Per base edge, point ids ordered from tail to head.
    pub edge_points: Vec<Vec<usize>>,
    pub point_edge: Vec<usize>,
    pub arcs: Vec<Arc>,
    pub hubs: Vec<Hub>,
}

impl Arrangement {
    pub fn empty(num_edges: usize) -> Arrangement {
        Arrangement { edge_points: vec![Vec::new(); num_edges], ..Default::default() }
    }

    /// Inserts a crossing point on `edge` at position `pos` (0 = next to the tail).
    pub fn add_point(&mut self, edge: usize, pos: usize) -> usize {
        let id = self.point_edge.len();
        self.point_edge.push(edge);
        self.edge_points[edge].insert(pos, id);
        id
    }

    pub fn add_arc(&mut self, face: usize, a: End, b: End, curve: usize) -> usize {
        self.arcs.push(Arc { face, a, b, curve });
        self.arcs.len() - 1
    }

    pub fn add_hub(&mut self, face: usize) -> usize {
        self.hubs.push(Hub { face, ring: Vec::new() });
        self.hubs.len() - 1
    }

    pub fn crossings(&self, edge: usize) -> usize {
        self.edge_points[edge].len()
    }

    /// Position of every live point along its edge.
    pub fn point_positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.point_edge.len()];
        for pts in &self.edge_points {
            for (i, &p) in pts.iter().enumerate() {
                pos[p] = i;
            }
        }
        pos
    }

    pub fn curve_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.arcs.iter().map(|a| a.curve).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Per base edge, how many times curve `c` crosses it.
    pub fn curve_crossings(&self, c: usize) -> Vec<usize> {
        let mut k = vec![0usize; self.edge_points.len()];
        for arc in self.arcs.iter().filter(|a| a.curve == c) {
            for end in [arc.a, arc.b] {
                if let End::Point { point, side: 0 } = end {
                    k[self.point_edge[point]] += 1;
                }
            }
        }
        k
    }

    /// Deletes every arc of curve `c` with its crossing points and hub ends.
    pub fn remove_curve(&mut self, c: usize) {
        let mut dead_points = vec![false; self.point_edge.len()];
        let mut remap = vec![usize::MAX; self.arcs.len()];
        let mut kept = Vec::with_capacity(self.arcs.len());
        for (i, arc) in self.arcs.drain(..).enumerate() {
            if arc.curve == c {
                for end in [arc.a, arc.b] {
                    if let End::Point { point, .. } = end {
                        dead_points[point] = true;
                    }
                }
            } else {
                remap[i] = kept.len();
                kept.push(arc);
            }
        }
        self.arcs = kept;
        for pts in &mut self.edge_points {
            pts.retain(|&p| !dead_points[p]);
        }
        for hub in &mut self.hubs {
            hub.ring = hub
                .ring
                .iter()
                .filter(|(a, _)| remap[*a] != usize::MAX)
                .map(|&(a, e)| (remap[a], e))
                .collect();
        }
    }
}

/// What an overlay edge descends from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// Piece `t` of a base edge, counted from its tail.
    Piece { edge: usize, t: usize },
    Arc(usize),
}

/// The refined map of a base map and an arrangement.
#[derive(Clone, Debug)]
pub struct Overlay {
    pub map: SurfaceMap,
    pub arrangement: Arrangement,
    pub face_origin: Vec<usize>,
    pub edge_origin: Vec<EdgeOrigin>,
    piece_base: Vec<usize>,
    arc_base: usize,
    /// For occurrences that end at a hub: (hub, ring index to insert before
    /// so that a new end lands in this face corner).
    hub_corner: HashMap<usize, (usize, usize)>,
    /// Per overlay occurrence of a piece, the side index of the base
    /// occurrence it lies on; `u8::MAX` for arcs.
    occ_base_side: Vec<u8>,
    base_num_faces: usize,
}

enum Node {
    Corner,
    Point,
    Hub(usize),
}

struct Dart {
    to: usize,
    edge: usize,
    forward: bool,
    boundary_back: bool,
    base_side: u8,
}

impl Overlay {
    pub fn build(base: &SurfaceMap, arr: &Arrangement) -> Result<Overlay> {
        let m = base.num_edges();
        if arr.edge_points.len() != m {
            return Err(Error::SurfaceMismatch("arrangement edge count".into()));
        }
        let positions = arr.point_positions();
        let mut piece_base = Vec::with_capacity(m);
        let mut weights: Vec<Weight> = Vec::new();
        for e in 0..m {
            piece_base.push(weights.len());
            for _ in 0..=arr.crossings(e) {
                weights.push(base.weight(e));
            }
        }
        let arc_base = weights.len();
        weights.extend(std::iter::repeat_n(Weight::from_integer(1), arr.arcs.len()));
        let mut edge_origin: Vec<EdgeOrigin> = Vec::with_capacity(weights.len());
        for e in 0..m {
            for t in 0..=arr.crossings(e) {
                edge_origin.push(EdgeOrigin::Piece { edge: e, t });
            }
        }
        edge_origin.extend((0..arr.arcs.len()).map(EdgeOrigin::Arc));

        // Every point side and hub end must be used exactly once.
        let mut point_use: HashMap<(usize, u8), usize> = HashMap::new();
        let mut arcs_by_face: Vec<Vec<usize>> = vec![Vec::new(); base.num_faces()];
        for (i, arc) in arr.arcs.iter().enumerate() {
            if arc.face >= base.num_faces() {
                return Err(Error::ChordEndpointMismatch(format!("arc {} in unknown face", i)));
            }
            arcs_by_face[arc.face].push(i);
            for end in [arc.a, arc.b] {
                match end {
                    End::Point { point, side } => {
                        if point >= arr.point_edge.len() || positions[point] == usize::MAX || side > 1 {
                            return Err(Error::ChordEndpointMismatch(format!("arc {} uses a dead point", i)));
                        }
                        let occ = base.edge_occs(arr.point_edge[point])[side as usize];
                        if base.occ_face(occ) != arc.face {
                            return Err(Error::ChordEndpointMismatch(format!("arc {} leaves its face", i)));
                        }
                        if point_use.insert((point, side), i).is_some() {
                            return Err(Error::NonTransversalCrossing(format!("point {} side {} used twice", point, side)));
                        }
                    }
                    End::Hub(h) => {
                        if h >= arr.hubs.len() || arr.hubs[h].face != arc.face {
                            return Err(Error::ChordEndpointMismatch(format!("arc {} hub mismatch", i)));
                        }
                    }
                }
            }
        }
        for pts in &arr.edge_points {
            for &p in pts {
                for side in 0..2u8 {
                    if !point_use.contains_key(&(p, side)) {
                        return Err(Error::ChordEndpointMismatch(format!("point {} side {} has no arc", p, side)));
                    }
                }
            }
        }
        let mut hub_ends_seen: HashMap<(usize, u8), usize> = HashMap::new();
        for (h, hub) in arr.hubs.iter().enumerate() {
            for &(a, e) in &hub.ring {
                let arc = arr.arcs.get(a).ok_or_else(|| Error::ChordEndpointMismatch("ring arc".into()))?;
                let end = if e == 0 { arc.a } else { arc.b };
                if end != End::Hub(h) || hub_ends_seen.insert((a, e), h).is_some() {
                    return Err(Error::ChordEndpointMismatch(format!("hub {} ring entry ({}, {})", h, a, e)));
                }
            }
        }
        for (i, arc) in arr.arcs.iter().enumerate() {
            for (e, end) in [(0u8, arc.a), (1u8, arc.b)] {
                if matches!(end, End::Hub(_)) && !hub_ends_seen.contains_key(&(i, e)) {
                    return Err(Error::ChordEndpointMismatch(format!("arc {} hub end missing from ring", i)));
                }
            }
        }

        let mut faces: Vec<Vec<Side>> = Vec::new();
        let mut face_origin = Vec::new();
        let mut hub_corner = HashMap::new();
        let mut occ_base_side = Vec::new();
        let mut occ_total = 0usize;
        for f in 0..base.num_faces() {
            let word = base.face(f);
            let mut nodes: Vec<Node> = Vec::new();
            let mut boundary: Vec<usize> = Vec::new();
            let mut point_node: HashMap<(usize, u8), usize> = HashMap::new();
            let mut seg_label: Vec<(usize, bool, u8)> = Vec::new();
            for (pos, side) in word.iter().enumerate() {
                let occ = base.occ(f, pos);
                let s = if base.edge_occs(side.edge)[0] == occ { 0u8 } else { 1u8 };
                boundary.push(nodes.len());
                nodes.push(Node::Corner);
                let pts = &arr.edge_points[side.edge];
                let k = pts.len();
                for u in 0..k {
                    let p = if side.rev { pts[k - 1 - u] } else { pts[u] };
                    point_node.insert((p, s), nodes.len());
                    boundary.push(nodes.len());
                    nodes.push(Node::Point);
                }
                for u in 0..=k {
                    let t = if side.rev { k - u } else { u };
                    seg_label.push((piece_base[side.edge] + t, !side.rev, s));
                }
            }
            let mut hub_node = HashMap::new();
            for (h, hub) in arr.hubs.iter().enumerate() {
                if hub.face == f {
                    hub_node.insert(h, nodes.len());
                    nodes.push(Node::Hub(h));
                }
            }
            let nb = boundary.len();
            let mut darts: Vec<Dart> = Vec::new();
            let mut fwd_dart = vec![usize::MAX; nodes.len()];
            let mut bwd_dart = vec![usize::MAX; nodes.len()];
            for t in 0..nb {
                let (u, v) = (boundary[t], boundary[(t + 1) % nb]);
                let (edge, fw, s) = seg_label[t];
                fwd_dart[u] = darts.len();
                darts.push(Dart { to: v, edge, forward: fw, boundary_back: false, base_side: s });
                bwd_dart[v] = darts.len();
                darts.push(Dart { to: u, edge, forward: !fw, boundary_back: true, base_side: s });
            }
            let node_of = |end: End| -> usize {
                match end {
                    End::Point { point, side } => point_node[&(point, side)],
                    End::Hub(h) => hub_node[&h],
                }
            };
            let mut arc_dart: HashMap<(usize, u8), usize> = HashMap::new();
            let mut point_arc_dart = vec![usize::MAX; nodes.len()];
            for &a in &arcs_by_face[f] {
                let arc = &arr.arcs[a];
                let (x, y) = (node_of(arc.a), node_of(arc.b));
                let edge = arc_base + a;
                arc_dart.insert((a, 0), darts.len());
                darts.push(Dart { to: y, edge, forward: true, boundary_back: false, base_side: u8::MAX });
                arc_dart.insert((a, 1), darts.len());
                darts.push(Dart { to: x, edge, forward: false, boundary_back: false, base_side: u8::MAX });
                for (end, d) in [(arc.a, arc_dart[&(a, 0)]), (arc.b, arc_dart[&(a, 1)])] {
                    if let End::Point { .. } = end {
                        point_arc_dart[node_of(end)] = d;
                    }
                }
            }
            let twin = |d: usize| d ^ 1;
            let mut rot: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
            let mut rot_index = vec![0usize; darts.len()];
            for (i, node) in nodes.iter().enumerate() {
                let r = match node {
                    Node::Corner => vec![fwd_dart[i], bwd_dart[i]],
                    Node::Point => vec![fwd_dart[i], point_arc_dart[i], bwd_dart[i]],
                    Node::Hub(h) => arr.hubs[*h].ring.iter().map(|&(a, e)| arc_dart[&(a, e)]).collect(),
                };
                for (j, &d) in r.iter().enumerate() {
                    rot_index[d] = j;
                }
                rot[i] = r;
            }
            let next = |d: usize| -> usize {
                let t = twin(d);
                let v = darts[d].to;
                let r = &rot[v];
                r[(rot_index[t] + r.len() - 1) % r.len()]
            };
            // Connectivity from the boundary.
            let mut seen_node = vec![false; nodes.len()];
            let mut stack = vec![boundary[0]];
            seen_node[boundary[0]] = true;
            while let Some(u) = stack.pop() {
                for &d in &rot[u] {
                    let v = darts[d].to;
                    if !seen_node[v] {
                        seen_node[v] = true;
                        stack.push(v);
                    }
                }
            }
            if seen_node.iter().any(|s| !s) {
                return Err(Error::ChordEndpointMismatch(format!("floating component in face {}", f)));
            }
            let mut visited = vec![false; darts.len()];
            let mut face_count = 0usize;
            let mut local_faces: Vec<Vec<usize>> = Vec::new();
            for d0 in 0..darts.len() {
                if visited[d0] {
                    continue;
                }
                face_count += 1;
                let mut cyc = Vec::new();
                let mut d = d0;
                loop {
                    visited[d] = true;
                    cyc.push(d);
                    d = next(d);
                    if d == d0 {
                        break;
                    }
                }
                if cyc.iter().all(|&d| darts[d].boundary_back) {
                    continue;
                }
                if cyc.iter().any(|&d| darts[d].boundary_back) {
                    return Err(Error::NotSimple);
                }
                local_faces.push(cyc);
            }
            let euler = nodes.len() as i64 - (darts.len() / 2) as i64 + face_count as i64;
            if euler != 2 {
                return Err(Error::NotSimple);
            }
            for cyc in local_faces {
                let start = occ_total;
                occ_total += cyc.len();
                let mut w = Vec::with_capacity(cyc.len());
                for (p, &d) in cyc.iter().enumerate() {
                    w.push(Side { edge: darts[d].edge, rev: !darts[d].forward });
                    occ_base_side.push(darts[d].base_side);
                    if let Node::Hub(h) = nodes[darts[d].to] {
                        hub_corner.insert(start + p, (h, rot_index[twin(d)]));
                    }
                }
                faces.push(w);
                face_origin.push(f);
            }
        }
        let map = SurfaceMap::new(weights, faces)?;
        Ok(Overlay {
            map,
            arrangement: arr.clone(),
            face_origin,
            edge_origin,
            piece_base,
            arc_base,
            hub_corner,
            occ_base_side,
            base_num_faces: base.num_faces(),
        })
    }

    pub fn arc_edge(&self, arc: usize) -> usize {
        self.arc_base + arc
    }

    pub fn piece_edge(&self, edge: usize, t: usize) -> usize {
        self.piece_base[edge] + t
    }

    pub fn is_arc_edge(&self, e: usize) -> bool {
        e >= self.arc_base
    }

    /// Overlay edges carrying arcs of the given curves.
    pub fn curve_edges(&self, curves: &[usize]) -> Vec<usize> {
        self.arrangement
            .arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| curves.contains(&a.curve))
            .map(|(i, _)| self.arc_edge(i))
            .collect()
    }

    /// Ring insertion slot for the face corner at the end of occurrence `occ`,
    /// if that corner is at a hub.
    pub fn hub_slot(&self, occ: usize) -> Option<(usize, usize)> {
        self.hub_corner.get(&occ).copied()
    }

    /// Side index (into the base `edge_occs`) of the base occurrence that
    /// piece occurrence `occ` lies on.
    pub fn base_side(&self, occ: usize) -> Option<u8> {
        self.occ_base_side.get(occ).copied().filter(|&s| s != u8::MAX)
    }

    /// Recovers the base face words by deleting arcs and merging pieces.
    pub fn erase(&self) -> Vec<Vec<Side>> {
        let fl = self.map.flags();
        let mut out: Vec<Option<Vec<Side>>> = vec![None; self.base_num_faces];
        for f in 0..self.map.num_faces() {
            let base_face = self.face_origin[f];
            if out[base_face].is_some() {
                continue;
            }
            // Start at a piece whose start corner is a base corner (t == 0 forward
            // or t == last backward) so that runs are not split.
            let mut start = None;
            for (pos, side) in self.map.face(f).iter().enumerate() {
                if let EdgeOrigin::Piece { edge, t } = self.edge_origin[side.edge] {
                    let last = self.arrangement.crossings(edge);
                    if (!side.rev && t == 0) || (side.rev && t == last) {
                        start = Some(self.map.occ(f, pos));
                        break;
                    }
                }
            }
            let Some(o0) = start else { continue };
            let mut flag = 2 * o0 as u32;
            let mut word: Vec<Side> = Vec::new();
            loop {
                let o = (flag / 2) as usize;
                let side = self.map.occ_side(o);
                let EdgeOrigin::Piece { edge, t } = self.edge_origin[side.edge] else { unreachable!() };
                let starts_run = (!side.rev && t == 0) || (side.rev && t == self.arrangement.crossings(edge));
                if starts_run {
                    word.push(Side { edge, rev: side.rev });
                }
                let end = fl.s[0][flag as usize];
                let mut g = fl.s[1][end as usize];
                while self.is_arc_edge(self.map.occ_side((g / 2) as usize).edge) {
                    g = fl.s[1][fl.s[2][g as usize] as usize];
                }
                flag = g;
                if flag == 2 * o0 as u32 {
                    break;
                }
            }
            out[base_face] = Some(word);
        }
        out.into_iter().map(|w| w.unwrap_or_default()).collect()
    }

    /// The arcs of curve `c` in traversal order with direction (`true` = a to b).
    /// A based loop starts and ends at its hub.
    pub fn trace_curve(&self, c: usize) -> Result<Vec<(usize, bool)>> {
        trace_curve(&self.arrangement, c)
    }
}

/// Arcs of curve `c` in traversal order. Fails unless they form one closed
/// curve or one loop through a hub.
pub fn trace_curve(arr: &Arrangement, c: usize) -> Result<Vec<(usize, bool)>> {
    let mine: Vec<usize> = (0..arr.arcs.len()).filter(|&i| arr.arcs[i].curve == c).collect();
    if mine.is_empty() {
        return Err(Error::NotAClosedCurve(format!("curve {} has no arcs", c)));
    }
    let mut at_point: HashMap<(usize, u8), (usize, bool)> = HashMap::new();
    let mut hub_starts = Vec::new();
    for &i in &mine {
        let arc = &arr.arcs[i];
        if let End::Point { point, side } = arc.a {
            at_point.insert((point, side), (i, true));
        } else {
            hub_starts.push((i, true));
        }
        if let End::Point { point, side } = arc.b {
            at_point.insert((point, side), (i, false));
        } else {
            hub_starts.push((i, false));
        }
    }
    let (first, hub) = match hub_starts.len() {
        0 => ((mine[0], true), None),
        2 => {
            let h0 = match if hub_starts[0].1 { arr.arcs[hub_starts[0].0].a } else { arr.arcs[hub_starts[0].0].b } {
                End::Hub(h) => h,
                _ => unreachable!(),
            };
            (hub_starts[0], Some(h0))
        }
        _ => return Err(Error::NotAClosedCurve(format!("curve {} has {} hub ends", c, hub_starts.len()))),
    };
    let mut out = Vec::with_capacity(mine.len());
    let mut cur = first;
    loop {
        out.push(cur);
        let arc = &arr.arcs[cur.0];
        let exit = if cur.1 { arc.b } else { arc.a };
        match exit {
            End::Point { point, side } => {
                let nxt = *at_point
                    .get(&(point, 1 - side))
                    .ok_or_else(|| Error::NotAClosedCurve(format!("curve {} breaks at point {}", c, point)))?;
                if nxt == first {
                    break;
                }
                cur = nxt;
            }
            End::Hub(h) => {
                if hub != Some(h) {
                    return Err(Error::NotAClosedCurve(format!("curve {} ends at a foreign hub", c)));
                }
                break;
            }
        }
        if out.len() > mine.len() {
            return Err(Error::NotAClosedCurve(format!("curve {} does not close", c)));
        }
    }
    if out.len() != mine.len() {
        return Err(Error::NotAClosedCurve(format!("curve {} has several components", c)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::from_words;

    fn rotate_eq(a: &[Side], b: &[Side]) -> bool {
        a.len() == b.len() && (0..a.len()).any(|r| (0..a.len()).all(|i| a[(r + i) % a.len()] == b[i]))
    }

    #[test]
    fn null_insertion_is_identity() {
        let m = from_words(&["+1 +2 -1 -2"]).unwrap();
        let ov = Overlay::build(&m, &Arrangement::empty(2)).unwrap();
        assert_eq!(ov.map.num_faces(), 1);
        assert_eq!(ov.map.num_vertices(), m.num_vertices());
        assert_eq!(ov.map.num_edges(), m.num_edges());
        assert!(rotate_eq(&ov.erase()[0], m.face(0)));
    }

    /// Two parallel chords across a square face of a two-face sphere.
    #[test]
    fn two_disjoint_chords_make_three_subfaces() {
        let m = from_words(&["+1 +2 +3 +4", "-4 -3 -2 -1"]).unwrap();
        let mut arr = Arrangement::empty(4);
        // Chords 1-3 and 1-3 again, nested: points on edge 1 and edge 3.
        let p0 = arr.add_point(0, 0);
        let p1 = arr.add_point(0, 1);
        let q0 = arr.add_point(2, 0);
        let q1 = arr.add_point(2, 1);
        // In face 0, edge 1 runs forward and edge 3 runs forward; p1 is later
        // on the boundary than p0, q0 before q1, so p1-q0 and p0-q1 nest.
        let pt = |point, side| End::Point { point, side };
        arr.add_arc(0, pt(p1, 0), pt(q0, 0), 0);
        arr.add_arc(0, pt(p0, 0), pt(q1, 0), 1);
        arr.add_arc(1, pt(q0, 1), pt(p1, 1), 0);
        arr.add_arc(1, pt(q1, 1), pt(p0, 1), 1);
        let ov = Overlay::build(&m, &arr).unwrap();
        assert_eq!(ov.face_origin.iter().filter(|&&f| f == 0).count(), 3);
        assert_eq!(ov.map.euler_char(), 2);
        let erased = ov.erase();
        assert!(rotate_eq(&erased[0], m.face(0)));
        assert!(rotate_eq(&erased[1], m.face(1)));
        assert_eq!(trace_curve(&arr, 0).unwrap().len(), 2);
    }

    #[test]
    fn crossing_chords_are_rejected() {
        let m = from_words(&["+1 +2 +3 +4", "-4 -3 -2 -1"]).unwrap();
        let mut arr = Arrangement::empty(4);
        let pt = |point, side| End::Point { point, side };
        let a = arr.add_point(0, 0);
        let b = arr.add_point(1, 0);
        let c = arr.add_point(2, 0);
        let d = arr.add_point(3, 0);
        arr.add_arc(0, pt(a, 0), pt(c, 0), 0);
        arr.add_arc(0, pt(b, 0), pt(d, 0), 0);
        arr.add_arc(1, pt(a, 1), pt(b, 1), 0);
        arr.add_arc(1, pt(c, 1), pt(d, 1), 0);
        assert_eq!(Overlay::build(&m, &arr).unwrap_err(), Error::NotSimple);
    }

    #[test]
    fn remove_curve_restores() {
        let m = from_words(&["+1 +1"]).unwrap();
        let mut arr = Arrangement::empty(1);
        let p = arr.add_point(0, 0);
        let pt = |side| End::Point { point: p, side };
        arr.add_arc(0, pt(0), pt(1), 0);
        let ov = Overlay::build(&m, &arr).unwrap();
        assert_eq!(ov.map.euler_char(), 1);
        assert!(rotate_eq(&ov.erase()[0], m.face(0)));
        arr.remove_curve(0);
        assert_eq!(arr, {
            let mut e = Arrangement::empty(1);
            e.point_edge.push(0);
            e
        });
    }
}
