//! Shortest-path trees with a maximum co-tree, and the based loops they induce.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::flags::Dsu;
use crate::map::SurfaceMap;
use crate::overlay::{Arrangement, End};
use crate::weight::Scale;

pub(crate) struct TreeCotree {
    pub dist: Vec<u64>,
    /// `(edge, parent node)` for every node but the root.
    pub parent: Vec<Option<(usize, usize)>>,
    pub leftover: Vec<usize>,
}

/// Dijkstra from `root` over `ends`, then a maximum spanning tree of the
/// dual graph among non-tree edges, keyed by the length of the loop each
/// edge closes. The remaining edges are returned in increasing order.
pub(crate) fn tree_cotree(
    n: usize,
    root: usize,
    ends: &[(usize, usize)],
    units: &[u64],
    dual_n: usize,
    dual_ends: &[(usize, usize)],
) -> TreeCotree {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in ends.iter().enumerate() {
        if a != b {
            adj[a].push((e, b));
            adj[b].push((e, a));
        }
    }
    let mut dist = vec![u64::MAX; n];
    let mut parent = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[root] = 0;
    heap.push(Reverse((0u64, root)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(e, v) in &adj[u] {
            let nd = d + units[e];
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some((e, u));
                heap.push(Reverse((nd, v)));
            }
        }
    }
    let mut in_tree = vec![false; ends.len()];
    for (e, _) in parent.iter().flatten() {
        in_tree[*e] = true;
    }
    let mut cand: Vec<usize> = (0..ends.len()).filter(|&e| !in_tree[e]).collect();
    cand.sort_by_key(|&e| (Reverse(dist[ends[e].0] + units[e] + dist[ends[e].1]), e));
    let mut dsu = Dsu::new(dual_n);
    let mut leftover = Vec::new();
    for e in cand {
        let (a, b) = dual_ends[e];
        if !dsu.union(a as u32, b as u32) {
            leftover.push(e);
        }
    }
    leftover.sort_unstable();
    TreeCotree { dist, parent, leftover }
}

pub(crate) fn unit_weights(m: &SurfaceMap) -> Vec<u64> {
    let scale = Scale::for_weights(m.weights());
    m.weights().iter().map(|w| scale.units(w)).collect()
}

enum Role {
    Parent,
    Child(usize),
    Leftover(usize),
    Idle,
}

/// Draws the tree-cotree system of loops of `x` as curves crossing its
/// edges, all based at one hub in face `root`. Loop `i` closes through the
/// `i`-th leftover edge.
pub(crate) fn tree_cotree_drawing(x: &SurfaceMap, root: usize) -> Arrangement {
    let m = x.num_edges();
    let units = unit_weights(x);
    let ends: Vec<(usize, usize)> = (0..m).map(|e| x.edge_faces(e)).collect();
    let dual: Vec<(usize, usize)> = (0..m).map(|e| x.edge_ends(e)).collect();
    let tc = tree_cotree(x.num_faces(), root, &ends, &units, x.num_vertices(), &dual);
    let mut arr = Arrangement::empty(m);
    if tc.leftover.is_empty() {
        return arr;
    }
    let side_index = |o: usize| -> u8 { u8::from(x.edge_occs(x.occ_side(o).edge)[0] != o) };

    // Tendril 2l+s runs from the hub down to side s of leftover edge l.
    let mut role: Vec<Role> = (0..x.num_occurrences()).map(|_| Role::Idle).collect();
    let mut parent_occ = vec![usize::MAX; x.num_faces()];
    for f in 0..x.num_faces() {
        if let Some((e, _)) = tc.parent[f] {
            let [o0, o1] = x.edge_occs(e);
            let (mine, theirs) = if x.occ_face(o0) == f { (o0, o1) } else { (o1, o0) };
            parent_occ[f] = mine;
            role[mine] = Role::Parent;
            role[theirs] = Role::Child(f);
        }
    }
    for (l, &e) in tc.leftover.iter().enumerate() {
        for (s, o) in x.edge_occs(e).into_iter().enumerate() {
            role[o] = Role::Leftover(2 * l + s);
        }
    }

    let destinations = |f: usize, along: &[Vec<usize>]| -> Vec<(usize, usize)> {
        let len = x.face(f).len();
        let first = if f == root { 0 } else { x.occ_pos(parent_occ[f]) + 1 };
        let mut q = Vec::new();
        for k in 0..len {
            let o = x.occ(f, (first + k) % len);
            match role[o] {
                Role::Child(c) => {
                    if x.occ_side(o).rev {
                        q.extend(along[c].iter().rev().map(|&t| (t, o)));
                    } else {
                        q.extend(along[c].iter().map(|&t| (t, o)));
                    }
                }
                Role::Leftover(t) => q.push((t, o)),
                Role::Parent | Role::Idle => {}
            }
        }
        q
    };

    let mut order: Vec<usize> = (0..x.num_faces()).filter(|&f| f != root).collect();
    order.sort_by_key(|&f| (Reverse(tc.dist[f]), f));
    let mut along: Vec<Vec<usize>> = vec![Vec::new(); x.num_faces()];
    for &f in &order {
        let mut q: Vec<usize> = destinations(f, &along).into_iter().map(|(t, _)| t).collect();
        if !x.occ_side(parent_occ[f]).rev {
            q.reverse();
        }
        along[f] = q;
    }

    let mut point: HashMap<(usize, usize), usize> = HashMap::new();
    for &f in &order {
        let e = x.occ_side(parent_occ[f]).edge;
        for (i, &t) in along[f].iter().enumerate() {
            point.insert((e, t), arr.add_point(e, i));
        }
    }
    for (l, &e) in tc.leftover.iter().enumerate() {
        let p = arr.add_point(e, 0);
        point.insert((e, 2 * l), p);
        point.insert((e, 2 * l + 1), p);
    }

    let hub = arr.add_hub(root);
    let mut ring = Vec::new();
    for f in 0..x.num_faces() {
        for (t, o) in destinations(f, &along) {
            let e = x.occ_side(o).edge;
            let dest = End::Point { point: point[&(e, t)], side: side_index(o) };
            let upper = if f == root {
                End::Hub(hub)
            } else {
                let po = parent_occ[f];
                End::Point { point: point[&(x.occ_side(po).edge, t)], side: side_index(po) }
            };
            let (l, s) = (t / 2, t % 2);
            let arc = if s == 0 { arr.add_arc(f, upper, dest, l) } else { arr.add_arc(f, dest, upper, l) };
            if f == root {
                ring.push((arc, s as u8));
            }
        }
    }
    arr.hubs[hub].ring = ring;
    arr
}
