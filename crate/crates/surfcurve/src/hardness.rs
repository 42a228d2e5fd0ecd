//! Grid graphs turned into weighted non-orientable surfaces whose short
//! orienting curves correspond to Hamiltonian cycles.
//!
//! Each grid point gets an 8-cycle `v1..v8` (top-left, then clockwise) and
//! a Möbius band glued along it. The band is a 4x4 grid of squares whose
//! left and right columns are identified upside down; its boundary is the
//! top row `v1..v5` followed by the bottom row `v5..v1`.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::constructions::merge_to_simple_cycle;
use crate::curve::{mu_from_walk, ClosedWalk, CrossCurve, CurveClass, Step};
use crate::error::{Error, Result};
use crate::map::{Side, SurfaceMap};
use crate::solver::{solve_prepared, Goal, GoalSpec, Prepared};
use crate::weight::Weight;
use crate::z2::{change_basis_inverse, Z2Vec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridGraph {
    /// Sorted, distinct lattice points.
    pub points: Vec<(i32, i32)>,
}

impl GridGraph {
    pub fn new(points: &[(i32, i32)]) -> GridGraph {
        let set: BTreeSet<(i32, i32)> = points.iter().copied().collect();
        GridGraph { points: set.into_iter().collect() }
    }

    /// One `x y` pair per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<GridGraph> {
        let mut pts = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<i32> = line
                .split_whitespace()
                .map(|t| t.parse::<i32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            if nums.len() != 2 {
                return Err(Error::Parse { line: i + 1, msg: "expected `x y`".into() });
            }
            pts.push((nums[0], nums[1]));
        }
        Ok(GridGraph::new(&pts))
    }

    pub fn to_text(&self) -> String {
        self.points.iter().map(|(x, y)| format!("{} {}\n", x, y)).collect()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn index(&self, p: (i32, i32)) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    /// Edges `(i, j)` with `points[j]` right of or above `points[i]`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &(x, y)) in self.points.iter().enumerate() {
            for q in [(x + 1, y), (x, y + 1)] {
                if let Some(j) = self.index(q) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.points.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            let (x, y) = self.points[i];
            for q in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if let Some(j) = self.index(q) {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Translated so the smallest coordinates are zero.
    pub fn normalized(&self) -> GridGraph {
        let mx = self.points.iter().map(|p| p.0).min().unwrap_or(0);
        let my = self.points.iter().map(|p| p.1).min().unwrap_or(0);
        GridGraph::new(&self.points.iter().map(|&(x, y)| (x - mx, y - my)).collect::<Vec<_>>())
    }

    /// A Hamiltonian cycle as a vertex order, by dynamic programming over subsets.
    pub fn hamiltonian_cycle(&self) -> Option<Vec<usize>> {
        let n = self.n();
        if !(3..=20).contains(&n) {
            return None;
        }
        let mut adj = vec![0u32; n];
        for (i, j) in self.edges() {
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        // reach[mask][v]: a path from 0 through `mask` ends at v; parent for recovery.
        let full = 1usize << n;
        let mut parent = vec![u8::MAX; full * n];
        let mut reach = vec![false; full * n];
        reach[n] = true;
        for mask in 1..full {
            if mask & 1 == 0 {
                continue;
            }
            for v in 0..n {
                if !reach[mask * n + v] {
                    continue;
                }
                let mut next = adj[v] as usize & !mask;
                while next != 0 {
                    let u = next.trailing_zeros() as usize;
                    next &= next - 1;
                    let m2 = mask | (1 << u);
                    if !reach[m2 * n + u] {
                        reach[m2 * n + u] = true;
                        parent[m2 * n + u] = v as u8;
                    }
                }
            }
        }
        let last = (1..n).find(|&v| reach[(full - 1) * n + v] && adj[v] & 1 == 1)?;
        let mut order = vec![last];
        let (mut mask, mut v) = (full - 1, last);
        while v != 0 {
            let p = parent[mask * n + v] as usize;
            mask &= !(1 << v);
            v = p;
            order.push(v);
        }
        order.reverse();
        Some(order)
    }
}

/// Every connected grid graph with `n` points, up to translation.
pub fn connected_grids(n: usize) -> Vec<GridGraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: HashSet<GridGraph> = HashSet::new();
    level.insert(GridGraph::new(&[(0, 0)]));
    for _ in 1..n {
        let mut next = HashSet::new();
        for gr in &level {
            for &(x, y) in &gr.points {
                for q in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if gr.index(q).is_none() {
                        let mut pts = gr.points.clone();
                        pts.push(q);
                        next.insert(GridGraph::new(&pts).normalized());
                    }
                }
            }
        }
        level = next;
    }
    let mut out: Vec<GridGraph> = level.into_iter().collect();
    out.sort();
    out
}

/// Where each piece of the construction sits in the combinatorial map `G'`.
#[derive(Clone, Debug)]
pub struct HardnessInstance {
    pub grid: GridGraph,
    pub epsilon: Weight,
    pub threshold: Weight,
    /// The graph `G'`; curves are walks in it.
    pub graph: SurfaceMap,
    /// The cross-metric form of `G'` (its dual), with the same edge ids.
    pub surface: SurfaceMap,
    /// Per grid point, the vertices `v1..v8` of its 8-cycle.
    pub cycle_vertices: Vec<[usize; 8]>,
    /// Per grid point, the ids of all weight-epsilon edges around it.
    pub band_edges: Vec<Vec<usize>>,
    /// Grid edge `(i, j)` and its id.
    pub grid_edges: Vec<((usize, usize), usize)>,
}

pub fn default_epsilon(n: usize) -> Weight {
    Weight::new(1, 16 * n.max(1) as i64)
}

struct Builder {
    edge_of: HashMap<(usize, usize), usize>,
    ends: Vec<(usize, usize)>,
    weights: Vec<Weight>,
    faces: Vec<Vec<Side>>,
}

impl Builder {
    fn edge(&mut self, a: usize, b: usize, w: Weight) -> usize {
        let key = (a.min(b), a.max(b));
        if let Some(&e) = self.edge_of.get(&key) {
            return e;
        }
        let e = self.ends.len();
        self.edge_of.insert(key, e);
        self.ends.push((a, b));
        self.weights.push(w);
        e
    }

    fn face(&mut self, cycle: &[usize]) {
        let n = cycle.len();
        let word = (0..n)
            .map(|i| {
                let (x, y) = (cycle[i], cycle[(i + 1) % n]);
                let e = self.edge_of[&(x.min(y), x.max(y))];
                Side { edge: e, rev: self.ends[e].0 != x }
            })
            .collect();
        self.faces.push(word);
    }
}

/// Offsets of `v1..v8` from the centre, in quarter units.
const RING: [(i64, i64); 8] = [(-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0)];

pub fn grid_to_surface(gr: &GridGraph, epsilon: Weight) -> Result<HardnessInstance> {
    let n = gr.n();
    if !gr.is_connected() {
        return Err(Error::DisconnectedGrid);
    }
    if epsilon <= Weight::from_integer(0) || epsilon >= Weight::new(1, 12 * n as i64) {
        return Err(Error::EpsilonTooLarge);
    }
    let one = Weight::from_integer(1);
    let mut b = Builder { edge_of: HashMap::new(), ends: Vec::new(), weights: Vec::new(), faces: Vec::new() };
    let cycle_vertices: Vec<[usize; 8]> = (0..n).map(|p| std::array::from_fn(|i| 8 * p + i)).collect();
    let mut pos: Vec<(i64, i64)> = Vec::with_capacity(8 * n);
    for &(x, y) in &gr.points {
        for (dx, dy) in RING {
            pos.push((4 * x as i64 + dx, 4 * y as i64 + dy));
        }
    }
    let mut band_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, cyc) in cycle_vertices.iter().enumerate() {
        for i in 0..8 {
            let e = b.edge(cyc[i], cyc[(i + 1) % 8], epsilon);
            band_edges[p].push(e);
        }
    }
    let mut grid_edges = Vec::new();
    for (i, j) in gr.edges() {
        let (pi, pj) = (gr.points[i], gr.points[j]);
        // Right neighbour: v4 to v8. Upper neighbour: v2 to v6.
        let (a, c) = if pj.0 == pi.0 + 1 { (3, 7) } else { (1, 5) };
        let e = b.edge(cycle_vertices[i][a], cycle_vertices[j][c], one);
        grid_edges.push(((i, j), e));
    }

    // Faces of the plane part, from the rotation system of the drawing.
    let nv = 8 * n;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(a, c) in &b.ends {
        rot[a].push(c);
        rot[c].push(a);
    }
    for (v, r) in rot.iter_mut().enumerate() {
        let (x0, y0) = pos[v];
        r.sort_by(|&a, &c| {
            let ta = ((pos[a].1 - y0) as f64).atan2((pos[a].0 - x0) as f64);
            let tc = ((pos[c].1 - y0) as f64).atan2((pos[c].0 - x0) as f64);
            ta.partial_cmp(&tc).expect("finite angles")
        });
    }
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut plane_faces: Vec<Vec<usize>> = Vec::new();
    for u in 0..nv {
        for &v in &rot[u].clone() {
            if used.contains(&(u, v)) {
                continue;
            }
            let mut cyc = Vec::new();
            let (mut x, mut y) = (u, v);
            while used.insert((x, y)) {
                cyc.push(x);
                let r = &rot[y];
                let i = r.iter().position(|&z| z == x).expect("twin dart");
                let z = r[(i + r.len() - 1) % r.len()];
                x = y;
                y = z;
            }
            plane_faces.push(cyc);
        }
    }
    // Drop the discs inside the 8-cycles: traced v1, v8, v7, ..., v2.
    let inner: HashSet<Vec<usize>> = cycle_vertices
        .iter()
        .map(|c| {
            let mut w: Vec<usize> = c.iter().rev().copied().collect();
            w.rotate_right(1);
            w
        })
        .collect();
    let mut dropped = 0;
    for f in plane_faces {
        let mut g = f.clone();
        let k = g.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
        g.rotate_left(k);
        if inner.contains(&g) {
            dropped += 1;
        } else {
            b.face(&f);
        }
    }
    if dropped != n {
        return Err(Error::Invariant(format!("found {} of {} 8-cycle discs", dropped, n)));
    }

    // One Möbius band per point.
    let mut next_vertex = nv;
    for (p, cyc) in cycle_vertices.iter().enumerate() {
        let [v1, v2, v3, v4, v5, v6, v7, v8] = *cyc;
        let abc = [next_vertex, next_vertex + 1, next_vertex + 2];
        let inner_base = next_vertex + 3;
        next_vertex += 12;
        let left = [v1, abc[0], abc[1], abc[2], v5];
        let top = [v1, v2, v3, v4, v5];
        let bottom = [v5, v6, v7, v8, v1];
        let at = |r: usize, c: usize| -> usize {
            if c == 0 {
                left[r]
            } else if c == 4 {
                left[4 - r]
            } else if r == 0 {
                top[c]
            } else if r == 4 {
                bottom[c]
            } else {
                inner_base + 3 * (r - 1) + (c - 1)
            }
        };
        for r in 0..4 {
            for c in 0..4 {
                let sq = [at(r, c), at(r, c + 1), at(r + 1, c + 1), at(r + 1, c)];
                for i in 0..4 {
                    let e = b.edge(sq[i], sq[(i + 1) % 4], epsilon);
                    if !band_edges[p].contains(&e) {
                        band_edges[p].push(e);
                    }
                }
                b.face(&sq);
            }
        }
    }

    let graph = SurfaceMap::new(b.weights, b.faces)?;
    if graph.num_vertices() != 20 * n {
        return Err(Error::Invariant(format!("expected {} vertices, got {}", 20 * n, graph.num_vertices())));
    }
    if graph.euler_genus() != n || graph.is_orientable() {
        return Err(Error::Invariant(format!(
            "expected a non-orientable surface of genus {}, got genus {} ({})",
            n,
            graph.euler_genus(),
            if graph.is_orientable() { "orientable" } else { "non-orientable" }
        )));
    }
    // The map numbers vertices itself; tails are preserved, so match them up.
    let mut to_map = vec![usize::MAX; 20 * n];
    for (e, &(a, c)) in b.ends.iter().enumerate() {
        let (t, h) = graph.edge_ends(e);
        for (mine, theirs) in [(a, t), (c, h)] {
            if to_map[mine] == usize::MAX {
                to_map[mine] = theirs;
            } else if to_map[mine] != theirs {
                return Err(Error::Invariant(format!("edge {} glued to the wrong vertices", e)));
            }
        }
    }
    let mut hit = to_map.clone();
    hit.sort_unstable();
    hit.dedup();
    if hit.len() != 20 * n || hit.contains(&usize::MAX) {
        return Err(Error::Invariant("vertex correspondence is not a bijection".into()));
    }
    let cycle_vertices: Vec<[usize; 8]> = cycle_vertices.iter().map(|c| c.map(|v| to_map[v])).collect();
    let surface = graph.dual().map;
    Ok(HardnessInstance {
        grid: gr.clone(),
        epsilon,
        threshold: Weight::from_integer(n as i64) + Weight::new(1, 2),
        graph,
        surface,
        cycle_vertices,
        band_edges,
        grid_edges,
    })
}

/// A short orienting curve built from a Hamiltonian cycle.
#[derive(Clone, Debug)]
pub struct HamiltonianWitness {
    pub walk: ClosedWalk,
    pub curve: CrossCurve,
    pub length: Weight,
    /// `n + 6 n epsilon`.
    pub bound: Weight,
    pub class: CurveClass,
}

/// Simple paths from `s` to `t` over `edges` with at most `max_len` steps.
fn local_paths(g: &SurfaceMap, edges: &[usize], s: usize, t: usize, max_len: usize) -> Vec<Vec<Step>> {
    let mut adj: HashMap<usize, Vec<(usize, Step)>> = HashMap::new();
    for &e in edges {
        let (a, b) = g.edge_ends(e);
        adj.entry(a).or_default().push((b, Step { edge: e, forward: true }));
        adj.entry(b).or_default().push((a, Step { edge: e, forward: false }));
    }
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut on = HashSet::new();
    on.insert(s);
    fn dfs(
        v: usize,
        t: usize,
        max_len: usize,
        adj: &HashMap<usize, Vec<(usize, Step)>>,
        path: &mut Vec<Step>,
        on: &mut HashSet<usize>,
        out: &mut Vec<Vec<Step>>,
    ) {
        if v == t {
            out.push(path.clone());
            return;
        }
        if path.len() == max_len {
            return;
        }
        for &(u, st) in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if on.insert(u) {
                path.push(st);
                dfs(u, t, max_len, adj, path, on, out);
                path.pop();
                on.remove(&u);
            }
        }
    }
    dfs(s, t, max_len, &adj, &mut path, &mut on, &mut out);
    out
}

impl HardnessInstance {
    /// Follows the Hamiltonian cycle `order` through the grid edges and
    /// routes it through each band so that it crosses every crosscap once.
    pub fn hamiltonian_witness(&self, order: &[usize], prep: &Prepared) -> Result<HamiltonianWitness> {
        let n = self.grid.n();
        let g = &self.graph;
        let grid_edge = |i: usize, j: usize| -> Result<usize> {
            self.grid_edges
                .iter()
                .find(|((a, b), _)| (*a, *b) == (i, j) || (*a, *b) == (j, i))
                .map(|&(_, e)| e)
                .ok_or_else(|| Error::Invariant(format!("grid points {} and {} are not adjacent", i, j)))
        };
        let parity = &prep.loops.parity;
        let sig = |steps: &[Step]| {
            let mut s = Z2Vec::zeros(n);
            for st in steps {
                s.add_assign(&parity[st.edge]);
            }
            s
        };
        // Grid steps: from point order[j] to order[j+1].
        let mut grid_steps = Vec::with_capacity(n);
        let mut total = Z2Vec::zeros(n);
        for j in 0..n {
            let (p, q) = (order[j], order[(j + 1) % n]);
            let e = grid_edge(p, q)?;
            let (t, _) = g.edge_ends(e);
            let forward = self.cycle_vertices[p].contains(&t);
            let st = Step { edge: e, forward };
            total.add_assign(&parity[e]);
            grid_steps.push(st);
        }
        // Per point, the local options between arrival and departure.
        let mut options: Vec<Vec<(Vec<Step>, Z2Vec)>> = Vec::with_capacity(n);
        for j in 0..n {
            let p = order[j];
            let arrive = grid_steps[(j + n - 1) % n];
            let leave = grid_steps[j];
            let (at, ah) = g.edge_ends(arrive.edge);
            let s = if arrive.forward { ah } else { at };
            let (lt, lh) = g.edge_ends(leave.edge);
            let t = if leave.forward { lt } else { lh };
            let paths = local_paths(g, &self.band_edges[p], s, t, 6);
            options.push(paths.into_iter().map(|ps| {
                let x = sig(&ps);
                (ps, x)
            }).collect());
        }
        // Choose one option per point so the standard signature is phi^-1(1..1).
        let target = change_basis_inverse(n).apply(&Z2Vec::ones(n))?;
        let mut states: HashMap<Vec<u8>, (usize, Vec<usize>)> = HashMap::new();
        states.insert(total.bits(), (0, Vec::new()));
        for opts in &options {
            let mut next: HashMap<Vec<u8>, (usize, Vec<usize>)> = HashMap::new();
            for (key, (len, picks)) in &states {
                let cur = Z2Vec::from_bits(key);
                for (k, (ps, x)) in opts.iter().enumerate() {
                    let nk = cur.add(x).bits();
                    let nl = len + ps.len();
                    if next.get(&nk).is_none_or(|(l, _)| nl < *l) {
                        let mut np = picks.clone();
                        np.push(k);
                        next.insert(nk, (nl, np));
                    }
                }
            }
            states = next;
        }
        let (_, picks) = states
            .get(&target.bits())
            .ok_or_else(|| Error::Invariant("no routing through the bands crosses every crosscap oddly".into()))?;
        let mut steps = Vec::new();
        for j in 0..n {
            steps.extend_from_slice(&options[j][picks[j]].0);
            steps.push(grid_steps[j]);
        }
        let start_step = grid_steps[n - 1];
        let (st, sh) = g.edge_ends(start_step.edge);
        let start = if start_step.forward { sh } else { st };
        let walk = ClosedWalk { start, steps };
        walk.validate(g)?;
        let length = walk.length(g);
        let bound = Weight::from_integer(n as i64) + self.epsilon * (6 * n) as i64;
        let mu: Vec<usize> = mu_from_walk(&walk, g.num_edges()).into_iter().map(usize::from).collect();
        let curve = merge_to_simple_cycle(&self.surface, &mu)?;
        let class = curve.classify_by_cutting(&self.surface)?;
        Ok(HamiltonianWitness { walk, curve, length, bound, class })
    }
}

/// Both sides of the reduction, computed independently.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub n: usize,
    pub hamiltonian: bool,
    pub orienting_length: Weight,
    pub threshold: Weight,
    pub short_curve: bool,
    pub genus: usize,
    pub orientable: bool,
    pub witness: Option<HamiltonianWitness>,
}

pub fn reduction_roundtrip(gr: &GridGraph) -> Result<RoundTrip> {
    let inst = grid_to_surface(gr, default_epsilon(gr.n()))?;
    let prep = Prepared::new(&inst.surface)?;
    let spec = GoalSpec::new(Goal::Orienting, inst.surface.euler_genus(), false)?;
    let solved = solve_prepared(&inst.surface, &prep, &spec)?;
    let cycle = gr.hamiltonian_cycle();
    let witness = match &cycle {
        Some(order) => Some(inst.hamiltonian_witness(order, &prep)?),
        None => None,
    };
    Ok(RoundTrip {
        n: gr.n(),
        hamiltonian: cycle.is_some(),
        orienting_length: solved.length,
        threshold: inst.threshold,
        short_curve: solved.length <= inst.threshold,
        genus: inst.surface.euler_genus(),
        orientable: inst.surface.is_orientable(),
        witness,
    })
}
