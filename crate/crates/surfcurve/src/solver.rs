//! Shortest closed curves with a prescribed `Z2` homology constraint.
//!
//! The constrained walk search runs in the subhomology cover of the dual
//! graph. Every closed walk with non-trivial image meets one of the
//! hitting paths, so one shortest-path search from sheet 0 over each hitting-path
//! vertex finds the optimum; the winning cover path starts at a vertex of
//! the path that produced it. Once a start vertex has been searched it is
//! deleted for the later searches, since any walk through it that could
//! still win was already found. The searches are A* runs whose potential is
//! the largest distance in a two-sheeted quotient cover, which never
//! exceeds the true distance.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::constructions::merge_to_simple_cycle;
use crate::cover::{build_cover, labeling_from_loops, SubhomologyCover};
use crate::curve::{mu_from_walk, ClosedWalk, CrossCurve, CurveClass, Sidedness, Step};
use crate::error::{Error, Result};
use crate::loops::{hitting_paths, standard_loops, HittingPaths, LoopSystem};
use crate::map::SurfaceMap;
use crate::weight::{format_weight, Scale, Weight};
use crate::z2::{change_basis_matrix, compose_rho, RhoMap, Z2Matrix, Z2Vec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Orienting,
    NonsepNonorientOneSided,
    NonsepNonorientTwoSided,
    OneSidedAny,
    Custom(RhoMap),
}

impl Goal {
    /// Accepts the short CLI names and the long names.
    pub fn parse(s: &str) -> Option<Goal> {
        Some(match s {
            "orienting" => Goal::Orienting,
            "nonor1" | "nonsep-nonorient-1sided" => Goal::NonsepNonorientOneSided,
            "nonor2" | "nonsep-nonorient-2sided" => Goal::NonsepNonorientTwoSided,
            "onesided" | "onesided-any" => Goal::OneSidedAny,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Goal::Orienting => "orienting",
            Goal::NonsepNonorientOneSided => "nonsep-nonorient-1sided",
            Goal::NonsepNonorientTwoSided => "nonsep-nonorient-2sided",
            Goal::OneSidedAny => "onesided-any",
            Goal::Custom(_) => "custom",
        }
    }

    pub fn named() -> [Goal; 4] {
        [Goal::Orienting, Goal::NonsepNonorientOneSided, Goal::NonsepNonorientTwoSided, Goal::OneSidedAny]
    }

    /// Whether a curve of class `c` meets the goal. Custom goals are
    /// checked on signatures instead and always match here.
    pub fn matches(&self, c: CurveClass) -> bool {
        match self {
            Goal::Orienting => matches!(c, CurveClass::NonsepOrienting(_)),
            Goal::NonsepNonorientOneSided => c == CurveClass::NonsepNonorienting(Sidedness::OneSided),
            Goal::NonsepNonorientTwoSided => c == CurveClass::NonsepNonorienting(Sidedness::TwoSided),
            Goal::OneSidedAny => c.sidedness() == Sidedness::OneSided,
            Goal::Custom(_) => true,
        }
    }

    pub fn check_feasible(&self, g: usize, orientable: bool) -> Result<()> {
        if orientable {
            return match self {
                Goal::Custom(_) => Err(Error::SurfaceOrientable),
                _ => Err(Error::InfeasibleGoal(format!("{} needs a non-orientable surface", self.name()))),
            };
        }
        match self {
            Goal::NonsepNonorientOneSided if g < 2 => {
                Err(Error::InfeasibleGoal(format!("{} needs Euler genus at least 2, got {}", self.name(), g)))
            }
            Goal::NonsepNonorientTwoSided if g < 3 => {
                Err(Error::InfeasibleGoal(format!("{} needs Euler genus at least 3, got {}", self.name(), g)))
            }
            _ => Ok(()),
        }
    }
}

/// A goal together with its constraint instances for one genus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalSpec {
    pub goal: Goal,
    pub genus: usize,
    pub instances: Vec<RhoMap>,
}

impl GoalSpec {
    pub fn new(goal: Goal, g: usize, orientable: bool) -> Result<GoalSpec> {
        goal.check_feasible(g, orientable)?;
        let sum = Z2Vec::ones(g);
        let unit = |i| Z2Vec::unit(g, i);
        let inst = |rows: Vec<Z2Vec>, target: &[u8]| {
            RhoMap::new(Z2Matrix::from_vec_rows(g, rows), vec![Z2Vec::from_bits(target)])
        };
        let mut instances = Vec::new();
        match &goal {
            Goal::Orienting => {
                instances.push(RhoMap::new(Z2Matrix::identity(g), vec![Z2Vec::ones(g)])?);
            }
            Goal::OneSidedAny => instances.push(inst(vec![sum], &[1])?),
            Goal::NonsepNonorientOneSided if g % 2 == 0 => instances.push(inst(vec![sum], &[1])?),
            Goal::NonsepNonorientOneSided => {
                for i in 0..g {
                    instances.push(inst(vec![sum.clone(), unit(i)], &[1, 0])?);
                }
            }
            Goal::NonsepNonorientTwoSided if g % 2 == 1 => {
                for i in 0..g {
                    instances.push(inst(vec![sum.clone(), unit(i)], &[0, 1])?);
                }
            }
            Goal::NonsepNonorientTwoSided => {
                for i in 0..g {
                    for j in 0..g {
                        if i != j {
                            instances.push(inst(vec![sum.clone(), unit(i), unit(j)], &[0, 0, 1])?);
                        }
                    }
                }
            }
            Goal::Custom(rho) => {
                if rho.matrix.cols() != g {
                    return Err(Error::DimensionMismatch(format!("rho has {} columns for genus {}", rho.matrix.cols(), g)));
                }
                if rho.targets.is_empty() {
                    return Err(Error::InfeasibleGoal("empty target set".into()));
                }
                instances.push(rho.clone());
            }
        }
        Ok(GoalSpec { goal, genus: g, instances })
    }
}

/// Where the winning cover path starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub path_index: usize,
    pub start_vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkResult {
    pub walk: ClosedWalk,
    pub units: u64,
    pub length: Weight,
    /// `None` for the trivial walk.
    pub witness: Option<PathWitness>,
}

/// Adjacency of a cover in compressed form: `(neighbour, cover edge, forward, units)`.
struct CoverGraph {
    start: Vec<usize>,
    adj: Vec<(u32, u32, bool, u64)>,
}

impl CoverGraph {
    fn new(cov: &SubhomologyCover, units: &[u64]) -> CoverGraph {
        let n = cov.num_vertices();
        let mut deg = vec![0usize; n + 1];
        for &(a, b) in &cov.edge_ends {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + deg[v];
        }
        let mut fill = start.clone();
        let mut adj = vec![(0u32, 0u32, false, 0u64); start[n]];
        for (x, &(a, b)) in cov.edge_ends.iter().enumerate() {
            let w = units[cov.edge_base[x]];
            adj[fill[a]] = (b as u32, x as u32, true, w);
            fill[a] += 1;
            adj[fill[b]] = (a as u32, x as u32, false, w);
            fill[b] += 1;
        }
        CoverGraph { start, adj }
    }

    fn neighbours(&self, v: usize) -> &[(u32, u32, bool, u64)] {
        &self.adj[self.start[v]..self.start[v + 1]]
    }
}

/// Reusable A* state; only touched entries are reset.
struct Search {
    dist: Vec<u64>,
    pred: Vec<(u32, u32, bool)>,
    touched: Vec<usize>,
    heap: BinaryHeap<Reverse<(u64, u64, u32)>>,
}

impl Search {
    fn new(n: usize) -> Search {
        Search { dist: vec![u64::MAX; n], pred: vec![(u32::MAX, 0, false); n], touched: Vec::new(), heap: BinaryHeap::new() }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = u64::MAX;
            self.pred[v] = (u32::MAX, 0, false);
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Shortest path from `s` to any target with length strictly below
    /// `bound`, guided by the consistent lower bound `h` (`u64::MAX` when no
    /// target is reachable).
    fn run(
        &mut self,
        cg: &CoverGraph,
        s: usize,
        is_target: &dyn Fn(usize) -> bool,
        h: &dyn Fn(usize) -> u64,
        removed: &[bool],
        k: usize,
        bound: u64,
    ) -> Option<(usize, u64)> {
        self.reset();
        let hs = h(s);
        if hs >= bound {
            return None;
        }
        self.dist[s] = 0;
        self.touched.push(s);
        self.heap.push(Reverse((hs, 0, s as u32)));
        while let Some(Reverse((_, d, v))) = self.heap.pop() {
            let v = v as usize;
            if d > self.dist[v] {
                continue;
            }
            if v != s && is_target(v) {
                return Some((v, d));
            }
            for &(u, x, fwd, w) in cg.neighbours(v) {
                let nd = d + w;
                let u = u as usize;
                if nd < self.dist[u] && !removed[u >> k] {
                    let hu = h(u);
                    if hu == u64::MAX || nd + hu >= bound {
                        continue;
                    }
                    if self.dist[u] == u64::MAX {
                        self.touched.push(u);
                    }
                    self.dist[u] = nd;
                    self.pred[u] = (v as u32, x, fwd);
                    self.heap.push(Reverse((nd + hu, nd, u as u32)));
                }
            }
        }
        None
    }

    fn path_to(&self, s: usize, t: usize, k: usize) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut v = t;
        while v != s {
            let (p, x, fwd) = self.pred[v];
            steps.push(Step { edge: (x as usize) >> k, forward: fwd });
            v = p as usize;
        }
        steps.reverse();
        steps
    }
}

/// Lower bounds from two-sheeted quotients of the cover: for each row `j`
/// of `rho` on which all targets agree, the distance from `(u, bit j)` to
/// the target bit over `v` in the cover labelled by row `j` alone.
struct RowBounds {
    adj: Vec<Vec<(u32, u64, u64)>>,
    rows: Vec<(usize, u64)>,
    k: usize,
    h: Vec<Vec<u64>>,
}

impl RowBounds {
    fn new(g: &SurfaceMap, units: &[u64], alpha: &[u64], targets: &[u64], k: usize) -> RowBounds {
        let mut adj = vec![Vec::new(); g.num_vertices()];
        for e in 0..g.num_edges() {
            let (a, b) = g.edge_ends(e);
            adj[a].push((b as u32, units[e], alpha[e]));
            adj[b].push((a as u32, units[e], alpha[e]));
        }
        let rows = (0..k)
            .filter_map(|j| {
                let b = (targets[0] >> j) & 1;
                targets.iter().all(|t| (t >> j) & 1 == b).then_some((j, b))
            })
            .collect();
        RowBounds { adj, rows, k, h: Vec::new() }
    }

    fn prepare(&mut self, v: usize, removed: &[bool]) {
        let n = self.adj.len();
        self.h = self
            .rows
            .iter()
            .map(|&(j, b)| {
                let mut dist = vec![u64::MAX; 2 * n];
                let mut heap = BinaryHeap::new();
                let s = 2 * v + b as usize;
                dist[s] = 0;
                heap.push(Reverse((0u64, s)));
                while let Some(Reverse((d, x))) = heap.pop() {
                    if d > dist[x] {
                        continue;
                    }
                    let (u, bit) = (x / 2, (x % 2) as u64);
                    for &(w, len, al) in &self.adj[u] {
                        if removed[w as usize] {
                            continue;
                        }
                        let y = 2 * w as usize + (bit ^ ((al >> j) & 1)) as usize;
                        if d + len < dist[y] {
                            dist[y] = d + len;
                            heap.push(Reverse((d + len, y)));
                        }
                    }
                }
                dist
            })
            .collect();
    }

    fn bound(&self, x: usize) -> u64 {
        let (u, nu) = (x >> self.k, x as u64 & ((1u64 << self.k) - 1));
        let mut best = 0;
        for (r, &(j, _)) in self.rows.iter().enumerate() {
            best = best.max(self.h[r][2 * u + ((nu >> j) & 1) as usize]);
        }
        best
    }
}

/// The ordered start vertices: `(path index, vertex)`, each vertex once,
/// paths in order and vertices ascending within a path.
fn sources(hp: &HittingPaths) -> Vec<PathWitness> {
    let mut seen = vec![false; hp.dist.len()];
    let mut out = Vec::new();
    for (i, p) in hp.paths.iter().enumerate() {
        let mut vs = p.clone();
        vs.sort_unstable();
        vs.dedup();
        for v in vs {
            if !seen[v] {
                seen[v] = true;
                out.push(PathWitness { path_index: i, start_vertex: v });
            }
        }
    }
    out
}

/// Shortest closed walk `c` in `g` with `rho(sigma(c, loops))` in the
/// target set, strictly shorter than `bound` units when a bound is given.
/// Returns `Ok(None)` when nothing beats the bound and
/// `InfeasibleGoal` when no walk exists at all.
pub fn shortest_constrained_walk_bounded(
    g: &SurfaceMap,
    loops: &LoopSystem,
    hp: &HittingPaths,
    rho: &RhoMap,
    bound: Option<u64>,
) -> Result<Option<WalkResult>> {
    if rho.targets.is_empty() {
        return Err(Error::InfeasibleGoal("empty target set".into()));
    }
    if rho.targets.iter().any(Z2Vec::is_zero) {
        let w = WalkResult { walk: ClosedWalk::trivial(0), units: 0, length: Weight::from_integer(0), witness: None };
        return Ok(if bound.is_none_or(|b| b > 0) { Some(w) } else { None });
    }
    let labels = labeling_from_loops(g, loops, rho)?;
    let cov = build_cover(g, &labels)?;
    let scale = Scale::for_weights(g.weights());
    let units: Vec<u64> = g.weights().iter().map(|w| scale.units(w)).collect();
    let cg = CoverGraph::new(&cov, &units);
    let k = cov.k;
    let sheet_mask = (1u64 << k) - 1;
    let targets: Vec<u64> = rho.targets.iter().map(Z2Vec::to_u64).collect();

    let mut search = Search::new(cov.num_vertices());
    let mut lower = RowBounds::new(g, &units, &cov.alpha, &targets, k);
    let mut removed = vec![false; g.num_vertices()];
    let mut best: Option<WalkResult> = None;
    for src in sources(hp) {
        let v = src.start_vertex;
        let s = cov.vertex(v, 0);
        let cap = best.as_ref().map_or(bound.unwrap_or(u64::MAX), |b| b.units);
        let is_target = |x: usize| (x >> k) == v && targets.contains(&((x as u64) & sheet_mask));
        lower.prepare(v, &removed);
        let found = search.run(&cg, s, &is_target, &|x| lower.bound(x), &removed, k, cap);
        // Every walk through `v` shorter than the current best has now been seen.
        removed[v] = true;
        if let Some((t, d)) = found {
            let walk = ClosedWalk { start: v, steps: search.path_to(s, t, k) };
            walk.validate(g)?;
            if !hp.paths[src.path_index].contains(&walk.start) {
                return Err(Error::Invariant("winning walk does not start on its hitting path".into()));
            }
            best = Some(WalkResult { walk, units: d, length: scale.weight(d), witness: Some(src) });
        }
    }
    if best.is_none() && bound.is_none() {
        return Err(Error::InfeasibleGoal("no closed walk meets the constraint".into()));
    }
    Ok(best)
}

/// Unbounded form of [`shortest_constrained_walk_bounded`].
pub fn shortest_constrained_walk(g: &SurfaceMap, loops: &LoopSystem, rho: &RhoMap) -> Result<WalkResult> {
    let hp = hitting_paths(g);
    shortest_constrained_walk_bounded(g, loops, &hp, rho, None)?
        .ok_or_else(|| Error::InfeasibleGoal("no closed walk meets the constraint".into()))
}

/// Per-surface data shared by every query: the dual graph, its standard
/// loops, the change of basis and the hitting paths.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub g: SurfaceMap,
    pub loops: LoopSystem,
    pub phi: Z2Matrix,
    pub hitting: HittingPaths,
}

#[derive(Clone, Debug)]
pub struct CurveSolution {
    pub curve: CrossCurve,
    pub length: Weight,
    /// Signature against the canonical system.
    pub signature: Z2Vec,
    pub walk: WalkResult,
}

impl Prepared {
    pub fn new(m: &SurfaceMap) -> Result<Prepared> {
        if m.is_orientable() {
            return Err(Error::SurfaceOrientable);
        }
        let g = m.dual().map;
        let loops = standard_loops(&g)?;
        let phi = change_basis_matrix(m.euler_genus());
        let hitting = hitting_paths(&g);
        Ok(Prepared { g, loops, phi, hitting })
    }

    pub fn genus(&self) -> usize {
        self.phi.rows()
    }

    /// Canonical signature of a curve on `m`.
    pub fn canonical_signature(&self, c: &CrossCurve) -> Result<Z2Vec> {
        Ok(self.loops.signature_of_counts(&c.crossing_counts()).to_canonical(&self.phi)?.bits)
    }

    /// Shortest simple curve on `m` whose canonical signature maps into
    /// the target set of `rho`, strictly shorter than `bound` units if given.
    pub fn curve_bounded(&self, m: &SurfaceMap, rho: &RhoMap, bound: Option<u64>) -> Result<Option<CurveSolution>> {
        let rho2 = compose_rho(rho, &self.phi)?;
        let Some(walk) = shortest_constrained_walk_bounded(&self.g, &self.loops, &self.hitting, &rho2, bound)? else {
            return Ok(None);
        };
        let curve = if walk.walk.is_trivial() {
            CrossCurve::trivial(m.num_edges(), 0)
        } else {
            let mu: Vec<usize> = mu_from_walk(&walk.walk, m.num_edges()).into_iter().map(usize::from).collect();
            merge_to_simple_cycle(m, &mu)?
        };
        if !curve.is_simple(m) || curve.multiplicity() > 2 {
            return Err(Error::Invariant("merged curve is not simple with multiplicity at most 2".into()));
        }
        let length = curve.length(m);
        if length != walk.length {
            return Err(Error::Invariant(format!(
                "curve length {} differs from walk length {}",
                format_weight(&length),
                format_weight(&walk.length)
            )));
        }
        let signature = self.canonical_signature(&curve)?;
        if !rho.accepts(&rho.matrix.apply(&signature)?) {
            return Err(Error::Invariant("merged curve leaves the target set".into()));
        }
        Ok(Some(CurveSolution { curve, length, signature, walk }))
    }

    pub fn curve(&self, m: &SurfaceMap, rho: &RhoMap) -> Result<CurveSolution> {
        self.curve_bounded(m, rho, None)?
            .ok_or_else(|| Error::InfeasibleGoal("no closed walk meets the constraint".into()))
    }
}

/// Shortest simple closed curve on the cross-metric surface `m` whose
/// canonical signature `s` has `rho(s)` in the target set.
pub fn shortest_constrained_curve(m: &SurfaceMap, rho: &RhoMap) -> Result<CurveSolution> {
    Prepared::new(m)?.curve(m, rho)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TieBreakTrace {
    pub instance: usize,
    pub path_index: Option<usize>,
    pub start_vertex: Option<usize>,
    pub walk_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub goal: String,
    pub genus: usize,
    pub instances: usize,
    pub length: String,
    pub signature: Vec<u8>,
    pub class: String,
    #[serde(rename = "sided")]
    pub sidedness: String,
    pub multiplicity: usize,
    pub trace: TieBreakTrace,
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub curve: CrossCurve,
    pub length: Weight,
    pub signature: Z2Vec,
    pub class: CurveClass,
    pub report: SolveReport,
}

pub fn solve(m: &SurfaceMap, goal: &Goal) -> Result<Solved> {
    let spec = GoalSpec::new(goal.clone(), m.euler_genus(), m.is_orientable())?;
    let prep = Prepared::new(m)?;
    solve_prepared(m, &prep, &spec)
}

/// Shortest over the instances of `spec`; ties go to the earliest instance.
pub fn solve_prepared(m: &SurfaceMap, prep: &Prepared, spec: &GoalSpec) -> Result<Solved> {
    let mut best: Option<(usize, CurveSolution)> = None;
    for (i, rho) in spec.instances.iter().enumerate() {
        let bound = best.as_ref().map(|b| b.1.walk.units);
        if let Some(sol) = prep.curve_bounded(m, rho, bound)? {
            best = Some((i, sol));
        }
    }
    let (instance, sol) = best.ok_or_else(|| Error::InfeasibleGoal(format!("no curve for {}", spec.goal.name())))?;
    let class = sol.curve.classify_by_cutting(m)?;
    if !spec.goal.matches(class) {
        return Err(Error::Invariant(format!(
            "{} search returned a {} {} curve",
            spec.goal.name(),
            class.sided_name(),
            class.name()
        )));
    }
    let report = SolveReport {
        goal: spec.goal.name().to_string(),
        genus: spec.genus,
        instances: spec.instances.len(),
        length: format_weight(&sol.length),
        signature: sol.signature.bits(),
        class: class.name().to_string(),
        sidedness: class.sided_name().to_string(),
        multiplicity: sol.curve.multiplicity(),
        trace: TieBreakTrace {
            instance,
            path_index: sol.walk.witness.map(|w| w.path_index),
            start_vertex: sol.walk.witness.map(|w| w.start_vertex),
            walk_steps: sol.walk.walk.steps.len(),
        },
    };
    Ok(Solved { curve: sol.curve, length: sol.length, signature: sol.signature, class, report })
}
