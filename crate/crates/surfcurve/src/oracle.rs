//! Brute-force shortest curves for small surfaces.
//!
//! A closed curve in general position is recorded by the cyclic sequence of
//! face-boundary occurrences it leaves through. For every such sequence
//! within the budget, each ordering of its crossing points along the edges
//! is drawn and kept when the drawing is simple.

use std::collections::HashSet;

use crate::curve::{CrossCurve, CurveClass};
use crate::error::{Error, Result};
use crate::overlay::{Arrangement, End};
use crate::map::SurfaceMap;
use crate::solver::Goal;
use crate::weight::{Scale, Weight};

/// Guard on the number of drawings tried in one enumeration.
pub const MAX_CANDIDATES: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Total weight bound, inclusive.
    pub max_weight: Weight,
    /// Crossings per edge.
    pub cap: usize,
    /// Crossing-sequence length.
    pub max_len: usize,
}

impl EnumerationBudget {
    pub fn new(max_weight: Weight, cap: usize, max_len: usize) -> Result<EnumerationBudget> {
        if max_weight <= Weight::from_integer(0) || cap == 0 || cap > 3 || max_len == 0 {
            return Err(Error::BudgetTooLarge("bounds must be positive and the cap at most 3".into()));
        }
        Ok(EnumerationBudget { max_weight, cap, max_len })
    }

    /// Weight bound only; the length bound follows from the lightest edge.
    pub fn by_weight(m: &SurfaceMap, max_weight: Weight, cap: usize) -> Result<EnumerationBudget> {
        let lightest = m.weights().iter().min().copied().unwrap_or_else(|| Weight::from_integer(1));
        let len = (max_weight / lightest).floor().to_integer().max(1) as usize;
        EnumerationBudget::new(max_weight, cap, len.min(cap * m.num_edges()).max(1))
    }
}

/// One enumerated simple curve.
#[derive(Clone, Debug)]
pub struct Enumerated {
    /// Exit occurrences in order, in canonical rotation.
    pub exits: Vec<usize>,
    pub curve: CrossCurve,
    pub length: Weight,
    pub class: CurveClass,
}

struct Enumerator<'a> {
    m: &'a SurfaceMap,
    cap: usize,
    max_len: usize,
    units: Vec<u64>,
    /// Face-to-face distance in units, crossing edges.
    dist: Vec<Vec<u64>>,
    occ_edge: Vec<usize>,
    face_occs: Vec<Vec<usize>>,
    seen: HashSet<Vec<usize>>,
    candidates: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl<'a> Enumerator<'a> {
    fn new(m: &'a SurfaceMap, units: Vec<u64>, cap: usize, max_len: usize) -> Enumerator<'a> {
        let nf = m.num_faces();
        let dist = face_distances(m, &units);
        let occ_edge = (0..m.num_occurrences()).map(|o| m.occ_side(o).edge).collect();
        let mut face_occs = vec![Vec::new(); nf];
        for o in 0..m.num_occurrences() {
            face_occs[m.occ_face(o)].push(o);
        }
        Enumerator { m, cap, max_len, units, dist, occ_edge, face_occs, seen: HashSet::new(), candidates: 0 }
    }

    /// Smallest rotation of the sequence or of its reversal.
    fn canonical(&self, seq: &[usize]) -> Vec<usize> {
        let rev: Vec<usize> = seq.iter().rev().map(|&o| self.m.other_occ(o)).collect();
        let n = seq.len();
        let mut best: Option<Vec<usize>> = None;
        for s in [seq, &rev[..]] {
            for r in 0..n {
                let cand: Vec<usize> = s[r..].iter().chain(&s[..r]).copied().collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or_default()
    }

    fn side_of(&self, o: usize) -> u8 {
        if self.m.edge_occs(self.occ_edge[o])[0] == o {
            0
        } else {
            1
        }
    }

    /// Whether the arcs of the drawing are pairwise disjoint inside every
    /// face: endpoints are placed around the face boundary and chords must
    /// not interleave.
    fn chords_disjoint(&self, seq: &[usize], order: &[Vec<usize>]) -> bool {
        let n = seq.len();
        let mut along = vec![0usize; n];
        let mut count = vec![0usize; n];
        for crossings in order {
            for (u, &i) in crossings.iter().enumerate() {
                along[i] = u;
                count[i] = crossings.len();
            }
        }
        let slots = self.cap + 1;
        let key = |o: usize, i: usize| {
            let off = if self.m.occ_side(o).rev { count[i] - 1 - along[i] } else { along[i] };
            self.m.occ_pos(o) * slots + off
        };
        let mut chords: Vec<(usize, usize, usize)> = (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let a = key(self.m.other_occ(seq[prev]), prev);
                let b = key(seq[i], i);
                (self.m.occ_face(seq[i]), a.min(b), a.max(b))
            })
            .collect();
        chords.sort_unstable();
        for x in 0..chords.len() {
            for y in x + 1..chords.len() {
                let (f, a, b) = chords[x];
                let (g, c, d) = chords[y];
                if f != g {
                    break;
                }
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return false;
                }
            }
        }
        true
    }

    /// Draws `seq` with crossings on each edge in the given order.
    fn draw(&self, seq: &[usize], order: &[Vec<usize>]) -> CrossCurve {
        let mut arr = Arrangement::empty(self.m.num_edges());
        let mut point = vec![0usize; seq.len()];
        for crossings in order {
            for (pos, &i) in crossings.iter().enumerate() {
                point[i] = arr.add_point(self.occ_edge[seq[i]], pos);
            }
        }
        let n = seq.len();
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let entry = self.m.other_occ(seq[prev]);
            let a = End::Point { point: point[prev], side: self.side_of(entry) };
            let b = End::Point { point: point[i], side: self.side_of(seq[i]) };
            arr.add_arc(self.m.occ_face(seq[i]), a, b, 0);
        }
        CrossCurve { arrangement: arr, trivial_face: None }
    }

    fn realize(&mut self, seq: &[usize], visit: &mut dyn FnMut(Enumerated) -> u64) -> Result<()> {
        let canon = self.canonical(seq);
        if !self.seen.insert(canon.clone()) {
            return Ok(());
        }
        let mut by_edge: Vec<Vec<usize>> = vec![Vec::new(); self.m.num_edges()];
        for (i, &o) in seq.iter().enumerate() {
            by_edge[self.occ_edge[o]].push(i);
        }
        let used: Vec<Vec<usize>> = by_edge.into_iter().filter(|v| !v.is_empty()).collect();
        let perms: Vec<Vec<Vec<usize>>> = used.iter().map(|v| permutations(v.len())).collect();
        let mut odo = vec![0usize; used.len()];
        loop {
            self.candidates += 1;
            if self.candidates > MAX_CANDIDATES {
                return Err(Error::BudgetTooLarge(format!("more than {} candidate drawings", MAX_CANDIDATES)));
            }
            let order: Vec<Vec<usize>> = used
                .iter()
                .zip(&odo)
                .zip(&perms)
                .map(|((v, &j), ps)| ps[j].iter().map(|&t| v[t]).collect())
                .collect();
            if self.chords_disjoint(seq, &order) {
                let curve = self.draw(seq, &order);
                if !curve.is_simple(self.m) {
                    return Err(Error::Invariant("non-crossing drawing failed the simplicity check".into()));
                }
                let class = curve.classify_by_cutting(self.m)?;
                let length = curve.length(self.m);
                visit(Enumerated { exits: canon.clone(), curve, length, class });
            }
            let mut t = 0;
            while t < odo.len() {
                odo[t] += 1;
                if odo[t] < perms[t].len() {
                    break;
                }
                odo[t] = 0;
                t += 1;
            }
            if t == odo.len() {
                return Ok(());
            }
        }
    }

    /// Depth-first over exit sequences whose first exit is their smallest.
    /// `visit` returns the current weight bound in units.
    fn run(&mut self, mut bound: u64, visit: &mut dyn FnMut(Enumerated) -> u64) -> Result<()> {
        let mut counts = vec![0usize; self.m.num_edges()];
        for x0 in 0..self.m.num_occurrences() {
            let start_face = self.m.occ_face(x0);
            let e0 = self.occ_edge[x0];
            if self.units[e0] > bound {
                continue;
            }
            counts[e0] += 1;
            let mut seq = vec![x0];
            self.extend(&mut seq, &mut counts, self.units[e0], start_face, &mut bound, visit)?;
            counts[e0] -= 1;
        }
        Ok(())
    }

    fn extend(
        &mut self,
        seq: &mut Vec<usize>,
        counts: &mut [usize],
        len: u64,
        start_face: usize,
        bound: &mut u64,
        visit: &mut dyn FnMut(Enumerated) -> u64,
    ) -> Result<()> {
        let face = self.m.occ_face(self.m.other_occ(*seq.last().expect("nonempty")));
        if face == start_face {
            let b = &mut *bound;
            let mut wrapped = |c: Enumerated| {
                *b = visit(c);
                *b
            };
            self.realize(&seq.clone(), &mut wrapped)?;
        }
        if seq.len() == self.max_len {
            return Ok(());
        }
        let x0 = seq[0];
        for i in 0..self.face_occs[face].len() {
            let x = self.face_occs[face][i];
            if x < x0 {
                continue;
            }
            let e = self.occ_edge[x];
            if counts[e] == self.cap {
                continue;
            }
            let next = self.m.occ_face(self.m.other_occ(x));
            let nl = len + self.units[e];
            if nl.saturating_add(self.dist[next][start_face]) > *bound {
                continue;
            }
            counts[e] += 1;
            seq.push(x);
            self.extend(seq, counts, nl, start_face, bound, visit)?;
            seq.pop();
            counts[e] -= 1;
        }
        Ok(())
    }
}

/// All simple closed curves within the budget, one entry per simple
/// drawing of each crossing sequence taken up to rotation and reversal.
pub fn enumerate_simple_curves(m: &SurfaceMap, budget: &EnumerationBudget) -> Result<Vec<Enumerated>> {
    let scale = Scale::for_weights(&[m.weights(), &[budget.max_weight][..]].concat());
    let bound = scale.units(&budget.max_weight);
    let units = m.weights().iter().map(|w| scale.units(w)).collect();
    let mut en = Enumerator::new(m, units, budget.cap, budget.max_len);
    let mut out = Vec::new();
    en.run(bound, &mut |c| {
        out.push(c);
        bound
    })?;
    Ok(out)
}

/// Face-to-face distances in units, moving across edges.
fn face_distances(m: &SurfaceMap, units: &[u64]) -> Vec<Vec<u64>> {
    let nf = m.num_faces();
    let mut dist = vec![vec![u64::MAX; nf]; nf];
    for (f, row) in dist.iter_mut().enumerate() {
        row[f] = 0;
    }
    for e in 0..m.num_edges() {
        let (a, b) = m.edge_faces(e);
        dist[a][b] = dist[a][b].min(units[e]);
        dist[b][a] = dist[b][a].min(units[e]);
    }
    for k in 0..nf {
        for i in 0..nf {
            for j in 0..nf {
                let via = dist[i][k].saturating_add(dist[k][j]);
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

/// A shortest curve found by enumeration.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub length: Weight,
    pub curve: CrossCurve,
    pub class: CurveClass,
    pub exits: Vec<usize>,
    /// Drawings tried over all rounds.
    pub candidates: usize,
}

/// Shortest simple curves meeting each goal, with crossing cap `cap`.
/// The weight bound starts at the heaviest edge and grows geometrically
/// until every goal has a curve within it. Goals with no curve of length at most
/// twice the total weight are reported infeasible.
pub fn brute_shortest_all(m: &SurfaceMap, goals: &[Goal], cap: usize) -> Result<Vec<Result<OracleResult>>> {
    let g = m.euler_genus();
    let mut out: Vec<Option<Result<OracleResult>>> = goals
        .iter()
        .map(|goal| match goal {
            Goal::Custom(_) => Some(Err(Error::InfeasibleGoal("the oracle classifies by cutting only".into()))),
            _ => goal.check_feasible(g, m.is_orientable()).err().map(Err),
        })
        .collect();
    let scale = Scale::for_weights(m.weights());
    let units: Vec<u64> = m.weights().iter().map(|x| scale.units(x)).collect();
    let heaviest = units.iter().copied().max().unwrap_or(1);
    let lightest = units.iter().copied().min().unwrap_or(1);
    let limit = 2 * units.iter().sum::<u64>();
    let mut wu = heaviest;
    let mut candidates = 0usize;
    loop {
        let open: Vec<usize> = (0..goals.len()).filter(|&i| out[i].is_none()).collect();
        if open.is_empty() {
            break;
        }
        let max_len = ((wu / lightest) as usize).clamp(1, cap * m.num_edges().max(1));
        let mut en = Enumerator::new(m, units.clone(), cap, max_len);
        let mut best: Vec<Option<Enumerated>> = vec![None; goals.len()];
        let mut shared_bound = wu;
        {
            let best = &mut best;
            let open = &open;
            en.run(wu, &mut |c: Enumerated| {
                for &i in open {
                    if goals[i].matches(c.class) && best[i].as_ref().is_none_or(|b| c.length < b.length) {
                        best[i] = Some(c.clone());
                    }
                }
                // Once every open goal has a curve, nothing longer than the worst of them matters.
                if open.iter().all(|&i| best[i].is_some()) {
                    shared_bound = open.iter().map(|&i| scale.units(&best[i].as_ref().expect("set").length)).max().unwrap_or(wu);
                }
                shared_bound
            })?;
        }
        candidates += en.candidates;
        for &i in &open {
            if let Some(c) = best[i].take() {
                out[i] = Some(Ok(OracleResult { length: c.length, curve: c.curve, class: c.class, exits: c.exits, candidates }));
            }
        }
        if wu >= limit {
            for slot in out.iter_mut().filter(|s| s.is_none()) {
                *slot = Some(Err(Error::InfeasibleGoal(format!(
                    "no curve of length at most {} within the cap",
                    scale.weight(limit)
                ))));
            }
            break;
        }
        wu = (wu + heaviest.max(wu / 4)).min(limit);
    }
    Ok(out.into_iter().map(|r| r.expect("resolved")).collect())
}

pub fn brute_shortest(m: &SurfaceMap, goal: &Goal, cap: usize) -> Result<OracleResult> {
    brute_shortest_all(m, std::slice::from_ref(goal), cap)?.pop().expect("one goal")
}
