#![allow(dead_code)]

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfcurve::curve::{ClosedWalk, Step};
use surfcurve::map::{from_words, Side, SurfaceMap};
use surfcurve::weight::Weight;
use surfcurve::z2::{RhoMap, Z2Matrix, Z2Vec};

/// Polygonal schemata the corpus is refined from, with Euler genus.
pub const BASES: &[(&str, usize)] = &[
    ("+1 +1", 1),
    ("+1 +1 +2 +2", 2),
    ("+1 +2 -1 +2", 2),
    ("+1 +1 +2 +2 +3 +3", 3),
    ("+1 +1 +2 +3 -2 -3", 3),
    ("+1 +1 +2 +2 +3 +3 +4 +4", 4),
    ("+1 +2 -1 +2 +3 +4 -3 -4", 4),
];

pub const ORIENTABLE_BASES: &[(&str, usize)] = &[("+1 -1", 0), ("+1 +2 -1 -2", 2)];

pub struct Instance {
    pub name: String,
    pub map: SurfaceMap,
}

pub fn parse_faces(word: &str) -> Vec<Vec<Side>> {
    from_words(&[word]).expect("base word").faces().to_vec()
}

/// Replaces edge `e` by a path of two edges.
fn subdivide(faces: &mut [Vec<Side>], e: usize, fresh: usize) {
    for f in faces.iter_mut() {
        let mut out = Vec::with_capacity(f.len() + 2);
        for &s in f.iter() {
            if s.edge != e {
                out.push(s);
            } else if !s.rev {
                out.push(Side::fwd(e));
                out.push(Side::fwd(fresh));
            } else {
                out.push(Side::bwd(fresh));
                out.push(Side::bwd(e));
            }
        }
        *f = out;
    }
}

/// Cuts face `f` along a new edge between corners `i < j`.
fn split(faces: &mut Vec<Vec<Side>>, f: usize, i: usize, j: usize, fresh: usize) {
    let w = faces[f].clone();
    let mut a: Vec<Side> = w[i..j].to_vec();
    a.push(Side::fwd(fresh));
    let mut b: Vec<Side> = w[j..].iter().chain(&w[..i]).copied().collect();
    b.push(Side::bwd(fresh));
    faces[f] = a;
    faces.push(b);
}

/// A random refinement of `word` with `edges` edges and weights in `1..=3`.
pub fn refine(word: &str, edges: usize, seed: u64) -> SurfaceMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faces = parse_faces(word);
    let mut m = faces.iter().map(Vec::len).sum::<usize>() / 2;
    while m < edges {
        if rng.gen_bool(0.5) {
            let e = rng.gen_range(0..m);
            subdivide(&mut faces, e, m);
        } else {
            let f = rng.gen_range(0..faces.len());
            let n = faces[f].len();
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            let (i, j) = (i.min(j), i.max(j));
            if i == j {
                continue;
            }
            split(&mut faces, f, i, j, m);
        }
        m += 1;
    }
    let weights = (0..m).map(|_| Weight::from_integer(rng.gen_range(1..=3))).collect();
    SurfaceMap::new(weights, faces).expect("refinement stays a valid surface")
}

/// The non-orientable corpus: every base refined to several sizes.
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for (b, &(word, g)) in BASES.iter().enumerate() {
        let base_edges = parse_faces(word).iter().map(Vec::len).sum::<usize>() / 2;
        out.push(Instance { name: format!("base-{}", b), map: from_words(&[word]).unwrap() });
        for t in 0..7u64 {
            let (step, cap) = match g {
                1 | 2 => (3, 20),
                3 => (2, 12),
                _ => (2, 10),
            };
            let edges = (base_edges + 1 + step * t as usize).min(cap);
            let seed = 1000 * b as u64 + t;
            let map = refine(word, edges, seed);
            assert_eq!(map.euler_genus(), g);
            out.push(Instance { name: format!("b{}-e{}-s{}", b, edges, seed), map });
        }
    }
    out
}

/// Unit-weight fixtures with fixed expected values.
pub fn fixture(word: &str) -> SurfaceMap {
    from_words(&[word]).expect("fixture")
}

/// A random walk of `len` steps closed by a breadth-first return path.
pub fn random_closed_walk<R: Rng>(g: &SurfaceMap, rng: &mut R, len: usize) -> ClosedWalk {
    let nv = g.num_vertices();
    let mut adj: Vec<Vec<Step>> = vec![Vec::new(); nv];
    for e in 0..g.num_edges() {
        let (t, h) = g.edge_ends(e);
        adj[t].push(Step { edge: e, forward: true });
        adj[h].push(Step { edge: e, forward: false });
    }
    let head = |s: Step| {
        let (t, h) = g.edge_ends(s.edge);
        if s.forward {
            h
        } else {
            t
        }
    };
    let start = rng.gen_range(0..nv);
    let mut at = start;
    let mut steps = Vec::with_capacity(len);
    for _ in 0..len {
        let s = adj[at][rng.gen_range(0..adj[at].len())];
        steps.push(s);
        at = head(s);
    }
    let mut back: Vec<Option<Step>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[at] = true;
    let mut queue = VecDeque::from([at]);
    while let Some(v) = queue.pop_front() {
        for &s in &adj[v] {
            let w = head(s);
            if !seen[w] {
                seen[w] = true;
                back[w] = Some(s);
                queue.push_back(w);
            }
        }
    }
    let mut tail = Vec::new();
    let mut v = start;
    while v != at {
        let s = back[v].expect("connected");
        tail.push(s);
        let (t, h) = g.edge_ends(s.edge);
        v = if s.forward { t } else { h };
    }
    tail.reverse();
    steps.extend(tail);
    ClosedWalk { start, steps }
}

/// The standard schema word for Euler genus `g`, as printed by loop systems.
pub fn template_word(g: usize) -> String {
    let mut w: Vec<String> = if g % 2 == 1 {
        vec!["z".into(), "z".into()]
    } else {
        vec!["y".into(), "w".into(), "-y".into(), "w".into()]
    };
    for i in 1..=(g - 1) / 2 {
        w.extend([format!("a{}", i), format!("b{}", i), format!("-a{}", i), format!("-b{}", i)]);
    }
    w.join(" ")
}

/// A random linear map `Z2^g -> Z2^k` with a random non-empty target set.
pub fn random_rho<R: Rng>(rng: &mut R, g: usize, k: usize) -> RhoMap {
    let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..g).map(|_| rng.gen_range(0..2)).collect()).collect();
    let matrix = Z2Matrix::from_rows(&rows).unwrap();
    let targets = (0..1u64 << k).filter(|_| rng.gen_bool(0.5)).map(|x| Z2Vec::from_u64(k, x)).collect::<Vec<_>>();
    let targets = if targets.is_empty() { vec![Z2Vec::from_u64(k, 1)] } else { targets };
    RhoMap::new(matrix, targets).unwrap()
}

/// The same map with every weight multiplied by `c`.
pub fn scaled(m: &SurfaceMap, c: i64) -> SurfaceMap {
    let ws = m.weights().iter().map(|w| w * Weight::from_integer(c)).collect();
    SurfaceMap::new(ws, m.faces().to_vec()).unwrap()
}

/// A random non-orientable map with about `edges` edges.
pub fn random_nonorientable<R: Rng>(rng: &mut R, edges: usize) -> SurfaceMap {
    loop {
        let (word, _) = BASES[rng.gen_range(0..BASES.len())];
        let m = refine(word, edges, rng.gen());
        if !m.is_orientable() {
            return m;
        }
    }
}
