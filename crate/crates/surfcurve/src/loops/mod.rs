//! Systems of loops on cross-metric surfaces and shortest hitting paths.
//!
//! Loops are drawn in the faces of a map and cross its edges; they all
//! start and end at a single hub. Cutting along them leaves one disk whose
//! boundary word is the polygonal schema.

mod normalize;
mod schema;
mod tree;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use schema::{format_word, Letter};

use crate::curve::{signature_of_counts, ClosedWalk, Crossing, Sidedness, SignatureVector, Step, SystemKind};
use crate::cut::cut_edges;
use crate::error::{Error, Result};
use crate::map::SurfaceMap;
use crate::overlay::{trace_curve, Arrangement, End, Overlay};
use crate::weight::{Scale, Weight};
use crate::z2::Z2Vec;
use normalize::{read_disk, template, Normalizer};
use tree::{tree_cotree, tree_cotree_drawing, unit_weights};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSystem {
    pub kind: SystemKind,
    /// Face holding the hub; `None` on the sphere.
    pub hub_face: Option<usize>,
    /// Loop `i` is curve `i` of the drawing.
    pub arrangement: Arrangement,
    pub names: Vec<String>,
    pub word: Vec<Letter>,
    /// Loop `i` is read against its drawn direction in `word`.
    pub reversed: Vec<bool>,
    /// Per edge, which loops cross it an odd number of times.
    pub parity: Vec<Z2Vec>,
    /// Cut-and-paste moves spent after the tree-cotree system.
    pub moves: usize,
}

impl LoopSystem {
    pub fn genus(&self) -> usize {
        self.names.len()
    }

    pub fn word_string(&self) -> String {
        format_word(&self.word, &self.names)
    }

    pub fn signature_of_counts(&self, counts: &[usize]) -> SignatureVector {
        SignatureVector { kind: self.kind, bits: signature_of_counts(counts, &self.parity, self.genus()) }
    }

    pub fn signature_of_walk(&self, walk: &ClosedWalk) -> SignatureVector {
        self.signature_of_counts(&walk.edge_counts(self.parity.len()))
    }

    /// Crossings of loop `i` in reading order, starting at the hub.
    pub fn loop_crossings(&self, x: &SurfaceMap, i: usize) -> Result<Vec<Crossing>> {
        let mut trace = trace_curve(&self.arrangement, i)?;
        if self.reversed[i] {
            trace.reverse();
            for t in &mut trace {
                t.1 = !t.1;
            }
        }
        let mut out = Vec::new();
        for (a, fwd) in trace {
            let arc = &self.arrangement.arcs[a];
            if let End::Point { point, side } = if fwd { arc.b } else { arc.a } {
                let edge = self.arrangement.point_edge[point];
                out.push(Crossing { edge, face: x.occ_face(x.edge_occs(edge)[1 - side as usize]) });
            }
        }
        Ok(out)
    }

    /// Sidedness of loop `i`, read off by cutting along it alone.
    pub fn sidedness(&self, x: &SurfaceMap, i: usize) -> Result<Sidedness> {
        let ov = Overlay::build(x, &self.arrangement)?;
        let cut = cut_edges(&ov.map, &ov.curve_edges(&[i]));
        match cut.boundaries.len() {
            1 => Ok(Sidedness::OneSided),
            2 => Ok(Sidedness::TwoSided),
            n => Err(Error::Invariant(format!("loop {} cuts into {} boundaries", i, n))),
        }
    }

    /// Recomputes the schema word by cutting and checks it against `word`.
    pub fn check_disk(&self, x: &SurfaceMap) -> Result<()> {
        let reading = read_disk(x, &self.arrangement)?;
        let oriented: Vec<Letter> = self
            .word
            .iter()
            .map(|l| Letter::new(l.symbol, l.inv != self.reversed[l.symbol]))
            .collect();
        match schema::align(&reading.word, &oriented) {
            Some((_, flips)) if flips.values().all(|&f| !f) => Ok(()),
            _ => Err(Error::Invariant("schema word does not match the drawing".into())),
        }
    }

    pub fn to_json(&self, x: &SurfaceMap) -> Result<String> {
        let loops = (0..self.genus())
            .map(|i| {
                Ok(LoopJson {
                    name: self.names[i].clone(),
                    reversed: self.reversed[i],
                    crossings: self
                        .loop_crossings(x, i)?
                        .into_iter()
                        .map(|c| Crossing { edge: c.edge + 1, face: c.face })
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let j = LoopsJson {
            kind: self.kind,
            hub_face: self.hub_face,
            word: self.word_string(),
            letters: self.word.clone(),
            loops,
            parity: self.parity.iter().map(|v| v.bits()).collect(),
            drawing: self.arrangement.clone(),
        };
        Ok(serde_json::to_string_pretty(&j).expect("serializable"))
    }

    /// Reads a system written by [`LoopSystem::to_json`]; parities are
    /// recomputed from the drawing and the disk check is rerun.
    pub fn from_json(x: &SurfaceMap, text: &str) -> Result<LoopSystem> {
        let j: LoopsJson = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        if j.drawing.edge_points.len() != x.num_edges() {
            return Err(Error::SurfaceMismatch("loop drawing has a different edge count".into()));
        }
        let names: Vec<String> = j.loops.iter().map(|l| l.name.clone()).collect();
        let sys = LoopSystem {
            kind: j.kind,
            hub_face: j.hub_face,
            parity: parity_table(&j.drawing, names.len()),
            arrangement: j.drawing,
            reversed: j.loops.iter().map(|l| l.reversed).collect(),
            names,
            word: j.letters,
            moves: 0,
        };
        sys.check_disk(x)?;
        Ok(sys)
    }
}

#[derive(Serialize, Deserialize)]
struct LoopJson {
    name: String,
    reversed: bool,
    crossings: Vec<Crossing>,
}

#[derive(Serialize, Deserialize)]
struct LoopsJson {
    kind: SystemKind,
    hub_face: Option<usize>,
    word: String,
    letters: Vec<Letter>,
    loops: Vec<LoopJson>,
    parity: Vec<Vec<u8>>,
    drawing: Arrangement,
}

fn parity_table(arr: &Arrangement, g: usize) -> Vec<Z2Vec> {
    let mut table = vec![Z2Vec::zeros(g); arr.edge_points.len()];
    for c in 0..g {
        for (e, k) in arr.curve_crossings(c).into_iter().enumerate() {
            if k % 2 == 1 {
                table[e].flip(c);
            }
        }
    }
    table
}

fn relabel(x: &SurfaceMap, mut arr: Arrangement, cur: &[Letter], orientable: bool, kind: SystemKind, moves: usize) -> Result<LoopSystem> {
    let (mut order, tmpl) = template(cur, orientable)?;
    let g = order.len();
    // The change of basis expects signatures ordered w, y, a1, b1, ...
    if kind == SystemKind::Standard && g % 2 == 0 {
        order.swap(0, 1);
    }
    let reading = read_disk(x, &arr)?;
    let (_, flips) = schema::align(&reading.word, &tmpl)
        .ok_or_else(|| Error::Invariant("normalised word does not match its template".into()))?;
    let index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    for arc in &mut arr.arcs {
        arc.curve = index[&arc.curve];
    }
    let word = tmpl.iter().map(|l| Letter::new(index[&l.symbol], l.inv)).collect();
    let reversed = order.iter().map(|s| flips[s]).collect();
    let names = match (kind, g % 2) {
        (SystemKind::Standard, 1) => std::iter::once("z".to_string()).chain(handle_names(g / 2)).collect(),
        (SystemKind::Standard, _) => ["w".to_string(), "y".to_string()].into_iter().chain(handle_names(g / 2 - 1)).collect(),
        _ => handle_names(g / 2).collect(),
    };
    let sys = LoopSystem {
        kind,
        hub_face: arr.hubs.first().map(|h| h.face),
        parity: parity_table(&arr, g),
        arrangement: arr,
        names,
        word,
        reversed,
        moves,
    };
    sys.check_disk(x)?;
    Ok(sys)
}

fn handle_names(p: usize) -> impl Iterator<Item = String> {
    (1..=p).flat_map(|i| [format!("a{}", i), format!("b{}", i)])
}

/// The tree-cotree system of loops based in face `root`: a shortest-path
/// tree of the dual graph, a maximum co-tree, one loop per leftover edge.
pub fn shortest_loops(x: &SurfaceMap, root: usize) -> Result<LoopSystem> {
    let arr = tree_cotree_drawing(x, root);
    let reading = read_disk(x, &arr)?;
    let g = arr.curve_ids().len();
    Ok(LoopSystem {
        kind: SystemKind::Shortest,
        hub_face: arr.hubs.first().map(|h| h.face),
        parity: parity_table(&arr, g),
        arrangement: arr,
        names: (1..=g).map(|i| format!("l{}", i)).collect(),
        word: reading.word,
        reversed: vec![false; g],
        moves: 0,
    })
}

/// Canonical loops `a1 b1 a1' b1' ...` of an orientable surface.
pub fn canonical_loops_orientable(x: &SurfaceMap, root: usize) -> Result<LoopSystem> {
    if !x.is_orientable() {
        return Err(Error::NotOrientable);
    }
    let mut nz = Normalizer::new(x, tree_cotree_drawing(x, root))?;
    nz.gather_handles()?;
    relabel(x, nz.arr, &nz.cur, true, SystemKind::Canonical, nz.moves)
}

/// Standard loops of a non-orientable surface: `z z a1 b1 a1' b1' ...` for
/// odd genus and `y w y' w a1 b1 a1' b1' ...` for even genus.
pub fn standard_loops(x: &SurfaceMap) -> Result<LoopSystem> {
    if x.is_orientable() {
        return Err(Error::SurfaceOrientable);
    }
    let g = x.euler_genus();
    let mut nz = Normalizer::new(x, tree_cotree_drawing(x, 0))?;
    nz.gather_crosscaps()?;
    nz.gather_handles()?;
    nz.handles_to_crosscaps()?;
    nz.crosscaps_to_handles(if g % 2 == 1 { 1 } else { 2 })?;
    if g % 2 == 0 {
        nz.klein_block()?;
    }
    relabel(x, nz.arr, &nz.cur, false, SystemKind::Standard, nz.moves)
}

/// Shortest paths from a base vertex such that every non-contractible
/// closed walk meets one of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingPaths {
    pub base: usize,
    /// Vertex sequences, each starting at `base`.
    pub paths: Vec<Vec<usize>>,
    pub steps: Vec<Vec<Step>>,
    /// Edges of the shortest-path tree.
    pub tree: Vec<usize>,
    /// The edges closing the `g` loops; loop `i` is path `2i`, this edge, path `2i+1` reversed.
    pub leftover: Vec<usize>,
    pub dist: Vec<Weight>,
}

impl HittingPaths {
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.paths.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub fn hitting_paths(g: &SurfaceMap) -> HittingPaths {
    let m = g.num_edges();
    let units = unit_weights(g);
    let ends: Vec<(usize, usize)> = (0..m).map(|e| g.edge_ends(e)).collect();
    let dual: Vec<(usize, usize)> = (0..m).map(|e| g.edge_faces(e)).collect();
    let base = 0;
    let tc = tree_cotree(g.num_vertices(), base, &ends, &units, g.num_faces(), &dual);
    let path_to = |v: usize| -> (Vec<usize>, Vec<Step>) {
        let mut verts = vec![v];
        let mut steps = Vec::new();
        let mut at = v;
        while let Some((e, p)) = tc.parent[at] {
            steps.push(Step { edge: e, forward: ends[e].0 == p && ends[e].1 == at });
            verts.push(p);
            at = p;
        }
        verts.reverse();
        steps.reverse();
        (verts, steps)
    };
    let mut paths = Vec::new();
    let mut all_steps = Vec::new();
    for &e in &tc.leftover {
        for v in [ends[e].0, ends[e].1] {
            let (p, s) = path_to(v);
            paths.push(p);
            all_steps.push(s);
        }
    }
    let scale = Scale::for_weights(g.weights());
    let mut tree: Vec<usize> = tc.parent.iter().flatten().map(|&(e, _)| e).collect();
    tree.sort_unstable();
    HittingPaths {
        base,
        paths,
        steps: all_steps,
        tree,
        leftover: tc.leftover,
        dist: tc.dist.iter().map(|&d| scale.weight(d)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Sidedness::{OneSided, TwoSided};
    use crate::map::from_words;

    const FIXTURES: [&[&str]; 7] = [
        &["+1 +1"],
        &["+1 +1 +2 +2"],
        &["+1 +1 +2 +2 +3 +3"],
        &["+1 +2 -1 +2"],
        &["+1 +1 +2 +2 +3 +3 +4 +4"],
        &["+1 +2 -1 -2 +3 +3"],
        &["+1 +2 +3", "-3 +4 +1", "-4 -2 +5 +5"],
    ];

    #[test]
    fn shortest_loops_cut_to_a_disk() {
        for words in FIXTURES.iter().chain([&["+1 +2 -1 -2"][..], &["+1 -1"][..]].iter()) {
            let x = from_words(words).unwrap();
            let sys = shortest_loops(&x, 0).unwrap();
            assert_eq!(sys.genus(), x.euler_genus(), "{:?}", words);
            assert_eq!(sys.word.len(), 2 * sys.genus());
            sys.check_disk(&x).unwrap();
        }
    }

    #[test]
    fn standard_words_follow_the_template() {
        for words in FIXTURES {
            let x = from_words(words).unwrap();
            let g = x.euler_genus();
            let sys = standard_loops(&x).unwrap();
            let expect = match g {
                1 => "z z",
                2 => "y w -y w",
                3 => "z z a1 b1 -a1 -b1",
                4 => "y w -y w a1 b1 -a1 -b1",
                5 => "z z a1 b1 -a1 -b1 a2 b2 -a2 -b2",
                _ => unreachable!(),
            };
            assert_eq!(sys.word_string(), expect, "{:?}", words);
            sys.check_disk(&x).unwrap();
            let sides: Vec<Sidedness> = (0..g).map(|i| sys.sidedness(&x, i).unwrap()).collect();
            if g % 2 == 1 {
                assert_eq!(sides[0], OneSided);
                assert!(sides[1..].iter().all(|&s| s == TwoSided));
            } else {
                assert_eq!(sys.names[..2], ["w", "y"]);
                assert_eq!(sides[0], TwoSided);
                assert_eq!(sides[1], OneSided);
            }
        }
    }

    /// Simple curves from merged crossing patterns, classified by cutting
    /// and through the change of basis.
    #[test]
    fn change_of_basis_matches_cutting() {
        use crate::constructions::merge_to_simple_cycle;
        use crate::curve::classify_from_signature;
        use crate::z2::change_basis_matrix;
        for words in [&["+1 +1 +2 +2"][..], &["+1 +1 +2 +3 -2 -3"], &["+1 +2 -1 +2 +3 +4 -3 -4"]] {
            let m = from_words(words).unwrap();
            let g = m.euler_genus();
            let sys = standard_loops(&m.dual().map).unwrap();
            let phi = change_basis_matrix(g);
            let e = m.num_edges();
            let mut seen = 0;
            for code in 1..3usize.pow(e as u32) {
                let mu: Vec<usize> = (0..e).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                let Ok(c) = merge_to_simple_cycle(&m, &mu) else { continue };
                let truth = c.classify_by_cutting(&m).unwrap();
                let s = sys.signature_of_counts(&c.crossing_counts()).to_canonical(&phi).unwrap();
                assert_eq!(classify_from_signature(&s, g).unwrap(), truth, "{:?} mu {:?}", words, mu);
                seen += 1;
            }
            assert!(seen >= 3 * g, "{:?}", words);
        }
    }

    #[test]
    fn projective_plane_loop_is_the_core_curve() {
        let x = from_words(&["+1 +1"]).unwrap();
        let sys = standard_loops(&x).unwrap();
        assert_eq!(sys.moves, 0);
        assert_eq!(sys.loop_crossings(&x, 0).unwrap().len(), 1);
        assert_eq!(sys.parity[0].bits(), vec![1]);
    }

    #[test]
    fn orientable_canonical_words() {
        let t = from_words(&["+1 +2 -1 -2"]).unwrap();
        let sys = canonical_loops_orientable(&t, 0).unwrap();
        assert_eq!(sys.word_string(), "a1 b1 -a1 -b1");
        let d = from_words(&["+1 +2 -1 -3 +4 -2 +3 -4"]).unwrap();
        assert_eq!(d.euler_genus(), 4);
        let sys = canonical_loops_orientable(&d, 0).unwrap();
        assert_eq!(sys.word_string(), "a1 b1 -a1 -b1 a2 b2 -a2 -b2");
        sys.check_disk(&d).unwrap();
        let s = from_words(&["+1 -1"]).unwrap();
        assert!(canonical_loops_orientable(&s, 0).unwrap().word.is_empty());
        let k = from_words(&["+1 +1 +2 +2"]).unwrap();
        assert_eq!(canonical_loops_orientable(&k, 0).unwrap_err(), Error::NotOrientable);
        assert_eq!(standard_loops(&t).unwrap_err(), Error::SurfaceOrientable);
    }

    #[test]
    fn json_round_trip() {
        let x = from_words(&["+1 +1 +2 +2 +3 +3"]).unwrap();
        let sys = standard_loops(&x).unwrap();
        let back = LoopSystem::from_json(&x, &sys.to_json(&x).unwrap()).unwrap();
        assert_eq!(back.parity, sys.parity);
        assert_eq!(back.word, sys.word);
    }

    #[test]
    fn hitting_paths_on_small_maps() {
        let s = from_words(&["+1 -1"]).unwrap();
        assert!(hitting_paths(&s).paths.is_empty());
        let t = from_words(&["+1 +2 -1 -2"]).unwrap();
        let h = hitting_paths(&t);
        assert_eq!(h.paths.len(), 4);
        let mut cut: Vec<usize> = h.tree.clone();
        cut.extend(&h.leftover);
        assert!(cut_edges(&t, &cut).is_disk());
        let p = from_words(&["+1 +1"]).unwrap();
        let h = hitting_paths(&p);
        assert_eq!(h.paths, vec![vec![0], vec![0]]);
        assert_eq!(h.leftover, vec![0]);
    }
}

