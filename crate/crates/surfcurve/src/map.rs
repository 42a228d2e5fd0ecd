//! Cellular maps given by polygon gluings.
//!
//! A map is a list of faces, each a cyclic word of edge sides. Every edge
//! occurs exactly twice. Vertices are derived by walking corners, and the
//! flag tables follow from the words.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flags::{Dsu, Flags};
use crate::weight::{check_positive, format_weight, parse_weight, Weight};

/// One occurrence of an edge on a face boundary; `rev` means the face
/// traverses the edge from head to tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Side {
    pub edge: usize,
    pub rev: bool,
}

impl Side {
    pub fn fwd(edge: usize) -> Side {
        Side { edge, rev: false }
    }

    pub fn bwd(edge: usize) -> Side {
        Side { edge, rev: true }
    }

    pub fn inv(self) -> Side {
        Side { edge: self.edge, rev: !self.rev }
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceMap {
    weights: Vec<Weight>,
    faces: Vec<Vec<Side>>,
    face_start: Vec<usize>,
    occ_face: Vec<usize>,
    occ_side: Vec<Side>,
    edge_occ: Vec<[usize; 2]>,
    flags: Flags,
    vertex_of_flag: Vec<u32>,
    num_vertices: usize,
    orientable: bool,
}

impl SurfaceMap {
    pub fn new(weights: Vec<Weight>, faces: Vec<Vec<Side>>) -> Result<SurfaceMap> {
        check_positive(&weights)?;
        let m = weights.len();
        let mut face_start = Vec::with_capacity(faces.len());
        let mut occ_face = Vec::new();
        let mut occ_side = Vec::new();
        let mut edge_occ = vec![[usize::MAX; 2]; m];
        let mut count = vec![0usize; m];
        for (fi, word) in faces.iter().enumerate() {
            face_start.push(occ_side.len());
            for &s in word {
                if s.edge >= m {
                    return Err(Error::Gluing { edge: s.edge, count: 1 });
                }
                if count[s.edge] < 2 {
                    edge_occ[s.edge][count[s.edge]] = occ_side.len();
                }
                count[s.edge] += 1;
                occ_face.push(fi);
                occ_side.push(s);
            }
        }
        if let Some(e) = count.iter().position(|&c| c != 2) {
            return Err(Error::Gluing { edge: e, count: count[e] });
        }
        if faces.is_empty() || faces.iter().any(|w| w.is_empty()) {
            return Err(Error::Parse { line: 0, msg: "empty face".into() });
        }
        let n_occ = occ_side.len();
        let n = 2 * n_occ;
        let mut s0 = vec![0u32; n];
        let mut s1 = vec![0u32; n];
        let mut s2 = vec![0u32; n];
        for o in 0..n_occ {
            s0[2 * o] = (2 * o + 1) as u32;
            s0[2 * o + 1] = (2 * o) as u32;
            let f = occ_face[o];
            let len = faces[f].len();
            let pos = o - face_start[f];
            let next = face_start[f] + (pos + 1) % len;
            s1[2 * o + 1] = (2 * next) as u32;
            s1[2 * next] = (2 * o + 1) as u32;
            let e = occ_side[o].edge;
            let other = if edge_occ[e][0] == o { edge_occ[e][1] } else { edge_occ[e][0] };
            let same = occ_side[o].rev == occ_side[other].rev;
            for t in 0..2 {
                let tt = if same { t } else { 1 - t };
                s2[2 * o + t] = (2 * other + tt) as u32;
            }
        }
        let flags = Flags { s: [s0, s1, s2] };
        let (_, comps) = flags.components();
        if comps != 1 {
            return Err(Error::Disconnected);
        }
        let (vertex_of_flag, num_vertices) = flags.vertices();
        let orientable = flags.orientable_components()[0];
        Ok(SurfaceMap {
            weights,
            faces,
            face_start,
            occ_face,
            occ_side,
            edge_occ,
            flags,
            vertex_of_flag,
            num_vertices,
            orientable,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.weights.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn size(&self) -> usize {
        self.num_vertices + self.num_edges() + self.num_faces()
    }

    pub fn euler_char(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn euler_genus(&self) -> usize {
        (2 - self.euler_char()) as usize
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, e: usize) -> Weight {
        self.weights[e]
    }

    pub fn faces(&self) -> &[Vec<Side>] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &[Side] {
        &self.faces[f]
    }

    pub fn flags(&self) -> &Flags {
        &self.flags
    }

    pub fn num_occurrences(&self) -> usize {
        self.occ_side.len()
    }

    /// Global id of the `pos`-th side of face `f`.
    pub fn occ(&self, f: usize, pos: usize) -> usize {
        self.face_start[f] + pos
    }

    pub fn occ_face(&self, o: usize) -> usize {
        self.occ_face[o]
    }

    pub fn occ_pos(&self, o: usize) -> usize {
        o - self.face_start[self.occ_face[o]]
    }

    pub fn occ_side(&self, o: usize) -> Side {
        self.occ_side[o]
    }

    /// The two occurrences of an edge; index 0 is its first appearance.
    pub fn edge_occs(&self, e: usize) -> [usize; 2] {
        self.edge_occ[e]
    }

    pub fn other_occ(&self, o: usize) -> usize {
        let [a, b] = self.edge_occ[self.occ_side[o].edge];
        if a == o {
            b
        } else {
            a
        }
    }

    pub fn next_occ(&self, o: usize) -> usize {
        let f = self.occ_face[o];
        self.face_start[f] + (self.occ_pos(o) + 1) % self.faces[f].len()
    }

    pub fn prev_occ(&self, o: usize) -> usize {
        let f = self.occ_face[o];
        let len = self.faces[f].len();
        self.face_start[f] + (self.occ_pos(o) + len - 1) % len
    }

    pub fn vertex_of_flag(&self, flag: u32) -> usize {
        self.vertex_of_flag[flag as usize] as usize
    }

    /// Vertex at the corner where occurrence `o` starts.
    pub fn start_vertex(&self, o: usize) -> usize {
        self.vertex_of_flag(2 * o as u32)
    }

    pub fn end_vertex(&self, o: usize) -> usize {
        self.vertex_of_flag(2 * o as u32 + 1)
    }

    /// (tail, head) of an edge.
    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        let o = self.edge_occ[e][0];
        let (a, b) = (self.start_vertex(o), self.end_vertex(o));
        if self.occ_side[o].rev {
            (b, a)
        } else {
            (a, b)
        }
    }

    /// Faces on the two sides of an edge, in `edge_occs` order.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let [a, b] = self.edge_occ[e];
        (self.occ_face[a], self.occ_face[b])
    }

    /// Number of edge ends at each vertex (loops count twice).
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for e in 0..self.num_edges() {
            let (a, b) = self.edge_ends(e);
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn dual(&self) -> DualMap {
        let fl = &self.flags;
        let n = fl.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::with_capacity(self.num_vertices);
        let mut vertex_to_face = vec![usize::MAX; self.num_vertices];
        let mut starts: Vec<(usize, u32)> = Vec::new();
        for start in 0..n as u32 {
            if seen[start as usize] {
                continue;
            }
            let v = self.vertex_of_flag(start);
            vertex_to_face[v] = faces.len();
            let mut word = Vec::new();
            let mut f = start;
            loop {
                let g = fl.s[2][f as usize];
                seen[f as usize] = true;
                seen[g as usize] = true;
                let o = (f / 2) as usize;
                let e = self.occ_side[o].edge;
                starts.push((faces.len(), f));
                word.push(Side { edge: e, rev: o != self.edge_occ[e][0] });
                f = fl.s[1][g as usize];
                if f == start {
                    break;
                }
            }
            faces.push(word);
        }
        let map = SurfaceMap::new(self.weights.clone(), faces).expect("dual of a valid map is valid");
        let mut face_to_vertex = vec![usize::MAX; self.num_faces()];
        let mut k = 0usize;
        for (df, word) in map.faces.iter().enumerate() {
            for pos in 0..word.len() {
                let (_, f) = starts[k];
                k += 1;
                let primal_face = self.occ_face[(f / 2) as usize];
                let dv = map.start_vertex(map.occ(df, pos));
                face_to_vertex[primal_face] = dv;
            }
        }
        DualMap { map, face_to_vertex, vertex_to_face }
    }

    /// Connected components of the edge subgraph induced by `keep`,
    /// counted only among vertices touched by kept edges.
    pub fn edge_subgraph_components(&self, keep: &[bool]) -> usize {
        let mut d = Dsu::new(self.num_vertices);
        let mut touched = vec![false; self.num_vertices];
        for e in 0..self.num_edges() {
            if keep[e] {
                let (a, b) = self.edge_ends(e);
                d.union(a as u32, b as u32);
                touched[a] = true;
                touched[b] = true;
            }
        }
        let mut roots: Vec<u32> = (0..self.num_vertices)
            .filter(|&v| touched[v])
            .map(|v| d.find(v as u32))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    pub fn to_srf(&self) -> String {
        srf_text(&self.weights, &self.faces)
    }
}

/// SRF text for a weight table and face words.
pub fn srf_text(weights: &[Weight], faces: &[Vec<Side>]) -> String {
    let mut s = String::from("srf 1\n");
    s.push_str(&format!("edges {}\n", weights.len()));
    for (e, w) in weights.iter().enumerate() {
        s.push_str(&format!("weight {} {}\n", e + 1, format_weight(w)));
    }
    for word in faces {
        s.push_str("face");
        for side in word {
            s.push_str(&format!(" {}{}", if side.rev { '-' } else { '+' }, side.edge + 1));
        }
        s.push('\n');
    }
    s
}

/// A dual map with its cell correspondences. Edges keep their ids.
#[derive(Clone, Debug)]
pub struct DualMap {
    pub map: SurfaceMap,
    pub face_to_vertex: Vec<usize>,
    pub vertex_to_face: Vec<usize>,
}

/// Parses the SRF text format.
pub fn load_surface(text: &str) -> Result<SurfaceMap> {
    let mut header = false;
    let mut m: Option<usize> = None;
    let mut weights: Vec<Option<Weight>> = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "srf" => {
                if toks.len() != 2 || toks[1] != "1" {
                    return Err(err("unsupported header"));
                }
                header = true;
            }
            _ if !header => return Err(err("missing `srf 1` header")),
            "edges" => {
                let k: usize = toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| err("bad edge count"))?;
                if toks.len() != 2 || m.is_some() {
                    return Err(err("bad edges line"));
                }
                m = Some(k);
                weights = vec![None; k];
            }
            "weight" => {
                let k = m.ok_or_else(|| err("weight before edges"))?;
                if toks.len() != 3 {
                    return Err(err("bad weight line"));
                }
                let id: usize = toks[1].parse().map_err(|_| err("bad edge id"))?;
                if id == 0 || id > k {
                    return Err(err("edge id out of range"));
                }
                let w = parse_weight(toks[2]).ok_or_else(|| err("bad weight"))?;
                if weights[id - 1].is_some() {
                    return Err(err("duplicate weight"));
                }
                weights[id - 1] = Some(w);
            }
            "face" => {
                let k = m.ok_or_else(|| err("face before edges"))?;
                let mut word = Vec::new();
                for t in &toks[1..] {
                    let (rev, body) = match t.as_bytes()[0] {
                        b'+' => (false, &t[1..]),
                        b'-' => (true, &t[1..]),
                        _ => (false, *t),
                    };
                    let id: usize = body.parse().map_err(|_| err("bad signed edge id"))?;
                    if id == 0 || id > k {
                        return Err(err("edge id out of range"));
                    }
                    word.push(Side { edge: id - 1, rev });
                }
                if word.is_empty() {
                    return Err(err("empty face"));
                }
                faces.push(word);
            }
            _ => return Err(err("unknown keyword")),
        }
    }
    let m = m.ok_or(Error::Parse { line: 0, msg: "missing edges line".into() })?;
    let weights: Vec<Weight> = weights
        .into_iter()
        .enumerate()
        .map(|(e, w)| w.ok_or(Error::Parse { line: 0, msg: format!("missing weight for edge {}", e + 1) }))
        .collect::<Result<_>>()?;
    if faces.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no faces".into() });
    }
    debug_assert_eq!(weights.len(), m);
    SurfaceMap::new(weights, faces)
}

/// Builds a map from compact face strings such as `"+1 +1 +2 +2"` with
/// unit weights. Intended for fixtures.
pub fn from_words(words: &[&str]) -> Result<SurfaceMap> {
    let mut faces = Vec::new();
    let mut m = 0;
    for w in words {
        let mut word = Vec::new();
        for t in w.split_whitespace() {
            let rev = t.starts_with('-');
            let id: usize = t.trim_start_matches(['+', '-']).parse().map_err(|_| Error::Parse { line: 0, msg: t.to_string() })?;
            m = m.max(id);
            word.push(Side { edge: id - 1, rev });
        }
        faces.push(word);
    }
    SurfaceMap::new(vec![Weight::from_integer(1); m], faces)
}
