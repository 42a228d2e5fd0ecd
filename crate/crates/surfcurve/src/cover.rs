//! Subhomology covers: `2^k` sheets glued along edge voltages in `Z2^k`.
//!
//! Vertex `(v, nu)` of the cover has global id `v * 2^k + nu`, and the copy
//! of edge `e` leaving sheet `nu` at its tail has global id `e * 2^k + nu`.
//! It ends at `(head, nu + alpha(e))`.

use serde::Serialize;

use crate::curve::{ClosedWalk, Step};
use crate::error::{Error, Result};
use crate::flags::Dsu;
use crate::loops::LoopSystem;
use crate::map::{srf_text, Side, SurfaceMap};
use crate::z2::{RhoMap, Z2Vec};

/// Per-edge voltages satisfying the Kirchhoff law on every face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    pub k: usize,
    pub alpha: Vec<Z2Vec>,
}

impl EdgeLabeling {
    pub fn new(g: &SurfaceMap, k: usize, alpha: Vec<Z2Vec>) -> Result<EdgeLabeling> {
        if alpha.len() != g.num_edges() {
            return Err(Error::DimensionMismatch(format!("{} labels for {} edges", alpha.len(), g.num_edges())));
        }
        if alpha.iter().any(|a| a.dim() != k) {
            return Err(Error::DimensionMismatch("label dimension differs from k".into()));
        }
        if k > 20 {
            return Err(Error::DimensionMismatch(format!("k = {} is too large to materialise", k)));
        }
        let l = EdgeLabeling { k, alpha };
        l.check_kirchhoff(g)?;
        Ok(l)
    }

    pub fn zero(g: &SurfaceMap, k: usize) -> EdgeLabeling {
        EdgeLabeling { k, alpha: vec![Z2Vec::zeros(k); g.num_edges()] }
    }

    pub fn check_kirchhoff(&self, g: &SurfaceMap) -> Result<()> {
        for (f, word) in g.faces().iter().enumerate() {
            let mut s = Z2Vec::zeros(self.k);
            for side in word {
                s.add_assign(&self.alpha[side.edge]);
            }
            if !s.is_zero() {
                return Err(Error::KirchhoffViolation(f));
            }
        }
        Ok(())
    }

    pub fn bits(&self) -> Vec<u64> {
        self.alpha.iter().map(Z2Vec::to_u64).collect()
    }
}

/// `alpha(e) = rho(sigma(e, L))` for a system of loops drawn across `g`.
pub fn labeling_from_loops(g: &SurfaceMap, loops: &LoopSystem, rho: &RhoMap) -> Result<EdgeLabeling> {
    if loops.parity.len() != g.num_edges() {
        return Err(Error::SurfaceMismatch("parity table does not match the map".into()));
    }
    let alpha = loops.parity.iter().map(|p| rho.matrix.apply(p)).collect::<Result<Vec<_>>>()?;
    EdgeLabeling::new(g, rho.k(), alpha)
}

/// One connected component of a cover, as a map with local ids.
#[derive(Clone, Debug)]
pub struct CoverComponent {
    pub map: SurfaceMap,
    /// Global edge id of each local edge.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SubhomologyCover {
    pub k: usize,
    pub base_vertices: usize,
    /// Voltage of each base edge as bits.
    pub alpha: Vec<u64>,
    /// Global edge id -> base edge.
    pub edge_base: Vec<usize>,
    /// Global edge id -> (tail, head) global vertex ids.
    pub edge_ends: Vec<(usize, usize)>,
    /// Lifted faces over global edge ids.
    pub faces: Vec<Vec<Side>>,
    /// Component id of each global vertex.
    pub vertex_component: Vec<usize>,
    pub components: Vec<CoverComponent>,
}

#[derive(Serialize)]
struct SheetLabel {
    vertex: usize,
    base_vertex: usize,
    sheet: Vec<u8>,
    component: usize,
}

impl SubhomologyCover {
    pub fn sheets(&self) -> usize {
        1 << self.k
    }

    pub fn vertex(&self, v: usize, nu: u64) -> usize {
        (v << self.k) | nu as usize
    }

    /// `(base vertex, sheet)` of a global vertex id.
    pub fn label(&self, x: usize) -> (usize, u64) {
        (x >> self.k, (x & (self.sheets() - 1)) as u64)
    }

    pub fn num_vertices(&self) -> usize {
        self.base_vertices << self.k
    }

    pub fn num_edges(&self) -> usize {
        self.edge_base.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_char(&self) -> i64 {
        self.components.iter().map(|c| c.map.euler_char()).sum()
    }

    pub fn is_orientable(&self) -> bool {
        self.components.iter().all(|c| c.map.is_orientable())
    }

    /// All faces as an SRF document over global edge ids (1-based).
    pub fn to_srf(&self, base: &SurfaceMap) -> String {
        let weights: Vec<_> = self.edge_base.iter().map(|&e| base.weight(e)).collect();
        srf_text(&weights, &self.faces)
    }

    pub fn labels_json(&self) -> String {
        let labels: Vec<SheetLabel> = (0..self.num_vertices())
            .map(|x| {
                let (v, nu) = self.label(x);
                SheetLabel {
                    vertex: x,
                    base_vertex: v,
                    sheet: Z2Vec::from_u64(self.k, nu).bits(),
                    component: self.vertex_component[x],
                }
            })
            .collect();
        serde_json::to_string_pretty(&labels).expect("serializable")
    }
}

/// Builds the `2^k`-sheeted cover of `g` defined by `alpha`.
pub fn build_cover(g: &SurfaceMap, alpha: &EdgeLabeling) -> Result<SubhomologyCover> {
    alpha.check_kirchhoff(g)?;
    let k = alpha.k;
    let sheets = 1usize << k;
    let bits = alpha.bits();
    let m = g.num_edges();
    let mut edge_base = Vec::with_capacity(m * sheets);
    let mut edge_ends = Vec::with_capacity(m * sheets);
    for (e, &a) in bits.iter().enumerate() {
        let (t, h) = g.edge_ends(e);
        for nu in 0..sheets as u64 {
            edge_base.push(e);
            edge_ends.push(((t << k) | nu as usize, (h << k) | (nu ^ a) as usize));
        }
    }
    let mut faces = Vec::with_capacity(g.num_faces() * sheets);
    for word in g.faces() {
        for nu0 in 0..sheets as u64 {
            let mut nu = nu0;
            let mut lifted = Vec::with_capacity(word.len());
            for side in word {
                let a = bits[side.edge];
                let tail_sheet = if side.rev { nu ^ a } else { nu };
                lifted.push(Side { edge: side.edge * sheets + tail_sheet as usize, rev: side.rev });
                nu ^= a;
            }
            debug_assert_eq!(nu, nu0);
            faces.push(lifted);
        }
    }

    let nv = g.num_vertices() << k;
    let mut dsu = Dsu::new(nv);
    for &(a, b) in &edge_ends {
        dsu.union(a as u32, b as u32);
    }
    let (roots, count) = dsu.labels();
    let vertex_component: Vec<usize> = roots.iter().map(|&r| r as usize).collect();
    let mut comp_faces: Vec<Vec<Vec<Side>>> = vec![Vec::new(); count];
    let mut comp_edges: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut local = vec![usize::MAX; edge_base.len()];
    for (ce, &(a, _)) in edge_ends.iter().enumerate() {
        let c = vertex_component[a];
        local[ce] = comp_edges[c].len();
        comp_edges[c].push(ce);
    }
    for f in &faces {
        let c = vertex_component[edge_ends[f[0].edge].0];
        comp_faces[c].push(f.iter().map(|s| Side { edge: local[s.edge], rev: s.rev }).collect());
    }
    let mut components = Vec::with_capacity(count);
    for (edges, fs) in comp_edges.into_iter().zip(comp_faces) {
        let weights = edges.iter().map(|&ce| g.weight(edge_base[ce])).collect();
        let map = SurfaceMap::new(weights, fs)?;
        components.push(CoverComponent { map, edges });
    }
    let cover = SubhomologyCover { k, base_vertices: g.num_vertices(), alpha: bits, edge_base, edge_ends, faces, vertex_component, components };
    let cv: usize = cover.components.iter().map(|c| c.map.num_vertices()).sum();
    if cv != cover.num_vertices() {
        return Err(Error::Invariant(format!("cover has {} vertices, expected {}", cv, cover.num_vertices())));
    }
    if cover.euler_char() != (g.euler_char() << k) {
        return Err(Error::Invariant("cover Euler characteristic is not 2^k times the base".into()));
    }
    Ok(cover)
}

/// A path in the cover: global vertex ids and global edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// Direction of each step; a lifted loop edge does not tell by its ends.
    pub forward: Vec<bool>,
}

impl CoverPath {
    pub fn project(&self, cov: &SubhomologyCover) -> Vec<Step> {
        self.edges.iter().zip(&self.forward).map(|(&ce, &forward)| Step { edge: cov.edge_base[ce], forward }).collect()
    }
}

/// The lift of `c` starting on sheet `nu0`.
pub fn lift_walk(g: &SurfaceMap, cov: &SubhomologyCover, c: &ClosedWalk, nu0: u64) -> Result<CoverPath> {
    let verts = c.vertices(g)?;
    let sheets = cov.sheets();
    let mut at = cov.vertex(c.start, nu0);
    let mut vertices = vec![at];
    let mut edges = Vec::with_capacity(c.steps.len());
    for (s, &v) in c.steps.iter().zip(&verts[1..]) {
        let nu = cov.label(at).1;
        let ce = if s.forward {
            s.edge * sheets + nu as usize
        } else {
            s.edge * sheets + (nu ^ cov.alpha[s.edge]) as usize
        };
        let (t, h) = cov.edge_ends[ce];
        at = if s.forward { h } else { t };
        debug_assert_eq!(cov.label(at).0, v);
        edges.push(ce);
        vertices.push(at);
    }
    let forward = c.steps.iter().map(|s| s.forward).collect();
    Ok(CoverPath { vertices, edges, forward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::standard_loops;
    use crate::map::from_words;
    use crate::z2::Z2Matrix;

    fn ones(g: &SurfaceMap, k: usize, on: &[usize]) -> EdgeLabeling {
        let mut alpha = vec![Z2Vec::zeros(k); g.num_edges()];
        for &e in on {
            alpha[e] = Z2Vec::ones(k);
        }
        EdgeLabeling::new(g, k, alpha).unwrap()
    }

    #[test]
    fn projective_plane_double_cover_is_a_sphere() {
        let g = from_words(&["+1 +1"]).unwrap();
        let cov = build_cover(&g, &ones(&g, 1, &[0])).unwrap();
        assert_eq!(cov.euler_char(), 2);
        assert_eq!(cov.components.len(), 1);
        assert!(cov.is_orientable());
        assert_eq!((cov.num_vertices(), cov.num_edges(), cov.num_faces()), (2, 2, 2));
    }

    #[test]
    fn zero_labels_give_disjoint_copies() {
        let g = from_words(&["+1 +1 +2 +2"]).unwrap();
        let cov = build_cover(&g, &EdgeLabeling::zero(&g, 2)).unwrap();
        assert_eq!(cov.components.len(), 4);
        assert_eq!(cov.euler_char(), 0);
        let k0 = build_cover(&g, &EdgeLabeling::zero(&g, 0)).unwrap();
        assert_eq!(k0.num_edges(), g.num_edges());
        assert_eq!(k0.components[0].map.num_faces(), 1);
    }

    #[test]
    fn kirchhoff_violation_is_reported() {
        let g = from_words(&["+1 +2", "-2 -1"]).unwrap();
        let alpha = vec![Z2Vec::ones(1), Z2Vec::zeros(1)];
        assert_eq!(EdgeLabeling::new(&g, 1, alpha), Err(Error::KirchhoffViolation(0)));
    }

    #[test]
    fn lifts_end_on_the_predicted_sheet() {
        let g = from_words(&["+1 +1"]).unwrap();
        let cov = build_cover(&g, &ones(&g, 1, &[0])).unwrap();
        let w = ClosedWalk { start: 0, steps: vec![Step { edge: 0, forward: true }] };
        let lift = lift_walk(&g, &cov, &w, 0).unwrap();
        assert_eq!(cov.label(*lift.vertices.last().unwrap()), (0, 1));
        assert_eq!(lift.project(&cov), w.steps);
        let twice = w.concat(&w);
        let lift = lift_walk(&g, &cov, &twice, 1).unwrap();
        assert_eq!(cov.label(*lift.vertices.last().unwrap()), (0, 1));
        let back = lift_walk(&g, &cov, &w.reversed(), 0).unwrap();
        assert_eq!(cov.label(*back.vertices.last().unwrap()).1, 1);
    }

    #[test]
    fn labels_from_standard_loops() {
        let g = from_words(&["+1 +2 -1 +2 +3 +3"]).unwrap();
        let sys = standard_loops(&g).unwrap();
        let rho = RhoMap::new(Z2Matrix::identity(3), vec![Z2Vec::ones(3)]).unwrap();
        let l = labeling_from_loops(&g, &sys, &rho).unwrap();
        let cov = build_cover(&g, &l).unwrap();
        assert_eq!(cov.euler_char(), 8 * g.euler_char());
        assert_eq!(cov.num_faces(), 8 * g.num_faces());
    }
}
