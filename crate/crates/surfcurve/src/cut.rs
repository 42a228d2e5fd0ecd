//! Cutting a map along edges and capping boundaries.

use crate::error::{Error, Result};
use crate::flags::{Flags, NONE};
use crate::map::SurfaceMap;
use crate::overlay::{trace_curve, End, Overlay};

/// A map cut open along some edges. Flag ids are those of the uncut map.
#[derive(Clone, Debug)]
pub struct CutResult {
    pub flags: Flags,
    /// The `s[2]` pairs that were removed.
    pub removed: Vec<(u32, u32)>,
    pub components: usize,
    pub boundaries: Vec<Vec<u32>>,
    pub orientable: Vec<bool>,
    pub euler: Vec<i64>,
}

impl CutResult {
    pub fn reglue(&self) -> Flags {
        let mut f = self.flags.clone();
        for &(a, b) in &self.removed {
            f.s[2][a as usize] = b;
            f.s[2][b as usize] = a;
        }
        f
    }

    pub fn attach_disk(&self, boundary: usize) -> Result<Flags> {
        let b = self.boundaries.get(boundary).ok_or(Error::NoSuchBoundary(boundary))?;
        Ok(self.flags.attach_disk(b))
    }

    /// One component with Euler characteristic 1 and a single boundary.
    pub fn is_disk(&self) -> bool {
        self.components == 1 && self.euler == [1] && self.boundaries.len() == 1
    }
}

pub fn cut_edges(map: &SurfaceMap, edges: &[usize]) -> CutResult {
    let mut flags = map.flags().clone();
    let mut removed = Vec::new();
    for &e in edges {
        for o in map.edge_occs(e) {
            for t in 0..2u32 {
                let f = 2 * o as u32 + t;
                let g = flags.s[2][f as usize];
                if g != NONE {
                    if f < g {
                        removed.push((f, g));
                    }
                    flags.s[2][f as usize] = NONE;
                    flags.s[2][g as usize] = NONE;
                }
            }
        }
    }
    summarize(flags, removed)
}

pub(crate) fn summarize(flags: Flags, removed: Vec<(u32, u32)>) -> CutResult {
    let (_, components) = flags.components();
    let boundaries = flags.boundaries();
    let orientable = flags.orientable_components();
    let euler = flags.euler_chars();
    CutResult { flags, removed, components, boundaries, orientable, euler }
}

/// Cuts the overlay along one closed curve of its arrangement.
pub fn cut_along(ov: &Overlay, curve: usize) -> Result<CutResult> {
    let trace = trace_curve(&ov.arrangement, curve)?;
    for &(a, _) in &trace {
        let arc = &ov.arrangement.arcs[a];
        if matches!(arc.a, End::Hub(_)) || matches!(arc.b, End::Hub(_)) {
            return Err(Error::NotAClosedCurve("curve passes through a hub".into()));
        }
    }
    Ok(cut_edges(&ov.map, &ov.curve_edges(&[curve])))
}
