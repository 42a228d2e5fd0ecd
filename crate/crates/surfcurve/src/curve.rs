//! Closed walks, curves on cross-metric surfaces, signatures and classes.

use serde::{Deserialize, Serialize};

use crate::cut::cut_along;
use crate::error::{Error, Result};
use crate::map::SurfaceMap;
use crate::overlay::{trace_curve, Arrangement, End, Overlay};
use crate::weight::Weight;
use crate::z2::{Z2Matrix, Z2Vec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// A closed walk in the graph of a map, starting and ending at `start`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedWalk {
    pub start: usize,
    pub steps: Vec<Step>,
}

impl ClosedWalk {
    pub fn trivial(v: usize) -> ClosedWalk {
        ClosedWalk { start: v, steps: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.steps.is_empty()
    }

    /// Vertex sequence, including the return to `start`.
    pub fn vertices(&self, g: &SurfaceMap) -> Result<Vec<usize>> {
        let mut at = self.start;
        let mut out = vec![at];
        for s in &self.steps {
            if s.edge >= g.num_edges() {
                return Err(Error::SurfaceMismatch(format!("edge {} out of range", s.edge)));
            }
            let (t, h) = g.edge_ends(s.edge);
            let (from, to) = if s.forward { (t, h) } else { (h, t) };
            if from != at {
                return Err(Error::Invariant(format!("walk breaks before edge {}", s.edge)));
            }
            at = to;
            out.push(at);
        }
        if at != self.start {
            return Err(Error::Invariant("walk is not closed".into()));
        }
        Ok(out)
    }

    pub fn validate(&self, g: &SurfaceMap) -> Result<()> {
        self.vertices(g).map(|_| ())
    }

    pub fn length(&self, g: &SurfaceMap) -> Weight {
        self.steps.iter().map(|s| g.weight(s.edge)).sum()
    }

    pub fn edge_counts(&self, num_edges: usize) -> Vec<usize> {
        let mut c = vec![0; num_edges];
        for s in &self.steps {
            c[s.edge] += 1;
        }
        c
    }

    pub fn reversed(&self) -> ClosedWalk {
        ClosedWalk {
            start: self.start,
            steps: self.steps.iter().rev().map(|s| Step { edge: s.edge, forward: !s.forward }).collect(),
        }
    }

    /// The same cyclic walk started after its first `k` steps.
    pub fn rotated(&self, g: &SurfaceMap, k: usize) -> Result<ClosedWalk> {
        if self.steps.is_empty() {
            return Ok(self.clone());
        }
        let vs = self.vertices(g)?;
        let k = k % self.steps.len();
        let mut steps = self.steps[k..].to_vec();
        steps.extend_from_slice(&self.steps[..k]);
        Ok(ClosedWalk { start: vs[k], steps })
    }

    pub fn concat(&self, other: &ClosedWalk) -> ClosedWalk {
        assert_eq!(self.start, other.start);
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        ClosedWalk { start: self.start, steps }
    }
}

/// Multiplicities for rebuilding a simple curve from a walk: 0 if unused,
/// 1 if used an odd number of times, 2 if used a positive even number.
pub fn mu_from_walk(walk: &ClosedWalk, num_edges: usize) -> Vec<u8> {
    walk.edge_counts(num_edges).iter().map(|&c| if c == 0 { 0 } else if c % 2 == 1 { 1 } else { 2 }).collect()
}

/// XOR of per-edge parity columns, one per traversal or crossing.
pub fn signature_of_counts(counts: &[usize], table: &[Z2Vec], dim: usize) -> Z2Vec {
    let mut s = Z2Vec::zeros(dim);
    for (e, &c) in counts.iter().enumerate() {
        if c % 2 == 1 {
            s.add_assign(&table[e]);
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    Shortest,
    Canonical,
    Standard,
    Arbitrary,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignatureVector {
    pub kind: SystemKind,
    pub bits: Z2Vec,
}

impl SignatureVector {
    /// Re-expresses a standard-system signature against the canonical system.
    pub fn to_canonical(&self, phi: &Z2Matrix) -> Result<SignatureVector> {
        if self.kind != SystemKind::Standard {
            return Err(Error::NotCanonical);
        }
        Ok(SignatureVector { kind: SystemKind::Canonical, bits: phi.apply(&self.bits)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveClass {
    Separating,
    NonsepOrienting(Sidedness),
    NonsepNonorienting(Sidedness),
}

impl CurveClass {
    pub fn sidedness(&self) -> Sidedness {
        match *self {
            CurveClass::Separating => Sidedness::TwoSided,
            CurveClass::NonsepOrienting(s) | CurveClass::NonsepNonorienting(s) => s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CurveClass::Separating => "separating",
            CurveClass::NonsepOrienting(_) => "nonseparating-orienting",
            CurveClass::NonsepNonorienting(_) => "nonseparating-nonorienting",
        }
    }

    pub fn sided_name(&self) -> &'static str {
        match self.sidedness() {
            Sidedness::OneSided => "one-sided",
            Sidedness::TwoSided => "two-sided",
        }
    }
}

/// Class of a simple curve from its signature against a canonical
/// crosscap system.
pub fn classify_from_signature(s: &SignatureVector, g: usize) -> Result<CurveClass> {
    if s.kind != SystemKind::Canonical {
        return Err(Error::NotCanonical);
    }
    if s.bits.dim() != g {
        return Err(Error::DimensionMismatch(format!("signature of length {} for genus {}", s.bits.dim(), g)));
    }
    let ones = s.bits.count_ones();
    let sided = if ones % 2 == 1 { Sidedness::OneSided } else { Sidedness::TwoSided };
    Ok(if ones == 0 {
        CurveClass::Separating
    } else if ones == g {
        CurveClass::NonsepOrienting(sided)
    } else {
        CurveClass::NonsepNonorienting(sided)
    })
}

/// One crossing: the metric edge crossed and the face entered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub edge: usize,
    pub face: usize,
}

/// A closed curve drawn on a cross-metric surface: curve 0 of an
/// arrangement, or a contractible circle inside one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCurve {
    pub arrangement: Arrangement,
    pub trivial_face: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    crossings: Vec<Crossing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trivial_face: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    drawing: Option<Arrangement>,
}

impl CrossCurve {
    pub fn trivial(num_edges: usize, face: usize) -> CrossCurve {
        CrossCurve { arrangement: Arrangement::empty(num_edges), trivial_face: Some(face) }
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial_face.is_some()
    }

    pub fn crossing_counts(&self) -> Vec<usize> {
        self.arrangement.edge_points.iter().map(|p| p.len()).collect()
    }

    pub fn length(&self, m: &SurfaceMap) -> Weight {
        self.crossing_counts().iter().enumerate().map(|(e, &c)| m.weight(e) * c as i64).sum()
    }

    pub fn multiplicity(&self) -> usize {
        self.crossing_counts().into_iter().max().unwrap_or(0)
    }

    /// Cyclic crossing sequence.
    pub fn crossings(&self, m: &SurfaceMap) -> Result<Vec<Crossing>> {
        if self.is_trivial() {
            return Ok(Vec::new());
        }
        let trace = trace_curve(&self.arrangement, 0)?;
        let mut out = Vec::with_capacity(trace.len());
        for (a, fwd) in trace {
            let arc = &self.arrangement.arcs[a];
            match if fwd { arc.b } else { arc.a } {
                End::Point { point, side } => {
                    let edge = self.arrangement.point_edge[point];
                    let face = m.occ_face(m.edge_occs(edge)[1 - side as usize]);
                    out.push(Crossing { edge, face });
                }
                End::Hub(_) => return Err(Error::NotAClosedCurve("curve passes through a hub".into())),
            }
        }
        Ok(out)
    }

    pub fn overlay(&self, m: &SurfaceMap) -> Result<Overlay> {
        Overlay::build(m, &self.arrangement)
    }

    /// Drawn without self-crossings as a single closed curve.
    pub fn is_simple(&self, m: &SurfaceMap) -> bool {
        if self.is_trivial() {
            return true;
        }
        let ids = self.arrangement.curve_ids();
        ids == [0] && self.arrangement.hubs.is_empty() && self.overlay(m).is_ok() && trace_curve(&self.arrangement, 0).is_ok()
    }

    pub fn classify_by_cutting(&self, m: &SurfaceMap) -> Result<CurveClass> {
        if self.is_trivial() {
            return Ok(CurveClass::Separating);
        }
        if !self.is_simple(m) {
            return Err(Error::NotSimple);
        }
        let ov = self.overlay(m)?;
        let cut = cut_along(&ov, 0)?;
        let sided = match cut.boundaries.len() {
            1 => Sidedness::OneSided,
            2 => Sidedness::TwoSided,
            n => return Err(Error::Invariant(format!("cut along a simple curve left {} boundaries", n))),
        };
        Ok(match cut.components {
            2 => CurveClass::Separating,
            1 if !m.is_orientable() && cut.orientable[0] => CurveClass::NonsepOrienting(sided),
            1 => CurveClass::NonsepNonorienting(sided),
            n => return Err(Error::Invariant(format!("cut along a simple curve left {} components", n))),
        })
    }

    pub fn signature(&self, table: &[Z2Vec], kind: SystemKind, dim: usize) -> SignatureVector {
        SignatureVector { kind, bits: signature_of_counts(&self.crossing_counts(), table, dim) }
    }

    /// JSON with the crossing sequence (edge ids as in SRF files) and the drawing.
    pub fn to_json(&self, m: &SurfaceMap) -> Result<String> {
        let crossings = self
            .crossings(m)?
            .into_iter()
            .map(|c| Crossing { edge: c.edge + 1, face: c.face })
            .collect();
        let j = CurveJson {
            crossings,
            trivial_face: self.trivial_face,
            drawing: if self.is_trivial() { None } else { Some(self.arrangement.clone()) },
        };
        Ok(serde_json::to_string_pretty(&j).expect("serializable"))
    }

    /// Reads a curve. Without a drawing, crossing points are placed along
    /// each edge in order of appearance and joined inside faces.
    pub fn from_json(m: &SurfaceMap, text: &str) -> Result<CrossCurve> {
        let j: CurveJson =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        if let Some(f) = j.trivial_face {
            if f >= m.num_faces() {
                return Err(Error::SurfaceMismatch("trivial face out of range".into()));
            }
            return Ok(CrossCurve::trivial(m.num_edges(), f));
        }
        if let Some(d) = j.drawing {
            check_drawing(m, &d)?;
            let c = CrossCurve { arrangement: d, trivial_face: None };
            c.overlay(m)?;
            c.crossings(m)?;
            return Ok(c);
        }
        let seq: Vec<Crossing> = j
            .crossings
            .iter()
            .map(|c| {
                if c.edge == 0 || c.edge > m.num_edges() || c.face >= m.num_faces() {
                    Err(Error::SurfaceMismatch("crossing out of range".into()))
                } else {
                    Ok(Crossing { edge: c.edge - 1, face: c.face })
                }
            })
            .collect::<Result<_>>()?;
        realize_crossings(m, &seq)
    }
}

/// Index checks on a drawing read from a file.
fn check_drawing(m: &SurfaceMap, d: &Arrangement) -> Result<()> {
    let bad = |msg: &str| Err(Error::SurfaceMismatch(msg.into()));
    if d.edge_points.len() != m.num_edges() {
        return bad("drawing has a different edge count");
    }
    let mut seen = vec![false; d.point_edge.len()];
    for (e, pts) in d.edge_points.iter().enumerate() {
        for &p in pts {
            if p >= seen.len() || seen[p] || d.point_edge[p] != e {
                return bad("crossing points disagree with their edges");
            }
            seen[p] = true;
        }
    }
    if seen.contains(&false) || !d.hubs.is_empty() {
        return bad("drawing has stray points or hubs");
    }
    for arc in &d.arcs {
        if arc.face >= m.num_faces() || arc.curve != 0 {
            return bad("arc out of range");
        }
        for end in [arc.a, arc.b] {
            let End::Point { point, side } = end else {
                return bad("arc ends at a hub");
            };
            if point >= seen.len() || side > 1 || m.occ_face(m.edge_occs(d.point_edge[point])[side as usize]) != arc.face {
                return bad("arc end is not on its face");
            }
        }
    }
    Ok(())
}

/// Naive drawing of a crossing sequence.
pub fn realize_crossings(m: &SurfaceMap, seq: &[Crossing]) -> Result<CrossCurve> {
    if seq.is_empty() {
        return Ok(CrossCurve::trivial(m.num_edges(), 0));
    }
    let mut arr = Arrangement::empty(m.num_edges());
    let n = seq.len();
    let mut entry_side = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for c in seq {
        let [o0, o1] = m.edge_occs(c.edge);
        let side = if m.occ_face(o1) == c.face {
            1u8
        } else if m.occ_face(o0) == c.face {
            0u8
        } else {
            return Err(Error::NotAClosedCurve(format!("edge {} does not bound face {}", c.edge + 1, c.face)));
        };
        let pos = arr.crossings(c.edge);
        points.push(arr.add_point(c.edge, pos));
        entry_side.push(side);
    }
    for i in 0..n {
        let j = (i + 1) % n;
        let face = seq[i].face;
        let exit_side = 1 - entry_side[j];
        let exit_face = m.occ_face(m.edge_occs(seq[j].edge)[exit_side as usize]);
        if exit_face != face {
            return Err(Error::NotAClosedCurve(format!("crossing {} leaves face {} through a foreign edge", j, face)));
        }
        arr.add_arc(
            face,
            End::Point { point: points[i], side: entry_side[i] },
            End::Point { point: points[j], side: exit_side },
            0,
        );
    }
    Ok(CrossCurve { arrangement: arr, trivial_face: None })
}
