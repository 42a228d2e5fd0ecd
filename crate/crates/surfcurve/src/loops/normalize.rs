//! Realising cut-and-paste moves on drawn loops, and the normalisation
//! sequences built from them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::schema::{
    align, cut_paste, expand, grouped_symbols, invert, occurrences, parse_units, rotate, tok_corner, Letter, Sym, Tok,
    Unit,
};
use super::tree::unit_weights;
use crate::cut::cut_edges;
use crate::error::{Error, Result};
use crate::map::SurfaceMap;
use crate::overlay::{trace_curve, Arrangement, EdgeOrigin, End, Overlay};

/// A face corner at the hub, where a new arc end can be inserted.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Corner {
    slot: usize,
    face: usize,
}

pub(crate) struct DiskReading {
    pub overlay: Overlay,
    pub word: Vec<Letter>,
    corners: Vec<Corner>,
}

fn invariant(msg: &str) -> Error {
    Error::Invariant(msg.to_string())
}

/// Cuts along all loops of `arr` (based at hub 0) and reads the boundary
/// of the resulting disk. Letter symbols are curve ids, and a letter is
/// inverted when the boundary runs against the traced loop direction.
pub(crate) fn read_disk(x: &SurfaceMap, arr: &Arrangement) -> Result<DiskReading> {
    let ov = Overlay::build(x, arr)?;
    let ids = arr.curve_ids();
    if ids.is_empty() {
        return Ok(DiskReading { overlay: ov, word: Vec::new(), corners: Vec::new() });
    }
    let mut dir = vec![false; arr.arcs.len()];
    for &c in &ids {
        for (a, d) in trace_curve(arr, c)? {
            dir[a] = d;
        }
    }
    let cut = cut_edges(&ov.map, &ov.curve_edges(&ids));
    if !cut.is_disk() {
        return Err(invariant("loops do not cut the surface into a disk"));
    }
    let (a0, arc0) = arr
        .arcs
        .iter()
        .enumerate()
        .find(|(_, a)| matches!(a.a, End::Hub(_)) || matches!(a.b, End::Hub(_)))
        .ok_or_else(|| invariant("loops without a hub"))?;
    let (t, h) = ov.map.edge_ends(ov.arc_edge(a0));
    let hub_v = if matches!(arc0.a, End::Hub(_)) { t } else { h };

    let fl = &cut.flags;
    let start = *cut.boundaries[0]
        .iter()
        .find(|&&f| ov.map.vertex_of_flag(f) == hub_v)
        .ok_or_else(|| invariant("hub not on the disk boundary"))?;
    let mut word = Vec::new();
    let mut corner_after = Vec::new();
    let mut run: Option<Letter> = None;
    let mut f = start;
    loop {
        let o = (f / 2) as usize;
        let side = ov.map.occ_side(o);
        let EdgeOrigin::Arc(a) = ov.edge_origin[side.edge] else {
            return Err(invariant("disk boundary runs along a metric edge"));
        };
        let along_arc = (f % 2 == 0) != side.rev;
        let letter = Letter::new(arr.arcs[a].curve, along_arc != dir[a]);
        match run {
            None => run = Some(letter),
            Some(l) if l == letter => {}
            Some(_) => return Err(invariant("a loop changes direction between hub visits")),
        }
        let g = fl.s[0][f as usize];
        if ov.map.vertex_of_flag(g) == hub_v {
            word.push(run.take().expect("run"));
            let g1 = fl.s[1][g as usize];
            let end_flag = if g % 2 == 1 { g } else { g1 };
            let occ = (end_flag / 2) as usize;
            let (_, slot) = ov.hub_slot(occ).ok_or_else(|| invariant("hub corner without a slot"))?;
            corner_after.push(Corner { slot, face: ov.map.occ_face(occ) });
        }
        f = fl.rotate_to_boundary(g);
        if f == start {
            break;
        }
    }
    if run.is_some() {
        return Err(invariant("disk boundary does not start at the hub"));
    }
    let n = word.len();
    let corners = (0..n).map(|c| corner_after[(c + n - 1) % n]).collect();
    Ok(DiskReading { overlay: ov, word, corners })
}

/// Draws a new loop `delta` from hub corner `ci` to hub corner `cj` along
/// a shortest route through the faces of the overlay, then erases loop `gone`.
fn redraw(x: &SurfaceMap, arr: &mut Arrangement, ov: &Overlay, ci: Corner, cj: Corner, gone: usize, delta: usize) -> Result<()> {
    if ci.slot == cj.slot {
        return Err(invariant("diagonal between equal corners"));
    }
    let units = unit_weights(x);
    let nf = ov.map.num_faces();
    let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nf];
    for e in 0..ov.map.num_edges() {
        if let EdgeOrigin::Piece { .. } = ov.edge_origin[e] {
            let [o0, o1] = ov.map.edge_occs(e);
            let (f0, f1) = (ov.map.occ_face(o0), ov.map.occ_face(o1));
            if f0 != f1 {
                adj[f0].push((e, o0, o1));
                adj[f1].push((e, o1, o0));
            }
        }
    }
    let mut dist = vec![u64::MAX; nf];
    let mut pred: Vec<Option<(usize, usize, usize)>> = vec![None; nf];
    let mut heap = BinaryHeap::new();
    dist[ci.face] = 0;
    heap.push(Reverse((0u64, ci.face)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == cj.face {
            break;
        }
        for &(e, o_from, o_to) in &adj[u] {
            let EdgeOrigin::Piece { edge, .. } = ov.edge_origin[e] else { unreachable!() };
            let v = ov.map.occ_face(o_to);
            let nd = d + units[edge];
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some((e, o_from, o_to));
                heap.push(Reverse((nd, v)));
            }
        }
    }
    if dist[cj.face] == u64::MAX {
        return Err(invariant("hub corners in different components"));
    }
    let mut steps = Vec::new();
    let mut at = cj.face;
    while at != ci.face {
        let (e, o_from, o_to) = pred[at].expect("path");
        steps.push((e, o_from, o_to));
        at = ov.map.occ_face(o_from);
    }
    steps.reverse();

    // New crossing points, inserted from the head end so positions stay valid.
    let mut order: Vec<usize> = (0..steps.len()).collect();
    let piece = |k: usize| match ov.edge_origin[steps[k].0] {
        EdgeOrigin::Piece { edge, t } => (edge, t),
        EdgeOrigin::Arc(_) => unreachable!(),
    };
    order.sort_by_key(|&k| Reverse(piece(k).1));
    let mut pts = vec![0usize; steps.len()];
    for k in order {
        let (edge, t) = piece(k);
        pts[k] = arr.add_point(edge, t);
    }
    let side = |o: usize| ov.base_side(o).expect("piece occurrence");
    let mut prev = End::Hub(0);
    let mut face = ci.face;
    let mut arcs = Vec::new();
    for (k, &(_, o_from, o_to)) in steps.iter().enumerate() {
        let end = End::Point { point: pts[k], side: side(o_from) };
        arcs.push(arr.add_arc(ov.face_origin[face], prev, end, delta));
        prev = End::Point { point: pts[k], side: side(o_to) };
        face = ov.map.occ_face(o_to);
    }
    arcs.push(arr.add_arc(ov.face_origin[face], prev, End::Hub(0), delta));
    let first = (arcs[0], 0u8);
    let last = (*arcs.last().expect("arc"), 1u8);
    let ring = &mut arr.hubs[0].ring;
    if ci.slot > cj.slot {
        ring.insert(ci.slot, first);
        ring.insert(cj.slot, last);
    } else {
        ring.insert(cj.slot, last);
        ring.insert(ci.slot, first);
    }
    arr.remove_curve(gone);
    Ok(())
}

pub(crate) struct Normalizer<'a> {
    x: &'a SurfaceMap,
    pub arr: Arrangement,
    /// The current word in a reading frame of our choice.
    pub cur: Vec<Letter>,
    next_id: usize,
    pub moves: usize,
}

impl<'a> Normalizer<'a> {
    pub fn new(x: &'a SurfaceMap, arr: Arrangement) -> Result<Normalizer<'a>> {
        let cur = read_disk(x, &arr)?.word;
        let next_id = arr.curve_ids().last().map_or(0, |&c| c + 1);
        Ok(Normalizer { x, arr, cur, next_id, moves: 0 })
    }

    /// One cut-and-paste move, given by corners of `cur`.
    fn apply(&mut self, i: usize, j: usize, paste: usize) -> Result<usize> {
        let reading = read_disk(self.x, &self.arr)?;
        let n = reading.word.len();
        let (frame, _) = align(&reading.word, &self.cur).ok_or_else(|| invariant("lost track of the schema word"))?;
        let delta = self.next_id;
        self.next_id += 1;
        let expected = cut_paste(&self.cur, i, j, paste, Letter::new(delta, false))
            .ok_or_else(|| invariant("cut-and-paste move does not apply"))?;
        let ci = reading.corners[frame.corner(i, n)];
        let cj = reading.corners[frame.corner(j, n)];
        redraw(self.x, &mut self.arr, &reading.overlay, ci, cj, paste, delta)?;
        let after = read_disk(self.x, &self.arr)?;
        if align(&after.word, &expected).is_none() {
            return Err(invariant("redrawn loops disagree with the cut-and-paste word"));
        }
        self.cur = expected;
        self.moves += 1;
        Ok(delta)
    }

    /// Runs moves given on a tokenised view of `cur`.
    fn script(&mut self, mut toks: Vec<Tok>, blocks: &[Vec<Letter>], steps: &[(usize, usize, usize)]) -> Result<()> {
        if expand(&toks, blocks) != self.cur {
            return Err(invariant("token view does not match the word"));
        }
        for &(i, j, x) in steps {
            let (ci, cj) = (tok_corner(&toks, blocks, i), tok_corner(&toks, blocks, j));
            let d = self.apply(ci, cj, x)?;
            toks = cut_paste(&toks, i, j, x, Tok::L(Letter::new(d, false)))
                .ok_or_else(|| invariant("scripted move does not apply"))?;
            if expand(&toks, blocks) != self.cur {
                return Err(invariant("token view diverged"));
            }
        }
        Ok(())
    }

    /// Reverses the reading direction of the loops at `positions` where
    /// needed so that those letters read uninverted.
    fn plain(&mut self, positions: &[usize]) {
        for &p in positions {
            if self.cur[p].inv {
                let s = self.cur[p].symbol;
                for l in self.cur.iter_mut().filter(|l| l.symbol == s) {
                    l.inv = !l.inv;
                }
            }
        }
    }

    fn reframe(&mut self, rot: usize, mirror: bool) {
        let w = if mirror { invert(&self.cur) } else { self.cur.clone() };
        self.cur = rotate(&w, rot);
    }

    /// Brings every one-sided pair next to each other.
    pub fn gather_crosscaps(&mut self) -> Result<()> {
        loop {
            let n = self.cur.len();
            let occ = occurrences(&self.cur);
            let mut pick: Vec<(usize, usize)> = occ
                .values()
                .filter(|&&(p, q)| self.cur[p] == self.cur[q] && q != p + 1 && !(p == 0 && q == n - 1))
                .copied()
                .collect();
            pick.sort_unstable();
            let Some(&(p, q)) = pick.first() else { return Ok(()) };
            self.reframe(p, false);
            self.plain(&[0]);
            let q = q - p;
            let x = self.cur[0];
            let blocks = vec![self.cur[1..q].to_vec(), self.cur[q + 1..].to_vec()];
            let toks = vec![Tok::L(x), Tok::B(0, false), Tok::L(x), Tok::B(1, false)];
            self.script(toks, &blocks, &[(1, 3, x.symbol)])?;
        }
    }

    /// Groups linked two-sided pairs into handles `ab a'b'`.
    pub fn gather_handles(&mut self) -> Result<()> {
        loop {
            let n = self.cur.len();
            let occ = occurrences(&self.cur);
            let grouped = grouped_symbols(&self.cur);
            let mut cand: Vec<(usize, usize)> = occ
                .iter()
                .filter(|(s, &(p, q))| self.cur[p] != self.cur[q] && grouped.binary_search(*s).is_err())
                .map(|(_, &pq)| pq)
                .collect();
            cand.sort_unstable();
            let Some(&(p0, q0)) = cand.first() else { return Ok(()) };
            self.reframe(p0, false);
            let p = q0 - p0;
            let occ = occurrences(&self.cur);
            let mut linked: Vec<(usize, usize)> = occ.values().filter(|&&(a, b)| a > 0 && a < p && b > p).copied().collect();
            linked.sort_unstable();
            let &(a, b) = linked.first().ok_or_else(|| invariant("two-sided loop links no other loop"))?;
            if self.cur[a] == self.cur[b] {
                return Err(invariant("one-sided loop split by a two-sided one"));
            }
            self.plain(&[0, a]);
            let (x, y) = (self.cur[0], self.cur[a]);
            let blocks = vec![
                self.cur[1..a].to_vec(),
                self.cur[a + 1..p].to_vec(),
                self.cur[p + 1..b].to_vec(),
                self.cur[b + 1..n].to_vec(),
            ];
            let toks = vec![
                Tok::L(x),
                Tok::B(0, false),
                Tok::L(y),
                Tok::B(1, false),
                Tok::L(self.cur[p]),
                Tok::B(2, false),
                Tok::L(self.cur[b]),
                Tok::B(3, false),
            ];
            self.script(toks, &blocks, &[(0, 5, y.symbol), (2, 6, x.symbol)])?;
        }
    }

    fn units(&self) -> Result<(usize, Vec<Unit>)> {
        parse_units(&self.cur).ok_or_else(|| invariant("word is not a sequence of cross-caps and handles"))
    }

    /// Rotates `cur` so that unit `k` of its parse starts at letter `at`.
    fn unit_offset(units: &[Unit], start: usize, k: usize) -> usize {
        start + units[..k].iter().map(Unit::len).sum::<usize>()
    }

    /// Trades every handle for two cross-caps, one at a time.
    pub fn handles_to_crosscaps(&mut self) -> Result<()> {
        loop {
            let (start, units) = self.units()?;
            if !units.iter().any(|u| matches!(u, Unit::Handle(..))) || !units.iter().any(|u| matches!(u, Unit::Cross(_))) {
                return Ok(());
            }
            let found = |units: &[Unit]| {
                let m = units.len();
                (0..m).find(|&k| matches!(units[k], Unit::Cross(_)) && matches!(units[(k + 1) % m], Unit::Handle(..)))
            };
            let (start, units, k) = match found(&units) {
                Some(k) => (start, units, k),
                None => {
                    self.reframe(0, true);
                    let (s, u) = self.units()?;
                    let k = found(&u).ok_or_else(|| invariant("no cross-cap next to a handle"))?;
                    (s, u, k)
                }
            };
            let n = self.cur.len();
            let off = Self::unit_offset(&units, start, k);
            self.reframe((off + 6) % n, false);
            let l = n - 6;
            self.plain(&[l, l + 2, l + 3]);
            let w = self.cur.clone();
            let blocks = vec![w[..l].to_vec()];
            let toks: Vec<Tok> = std::iter::once(Tok::B(0, false)).chain(w[l..].iter().map(|&c| Tok::L(c))).collect();
            let (xs, a, b) = (w[l].symbol, w[l + 2].symbol, w[l + 3].symbol);
            self.script(toks, &blocks, &[(2, 4, a), (1, 4, xs), (1, 6, b)])?;
        }
    }

    /// Trades three consecutive cross-caps for a cross-cap and a handle
    /// until at most `keep` cross-caps remain.
    pub fn crosscaps_to_handles(&mut self, keep: usize) -> Result<()> {
        loop {
            let (start, units) = self.units()?;
            let m = units.len();
            let is_cross: Vec<bool> = units.iter().map(|u| matches!(u, Unit::Cross(_))).collect();
            let count = is_cross.iter().filter(|&&c| c).count();
            if count <= keep || count < 3 {
                return Ok(());
            }
            // Last three cross-caps of a maximal run of length at least three.
            let last = if count == m {
                Some(2)
            } else {
                (0..m).find(|&e| is_cross[e] && !is_cross[(e + 1) % m] && (0..3).all(|d| is_cross[(e + m - d) % m]))
            };
            let e = last.ok_or_else(|| invariant("cross-caps are not consecutive"))?;
            let n = self.cur.len();
            let first = (e + m - 2) % m;
            let off = Self::unit_offset(&units, start, first);
            self.reframe((off + 6) % n, false);
            let l = n - 6;
            self.plain(&[l, l + 2, l + 4]);
            let w = self.cur.clone();
            let blocks = vec![w[..l].to_vec(), Vec::new()];
            let toks: Vec<Tok> = std::iter::once(Tok::B(0, false))
                .chain(w[l..].iter().map(|&c| Tok::L(c)))
                .chain(std::iter::once(Tok::B(1, false)))
                .collect();
            let (xs, ys, zs) = (w[l].symbol, w[l + 2].symbol, w[l + 4].symbol);
            self.script(toks, &blocks, &[(2, 4, ys), (2, 7, zs), (2, 6, xs)])?;
        }
    }

    /// Turns two adjacent cross-caps `xx yy` into `d x d x'`.
    pub fn klein_block(&mut self) -> Result<()> {
        let (start, units) = self.units()?;
        let m = units.len();
        let k = (0..m)
            .find(|&k| matches!(units[k], Unit::Cross(_)) && matches!(units[(k + 1) % m], Unit::Cross(_)))
            .ok_or_else(|| invariant("no two adjacent cross-caps"))?;
        let off = Self::unit_offset(&units, start, k);
        self.reframe(off % self.cur.len(), false);
        self.plain(&[0, 2]);
        let w = self.cur.clone();
        let blocks = vec![w[4..].to_vec()];
        let toks = vec![Tok::L(w[0]), Tok::L(w[1]), Tok::L(w[2]), Tok::L(w[3]), Tok::B(0, false)];
        self.script(toks, &blocks, &[(1, 3, w[2].symbol)])
    }
}

/// Symbols of the final word in template order, and the template itself.
pub(crate) fn template(cur: &[Letter], orientable: bool) -> Result<(Vec<usize>, Vec<Letter>)> {
    let n = cur.len();
    let mut order = Vec::new();
    let mut word = Vec::new();
    let push_handle = |a: usize, b: usize, order: &mut Vec<usize>, word: &mut Vec<Letter>| {
        order.extend([a, b]);
        word.extend([Letter::new(a, false), Letter::new(b, false), Letter::new(a, true), Letter::new(b, true)]);
    };
    if orientable || n % 4 == 2 {
        let (_, units) = parse_units(cur).ok_or_else(|| invariant("final word does not parse"))?;
        let crosses: Vec<usize> = units.iter().filter_map(|u| if let Unit::Cross(s) = u { Some(*s) } else { None }).collect();
        if crosses.len() != usize::from(!orientable) {
            return Err(invariant("final word has the wrong number of cross-caps"));
        }
        let k = units.iter().position(|u| matches!(u, Unit::Cross(_))).unwrap_or(0);
        for i in 0..units.len() {
            match units[(k + i) % units.len()] {
                Unit::Cross(z) => {
                    order.push(z);
                    word.extend([Letter::new(z, false), Letter::new(z, false)]);
                }
                Unit::Handle(a, b) => push_handle(a, b, &mut order, &mut word),
            }
        }
        return Ok((order, word));
    }
    // Even genus: one block `p q p' q` with q one-sided, then handles.
    let mirrored = invert(cur);
    for (p, src) in (0..n).flat_map(|p| [(p, cur), (p, &mirrored[..])]) {
        let w = rotate(src, p);
        if w[0].symbol != w[1].symbol && w[2] == w[0].flipped() && w[3] == w[1] {
            let rest = &w[4..];
            let (y, wl) = (w[0].symbol, w[1].symbol);
            order.extend([y, wl]);
            word.extend([Letter::new(y, false), Letter::new(wl, false), Letter::new(y, true), Letter::new(wl, false)]);
            let mut k = 0;
            while k < rest.len() {
                if k + 3 < rest.len() && rest[k + 2] == rest[k].flipped() && rest[k + 3] == rest[k + 1].flipped() {
                    push_handle(rest[k].symbol, rest[k + 1].symbol, &mut order, &mut word);
                    k += 4;
                } else {
                    break;
                }
            }
            if k == rest.len() {
                return Ok((order, word));
            }
            order.clear();
            word.clear();
        }
    }
    Err(invariant("final word has no y w y' w block"))
}
