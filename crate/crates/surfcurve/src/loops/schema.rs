//! Polygonal schema words and the cut-and-paste move on them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub symbol: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(symbol: usize, inv: bool) -> Letter {
        Letter { symbol, inv }
    }
}

pub(crate) trait Sym: Clone + PartialEq {
    fn flipped(&self) -> Self;
    fn symbol(&self) -> Option<usize>;
    fn is_inv(&self) -> bool;
}

impl Sym for Letter {
    fn flipped(&self) -> Letter {
        Letter { symbol: self.symbol, inv: !self.inv }
    }
    fn symbol(&self) -> Option<usize> {
        Some(self.symbol)
    }
    fn is_inv(&self) -> bool {
        self.inv
    }
}

/// A letter or an opaque block of letters, possibly read backwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    L(Letter),
    B(usize, bool),
}

impl Sym for Tok {
    fn flipped(&self) -> Tok {
        match self {
            Tok::L(l) => Tok::L(l.flipped()),
            Tok::B(b, i) => Tok::B(*b, !i),
        }
    }
    fn symbol(&self) -> Option<usize> {
        match self {
            Tok::L(l) => Some(l.symbol),
            Tok::B(..) => None,
        }
    }
    fn is_inv(&self) -> bool {
        match self {
            Tok::L(l) => l.inv,
            Tok::B(_, i) => *i,
        }
    }
}

pub(crate) fn invert<T: Sym>(w: &[T]) -> Vec<T> {
    w.iter().rev().map(Sym::flipped).collect()
}

pub(crate) fn rotate<T: Clone>(w: &[T], k: usize) -> Vec<T> {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    w[k..].iter().chain(&w[..k]).cloned().collect()
}

/// Cuts the polygon `w` along a diagonal from corner `i` to corner `j`
/// (corner `c` sits before `w[c]`, `0 <= i < j <= len`), then glues the two
/// pieces back along symbol `x`. The diagonal is the letter `delta`.
pub(crate) fn cut_paste<T: Sym>(w: &[T], i: usize, j: usize, x: usize, delta: T) -> Option<Vec<T>> {
    if !(i < j && j <= w.len()) {
        return None;
    }
    let mut p1: Vec<T> = w[i..j].to_vec();
    p1.push(delta.clone());
    let mut p2: Vec<T> = w[j..].iter().chain(&w[..i]).cloned().collect();
    p2.push(delta.flipped());
    let find = |p: &[T]| -> Option<usize> {
        let hits: Vec<usize> = (0..p.len()).filter(|&k| p[k].symbol() == Some(x)).collect();
        (hits.len() == 1).then(|| hits[0])
    };
    let mut k = find(&p1)?;
    if p1[k].is_inv() {
        p1 = invert(&p1);
        k = p1.len() - 1 - k;
    }
    let u = rotate(&p1, k);
    let mut k = find(&p2)?;
    if !p2[k].is_inv() {
        p2 = invert(&p2);
        k = p2.len() - 1 - k;
    }
    let v = rotate(&p2, k);
    Some(u[1..].iter().chain(&v[1..]).cloned().collect())
}

pub(crate) fn expand(toks: &[Tok], blocks: &[Vec<Letter>]) -> Vec<Letter> {
    let mut out = Vec::new();
    for t in toks {
        match t {
            Tok::L(l) => out.push(*l),
            Tok::B(b, false) => out.extend_from_slice(&blocks[*b]),
            Tok::B(b, true) => out.extend(invert(&blocks[*b])),
        }
    }
    out
}

/// Letter index of token corner `c`.
pub(crate) fn tok_corner(toks: &[Tok], blocks: &[Vec<Letter>], c: usize) -> usize {
    toks[..c]
        .iter()
        .map(|t| match t {
            Tok::L(_) => 1,
            Tok::B(b, _) => blocks[*b].len(),
        })
        .sum()
}

/// How one reading of a cyclic word sits inside another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Frame {
    pub rot: usize,
    pub mirror: bool,
}

impl Frame {
    /// The corner of the underlying word that corner `c` of the aligned word names.
    pub fn corner(&self, c: usize, n: usize) -> usize {
        if self.mirror {
            (self.rot + 1 + n - c % n) % n
        } else {
            (c + self.rot) % n
        }
    }
}

/// Reads `g` as `s` up to rotation, reversal, and a consistent reversal of
/// individual symbols. The returned map tells, per symbol, whether its
/// letters in `s` are reversed relative to `g`.
pub(crate) fn align(g: &[Letter], s: &[Letter]) -> Option<(Frame, HashMap<usize, bool>)> {
    let n = g.len();
    if n != s.len() {
        return None;
    }
    if n == 0 {
        return Some((Frame { rot: 0, mirror: false }, HashMap::new()));
    }
    for mirror in [false, true] {
        'rot: for rot in 0..n {
            let mut flips: HashMap<usize, bool> = HashMap::new();
            for (k, sl) in s.iter().enumerate() {
                let gl = if mirror { g[(rot + n - k) % n].flipped() } else { g[(rot + k) % n] };
                if gl.symbol != sl.symbol {
                    continue 'rot;
                }
                let f = gl.inv != sl.inv;
                if *flips.entry(sl.symbol).or_insert(f) != f {
                    continue 'rot;
                }
            }
            return Some((Frame { rot, mirror }, flips));
        }
    }
    None
}

/// Positions of the two occurrences of each symbol.
pub(crate) fn occurrences(w: &[Letter]) -> HashMap<usize, (usize, usize)> {
    let mut first: HashMap<usize, usize> = HashMap::new();
    let mut out = HashMap::new();
    for (k, l) in w.iter().enumerate() {
        if let Some(&p) = first.get(&l.symbol) {
            out.insert(l.symbol, (p, k));
        } else {
            first.insert(l.symbol, k);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Unit {
    Cross(usize),
    Handle(usize, usize),
}

impl Unit {
    pub fn len(&self) -> usize {
        match self {
            Unit::Cross(_) => 2,
            Unit::Handle(..) => 4,
        }
    }
}

fn unit_at(w: &[Letter], p: usize) -> Option<Unit> {
    let n = w.len();
    let at = |k: usize| w[(p + k) % n];
    if n >= 2 && at(0) == at(1) {
        return Some(Unit::Cross(at(0).symbol));
    }
    if n >= 4 && at(0).symbol != at(1).symbol && at(2) == at(0).flipped() && at(3) == at(1).flipped() {
        return Some(Unit::Handle(at(0).symbol, at(1).symbol));
    }
    None
}

/// Splits a cyclic word into adjacent cross-caps `aa` and handles `ab a'b'`.
/// Returns the offset where the first unit starts.
pub(crate) fn parse_units(w: &[Letter]) -> Option<(usize, Vec<Unit>)> {
    let n = w.len();
    if n == 0 {
        return Some((0, Vec::new()));
    }
    'start: for start in 0..n {
        let mut units = Vec::new();
        let mut p = 0;
        while p < n {
            match unit_at(w, start + p) {
                Some(u) if p + u.len() <= n => {
                    p += u.len();
                    units.push(u);
                }
                _ => continue 'start,
            }
        }
        return Some((start, units));
    }
    None
}

/// Symbols inside some handle window `ab a'b'` of the cyclic word.
pub(crate) fn grouped_symbols(w: &[Letter]) -> Vec<usize> {
    let mut out = Vec::new();
    for p in 0..w.len() {
        if let Some(Unit::Handle(a, b)) = unit_at(w, p) {
            out.push(a);
            out.push(b);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn format_word(word: &[Letter], names: &[String]) -> String {
    word.iter()
        .map(|l| if l.inv { format!("-{}", names[l.symbol]) } else { names[l.symbol].clone() })
        .collect::<Vec<_>>()
        .join(" ")
}
