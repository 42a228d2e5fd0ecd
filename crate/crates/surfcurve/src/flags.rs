//! Flag tables with three involutions.
//!
//! `s[0]` swaps the two ends of an edge side, `s[1]` swaps the two edge
//! sides meeting at a corner of a face, `s[2]` swaps the two sides of an
//! edge. `s[2]` may be undefined (`NONE`) on flags lying on a boundary.

pub const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub s: [Vec<u32>; 3],
}

/// Union-find over flag ids.
pub(crate) struct Dsu {
    p: Vec<u32>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu { p: (0..n as u32).collect() }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.p[x as usize] != x {
            let gp = self.p[self.p[x as usize] as usize];
            self.p[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.p[hi as usize] = lo;
        true
    }

    /// Dense labels numbered by first appearance.
    pub fn labels(&mut self) -> (Vec<u32>, usize) {
        let n = self.p.len();
        let mut root_label = vec![NONE; n];
        let mut out = vec![0u32; n];
        let mut count = 0usize;
        for x in 0..n as u32 {
            let r = self.find(x) as usize;
            if root_label[r] == NONE {
                root_label[r] = count as u32;
                count += 1;
            }
            out[x as usize] = root_label[r];
        }
        (out, count)
    }
}

impl Flags {
    pub fn len(&self) -> usize {
        self.s[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.s[0].is_empty()
    }

    pub fn glued(&self, f: u32) -> bool {
        self.s[2][f as usize] != NONE
    }

    /// Orbit labels of the subgroup generated by the listed involutions.
    pub fn orbits(&self, which: &[usize]) -> (Vec<u32>, usize) {
        let mut d = Dsu::new(self.len());
        for &k in which {
            for (f, &g) in self.s[k].iter().enumerate() {
                if g != NONE {
                    d.union(f as u32, g);
                }
            }
        }
        d.labels()
    }

    pub fn vertices(&self) -> (Vec<u32>, usize) {
        self.orbits(&[1, 2])
    }

    pub fn edges(&self) -> (Vec<u32>, usize) {
        self.orbits(&[0, 2])
    }

    pub fn faces(&self) -> (Vec<u32>, usize) {
        self.orbits(&[0, 1])
    }

    pub fn components(&self) -> (Vec<u32>, usize) {
        self.orbits(&[0, 1, 2])
    }

    /// Checks involution laws and commutation of `s[0]` with `s[2]`.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.len();
        for k in 0..3 {
            if self.s[k].len() != n {
                return Err(format!("involution {} has wrong length", k));
            }
            for f in 0..n {
                let g = self.s[k][f];
                if g == NONE {
                    if k < 2 {
                        return Err(format!("involution {} undefined at {}", k, f));
                    }
                    continue;
                }
                if g as usize == f {
                    return Err(format!("involution {} fixes {}", k, f));
                }
                if self.s[k][g as usize] != f as u32 {
                    return Err(format!("involution {} not involutive at {}", k, f));
                }
            }
        }
        for f in 0..n {
            let a = self.s[2][f];
            let b = self.s[2][self.s[0][f] as usize];
            match (a, b) {
                (NONE, NONE) => {}
                (NONE, _) | (_, NONE) => return Err(format!("edge side at {} half glued", f)),
                (a, b) => {
                    if self.s[0][a as usize] != b {
                        return Err(format!("s0 and s2 do not commute at {}", f));
                    }
                }
            }
        }
        Ok(())
    }

    /// Per component: Euler characteristic.
    pub fn euler_chars(&self) -> Vec<i64> {
        let (comp, nc) = self.components();
        let mut chi = vec![0i64; nc];
        let tally = |labels: &[u32], count: usize, sign: i64, chi: &mut Vec<i64>| {
            let mut seen = vec![false; count];
            for (f, &l) in labels.iter().enumerate() {
                if !seen[l as usize] {
                    seen[l as usize] = true;
                    chi[comp[f] as usize] += sign;
                }
            }
        };
        let (v, nv) = self.vertices();
        tally(&v, nv, 1, &mut chi);
        let (e, ne) = self.edges();
        tally(&e, ne, -1, &mut chi);
        let (fa, nf) = self.faces();
        tally(&fa, nf, 1, &mut chi);
        chi
    }

    /// Per component: whether flags admit a two-colouring alternating along
    /// every defined involution.
    pub fn orientable_components(&self) -> Vec<bool> {
        let (comp, nc) = self.components();
        let n = self.len();
        let mut colour = vec![u8::MAX; n];
        let mut ok = vec![true; nc];
        let mut stack = Vec::new();
        for start in 0..n {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            stack.push(start as u32);
            while let Some(f) = stack.pop() {
                let c = colour[f as usize];
                for k in 0..3 {
                    let g = self.s[k][f as usize];
                    if g == NONE {
                        continue;
                    }
                    if colour[g as usize] == u8::MAX {
                        colour[g as usize] = 1 - c;
                        stack.push(g);
                    } else if colour[g as usize] == c {
                        ok[comp[f as usize] as usize] = false;
                    }
                }
            }
        }
        ok
    }

    /// From an unglued flag, turns around its vertex to the unglued flag at
    /// the other end of the vertex's fan.
    pub fn rotate_to_boundary(&self, f: u32) -> u32 {
        let mut g = self.s[1][f as usize];
        while self.s[2][g as usize] != NONE {
            g = self.s[1][self.s[2][g as usize] as usize];
        }
        g
    }

    /// Boundary components, each as the sorted list of its unglued flags.
    pub fn boundaries(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut d = Dsu::new(n);
        let mut any = false;
        for f in 0..n as u32 {
            if self.glued(f) {
                continue;
            }
            any = true;
            d.union(f, self.s[0][f as usize]);
            d.union(f, self.rotate_to_boundary(f));
        }
        if !any {
            return Vec::new();
        }
        let mut groups: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
        for f in 0..n as u32 {
            if !self.glued(f) {
                groups.entry(d.find(f)).or_default().push(f);
            }
        }
        groups.into_values().collect()
    }

    /// Caps the given boundary component with a new face.
    pub fn attach_disk(&self, boundary: &[u32]) -> Flags {
        let n = self.len();
        let mut s = self.s.clone();
        let mut index = std::collections::HashMap::with_capacity(boundary.len());
        for (i, &f) in boundary.iter().enumerate() {
            index.insert(f, (n + i) as u32);
        }
        for k in 0..3 {
            s[k].resize(n + boundary.len(), NONE);
        }
        for &f in boundary {
            let nf = index[&f];
            s[2][f as usize] = nf;
            s[2][nf as usize] = f;
            s[0][nf as usize] = index[&self.s[0][f as usize]];
            s[1][nf as usize] = index[&self.rotate_to_boundary(f)];
        }
        Flags { s }
    }
}
