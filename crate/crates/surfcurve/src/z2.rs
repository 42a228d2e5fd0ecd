//! Linear algebra over Z2 with bit-packed rows.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Z2Vec {
    dim: usize,
    words: Vec<u64>,
}

impl Z2Vec {
    pub fn zeros(dim: usize) -> Z2Vec {
        Z2Vec { dim, words: vec![0; dim.div_ceil(64)] }
    }

    pub fn ones(dim: usize) -> Z2Vec {
        let mut v = Z2Vec::zeros(dim);
        for i in 0..dim {
            v.set(i, true);
        }
        v
    }

    pub fn unit(dim: usize, i: usize) -> Z2Vec {
        let mut v = Z2Vec::zeros(dim);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Z2Vec {
        let mut v = Z2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    /// Low `dim` bits of `x`, bit i = coordinate i.
    pub fn from_u64(dim: usize, x: u64) -> Z2Vec {
        let mut v = Z2Vec::zeros(dim);
        if dim > 0 {
            v.words[0] = if dim >= 64 { x } else { x & ((1u64 << dim) - 1) };
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.dim <= 64, "vector too long for u64");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn add_assign(&mut self, other: &Z2Vec) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn add(&self, other: &Z2Vec) -> Z2Vec {
        let mut v = self.clone();
        v.add_assign(other);
        v
    }

    pub fn dot(&self, other: &Z2Vec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.dim).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for Z2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.dim {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

impl Serialize for Z2Vec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Z2Vec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        Ok(Z2Vec::from_bits(&bits))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Z2Matrix {
    cols: usize,
    rows: Vec<Z2Vec>,
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Z2Matrix {
        Z2Matrix { cols, rows: vec![Z2Vec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Z2Matrix {
        Z2Matrix { cols: n, rows: (0..n).map(|i| Z2Vec::unit(n, i)).collect() }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Z2Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Z2Matrix { cols, rows: rows.iter().map(|r| Z2Vec::from_bits(r)).collect() })
    }

    pub fn from_vec_rows(cols: usize, rows: Vec<Z2Vec>) -> Z2Matrix {
        assert!(rows.iter().all(|r| r.dim() == cols));
        Z2Matrix { cols, rows }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &Z2Vec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| r.bits()).collect()
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut t = Z2Matrix::zeros(self.cols, self.rows());
        for i in 0..self.rows() {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Z2Matrix) -> Result<Z2Matrix> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols,
                other.rows(),
                other.cols
            )));
        }
        let mut out = Z2Matrix::zeros(self.rows(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if r.get(j) {
                    out.rows[i].add_assign(&other.rows[j]);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Z2Vec) -> Result<Z2Vec> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns, vector of {}", self.cols, v.dim())));
        }
        let mut out = Z2Vec::zeros(self.rows());
        for (i, r) in self.rows.iter().enumerate() {
            out.set(i, r.dot(v));
        }
        Ok(out)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Option<Z2Matrix> {
        let n = self.rows();
        if n != self.cols {
            return None;
        }
        let mut a = self.rows.clone();
        let mut b = Z2Matrix::identity(n).rows;
        for c in 0..n {
            let p = (c..n).find(|&r| a[r].get(c))?;
            a.swap(c, p);
            b.swap(c, p);
            for r in 0..n {
                if r != c && a[r].get(c) {
                    let (ar, br) = (a[c].clone(), b[c].clone());
                    a[r].add_assign(&ar);
                    b[r].add_assign(&br);
                }
            }
        }
        Some(Z2Matrix { cols: n, rows: b })
    }
}

impl fmt::Debug for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

fn odd_rows(g: usize) -> Vec<Z2Vec> {
    debug_assert!(g % 2 == 1);
    let p = g / 2;
    let mut z = Z2Vec::unit(g, 0);
    let mut rows = Vec::with_capacity(g);
    for i in 1..=p {
        let mut r1 = z.clone();
        r1.flip(2 * i - 1);
        let mut r2 = r1.clone();
        r2.flip(2 * i);
        rows.push(r1);
        rows.push(r2);
        z.flip(2 * i);
    }
    rows.push(z);
    rows
}

fn odd_inverse_rows(g: usize) -> Vec<Z2Vec> {
    let mut rows = vec![Z2Vec::ones(g)];
    for i in 1..=g / 2 {
        let mut r1 = Z2Vec::zeros(g);
        for j in 2 * i - 1..g {
            r1.set(j, true);
        }
        let mut r2 = Z2Vec::zeros(g);
        r2.set(2 * i - 2, true);
        r2.set(2 * i - 1, true);
        rows.push(r1);
        rows.push(r2);
    }
    rows
}

fn shift_block(first: Z2Vec, block: Vec<Z2Vec>, g: usize) -> Z2Matrix {
    let mut rows = vec![first];
    for r in block {
        let mut v = Z2Vec::zeros(g);
        for j in 0..g - 1 {
            v.set(j + 1, r.get(j));
        }
        rows.push(v);
    }
    Z2Matrix::from_vec_rows(g, rows)
}

/// Matrix taking signatures against the standard system to signatures
/// against the canonical system.
pub fn change_basis_matrix(g: usize) -> Z2Matrix {
    assert!(g >= 1);
    if g % 2 == 1 {
        return Z2Matrix::from_vec_rows(g, odd_rows(g));
    }
    let mut first = Z2Vec::zeros(g);
    first.set(0, true);
    first.set(1, true);
    let block = if g > 1 { odd_rows(g - 1) } else { Vec::new() };
    shift_block(first, block, g)
}

pub fn change_basis_inverse(g: usize) -> Z2Matrix {
    assert!(g >= 1);
    if g % 2 == 1 {
        return Z2Matrix::from_vec_rows(g, odd_inverse_rows(g));
    }
    shift_block(Z2Vec::ones(g), odd_inverse_rows(g - 1), g)
}

/// A linear map `Z2^g -> Z2^k` with a set of accepted images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoMap {
    pub matrix: Z2Matrix,
    pub targets: Vec<Z2Vec>,
}

#[derive(Serialize, Deserialize)]
struct RhoJson {
    k: usize,
    matrix: Vec<Vec<u8>>,
    #[serde(rename = "A")]
    targets: Vec<Vec<u8>>,
}

impl RhoMap {
    pub fn new(matrix: Z2Matrix, targets: Vec<Z2Vec>) -> Result<RhoMap> {
        if matrix.rows() == 0 {
            return Err(Error::DimensionMismatch("rho needs k >= 1".into()));
        }
        if targets.iter().any(|a| a.dim() != matrix.rows()) {
            return Err(Error::DimensionMismatch("target dimension differs from k".into()));
        }
        Ok(RhoMap { matrix, targets })
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    pub fn accepts(&self, v: &Z2Vec) -> bool {
        self.targets.contains(v)
    }

    pub fn to_json(&self) -> String {
        let j = RhoJson {
            k: self.k(),
            matrix: self.matrix.to_rows(),
            targets: self.targets.iter().map(|t| t.bits()).collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<RhoMap> {
        let j: RhoJson =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        let m = Z2Matrix::from_rows(&j.matrix)?;
        if m.rows() != j.k {
            return Err(Error::DimensionMismatch("k differs from matrix rows".into()));
        }
        RhoMap::new(m, j.targets.iter().map(|t| Z2Vec::from_bits(t)).collect())
    }
}

/// `rho ∘ phi`, keeping the target set.
pub fn compose_rho(rho: &RhoMap, phi: &Z2Matrix) -> Result<RhoMap> {
    Ok(RhoMap { matrix: rho.matrix.mul(phi)?, targets: rho.targets.clone() })
}
