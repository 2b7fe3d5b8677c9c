//! Dense exact linear algebra over prime fields `F_p`.
//!
//! Everything the decision procedures do eventually reduces to one of the
//! routines here: row reduction, linear solving, kernel/image bases and
//! subspace membership. Bases are always returned in reduced row echelon
//! form so that equal subspaces produce identical basis lists.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_PRIME: u32 = 1 << 16;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if p >= MAX_PRIME || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    Ok(())
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "zero has no inverse mod {p}");
    // Fermat: a^(p-2)
    let mut result = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

pub fn reduce_i64(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

/// A dense row-major matrix with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix[p={}; {}x{}]", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    /// Builds a matrix from row-major data, reducing every entry mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        check_prime(p)?;
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(Self {
            p,
            rows,
            cols,
            entries,
        })
    }

    /// Convenience constructor from signed rows; panics on ragged input.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows.len() * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            entries.extend(r.iter().map(|&v| reduce_i64(v, p)));
        }
        Self {
            p,
            rows: rows.len(),
            cols: ncols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }
    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let rrow = rhs.row(k);
                for (j, &b) in rrow.iter().enumerate() {
                    acc[j] = (acc[j] + a * b as u64) % p;
                }
            }
            for (j, &a) in acc.iter().enumerate() {
                out.entries[i * rhs.cols + j] = a as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, add_mod)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, sub_mod)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(u32, u32, u32) -> u32) -> Self {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| f(a, b, self.p))
            .collect();
        Self {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, s: u32) -> Self {
        let s = s % self.p;
        Self {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&a| mul_mod(a, s, self.p)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.p, self.rows, self.cols + rhs.cols);
        for r in 0..self.rows {
            let base = r * out.cols;
            out.entries[base..base + self.cols].copy_from_slice(self.row(r));
            out.entries[base + self.cols..base + out.cols].copy_from_slice(rhs.row(r));
        }
        out
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        Self {
            p: self.p,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Block diagonal sum `diag(self, rhs)`.
    pub fn block_diag(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.p, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.entries[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        let mut out = Self::zeros(self.p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                out.entries[r * cols + c] = self.get(r0 + r, c0 + c);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.p, n));
        let red = rref(&aug);
        if red.pivots.iter().take_while(|&&c| c < n).count() < n {
            return None;
        }
        Some(red.matrix.submatrix(0, n, n, n))
    }

    /// Row-major flattening, used to treat matrices as vectors.
    pub fn to_vec(&self) -> Vec<u32> {
        self.entries.clone()
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, v: &[u32]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self {
            p,
            rows,
            cols,
            entries: v.to_vec(),
        }
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        kernel_basis(self)
    }

    pub fn image_basis(&self) -> Vec<Vec<u32>> {
        image_basis(self)
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row echelon form. Pivots are chosen scanning columns left to right
/// and, within a column, taking the topmost nonzero entry at or below the
/// current row.
pub fn rref(m: &FpMatrix) -> Rref {
    let p = m.p;
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.entries.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(a[r * cols + c], p);
        if inv != 1 {
            for j in c..cols {
                a[r * cols + j] = mul_mod(a[r * cols + j], inv, p);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor == 0 {
                continue;
            }
            let f = (p - factor) as u64;
            for j in c..cols {
                let pv = a[r * cols + j];
                if pv != 0 {
                    a[i * cols + j] = ((a[i * cols + j] as u64 + f * pv as u64) % p as u64) as u32;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref {
        matrix: FpMatrix {
            p,
            rows,
            cols,
            entries: a,
        },
        pivots,
        rank,
    }
}

/// One solution of `A x = b` together with a basis of `ker A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

/// Solves `A x = b`; `None` when the system is inconsistent.
///
/// Free variables of the particular solution are set to zero.
pub fn solve(a: &FpMatrix, b: &[u32]) -> Option<Solution> {
    let particular = solve_particular(a, b)?;
    Some(Solution {
        particular,
        kernel: kernel_basis(a),
    })
}

/// Like [`solve`] but skips the kernel computation.
pub fn solve_particular(a: &FpMatrix, b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(
        a.rows,
        b.len(),
        "right-hand side has length {} for a matrix with {} rows",
        b.len(),
        a.rows
    );
    let p = a.p;
    let bcol = FpMatrix {
        p,
        rows: b.len(),
        cols: 1,
        entries: b.iter().map(|&v| v % p).collect(),
    };
    let red = rref(&a.hstack(&bcol));
    if red.pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![0u32; a.cols];
    for (r, &c) in red.pivots.iter().enumerate() {
        x[c] = red.matrix.get(r, a.cols);
    }
    Some(x)
}

fn raw_kernel(red: &Rref) -> Vec<Vec<u32>> {
    let m = &red.matrix;
    let p = m.p;
    let mut is_pivot = vec![false; m.cols];
    for &c in &red.pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (r, &c) in red.pivots.iter().enumerate() {
            v[c] = neg_mod(m.get(r, free), p);
        }
        out.push(v);
    }
    out
}

/// Basis of `{x : A x = 0}` in canonical (reduced echelon) form.
pub fn kernel_basis(a: &FpMatrix) -> Vec<Vec<u32>> {
    let raw = raw_kernel(&rref(a));
    canonical_basis(a.p, a.cols, &raw)
}

/// Basis of the column space of `A` in canonical (reduced echelon) form.
pub fn image_basis(a: &FpMatrix) -> Vec<Vec<u32>> {
    let cols: Vec<Vec<u32>> = (0..a.cols).map(|j| a.column(j)).collect();
    canonical_basis(a.p, a.rows, &cols)
}

/// Nonzero rows of the RREF of the matrix whose rows are `vectors`.
pub fn canonical_basis(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut entries = Vec::with_capacity(vectors.len() * ambient);
    for v in vectors {
        assert_eq!(v.len(), ambient);
        entries.extend(v.iter().map(|&x| x % p));
    }
    let m = FpMatrix {
        p,
        rows: vectors.len(),
        cols: ambient,
        entries,
    };
    let red = rref(&m);
    (0..red.rank).map(|r| red.matrix.row(r).to_vec()).collect()
}

/// Whether `v` lies in the span of `span`, decided by comparing ranks.
pub fn subspace_contains(p: u32, span: &[Vec<u32>], v: &[u32]) -> bool {
    let n = v.len();
    let base = canonical_basis(p, n, span).len();
    let mut with = span.to_vec();
    with.push(v.to_vec());
    canonical_basis(p, n, &with).len() == base
}

/// A linear subspace of `F_p^n` stored by its canonical basis.
///
/// Since the basis is in reduced echelon form, the coordinates of a member
/// vector are simply its entries at the pivot positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        Self::from_canonical(p, ambient, canonical_basis(p, ambient, vectors))
    }

    pub fn kernel_of(a: &FpMatrix) -> Self {
        Self::from_canonical(a.p, a.cols, kernel_basis(a))
    }

    pub fn image_of(a: &FpMatrix) -> Self {
        Self::from_canonical(a.p, a.rows, image_basis(a))
    }

    pub fn zero(p: u32, ambient: usize) -> Self {
        Self::from_canonical(p, ambient, Vec::new())
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Self::from_canonical(p, ambient, basis)
    }

    fn from_canonical(p: u32, ambient: usize, basis: Vec<Vec<u32>>) -> Self {
        let pivots = basis
            .iter()
            .map(|v| v.iter().position(|&x| x != 0).expect("zero basis vector"))
            .collect();
        Self {
            p,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the basis components of `v`; the remainder is zero iff `v`
    /// belongs to the subspace, and is supported off the pivots otherwise.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut r = v.to_vec();
        for (b, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = r[piv];
            if c == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(b) {
                *x = sub_mod(*x, mul_mod(c, y, p), p);
            }
        }
        r
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates with respect to the canonical basis, `None` for non-members.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.coords_unchecked(v))
    }

    /// Coordinates of a vector already known to be a member.
    pub fn coords_unchecked(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&i| v[i]).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> Vec<u32> {
        assert_eq!(coeffs.len(), self.dim());
        let p = self.p;
        let mut out = vec![0u32; self.ambient];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(b) {
                *x = add_mod(*x, mul_mod(c, y, p), p);
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.p, self.ambient, &vs)
    }

    /// Indices not used as pivots: the standard complement of the subspace.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient];
        for &c in &self.pivots {
            used[c] = true;
        }
        (0..self.ambient).filter(|&i| !used[i]).collect()
    }

    /// Columns = basis vectors.
    pub fn basis_matrix(&self) -> FpMatrix {
        FpMatrix::from_columns(self.p, self.ambient, &self.basis)
    }
}
