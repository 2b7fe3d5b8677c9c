//! The Hom-complex `Hom•(X, Y)` and everything computed from it: chain-map
//! spaces, null-homotopies, homotopy classes, Hom-exactness.
//!
//! `Hom•(X,Y)_n = ⊕_i Hom(X_i, Y_{i+n})` with differential
//! `(dψ)_i = d^Y_{i+n} ψ_i - (-1)^n ψ_{i-1} d^X_i`. Degree-0 cycles are the
//! chain maps, degree-0 boundaries the null-homotopic ones, and a degree-1
//! element is a homotopy `s_i: X_i -> Y_{i+1}`.

use crate::complex::{ChainComplex, ChainMap, Homotopy};
use crate::error::{Error, Result};
use crate::linalg::{solve_particular, FpMatrix, Subspace};
use crate::module::{hom_space_unchecked, HomSpace, ModuleRep};

/// A bounded complex of `F_p` vector spaces given by its differential
/// matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorComplex {
    p: u32,
    lo: i64,
    dims: Vec<usize>,
    /// `diffs[k]`: degree `lo+k+1` to `lo+k`.
    diffs: Vec<FpMatrix>,
}

impl VectorComplex {
    pub fn new(p: u32, lo: i64, dims: Vec<usize>, diffs: Vec<FpMatrix>) -> Result<Self> {
        if diffs.len() != dims.len().saturating_sub(1) {
            return Err(Error::Shape("one differential between consecutive degrees".into()));
        }
        let v = Self { p, lo, dims, diffs };
        for n in (v.lo + 1)..=v.hi() {
            let d = v.diff(n);
            if d.rows() != v.dim(n - 1) || d.cols() != v.dim(n) {
                return Err(Error::Shape(format!("differential {n} has the wrong shape")));
            }
        }
        for n in (v.lo + 2)..=v.hi() {
            if !v.diff(n - 1).mul(&v.diff(n)).is_zero() {
                return Err(Error::NotAComplex(n));
            }
        }
        Ok(v)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        if n >= self.lo && n <= self.hi() {
            self.dims[(n - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn diff(&self, n: i64) -> FpMatrix {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            FpMatrix::zeros(self.p, self.dim(n - 1), self.dim(n))
        }
    }

    pub fn cycles(&self, n: i64) -> Subspace {
        Subspace::kernel_of(&self.diff(n))
    }

    pub fn boundaries(&self, n: i64) -> Subspace {
        Subspace::image_of(&self.diff(n + 1))
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        self.dim(n) - self.diff(n).rank() - self.diff(n + 1).rank()
    }

    pub fn is_exact(&self) -> bool {
        (self.lo..=self.hi()).all(|n| self.homology_dim(n) == 0)
    }
}

struct Block {
    hom: HomSpace,
    offset: usize,
}

/// `Hom•(X, Y)` with every block expressed in canonical hom-space bases.
pub struct HomComplex {
    src: ChainComplex,
    dst: ChainComplex,
    lo: i64,
    /// `blocks[n - lo][i - src.lo]` is `Hom(X_i, Y_{i+n})`.
    blocks: Vec<Vec<Block>>,
    complex: VectorComplex,
}

impl HomComplex {
    pub fn new(x: &ChainComplex, y: &ChainComplex) -> Result<Self> {
        Self::with_window(x, y, i64::MIN, i64::MAX)
    }

    /// Materializes only the degrees in `[a, b]`. Terms there are exact;
    /// `diff(a)` is reported as zero, so homology is meaningful only strictly
    /// inside the window.
    pub fn with_window(x: &ChainComplex, y: &ChainComplex, a: i64, b: i64) -> Result<Self> {
        if x.algebra() != y.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let (lo, hi) = if x.is_empty() || y.is_empty() {
            (0, -1)
        } else {
            let (lo, hi) = ((y.lo() - x.hi()).max(a), (y.hi() - x.lo()).min(b));
            if lo > hi {
                (0, -1)
            } else {
                (lo, hi)
            }
        };
        let mut blocks = Vec::new();
        let mut dims = Vec::new();
        for n in lo..=hi {
            let mut offset = 0;
            let row: Vec<Block> = x
                .degrees()
                .map(|i| {
                    let hom = hom_space_unchecked(x.term(i), y.term(i + n));
                    let b = Block { hom, offset };
                    offset += b.hom.dim();
                    b
                })
                .collect();
            dims.push(offset);
            blocks.push(row);
        }
        let mut hc = Self {
            src: x.clone(),
            dst: y.clone(),
            lo,
            blocks,
            complex: VectorComplex {
                p: x.p(),
                lo,
                dims,
                diffs: Vec::new(),
            },
        };
        let diffs = ((lo + 1)..=hi).map(|n| hc.assemble_diff(n)).collect();
        hc.complex.diffs = diffs;
        for n in (lo + 2)..=hi {
            if !hc.complex.diff(n - 1).mul(&hc.complex.diff(n)).is_zero() {
                return Err(Error::Invariant(format!("Hom-complex differential squares to nonzero at {n}")));
            }
        }
        Ok(hc)
    }

    fn block(&self, n: i64, i: i64) -> Option<&Block> {
        if n < self.lo || n > self.complex.hi() || !self.src.in_window(i) {
            return None;
        }
        Some(&self.blocks[(n - self.lo) as usize][(i - self.src.lo()) as usize])
    }

    fn assemble_diff(&self, n: i64) -> FpMatrix {
        let p = self.src.p();
        let mut d = FpMatrix::zeros(p, self.complex.dim(n - 1), self.complex.dim(n));
        let sign_neg = n.rem_euclid(2) == 0; // -(-1)^n = -1 for even n
        for i in self.src.degrees() {
            let blk = self.block(n, i).unwrap();
            for (b, psi) in blk.hom.basis_matrices().iter().enumerate() {
                let col = blk.offset + b;
                let left = self.dst.diff(i + n).mul(psi);
                if let Some(t) = self.block(n - 1, i) {
                    for (r, v) in t.hom.space().coords_unchecked(&left.to_vec()).into_iter().enumerate() {
                        d.set(t.offset + r, col, v);
                    }
                }
                if let Some(t) = self.block(n - 1, i + 1) {
                    let mut right = psi.mul(&self.src.diff(i + 1));
                    if sign_neg {
                        right = right.neg();
                    }
                    for (r, v) in t.hom.space().coords_unchecked(&right.to_vec()).into_iter().enumerate() {
                        let cur = d.get(t.offset + r, col);
                        d.set(t.offset + r, col, (cur + v) % p);
                    }
                }
            }
        }
        d
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }
    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }
    pub fn as_vector_complex(&self) -> &VectorComplex {
        &self.complex
    }
    pub fn dim(&self, n: i64) -> usize {
        self.complex.dim(n)
    }
    pub fn diff(&self, n: i64) -> FpMatrix {
        self.complex.diff(n)
    }

    /// Coordinates of the degree-`n` family `i ↦ family(i): X_i -> Y_{i+n}`.
    /// Components must be equivariant.
    pub fn coords_of(&self, n: i64, family: impl Fn(i64) -> FpMatrix) -> Vec<u32> {
        let mut out = vec![0; self.dim(n)];
        for i in self.src.degrees() {
            if let Some(blk) = self.block(n, i) {
                let c = blk.hom.space().coords_unchecked(&family(i).to_vec());
                out[blk.offset..blk.offset + c.len()].copy_from_slice(&c);
            }
        }
        out
    }

    /// The family with the given degree-`n` coordinates, indexed by the
    /// source window.
    pub fn family_of(&self, n: i64, coords: &[u32]) -> Vec<FpMatrix> {
        let p = self.src.p();
        self.src
            .degrees()
            .map(|i| {
                let (rows, cols) = (self.dst.term(i + n).dim(), self.src.term(i).dim());
                match self.block(n, i) {
                    Some(blk) => {
                        let k = blk.hom.dim();
                        let v = blk.hom.space().combine(&coords[blk.offset..blk.offset + k]);
                        FpMatrix::from_vec(p, rows, cols, &v)
                    }
                    None => FpMatrix::zeros(p, rows, cols),
                }
            })
            .collect()
    }

    /// Subspace of a degree-`n` block, `Hom(X_i, Y_{i+n})`, as a basis of
    /// vectors in the degree-`n` coordinates of the whole Hom-complex.
    pub fn embed_block_subspace(&self, n: i64, i: i64, flat_subspace: &Subspace) -> Vec<Vec<u32>> {
        let Some(blk) = self.block(n, i) else {
            return Vec::new();
        };
        flat_subspace
            .basis()
            .iter()
            .map(|v| {
                let mut out = vec![0; self.dim(n)];
                let c = blk.hom.space().coords_unchecked(v);
                out[blk.offset..blk.offset + c.len()].copy_from_slice(&c);
                out
            })
            .collect()
    }

    pub fn chain_map_coords(&self, f: &ChainMap) -> Vec<u32> {
        self.coords_of(0, |i| f.component(i))
    }

    pub fn chain_map_from_coords(&self, coords: &[u32]) -> ChainMap {
        ChainMap::new_unchecked(self.src.clone(), self.dst.clone(), self.family_of(0, coords))
    }

    pub fn homotopy_from_coords(&self, coords: &[u32]) -> Homotopy {
        Homotopy::new(self.src.clone(), self.dst.clone(), self.family_of(1, coords))
            .expect("coordinates describe a homotopy")
    }

    /// `Z_0(Hom•(X,Y))`, i.e. the space of chain maps, in coordinates.
    pub fn chain_map_space(&self) -> Subspace {
        self.complex.cycles(0)
    }

    /// `B_0(Hom•(X,Y))`, the null-homotopic chain maps, in coordinates.
    pub fn null_homotopic_space(&self) -> Subspace {
        self.complex.boundaries(0)
    }
}

pub fn hom_complex(x: &ChainComplex, y: &ChainComplex) -> Result<HomComplex> {
    HomComplex::new(x, y)
}

/// Canonical basis of the chain maps `X -> Y`.
pub fn chain_maps(x: &ChainComplex, y: &ChainComplex) -> Result<Vec<ChainMap>> {
    let hc = HomComplex::with_window(x, y, -1, 0)?;
    Ok(hc
        .chain_map_space()
        .basis()
        .iter()
        .map(|v| hc.chain_map_from_coords(v))
        .collect())
}

/// A homotopy `s` with `f_n = d_{n+1} s_n + s_{n-1} d_n`, if one exists.
pub fn null_homotopic(f: &ChainMap) -> Option<Homotopy> {
    let hc = HomComplex::with_window(f.src(), f.dst(), 0, 1).ok()?;
    null_homotopic_in(&hc, f)
}

pub fn null_homotopic_in(hc: &HomComplex, f: &ChainMap) -> Option<Homotopy> {
    let target = hc.chain_map_coords(f);
    let s = solve_particular(&hc.diff(1), &target)?;
    Some(hc.homotopy_from_coords(&s))
}

/// `dim_{F_p} Hom_K(X, Y) = dim H_0(Hom•(X, Y))`.
pub fn homotopy_classes_dim(x: &ChainComplex, y: &ChainComplex) -> Result<usize> {
    Ok(HomComplex::with_window(x, y, -1, 1)?.as_vector_complex().homology_dim(0))
}

/// Whether the identity of `X` is null-homotopic.
pub fn is_contractible(x: &ChainComplex) -> bool {
    null_homotopic(&ChainMap::identity(x)).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomSide {
    /// `Hom(L, X_•)`
    Into,
    /// `Hom(X_•, L)`
    From,
}

/// The complex `Hom(L, X_•)` or `Hom(X_•, L)` of vector spaces. The
/// contravariant version is reindexed so that `Hom(X_n, L)` sits in degree
/// `-n` and the differential still lowers degree.
pub fn induced_hom_complex(x: &ChainComplex, l: &ModuleRep, side: HomSide) -> Result<VectorComplex> {
    if x.algebra() != l.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let p = x.p();
    if x.is_empty() {
        return VectorComplex::new(p, 0, Vec::new(), Vec::new());
    }
    match side {
        HomSide::Into => {
            let homs: Vec<HomSpace> = x.degrees().map(|n| hom_space_unchecked(l, x.term(n))).collect();
            let diffs = ((x.lo() + 1)..=x.hi())
                .map(|n| {
                    let (src, dst) = (&homs[(n - x.lo()) as usize], &homs[(n - 1 - x.lo()) as usize]);
                    let cols: Vec<Vec<u32>> = src
                        .basis_matrices()
                        .iter()
                        .map(|g| dst.space().coords_unchecked(&x.diff(n).mul(g).to_vec()))
                        .collect();
                    FpMatrix::from_columns(p, dst.dim(), &cols)
                })
                .collect();
            VectorComplex::new(p, x.lo(), homs.iter().map(HomSpace::dim).collect(), diffs)
        }
        HomSide::From => {
            // degree k holds Hom(X_{-k}, L), k from -hi to -lo
            let degs: Vec<i64> = (-x.hi()..=-x.lo()).collect();
            let homs: Vec<HomSpace> = degs.iter().map(|&k| hom_space_unchecked(x.term(-k), l)).collect();
            let diffs = (1..degs.len())
                .map(|idx| {
                    let k = degs[idx];
                    let (src, dst) = (&homs[idx], &homs[idx - 1]);
                    // ψ: X_{-k} -> L  maps to  ψ ∘ d_{-k+1}: X_{-k+1} -> L
                    let d = x.diff(-k + 1);
                    let cols: Vec<Vec<u32>> = src
                        .basis_matrices()
                        .iter()
                        .map(|g| dst.space().coords_unchecked(&g.mul(&d).to_vec()))
                        .collect();
                    FpMatrix::from_columns(p, dst.dim(), &cols)
                })
                .collect();
            VectorComplex::new(p, -x.hi(), homs.iter().map(HomSpace::dim).collect(), diffs)
        }
    }
}

/// Whether `Hom(L, X_•)` (or `Hom(X_•, L)`) is exact for every `L` listed.
pub fn hom_exactness_probes(x: &ChainComplex, probes: &[ModuleRep], side: HomSide) -> Result<bool> {
    for l in probes {
        if !induced_hom_complex(x, l, side)?.is_exact() {
            return Ok(false);
        }
    }
    Ok(true)
}
