//! Finite-support chain complexes `d_n: X_n -> X_{n-1}`, chain maps and
//! homotopies.

use std::sync::Arc;

use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};
use crate::module::{ModuleMap, ModuleRep};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    algebra: AlgebraRef,
    lo: i64,
    terms: Vec<ModuleRep>,
    /// `diffs[k]` is `d_{lo+k+1}: X_{lo+k+1} -> X_{lo+k}`.
    diffs: Vec<FpMatrix>,
    zero: ModuleRep,
}

impl ChainComplex {
    /// Builds and validates a complex with terms in degrees `lo, lo+1, ...`.
    /// `diffs` lists `d_{lo+1}, ..., d_{hi}`.
    pub fn new(
        algebra: AlgebraRef,
        lo: i64,
        terms: Vec<ModuleRep>,
        diffs: Vec<FpMatrix>,
    ) -> Result<Self> {
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::Shape(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        if terms.iter().any(|t| *t.algebra() != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let zero = ModuleRep::zero(Arc::clone(&algebra));
        let x = Self {
            algebra,
            lo,
            terms,
            diffs,
            zero,
        };
        x.validate()?;
        Ok(x)
    }

    pub(crate) fn new_unchecked(
        algebra: AlgebraRef,
        lo: i64,
        terms: Vec<ModuleRep>,
        diffs: Vec<FpMatrix>,
    ) -> Self {
        let zero = ModuleRep::zero(Arc::clone(&algebra));
        let x = Self {
            algebra,
            lo,
            terms,
            diffs,
            zero,
        };
        debug_assert!(x.validate().is_ok(), "{:?}", x.validate());
        x
    }

    fn validate(&self) -> Result<()> {
        for n in (self.lo + 1)..=self.hi() {
            let d = self.diff(n);
            let (src, dst) = (self.term(n), self.term(n - 1));
            if d.rows() != dst.dim() || d.cols() != src.dim() {
                return Err(Error::BadDifferential(n));
            }
            ModuleMap::new(src.clone(), dst.clone(), d.clone())
                .map_err(|_| Error::BadDifferential(n))?;
        }
        for n in (self.lo + 2)..=self.hi() {
            if !self.diff(n - 1).mul(&self.diff(n)).is_zero() {
                return Err(Error::NotAComplex(n));
            }
        }
        Ok(())
    }

    pub fn zero(algebra: AlgebraRef) -> Self {
        Self::new_unchecked(algebra, 0, Vec::new(), Vec::new())
    }

    /// `M` concentrated in degree `n`.
    pub fn stalk(m: &ModuleRep, n: i64) -> Self {
        Self::new_unchecked(Arc::clone(m.algebra()), n, vec![m.clone()], Vec::new())
    }

    /// `M` in degrees `n+1` and `n` joined by the identity.
    pub fn disk(m: &ModuleRep, n: i64) -> Self {
        Self::new_unchecked(
            Arc::clone(m.algebra()),
            n,
            vec![m.clone(), m.clone()],
            vec![FpMatrix::identity(m.p(), m.dim())],
        )
    }

    /// Degreewise direct sum with block-diagonal differentials.
    pub fn direct_sum(algebra: AlgebraRef, parts: &[ChainComplex]) -> Self {
        let nonempty: Vec<&ChainComplex> = parts.iter().filter(|x| !x.terms.is_empty()).collect();
        if nonempty.is_empty() {
            return Self::zero(algebra);
        }
        let lo = nonempty.iter().map(|x| x.lo).min().unwrap();
        let hi = nonempty.iter().map(|x| x.hi()).max().unwrap();
        let terms = (lo..=hi)
            .map(|n| {
                let ts: Vec<ModuleRep> = parts.iter().map(|x| x.term(n).clone()).collect();
                ModuleRep::direct_sum_all(Arc::clone(&algebra), &ts)
            })
            .collect();
        let diffs = ((lo + 1)..=hi)
            .map(|n| {
                parts
                    .iter()
                    .fold(FpMatrix::zeros(algebra.p(), 0, 0), |acc, x| acc.block_diag(&x.diff(n)))
            })
            .collect();
        Self::new_unchecked(algebra, lo, terms, diffs)
    }

    /// `X[n]`: `X_{i-n}` in degree `i` with differential `(-1)^n d_{i-n}`.
    pub fn shift(&self, n: i64) -> Self {
        let diffs = if n.rem_euclid(2) == 1 {
            self.diffs.iter().map(FpMatrix::neg).collect()
        } else {
            self.diffs.clone()
        };
        Self::new_unchecked(Arc::clone(&self.algebra), self.lo + n, self.terms.clone(), diffs)
    }

    /// Drops zero terms at either end of the window.
    pub fn trim(&self) -> Self {
        let first = self.terms.iter().position(|t| !t.is_zero());
        let Some(first) = first else {
            return Self::zero(Arc::clone(&self.algebra));
        };
        let last = self.terms.iter().rposition(|t| !t.is_zero()).unwrap();
        Self::new_unchecked(
            Arc::clone(&self.algebra),
            self.lo + first as i64,
            self.terms[first..=last].to_vec(),
            self.diffs[first..last].to_vec(),
        )
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }
    pub fn p(&self) -> u32 {
        self.algebra.p()
    }
    /// Lowest degree of the support window.
    pub fn lo(&self) -> i64 {
        self.lo
    }
    /// Highest degree of the window (`lo - 1` when empty).
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }
    pub fn terms(&self) -> &[ModuleRep] {
        &self.terms
    }
    pub fn diffs(&self) -> &[FpMatrix] {
        &self.diffs
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(ModuleRep::is_zero)
    }

    pub fn in_window(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi()
    }

    /// Term in degree `n` (the zero module outside the window).
    pub fn term(&self, n: i64) -> &ModuleRep {
        if self.in_window(n) {
            &self.terms[(n - self.lo) as usize]
        } else {
            &self.zero
        }
    }

    /// `d_n: X_n -> X_{n-1}`, a zero matrix of the right shape outside.
    pub fn diff(&self, n: i64) -> FpMatrix {
        if n > self.lo && n <= self.hi() {
            self.diffs[(n - self.lo - 1) as usize].clone()
        } else {
            FpMatrix::zeros(self.p(), self.term(n - 1).dim(), self.term(n).dim())
        }
    }

    pub fn diff_map(&self, n: i64) -> ModuleMap {
        ModuleMap::new_unchecked(self.term(n).clone(), self.term(n - 1).clone(), self.diff(n))
    }

    /// `Z_n = ker d_n` with its inclusion `μ` into `X_n`.
    pub fn cycles(&self, n: i64) -> (ModuleRep, ModuleMap) {
        self.diff_map(n).kernel()
    }

    /// `B_n = im d_{n+1}` with its inclusion into `X_n`.
    pub fn boundaries(&self, n: i64) -> (ModuleRep, ModuleMap) {
        self.diff_map(n + 1).image()
    }

    /// `H_n = Z_n / B_n`, basis chosen as the standard complement of the
    /// boundaries inside the canonical cycle basis.
    pub fn homology(&self, n: i64) -> ModuleRep {
        let (z, mu) = self.cycles(n);
        let into_z = self
            .diff_map(n + 1)
            .corestrict(&mu)
            .expect("boundaries are cycles");
        let sub = Subspace::image_of(into_z.matrix());
        z.quotient(&sub).expect("boundaries form a submodule").0
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        self.term(n).dim() - self.diff(n).rank() - self.diff(n + 1).rank()
    }

    /// Exact at every degree (only window degrees can fail).
    pub fn is_exact(&self) -> bool {
        self.degrees().all(|n| self.homology_dim(n) == 0)
    }

    /// `sum (-1)^n dim X_n`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|n| {
                let d = self.term(n).dim() as i64;
                if n.rem_euclid(2) == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }
}

/// A family `f_n: X_n -> Y_n` commuting with the differentials; components
/// are stored for the degrees of the source window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    src: ChainComplex,
    dst: ChainComplex,
    components: Vec<FpMatrix>,
}

impl ChainMap {
    pub fn new(src: ChainComplex, dst: ChainComplex, components: Vec<FpMatrix>) -> Result<Self> {
        if src.algebra() != dst.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if components.len() != src.len() {
            return Err(Error::Shape(format!(
                "{} components for a source window of length {}",
                components.len(),
                src.len()
            )));
        }
        let f = Self {
            src,
            dst,
            components,
        };
        for n in f.src.degrees() {
            let c = f.component(n);
            if c.rows() != f.dst.term(n).dim() || c.cols() != f.src.term(n).dim() {
                return Err(Error::Shape(format!("component {n} has the wrong shape")));
            }
            ModuleMap::new(f.src.term(n).clone(), f.dst.term(n).clone(), c)
                .map_err(|_| Error::NotAChainMap(n))?;
        }
        for n in f.src.lo()..=(f.src.hi() + 1) {
            let lhs = f.component(n - 1).mul(&f.src.diff(n));
            let rhs = f.dst.diff(n).mul(&f.component(n));
            if lhs != rhs {
                return Err(Error::NotAChainMap(n));
            }
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(src: ChainComplex, dst: ChainComplex, components: Vec<FpMatrix>) -> Self {
        debug_assert_eq!(components.len(), src.len());
        Self {
            src,
            dst,
            components,
        }
    }

    /// Builds from a closure giving each component in the source window.
    pub(crate) fn from_fn(
        src: &ChainComplex,
        dst: &ChainComplex,
        f: impl Fn(i64) -> FpMatrix,
    ) -> Self {
        let components = src.degrees().map(f).collect();
        Self::new_unchecked(src.clone(), dst.clone(), components)
    }

    pub fn identity(x: &ChainComplex) -> Self {
        Self::from_fn(x, x, |n| FpMatrix::identity(x.p(), x.term(n).dim()))
    }

    pub fn zero(x: &ChainComplex, y: &ChainComplex) -> Self {
        Self::from_fn(x, y, |n| FpMatrix::zeros(x.p(), y.term(n).dim(), x.term(n).dim()))
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }
    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }
    pub fn components(&self) -> &[FpMatrix] {
        &self.components
    }

    pub fn component(&self, n: i64) -> FpMatrix {
        if self.src.in_window(n) {
            self.components[(n - self.src.lo()) as usize].clone()
        } else {
            FpMatrix::zeros(self.src.p(), self.dst.term(n).dim(), self.src.term(n).dim())
        }
    }

    pub fn component_map(&self, n: i64) -> ModuleMap {
        ModuleMap::new_unchecked(self.src.term(n).clone(), self.dst.term(n).clone(), self.component(n))
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        Self::from_fn(&first.src, &self.dst, |n| self.component(n).mul(&first.component(n)))
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        Self::from_fn(&self.src, &self.dst, |n| self.component(n).add(&other.component(n)))
    }

    pub fn scale(&self, c: u32) -> ChainMap {
        Self::from_fn(&self.src, &self.dst, |n| self.component(n).scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FpMatrix::is_zero)
    }

    /// Same components, same complexes.
    pub fn same_as(&self, other: &ChainMap) -> bool {
        self.src.degrees().all(|n| self.component(n) == other.component(n))
            && other.src.degrees().all(|n| self.component(n) == other.component(n))
    }
}

/// Degree +1 family `s_n: X_n -> Y_{n+1}`, stored for the source window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    src: ChainComplex,
    dst: ChainComplex,
    components: Vec<FpMatrix>,
}

impl Homotopy {
    pub fn new(src: ChainComplex, dst: ChainComplex, components: Vec<FpMatrix>) -> Result<Self> {
        if components.len() != src.len() {
            return Err(Error::Shape("one homotopy component per source degree".into()));
        }
        for (k, c) in components.iter().enumerate() {
            let n = src.lo() + k as i64;
            if c.rows() != dst.term(n + 1).dim() || c.cols() != src.term(n).dim() {
                return Err(Error::Shape(format!("homotopy component {n} has the wrong shape")));
            }
        }
        Ok(Self {
            src,
            dst,
            components,
        })
    }

    pub(crate) fn from_fn(
        src: &ChainComplex,
        dst: &ChainComplex,
        f: impl Fn(i64) -> FpMatrix,
    ) -> Self {
        let components = src.degrees().map(f).collect();
        Self {
            src: src.clone(),
            dst: dst.clone(),
            components,
        }
    }

    pub fn zero(x: &ChainComplex, y: &ChainComplex) -> Self {
        Self::from_fn(x, y, |n| FpMatrix::zeros(x.p(), y.term(n + 1).dim(), x.term(n).dim()))
    }

    pub fn src(&self) -> &ChainComplex {
        &self.src
    }
    pub fn dst(&self) -> &ChainComplex {
        &self.dst
    }
    pub fn components(&self) -> &[FpMatrix] {
        &self.components
    }

    pub fn component(&self, n: i64) -> FpMatrix {
        if self.src.in_window(n) {
            self.components[(n - self.src.lo()) as usize].clone()
        } else {
            FpMatrix::zeros(self.src.p(), self.dst.term(n + 1).dim(), self.src.term(n).dim())
        }
    }

    pub fn component_map(&self, n: i64) -> ModuleMap {
        ModuleMap::new_unchecked(self.src.term(n).clone(), self.dst.term(n + 1).clone(), self.component(n))
    }

    /// The null-homotopic map `d s + s d`, i.e. `f_n = d_{n+1} s_n + s_{n-1} d_n`.
    pub fn boundary(&self) -> ChainMap {
        ChainMap::from_fn(&self.src, &self.dst, |n| {
            self.dst
                .diff(n + 1)
                .mul(&self.component(n))
                .add(&self.component(n - 1).mul(&self.src.diff(n)))
        })
    }

    /// Checks `f_n = d_{n+1} s_n + s_{n-1} d_n` entrywise in every degree.
    pub fn is_homotopy_for(&self, f: &ChainMap) -> bool {
        self.boundary().same_as(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::module::trivial_simple;

    fn dual_numbers() -> AlgebraRef {
        Arc::new(Algebra::quotient_poly(2, &[0, 0, 1]).unwrap())
    }

    /// `0 -> S -> R -> S -> 0` in degrees 2, 1, 0.
    fn socle_sequence() -> ChainComplex {
        let a = dual_numbers();
        let s = trivial_simple(&a).unwrap();
        let r = ModuleRep::regular(Arc::clone(&a));
        // R has basis (1, x); socle = span(x), radical projection kills x
        let incl = FpMatrix::from_rows(2, &[vec![0], vec![1]]);
        let proj = FpMatrix::from_rows(2, &[vec![1, 0]]);
        ChainComplex::new(a, 0, vec![s.clone(), r, s], vec![proj, incl]).unwrap()
    }

    #[test]
    fn shift_examples() {
        let x = socle_sequence();
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(3).shift(-3), x);
        let s = x.term(0).clone();
        assert_eq!(ChainComplex::stalk(&s, 0).shift(3), ChainComplex::stalk(&s, 3));

        let a = Arc::new(Algebra::field(3).unwrap());
        let k = ModuleRep::regular(Arc::clone(&a));
        let two = ChainComplex::new(a, 0, vec![k.clone(), k], vec![FpMatrix::from_rows(3, &[vec![1]])]).unwrap();
        let sh = two.shift(1);
        assert_eq!(sh.lo(), 1);
        assert_eq!(sh.diff(2), FpMatrix::from_rows(3, &[vec![2]]));
    }

    #[test]
    fn disks_and_stalks() {
        let a = dual_numbers();
        let z = ModuleRep::zero(Arc::clone(&a));
        assert!(ChainComplex::disk(&z, 5).is_zero());
        let s = trivial_simple(&a).unwrap();
        let d = ChainComplex::disk(&s, 2);
        for n in 0..5 {
            assert_eq!(d.homology_dim(n), 0);
            assert!(d.homology(n).is_zero());
        }
        assert!(d.is_exact());
        let st = ChainComplex::stalk(&s, 0);
        assert_eq!(st.homology(0), s);
        assert_eq!(st.homology_dim(1), 0);
        assert!(!st.is_exact());
    }

    #[test]
    fn socle_sequence_is_exact() {
        let x = socle_sequence();
        assert!(x.is_exact());
        assert_eq!(x.euler_characteristic(), 0);
        assert_eq!(x.cycles(1).0.dim(), 1);
    }

    #[test]
    fn non_complex_rejected() {
        let a = Arc::new(Algebra::field(2).unwrap());
        let k = ModuleRep::regular(Arc::clone(&a));
        let one = FpMatrix::identity(2, 1);
        let err = ChainComplex::new(a, 0, vec![k.clone(), k.clone(), k], vec![one.clone(), one]).unwrap_err();
        assert!(matches!(err, Error::NotAComplex(2)));
    }

    #[test]
    fn direct_sum_of_disks() {
        let a = dual_numbers();
        let s = trivial_simple(&a).unwrap();
        let r = ModuleRep::regular(Arc::clone(&a));
        let sum = ChainComplex::direct_sum(
            Arc::clone(&a),
            &[ChainComplex::disk(&s, 0), ChainComplex::disk(&r, 1)],
        );
        assert_eq!(sum.lo(), 0);
        assert_eq!(sum.hi(), 2);
        assert_eq!(sum.term(1).dim(), 3);
        assert!(sum.is_exact());
    }

    #[test]
    fn chain_map_validation() {
        let x = socle_sequence();
        assert!(ChainMap::new(x.clone(), x.clone(), ChainMap::identity(&x).components().to_vec()).is_ok());
        let mut bad = ChainMap::identity(&x).components().to_vec();
        bad[1] = FpMatrix::zeros(2, 2, 2);
        assert!(matches!(ChainMap::new(x.clone(), x, bad), Err(Error::NotAChainMap(_))));
    }

    #[test]
    fn homotopy_boundary_is_chain_map() {
        let a = dual_numbers();
        let r = ModuleRep::regular(Arc::clone(&a));
        let d = ChainComplex::disk(&r, 0);
        // s_0 = id: R_0 -> R_1 gives d s + s d = id
        let s = Homotopy::from_fn(&d, &d, |n| {
            if n == 0 {
                FpMatrix::identity(2, 2)
            } else {
                FpMatrix::zeros(2, d.term(n + 1).dim(), d.term(n).dim())
            }
        });
        assert!(s.is_homotopy_for(&ChainMap::identity(&d)));
    }
}
