//! Finitely generated modules over an [`Algebra`], represented by one action
//! matrix per basis element, together with equivariant maps between them.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::linalg::{solve_particular, FpMatrix, Subspace};
use crate::verdict::{RankEvidence, Verdict, Witness};

/// Left module given by its action matrices `rho(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleRep {
    algebra: AlgebraRef,
    dim: usize,
    action: Vec<FpMatrix>,
}

impl ModuleRep {
    /// Validates that the action extends to an algebra morphism.
    pub fn new(algebra: AlgebraRef, action: Vec<FpMatrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::Shape(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let dim = action.first().map_or(0, |m| m.rows());
        for (i, m) in action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim || m.p() != algebra.p() {
                return Err(Error::Shape(format!("action matrix {i} is not {dim}x{dim} over F_{}", algebra.p())));
            }
        }
        let module = Self {
            algebra,
            dim,
            action,
        };
        module.validate()?;
        Ok(module)
    }

    fn new_unchecked(algebra: AlgebraRef, dim: usize, action: Vec<FpMatrix>) -> Self {
        debug_assert!(action.iter().all(|m| m.rows() == dim));
        Self {
            algebra,
            dim,
            action,
        }
    }

    fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let p = a.p();
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = FpMatrix::zeros(p, self.dim, self.dim);
                for k in 0..d {
                    let c = a.c(i, j, k);
                    if c != 0 {
                        rhs = rhs.add(&self.action[k].scale(c));
                    }
                }
                if lhs != rhs {
                    return Err(Error::NotAModule(format!(
                        "rho(e_{i}) rho(e_{j}) differs from rho(e_{i} e_{j})"
                    )));
                }
            }
        }
        if self.act(a.unit()) != FpMatrix::identity(p, self.dim) {
            return Err(Error::NotAModule("the unit does not act as the identity".into()));
        }
        Ok(())
    }

    pub fn zero(algebra: AlgebraRef) -> Self {
        let p = algebra.p();
        let action = (0..algebra.dim()).map(|_| FpMatrix::zeros(p, 0, 0)).collect();
        Self::new_unchecked(algebra, 0, action)
    }

    /// The algebra acting on itself by left multiplication.
    pub fn regular(algebra: AlgebraRef) -> Self {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult(i)).collect();
        Self::new_unchecked(Arc::clone(&algebra), algebra.dim(), action)
    }

    /// `A^k` with the regular action on each summand.
    pub fn free(algebra: AlgebraRef, rank: usize) -> Self {
        let reg = Self::regular(Arc::clone(&algebra));
        Self::direct_sum_all(algebra, &vec![reg; rank])
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn p(&self) -> u32 {
        self.algebra.p()
    }
    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Matrix by which the algebra element with coordinates `x` acts.
    pub fn act(&self, x: &[u32]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p(), self.dim, self.dim);
        for (m, &c) in self.action.iter().zip(x) {
            if c != 0 {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    pub fn same_algebra(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert!(self.same_algebra(other), "direct sum across algebras");
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Self::new_unchecked(Arc::clone(&self.algebra), self.dim + other.dim, action)
    }

    pub fn direct_sum_all(algebra: AlgebraRef, parts: &[Self]) -> Self {
        parts
            .iter()
            .fold(Self::zero(algebra), |acc, m| acc.direct_sum(m))
    }

    /// Linear dual `Hom_{F_p}(M, F_p)`, a left module over the opposite
    /// algebra with the transposed action.
    pub fn dual(&self) -> Self {
        let op = Arc::new(self.algebra.opposite());
        self.dual_over(op)
    }

    /// Dual with the opposite algebra supplied by the caller, so that
    /// repeated duals can share one allocation.
    pub fn dual_over(&self, opposite: AlgebraRef) -> Self {
        debug_assert_eq!(*opposite, self.algebra.opposite());
        let action = self.action.iter().map(FpMatrix::transpose).collect();
        Self::new_unchecked(opposite, self.dim, action)
    }

    /// Submodule spanned by an invariant subspace, with its inclusion.
    pub fn submodule(&self, sub: &Subspace) -> Result<(ModuleRep, ModuleMap)> {
        assert_eq!(sub.ambient(), self.dim);
        let basis = sub.basis_matrix();
        let mut action = Vec::with_capacity(self.action.len());
        for (i, rho) in self.action.iter().enumerate() {
            let moved = rho.mul(&basis);
            let mut m = FpMatrix::zeros(self.p(), sub.dim(), sub.dim());
            for c in 0..sub.dim() {
                let coords = sub.coords(&moved.column(c)).ok_or_else(|| {
                    Error::NotAModule(format!("subspace is not stable under e_{i}"))
                })?;
                for (r, v) in coords.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            action.push(m);
        }
        let sub_module = Self::new_unchecked(Arc::clone(&self.algebra), sub.dim(), action);
        let incl = ModuleMap::new_unchecked(sub_module.clone(), self.clone(), basis);
        Ok((sub_module, incl))
    }

    /// Quotient by an invariant subspace. The quotient basis is the image of
    /// the standard basis vectors off the subspace's pivot positions.
    pub fn quotient(&self, sub: &Subspace) -> Result<(ModuleRep, ModuleMap)> {
        assert_eq!(sub.ambient(), self.dim);
        let p = self.p();
        let comp = sub.complement_indices();
        let qdim = comp.len();
        let mut proj = FpMatrix::zeros(p, qdim, self.dim);
        for j in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[j] = 1;
            let r = sub.reduce(&e);
            for (t, &c) in comp.iter().enumerate() {
                proj.set(t, j, r[c]);
            }
        }
        let mut lift = FpMatrix::zeros(p, self.dim, qdim);
        for (t, &c) in comp.iter().enumerate() {
            lift.set(c, t, 1);
        }
        for (i, rho) in self.action.iter().enumerate() {
            for b in sub.basis() {
                if !sub.contains(&rho.mul_vec(b)) {
                    return Err(Error::NotAModule(format!("subspace is not stable under e_{i}")));
                }
            }
        }
        let action = self.action.iter().map(|rho| proj.mul(rho).mul(&lift)).collect();
        let q = Self::new_unchecked(Arc::clone(&self.algebra), qdim, action);
        let map = ModuleMap::new_unchecked(self.clone(), q.clone(), proj);
        Ok((q, map))
    }

    /// Smallest submodule containing the given vectors.
    pub fn generated_submodule(&self, vectors: &[Vec<u32>]) -> Subspace {
        let mut space = Subspace::span(self.p(), self.dim, vectors);
        loop {
            let mut more = space.basis().to_vec();
            for rho in &self.action {
                for b in space.basis() {
                    more.push(rho.mul_vec(b));
                }
            }
            let next = Subspace::span(self.p(), self.dim, &more);
            if next.dim() == space.dim() {
                return space;
            }
            space = next;
        }
    }
}

/// An equivariant linear map `src -> dst`; `matrix` is `dst.dim x src.dim`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleMap {
    src: ModuleRep,
    dst: ModuleRep,
    matrix: FpMatrix,
}

impl ModuleMap {
    pub fn new(src: ModuleRep, dst: ModuleRep, matrix: FpMatrix) -> Result<Self> {
        if !src.same_algebra(&dst) {
            return Err(Error::AlgebraMismatch);
        }
        if matrix.rows() != dst.dim() || matrix.cols() != src.dim() || matrix.p() != src.p() {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                dst.dim(),
                src.dim()
            )));
        }
        for i in 0..src.algebra().dim() {
            if matrix.mul(&src.action[i]) != dst.action[i].mul(&matrix) {
                return Err(Error::NotEquivariant(i));
            }
        }
        Ok(Self { src, dst, matrix })
    }

    pub(crate) fn new_unchecked(src: ModuleRep, dst: ModuleRep, matrix: FpMatrix) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (dst.dim(), src.dim()));
        Self { src, dst, matrix }
    }

    pub fn identity(m: &ModuleRep) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), FpMatrix::identity(m.p(), m.dim()))
    }

    pub fn zero(src: &ModuleRep, dst: &ModuleRep) -> Self {
        Self::new_unchecked(src.clone(), dst.clone(), FpMatrix::zeros(src.p(), dst.dim(), src.dim()))
    }

    pub fn src(&self) -> &ModuleRep {
        &self.src
    }
    pub fn dst(&self) -> &ModuleRep {
        &self.dst
    }
    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        assert_eq!(first.dst.dim(), self.src.dim(), "composition shape mismatch");
        Self::new_unchecked(first.src.clone(), self.dst.clone(), self.matrix.mul(&first.matrix))
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        Self::new_unchecked(self.src.clone(), self.dst.clone(), self.matrix.add(&other.matrix))
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        Self::new_unchecked(self.src.clone(), self.dst.clone(), self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.src.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.dst.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.src.dim() == self.dst.dim() && self.is_injective()
    }

    /// Factors `self` through an injective `inclusion: W -> dst`, returning
    /// the map `src -> W`, or `None` when the image is not inside `W`.
    pub fn corestrict(&self, inclusion: &ModuleMap) -> Option<ModuleMap> {
        assert_eq!(inclusion.dst.dim(), self.dst.dim());
        let w = inclusion.src.dim();
        let mut out = FpMatrix::zeros(self.src.p(), w, self.src.dim());
        for c in 0..self.src.dim() {
            let x = solve_particular(&inclusion.matrix, &self.matrix.column(c))?;
            for (r, v) in x.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        Some(Self::new_unchecked(self.src.clone(), inclusion.src.clone(), out))
    }

    /// Kernel submodule with its inclusion.
    pub fn kernel(&self) -> (ModuleRep, ModuleMap) {
        let sub = Subspace::kernel_of(&self.matrix);
        self.src.submodule(&sub).expect("kernels are submodules")
    }

    /// Image submodule with its inclusion into `dst`.
    pub fn image(&self) -> (ModuleRep, ModuleMap) {
        let sub = Subspace::image_of(&self.matrix);
        self.dst.submodule(&sub).expect("images are submodules")
    }

    /// Cokernel with the projection from `dst`.
    pub fn cokernel(&self) -> (ModuleRep, ModuleMap) {
        let sub = Subspace::image_of(&self.matrix);
        self.dst.quotient(&sub).expect("images are submodules")
    }
}

/// The space `Hom_A(src, dst)` of equivariant maps, stored as a subspace of
/// row-major flattened `dst.dim x src.dim` matrices.
#[derive(Clone, Debug)]
pub struct HomSpace {
    src: ModuleRep,
    dst: ModuleRep,
    space: Subspace,
}

impl HomSpace {
    pub fn src(&self) -> &ModuleRep {
        &self.src
    }
    pub fn dst(&self) -> &ModuleRep {
        &self.dst
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn basis_matrices(&self) -> Vec<FpMatrix> {
        let (r, c) = (self.dst.dim(), self.src.dim());
        self.space
            .basis()
            .iter()
            .map(|v| FpMatrix::from_vec(self.src.p(), r, c, v))
            .collect()
    }

    pub fn basis(&self) -> Vec<ModuleMap> {
        self.basis_matrices()
            .into_iter()
            .map(|m| ModuleMap::new_unchecked(self.src.clone(), self.dst.clone(), m))
            .collect()
    }

    pub fn element(&self, coeffs: &[u32]) -> ModuleMap {
        let m = FpMatrix::from_vec(self.src.p(), self.dst.dim(), self.src.dim(), &self.space.combine(coeffs));
        ModuleMap::new_unchecked(self.src.clone(), self.dst.clone(), m)
    }

    /// Coordinates of an equivariant matrix in the canonical basis.
    pub fn coords(&self, m: &FpMatrix) -> Option<Vec<u32>> {
        self.space.coords(&m.to_vec())
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> ModuleMap {
        let p = self.src.p();
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..p)).collect();
        self.element(&coeffs)
    }
}

/// Canonical basis of `Hom_A(m, n)`: the kernel of the stacked commutation
/// constraints `X rho_m(e_i) - rho_n(e_i) X = 0`.
pub fn hom_space(m: &ModuleRep, n: &ModuleRep) -> Result<HomSpace> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(hom_space_unchecked(m, n))
}

pub(crate) fn hom_space_unchecked(m: &ModuleRep, n: &ModuleRep) -> HomSpace {
    let p = m.p();
    let (sd, td) = (m.dim(), n.dim());
    let vars = sd * td;
    let gens = m.algebra().dim();
    let mut constraints = FpMatrix::zeros(p, gens * vars, vars);
    for i in 0..gens {
        let rm = &m.action[i];
        let rn = &n.action[i];
        for r in 0..td {
            for c in 0..sd {
                let row = i * vars + r * sd + c;
                // (X rm)[r][c] = sum_k X[r][k] rm[k][c]
                for k in 0..sd {
                    let v = rm.get(k, c);
                    if v != 0 {
                        let col = r * sd + k;
                        let cur = constraints.get(row, col);
                        constraints.set(row, col, (cur + v) % p);
                    }
                }
                // -(rn X)[r][c] = -sum_k rn[r][k] X[k][c]
                for k in 0..td {
                    let v = rn.get(r, k);
                    if v != 0 {
                        let col = k * sd + c;
                        let cur = constraints.get(row, col);
                        constraints.set(row, col, (cur + p - v) % p);
                    }
                }
            }
        }
    }
    HomSpace {
        src: m.clone(),
        dst: n.clone(),
        space: Subspace::kernel_of(&constraints),
    }
}

/// Free module of rank `dim M` with `ε` sending the i-th generator to the
/// i-th basis vector of `M`. Not minimal, but always surjective.
pub fn free_cover(m: &ModuleRep) -> (ModuleRep, ModuleMap) {
    let alg = m.algebra();
    let d = alg.dim();
    let f = ModuleRep::free(Arc::clone(alg), m.dim());
    let mut eps = FpMatrix::zeros(m.p(), m.dim(), d * m.dim());
    for gen in 0..m.dim() {
        for j in 0..d {
            // generator `gen` times e_j maps to rho(e_j) b_gen
            let col = m.action[j].column(gen);
            for (r, v) in col.into_iter().enumerate() {
                eps.set(r, gen * d + j, v);
            }
        }
    }
    let eps = ModuleMap::new_unchecked(f.clone(), m.clone(), eps);
    (f, eps)
}

/// `g: M -> P` and `α: P -> N` with `P` projective and `α ∘ g = f`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub projective: ModuleRep,
    pub beta: ModuleMap,
    pub alpha: ModuleMap,
}

impl Factorization {
    pub fn recomposes_to(&self, f: &ModuleMap) -> bool {
        self.alpha.compose(&self.beta).matrix() == f.matrix()
    }
}

pub type FactorVerdict = Verdict<Factorization, Witness<ModuleMap>>;
pub type SubprojVerdict = Verdict<Vec<Factorization>, Witness<ModuleMap>>;

/// Postcomposition `g ↦ ε ∘ g` on `Hom(M, F(N))`, as a matrix whose
/// columns are flattened `N.dim x M.dim` matrices.
struct LiftProblem {
    cover: ModuleRep,
    eps: ModuleMap,
    lifts: HomSpace,
    images: FpMatrix,
}

impl LiftProblem {
    fn new(m: &ModuleRep, n: &ModuleRep) -> Self {
        let (cover, eps) = free_cover(n);
        let lifts = hom_space_unchecked(m, &cover);
        let cols: Vec<Vec<u32>> = lifts
            .basis_matrices()
            .iter()
            .map(|g| eps.matrix().mul(g).to_vec())
            .collect();
        let images = FpMatrix::from_columns(m.p(), n.dim() * m.dim(), &cols);
        Self {
            cover,
            eps,
            lifts,
            images,
        }
    }

    fn try_lift(&self, f: &ModuleMap) -> Option<Factorization> {
        let t = solve_particular(&self.images, &f.matrix().to_vec())?;
        Some(Factorization {
            projective: self.cover.clone(),
            beta: self.lifts.element(&t),
            alpha: self.eps.clone(),
        })
    }

    fn image_space(&self) -> Subspace {
        Subspace::image_of(&self.images)
    }
}

/// Decides whether `f: M -> N` factors through a projective module, i.e.
/// whether it lifts along the free cover of `N`.
pub fn factor_through_projective(f: &ModuleMap) -> FactorVerdict {
    let problem = LiftProblem::new(f.src(), f.dst());
    match problem.try_lift(f) {
        Some(fact) => Verdict::Holds(fact),
        None => {
            let image_rank = problem.images.rank();
            Verdict::Fails(Witness {
                map: f.clone(),
                ranks: RankEvidence {
                    image_rank,
                    target_rank: image_rank + 1,
                },
            })
        }
    }
}

/// Subspace of `Hom(M, N)` (in flattened-matrix coordinates) consisting of
/// the maps that factor through a projective.
pub fn projective_factoring_subspace(m: &ModuleRep, n: &ModuleRep) -> Subspace {
    LiftProblem::new(m, n).image_space()
}

/// Whether `N` lies in the subprojectivity domain of `M`, i.e. every map
/// `M -> N` factors through a projective.
pub fn is_subprojective(m: &ModuleRep, n: &ModuleRep) -> Result<SubprojVerdict> {
    let hom = hom_space(m, n)?;
    let problem = LiftProblem::new(m, n);
    let image = problem.image_space();
    if image.dim() == hom.dim() {
        let facts = hom
            .basis()
            .iter()
            .map(|f| problem.try_lift(f).expect("full-rank image contains every map"))
            .collect();
        return Ok(Verdict::Holds(facts));
    }
    let witness = hom
        .basis()
        .into_iter()
        .find(|f| !image.contains(&f.matrix().to_vec()))
        .expect("a basis map escapes a proper subspace");
    Ok(Verdict::Fails(Witness {
        map: witness,
        ranks: RankEvidence {
            image_rank: image.dim(),
            target_rank: hom.dim(),
        },
    }))
}

/// Projective iff the free cover splits.
pub fn is_projective(m: &ModuleRep) -> bool {
    factor_through_projective(&ModuleMap::identity(m)).holds()
}

/// Injective iff the dual module is projective over the opposite algebra.
pub fn is_injective(m: &ModuleRep) -> bool {
    is_projective(&m.dual())
}

/// Quasi-Frobenius iff the regular module is injective.
pub fn is_qf(a: &AlgebraRef) -> bool {
    is_injective(&ModuleRep::regular(Arc::clone(a)))
}

/// Largest module dimension for which isomorphism search is attempted.
pub const ISO_SEARCH_MAX_DIM: usize = 8;
/// Hom-spaces with at most this many elements are enumerated exhaustively.
pub const ISO_ENUMERATION_LIMIT: u64 = 1 << 16;
const ISO_RANDOM_TRIALS: usize = 256;

#[derive(Clone, Debug)]
pub enum IsoSearch {
    Isomorphic(ModuleMap),
    NotIsomorphic,
    Undecided,
}

impl IsoSearch {
    pub fn is_isomorphic(&self) -> Option<bool> {
        match self {
            IsoSearch::Isomorphic(_) => Some(true),
            IsoSearch::NotIsomorphic => Some(false),
            IsoSearch::Undecided => None,
        }
    }
}

/// Searches for an invertible equivariant map `m -> n`.
///
/// Cheap hom-dimension invariants are checked first. Modules above
/// [`ISO_SEARCH_MAX_DIM`] or with hom-spaces too large to enumerate (after a
/// fixed number of seeded random trials) come back `Undecided`.
pub fn find_isomorphism(m: &ModuleRep, n: &ModuleRep) -> IsoSearch {
    if !m.same_algebra(n) || m.dim() != n.dim() {
        return IsoSearch::NotIsomorphic;
    }
    if m == n {
        return IsoSearch::Isomorphic(ModuleMap::identity(m));
    }
    let hom = hom_space_unchecked(m, n);
    let k = hom.dim();
    if k != hom_space_unchecked(m, m).dim()
        || k != hom_space_unchecked(n, m).dim()
        || k != hom_space_unchecked(n, n).dim()
    {
        return IsoSearch::NotIsomorphic;
    }
    if m.dim() > ISO_SEARCH_MAX_DIM {
        return IsoSearch::Undecided;
    }
    let p = m.p() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x1505);
    for _ in 0..ISO_RANDOM_TRIALS {
        let f = hom.random_element(&mut rng);
        if f.is_isomorphism() {
            return IsoSearch::Isomorphic(f);
        }
    }
    let total = p.checked_pow(k as u32);
    match total {
        Some(total) if total <= ISO_ENUMERATION_LIMIT => {
            let mut coeffs = vec![0u32; k];
            for _ in 0..total {
                let f = hom.element(&coeffs);
                if f.is_isomorphism() {
                    return IsoSearch::Isomorphic(f);
                }
                for c in coeffs.iter_mut() {
                    *c += 1;
                    if (*c as u64) < p {
                        break;
                    }
                    *c = 0;
                }
            }
            IsoSearch::NotIsomorphic
        }
        _ => IsoSearch::Undecided,
    }
}

/// The simple module of `F_p[x]/(x^n)`-type local algebras: one dimension,
/// every basis element except the unit acting by zero. Only valid when the
/// span of the non-unit basis elements is a two-sided ideal.
pub fn trivial_simple(algebra: &AlgebraRef) -> Result<ModuleRep> {
    let p = algebra.p();
    let action = algebra
        .unit()
        .iter()
        .map(|&u| FpMatrix::new(p, 1, 1, vec![u]))
        .collect::<Result<Vec<_>>>()?;
    ModuleRep::new(Arc::clone(algebra), action)
}
