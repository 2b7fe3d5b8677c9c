//! Degree-by-degree homotopy builders whose components factor through
//! projective modules.
//!
//! [`upward_homotopy`] climbs from the bottom of `M` into an exact `N`
//! through the cycles `Z_n(N)`; [`downward_homotopy`] descends from the top
//! of `N` out of an exact `M` through the cycles `Z_{n-1}(M)`, extending
//! along inclusions with injectivity of projectives. Both return
//! `s_n: M_n -> N_{n+1}` with `f_n = d s_n + s_{n-1} d`.

use std::fmt;

use crate::complex::{ChainMap, Homotopy};
use crate::linalg::{solve_particular, FpMatrix};
use crate::module::{factor_through_projective, hom_space_unchecked, projective_factoring_subspace, ModuleMap};

/// Why a construction stopped at a degree. Each variant names a step whose
/// success the relevant hypothesis guarantees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionFailure {
    /// The residual map does not land in the cycles.
    NotACycle(i64),
    /// The residual map does not vanish on the cycles of the source.
    NotThroughBoundaries(i64),
    /// The induced map on cycles does not factor through a projective.
    NoFactorization(i64),
    /// The projective map cannot be lifted along `N_{n+1} -> Z_n(N)`.
    NoLift(i64),
    /// The projective map cannot be extended along `Z_{n-1}(M) -> M_{n-1}`.
    NoExtension(i64),
    /// The finished family is not a homotopy for `f`.
    DoesNotRecompose,
    /// Some component fails the projective-factoring membership test.
    ComponentNotProjective(i64),
}

impl fmt::Display for ConstructionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotACycle(n) => write!(f, "residual at degree {n} does not land in Z_{n}"),
            Self::NotThroughBoundaries(n) => write!(f, "residual at degree {n} does not vanish on Z_{n}"),
            Self::NoFactorization(n) => write!(f, "no projective factorization at degree {n}"),
            Self::NoLift(n) => write!(f, "no lift at degree {n}"),
            Self::NoExtension(n) => write!(f, "no extension at degree {n}"),
            Self::DoesNotRecompose => write!(f, "homotopy does not recompose"),
            Self::ComponentNotProjective(n) => write!(f, "component {n} does not factor through a projective"),
        }
    }
}

/// `γ: P -> X` with `ε ∘ γ = α`, for `α: P -> Z` and `ε: X -> Z`.
pub fn lift_along(alpha: &ModuleMap, eps: &ModuleMap) -> Option<ModuleMap> {
    let hom = hom_space_unchecked(alpha.src(), eps.src());
    let cols: Vec<Vec<u32>> = hom.basis_matrices().iter().map(|g| eps.matrix().mul(g).to_vec()).collect();
    let a = FpMatrix::from_columns(alpha.src().p(), alpha.matrix().rows() * alpha.matrix().cols(), &cols);
    let c = solve_particular(&a, &alpha.matrix().to_vec())?;
    Some(hom.element(&c))
}

/// `γ: X -> P` with `γ ∘ μ = β`, for `β: Z -> P` and `μ: Z -> X`.
pub fn extend_along(beta: &ModuleMap, mu: &ModuleMap) -> Option<ModuleMap> {
    let hom = hom_space_unchecked(mu.dst(), beta.dst());
    let cols: Vec<Vec<u32>> = hom.basis_matrices().iter().map(|g| g.mul(mu.matrix()).to_vec()).collect();
    let a = FpMatrix::from_columns(beta.src().p(), beta.matrix().rows() * beta.matrix().cols(), &cols);
    let c = solve_particular(&a, &beta.matrix().to_vec())?;
    Some(hom.element(&c))
}

/// The equivariant `t` with `t ∘ ε = g` for a surjective `ε: X -> Z`, if `g`
/// kills `ker ε`.
pub fn descend_along(g: &ModuleMap, eps: &ModuleMap) -> Option<ModuleMap> {
    let p = g.src().p();
    let e = eps.matrix();
    let et = e.transpose();
    let gm = g.matrix();
    let mut t = FpMatrix::zeros(p, gm.rows(), e.rows());
    for r in 0..gm.rows() {
        let x = solve_particular(&et, gm.row(r))?;
        for (c, v) in x.into_iter().enumerate() {
            t.set(r, c, v);
        }
    }
    ModuleMap::new(eps.dst().clone(), g.dst().clone(), t).ok()
}

fn finish(f: &ChainMap, s: Homotopy) -> Result<Homotopy, ConstructionFailure> {
    if !s.is_homotopy_for(f) {
        return Err(ConstructionFailure::DoesNotRecompose);
    }
    for n in f.src().degrees() {
        let sub = projective_factoring_subspace(f.src().term(n), f.dst().term(n + 1));
        if !sub.contains(&s.component(n).to_vec()) {
            return Err(ConstructionFailure::ComponentNotProjective(n));
        }
    }
    Ok(s)
}

/// Builds `s` from the bottom of `M` upward, for exact `N`. At degree `n`
/// the residual `f_n - s_{n-1} d_n` lands in `Z_n(N)`, factors as `α β`
/// through a projective, and `α` lifts along `N_{n+1} -> Z_n(N)`.
pub fn upward_homotopy(f: &ChainMap) -> Result<Homotopy, ConstructionFailure> {
    let (m, n) = (f.src(), f.dst());
    let mut comps: Vec<FpMatrix> = Vec::with_capacity(m.len());
    for k in m.degrees() {
        let prev = match comps.last() {
            Some(s) => s.mul(&m.diff(k)),
            None => FpMatrix::zeros(m.p(), n.term(k).dim(), m.term(k).dim()),
        };
        let g = ModuleMap::new_unchecked(m.term(k).clone(), n.term(k).clone(), f.component(k).sub(&prev));
        let (_, mu) = n.cycles(k);
        let t = g.corestrict(&mu).ok_or(ConstructionFailure::NotACycle(k))?;
        let fact = factor_through_projective(&t)
            .positive()
            .cloned()
            .ok_or(ConstructionFailure::NoFactorization(k))?;
        let eps = n.diff_map(k + 1).corestrict(&mu).ok_or(ConstructionFailure::NotACycle(k + 1))?;
        let gamma = lift_along(&fact.alpha, &eps).ok_or(ConstructionFailure::NoLift(k))?;
        comps.push(gamma.compose(&fact.beta).matrix().clone());
    }
    let s = Homotopy::new(m.clone(), n.clone(), comps).map_err(|_| ConstructionFailure::DoesNotRecompose)?;
    finish(f, s)
}

/// Builds `s` from the top of `N` downward, for exact `M` over an algebra
/// whose projectives are injective. At degree `k` the residual
/// `f_k - d_{k+1} s_k` kills `Z_k(M)`, so it descends to `t` on
/// `Z_{k-1}(M)`; `t = α β` through a projective `P`, and `β` extends along
/// `Z_{k-1}(M) -> M_{k-1}` to `γ`, giving `s_{k-1} = α γ`.
pub fn downward_homotopy(f: &ChainMap) -> Result<Homotopy, ConstructionFailure> {
    let (m, n) = (f.src(), f.dst());
    let p = m.p();
    if m.is_empty() {
        return finish(f, Homotopy::zero(m, n));
    }
    let mut comps: Vec<FpMatrix> = m.degrees().map(|k| FpMatrix::zeros(p, n.term(k + 1).dim(), m.term(k).dim())).collect();
    let idx = |k: i64| (k - m.lo()) as usize;
    for k in (m.lo()..=m.hi()).rev() {
        // s_k is final; determine s_{k-1}
        let ds = n.diff(k + 1).mul(&comps[idx(k)]);
        let g = ModuleMap::new_unchecked(m.term(k).clone(), n.term(k).clone(), f.component(k).sub(&ds));
        if k == m.lo() {
            if !g.is_zero() {
                return Err(ConstructionFailure::NotThroughBoundaries(k));
            }
            break;
        }
        let (_, mu) = m.cycles(k - 1);
        let eps = m.diff_map(k).corestrict(&mu).ok_or(ConstructionFailure::NotACycle(k - 1))?;
        let t = descend_along(&g, &eps).ok_or(ConstructionFailure::NotThroughBoundaries(k))?;
        let fact = factor_through_projective(&t)
            .positive()
            .cloned()
            .ok_or(ConstructionFailure::NoFactorization(k))?;
        let gamma = extend_along(&fact.beta, &mu).ok_or(ConstructionFailure::NoExtension(k))?;
        comps[idx(k - 1)] = fact.alpha.compose(&gamma).matrix().clone();
    }
    let s = Homotopy::new(m.clone(), n.clone(), comps).map_err(|_| ConstructionFailure::DoesNotRecompose)?;
    finish(f, s)
}
