//! Subprojectivity of chain complexes.
//!
//! A chain map `f: M -> N` factors through a projective complex iff it lifts
//! along the projective epimorphism `π: Q(N) -> N`, and also iff it is
//! null-homotopic through a homotopy whose components each factor through a
//! projective module. Both routes are computed and must agree.

pub mod classes;
pub mod construct;
pub mod theorems;

use std::sync::Arc;

use crate::complex::{ChainComplex, ChainMap, Homotopy};
use crate::error::{Error, Result};
use crate::hom::HomComplex;
use crate::linalg::{solve_particular, FpMatrix, Subspace};
use crate::module::{free_cover, is_subprojective, projective_factoring_subspace, ModuleMap, ModuleRep};
use crate::verdict::{RankEvidence, Verdict, Witness};

/// `Q = ⊕_n disk(F(N_n), n-1)` with `π_n = [ε_n, d_{n+1} ε_{n+1}]`.
///
/// `Q_n = F(N_n) ⊕ F(N_{n+1})`: the top copy from the disk indexed `n-1`
/// followed by the bottom copy from the disk indexed `n`.
#[derive(Clone, Debug)]
pub struct ProjectiveEpi {
    pub q: ChainComplex,
    pub pi: ChainMap,
}

pub fn projective_epi(n: &ChainComplex) -> ProjectiveEpi {
    let alg = Arc::clone(n.algebra());
    let p = n.p();
    if n.is_empty() {
        let q = ChainComplex::zero(Arc::clone(&alg));
        let pi = ChainMap::zero(&q, n);
        return ProjectiveEpi { q, pi };
    }
    let (lo, hi) = (n.lo(), n.hi());
    // covers[k - lo + 1] for k in lo-1 ..= hi+1; ends are zero
    let covers: Vec<(ModuleRep, ModuleMap)> = ((lo - 1)..=(hi + 1))
        .map(|k| free_cover(n.term(k)))
        .collect();
    let cover = |k: i64| &covers[(k - lo + 1) as usize];
    let terms: Vec<ModuleRep> = ((lo - 1)..=hi).map(|k| cover(k).0.direct_sum(&cover(k + 1).0)).collect();
    let diffs: Vec<FpMatrix> = (lo..=hi)
        .map(|k| {
            let (a, b) = (cover(k - 1).0.dim(), cover(k).0.dim());
            let mut d = FpMatrix::zeros(p, a + b, b + cover(k + 1).0.dim());
            d.paste(a, 0, &FpMatrix::identity(p, b));
            d
        })
        .collect();
    let q = ChainComplex::new_unchecked(Arc::clone(&alg), lo - 1, terms, diffs);
    let pi = ChainMap::from_fn(&q, n, |k| {
        let top = cover(k).1.matrix().clone();
        let bottom = n.diff(k + 1).mul(cover(k + 1).1.matrix());
        top.hstack(&bottom)
    });
    debug_assert!(ChainMap::new(q.clone(), n.clone(), pi.components().to_vec()).is_ok());
    ProjectiveEpi { q, pi }
}

/// `β: M -> Q` and `α: Q -> N` with `Q` a projective complex and `α ∘ β = f`,
/// together with the homotopy `s` of the second route.
#[derive(Clone, Debug)]
pub struct ComplexFactorization {
    pub projective: ChainComplex,
    pub beta: ChainMap,
    pub alpha: ChainMap,
    pub homotopy: Homotopy,
}

impl ComplexFactorization {
    /// `α ∘ β = f` and `f = ds + sd`, both entrywise.
    pub fn recomposes_to(&self, f: &ChainMap) -> bool {
        self.alpha.compose(&self.beta).same_as(f) && self.homotopy.is_homotopy_for(f)
    }
}

pub type ComplexFactorVerdict = Verdict<ComplexFactorization, Witness<ChainMap>>;
pub type ComplexSubprojVerdict = Verdict<Vec<ComplexFactorization>, Witness<ChainMap>>;

/// Both factorization routes for maps `M -> N`, in the degree-0 coordinates
/// of `Hom•(M, N)`.
struct Routes {
    epi: ProjectiveEpi,
    mn: HomComplex,
    mq: HomComplex,
    /// Basis of the chain maps `M -> Q`, in `Hom•(M,Q)` coordinates.
    lifts: Vec<Vec<u32>>,
    /// Columns: `π ∘ g` for each lift basis vector.
    lift_images: FpMatrix,
    /// Basis of the homotopies with projective-factoring components.
    pf_homotopies: Vec<Vec<u32>>,
    /// Columns: `ds + sd` for each restricted homotopy.
    pf_images: FpMatrix,
}

impl Routes {
    fn new(m: &ChainComplex, n: &ChainComplex, epi: ProjectiveEpi) -> Result<Self> {
        let p = m.p();
        let mn = HomComplex::with_window(m, n, -1, 1)?;
        let mq = HomComplex::with_window(m, &epi.q, -1, 0)?;
        let lifts = mq.chain_map_space().basis().to_vec();
        let cols: Vec<Vec<u32>> = lifts
            .iter()
            .map(|g| {
                let fam = mq.family_of(0, g);
                mn.coords_of(0, |i| {
                    let k = (i - m.lo()) as usize;
                    epi.pi.component(i).mul(&fam[k])
                })
            })
            .collect();
        let lift_images = FpMatrix::from_columns(p, mn.dim(0), &cols);

        let mut pf_homotopies = Vec::new();
        for i in m.degrees() {
            let sub = projective_factoring_subspace(m.term(i), n.term(i + 1));
            pf_homotopies.extend(mn.embed_block_subspace(1, i, &sub));
        }
        let d1 = mn.diff(1);
        let cols: Vec<Vec<u32>> = pf_homotopies.iter().map(|s| d1.mul_vec(s)).collect();
        let pf_images = FpMatrix::from_columns(p, mn.dim(0), &cols);
        Ok(Self {
            epi,
            mn,
            mq,
            lifts,
            lift_images,
            pf_homotopies,
            pf_images,
        })
    }

    /// The factoring chain maps, checked to coincide across routes.
    fn factoring_space(&self) -> Result<Subspace> {
        let a = Subspace::image_of(&self.lift_images);
        let b = Subspace::image_of(&self.pf_images);
        if a != b {
            return Err(Error::Invariant(format!(
                "factorization routes disagree: lifting gives rank {}, restricted homotopies give rank {}",
                a.dim(),
                b.dim()
            )));
        }
        Ok(a)
    }

    fn certificate(&self, f: &ChainMap) -> Result<Option<ComplexFactorization>> {
        let target = self.mn.chain_map_coords(f);
        let lift = solve_particular(&self.lift_images, &target);
        let homotopy = solve_particular(&self.pf_images, &target);
        match (lift, homotopy) {
            (None, None) => Ok(None),
            (Some(c), Some(h)) => {
                let g = combine(self.mn.src().p(), self.mq.dim(0), &self.lifts, &c);
                let s = combine(self.mn.src().p(), self.mn.dim(1), &self.pf_homotopies, &h);
                let cert = ComplexFactorization {
                    projective: self.epi.q.clone(),
                    beta: self.mq.chain_map_from_coords(&g),
                    alpha: self.epi.pi.clone(),
                    homotopy: self.mn.homotopy_from_coords(&s),
                };
                if !cert.recomposes_to(f) {
                    return Err(Error::Invariant("complex factorization does not recompose".into()));
                }
                Ok(Some(cert))
            }
            (l, h) => Err(Error::Invariant(format!(
                "factorization routes disagree on a single map: lifting {}, restricted homotopy {}",
                l.is_some(),
                h.is_some()
            ))),
        }
    }
}

fn combine(p: u32, ambient: usize, basis: &[Vec<u32>], coeffs: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; ambient];
    for (v, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o = ((*o as u64 + c as u64 * x as u64) % p as u64) as u32;
        }
    }
    out
}

fn check_pair(m: &ChainComplex, n: &ChainComplex) -> Result<()> {
    if m.algebra() != n.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

/// Decides whether `f` factors through a projective complex. The positive
/// certificate carries both the lift along `π` and the restricted homotopy.
pub fn factor_through_projective_complex(f: &ChainMap) -> Result<ComplexFactorVerdict> {
    check_pair(f.src(), f.dst())?;
    let routes = Routes::new(f.src(), f.dst(), projective_epi(f.dst()))?;
    let space = routes.factoring_space()?;
    match routes.certificate(f)? {
        Some(cert) => Ok(Verdict::Holds(cert)),
        None => Ok(Verdict::Fails(Witness {
            map: f.clone(),
            ranks: RankEvidence {
                image_rank: space.dim(),
                target_rank: space.dim() + 1,
            },
        })),
    }
}

/// Whether `N` lies in the subprojectivity domain of `M` in the category of
/// complexes: every chain map `M -> N` factors through a projective complex.
pub fn is_subprojective_complex(m: &ChainComplex, n: &ChainComplex) -> Result<ComplexSubprojVerdict> {
    check_pair(m, n)?;
    let routes = Routes::new(m, n, projective_epi(n))?;
    let space = routes.factoring_space()?;
    let maps = routes.mn.chain_map_space();
    if space.dim() == maps.dim() {
        let mut certs = Vec::with_capacity(maps.dim());
        for v in maps.basis() {
            let f = routes.mn.chain_map_from_coords(v);
            certs.push(routes.certificate(&f)?.ok_or_else(|| {
                Error::Invariant("full-rank factoring space misses a chain map".into())
            })?);
        }
        return Ok(Verdict::Holds(certs));
    }
    let v = maps
        .basis()
        .iter()
        .find(|v| !space.contains(v))
        .expect("a basis vector escapes a proper subspace");
    Ok(Verdict::Fails(Witness {
        map: routes.mn.chain_map_from_coords(v),
        ranks: RankEvidence {
            image_rank: space.dim(),
            target_rank: maps.dim(),
        },
    }))
}

/// Reusable target side of many subprojectivity questions `M -> N`.
pub struct SubprojTarget {
    n: ChainComplex,
    epi: ProjectiveEpi,
}

impl SubprojTarget {
    pub fn new(n: &ChainComplex) -> Self {
        Self {
            n: n.clone(),
            epi: projective_epi(n),
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.n
    }

    /// Decision only, with both routes cross-checked; no certificates.
    pub fn holds_for(&self, m: &ChainComplex) -> Result<bool> {
        check_pair(m, &self.n)?;
        let routes = Routes::new(m, &self.n, self.epi.clone())?;
        let space = routes.factoring_space()?;
        Ok(space.dim() == routes.mn.chain_map_space().dim())
    }

    /// A chain map `M -> N` that does not factor, if one exists.
    pub fn witness_for(&self, m: &ChainComplex) -> Result<Option<Witness<ChainMap>>> {
        Ok(is_subprojective_complex(m, &self.n)?.negative().cloned())
    }
}

/// `N_{n+1}` lies in the subprojectivity domain of `M_n` for every `n`.
pub fn check_termwise(m: &ChainComplex, n: &ChainComplex) -> Result<bool> {
    check_pair(m, n)?;
    for k in m.degrees() {
        if !is_subprojective(m.term(k), n.term(k + 1))?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub termwise: bool,
    pub subprojective: bool,
    pub homotopy_classes_dim: usize,
    /// A non-factoring chain map when subprojectivity fails.
    pub witness: Option<Witness<ChainMap>>,
}

impl CrossCheck {
    /// Under the termwise condition, subprojectivity is equivalent to the
    /// vanishing of `Hom_K(M, N)`.
    pub fn consistent(&self) -> bool {
        !self.termwise || self.subprojective == (self.homotopy_classes_dim == 0)
    }
}

/// Computes both sides of the termwise equivalence independently.
pub fn cross_check_termwise(m: &ChainComplex, n: &ChainComplex) -> Result<CrossCheck> {
    let termwise = check_termwise(m, n)?;
    let verdict = is_subprojective_complex(m, n)?;
    let dim = crate::hom::homotopy_classes_dim(m, n)?;
    Ok(CrossCheck {
        termwise,
        subprojective: verdict.holds(),
        homotopy_classes_dim: dim,
        witness: verdict.negative().cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraRef};
    use crate::hom::is_contractible;
    use crate::module::{is_projective, trivial_simple};

    fn dual_numbers() -> AlgebraRef {
        Arc::new(Algebra::quotient_poly(2, &[0, 0, 1]).unwrap())
    }

    fn socle_sequence(a: &AlgebraRef) -> ChainComplex {
        let s = trivial_simple(a).unwrap();
        let r = ModuleRep::regular(Arc::clone(a));
        ChainComplex::new(
            Arc::clone(a),
            0,
            vec![s.clone(), r, s],
            vec![FpMatrix::from_rows(2, &[vec![1, 0]]), FpMatrix::from_rows(2, &[vec![0], vec![1]])],
        )
        .unwrap()
    }

    #[test]
    fn epi_of_zero_is_zero() {
        let a = dual_numbers();
        let e = projective_epi(&ChainComplex::zero(a));
        assert!(e.q.is_empty());
    }

    #[test]
    fn epi_of_stalk_is_a_disk() {
        let a = dual_numbers();
        let s = trivial_simple(&a).unwrap();
        let e = projective_epi(&ChainComplex::stalk(&s, 0));
        assert_eq!((e.q.lo(), e.q.hi()), (-1, 0));
        assert_eq!(e.q.term(0).dim(), 2);
        assert_eq!(e.q.term(-1).dim(), 2);
        assert!(e.pi.component_map(0).is_surjective());
    }

    #[test]
    fn epi_is_surjective_onto_projective_contractible() {
        let a = dual_numbers();
        let n = socle_sequence(&a);
        let e = projective_epi(&n);
        assert!(is_contractible(&e.q));
        for k in e.q.degrees() {
            assert!(is_projective(e.q.term(k)));
        }
        for k in n.degrees() {
            assert!(e.pi.component_map(k).is_surjective());
        }
    }

    #[test]
    fn socle_disk_example() {
        let a = dual_numbers();
        let n = socle_sequence(&a);
        let s = n.term(0).clone();
        let d = ChainComplex::disk(&s, 0);
        let v = is_subprojective_complex(&d, &n).unwrap();
        let certs = v.positive().expect("disk(S) maps factor");
        assert!(!certs.is_empty());
        let (z1, _) = n.cycles(1);
        assert!(!is_subprojective(&s, &z1).unwrap().holds());
    }

    #[test]
    fn phi_factors_with_both_certificates() {
        let a = dual_numbers();
        let n = socle_sequence(&a);
        let d = ChainComplex::disk(n.term(0), 0);
        let phi = ChainMap::new(
            d,
            n,
            vec![FpMatrix::zeros(2, 1, 1), FpMatrix::from_rows(2, &[vec![0], vec![1]])],
        )
        .unwrap();
        let v = factor_through_projective_complex(&phi).unwrap();
        assert!(v.positive().unwrap().recomposes_to(&phi));
    }

    #[test]
    fn identity_of_stalk_does_not_factor() {
        let a = dual_numbers();
        let s = trivial_simple(&a).unwrap();
        let x = ChainComplex::stalk(&s, 0);
        let v = factor_through_projective_complex(&ChainMap::identity(&x)).unwrap();
        let w = v.negative().unwrap();
        assert!(w.ranks.image_rank < w.ranks.target_rank);
        let v = is_subprojective_complex(&x, &x).unwrap();
        assert!(!v.holds());
    }

    #[test]
    fn anything_into_projective_complex() {
        let a = dual_numbers();
        let n = socle_sequence(&a);
        let q = projective_epi(&n).q;
        assert!(is_subprojective_complex(&n, &q).unwrap().holds());
        assert!(SubprojTarget::new(&q).holds_for(&n).unwrap());
    }

    #[test]
    fn stalk_of_regular_detects_exactness() {
        let a = dual_numbers();
        let r = ModuleRep::regular(Arc::clone(&a));
        let n = socle_sequence(&a);
        for k in -1..=3 {
            assert!(is_subprojective_complex(&ChainComplex::stalk(&r, k), &n).unwrap().holds());
        }
        let s = ChainComplex::stalk(n.term(0), 0);
        assert!(!is_subprojective_complex(&ChainComplex::stalk(&r, 0), &s).unwrap().holds());
    }

    #[test]
    fn termwise_cross_check() {
        let a = dual_numbers();
        let r = ModuleRep::regular(Arc::clone(&a));
        let n = socle_sequence(&a);
        let m = ChainComplex::disk(&r, 0);
        let c = cross_check_termwise(&m, &n).unwrap();
        assert!(c.termwise && c.subprojective && c.homotopy_classes_dim == 0);
        let s = ChainComplex::stalk(n.term(0), 0);
        let c = cross_check_termwise(&ChainComplex::stalk(&r, 0), &s).unwrap();
        assert!(c.termwise && !c.subprojective && c.homotopy_classes_dim == 1);
        assert!(c.consistent());
    }
}
