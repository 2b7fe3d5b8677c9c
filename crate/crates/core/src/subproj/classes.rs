//! Finite stand-ins for classes of modules and complexes.
//!
//! Membership of modules in a listed class is decided up to isomorphism
//! against finite direct sums of the listed modules, using the capped
//! isomorphism search; a search that cannot decide yields
//! [`Membership::Undecided`], which callers treat conservatively.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::AlgebraRef;
use crate::complex::ChainComplex;
use crate::error::Result;
use crate::gen::{random_complex, random_exact_complex, random_free_complex, random_module, rng_from_seed};
use crate::hom::HomComplex;
use crate::module::{find_isomorphism, is_projective, is_subprojective, ModuleRep, ISO_SEARCH_MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Member,
    NotMember,
    Undecided,
}

impl Membership {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::Member
        } else {
            Self::NotMember
        }
    }

    /// Conjunction: any `NotMember` wins, then any `Undecided`.
    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (Self::NotMember, _) | (_, Self::NotMember) => Self::NotMember,
            (Self::Undecided, _) | (_, Self::Undecided) => Self::Undecided,
            _ => Self::Member,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().fold(Self::Member, Self::and)
    }

    pub fn decided(self) -> Option<bool> {
        match self {
            Self::Member => Some(true),
            Self::NotMember => Some(false),
            Self::Undecided => None,
        }
    }
}

/// A class of modules.
#[derive(Clone, Debug)]
pub enum ModuleClass {
    /// Finite direct sums of the listed modules, up to isomorphism. The zero
    /// module belongs only if it is listed.
    Listed(Vec<ModuleRep>),
    /// Projective modules. Finitely generated flat modules over a
    /// finite-dimensional algebra are projective, so this also stands for
    /// the flat class.
    Projectives,
    AllModules,
}

impl ModuleClass {
    pub fn contains(&self, x: &ModuleRep) -> Membership {
        match self {
            Self::Listed(list) => listed_member(x, list),
            Self::Projectives => Membership::from_bool(is_projective(x)),
            Self::AllModules => Membership::Member,
        }
    }

    pub fn contains_zero(&self) -> bool {
        match self {
            Self::Listed(list) => list.iter().any(ModuleRep::is_zero),
            _ => true,
        }
    }

    /// Whether the regular module belongs.
    pub fn contains_regular(&self, alg: &AlgebraRef) -> Membership {
        self.contains(&ModuleRep::regular(Arc::clone(alg)))
    }

    pub fn name(&self) -> String {
        match self {
            Self::Listed(list) => {
                let dims: Vec<String> = list.iter().map(|m| m.dim().to_string()).collect();
                format!("listed[{}]", dims.join(","))
            }
            Self::Projectives => "projectives".into(),
            Self::AllModules => "all".into(),
        }
    }
}

fn listed_member(x: &ModuleRep, list: &[ModuleRep]) -> Membership {
    if x.is_zero() {
        return Membership::from_bool(list.iter().any(ModuleRep::is_zero));
    }
    let parts: Vec<&ModuleRep> = list.iter().filter(|m| !m.is_zero()).collect();
    let mut undecided = false;
    let mut chosen = Vec::new();
    if sums_to(x, &parts, 0, x.dim(), &mut chosen, &mut undecided) {
        return Membership::Member;
    }
    if undecided {
        Membership::Undecided
    } else {
        Membership::NotMember
    }
}

/// Tries every multiset of `parts[start..]` with total dimension `left`.
fn sums_to(
    x: &ModuleRep,
    parts: &[&ModuleRep],
    start: usize,
    left: usize,
    chosen: &mut Vec<ModuleRep>,
    undecided: &mut bool,
) -> bool {
    if left == 0 {
        let sum = ModuleRep::direct_sum_all(Arc::clone(x.algebra()), chosen);
        return match find_isomorphism(x, &sum).is_isomorphic() {
            Some(b) => b,
            None => {
                *undecided = true;
                false
            }
        };
    }
    for i in start..parts.len() {
        if parts[i].dim() <= left {
            chosen.push(parts[i].clone());
            let hit = sums_to(x, parts, i, left - parts[i].dim(), chosen, undecided);
            chosen.pop();
            if hit {
                return true;
            }
        }
    }
    false
}

/// Which class of complexes is built over a module class `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// `#L`: every term in `L`.
    Termwise,
    /// `C^b(L)`. Every complex here has finite support, so this coincides
    /// with `Termwise`.
    Bounded,
    /// `C^-(L)`. Identical to `Bounded` for finite-support complexes.
    BoundedBelow,
    /// `L̃`: exact with every cycle module in `L`.
    ExactWithCycles,
    /// `dg L̃` relative to the probes of a universe; an under-approximation.
    DgProbe,
}

#[derive(Clone, Debug)]
pub struct ClassSpec {
    pub kind: ClassKind,
    pub base: ModuleClass,
}

impl ClassSpec {
    pub fn new(kind: ClassKind, base: ModuleClass) -> Self {
        Self { kind, base }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniverseParams {
    pub seed: u64,
    pub max_dim: usize,
    pub max_window: usize,
    /// Random modules drawn.
    pub modules: usize,
    /// Random complexes drawn, half of them exact.
    pub complexes: usize,
}

/// A deterministic finite pool of modules and complexes.
///
/// Modules: zero, the regular module, its cyclic submodules and their
/// quotients, the injective cogenerator, random modules, and every term and
/// cycle module of the pooled complexes, deduplicated up to isomorphism.
/// Complexes: disks and stalks on the structured modules plus random and
/// random exact complexes.
#[derive(Clone, Debug)]
pub struct ProbeUniverse {
    algebra: AlgebraRef,
    params: UniverseParams,
    modules: Vec<ModuleRep>,
    complexes: Vec<ChainComplex>,
}

impl ProbeUniverse {
    pub fn new(algebra: &AlgebraRef, params: UniverseParams) -> Result<Self> {
        let mut rng = rng_from_seed(params.seed);
        let structured = structured_modules(algebra);
        let mut modules = structured.clone();
        for _ in 0..params.modules {
            modules.push(random_module(algebra, params.max_dim, &mut rng)?);
        }
        let mut complexes = Vec::new();
        for m in structured.iter().filter(|m| !m.is_zero()) {
            complexes.push(ChainComplex::stalk(m, 0));
            complexes.push(ChainComplex::disk(m, 0));
        }
        let w = params.max_window.max(1);
        for i in 0..params.complexes {
            let lo = rng.gen_range(-1..=1);
            let x = match i % 4 {
                0 | 2 if w >= 2 => random_exact_complex(algebra, lo, rng.gen_range(2..=w), params.max_dim, &mut rng)?,
                1 => random_complex(algebra, lo, rng.gen_range(1..=w), params.max_dim, &mut rng)?,
                3 => {
                    let rank = (params.max_dim / algebra.dim()).max(1);
                    random_free_complex(algebra, lo, rng.gen_range(1..=w), rank, &mut rng)
                }
                _ => random_complex(algebra, lo, rng.gen_range(1..=w), params.max_dim, &mut rng)?,
            };
            if x.terms().iter().all(|t| t.dim() <= ISO_SEARCH_MAX_DIM) {
                complexes.push(x.trim());
            }
        }
        for x in &complexes {
            for n in x.degrees() {
                modules.push(x.term(n).clone());
                modules.push(x.cycles(n).0);
            }
        }
        let modules = dedupe_up_to_iso(modules);
        Ok(Self {
            algebra: Arc::clone(algebra),
            params,
            modules,
            complexes,
        })
    }

    /// A universe with no random members.
    pub fn degenerate(algebra: &AlgebraRef) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            params: UniverseParams {
                seed: 0,
                max_dim: 0,
                max_window: 0,
                modules: 0,
                complexes: 0,
            },
            modules: vec![ModuleRep::zero(Arc::clone(algebra))],
            complexes: vec![ChainComplex::zero(Arc::clone(algebra))],
        }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }
    pub fn params(&self) -> UniverseParams {
        self.params
    }
    pub fn modules(&self) -> &[ModuleRep] {
        &self.modules
    }
    pub fn complexes(&self) -> &[ChainComplex] {
        &self.complexes
    }

    /// Universe modules that belong to `class`; listed modules are included
    /// even when the pool has no copy.
    pub fn module_members(&self, class: &ModuleClass) -> Vec<ModuleRep> {
        let mut out: Vec<ModuleRep> = match class {
            ModuleClass::Listed(list) => list.clone(),
            _ => Vec::new(),
        };
        for m in &self.modules {
            if class.contains(m) == Membership::Member {
                out.push(m.clone());
            }
        }
        dedupe_up_to_iso(out)
    }

    /// The exact complexes of the pool whose cycles lie in the
    /// subprojectivity domain of `members`.
    pub fn dg_probes(&self, members: &[ModuleRep]) -> Result<Vec<ChainComplex>> {
        let mut out = Vec::new();
        for g in &self.complexes {
            if g.is_empty() || !g.is_exact() {
                continue;
            }
            let mut ok = true;
            for n in g.degrees() {
                if !in_domain(members, &g.cycles(n).0)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.push(g.clone());
                out.push(g.shift(1));
            }
        }
        Ok(out)
    }
}

/// Zero, the regular module, the linear dual of the opposite regular
/// module, and two rounds of cyclic submodules and their quotients.
pub fn structured_modules(alg: &AlgebraRef) -> Vec<ModuleRep> {
    let r = ModuleRep::regular(Arc::clone(alg));
    let opposite = Arc::new(alg.opposite());
    let mut out = vec![
        ModuleRep::zero(Arc::clone(alg)),
        r.clone(),
        ModuleRep::regular(opposite).dual_over(Arc::clone(alg)),
    ];
    let mut frontier = out[1..].to_vec();
    for _ in 0..2 {
        let mut next = Vec::new();
        for m in &frontier {
            for i in 0..m.dim() {
                let mut v = vec![0u32; m.dim()];
                v[i] = 1;
                let sub = m.generated_submodule(&[v]);
                if let Ok((s, _)) = m.submodule(&sub) {
                    next.push(s);
                }
                if let Ok((q, _)) = m.quotient(&sub) {
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = dedupe_up_to_iso(next);
    }
    dedupe_up_to_iso(out)
}

/// Keeps the first representative of each isomorphism class; undecided
/// pairs are kept apart.
pub fn dedupe_up_to_iso(items: Vec<ModuleRep>) -> Vec<ModuleRep> {
    let mut out: Vec<ModuleRep> = Vec::new();
    for m in items {
        let dup = out
            .iter()
            .any(|o| o.dim() == m.dim() && (*o == m || find_isomorphism(o, &m).is_isomorphic() == Some(true)));
        if !dup {
            out.push(m);
        }
    }
    out
}

/// `y` lies in the subprojectivity domain of every module of `members`.
pub fn in_domain(members: &[ModuleRep], y: &ModuleRep) -> Result<bool> {
    for l in members {
        if !is_subprojective(l, y)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn termwise(x: &ChainComplex, base: &ModuleClass) -> Membership {
    Membership::all(x.degrees().map(|n| base.contains(x.term(n))))
}

pub fn exact_with_cycles(x: &ChainComplex, base: &ModuleClass) -> Membership {
    if !x.is_exact() {
        return Membership::NotMember;
    }
    Membership::all(x.degrees().map(|n| base.contains(&x.cycles(n).0)))
}

/// Membership of `x` in the class; `DgProbe` is judged against the
/// universe's probes.
pub fn in_class(spec: &ClassSpec, x: &ChainComplex, universe: &ProbeUniverse) -> Result<Membership> {
    Ok(match spec.kind {
        ClassKind::Termwise | ClassKind::Bounded | ClassKind::BoundedBelow => termwise(x, &spec.base),
        ClassKind::ExactWithCycles => exact_with_cycles(x, &spec.base),
        ClassKind::DgProbe => dg_probe_check(x, &spec.base, universe)?,
    })
}

pub fn class_members(spec: &ClassSpec, universe: &ProbeUniverse) -> Result<Vec<ChainComplex>> {
    let mut out = Vec::new();
    for x in universe.complexes() {
        if in_class(spec, x, universe)? == Membership::Member {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Termwise membership in `base` and exactness of `Hom•(X, G)` for every
/// probe `G` of the universe that is exact with cycles in the
/// subprojectivity domain of `base`.
pub fn dg_probe_check(x: &ChainComplex, base: &ModuleClass, universe: &ProbeUniverse) -> Result<Membership> {
    let t = termwise(x, base);
    if t != Membership::Member {
        return Ok(t);
    }
    let members = universe.module_members(base);
    dg_probe_check_with(x, base, &universe.dg_probes(&members)?)
}

/// [`dg_probe_check`] against precomputed probes.
pub fn dg_probe_check_with(x: &ChainComplex, base: &ModuleClass, probes: &[ChainComplex]) -> Result<Membership> {
    let t = termwise(x, base);
    if t != Membership::Member {
        return Ok(t);
    }
    for g in probes {
        if !HomComplex::new(x, g)?.as_vector_complex().is_exact() {
            return Ok(Membership::NotMember);
        }
    }
    Ok(Membership::Member)
}

/// Smallest failure of extension closure among the universe's complexes:
/// an exact complex with cycles in `class` but some term outside it.
pub fn extension_closure_gap(class: &ModuleClass, universe: &ProbeUniverse) -> Option<ChainComplex> {
    universe
        .complexes()
        .iter()
        .find(|x| exact_with_cycles(x, class) == Membership::Member && termwise(x, class) == Membership::NotMember)
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::module::trivial_simple;

    fn dual_numbers() -> AlgebraRef {
        Arc::new(Algebra::quotient_poly(2, &[0, 0, 1]).unwrap())
    }

    fn small_universe(a: &AlgebraRef) -> ProbeUniverse {
        ProbeUniverse::new(
            a,
            UniverseParams {
                seed: 5,
                max_dim: 3,
                max_window: 3,
                modules: 4,
                complexes: 8,
            },
        )
        .unwrap()
    }

    #[test]
    fn listed_sums_up_to_iso() {
        let a = dual_numbers();
        let r = ModuleRep::regular(Arc::clone(&a));
        let s = trivial_simple(&a).unwrap();
        let class = ModuleClass::Listed(vec![ModuleRep::zero(Arc::clone(&a)), r.clone()]);
        assert_eq!(class.contains(&r.direct_sum(&r)), Membership::Member);
        assert_eq!(class.contains(&s), Membership::NotMember);
        assert_eq!(class.contains(&ModuleRep::zero(Arc::clone(&a))), Membership::Member);
        let no_zero = ModuleClass::Listed(vec![r]);
        assert_eq!(no_zero.contains(&ModuleRep::zero(Arc::clone(&a))), Membership::NotMember);
    }

    #[test]
    fn class_examples() {
        let a = dual_numbers();
        let u = small_universe(&a);
        let r = ModuleRep::regular(Arc::clone(&a));
        let s = trivial_simple(&a).unwrap();
        let zero_a = ModuleClass::Listed(vec![ModuleRep::zero(Arc::clone(&a)), r.clone()]);
        let sharp = ClassSpec::new(ClassKind::Termwise, zero_a.clone());
        assert_eq!(in_class(&sharp, &ChainComplex::disk(&r, 0), &u).unwrap(), Membership::Member);
        let tilde = ClassSpec::new(ClassKind::ExactWithCycles, zero_a);
        let q = ChainComplex::direct_sum(Arc::clone(&a), &[ChainComplex::disk(&r, 0), ChainComplex::disk(&r, 2)]);
        assert_eq!(in_class(&tilde, &q, &u).unwrap(), Membership::Member);
        let zero_only = ClassSpec::new(
            ClassKind::ExactWithCycles,
            ModuleClass::Listed(vec![ModuleRep::zero(Arc::clone(&a))]),
        );
        assert_eq!(in_class(&zero_only, &ChainComplex::stalk(&s, 0), &u).unwrap(), Membership::NotMember);
    }

    #[test]
    fn universe_is_deterministic_and_closed_under_cycles() {
        let a = dual_numbers();
        let u = small_universe(&a);
        let v = small_universe(&a);
        assert_eq!(u.modules(), v.modules());
        assert_eq!(u.complexes(), v.complexes());
        for x in u.complexes() {
            for n in x.degrees() {
                let z = x.cycles(n).0;
                assert!(u.modules().iter().any(|m| find_isomorphism(m, &z).is_isomorphic() == Some(true)));
            }
        }
    }

    #[test]
    fn bounded_complexes_pass_dg_probes() {
        let a = dual_numbers();
        let u = small_universe(&a);
        let base = ModuleClass::Listed(vec![ModuleRep::zero(Arc::clone(&a)), ModuleRep::regular(Arc::clone(&a))]);
        let spec = ClassSpec::new(ClassKind::Bounded, base.clone());
        for x in class_members(&spec, &u).unwrap() {
            assert_eq!(dg_probe_check(&x, &base, &u).unwrap(), Membership::Member);
        }
        let zero = ChainComplex::zero(Arc::clone(&a));
        assert_eq!(dg_probe_check(&zero, &base, &u).unwrap(), Membership::Member);
    }

    #[test]
    fn structured_modules_over_ut2() {
        let a: AlgebraRef = Arc::new(Algebra::upper_triangular(2, 2).unwrap());
        let ms = structured_modules(&a);
        // both simples, the two-dimensional indecomposable projective, the
        // regular module and the injective cogenerator appear
        let count = |d: usize| ms.iter().filter(|m| m.dim() == d).count();
        assert_eq!(count(1), 2);
        assert!(count(2) >= 2);
        assert_eq!(ms.iter().filter(|m| is_projective(m) && !m.is_zero()).count(), 3);
    }
}
