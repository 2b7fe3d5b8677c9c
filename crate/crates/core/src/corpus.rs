//! Built-in algebras, modules and complexes, including the socle sequence
//! `0 -> S -> R -> S -> 0` over `F_2[x]/(x^2)` and the disk map into it.

use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraRef, GroupTable};
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::io::Workspace;
use crate::linalg::FpMatrix;
use crate::module::{ModuleMap, ModuleRep};

/// Ids accepted by [`algebra_by_id`].
pub const ALGEBRA_IDS: [&str; 5] = ["f2", "f3", "f2x2", "ut2", "f2c2"];

pub fn algebra_by_id(id: &str) -> Result<AlgebraRef> {
    let a = match id {
        "f2" => Algebra::field(2)?,
        "f3" => Algebra::field(3)?,
        "f2x2" => Algebra::quotient_poly(2, &[0, 0, 1])?,
        "ut2" => Algebra::upper_triangular(2, 2)?,
        "f2c2" => Algebra::group_algebra(2, &GroupTable::cyclic(2)?)?,
        _ => return Err(Error::UnknownId(id.to_string())),
    };
    Ok(Arc::new(a))
}

fn module(a: &AlgebraRef, action: &[Vec<Vec<i64>>]) -> ModuleRep {
    let p = a.p();
    let mats = action.iter().map(|m| FpMatrix::from_rows(p, m)).collect();
    ModuleRep::new(Arc::clone(a), mats).expect("built-in modules satisfy the module axioms")
}

/// The one-dimensional module of `F_p[x]/(x^2)` with `x` acting by zero.
pub fn dual_numbers_simple(a: &AlgebraRef) -> ModuleRep {
    module(a, &[vec![vec![1]], vec![vec![0]]])
}

/// The one-dimensional module of a group algebra with every group element
/// acting by one.
pub fn group_trivial(a: &AlgebraRef) -> ModuleRep {
    let one = vec![vec![1]];
    module(a, &vec![one; a.dim()])
}

/// `(S1, S2, P2)` over upper triangular 2x2 matrices (basis `e11, e12, e22`).
/// `S1` is projective and not injective, `P2 = A e22` is its injective
/// envelope, and `S2 = P2 / S1` is injective and not projective.
pub fn ut2_modules(a: &AlgebraRef) -> (ModuleRep, ModuleRep, ModuleRep) {
    let s1 = module(a, &[vec![vec![1]], vec![vec![0]], vec![vec![0]]]);
    let s2 = module(a, &[vec![vec![0]], vec![vec![0]], vec![vec![1]]]);
    // basis (e12, e22)
    let p2 = module(
        a,
        &[
            vec![vec![1, 0], vec![0, 0]],
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![0, 0], vec![0, 1]],
        ],
    );
    (s1, s2, p2)
}

/// The socle sequence over `F_2[x]/(x^2)` and the map from a disk into it.
#[derive(Clone, Debug)]
pub struct SocleExample {
    pub algebra: AlgebraRef,
    pub s: ModuleRep,
    pub r: ModuleRep,
    /// `0 -> S -> R -> S -> 0` with `S` in degrees 2 and 0.
    pub n: ChainComplex,
    /// `disk(S, 0)`: `S` in degrees 1 and 0.
    pub disk: ChainComplex,
    /// `φ_1` is the socle inclusion, `φ_0 = 0`.
    pub phi: ChainMap,
}

pub fn socle_example() -> SocleExample {
    let algebra = algebra_by_id("f2x2").expect("built-in algebra");
    let s = dual_numbers_simple(&algebra);
    let r = ModuleRep::regular(Arc::clone(&algebra));
    let n = ChainComplex::new(
        Arc::clone(&algebra),
        0,
        vec![s.clone(), r.clone(), s.clone()],
        vec![FpMatrix::from_rows(2, &[vec![1, 0]]), FpMatrix::from_rows(2, &[vec![0], vec![1]])],
    )
    .expect("the socle sequence is a complex");
    let disk = ChainComplex::disk(&s, 0);
    let phi = ChainMap::new(
        disk.clone(),
        n.clone(),
        vec![FpMatrix::zeros(2, 1, 1), FpMatrix::from_rows(2, &[vec![0], vec![1]])],
    )
    .expect("φ commutes with the differentials");
    SocleExample {
        algebra,
        s,
        r,
        n,
        disk,
        phi,
    }
}

fn add_algebra(w: &mut Workspace, id: &str) -> AlgebraRef {
    let a = algebra_by_id(id).expect("built-in algebra");
    w.insert_algebra(id, &a);
    Arc::clone(w.algebra(id).expect("just inserted"))
}

fn add_socle_example(w: &mut Workspace) -> Result<()> {
    let ex = socle_example();
    w.insert_algebra("f2x2", &ex.algebra);
    w.insert_module("S", &ex.s)?;
    w.insert_module("R", &ex.r)?;
    w.insert_map("id_S", "S", "S", &ModuleMap::identity(&ex.s))?;
    w.insert_complex("N", &ex.n)?;
    w.insert_complex("disk_S", &ex.disk)?;
    w.insert_chain_map("phi", "disk_S", "N", &ex.phi)?;
    Ok(())
}

/// Only the socle example: `S`, `R`, `id_S`, `N`, `disk_S`, `phi`.
pub fn socle_workspace() -> Workspace {
    let mut w = Workspace::new(0);
    add_socle_example(&mut w).expect("built-in objects resolve");
    w
}

/// Every built-in algebra with its regular and simple modules, the socle
/// example, a stalk, and a contractible complex of free modules.
pub fn corpus_workspace() -> Workspace {
    let mut w = Workspace::new(0);
    add_socle_example(&mut w).expect("built-in objects resolve");
    let dn = Arc::clone(w.algebra("f2x2").expect("inserted"));
    let s = w.module("S").expect("inserted").clone();
    let r = w.module("R").expect("inserted").clone();
    let built = (|| -> Result<()> {
        w.insert_complex("stalk_S", &ChainComplex::stalk(&s, 0))?;
        w.insert_complex(
            "Q_contractible",
            &ChainComplex::direct_sum(Arc::clone(&dn), &[ChainComplex::disk(&r, 0), ChainComplex::disk(&r, 1)]),
        )?;
        for id in ["f2", "f3"] {
            let a = add_algebra(&mut w, id);
            w.insert_module(&format!("{id}_R"), &ModuleRep::regular(a))?;
        }
        let ut = add_algebra(&mut w, "ut2");
        let (s1, s2, p2) = ut2_modules(&ut);
        w.insert_module("ut2_R", &ModuleRep::regular(Arc::clone(&ut)))?;
        w.insert_module("ut2_S1", &s1)?;
        w.insert_module("ut2_S2", &s2)?;
        w.insert_module("ut2_P2", &p2)?;
        let g = add_algebra(&mut w, "f2c2");
        w.insert_module("f2c2_R", &ModuleRep::regular(Arc::clone(&g)))?;
        w.insert_module("f2c2_S", &group_trivial(&g))?;
        Ok(())
    })();
    built.expect("built-in objects resolve");
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{is_injective, is_projective};

    #[test]
    fn ut2_modules_have_the_expected_types() {
        let a = algebra_by_id("ut2").unwrap();
        let (s1, s2, p2) = ut2_modules(&a);
        assert!(is_projective(&s1) && !is_injective(&s1));
        assert!(!is_projective(&s2) && is_injective(&s2));
        assert!(is_projective(&p2) && is_injective(&p2));
    }

    #[test]
    fn socle_sequence_is_exact() {
        let ex = socle_example();
        assert!(ex.n.is_exact());
        assert_eq!(ex.n.cycles(1).0.dim(), 1);
    }

    #[test]
    fn corpus_round_trips() {
        let w = corpus_workspace();
        let text = w.to_json_string();
        assert_eq!(Workspace::from_json_str(&text).unwrap().to_json_string(), text);
        assert!(ALGEBRA_IDS.iter().all(|id| w.algebra(id).is_ok()));
    }

    #[test]
    fn unknown_algebra() {
        assert!(matches!(algebra_by_id("z4"), Err(Error::UnknownId(_))));
    }
}
