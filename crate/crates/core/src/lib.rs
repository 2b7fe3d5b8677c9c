//! Exact linear algebra, modules and chain complexes over finite-dimensional
//! algebras over `F_p`, with decision procedures for subprojectivity.

pub mod algebra;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod gen;
pub mod hom;
pub mod linalg;
pub mod io;
pub mod module;
pub mod report;
pub mod subproj;
pub mod verdict;

pub use algebra::{Algebra, AlgebraRef, GroupTable};
pub use complex::{ChainComplex, ChainMap, Homotopy};
pub use error::{Error, Result};
pub use hom::{chain_maps, homotopy_classes_dim, is_contractible, null_homotopic, HomComplex, HomSide, VectorComplex};
pub use linalg::{FpMatrix, Subspace};
pub use module::{
    factor_through_projective, free_cover, hom_space, is_injective, is_projective, is_qf, is_subprojective,
    Factorization, HomSpace, ModuleMap, ModuleRep,
};
pub use report::{Budget, Report, Status};
pub use subproj::theorems::{run_verification, THEOREM_IDS};
pub use verdict::{RankEvidence, Verdict, Witness};
