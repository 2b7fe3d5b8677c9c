//! Fixed inputs shared by the benchmarks.

use subproj_core::corpus::algebra_by_id;
use subproj_core::gen::{random_complex, random_exact_complex, random_module, rng_from_seed};
use subproj_core::{ChainComplex, FpMatrix, ModuleRep};

/// A dense `n x n` matrix over `F_p` from a fixed linear congruential stream.
pub fn dense_matrix(p: u32, n: usize) -> FpMatrix {
    let mut x: u64 = 0x2545_F491_4F6C_DD1D;
    let entries = (0..n * n)
        .map(|_| {
            x = x.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            ((x >> 33) % p as u64) as u32
        })
        .collect();
    FpMatrix::new(p, n, n, entries).expect("entries are reduced")
}

/// Two seeded modules over upper triangular 2x2 matrices.
pub fn module_pair(max_dim: usize) -> (ModuleRep, ModuleRep) {
    let a = algebra_by_id("ut2").expect("built-in");
    let mut rng = rng_from_seed(7);
    let m = random_module(&a, max_dim, &mut rng).expect("budget is positive");
    let n = random_module(&a, max_dim, &mut rng).expect("budget is positive");
    (m, n)
}

/// A seeded complex and an exact complex over `F_2[x]/(x^2)`.
pub fn complex_pair(window: usize) -> (ChainComplex, ChainComplex) {
    let a = algebra_by_id("f2x2").expect("built-in");
    let mut rng = rng_from_seed(11);
    let m = random_complex(&a, 0, window, 3, &mut rng).expect("budget is positive");
    let n = random_exact_complex(&a, 0, window.max(2), 3, &mut rng).expect("budget is positive");
    (m, n)
}
