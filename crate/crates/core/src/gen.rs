//! Seeded random modules, complexes and maps.
//!
//! Modules are cokernels, images and kernels of random equivariant maps
//! between free modules (a random point of the solution space of the
//! equivariance system), conjugated by a random change of basis.
//! Differentials are drawn from the kernel of postcomposition with the
//! previous one, so `d∘d = 0` by construction.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraRef;
use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::hom::HomComplex;
use crate::linalg::{FpMatrix, Subspace};
use crate::module::{free_cover, hom_space_unchecked, ModuleMap, ModuleRep};

const MODULE_ATTEMPTS: usize = 64;
const SURJECTION_ATTEMPTS: usize = 8;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_invertible<R: Rng>(p: u32, n: usize, rng: &mut R) -> (FpMatrix, FpMatrix) {
    loop {
        let entries = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
        let t = FpMatrix::new(p, n, n, entries).expect("entries are reduced");
        if let Some(inv) = t.inverse() {
            return (t, inv);
        }
    }
}

/// The same module in a random basis: `ρ'(a) = T ρ(a) T⁻¹`.
pub fn random_basis_change<R: Rng>(m: &ModuleRep, rng: &mut R) -> ModuleRep {
    if m.dim() == 0 {
        return m.clone();
    }
    let (t, inv) = random_invertible(m.p(), m.dim(), rng);
    let action = m.action().iter().map(|a| t.mul(a).mul(&inv)).collect();
    ModuleRep::new(Arc::clone(m.algebra()), action).expect("conjugation preserves the module axioms")
}

pub fn random_module_map<R: Rng>(m: &ModuleRep, n: &ModuleRep, rng: &mut R) -> ModuleMap {
    hom_space_unchecked(m, n).random_element(rng)
}

/// A nonzero module of dimension at most `max_dim`. The dimension is drawn
/// uniformly first; a subquotient of a free module is then padded with
/// further subquotients until it reaches that dimension.
pub fn random_module<R: Rng>(alg: &AlgebraRef, max_dim: usize, rng: &mut R) -> Result<ModuleRep> {
    if max_dim == 0 {
        return Err(Error::InvalidInput("module budget 0 admits only the zero module".into()));
    }
    let target = rng.gen_range(1..=max_dim);
    let mut m = ModuleRep::zero(Arc::clone(alg));
    for _ in 0..MODULE_ATTEMPTS {
        let part = subquotient(alg, rng);
        if part.dim() >= 1 && m.dim() + part.dim() <= target {
            m = m.direct_sum(&part);
            if m.dim() == target {
                break;
            }
        }
    }
    if m.is_zero() {
        return Err(Error::InvalidInput(format!(
            "no nonzero module of dimension <= {max_dim} found in {MODULE_ATTEMPTS} attempts"
        )));
    }
    Ok(random_basis_change(&m, rng))
}

/// Cokernel, image or kernel of a random map between free modules of rank
/// at most two.
fn subquotient<R: Rng>(alg: &AlgebraRef, rng: &mut R) -> ModuleRep {
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(1..=2);
    let src = ModuleRep::free(Arc::clone(alg), a);
    let dst = ModuleRep::free(Arc::clone(alg), b);
    let phi = random_module_map(&src, &dst, rng);
    match rng.gen_range(0..3) {
        0 => phi.cokernel().0,
        1 => phi.image().0,
        _ => phi.kernel().0,
    }
}

/// Like [`random_module`], but zero with probability `1/zero_odds`.
fn random_term<R: Rng>(alg: &AlgebraRef, max_dim: usize, zero_odds: u32, rng: &mut R) -> Result<ModuleRep> {
    if max_dim == 0 || rng.gen_ratio(1, zero_odds) {
        return Ok(ModuleRep::zero(Arc::clone(alg)));
    }
    random_module(alg, max_dim, rng)
}

/// Random differentials on fixed terms; each `d_n` is a uniform point of
/// the maps `X_n -> X_{n-1}` killed by `d_{n-1}`.
pub fn random_differentials<R: Rng>(
    alg: &AlgebraRef,
    lo: i64,
    terms: Vec<ModuleRep>,
    rng: &mut R,
) -> ChainComplex {
    let p = alg.p();
    let mut diffs: Vec<FpMatrix> = Vec::new();
    for k in 1..terms.len() {
        let hom = hom_space_unchecked(&terms[k], &terms[k - 1]);
        let basis = hom.basis_matrices();
        let allowed: Vec<Vec<u32>> = match diffs.last() {
            None => (0..basis.len())
                .map(|i| (0..basis.len()).map(|j| u32::from(i == j)).collect())
                .collect(),
            Some(prev) => {
                let cols: Vec<Vec<u32>> = basis.iter().map(|h| prev.mul(h).to_vec()).collect();
                let rows = prev.rows() * terms[k].dim();
                Subspace::kernel_of(&FpMatrix::from_columns(p, rows, &cols)).basis().to_vec()
            }
        };
        let mut d = FpMatrix::zeros(p, terms[k - 1].dim(), terms[k].dim());
        for v in &allowed {
            let c = rng.gen_range(0..p);
            if c == 0 {
                continue;
            }
            for (b, &coef) in basis.iter().zip(v) {
                if coef != 0 {
                    d = d.add(&b.scale(crate::linalg::mul_mod(c, coef, p)));
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new_unchecked(Arc::clone(alg), lo, terms, diffs)
}

/// A complex with `len` random terms starting in degree `lo`; length one
/// gives a stalk.
pub fn random_complex<R: Rng>(
    alg: &AlgebraRef,
    lo: i64,
    len: usize,
    max_dim: usize,
    rng: &mut R,
) -> Result<ChainComplex> {
    if len == 0 {
        return Ok(ChainComplex::zero(Arc::clone(alg)));
    }
    let terms = (0..len)
        .map(|k| if len == 1 || k == 0 { random_module(alg, max_dim, rng) } else { random_term(alg, max_dim, 6, rng) })
        .collect::<Result<Vec<_>>>()?;
    Ok(random_differentials(alg, lo, terms, rng))
}

/// A complex whose terms are free of random rank, with random differentials.
pub fn random_free_complex<R: Rng>(
    alg: &AlgebraRef,
    lo: i64,
    len: usize,
    max_rank: usize,
    rng: &mut R,
) -> ChainComplex {
    let terms = (0..len)
        .map(|_| ModuleRep::free(Arc::clone(alg), rng.gen_range(0..=max_rank)))
        .collect();
    random_differentials(alg, lo, terms, rng)
}

/// A surjection onto `z` from a module of dimension at most `max_dim`.
fn random_surjection<R: Rng>(z: &ModuleRep, max_dim: usize, rng: &mut R) -> Option<ModuleMap> {
    let alg = z.algebra();
    match rng.gen_range(0..4) {
        0 => {
            let (f, eps) = free_cover(z);
            (f.dim() <= max_dim).then_some(eps)
        }
        1 => (0..SURJECTION_ATTEMPTS).find_map(|_| {
            let y = random_module(alg, max_dim, rng).ok()?;
            let psi = random_module_map(&y, z, rng);
            psi.is_surjective().then_some(psi)
        }),
        2 => {
            let room = max_dim.checked_sub(z.dim()).filter(|&r| r > 0)?;
            let y = random_module(alg, room, rng).ok()?;
            let psi = random_module_map(&y, z, rng);
            let src = y.direct_sum(z);
            let m = psi.matrix().hstack(&FpMatrix::identity(z.p(), z.dim()));
            Some(ModuleMap::new(src, z.clone(), m).expect("[ψ, id] is equivariant"))
        }
        _ => None,
    }
}

/// An exact complex on at most `len` degrees from `lo`, spliced from short
/// exact sequences `0 -> Z_n -> X_n -> Z_{n-1} -> 0`. Each surjection is a
/// free cover, a random surjective map, or `[ψ, id]` on `Y ⊕ Z_{n-1}`;
/// the top term is `Z` itself so the complex closes up.
pub fn random_exact_complex<R: Rng>(
    alg: &AlgebraRef,
    lo: i64,
    len: usize,
    max_dim: usize,
    rng: &mut R,
) -> Result<ChainComplex> {
    if len < 2 {
        return Err(Error::InvalidInput("an exact complex on fewer than two degrees is zero".into()));
    }
    let first = random_module(alg, max_dim, rng)?;
    let mut terms = vec![first.clone()];
    let mut diffs: Vec<FpMatrix> = Vec::new();
    let mut z = first.clone();
    let mut mu = ModuleMap::identity(&first);
    for k in 1..len {
        let top = k + 1 == len;
        let sigma = if top {
            ModuleMap::identity(&z)
        } else if z.is_zero() {
            let y = random_term(alg, max_dim, 3, rng)?;
            ModuleMap::zero(&y, &z)
        } else {
            random_surjection(&z, max_dim, rng).unwrap_or_else(|| ModuleMap::identity(&z))
        };
        diffs.push(mu.compose(&sigma).matrix().clone());
        terms.push(sigma.src().clone());
        let (kz, kmu) = sigma.kernel();
        z = kz;
        mu = kmu;
    }
    let x = ChainComplex::new_unchecked(Arc::clone(alg), lo, terms, diffs);
    debug_assert!(x.is_exact());
    Ok(x)
}

pub fn random_chain_map<R: Rng>(x: &ChainComplex, y: &ChainComplex, rng: &mut R) -> Result<ChainMap> {
    let hc = HomComplex::with_window(x, y, -1, 0)?;
    let space = hc.chain_map_space();
    let coeffs: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..x.p())).collect();
    Ok(hc.chain_map_from_coords(&space.combine(&coeffs)))
}

pub fn gen_random_module(alg: &AlgebraRef, max_dim: usize, seed: u64) -> Result<ModuleRep> {
    random_module(alg, max_dim, &mut rng_from_seed(seed))
}

pub fn gen_random_complex(alg: &AlgebraRef, window: usize, max_dim: usize, seed: u64) -> Result<ChainComplex> {
    random_complex(alg, 0, window, max_dim, &mut rng_from_seed(seed))
}

pub fn gen_random_exact_complex(alg: &AlgebraRef, window: usize, max_dim: usize, seed: u64) -> Result<ChainComplex> {
    random_exact_complex(alg, 0, window, max_dim, &mut rng_from_seed(seed))
}
