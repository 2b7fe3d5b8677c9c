//! Brute-force oracles. They enumerate matrices entry by entry and never
//! call the library's solvers, ranks or subspaces; only raw action and
//! differential entries are read from library objects.

#![allow(dead_code)]

use std::collections::HashSet;

use subproj_core::{Algebra, ChainComplex, ChainMap, FpMatrix, ModuleMap, ModuleRep};

/// Enumerated spaces larger than this are not checked.
pub const LIMIT: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub p: u32,
    pub r: usize,
    pub c: usize,
    pub e: Vec<u32>,
}

impl Mat {
    pub fn of(m: &FpMatrix) -> Self {
        Self {
            p: m.p(),
            r: m.rows(),
            c: m.cols(),
            e: m.entries().to_vec(),
        }
    }

    pub fn zero(p: u32, r: usize, c: usize) -> Self {
        Self { p, r, c, e: vec![0; r * c] }
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.c, o.r);
        let mut e = vec![0u32; self.r * o.c];
        for i in 0..self.r {
            for j in 0..o.c {
                let mut s = 0u64;
                for k in 0..self.c {
                    s += self.e[i * self.c + k] as u64 * o.e[k * o.c + j] as u64;
                }
                e[i * o.c + j] = (s % self.p as u64) as u32;
            }
        }
        Mat { p: self.p, r: self.r, c: o.c, e }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.r, self.c), (o.r, o.c));
        let e = self.e.iter().zip(&o.e).map(|(a, b)| (a + b) % self.p).collect();
        Mat { p: self.p, r: self.r, c: self.c, e }
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }
}

fn pow_capped(p: u32, k: usize) -> Option<u64> {
    (p as u64).checked_pow(k as u32).filter(|&t| t <= LIMIT)
}

/// Every `r x c` matrix over `F_p`, when there are at most [`LIMIT`].
pub fn all_matrices(p: u32, r: usize, c: usize) -> Option<Vec<Mat>> {
    let total = pow_capped(p, r * c)?;
    let mut out = Vec::with_capacity(total as usize);
    let mut e = vec![0u32; r * c];
    for _ in 0..total {
        out.push(Mat { p, r, c, e: e.clone() });
        for x in e.iter_mut() {
            *x += 1;
            if *x < p {
                break;
            }
            *x = 0;
        }
    }
    Some(out)
}

pub fn action(m: &ModuleRep) -> Vec<Mat> {
    m.action().iter().map(Mat::of).collect()
}

/// Left multiplication on the algebra itself, read off the structure
/// constants: column `j` of `e_i` is `e_i e_j`.
pub fn regular_action(a: &Algebra) -> Vec<Mat> {
    let (p, d) = (a.p(), a.dim());
    (0..d)
        .map(|i| {
            let mut m = Mat::zero(p, d, d);
            for j in 0..d {
                for k in 0..d {
                    m.e[k * d + j] = a.c(i, j, k);
                }
            }
            m
        })
        .collect()
}

/// Equivariant matrices `f` with `ρ_N(e_k) f = f ρ_M(e_k)` for every basis
/// element, by exhaustive search.
pub fn hom(p: u32, src: &[Mat], src_dim: usize, dst: &[Mat], dst_dim: usize) -> Option<Vec<Mat>> {
    let all = all_matrices(p, dst_dim, src_dim)?;
    Some(
        all.into_iter()
            .filter(|f| src.iter().zip(dst).all(|(a, b)| b.mul(f) == f.mul(a)))
            .collect(),
    )
}

pub fn module_hom(m: &ModuleRep, n: &ModuleRep) -> Option<Vec<Mat>> {
    hom(m.p(), &action(m), m.dim(), &action(n), n.dim())
}

/// Closure of a set of matrices under addition (hence under `F_p` scalars).
pub fn additive_closure(p: u32, r: usize, c: usize, gens: impl IntoIterator<Item = Mat>) -> HashSet<Mat> {
    let mut set: HashSet<Mat> = HashSet::from([Mat::zero(p, r, c)]);
    for g in gens {
        if set.contains(&g) {
            continue;
        }
        let mut next = set.clone();
        for s in &set {
            let mut t = s.clone();
            for _ in 1..p {
                t = t.add(&g);
                next.insert(t.clone());
            }
        }
        set = next;
    }
    set
}

/// Maps `M -> N` that factor through a projective. Every projective is a
/// summand of a free module, so these are the sums of composites
/// `M -> A -> N` through the regular module.
pub fn projective_factoring(m: &ModuleRep, n: &ModuleRep) -> Option<HashSet<Mat>> {
    let a = m.algebra();
    let reg = regular_action(a);
    let p = m.p();
    let into_a = hom(p, &action(m), m.dim(), &reg, a.dim())?;
    let out_of_a = hom(p, &reg, a.dim(), &action(n), n.dim())?;
    if (into_a.len() as u64) * (out_of_a.len() as u64) > LIMIT * 16 {
        return None;
    }
    let comps = out_of_a.iter().flat_map(|b| into_a.iter().map(move |g| b.mul(g)));
    Some(additive_closure(p, n.dim(), m.dim(), comps))
}

pub fn factors_through_projective(f: &ModuleMap) -> Option<bool> {
    Some(projective_factoring(f.src(), f.dst())?.contains(&Mat::of(f.matrix())))
}

pub fn is_subprojective(m: &ModuleRep, n: &ModuleRep) -> Option<bool> {
    let maps = module_hom(m, n)?;
    let pf = projective_factoring(m, n)?;
    Some(maps.iter().all(|f| pf.contains(f)))
}

/// Every tuple drawn from the given per-degree candidate lists, when the
/// product has at most [`LIMIT`] elements.
fn tuples(choices: &[Vec<Mat>]) -> Option<Vec<Vec<&Mat>>> {
    let total = choices.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64).filter(|&t| t <= LIMIT))?;
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; choices.len()];
    for _ in 0..total {
        out.push(idx.iter().zip(choices).map(|(&i, c)| &c[i]).collect());
        for (i, c) in idx.iter_mut().zip(choices) {
            *i += 1;
            if *i < c.len() {
                break;
            }
            *i = 0;
        }
    }
    Some(out)
}

/// `f_n = d^Y_{n+1} s_n + s_{n-1} d^X_n` for every degree of `X`.
pub fn is_homotopy(f: &ChainMap, s: &[&Mat]) -> bool {
    let (x, y) = (f.src(), f.dst());
    let p = x.p();
    x.degrees().all(|n| {
        let k = (n - x.lo()) as usize;
        let up = Mat::of(&y.diff(n + 1)).mul(s[k]);
        let down = if k == 0 {
            Mat::zero(p, y.term(n).dim(), x.term(n).dim())
        } else {
            s[k - 1].mul(&Mat::of(&x.diff(n)))
        };
        up.add(&down) == Mat::of(&f.component(n))
    })
}

fn homotopy_candidates(x: &ChainComplex, y: &ChainComplex, projective_only: bool) -> Option<Vec<Vec<Mat>>> {
    x.degrees()
        .map(|n| {
            let (a, b) = (x.term(n), y.term(n + 1));
            if projective_only {
                Some(projective_factoring(a, b)?.into_iter().collect())
            } else {
                module_hom(a, b)
            }
        })
        .collect()
}

/// Whether some homotopy witnesses `f ≃ 0`, by enumerating all of them.
pub fn null_homotopic(f: &ChainMap) -> Option<bool> {
    if f.src().is_empty() {
        return Some(f.is_zero());
    }
    let cands = homotopy_candidates(f.src(), f.dst(), false)?;
    Some(tuples(&cands)?.iter().any(|s| is_homotopy(f, s)))
}

/// Whether `f` is null-homotopic through a homotopy whose components each
/// factor through a projective module.
pub fn factors_through_projective_complex(f: &ChainMap) -> Option<bool> {
    if f.src().is_empty() {
        return Some(f.is_zero());
    }
    let cands = homotopy_candidates(f.src(), f.dst(), true)?;
    Some(tuples(&cands)?.iter().any(|s| is_homotopy(f, s)))
}

/// Every chain map `X -> Y`, by enumerating equivariant families.
pub fn chain_maps(x: &ChainComplex, y: &ChainComplex) -> Option<Vec<Vec<Mat>>> {
    let cands: Vec<Vec<Mat>> = x.degrees().map(|n| module_hom(x.term(n), y.term(n))).collect::<Option<_>>()?;
    let ok = |f: &[&Mat]| {
        x.degrees().skip(1).all(|n| {
            let k = (n - x.lo()) as usize;
            Mat::of(&y.diff(n)).mul(f[k]) == f[k - 1].mul(&Mat::of(&x.diff(n)))
        }) && {
            // d^Y at the bottom of X's window and above its top
            let top = (x.hi() - x.lo()) as usize;
            let lo_ok = Mat::of(&y.diff(x.lo())).mul(f[0]).is_zero();
            let hi_ok = f[top].mul(&Mat::of(&x.diff(x.hi() + 1))).is_zero();
            lo_ok && hi_ok
        }
    };
    Some(tuples(&cands)?.into_iter().filter(|f| ok(f)).map(|f| f.into_iter().cloned().collect()).collect())
}
