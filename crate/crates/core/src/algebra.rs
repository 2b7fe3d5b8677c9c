//! Finite-dimensional unital associative algebras over `F_p`, given by
//! structure constants `e_i e_j = sum_k c[i][j][k] e_k`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{add_mod, check_prime, mul_mod, neg_mod, reduce_i64, FpMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    p: u32,
    dim: usize,
    labels: Vec<String>,
    /// Flattened `c[i][j][k]` at index `(i * dim + j) * dim + k`.
    consts: Vec<u32>,
    unit: Vec<u32>,
}

pub type AlgebraRef = Arc<Algebra>;

impl Algebra {
    /// Validates a multiplication table. The unit law is checked before
    /// associativity, so a table failing both reports `BadUnit`.
    pub fn new(
        p: u32,
        labels: Vec<String>,
        consts: &[Vec<Vec<i64>>],
        unit: &[i64],
    ) -> Result<Self> {
        check_prime(p)?;
        let dim = consts.len();
        if dim == 0 {
            return Err(Error::InvalidInput("algebra dimension must be at least 1".into()));
        }
        if labels.len() != dim {
            return Err(Error::Shape(format!("{} labels for dimension {dim}", labels.len())));
        }
        if unit.len() != dim {
            return Err(Error::Shape(format!("unit has length {}, expected {dim}", unit.len())));
        }
        let mut flat = Vec::with_capacity(dim * dim * dim);
        for (i, row) in consts.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Shape(format!("c[{i}] has {} entries", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::Shape(format!("c[{i}][{j}] has {} entries", v.len())));
                }
                flat.extend(v.iter().map(|&x| reduce_i64(x, p)));
            }
        }
        let unit = unit.iter().map(|&x| reduce_i64(x, p)).collect();
        Self::from_flat(p, labels, flat, unit)
    }

    fn from_flat(p: u32, labels: Vec<String>, consts: Vec<u32>, unit: Vec<u32>) -> Result<Self> {
        let a = Self {
            p,
            dim: labels.len(),
            labels,
            consts,
            unit,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let (d, p) = (self.dim, self.p);
        for j in 0..d {
            for k in 0..d {
                let expect = u32::from(j == k);
                let mut left = 0;
                let mut right = 0;
                for i in 0..d {
                    left = add_mod(left, mul_mod(self.unit[i], self.c(i, j, k), p), p);
                    right = add_mod(right, mul_mod(self.unit[i], self.c(j, i, k), p), p);
                }
                if left != expect || right != expect {
                    return Err(Error::BadUnit(j));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for m in 0..d {
                        let mut lhs = 0;
                        let mut rhs = 0;
                        for l in 0..d {
                            lhs = add_mod(lhs, mul_mod(self.c(i, j, l), self.c(l, k, m), p), p);
                            rhs = add_mod(rhs, mul_mod(self.c(j, k, l), self.c(i, l, m), p), p);
                        }
                        if lhs != rhs {
                            return Err(Error::NonAssociative(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> u32 {
        self.consts[(i * self.dim + j) * self.dim + k]
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    /// Structure constants as a nested table.
    pub fn table(&self) -> Vec<Vec<Vec<u32>>> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| self.c(i, j, k)).collect()).collect())
            .collect()
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let (d, p) = (self.dim, self.p);
        let mut out = vec![0; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                let s = mul_mod(x[i], y[j], p);
                if s == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o = add_mod(*o, mul_mod(s, self.c(i, j, k), p), p);
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `e_i` on the algebra itself.
    pub fn left_mult(&self, i: usize) -> FpMatrix {
        let d = self.dim;
        let mut m = FpMatrix::zeros(self.p, d, d);
        for j in 0..d {
            for k in 0..d {
                m.set(k, j, self.c(i, j, k));
            }
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| (0..d).all(|k| self.c(i, j, k) == self.c(j, i, k))))
    }

    /// The opposite algebra: same basis, `c_op[i][j][k] = c[j][i][k]`.
    pub fn opposite(&self) -> Self {
        let d = self.dim;
        let mut consts = vec![0; d * d * d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    consts[(i * d + j) * d + k] = self.c(j, i, k);
                }
            }
        }
        Self::from_flat(self.p, self.labels.clone(), consts, self.unit.clone())
            .expect("opposite of a valid algebra is valid")
    }

    /// The prime field `F_p` as a one-dimensional algebra.
    pub fn field(p: u32) -> Result<Self> {
        Self::new(p, vec!["1".into()], &[vec![vec![1]]], &[1])
    }

    /// `F_p[x]/(f)` for monic `f`, with coefficients listed from the
    /// constant term up to the leading 1.
    pub fn quotient_poly(p: u32, coeffs: &[i64]) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("polynomial must have degree at least 1".into()));
        }
        let n = coeffs.len() - 1;
        if reduce_i64(coeffs[n], p) != 1 {
            return Err(Error::InvalidInput("polynomial must be monic".into()));
        }
        let low: Vec<u32> = coeffs[..n].iter().map(|&c| reduce_i64(c, p)).collect();
        // powers[k] = x^k reduced, for k < 2n - 1
        let mut powers: Vec<Vec<u32>> = Vec::with_capacity(2 * n);
        for k in 0..(2 * n).max(1) {
            if k < n {
                let mut v = vec![0; n];
                v[k] = 1;
                powers.push(v);
            } else {
                // x^k = x * x^(k-1); shift then substitute x^n = -sum a_i x^i
                let prev = &powers[k - 1];
                let top = prev[n - 1];
                let mut v = vec![0; n];
                for i in (1..n).rev() {
                    v[i] = prev[i - 1];
                }
                for i in 0..n {
                    v[i] = add_mod(v[i], mul_mod(top, neg_mod(low[i], p), p), p);
                }
                powers.push(v);
            }
        }
        let mut consts = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    consts[(i * n + j) * n + k] = powers[i + j][k];
                }
            }
        }
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let mut unit = vec![0; n];
        unit[0] = 1;
        Self::from_flat(p, labels, consts, unit)
    }

    /// Upper triangular `n x n` matrices, basis `E_ij` with `i <= j`.
    pub fn upper_triangular(p: u32, n: usize) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::InvalidInput("matrix size must be at least 1".into()));
        }
        let units: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let d = units.len();
        let index = |i: usize, j: usize| units.iter().position(|&u| u == (i, j)).unwrap();
        let mut consts = vec![0; d * d * d];
        for (a, &(i, j)) in units.iter().enumerate() {
            for (b, &(k, l)) in units.iter().enumerate() {
                if j == k {
                    consts[(a * d + b) * d + index(i, l)] = 1;
                }
            }
        }
        let mut unit = vec![0; d];
        for i in 0..n {
            unit[index(i, i)] = 1;
        }
        let labels = units.iter().map(|(i, j)| format!("e{}{}", i + 1, j + 1)).collect();
        Self::from_flat(p, labels, consts, unit)
    }

    /// Group algebra `F_p[G]` for a tabulated group of order at most 8.
    pub fn group_algebra(p: u32, group: &GroupTable) -> Result<Self> {
        check_prime(p)?;
        let n = group.order();
        let mut consts = vec![0; n * n * n];
        for g in 0..n {
            for h in 0..n {
                consts[(g * n + h) * n + group.mul(g, h)] = 1;
            }
        }
        let mut unit = vec![0; n];
        unit[group.identity()] = 1;
        Self::from_flat(p, group.names.clone(), consts, unit)
    }
}

/// Multiplication table of a small finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

pub const MAX_GROUP_ORDER: usize = 8;

impl GroupTable {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > MAX_GROUP_ORDER {
            return Err(Error::BadGroup(format!("order {n} outside 1..={MAX_GROUP_ORDER}")));
        }
        if names.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::BadGroup("table is not closed or not square".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::BadGroup("no identity element".into()))?;
        for g in 0..n {
            if !(0..n).any(|h| table[g][h] == identity && table[h][g] == identity) {
                return Err(Error::BadGroup(format!("element {g} has no inverse")));
            }
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(Error::BadGroup(format!("not associative at ({g},{h},{k})")));
                    }
                }
            }
        }
        Ok(Self {
            names,
            table,
            identity,
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n.max(1)).collect()).collect();
        Self::new((0..n).map(|i| format!("g{i}")).collect(), table)
    }

    pub fn klein_four() -> Self {
        let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        Self::new(vec!["e".into(), "a".into(), "b".into(), "ab".into()], table).unwrap()
    }

    /// `S_3` with elements as permutations of three points.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let compose = |a: &[usize; 3], b: &[usize; 3]| [a[b[0]], a[b[1]], a[b[2]]];
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let c = compose(a, b);
                        perms.iter().position(|q| *q == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        let names = ["e", "r", "r2", "s", "sr", "sr2"].map(String::from).to_vec();
        Self::new(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }
    pub fn identity(&self) -> usize {
        self.identity
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_is_valid() {
        let f2 = Algebra::field(2).unwrap();
        assert_eq!(f2.dim(), 1);
        assert!(f2.is_commutative());
    }

    #[test]
    fn swapped_squares_have_no_unit() {
        // e0*e0 = e1, e1*e1 = e0, mixed products zero
        let c = vec![
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![0, 0], vec![1, 0]],
        ];
        for unit in [[1, 0], [0, 1], [1, 1], [0, 0]] {
            let err = Algebra::new(2, vec!["a".into(), "b".into()], &c, &unit).unwrap_err();
            assert!(matches!(err, Error::BadUnit(_)), "{err}");
        }
    }

    #[test]
    fn dual_numbers_by_hand() {
        let a = Algebra::quotient_poly(2, &[0, 0, 1]).unwrap();
        assert_eq!(a.dim(), 2);
        // 1*1 = 1, 1*x = x*1 = x, x*x = 0
        assert_eq!(
            a.table(),
            vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]]
        );
        let x = [0, 1];
        assert_eq!(a.multiply(&x, &x), vec![0, 0]);
    }

    #[test]
    fn quotient_poly_reduces_high_powers() {
        // F_3[x]/(x^3 - 1): x^2 * x^2 = x^4 = x
        let a = Algebra::quotient_poly(3, &[-1, 0, 0, 1]).unwrap();
        assert_eq!(a.multiply(&[0, 0, 1], &[0, 0, 1]), vec![0, 1, 0]);
        assert!(Algebra::quotient_poly(2, &[1, 0, 0]).is_err());
        assert!(Algebra::quotient_poly(2, &[1]).is_err());
    }

    #[test]
    fn upper_triangular_table() {
        let t = Algebra::upper_triangular(2, 2).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.labels(), &["e11", "e12", "e22"]);
        // e11 e12 = e12, e12 e22 = e12, e12 e11 = 0
        assert_eq!(t.multiply(&[1, 0, 0], &[0, 1, 0]), vec![0, 1, 0]);
        assert_eq!(t.multiply(&[0, 1, 0], &[0, 0, 1]), vec![0, 1, 0]);
        assert_eq!(t.multiply(&[0, 1, 0], &[1, 0, 0]), vec![0, 0, 0]);
        assert!(!t.is_commutative());
    }

    #[test]
    fn opposite_of_upper_triangular_is_lower() {
        let t = Algebra::upper_triangular(2, 2).unwrap();
        let op = t.opposite();
        // in the opposite algebra e12 * e11 = e11 e12 = e12 (lower triangular pattern)
        assert_eq!(op.multiply(&[0, 1, 0], &[1, 0, 0]), vec![0, 1, 0]);
        assert_eq!(op.multiply(&[1, 0, 0], &[0, 1, 0]), vec![0, 0, 0]);
        assert_eq!(op.opposite(), t);
    }

    #[test]
    fn opposite_of_commutative_is_identical() {
        let a = Algebra::quotient_poly(3, &[0, 0, 1]).unwrap();
        assert_eq!(a.opposite(), a);
    }

    #[test]
    fn group_algebra_c2_matches_x2_minus_1() {
        let g = Algebra::group_algebra(2, &GroupTable::cyclic(2).unwrap()).unwrap();
        let q = Algebra::quotient_poly(2, &[-1, 0, 1]).unwrap();
        // basis g0 = 1, g1 = x gives the same table
        assert_eq!(g.table(), q.table());
        assert_eq!(g.unit(), q.unit());
    }

    #[test]
    fn group_tables() {
        assert_eq!(GroupTable::symmetric3().order(), 6);
        assert_eq!(GroupTable::klein_four().order(), 4);
        assert!(GroupTable::cyclic(9).is_err());
        let bad = GroupTable::new(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]]);
        assert!(bad.is_err());
        let s3 = Algebra::group_algebra(3, &GroupTable::symmetric3()).unwrap();
        assert!(!s3.is_commutative());
    }
}
