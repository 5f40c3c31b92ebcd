//! Exact matrices and fraction-free linear solving.
//!
//! Two entry points: a general row-reduction solver over rational functions
//! (for small systems with a full solution-set description), and a
//! fraction-free kernel extractor for the corank-one fitting systems, which
//! stays inside the polynomial ring via Bareiss determinants.

use crate::poly::{poly_det, MultiPoly};
use crate::ratfunc::RatFunc;

/// A dense matrix of rational functions.
#[derive(Clone, Debug)]
pub struct ExactMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<RatFunc>,
}

/// Outcome of solving `A·x = b`.
#[derive(Clone, Debug)]
pub enum LinearSolution {
    Unique(Vec<RatFunc>),
    /// `particular + span(kernel_basis)`.
    Underdetermined {
        particular: Vec<RatFunc>,
        kernel_basis: Vec<Vec<RatFunc>>,
    },
    Inconsistent,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFunc>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        ExactMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_polys(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Self {
        Self::new(
            rows,
            cols,
            entries.into_iter().map(RatFunc::from_poly).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![RatFunc::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = RatFunc::one();
        }
        Self::new(n, n, entries)
    }

    pub fn at(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.entries[i * self.cols + j] = v;
    }

    /// Gaussian elimination over the fraction field; returns the full
    /// solution-set description of `A·x = b`.
    pub fn solve(&self, b: &[RatFunc]) -> LinearSolution {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let m = self.rows;
        let n = self.cols;
        // Augmented matrix.
        let mut a = ExactMatrix::new(
            m,
            n + 1,
            (0..m * (n + 1))
                .map(|k| {
                    let (i, j) = (k / (n + 1), k % (n + 1));
                    if j < n {
                        self.at(i, j).clone()
                    } else {
                        b[i].clone()
                    }
                })
                .collect(),
        );
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..m).find(|&i| !a.at(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..=n {
                    let tmp = a.at(p, j).clone();
                    a.set(p, j, a.at(row, j).clone());
                    a.set(row, j, tmp);
                }
            }
            let inv = a.at(row, col).recip();
            for j in col..=n {
                let v = a.at(row, j).mul(&inv);
                a.set(row, j, v);
            }
            for i in 0..m {
                if i != row && !a.at(i, col).is_zero() {
                    let f = a.at(i, col).clone();
                    for j in col..=n {
                        let v = a.at(i, j).sub(&f.mul(a.at(row, j)));
                        a.set(i, j, v);
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == m {
                break;
            }
        }
        // Inconsistency: a zero row with nonzero rhs.
        for i in row..m {
            if !a.at(i, n).is_zero() {
                return LinearSolution::Inconsistent;
            }
        }
        let rank = pivot_cols.len();
        let mut particular = vec![RatFunc::zero(); n];
        for (r, &c) in pivot_cols.iter().enumerate() {
            particular[c] = a.at(r, n).clone();
        }
        if rank == n {
            return LinearSolution::Unique(particular);
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut kernel_basis = Vec::new();
        for &fc in &free {
            let mut v = vec![RatFunc::zero(); n];
            v[fc] = RatFunc::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = a.at(r, fc).neg();
            }
            kernel_basis.push(v);
        }
        LinearSolution::Underdetermined {
            particular,
            kernel_basis,
        }
    }
}

/// Kernel vector of an `(n−1)×n` polynomial matrix of full row rank,
/// obtained fraction-free from the signed maximal minors. Returns `None`
/// when the rank drops below `n−1` (every minor vanishes).
pub fn corank_one_kernel(m: &[Vec<MultiPoly>]) -> Option<Vec<MultiPoly>> {
    let rows = m.len();
    let n = rows + 1;
    assert!(m.iter().all(|r| r.len() == n), "matrix must be (n-1) x n");
    let mut v = Vec::with_capacity(n);
    let mut all_zero = true;
    for j in 0..n {
        let sub: Vec<Vec<MultiPoly>> = m
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let mut d = poly_det(&sub);
        if j % 2 == 1 {
            d = d.neg();
        }
        if !d.is_zero() {
            all_zero = false;
        }
        v.push(d);
    }
    if all_zero {
        None
    } else {
        Some(crate::poly::strip_common_factors(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn sc(n: i64) -> RatFunc {
        RatFunc::from_scalar(ExactScalar::from_int(n))
    }

    #[test]
    fn identity_solves_to_rhs() {
        let a = ExactMatrix::identity(3);
        let b = vec![sc(4), sc(-1), sc(7)];
        match a.solve(&b) {
            LinearSolution::Unique(x) => assert_eq!(x, b),
            other => panic!("expected unique solution, got {other:?}"),
        }
    }

    #[test]
    fn one_equation_two_unknowns_is_underdetermined() {
        // x + y = 1
        let a = ExactMatrix::new(1, 2, vec![sc(1), sc(1)]);
        match a.solve(&[sc(1)]) {
            LinearSolution::Underdetermined { kernel_basis, particular } => {
                assert_eq!(kernel_basis.len(), 1);
                // A·particular = b
                let s = particular[0].add(&particular[1]);
                assert_eq!(s, sc(1));
                let k = kernel_basis[0][0].add(&kernel_basis[0][1]);
                assert!(k.is_zero());
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_detected() {
        // x = 1, x = 2
        let a = ExactMatrix::new(2, 1, vec![sc(1), sc(1)]);
        match a.solve(&[sc(1), sc(2)]) {
            LinearSolution::Inconsistent => {}
            other => panic!("expected inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn back_substitution_verifies() {
        // 2x + y = 5, x - y = 1  =>  x = 2, y = 1
        let a = ExactMatrix::new(2, 2, vec![sc(2), sc(1), sc(1), sc(-1)]);
        match a.solve(&[sc(5), sc(1)]) {
            LinearSolution::Unique(x) => {
                for i in 0..2 {
                    let mut acc = RatFunc::zero();
                    for j in 0..2 {
                        acc = acc.add(&a.at(i, j).mul(&x[j]));
                    }
                    assert_eq!(acc, [sc(5), sc(1)][i].clone());
                }
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn corank_one_kernel_matches_hand_solution() {
        // Kernel of [[1, 2, 3], [0, 1, 1]] is spanned by (-1, -1, 1).
        let p = |n: i64| MultiPoly::from_int(n);
        let m = vec![vec![p(1), p(2), p(3)], vec![p(0), p(1), p(1)]];
        let v = corank_one_kernel(&m).unwrap();
        for r in &m {
            let mut acc = MultiPoly::zero();
            for (c, e) in r.iter().zip(&v) {
                acc = acc.add(&c.mul(e));
            }
            assert!(acc.is_zero());
        }
    }
}
