//! Exact dense linear algebra for the 1×1 to 3×3 matrices that occur as
//! linear parts.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::ExactComplex;

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix dimension {0} outside 1..=3")]
    BadDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Square matrix of Gaussian rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SmallMatrix {
    dim: usize,
    entries: Vec<ExactComplex>,
}

/// Outcome of an exact linear solve that tolerates singular systems.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolve {
    /// A solution with every free (non-pivot) unknown set to zero.
    Solved {
        solution: Vec<ExactComplex>,
        free: Vec<usize>,
    },
    /// Right-hand side components left on the zero rows after elimination;
    /// at least one is nonzero.
    Inconsistent { witness: Vec<ExactComplex> },
}

impl SmallMatrix {
    pub fn new(dim: usize, entries: Vec<ExactComplex>) -> Result<Self, MatrixError> {
        if dim == 0 || dim > MAX_DIM {
            return Err(MatrixError::BadDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(MatrixError::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<ExactComplex>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(MatrixError::EntryCount {
                expected: dim * dim,
                got: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ExactComplex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(vec![ExactComplex::one(); dim])
    }

    pub fn diagonal(diag: Vec<ExactComplex>) -> Self {
        let dim = diag.len();
        let mut m = Self::zero(dim);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<ExactComplex>]) -> Self {
        let dim = cols.len();
        let mut m = Self::zero(dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactComplex {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactComplex) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[ExactComplex] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<ExactComplex> {
        self.entries[i * self.dim..(i + 1) * self.dim].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<ExactComplex> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn diag(&self) -> Vec<ExactComplex> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> ExactComplex {
        self.diag().into_iter().sum()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn scale(&self, k: &ExactComplex) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// `self - λ·I`.
    pub fn shifted(&self, lambda: &ExactComplex) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            let v = self.get(i, i) - lambda;
            m.set(i, i, v);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut m = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[ExactComplex]) -> Vec<ExactComplex> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.dim), |acc, _| acc.mul(self))
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.entries.iter().map(ExactComplex::to_c64).collect()
    }

    pub fn det(&self) -> ExactComplex {
        let g = |i, j| self.get(i, j);
        match self.dim {
            1 => g(0, 0).clone(),
            2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
            _ => {
                g(0, 0) * &(g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * &(g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * &(g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
        }
    }

    /// Reduced row echelon form of `[self | rhs]`; returns the reduced
    /// matrix rows, reduced rhs and pivot columns.
    fn rref(&self, rhs: &[ExactComplex]) -> (Vec<Vec<ExactComplex>>, Vec<ExactComplex>, Vec<usize>) {
        let n = self.dim;
        let mut rows: Vec<Vec<ExactComplex>> = (0..n).map(|i| self.row(i)).collect();
        let mut b = rhs.to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(p) = (r..n).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            b.swap(r, p);
            let inv = rows[r][col].inv().expect("nonzero pivot");
            for k in 0..n {
                rows[r][k] = &rows[r][k] * &inv;
            }
            b[r] = &b[r] * &inv;
            for i in 0..n {
                if i == r || rows[i][col].is_zero() {
                    continue;
                }
                let f = rows[i][col].clone();
                for k in 0..n {
                    let v = &rows[r][k] * &f;
                    rows[i][k] -= &v;
                }
                let v = &b[r] * &f;
                b[i] -= &v;
            }
            pivots.push(col);
            r += 1;
        }
        (rows, b, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref(&vec![ExactComplex::zero(); self.dim]).2.len()
    }

    /// Solves `self · x = rhs`, setting every free unknown to zero.
    pub fn solve_with_free(&self, rhs: &[ExactComplex]) -> LinearSolve {
        let n = self.dim;
        let (_, b, pivots) = self.rref(rhs);
        let witness: Vec<ExactComplex> = b[pivots.len()..].to_vec();
        if witness.iter().any(|w| !w.is_zero()) {
            return LinearSolve::Inconsistent { witness };
        }
        let mut solution = vec![ExactComplex::zero(); n];
        for (r, &col) in pivots.iter().enumerate() {
            solution[col] = b[r].clone();
        }
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        LinearSolve::Solved { solution, free }
    }

    /// Unique solution of `self · x = rhs`.
    pub fn solve(&self, rhs: &[ExactComplex]) -> Result<Vec<ExactComplex>, MatrixError> {
        match self.solve_with_free(rhs) {
            LinearSolve::Solved { solution, free } if free.is_empty() => Ok(solution),
            _ => Err(MatrixError::Singular),
        }
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let n = self.dim;
        let cols = (0..n)
            .map(|j| {
                let mut e = vec![ExactComplex::zero(); n];
                e[j] = ExactComplex::one();
                self.solve(&e)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_columns(&cols))
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<ExactComplex>> {
        let n = self.dim;
        let (rows, _, pivots) = self.rref(&vec![ExactComplex::zero(); n]);
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![ExactComplex::zero(); n];
                v[free] = ExactComplex::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&rows[r][free];
                }
                v
            })
            .collect()
    }

    /// Coefficients `[c_0, …, c_{n-1}, 1]` of `det(λI − self)`
    /// (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<ExactComplex> {
        let n = self.dim;
        let mut coeffs = vec![ExactComplex::zero(); n + 1];
        coeffs[n] = ExactComplex::one();
        let mut mk = Self::zero(n);
        for k in 1..=n {
            let ident = Self::identity(n).scale(&coeffs[n - k + 1]);
            mk = self.mul(&mk).add(&ident);
            let t = self.mul(&mk).trace();
            coeffs[n - k] = -(t / ExactComplex::from_integer(k as i64));
        }
        coeffs
    }
}

impl fmt::Display for SmallMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.dim {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SmallMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallMatrix{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_integer(n)
    }

    #[test]
    fn char_poly_of_diagonal() {
        let m = SmallMatrix::diagonal(vec![c(1), c(2), c(3)]);
        // (λ-1)(λ-2)(λ-3) = λ³ - 6λ² + 11λ - 6
        assert_eq!(m.char_poly(), vec![c(-6), c(11), c(-6), c(1)]);
    }

    #[test]
    fn singular_solve_reports_witness() {
        // [[0, -1], [0, 0]] x = (p, r)
        let m = SmallMatrix::from_rows(vec![vec![c(0), c(-1)], vec![c(0), c(0)]]).unwrap();
        assert_eq!(
            m.solve_with_free(&[c(3), c(2)]),
            LinearSolve::Inconsistent { witness: vec![c(2)] }
        );
        assert_eq!(
            m.solve_with_free(&[c(3), c(0)]),
            LinearSolve::Solved {
                solution: vec![c(0), c(-3)],
                free: vec![0]
            }
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let m = SmallMatrix::from_rows(vec![
            vec![c(2), ExactComplex::i(), c(0)],
            vec![c(1), c(1), c(1)],
            vec![c(0), c(3), ExactComplex::ratio(1, 2)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), SmallMatrix::identity(3));
        assert_eq!(m.det(), m.char_poly()[0].clone() * c(-1));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = SmallMatrix::from_rows(vec![vec![c(1), c(2)], vec![c(2), c(4)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(SmallMatrix::new(4, vec![]), Err(MatrixError::BadDimension(4)));
        assert!(SmallMatrix::new(2, vec![c(1)]).is_err());
    }
}
