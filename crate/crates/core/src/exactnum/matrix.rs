//! Dense matrices over an exact scalar ring.
//!
//! Elimination is fraction-free (Bareiss): every intermediate entry is a
//! minor of the input, so the divisions are exact over any integral domain
//! and entry growth stays polynomial.

use std::fmt;
use std::ops::Mul;

use super::scalar::{Field, Scalar};
use super::ExactError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have the same nonzero length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(ExactError::DimensionMismatch("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| T::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Rows and columns permuted simultaneously: `out[i][j] = self[p[i]][p[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert!(self.is_square() && perm.len() == self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| self[(perm[i], perm[j])].clone())
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, ExactError> {
        if v.len() != self.cols {
            return Err(ExactError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * rhs[(k, j)].clone())
        }))
    }

    /// Forward Bareiss elimination in place; returns pivot columns and the
    /// number of row swaps performed.
    fn bareiss(&mut self, limit_cols: usize) -> (Vec<usize>, usize) {
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = T::one();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..limit_cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
                swaps += 1;
            }
            let pivot = self[(r, c)].clone();
            for i in r + 1..rows {
                let factor = self[(i, c)].clone();
                for j in c + 1..cols {
                    let v = (pivot.clone() * self[(i, j)].clone() - factor.clone() * self[(r, j)].clone())
                        / prev.clone();
                    self[(i, j)] = v;
                }
                self[(i, c)] = T::zero();
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        (pivots, swaps)
    }

    /// Rank over the fraction field of `T`.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let cols = m.cols;
        m.bareiss(cols).0.len()
    }

    pub fn determinant(&self) -> Result<T, ExactError> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let (pivots, swaps) = m.bareiss(n);
        if pivots.len() < n {
            return Ok(T::zero());
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if swaps % 2 == 1 { -d } else { d })
    }
}

impl<T: Field> Matrix<T> {
    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>, ExactError> {
        if !self.is_square() || b.len() != self.rows {
            return Err(ExactError::DimensionMismatch("solve needs a square system".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let (pivots, _) = aug.bareiss(n);
        if pivots.len() < n {
            return Err(ExactError::SingularMatrix);
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut acc = aug[(i, n)].clone();
            for j in i + 1..n {
                acc = acc - aug[(i, j)].clone() * x[j].clone();
            }
            x[i] = acc / aug[(i, i)].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<T> = (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect();
            cols.push(self.solve(&e)?);
        }
        Ok(Self::from_fn(n, n, |i, j| cols[j][i].clone()))
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: Self) -> Matrix<T> {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{IntMatrix, RationalMatrix};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = RationalMatrix::identity(3);
        let b = vec![q(1, 2), q(-3, 1), q(7, 5)];
        assert_eq!(a.solve(&b).unwrap(), b);
    }

    #[test]
    fn singular_solve_is_an_error() {
        let a = RationalMatrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(a.solve(&[q(1, 1), q(1, 1)]), Err(ExactError::SingularMatrix)));
    }

    #[test]
    fn pentagon_vertex_system() {
        // Cluster {alpha1, alpha1+alpha2} of A2 with support value 1 on both:
        // z1 = 1 and z1 + z2 = 1, so the vertex is (1, 0).
        let a = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let z = a.solve(&[q(1, 1), q(1, 1)]).unwrap();
        assert_eq!(z, vec![q(1, 1), q(0, 1)]);
    }

    #[test]
    fn ranks() {
        assert_eq!(IntMatrix::zeros(3, 4).rank(), 0);
        // B(B4) from the finite-type section.
        let b = IntMatrix::from_i64_rows(&[
            vec![0, -2, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, -1, 0, -1],
            vec![0, 0, 1, 0],
        ])
        .unwrap();
        assert_eq!(b.rank(), 4);
        // The 7x2 edge-adjacency matrix of the labeled pentagon.
        let bt = IntMatrix::from_i64_rows(&[
            vec![0, 1],
            vec![-1, 0],
            vec![0, 1],
            vec![-1, 0],
            vec![0, -1],
            vec![1, -1],
            vec![1, 0],
        ])
        .unwrap();
        assert_eq!(bt.rank(), 2);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(4));
        let p = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(p.determinant().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RationalMatrix::from_i64_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RationalMatrix::identity(3));
    }
}
