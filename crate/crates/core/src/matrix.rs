//! Dense exact matrices: elimination, rank, kernels, and linear solves.

use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{vector, Field, FieldElement};

/// Row-major matrix over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Solution set of `m x = b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Solution {
    NoSolution,
    Affine {
        particular: Vec<FieldElement>,
        kernel: Vec<Vec<FieldElement>>,
    },
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn from_rows(field: Field, rows: &[Vec<FieldElement>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<FieldElement>]) -> Result<Self> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!("column of length {} in a {rows}-row matrix", c.len())));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols);
                r.iter().map(|&x| field.from_i64(x))
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vector::zeros(self.field, self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    out[i] += &(a * x);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension("adding matrices of different shapes".into()));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Gauss-Jordan elimination. The pivot in each column is the first
    /// nonzero entry at or below the current row, so results are reproducible.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            if !inv.is_one() {
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(r, j)] = &m[(r, j)] * &inv;
                    }
                }
            }
            let support: Vec<usize> = (c..m.cols).filter(|&j| !m[(r, j)].is_zero()).collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for &j in &support {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Canonical basis of the null space: the rows of the reduced echelon form
    /// of any kernel basis, so each vector has leading coefficient 1.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let ech = self.echelon();
        let raw = kernel_from_echelon(&ech, self.cols, self.field);
        canonicalize(self.field, raw, self.cols)
    }

    pub fn solve(&self, b: &[FieldElement]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(Solution::NoSolution);
        }
        let mut particular = vector::zeros(self.field, self.cols);
        for (r, &c) in ech.pivots.iter().enumerate() {
            particular[c] = ech.reduced[(r, self.cols)].clone();
        }
        Ok(Solution::Affine { particular, kernel: self.kernel_basis() })
    }

    /// Inverse of a square matrix, or `None` when it is singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(self.field, 0, 0));
        }
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let ech = aug.echelon();
        if ech.pivots.len() < n || ech.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = ech.reduced[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

fn kernel_from_echelon(ech: &Echelon, cols: usize, field: Field) -> Vec<Vec<FieldElement>> {
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (r, &c) in ech.pivots.iter().enumerate() {
            v[c] = Some(r);
        }
        v
    };
    (0..cols)
        .filter(|&f| pivot_set[f].is_none())
        .map(|f| {
            let mut v = vector::zeros(field, cols);
            v[f] = field.one();
            for (r, &c) in ech.pivots.iter().enumerate() {
                let a = &ech.reduced[(r, f)];
                if !a.is_zero() {
                    v[c] = -a;
                }
            }
            v
        })
        .collect()
}

/// Reduced echelon form of a list of vectors, with zero rows dropped.
pub fn canonicalize(field: Field, vectors: Vec<Vec<FieldElement>>, len: usize) -> Vec<Vec<FieldElement>> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = Matrix::from_rows(field, &vectors, len).expect("vectors share a length");
    let ech = m.echelon();
    (0..ech.pivots.len()).map(|r| ech.reduced.row(r).to_vec()).collect()
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Free functions mirroring the matrix methods.
pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Matrix) -> Vec<Vec<FieldElement>> {
    m.kernel_basis()
}

pub fn solve_linear(m: &Matrix, b: &[FieldElement]) -> Result<Solution> {
    m.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(f(3), 2).rank(), 2);
        assert_eq!(Matrix::zeros(f(3), 3, 4).rank(), 0);
        assert_eq!(Matrix::from_i64(Field::Rationals, &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(f(5), 2).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(f(2), 2, 2).kernel_basis().len(), 2);
        let k = Matrix::from_i64(f(3), &[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![f(3).from_i64(1), f(3).from_i64(2)]]);
    }

    #[test]
    fn solve_examples() {
        let q = Field::Rationals;
        let s = Matrix::identity(q, 2).solve(&[q.one(), q.zero()]).unwrap();
        assert_eq!(s, Solution::Affine { particular: vec![q.one(), q.zero()], kernel: vec![] });

        let s = Matrix::zeros(q, 1, 1).solve(&[q.one()]).unwrap();
        assert_eq!(s, Solution::NoSolution);

        let s = Matrix::from_i64(q, &[&[1, 1]]).solve(&[q.from_i64(2)]).unwrap();
        assert_eq!(
            s,
            Solution::Affine {
                particular: vec![q.from_i64(2), q.zero()],
                kernel: vec![vec![q.one(), q.from_i64(-1)]],
            }
        );
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_i64(f, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, 2));
        assert!(Matrix::from_i64(f, &[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Matrix::zeros(f, 0, 0).inverse(), Some(Matrix::zeros(f, 0, 0)));
    }

    #[test]
    fn solve_dimension_mismatch() {
        let q = Field::Rationals;
        assert!(Matrix::identity(q, 2).solve(&[q.one()]).is_err());
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let q = Field::Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        for v in m.kernel_basis() {
            assert!(vector::is_zero(&m.mul_vec(&v).unwrap()));
        }
        assert_eq!(m.rank() + m.kernel_basis().len(), 4);
    }
}
