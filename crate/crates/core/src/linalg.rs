//! Dense exact-rational matrices: rank, products and column-space membership.

use num_traits::Zero;

use crate::number::Q;

/// A row-major dense matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    /// Build from a list of columns, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Rank by fraction-exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m[(rank, col)].recip();
            for r in rank + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for c in col..m.cols {
                    let delta = &factor * &m[(rank, c)];
                    if !delta.is_zero() {
                        m[(r, c)] -= delta;
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Whether `v` lies in the span of the columns.
    pub fn column_space_contains(&self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.rows);
        let mut cols: Vec<Vec<Q>> = (0..self.cols).map(|j| self.column(j)).collect();
        let base = Matrix::from_columns(self.rows, &cols).rank();
        cols.push(v.to_vec());
        Matrix::from_columns(self.rows, &cols).rank() == base
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;

    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::q;

    fn mat(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        let cs: Vec<Vec<Q>> = (0..cols)
            .map(|j| rows.iter().map(|r| q(r[j])).collect())
            .collect();
        Matrix::from_columns(rows.len(), &cs)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).rank(), 3);
        assert_eq!(mat(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(Matrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn product_and_membership() {
        let a = mat(&[&[1, 1], &[0, 1], &[1, 0]]);
        let b = mat(&[&[1, -1], &[0, 1]]);
        assert_eq!(a.mul(&b), mat(&[&[1, 0], &[0, 1], &[1, -1]]));
        assert!(a.column_space_contains(&[q(2), q(1), q(1)]));
        assert!(!a.column_space_contains(&[q(0), q(0), q(1)]));
    }
}
