//! Dense exact linear algebra over any [`Field`] scalar.
//!
//! Everything is Gauss–Jordan elimination with exact arithmetic: solving,
//! nullspaces, inverses, determinants. Solutions of `A x = b` come back as a
//! particular solution plus a nullspace basis, or a definite "inconsistent" —
//! never an approximation.

use std::fmt;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Result<Self, LinAlgError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinAlgError::DimensionMismatch(
                "ragged rows".to_string(),
            ));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
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

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + term;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch("add".to_string()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + other[(i, j)].clone()
        }))
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| c.clone() * self[(i, j)].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -self[(i, j)].clone())
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[K]) -> Result<Vec<K>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self[(i, j)].is_zero() {
                        acc = acc + self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect())
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Find a pivot in column c at or below row r.
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot must be invertible");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let sub = f.clone() * m[(r, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() - sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace (vectors of length `cols`).
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![K::zero(); self.cols];
            vec[free] = K::one();
            for (col, slot) in pivot_set.iter().enumerate() {
                if let Some(row) = slot {
                    vec[col] = -r[(*row, free)].clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = K::one();
        }
        let (r, pivots) = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Determinant via fraction-free-ish elimination (exact field ops).
    pub fn det(&self) -> Result<K, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(K::zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = det * m[(c, c)].clone();
            let inv = m[(c, c)].inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let sub = f.clone() * m[(c, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - sub;
                }
            }
        }
        Ok(det)
    }
}

impl<K> std::ops::Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

impl<K: fmt::Display> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution<K> {
    Inconsistent,
    Solved {
        /// One particular solution.
        particular: Vec<K>,
        /// Basis for the solution space of `A x = 0`.
        nullspace: Vec<Vec<K>>,
    },
}

/// Solve `A x = b` exactly.
pub fn solve_linear<K: Field>(a: &Matrix<K>, b: &[K]) -> Result<LinearSolution<K>, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "matrix {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut aug = Matrix::zero(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols())] = b[i].clone();
    }
    let (r, pivots) = aug.rref();
    if pivots.contains(&a.cols()) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = vec![K::zero(); a.cols()];
    for (row, &col) in pivots.iter().enumerate() {
        particular[col] = r[(row, a.cols())].clone();
    }
    Ok(LinearSolution::Solved {
        particular,
        nullspace: a.nullspace(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyc;
    use crate::scalar::{rat_int, Rat};
    use num_traits::{One, Zero};

    fn rm(rows: Vec<Vec<i64>>) -> Matrix<Rat> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn solve_unique() {
        // x + 2y = 5, 3x + 4y = 11 -> x=1, y=2.
        let a = rm(vec![vec![1, 2], vec![3, 4]]);
        let sol = solve_linear(&a, &[rat_int(5), rat_int(11)]).unwrap();
        match sol {
            LinearSolution::Solved {
                particular,
                nullspace,
            } => {
                assert_eq!(particular, vec![rat_int(1), rat_int(2)]);
                assert!(nullspace.is_empty());
            }
            _ => panic!("expected a solution"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let a = rm(vec![vec![1, 1], vec![1, 1]]);
        let sol = solve_linear(&a, &[rat_int(0), rat_int(1)]).unwrap();
        assert_eq!(sol, LinearSolution::Inconsistent);
    }

    #[test]
    fn zero_matrix_full_nullspace() {
        let a = rm(vec![vec![0, 0], vec![0, 0]]);
        let sol = solve_linear(&a, &[rat_int(0), rat_int(0)]).unwrap();
        match sol {
            LinearSolution::Solved { nullspace, .. } => assert_eq!(nullspace.len(), 2),
            _ => panic!("expected a solution"),
        }
    }

    #[test]
    fn cyclotomic_nullspace_example() {
        // [[1, z4], [-z4, 1]] has rank 1; nullspace spanned by (z4, -1)
        // up to scale.
        let i = Cyc::zeta(4);
        let a = Matrix::from_rows(vec![
            vec![Cyc::one(), i.clone()],
            vec![-i.clone(), Cyc::one()],
        ])
        .unwrap();
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        // Check the basis vector is proportional to (z4, -1): A v = 0 and
        // v[0] * (-1) - v[1] * z4 = 0.
        let v = &ns[0];
        let av = a.apply(v).unwrap();
        assert!(av.iter().all(|c| c.is_zero()));
        let cross = v[0].clone() * (-Cyc::one()) - v[1].clone() * i;
        assert!(cross.is_zero());
    }

    #[test]
    fn inverse_and_det() {
        let a = rm(vec![vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(a.det().unwrap(), rat_int(1));
        let s = rm(vec![vec![1, 2], vec![2, 4]]);
        assert!(s.inverse().is_none());
        assert_eq!(s.det().unwrap(), rat_int(0));
    }

    #[test]
    fn rref_shape() {
        let a = rm(vec![vec![0, 2, 4], vec![1, 1, 1]]);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r[(0, 0)], rat_int(1));
        assert_eq!(r[(0, 1)], rat_int(0));
        assert_eq!(r[(1, 1)], rat_int(1));
        // Nullspace of a 2x3 rank-2 matrix is 1-dimensional and annihilated.
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.apply(&ns[0]).unwrap().iter().all(|c| c.is_zero()));
    }
}
