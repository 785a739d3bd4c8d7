use std::collections::BTreeMap;

use super::echelon;
use super::{Field, LinalgError, Scalar, Subspace};

/// A sparse matrix over a single field. Zero entries are never stored, so two
/// matrices are equal iff their stored entries are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.entries.insert((i, i), field.one());
        }
        m
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> Result<Matrix, LinalgError> {
        let n = diag.len();
        Matrix::from_triplets(field, n, n, diag.iter().enumerate().map(|(i, s)| (i, i, s.clone())))
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets<I>(field: Field, rows: usize, cols: usize, triplets: I) -> Result<Matrix, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = Matrix::zero(field, rows, cols);
        for (r, c, v) in triplets {
            field.check(&v)?;
            if r >= rows || c >= cols {
                return Err(LinalgError::IndexOutOfBounds { row: r, col: c, rows, cols });
            }
            m.add_at(r, c, &v);
        }
        Ok(m)
    }

    pub fn from_dense(field: Field, rows: usize, cols: usize, data: &[Vec<Scalar>]) -> Result<Matrix, LinalgError> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::ShapeMismatch {
                op: "from_dense",
                left: (rows, cols),
                right: (data.len(), data.first().map_or(0, |r| r.len())),
            });
        }
        Matrix::from_triplets(
            field,
            rows,
            cols,
            data.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))),
        )
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

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Overwrites one entry. Panics on out-of-range indices or a foreign field.
    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert!(row < self.rows && col < self.cols, "matrix index out of range");
        assert_eq!(value.field(), self.field, "field mismatch");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    /// Adds `value` to one entry, dropping it if the sum cancels.
    pub fn add_at(&mut self, row: usize, col: usize, value: &Scalar) {
        if value.is_zero() {
            return;
        }
        let sum = match self.entries.get(&(row, col)) {
            Some(old) => old + value,
            None => value.clone(),
        };
        if sum.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), sum);
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            out[r][c] = v.clone();
        }
        out
    }

    /// Dense column vectors, indexed by column.
    pub fn to_dense_columns(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.rows]; self.cols];
        for (&(r, c), v) in &self.entries {
            out[c][r] = v.clone();
        }
        out
    }

    pub fn column(&self, col: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    fn check_same_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch { expected: self.field, found: other.field });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::ShapeMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_at(r, c, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&other.scale(&-&other.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        assert_eq!(s.field(), self.field, "field mismatch");
        if s.is_zero() {
            return Matrix::zero(self.field, self.rows, self.cols);
        }
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&k, v)| (k, v * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "mul",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut by_row: Vec<Vec<(usize, &Scalar)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add_at(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    /// Matrix–vector product with a dense vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] = &out[r] + &(a * &v[c]);
            }
        }
        out
    }

    /// Kronecker product with row/column indices of `self` most significant.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_same_field(other)?;
        let mut out = Matrix::zero(self.field, self.rows * other.rows, self.cols * other.cols);
        for (&(r1, c1), a) in &self.entries {
            for (&(r2, c2), b) in &other.entries {
                out.entries.insert((r1 * other.rows + r2, c1 * other.cols + c2), a * b);
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        echelon::rank(self.field, &self.to_dense(), self.cols)
    }

    /// ker(M) as a canonical subspace of the column space's ambient `F^cols`.
    pub fn kernel(&self) -> Subspace {
        let e = echelon::reduced_echelon(self.field, &self.to_dense(), self.cols);
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &e.pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !pivot_set[c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in e.rows.iter().zip(&e.pivots) {
                v[pc] = -&row[free];
            }
            basis.push(v);
        }
        Subspace::span(self.field, self.cols, &basis).expect("kernel vectors have the right shape")
    }

    /// Column space as a subspace of `F^rows`.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.field, self.rows, &self.to_dense_columns()).expect("columns have the right shape")
    }

    /// Two-sided inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let dense = self.to_dense();
        let augmented: Vec<Vec<Scalar>> = dense
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
                row
            })
            .collect();
        let e = echelon::reduced_echelon(self.field, &augmented, 2 * n);
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let inv: Vec<Vec<Scalar>> = e.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_dense(self.field, n, n, &inv).expect("shape is n x n"))
    }
}
