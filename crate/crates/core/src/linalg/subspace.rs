use std::cmp::Ordering;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::echelon;
use super::{Field, LinalgError, Matrix, Scalar};

/// A linear subspace of `F^n`, stored by its reduced row echelon basis.
///
/// The RREF basis is unique, so derived equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Subspace {
        Subspace { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Subspace {
        let basis = (0..ambient_dim).map(|i| unit(field, ambient_dim, i)).collect();
        Subspace { field, ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    /// Span of the given vectors (any spanning set; linearly dependent input is fine).
    pub fn span(field: Field, ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Result<Subspace, LinalgError> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::AmbientMismatch { left: ambient_dim, right: v.len() });
            }
            for s in v {
                field.check(s)?;
            }
        }
        let e = echelon::reduced_echelon(field, vectors, ambient_dim);
        Ok(Subspace { field, ambient_dim, basis: e.rows, pivots: e.pivots })
    }

    /// Span of the standard basis vectors at `coords`.
    pub fn coordinate(field: Field, ambient_dim: usize, coords: &[usize]) -> Subspace {
        let vectors: Vec<Vec<Scalar>> = coords.iter().map(|&c| unit(field, ambient_dim, c)).collect();
        Subspace::span(field, ambient_dim, &vectors).expect("unit vectors are well formed")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    /// Echelon basis rows.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_dense(self.field, self.dim(), self.ambient_dim, &self.basis).expect("basis rows are well formed")
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch { expected: self.field, found: other.field });
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o - &(&factor * r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_compatible(other)?;
        Ok(self.basis.iter().all(|v| other.contains(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::span(self.field, self.ambient_dim, &vectors)
    }

    /// U ∩ W, via the kernel of `[U^T | -W^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.field, self.ambient_dim));
        }
        let (k, l) = (self.dim(), other.dim());
        let mut stacked = Matrix::zero(self.field, self.ambient_dim, k + l);
        for (j, row) in self.basis.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    stacked.set(i, j, v.clone());
                }
            }
        }
        for (j, row) in other.basis.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    stacked.set(i, k + j, -v);
                }
            }
        }
        let relations = stacked.kernel();
        let vectors: Vec<Vec<Scalar>> = relations
            .basis()
            .iter()
            .map(|coeffs| self.combine(&coeffs[..k]))
            .collect();
        Subspace::span(self.field, self.ambient_dim, &vectors)
    }

    /// dim of (self + other) / other.
    pub fn quotient_dim(&self, other: &Subspace) -> Result<usize, LinalgError> {
        Ok(self.sum(other)?.dim() - other.dim())
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.ambient_dim];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o + &(c * r);
                }
            }
        }
        out
    }

    /// Coordinates not used as pivots; the standard basis vectors at these
    /// positions span a complement.
    pub fn non_pivot_coordinates(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !used[c]).collect()
    }

    /// Image of the subspace under `m` (which maps `F^ambient` to `F^rows`).
    pub fn map(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        if m.cols() != self.ambient_dim {
            return Err(LinalgError::AmbientMismatch { left: self.ambient_dim, right: m.cols() });
        }
        let vectors: Vec<Vec<Scalar>> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(self.field, m.rows(), &vectors)
    }

    /// Order by pivot positions, then by echelon entries. Used for deterministic tie-breaks.
    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        self.ambient_dim
            .cmp(&other.ambient_dim)
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| {
                for (a, b) in self.basis.iter().flatten().zip(other.basis.iter().flatten()) {
                    let o = a.canonical_cmp(b);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.basis.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
        let mut st = serializer.serialize_struct("Subspace", 2)?;
        st.serialize_field("ambient_dim", &self.ambient_dim)?;
        st.serialize_field("basis", &rows)?;
        st.end()
    }
}

pub(crate) fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// Every `dim`-dimensional subspace of `GF(p)^ambient_dim`, each exactly once.
///
/// Order: pivot sets in lexicographic order, then the free echelon entries
/// counted in base p with the first free position most significant.
pub fn enumerate_subspaces(ambient_dim: usize, dim: usize, field: Field) -> Result<SubspaceIter, LinalgError> {
    let Field::Prime(p) = field else {
        return Err(LinalgError::UnsupportedEnumeration(field));
    };
    if dim > ambient_dim {
        return Err(LinalgError::AmbientMismatch { left: ambient_dim, right: dim });
    }
    let pivots: Vec<usize> = (0..dim).collect();
    let mut it = SubspaceIter { p, ambient_dim, dim, pivots: Some(pivots), free: Vec::new(), counter: Vec::new() };
    it.reset_counter();
    Ok(it)
}

/// Iterator returned by [`enumerate_subspaces`].
#[derive(Clone, Debug)]
pub struct SubspaceIter {
    p: u64,
    ambient_dim: usize,
    dim: usize,
    pivots: Option<Vec<usize>>,
    /// (row, col) positions of free entries for the current pivot set
    free: Vec<(usize, usize)>,
    counter: Vec<u64>,
}

impl SubspaceIter {
    fn reset_counter(&mut self) {
        let Some(pivots) = &self.pivots else { return };
        self.free.clear();
        for (row, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..self.ambient_dim {
                if !pivots.contains(&col) {
                    self.free.push((row, col));
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn advance_pivots(&mut self) {
        let Some(pivots) = &mut self.pivots else { return };
        let (n, k) = (self.ambient_dim, self.dim);
        let mut i = k;
        while i > 0 {
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                self.reset_counter();
                return;
            }
        }
        self.pivots = None;
    }

    fn advance_counter(&mut self) -> bool {
        for digit in self.counter.iter_mut().rev() {
            *digit += 1;
            if *digit < self.p {
                return true;
            }
            *digit = 0;
        }
        false
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let pivots = self.pivots.clone()?;
        let field = Field::Prime(self.p);
        let mut basis: Vec<Vec<Scalar>> = pivots.iter().map(|&pc| unit(field, self.ambient_dim, pc)).collect();
        for (&(row, col), &v) in self.free.iter().zip(&self.counter) {
            basis[row][col] = Scalar::Modular { value: v, modulus: self.p };
        }
        let out = Subspace { field, ambient_dim: self.ambient_dim, basis, pivots };
        if !self.advance_counter() {
            self.advance_pivots();
        }
        Some(out)
    }
}
