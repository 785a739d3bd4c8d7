//! Graded vector spaces, the graded Lie algebra `L = ⊕_p L^p` of
//! degree-preserving multilinear operations, and the gauge group action.
//!
//! `L^p = Hom_gr(V^{⊗(p+1)}, V)` is stored blockwise: one matrix per
//! [`DegreeComposition`] `(n_0, …, n_p)`, mapping the tensor block
//! `V_{n_0} ⊗ … ⊗ V_{n_p}` to `V_{n_0+…+n_p}`. Columns of a block enumerate
//! basis multi-indices lexicographically with the leftmost factor most
//! significant; rows enumerate the basis of the target degree.

mod gauge;
mod op;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{Field, LinalgError, Subspace};

pub use gauge::GaugeElement;
pub use op::{tautological_gamma, MultilinearOp, TautologicalGamma};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("operations live on different graded spaces: {left:?} vs {right:?}")]
    SpaceMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("expected an operation of arity index {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid block {composition:?}: {reason}")]
    InvalidBlock { composition: Vec<usize>, reason: String },
    #[error("gauge component in degree {degree} is not invertible")]
    NotInvertible { degree: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Dimension vector `(d_1, …, d_q)` of a positively graded space truncated at degree `q`.
/// The degree-zero piece is implicit and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GradedVectorSpace {
    dims: Vec<usize>,
}

impl GradedVectorSpace {
    pub fn new(dims: Vec<usize>) -> GradedVectorSpace {
        GradedVectorSpace { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Truncation bound.
    pub fn q(&self) -> usize {
        self.dims.len()
    }

    /// `d_degree`, zero outside `1..=q`.
    pub fn dim(&self, degree: usize) -> usize {
        if degree == 0 || degree > self.dims.len() {
            0
        } else {
            self.dims[degree - 1]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn truncate(&self, q: usize) -> GradedVectorSpace {
        GradedVectorSpace { dims: self.dims[..q.min(self.dims.len())].to_vec() }
    }

    /// All compositions with `parts` positive parts and sum at most `q`, in lexicographic order.
    pub fn compositions(&self, parts: usize) -> Vec<DegreeComposition> {
        let mut out = Vec::new();
        if parts == 0 {
            return out;
        }
        let mut current = Vec::with_capacity(parts);
        fn rec(q: usize, parts: usize, current: &mut Vec<usize>, out: &mut Vec<DegreeComposition>) {
            let used: usize = current.iter().sum();
            if current.len() == parts {
                out.push(DegreeComposition(current.clone()));
                return;
            }
            let remaining_parts = parts - current.len() - 1;
            for n in 1..=q.saturating_sub(used + remaining_parts) {
                current.push(n);
                rec(q, parts, current, out);
                current.pop();
            }
        }
        rec(self.q(), parts, &mut current, &mut out);
        out
    }

    /// Compositions with `parts` parts and total degree exactly `n`.
    pub fn compositions_of_degree(&self, parts: usize, n: usize) -> Vec<DegreeComposition> {
        self.compositions(parts).into_iter().filter(|c| c.degree() == n).collect()
    }

    /// `∏ d_{n_i}`, the dimension of the tensor block.
    pub fn tensor_dim(&self, c: &DegreeComposition) -> usize {
        c.0.iter().map(|&n| self.dim(n)).product()
    }

    /// dim L^p = Σ_c (∏ d_{n_i}) · d_{Σ n_i}.
    pub fn dim_l(&self, p: usize) -> usize {
        self.compositions(p + 1).iter().map(|c| self.block_size(c)).sum()
    }

    /// Dimension of the internal-degree-`n` summand of `L^p`.
    pub fn dim_l_in_degree(&self, p: usize, n: usize) -> usize {
        self.compositions_of_degree(p + 1, n).iter().map(|c| self.block_size(c)).sum()
    }

    pub(crate) fn block_size(&self, c: &DegreeComposition) -> usize {
        self.tensor_dim(c) * self.dim(c.degree())
    }
}

/// Ordered tuple of positive degrees `(n_0, …, n_p)` labelling one tensor block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DegreeComposition(pub Vec<usize>);

impl DegreeComposition {
    pub fn new(parts: Vec<usize>) -> DegreeComposition {
        DegreeComposition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Target degree `Σ n_i`.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Column index of a basis multi-index in this block.
    pub fn encode(&self, space: &GradedVectorSpace, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.0.len());
        self.0.iter().zip(indices).fold(0, |acc, (&n, &i)| acc * space.dim(n) + i)
    }

    /// Inverse of [`DegreeComposition::encode`].
    pub fn decode(&self, space: &GradedVectorSpace, mut col: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &n) in out.iter_mut().zip(&self.0).rev() {
            let d = space.dim(n);
            *slot = col % d;
            col /= d;
        }
        out
    }
}

/// One subspace per degree `1..=q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GradedSubspace {
    pieces: Vec<Subspace>,
}

impl GradedSubspace {
    pub fn zero(space: &GradedVectorSpace, field: Field) -> GradedSubspace {
        GradedSubspace { pieces: space.dims().iter().map(|&d| Subspace::zero(field, d)).collect() }
    }

    pub fn full(space: &GradedVectorSpace, field: Field) -> GradedSubspace {
        GradedSubspace { pieces: space.dims().iter().map(|&d| Subspace::full(field, d)).collect() }
    }

    /// `A_{≥k}`: everything in degrees `k` and above.
    pub fn at_least(space: &GradedVectorSpace, field: Field, k: usize) -> GradedSubspace {
        GradedSubspace {
            pieces: space
                .dims()
                .iter()
                .enumerate()
                .map(|(i, &d)| if i + 1 >= k { Subspace::full(field, d) } else { Subspace::zero(field, d) })
                .collect(),
        }
    }

    pub fn from_pieces(space: &GradedVectorSpace, pieces: Vec<Subspace>) -> Result<GradedSubspace, GradedError> {
        if pieces.len() != space.q() || pieces.iter().zip(space.dims()).any(|(s, &d)| s.ambient_dim() != d) {
            return Err(GradedError::SpaceMismatch {
                left: space.dims().to_vec(),
                right: pieces.iter().map(|s| s.ambient_dim()).collect(),
            });
        }
        if let Some(first) = pieces.first() {
            if let Some(other) = pieces.iter().find(|s| s.field() != first.field()) {
                return Err(GradedError::FieldMismatch { left: first.field(), right: other.field() });
            }
        }
        Ok(GradedSubspace { pieces })
    }

    pub fn pieces(&self) -> &[Subspace] {
        &self.pieces
    }

    /// Piece in `degree` (1-based).
    pub fn piece(&self, degree: usize) -> &Subspace {
        &self.pieces[degree - 1]
    }

    pub(crate) fn piece_mut(&mut self, degree: usize) -> &mut Subspace {
        &mut self.pieces[degree - 1]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Subspace::dim).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Subspace::is_zero)
    }

    pub fn is_subspace_of(&self, other: &GradedSubspace) -> Result<bool, GradedError> {
        self.check_shape(other)?;
        for (a, b) in self.pieces.iter().zip(&other.pieces) {
            if !a.is_subspace_of(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &GradedSubspace) -> Result<GradedSubspace, GradedError> {
        self.check_shape(other)?;
        let pieces = self.pieces.iter().zip(&other.pieces).map(|(a, b)| a.sum(b)).collect::<Result<_, _>>()?;
        Ok(GradedSubspace { pieces })
    }

    pub fn intersect(&self, other: &GradedSubspace) -> Result<GradedSubspace, GradedError> {
        self.check_shape(other)?;
        let pieces = self
            .pieces
            .iter()
            .zip(&other.pieces)
            .map(|(a, b)| a.intersect(b))
            .collect::<Result<_, _>>()?;
        Ok(GradedSubspace { pieces })
    }

    pub fn truncate(&self, q: usize) -> GradedSubspace {
        GradedSubspace { pieces: self.pieces[..q.min(self.pieces.len())].to_vec() }
    }

    fn check_shape(&self, other: &GradedSubspace) -> Result<(), GradedError> {
        if self.pieces.len() != other.pieces.len()
            || self.pieces.iter().zip(&other.pieces).any(|(a, b)| a.ambient_dim() != b.ambient_dim())
        {
            return Err(GradedError::SpaceMismatch {
                left: self.pieces.iter().map(Subspace::ambient_dim).collect(),
                right: other.pieces.iter().map(Subspace::ambient_dim).collect(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_l_examples() {
        let s = GradedVectorSpace::new(vec![1, 1]);
        assert_eq!(s.dim_l(1), 1);
        assert_eq!(s.dim_l(0), 2);
        assert_eq!(GradedVectorSpace::new(vec![2, 3]).dim_l(2), 0);
    }

    #[test]
    fn compositions_are_lexicographic_and_bounded() {
        let s = GradedVectorSpace::new(vec![1, 1, 1]);
        let parts: Vec<Vec<usize>> = s.compositions(2).into_iter().map(|c| c.0).collect();
        assert_eq!(parts, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(s.compositions(3).len(), 1);
        assert!(s.compositions(4).is_empty());
    }

    #[test]
    fn multi_index_encoding_is_left_major() {
        let s = GradedVectorSpace::new(vec![2, 3]);
        let c = DegreeComposition::new(vec![1, 1]);
        assert_eq!(c.encode(&s, &[1, 0]), 2);
        assert_eq!(c.decode(&s, 3), vec![1, 1]);
        for col in 0..s.tensor_dim(&c) {
            assert_eq!(c.encode(&s, &c.decode(&s, col)), col);
        }
    }

    #[test]
    fn at_least_matches_tautological_piece() {
        let s = GradedVectorSpace::new(vec![2, 3]);
        let a2 = GradedSubspace::at_least(&s, Field::Rational, 2);
        assert_eq!(a2.dims(), vec![0, 3]);
        assert_eq!(GradedSubspace::at_least(&s, Field::Rational, 1), GradedSubspace::full(&s, Field::Rational));
    }
}
