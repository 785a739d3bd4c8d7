//! Graded algebras as Maurer–Cartan elements, standard constructors,
//! two-sided ideals and structural predicates.

mod constructors;
mod ideal;

use serde::Serialize;
use thiserror::Error;

use crate::graded::{DegreeComposition, GradedError, GradedVectorSpace, MultilinearOp};
use crate::linalg::{Field, LinalgError, Scalar};

pub use constructors::{free_algebra, polynomial_algebra, skew_plane, QuotientInfo};
pub use ideal::GradedIdeal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("product is not associative: {0}")]
    NotAssociative(AssociativityWitness),
    #[error("invalid constructor arguments: {0}")]
    InvalidConstructor(String),
    #[error("relation of degree {degree} has {found} coordinates, expected {expected}")]
    BadRelation { degree: usize, expected: usize, found: usize },
    #[error("truncation degree {requested} exceeds q = {q}")]
    TruncationTooLarge { requested: usize, q: usize },
    #[error("labels do not match the dimension vector")]
    BadLabels,
    #[error(transparent)]
    Graded(#[from] GradedError),
}

impl From<LinalgError> for AlgebraError {
    fn from(e: LinalgError) -> Self {
        AlgebraError::Graded(GradedError::Linalg(e))
    }
}

/// A basis triple `(a, b, c)` with `(ab)c ≠ a(bc)`, given by degrees and
/// in-degree indices, together with `((ab)c − a(bc))` in the target degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityWitness {
    pub degrees: [usize; 3],
    pub indices: [usize; 3],
    pub defect: Vec<Scalar>,
}

impl std::fmt::Display for AssociativityWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [i, j, k] = self.degrees;
        let [a, b, c] = self.indices;
        write!(f, "(e{i}_{a}, e{j}_{b}, e{k}_{c})")
    }
}

/// `A = (V, μ)`: the positive part of a connected graded algebra truncated at degree `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    space: GradedVectorSpace,
    mu: MultilinearOp,
    labels: Option<Vec<Vec<String>>>,
}

impl GradedAlgebra {
    /// Accepts `μ` iff `μ∘μ = 0`.
    pub fn new(space: GradedVectorSpace, mu: MultilinearOp) -> Result<GradedAlgebra, AlgebraError> {
        if mu.arity_index() != 1 {
            return Err(GradedError::ArityMismatch { expected: 1, found: mu.arity_index() }.into());
        }
        if mu.space() != &space {
            return Err(GradedError::SpaceMismatch { left: space.dims().to_vec(), right: mu.space().dims().to_vec() }.into());
        }
        if let Some(w) = associativity_witness(&mu)? {
            return Err(AlgebraError::NotAssociative(w));
        }
        Ok(GradedAlgebra { space, mu, labels: None })
    }

    /// Attaches basis labels, one list per degree.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<GradedAlgebra, AlgebraError> {
        if labels.len() != self.space.q() || labels.iter().zip(self.space.dims()).any(|(l, &d)| l.len() != d) {
            return Err(AlgebraError::BadLabels);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> GradedAlgebra {
        self.labels = None;
        self
    }

    /// The zero product on `space`.
    pub fn trivial(space: GradedVectorSpace, field: Field) -> GradedAlgebra {
        let mu = MultilinearOp::zero(&space, field, 1);
        GradedAlgebra { space, mu, labels: None }
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.mu.field()
    }

    pub fn mu(&self) -> &MultilinearOp {
        &self.mu
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn dims(&self) -> &[usize] {
        self.space.dims()
    }

    pub fn q(&self) -> usize {
        self.space.q()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.space.dim(degree)
    }

    /// `μ(u, v)` for `u ∈ A_i`, `v ∈ A_j`; empty when `i + j > q`.
    pub fn multiply(&self, i: usize, u: &[Scalar], j: usize, v: &[Scalar]) -> Vec<Scalar> {
        let n = i + j;
        let field = self.field();
        let mut out = vec![field.zero(); self.dim(n)];
        if n > self.q() {
            return out;
        }
        let dj = self.dim(j);
        if let Some(block) = self.mu.block(&DegreeComposition(vec![i, j])) {
            for (r, col, val) in block.entries() {
                let (a, b) = (col / dj, col % dj);
                if u[a].is_zero() || v[b].is_zero() {
                    continue;
                }
                out[r] = &out[r] + &(val * &(&u[a] * &v[b]));
            }
        }
        out
    }

    /// Product of basis elements `e^i_a · e^j_b`.
    pub fn multiply_basis(&self, i: usize, a: usize, j: usize, b: usize) -> Vec<Scalar> {
        let field = self.field();
        let n = i + j;
        let mut out = vec![field.zero(); self.dim(n)];
        if let Some(block) = self.mu.block(&DegreeComposition(vec![i, j])) {
            let col = a * self.dim(j) + b;
            for (r, out_r) in out.iter_mut().enumerate() {
                *out_r = block.get(r, col);
            }
        }
        out
    }

    /// Restriction to degrees `≤ q'`; associativity is inherited.
    pub fn truncate(&self, q: usize) -> Result<GradedAlgebra, AlgebraError> {
        if q > self.q() {
            return Err(AlgebraError::TruncationTooLarge { requested: q, q: self.q() });
        }
        Ok(GradedAlgebra {
            space: self.space.truncate(q),
            mu: self.mu.truncate(q),
            labels: self.labels.as_ref().map(|l| l[..q].to_vec()),
        })
    }

    /// Replaces `μ` by `g∗μ`, keeping labels.
    pub fn conjugate(&self, g: &crate::graded::GaugeElement) -> Result<GradedAlgebra, AlgebraError> {
        let mu = g.act(&self.mu)?;
        Ok(GradedAlgebra { space: self.space.clone(), mu, labels: self.labels.clone() })
    }
}

/// First basis triple on which `μ∘μ` is nonzero, in composition and column order.
pub fn associativity_witness(mu: &MultilinearOp) -> Result<Option<AssociativityWitness>, GradedError> {
    let square = mu.circle(mu)?;
    let space = mu.space();
    let Some((c, m)) = square.blocks().next() else {
        return Ok(None);
    };
    let (_, col, _) = m.entries().min_by_key(|&(r, col, _)| (col, r)).expect("stored blocks are nonzero");
    let idx = c.decode(space, col);
    let defect = m.column(col);
    Ok(Some(AssociativityWitness {
        degrees: [c.0[0], c.0[1], c.0[2]],
        indices: [idx[0], idx[1], idx[2]],
        defect,
    }))
}
