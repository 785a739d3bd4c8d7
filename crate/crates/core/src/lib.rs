//! Exact computations for finite graded associative algebras given by
//! structure constants.
//!
//! An algebra is a positively graded vector space `V = V_1 ⊕ … ⊕ V_q` with a
//! degree-preserving product `μ`, viewed as an element of the graded Lie
//! algebra of multilinear operations on `V`. Associativity is the
//! Maurer–Cartan equation `μ∘μ = 0`. On top of that the crate provides
//!
//! - [`graded`]: operations `L^p`, the circle product, the Gerstenhaber bracket
//!   and the gauge action,
//! - [`algebra`]: constructors, ideals, truncation and structural predicates,
//! - [`hochschild`]: the twisted differential, graded Hochschild cohomology,
//!   first-order deformations and obstructions,
//! - [`stability`]: filtrations, weight and Futaki functions and bounded
//!   searches for destabilizing test configurations,
//! - [`format`]: the JSON algebra-definition format and serializable payloads.
//!
//! All arithmetic is exact, over ℚ or a prime field (see [`linalg`]).

pub mod algebra;
pub mod format;
pub mod graded;
pub mod hochschild;
pub mod linalg;
pub mod stability;

pub use algebra::{GradedAlgebra, GradedIdeal};
pub use graded::{DegreeComposition, GaugeElement, GradedSubspace, GradedVectorSpace, MultilinearOp};
pub use linalg::{Field, Matrix, Scalar, Subspace};
pub use stability::{Filtration, StabilityParameter, Verdict, VerdictKind, WeightProfile};

