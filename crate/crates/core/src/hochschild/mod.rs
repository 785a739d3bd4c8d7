//! The twisted differential `d^μ`, graded Hochschild cohomology, first-order
//! deformations and the primary obstruction.
//!
//! Cochains are handled in the coordinates of [`coordinates`]. `d^μ` never lowers the
//! internal degree `n` of a block, so `L_{≥m}` is a subcomplex for every `m`; cohomology
//! reports break dimensions down along this filtration.

mod cohomology;
mod deformation;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::GradedAlgebra;
use crate::graded::{DegreeComposition, GradedError, MultilinearOp};
use crate::linalg::{Field, LinalgError, Matrix, Scalar};

pub use cohomology::{
    cohomology, compare_truncations, BlockCohomology, CohomologyGroup, CohomologyReport, TruncationComparison,
    DEFAULT_P_MAX,
};
pub use deformation::{
    deform, deformations_equivalent, evaluate_coc, is_coboundary, primary_obstruction, Deformation, Obstruction,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("not a cocycle: {0}")]
    NotCocycle(CocycleViolation),
    #[error("expected a cochain of arity index {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("truncation degree {requested} exceeds q = {q}")]
    TruncationTooLarge { requested: usize, q: usize },
    #[error(transparent)]
    Graded(#[from] GradedError),
}

impl From<LinalgError> for HochschildError {
    fn from(e: LinalgError) -> Self {
        HochschildError::Graded(GradedError::Linalg(e))
    }
}

/// A basis tuple on which `d^μα` is nonzero, with the value there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleViolation {
    pub degrees: Vec<usize>,
    pub indices: Vec<usize>,
    pub value: Vec<Scalar>,
}

impl std::fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.degrees.iter().zip(&self.indices).map(|(d, i)| format!("e{d}_{i}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn sign(field: Field, negative: bool) -> Scalar {
    if negative {
        -&field.one()
    } else {
        field.one()
    }
}

/// Start of each composition's block in the coordinates of `L^p`: internal degrees
/// ascending, compositions lexicographic within a degree, each block row-major.
fn block_offsets(a: &GradedAlgebra, p: usize) -> BTreeMap<DegreeComposition, usize> {
    let s = a.space();
    let mut offset = 0;
    let mut out = BTreeMap::new();
    for n in 1..=a.q() {
        for c in s.compositions_of_degree(p + 1, n) {
            let size = s.tensor_dim(&c) * s.dim(n);
            out.insert(c, offset);
            offset += size;
        }
    }
    out
}

/// Index of the first coordinate of internal degree `n` in `L^p` (`dim L^p` for `n > q`).
pub fn degree_start(a: &GradedAlgebra, p: usize, n: usize) -> usize {
    (1..n.min(a.q() + 1)).map(|m| a.space().dim_l_in_degree(p, m)).sum()
}

/// All coordinates of `φ ∈ L^p`, internal degrees ascending.
pub fn coordinates(phi: &MultilinearOp) -> Vec<Scalar> {
    (1..=phi.space().q()).flat_map(|n| phi.coordinates(n)).collect()
}

/// Inverse of [`coordinates`].
pub fn from_coordinates(a: &GradedAlgebra, p: usize, coords: &[Scalar]) -> Result<MultilinearOp, GradedError> {
    let mut out = MultilinearOp::zero(a.space(), a.field(), p);
    let mut offset = 0;
    for n in 1..=a.q() {
        let len = a.space().dim_l_in_degree(p, n);
        let piece = coords.get(offset..offset + len).ok_or_else(|| GradedError::InvalidBlock {
            composition: vec![n],
            reason: format!("expected {} coordinates, got {}", a.space().dim_l(p), coords.len()),
        })?;
        out = out.add(&MultilinearOp::from_coordinates(a.space(), a.field(), p, n, piece)?)?;
        offset += len;
    }
    Ok(out)
}

/// Matrix of `d^μ : L^p → L^{p+1}` in the coordinates of [`coordinates`], from
/// `(d^μα)(a_0,…,a_{p+1}) = α(a_0,…,a_p)a_{p+1} + (−1)^p a_0α(a_1,…,a_{p+1})
///  − (−1)^p Σ_i (−1)^i α(…, a_i a_{i+1}, …)`.
///
/// The first two terms raise the internal degree and the last keeps it, so the matrix is
/// block lower triangular with respect to internal degree.
pub fn differential_matrix(a: &GradedAlgebra, p: usize) -> Matrix {
    let s = a.space();
    let field = a.field();
    let mu = a.mu();
    let source = block_offsets(a, p);
    let target = block_offsets(a, p + 1);
    let rows = s.dim_l(p + 1);
    let cols = s.dim_l(p);
    let mut triplets = Vec::new();
    let p_odd = p % 2 == 1;
    for (c, &t_off) in &target {
        let t_cols = s.tensor_dim(c);
        let dn = s.dim(c.degree());
        let parts = c.parts();
        for col in 0..t_cols {
            let idx = c.decode(s, col);
            let target_coord = |row: usize| t_off + row * t_cols + col;

            // α(a_0,…,a_p)·a_{p+1}
            let head = DegreeComposition(parts[..=p].to_vec());
            let (m, u) = (head.degree(), parts[p + 1]);
            if let Some(block) = mu.block(&DegreeComposition(vec![m, u])) {
                let h_cols = s.tensor_dim(&head);
                let h_col = head.encode(s, &idx[..=p]);
                let du = s.dim(u);
                for (row, mcol, v) in block.entries() {
                    if mcol % du == idx[p + 1] {
                        let r = mcol / du;
                        triplets.push((target_coord(row), source[&head] + r * h_cols + h_col, v.clone()));
                    }
                }
            }

            // (−1)^p a_0·α(a_1,…,a_{p+1})
            let tail = DegreeComposition(parts[1..].to_vec());
            let (u, m) = (parts[0], tail.degree());
            if let Some(block) = mu.block(&DegreeComposition(vec![u, m])) {
                let t_cols_src = s.tensor_dim(&tail);
                let t_col = tail.encode(s, &idx[1..]);
                let dm = s.dim(m);
                let sg = sign(field, p_odd);
                for (row, mcol, v) in block.entries() {
                    if mcol / dm == idx[0] {
                        let r = mcol % dm;
                        triplets.push((target_coord(row), source[&tail] + r * t_cols_src + t_col, &sg * v));
                    }
                }
            }

            // −(−1)^p Σ_i (−1)^i α(a_0,…,a_i a_{i+1},…,a_{p+1})
            for i in 0..=p {
                let (di, dj) = (parts[i], parts[i + 1]);
                let Some(block) = mu.block(&DegreeComposition(vec![di, dj])) else {
                    continue;
                };
                let product = block.column(idx[i] * s.dim(dj) + idx[i + 1]);
                let mut merged = parts[..i].to_vec();
                merged.push(di + dj);
                merged.extend_from_slice(&parts[i + 2..]);
                let merged = DegreeComposition(merged);
                let m_cols = s.tensor_dim(&merged);
                let sg = sign(field, !(p_odd ^ (i % 2 == 1)));
                let mut m_idx = idx[..i].to_vec();
                m_idx.push(0);
                m_idx.extend_from_slice(&idx[i + 2..]);
                for (k, y) in product.iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    m_idx[i] = k;
                    let m_col = merged.encode(s, &m_idx);
                    let coef = &sg * y;
                    for row in 0..dn {
                        triplets.push((target_coord(row), source[&merged] + row * m_cols + m_col, coef.clone()));
                    }
                }
            }
        }
    }
    Matrix::from_triplets(field, rows, cols, triplets).expect("coordinates are in range")
}

fn check_cochain(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<(), HochschildError> {
    if alpha.space() != a.space() {
        return Err(GradedError::SpaceMismatch { left: a.dims().to_vec(), right: alpha.space().dims().to_vec() }.into());
    }
    if alpha.field() != a.field() {
        return Err(GradedError::FieldMismatch { left: a.field(), right: alpha.field() }.into());
    }
    Ok(())
}

/// `d^μα ∈ L^{p+1}` for `α ∈ L^p`.
pub fn differential(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<MultilinearOp, HochschildError> {
    check_cochain(a, alpha)?;
    let p = alpha.arity_index();
    if alpha.is_zero() {
        return Ok(MultilinearOp::zero(a.space(), a.field(), p + 1));
    }
    let image = differential_matrix(a, p).apply(&coordinates(alpha));
    Ok(from_coordinates(a, p + 1, &image)?)
}

/// First basis tuple where `d^μα` is nonzero, or `None` if `α` is a cocycle.
pub fn cocycle_violation(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<Option<CocycleViolation>, HochschildError> {
    let d = differential(a, alpha)?;
    let Some((c, m)) = d.blocks().next() else {
        return Ok(None);
    };
    let (_, col, _) = m.entries().min_by_key(|&(r, col, _)| (col, r)).expect("stored blocks are nonzero");
    Ok(Some(CocycleViolation { degrees: c.0.clone(), indices: c.decode(a.space(), col), value: m.column(col) }))
}

/// Whether `d^μα = 0`.
pub fn is_cocycle(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<bool, HochschildError> {
    Ok(cocycle_violation(a, alpha)?.is_none())
}

/// The slice of `(L, d^μ)` for `0 ≤ p ≤ p_max`: one matrix `d_p` per `p`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    matrices: Vec<Matrix>,
}

impl CochainComplex {
    /// Builds `d_p` for `p ≤ p_max` (so cohomology up to `H^{p_max}` is available).
    pub fn new(a: &GradedAlgebra, p_max: usize) -> CochainComplex {
        CochainComplex { matrices: (0..=p_max).map(|p| differential_matrix(a, p)).collect() }
    }

    pub fn p_max(&self) -> usize {
        self.matrices.len() - 1
    }

    pub fn matrix(&self, p: usize) -> &Matrix {
        &self.matrices[p]
    }

    /// `d_{p+1} ∘ d_p = 0` for all stored consecutive pairs.
    pub fn squares_to_zero(&self) -> bool {
        self.matrices.windows(2).all(|w| w[1].mul(&w[0]).expect("consecutive maps compose").is_zero())
    }
}
