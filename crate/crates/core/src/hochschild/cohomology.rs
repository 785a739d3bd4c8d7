use serde::Serialize;

use super::{degree_start, from_coordinates, CochainComplex, HochschildError};
use crate::algebra::GradedAlgebra;
use crate::graded::MultilinearOp;
use crate::linalg::{Field, Scalar, Subspace};

pub const DEFAULT_P_MAX: usize = 3;

/// Graded piece `m` of the filtration of `H^p` induced by the subcomplexes `L_{≥m}`:
/// classes with a cocycle representative supported in internal degrees `≥ m`, modulo
/// those supported in degrees `≥ m + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCohomology {
    pub internal_degree: usize,
    /// `dim L^p_m`.
    pub dim_cochains: usize,
    pub dim: usize,
}

/// `H^p(L, d^μ) = HH^{p+1}_gr`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub p: usize,
    pub hh_index: usize,
    pub dim: usize,
    pub dim_cochains: usize,
    /// rank of `d_{p−1}`.
    pub rank_in: usize,
    /// rank of `d_p`.
    pub rank_out: usize,
    pub blocks: Vec<BlockCohomology>,
    /// Cocycles whose classes form a basis, listed from the highest filtration degree down
    /// and chosen in echelon order within each degree.
    pub representatives: Vec<MultilinearOp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub field: Field,
    pub dims: Vec<usize>,
    pub p_max: usize,
    pub groups: Vec<CohomologyGroup>,
}

impl CohomologyReport {
    /// `(dim H^0, …, dim H^{p_max})`.
    pub fn dims_by_p(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.dim).collect()
    }

    /// `dim HH^k_gr`, for `1 ≤ k ≤ p_max + 1`.
    pub fn hh(&self, k: usize) -> Option<usize> {
        self.groups.iter().find(|g| g.hh_index == k).map(|g| g.dim)
    }

    /// Per `(p, m)` graded dimensions, without representatives.
    pub fn block_table(&self) -> Vec<Vec<usize>> {
        self.groups.iter().map(|g| g.blocks.iter().map(|b| b.dim).collect()).collect()
    }
}

/// Echelon basis grown one vector at a time; rows are kept zero at every earlier pivot.
struct Span {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Span {
    fn new(basis: &Subspace) -> Span {
        Span { rows: basis.pivots().iter().copied().zip(basis.basis().iter().cloned()).collect() }
    }

    /// Adds `v` unless it is already in the span; reports whether it was new.
    fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut out = v.to_vec();
        for (p, row) in &self.rows {
            if out[*p].is_zero() {
                continue;
            }
            let factor = out[*p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o - &(&factor * r);
                }
            }
        }
        let Some(lead) = out.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = out[lead].inv().expect("nonzero");
        let row = out.iter().map(|x| x * &inv).collect();
        self.rows.push((lead, row));
        true
    }
}

/// Graded Hochschild cohomology for `0 ≤ p ≤ p_max`.
pub fn cohomology(a: &GradedAlgebra, p_max: usize) -> CohomologyReport {
    let cx = CochainComplex::new(a, p_max);
    let s = a.space();
    let field = a.field();
    let q = a.q();
    let mut groups = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let dim_cochains = s.dim_l(p);
        let d_out = cx.matrix(p);
        let image = if p == 0 { Subspace::zero(field, dim_cochains) } else { cx.matrix(p - 1).image() };
        let mut span = Span::new(&image);
        let kernel = d_out.kernel();
        let mut representatives = Vec::new();
        let mut graded = vec![0; q];
        for m in (1..=q).rev() {
            let (lo, hi) = (degree_start(a, p, m), degree_start(a, p, m + 1));
            // RREF rows with pivot ≥ lo span the cocycles supported in degrees ≥ m
            for (v, &pivot) in kernel.basis().iter().zip(kernel.pivots()) {
                if (lo..hi).contains(&pivot) && span.insert(v) {
                    representatives.push(from_coordinates(a, p, v).expect("kernel vectors have full length"));
                    graded[m - 1] += 1;
                }
            }
        }
        let blocks = (1..=q)
            .map(|m| BlockCohomology { internal_degree: m, dim_cochains: s.dim_l_in_degree(p, m), dim: graded[m - 1] })
            .collect();
        groups.push(CohomologyGroup {
            p,
            hh_index: p + 1,
            dim: representatives.len(),
            dim_cochains,
            rank_in: image.dim(),
            rank_out: dim_cochains - kernel.dim(),
            blocks,
            representatives,
        });
    }
    CohomologyReport { field, dims: a.dims().to_vec(), p_max, groups }
}

/// Result of comparing `A` with `A_{≤q'}` through the restriction map of cochains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationComparison {
    pub q: usize,
    pub truncated_q: usize,
    /// `d' ∘ π = π ∘ d` on every `L^p`, `p ≤ p_max`.
    pub chain_map: bool,
    /// Internal degrees `n ≤ q'` on which the two differentials agree entry by entry.
    pub identical_degrees: Vec<usize>,
    pub full: Vec<Vec<usize>>,
    pub truncated: Vec<Vec<usize>>,
    pub full_dims: Vec<usize>,
    pub truncated_dims: Vec<usize>,
}

/// Compares `A` with its truncation at `q'`. The restriction `π : L → L_{≤q'}` keeps the
/// coordinates of internal degree `≤ q'`, which come first, so `π ∘ d = d' ∘ π` says that the
/// leading `dim L^{p+1}_{≤q'} × dim L^p_{≤q'}` corner of `d_p` is `d'_p`, and that `d_p` maps
/// degrees `> q'` into degrees `> q'`. Both are checked entry by entry.
pub fn compare_truncations(a: &GradedAlgebra, q: usize, p_max: usize) -> Result<TruncationComparison, HochschildError> {
    if q > a.q() {
        return Err(HochschildError::TruncationTooLarge { requested: q, q: a.q() });
    }
    let t = a.truncate(q).expect("bound checked");
    let full = CochainComplex::new(a, p_max);
    let trunc = CochainComplex::new(&t, p_max);
    let mut identical = vec![true; q];
    let mut preserves_kernel = true;
    for p in 0..=p_max {
        let d = full.matrix(p);
        let dt = trunc.matrix(p);
        let (row_cut, col_cut) = (degree_start(a, p + 1, q + 1), degree_start(a, p, q + 1));
        for (r, c, v) in d.entries() {
            if c >= col_cut && r < row_cut {
                preserves_kernel = false;
            }
            if r < row_cut && c < col_cut && dt.get(r, c) != *v {
                identical[degree_of(a, p + 1, r) - 1] = false;
            }
        }
        for (r, c, v) in dt.entries() {
            if d.get(r, c) != *v {
                identical[degree_of(a, p + 1, r) - 1] = false;
            }
        }
    }
    let identical_degrees: Vec<usize> = (1..=q).filter(|&n| identical[n - 1]).collect();
    let full_report = cohomology(a, p_max);
    let trunc_report = cohomology(&t, p_max);
    Ok(TruncationComparison {
        q: a.q(),
        truncated_q: q,
        chain_map: preserves_kernel && identical_degrees.len() == q,
        identical_degrees,
        full: full_report.block_table(),
        truncated: trunc_report.block_table(),
        full_dims: full_report.dims_by_p(),
        truncated_dims: trunc_report.dims_by_p(),
    })
}

/// Internal degree of coordinate `k` of `L^p`.
fn degree_of(a: &GradedAlgebra, p: usize, k: usize) -> usize {
    (1..=a.q()).rev().find(|&n| degree_start(a, p, n) <= k).expect("coordinate in range")
}
