use serde::Serialize;

use super::{check_cochain, coordinates, differential_matrix, is_cocycle, CocycleViolation, HochschildError};
use crate::algebra::GradedAlgebra;
use crate::graded::{DegreeComposition, MultilinearOp};
use crate::linalg::{unit, Scalar};

/// `α(a,b)c − α(a,bc) + α(ab,c) − aα(b,c)` on basis elements `a = e^i_x`, `b = e^j_y`, `c = e^k_z`.
pub fn evaluate_coc(a: &GradedAlgebra, alpha: &MultilinearOp, degrees: [usize; 3], indices: [usize; 3]) -> Vec<Scalar> {
    let [i, j, k] = degrees;
    let [x, y, z] = indices;
    let field = a.field();
    let n = i + j + k;
    let mut out = vec![field.zero(); a.dim(n)];
    if n > a.q() {
        return out;
    }
    let ea = unit(field, a.dim(i), x);
    let eb = unit(field, a.dim(j), y);
    let ec = unit(field, a.dim(k), z);
    let alpha_at = |d1: usize, u: &[Scalar], d2: usize, v: &[Scalar]| -> Vec<Scalar> {
        let block = alpha.block_or_zero(&DegreeComposition(vec![d1, d2]));
        let mut res = vec![field.zero(); a.dim(d1 + d2)];
        for (r, col, val) in block.entries() {
            let (s, t) = (col / a.dim(d2), col % a.dim(d2));
            res[r] = &res[r] + &(val * &(&u[s] * &v[t]));
        }
        res
    };
    let terms = [
        (a.multiply(i + j, &alpha_at(i, &ea, j, &eb), k, &ec), false),
        (alpha_at(i, &ea, j + k, &a.multiply(j, &eb, k, &ec)), true),
        (alpha_at(i + j, &a.multiply(i, &ea, j, &eb), k, &ec), false),
        (a.multiply(i, &ea, j + k, &alpha_at(j, &eb, k, &ec)), true),
    ];
    for (term, negate) in terms {
        for (o, t) in out.iter_mut().zip(term) {
            *o = if negate { &*o - &t } else { &*o + &t };
        }
    }
    out
}

/// `a∗b = ab + εα(a,b)` on `V ⊕ εV`, checked associative modulo `ε²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deformation {
    pub mu: MultilinearOp,
    pub alpha: MultilinearOp,
    /// Number of basis triples on which the cocycle condition was evaluated.
    pub triples_checked: usize,
    /// Whether `α` is a coboundary, so `∗` is isomorphic to the undeformed product.
    pub equivalent_to_trivial: bool,
}

fn check_two_cochain(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<(), HochschildError> {
    check_cochain(a, alpha)?;
    if alpha.arity_index() != 1 {
        return Err(HochschildError::ArityMismatch { expected: 1, found: alpha.arity_index() });
    }
    Ok(())
}

/// Builds the first-order deformation, evaluating the cocycle condition on every basis triple.
pub fn deform(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<Deformation, HochschildError> {
    check_two_cochain(a, alpha)?;
    let s = a.space();
    let mut triples_checked = 0;
    for c in s.compositions(3) {
        let degrees = [c.0[0], c.0[1], c.0[2]];
        for col in 0..s.tensor_dim(&c) {
            let idx = c.decode(s, col);
            let value = evaluate_coc(a, alpha, degrees, [idx[0], idx[1], idx[2]]);
            triples_checked += 1;
            if value.iter().any(|v| !v.is_zero()) {
                return Err(HochschildError::NotCocycle(CocycleViolation { degrees: c.0.clone(), indices: idx, value }));
            }
        }
    }
    Ok(Deformation {
        mu: a.mu().clone(),
        alpha: alpha.clone(),
        triples_checked,
        equivalent_to_trivial: is_coboundary(a, alpha)?,
    })
}

/// Whether `φ ∈ L^p` lies in the image of `d^μ : L^{p−1} → L^p`.
pub fn is_coboundary(a: &GradedAlgebra, phi: &MultilinearOp) -> Result<bool, HochschildError> {
    check_cochain(a, phi)?;
    let p = phi.arity_index();
    if p == 0 {
        return Ok(phi.is_zero());
    }
    if phi.is_zero() {
        return Ok(true);
    }
    Ok(differential_matrix(a, p - 1).image().contains(&coordinates(phi)))
}

/// Whether `∗_α` and `∗_{α'}` are isomorphic through some `id + εβ`, i.e. `α − α' ∈ im d^μ`.
pub fn deformations_equivalent(a: &GradedAlgebra, alpha: &MultilinearOp, other: &MultilinearOp) -> Result<bool, HochschildError> {
    check_two_cochain(a, alpha)?;
    check_two_cochain(a, other)?;
    is_coboundary(a, &alpha.sub(other)?)
}

/// `α∘α ∈ L^2` and the status of its class in `H^2 = HH^3_gr`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub representative: MultilinearOp,
    pub closed: bool,
    pub vanishes: bool,
}

/// The primary obstruction to extending `α` to second order.
pub fn primary_obstruction(a: &GradedAlgebra, alpha: &MultilinearOp) -> Result<Obstruction, HochschildError> {
    check_two_cochain(a, alpha)?;
    let representative = alpha.circle(alpha)?;
    let closed = is_cocycle(a, &representative)?;
    let vanishes = closed && is_coboundary(a, &representative)?;
    Ok(Obstruction { representative, closed, vanishes })
}
