//! Stability parameters, filtrations and admissible families of ideals, weight and
//! Futaki functions, the Hilbert–Mumford pairing and bounded searches for
//! destabilizing test configurations.

mod filtration;
mod search;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::graded::GradedError;
use crate::linalg::Field;

pub use filtration::{Filtration, WeightProfile};
pub use search::{
    admissible_closure, check_q_stability, powers_family, CandidateSource, Certificate, SearchConfig,
    SearchDescriptor, Strategy, Verdict, VerdictKind,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("{theta:?} is not a stability parameter for dimension vector {dims:?}")]
    InvalidParameter { theta: Vec<i64>, dims: Vec<usize> },
    #[error("no standard stability parameter: {0}")]
    NoStandardParameter(String),
    #[error("A_1 = 0, so the algebra is not generated in degree 1 and has no flags to test")]
    NoDegreeOneGenerators,
    #[error("exhaustive search needs a finite field, got {0}")]
    UnsupportedExhaustive(Field),
    #[error("invalid flag: {0}")]
    BadFlag(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// An integer vector `θ` with `Σ θ_i d_i < 0` and `Σ i θ_i d_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct StabilityParameter {
    theta: Vec<i64>,
}

/// Whether `θ` satisfies both parameter conditions for `dims`.
pub fn validate_parameter(theta: &[i64], dims: &[usize]) -> bool {
    if theta.len() != dims.len() {
        return false;
    }
    let sum: i128 = theta.iter().zip(dims).map(|(&t, &d)| t as i128 * d as i128).sum();
    let weighted: i128 = theta.iter().zip(dims).enumerate().map(|(i, (&t, &d))| (i as i128 + 1) * t as i128 * d as i128).sum();
    sum < 0 && weighted == 0
}

impl StabilityParameter {
    pub fn new(theta: Vec<i64>, dims: &[usize]) -> Result<StabilityParameter, StabilityError> {
        if !validate_parameter(&theta, dims) {
            return Err(StabilityError::InvalidParameter { theta, dims: dims.to_vec() });
        }
        Ok(StabilityParameter { theta })
    }

    /// The smallest integer parameter supported on degrees `1` and `q`:
    /// `θ_1 = −q·d_q/g`, `θ_q = d_1/g` with `g = gcd(q·d_q, d_1)`.
    pub fn standard(dims: &[usize]) -> Result<StabilityParameter, StabilityError> {
        let q = dims.len();
        if q < 2 {
            return Err(StabilityError::NoStandardParameter("needs q ≥ 2".into()));
        }
        let (d1, dq) = (dims[0] as i64, dims[q - 1] as i64);
        if d1 == 0 {
            return Err(StabilityError::NoStandardParameter("d_1 = 0".into()));
        }
        if dq == 0 {
            return Err(StabilityError::NoStandardParameter("d_q = 0, so θ_q = 0 and there are no stable algebras".into()));
        }
        let top = q as i64 * dq;
        let g = top.gcd(&d1);
        let mut theta = vec![0; q];
        theta[0] = -top / g;
        theta[q - 1] = d1 / g;
        StabilityParameter::new(theta, dims)
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    /// Only `θ_1` and `θ_q` are nonzero.
    pub fn is_standard(&self) -> bool {
        let q = self.theta.len();
        q >= 2 && self.theta[1..q - 1].iter().all(|&t| t == 0)
    }
}

/// `Σ θ_i w_i`.
pub fn hm_pairing(theta: &StabilityParameter, weights: &WeightProfile) -> i64 {
    theta.theta().iter().zip(&weights.w).map(|(t, w)| t * w).sum()
}

pub fn standard_parameter(dims: &[usize]) -> Result<StabilityParameter, StabilityError> {
    StabilityParameter::standard(dims)
}

pub fn weight_profile(f: &Filtration) -> WeightProfile {
    f.weights()
}

pub fn is_standard_nontrivial(f: &Filtration) -> bool {
    f.is_standard_nontrivial()
}

/// The equivalent configuration with `F(i) ↦ F(i) + ℓ`.
pub fn futaki_equivalence_shift(f: &Filtration, ell: i64) -> Filtration {
    f.shifted(ell)
}

/// `gcd(d_1, 2d_2, …, q·d_q) = 1`.
pub fn is_strongly_coprime(dims: &[usize]) -> bool {
    dims.iter().enumerate().fold(0usize, |g, (i, &d)| g.gcd(&((i + 1) * d))) == 1
}
