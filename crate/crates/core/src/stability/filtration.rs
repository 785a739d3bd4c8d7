use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::StabilityError;
use crate::algebra::{GradedAlgebra, GradedIdeal};
use crate::graded::{GradedError, GradedSubspace, GradedVectorSpace};
use crate::linalg::Field;

/// A descending family `V^{(1)} ⊇ V^{(2)} ⊇ …` of graded subspaces, with `V^{(k)} = A` for
/// `k ≤ 0` and `V^{(k)} = 0` past the stored chain, re-indexed by an integer shift: the
/// effective piece `V'^{(k)}_i` is `V^{(k − shift·i)}_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    space: GradedVectorSpace,
    field: Field,
    chain: Vec<GradedSubspace>,
    shift: i64,
}

impl Filtration {
    /// Trailing zero pieces are dropped.
    pub fn new(space: &GradedVectorSpace, field: Field, chain: Vec<GradedSubspace>) -> Result<Filtration, StabilityError> {
        for piece in &chain {
            if piece.pieces().len() != space.q() || piece.pieces().iter().zip(space.dims()).any(|(s, &d)| s.ambient_dim() != d) {
                return Err(GradedError::SpaceMismatch { left: space.dims().to_vec(), right: piece.dims() }.into());
            }
            if let Some(s) = piece.pieces().iter().find(|s| s.field() != field) {
                return Err(GradedError::FieldMismatch { left: field, right: s.field() }.into());
            }
        }
        let mut chain = chain;
        while chain.last().is_some_and(GradedSubspace::is_zero) {
            chain.pop();
        }
        Ok(Filtration { space: space.clone(), field, chain, shift: 0 })
    }

    /// The trivial configuration with shift `ℓ`: `V^{(k)}_i = A_i` iff `k ≤ ℓ·i`.
    pub fn trivial(space: &GradedVectorSpace, field: Field, shift: i64) -> Filtration {
        Filtration { space: space.clone(), field, chain: Vec::new(), shift }
    }

    /// `V^{(k)} = A_{≥k}`.
    pub fn tautological(space: &GradedVectorSpace, field: Field) -> Filtration {
        Filtration::trivial(space, field, 1)
    }

    pub fn from_ideals(algebra: &GradedAlgebra, ideals: &[GradedIdeal]) -> Result<Filtration, StabilityError> {
        Filtration::new(algebra.space(), algebra.field(), ideals.iter().map(|i| i.pieces().clone()).collect())
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// The stored chain before shifting.
    pub fn chain(&self) -> &[GradedSubspace] {
        &self.chain
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Same family with every `V_i^{(k)}` moved to index `k + ℓ·i`, so `w_i ↦ w_i + ℓ·i·d_i`.
    pub fn shifted(&self, ell: i64) -> Filtration {
        Filtration { shift: self.shift + ell, ..self.clone() }
    }

    fn stored(&self, j: i64, degree: usize) -> crate::linalg::Subspace {
        let d = self.space.dim(degree);
        if j <= 0 {
            crate::linalg::Subspace::full(self.field, d)
        } else if j as usize > self.chain.len() {
            crate::linalg::Subspace::zero(self.field, d)
        } else {
            self.chain[j as usize - 1].piece(degree).clone()
        }
    }

    /// Effective `V^{(k)}` for any integer `k`.
    pub fn ideal(&self, k: i64) -> GradedSubspace {
        let pieces = (1..=self.space.q()).map(|i| self.stored(k - self.shift * i as i64, i)).collect();
        GradedSubspace::from_pieces(&self.space, pieces).expect("pieces built from the space")
    }

    /// Largest `k` with `V^{(k)} ≠ 0` in some degree, at least `0`.
    pub fn top(&self) -> i64 {
        (1..=self.space.q() as i64).map(|i| self.chain.len() as i64 + self.shift * i).max().unwrap_or(0).max(0)
    }

    /// The effective pieces `V^{(1)}, …, V^{(top)}`.
    pub fn ideals(&self) -> Vec<GradedSubspace> {
        (1..=self.top()).map(|k| self.ideal(k)).collect()
    }

    /// `w_i = Σ_k k·dim gr^k V_i`, which is `Σ_{k≥1} dim V_i^{(k)}` when `V^{(0)} = A`.
    pub fn weights(&self) -> WeightProfile {
        let q = self.space.q();
        let len = self.chain.len() as i64;
        let w = (1..=q)
            .map(|i| {
                let d = self.space.dim(i) as i64;
                let s = self.shift * i as i64;
                let mut total = 0i64;
                for k in (1 + s).min(1)..=(len + s).max(0) {
                    let dim = self.stored(k - s, i).dim() as i64;
                    total += if k >= 1 { dim } else { dim - d };
                }
                total
            })
            .collect();
        WeightProfile::new(w, self.space.dims())
    }

    pub fn is_descending(&self) -> bool {
        (1..self.top()).all(|k| self.ideal(k + 1).is_subspace_of(&self.ideal(k)).expect("same space"))
    }

    /// Two-sided ideals, descending, `I^{(k)}·I^{(ℓ)} ⊆ I^{(k+ℓ)}`, and zero past `top`.
    pub fn is_admissible(&self, algebra: &GradedAlgebra) -> bool {
        if algebra.space() != &self.space || algebra.field() != self.field {
            return false;
        }
        let ideals = self.ideals();
        if !ideals.iter().all(|v| algebra.is_two_sided(v)) || !self.is_descending() {
            return false;
        }
        let top = ideals.len();
        let as_ideal = |v: &GradedSubspace| GradedIdeal::new(algebra, v.clone()).expect("checked two-sided");
        let wrapped: Vec<GradedIdeal> = ideals.iter().map(as_ideal).collect();
        for k in 1..=top {
            for l in k..=top {
                let product = algebra.ideal_product(&wrapped[k - 1], &wrapped[l - 1]).expect("same space");
                let reverse = algebra.ideal_product(&wrapped[l - 1], &wrapped[k - 1]).expect("same space");
                let target = if k + l <= top { ideals[k + l - 1].clone() } else { GradedSubspace::zero(&self.space, self.field) };
                let inside = |p: &GradedIdeal| p.pieces().is_subspace_of(&target).expect("same space");
                if !inside(&product) || !inside(&reverse) {
                    return false;
                }
            }
        }
        true
    }

    /// `V^{(1)} ≠ 0` and the family does not contain the tautological one: some `k` has
    /// `V^{(k)} ⊉ A_{≥k}`.
    pub fn is_standard_nontrivial(&self) -> bool {
        if self.ideal(1).is_zero() {
            return false;
        }
        let bound = self.top().max(self.space.q() as i64);
        (1..=bound).any(|k| {
            let tautological = GradedSubspace::at_least(&self.space, self.field, k as usize);
            !tautological.is_subspace_of(&self.ideal(k)).expect("same space")
        })
    }
}

impl Serialize for Filtration {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Filtration", 3)?;
        st.serialize_field("shift", &self.shift)?;
        st.serialize_field("dims", &self.chain.iter().map(GradedSubspace::dims).collect::<Vec<_>>())?;
        st.serialize_field("ideals", &self.chain)?;
        st.end()
    }
}

/// Weights `w_i` and Futaki values `F(i) = w_i / (i·d_i)`, undefined where `d_i = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightProfile {
    pub w: Vec<i64>,
    pub futaki: Vec<Option<BigRational>>,
}

impl WeightProfile {
    pub fn new(w: Vec<i64>, dims: &[usize]) -> WeightProfile {
        let futaki = w
            .iter()
            .zip(dims)
            .enumerate()
            .map(|(i, (&wi, &d))| (d > 0).then(|| BigRational::new(BigInt::from(wi), BigInt::from((i + 1) * d))))
            .collect();
        WeightProfile { w, futaki }
    }
}

impl Serialize for WeightProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let futaki: Vec<Option<String>> = self.futaki.iter().map(|f| f.as_ref().map(|r| r.to_string())).collect();
        let mut st = serializer.serialize_struct("WeightProfile", 2)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("futaki", &futaki)?;
        st.end()
    }
}
