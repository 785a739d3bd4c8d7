use rand::Rng;

use super::{GradedError, GradedVectorSpace, MultilinearOp};
use crate::linalg::{Field, Matrix, Scalar};

/// An element `g = (g_1, …, g_q)` of the gauge group `∏ GL(V_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeElement {
    space: GradedVectorSpace,
    field: Field,
    components: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl GaugeElement {
    pub fn new(space: &GradedVectorSpace, field: Field, components: Vec<Matrix>) -> Result<GaugeElement, GradedError> {
        if components.len() != space.q() {
            return Err(GradedError::SpaceMismatch {
                left: space.dims().to_vec(),
                right: components.iter().map(Matrix::rows).collect(),
            });
        }
        let mut inverses = Vec::with_capacity(components.len());
        for (i, g) in components.iter().enumerate() {
            let d = space.dim(i + 1);
            if g.field() != field {
                return Err(GradedError::FieldMismatch { left: field, right: g.field() });
            }
            if (g.rows(), g.cols()) != (d, d) {
                return Err(GradedError::SpaceMismatch {
                    left: space.dims().to_vec(),
                    right: components.iter().map(Matrix::rows).collect(),
                });
            }
            inverses.push(g.inverse().ok_or(GradedError::NotInvertible { degree: i + 1 })?);
        }
        Ok(GaugeElement { space: space.clone(), field, components, inverses })
    }

    pub fn identity(space: &GradedVectorSpace, field: Field) -> GaugeElement {
        let components: Vec<Matrix> = space.dims().iter().map(|&d| Matrix::identity(field, d)).collect();
        GaugeElement { space: space.clone(), field, inverses: components.clone(), components }
    }

    /// `Γ(t) = (t, t², …, t^q)`, the central one-parameter subgroup.
    pub fn gamma(space: &GradedVectorSpace, t: &Scalar) -> Result<GaugeElement, GradedError> {
        let field = t.field();
        let components = (1..=space.q())
            .map(|i| Matrix::identity(field, space.dim(i)).scale(&t.pow(i as u32)))
            .collect();
        GaugeElement::new(space, field, components)
    }

    /// Uniformly chosen components conditioned on invertibility.
    pub fn random<R: Rng + ?Sized>(space: &GradedVectorSpace, field: Field, rng: &mut R) -> GaugeElement {
        let mut components = Vec::new();
        for &d in space.dims() {
            loop {
                let dense: Vec<Vec<Scalar>> = (0..d).map(|_| (0..d).map(|_| field.random(rng)).collect()).collect();
                let m = Matrix::from_dense(field, d, d, &dense).expect("square");
                if m.rank() == d {
                    components.push(m);
                    break;
                }
            }
        }
        GaugeElement::new(space, field, components).expect("components are invertible")
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, degree: usize) -> &Matrix {
        &self.components[degree - 1]
    }

    pub fn inverse(&self) -> GaugeElement {
        GaugeElement {
            space: self.space.clone(),
            field: self.field,
            components: self.inverses.clone(),
            inverses: self.components.clone(),
        }
    }

    /// Group product `(gh)_i = g_i h_i`.
    pub fn compose(&self, other: &GaugeElement) -> Result<GaugeElement, GradedError> {
        if self.space != other.space {
            return Err(GradedError::SpaceMismatch {
                left: self.space.dims().to_vec(),
                right: other.space.dims().to_vec(),
            });
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.mul(b)).collect::<Result<_, _>>()?;
        GaugeElement::new(&self.space, self.field, components)
    }

    /// Conjugation action on `L^p`: each block `c` becomes
    /// `g_{Σc} ∘ φ_c ∘ (g_{c_0}^{-1} ⊗ … ⊗ g_{c_p}^{-1})`.
    pub fn act(&self, op: &MultilinearOp) -> Result<MultilinearOp, GradedError> {
        if op.space() != &self.space {
            return Err(GradedError::SpaceMismatch {
                left: self.space.dims().to_vec(),
                right: op.space().dims().to_vec(),
            });
        }
        if op.field() != self.field {
            return Err(GradedError::FieldMismatch { left: self.field, right: op.field() });
        }
        let mut blocks = Vec::new();
        for (c, m) in op.blocks() {
            let mut right = Matrix::identity(self.field, 1);
            for &n in c.parts() {
                right = right.kronecker(&self.inverses[n - 1])?;
            }
            let left = &self.components[c.degree() - 1];
            blocks.push((c.clone(), left.mul(&m.mul(&right)?)?));
        }
        MultilinearOp::from_blocks(&self.space, self.field, op.arity_index(), blocks)
    }
}
