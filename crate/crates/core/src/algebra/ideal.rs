use serde::Serialize;

use super::{AlgebraError, GradedAlgebra};
use crate::graded::{GradedError, GradedSubspace};
use crate::linalg::{unit, Matrix, Scalar, Subspace};

/// A two-sided graded ideal of the positive part, one subspace per degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GradedIdeal {
    pieces: GradedSubspace,
}

impl GradedIdeal {
    /// Checks two-sidedness against `algebra`.
    pub fn new(algebra: &GradedAlgebra, pieces: GradedSubspace) -> Result<GradedIdeal, AlgebraError> {
        algebra.check_shape(&pieces)?;
        if !algebra.is_two_sided(&pieces) {
            return Err(AlgebraError::InvalidConstructor("graded subspace is not a two-sided ideal".into()));
        }
        Ok(GradedIdeal { pieces })
    }

    pub fn zero(algebra: &GradedAlgebra) -> GradedIdeal {
        GradedIdeal { pieces: GradedSubspace::zero(algebra.space(), algebra.field()) }
    }

    /// `A_{≥k}`, an ideal for every `k ≥ 1`.
    pub fn at_least(algebra: &GradedAlgebra, k: usize) -> GradedIdeal {
        GradedIdeal { pieces: GradedSubspace::at_least(algebra.space(), algebra.field(), k.max(1)) }
    }

    pub fn pieces(&self) -> &GradedSubspace {
        &self.pieces
    }

    pub fn into_pieces(self) -> GradedSubspace {
        self.pieces
    }

    pub fn piece(&self, degree: usize) -> &Subspace {
        self.pieces.piece(degree)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.dims()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_zero()
    }

    pub fn is_subideal_of(&self, other: &GradedIdeal) -> Result<bool, GradedError> {
        self.pieces.is_subspace_of(&other.pieces)
    }

    pub fn sum(&self, other: &GradedIdeal) -> Result<GradedIdeal, GradedError> {
        Ok(GradedIdeal { pieces: self.pieces.sum(&other.pieces)? })
    }

    pub fn intersect(&self, other: &GradedIdeal) -> Result<GradedIdeal, GradedError> {
        Ok(GradedIdeal { pieces: self.pieces.intersect(&other.pieces)? })
    }

    pub fn truncate(&self, q: usize) -> GradedIdeal {
        GradedIdeal { pieces: self.pieces.truncate(q) }
    }
}

impl GradedAlgebra {
    fn check_shape(&self, s: &GradedSubspace) -> Result<(), GradedError> {
        if s.dims().len() != self.q() || s.pieces().iter().zip(self.dims()).any(|(p, &d)| p.ambient_dim() != d) {
            return Err(GradedError::SpaceMismatch {
                left: self.dims().to_vec(),
                right: s.pieces().iter().map(Subspace::ambient_dim).collect(),
            });
        }
        if let Some(p) = s.pieces().iter().find(|p| p.field() != self.field()) {
            return Err(GradedError::FieldMismatch { left: self.field(), right: p.field() });
        }
        Ok(())
    }

    /// Span of `μ(u, e)` and `μ(e, u)` for `u` in the basis of `piece ⊆ A_i` and `e` in the basis of `A_j`.
    fn two_sided_products(&self, i: usize, piece: &Subspace, j: usize) -> Result<Subspace, GradedError> {
        let field = self.field();
        let n = i + j;
        let mut vectors = Vec::new();
        for u in piece.basis() {
            for b in 0..self.dim(j) {
                let e = unit(field, self.dim(j), b);
                vectors.push(self.multiply(i, u, j, &e));
                vectors.push(self.multiply(j, &e, i, u));
            }
        }
        Ok(Subspace::span(field, self.dim(n), &vectors)?)
    }

    /// Whether a graded subspace is closed under multiplication by `A_{>0}` on both sides.
    pub fn is_two_sided(&self, s: &GradedSubspace) -> bool {
        if self.check_shape(s).is_err() {
            return false;
        }
        for i in 1..=self.q() {
            for j in 1..=self.q() - i {
                let products = self.two_sided_products(i, s.piece(i), j).expect("shapes checked");
                if !products.is_subspace_of(s.piece(i + j)).expect("shapes checked") {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest two-sided ideal containing `gens`. Degrees are closed in ascending order,
    /// multiplying by every `A_j`, and the pass repeats until nothing grows.
    pub fn ideal_generated_by(&self, gens: &GradedSubspace) -> Result<GradedIdeal, GradedError> {
        self.check_shape(gens)?;
        let mut pieces = gens.clone();
        loop {
            let mut grew = false;
            for i in 1..=self.q() {
                for j in 1..=self.q() - i {
                    let products = self.two_sided_products(i, pieces.piece(i), j)?;
                    let target = pieces.piece(i + j);
                    if !products.is_subspace_of(target)? {
                        *pieces.piece_mut(i + j) = target.sum(&products)?;
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(GradedIdeal { pieces });
            }
        }
    }

    /// `Σ_{a+b=n} μ(I_a ⊗ J_b)` in each degree `n`, closed to a two-sided ideal.
    pub fn ideal_product(&self, left: &GradedIdeal, right: &GradedIdeal) -> Result<GradedIdeal, GradedError> {
        self.check_shape(&left.pieces)?;
        self.check_shape(&right.pieces)?;
        let mut pieces = GradedSubspace::zero(self.space(), self.field());
        for n in 2..=self.q() {
            let mut vectors = Vec::new();
            for a in 1..n {
                let b = n - a;
                for u in left.piece(a).basis() {
                    for v in right.piece(b).basis() {
                        vectors.push(self.multiply(a, u, b, v));
                    }
                }
            }
            *pieces.piece_mut(n) = Subspace::span(self.field(), self.dim(n), &vectors)?;
        }
        self.ideal_generated_by(&pieces)
    }

    /// True iff `A_1` generates `A_{>0}`.
    pub fn is_generated_in_degree_one(&self) -> bool {
        let mut gens = GradedSubspace::zero(self.space(), self.field());
        if self.q() >= 1 {
            *gens.piece_mut(1) = Subspace::full(self.field(), self.dim(1));
        }
        let ideal = self.ideal_generated_by(&gens).expect("shape is the algebra's own");
        ideal.pieces().pieces().iter().all(Subspace::is_full)
    }

    /// The largest two-sided ideal with zero degree-`q` piece. Computed from the top down:
    /// `K_q = 0` and `K_i = {v ∈ A_i : v·A_j ⊆ K_{i+j} and A_j·v ⊆ K_{i+j} for all j ≥ 1}`.
    pub fn largest_top_vanishing_ideal(&self) -> GradedIdeal {
        let field = self.field();
        let q = self.q();
        let mut pieces = GradedSubspace::zero(self.space(), field);
        for i in (1..q).rev() {
            let di = self.dim(i);
            let mut constraints: Vec<Vec<Scalar>> = Vec::new();
            for j in 1..=q - i {
                let target = pieces.piece(i + j).clone();
                let dn = self.dim(i + j);
                // v ↦ reduce(μ(v, e)) and v ↦ reduce(μ(e, v)) are linear in v; collect their rows.
                for b in 0..self.dim(j) {
                    let e = unit(field, self.dim(j), b);
                    for side in [false, true] {
                        let mut m = Matrix::zero(field, dn, di);
                        for a in 0..di {
                            let u = unit(field, di, a);
                            let prod = if side { self.multiply(j, &e, i, &u) } else { self.multiply(i, &u, j, &e) };
                            for (r, x) in target.reduce(&prod).into_iter().enumerate() {
                                if !x.is_zero() {
                                    m.set(r, a, x);
                                }
                            }
                        }
                        constraints.extend(m.to_dense());
                    }
                }
            }
            let m = Matrix::from_dense(field, constraints.len(), di, &constraints).expect("rows have width d_i");
            *pieces.piece_mut(i) = m.kernel();
        }
        GradedIdeal { pieces }
    }

    /// Whether some nonzero two-sided ideal vanishes in degree `q`.
    pub fn has_top_vanishing_ideal(&self) -> bool {
        !self.largest_top_vanishing_ideal().is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{free_algebra, polynomial_algebra};
    use crate::graded::GradedVectorSpace;
    use crate::linalg::Field;

    fn line(field: Field, d: usize, i: usize) -> Subspace {
        Subspace::coordinate(field, d, &[i])
    }

    fn gens_in_degree_one(a: &GradedAlgebra, s: Subspace) -> GradedSubspace {
        let mut g = GradedSubspace::zero(a.space(), a.field());
        *g.piece_mut(1) = s;
        g
    }

    #[test]
    fn generated_by_zero_is_zero() {
        let a = polynomial_algebra(2, 2, Field::Rational).unwrap();
        let i = a.ideal_generated_by(&GradedSubspace::zero(a.space(), a.field())).unwrap();
        assert!(i.is_zero());
    }

    #[test]
    fn ideal_of_x_in_plane() {
        let f = Field::Rational;
        let a = polynomial_algebra(2, 2, f).unwrap();
        let i = a.ideal_generated_by(&gens_in_degree_one(&a, line(f, 2, 0))).unwrap();
        assert_eq!(i.dims(), vec![1, 2]);
        assert_eq!(i.piece(2), &Subspace::coordinate(f, 3, &[0, 1]));
        assert!(a.is_two_sided(i.pieces()));
    }

    #[test]
    fn generated_by_a1_is_everything() {
        let f = Field::Prime(3);
        let a = polynomial_algebra(2, 3, f).unwrap();
        let i = a.ideal_generated_by(&gens_in_degree_one(&a, Subspace::full(f, 2))).unwrap();
        assert_eq!(i, GradedIdeal::at_least(&a, 1));
    }

    #[test]
    fn generation_is_a_fixpoint() {
        let f = Field::Rational;
        let a = free_algebra(2, 3, f).unwrap();
        let i = a.ideal_generated_by(&gens_in_degree_one(&a, line(f, 2, 1))).unwrap();
        assert_eq!(a.ideal_generated_by(i.pieces()).unwrap(), i);
        assert_eq!(i.dims(), vec![1, 3, 7]);
    }

    #[test]
    fn products_of_ideals() {
        let f = Field::Rational;
        let a = polynomial_algebra(2, 2, f).unwrap();
        let x = a.ideal_generated_by(&gens_in_degree_one(&a, line(f, 2, 0))).unwrap();
        let xx = a.ideal_product(&x, &x).unwrap();
        assert_eq!(xx.dims(), vec![0, 1]);
        assert_eq!(xx.piece(2), &line(f, 3, 0));
        assert!(a.ideal_product(&x, &GradedIdeal::zero(&a)).unwrap().is_zero());
        let full = GradedIdeal::at_least(&a, 1);
        assert_eq!(a.ideal_product(&full, &full).unwrap(), GradedIdeal::at_least(&a, 2));
        assert!(xx.is_subideal_of(&x.intersect(&x).unwrap()).unwrap());
    }

    #[test]
    fn generation_in_degree_one() {
        let f = Field::Rational;
        assert!(polynomial_algebra(2, 2, f).unwrap().is_generated_in_degree_one());
        assert!(free_algebra(2, 3, f).unwrap().is_generated_in_degree_one());
        assert!(!GradedAlgebra::trivial(GradedVectorSpace::new(vec![1, 1]), f).is_generated_in_degree_one());
    }

    #[test]
    fn top_vanishing_ideals() {
        let f = Field::Rational;
        assert!(!polynomial_algebra(2, 2, f).unwrap().has_top_vanishing_ideal());
        assert!(!free_algebra(2, 2, f).unwrap().has_top_vanishing_ideal());
        let zero = GradedAlgebra::trivial(GradedVectorSpace::new(vec![1, 1]), f);
        assert!(zero.has_top_vanishing_ideal());
        assert_eq!(zero.largest_top_vanishing_ideal().dims(), vec![1, 0]);
    }

    #[test]
    fn top_vanishing_ideal_is_an_ideal() {
        let f = Field::Rational;
        // A_1 = span{x, t}, x² spans A_2, t annihilates everything
        let a = polynomial_algebra(1, 2, f).unwrap();
        let s = GradedVectorSpace::new(vec![2, 1]);
        let mu = crate::graded::MultilinearOp::from_entries(
            &s,
            f,
            1,
            [(crate::graded::DegreeComposition(vec![1, 1]), 0, 0, f.one())],
        )
        .unwrap();
        let b = GradedAlgebra::new(s, mu).unwrap();
        let k = b.largest_top_vanishing_ideal();
        assert_eq!(k.dims(), vec![1, 0]);
        assert_eq!(k.piece(1), &line(f, 2, 1));
        assert!(b.is_two_sided(k.pieces()));
        assert!(!a.has_top_vanishing_ideal());
    }
}
