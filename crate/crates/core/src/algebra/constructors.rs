use std::collections::HashMap;

use serde::Serialize;

use super::{AlgebraError, GradedAlgebra};
use crate::graded::{DegreeComposition, GradedSubspace, GradedVectorSpace, MultilinearOp};
use crate::linalg::unit;
use crate::linalg::{Field, Matrix, Scalar, Subspace};

fn variable_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// Exponent vectors of total degree `i` in `n` variables, lexicographically descending
/// (`x² > xy > y²`).
fn monomials(n: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, i, &mut Vec::with_capacity(n), &mut out);
    out
}

fn monomial_label(names: &[String], exps: &[usize]) -> String {
    let sep = if names.len() > 3 { "*" } else { "" };
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    parts.join(sep)
}

/// Algebra on a monomial basis with product `m·m' = coeff(m, m')·(m + m')`.
fn monomial_algebra<C>(n: usize, q: usize, field: Field, coeff: C) -> Result<GradedAlgebra, AlgebraError>
where
    C: Fn(&[usize], &[usize]) -> Scalar,
{
    let bases: Vec<Vec<Vec<usize>>> = (1..=q).map(|i| monomials(n, i)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect()).collect();
    let space = GradedVectorSpace::new(bases.iter().map(Vec::len).collect());
    let mut entries = Vec::new();
    for i in 1..q {
        for j in 1..=q - i {
            let dj = bases[j - 1].len();
            for (a, m) in bases[i - 1].iter().enumerate() {
                for (b, m2) in bases[j - 1].iter().enumerate() {
                    let sum: Vec<usize> = m.iter().zip(m2).map(|(x, y)| x + y).collect();
                    let r = index[i + j - 1][&sum];
                    entries.push((DegreeComposition(vec![i, j]), r, a * dj + b, coeff(m, m2)));
                }
            }
        }
    }
    let mu = MultilinearOp::from_entries(&space, field, 1, entries)?;
    let names = variable_names(n);
    let labels = bases.iter().map(|b| b.iter().map(|m| monomial_label(&names, m)).collect()).collect();
    GradedAlgebra::new(space, mu)?.with_labels(labels)
}

/// `F[x_1, …, x_n]` truncated at degree `q`, monomials in lexicographic order.
pub fn polynomial_algebra(n_vars: usize, q: usize, field: Field) -> Result<GradedAlgebra, AlgebraError> {
    if n_vars == 0 {
        return Err(AlgebraError::InvalidConstructor("polynomial algebra needs at least one variable".into()));
    }
    monomial_algebra(n_vars, q, field, |_, _| field.one())
}

/// `F⟨x, y⟩/(yx − λxy)` truncated at degree `q`, on the basis `x^a y^b`.
pub fn skew_plane(lambda: &Scalar, q: usize) -> Result<GradedAlgebra, AlgebraError> {
    if lambda.is_zero() {
        return Err(AlgebraError::InvalidConstructor("skew parameter must be nonzero".into()));
    }
    // (x^a y^b)(x^c y^d) = λ^{bc} x^{a+c} y^{b+d}
    monomial_algebra(2, q, lambda.field(), |m, m2| lambda.pow((m[1] * m2[0]) as u32))
}

/// Free associative algebra on `n_gens` degree-one letters, words in lexicographic order.
pub fn free_algebra(n_gens: usize, q: usize, field: Field) -> Result<GradedAlgebra, AlgebraError> {
    if n_gens == 0 {
        return Err(AlgebraError::InvalidConstructor("free algebra needs at least one generator".into()));
    }
    let dims: Vec<usize> = (1..=q).map(|i| n_gens.pow(i as u32)).collect();
    let space = GradedVectorSpace::new(dims);
    // With left-major indexing, concatenation is the identity on each block.
    let mut blocks = Vec::new();
    for i in 1..q {
        for j in 1..=q - i {
            blocks.push((DegreeComposition(vec![i, j]), Matrix::identity(field, n_gens.pow((i + j) as u32))));
        }
    }
    let mu = MultilinearOp::from_blocks(&space, field, 1, blocks)?;
    let names = variable_names(n_gens);
    let sep = if n_gens > 3 { "*" } else { "" };
    let labels = (1..=q)
        .map(|i| {
            (0..n_gens.pow(i as u32))
                .map(|mut w| {
                    let mut letters = vec![String::new(); i];
                    for slot in letters.iter_mut().rev() {
                        *slot = names[w % n_gens].clone();
                        w /= n_gens;
                    }
                    letters.join(sep)
                })
                .collect()
        })
        .collect();
    GradedAlgebra::new(space, mu)?.with_labels(labels)
}

/// What [`GradedAlgebra::quotient`] did besides building the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientInfo {
    /// The ideal generated by the relations.
    pub ideal: GradedSubspace,
    /// Per degree, the ambient basis indices kept as the quotient basis.
    pub kept: Vec<Vec<usize>>,
    /// Degrees that were nonzero before and vanish in the quotient.
    pub vanished_degrees: Vec<usize>,
}

impl GradedAlgebra {
    /// `A/(relations)`. Each relation is `(degree, coordinates)`. The quotient basis in each
    /// degree is chosen greedily: an ambient basis vector is kept iff it is independent of
    /// the ideal and the vectors kept before it.
    pub fn quotient(&self, relations: &[(usize, Vec<Scalar>)]) -> Result<(GradedAlgebra, QuotientInfo), AlgebraError> {
        let field = self.field();
        let mut gens: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); self.q()];
        for (degree, v) in relations {
            let expected = self.dim(*degree);
            if *degree == 0 || *degree > self.q() || v.len() != expected {
                return Err(AlgebraError::BadRelation { degree: *degree, expected, found: v.len() });
            }
            for x in v {
                field.check(x)?;
            }
            gens[degree - 1].push(v.clone());
        }
        let pieces = gens
            .iter()
            .enumerate()
            .map(|(k, g)| Subspace::span(field, self.dim(k + 1), g))
            .collect::<Result<Vec<_>, _>>()?;
        let ideal = self.ideal_generated_by(&GradedSubspace::from_pieces(&self.space, pieces)?)?;

        let mut kept = Vec::with_capacity(self.q());
        let mut projections = Vec::with_capacity(self.q());
        for i in 1..=self.q() {
            let d = self.dim(i);
            let piece = ideal.piece(i);
            let mut span = piece.clone();
            let mut chosen = Vec::new();
            for k in 0..d {
                let e = unit(field, d, k);
                if !span.contains(&e) {
                    span = span.sum(&Subspace::span(field, d, &[e])?)?;
                    chosen.push(k);
                }
            }
            // Columns: kept unit vectors then the ideal basis; the first rows of the
            // inverse give coordinates modulo the ideal.
            let mut columns: Vec<Vec<Scalar>> = chosen.iter().map(|&k| unit(field, d, k)).collect();
            columns.extend(piece.basis().iter().cloned());
            let basis = Matrix::from_dense(field, d, d, &columns)?.transpose();
            let inv = basis.inverse().expect("kept vectors complement the ideal");
            let rows = chosen.len();
            let proj = Matrix::from_triplets(
                field,
                rows,
                d,
                inv.entries().filter(|&(r, _, _)| r < rows).map(|(r, c, v)| (r, c, v.clone())),
            )?;
            kept.push(chosen);
            projections.push(proj);
        }

        let new_dims: Vec<usize> = kept.iter().map(Vec::len).collect();
        let space = GradedVectorSpace::new(new_dims.clone());
        let inclusion = |i: usize| -> Result<Matrix, AlgebraError> {
            let triplets = kept[i - 1].iter().enumerate().map(|(col, &row)| (row, col, field.one()));
            Ok(Matrix::from_triplets(field, self.dim(i), new_dims[i - 1], triplets)?)
        };
        let mut blocks = Vec::new();
        for (c, m) in self.mu.blocks() {
            let (i, j) = (c.0[0], c.0[1]);
            let lifted = m.mul(&inclusion(i)?.kronecker(&inclusion(j)?)?)?;
            blocks.push((c.clone(), projections[i + j - 1].mul(&lifted)?));
        }
        let mu = MultilinearOp::from_blocks(&space, field, 1, blocks)?;
        let mut quotient = GradedAlgebra::new(space, mu)?;
        if let Some(labels) = &self.labels {
            let labels = kept.iter().zip(labels).map(|(k, l)| k.iter().map(|&i| l[i].clone()).collect()).collect();
            quotient = quotient.with_labels(labels)?;
        }
        let vanished_degrees = (1..=self.q()).filter(|&i| self.dim(i) > 0 && new_dims[i - 1] == 0).collect();
        Ok((quotient, QuotientInfo { ideal: ideal.into_pieces(), kept, vanished_degrees }))
    }
}
