use std::collections::BTreeMap;

use rand::Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::{DegreeComposition, GradedError, GradedVectorSpace};
use crate::linalg::{Field, Matrix, Scalar};

/// A degree-preserving `(p+1)`-ary operation on a graded space: an element of `L^p`.
///
/// Only nonzero blocks are stored, so derived equality is equality of operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultilinearOp {
    arity_index: usize,
    field: Field,
    space: GradedVectorSpace,
    blocks: BTreeMap<DegreeComposition, Matrix>,
}

/// Sparse columns of one block: `cols[c]` lists the nonzero `(row, value)` pairs.
type SparseColumns = Vec<Vec<(usize, Scalar)>>;

impl MultilinearOp {
    pub fn zero(space: &GradedVectorSpace, field: Field, arity_index: usize) -> MultilinearOp {
        MultilinearOp { arity_index, field, space: space.clone(), blocks: BTreeMap::new() }
    }

    /// Builds an operation from whole blocks. Blocks for the same composition are summed.
    pub fn from_blocks<I>(
        space: &GradedVectorSpace,
        field: Field,
        arity_index: usize,
        blocks: I,
    ) -> Result<MultilinearOp, GradedError>
    where
        I: IntoIterator<Item = (DegreeComposition, Matrix)>,
    {
        let mut op = MultilinearOp::zero(space, field, arity_index);
        for (c, m) in blocks {
            op.check_block(&c)?;
            if m.field() != field {
                return Err(GradedError::FieldMismatch { left: field, right: m.field() });
            }
            let shape = (space.dim(c.degree()), space.tensor_dim(&c));
            if (m.rows(), m.cols()) != shape {
                return Err(GradedError::InvalidBlock {
                    composition: c.0.clone(),
                    reason: format!("matrix is {}x{}, block needs {}x{}", m.rows(), m.cols(), shape.0, shape.1),
                });
            }
            op.add_block(c, &m);
        }
        Ok(op)
    }

    /// Builds an operation from `(composition, row, col, value)` entries; repeats are summed.
    pub fn from_entries<I>(
        space: &GradedVectorSpace,
        field: Field,
        arity_index: usize,
        entries: I,
    ) -> Result<MultilinearOp, GradedError>
    where
        I: IntoIterator<Item = (DegreeComposition, usize, usize, Scalar)>,
    {
        let mut grouped: BTreeMap<DegreeComposition, Vec<(usize, usize, Scalar)>> = BTreeMap::new();
        for (c, r, col, v) in entries {
            grouped.entry(c).or_default().push((r, col, v));
        }
        let mut blocks = Vec::new();
        for (c, triplets) in grouped {
            let op = MultilinearOp::zero(space, field, arity_index);
            op.check_block(&c)?;
            let m = Matrix::from_triplets(field, space.dim(c.degree()), space.tensor_dim(&c), triplets)?;
            blocks.push((c, m));
        }
        MultilinearOp::from_blocks(space, field, arity_index, blocks)
    }

    fn check_block(&self, c: &DegreeComposition) -> Result<(), GradedError> {
        let reason = if c.len() != self.arity_index + 1 {
            Some(format!("expected {} parts", self.arity_index + 1))
        } else if c.parts().contains(&0) {
            Some("degree-zero inputs are not part of the graded space".to_string())
        } else if c.degree() > self.space.q() {
            Some(format!("target degree {} exceeds q = {}", c.degree(), self.space.q()))
        } else {
            None
        };
        match reason {
            Some(reason) => Err(GradedError::InvalidBlock { composition: c.0.clone(), reason }),
            None => Ok(()),
        }
    }

    fn add_block(&mut self, c: DegreeComposition, m: &Matrix) {
        if m.is_zero() {
            return;
        }
        let sum = match self.blocks.get(&c) {
            Some(old) => old.add(m).expect("blocks share shape and field"),
            None => m.clone(),
        };
        if sum.is_zero() {
            self.blocks.remove(&c);
        } else {
            self.blocks.insert(c, sum);
        }
    }

    /// A random operation; each entry is drawn independently and kept with probability `density`.
    pub fn random<R: Rng + ?Sized>(
        space: &GradedVectorSpace,
        field: Field,
        arity_index: usize,
        density: f64,
        rng: &mut R,
    ) -> MultilinearOp {
        let mut op = MultilinearOp::zero(space, field, arity_index);
        for c in space.compositions(arity_index + 1) {
            let (rows, cols) = (space.dim(c.degree()), space.tensor_dim(&c));
            let mut m = Matrix::zero(field, rows, cols);
            for r in 0..rows {
                for col in 0..cols {
                    if rng.gen_bool(density) {
                        m.set(r, col, field.random(rng));
                    }
                }
            }
            op.add_block(c, &m);
        }
        op
    }

    pub fn arity_index(&self) -> usize {
        self.arity_index
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn space(&self) -> &GradedVectorSpace {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, c: &DegreeComposition) -> Option<&Matrix> {
        self.blocks.get(c)
    }

    /// The stored block, or the zero matrix of the right shape.
    pub fn block_or_zero(&self, c: &DegreeComposition) -> Matrix {
        self.blocks
            .get(c)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.field, self.space.dim(c.degree()), self.space.tensor_dim(c)))
    }

    /// Nonzero blocks in composition order.
    pub fn blocks(&self) -> impl Iterator<Item = (&DegreeComposition, &Matrix)> {
        self.blocks.iter()
    }

    /// Every nonzero structure constant as `(composition, row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (&DegreeComposition, usize, usize, &Scalar)> {
        self.blocks.iter().flat_map(|(c, m)| m.entries().map(move |(r, col, v)| (c, r, col, v)))
    }

    /// Value on a basis tensor, as a dense vector in the target degree.
    pub fn eval_basis(&self, c: &DegreeComposition, indices: &[usize]) -> Vec<Scalar> {
        let target = self.space.dim(c.degree());
        match self.blocks.get(c) {
            Some(m) => m.column(c.encode(&self.space, indices)),
            None => vec![self.field.zero(); target],
        }
    }

    pub(crate) fn check_compatible(&self, other: &MultilinearOp) -> Result<(), GradedError> {
        if self.space != other.space {
            return Err(GradedError::SpaceMismatch {
                left: self.space.dims().to_vec(),
                right: other.space.dims().to_vec(),
            });
        }
        if self.field != other.field {
            return Err(GradedError::FieldMismatch { left: self.field, right: other.field });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultilinearOp) -> Result<MultilinearOp, GradedError> {
        self.check_compatible(other)?;
        if self.arity_index != other.arity_index {
            return Err(GradedError::ArityMismatch { expected: self.arity_index, found: other.arity_index });
        }
        let mut out = self.clone();
        for (c, m) in &other.blocks {
            out.add_block(c.clone(), m);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultilinearOp) -> Result<MultilinearOp, GradedError> {
        self.add(&other.neg())
    }

    /// Panics if `s` is from another field.
    pub fn scale(&self, s: &Scalar) -> MultilinearOp {
        let mut out = MultilinearOp::zero(&self.space, self.field, self.arity_index);
        for (c, m) in &self.blocks {
            out.add_block(c.clone(), &m.scale(s));
        }
        out
    }

    pub fn neg(&self) -> MultilinearOp {
        self.scale(&-&self.field.one())
    }

    /// Coordinates of the internal-degree-`n` component: blocks in composition
    /// order, each block row-major.
    pub fn coordinates(&self, n: usize) -> Vec<Scalar> {
        let mut out = Vec::new();
        for c in self.space.compositions_of_degree(self.arity_index + 1, n) {
            let (rows, cols) = (self.space.dim(n), self.space.tensor_dim(&c));
            match self.blocks.get(&c) {
                Some(m) => {
                    let start = out.len();
                    out.resize(start + rows * cols, self.field.zero());
                    for (r, col, v) in m.entries() {
                        out[start + r * cols + col] = v.clone();
                    }
                }
                None => out.resize(out.len() + rows * cols, self.field.zero()),
            }
        }
        out
    }

    /// Inverse of [`MultilinearOp::coordinates`].
    pub fn from_coordinates(
        space: &GradedVectorSpace,
        field: Field,
        arity_index: usize,
        n: usize,
        coords: &[Scalar],
    ) -> Result<MultilinearOp, GradedError> {
        let expected = space.dim_l_in_degree(arity_index, n);
        if coords.len() != expected {
            return Err(GradedError::InvalidBlock {
                composition: vec![n],
                reason: format!("expected {expected} coordinates, got {}", coords.len()),
            });
        }
        let mut offset = 0;
        let mut blocks = Vec::new();
        for c in space.compositions_of_degree(arity_index + 1, n) {
            let (rows, cols) = (space.dim(n), space.tensor_dim(&c));
            let triplets = (0..rows * cols)
                .filter(|k| !coords[offset + k].is_zero())
                .map(|k| (k / cols, k % cols, coords[offset + k].clone()));
            blocks.push((c, Matrix::from_triplets(field, rows, cols, triplets)?));
            offset += rows * cols;
        }
        MultilinearOp::from_blocks(space, field, arity_index, blocks)
    }

    /// Internal degrees at which this operation has a nonzero block.
    pub fn internal_degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.blocks.keys().map(DegreeComposition::degree).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Restriction to `V_{≤q}`: keeps blocks whose target degree is at most `q`.
    pub fn truncate(&self, q: usize) -> MultilinearOp {
        let space = self.space.truncate(q);
        MultilinearOp {
            arity_index: self.arity_index,
            field: self.field,
            blocks: self.blocks.iter().filter(|(c, _)| c.degree() <= q).map(|(c, m)| (c.clone(), m.clone())).collect(),
            space,
        }
    }

    fn sparse_columns(&self) -> BTreeMap<&DegreeComposition, SparseColumns> {
        self.blocks
            .iter()
            .map(|(c, m)| {
                let mut cols: SparseColumns = vec![Vec::new(); m.cols()];
                for (r, col, v) in m.entries() {
                    cols[col].push((r, v.clone()));
                }
                (c, cols)
            })
            .collect()
    }

    /// Gerstenhaber circle product
    /// `(μ∘ν)(a_0,…,a_{p+q}) = Σ_{i=0}^{p} (−1)^{iq} μ(a_0,…,ν(a_i,…,a_{i+q}),…,a_{p+q})`.
    pub fn circle(&self, other: &MultilinearOp) -> Result<MultilinearOp, GradedError> {
        self.check_compatible(other)?;
        let (p, q) = (self.arity_index, other.arity_index);
        let space = &self.space;
        let field = self.field;
        let outer_cols = self.sparse_columns();
        let inner_cols = other.sparse_columns();
        let minus_one = -&field.one();
        let mut result = MultilinearOp::zero(space, field, p + q);
        if outer_cols.is_empty() || inner_cols.is_empty() {
            return Ok(result);
        }
        for c in space.compositions(p + q + 1) {
            let (rows, ncols) = (space.dim(c.degree()), space.tensor_dim(&c));
            if rows == 0 || ncols == 0 {
                continue;
            }
            let mut block = Matrix::zero(field, rows, ncols);
            for i in 0..=p {
                let inner = DegreeComposition(c.0[i..=i + q].to_vec());
                let mut outer_parts = c.0[..i].to_vec();
                outer_parts.push(inner.degree());
                outer_parts.extend_from_slice(&c.0[i + q + 1..]);
                let outer = DegreeComposition(outer_parts);
                let (Some(nu), Some(mu)) = (inner_cols.get(&inner), outer_cols.get(&outer)) else {
                    continue;
                };
                let odd = (i * q) % 2 == 1;
                for col in 0..ncols {
                    let idx = c.decode(space, col);
                    let inner_col = &nu[inner.encode(space, &idx[i..=i + q])];
                    if inner_col.is_empty() {
                        continue;
                    }
                    let mut outer_idx = idx[..i].to_vec();
                    outer_idx.push(0);
                    outer_idx.extend_from_slice(&idx[i + q + 1..]);
                    for (e, coef) in inner_col {
                        outer_idx[i] = *e;
                        let coef = if odd { coef * &minus_one } else { coef.clone() };
                        for (r, v) in &mu[outer.encode(space, &outer_idx)] {
                            block.add_at(*r, col, &(&coef * v));
                        }
                    }
                }
            }
            result.add_block(c, &block);
        }
        Ok(result)
    }

    /// Gerstenhaber bracket `[μ,ν] = μ∘ν − (−1)^{pq} ν∘μ`.
    pub fn bracket(&self, other: &MultilinearOp) -> Result<MultilinearOp, GradedError> {
        let forward = self.circle(other)?;
        let backward = other.circle(self)?;
        if (self.arity_index * other.arity_index).is_multiple_of(2) {
            forward.sub(&backward)
        } else {
            forward.add(&backward)
        }
    }
}

#[derive(Serialize)]
struct BlockEntries<'a> {
    composition: &'a DegreeComposition,
    entries: Vec<(usize, usize, String)>,
}

/// `{arity_index, blocks: [{composition, entries: [[row, col, "value"]]}]}`, blocks in composition order.
impl Serialize for MultilinearOp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let blocks: Vec<BlockEntries> = self
            .blocks
            .iter()
            .map(|(c, m)| BlockEntries {
                composition: c,
                entries: m.entries().map(|(r, col, v)| (r, col, v.to_string())).collect(),
            })
            .collect();
        let mut st = serializer.serialize_struct("MultilinearOp", 2)?;
        st.serialize_field("arity_index", &self.arity_index)?;
        st.serialize_field("blocks", &blocks)?;
        st.end()
    }
}

/// The tautological endomorphism `γ` together with a flag raised when the
/// characteristic does not exceed `q`, so that distinct degrees give equal scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautologicalGamma {
    pub op: MultilinearOp,
    pub degrees_collapse: bool,
}

/// `γ ∈ L^0` acting as multiplication by `i` on `V_i`.
pub fn tautological_gamma(space: &GradedVectorSpace, field: Field) -> TautologicalGamma {
    let blocks = (1..=space.q()).map(|i| {
        let d = space.dim(i);
        let diag = vec![field.from_i64(i as i64); d];
        (DegreeComposition(vec![i]), Matrix::diagonal(field, &diag).expect("diagonal in one field"))
    });
    let op = MultilinearOp::from_blocks(space, field, 0, blocks).expect("gamma blocks are well formed");
    let degrees_collapse = match field {
        Field::Prime(p) => p <= space.q() as u64,
        Field::Rational => false,
    };
    TautologicalGamma { op, degrees_collapse }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn comp(parts: &[usize]) -> DegreeComposition {
        DegreeComposition(parts.to_vec())
    }

    fn dual_numbers_mu(field: Field) -> MultilinearOp {
        // ℚ[x]/(x³) on dims (1,1): x·x = x²
        let s = GradedVectorSpace::new(vec![1, 1]);
        MultilinearOp::from_entries(&s, field, 1, [(comp(&[1, 1]), 0, 0, field.one())]).unwrap()
    }

    #[test]
    fn associative_square_vanishes() {
        let mu = dual_numbers_mu(Field::Rational);
        assert!(mu.circle(&mu).unwrap().is_zero());
    }

    #[test]
    fn circle_with_zero_is_zero() {
        let mu = dual_numbers_mu(Field::Rational);
        let z = MultilinearOp::zero(mu.space(), Field::Rational, 2);
        assert!(mu.circle(&z).unwrap().is_zero());
        assert!(z.circle(&mu).unwrap().is_zero());
    }

    #[test]
    fn circle_of_endomorphisms_is_composition() {
        let f = Field::Rational;
        let s = GradedVectorSpace::new(vec![2]);
        let a = Matrix::from_dense(f, 2, 2, &[vec![f.from_i64(1), f.from_i64(2)], vec![f.from_i64(0), f.from_i64(3)]]).unwrap();
        let b = Matrix::from_dense(f, 2, 2, &[vec![f.from_i64(0), f.from_i64(1)], vec![f.from_i64(5), f.from_i64(-1)]]).unwrap();
        let alpha = MultilinearOp::from_blocks(&s, f, 0, [(comp(&[1]), a.clone())]).unwrap();
        let beta = MultilinearOp::from_blocks(&s, f, 0, [(comp(&[1]), b.clone())]).unwrap();
        let composed = alpha.circle(&beta).unwrap();
        assert_eq!(composed.block_or_zero(&comp(&[1])), a.mul(&b).unwrap());
        assert!(alpha.bracket(&alpha).unwrap().is_zero());
    }

    #[test]
    fn sign_table_for_small_arities() {
        // every block of mu and nu is the 1x1 matrix (1), so the (1,…,1) block of
        // mu∘nu is the plain sum of the signs (−1)^{iq}
        let f = Field::Rational;
        for p in 0..=3usize {
            for q in 0..=3usize {
                let s = GradedVectorSpace::new(vec![1; p + q + 1]);
                let make = |arity: usize| {
                    let entries = s.compositions(arity + 1).into_iter().map(|c| (c, 0, 0, f.one()));
                    MultilinearOp::from_entries(&s, f, arity, entries).unwrap()
                };
                let (mu, nu) = (make(p), make(q));
                let res = mu.circle(&nu).unwrap();
                let ones = comp(&vec![1; p + q + 1]);
                let expected: i64 = (0..=p).map(|i| if (i * q) % 2 == 1 { -1 } else { 1 }).sum();
                assert_eq!(res.block_or_zero(&ones).get(0, 0), f.from_i64(expected), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn bracket_of_odd_element_with_itself_doubles_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = GradedVectorSpace::new(vec![2, 1, 2]);
        let f = Field::Prime(5);
        let mu = MultilinearOp::random(&s, f, 1, 0.7, &mut rng);
        let two = f.from_i64(2);
        assert_eq!(mu.bracket(&mu).unwrap(), mu.circle(&mu).unwrap().scale(&two));
    }

    #[test]
    fn gamma_is_central() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = GradedVectorSpace::new(vec![2, 2, 1]);
        for f in [Field::Rational, Field::Prime(5)] {
            let gamma = tautological_gamma(&s, f);
            assert!(!gamma.degrees_collapse);
            for p in 0..=2 {
                let phi = MultilinearOp::random(&s, f, p, 0.6, &mut rng);
                assert!(gamma.op.bracket(&phi).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn gamma_collapses_in_small_characteristic() {
        let s = GradedVectorSpace::new(vec![1, 1]);
        let gamma = tautological_gamma(&s, Field::Prime(2));
        assert!(gamma.degrees_collapse);
        assert_eq!(gamma.op.block_or_zero(&comp(&[1])).get(0, 0), Field::Prime(2).one());
        assert!(gamma.op.block(&comp(&[2])).is_none());
        let plain = tautological_gamma(&s, Field::Rational);
        assert_eq!(plain.op.block_or_zero(&comp(&[2])).get(0, 0), Field::Rational.from_i64(2));
    }

    #[test]
    fn coordinates_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = GradedVectorSpace::new(vec![2, 1, 2]);
        let f = Field::Rational;
        let op = MultilinearOp::random(&s, f, 1, 0.5, &mut rng);
        let mut rebuilt = MultilinearOp::zero(&s, f, 1);
        for n in 1..=3 {
            let part = MultilinearOp::from_coordinates(&s, f, 1, n, &op.coordinates(n)).unwrap();
            rebuilt = rebuilt.add(&part).unwrap();
        }
        assert_eq!(rebuilt, op);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let a = MultilinearOp::zero(&GradedVectorSpace::new(vec![1, 1]), Field::Rational, 1);
        let b = MultilinearOp::zero(&GradedVectorSpace::new(vec![1, 2]), Field::Rational, 1);
        assert!(matches!(a.circle(&b), Err(GradedError::SpaceMismatch { .. })));
        let c = MultilinearOp::zero(&GradedVectorSpace::new(vec![1, 1]), Field::Prime(3), 1);
        assert!(matches!(a.bracket(&c), Err(GradedError::FieldMismatch { .. })));
    }

    #[test]
    fn blocks_beyond_q_rejected() {
        let s = GradedVectorSpace::new(vec![1, 1]);
        let f = Field::Rational;
        let err = MultilinearOp::from_entries(&s, f, 1, [(comp(&[1, 2]), 0, 0, f.one())]);
        assert!(err.is_err());
    }
}
