//! The JSON algebra-definition format, cocycle and flag specifications, and re-reading of
//! serialized filtrations.
//!
//! An algebra file looks like
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "field": "gf(5)",
//!   "dims": [1, 1],
//!   "structure_constants": [[1, 1, 0, 0, 0, "1"]]
//! }
//! ```
//!
//! where `[i, j, a, b, c, v]` sets the coefficient of `e^{i+j}_c` in `e^i_a · e^j_b` to `v`.
//! Instead of `structure_constants` a file may name a constructor under `generators`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{free_algebra, polynomial_algebra, skew_plane, AlgebraError, GradedAlgebra};
use crate::graded::{DegreeComposition, GradedError, GradedSubspace, GradedVectorSpace, MultilinearOp};
use crate::hochschild::cohomology;
use crate::linalg::{Field, LinalgError, Scalar, Subspace};
use crate::stability::{Filtration, StabilityError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    UnsupportedSchema(u32),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> FormatError {
        FormatError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

impl From<LinalgError> for FormatError {
    fn from(e: LinalgError) -> FormatError {
        FormatError::Invalid(e.to_string())
    }
}

impl From<GradedError> for FormatError {
    fn from(e: GradedError) -> FormatError {
        FormatError::Invalid(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// `"rational"` or `"gf(p)"` with `p` prime.
pub fn parse_field(text: &str) -> Result<Field, FormatError> {
    let t = text.trim();
    if t == "rational" {
        return Ok(Field::Rational);
    }
    let p = t
        .strip_prefix("gf(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|n| n.trim().parse::<u64>().ok())
        .ok_or_else(|| invalid(format!("unknown field {t:?}; use \"rational\" or \"gf(p)\"")))?;
    Ok(Field::prime(p)?)
}

/// `(i, j, a, b, c, value)`.
pub type StructureConstant = (usize, usize, usize, usize, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Relation {
    pub degree: usize,
    pub coefficients: Vec<String>,
}

/// A named constructor. `q` is the length of the file's `dims`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "lowercase", deny_unknown_fields)]
pub enum Generators {
    Polynomial { variables: usize },
    Free { generators: usize },
    Skew { lambda: String },
    Quotient { base: Box<Generators>, relations: Vec<Relation> },
}

impl Generators {
    fn build(&self, field: Field, q: usize) -> Result<GradedAlgebra, FormatError> {
        Ok(match self {
            Generators::Polynomial { variables } => polynomial_algebra(*variables, q, field)?,
            Generators::Free { generators } => free_algebra(*generators, q, field)?,
            Generators::Skew { lambda } => skew_plane(&field.parse(lambda)?, q)?,
            Generators::Quotient { base, relations } => {
                let base = base.build(field, q)?;
                let rels = relations
                    .iter()
                    .map(|r| Ok((r.degree, r.coefficients.iter().map(|c| field.parse(c)).collect::<Result<Vec<_>, _>>()?)))
                    .collect::<Result<Vec<_>, FormatError>>()?;
                base.quotient(&rels)?.0
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub schema_version: u32,
    pub field: String,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Generators>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<StructureConstant>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

/// The product described by a file before the associativity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAlgebra {
    pub space: GradedVectorSpace,
    pub mu: MultilinearOp,
    pub labels: Option<Vec<Vec<String>>>,
}

impl RawAlgebra {
    pub fn into_algebra(self) -> Result<GradedAlgebra, AlgebraError> {
        let a = GradedAlgebra::new(self.space, self.mu)?;
        match self.labels {
            Some(l) => a.with_labels(l),
            None => Ok(a),
        }
    }
}

impl AlgebraFile {
    pub fn field(&self) -> Result<Field, FormatError> {
        parse_field(&self.field)
    }

    /// Checks every invariant that does not need the product itself.
    pub fn validate(&self) -> Result<(), FormatError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FormatError::UnsupportedSchema(self.schema_version));
        }
        let field = self.field()?;
        let q = self.dims.len();
        if q == 0 {
            return Err(invalid("dims must list at least one degree"));
        }
        match (&self.generators, &self.structure_constants) {
            (Some(_), Some(_)) => return Err(invalid("give exactly one of generators and structure_constants, not both")),
            (None, None) => return Err(invalid("give exactly one of generators and structure_constants")),
            _ => {}
        }
        if let Some(entries) = &self.structure_constants {
            let mut seen = BTreeSet::new();
            for (k, (i, j, a, b, c, v)) in entries.iter().enumerate() {
                let here = format!("structure_constants[{k}]");
                if *i == 0 || *j == 0 {
                    return Err(invalid(format!("{here}: degrees must be positive")));
                }
                if i + j > q {
                    return Err(invalid(format!("{here}: degree {i} + {j} exceeds q = {q}")));
                }
                let d = |n: usize| self.dims[n - 1];
                if *a >= d(*i) || *b >= d(*j) || *c >= d(i + j) {
                    return Err(invalid(format!("{here}: index out of range for dims {:?}", self.dims)));
                }
                field.parse(v).map_err(|e| invalid(format!("{here}: {e}")))?;
                if !seen.insert((i, j, a, b, c)) {
                    return Err(invalid(format!("{here}: repeats an earlier entry")));
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != q || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d) {
                return Err(invalid(format!("labels must give one name per basis element of dims {:?}", self.dims)));
            }
        }
        Ok(())
    }

    /// Builds the product without checking associativity.
    pub fn raw(&self) -> Result<RawAlgebra, FormatError> {
        self.validate()?;
        let field = self.field()?;
        let space = GradedVectorSpace::new(self.dims.clone());
        if let Some(g) = &self.generators {
            let a = g.build(field, self.dims.len())?;
            if a.dims() != self.dims.as_slice() {
                return Err(invalid(format!("constructor produces dims {:?}, file declares {:?}", a.dims(), self.dims)));
            }
            let labels = self.labels.clone().or_else(|| a.labels().map(<[_]>::to_vec));
            return Ok(RawAlgebra { space, mu: a.mu().clone(), labels });
        }
        let entries = self.structure_constants.as_deref().unwrap_or_default();
        let triplets = entries
            .iter()
            .map(|(i, j, a, b, c, v)| {
                let comp = DegreeComposition(vec![*i, *j]);
                let col = comp.encode(&space, &[*a, *b]);
                Ok((comp, *c, col, field.parse(v)?))
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        let mu = MultilinearOp::from_entries(&space, field, 1, triplets)?;
        Ok(RawAlgebra { space, mu, labels: self.labels.clone() })
    }

    pub fn build(&self) -> Result<GradedAlgebra, FormatError> {
        Ok(self.raw()?.into_algebra()?)
    }
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile, FormatError> {
    let file: AlgebraFile = serde_json::from_str(text)?;
    file.validate()?;
    Ok(file)
}

/// Explicit structure constants, sorted by `(i, j, a, b, c)`.
pub fn emit_algebra(a: &GradedAlgebra) -> AlgebraFile {
    let s = a.space();
    let mut entries: Vec<StructureConstant> = a
        .mu()
        .entries()
        .map(|(comp, row, col, v)| {
            let idx = comp.decode(s, col);
            (comp.0[0], comp.0[1], idx[0], idx[1], row, v.to_string())
        })
        .collect();
    entries.sort();
    AlgebraFile {
        schema_version: SCHEMA_VERSION,
        field: a.field().to_string(),
        dims: a.dims().to_vec(),
        generators: None,
        structure_constants: Some(entries),
        labels: a.labels().map(<[_]>::to_vec),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub composition: Vec<usize>,
    /// `(row, col, value)`.
    pub entries: Vec<(usize, usize, String)>,
}

/// A 2-cochain: either the index of a representative of `H^1` as listed by the cohomology
/// report, or explicit blocks in the shape the reports use for operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockSpec>>,
}

pub fn parse_cocycle_spec(text: &str) -> Result<CocycleSpec, FormatError> {
    Ok(serde_json::from_str(text)?)
}

/// Builds an operation of arity index `p` from explicit blocks.
pub fn op_from_blocks(a: &GradedAlgebra, p: usize, blocks: &[BlockSpec]) -> Result<MultilinearOp, FormatError> {
    let field = a.field();
    let mut entries = Vec::new();
    for b in blocks {
        if b.composition.len() != p + 1 {
            return Err(invalid(format!("composition {:?} has {} parts, expected {}", b.composition, b.composition.len(), p + 1)));
        }
        for (r, c, v) in &b.entries {
            entries.push((DegreeComposition(b.composition.clone()), *r, *c, field.parse(v)?));
        }
    }
    Ok(MultilinearOp::from_entries(a.space(), field, p, entries)?)
}

impl CocycleSpec {
    pub fn resolve(&self, a: &GradedAlgebra) -> Result<MultilinearOp, FormatError> {
        if let Some(p) = self.arity_index {
            if p != 1 {
                return Err(invalid(format!("a 2-cochain has arity index 1, got {p}")));
            }
        }
        match (self.representative, &self.blocks) {
            (Some(k), None) => {
                let report = cohomology(a, 1);
                let reps = &report.groups[1].representatives;
                reps.get(k)
                    .cloned()
                    .ok_or_else(|| invalid(format!("representative {k} out of range: H^1 has dimension {}", reps.len())))
            }
            (None, Some(blocks)) => op_from_blocks(a, 1, blocks),
            _ => Err(invalid("give exactly one of representative and blocks")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    pub basis: Vec<Vec<String>>,
}

impl SubspaceSpec {
    pub fn to_subspace(&self, field: Field, ambient_dim: usize) -> Result<Subspace, FormatError> {
        if let Some(n) = self.ambient_dim {
            if n != ambient_dim {
                return Err(invalid(format!("subspace of dimension {n} where {ambient_dim} is expected")));
            }
        }
        let vectors = self
            .basis
            .iter()
            .map(|v| {
                if v.len() != ambient_dim {
                    return Err(invalid(format!("vector of length {} where {ambient_dim} is expected", v.len())));
                }
                v.iter().map(|x| field.parse(x).map_err(FormatError::from)).collect::<Result<Vec<Scalar>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::span(field, ambient_dim, &vectors)?)
    }
}

/// A list of flags of `A_1`, each a list of subspaces given by spanning vectors.
pub fn parse_flags(text: &str, a: &GradedAlgebra) -> Result<Vec<Vec<Subspace>>, FormatError> {
    let flags: Vec<Vec<SubspaceSpec>> = serde_json::from_str(text)?;
    flags
        .iter()
        .map(|flag| flag.iter().map(|s| s.to_subspace(a.field(), a.dim(1))).collect())
        .collect()
}

#[derive(Deserialize)]
struct FiltrationSpec {
    shift: i64,
    ideals: Vec<Vec<SubspaceSpec>>,
}

/// Reads a filtration in the shape the stability reports serialize it.
pub fn filtration_from_json(value: &serde_json::Value, a: &GradedAlgebra) -> Result<Filtration, FormatError> {
    let spec = FiltrationSpec::deserialize(value)?;
    let chain = spec
        .ideals
        .iter()
        .map(|pieces| {
            if pieces.len() != a.q() {
                return Err(invalid(format!("ideal with {} pieces where q = {}", pieces.len(), a.q())));
            }
            let subspaces =
                pieces.iter().enumerate().map(|(i, s)| s.to_subspace(a.field(), a.dim(i + 1))).collect::<Result<Vec<_>, _>>()?;
            Ok(GradedSubspace::from_pieces(a.space(), subspaces)?)
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(Filtration::new(a.space(), a.field(), chain)?.shifted(spec.shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{check_q_stability, SearchConfig, StabilityParameter};

    fn file(text: &str) -> Result<GradedAlgebra, FormatError> {
        parse_algebra_file(text)?.build()
    }

    #[test]
    fn explicit_constants_and_round_trip() {
        let a = file(r#"{"schema_version": 1, "field": "rational", "dims": [1, 1], "structure_constants": [[1, 1, 0, 0, 0, "1"]]}"#)
            .unwrap();
        let expected = polynomial_algebra(1, 2, Field::Rational).unwrap().without_labels();
        assert_eq!(a, expected);
        let emitted = emit_algebra(&a);
        let text = to_json(&emitted);
        assert_eq!(parse_algebra_file(&text).unwrap(), emitted);
        assert_eq!(parse_algebra_file(&text).unwrap().build().unwrap(), a);
    }

    #[test]
    fn constructors() {
        let p = file(r#"{"schema_version": 1, "field": "gf(5)", "dims": [2, 3], "generators": {"constructor": "polynomial", "variables": 2}}"#)
            .unwrap();
        assert_eq!(p, polynomial_algebra(2, 2, Field::Prime(5)).unwrap());
        let q = file(
            r#"{"schema_version": 1, "field": "rational", "dims": [2, 3],
                "generators": {"constructor": "quotient", "base": {"constructor": "free", "generators": 2},
                               "relations": [{"degree": 2, "coefficients": ["0", "1", "-1", "0"]}]}}"#,
        )
        .unwrap();
        assert_eq!(q.without_labels(), polynomial_algebra(2, 2, Field::Rational).unwrap().without_labels());
        let s = file(r#"{"schema_version": 1, "field": "rational", "dims": [2, 3], "generators": {"constructor": "skew", "lambda": "-1"}}"#);
        assert!(s.is_ok());
        let wrong = file(r#"{"schema_version": 1, "field": "rational", "dims": [2, 4], "generators": {"constructor": "skew", "lambda": "2"}}"#);
        assert!(matches!(wrong, Err(FormatError::Invalid(_))));
    }

    #[test]
    fn rejections() {
        let syntax = parse_algebra_file("{\n  \"schema_version\": 1,\n  \"field\": rational\n}");
        assert!(matches!(syntax, Err(FormatError::Parse { line: 3, .. })));
        let both = r#"{"schema_version": 1, "field": "rational", "dims": [1], "structure_constants": [], "generators": {"constructor": "free", "generators": 1}}"#;
        assert!(matches!(parse_algebra_file(both), Err(FormatError::Invalid(_))));
        let high = r#"{"schema_version": 1, "field": "rational", "dims": [1, 1], "structure_constants": [[1, 2, 0, 0, 0, "1"]]}"#;
        assert!(matches!(parse_algebra_file(high), Err(FormatError::Invalid(_))));
        let version = r#"{"schema_version": 2, "field": "rational", "dims": [1], "structure_constants": []}"#;
        assert!(matches!(parse_algebra_file(version), Err(FormatError::UnsupportedSchema(2))));
        assert!(parse_field("gf(4)").is_err());
        assert_eq!(parse_field("gf(7)").unwrap(), Field::Prime(7));
        let nonassoc = r#"{"schema_version": 1, "field": "rational", "dims": [1, 1, 1],
            "structure_constants": [[1, 1, 0, 0, 0, "1"], [1, 2, 0, 0, 0, "1"]]}"#;
        assert!(matches!(file(nonassoc), Err(FormatError::Algebra(AlgebraError::NotAssociative(_)))));
        let empty = r#"{"schema_version": 1, "field": "gf(2)", "dims": [2, 2], "structure_constants": []}"#;
        assert!(file(empty).unwrap().mu().is_zero());
    }

    #[test]
    fn cocycle_specs() {
        let a = polynomial_algebra(1, 2, Field::Rational).unwrap();
        let by_index = parse_cocycle_spec(r#"{"representative": 0}"#).unwrap().resolve(&a);
        assert!(matches!(by_index, Err(FormatError::Invalid(_))));
        let z = GradedAlgebra::trivial(GradedVectorSpace::new(vec![1, 1]), Field::Rational);
        let rep = parse_cocycle_spec(r#"{"representative": 0}"#).unwrap().resolve(&z).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(parse_cocycle_spec(&text).unwrap().resolve(&z).unwrap(), rep);
    }

    #[test]
    fn certificates_read_back() {
        let a = polynomial_algebra(2, 2, Field::Prime(2)).unwrap();
        let theta = StabilityParameter::standard(&[2, 3]).unwrap();
        let v = check_q_stability(&a, &theta, &SearchConfig::exhaustive(Some(2))).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        let f = filtration_from_json(&json["certificate"]["filtration"], &a).unwrap();
        assert_eq!(f, v.certificate.unwrap().filtration);
        let flags = parse_flags(r#"[[{"basis": [["1", "1"]]}]]"#, &a).unwrap();
        assert_eq!(flags[0][0].dim(), 1);
    }
}
