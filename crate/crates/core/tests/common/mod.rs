//! Independent dense oracles and fixture generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use gradus::algebra::{free_algebra, polynomial_algebra, skew_plane, GradedAlgebra};
use gradus::graded::{DegreeComposition, GradedVectorSpace, MultilinearOp};
use gradus::{Field, Scalar};

/// Field elements for the oracle, kept apart from the library's scalar arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum E {
    Q(BigRational),
    P(u64, u64),
}

impl E {
    pub fn zero(f: Field) -> E {
        match f {
            Field::Rational => E::Q(BigRational::zero()),
            Field::Prime(p) => E::P(0, p),
        }
    }

    pub fn from_scalar(s: &Scalar) -> E {
        match s {
            Scalar::Rational(r) => E::Q(r.clone()),
            Scalar::Modular { value, modulus } => E::P(*value, *modulus),
        }
    }

    pub fn from_i64(f: Field, n: i64) -> E {
        match f {
            Field::Rational => E::Q(BigRational::from_integer(n.into())),
            Field::Prime(p) => E::P(n.rem_euclid(p as i64) as u64, p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            E::Q(r) => r.is_zero(),
            E::P(v, _) => *v == 0,
        }
    }

    pub fn add(&self, o: &E) -> E {
        match (self, o) {
            (E::Q(a), E::Q(b)) => E::Q(a + b),
            (E::P(a, p), E::P(b, _)) => E::P((a + b) % p, *p),
            _ => panic!("mixed fields"),
        }
    }

    pub fn mul(&self, o: &E) -> E {
        match (self, o) {
            (E::Q(a), E::Q(b)) => E::Q(a * b),
            (E::P(a, p), E::P(b, _)) => E::P(((*a as u128 * *b as u128) % *p as u128) as u64, *p),
            _ => panic!("mixed fields"),
        }
    }

    pub fn neg(&self) -> E {
        match self {
            E::Q(a) => E::Q(-a),
            E::P(a, p) => E::P((p - a) % p, *p),
        }
    }

    pub fn inv(&self) -> E {
        match self {
            E::Q(a) => E::Q(BigRational::one() / a),
            E::P(a, p) => {
                let (mut base, mut exp, mut acc) = (*a as u128, *p - 2, 1u128);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % *p as u128;
                    }
                    base = base * base % *p as u128;
                    exp >>= 1;
                }
                E::P(acc as u64, *p)
            }
        }
    }
}

/// Rank by plain Gaussian elimination on a dense copy.
pub fn dense_rank(rows: &[Vec<E>]) -> usize {
    let mut m: Vec<Vec<E>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv();
        let pivot_row: Vec<E> = m[rank].iter().map(|x| x.mul(&inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x = x.add(&factor.mul(y).neg());
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Basis of `L^p` as `(composition, input indices, output index)`, in the oracle's own order.
pub fn cochain_basis(s: &GradedVectorSpace, p: usize) -> Vec<(Vec<usize>, Vec<usize>, usize)> {
    fn inputs(s: &GradedVectorSpace, comp: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &n in comp {
            out = out.into_iter().flat_map(|v| (0..s.dim(n)).map(move |i| [v.clone(), vec![i]].concat())).collect();
        }
        out
    }
    fn comps(q: usize, len: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in 1..=q {
            for rest in comps(q, len - 1) {
                if first + rest.iter().sum::<usize>() <= q {
                    out.push([vec![first], rest].concat());
                }
            }
        }
        out
    }
    let mut out = Vec::new();
    for c in comps(s.q(), p + 1) {
        let n: usize = c.iter().sum();
        for idx in inputs(s, &c) {
            for r in 0..s.dim(n) {
                out.push((c.clone(), idx.clone(), r));
            }
        }
    }
    out
}

fn product(a: &GradedAlgebra, i: usize, x: usize, j: usize, y: usize) -> Vec<E> {
    if i + j > a.q() {
        return Vec::new();
    }
    a.multiply_basis(i, x, j, y).iter().map(E::from_scalar).collect()
}

/// Dense matrix of the Hochschild coboundary
/// `δf(a_0,…,a_n) = a_0 f(a_1,…) + Σ (−1)^{i+1} f(…, a_i a_{i+1}, …) + (−1)^{n+1} f(…, a_{n−1}) a_n`
/// on `L^p → L^{p+1}`, built column by column from basis cochains.
pub fn dense_differential(a: &GradedAlgebra, p: usize) -> (Vec<Vec<E>>, usize) {
    let s = a.space();
    let f = a.field();
    let source = cochain_basis(s, p);
    let target = cochain_basis(s, p + 1);
    let col_of: HashMap<(Vec<usize>, Vec<usize>, usize), usize> = source.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let row_of: HashMap<(Vec<usize>, Vec<usize>, usize), usize> = target.iter().cloned().enumerate().map(|(k, b)| (b, k)).collect();
    let mut m = vec![vec![E::zero(f); source.len()]; target.len()];
    let n_in = p + 2;
    let mut seen = std::collections::HashSet::new();
    for (comp, idx, _) in &target {
        if !seen.insert((comp.clone(), idx.clone())) {
            continue;
        }
        let mut add = |col: usize, out_row: usize, v: E| {
            let row = row_of[&(comp.clone(), idx.clone(), out_row)];
            m[row][col] = m[row][col].add(&v);
        };
        // a_0 · f(a_1, …)
        let inner: Vec<usize> = comp[1..].to_vec();
        let inner_deg: usize = inner.iter().sum();
        for r in 0..s.dim(inner_deg) {
            let col = col_of[&(inner.clone(), idx[1..].to_vec(), r)];
            for (k, v) in product(a, comp[0], idx[0], inner_deg, r).into_iter().enumerate() {
                if !v.is_zero() {
                    add(col, k, v);
                }
            }
        }
        // f(…, a_{n−1}) · a_n
        let inner: Vec<usize> = comp[..n_in - 1].to_vec();
        let inner_deg: usize = inner.iter().sum();
        let sign_last = if n_in.is_multiple_of(2) { E::from_i64(f, 1) } else { E::from_i64(f, -1) };
        for r in 0..s.dim(inner_deg) {
            let col = col_of[&(inner.clone(), idx[..n_in - 1].to_vec(), r)];
            for (k, v) in product(a, inner_deg, r, comp[n_in - 1], idx[n_in - 1]).into_iter().enumerate() {
                if !v.is_zero() {
                    add(col, k, v.mul(&sign_last));
                }
            }
        }
        // merges
        for i in 0..n_in - 1 {
            let sign = if i % 2 == 0 { E::from_i64(f, -1) } else { E::from_i64(f, 1) };
            let merged_deg = comp[i] + comp[i + 1];
            let mut merged = comp[..i].to_vec();
            merged.push(merged_deg);
            merged.extend_from_slice(&comp[i + 2..]);
            for (k, v) in product(a, comp[i], idx[i], comp[i + 1], idx[i + 1]).into_iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let mut mi = idx[..i].to_vec();
                mi.push(k);
                mi.extend_from_slice(&idx[i + 2..]);
                for r in 0..s.dim(comp.iter().sum()) {
                    let col = col_of[&(merged.clone(), mi.clone(), r)];
                    add(col, r, v.mul(&sign));
                }
            }
        }
    }
    (m, source.len())
}

/// `dim H^p` for `0 ≤ p ≤ p_max` from dense ranks.
pub fn oracle_hh_dims(a: &GradedAlgebra, p_max: usize) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=p_max).map(|p| dense_rank(&dense_differential(a, p).0)).collect();
    (0..=p_max)
        .map(|p| {
            let dim = cochain_basis(a.space(), p).len();
            dim - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] }
        })
        .collect()
}

/// The cochain with the given oracle coordinates, as a library operation.
pub fn op_from_oracle(a: &GradedAlgebra, p: usize, coords: &[E]) -> MultilinearOp {
    let s = a.space();
    let f = a.field();
    let entries = cochain_basis(s, p).into_iter().zip(coords).filter(|(_, v)| !v.is_zero()).map(|((c, idx, r), v)| {
        let comp = DegreeComposition(c);
        let col = comp.encode(s, &idx);
        let value = match v {
            E::Q(q) => Scalar::Rational(q.clone()),
            E::P(x, m) => Scalar::Modular { value: *x, modulus: *m },
        };
        (comp, r, col, value)
    });
    MultilinearOp::from_entries(s, f, p, entries).expect("oracle basis is valid")
}

/// `d(β)` for `β` given in oracle coordinates, by dense matrix-vector product.
pub fn oracle_apply(a: &GradedAlgebra, p: usize, beta: &[E]) -> Vec<E> {
    let (m, _) = dense_differential(a, p);
    m.iter()
        .map(|row| row.iter().zip(beta).fold(E::zero(a.field()), |acc, (x, y)| acc.add(&x.mul(y))))
        .collect()
}

/// Associativity of `ab + εα(a,b)` modulo `ε²`, from dense structure-constant tables.
pub fn deformed_product_is_associative(a: &GradedAlgebra, alpha: &MultilinearOp) -> bool {
    let s = a.space();
    let f = a.field();
    let q = a.q();
    let table = |op: &MultilinearOp| {
        let mut t: HashMap<(usize, usize, usize, usize), Vec<E>> = HashMap::new();
        for (c, row, col, v) in op.entries() {
            let (i, j) = (c.parts()[0], c.parts()[1]);
            let idx = c.decode(s, col);
            t.entry((i, idx[0], j, idx[1])).or_insert_with(|| vec![E::zero(f); s.dim(i + j)])[row] = E::from_scalar(v);
        }
        t
    };
    let mu = table(a.mu());
    let al = table(alpha);
    let apply = |t: &HashMap<(usize, usize, usize, usize), Vec<E>>, i: usize, u: &[E], j: usize, v: &[E]| -> Vec<E> {
        let mut out = vec![E::zero(f); if i + j <= q { s.dim(i + j) } else { 0 }];
        if i + j > q {
            return out;
        }
        for (x, ux) in u.iter().enumerate() {
            for (y, vy) in v.iter().enumerate() {
                if ux.is_zero() || vy.is_zero() {
                    continue;
                }
                if let Some(w) = t.get(&(i, x, j, y)) {
                    for (o, wk) in out.iter_mut().zip(w) {
                        *o = o.add(&wk.mul(&ux.mul(vy)));
                    }
                }
            }
        }
        out
    };
    let unit = |n: usize, k: usize| -> Vec<E> {
        (0..s.dim(n)).map(|t| if t == k { E::from_i64(f, 1) } else { E::zero(f) }).collect()
    };
    let sum = |x: Vec<E>, y: Vec<E>| -> Vec<E> { x.iter().zip(&y).map(|(a, b)| a.add(b)).collect() };
    let diff = |x: Vec<E>, y: Vec<E>| -> Vec<E> { x.iter().zip(&y).map(|(a, b)| a.add(&b.neg())).collect() };
    for i in 1..=q {
        for j in 1..=q {
            for k in 1..=q {
                if i + j + k > q {
                    continue;
                }
                for x in 0..s.dim(i) {
                    for y in 0..s.dim(j) {
                        for z in 0..s.dim(k) {
                            let (ea, eb, ec) = (unit(i, x), unit(j, y), unit(k, z));
                            // ε-part of (a∗b)∗c and a∗(b∗c)
                            let ab = apply(&mu, i, &ea, j, &eb);
                            let ab_eps = apply(&al, i, &ea, j, &eb);
                            let left = sum(apply(&al, i + j, &ab, k, &ec), apply(&mu, i + j, &ab_eps, k, &ec));
                            let bc = apply(&mu, j, &eb, k, &ec);
                            let bc_eps = apply(&al, j, &eb, k, &ec);
                            let right = sum(apply(&al, i, &ea, j + k, &bc), apply(&mu, i, &ea, j + k, &bc_eps));
                            if diff(left, right).iter().any(|v| !v.is_zero()) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Dimension vectors of length `≤ max_q` with last entry positive and total in `1..=max_total`.
pub fn dims_vectors(max_total: usize, max_q: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, left: usize, max_q: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.last().is_some_and(|&d| d > 0) {
            out.push(prefix.clone());
        }
        if prefix.len() == max_q {
            return;
        }
        for d in 0..=left {
            prefix.push(d);
            rec(prefix, left - d, max_q, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), max_total, max_q, &mut out);
    out
}

/// Coordinates `(i, a, j, b, c)` of a product on `dims`.
pub fn product_slots(dims: &[usize]) -> Vec<(usize, usize, usize, usize, usize)> {
    let q = dims.len();
    let mut out = Vec::new();
    for i in 1..=q {
        for j in 1..=q - i {
            for a in 0..dims[i - 1] {
                for b in 0..dims[j - 1] {
                    for c in 0..dims[i + j - 1] {
                        out.push((i, a, j, b, c));
                    }
                }
            }
        }
    }
    out
}

/// The product with value `values[k]` in slot `k`, if associative.
pub fn algebra_from_slots(dims: &[usize], field: Field, values: &[Scalar]) -> Option<GradedAlgebra> {
    let s = GradedVectorSpace::new(dims.to_vec());
    let entries = product_slots(dims).into_iter().zip(values).filter(|(_, v)| !v.is_zero()).map(|((i, a, j, b, c), v)| {
        let comp = DegreeComposition(vec![i, j]);
        let col = comp.encode(&s, &[a, b]);
        (comp, c, col, v.clone())
    });
    let mu = MultilinearOp::from_entries(&s, field, 1, entries).expect("slots in range");
    GradedAlgebra::new(s, mu).ok()
}

/// Every associative product on `dims` over GF(p).
pub fn all_algebras(dims: &[usize], p: u64) -> Vec<GradedAlgebra> {
    let field = Field::Prime(p);
    let n = product_slots(dims).len();
    let total = p.pow(n as u32);
    (0..total)
        .filter_map(|mut code| {
            let values: Vec<Scalar> = (0..n)
                .map(|_| {
                    let v = code % p;
                    code /= p;
                    field.from_i64(v as i64)
                })
                .collect();
            algebra_from_slots(dims, field, &values)
        })
        .collect()
}

/// A random associative product on `dims`, drawn with the given density and filtered.
pub fn random_algebra<R: Rng>(dims: &[usize], field: Field, density: f64, rng: &mut R, attempts: usize) -> Option<GradedAlgebra> {
    let n = product_slots(dims).len();
    for _ in 0..attempts {
        let values: Vec<Scalar> =
            (0..n).map(|_| if rng.gen_bool(density) { field.random(rng) } else { field.zero() }).collect();
        if let Some(a) = algebra_from_slots(dims, field, &values) {
            return Some(a);
        }
    }
    None
}

/// Named algebras used across the suites.
pub fn fixtures(field: Field) -> Vec<(String, GradedAlgebra)> {
    let mut out = vec![
        ("k[x]/(x^3)".to_string(), polynomial_algebra(1, 2, field).unwrap()),
        ("k[x]/(x^4)".to_string(), polynomial_algebra(1, 3, field).unwrap()),
        ("k[x,y]_{<=2}".to_string(), polynomial_algebra(2, 2, field).unwrap()),
        ("k[x,y]_{<=3}".to_string(), polynomial_algebra(2, 3, field).unwrap()),
        ("k<x,y>_{<=2}".to_string(), free_algebra(2, 2, field).unwrap()),
        ("skew(-1)_{<=2}".to_string(), skew_plane(&field.from_i64(-1), 2).unwrap()),
        ("zero(1,1)".to_string(), GradedAlgebra::trivial(GradedVectorSpace::new(vec![1, 1]), field)),
        ("zero(2,1)".to_string(), GradedAlgebra::trivial(GradedVectorSpace::new(vec![2, 1]), field)),
    ];
    if field != Field::Prime(2) {
        out.push(("skew(2)_{<=3}".to_string(), skew_plane(&field.from_i64(2), 3).unwrap()));
    }
    out
}
