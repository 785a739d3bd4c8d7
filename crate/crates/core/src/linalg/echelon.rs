//! Row reduction kernels on dense rows.
//!
//! Over ℚ the forward pass is fraction-free (Bareiss): rows are scaled to
//! integers and every division in the elimination is exact, which keeps the
//! intermediate entries bounded by minors of the input. Over GF(p) plain
//! Gauss–Jordan on machine words is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{add_mod, inv_mod, mul_mod};
use super::{Field, Scalar};

/// Reduced row echelon form: nonzero rows only, each with a leading one at `pivots[i]`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

pub(crate) fn rank(field: Field, rows: &[Vec<Scalar>], ncols: usize) -> usize {
    match field {
        Field::Prime(p) => {
            let mut m = to_words(rows, ncols);
            gauss_jordan_mod(&mut m, ncols, p).len()
        }
        Field::Rational => bareiss_forward(to_integer_rows(rows, ncols), ncols).1.len(),
    }
}

pub(crate) fn reduced_echelon(field: Field, rows: &[Vec<Scalar>], ncols: usize) -> Echelon {
    match field {
        Field::Prime(p) => {
            let mut m = to_words(rows, ncols);
            let pivots = gauss_jordan_mod(&mut m, ncols, p);
            let rows = m
                .into_iter()
                .take(pivots.len())
                .map(|r| r.into_iter().map(|v| Scalar::Modular { value: v, modulus: p }).collect())
                .collect();
            Echelon { rows, pivots }
        }
        Field::Rational => {
            let (ints, pivots) = bareiss_forward(to_integer_rows(rows, ncols), ncols);
            let mut rat: Vec<Vec<BigRational>> = ints
                .into_iter()
                .take(pivots.len())
                .map(|r| r.into_iter().map(BigRational::from_integer).collect())
                .collect();
            back_substitute(&mut rat, &pivots);
            let rows = rat
                .into_iter()
                .map(|r| r.into_iter().map(Scalar::Rational).collect())
                .collect();
            Echelon { rows, pivots }
        }
    }
}

fn to_words(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            r.iter()
                .map(|s| match s {
                    Scalar::Modular { value, .. } => *value,
                    Scalar::Rational(_) => panic!("rational entry in modular elimination"),
                })
                .collect()
        })
        .collect()
}

/// In-place Gauss–Jordan over GF(p); returns pivot columns. Nonzero rows end up first.
fn gauss_jordan_mod(m: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, found);
        let inv = inv_mod(m[r][c], p);
        for v in m[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = p - row[c];
            for j in c..ncols {
                if pivot_row[j] != 0 {
                    row[j] = add_mod(row[j], mul_mod(factor, pivot_row[j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Clears denominators row by row.
fn to_integer_rows(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            let rats: Vec<&BigRational> = r
                .iter()
                .map(|s| s.as_rational().expect("modular entry in rational elimination"))
                .collect();
            let lcm = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            rats.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

/// Fraction-free forward elimination. Returns the echelon rows (nonzero rows
/// first) and the pivot columns.
fn bareiss_forward(mut a: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, found);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = quot;
            }
        }
        prev = top[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn back_substitute(rows: &mut [Vec<BigRational>], pivots: &[usize]) {
    for i in (0..pivots.len()).rev() {
        let c = pivots[i];
        let inv = rows[i][c].recip();
        for v in rows[i].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let (above, rest) = rows.split_at_mut(i);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..pivot_row.len() {
                if !pivot_row[j].is_zero() {
                    row[j] -= &factor * &pivot_row[j];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_rows(data: &[&[i64]]) -> Vec<Vec<Scalar>> {
        data.iter().map(|r| r.iter().map(|&v| Field::Rational.from_i64(v)).collect()).collect()
    }

    #[test]
    fn bareiss_rank_matches_hand_reduction() {
        let rows = q_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(Field::Rational, &rows, 2), 1);
        let rows = q_rows(&[&[0, 0, 3], &[0, 2, 1], &[1, 1, 1]]);
        assert_eq!(rank(Field::Rational, &rows, 3), 3);
    }

    #[test]
    fn rational_rref_is_reduced() {
        let rows = q_rows(&[&[2, 4, 6], &[1, 3, 5]]);
        let e = reduced_echelon(Field::Rational, &rows, 3);
        assert_eq!(e.pivots, vec![0, 1]);
        let expect = q_rows(&[&[1, 0, -1], &[0, 1, 2]]);
        assert_eq!(e.rows, expect);
    }

    #[test]
    fn skipped_columns_keep_divisions_exact() {
        let rows = q_rows(&[&[0, 3, 5, 7], &[0, 6, 1, 2], &[0, 9, 4, 4], &[0, 0, 2, 11]]);
        let e = reduced_echelon(Field::Rational, &rows, 4);
        assert_eq!(e.pivots, vec![1, 2, 3]);
    }

    #[test]
    fn modular_rank() {
        let f = Field::Prime(2);
        let rows: Vec<Vec<Scalar>> =
            [[1, 1, 0], [0, 1, 1], [1, 0, 1]].iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
        assert_eq!(rank(f, &rows, 3), 2);
    }
}
