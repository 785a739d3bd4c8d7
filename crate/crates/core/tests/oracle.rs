mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{all_algebras, dense_differential, dense_rank, fixtures, oracle_hh_dims, random_algebra, E};
use gradus::hochschild::{cohomology, differential_matrix};
use gradus::Field;

fn product(x: &[Vec<E>], y: &[Vec<E>], f: Field) -> Vec<Vec<E>> {
    let inner = y.len();
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(E::zero(f), |acc, k| acc.add(&row[k].mul(&y[k][c]))))
                .collect()
        })
        .collect()
}

#[test]
fn oracle_differential_squares_to_zero() {
    for f in [Field::Rational, Field::Prime(3)] {
        for (name, a) in fixtures(f) {
            for p in 0..2 {
                let (d0, _) = dense_differential(&a, p);
                let (d1, _) = dense_differential(&a, p + 1);
                let zero = product(&d1, &d0, f).iter().flatten().all(E::is_zero);
                assert!(zero, "{name} over {f}, p = {p}");
            }
        }
    }
}

#[test]
fn ranks_agree_with_the_library_differential() {
    for f in [Field::Rational, Field::Prime(5)] {
        for (name, a) in fixtures(f) {
            for p in 0..3 {
                let (dense, _) = dense_differential(&a, p);
                assert_eq!(dense_rank(&dense), differential_matrix(&a, p).rank(), "{name} over {f}, p = {p}");
            }
        }
    }
}

#[test]
fn fixture_cohomology_matches_oracle() {
    for f in [Field::Rational, Field::Prime(2), Field::Prime(3)] {
        for (name, a) in fixtures(f) {
            assert_eq!(cohomology(&a, 3).dims_by_p(), oracle_hh_dims(&a, 3), "{name} over {f}");
        }
    }
}

#[test]
fn every_product_on_small_dims_over_gf2() {
    for dims in [vec![1, 1], vec![1, 1, 1], vec![2, 1], vec![1, 2]] {
        for a in all_algebras(&dims, 2) {
            assert_eq!(cohomology(&a, 3).dims_by_p(), oracle_hh_dims(&a, 3), "{:?}", a.mu());
        }
    }
}

#[test]
fn random_products_over_gf5() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for dims in [vec![2, 2], vec![1, 1, 2], vec![1, 2, 1]] {
        for _ in 0..5 {
            let a = random_algebra(&dims, Field::Prime(5), 0.3, &mut rng, 500).expect("zero product is associative");
            assert_eq!(cohomology(&a, 2).dims_by_p(), oracle_hh_dims(&a, 2));
        }
    }
}
