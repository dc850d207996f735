use std::collections::BTreeSet;

use graphcode_core::zmod::{det_exact, kernel_mod, kernel_trivial, smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Laplace expansion along the first row.
fn cofactor_det(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0] as i128;
    }
    let mut total = 0i128;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = a[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * a[0][j] as i128 * cofactor_det(&minor);
    }
    total
}

fn brute_kernel(a: &[Vec<i64>], cols: usize, d: u64) -> BTreeSet<Vec<u64>> {
    let total = d.pow(cols as u32);
    let mut out = BTreeSet::new();
    for idx in 0..total {
        let mut x = vec![0u64; cols];
        let mut r = idx;
        for slot in x.iter_mut() {
            *slot = r % d;
            r /= d;
        }
        let zero = a.iter().all(|row| {
            let s: i64 = row.iter().zip(&x).map(|(&c, &v)| c * v as i64).sum();
            s.rem_euclid(d as i64) == 0
        });
        if zero {
            out.insert(x);
        }
    }
    out
}

fn span(gens: &[Vec<u64>], cols: usize, d: u64) -> BTreeSet<Vec<u64>> {
    let mut set = BTreeSet::new();
    set.insert(vec![0u64; cols]);
    loop {
        let mut grown = set.clone();
        for v in &set {
            for g in gens {
                grown.insert(v.iter().zip(g).map(|(a, b)| (a + b) % d).collect());
            }
        }
        if grown.len() == set.len() {
            return set;
        }
        set = grown;
    }
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (0..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    if rows.is_empty() {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_rows(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn kernel_generators_are_solutions(
        rows in matrix_strategy(6, 6),
        d in prop::sample::select(vec![2u64, 3, 4, 5, 6, 9]),
    ) {
        let cols = rows.first().map_or(1, Vec::len);
        let a = to_matrix(&rows, cols);
        let k = kernel_mod(&a, d).unwrap();
        prop_assert!(k.generators.len() <= a.cols());
        for g in &k.generators {
            prop_assert!(a.mul_vec_mod(g, d).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn kernel_matches_exhaustive_enumeration(
        rows in matrix_strategy(5, 5),
        d in 2u64..=5,
    ) {
        let cols = rows.first().map_or(1, Vec::len);
        let a = to_matrix(&rows, cols);
        let k = kernel_mod(&a, d).unwrap();
        prop_assert_eq!(span(&k.generators, cols, d), brute_kernel(&rows, cols, d));
    }

    #[test]
    fn smith_decomposition_reproduces_input(rows in matrix_strategy(6, 6)) {
        let cols = rows.first().map_or(1, Vec::len);
        let a = to_matrix(&rows, cols);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&snf.s).unwrap().mul(&snf.v).unwrap(), a.clone());
        prop_assert!(det_exact(&snf.u).unwrap().abs().is_one());
        prop_assert!(det_exact(&snf.v).unwrap().abs().is_one());
        let diag = snf.invariant_factors();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn square_kernel_trivial_iff_det_coprime(
        n in 1usize..=5,
        seed in any::<u64>(),
        d in prop::sample::select(vec![2u64, 3, 4, 5, 6, 9]),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let a = IntMatrix::from_rows(&rows).unwrap();
        let det = det_exact(&a).unwrap();
        let coprime = det.gcd(&BigInt::from(d)).is_one();
        prop_assert_eq!(kernel_trivial(&a, d).unwrap(), coprime);
    }
}

#[test]
fn det_agrees_with_cofactor_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..12_000 {
        let n = 1 + trial % 4;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let a = IntMatrix::from_rows(&rows).unwrap();
        let fast = det_exact(&a).unwrap().to_i128().unwrap();
        assert_eq!(fast, cofactor_det(&rows), "{rows:?}");
    }
}

#[test]
fn det_survives_large_entries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = 5;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_range(-(1i64 << 40)..(1i64 << 40)))
                    .collect()
            })
            .collect();
        let a = IntMatrix::from_rows(&rows).unwrap();
        // cofactor expansion in BigInt as the reference
        fn big_det(a: &[Vec<BigInt>]) -> BigInt {
            if a.len() == 1 {
                return a[0][0].clone();
            }
            let mut total = BigInt::zero();
            for j in 0..a.len() {
                let minor: Vec<Vec<BigInt>> = a[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][j] * big_det(&minor);
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_exact(&a).unwrap(), big_det(&big));
    }
}
