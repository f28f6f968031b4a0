use std::collections::BTreeSet;

use binmat::fourier::{
    best_factor_search, conditional_expectation, enumerate_structured, factor_partition, function_entropy, gowers_norm,
    homogeneous_polynomials, structured_count, verify_degree, DegreeMode, GowersMode, NonclassicalPolynomial,
    Partition, Term, TorusValue,
};
use binmat::matroid::{Matroid, RealFunction};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::all_matroids;

/// Values of `p` scaled to integers modulo `2^d`.
fn scaled(p: &NonclassicalPolynomial) -> Vec<i64> {
    let d = p.degree_bound() as i32;
    (0..1u32 << p.n())
        .map(|x| (p.eval(x).to_f64() * 2f64.powi(d)).round() as i64)
        .collect()
}

/// Whether every `k`-fold iterated difference of `p` vanishes, straight from
/// the alternating sum over the cube spanned by the directions.
fn brute_vanishes(p: &NonclassicalPolynomial, k: usize) -> bool {
    let n = p.n();
    let modulus = 1i64 << p.degree_bound();
    let f = scaled(p);
    let size = 1u64 << n;
    for code in 0..size.pow(k as u32) {
        let mut c = code;
        let h: Vec<u32> = (0..k)
            .map(|_| {
                let v = (c % size) as u32;
                c /= size;
                v
            })
            .collect();
        for x in 0..1u32 << n {
            let mut s = 0i64;
            for sub in 0..1u32 << k {
                let y = (0..k).filter(|i| sub >> i & 1 == 1).fold(x, |a, i| a ^ h[i]);
                let sign = if (k as u32 - sub.count_ones()).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                s += sign * f[y as usize];
            }
            if s.rem_euclid(modulus) != 0 {
                return false;
            }
        }
    }
    true
}

fn naive_gowers(f: &[f64], d: usize) -> f64 {
    let size = f.len() as u64;
    let mut total = 0.0;
    for code in 0..size.pow(d as u32 + 1) {
        let mut c = code;
        let v: Vec<usize> = (0..=d)
            .map(|_| {
                let t = (c % size) as usize;
                c /= size;
                t
            })
            .collect();
        let mut prod = 1.0;
        for sub in 0..1usize << d {
            let y = (0..d).filter(|i| sub >> i & 1 == 1).fold(v[0], |a, i| a ^ v[i + 1]);
            prod *= f[y];
        }
        total += prod;
    }
    (total / size.pow(d as u32 + 1) as f64)
        .max(0.0)
        .powf(1.0 / (1u64 << d) as f64)
}

fn random_table(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

#[test]
fn degree_is_exactly_the_largest_term() {
    for d in 1..=3 {
        for seed in 0..12 {
            let p = NonclassicalPolynomial::random(3, d, seed).unwrap();
            let top = p.max_term_degree();
            for k in 0..=d {
                let expected = brute_vanishes(&p, k + 1);
                assert_eq!(expected, k >= top, "{p} at {k}");
                for mode in [DegreeMode::Basis, DegreeMode::Exhaustive { budget: 1 << 22 }] {
                    assert_eq!(verify_degree(&p, k, mode).unwrap().holds, expected, "{p} {mode:?}");
                }
            }
        }
    }
}

#[test]
fn every_single_term_has_its_degree() {
    for d in 1..=3 {
        for t in NonclassicalPolynomial::all_terms(4, d) {
            let p = NonclassicalPolynomial::new(4, d, TorusValue::ZERO, [t]).unwrap();
            let deg = t.degree() as usize;
            assert!(verify_degree(&p, deg, DegreeMode::Basis).unwrap().holds);
            assert!(!verify_degree(&p, deg - 1, DegreeMode::Basis).unwrap().holds);
        }
    }
    // |x1| / 4 is nonclassical of degree 2, while |x1| / 2 is linear
    let quarter = NonclassicalPolynomial::new(2, 2, TorusValue::ZERO, [Term { vars: 1, j: 2 }]).unwrap();
    assert_eq!(quarter.max_term_degree(), 2);
    assert!(verify_degree(&quarter, 2, DegreeMode::Basis).unwrap().holds);
    assert!(!verify_degree(&quarter, 1, DegreeMode::Basis).unwrap().holds);
    let half: NonclassicalPolynomial = "2 1 0 ; 1:1".parse().unwrap();
    assert!(verify_degree(&half, 1, DegreeMode::Basis).unwrap().holds);
    assert!(!verify_degree(&half, 0, DegreeMode::Basis).unwrap().holds);
}

#[test]
fn gowers_matches_cube_average() {
    for seed in 0..4 {
        let f = random_table(3, seed);
        for d in 1..=3 {
            let g = gowers_norm(&f, d, GowersMode::Exhaustive).unwrap();
            assert!((g - naive_gowers(&f, d)).abs() < 1e-12);
        }
        let mean = f.iter().sum::<f64>() / 8.0;
        assert!((gowers_norm(&f, 1, GowersMode::Exhaustive).unwrap() - mean.abs()).abs() < 1e-12);
        let mc = gowers_norm(&f, 2, GowersMode::MonteCarlo { samples: 200_000, seed }).unwrap();
        assert!((mc - naive_gowers(&f, 2)).abs() < 0.05);
    }
}

#[test]
fn factor_search_residuals_shrink_with_complexity() {
    for seed in 0..3 {
        let g = random_table(4, seed);
        let mut last = f64::INFINITY;
        for c in 0..=2 {
            let best = best_factor_search(&g, 1, c, 1 << 24).unwrap();
            assert!(best.residual <= last + 1e-12);
            last = best.residual;
        }
    }
}

#[test]
fn factors_of_linear_forms() {
    let polys = homogeneous_polynomials(3, 1).unwrap();
    assert_eq!(polys.len(), 8);
    assert!(polys[0].terms().next().is_none());
    let f = factor_partition(3, &polys[1..3]).unwrap();
    assert_eq!(f.partition.parts(), 4);
    assert!(BigUint::from(f.partition.parts()) <= f.part_bound());
}

fn rational_table(n: usize, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1usize << n)
        .map(|_| {
            BigRational::new(
                BigInt::from(rng.gen_range(-20i64..20)),
                BigInt::from(rng.gen_range(1i64..9)),
            )
        })
        .collect()
}

/// A function with `levels` level sets whose values times sizes are integers.
fn rational_function(n: usize, seed: u64) -> RealFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (1usize << n) - 1;
    let nlevels = rng.gen_range(1..=pts.min(4));
    let label: Vec<usize> = (0..pts).map(|_| rng.gen_range(0..nlevels)).collect();
    let mut values = vec![0.0; nlevels];
    for (l, v) in values.iter_mut().enumerate() {
        let size = label.iter().filter(|&&x| x == l).count();
        if size > 0 {
            *v = rng.gen_range(0..=size) as f64 / size as f64;
        }
    }
    RealFunction::new(n, label.iter().map(|&l| values[l]).collect()).unwrap()
}

#[test]
fn structured_enumeration_matches_definition() {
    for seed in 0..40 {
        let n = 1 + (seed % 3) as usize;
        let f = rational_function(n, seed);
        let listed: BTreeSet<String> = enumerate_structured(&f, 1 << 20)
            .unwrap()
            .iter()
            .map(Matroid::table_string)
            .collect();
        let brute: BTreeSet<String> = all_matroids(n)
            .filter(|m| {
                // same average as f on every level set
                let vals = f.values();
                vals.iter().all(|&a| {
                    let level: Vec<u32> = (1..=vals.len() as u32).filter(|&x| vals[x as usize - 1] == a).collect();
                    let ones = level.iter().filter(|&&x| m.get(x)).count() as f64;
                    (ones - a * level.len() as f64).abs() < 1e-9
                })
            })
            .map(|m| m.table_string())
            .collect();
        assert_eq!(listed, brute);
        assert_eq!(structured_count(&f), BigUint::from(brute.len()));
        assert!((brute.len() as f64).log2() <= function_entropy(&f) + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conditional_expectation_is_a_projection(seed in any::<u64>(), k in 0usize..4) {
        let polys = homogeneous_polynomials(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chosen: Vec<_> = (0..k).map(|_| polys[rng.gen_range(0..polys.len())].clone()).collect();
        let part = factor_partition(3, &chosen).unwrap().partition;
        let g = rational_table(3, seed);
        let e = conditional_expectation(&g, &part).unwrap();
        prop_assert_eq!(conditional_expectation(&e, &part).unwrap(), e.clone());
        let sum = |v: &[BigRational]| v.iter().fold(BigRational::zero(), |a, b| a + b);
        prop_assert_eq!(sum(&e), sum(&g));
        let coarse = conditional_expectation(&e, &Partition::trivial(3).unwrap()).unwrap();
        prop_assert_eq!(coarse, conditional_expectation(&g, &Partition::trivial(3).unwrap()).unwrap());
    }

    #[test]
    fn polynomial_text_round_trip(n in 1usize..6, d in 1usize..4, seed in any::<u64>()) {
        let p = NonclassicalPolynomial::random(n, d, seed).unwrap();
        let back: NonclassicalPolynomial = p.to_string().parse().unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.table(), p.table());
    }

    #[test]
    fn sum_of_polynomials_keeps_degree(seed in any::<u64>()) {
        let a = NonclassicalPolynomial::random(4, 2, seed).unwrap();
        let b = NonclassicalPolynomial::random(4, 2, seed ^ 0x5555).unwrap();
        let sum: Vec<TorusValue> = a.table().iter().zip(b.table()).map(|(x, y)| *x + y).collect();
        let check = binmat::fourier::verify_degree_table(&sum, 2, DegreeMode::Basis).unwrap();
        prop_assert!(check.holds);
    }
}
