//! Brute-force oracles shared by the integration tests. Everything here
//! works straight from definitions, over all tuples of vectors.
#![allow(dead_code)]

use binmat::matroid::{Matroid, Pattern};

pub fn image(tuple: &[u32], y: u32) -> u32 {
    (0..tuple.len())
        .filter(|i| y >> i & 1 == 1)
        .fold(0, |acc, i| acc ^ tuple[i])
}

/// Every `d`-tuple of vectors in `F_2^n`, independent or not.
pub fn all_tuples(d: usize, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let vs = 1u64 << n;
    (0..vs.pow(d as u32)).map(move |mut c| {
        (0..d)
            .map(|_| {
                let v = (c % vs) as u32;
                c /= vs;
                v
            })
            .collect()
    })
}

pub fn independent(tuple: &[u32]) -> bool {
    (1..1u32 << tuple.len()).all(|y| image(tuple, y) != 0)
}

fn matches(n: &Pattern, m: &Matroid, t: &[u32]) -> bool {
    (1..1u32 << n.dim()).all(|y| match n.get(y).as_bool() {
        None => true,
        Some(b) => m.get(image(t, y)) == b,
    })
}

pub fn brute_instances(n: &Pattern, m: &Matroid) -> u64 {
    all_tuples(n.dim(), m.dim())
        .filter(|t| independent(t) && matches(n, m, t))
        .count() as u64
}

pub fn brute_contains(forbidden: &[Pattern], m: &Matroid) -> bool {
    forbidden
        .iter()
        .all(|n| n.dim() > m.dim() || !all_tuples(n.dim(), m.dim()).any(|t| independent(&t) && matches(n, m, &t)))
}

/// Least codimension of a subspace on which `m` is constantly `value`.
pub fn brute_critical(m: &Matroid, value: bool) -> usize {
    let n = m.dim();
    (0..=n)
        .rev()
        .find(|&d| {
            all_tuples(d, n)
                .filter(|t| independent(t))
                .any(|t| (1..1u32 << d).all(|y| m.get(image(&t, y)) == value))
        })
        .map(|d| n - d)
        .unwrap()
}

pub fn all_matroids(n: usize) -> impl Iterator<Item = Matroid> {
    let pts = (1u64 << n) - 1;
    (0u64..1 << pts).map(move |mask| Matroid::from_mask(n, mask).unwrap())
}
