use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_table_dim, find_instance, Matroid, PointTable};
use crate::gf2::{num_points, pow2, space_size};
use crate::{Error, Result};

/// Most free points accepted by [`extensions`].
pub const MAX_EXTENSION_FREE_POINTS: u64 = 25;

fn free_points(n: usize, k: usize) -> u64 {
    num_points(n + k) - num_points(n)
}

/// Number of exact-dimension extensions, `2^(2^(n+k) - 2^n)`.
pub fn extension_count(n: usize, k: usize) -> BigUint {
    pow2(free_points(n, k) as usize)
}

fn exact_extensions(m: &Matroid, k: usize) -> Result<Vec<Matroid>> {
    let n = m.dim();
    check_table_dim(n + k)?;
    let free = free_points(n, k);
    if free > MAX_EXTENSION_FREE_POINTS {
        return Err(Error::budget(
            "extension enumeration (use sampling instead)",
            format!("{free} free points"),
            MAX_EXTENSION_FREE_POINTS,
        ));
    }
    let first_free = space_size(n) as u32;
    let base = Matroid::from_fn(n + k, |x| x < first_free && m.get(x))?;
    Ok((0..1u64 << free)
        .map(|bits| {
            let mut e = base.clone();
            for i in 0..free {
                if bits >> i & 1 == 1 {
                    e.set(first_free + i as u32, true);
                }
            }
            e
        })
        .collect())
}

/// Extensions of `M` whose restriction to `span(e_0, ..., e_{n-1})` is `M`:
/// of dimension exactly `dim M + k`, or of every dimension from `dim M` to
/// `dim M + k` when `exact_dim` is false. The free points are enumerated as
/// a binary counter, lowest point first.
pub fn extensions(m: &Matroid, k: usize, exact_dim: bool) -> Result<Vec<Matroid>> {
    if exact_dim {
        return exact_extensions(m, k);
    }
    let mut all = Vec::new();
    for j in 0..=k {
        all.extend(exact_extensions(m, j)?);
    }
    Ok(all)
}

/// `M' ∈ Ext^k(M)`: `dim M <= dim M' <= dim M + k` and some restriction of
/// `M'` to a `dim M`-dimensional subspace is isomorphic to `M`.
pub fn ext_membership(mp: &Matroid, m: &Matroid, k: usize) -> bool {
    mp.dim() >= m.dim() && mp.dim() <= m.dim() + k && find_instance(m, mp).is_some()
}

fn random_matroid<R: Rng>(n: usize, rng: &mut R) -> Result<Matroid> {
    Matroid::from_fn(n, |_| rng.gen::<bool>())
}

/// A uniformly random matroid of dimension `n`, determined by `seed`.
pub fn sample_matroid(n: usize, seed: u64) -> Result<Matroid> {
    random_matroid(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A uniformly random exact-dimension extension of `M` by `k`, determined by
/// `seed`.
pub fn sample_extension(m: &Matroid, k: usize, seed: u64) -> Result<Matroid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first_free = space_size(m.dim()) as u32;
    Matroid::from_fn(
        m.dim() + k,
        |x| {
            if x < first_free {
                m.get(x)
            } else {
                rng.gen::<bool>()
            }
        },
    )
}
