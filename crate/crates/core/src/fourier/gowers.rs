//! Gowers uniformity norms of real functions on `F_2^n`, with the standard
//! definition `||f||_{U_d}^{2^d} = E_{x, h_1..h_d} prod_{S ⊆ [d]} f(x + sum_{i in S} h_i)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exhaustive evaluation is allowed while `n (d + 1) <= MAX_GOWERS_LOG_TERMS`.
pub const MAX_GOWERS_LOG_TERMS: usize = 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum GowersMode {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

fn dim_of(f: &[f64]) -> Result<usize> {
    if !f.len().is_power_of_two() {
        return Err(Error::invalid(format!(
            "table length {} is not a power of two",
            f.len()
        )));
    }
    Ok(f.len().trailing_zeros() as usize)
}

/// `E_{h_1..h_k} (E_x Δ_{h_1..h_k} f(x))^2` with `Δ_h f(x) = f(x) f(x + h)`.
fn squared_means(f: &[f64], k: usize) -> f64 {
    if k == 0 {
        let m = f.iter().sum::<f64>() / f.len() as f64;
        return m * m;
    }
    let mut total = 0.0;
    let mut g = vec![0.0; f.len()];
    for h in 0..f.len() {
        for (x, gx) in g.iter_mut().enumerate() {
            *gx = f[x] * f[x ^ h];
        }
        total += squared_means(&g, k - 1);
    }
    total / f.len() as f64
}

/// `||f||_{U_d}` for `d >= 1`. The `2^d`-th power is clamped at zero before
/// taking the root (it is nonnegative in exact arithmetic).
pub fn gowers_norm(f: &[f64], d: usize, mode: GowersMode) -> Result<f64> {
    let n = dim_of(f)?;
    if d == 0 {
        return Err(Error::invalid("Gowers norms start at d = 1"));
    }
    let power = match mode {
        GowersMode::Exhaustive => {
            if n * (d + 1) > MAX_GOWERS_LOG_TERMS {
                return Err(Error::budget(
                    "exhaustive Gowers norm (use Monte-Carlo instead)",
                    format!("2^{} terms", n * (d + 1)),
                    format!("2^{MAX_GOWERS_LOG_TERMS}"),
                ));
            }
            squared_means(f, d - 1)
        }
        GowersMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("Monte-Carlo Gowers norm needs at least one sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let size = f.len();
            let mut h = vec![0usize; d];
            let mut sum = 0.0;
            for _ in 0..samples {
                let x = rng.gen_range(0..size);
                for hi in h.iter_mut() {
                    *hi = rng.gen_range(0..size);
                }
                let mut prod = 1.0;
                for s in 0..1usize << d {
                    let mut y = x;
                    for (i, &hi) in h.iter().enumerate() {
                        if s >> i & 1 == 1 {
                            y ^= hi;
                        }
                    }
                    prod *= f[y];
                }
                sum += prod;
            }
            sum / samples as f64
        }
    };
    Ok(power.max(0.0).powf(1.0 / (1u64 << d) as f64))
}

#[cfg(test)]
pub(crate) fn naive_gowers_power(f: &[f64], d: usize) -> f64 {
    let size = f.len();
    let mut total = 0.0;
    let tuples = size.pow(d as u32 + 1);
    for t in 0..tuples {
        let x = t % size;
        let hs: Vec<usize> = (0..d).map(|i| t / size.pow(i as u32 + 1) % size).collect();
        let mut prod = 1.0;
        for s in 0..1usize << d {
            let y = hs
                .iter()
                .enumerate()
                .filter(|(i, _)| s >> i & 1 == 1)
                .fold(x, |acc, (_, &h)| acc ^ h);
            prod *= f[y];
        }
        total += prod;
    }
    total / tuples as f64
}
