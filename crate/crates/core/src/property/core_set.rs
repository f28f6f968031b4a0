use serde::Serialize;

use super::engine::Engine;
use super::{contains, LocalProperty};
use crate::gf2::num_points;
use crate::matroid::{sample_extension, Matroid, MAX_EXTENSION_FREE_POINTS};
use crate::{Error, Result};

fn table_prefix(m: &Matroid) -> Vec<bool> {
    (1..=m.num_points() as u32).map(|x| m.get(x)).collect()
}

/// `M ∈ Core^k(P)`: every extension of `M` by `k` dimensions lies in `P`.
/// Extensions of lower dimension are restrictions of top-dimensional ones,
/// so only dimension `dim M + k` is searched.
pub fn core_membership(m: &Matroid, p: &LocalProperty, k: usize) -> Result<bool> {
    let n = m.dim();
    let free = num_points(n + k) - num_points(n);
    if free > MAX_EXTENSION_FREE_POINTS {
        return Err(Error::budget(
            "exact core membership (use the sampled refutation instead)",
            format!("{free} free points"),
            MAX_EXTENSION_FREE_POINTS,
        ));
    }
    let engine = Engine::new(n + k, &p.forbidden)?;
    Ok(engine.count(&table_prefix(m))? == 1u128 << free)
}

/// Outcome of a sampled core test.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum CoreVerdict {
    /// An extension outside `P` was found.
    NotInCore(Matroid),
    /// No sampled extension left `P`.
    Unknown,
}

/// Sample `samples` uniform extensions of `M` by `k` dimensions and report
/// the first one outside `P`. Can only refute membership.
pub fn core_refutation(m: &Matroid, p: &LocalProperty, k: usize, samples: u64, seed: u64) -> Result<CoreVerdict> {
    for i in 0..samples {
        let e = sample_extension(m, k, seed.wrapping_add(i))?;
        if !contains(p, &e) {
            return Ok(CoreVerdict::NotInCore(e));
        }
    }
    Ok(CoreVerdict::Unknown)
}
