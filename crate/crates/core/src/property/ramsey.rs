use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::engine::{prefix_bits, Engine, Leaf, MAX_ENGINE_DIM};
use super::{ones_pattern, zeros_pattern};
use crate::gf2::{enumerate_subspaces, num_points, Subspace};
use crate::matroid::{sample_matroid, Matroid, PointTable};
use crate::{Error, Result};

/// One refuted branch: every coloring starting with `prefix` (point 1
/// first) is constant `color` on `witness`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefutationLeaf {
    pub prefix: String,
    pub color: u8,
    pub witness: Subspace,
}

/// Exhaustive refutation of "some dimension-`n` coloring has no
/// monochromatic `d`-dimensional subspace", with point 1 fixed to color 0.
/// Complementing a coloring preserves monochromatic subspaces, so colorings
/// with point 1 set to 1 are covered by symmetry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamseyTranscript {
    pub d: usize,
    pub n: usize,
    pub leaves: Vec<RefutationLeaf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamseyOutcome {
    pub d: usize,
    pub n_max: usize,
    /// Least `n <= n_max` at which every coloring has a monochromatic
    /// `d`-dimensional subspace.
    pub dimension: Option<usize>,
    /// A coloring without one, in dimension `dimension - 1` (or `n_max` when
    /// no dimension was found).
    pub counterexample: Option<Matroid>,
    pub transcript: Option<RamseyTranscript>,
}

fn leaf_to_record(n: usize, leaf: &Leaf) -> Result<RefutationLeaf> {
    let bits = prefix_bits(leaf.bits, leaf.len);
    let mut care = leaf.constraint.care;
    let mut points = Vec::new();
    while care != 0 {
        points.push(care.trailing_zeros() + 1);
        care &= care - 1;
    }
    Ok(RefutationLeaf {
        prefix: bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        color: u8::from(leaf.constraint.value != 0),
        witness: Subspace::span(n, points)?,
    })
}

/// Least `n <= n_max` such that every matroid of dimension `n` has a
/// monochromatic restriction of dimension `d`, with certificates on both
/// sides. `node_budget` caps the size of each search tree.
pub fn ramsey_dimension(d: usize, n_max: usize, node_budget: Option<u64>) -> Result<RamseyOutcome> {
    if d == 0 {
        return Err(Error::invalid("Ramsey dimension needs d >= 1"));
    }
    let mut outcome = RamseyOutcome {
        d,
        n_max,
        dimension: None,
        counterexample: None,
        transcript: None,
    };
    let forbidden = [zeros_pattern(d)?, ones_pattern(d)?];
    for n in 0..=n_max {
        if n < d {
            outcome.counterexample = Some(Matroid::zeros(n)?);
            continue;
        }
        if n > MAX_ENGINE_DIM {
            return Err(Error::budget("Ramsey search", format!("dimension {n}"), MAX_ENGINE_DIM));
        }
        let mut engine = Engine::new(n, &forbidden)?;
        if let Some(b) = node_budget {
            engine = engine.with_node_budget(b);
        }
        match engine.find_member(&[false])? {
            Some(bits) => {
                let table = prefix_bits(bits, engine.points());
                outcome.counterexample = Some(Matroid::from_fn(n, |x| table[(x - 1) as usize])?);
            }
            None => {
                let (members, leaves) = engine.transcript(&[false])?;
                debug_assert_eq!(members, 0);
                outcome.dimension = Some(n);
                outcome.transcript = Some(RamseyTranscript {
                    d,
                    n,
                    leaves: leaves.iter().map(|l| leaf_to_record(n, l)).collect::<Result<_>>()?,
                });
                return Ok(outcome);
            }
        }
    }
    Ok(outcome)
}

/// What [`verify_ramsey`] checked.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamseyVerification {
    pub counterexample_ok: bool,
    pub transcript_ok: bool,
    pub transcript_leaves: usize,
    pub samples: u64,
    pub samples_ok: bool,
}

impl RamseyVerification {
    pub fn accepted(&self) -> bool {
        self.counterexample_ok && self.transcript_ok && self.samples_ok
    }
}

fn has_monochromatic(m: &Matroid, subspaces: &[Subspace]) -> bool {
    subspaces.iter().any(|w| {
        let pts = w.points();
        let first = m.get(pts[0]);
        pts.iter().all(|&x| m.get(x) == first)
    })
}

fn check_transcript(t: &RamseyTranscript, d: usize, n: usize) -> bool {
    if t.d != d || t.n != n {
        return false;
    }
    let points = num_points(n) as usize;
    for leaf in &t.leaves {
        let bits: Vec<bool> = leaf.prefix.chars().map(|c| c == '1').collect();
        let well_formed = leaf.prefix.chars().all(|c| c == '0' || c == '1')
            && bits.len() <= points
            && bits.first() == Some(&false)
            && leaf.witness.ambient_dim() == n
            && leaf.witness.dim() == d;
        if !well_formed {
            return false;
        }
        let mono = leaf.witness.points().iter().all(|&x| {
            let i = (x - 1) as usize;
            i < bits.len() && u8::from(bits[i]) == leaf.color
        });
        if !mono {
            return false;
        }
    }
    // prefix-free and of full measure: every coloring with point 1 = 0
    // extends exactly one leaf
    let mut prefixes: Vec<&str> = t.leaves.iter().map(|l| l.prefix.as_str()).collect();
    prefixes.sort_unstable();
    if prefixes.windows(2).any(|w| w[1].starts_with(w[0])) {
        return false;
    }
    let mass: u128 = prefixes.iter().map(|p| 1u128 << (points - p.len())).sum();
    mass == 1u128 << (points - 1)
}

/// Re-check a [`RamseyOutcome`] without the search engine: the counterexample
/// against every `d`-dimensional subspace, the transcript leaf by leaf plus
/// its coverage, and `samples` random colorings at the claimed dimension.
pub fn verify_ramsey(outcome: &RamseyOutcome, samples: u64, seed: u64) -> Result<RamseyVerification> {
    let d = outcome.d;
    let counterexample_ok = match &outcome.counterexample {
        None => false,
        Some(m) => {
            let expected = outcome.dimension.map_or(outcome.n_max, |n| n - 1);
            m.dim() == expected && (m.dim() < d || !has_monochromatic(m, &enumerate_subspaces(m.dim(), d)?))
        }
    };
    let mut v = RamseyVerification {
        counterexample_ok,
        transcript_ok: outcome.dimension.is_none() && outcome.transcript.is_none(),
        transcript_leaves: 0,
        samples: 0,
        samples_ok: true,
    };
    if let (Some(n), Some(t)) = (outcome.dimension, &outcome.transcript) {
        v.transcript_ok = check_transcript(t, d, n);
        v.transcript_leaves = t.leaves.len();
        let subspaces = enumerate_subspaces(n, d)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let m = sample_matroid(n, rand::Rng::gen(&mut rng))?;
            v.samples += 1;
            if !has_monochromatic(&m, &subspaces) {
                v.samples_ok = false;
                break;
            }
        }
    }
    Ok(v)
}
