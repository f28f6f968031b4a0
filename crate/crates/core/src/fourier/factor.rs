//! Polynomial factors: partitions of `F_2^n` by the joint values of a tuple
//! of polynomials, their enumeration, and conditional expectations.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use super::gowers::{gowers_norm, GowersMode};
use super::polynomial::{NonclassicalPolynomial, MAX_POLY_VARS};
use crate::property::decimal;
use crate::{Error, Result};

/// Most candidate polynomials [`count_factors`] will generate.
pub const MAX_CANDIDATE_POLYNOMIALS: u64 = 1 << 20;

/// Default cap on partition meets in [`count_factors`].
pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 24;

/// A partition of `F_2^n`, labelled canonically: parts are numbered in the
/// order of their smallest element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    n: usize,
    labels: Vec<u32>,
    parts: usize,
}

impl Partition {
    /// Group the points `0..2^n` by `key`.
    pub fn from_keys<K: Hash + Eq>(n: usize, key: impl Fn(u32) -> K) -> Result<Self> {
        if n > MAX_POLY_VARS {
            return Err(Error::budget("partition of F_2^n", n, MAX_POLY_VARS));
        }
        let mut seen = HashMap::new();
        let labels = (0..1u32 << n)
            .map(|x| {
                let next = seen.len() as u32;
                *seen.entry(key(x)).or_insert(next)
            })
            .collect();
        Ok(Partition {
            n,
            labels,
            parts: seen.len(),
        })
    }

    pub fn trivial(n: usize) -> Result<Self> {
        Self::from_keys(n, |_| ())
    }

    pub fn singletons(n: usize) -> Result<Self> {
        Self::from_keys(n, |x| x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn part_of(&self, x: u32) -> u32 {
        self.labels[x as usize]
    }

    /// The common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        Partition::from_keys(self.n, |x| (self.labels[x as usize], other.labels[x as usize]))
            .expect("same dimension as the inputs")
    }

    /// Whether every part of `self` lies inside a part of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.meet(other).parts == self.parts
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialFactor {
    pub polys: Vec<NonclassicalPolynomial>,
    pub partition: Partition,
}

impl PolynomialFactor {
    /// `2^(d_1 + ... + d_C)`, the most parts the factor can have.
    pub fn part_bound(&self) -> BigUint {
        let e: usize = self.polys.iter().map(NonclassicalPolynomial::degree_bound).sum();
        BigUint::one() << e
    }
}

/// The factor of `polys` on `F_2^n`: `x` and `y` share a part iff every
/// polynomial takes the same value at both.
pub fn factor_partition(n: usize, polys: &[NonclassicalPolynomial]) -> Result<PolynomialFactor> {
    if let Some(p) = polys.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n(),
        });
    }
    let tables: Vec<_> = polys.iter().map(NonclassicalPolynomial::table).collect();
    let partition = Partition::from_keys(n, |x| tables.iter().map(|t| t[x as usize]).collect::<Vec<_>>())?;
    let factor = PolynomialFactor {
        polys: polys.to_vec(),
        partition,
    };
    debug_assert!(BigUint::from(factor.partition.parts) <= factor.part_bound());
    Ok(factor)
}

/// All normal-form polynomials of degree at most `d` with zero constant,
/// the zero polynomial first.
pub fn homogeneous_polynomials(n: usize, d: usize) -> Result<Vec<NonclassicalPolynomial>> {
    let terms = NonclassicalPolynomial::all_terms(n, d);
    if terms.len() >= 64 || 1u64 << terms.len() > MAX_CANDIDATE_POLYNOMIALS {
        return Err(Error::budget(
            "candidate polynomials",
            format!("2^{}", terms.len()),
            MAX_CANDIDATE_POLYNOMIALS,
        ));
    }
    (0..1u64 << terms.len())
        .map(|mask| {
            let chosen = terms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| *t);
            NonclassicalPolynomial::new(n, d, Default::default(), chosen)
        })
        .collect()
}

/// Distinct factors of complexity at most `c`, each with the indices (into
/// `polys`) of one generating tuple. Built as `S_c = S_{c-1} ∧ S_1`; the
/// zero polynomial makes the sequence increasing.
fn factor_sets(
    n: usize,
    polys: &[NonclassicalPolynomial],
    c: usize,
    budget: u64,
) -> Result<Vec<(Partition, Vec<usize>)>> {
    let mut singles: Vec<(Partition, Vec<usize>)> = Vec::new();
    let mut index: HashMap<Partition, usize> = HashMap::new();
    for (i, p) in polys.iter().enumerate() {
        let part = factor_partition(n, std::slice::from_ref(p))?.partition;
        if !index.contains_key(&part) {
            index.insert(part.clone(), singles.len());
            let gens = if p.terms().next().is_none() { vec![] } else { vec![i] };
            singles.push((part, gens));
        }
    }
    let mut current = vec![(Partition::trivial(n)?, Vec::new())];
    let mut spent = 0u64;
    for _ in 0..c {
        spent += (current.len() * singles.len()) as u64;
        if spent > budget {
            return Err(Error::budget("factor meets", spent, budget));
        }
        let mut next: Vec<(Partition, Vec<usize>)> = Vec::new();
        let mut seen: HashSet<Partition> = HashSet::new();
        for (p, gens) in &current {
            for (q, qgens) in &singles {
                let m = p.meet(q);
                if seen.insert(m.clone()) {
                    let mut g = gens.clone();
                    g.extend(qgens);
                    next.push((m, g));
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// Result of [`count_factors`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorCount {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    pub candidate_polynomials: u64,
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    pub max_parts: usize,
    /// `2^(dc)`, the per-factor part bound.
    pub part_bound: u64,
    pub part_bound_holds: bool,
    /// `n^(dc)`. Reported, not asserted: it fails at tiny `n`.
    #[serde(serialize_with = "decimal")]
    pub power_bound: BigUint,
    pub power_bound_holds: bool,
    /// `2^(t c)` with `t` the number of normal-form terms; always holds.
    #[serde(serialize_with = "decimal")]
    pub term_bound: BigUint,
}

/// Number of distinct partitions of `F_2^n` induced by at most `c`
/// polynomials of degree at most `d` (constants dropped, since they do not
/// change level sets).
pub fn count_factors(n: usize, d: usize, c: usize, budget: u64) -> Result<FactorCount> {
    let polys = homogeneous_polynomials(n, d)?;
    let sets = factor_sets(n, &polys, c, budget)?;
    let count = BigUint::from(sets.len());
    let max_parts = sets.iter().map(|(p, _)| p.parts()).max().unwrap_or(1);
    let dc = (d * c) as u32;
    let part_bound = if dc < 64 { 1u64 << dc } else { u64::MAX };
    let power_bound = BigUint::from(n).pow(dc);
    let terms = NonclassicalPolynomial::all_terms(n, d).len();
    Ok(FactorCount {
        n,
        d,
        c,
        candidate_polynomials: polys.len() as u64,
        power_bound_holds: count <= power_bound,
        part_bound_holds: max_parts as u64 <= part_bound,
        term_bound: BigUint::one() << (terms * c),
        count,
        max_parts,
        part_bound,
        power_bound,
    })
}

fn check_len(len: usize, p: &Partition) -> Result<()> {
    if len != p.labels.len() {
        return Err(Error::invalid(format!(
            "function has {len} values but the partition covers {} points",
            p.labels.len()
        )));
    }
    Ok(())
}

/// `E[g | B]`: constant on each part, equal to the average of `g` there.
pub fn conditional_expectation(g: &[BigRational], p: &Partition) -> Result<Vec<BigRational>> {
    check_len(g.len(), p)?;
    let mut sums = vec![BigRational::zero(); p.parts];
    let mut sizes = vec![0u64; p.parts];
    for (v, &l) in g.iter().zip(&p.labels) {
        sums[l as usize] += v;
        sizes[l as usize] += 1;
    }
    let means: Vec<BigRational> = sums
        .into_iter()
        .zip(sizes)
        .map(|(s, k)| s / BigRational::from_integer(BigInt::from(k)))
        .collect();
    Ok(p.labels.iter().map(|&l| means[l as usize].clone()).collect())
}

/// Floating-point [`conditional_expectation`].
pub fn conditional_expectation_f64(g: &[f64], p: &Partition) -> Result<Vec<f64>> {
    check_len(g.len(), p)?;
    let mut sums = vec![0.0; p.parts];
    let mut sizes = vec![0u64; p.parts];
    for (v, &l) in g.iter().zip(&p.labels) {
        sums[l as usize] += v;
        sizes[l as usize] += 1;
    }
    Ok(p.labels
        .iter()
        .map(|&l| sums[l as usize] / sizes[l as usize] as f64)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestFactor {
    pub factor: PolynomialFactor,
    /// `||g - E[g|B]||_{U_{d+1}}`.
    pub residual: f64,
    pub factors_searched: usize,
}

/// Exhaustively find the factor of complexity at most `c` and degree at most
/// `d` minimizing `||g - E[g|B]||_{U_{d+1}}`. Ties keep the first factor in
/// enumeration order.
pub fn best_factor_search(g: &[f64], d: usize, c: usize, budget: u64) -> Result<BestFactor> {
    if !g.len().is_power_of_two() {
        return Err(Error::invalid(format!(
            "table length {} is not a power of two",
            g.len()
        )));
    }
    let n = g.len().trailing_zeros() as usize;
    let polys = homogeneous_polynomials(n, d)?;
    let sets = factor_sets(n, &polys, c, budget)?;
    let mut best: Option<(f64, usize)> = None;
    for (i, (part, _)) in sets.iter().enumerate() {
        let e = conditional_expectation_f64(g, part)?;
        let diff: Vec<f64> = g.iter().zip(&e).map(|(a, b)| a - b).collect();
        let r = gowers_norm(&diff, d + 1, GowersMode::Exhaustive)?;
        if best.is_none_or(|(b, _)| r < b) {
            best = Some((r, i));
        }
    }
    let (residual, i) = best.expect("the trivial factor is always present");
    let (partition, gens) = sets[i].clone();
    Ok(BestFactor {
        factor: PolynomialFactor {
            polys: gens.iter().map(|&j| polys[j].clone()).collect(),
            partition,
        },
        residual,
        factors_searched: sets.len(),
    })
}
