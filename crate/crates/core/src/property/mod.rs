//! Hereditary properties given by finitely many forbidden patterns,
//! `Forb(N) = { M : M has no N-instance for every N in N }`.
//!
//! Counts are labeled: `|P^n|` counts tables on the fixed space `F_2^n`, so
//! `h(n, Forb()) = 2^n - 1`.

mod core_set;
mod critical;
mod engine;
mod free_ext;
mod ramsey;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::gf2::{num_points, pow2};
use crate::matroid::{find_instance, Matroid, Pattern};
use crate::{Error, Result};

pub use core_set::{core_membership, core_refutation, CoreVerdict};
pub use critical::{property_critical_number, CriticalNumberReport};
pub use engine::MAX_ENGINE_DIM;
pub use free_ext::{count_free_extensions, FreeExtensionReport};
pub use ramsey::{
    ramsey_dimension, verify_ramsey, RamseyOutcome, RamseyTranscript, RamseyVerification, RefutationLeaf,
};

use engine::Engine;

/// Largest dimension for exhaustive censuses.
pub const MAX_CENSUS_DIM: usize = 5;

/// `Forb(forbidden)`, with a label for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalProperty {
    pub name: String,
    pub forbidden: Vec<Pattern>,
}

impl LocalProperty {
    pub fn new(name: impl Into<String>, forbidden: Vec<Pattern>) -> Self {
        LocalProperty {
            name: name.into(),
            forbidden,
        }
    }

    /// `Forb()`: every matroid.
    pub fn everything() -> Self {
        Self::new("all", Vec::new())
    }

    /// Forbid one more pattern.
    pub fn and_forbid(&self, p: Pattern) -> Self {
        let name = format!("{}+{}", self.name, p.table_string());
        let mut forbidden = self.forbidden.clone();
        forbidden.push(p);
        Self::new(name, forbidden)
    }
}

/// `M ∈ P`: no forbidden pattern has an instance in `M`.
pub fn contains(p: &LocalProperty, m: &Matroid) -> bool {
    p.forbidden.iter().all(|n| find_instance(n, m).is_none())
}

/// One census line: `|P^n|` and `h(n, P) = log2 |P^n|` (absent when the
/// count is zero).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub n: usize,
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    pub entropy: Option<f64>,
}

impl CensusRow {
    pub fn new(n: usize, count: BigUint) -> Self {
        let entropy = log2(&count);
        CensusRow { n, count, entropy }
    }
}

pub(crate) fn decimal<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `log2(x)` for a positive big integer, `None` for zero.
pub fn log2(x: &BigUint) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return Some(x.to_f64().expect("finite below 2^1000").log2());
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    Some(top.log2() + shift as f64)
}

fn check_census_dim(n: usize) -> Result<()> {
    if n > MAX_CENSUS_DIM {
        return Err(Error::budget(
            "exhaustive census (use sampling instead)",
            format!("dimension {n}"),
            MAX_CENSUS_DIM,
        ));
    }
    Ok(())
}

/// Exact `|P^n|` by pruned point-by-point enumeration.
pub fn census(p: &LocalProperty, n: usize) -> Result<CensusRow> {
    check_census_dim(n)?;
    let count = Engine::new(n, &p.forbidden)?.count(&[])?;
    Ok(CensusRow::new(n, BigUint::from(count)))
}

/// The zero matroid of dimension `d`, as a pattern.
pub fn zeros_pattern(d: usize) -> Result<Pattern> {
    Ok(Matroid::zeros(d)?.to_pattern())
}

/// The all-ones matroid of dimension `d`, as a pattern.
pub fn ones_pattern(d: usize) -> Result<Pattern> {
    Ok(Matroid::ones(d)?.to_pattern())
}

/// Exact number of dimension-`n` matroids with critical number at most `k`
/// (side 0) or co-critical number at most `k` (side 1). Such a matroid is
/// exactly one containing an `O_{n-k}` (resp. `I_{n-k}`) instance, so the
/// count is `2^(2^n - 1) - |Forb(O_{n-k})^n|`.
pub fn count_critical_at_most(n: usize, k: usize, side: u8) -> Result<BigUint> {
    check_census_dim(n)?;
    let all = pow2(num_points(n) as usize);
    if k >= n {
        return Ok(all);
    }
    let pat = side_pattern(n - k, side)?;
    let free = Engine::new(n, &[pat])?.count(&[])?;
    Ok(all - BigUint::from(free))
}

fn side_pattern(d: usize, side: u8) -> Result<Pattern> {
    match side {
        0 => zeros_pattern(d),
        1 => ones_pattern(d),
        _ => Err(Error::invalid(format!("side must be 0 or 1, got {side}"))),
    }
}

/// Both sides of `h(n-k, O) + (1 - 2^-k) 2^n <= h(n, M(k,0)) <= h(n-k, O) + (1 - 2^-k) 2^n + kn`
/// as exact integer comparisons. Here `O` has one member per dimension, so
/// the bounds are `2^(2^n - 2^(n-k))` and `2^(2^n - 2^(n-k) + kn)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichCheck {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    pub entropy: f64,
    pub lower_exponent: u64,
    pub upper_exponent: u64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

pub fn entropy_sandwich(n: usize, k: usize) -> Result<SandwichCheck> {
    if k > n {
        return Err(Error::invalid(format!("sandwich needs k <= n, got k={k}, n={n}")));
    }
    let count = count_critical_at_most(n, k, 0)?;
    let lower_exponent = (1u64 << n) - (1u64 << (n - k));
    let upper_exponent = lower_exponent + (k * n) as u64;
    Ok(SandwichCheck {
        n,
        k,
        entropy: log2(&count).expect("the zero matroid is always counted"),
        lower_holds: count >= pow2(lower_exponent as usize),
        upper_holds: count <= pow2(upper_exponent as usize),
        count,
        lower_exponent,
        upper_exponent,
    })
}

/// `|{M ∈ P^n : χ(M) <= k}| / |P^n|` (side 0), or the same with the
/// co-critical number (side 1).
pub fn typical_structure_fraction(p: &LocalProperty, n: usize, k: usize, side: u8) -> Result<BigRational> {
    check_census_dim(n)?;
    let total = Engine::new(n, &p.forbidden)?.count(&[])?;
    if total == 0 {
        return Err(Error::invalid(format!("{} has no members of dimension {n}", p.name)));
    }
    let pat = side_pattern(n.saturating_sub(k), side)?;
    let mut forbidden = p.forbidden.clone();
    forbidden.push(pat);
    let unstructured = Engine::new(n, &forbidden)?.count(&[])?;
    Ok(BigRational::new(
        BigInt::from(total - unstructured),
        BigInt::from(total),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{critical_number, PointTable};

    fn o2() -> Pattern {
        zeros_pattern(2).unwrap()
    }

    #[test]
    fn membership_examples() {
        let m = Matroid::from_fn(3, |x| x >= 4).unwrap();
        assert!(contains(&LocalProperty::everything(), &m));
        let no_ones = LocalProperty::new("I1", vec![ones_pattern(1).unwrap()]);
        assert!(contains(&no_ones, &Matroid::zeros(3).unwrap()));
        assert!(!contains(&no_ones, &m));
        assert!(!contains(&LocalProperty::new("O2", vec![o2()]), &m));
    }

    #[test]
    fn census_examples() {
        for n in 0..=4 {
            let row = census(&LocalProperty::everything(), n).unwrap();
            assert_eq!(row.count, pow2(num_points(n) as usize));
            let row = census(&LocalProperty::new("I1", vec![ones_pattern(1).unwrap()]), n).unwrap();
            assert_eq!(row.count, BigUint::from(1u32));
            assert_eq!(row.entropy, Some(0.0));
        }
        let row = census(&LocalProperty::new("O2", vec![o2()]), 2).unwrap();
        assert_eq!(row.count, BigUint::from(7u32));
        assert!(census(&LocalProperty::everything(), 6).unwrap_err().is_budget());
        let json = serde_json::to_string(&row).unwrap();
        assert_eq!(json, r#"{"n":2,"count":"7","entropy":2.807354922057604}"#);
    }

    #[test]
    fn census_matches_membership_at_dim3() {
        let props = [
            LocalProperty::new("O2", vec![o2()]),
            LocalProperty::new("BB12", vec![crate::matroid::bose_burton(1, 2).unwrap()]),
            LocalProperty::new("mix", vec![Matroid::from_mask(2, 0b001).unwrap().to_pattern()]),
        ];
        for p in &props {
            let brute = (0..128)
                .filter(|&mask| contains(p, &Matroid::from_mask(3, mask).unwrap()))
                .count();
            assert_eq!(census(p, 3).unwrap().count, BigUint::from(brute));
        }
    }

    #[test]
    fn critical_counts_match_brute_force() {
        for n in 0..=4usize {
            for k in 0..=n {
                let brute = (0..1u64 << num_points(n))
                    .filter(|&mask| critical_number(&Matroid::from_mask(n, mask).unwrap()) <= k)
                    .count();
                assert_eq!(count_critical_at_most(n, k, 0).unwrap(), BigUint::from(brute));
                assert_eq!(count_critical_at_most(n, k, 1).unwrap(), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn sandwich_small() {
        for n in 1..=4 {
            for k in 1..=n.min(2) {
                let s = entropy_sandwich(n, k).unwrap();
                assert!(s.lower_holds && s.upper_holds, "n={n} k={k}");
            }
        }
        assert!(entropy_sandwich(1, 2).is_err());
    }

    #[test]
    fn structure_fraction_examples() {
        let one = BigRational::from_integer(1.into());
        assert_eq!(
            typical_structure_fraction(&LocalProperty::everything(), 3, 3, 0).unwrap(),
            one
        );
        let no_ones = LocalProperty::new("I1", vec![ones_pattern(1).unwrap()]);
        assert_eq!(typical_structure_fraction(&no_ones, 3, 0, 0).unwrap(), one);
        let p = LocalProperty::new("O2", vec![o2()]);
        let brute_total = (0..128)
            .filter(|&m| contains(&p, &Matroid::from_mask(3, m).unwrap()))
            .count();
        let brute_hit = (0..128)
            .map(|m| Matroid::from_mask(3, m).unwrap())
            .filter(|m| contains(&p, m) && crate::matroid::co_critical_number(m) <= 1)
            .count();
        assert_eq!(
            typical_structure_fraction(&p, 3, 1, 1).unwrap(),
            BigRational::new(brute_hit.into(), brute_total.into())
        );
    }

    #[test]
    fn log2_of_big_numbers() {
        assert_eq!(log2(&BigUint::from(0u32)), None);
        assert_eq!(log2(&BigUint::from(8u32)), Some(3.0));
        assert!((log2(&pow2(5000)).unwrap() - 5000.0).abs() < 1e-9);
    }
}
