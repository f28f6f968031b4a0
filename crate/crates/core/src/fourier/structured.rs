//! Binary entropy and `f`-structured matroids: Boolean tables whose average
//! over each level set `f^-1(a)` equals `a`.

use num_bigint::BigUint;
use num_integer::binomial;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::matroid::{Matroid, PointTable, RealFunction};
use crate::{Error, Result};

/// Level values are snapped to fractions with at most this denominator.
pub const MAX_LEVEL_DENOMINATOR: u64 = 1 << 20;

/// Default cap on the number of structured matroids enumerated.
pub const DEFAULT_STRUCTURED_BUDGET: u64 = 1_000_000;

/// `h(x) = -x log2 x - (1 - x) log2 (1 - x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("binary entropy of {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// `H(f) = sum_x h(f(x))`.
pub fn function_entropy(f: &RealFunction) -> f64 {
    f.values()
        .iter()
        .map(|&v| binary_entropy(v).expect("values lie in [0, 1]"))
        .sum()
}

/// The closest fraction to `x` with denominator at most
/// [`MAX_LEVEL_DENOMINATOR`], from the continued fraction expansion.
pub fn snap_to_rational(x: f64) -> Ratio<u64> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        let a_int = a as u64;
        let p2 = a_int.saturating_mul(p1).saturating_add(p0);
        let q2 = a_int.saturating_mul(q1).saturating_add(q0);
        if q2 > MAX_LEVEL_DENOMINATOR {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    // the semiconvergent with the largest allowed denominator can be closer
    let k = (MAX_LEVEL_DENOMINATOR - q0) / q1;
    let semi = Ratio::new(p0 + k * p1, q0 + k * q1);
    let conv = Ratio::new(p1, q1);
    let err = |r: &Ratio<u64>| (r.to_f64().expect("finite") - x).abs();
    if k > 0 && err(&semi) < err(&conv) {
        semi
    } else {
        conv
    }
}

/// One level set of `f`: its exact value and its points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub value: String,
    #[serde(skip)]
    pub ratio: Ratio<u64>,
    pub points: Vec<u32>,
    /// `value * |points|` when it is an integer.
    pub ones: Option<u64>,
}

/// Level sets of `f`, in increasing order of value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Levels {
    pub levels: Vec<Level>,
    /// Some value was not exactly a fraction with small denominator.
    pub snapped: bool,
}

pub fn levels(f: &RealFunction) -> Levels {
    let mut snapped = false;
    let mut map: std::collections::BTreeMap<Ratio<u64>, Vec<u32>> = Default::default();
    for x in 1..=f.num_points() as u32 {
        let v = f.value(x);
        let r = snap_to_rational(v);
        if r.to_f64().expect("finite") != v {
            snapped = true;
        }
        map.entry(r).or_default().push(x);
    }
    let levels = map
        .into_iter()
        .map(|(ratio, points)| {
            let total = ratio * Ratio::from_integer(points.len() as u64);
            Level {
                value: ratio.to_string(),
                ratio,
                ones: total.is_integer().then(|| total.to_integer()),
                points,
            }
        })
        .collect();
    Levels { levels, snapped }
}

/// `|M(f)| = prod_a binomial(|f^-1(a)|, a |f^-1(a)|)`, or 0 if some level
/// count is fractional.
pub fn structured_count(f: &RealFunction) -> BigUint {
    let mut count = BigUint::one();
    for l in levels(f).levels {
        match l.ones {
            Some(k) => count *= binomial(BigUint::from(l.points.len()), BigUint::from(k)),
            None => return BigUint::from(0u32),
        }
    }
    count
}

/// Whether `M` has exactly `a |f^-1(a)|` ones on every level set `f^-1(a)`.
pub fn is_structured(m: &Matroid, f: &RealFunction) -> bool {
    m.dim() == f.dim()
        && levels(f).levels.iter().all(|l| {
            let ones = l.points.iter().filter(|&&x| m.get(x)).count() as u64;
            l.ones == Some(ones)
        })
}

/// Advance `c` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every `f`-structured matroid, at most `budget` of them. The order is
/// lexicographic in the chosen subsets, first level varying slowest.
pub fn enumerate_structured(f: &RealFunction, budget: u64) -> Result<Vec<Matroid>> {
    let count = structured_count(f);
    if count > BigUint::from(budget) {
        return Err(Error::budget("structured matroids", count, budget));
    }
    let lv = levels(f).levels;
    if lv.iter().any(|l| l.ones.is_none()) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut current = Matroid::zeros(f.dim())?;
    fill(&lv, 0, &mut current, &mut out);
    Ok(out)
}

fn fill(lv: &[Level], i: usize, m: &mut Matroid, out: &mut Vec<Matroid>) {
    let Some(l) = lv.get(i) else {
        out.push(m.clone());
        return;
    };
    let k = l.ones.expect("integral levels only") as usize;
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        for &j in &c {
            m.set(l.points[j], true);
        }
        fill(lv, i + 1, m, out);
        for &j in &c {
            m.set(l.points[j], false);
        }
        if !next_combination(&mut c, l.points.len()) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!(binary_entropy(1.5).is_err());
        assert!((function_entropy(&RealFunction::constant(3, 0.5).unwrap()) - 7.0).abs() < 1e-12);
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_to_rational(1.0 / 3.0), Ratio::new(1, 3));
        assert_eq!(snap_to_rational(0.75), Ratio::new(3, 4));
        assert_eq!(snap_to_rational(0.0), Ratio::new(0, 1));
        assert_eq!(snap_to_rational(1.0), Ratio::new(1, 1));
        let pi = snap_to_rational(std::f64::consts::PI - 3.0);
        assert!(*pi.denom() <= MAX_LEVEL_DENOMINATOR);
        assert!((pi.to_f64().unwrap() - (std::f64::consts::PI - 3.0)).abs() < 1e-10);
    }

    #[test]
    fn structured_examples() {
        let one = RealFunction::constant(3, 1.0).unwrap();
        assert_eq!(
            enumerate_structured(&one, DEFAULT_STRUCTURED_BUDGET).unwrap(),
            vec![Matroid::ones(3).unwrap()]
        );
        let third = RealFunction::constant(2, 1.0 / 3.0).unwrap();
        let all = enumerate_structured(&third, DEFAULT_STRUCTURED_BUDGET).unwrap();
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|m| m.weight() == 1 && is_structured(m, &third)));
        assert!(3.0 <= function_entropy(&third).exp2());
        // one level of size 3 at value 1/2
        let f = RealFunction::new(2, vec![0.5, 0.5, 0.5]).unwrap();
        assert!(enumerate_structured(&f, DEFAULT_STRUCTURED_BUDGET).unwrap().is_empty());
        assert_eq!(structured_count(&f), BigUint::from(0u32));
        let mut v = vec![0.5; 31];
        v[0] = 1.0;
        assert!(enumerate_structured(&RealFunction::new(5, v).unwrap(), 1000)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let f = RealFunction::new(3, vec![0.5, 0.5, 0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0]).unwrap();
        let all = enumerate_structured(&f, DEFAULT_STRUCTURED_BUDGET).unwrap();
        assert_eq!(BigUint::from(all.len()), structured_count(&f));
        assert_eq!(all.len(), 6);
        for mask in 0..128 {
            let m = Matroid::from_mask(3, mask).unwrap();
            assert_eq!(is_structured(&m, &f), all.contains(&m));
        }
    }
}
