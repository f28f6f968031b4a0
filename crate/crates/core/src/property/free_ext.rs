use num_bigint::BigUint;
use serde::Serialize;

use super::decimal;
use super::engine::Engine;
use crate::gf2::{num_points, pow2, Subspace};
use crate::matroid::{find_instance, restrict, Matroid, MAX_EXTENSION_FREE_POINTS};
use crate::{Error, Result};

/// Exact count of `N'`-free extensions of `M`, next to the bound
/// `2^(2^n (1 - 2^-k - eps))` with `eps = 2^-(2^(d+1))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeExtensionReport {
    /// Ambient dimension of the extensions.
    pub n: usize,
    /// Codimension of `V(M)` in the ambient space.
    pub k: usize,
    /// Dimension of `N'`.
    pub d: usize,
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    #[serde(serialize_with = "decimal")]
    pub total: BigUint,
    pub epsilon: f64,
    /// `2^n - 2^(n-k) - 2^(n - 2^(d+1))`.
    pub bound_log2: f64,
    /// Whether the exponent is an integer and the comparison was done on
    /// integers.
    pub exact_comparison: bool,
    pub bound_holds: bool,
    /// `n >= d >= k >= 1` and `M` contains an instance of `N'` restricted to
    /// its first `d - k` coordinates, so that `N'` is an extension of that
    /// restriction by `k` dimensions.
    pub hypotheses_hold: bool,
}

/// Count the extensions of `M` to dimension `n` (with `M` on the first
/// `dim M` coordinates) that contain no instance of `N'`.
pub fn count_free_extensions(m: &Matroid, n: usize, np: &Matroid) -> Result<FreeExtensionReport> {
    if n < m.dim() {
        return Err(Error::invalid(format!(
            "cannot extend a dimension-{} matroid to dimension {n}",
            m.dim()
        )));
    }
    let k = n - m.dim();
    let d = np.dim();
    let free = num_points(n) - num_points(m.dim());
    if free > MAX_EXTENSION_FREE_POINTS {
        return Err(Error::budget(
            "free extension count",
            format!("{free} free points"),
            MAX_EXTENSION_FREE_POINTS,
        ));
    }
    let engine = Engine::new(n, &[np.to_pattern()])?;
    let prefix: Vec<bool> = (1..=m.num_points() as u32).map(|x| m.get(x)).collect();
    let count = BigUint::from(engine.count(&prefix)?);

    let hypotheses_hold = n >= d && d >= k && k >= 1 && {
        let base = restrict(np, &Subspace::coordinate(d, d - k)?)?;
        find_instance(&base, m).is_some()
    };

    let epsilon = 2f64.powf(-(2f64.powi(d as i32 + 1)));
    let tail = n as f64 - 2f64.powi(d as i32 + 1);
    let bound_log2 = 2f64.powi(n as i32) - 2f64.powi((n - k) as i32) - 2f64.powf(tail);
    let exact_comparison = tail >= 0.0;
    let bound_holds = if exact_comparison {
        let e = (1u64 << n) - (1u64 << (n - k)) - (1u64 << tail as u32);
        count <= pow2(e as usize)
    } else {
        // the count is at most 2^25, so it and 2^bound_log2 are exact enough
        let c: f64 = count.to_string().parse().expect("decimal");
        c <= 2f64.powf(bound_log2)
    };
    Ok(FreeExtensionReport {
        n,
        k,
        d,
        count,
        total: pow2(free as usize),
        epsilon,
        bound_log2,
        exact_comparison,
        bound_holds,
        hypotheses_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::extensions;

    fn brute(m: &Matroid, n: usize, np: &Matroid) -> usize {
        extensions(m, n - m.dim(), true)
            .unwrap()
            .iter()
            .filter(|e| find_instance(np, *e).is_none())
            .count()
    }

    #[test]
    fn example_point() {
        let r = count_free_extensions(&Matroid::ones(1).unwrap(), 2, &Matroid::ones(2).unwrap()).unwrap();
        assert_eq!(r.count, BigUint::from(3u32));
        assert_eq!(r.total, BigUint::from(4u32));
        assert!(r.hypotheses_hold);
        assert!(r.bound_holds);
    }

    #[test]
    fn vacuous_when_pattern_too_big() {
        let r = count_free_extensions(&Matroid::zeros(1).unwrap(), 2, &Matroid::ones(3).unwrap()).unwrap();
        assert_eq!(r.count, r.total);
        assert!(!r.hypotheses_hold);
    }

    #[test]
    fn matches_enumeration() {
        let m = Matroid::from_mask(2, 0b011).unwrap();
        for mask in (0..128).step_by(9) {
            let np = Matroid::from_mask(3, mask).unwrap();
            let r = count_free_extensions(&m, 3, &np).unwrap();
            assert_eq!(r.count, BigUint::from(brute(&m, 3, &np)));
            if r.hypotheses_hold {
                assert!(r.bound_holds, "{np}");
            }
        }
        assert!(count_free_extensions(&m, 1, &m).is_err());
        assert!(count_free_extensions(&m, 5, &m).unwrap_err().is_budget());
    }
}
