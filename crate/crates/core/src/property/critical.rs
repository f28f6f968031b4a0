use serde::Serialize;

use super::{contains, LocalProperty};
use crate::matroid::{co_critical_number, critical_number, evaluations, Matroid, Pattern, PointTable};
use crate::{Error, Result};

/// Result of [`property_critical_number`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalNumberReport {
    /// `χ(P)`, the larger of the two sides.
    pub value: usize,
    /// Largest `k` with `M(k, 0) ⊆ P`, or -1 if even the zero matroids are
    /// not all in `P`.
    pub side0: i64,
    /// Largest `k` with `M(k, 1) ⊆ P`, or -1.
    pub side1: i64,
    /// A matroid outside `P` that vanishes on a subspace of codimension
    /// `value + 1`.
    pub witness0: Matroid,
    /// A matroid outside `P` that is identically one on a subspace of
    /// codimension `value + 1`.
    pub witness1: Matroid,
}

/// Smallest critical number (or co-critical number) over the evaluations of
/// `n`, and an evaluation attaining it. Filling every star with 0 (resp. 1)
/// attains it, since turning zeros into ones never lowers the critical
/// number.
fn extreme_evaluation(n: &Pattern, side: u8) -> (usize, Matroid) {
    if side == 0 {
        let m = n.fill_stars(false);
        (critical_number(&m), m)
    } else {
        let m = n.fill_stars(true);
        (co_critical_number(&m), m)
    }
}

/// Pad `m` with ones (side 0) or zeros (side 1) up to dimension `k`, which
/// keeps its instances and raises the relevant critical number by at most
/// the number of added coordinates.
fn pad(m: &Matroid, k: usize, side: u8) -> Result<Matroid> {
    if m.dim() >= k {
        return Ok(m.clone());
    }
    let inside = 1u32 << m.dim();
    Matroid::from_fn(k, |x| if x < inside { m.get(x) } else { side == 0 })
}

/// `χ(P)` for `P = Forb(N)`: the largest `k` with `M(k, 0) ⊆ P` or
/// `M(k, 1) ⊆ P`, where `M(k, 0)` (resp. `M(k, 1)`) collects the matroids
/// vanishing (resp. identically one) on a subspace of codimension at most
/// `k`.
///
/// Both classes are closed under restriction, so `M(k, 0) ⊄ P` is already
/// witnessed in dimension `dim N` for some forbidden `N`, by an evaluation of
/// `N` with critical number at most `k`. The minimum over evaluations is
/// checked against full enumeration whenever the pattern has at most
/// [`crate::matroid::MAX_EVALUATION_STARS`] stars.
pub fn property_critical_number(p: &LocalProperty) -> Result<CriticalNumberReport> {
    if p.forbidden.is_empty() {
        return Err(Error::TrivialProperty(format!(
            "{} forbids nothing, so its critical number is unbounded",
            p.name
        )));
    }
    let mut sides = [(usize::MAX, None), (usize::MAX, None)];
    for n in &p.forbidden {
        let evals = evaluations(n).ok();
        for side in 0..2u8 {
            let (c, m) = extreme_evaluation(n, side);
            if let Some(evals) = &evals {
                let brute = evals
                    .iter()
                    .map(|e| {
                        if side == 0 {
                            critical_number(e)
                        } else {
                            co_critical_number(e)
                        }
                    })
                    .min()
                    .expect("at least one evaluation");
                debug_assert_eq!(brute, c);
                if brute != c {
                    return Err(Error::invalid(
                        "evaluation minimum disagrees with the monotone shortcut",
                    ));
                }
            }
            let slot = &mut sides[side as usize];
            if c < slot.0 {
                *slot = (c, Some(m));
            }
        }
    }
    let side0 = sides[0].0 as i64 - 1;
    let side1 = sides[1].0 as i64 - 1;
    if side0 < 0 && side1 < 0 {
        return Err(Error::TrivialProperty(format!(
            "{} excludes all large zero and all large one matroids, so it has bounded dimension",
            p.name
        )));
    }
    let value = side0.max(side1) as usize;
    let k = value + 1;
    let [(_, w0), (_, w1)] = sides;
    let witness0 = pad(&w0.expect("nonempty forbidden set"), k, 0)?;
    let witness1 = pad(&w1.expect("nonempty forbidden set"), k, 1)?;
    debug_assert!(!contains(p, &witness0) && !contains(p, &witness1));
    Ok(CriticalNumberReport {
        value,
        side0,
        side1,
        witness0,
        witness1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::{ones_pattern, zeros_pattern};

    fn chi(forbidden: Vec<Pattern>) -> Result<CriticalNumberReport> {
        property_critical_number(&LocalProperty::new("test", forbidden))
    }

    fn check_witnesses(r: &CriticalNumberReport, p: &LocalProperty) {
        let k = r.value + 1;
        assert!(!contains(p, &r.witness0) && !contains(p, &r.witness1));
        assert!(r.witness0.dim() >= k && critical_number(&r.witness0) <= k);
        assert!(r.witness1.dim() >= k && co_critical_number(&r.witness1) <= k);
    }

    #[test]
    fn known_values() {
        let r = chi(vec![zeros_pattern(2).unwrap()]).unwrap();
        assert_eq!((r.value, r.side0, r.side1), (1, -1, 1));
        check_witnesses(&r, &LocalProperty::new("O2", vec![zeros_pattern(2).unwrap()]));
        let r = chi(vec![ones_pattern(3).unwrap()]).unwrap();
        assert_eq!((r.value, r.side0, r.side1), (2, 2, -1));
        let r = chi(vec![ones_pattern(1).unwrap()]).unwrap();
        assert_eq!(r.value, 0);
        check_witnesses(&r, &LocalProperty::new("I1", vec![ones_pattern(1).unwrap()]));
    }

    #[test]
    fn trivial_properties_are_rejected() {
        assert!(matches!(chi(vec![]), Err(Error::TrivialProperty(_))));
        let both = vec![zeros_pattern(2).unwrap(), ones_pattern(2).unwrap()];
        assert!(matches!(chi(both), Err(Error::TrivialProperty(_))));
    }

    #[test]
    fn certification_in_small_dimensions() {
        // M(k, 0) ⊆ P exactly when no matroid of dimension <= 4 with critical
        // number <= k is excluded, for patterns of dimension <= 2.
        let pats = [
            Matroid::from_mask(2, 0b001).unwrap().to_pattern(),
            Matroid::from_mask(2, 0b011).unwrap().to_pattern(),
            crate::matroid::bose_burton(1, 2).unwrap(),
        ];
        for pat in pats {
            let p = LocalProperty::new("x", vec![pat.clone()]);
            let r = property_critical_number(&p).unwrap();
            for side in 0..2u8 {
                let claimed = if side == 0 { r.side0 } else { r.side1 };
                let brute = (0..=3i64)
                    .take_while(|&k| {
                        (0..=3usize).all(|n| {
                            (0..1u64 << ((1 << n) - 1)).all(|mask| {
                                let m = Matroid::from_mask(n, mask).unwrap();
                                let c = if side == 0 {
                                    critical_number(&m)
                                } else {
                                    co_critical_number(&m)
                                };
                                c as i64 > k || contains(&p, &m)
                            })
                        })
                    })
                    .last()
                    .unwrap_or(-1);
                assert_eq!(claimed, brute, "{pat} side {side}");
            }
        }
    }
}
