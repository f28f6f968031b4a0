use super::{Cell, Matroid, Pattern, PointTable};
use crate::gf2::{num_points, Subspace};
use crate::{Error, Result};

/// Most stars accepted by [`evaluations`].
pub const MAX_EVALUATION_STARS: u64 = 20;

/// `BB_{k,d}`: stars on the coordinate subspace `span(e_0, ..., e_{d-k-1})`,
/// ones everywhere else.
pub fn bose_burton(k: usize, d: usize) -> Result<Pattern> {
    if k > d {
        return Err(Error::invalid(format!(
            "Bose-Burton pattern needs k <= d, got k={k}, d={d}"
        )));
    }
    let w = 1u32 << (d - k);
    Pattern::from_fn(d, |x| if x < w { Cell::Star } else { Cell::One })
}

/// Whether the stars of `A`, together with zero, form a subspace of
/// codimension `k`.
pub fn is_k_affine(a: &Pattern, k: usize) -> bool {
    let n = a.dim();
    if k > n {
        return false;
    }
    let stars = a.star_points();
    if stars.len() as u64 != num_points(n - k) {
        return false;
    }
    stars
        .iter()
        .enumerate()
        .all(|(i, &x)| stars[i + 1..].iter().all(|&y| a.get(x ^ y) == Cell::Star))
}

/// Every matroid obtained by filling the stars of `B`, ordered by the binary
/// number formed by the star values (first star is the lowest bit).
pub fn evaluations(b: &Pattern) -> Result<Vec<Matroid>> {
    let stars = b.star_points();
    if stars.len() as u64 > MAX_EVALUATION_STARS {
        return Err(Error::budget(
            "pattern evaluations",
            format!("{} stars", stars.len()),
            MAX_EVALUATION_STARS,
        ));
    }
    let base = b.fill_stars(false);
    Ok((0..1u64 << stars.len())
        .map(|bits| {
            let mut m = base.clone();
            for (i, &x) in stars.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    m.set(x, true);
                }
            }
            m
        })
        .collect())
}

struct MonoSearch<'a> {
    m: &'a Matroid,
    value: bool,
    best: Vec<u32>,
    basis: Vec<u32>,
    span: Vec<u32>,
}

impl MonoSearch<'_> {
    /// `candidates` are the points above the last basis vector that keep the
    /// span monochromatic when added.
    fn run(&mut self, candidates: &[u32]) {
        if self.basis.len() > self.best.len() {
            self.best = self.basis.clone();
        }
        let bound = self.basis.len() + candidates.len().min(self.m.dim() - self.basis.len());
        if bound <= self.best.len() {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            if self.basis.len() + (candidates.len() - i).min(self.m.dim() - self.basis.len()) <= self.best.len() {
                return;
            }
            let old = self.span.len();
            for j in 0..old {
                let w = self.span[j] ^ v;
                self.span.push(w);
            }
            let next: Vec<u32> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&c| {
                    self.span[old..]
                        .iter()
                        .all(|&w| c != w && self.m.get(c ^ w) == self.value)
                })
                .collect();
            self.basis.push(v);
            self.run(&next);
            self.basis.pop();
            self.span.truncate(old);
            if self.best.len() == self.m.dim() {
                return;
            }
        }
    }
}

/// A largest subspace all of whose points carry `value`. Searches bases in
/// increasing order; every subspace has such a basis.
pub fn max_monochromatic_subspace(m: &Matroid, value: bool) -> Subspace {
    let candidates: Vec<u32> = (1..=m.num_points() as u32).filter(|&x| m.get(x) == value).collect();
    let mut s = MonoSearch {
        m,
        value,
        best: Vec::new(),
        basis: Vec::new(),
        span: vec![0],
    };
    s.run(&candidates);
    Subspace::span(m.dim(), s.best).expect("basis of points in the ambient space")
}

/// Least codimension of a subspace on which `M` vanishes.
pub fn critical_number(m: &Matroid) -> usize {
    max_monochromatic_subspace(m, false).codim()
}

/// Least codimension of a subspace on which `M` is identically one, i.e. the
/// critical number of the complement.
pub fn co_critical_number(m: &Matroid) -> usize {
    max_monochromatic_subspace(m, true).codim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::enumerate_subspaces;
    use crate::matroid::{find_instance, restrict};

    fn brute_critical(m: &Matroid) -> usize {
        let n = m.dim();
        (0..=n)
            .rev()
            .find(|&d| {
                enumerate_subspaces(n, d)
                    .unwrap()
                    .iter()
                    .any(|w| w.points().iter().all(|&x| !m.get(x)))
            })
            .map(|d| n - d)
            .unwrap()
    }

    #[test]
    fn critical_examples() {
        assert_eq!(critical_number(&Matroid::zeros(3).unwrap()), 0);
        assert_eq!(critical_number(&Matroid::ones(3).unwrap()), 3);
        assert_eq!(critical_number(&Matroid::zeros(0).unwrap()), 0);
        let m = Matroid::from_fn(3, |x| x >= 4).unwrap();
        assert_eq!(critical_number(&m), 1);
        assert_eq!(co_critical_number(&m), 2);
    }

    #[test]
    fn critical_matches_subspace_enumeration() {
        for n in 0..=3 {
            for mask in 0..1u64 << ((1 << n) - 1) {
                let m = Matroid::from_mask(n, mask).unwrap();
                assert_eq!(critical_number(&m), brute_critical(&m));
                assert_eq!(co_critical_number(&m), brute_critical(&m.complement()));
            }
        }
        for mask in (0..1u64 << 15).step_by(37) {
            let m = Matroid::from_mask(4, mask).unwrap();
            assert_eq!(critical_number(&m), brute_critical(&m));
        }
    }

    #[test]
    fn monochromatic_subspace_is_monochromatic() {
        let m = Matroid::from_mask(4, 0b101100111010110).unwrap();
        for value in [false, true] {
            let w = max_monochromatic_subspace(&m, value);
            assert!(w.points().iter().all(|&x| m.get(x) == value));
            assert!(restrict(&m, &w).unwrap().weight() == if value { w.points().len() as u64 } else { 0 });
        }
    }

    #[test]
    fn bose_burton_shapes() {
        let b = bose_burton(1, 2).unwrap();
        assert_eq!(b.get(1), Cell::Star);
        assert_eq!(b.get(2), Cell::One);
        assert_eq!(b.get(3), Cell::One);
        assert_eq!(bose_burton(0, 3).unwrap().star_count(), 7);
        assert_eq!(bose_burton(3, 3).unwrap().to_matroid(), Some(Matroid::ones(3).unwrap()));
        assert!(bose_burton(4, 3).is_err());
        for d in 0..=4 {
            for k in 0..=d {
                assert!(is_k_affine(&bose_burton(k, d).unwrap(), k));
            }
        }
    }

    #[test]
    fn affine_checks() {
        let mut p = Matroid::ones(3).unwrap().to_pattern();
        p.set(1, Cell::Star);
        p.set(2, Cell::Star);
        assert!(!is_k_affine(&p, 1));
        assert!(!is_k_affine(&p, 2));
        let free = Matroid::zeros(3).unwrap().to_pattern();
        for k in 0..=4 {
            assert_eq!(is_k_affine(&free, k), k == 3);
        }
    }

    #[test]
    fn evaluation_counts() {
        let m = Matroid::from_mask(2, 0b101).unwrap();
        assert_eq!(evaluations(&m.to_pattern()).unwrap(), vec![m]);
        let b = bose_burton(1, 2).unwrap();
        let evs = evaluations(&b).unwrap();
        assert_eq!(evs.len(), 2);
        for e in &evs {
            assert_eq!(find_instance(&b, e).unwrap().images(), &[1, 2]);
        }
        let all = evaluations(&Pattern::stars(2).unwrap()).unwrap();
        assert_eq!(all.len(), 8);
        let masks: std::collections::BTreeSet<u64> = all.iter().map(|m| m.mask().unwrap()).collect();
        assert_eq!(masks.len(), 8);
        assert!(evaluations(&Pattern::stars(5).unwrap()).unwrap_err().is_budget());
    }
}
