use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{check_dim, lead, space_size, LinearMap};
use crate::{Error, Result};

/// A linear subspace of `F_2^n` in canonical form: the reduced row-echelon
/// basis with rows sorted by ascending leading bit. Two subspaces are equal
/// iff their basis words are equal, and the derived `Ord` is the canonical
/// subspace order used wherever ties must be broken reproducibly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<u32>,
}

impl Subspace {
    /// The span of `gens` inside `F_2^n`.
    pub fn span(ambient_dim: usize, gens: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_dim(ambient_dim)?;
        let limit = space_size(ambient_dim);
        let mut by_pivot = [0u32; 32];
        for g in gens {
            if u64::from(g) >= limit {
                return Err(Error::invalid(format!("generator {g:#x} outside F_2^{ambient_dim}")));
            }
            insert(&mut by_pivot, g);
        }
        Ok(Self::from_pivot_table(ambient_dim, &mut by_pivot))
    }

    fn from_pivot_table(ambient_dim: usize, by_pivot: &mut [u32; 32]) -> Self {
        for p in 0..32 {
            let mut row = by_pivot[p];
            if row == 0 {
                continue;
            }
            for q in (0..p).rev() {
                if by_pivot[q] != 0 && (row >> q) & 1 == 1 {
                    row ^= by_pivot[q];
                }
            }
            by_pivot[p] = row;
        }
        let basis = by_pivot.iter().copied().filter(|&r| r != 0).collect();
        Subspace { ambient_dim, basis }
    }

    /// Build from a basis that is already canonical. Used by enumerators that
    /// generate reduced echelon forms directly.
    pub(crate) fn from_canonical(ambient_dim: usize, basis: Vec<u32>) -> Self {
        debug_assert!(basis.windows(2).all(|w| lead(w[0]) < lead(w[1])));
        Subspace { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Result<Self> {
        Self::span(ambient_dim, [])
    }

    pub fn whole(ambient_dim: usize) -> Result<Self> {
        Self::coordinate(ambient_dim, ambient_dim)
    }

    /// `span(e_0, ..., e_{d-1})`: the points below `2^d`.
    pub fn coordinate(ambient_dim: usize, d: usize) -> Result<Self> {
        if d > ambient_dim {
            return Err(Error::invalid(format!(
                "coordinate subspace of dimension {d} in F_2^{ambient_dim}"
            )));
        }
        Self::span(ambient_dim, (0..d).map(|i| 1u32 << i))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn contains(&self, v: u32) -> bool {
        self.coordinates(v).is_some()
    }

    /// The coefficient word `y` with `basis_map(y) = v`, if `v` lies in the
    /// subspace. In reduced echelon form `y_i` is just the pivot bit of row `i`.
    pub fn coordinates(&self, v: u32) -> Option<u32> {
        let mut y = 0u32;
        let mut acc = 0u32;
        for (i, &row) in self.basis.iter().enumerate() {
            if (v >> lead(row)) & 1 == 1 {
                y |= 1 << i;
                acc ^= row;
            }
        }
        (acc == v).then_some(y)
    }

    /// `sum_i y_i * basis[i]`.
    #[inline]
    pub fn element(&self, y: u32) -> u32 {
        let mut v = 0;
        let mut rest = y;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            v ^= self.basis[i];
            rest &= rest - 1;
        }
        v
    }

    /// All `2^dim` vectors, zero first, in coefficient order.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = vec![0u32; 1 << self.dim()];
        for (i, &row) in self.basis.iter().enumerate() {
            let half = 1usize << i;
            for y in 0..half {
                out[half + y] = out[y] ^ row;
            }
        }
        out
    }

    /// Nonzero elements, i.e. the projective points of the subspace.
    pub fn points(&self) -> Vec<u32> {
        let mut e = self.elements();
        e.remove(0);
        e
    }

    /// Point membership as a mask with bit `x - 1` set for each point `x`;
    /// only available for ambient dimension at most 6.
    pub fn point_mask(&self) -> Option<u64> {
        if self.ambient_dim > 6 {
            return None;
        }
        Some(self.points().iter().fold(0u64, |m, &x| m | 1u64 << (x - 1)))
    }

    /// The injection `F_2^dim -> F_2^n` sending `e_i` to `basis[i]`.
    pub fn basis_map(&self) -> LinearMap {
        LinearMap::from_parts(self.ambient_dim, self.basis.clone())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|&b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        Subspace::span(self.ambient_dim, self.basis.iter().chain(other.basis.iter()).copied())
    }

    /// Intersection by the Zassenhaus algorithm: reduce the rows `(u | u)`
    /// and `(w | 0)`; rows with a vanishing left half carry a basis of the
    /// intersection in their right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let mut by_pivot = [0u64; 64];
        let rows = self
            .basis
            .iter()
            .map(|&u| (u64::from(u) << 32) | u64::from(u))
            .chain(other.basis.iter().map(|&w| u64::from(w) << 32));
        for mut r in rows {
            while r != 0 {
                let p = 63 - r.leading_zeros() as usize;
                if by_pivot[p] == 0 {
                    by_pivot[p] = r;
                    break;
                }
                r ^= by_pivot[p];
            }
        }
        Subspace::span(
            self.ambient_dim,
            by_pivot[..32].iter().filter(|&&r| r != 0).map(|&r| r as u32),
        )
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Extend the basis of `self` by vectors of `within` until it spans
    /// `within`; returns only the added vectors.
    pub(crate) fn complement_in(&self, within: &Subspace) -> Vec<u32> {
        let mut by_pivot = [0u32; 32];
        for &b in &self.basis {
            insert(&mut by_pivot, b);
        }
        within
            .basis
            .iter()
            .copied()
            .filter(|&w| insert(&mut by_pivot, w))
            .collect()
    }
}

/// Insert `v` into an echelon table keyed by leading bit; returns whether it
/// was independent of the rows already present.
pub(crate) fn insert(by_pivot: &mut [u32; 32], mut v: u32) -> bool {
    while v != 0 {
        let p = lead(v) as usize;
        if by_pivot[p] == 0 {
            by_pivot[p] = v;
            return true;
        }
        v ^= by_pivot[p];
    }
    false
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b:#x}")?;
        }
        write!(f, "> in F_2^{}", self.ambient_dim)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<String>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient_dim,
            basis: self.basis.iter().map(|b| format!("{b:#x}")).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        let words = repr
            .basis
            .iter()
            .map(|w| {
                let digits = w.trim_start_matches("0x");
                u32::from_str_radix(digits, 16).map_err(de::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let dim = words.len();
        let sub = Subspace::span(repr.ambient_dim, words).map_err(de::Error::custom)?;
        if sub.dim() != dim {
            return Err(de::Error::custom("basis words are linearly dependent"));
        }
        Ok(sub)
    }
}

/// Gaussian binomial `[n choose d]_2`.
pub fn gaussian_binomial(n: usize, d: usize) -> BigUint {
    if d > n {
        return BigUint::from(0u32);
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= (BigUint::one() << (n - i)) - 1u32;
        den *= (BigUint::one() << (d - i)) - 1u32;
    }
    num / den
}

/// Every `d`-dimensional subspace of `F_2^n` exactly once, in canonical
/// order. Generated directly as reduced echelon forms: choose the pivot
/// columns, then fill the free entries below each pivot.
pub fn enumerate_subspaces(n: usize, d: usize) -> Result<Vec<Subspace>> {
    check_dim(n)?;
    if d > n {
        return Err(Error::invalid(format!("no {d}-dimensional subspaces of F_2^{n}")));
    }
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(d);
    pivot_sets(n, d, 0, &mut pivots, &mut |pivots| {
        let mut pivot_mask = 0u32;
        for &p in pivots {
            pivot_mask |= 1 << p;
        }
        // free positions per row: below the pivot and not a pivot column
        let free: Vec<Vec<u32>> = pivots
            .iter()
            .map(|&p| (0..p).filter(|q| pivot_mask >> q & 1 == 0).collect())
            .collect();
        let total: usize = free.iter().map(Vec::len).sum();
        for assignment in 0u64..(1u64 << total) {
            let mut bit = 0;
            let basis = pivots
                .iter()
                .zip(&free)
                .map(|(&p, fr)| {
                    let mut row = 1u32 << p;
                    for &q in fr {
                        if assignment >> bit & 1 == 1 {
                            row |= 1 << q;
                        }
                        bit += 1;
                    }
                    row
                })
                .collect();
            out.push(Subspace::from_canonical(n, basis));
        }
    });
    out.sort_unstable();
    Ok(out)
}

fn pivot_sets(n: usize, d: usize, start: u32, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if cur.len() == d {
        f(cur);
        return;
    }
    let remaining = d - cur.len();
    for p in start..=(n - remaining) as u32 {
        cur.push(p);
        pivot_sets(n, d, p + 1, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute force: close every set of `d` generators under span and dedupe.
    fn brute_force_count(n: usize, d: usize) -> usize {
        let mut seen = HashSet::new();
        let size = 1u32 << n;
        let mut gens = vec![0u32; d];
        fn rec(i: usize, size: u32, gens: &mut Vec<u32>, n: usize, d: usize, seen: &mut HashSet<Vec<u32>>) {
            if i == gens.len() {
                let s = Subspace::span(n, gens.iter().copied()).unwrap();
                if s.dim() == d {
                    let mut e = s.elements();
                    e.sort();
                    seen.insert(e);
                }
                return;
            }
            for v in 1..size {
                gens[i] = v;
                rec(i + 1, size, gens, n, d, seen);
            }
        }
        rec(0, size, &mut gens, n, d, &mut seen);
        seen.len()
    }

    #[test]
    fn small_counts_match_brute_force() {
        assert_eq!(brute_force_count(3, 1), 7);
        assert_eq!(brute_force_count(4, 2), 35);
        assert_eq!(enumerate_subspaces(3, 1).unwrap().len(), 7);
        assert_eq!(enumerate_subspaces(4, 2).unwrap().len(), 35);
        for n in 0..=4 {
            assert_eq!(enumerate_subspaces(n, n).unwrap(), vec![Subspace::whole(n).unwrap()]);
        }
        assert!(enumerate_subspaces(2, 3).is_err());
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = Subspace::span(4, [0b0011, 0b0101]).unwrap();
        let b = Subspace::span(4, [0b0110, 0b0011]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[0b0011, 0b0101][..]);
        let all = enumerate_subspaces(4, 2).unwrap();
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        for s in &all {
            assert_eq!(&Subspace::span(4, s.points()).unwrap(), s);
        }
    }

    #[test]
    fn membership_and_coordinates() {
        let s = Subspace::span(4, [0b1001, 0b0110]).unwrap();
        for y in 0..4 {
            let v = s.element(y);
            assert_eq!(s.coordinates(v), Some(y));
        }
        assert!(!s.contains(0b0001));
        assert_eq!(s.elements().len(), 4);
    }

    #[test]
    fn intersection_and_sum() {
        let u = Subspace::span(4, [0b0001, 0b0010]).unwrap();
        let w = Subspace::span(4, [0b0011, 0b0100]).unwrap();
        let i = u.intersection(&w).unwrap();
        assert_eq!(i, Subspace::span(4, [0b0011]).unwrap());
        assert_eq!(u.sum(&w).unwrap().dim(), 3);
        let z = Subspace::zero(4).unwrap();
        assert_eq!(u.intersection(&z).unwrap(), z);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(4, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(3, 1), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(5, 0), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(2, 3), BigUint::from(0u32));
    }

    #[test]
    fn json_uses_hex_words() {
        let s = Subspace::span(3, [0b011, 0b100]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"ambient_dim":3,"basis":["0x3","0x4"]}"#);
        let back: Subspace = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<Subspace>(r#"{"ambient_dim":3,"basis":["0x3","0x3"]}"#).is_err());
    }
}
