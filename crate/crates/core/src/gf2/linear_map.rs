use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::subspace::insert;
use super::{check_dim, space_size, Subspace};
use crate::{Error, Result};

/// A linear map `F_2^d -> F_2^n` given by the images of the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearMap {
    codomain_dim: usize,
    images: Vec<u32>,
}

impl LinearMap {
    pub fn new(codomain_dim: usize, images: Vec<u32>) -> Result<Self> {
        check_dim(codomain_dim)?;
        check_dim(images.len())?;
        if let Some(&bad) = images.iter().find(|&&v| u64::from(v) >= space_size(codomain_dim)) {
            return Err(Error::invalid(format!("image {bad:#x} outside F_2^{codomain_dim}")));
        }
        Ok(LinearMap { codomain_dim, images })
    }

    /// Like [`LinearMap::new`] but rejects maps that are not injective.
    pub fn injection(codomain_dim: usize, images: Vec<u32>) -> Result<Self> {
        let map = Self::new(codomain_dim, images)?;
        if !map.is_injective() {
            return Err(Error::invalid("basis images are linearly dependent"));
        }
        Ok(map)
    }

    pub(crate) fn from_parts(codomain_dim: usize, images: Vec<u32>) -> Self {
        LinearMap { codomain_dim, images }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap::from_parts(n, (0..n).map(|i| 1u32 << i).collect())
    }

    pub fn domain_dim(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        let mut v = 0;
        let mut rest = x;
        while rest != 0 {
            v ^= self.images[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        v
    }

    /// Images of every vector of the domain, indexed by the vector.
    pub fn table(&self) -> Vec<u32> {
        let mut out = vec![0u32; 1 << self.domain_dim()];
        for (i, &b) in self.images.iter().enumerate() {
            let half = 1usize << i;
            for y in 0..half {
                out[half + y] = out[y] ^ b;
            }
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        let mut by_pivot = [0u32; 32];
        self.images.iter().all(|&v| insert(&mut by_pivot, v))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.codomain_dim != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                found: inner.codomain_dim,
            });
        }
        Ok(LinearMap::from_parts(
            self.codomain_dim,
            inner.images.iter().map(|&v| self.apply(v)).collect(),
        ))
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.codomain_dim, self.images.iter().copied()).expect("images fit the codomain by construction")
    }

    /// A uniformly random injection `F_2^d -> F_2^n`: each basis image is
    /// drawn uniformly from the vectors outside the current span.
    pub fn random_injection<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Self> {
        check_dim(n)?;
        if d > n {
            return Err(Error::invalid(format!("no injections F_2^{d} -> F_2^{n}")));
        }
        let size = space_size(n) as u32;
        let mut by_pivot = [0u32; 32];
        let mut images = Vec::with_capacity(d);
        while images.len() < d {
            let v = rng.gen_range(1..size.max(2));
            if insert(&mut by_pivot, v) {
                images.push(v);
            }
        }
        Ok(LinearMap::from_parts(n, images))
    }

    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::random_injection(n, n, rng)
    }
}

/// `prod_{i<d} (2^n - 2^i)`, the number of injections `F_2^d -> F_2^n`
/// (zero when `d > n`).
pub fn injection_count(d: usize, n: usize) -> BigUint {
    if d > n {
        return BigUint::from(0u32);
    }
    let mut c = BigUint::one();
    for i in 0..d {
        c *= (BigUint::one() << n) - (BigUint::one() << i);
    }
    c
}

/// Visit every injective linear map `F_2^d -> F_2^n` exactly once, as the
/// slice of basis images. Maps come in lexicographic order of the image
/// sequence. Returns the number of maps visited.
///
/// The span of the images chosen so far is tracked as a bitset over
/// `F_2^n`, so the final basis image is read off the complement directly.
pub fn for_each_injection<F: FnMut(&[u32])>(d: usize, n: usize, mut visit: F) -> Result<u64> {
    check_dim(n)?;
    if d > n {
        return Ok(0);
    }
    if n > 26 {
        return Err(Error::budget("injection enumeration", format!("n = {n}"), "n <= 26"));
    }
    if d == 0 {
        visit(&[]);
        return Ok(1);
    }
    let words = (space_size(n) as usize).div_ceil(64);
    let mut span = vec![0u64; words];
    span[0] = 1; // the zero vector
    let mut elems = Vec::with_capacity(1 << d);
    elems.push(0u32);
    let mut images = vec![0u32; d];
    let valid_last = if n >= 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
    let mut count = 0u64;
    descend(
        0,
        d,
        words,
        valid_last,
        &mut span,
        &mut elems,
        &mut images,
        &mut visit,
        &mut count,
    );
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn descend<F: FnMut(&[u32])>(
    level: usize,
    d: usize,
    words: usize,
    valid_last: u64,
    span: &mut [u64],
    elems: &mut Vec<u32>,
    images: &mut [u32],
    visit: &mut F,
    count: &mut u64,
) {
    let last = level + 1 == d;
    for w in 0..words {
        let mut free = !span[w];
        if w + 1 == words {
            free &= valid_last;
        }
        while free != 0 {
            let bit = free.trailing_zeros();
            free &= free - 1;
            let b = (w as u32) * 64 + bit;
            images[level] = b;
            if last {
                *count += 1;
                visit(images);
                continue;
            }
            let base = elems.len();
            for i in 0..base {
                let v = elems[i] ^ b;
                span[(v / 64) as usize] |= 1u64 << (v % 64);
                elems.push(v);
            }
            descend(level + 1, d, words, valid_last, span, elems, images, visit, count);
            for &v in &elems[base..] {
                span[(v / 64) as usize] &= !(1u64 << (v % 64));
            }
            elems.truncate(base);
        }
    }
}

/// Count injections by walking the whole enumeration.
pub fn count_linear_injections(d: usize, n: usize) -> Result<u64> {
    for_each_injection(d, n, |_| {})
}

/// Collected injections. `vacuous` marks the `d > n` case, where no
/// injection exists and density denominators vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injections {
    pub maps: Vec<LinearMap>,
    pub vacuous: bool,
}

/// Cap on materialized injection lists; larger families go through
/// [`for_each_injection`].
pub const MAX_COLLECTED_INJECTIONS: u64 = 1 << 22;

pub fn enumerate_linear_injections(d: usize, n: usize) -> Result<Injections> {
    check_dim(n)?;
    if d > n {
        return Ok(Injections {
            maps: Vec::new(),
            vacuous: true,
        });
    }
    let expected = injection_count(d, n);
    if expected > BigUint::from(MAX_COLLECTED_INJECTIONS) {
        return Err(Error::budget(
            "collected injections",
            expected,
            MAX_COLLECTED_INJECTIONS,
        ));
    }
    let mut maps = Vec::new();
    for_each_injection(d, n, |im| maps.push(LinearMap::from_parts(n, im.to_vec())))?;
    Ok(Injections { maps, vacuous: false })
}
