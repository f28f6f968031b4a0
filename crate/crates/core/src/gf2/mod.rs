//! Linear algebra over `F_2` with vectors packed into a machine word, and
//! enumeration of the projective-geometry substrate: points, subspaces,
//! linear injections and rooted subspace packings.
//!
//! A vector of `F_2^n` is a `u32` whose bit `i` is coordinate `i`; `n` is
//! capped at [`MAX_DIM`]. Points of `PG(n-1, 2)` are the nonzero vectors and
//! are listed in ascending bit order, so point `x` sits at table index
//! `x - 1` everywhere in this crate.

mod linear_map;
mod packing;
mod subspace;

use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use linear_map::{
    count_linear_injections, enumerate_linear_injections, for_each_injection, injection_count, Injections, LinearMap,
    MAX_COLLECTED_INJECTIONS,
};
pub use packing::{packing_bound_holds, rooted_packing_candidates, rooted_subspace_packing};
pub use subspace::{enumerate_subspaces, gaussian_binomial, Subspace};

/// Largest ambient dimension representable by the packed word.
pub const MAX_DIM: usize = 31;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::invalid(format!(
            "ambient dimension {n} exceeds the packed-word cap {MAX_DIM}"
        )));
    }
    Ok(())
}

/// Number of vectors of `F_2^n`, i.e. `2^n`.
#[inline]
pub(crate) fn space_size(n: usize) -> u64 {
    1u64 << n
}

/// Number of points of `PG(n-1, 2)`, i.e. `2^n - 1`.
#[inline]
pub fn num_points(n: usize) -> u64 {
    space_size(n) - 1
}

/// A vector of `F_2^n` together with its ambient dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GF2Vector {
    dim: u8,
    bits: u32,
}

impl GF2Vector {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        check_dim(dim)?;
        if u64::from(bits) >= space_size(dim) {
            return Err(Error::invalid(format!(
                "word {bits:#x} does not fit in dimension {dim}"
            )));
        }
        Ok(GF2Vector { dim: dim as u8, bits })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, 0)
    }

    pub fn unit(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::invalid(format!(
                "coordinate {i} out of range for dimension {dim}"
            )));
        }
        Self::new(dim, 1 << i)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Points of the projective space are exactly the nonzero vectors.
    pub fn is_point(&self) -> bool {
        self.bits != 0
    }

    pub fn coord(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn dot(&self, other: &GF2Vector) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }
}

impl Add for GF2Vector {
    type Output = GF2Vector;

    fn add(self, rhs: GF2Vector) -> GF2Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        GF2Vector {
            dim: self.dim,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            write!(f, "{}", u8::from(self.coord(i)))?;
        }
        Ok(())
    }
}

/// All points of `PG(n-1, 2)` in ascending bit order.
pub fn enumerate_points(n: usize) -> Result<Vec<GF2Vector>> {
    check_dim(n)?;
    Ok((1..space_size(n))
        .map(|b| GF2Vector {
            dim: n as u8,
            bits: b as u32,
        })
        .collect())
}

pub(crate) fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Index of the highest set bit. `v` must be nonzero.
#[inline]
pub(crate) fn lead(v: u32) -> u32 {
    31 - v.leading_zeros()
}
