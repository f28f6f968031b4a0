//! Simple binary matroids, i.e. `{0,1}`-valued functions on the points of a
//! binary projective space `PG(n-1, 2) = F_2^n \ {0}`, and the machinery
//! around hereditary properties of them.
//!
//! * [`gf2`]: packed vectors, canonical subspaces, linear injections and
//!   rooted subspace packings.
//! * [`matroid`]: matroids, `{0,1,*}` patterns, restriction, isomorphism,
//!   instance search, densities, critical numbers and extensions.
//! * [`property`]: locally characterized properties `Forb(N)`, exact censuses
//!   and entropies, property critical numbers, `Core^k` membership, matroid
//!   Ramsey certificates and free-extension counting.
//! * [`fourier`]: nonclassical polynomials over `F_2^n`, polynomial factors,
//!   conditional expectations, Gowers norms, binary entropy and
//!   `f`-structured matroids.
//! * [`cli`]: the `binmat` experiment driver.
//!
//! Exact quantities use arbitrary precision integers and rationals; floats
//! only appear in entropies, Gowers norms and Monte-Carlo estimates.

pub mod cli;
pub mod error;
pub mod fourier;
pub mod gf2;
pub mod matroid;
pub mod property;

pub use error::{Error, Result};
pub use gf2::{GF2Vector, LinearMap, Subspace};
pub use matroid::{Cell, Matroid, Pattern, RealFunction};
pub use property::{CensusRow, LocalProperty};
