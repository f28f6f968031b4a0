//! Higher-order Fourier tools at desk scale: exact torus values,
//! nonclassical polynomials and their derivatives, polynomial factors,
//! conditional expectations, Gowers norms, binary entropy and
//! `f`-structured matroids.
//!
//! Functions on the whole of `F_2^n` (zero included) are plain tables of
//! length `2^n` indexed by `x`.

mod factor;
mod gowers;
mod polynomial;
mod structured;
mod torus;

pub use factor::{
    best_factor_search, conditional_expectation, conditional_expectation_f64, count_factors, factor_partition,
    homogeneous_polynomials, BestFactor, FactorCount, Partition, PolynomialFactor, DEFAULT_FACTOR_BUDGET,
    MAX_CANDIDATE_POLYNOMIALS,
};
pub use gowers::{gowers_norm, GowersMode, MAX_GOWERS_LOG_TERMS};
pub use polynomial::{
    derivative, verify_degree, verify_degree_table, DegreeCheck, DegreeMode, NonclassicalPolynomial, Term, TorusTable,
    DEFAULT_DEGREE_BUDGET, MAX_POLY_VARS,
};
pub use structured::{
    binary_entropy, enumerate_structured, function_entropy, is_structured, levels, snap_to_rational, structured_count,
    Level, Levels, DEFAULT_STRUCTURED_BUDGET, MAX_LEVEL_DENOMINATOR,
};
pub use torus::{TorusValue, MAX_TORUS_SHIFT};
