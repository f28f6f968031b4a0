//! Matroids, patterns and real functions on `PG(n-1, 2)`, and the operations
//! on them: restriction, isomorphism, instance search, densities, critical
//! numbers and extensions.
//!
//! Tables are indexed by point: the value at point `x` (a nonzero word) is
//! stored at index `x - 1`.

mod critical;
mod ext;
mod instance;
mod iso;
mod text;

use serde::{Deserialize, Serialize};

use crate::gf2::{check_dim, num_points, LinearMap, Subspace};
use crate::{Error, Result};

pub use critical::{
    bose_burton, co_critical_number, critical_number, evaluations, is_k_affine, max_monochromatic_subspace,
    MAX_EVALUATION_STARS,
};
pub use ext::{
    ext_membership, extension_count, extensions, sample_extension, sample_matroid, MAX_EXTENSION_FREE_POINTS,
};
pub use instance::{count_instances, count_instances_rooted, density, density_in_function, find_instance, DensityMode};
pub use iso::{canonical_form, canonical_form_with_map, is_isomorphic, MAX_CANONICAL_DIM};

/// Largest dimension for which point tables are materialized.
pub const MAX_TABLE_DIM: usize = 24;

fn check_table_dim(n: usize) -> Result<()> {
    check_dim(n)?;
    if n > MAX_TABLE_DIM {
        return Err(Error::budget("point table", format!("dimension {n}"), MAX_TABLE_DIM));
    }
    Ok(())
}

/// Value of a pattern cell. Matroid cells are never `Star`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Zero,
    One,
    Star,
}

impl Cell {
    pub fn from_bool(b: bool) -> Cell {
        if b {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Cell::Zero => Some(false),
            Cell::One => Some(true),
            Cell::Star => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Star => '*',
        }
    }
}

/// A total function on the points of a binary projective space.
pub trait PointTable: Sized {
    type Value: Copy;

    fn dim(&self) -> usize;

    /// Value at the point `x`, which must be nonzero and below `2^dim`.
    fn value(&self, x: u32) -> Self::Value;

    fn from_fn(dim: usize, f: impl FnMut(u32) -> Self::Value) -> Result<Self>;

    fn num_points(&self) -> u64 {
        num_points(self.dim())
    }
}

/// Tables that can be read as `{0,1,*}` cells; used by instance search.
pub trait CellTable {
    fn dim(&self) -> usize;
    fn cell(&self, x: u32) -> Cell;
}

/// `t ∘ phi` for an injective `phi` into `V(t)`.
pub fn compose<T: PointTable>(t: &T, phi: &LinearMap) -> Result<T> {
    if phi.codomain_dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: phi.codomain_dim(),
        });
    }
    if !phi.is_injective() {
        return Err(Error::invalid("composition requires an injective map"));
    }
    let table = phi.table();
    T::from_fn(phi.domain_dim(), |y| t.value(table[y as usize]))
}

/// `t[W]`: the value at `y` is `t` at the image of `y` under the canonical
/// basis map of `W`.
pub fn restrict<T: PointTable>(t: &T, w: &Subspace) -> Result<T> {
    if w.ambient_dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: w.ambient_dim(),
        });
    }
    compose(t, &w.basis_map())
}

fn words_for(n: usize) -> usize {
    (num_points(n) as usize).div_ceil(64).max(1)
}

#[inline]
fn get_bit(words: &[u64], x: u32) -> bool {
    let i = (x - 1) as usize;
    (words[i / 64] >> (i % 64)) & 1 == 1
}

#[inline]
fn put_bit(words: &mut [u64], x: u32, b: bool) {
    let i = (x - 1) as usize;
    if b {
        words[i / 64] |= 1u64 << (i % 64);
    } else {
        words[i / 64] &= !(1u64 << (i % 64));
    }
}

fn valid_mask(n: usize, word: usize) -> u64 {
    let total = num_points(n) as usize;
    let lo = word * 64;
    if total >= lo + 64 {
        u64::MAX
    } else if total <= lo {
        0
    } else {
        (1u64 << (total - lo)) - 1
    }
}

/// A simple binary matroid: a `{0,1}`-valued function on `F_2^n \ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matroid {
    dim: usize,
    ones: Vec<u64>,
}

impl Matroid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> u64 {
        num_points(self.dim)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_table_dim(dim)?;
        Ok(Matroid {
            dim,
            ones: vec![0; words_for(dim)],
        })
    }

    pub fn ones(dim: usize) -> Result<Self> {
        Self::zeros(dim).map(|m| m.complement())
    }

    /// The matroid of dimension `dim <= 6` whose bit `x - 1` of `mask` is the
    /// value at point `x`.
    pub fn from_mask(dim: usize, mask: u64) -> Result<Self> {
        if dim > 6 {
            return Err(Error::invalid("mask constructor needs dimension at most 6"));
        }
        if mask & !valid_mask(dim, 0) != 0 {
            return Err(Error::invalid(format!("mask {mask:#x} has bits beyond the points")));
        }
        Ok(Matroid { dim, ones: vec![mask] })
    }

    pub fn mask(&self) -> Option<u64> {
        (self.dim <= 6).then(|| self.ones[0])
    }

    pub fn get(&self, x: u32) -> bool {
        get_bit(&self.ones, x)
    }

    pub fn set(&mut self, x: u32, b: bool) {
        put_bit(&mut self.ones, x, b);
    }

    pub fn weight(&self) -> u64 {
        self.ones.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_one(&self) -> bool {
        self.weight() == self.num_points()
    }

    pub fn complement(&self) -> Matroid {
        let ones = self
            .ones
            .iter()
            .enumerate()
            .map(|(i, w)| !w & valid_mask(self.dim, i))
            .collect();
        Matroid { dim: self.dim, ones }
    }

    pub fn to_pattern(&self) -> Pattern {
        Pattern {
            dim: self.dim,
            care: (0..self.ones.len()).map(|i| valid_mask(self.dim, i)).collect(),
            value: self.ones.clone(),
        }
    }

    /// Points carrying value 1, ascending.
    pub fn support(&self) -> Vec<u32> {
        (1..=self.num_points() as u32).filter(|&x| self.get(x)).collect()
    }
}

impl PointTable for Matroid {
    type Value = bool;

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: u32) -> bool {
        self.get(x)
    }

    fn from_fn(dim: usize, mut f: impl FnMut(u32) -> bool) -> Result<Self> {
        let mut m = Matroid::zeros(dim)?;
        for x in 1..=num_points(dim) as u32 {
            if f(x) {
                m.set(x, true);
            }
        }
        Ok(m)
    }
}

impl CellTable for Matroid {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cell(&self, x: u32) -> Cell {
        Cell::from_bool(self.get(x))
    }
}

/// A pattern: a `{0,1,*}`-valued function on `F_2^n \ {0}`. Stored as a
/// "care" bitset (non-star cells) and a value bitset for the cared cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    dim: usize,
    care: Vec<u64>,
    value: Vec<u64>,
}

impl Pattern {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> u64 {
        num_points(self.dim)
    }

    pub fn stars(dim: usize) -> Result<Self> {
        check_table_dim(dim)?;
        Ok(Pattern {
            dim,
            care: vec![0; words_for(dim)],
            value: vec![0; words_for(dim)],
        })
    }

    pub fn get(&self, x: u32) -> Cell {
        if !get_bit(&self.care, x) {
            Cell::Star
        } else {
            Cell::from_bool(get_bit(&self.value, x))
        }
    }

    pub fn set(&mut self, x: u32, c: Cell) {
        match c {
            Cell::Star => {
                put_bit(&mut self.care, x, false);
                put_bit(&mut self.value, x, false);
            }
            Cell::Zero | Cell::One => {
                put_bit(&mut self.care, x, true);
                put_bit(&mut self.value, x, c == Cell::One);
            }
        }
    }

    pub fn star_points(&self) -> Vec<u32> {
        (1..=self.num_points() as u32)
            .filter(|&x| self.get(x) == Cell::Star)
            .collect()
    }

    pub fn star_count(&self) -> u64 {
        self.num_points() - self.care.iter().map(|w| u64::from(w.count_ones())).sum::<u64>()
    }

    /// The matroid with the same table, if the pattern has no stars.
    pub fn to_matroid(&self) -> Option<Matroid> {
        (self.star_count() == 0).then(|| Matroid {
            dim: self.dim,
            ones: self.value.clone(),
        })
    }

    /// Replace every star by `b`.
    pub fn fill_stars(&self, b: bool) -> Matroid {
        let ones = self
            .care
            .iter()
            .zip(&self.value)
            .enumerate()
            .map(|(i, (&c, &v))| if b { (v | !c) & valid_mask(self.dim, i) } else { v & c })
            .collect();
        Matroid { dim: self.dim, ones }
    }
}

impl From<&Matroid> for Pattern {
    fn from(m: &Matroid) -> Pattern {
        m.to_pattern()
    }
}

impl PointTable for Pattern {
    type Value = Cell;

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: u32) -> Cell {
        self.get(x)
    }

    fn from_fn(dim: usize, mut f: impl FnMut(u32) -> Cell) -> Result<Self> {
        let mut p = Pattern::stars(dim)?;
        for x in 1..=num_points(dim) as u32 {
            p.set(x, f(x));
        }
        Ok(p)
    }
}

impl CellTable for Pattern {
    fn dim(&self) -> usize {
        self.dim
    }

    fn cell(&self, x: u32) -> Cell {
        self.get(x)
    }
}

/// A function `V -> [0, 1]` on the points of `PG(n-1, 2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealFunction {
    dim: usize,
    values: Vec<f64>,
}

impl RealFunction {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_points(&self) -> u64 {
        num_points(self.dim)
    }

    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        check_table_dim(dim)?;
        if values.len() as u64 != num_points(dim) {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                num_points(dim),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid(format!("value {v} outside [0, 1]")));
        }
        Ok(RealFunction { dim, values })
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        Self::new(dim, vec![c; num_points(dim) as usize])
    }

    pub fn indicator(m: &Matroid) -> RealFunction {
        RealFunction {
            dim: m.dim,
            values: (1..=m.num_points() as u32)
                .map(|x| if m.get(x) { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl PointTable for RealFunction {
    type Value = f64;

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: u32) -> f64 {
        self.values[(x - 1) as usize]
    }

    fn from_fn(dim: usize, mut f: impl FnMut(u32) -> f64) -> Result<Self> {
        Self::new(dim, (1..=num_points(dim) as u32).map(&mut f).collect())
    }
}
