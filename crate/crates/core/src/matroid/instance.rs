use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Cell, CellTable, PointTable, RealFunction};
use crate::gf2::{for_each_injection, injection_count, space_size, LinearMap};
use crate::{Error, Result};

/// Backtracking over basis images. After `phi(e_i)` is chosen, the points
/// `x` with top bit `i` get their images `phi(e_i) + phi(x - 2^i)`; the branch
/// is cut as soon as one of them collapses to zero (dependence) or lands on a
/// target cell that disagrees with a non-star source cell. The span doubles
/// with every level, so violations show up early.
struct Search<'a> {
    src: Vec<Cell>,
    tgt: Vec<Cell>,
    d: usize,
    phi: &'a mut Vec<u32>,
}

impl Search<'_> {
    fn new<'a, S: CellTable + ?Sized, T: CellTable + ?Sized>(src: &S, tgt: &T, phi: &'a mut Vec<u32>) -> Search<'a> {
        let d = src.dim();
        let src_cells = (0..space_size(d) as u32)
            .map(|x| if x == 0 { Cell::Star } else { src.cell(x) })
            .collect();
        let tgt_cells = (0..space_size(tgt.dim()) as u32)
            .map(|x| if x == 0 { Cell::Star } else { tgt.cell(x) })
            .collect();
        phi.clear();
        phi.resize(1 << d, 0);
        Search {
            src: src_cells,
            tgt: tgt_cells,
            d,
            phi,
        }
    }

    /// Try `b` as the image of `e_level`; fills `phi` on success.
    #[inline]
    fn place(&mut self, level: usize, b: u32) -> bool {
        let half = 1usize << level;
        for y in 0..half {
            let img = b ^ self.phi[y];
            if img == 0 {
                return false;
            }
            let want = self.src[half + y];
            if want != Cell::Star && self.tgt[img as usize] != want {
                return false;
            }
            self.phi[half + y] = img;
        }
        true
    }

    fn run<F: FnMut(&[u32]) -> ControlFlow<()>>(&mut self, level: usize, visit: &mut F) -> ControlFlow<()> {
        if level == self.d {
            let images: Vec<u32> = (0..self.d).map(|i| self.phi[1 << i]).collect();
            return visit(&images);
        }
        for b in 1..self.tgt.len() as u32 {
            if self.place(level, b) {
                self.run(level + 1, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn search_from<S, T, F>(src: &S, tgt: &T, first: Option<u32>, mut visit: F)
where
    S: CellTable + ?Sized,
    T: CellTable + ?Sized,
    F: FnMut(&[u32]) -> ControlFlow<()>,
{
    if src.dim() > tgt.dim() {
        return;
    }
    let mut phi = Vec::new();
    let mut s = Search::new(src, tgt, &mut phi);
    match first {
        None => {
            let _ = s.run(0, &mut visit);
        }
        Some(b) => {
            if s.d > 0 && (b as usize) < s.tgt.len() && s.place(0, b) {
                let _ = s.run(1, &mut visit);
            }
        }
    }
}

/// An `N`-instance in `M`: a linear injection `phi: V(N) -> V(M)` with
/// `M(phi(x)) = N(x)` wherever `N(x)` is 0 or 1. When the target is itself a
/// pattern, a star target cell never matches a non-star source cell. Returns
/// the first instance in lexicographic order of basis images.
pub fn find_instance<S, T>(n: &S, m: &T) -> Option<LinearMap>
where
    S: CellTable + ?Sized,
    T: CellTable + ?Sized,
{
    let mut found = None;
    search_from(n, m, None, |im| {
        found = Some(LinearMap::new(m.dim(), im.to_vec()).expect("images lie in the target"));
        ControlFlow::Break(())
    });
    found
}

/// Exact number of `N`-instances in `M` (zero when `dim N > dim M`).
pub fn count_instances<S, T>(n: &S, m: &T) -> u64
where
    S: CellTable + ?Sized,
    T: CellTable + ?Sized,
{
    if n.dim() == 0 {
        return 1;
    }
    (1..space_size(m.dim()) as u32)
        .map(|b| count_instances_rooted(n, m, b))
        .sum()
}

/// Instances with `phi(e_0) = first`. Summing over all nonzero `first`
/// gives [`count_instances`]; the subproblems are independent and can be
/// farmed out separately.
pub fn count_instances_rooted<S, T>(n: &S, m: &T, first: u32) -> u64
where
    S: CellTable + ?Sized,
    T: CellTable + ?Sized,
{
    let mut count = 0u64;
    search_from(n, m, Some(first), |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// `t(N, M)`: the fraction of linear injections `V(N) -> V(M)` that are
/// `N`-instances, as an exact rational.
pub fn density<S, T>(n: &S, m: &T) -> Result<BigRational>
where
    S: CellTable + ?Sized,
    T: CellTable + ?Sized,
{
    if n.dim() > m.dim() {
        return Err(Error::invalid(format!(
            "no injections from dimension {} into dimension {}",
            n.dim(),
            m.dim()
        )));
    }
    let count = BigInt::from(count_instances(n, m));
    let total = BigInt::from(injection_count(n.dim(), m.dim()));
    Ok(BigRational::new(count, total))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Sum over every injection.
    Exact,
    /// Average over uniformly sampled injections.
    MonteCarlo { samples: u64, seed: u64 },
}

fn product_at<S: CellTable + ?Sized>(n: &S, f: &RealFunction, table: &[u32]) -> f64 {
    let mut p = 1.0;
    for x in 1..table.len() as u32 {
        let v = f.value(table[x as usize]);
        match n.cell(x) {
            Cell::One => p *= v,
            Cell::Zero => p *= 1.0 - v,
            Cell::Star => {}
        }
    }
    p
}

/// `t(N, f) = E_phi [ prod_{x in N^-1(1)} f(phi x) * prod_{x in N^-1(0)} (1 - f(phi x)) ]`
/// over uniform linear injections `phi: V(N) -> V(f)`.
pub fn density_in_function<S>(n: &S, f: &RealFunction, mode: DensityMode) -> Result<f64>
where
    S: CellTable + ?Sized,
{
    let (d, dim) = (n.dim(), f.dim());
    if d > dim {
        return Err(Error::invalid(format!(
            "no injections from dimension {d} into dimension {dim}"
        )));
    }
    match mode {
        DensityMode::Exact => {
            let mut sum = 0.0;
            let count = for_each_injection(d, dim, |im| {
                let phi = LinearMap::new(dim, im.to_vec()).expect("valid images");
                sum += product_at(n, f, &phi.table());
            })?;
            Ok(sum / count as f64)
        }
        DensityMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("Monte-Carlo density needs at least one sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0.0;
            for _ in 0..samples {
                let phi = LinearMap::random_injection(d, dim, &mut rng)?;
                sum += product_at(n, f, &phi.table());
            }
            Ok(sum / samples as f64)
        }
    }
}
