use super::{compose, find_instance, Matroid};
use crate::gf2::{space_size, LinearMap};
use crate::{Error, Result};

/// Largest dimension accepted by [`canonical_form`].
pub const MAX_CANONICAL_DIM: usize = 5;

/// Cheap `GL(n, 2)` invariants: the weight and the number of lines
/// `{a, b, a + b}` inside the support.
fn invariants(m: &Matroid) -> (u64, u64) {
    let support = m.support();
    let mut triangles = 0u64;
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[i + 1..] {
            let c = a ^ b;
            if c > b && m.get(c) {
                triangles += 1;
            }
        }
    }
    (m.weight(), triangles)
}

/// Whether `M1 = M2 ∘ phi` for some invertible linear `phi`. Matroids of
/// different dimension are never isomorphic.
pub fn is_isomorphic(m1: &Matroid, m2: &Matroid) -> bool {
    if m1.dim() != m2.dim() {
        return false;
    }
    if m1 == m2 {
        return true;
    }
    if invariants(m1) != invariants(m2) {
        return false;
    }
    find_instance(m1, m2).is_some()
}

struct Canon<'a> {
    m: &'a Matroid,
    n: usize,
    total_bits: u32,
    phi: Vec<u32>,
    best: Option<(u64, Vec<u32>)>,
}

impl Canon<'_> {
    fn run(&mut self, level: usize, key: u64) {
        let half = 1usize << level;
        if level == self.n {
            if self.best.as_ref().is_none_or(|(b, _)| key < *b) {
                let images = (0..self.n).map(|i| self.phi[1 << i]).collect();
                self.best = Some((key, images));
            }
            return;
        }
        let filled = (2 * half - 1) as u32;
        let shift = self.total_bits - filled;
        let size = space_size(self.n) as u32;
        let span = &self.phi[..half];
        let mut blocks: Vec<(u64, u32)> = Vec::new();
        for b in 1..size {
            if span.contains(&b) {
                continue;
            }
            let mut block = 0u64;
            for &e in span {
                block = (block << 1) | u64::from(self.m.get(b ^ e));
            }
            blocks.push((block, b));
        }
        let Some(min) = blocks.iter().map(|&(bl, _)| bl).min() else {
            return;
        };
        let prefix = (key << half) | min;
        if let Some((best, _)) = &self.best {
            if prefix > best >> shift {
                return;
            }
        }
        for (block, b) in blocks {
            if block != min {
                continue;
            }
            for y in 0..half {
                self.phi[half + y] = b ^ self.phi[y];
            }
            self.run(level + 1, prefix);
        }
    }
}

/// The lexicographically least table in the `GL(n, 2)` orbit of `M`
/// (reading points in increasing order, `0 < 1`), together with an
/// invertible `phi` such that the form equals `M ∘ phi`.
///
/// Branch and bound over basis images: every level only keeps the images
/// whose newly determined block of points is smallest, and drops prefixes
/// already worse than the best table found.
pub fn canonical_form_with_map(m: &Matroid) -> Result<(Matroid, LinearMap)> {
    let n = m.dim();
    if n > MAX_CANONICAL_DIM {
        return Err(Error::budget(
            "canonical form",
            format!("dimension {n}"),
            MAX_CANONICAL_DIM,
        ));
    }
    if m.is_zero() || m.is_one() {
        return Ok((m.clone(), LinearMap::identity(n)));
    }
    let mut c = Canon {
        m,
        n,
        total_bits: space_size(n) as u32 - 1,
        phi: vec![0; 1 << n],
        best: None,
    };
    c.run(0, 0);
    let (_, images) = c.best.expect("GL(n, 2) is nonempty");
    let phi = LinearMap::new(n, images)?;
    Ok((compose(m, &phi)?, phi))
}

pub fn canonical_form(m: &Matroid) -> Result<Matroid> {
    canonical_form_with_map(m).map(|(c, _)| c)
}
