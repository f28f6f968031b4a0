use super::{Subspace, MAX_DIM};
use crate::{Error, Result};

/// Largest number of candidate sections enumerated by the packing search.
const MAX_CANDIDATE_BITS: usize = 24;

/// Every `d`-dimensional `U'` with `U ⊆ U'` and `U' ∩ W = U`, where
/// `d = v_dim - dim W + dim U`, sorted in canonical subspace order.
///
/// Such a `U'` maps isomorphically onto `V / W`, so it is `U` plus the graph
/// of a linear map from a fixed complement `C` of `W` into a fixed complement
/// `K` of `U` inside `W`. Each map gives a distinct candidate.
pub fn rooted_packing_candidates(u: &Subspace, w: &Subspace, v_dim: usize) -> Result<Vec<Subspace>> {
    check_nested(u, w, v_dim)?;
    let whole = Subspace::whole(v_dim)?;
    let c = w.complement_in(&whole);
    let k = u.complement_in(w);
    let bits = c.len() * k.len();
    if bits > MAX_CANDIDATE_BITS {
        return Err(Error::budget(
            "rooted packing candidates",
            format!("2^{bits}"),
            format!("2^{MAX_CANDIDATE_BITS}"),
        ));
    }
    let mut out = Vec::with_capacity(1 << bits);
    for a in 0u64..(1u64 << bits) {
        let mut gens: Vec<u32> = u.basis().to_vec();
        for (j, &cj) in c.iter().enumerate() {
            let mut g = cj;
            for (l, &kl) in k.iter().enumerate() {
                if a >> (j * k.len() + l) & 1 == 1 {
                    g ^= kl;
                }
            }
            gens.push(g);
        }
        out.push(Subspace::span(v_dim, gens)?);
    }
    out.sort_unstable();
    Ok(out)
}

/// A maximal family `U_1, ..., U_m` of `d`-dimensional subspaces of
/// `F_2^{v_dim}` with `U_i ∩ W = U` and `U_i ∩ U_j = U` for `i != j`, built
/// greedily over the candidates in canonical order. Maximality forces
/// `m >= 2^{v_dim - 2d}` (see [`packing_bound_holds`]).
pub fn rooted_subspace_packing(u: &Subspace, w: &Subspace, v_dim: usize) -> Result<Vec<Subspace>> {
    let mut family: Vec<Subspace> = Vec::new();
    for cand in rooted_packing_candidates(u, w, v_dim)? {
        let mut ok = true;
        for member in &family {
            if member.intersection(&cand)? != *u {
                ok = false;
                break;
            }
        }
        if ok {
            family.push(cand);
        }
    }
    Ok(family)
}

/// `m >= 2^{v_dim - 2d}`, compared exactly as `m * 2^{2d} >= 2^{v_dim}`.
pub fn packing_bound_holds(m: usize, v_dim: usize, d: usize) -> bool {
    let lhs = num_bigint::BigUint::from(m) << (2 * d);
    lhs >= super::pow2(v_dim)
}

fn check_nested(u: &Subspace, w: &Subspace, v_dim: usize) -> Result<()> {
    if v_dim > MAX_DIM {
        return Err(Error::invalid(format!("ambient dimension {v_dim} too large")));
    }
    if u.ambient_dim() != v_dim || w.ambient_dim() != v_dim {
        return Err(Error::NotNested(format!("U and W must live in F_2^{v_dim}")));
    }
    if !u.is_subspace_of(w) {
        return Err(Error::NotNested(format!("{u} is not contained in {w}")));
    }
    Ok(())
}
