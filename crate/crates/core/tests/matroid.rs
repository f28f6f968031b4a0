use binmat::gf2::{injection_count, LinearMap};
use binmat::matroid::{
    bose_burton, canonical_form, canonical_form_with_map, co_critical_number, compose, count_instances,
    critical_number, density, evaluations, extension_count, extensions, find_instance, is_isomorphic, is_k_affine,
    max_monochromatic_subspace, restrict, Cell, Matroid, Pattern, PointTable,
};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

mod common;
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matroid(n: usize) -> impl Strategy<Value = Matroid> {
    let pts = (1u64 << n) - 1;
    (0u64..1 << pts).prop_map(move |mask| Matroid::from_mask(n, mask).unwrap())
}

fn pattern(d: usize) -> impl Strategy<Value = Pattern> {
    let pts = (1usize << d) - 1;
    prop::collection::vec(0u8..3, pts).prop_map(move |cells| {
        let table: String = cells.iter().map(|c| ['0', '1', '*'][*c as usize]).collect();
        Pattern::from_table(d, &table).unwrap()
    })
}

#[test]
fn critical_numbers_of_extremes() {
    for n in 0..=4 {
        assert_eq!(critical_number(&Matroid::zeros(n).unwrap()), 0);
        assert_eq!(critical_number(&Matroid::ones(n).unwrap()), n);
        assert_eq!(co_critical_number(&Matroid::ones(n).unwrap()), 0);
    }
}

#[test]
fn bose_burton_patterns() {
    for d in 1..=4 {
        for k in 0..=d {
            let b = bose_burton(k, d).unwrap();
            assert!(is_k_affine(&b, k));
            assert_eq!(b.star_count(), (1u64 << (d - k)) - 1);
            let evals = evaluations(&b).unwrap();
            assert_eq!(evals.len(), 1 << b.star_count());
            assert!(evals.iter().all(|e| critical_number(e) >= k));
            assert_eq!(critical_number(&b.fill_stars(false)), k);
        }
    }
}

#[test]
fn extensions_restrict_back() {
    let m = Matroid::from_table(2, "101").unwrap();
    for k in 0..=2 {
        let exts = extensions(&m, k, true).unwrap();
        assert_eq!(BigUint::from(exts.len()), extension_count(2, k));
        let w = binmat::gf2::Subspace::coordinate(2 + k, 2).unwrap();
        assert!(exts.iter().all(|e| restrict(e, &w).unwrap() == m));
    }
    assert_eq!(extensions(&m, 2, false).unwrap().len(), 1 + 16 + 4096);
}

#[test]
fn isomorphism_matches_brute_force_at_dim_3() {
    let ms: Vec<Matroid> = (0..128).map(|mask| Matroid::from_mask(3, mask).unwrap()).collect();
    let invertible: Vec<Vec<u32>> = all_tuples(3, 3).filter(|t| independent(t)).collect();
    assert_eq!(invertible.len(), 168);
    let mut classes = std::collections::BTreeSet::new();
    for a in &ms {
        classes.insert(canonical_form(a).unwrap().table_string());
        for b in ms.iter().step_by(7) {
            let brute = invertible
                .iter()
                .any(|t| (1..8).all(|y| a.get(image(t, y)) == b.get(y)));
            assert_eq!(is_isomorphic(a, b), brute);
        }
    }
    // orbits of GL(3,2) on 2-colorings of the Fano plane
    assert_eq!(classes.len(), 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_count_matches_brute(n in pattern(2), m in matroid(3)) {
        prop_assert_eq!(count_instances(&n, &m), brute_instances(&n, &m));
        let d = density(&n, &m).unwrap();
        let expected = BigRational::new(brute_instances(&n, &m).into(), injection_count(2, 3).into());
        prop_assert_eq!(d, expected);
    }

    #[test]
    fn found_instance_is_an_instance(n in pattern(2), m in matroid(4)) {
        match find_instance(&n, &m) {
            None => prop_assert_eq!(count_instances(&n, &m), 0),
            Some(phi) => {
                prop_assert!(phi.is_injective());
                for y in 1..4u32 {
                    if let Some(b) = n.get(y).as_bool() {
                        prop_assert_eq!(m.get(phi.apply(y)), b);
                    }
                }
            }
        }
    }

    #[test]
    fn critical_number_matches_brute(m in matroid(4)) {
        prop_assert_eq!(critical_number(&m), brute_critical(&m, false));
        prop_assert_eq!(co_critical_number(&m), brute_critical(&m, true));
        let s = max_monochromatic_subspace(&m, false);
        prop_assert_eq!(s.codim(), critical_number(&m));
        prop_assert!(s.points().iter().all(|&x| !m.get(x)));
    }

    #[test]
    fn canonical_form_is_a_class_invariant(m in matroid(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = LinearMap::random_invertible(4, &mut rng).unwrap();
        let moved = compose(&m, &g).unwrap();
        prop_assert!(is_isomorphic(&m, &moved));
        prop_assert_eq!(canonical_form(&moved).unwrap(), canonical_form(&m).unwrap());
        let (c, phi) = canonical_form_with_map(&m).unwrap();
        prop_assert_eq!(compose(&m, &phi).unwrap(), c);
        prop_assert_eq!(m.weight(), moved.weight());
    }

    #[test]
    fn text_and_json_round_trip(p in pattern(3)) {
        let text = p.to_text();
        prop_assert_eq!(&text.parse::<Pattern>().unwrap(), &p);
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Pattern>(&json).unwrap(), p.clone());
        let filled = p.fill_stars(true);
        prop_assert!((1..8u32).all(|x| p.get(x) == Cell::Star || p.get(x).as_bool() == Some(filled.get(x))));
    }

    #[test]
    fn complement_swaps_critical_numbers(m in matroid(4)) {
        let c = m.complement();
        prop_assert_eq!(critical_number(&c), co_critical_number(&m));
        prop_assert_eq!(Matroid::from_fn(4, |x| m.get(x)).unwrap(), m);
    }
}
