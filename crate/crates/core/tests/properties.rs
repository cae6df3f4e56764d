use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tightbell::symmetry::{canonical_form, orbit_bfs};
use tightbell::{
    coefficients_from_sign, delta, enumerate_three_party, tightness, Budget, Catalog, CoeffTensor, Dyadic,
    LocalSymmetry, Scenario, SignTable, Var,
};

const S3: [usize; 3] = [3, 3, 3];

fn catalog() -> &'static Catalog {
    static CAT: OnceLock<Catalog> = OnceLock::new();
    CAT.get_or_init(|| enumerate_three_party(Budget::default(), false))
}

fn s3() -> Scenario {
    Scenario::three_by_three_by_three()
}

fn tensor(nums: Vec<i64>) -> CoeffTensor {
    CoeffTensor::new(s3(), nums).unwrap()
}

/// Every admissible 3x3x3 tensor, from the orbits of the catalog classes.
fn all_admissible() -> Vec<Vec<i64>> {
    catalog()
        .records
        .iter()
        .flat_map(|r| orbit_bfs(&S3, &r.numerators, true))
        .collect()
}

fn lattice_tensor() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![6 => Just(0i64), 4 => -4i64..=4], 27)
}

fn random_element() -> impl Strategy<Value = LocalSymmetry> {
    any::<u64>().prop_map(|seed| LocalSymmetry::random(&S3, true, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn class_member() -> impl Strategy<Value = Vec<i64>> {
    (0usize..10, random_element()).prop_map(|(c, t)| {
        let recs = &catalog().records;
        t.apply_raw(&S3, &recs[c % recs.len()].numerators)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip_on_admissible(g in class_member()) {
        let g = tensor(g);
        let table = SignTable::from_coefficients(&g);
        prop_assert!(table.is_admissible());
        prop_assert_eq!(coefficients_from_sign(&table).unwrap(), g);
    }

    #[test]
    fn parseval(g in lattice_tensor()) {
        let g = tensor(g);
        let table = SignTable::from_coefficients(&g);
        prop_assert_eq!(
            table.sum_of_squares(),
            Dyadic::new(512 * g.numerators().iter().map(|x| x * x).sum::<i64>(), 4)
        );
    }

    #[test]
    fn admissible_iff_pointwise(g in lattice_tensor()) {
        let g = tensor(g);
        prop_assert_eq!(g.is_admissible(), g.pointwise_delta_structure());
    }

    #[test]
    fn admissible_iff_pointwise_near_solutions(g in class_member(), pos in 0usize..27, v in -4i64..=4) {
        let mut nums = g;
        nums[pos] = v;
        let g = tensor(nums);
        prop_assert_eq!(g.is_admissible(), g.pointwise_delta_structure());
    }

    #[test]
    fn symmetry_preserves_checks(g in lattice_tensor(), t in random_element()) {
        let g = tensor(g);
        let h = g.apply_symmetry(&t).unwrap();
        prop_assert_eq!(g.is_admissible(), h.is_admissible());
        prop_assert_eq!(g.sum_sq(), h.sum_sq());
        prop_assert_eq!(g.norm_conditions().pass, h.norm_conditions().pass);
        prop_assert_eq!(h.apply_symmetry(&t.inverse()).unwrap(), g);
    }

    #[test]
    fn canonical_form_is_orbit_invariant(g in lattice_tensor(), t in random_element()) {
        let g = tensor(g);
        let (c1, o1) = g.canonicalize();
        let (c2, o2) = g.apply_symmetry(&t).unwrap().canonicalize();
        prop_assert_eq!(&c1, &c2);
        prop_assert_eq!(o1, o2);
        prop_assert_eq!(c1.canonicalize().0, c1);
    }

    #[test]
    fn tightness_is_transported(g in class_member(), t in random_element()) {
        let g = tensor(g);
        let a = tightness(&g);
        let b = tightness(&g.apply_symmetry(&t).unwrap());
        prop_assert_eq!(a, b);
        prop_assert!(a.is_facet);
    }

    #[test]
    fn order_two_delta_values(g in class_member(), i in 0usize..3, j in 0usize..3) {
        let table = SignTable::from_coefficients(&tensor(g));
        let d = delta(&table, &[Var::new(0, i), Var::new(1, j)]).unwrap();
        let half = Dyadic::new(1, 1);
        for v in d.values() {
            prop_assert!(v.is_zero() || v.abs() == half || v.is_unit(), "value {}", v);
        }
    }
}

#[test]
fn canonical_consistency_over_catalog() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in &catalog().records {
        for _ in 0..100 {
            let t = LocalSymmetry::random(&S3, true, &mut rng);
            let moved = t.apply_raw(&S3, &r.numerators);
            let (canon, orbit) = canonical_form(&S3, &moved, true);
            assert_eq!(canon, r.numerators);
            assert_eq!(orbit, r.orbit_size);
        }
    }
}

#[test]
fn orbit_sizes_match_closure() {
    for r in &catalog().records {
        assert_eq!(orbit_bfs(&S3, &r.numerators, true).len() as u64, r.orbit_size);
    }
}

#[test]
fn lattice_and_exclusivity_over_every_solution() {
    let all = all_admissible();
    assert_eq!(all.len(), 51_678);
    for nums in &all {
        let g = tensor(nums.clone());
        assert!(g.is_admissible());
        assert!(g.pointwise_delta_structure());
        let nc = g.norm_conditions();
        assert!(nc.pass);
        // Quarter lattice is implied by the storage; exclusivity is not.
        if nums.iter().any(|x| x.abs() == 4) {
            assert_eq!(nums.iter().filter(|&&x| x != 0).count(), 1);
        }
        for party in 0..3 {
            for s in 0..3 {
                assert!(g.order1_delta(party, s).values().all(|v| v.is_zero() || v.is_unit()));
            }
        }
    }
}

#[test]
fn random_three_party_equivalence_ten_thousand() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let recs = &catalog().records;
    let mut admissible = 0;
    for n in 0..10_000 {
        let nums: Vec<i64> = if n % 2 == 0 {
            (0..27)
                .map(|_| if rng.random_bool(0.7) { 0 } else { rng.random_range(-4..=4) })
                .collect()
        } else {
            let r = &recs[rng.random_range(0..recs.len())];
            let t = LocalSymmetry::random(&S3, true, &mut rng);
            let mut nums = t.apply_raw(&S3, &r.numerators);
            if rng.random_bool(0.5) {
                let p = rng.random_range(0..27);
                nums[p] = rng.random_range(-4..=4);
            }
            nums
        };
        let g = tensor(nums);
        let a = g.is_admissible();
        admissible += a as usize;
        assert_eq!(a, g.pointwise_delta_structure(), "{g}");
    }
    assert!(admissible > 1000, "sample should contain both outcomes");
}

#[test]
fn two_party_equivalence_exhaustive() {
    let s = Scenario::three_by_three();
    let mut admissible = 0;
    for mut code in 0..5u32.pow(9) {
        let mut nums = vec![0i64; 9];
        for n in nums.iter_mut() {
            *n = (code % 5) as i64 - 2;
            code /= 5;
        }
        let g = CoeffTensor::new(s.clone(), nums).unwrap();
        let a = g.is_admissible();
        admissible += a as usize;
        assert_eq!(a, g.pointwise_delta_structure());
    }
    assert_eq!(admissible, 90);
}

#[test]
fn random_sign_tables_are_rarely_multilinear() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let bits: Vec<bool> = (0..512).map(|_| rng.random()).collect();
        let table = SignTable::from_fn(s3(), |a| if bits[a.bits() as usize] { 1 } else { -1 });
        if let Ok(g) = coefficients_from_sign(&table) {
            assert!(SignTable::from_coefficients(&g).same_values(&table));
        }
    }
}
