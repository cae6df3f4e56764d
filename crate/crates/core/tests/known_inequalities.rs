use tightbell::family::{classify_delta, family_orbit_size, DeltaFamily, FamilyId};
use tightbell::fixtures::{self, Fixture};
use tightbell::polytope::{lhs_extremes, lr_vertices, tightness, vertex_set_rank};
use tightbell::reduce::{identify_settings, same_class};
use tightbell::symmetry::canonical_form;
use tightbell::{
    coefficients_from_sign, delta, enumerate_three_party, enumerate_two_party, reconstruct_sign, Assignment,
    Budget, CoeffTensor, DeltaPoly, Dyadic, LocalSymmetry, Scenario, SignTable, Var,
};

fn fx(name: &str) -> Fixture {
    fixtures::by_name(name).unwrap()
}

fn s3() -> Scenario {
    Scenario::three_by_three_by_three()
}

#[test]
fn eval_sign_examples() {
    let g = fx("chsh_ext_ac").inequality;
    assert_eq!(g.eval_sign(&Assignment::all_plus(&s3())).unwrap(), Dyadic::ONE);
    let all_quarters = CoeffTensor::new(s3(), vec![1; 27]).unwrap();
    assert_eq!(all_quarters.eval_sign(&Assignment::all_plus(&s3())).unwrap(), Dyadic::new(27, 2));
    let wrong = Assignment::from_bits(0, 6);
    assert!(g.eval_sign(&wrong).is_err());
}

#[test]
fn every_fixture_is_admissible_and_tight() {
    for f in fixtures::all() {
        let g = &f.inequality;
        assert!(g.is_admissible(), "{}", f.name);
        assert!(g.pointwise_delta_structure(), "{}", f.name);
        assert!(g.norm_conditions().pass, "{}", f.name);
        let c = tightness(g);
        assert!(c.is_facet, "{}: {c:?}", f.name);
        assert_eq!(c.affine_rank + 1, f.scenario.coefficient_count());
    }
    assert!(!CoeffTensor::zeros(s3()).is_admissible());
}

#[test]
fn nine_setting_sign_inverts_to_its_sixteen_terms() {
    let f = fx("nine_setting");
    let table = SignTable::from_coefficients(&f.sign);
    assert!(table.is_admissible());
    assert_eq!(table.sum_of_squares(), Dyadic::from_int(512));
    let g = coefficients_from_sign(&table).unwrap();
    assert_eq!(g.numerators().iter().filter(|&&n| n != 0).count(), 16);
    assert!(g.numerators().iter().all(|&n| n.abs() <= 1));
    assert_eq!(g, f.inequality);
    let nc = g.norm_conditions();
    assert_eq!((nc.sum_abs, nc.sum_sq, nc.pass), (Dyadic::ONE, Dyadic::ONE, true));
}

#[test]
fn mabk_coefficients() {
    let g = coefficients_from_sign(&SignTable::from_coefficients(&fx("mabk").sign)).unwrap();
    assert_eq!(g.numerator(&[0, 0, 0]), 2);
    assert_eq!(g.numerator(&[0, 1, 1]), 2);
    assert_eq!(g.numerator(&[1, 0, 1]), 2);
    assert_eq!(g.numerator(&[1, 1, 0]), -2);
}

#[test]
fn nine_setting_deltas() {
    let table = SignTable::from_coefficients(&fx("nine_setting").sign);
    let d = delta(&table, &[Var::new(0, 0)]).unwrap();
    // ¼(b1 + b2)(c1 − c2)
    assert_eq!(d.numerators(), &[0, 0, 0, 0, 1, -1, 0, 1, -1]);
    assert_eq!(d.norm_sq(), Dyadic::new(4, 4));
    assert_eq!(classify_delta(&d).unwrap(), Some(FamilyId::DeltaVI));
    let rest: Vec<_> = (1..3)
        .map(|s| classify_delta(&delta(&table, &[Var::new(0, s)]).unwrap()).unwrap())
        .collect();
    assert_eq!(rest, vec![Some(FamilyId::DeltaVII), Some(FamilyId::DeltaVII)]);
    let deltas: Vec<DeltaPoly> = (0..3).map(|s| delta(&table, &[Var::new(0, s)]).unwrap()).collect();
    assert!(reconstruct_sign(&deltas).unwrap().same_values(&table));
    let third = delta(&table, &[Var::new(0, 1), Var::new(1, 0), Var::new(2, 1)]).unwrap();
    assert_eq!(third.eval(0), Dyadic::new(1, 2));
}

#[test]
fn reconstruction_of_product_deltas() {
    let b0c0 = DeltaPoly::from_parts(vec![Var::new(0, 0)], vec![1, 2], vec![3, 3], 2, {
        let mut v = vec![0; 9];
        v[0] = 4;
        v
    })
    .unwrap();
    let zero = |s| DeltaPoly::from_parts(vec![Var::new(0, s)], vec![1, 2], vec![3, 3], 2, vec![0; 9]).unwrap();
    let table = reconstruct_sign(&[b0c0, zero(1), zero(2)]).unwrap();
    let g = coefficients_from_sign(&table).unwrap();
    assert_eq!(g.numerators().iter().filter(|&&n| n != 0).count(), 1);
    assert_eq!(g.numerator(&[0, 0, 0]), 4);
}

#[test]
fn norm_condition_examples() {
    let single = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4)]).unwrap();
    assert!(single.norm_conditions().pass);
    let double = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4), (&[1, 1, 1], 4)]).unwrap();
    let nc = double.norm_conditions();
    assert_eq!((nc.sum_abs, nc.sum_sq, nc.pass), (Dyadic::from_int(2), Dyadic::from_int(2), false));
}

#[test]
fn chsh_embeddings_merge_under_party_permutation() {
    let ac = fx("chsh_ext_ac").inequality.canonicalize();
    let ab = fx("chsh_ext_ab").inequality.canonicalize();
    assert_eq!(ac, ab);
    // The BC embedding: ½ a0 (b0c0 + b0c1 + b1c0 − b1c1).
    let bc = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 2), (&[0, 0, 1], 2), (&[0, 1, 0], 2), (&[0, 1, 1], -2)])
        .unwrap();
    assert_eq!(bc.canonicalize(), ac);
    // Without party permutations the three embeddings stay apart.
    let no_swap = |g: &CoeffTensor| canonical_form(&[3, 3, 3], g.numerators(), false).0;
    assert_ne!(no_swap(&fx("chsh_ext_ac").inequality), no_swap(&fx("chsh_ext_ab").inequality));
    assert_ne!(no_swap(&fx("chsh_ext_ac").inequality), no_swap(&bc));
    // The mixed extension is a different class.
    assert_ne!(fx("chsh_ext_mixed").inequality.canonicalize().0, ac.0);
}

#[test]
fn single_entry_canonical_forms() {
    let a = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4)]).unwrap();
    let b = CoeffTensor::from_terms(s3(), &[(&[2, 2, 2], -4)]).unwrap();
    assert_eq!(a.canonicalize(), b.canonicalize());
    let flipped = a.apply_symmetry(&LocalSymmetry::flip(&[3, 3, 3], 0, 0)).unwrap();
    assert_eq!(flipped.numerator(&[0, 0, 0]), -4);
    let moved = fx("nine_setting")
        .inequality
        .apply_symmetry(&LocalSymmetry::swap_settings(&[3, 3, 3], 1, 0, 2))
        .unwrap();
    assert!(moved.is_admissible());
}

#[test]
fn two_party_catalog_is_trivial_plus_chsh() {
    let cat = enumerate_two_party(true);
    assert_eq!(cat.class_count(), 2);
    assert!(cat.strategies_agree);
    for f in fixtures::two_party() {
        assert!(cat.find(&f.inequality).is_some(), "{}", f.name);
    }
    for r in &cat.records {
        let c = r.certificate.unwrap();
        assert!(c.is_facet);
        assert_eq!(c.affine_rank, 8);
    }
}

#[test]
fn three_party_catalog_contains_every_fixture() {
    let cat = enumerate_three_party(Budget::default(), true);
    assert!(cat.complete);
    assert!(cat.strategies_agree);
    assert!(cat.unclassified_deltas.is_empty(), "{:?}", cat.unclassified_deltas);
    let mut hit = std::collections::BTreeSet::new();
    for f in fixtures::three_party_signs() {
        let i = cat.find(&f.inequality).unwrap_or_else(|| panic!("{} missing", f.name));
        hit.insert(i);
    }
    // The three CHSH embeddings share a class; one class is not among the fixtures.
    assert_eq!(hit.len(), 8);
    let missing: Vec<_> = (0..cat.class_count()).filter(|i| !hit.contains(i)).collect();
    assert_eq!(missing.len(), 2);
    let profiles: Vec<_> = missing.iter().map(|&i| cat.records[i].delta_profile.clone()).collect();
    assert!(profiles.contains(&vec!["zero".to_string(), "zero".into(), "product".into()]));
    assert!(profiles.contains(&vec!["zero".to_string(), "V".into(), "V".into()]));
    for r in &cat.records {
        assert!(r.admissible && r.tight == Some(true));
    }
}

#[test]
fn every_delta_of_every_class_is_in_a_family() {
    let cat = enumerate_three_party(Budget::default(), false);
    for r in &cat.records {
        let g = r.canonical();
        for party in 0..3 {
            let s = g.scenario().clone();
            // Deltas of Bob and Carol are forms over the other two parties in order.
            for d in g.order1_deltas(party) {
                let fam = classify_delta(&d).unwrap();
                assert!(fam.is_some(), "{} in {s}: {d}", party);
            }
        }
    }
}

#[test]
fn reduction_chain() {
    let parent = fx("parent_2x4x4").inequality;
    let nine = fx("nine_setting").inequality;
    let a02 = fx("merge_a0_a2").inequality;
    let a21 = fx("merge_a2_a1").inequality;
    let xii = fx("two_xii").inequality;

    let r = identify_settings(&nine, 0, 2, 0).unwrap();
    assert!(r.is_admissible());
    assert!(same_class(&r, &a02).unwrap());
    let r = identify_settings(&nine, 0, 2, 1).unwrap();
    assert!(r.is_admissible());
    assert!(same_class(&r, &a21).unwrap());

    let c = identify_settings(&parent, 2, 1, 0).unwrap();
    assert_eq!(c.scenario().settings(), &[2, 4, 3]);
    assert!(c.is_admissible());
    assert!(same_class(&c, &xii).unwrap());
    let b = identify_settings(&c, 1, 2, 0).unwrap();
    assert!(same_class(&b, &a21).unwrap());
    let bc = identify_settings(&identify_settings(&parent, 1, 2, 0).unwrap(), 2, 2, 0).unwrap();
    assert!(same_class(&bc, &a02).unwrap());

    // Down to two settings per party.
    let r = identify_settings(&a02, 1, 2, 1).unwrap();
    assert!(same_class(&r, &fx("delta_i_iv").inequality).unwrap());
    let r = identify_settings(&xii, 1, 2, 1).unwrap();
    assert!(same_class(&r, &fx("chsh_ext_mixed").inequality).unwrap());
}

#[test]
fn parent_is_admissible_in_its_scenario() {
    let g = fx("parent_2x4x4").inequality;
    assert_eq!(g.scenario().assignment_count(), 1024);
    assert!(g.is_admissible());
    let c = tightness(&g);
    assert_eq!(c.ambient_dim, 32);
    assert!(c.is_facet);
}

#[test]
fn vertices_and_extremes() {
    let v = lr_vertices(&s3(), true);
    assert_eq!(v.len(), 128);
    assert_eq!(vertex_set_rank(&s3()), 27);
    let (max, min) = lhs_extremes(&fx("nine_setting").inequality, &v);
    assert_eq!((max, min), (Dyadic::ONE, Dyadic::from_int(-1)));
    let all = lr_vertices(&s3(), false);
    // Flipping every outcome of two parties leaves the correlations unchanged.
    let a = &all[0b000_000_000];
    let b = &all[0b111_111_000];
    assert_eq!(a.correlations, b.correlations);
}

#[test]
fn family_equivalences_with_party_exchange() {
    // Under the no-exchange group all listed families are distinct (the
    // classifier index asserts this); allowing Bob <-> Carol merges exactly
    // the transposed pairs.
    let canon = |id: FamilyId| {
        let r = DeltaFamily::new(id).representative;
        canonical_form(&[3, 3], r.numerators(), true).0
    };
    let ids = FamilyId::THREE_PARTY;
    let mut merged = Vec::new();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            if canon(a) == canon(b) {
                merged.push((a, b));
            }
        }
    }
    assert_eq!(
        merged,
        vec![
            (FamilyId::DeltaII, FamilyId::DeltaIII),
            (FamilyId::DeltaV, FamilyId::DeltaXI),
            (FamilyId::DeltaIX, FamilyId::DeltaX),
        ]
    );
    assert!(family_orbit_size(FamilyId::DeltaVII) > 0);
}
