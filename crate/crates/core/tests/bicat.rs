use pathcat::bicat::{
    canonical_bases, chaotic_bicategory, extract_monoidal, identity_colax, identity_transformation, suspend_monoidal,
    validate_base, validate_bicategory, validate_colax, validate_modification, validate_transformation, BicatError,
    Bicategory, CellSet, FinBicategory, MonoidalCategory, Orientation, Quantale,
};
use proptest::prelude::*;

fn twist_pair() -> FinBicategory {
    chaotic_bicategory(&MonoidalCategory::cyclic_twist(2), &["U", "V"]).unwrap()
}

/// Number of identity 2-cells over all homs.
fn identity_cells(b: &FinBicategory) -> usize {
    let n = b.object_count();
    (0..n * n).map(|i| b.hom(i / n, i % n).object_count()).sum()
}

/// Independent check of the three base conditions for a cell set of the
/// one-object quantale bicategory, computed from the order and addition.
/// `inw(x, y)` says whether the cell `x ≥ y` (value indices) lies in W.
fn quantale_base_ok(k: u32, inw: impl Fn(usize, usize) -> bool) -> bool {
    let q = Quantale::new(k);
    let vals: Vec<_> = q.values().collect();
    let n = vals.len();
    if (0..n).any(|x| !inw(x, x)) {
        return false;
    }
    for x in 0..n {
        for y in 0..=x {
            for z in 0..=y {
                let count = [inw(x, y), inw(y, z), inw(x, z)].iter().filter(|&&b| b).count();
                if count == 2 {
                    return false;
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..=x {
            for x2 in 0..n {
                for y2 in 0..=x2 {
                    if inw(x, y) && inw(x2, y2) {
                        let s = q.index(q.add(vals[x], vals[x2]));
                        let t = q.index(q.add(vals[y], vals[y2]));
                        if !inw(s, t) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[test]
fn strict_and_suspended_bicategories_validate() {
    validate_bicategory(twist_pair()).unwrap();
    let b = suspend_monoidal(&MonoidalCategory::boolean_and()).unwrap();
    assert_eq!(b.object_count(), 1);
    assert_eq!(b.hom(0, 0).object_count(), 2);
    let q = suspend_monoidal(&MonoidalCategory::quantale(3)).unwrap();
    assert!(q.hom(0, 0).is_thin());
}

#[test]
fn perturbed_associator_is_rejected() {
    let b = suspend_monoidal(&MonoidalCategory::cyclic_twist(3)).unwrap();
    let bad = b.with_associator(0, 0, 0, 0, 0, 0, 0, 1);
    assert!(matches!(validate_bicategory(bad), Err(BicatError::PentagonViolation { .. })));
}

#[test]
fn suspension_round_trips() {
    for m in [
        MonoidalCategory::boolean_and(),
        MonoidalCategory::quantale(4),
        MonoidalCategory::cyclic_twist(2),
    ] {
        assert_eq!(extract_monoidal(&suspend_monoidal(&m).unwrap(), 0, &m.name), m);
    }
}

#[test]
fn identity_morphisms_are_strict_in_both_orientations() {
    let b = twist_pair();
    for o in [Orientation::Colax, Orientation::Lax] {
        let f = validate_colax(&b, &b, identity_colax(&b), o).unwrap();
        assert!(f.strict);
    }
}

#[test]
fn unit_mutation_breaks_m2() {
    let b = suspend_monoidal(&MonoidalCategory::cyclic_twist(2)).unwrap();
    let mut data = identity_colax(&b);
    data.phi_unit[0] = 1;
    assert!(matches!(validate_colax(&b, &b, data, Orientation::Colax), Err(BicatError::M2Violation { .. })));
}

#[test]
fn transformation_and_modification_checks() {
    let b = twist_pair();
    let f = validate_colax(&b, &b, identity_colax(&b), Orientation::Colax).unwrap();
    let sigma = identity_transformation(&b, &b, &f).unwrap();
    let t = validate_transformation(&b, &b, &f, &f, sigma.clone()).unwrap();
    let ids: Vec<usize> = (0..2).map(|a| b.hom(a, a).identity(t.data.comp1[a])).collect();
    validate_modification(&b, &b, &f, &f, &t, &t, ids.clone()).unwrap();

    let mut bad = sigma;
    let key = *bad.comp2.keys().find(|&&(a, b2, _)| a != b2).unwrap();
    let h = b.hom(key.0, key.1);
    let cell = bad.comp2[&key];
    let other = h.hom(h.src(cell), h.dst(cell)).iter().copied().find(|&c| c != cell).unwrap();
    bad.comp2.insert(key, other);
    assert!(matches!(
        validate_transformation(&b, &b, &f, &f, bad),
        Err(BicatError::TransformationAxiomViolation { .. } | BicatError::UnitAxiomViolation(_))
    ));

    let mut gamma = ids;
    let h = b.hom(0, 0);
    gamma[0] = h.hom(h.src(gamma[0]), h.dst(gamma[0])).iter().copied().find(|&c| c != gamma[0]).unwrap();
    assert!(matches!(
        validate_modification(&b, &b, &f, &f, &t, &t, gamma),
        Err(BicatError::ModificationAxiomViolation(_))
    ));
}

#[test]
fn canonical_bases_of_fixtures() {
    for m in [
        twist_pair(),
        suspend_monoidal(&MonoidalCategory::quantale(2)).unwrap(),
        suspend_monoidal(&MonoidalCategory::boolean_and()).unwrap(),
    ] {
        let (iso, all) = canonical_bases(&m);
        assert!(iso.w.is_subset(&all.w));
        assert!(validate_base(m.clone(), CellSet::invertible(&m)).is_ok());
        assert!(validate_base(m.clone(), CellSet::all(&m)).is_ok());
    }
    // posetal hom: only identities are invertible
    let q = suspend_monoidal(&MonoidalCategory::quantale(2)).unwrap();
    assert_eq!(canonical_bases(&q).0.w.count(), identity_cells(&q));
    // the twist makes every 2-cell invertible
    let t = twist_pair();
    assert_eq!(canonical_bases(&t).0.w, CellSet::all(&t));
}

#[test]
fn missing_invertible_cell() {
    let m = twist_pair();
    let mut w = CellSet::all(&m);
    w.remove(0, 1, 1);
    assert!(matches!(validate_base(m, w), Err(BicatError::MissingInvertible(_))));
}

proptest! {
    #[test]
    fn quantale_suspensions(k in 0u32..5) {
        let m = MonoidalCategory::quantale(k);
        let b = suspend_monoidal(&m).unwrap();
        prop_assert_eq!(&extract_monoidal(&b, 0, &m.name), &m);
        let (iso, all) = canonical_bases(&b);
        prop_assert!(iso.w.is_subset(&all.w));
        for x in 0..b.hom(0, 0).object_count() {
            prop_assert!(iso.in_w(0, 0, b.hom(0, 0).identity(x)));
        }
        let f = validate_colax(&b, &b, identity_colax(&b), Orientation::Colax).unwrap();
        prop_assert!(f.strict);
    }

    #[test]
    fn base_validation_matches_the_axioms(mut bits in prop::collection::vec(any::<bool>(), 10), keep_ids: bool) {
        let k = 2;
        let m = suspend_monoidal(&MonoidalCategory::quantale(k)).unwrap();
        let h = m.hom(0, 0);
        prop_assert_eq!(h.arrow_count(), 10);
        if keep_ids {
            for x in 0..h.object_count() {
                bits[h.identity(x)] = true;
            }
        }
        let mut w = CellSet::empty(&m);
        for (c, &on) in bits.iter().enumerate() {
            if on {
                w.insert(0, 0, c);
            }
        }
        let q = Quantale::new(k);
        let bit = |x: usize, y: usize| bits[h.arrow(&format!("{}>={}", q.name(q.value(x)), q.name(q.value(y)))).unwrap()];
        let ok = quantale_base_ok(k, bit);
        let chosen: Vec<String> = (0..10).filter(|&c| bits[c]).map(|c| h.arrow_name(c).to_string()).collect();
        prop_assert_eq!(validate_base(m.clone(), w).is_ok(), ok, "W = {:?}", chosen);
    }
}
