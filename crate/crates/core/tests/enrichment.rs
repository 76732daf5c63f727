mod common;

use std::collections::BTreeMap;

use common::{coboundary, metric3, names, polyad2, twisted_monoid};
use pathcat::bicat::{
    canonical_bases, composable_pairs, identity_colax, identity_transformation, suspend_monoidal, validate_colax,
    Bicategory, ColaxData, FunctorMap, MonoidalCategory, Orientation, Quantale, TransformationData,
};
use pathcat::enrichment::{
    base_change, check_path_object, cocycle_check, enriched_to_path, enriched_functor_premorphism,
    exponential_base_change, foliation, homotopy_monoid_view, metric_enrichment, nerve_of_coarse, restrict,
    simplicial_correspondence, simplicial_inverse, strict_to_enriched, validate_premorphism, with_base, EnrichError,
    EnrichedCategory, FiniteGroup, MetricSpace, PathObject,
};
use pathcat::fincat::{coarse, interval, nerve_level, FinCategory, FinFunctor};
use pathcat::pathcat::build_path_category;
use proptest::prelude::*;

/// The constant-`∞` point of the quantale, whose unit cell is `∞ ≥ 0`.
fn infinite_point(truncation: usize, all: bool) -> PathObject {
    let m = suspend_monoidal(&MonoidalCategory::quantale(2)).unwrap();
    let (iso, every) = canonical_bases(&m);
    let p = build_path_category(&FinCategory::terminal(), truncation).unwrap();
    let h = m.hom(0, 0);
    let inf = h.object("inf").unwrap();
    let hom = p.path_hom(0, 0);
    let homs = vec![FunctorMap {
        obj: vec![inf; hom.chains.len()],
        arr: vec![h.identity(inf); hom.category.arrow_count()],
    }];
    let phi = composable_pairs(&p).into_iter().map(|q| (q, h.identity(inf))).collect();
    let data = ColaxData { omap: vec![0], homs, phi, phi_unit: vec![h.arrow("inf>=0").unwrap()] };
    check_path_object(p, if all { every } else { iso }, data).unwrap()
}

fn bool_category() -> (pathcat::bicat::FinBicategory, EnrichedCategory) {
    let m = suspend_monoidal(&MonoidalCategory::boolean_and()).unwrap();
    let shape = coarse(&["a", "b"]).unwrap();
    let t = 1;
    let hom = vec![t; shape.arrow_count()];
    let id = m.hom(0, 0).identity(t);
    let mut comp = BTreeMap::new();
    for f in 0..shape.arrow_count() {
        for g in shape.hom_out(shape.dst(f)) {
            comp.insert((g, f), id);
        }
    }
    (m, EnrichedCategory { shape, over: vec![0, 0], hom, unit: vec![id, id], comp })
}

#[test]
fn enriched_image_is_strict_segal_over_isomorphisms() {
    let (m, e) = twisted_monoid();
    let (iso, _) = canonical_bases(&m);
    let po = enriched_to_path(&e, &iso, 3).unwrap();
    assert!(po.is_segal());
    assert!(po.is_homomorphism());
    assert!(po.data().phi_unit.iter().all(|&c| m.hom(0, 0).is_identity(c)));
}

#[test]
fn non_invertible_unit_cell_is_an_offender() {
    let po = infinite_point(3, false);
    assert!(!po.is_segal());
    assert_eq!(po.segal.offenders.len(), 1);
    assert_eq!(po.segal.offenders[0].cell, "inf>=0");
    let all = infinite_point(3, true);
    assert!(all.is_segal());
    let (iso, _) = canonical_bases(&all.base.bicategory);
    assert_eq!(with_base(&all, iso).unwrap().segal, po.segal);
}

#[test]
fn metric_point_is_segal_over_all_cells() {
    let (_, po) = metric_enrichment(&metric3(), None, 3).unwrap();
    assert!(po.is_segal());
    let m = &po.base.bicategory;
    assert_eq!(po.base.w.count(), m.hom(0, 0).arrow_count());
}

#[test]
fn unit_chain_goes_to_unit() {
    let (m, e) = polyad2();
    let (iso, _) = canonical_bases(&m);
    let po = enriched_to_path(&e, &iso, 3).unwrap();
    for a in 0..2 {
        let x = po.data().omap[a];
        assert_eq!(po.image(&pathcat::fincat::Chain::empty(a)), Some(m.unit(x)));
    }
}

#[test]
fn round_trips() {
    let (m, e) = twisted_monoid();
    let (iso, _) = canonical_bases(&m);
    assert_eq!(strict_to_enriched(&enriched_to_path(&e, &iso, 3).unwrap()).unwrap(), e);

    let (e, po) = metric_enrichment(&metric3(), None, 3).unwrap();
    assert_eq!(strict_to_enriched(&po).unwrap(), e);

    let (m, e) = polyad2();
    let (iso, _) = canonical_bases(&m);
    assert_eq!(strict_to_enriched(&enriched_to_path(&e, &iso, 3).unwrap()).unwrap(), e);

    let (m, e) = bool_category();
    let (iso, _) = canonical_bases(&m);
    let back = strict_to_enriched(&enriched_to_path(&e, &iso, 2).unwrap()).unwrap();
    assert_eq!(back, e);
    assert!(back.hom.iter().all(|&h| m.hom(0, 0).object_name(h) == "true"));
}

#[test]
fn one_object_image_is_the_monoid() {
    let (m, e) = twisted_monoid();
    let (iso, _) = canonical_bases(&m);
    let back = strict_to_enriched(&enriched_to_path(&e, &iso, 2).unwrap()).unwrap();
    assert_eq!(back.comp[&(0, 0)], 1);
    assert_eq!(back.unit, vec![1]);
}

#[test]
fn non_invertible_colaxity_is_rejected() {
    let po = infinite_point(2, true);
    assert!(matches!(strict_to_enriched(&po), Err(EnrichError::NonInvertibleColaxity(_))));
}

#[test]
fn homotopy_monoid_views() {
    let (m, e) = twisted_monoid();
    let (iso, _) = canonical_bases(&m);
    let view = homotopy_monoid_view(&enriched_to_path(&e, &iso, 3).unwrap()).unwrap();
    assert!(view.is_strict());
    assert_eq!(view.structure.len(), 10);

    let view = homotopy_monoid_view(&infinite_point(3, true)).unwrap();
    assert!(view.is_homotopy_monoid());
    assert!(!view.is_strict());
    assert!(view.unit_map.in_w && !view.unit_map.identity);
    let view = homotopy_monoid_view(&infinite_point(3, false)).unwrap();
    assert!(!view.unit_map.in_w);

    let (_, po) = metric_enrichment(&metric3(), None, 2).unwrap();
    assert!(matches!(homotopy_monoid_view(&po), Err(EnrichError::ShapeNotTerminal)));
}

#[test]
fn simplicial_round_trip_on_coarse_nerve() {
    let x = nerve_of_coarse(2, 4);
    x.check().unwrap();
    let y = simplicial_inverse(&x).unwrap();
    assert_eq!(simplicial_correspondence(&y).unwrap(), x);
    assert_eq!(simplicial_inverse(&simplicial_correspondence(&y).unwrap()).unwrap(), y);
    let c = coarse(&["p", "q"]).unwrap();
    for n in 0..=4 {
        let count: usize = ["p", "q"]
            .iter()
            .flat_map(|a| ["p", "q"].iter().map(move |b| (*a, *b)))
            .map(|(a, b)| nerve_level(&c, n, a, b).unwrap().len())
            .sum();
        assert_eq!(x.levels[n], count);
    }
}

#[test]
fn singleton_simplicial_set() {
    let x = nerve_of_coarse(1, 3);
    assert!(x.levels.iter().all(|&k| k == 1));
    let y = simplicial_inverse(&x).unwrap();
    assert_eq!(simplicial_correspondence(&y).unwrap(), x);
}

#[test]
fn identity_premorphism() {
    let (_, po) = metric_enrichment(&metric3(), None, 2).unwrap();
    let m = &po.base.bicategory;
    let sigma = identity_transformation(&po.path, m, &po.morphism).unwrap();
    let pre = validate_premorphism(&FinFunctor::identity(po.shape()), sigma, &po, &po, true).unwrap();
    assert!(pre.is_morphism);
}

#[test]
fn non_expansive_map_is_a_morphism() {
    let (e1, f) = metric_enrichment(&metric3(), None, 2).unwrap();
    let target = MetricSpace {
        points: names(&["p", "q"]),
        d: vec![vec![Some(0), Some(1)], vec![Some(1), Some(0)]],
        quantale: Quantale::new(5),
    };
    let (e2, g) = metric_enrichment(&target, None, 2).unwrap();
    let sigma = FinFunctor::new(
        e1.shape.clone(),
        e2.shape.clone(),
        vec![0, 0, 1],
        (0..e1.shape.arrow_count())
            .map(|x| {
                let o = [0, 0, 1];
                e2.shape.arrow_between(o[e1.shape.src(x)], o[e1.shape.dst(x)]).unwrap()
            })
            .collect(),
    )
    .unwrap();
    let m = &f.base.bicategory;
    let h = m.hom(0, 0);
    let comps: Vec<usize> =
        (0..e1.shape.arrow_count()).map(|x| h.arrow_between(e1.hom[x], e2.hom[sigma.amap[x]]).unwrap()).collect();
    let data = enriched_functor_premorphism(m, &e1, &e2, &sigma, &comps, 2).unwrap();
    let pre = validate_premorphism(&sigma, data, &f, &g, true).unwrap();
    assert!(pre.is_morphism);
}

#[test]
fn non_unit_components_give_a_premorphism_only() {
    let (m, e) = polyad2();
    let (iso, _) = canonical_bases(&m);
    let po = enriched_to_path(&e, &iso, 2).unwrap();
    let one = m.hom(0, 0).object("1").unwrap();
    let mut sigma = TransformationData { comp1: vec![one, one], comp2: BTreeMap::new() };
    for a in 0..2 {
        for b in 0..2 {
            let (x, y) = (po.data().omap[a], po.data().omap[b]);
            for t in 0..po.path.path_hom(a, b).chains.len() {
                let ft = po.data().homs[a * 2 + b].obj[t];
                let v = m.compose1(x, y, y, one, ft).unwrap();
                sigma.comp2.insert((a, b, t), m.hom(x, y).identity(v));
            }
        }
    }
    let id = FinFunctor::identity(po.shape());
    let pre = validate_premorphism(&id, sigma.clone(), &po, &po, false).unwrap();
    assert!(!pre.is_morphism);
    assert!(matches!(
        validate_premorphism(&id, sigma, &po, &po, true),
        Err(EnrichError::ObjectNotOverSameBase(_))
    ));
}

#[test]
fn identity_base_change() {
    let (_, po) = metric_enrichment(&metric3(), None, 2).unwrap();
    let m = &po.base.bicategory;
    let l = validate_colax(m, m, identity_colax(m), Orientation::Colax).unwrap();
    let out = base_change(&po, &l, &po.base).unwrap();
    assert_eq!(out, po);
}

#[test]
fn collapsing_base_change() {
    let (_, po) = metric_enrichment(&metric3(), None, 2).unwrap();
    let m = &po.base.bicategory;
    let point = suspend_monoidal(&MonoidalCategory::discrete_monoid("pt", &["e"], |_, _| 0, 0).unwrap()).unwrap();
    let h = m.hom(0, 0);
    let homs = vec![FunctorMap { obj: vec![0; h.object_count()], arr: vec![0; h.arrow_count()] }];
    let phi = composable_pairs(m).into_iter().map(|p| (p, 0)).collect();
    let l = validate_colax(m, &point, ColaxData { omap: vec![0], homs, phi, phi_unit: vec![0] }, Orientation::Colax)
        .unwrap();
    let (iso, _) = canonical_bases(&point);
    let out = base_change(&po, &l, &iso).unwrap();
    assert!(out.is_segal());
    assert!(out.data().homs.iter().all(|f| f.obj.iter().all(|&x| x == 0)));
}

#[test]
fn exponential_base_change_transports_the_cocycle() {
    let objects = names(&["a", "b", "c"]);
    let f = coboundary(&[0, 1, 2], 3);
    let po = cocycle_check(&objects, &FiniteGroup::cyclic_additive(3), &f, 3).unwrap();
    let out = exponential_base_change(&po, 3).unwrap();
    assert!(out.is_segal());
    let e = strict_to_enriched(&out).unwrap();
    let mul = FiniteGroup::cyclic_multiplicative(3);
    let h = out.base.bicategory.hom(0, 0);
    for x in 0..e.shape.arrow_count() {
        let (a, b) = (e.shape.src(x), e.shape.dst(x));
        assert_eq!(h.object_name(e.hom[x]), mul.elements[f[a][b]]);
    }
}

#[test]
fn cocycles() {
    let objects = names(&["a", "b", "c"]);
    let g = FiniteGroup::cyclic_additive(3);
    let f = coboundary(&[0, 1, 2], 3);
    let mut triples = 0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                assert_eq!((f[a][b] + f[b][c]) % 3, f[a][c]);
                triples += 1;
            }
        }
    }
    assert_eq!(triples, 27);
    assert!(cocycle_check(&objects, &g, &f, 3).unwrap().is_segal());
    assert!(cocycle_check(&objects, &g, &vec![vec![0; 3]; 3], 3).is_ok());

    let mut bad = vec![vec![0; 3]; 3];
    bad[0][1] = 1;
    bad[1][2] = 1;
    assert!(matches!(cocycle_check(&objects, &g, &bad, 3), Err(EnrichError::CocycleViolation { .. })));
    let mut diag = f.clone();
    diag[1][1] = 2;
    assert_eq!(cocycle_check(&objects, &g, &diag, 3).unwrap_err(), EnrichError::UnitViolation("b".into()));
}

#[test]
fn metric_examples() {
    assert!(metric_enrichment(&metric3(), None, 2).is_ok());
    let (e, po) = metric_enrichment(&metric3(), Some((names(&["x", "y"]), &[2, 2])), 2).unwrap();
    assert!(po.is_segal());
    let h = po.base.bicategory.hom(0, 0);
    assert!(e.hom.iter().all(|&x| h.object_name(x) == "0"));

    let mut bad = metric3();
    bad.d[0][2] = Some(4);
    assert_eq!(
        metric_enrichment(&bad, None, 2).unwrap_err(),
        EnrichError::TriangleViolation { a: "a".into(), b: "b".into(), c: "c".into() }
    );
    let mut diag = metric3();
    diag.d[1][1] = Some(1);
    assert_eq!(metric_enrichment(&diag, None, 2).unwrap_err(), EnrichError::ZeroDiagonalViolation("b".into()));
}

#[test]
fn restriction_along_identity_and_simplex() {
    let (_, po) = metric_enrichment(&metric3(), None, 2).unwrap();
    assert_eq!(restrict(&po, &FinFunctor::identity(po.shape())).unwrap(), po);

    let c = po.shape().clone();
    let simplex = interval(2);
    let amap = (0..simplex.arrow_count())
        .map(|x| c.arrow_between(simplex.src(x), simplex.dst(x)).unwrap())
        .collect();
    let r = FinFunctor::new(simplex.clone(), c.clone(), vec![0, 1, 2], amap).unwrap();
    let point = restrict(&po, &r).unwrap();
    assert_eq!(point.shape(), &simplex);
    assert!(point.is_segal());
}

#[test]
fn constant_restriction_is_the_loop_monoid() {
    let (_, po) = metric_enrichment(&metric3(), None, 3).unwrap();
    let c = po.shape().clone();
    let r = FinFunctor::new(FinCategory::terminal(), c.clone(), vec![1], vec![c.identity(1)]).unwrap();
    let view = homotopy_monoid_view(&restrict(&po, &r).unwrap()).unwrap();
    for s in &view.structure {
        let chain = |k: usize| pathcat::fincat::Chain { src: 1, dst: 1, arrows: vec![c.identity(1); k] };
        assert_eq!(Some(s.cell), po.phi(&chain(s.m), &chain(s.n)));
    }
    assert!(view.is_strict());
}

#[test]
fn foliations() {
    let (_, po) = metric_enrichment(&metric3(), None, 2).unwrap();
    let leaf = foliation(&po, 0).unwrap();
    assert_eq!(leaf.shape(), po.shape());

    let (m, e) = polyad2();
    let (iso, _) = canonical_bases(&m);
    let po = enriched_to_path(&e, &iso, 2).unwrap();
    let leaves: Vec<PathObject> = (0..2).map(|u| foliation(&po, u).unwrap()).collect();
    let mut seen: Vec<String> = leaves.iter().flat_map(|l| l.shape().objects().to_vec()).collect();
    seen.sort();
    assert_eq!(seen, names(&["a", "b"]));
    for l in &leaves {
        assert_eq!(l.shape().arrow_count(), l.shape().object_count().pow(2));
    }

    let c = po.shape().clone();
    let only_a = FinFunctor::new(FinCategory::terminal(), c.clone(), vec![0], vec![c.identity(0)]).unwrap();
    let at_u = restrict(&po, &only_a).unwrap();
    assert_eq!(foliation(&at_u, 1).unwrap_err(), EnrichError::EmptyLeaf("V".into()));
}

fn metric_strategy() -> impl Strategy<Value = MetricSpace> {
    prop::collection::vec(0u32..=4, 9).prop_map(|v| {
        let d = (0..3)
            .map(|a| (0..3).map(|b| if a == b { Some(0) } else { Some(v[a * 3 + b]) }).collect())
            .collect();
        MetricSpace { points: names(&["a", "b", "c"]), d, quantale: Quantale::new(6) }
    })
}

fn triangle_holds(d: &[Vec<Option<u32>>]) -> bool {
    let n = d.len();
    let v = |a: usize, b: usize| d[a][b].unwrap_or(u32::MAX) as u64;
    (0..n).all(|a| {
        (0..n).all(|b| (0..n).all(|c| v(a, b) + v(b, c) >= v(a, c) || v(a, b) + v(b, c) > 6))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn metric_round_trip(space in metric_strategy()) {
        match metric_enrichment(&space, None, 2) {
            Ok((e, po)) => {
                prop_assert!(triangle_holds(&space.d));
                prop_assert_eq!(strict_to_enriched(&po).unwrap(), e);
            }
            Err(err) => {
                let is_triangle = matches!(err, EnrichError::TriangleViolation { .. });
                prop_assert!(is_triangle);
                prop_assert!(!triangle_holds(&space.d));
            }
        }
    }

    #[test]
    fn pullback_agrees_with_direct_table(space in metric_strategy(), f in prop::collection::vec(0usize..3, 1..4)) {
        let pts: Vec<String> = (0..f.len()).map(|i| format!("x{i}")).collect();
        let direct = MetricSpace {
            points: pts.clone(),
            d: f.iter().map(|&a| f.iter().map(|&b| space.d[a][b]).collect()).collect(),
            quantale: space.quantale,
        };
        let pulled = metric_enrichment(&space, Some((pts, &f)), 2).map(|(e, _)| e);
        let checked = metric_enrichment(&direct, None, 2).map(|(e, _)| e);
        prop_assert_eq!(pulled, checked);
    }

    #[test]
    fn cocycle_acceptance_matches_oracle(table in prop::collection::vec(0usize..3, 9)) {
        let f: Vec<Vec<usize>> = table.chunks(3).map(|r| r.to_vec()).collect();
        let oracle = (0..3).all(|a| f[a][a] == 0)
            && (0..3).all(|a| (0..3).all(|b| (0..3).all(|c| (f[a][b] + f[b][c]) % 3 == f[a][c])));
        let got = cocycle_check(&names(&["a", "b", "c"]), &FiniteGroup::cyclic_additive(3), &f, 2);
        prop_assert_eq!(got.is_ok(), oracle);
        if let Ok(po) = got {
            prop_assert!(po.is_segal());
        }
    }
}
