//! End-to-end acceptance checks. Each criterion prints one `PASS`/`FAIL`
//! line with its tolerance; all comparisons are exact.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};

use common::{coboundary, metric3, names, polyad2, twisted_monoid};
use pathcat::bicat::{
    canonical_bases, chaotic_bicategory, suspend_monoidal, validate_base, validate_bicategory, validate_colax,
    Bicategory, BicatError, CellSet, FinBicategory, MonoidalCategory, Orientation,
};
use pathcat::bridge::{bridge_morphisms, bridge_of_distributor, distributor_of_bridge, thin_bridge, Distributor};
use pathcat::enrichment::{
    cocycle_check, enriched_to_path, exponential_base_change, group_bicategory, metric_enrichment, nerve_of_coarse,
    simplicial_correspondence, simplicial_inverse, strict_to_enriched, EnrichError, FiniteGroup,
};
use pathcat::fincat::{
    coarse, coproduct, enumerate_functors, interval, nerve_level, product, FinCategory, FinFunctor,
};
use pathcat::localize::{
    check_fractions, default_targets, inverts, localize, localize_fractions, product_class,
    product_localization_check, reduce_point, secondary_localization, verify_composition_cube,
    verify_universal_property,
};
use pathcat::pathcat::{build_path_category, delta_identification, structural_isos, IsoMode};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Nondecreasing maps `{0..n-1} → {0..m-1}` by filtering all `m^n` functions.
fn brute_delta(n: usize, m: usize) -> usize {
    let total = m.pow(n as u32);
    (0..total)
        .filter(|&code| {
            let mut x = code;
            let mut images = Vec::with_capacity(n);
            for _ in 0..n {
                images.push(x % m);
                x /= m;
            }
            images.windows(2).all(|w| w[0] <= w[1])
        })
        .count()
}

fn hom_counts(c: &FinCategory) -> Vec<usize> {
    let n = c.object_count();
    (0..n * n).map(|i| c.hom(i / n, i % n).len()).collect()
}

fn all_arrows(c: &FinCategory) -> Vec<usize> {
    (0..c.arrow_count()).collect()
}

fn functors(s: &FinCategory, t: &FinCategory) -> Vec<FinFunctor> {
    enumerate_functors(s, t, &[], &[])
        .into_iter()
        .map(|(o, a)| FinFunctor::new(s.clone(), t.clone(), o, a).expect("enumerated functor"))
        .collect()
}

/// Chains of length `k` from `a` to `b`, counted through the nerve.
fn nerve_chains(c: &FinCategory, a: usize, b: usize, k: usize) -> usize {
    nerve_level(c, k, c.object_name(a), c.object_name(b)).expect("objects exist").len()
}

fn delta_identification_check() -> Outcome {
    let p = build_path_category(&FinCategory::terminal(), 5).map_err(err)?;
    let d = delta_identification(&p).map_err(err)?;
    let h = p.path_hom(0, 0);
    ensure(h.chains.len() == 6, format!("{} chains, expected 6", h.chains.len()))?;
    let lengths: BTreeSet<usize> = d.chain_of_length.iter().map(|&i| h.chains[i].len()).collect();
    ensure(lengths == (0..=5).collect(), "chains are not one per length")?;
    let mut relations = 0;
    for n in 0..=5 {
        for m in 0..=5 {
            let want = brute_delta(n, m);
            ensure(d.witness_counts[n][m] == want, format!("|Δ({n},{m})| = {} vs {want}", d.witness_counts[n][m]))?;
            relations += usize::from(want > 0);
        }
    }
    ensure(h.relation_count() == relations, format!("{} relations vs {relations}", h.relation_count()))?;
    let (d22, d32) = (d.witness_counts[2][2], d.witness_counts[3][2]);
    ensure((d22, d32) == (3, 4), format!("|Δ(2,2)|={d22} |Δ(3,2)|={d32}"))?;
    Ok(format!("|Δ(2,2)|={d22} |Δ(3,2)|={d32} relations={relations}"))
}

fn structural_iso_check() -> Outcome {
    let c = coarse(&["a", "b"]).map_err(err)?;
    let d = interval(1);
    let n = 3;
    let pc = build_path_category(&c, n).map_err(err)?;
    let pd = build_path_category(&d, n).map_err(err)?;

    let co = structural_isos(IsoMode::Coproduct(&c, &d), n).map_err(err)?;
    let psum = build_path_category(&coproduct(&c, &d), n).map_err(err)?;
    ensure(psum.chain_count() == pc.chain_count() + pd.chain_count(), "coproduct chain count")?;
    ensure(psum.relation_count() == pc.relation_count() + pd.relation_count(), "coproduct relation count")?;
    ensure(co.chains == psum.chain_count(), format!("coproduct iso covers {} of {} chains", co.chains, psum.chain_count()))?;

    let fp = structural_isos(IsoMode::FiberProduct(&c, &d), n).map_err(err)?;
    let cd = product(&c, &d);
    let pprod = build_path_category(&cd, n).map_err(err)?;
    // chains of C × D are pairs of chains of equal length
    let mut expected = 0;
    for a in 0..c.object_count() {
        for b in 0..c.object_count() {
            for x in 0..d.object_count() {
                for y in 0..d.object_count() {
                    expected += (0..=n).map(|k| nerve_chains(&c, a, b, k) * nerve_chains(&d, x, y, k)).sum::<usize>();
                }
            }
        }
    }
    ensure(pprod.chain_count() == expected, format!("{} product chains vs {expected}", pprod.chain_count()))?;
    ensure(fp.chains == expected, format!("fiber product iso covers {} of {expected} chains", fp.chains))?;
    ensure(fp.relations == pprod.relation_count(), "fiber product relation count")?;
    Ok(format!(
        "coproduct chains={} relations={}; fiber product chains={} relations={}",
        co.chains, co.relations, fp.chains, fp.relations
    ))
}

fn round_trip_check() -> Outcome {
    let mut sizes = Vec::new();
    let (m, e) = twisted_monoid();
    let (iso, _) = canonical_bases(&m);
    let back = strict_to_enriched(&enriched_to_path(&e, &iso, 3).map_err(err)?).map_err(err)?;
    ensure(back == e, "2-element monoid")?;
    sizes.push(e.hom.len());

    let (e, po) = metric_enrichment(&metric3(), None, 3).map_err(err)?;
    let back = strict_to_enriched(&po).map_err(err)?;
    ensure(back.hom == e.hom && back.unit == e.unit && back.comp == e.comp, "metric category")?;
    sizes.push(e.hom.len());

    let (m, e) = polyad2();
    let (iso, _) = canonical_bases(&m);
    let back = strict_to_enriched(&enriched_to_path(&e, &iso, 3).map_err(err)?).map_err(err)?;
    ensure(back == e, "polyad")?;
    sizes.push(e.hom.len());
    Ok(format!("hom entries {sizes:?} identical, N=3"))
}

fn coherence_check() -> Outcome {
    let (m, e) = twisted_monoid();
    let (iso, _) = canonical_bases(&m);
    let po = enriched_to_path(&e, &iso, 5).map_err(err)?;
    for (bicat, e) in [twisted_monoid(), polyad2()] {
        let (iso, _) = canonical_bases(&bicat);
        let p = enriched_to_path(&e, &iso, 3).map_err(err)?;
        validate_colax(&p.path, &bicat, p.data().clone(), Orientation::Colax).map_err(err)?;
    }
    let (_, metric) = metric_enrichment(&metric3(), None, 3).map_err(err)?;
    validate_colax(&metric.path, &metric.base.bicategory, metric.data().clone(), Orientation::Colax).map_err(err)?;

    let h = m.hom(0, 0);
    let other = |c: usize| {
        h.hom(h.src(c), h.dst(c)).iter().copied().find(|&x| x != c).expect("twist has a second automorphism")
    };
    let base = po.data().clone();
    let mut mutants = Vec::new();
    let mut unit = base.clone();
    unit.phi_unit[0] = other(unit.phi_unit[0]);
    mutants.push(("unit".to_string(), unit));
    for (pair, &cell) in &base.phi {
        let mut d = base.clone();
        d.phi.insert(*pair, other(cell));
        mutants.push((format!("{pair:?}"), d));
    }
    mutants.truncate(20);
    let mut rejected = 0;
    for (label, data) in &mutants {
        match validate_colax(&po.path, &m, data.clone(), Orientation::Colax) {
            Err(BicatError::M1Violation { .. } | BicatError::M2Violation { .. }) => rejected += 1,
            other => return Err(format!("mutant {label}: {other:?}").chars().take(200).collect()),
        }
    }
    ensure(rejected == 20, format!("{rejected}/20 rejected"))?;
    Ok(format!("{rejected}/{} mutants rejected (100%)", mutants.len()))
}

fn fixture_bicategories() -> Vec<FinBicategory> {
    let mut out = vec![twisted_monoid().0, polyad2().0];
    out.push(suspend_monoidal(&MonoidalCategory::quantale(5)).expect("quantale"));
    out.push(suspend_monoidal(&MonoidalCategory::boolean_and()).expect("boolean"));
    out.push(chaotic_bicategory(&MonoidalCategory::quantale(1), &["U", "V"]).expect("chaotic"));
    out.push(group_bicategory(&FiniteGroup::cyclic_additive(3)).expect("Z/3"));
    out.push(group_bicategory(&FiniteGroup::cyclic_multiplicative(3)).expect("Z/3"));
    out
}

fn base_axiom_check() -> Outcome {
    let fixtures = fixture_bicategories();
    for m in &fixtures {
        validate_base(m.clone(), CellSet::invertible(m)).map_err(err)?;
        validate_base(m.clone(), CellSet::all(m)).map_err(err)?;
    }
    // hom is the chain inf ≥ 1 ≥ 0; W holds the composite inf ≥ 0 and inf ≥ 1 but not 1 ≥ 0
    let m = suspend_monoidal(&MonoidalCategory::quantale(1)).map_err(err)?;
    let h = m.hom(0, 0);
    ensure(h.object_count() == 3 && h.is_thin(), "quantale hom is not a 3-chain")?;
    let mut w = CellSet::invertible(&m);
    for name in ["inf>=1", "inf>=0"] {
        w.insert(0, 0, h.arrow(name).ok_or(format!("no arrow {name}"))?);
    }
    match validate_base(m, w) {
        Err(BicatError::ThreeForTwoViolation { alpha, beta }) => {
            Ok(format!("{} bicategories x 2 bases valid; 3-out-of-2 rejected at ({alpha}, {beta})", fixtures.len()))
        }
        other => Err(format!("3-out-of-2 violation accepted: {:?}", other.map(|_| ()))),
    }
}

fn simplicial_check() -> Outcome {
    let x = nerve_of_coarse(2, 4);
    x.check().map_err(err)?;
    let y = simplicial_inverse(&x).map_err(err)?;
    let x2 = simplicial_correspondence(&y).map_err(err)?;
    ensure(x2 == x, "X -> Y -> X is not the identity")?;
    ensure(simplicial_inverse(&x2).map_err(err)? == y, "Y -> X -> Y is not the identity")?;
    let c = coarse(&["p", "q"]).map_err(err)?;
    for n in 0..=4 {
        let count: usize = (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| nerve_chains(&c, a, b, n)).sum();
        ensure(x.levels[n] == count, format!("level {n}: {} vs {count}", x.levels[n]))?;
        ensure(count == 2usize.pow(n as u32 + 1), format!("level {n}: {count} vs 2^{}", n + 1))?;
    }
    Ok(format!("levels {:?}, round trip identity at N=4", x.levels))
}

fn cocycle_acceptance() -> Outcome {
    let objects = names(&["a", "b", "c"]);
    let g = FiniteGroup::cyclic_additive(3);
    let f = coboundary(&[0, 1, 2], 3);
    let mut triples = 0;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                ensure(g.mult[f[b][c]][f[a][b]] == f[a][c], format!("f({a},{b},{c})"))?;
                triples += 1;
            }
        }
    }
    let po = cocycle_check(&objects, &g, &f, 3).map_err(err)?;
    ensure(po.is_segal(), "coboundary is not strict Segal")?;

    let mut rejected = 0;
    let mut perturbed = 0;
    for a in 0..3 {
        for b in 0..3 {
            for shift in 1..3 {
                let mut bad = f.clone();
                bad[a][b] = (bad[a][b] + shift) % 3;
                perturbed += 1;
                if matches!(
                    cocycle_check(&objects, &g, &bad, 3),
                    Err(EnrichError::CocycleViolation { .. } | EnrichError::UnitViolation(_))
                ) {
                    rejected += 1;
                }
            }
        }
    }
    ensure(rejected == perturbed, format!("{rejected}/{perturbed} perturbations rejected"))?;

    let out = exponential_base_change(&po, 3).map_err(err)?;
    ensure(out.is_segal(), "transported point is not Segal")?;
    let e = strict_to_enriched(&out).map_err(err)?;
    let mul = FiniteGroup::cyclic_multiplicative(3);
    let h = out.base.bicategory.hom(0, 0);
    let value = |x: usize| mul.elements.iter().position(|s| s == h.object_name(e.hom[x])).expect("group element");
    for x in 0..e.shape.arrow_count() {
        let (a, b) = (e.shape.src(x), e.shape.dst(x));
        ensure(mul.elements[value(x)] == mul.elements[f[a][b]], format!("z^f({a},{b})"))?;
    }
    for x in 0..e.shape.arrow_count() {
        for y in e.shape.hom_out(e.shape.dst(x)) {
            let yx = e.shape.compose(y, x).expect("composable");
            ensure(mul.mult[value(y)][value(x)] == value(yx), "multiplicative cocycle")?;
        }
    }
    Ok(format!("{triples} triples, {rejected}/{perturbed} one-entry perturbations rejected, exp transport preserves cocycle"))
}

fn localization_check() -> Outcome {
    let c = interval(1);
    let s: Vec<usize> = all_arrows(&c);
    let loc = localize_fractions(&check_fractions(&c, &s).map_err(err)?).map_err(err)?;
    ensure(hom_counts(&loc.category) == vec![1; 4], format!("homs {:?}", hom_counts(&loc.category)))?;
    let targets = default_targets();
    ensure(targets.iter().all(|t| t.object_count() <= 3), "target too large")?;
    let report = verify_universal_property(&loc, &s, &targets).map_err(err)?;
    let set: BTreeSet<usize> = s.iter().copied().collect();
    let mut inverting = 0;
    let mut from_loc = 0;
    for t in &targets {
        inverting += functors(&c, t).iter().filter(|f| inverts(f, &set)).count();
        from_loc += functors(&loc.category, t).len();
    }
    ensure(report.functors == inverting, format!("{} checked vs {inverting} inverting functors", report.functors))?;
    ensure(from_loc == inverting, format!("{from_loc} functors out of the localization vs {inverting}"))?;
    Ok(format!("homs all singletons; {inverting} functors into {} targets factor uniquely", report.targets))
}

fn product_check() -> Outcome {
    let c = interval(1);
    let s = all_arrows(&c);
    let report = product_localization_check(&c, &s, &c, &s, &default_targets()).map_err(err)?;
    ensure(report.bar_pairs > 0, "no F̄ × Ḡ pairs compared")?;
    let cc = product(&c, &c);
    let st: Vec<usize> = product_class(&c, &s, &c, &s).into_iter().collect();
    let direct = localize(&cc, &st).map_err(err)?;
    ensure(hom_counts(&direct.category) == hom_counts(&report.functor.target), "L_S × L_T differs from (C×D)[(S×T)⁻¹]")?;
    ensure(hom_counts(&direct.category) == vec![1; 16], "product localization is not contractible")?;
    Ok(format!("{} functors factor, {} F̄ × Ḡ pairs agree", report.universal.functors, report.bar_pairs))
}

fn secondary_check() -> Outcome {
    let m = chaotic_bicategory(&MonoidalCategory::quantale(1), &["U", "V"]).map_err(err)?;
    let (_, all) = canonical_bases(&m);
    let sec = secondary_localization(&all).map_err(err)?;
    validate_bicategory(sec.bicategory.clone()).map_err(err)?;
    let squares = verify_composition_cube(&sec).map_err(err)?;

    let q = suspend_monoidal(&MonoidalCategory::quantale(5)).map_err(err)?;
    let (_, qall) = canonical_bases(&q);
    let qsec = secondary_localization(&qall).map_err(err)?;
    let (_, po) = metric_enrichment(&metric3(), None, 3).map_err(err)?;
    let red = reduce_point(&po, &qsec).map_err(err)?;
    ensure(red.base.w == CellSet::invertible(&qsec.bicategory), "reduced point is not over (W⁻¹M, 2-Iso)")?;
    ensure(red.is_segal() && red.is_homomorphism(), "reduced point is not strict Segal")?;
    Ok(format!("W⁻¹M valid, {squares} composition cubes commute; reduced metric point strict Segal"))
}

fn two_by_two() -> Distributor {
    type Actions = BTreeMap<(usize, usize), Vec<usize>>;
    let c = interval(1);
    let d = interval(1);
    let values = vec![names(&["q1", "q2"]), names(&["s"]), names(&["p"]), names(&["r1", "r2"])];
    let (f, g) = (c.arrow("(0,1)").expect("arrow"), d.arrow("(0,1)").expect("arrow"));
    let mut left: Actions = BTreeMap::new();
    for b in 0..2 {
        left.insert((c.identity(0), b), (0..values[b].len()).collect());
        left.insert((c.identity(1), b), (0..values[2 + b].len()).collect());
    }
    left.insert((f, 0), vec![0]);
    left.insert((f, 1), vec![0, 0]);
    let mut right: Actions = BTreeMap::new();
    for a in 0..2 {
        right.insert((d.identity(0), a), (0..values[a * 2].len()).collect());
        right.insert((d.identity(1), a), (0..values[a * 2 + 1].len()).collect());
    }
    right.insert((g, 0), vec![0, 0]);
    right.insert((g, 1), vec![0]);
    Distributor::from_actions(c, d, values, &left, &right).expect("valid distributor")
}

fn bridge_check() -> Outcome {
    let x = two_by_two();
    ensure(x.diagram.fibers.iter().all(|f| f.len() <= 2), "fiber larger than 2")?;
    let e = bridge_of_distributor(&x).map_err(err)?;
    let x2 = distributor_of_bridge(&e).map_err(err)?;
    ensure(x2 == x, "distributor -> bridge -> distributor")?;
    ensure(bridge_of_distributor(&x2).map_err(err)? == e, "bridge -> distributor -> bridge")?;

    let thin = thin_bridge(&x.c, &x.d).map_err(err)?;
    let mut sources = vec![e, thin.clone()];
    sources.push(bridge_of_distributor(&distributor_of_bridge(&thin).map_err(err)?).map_err(err)?);
    for src in &sources {
        let k = bridge_morphisms(src, &thin).len();
        ensure(k == 1, format!("{k} bridge morphisms into the thin bridge"))?;
    }
    Ok(format!("round trips exact; exactly one morphism into the thin bridge from {} bridges", sources.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("1 delta-identification", "exact", delta_identification_check),
        ("2 structural isomorphisms", "exact", structural_iso_check),
        ("3 enrichment round trip", "exact", round_trip_check),
        ("4 coherence sensitivity", "exact, 20/20", coherence_check),
        ("5 base axioms", "exact", base_axiom_check),
        ("6 simplicial correspondence", "exact", simplicial_check),
        ("7 cocycle and G-category", "exact", cocycle_acceptance),
        ("8 localization", "exact", localization_check),
        ("9 product localization", "exact", product_check),
        ("10 secondary localization", "exact", secondary_check),
        ("11 bridge equivalence", "exact", bridge_check),
    ];
    let mut failed = Vec::new();
    for (name, tolerance, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS {name} (tolerance: {tolerance}): {detail}"),
            Err(why) => {
                println!("FAIL {name} (tolerance: {tolerance}): {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
