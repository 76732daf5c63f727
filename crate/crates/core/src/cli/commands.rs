//! One function per subcommand. Each returns a report, or an input error
//! when the command cannot reach a verdict.

use std::path::{Path, PathBuf};

use super::build::{BuildError, Workspace};
use super::dsl::{parse_spec, BlockKind, SpecDocument};
use super::report::{InputError, Report};
use crate::bicat::{
    canonical_bases, id2, identity_colax, identity_transformation, validate_colax, validate_modification,
    validate_transformation, Bicategory, Orientation,
};
use crate::bridge::{
    bridge_morphisms, bridge_of_distributor, classical_actions, distributor_of_bridge, thin_bridge,
    validate_bimodule_morphism,
};
use crate::enrichment::{
    base_change, exponential_base_change, foliation, homotopy_monoid_view, nerve_of_coarse, restrict,
    simplicial_correspondence, simplicial_inverse, strict_to_enriched, validate_colax_finset, validate_enriched,
    validate_premorphism, with_base, enriched_to_path,
};
use crate::fincat::{coarse, derive, elements, interior, interval, nerve_level, Derivation, FinCategory, FinFunctor};
use crate::localize::{
    check_fractions, check_naturality, curry, default_targets, localize, localize_fractions,
    product_localization_check, reduce, secondary_localization, uncurry, verify_composition_cube,
    verify_universal_property,
};
use crate::pathcat::{
    build_path_category, check_strictness, concat_chains, delta_identification, embed_and_compress, free_lift,
    path_functor, structural_isos, IsoMode,
};
use crate::simplex::{compose_delta, compose_word, enumerate_hom, factorize_generators, ordinal_sum, DeltaMap};

pub type Outcome = Result<Report, InputError>;

/// Unwraps a build result; check failures become findings.
fn built<T>(r: &mut Report, x: Result<T, BuildError>) -> Result<Option<T>, InputError> {
    match x {
        Ok(v) => Ok(Some(v)),
        Err(BuildError::Input(e)) => Err(e),
        Err(BuildError::Check { code, location, detail }) => {
            r.fail(code, location, detail);
            Ok(None)
        }
    }
}

/// Records a library error and yields `None`.
fn lib<T, E: std::fmt::Debug + std::fmt::Display>(r: &mut Report, location: &str, x: Result<T, E>) -> Option<T> {
    x.map_err(|e| r.fail_with(location, &e)).ok()
}

/// Reads a spec file, falling back to the shipped fixtures for bare names.
pub fn load(path: &Path) -> Result<SpecDocument, InputError> {
    let shipped = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(path);
    let path = if !path.exists() && path.components().count() == 1 && shipped.exists() { &shipped } else { path };
    Ok(parse_spec(path)?)
}

pub fn validate(spec: &Path, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("validate", Some(n));
    for kind in BlockKind::ALL {
        let count = doc.of_kind(kind).count();
        if count > 0 {
            r.stat(format!("{kind} blocks"), count);
        }
    }
    for b in &doc.blocks {
        let name = b.name.as_str();
        match b.kind {
            BlockKind::Category => drop(built(&mut r, ws.category(name))?),
            BlockKind::Monoidal => drop(built(&mut r, ws.monoidal(name))?),
            BlockKind::Bicategory => drop(built(&mut r, ws.bicategory(name))?),
            BlockKind::Base => drop(built(&mut r, ws.base(name))?),
            BlockKind::PathObject | BlockKind::Metric | BlockKind::Cocycle => {
                if let Some(po) = built(&mut r, ws.point(b))? {
                    r.stat(format!("{name} Segal"), po.is_segal());
                }
            }
            BlockKind::Distributor => drop(built(&mut r, ws.distributor(name))?),
            BlockKind::Transport => drop(built(&mut r, ws.transport(name))?),
            BlockKind::Bimodule => drop(built(&mut r, ws.bimodule(name))?),
        }
    }
    Ok(r)
}

pub struct PathArgs<'a> {
    pub spec: Option<&'a Path>,
    pub category: Option<&'a str>,
    pub check: &'a str,
    pub transport: Option<&'a str>,
}

pub fn path(args: PathArgs<'_>, n: usize) -> Outcome {
    let doc = match args.spec {
        Some(p) => load(p)?,
        None => SpecDocument::default(),
    };
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new(&format!("path {}", args.check), Some(n));
    if args.check == "free-lift" {
        let name = args.transport.ok_or_else(|| InputError::MissingArgument("--transport".into()))?;
        let Some(t) = built(&mut r, ws.transport(name))? else { return Ok(r) };
        let Some(p) = lib(&mut r, name, build_path_category(&t.groupoid, n)) else { return Ok(r) };
        if let Some(lift) = lib(&mut r, name, free_lift(&p, &t.bicategory, &t.underlying, &t.functor)) {
            r.stat("groupoid objects", t.groupoid.object_count());
            r.stat("matrices", t.matrices.len());
            r.stat("chains", p.chain_count());
            r.stat("strict", lift.strict);
        }
        return Ok(r);
    }
    let name = args.category.ok_or_else(|| InputError::MissingArgument("--category".into()))?;
    let Some(c) = built(&mut r, ws.category(name))? else { return Ok(r) };
    match args.check {
        "delta-iso" => {
            let Some(p) = lib(&mut r, name, build_path_category(&c, n)) else { return Ok(r) };
            let Some(d) = lib(&mut r, name, delta_identification(&p)) else { return Ok(r) };
            let h = p.path_hom(0, 0);
            for a in 0..=n {
                for b in 0..=n {
                    let expected = enumerate_hom(a, b).len();
                    let witnessed = p.hom_witness(&h.chains[d.chain_of_length[a]], &h.chains[d.chain_of_length[b]]);
                    if d.witness_counts[a][b] != expected || witnessed.is_some() != (expected > 0) {
                        r.fail("IsoFailure", format!("({a},{b})"), format!("{} witnesses, |Δ| = {expected}", d.witness_counts[a][b]));
                    }
                }
            }
            r.stat("chains", p.chain_count());
            r.stat("relations", p.relation_count());
            if n >= 3 {
                r.stat("|Δ(2,2)|", d.witness_counts[2][2]);
                r.stat("|Δ(3,2)|", d.witness_counts[3][2]);
            }
        }
        "strict" => {
            let Some(p) = lib(&mut r, name, build_path_category(&c, n)) else { return Ok(r) };
            if lib(&mut r, name, check_strictness(&p)).is_none() {
                return Ok(r);
            }
            let k = c.object_count();
            let mut concatenated = 0;
            for (a, b, z) in (0..k).flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |z| (a, b, z)))) {
                for s in &p.path_hom(a, b).chains {
                    for t in p.path_hom(b, z).chains.iter().filter(|t| t.len() + s.len() <= n) {
                        let Some(ts) = lib(&mut r, &t.display(&c), concat_chains(t, s, n)) else { return Ok(r) };
                        if p.locate(&ts).is_none() {
                            r.fail("EndpointMismatch", ts.display(&c), "concatenation outside the path category");
                        }
                        concatenated += 1;
                    }
                }
            }
            r.stat("chains", p.chain_count());
            r.stat("relations", p.relation_count());
            r.stat("concatenations", concatenated);
        }
        "embed" => {
            let Some(p) = lib(&mut r, name, build_path_category(&c, n)) else { return Ok(r) };
            let Some(ec) = lib(&mut r, name, embed_and_compress(&p)) else { return Ok(r) };
            let k = c.object_count();
            for f in 0..c.arrow_count() {
                if ec.compress[c.src(f) * k + c.dst(f)][ec.embed[f]] != f {
                    r.fail("IsoFailure", c.arrow_name(f), "compress after embed is not the identity");
                }
            }
            if let Some(id) = lib(&mut r, name, path_functor(&FinFunctor::identity(&c), &p, &p)) {
                r.stat("P(id) strict", id.strict);
            }
            r.stat("arrows", c.arrow_count());
        }
        "opposite" => {
            if let Some(iso) = lib(&mut r, name, structural_isos(IsoMode::Opposite(&c), n)) {
                iso_stats(&mut r, &iso);
            }
        }
        check => {
            let (mode, d) = check
                .strip_prefix("coproduct:")
                .map(|d| ("coproduct", d))
                .or_else(|| check.strip_prefix("fiber-product:").map(|d| ("fiber-product", d)))
                .ok_or_else(|| InputError::Invalid(format!("unknown check {check}")))?;
            let Some(d) = built(&mut r, ws.category(d))? else { return Ok(r) };
            let mode = if mode == "coproduct" { IsoMode::Coproduct(&c, &d) } else { IsoMode::FiberProduct(&c, &d) };
            if let Some(iso) = lib(&mut r, name, structural_isos(mode, n)) {
                iso_stats(&mut r, &iso);
            }
        }
    }
    Ok(r)
}

fn iso_stats(r: &mut Report, iso: &crate::pathcat::IsoReport) {
    r.stat("objects", iso.objects);
    r.stat("chains", iso.chains);
    r.stat("relations", iso.relations);
}

pub fn segal_check(spec: &Path, name: Option<&str>, base: Option<&str>, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("segal-check", Some(n));
    let b = ws.point_block(name).map_err(input)?;
    let Some(mut po) = built(&mut r, ws.point(b))? else { return Ok(r) };
    if let Some(base) = base {
        let (iso, all) = canonical_bases(&po.base.bicategory);
        let w = match base {
            "iso" => iso,
            "all" => all,
            other => match built(&mut r, ws.base(other))? {
                Some(w) => w,
                None => return Ok(r),
            },
        };
        let Some(rebased) = lib(&mut r, base, with_base(&po, w)) else { return Ok(r) };
        po = rebased;
    }
    r.stat("point", &b.name);
    r.stat("cells checked", po.segal.checked);
    r.stat("offenders", po.segal.offenders.len());
    for o in &po.segal.offenders {
        r.fail("NonSegalCell", o.location.replace(' ', ""), format!("{} outside W", o.cell));
    }
    Ok(r)
}

fn input(e: BuildError) -> InputError {
    match e {
        BuildError::Input(e) => e,
        BuildError::Check { detail, .. } => InputError::Invalid(detail),
    }
}

pub fn roundtrip(spec: &Path, name: Option<&str>, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("roundtrip", Some(n));
    let b = ws.point_block(name).map_err(input)?;
    let Some((e, base)) = built(&mut r, ws.enriched(b))? else { return Ok(r) };
    if lib(&mut r, &b.name, validate_enriched(&base.bicategory, &e)).is_none() {
        return Ok(r);
    }
    let Some(po) = lib(&mut r, &b.name, enriched_to_path(&e, &base, n)) else { return Ok(r) };
    let Some(back) = lib(&mut r, &b.name, strict_to_enriched(&po)) else { return Ok(r) };
    let equal = back == e;
    r.stat("objects", e.objects().len());
    r.stat("Segal", po.is_segal());
    r.stat("round-trip equality", equal);
    if !equal {
        r.fail("RoundTripMismatch", &b.name, "strict_to_enriched ∘ enriched_to_path differs from the input");
    }
    Ok(r)
}

pub fn monoid(spec: &Path, name: Option<&str>, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("monoid", Some(n));
    let b = ws.point_block(name).map_err(input)?;
    let Some(po) = built(&mut r, ws.point(b))? else { return Ok(r) };
    let Some(view) = lib(&mut r, &b.name, homotopy_monoid_view(&po)) else { return Ok(r) };
    r.stat("levels", view.objects.len());
    r.stat("structure maps", view.structure.len());
    r.stat("strict", view.is_strict());
    r.stat("homotopy monoid", view.is_homotopy_monoid());
    if !view.unit_map.in_w {
        r.fail("NotHomotopyMonoid", "unit", "unit map outside W");
    }
    for s in view.structure.iter().filter(|s| !s.in_w) {
        r.fail("NotHomotopyMonoid", format!("({},{})", s.m, s.n), "structure map outside W");
    }
    Ok(r)
}

pub fn simplicial(points: usize, n: usize) -> Outcome {
    if points == 0 {
        return Err(InputError::Invalid("--points must be positive".into()));
    }
    let mut r = Report::new("simplicial", Some(n));
    let x = nerve_of_coarse(points, n);
    if lib(&mut r, "nerve", x.check()).is_none() {
        return Ok(r);
    }
    let Some(y) = lib(&mut r, "nerve", simplicial_inverse(&x)) else { return Ok(r) };
    if lib(&mut r, "colax", validate_colax_finset(&y)).is_none() {
        return Ok(r);
    }
    let Some(z) = lib(&mut r, "colax", simplicial_correspondence(&y)) else { return Ok(r) };
    if z != x {
        r.fail("RoundTripMismatch", "simplicial", "X differs after the round trip");
    }
    if lib(&mut r, "simplicial", simplicial_inverse(&z)).as_ref() != Some(&y) {
        r.fail("RoundTripMismatch", "colax", "Y differs after the round trip");
    }
    let names: Vec<String> = (0..points).map(|i| format!("p{i}")).collect();
    let Some(c) = lib(&mut r, "coarse", coarse(&names)) else { return Ok(r) };
    for k in 0..=n {
        let mut count = 0;
        for a in &names {
            for b in &names {
                count += lib(&mut r, "nerve", nerve_level(&c, k, a, b)).map_or(0, |v| v.len());
            }
        }
        if count != x.levels[k] {
            r.fail("LevelMismatch", format!("level{k}"), format!("{} simplices, {count} chains", x.levels[k]));
        }
    }
    let mut maps = 0;
    for a in 0..=n {
        for b in 0..=n {
            for u in enumerate_hom(a, b) {
                maps += 1;
                if compose_word(a, &factorize_generators(&u)) != u {
                    r.fail("FactorizationMismatch", format!("{u:?}"), "generator word recomposes differently");
                }
                if compose_delta(&u, &DeltaMap::identity(a)).as_ref() != Ok(&u) {
                    r.fail("UnitMismatch", format!("{u:?}"), "u ∘ id differs from u");
                }
                let sum = ordinal_sum(&u, &DeltaMap::identity(1));
                if sum.dom() != a + 1 || sum.cod() != b + 1 {
                    r.fail("SumMismatch", format!("{u:?}"), "ordinal sum has the wrong shape");
                }
            }
        }
    }
    r.stat("levels", format!("{:?}", x.levels));
    r.stat("Δ maps checked", maps);
    r.stat("round-trip equality", z == x);
    Ok(r)
}

pub fn bridge(spec: &Path, name: Option<&str>, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("bridge", None);
    let name = match name {
        Some(x) => x.to_string(),
        None => doc
            .sole(BlockKind::Distributor)
            .map(|b| b.name.clone())
            .ok_or_else(|| InputError::MissingArgument("--name".into()))?,
    };
    let Some(x) = built(&mut r, ws.distributor(&name))? else { return Ok(r) };
    let Some(e) = lib(&mut r, &name, bridge_of_distributor(&x)) else { return Ok(r) };
    let Some(x2) = lib(&mut r, &name, distributor_of_bridge(&e)) else { return Ok(r) };
    let Some(e2) = lib(&mut r, &name, bridge_of_distributor(&x2)) else { return Ok(r) };
    if x2 != x {
        r.fail("RoundTripMismatch", "distributor", "distributor differs after the round trip");
    }
    if e2 != e {
        r.fail("RoundTripMismatch", "bridge", "bridge differs after the round trip");
    }
    let Some(thin) = lib(&mut r, &name, thin_bridge(&x.c, &x.d)) else { return Ok(r) };
    let into_thin = bridge_morphisms(&e, &thin).len();
    if into_thin != 1 {
        r.fail("NotTerminal", "thin", format!("{into_thin} bridge morphisms into the thin bridge"));
    }
    let Some(el) = lib(&mut r, &name, elements(&x.diagram, false)) else { return Ok(r) };
    r.stat("fibers", format!("{:?}", x.diagram.fibers.iter().map(Vec::len).collect::<Vec<_>>()));
    r.stat("bridge objects", e.total.object_count());
    r.stat("bridge arrows", e.total.arrow_count());
    r.stat("elements", el.object_count());
    r.stat("morphisms into thin bridge", into_thin);
    r.stat("round-trip equality", x2 == x && e2 == e);
    Ok(r)
}

pub fn bimodule(spec: &Path, name: Option<&str>, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("bimodule", Some(n));
    let name = match name {
        Some(x) => x.to_string(),
        None => doc
            .sole(BlockKind::Bimodule)
            .map(|b| b.name.clone())
            .ok_or_else(|| InputError::MissingArgument("--name".into()))?,
    };
    let Some(b) = built(&mut r, ws.bimodule(&name))? else { return Ok(r) };
    let m = &b.psi.base.bicategory;
    let (path, morph) = (&b.psi.path, &b.psi.morphism);
    if let Some(actions) = lib(&mut r, &name, classical_actions(&b)) {
        r.stat("left actions", actions.left.len());
        r.stat("right actions", actions.right.len());
    }
    let Some(theta) = identity_transformation(path, m, morph) else {
        r.fail("TransformationViolation", &name, "no identity transformation");
        return Ok(r);
    };
    if let Some(pre) = lib(&mut r, &name, validate_bimodule_morphism(&b, &b, theta.clone())) {
        r.stat("identity is a morphism", pre.is_morphism);
    }
    let Some(tr) = lib(&mut r, &name, validate_transformation(path, m, morph, morph, theta)) else { return Ok(r) };
    let omap = &morph.data.omap;
    let comps = tr.data.comp1.iter().enumerate().map(|(a, &c)| id2(m, omap[a], omap[a], c)).collect();
    if lib(&mut r, &name, validate_modification(path, m, morph, morph, &tr, &tr, comps)).is_some() {
        r.stat("identity modification", true);
    }
    r.stat("total objects", b.bridge.total.object_count());
    r.stat("Segal", b.psi.is_segal());
    Ok(r)
}

pub struct LocalizeArgs<'a> {
    pub spec: Option<&'a Path>,
    pub category: Option<&'a str>,
    pub arrows: &'a [String],
    pub product: Option<&'a str>,
    pub product_arrows: &'a [String],
    pub base: Option<&'a str>,
}

/// The listed arrows together with all identities.
fn arrow_class(c: &FinCategory, names: &[String]) -> Result<Vec<usize>, InputError> {
    if names.iter().any(|s| s == "all") {
        return Ok((0..c.arrow_count()).collect());
    }
    let mut s: Vec<usize> = (0..c.object_count()).map(|x| c.identity(x)).collect();
    for name in names {
        s.push(c.arrow(name).ok_or_else(|| InputError::Invalid(format!("unknown arrow {name}")))?);
    }
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

pub fn localize_cmd(args: LocalizeArgs<'_>, n: usize) -> Outcome {
    let doc = match args.spec {
        Some(p) => load(p)?,
        None => SpecDocument::default(),
    };
    let ws = Workspace::new(&doc, n);
    if let Some(name) = args.base {
        let mut r = Report::new("localize base", None);
        let Some(base) = built(&mut r, ws.base(name))? else { return Ok(r) };
        let Some(sec) = lib(&mut r, name, secondary_localization(&base)) else { return Ok(r) };
        let cube = lib(&mut r, name, verify_composition_cube(&sec));
        let k = sec.bicategory.object_count();
        let sizes: Vec<usize> = (0..k)
            .flat_map(|u| (0..k).map(move |v| (u, v)))
            .map(|(u, v)| sec.bicategory.hom(u, v).arrow_count())
            .collect();
        r.stat("bicategory", &sec.bicategory.name);
        r.stat("hom 2-cells", format!("{sizes:?}"));
        r.stat("homomorphism", sec.morphism.strict);
        if let Some(q) = cube {
            r.stat("cube quadruples", q);
        }
        return Ok(r);
    }
    let name = args.category.ok_or_else(|| InputError::MissingArgument("--category or --base".into()))?;
    let mut r = Report::new("localize", None);
    let Some(c) = built(&mut r, ws.category(name))? else { return Ok(r) };
    let s = arrow_class(&c, args.arrows)?;
    let Some(sys) = lib(&mut r, name, check_fractions(&c, &s)) else { return Ok(r) };
    r.stat("identities", sys.identities);
    r.stat("composition", sys.composition);
    r.stat("Ore", sys.ore);
    r.stat("cancellability", sys.cancellability);
    let loc = if sys.admits_fractions() { localize_fractions(&sys) } else { localize(&c, &s) };
    let Some(loc) = lib(&mut r, name, loc) else { return Ok(r) };
    r.stat("method", format!("{:?}", loc.method));
    let k = loc.category.object_count();
    let homs: Vec<usize> = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| loc.category.hom(a, b).len()).collect();
    r.stat("hom sizes", format!("{homs:?}"));
    let targets = default_targets();
    if let Some(u) = lib(&mut r, name, verify_universal_property(&loc, &s, &targets)) {
        r.stat("targets", u.targets);
        r.stat("functors factored", u.functors);
    }
    if let Some(dname) = args.product {
        let Some(d) = built(&mut r, ws.category(dname))? else { return Ok(r) };
        let t = arrow_class(&d, args.product_arrows)?;
        let Some(pr) = lib(&mut r, dname, product_localization_check(&c, &s, &d, &t, &targets)) else { return Ok(r) };
        r.stat("product functors factored", pr.universal.functors);
        r.stat("bar pairs", pr.bar_pairs);
        let Some(cu) = lib(&mut r, dname, curry(&pr.functor, &c, &d)) else { return Ok(r) };
        if lib(&mut r, dname, check_naturality(&cu)).is_none() {
            return Ok(r);
        }
        let back = lib(&mut r, dname, uncurry(&cu));
        let equal = back.as_ref() == Some(&pr.functor);
        r.stat("curry round trip", equal);
        if !equal {
            r.fail("RoundTripMismatch", "curry", "uncurry ∘ curry differs from L_S × L_T");
        }
    }
    Ok(r)
}

pub fn reduce_cmd(spec: &Path, name: Option<&str>, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("reduce", Some(n));
    let b = ws.point_block(name).map_err(input)?;
    let Some(po) = built(&mut r, ws.point(b))? else { return Ok(r) };
    let Some((sec, red)) = lib(&mut r, &b.name, reduce(&po)) else { return Ok(r) };
    r.stat("bicategory", &sec.bicategory.name);
    r.stat("strict", red.morphism.strict);
    r.stat("Segal over 2-Iso", red.is_segal());
    if !red.morphism.strict {
        r.fail("NotStrict", &b.name, "reduced point is not strict");
    }
    Ok(r)
}

/// Runs every derived construction the document supports.
pub fn report(spec: &Path, n: usize) -> Outcome {
    let doc = load(spec)?;
    let ws = Workspace::new(&doc, n);
    let mut r = Report::new("report", Some(n));
    for b in doc.of_kind(BlockKind::Category) {
        let Some(c) = built(&mut r, ws.category(&b.name))? else { continue };
        let op = derive(&derive(&c, Derivation::Opposite), Derivation::Opposite);
        if op.objects() != c.objects() || op.arrow_count() != c.arrow_count() {
            r.fail("IsoFailure", &b.name, "opposite of opposite differs");
        }
        let core = interior(&c);
        let names = c.objects().to_vec();
        let is_coarse = coarse(&names).is_ok_and(|k| k == c);
        let is_interval = c.object_count() > 0 && interval(c.object_count() - 1) == c;
        let mut chains = 0;
        for a in &names {
            for z in &names {
                chains += lib(&mut r, &b.name, nerve_level(&c, n.min(3), a, z)).map_or(0, |v| v.len());
            }
        }
        let sq = derive(&c, Derivation::Product(&c));
        r.stat(
            format!("{} summary", b.name),
            format!(
                "{} objects, {} arrows, core {}, coarse {is_coarse}, interval {is_interval}, {} chains of length {}, square {} arrows, sum {} objects",
                c.object_count(),
                c.arrow_count(),
                core.arrow_count(),
                chains,
                n.min(3),
                sq.arrow_count(),
                derive(&c, Derivation::Coproduct(&c)).object_count()
            ),
        );
    }
    for b in doc.blocks.iter().filter(|b| matches!(b.kind, BlockKind::PathObject | BlockKind::Metric | BlockKind::Cocycle)) {
        let Some(po) = built(&mut r, ws.point(b))? else { continue };
        let loc = b.name.as_str();
        let id = FinFunctor::identity(po.shape());
        if lib(&mut r, loc, restrict(&po, &id)).is_some_and(|x| x != po) {
            r.fail("RoundTripMismatch", loc, "restriction along the identity differs");
        }
        let m = &po.base.bicategory;
        if let Some(l) = lib(&mut r, loc, validate_colax(m, m, identity_colax(m), Orientation::Colax)) {
            if lib(&mut r, loc, base_change(&po, &l, &po.base)).is_some_and(|x| x != po) {
                r.fail("RoundTripMismatch", loc, "base change along the identity differs");
            }
        }
        if let Some(sigma) = identity_transformation(&po.path, m, &po.morphism) {
            if let Some(pre) = lib(&mut r, loc, validate_premorphism(&id, sigma, &po, &po, true)) {
                r.stat(format!("{loc} identity morphism"), pre.is_morphism);
            }
        }
        let leaves = (0..m.object_count()).filter(|&u| foliation(&po, u).is_ok()).count();
        r.stat(format!("{loc} Segal"), po.is_segal());
        r.stat(format!("{loc} leaves"), leaves);
        if b.kind == BlockKind::Cocycle {
            if let Some(g) = b.first("group").filter(|d| d.args[0] == "additive") {
                let order: usize = g.args[1].parse().unwrap_or(0);
                if let Some(out) = lib(&mut r, loc, exponential_base_change(&po, order)) {
                    r.stat(format!("{loc} exponential Segal"), out.is_segal());
                }
            }
        }
    }
    if r.findings.is_empty() && r.stats.is_empty() {
        r.stat("blocks", doc.blocks.len());
    }
    Ok(r)
}
