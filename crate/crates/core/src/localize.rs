//! Localization of finite categories at a class of arrows, and of a base of
//! enrichment at its class `W`.
//!
//! Localizations are computed by a right calculus of fractions, or for thin
//! categories by closing the order under reversed `S`-arrows. Either way the
//! result is only trusted after its universal property has been checked by
//! exhaustive factorization against a finite family of test targets.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::bicat::{
    canonical_bases, composable_pairs, compose_colax, id2, validate_bicategory, validate_colax, BaseOfEnrichment,
    BicatError, Bicategory, BicategoryParts, ColaxData, ColaxMorphism, FinBicategory, FunctorMap, Orientation,
};
use crate::enrichment::{check_path_object, EnrichError, PathObject};
use crate::fincat::{coarse, interval, product, ArrowRec, FinCatError, FinCategory, FinFunctor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizeError {
    #[error("arrow index {0} out of range")]
    UnknownArrow(usize),
    #[error("not a fraction system: {0}")]
    NotAFractionSystem(String),
    #[error("Ore condition fails: {0}")]
    OreViolation(String),
    #[error("saturation bound exceeded: {0}")]
    SaturationBoundExceeded(String),
    #[error("no factorization of {0}")]
    FactorizationMissing(String),
    #[error("factorization of {0} is not unique")]
    FactorizationNotUnique(String),
    #[error("hom ({u}, {v}) is not localizable: {reason}")]
    HomNotLocalizable { u: String, v: String, reason: String },
    #[error("{0} is not inverted")]
    NotInverted(String),
    #[error("naturality fails at ({h}, {g})")]
    NaturalityViolation { h: String, g: String },
    #[error("composition cube fails: {0}")]
    CubeViolation(String),
    #[error("point is not Segal: {0}")]
    NotSegal(String),
    #[error(transparent)]
    FinCat(#[from] FinCatError),
    #[error(transparent)]
    Bicat(#[from] BicatError),
    #[error(transparent)]
    Enrich(#[from] EnrichError),
}

pub type Result<T> = std::result::Result<T, LocalizeError>;

/// Upper bound on the number of roofs the fraction construction enumerates.
pub const DEFAULT_ROOF_BOUND: usize = 50_000;

/// A class `S` of arrows with the outcome of each fraction-calculus check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionSystem {
    pub category: FinCategory,
    pub s: BTreeSet<usize>,
    pub identities: bool,
    pub composition: bool,
    pub ore: bool,
    pub cancellability: bool,
    /// First failure found, in the order the flags are listed.
    pub failure: Option<String>,
}

impl FractionSystem {
    pub fn admits_fractions(&self) -> bool {
        self.identities && self.composition && self.ore && self.cancellability
    }

    pub fn contains(&self, f: usize) -> bool {
        self.s.contains(&f)
    }
}

pub fn check_fractions(c: &FinCategory, s: &[usize]) -> Result<FractionSystem> {
    if let Some(&f) = s.iter().find(|&&f| f >= c.arrow_count()) {
        return Err(LocalizeError::UnknownArrow(f));
    }
    let set: BTreeSet<usize> = s.iter().copied().collect();
    let mut failure = None;
    let mut note = |msg: String| {
        failure.get_or_insert(msg);
    };

    let missing_id = (0..c.object_count()).find(|&x| !set.contains(&c.identity(x)));
    if let Some(x) = missing_id {
        note(format!("identity {} not in S", c.arrow_name(c.identity(x))));
    }

    let mut composition = true;
    'comp: for &f in &set {
        for g in c.hom_out(c.dst(f)) {
            if set.contains(&g) && !set.contains(&c.compose(g, f).unwrap()) {
                note(format!("{} ∘ {} not in S", c.arrow_name(g), c.arrow_name(f)));
                composition = false;
                break 'comp;
            }
        }
    }

    // For t: Y → B in S and f: X → B there is a square t∘f' = f∘s' with s' in S.
    let mut ore = true;
    'ore: for &t in &set {
        let (y, b) = (c.src(t), c.dst(t));
        for f in c.hom_into(b) {
            let x = c.src(f);
            let found = (0..c.object_count()).any(|z| {
                c.hom(z, x).iter().filter(|&&s2| set.contains(&s2)).any(|&s2| {
                    let fs = c.compose(f, s2).unwrap();
                    c.hom(z, y).iter().any(|&f2| c.compose(t, f2) == Some(fs))
                })
            });
            if !found {
                note(format!("no square for ({}, {})", c.arrow_name(f), c.arrow_name(t)));
                ore = false;
                break 'ore;
            }
        }
    }

    // t∘f = t∘g with t in S forces f∘s = g∘s for some s in S.
    let mut cancellability = true;
    'canc: for &t in &set {
        let y = c.src(t);
        for x in 0..c.object_count() {
            let hom = c.hom(x, y);
            for &f in hom {
                for &g in hom {
                    if f >= g || c.compose(t, f) != c.compose(t, g) {
                        continue;
                    }
                    let ok = (0..c.object_count()).any(|z| {
                        c.hom(z, x).iter().any(|&s2| set.contains(&s2) && c.compose(f, s2) == c.compose(g, s2))
                    });
                    if !ok {
                        note(format!(
                            "{} does not cancel on ({}, {})",
                            c.arrow_name(t),
                            c.arrow_name(f),
                            c.arrow_name(g)
                        ));
                        cancellability = false;
                        break 'canc;
                    }
                }
            }
        }
    }

    Ok(FractionSystem {
        category: c.clone(),
        s: set,
        identities: missing_id.is_none(),
        composition,
        ore,
        cancellability,
        failure,
    })
}

/// A right fraction `f ∘ s⁻¹` drawn as `A ←s− X −f→ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Roof {
    pub apex: usize,
    pub s: usize,
    pub f: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fractions,
    Posetal,
}

/// `C[S⁻¹]` with `L_S: C → C[S⁻¹]`. Under [`Method::Fractions`] every arrow
/// carries its class of roofs; the posetal construction records none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedCategory {
    pub category: FinCategory,
    pub functor: FinFunctor,
    pub classes: Vec<Vec<Roof>>,
    pub method: Method,
}

impl LocalizedCategory {
    pub fn source(&self) -> &FinCategory {
        &self.functor.source
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn localize_fractions(sys: &FractionSystem) -> Result<LocalizedCategory> {
    localize_fractions_bounded(sys, DEFAULT_ROOF_BOUND)
}

pub fn localize_fractions_bounded(sys: &FractionSystem, bound: usize) -> Result<LocalizedCategory> {
    let why = || sys.failure.clone().unwrap_or_default();
    if !sys.ore {
        return Err(LocalizeError::OreViolation(why()));
    }
    if !sys.admits_fractions() {
        return Err(LocalizeError::NotAFractionSystem(why()));
    }
    let c = &sys.category;
    let n = c.object_count();

    // roofs[a * n + b]: every roof from a to b
    let mut roofs: Vec<Vec<Roof>> = vec![Vec::new(); n * n];
    let mut total = 0usize;
    for a in 0..n {
        for b in 0..n {
            for x in 0..n {
                for &s in c.hom(x, a).iter().filter(|s| sys.contains(**s)) {
                    for &f in c.hom(x, b) {
                        roofs[a * n + b].push(Roof { apex: x, s, f });
                    }
                }
            }
            total += roofs[a * n + b].len();
            if total > bound {
                return Err(LocalizeError::SaturationBoundExceeded(format!("more than {bound} roofs")));
            }
        }
    }

    // classes per hom, via refinement (s, f) ~ (s∘u, f∘u) with s∘u in S
    let mut hom_classes: Vec<Vec<Vec<Roof>>> = Vec::with_capacity(n * n);
    for list in &roofs {
        let index: HashMap<Roof, usize> = list.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut uf = UnionFind((0..list.len()).collect());
        for (i, r) in list.iter().enumerate() {
            for u in c.hom_into(r.apex) {
                let su = c.compose(r.s, u).unwrap();
                if sys.contains(su) {
                    let j = index[&Roof { apex: c.src(u), s: su, f: c.compose(r.f, u).unwrap() }];
                    uf.union(i, j);
                }
            }
        }
        let mut groups: Vec<Vec<Roof>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, &r) in list.iter().enumerate() {
            let root = uf.find(i);
            let k = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(r);
        }
        hom_classes.push(groups);
    }

    // classes hit by L_S come first, in arrow order
    let trivial = |f: usize| Roof { apex: c.src(f), s: c.identity(c.src(f)), f };
    let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
    let mut classes: Vec<Vec<Roof>> = Vec::new();
    let mut arrows: Vec<ArrowRec> = Vec::new();
    let mut amap = Vec::with_capacity(c.arrow_count());
    for f in 0..c.arrow_count() {
        let (a, b) = (c.src(f), c.dst(f));
        let g = hom_classes[a * n + b].iter().position(|g| g.contains(&trivial(f))).expect("trivial roof");
        let k = *slot.entry((a * n + b, g)).or_insert_with(|| {
            classes.push(hom_classes[a * n + b][g].clone());
            arrows.push(ArrowRec { name: c.arrow_name(f).to_string(), src: a, dst: b });
            classes.len() - 1
        });
        amap.push(k);
    }
    for a in 0..n {
        for b in 0..n {
            for (g, group) in hom_classes[a * n + b].iter().enumerate() {
                slot.entry((a * n + b, g)).or_insert_with(|| {
                    let r = group[0];
                    classes.push(group.clone());
                    let name = format!("{}/{}", c.arrow_name(r.f), c.arrow_name(r.s));
                    arrows.push(ArrowRec { name, src: a, dst: b });
                    classes.len() - 1
                });
            }
        }
    }
    let class_of: HashMap<Roof, usize> =
        classes.iter().enumerate().flat_map(|(k, g)| g.iter().map(move |&r| (r, k))).collect();

    // (t, g) ∘ (s, f) = (s∘s', g∘f') for an Ore square t∘f' = f∘s'
    let square = |f: usize, t: usize| -> Option<(usize, usize)> {
        let (x, y) = (c.src(f), c.src(t));
        (0..n).find_map(|z| {
            c.hom(z, x).iter().filter(|&&s2| sys.contains(s2)).find_map(|&s2| {
                let fs = c.compose(f, s2).unwrap();
                c.hom(z, y).iter().find(|&&f2| c.compose(t, f2) == Some(fs)).map(|&f2| (s2, f2))
            })
        })
    };
    let mut comp = HashMap::new();
    for (k1, first) in classes.iter().enumerate() {
        let r1 = first[0];
        for (k2, second) in classes.iter().enumerate() {
            if arrows[k2].src != arrows[k1].dst {
                continue;
            }
            let r2 = second[0];
            let (s2, f2) = square(r1.f, r2.s).ok_or_else(|| {
                LocalizeError::OreViolation(format!("({}, {})", c.arrow_name(r1.f), c.arrow_name(r2.s)))
            })?;
            let r = Roof { apex: c.src(s2), s: c.compose(r1.s, s2).unwrap(), f: c.compose(r2.f, f2).unwrap() };
            comp.insert((k2, k1), class_of[&r]);
        }
    }
    let identities = (0..n).map(|x| amap[c.identity(x)]).collect();
    let category = FinCategory::assemble(c.objects().to_vec(), arrows, identities, comp);
    category.check()?;
    let functor = FinFunctor::new(c.clone(), category.clone(), (0..n).collect(), amap)?;
    let out = LocalizedCategory { category, functor, classes, method: Method::Fractions };
    check_inverts(&out, &sys.s)?;
    Ok(out)
}

fn check_inverts(loc: &LocalizedCategory, s: &BTreeSet<usize>) -> Result<()> {
    match s.iter().find(|&&f| !loc.category.is_invertible(loc.functor.amap[f])) {
        Some(&f) => Err(LocalizeError::NotInverted(loc.source().arrow_name(f).into())),
        None => Ok(()),
    }
}

/// Localization of a thin category: the preorder generated by the arrows and
/// the reversed `S`-arrows. Existing arrows keep their ids; new ones are
/// named `a~b`.
pub fn localize_posetal(c: &FinCategory, s: &[usize]) -> Result<LocalizedCategory> {
    if !c.is_thin() {
        return Err(LocalizeError::SaturationBoundExceeded("category is not thin".into()));
    }
    if let Some(&f) = s.iter().find(|&&f| f >= c.arrow_count()) {
        return Err(LocalizeError::UnknownArrow(f));
    }
    let n = c.object_count();
    let mut reach = vec![vec![false; n]; n];
    for f in 0..c.arrow_count() {
        reach[c.src(f)][c.dst(f)] = true;
    }
    for &f in s {
        reach[c.dst(f)][c.src(f)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut rel: Vec<ArrowRec> = c.arrows().to_vec();
    for (a, row) in reach.iter().enumerate() {
        for (b, &r) in row.iter().enumerate() {
            if r && c.arrow_between(a, b).is_none() {
                rel.push(ArrowRec { name: format!("{}~{}", c.object_name(a), c.object_name(b)), src: a, dst: b });
            }
        }
    }
    let category = FinCategory::from_preorder(c.objects().to_vec(), rel);
    category.check()?;
    let functor = FinFunctor::new(c.clone(), category.clone(), (0..n).collect(), (0..c.arrow_count()).collect())?;
    let out = LocalizedCategory { category, functor, classes: Vec::new(), method: Method::Posetal };
    check_inverts(&out, &s.iter().copied().collect())?;
    Ok(out)
}

/// Fractions when available; otherwise the posetal construction, accepted
/// only if it passes the universal-property check on [`default_targets`].
pub fn localize(c: &FinCategory, s: &[usize]) -> Result<LocalizedCategory> {
    let sys = check_fractions(c, s)?;
    if sys.admits_fractions() {
        return localize_fractions(&sys);
    }
    if !c.is_thin() {
        return localize_fractions(&sys);
    }
    let loc = localize_posetal(c, s)?;
    match verify_universal_property(&loc, s, &default_targets()) {
        Ok(_) => Ok(loc),
        Err(e) => Err(LocalizeError::SaturationBoundExceeded(format!("posetal closure is not a localization: {e}"))),
    }
}

/// Small categories used as test targets: at most three objects, including
/// a non-thin one.
pub fn default_targets() -> Vec<FinCategory> {
    let z2 = vec!["e".to_string(), "g".to_string()];
    vec![
        FinCategory::terminal(),
        FinCategory::discrete(&["x", "y"]),
        interval(1),
        coarse(&["x", "y"]).expect("nonempty"),
        interval(2),
        FinCategory::from_monoid("*", &z2, &[vec![0, 1], vec![1, 0]], 0),
        coarse(&["x", "y", "z"]).expect("nonempty"),
    ]
}

pub fn inverts(f: &FinFunctor, s: &BTreeSet<usize>) -> bool {
    s.iter().all(|&a| f.target.is_invertible(f.amap[a]))
}

fn describe(f: &FinFunctor) -> String {
    let parts: Vec<String> = (0..f.source.arrow_count())
        .filter(|&a| !f.source.is_identity(a))
        .map(|a| format!("{}↦{}", f.source.arrow_name(a), f.target.arrow_name(f.amap[a])))
        .collect();
    format!("F[{}]", parts.join(", "))
}

/// The unique `G` with `G ∘ l = f`.
pub fn factor_through(l: &FinFunctor, f: &FinFunctor) -> Result<FinFunctor> {
    let missing = || LocalizeError::FactorizationMissing(describe(f));
    if l.source != f.source {
        return Err(missing());
    }
    let mut fo: Vec<Option<usize>> = vec![None; l.target.object_count()];
    for (x, &y) in l.omap.iter().enumerate() {
        match fo[y] {
            Some(z) if z != f.omap[x] => return Err(missing()),
            _ => fo[y] = Some(f.omap[x]),
        }
    }
    let mut fa: Vec<Option<usize>> = vec![None; l.target.arrow_count()];
    for (a, &b) in l.amap.iter().enumerate() {
        match fa[b] {
            Some(z) if z != f.amap[a] => return Err(missing()),
            _ => fa[b] = Some(f.amap[a]),
        }
    }
    let found = crate::fincat::enumerate_functors(&l.target, &f.target, &fo, &fa);
    match found.len() {
        0 => Err(missing()),
        1 => {
            let (omap, amap) = found.into_iter().next().unwrap();
            Ok(FinFunctor::new(l.target.clone(), f.target.clone(), omap, amap)?)
        }
        _ => Err(LocalizeError::FactorizationNotUnique(describe(f))),
    }
}

/// Scope and size of a universal-property check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UniversalReport {
    pub targets: usize,
    pub functors: usize,
}

/// Every functor from the source into a target that inverts `s` factors
/// uniquely through `loc.functor`.
pub fn verify_universal_property(loc: &LocalizedCategory, s: &[usize], targets: &[FinCategory]) -> Result<UniversalReport> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    check_inverts(loc, &set)?;
    universal_for(&loc.functor, &set, targets)
}

fn universal_for(l: &FinFunctor, s: &BTreeSet<usize>, targets: &[FinCategory]) -> Result<UniversalReport> {
    let mut report = UniversalReport { targets: targets.len(), functors: 0 };
    for e in targets {
        for (omap, amap) in crate::fincat::enumerate_functors(&l.source, e, &[], &[]) {
            let f = FinFunctor::new(l.source.clone(), e.clone(), omap, amap)?;
            if inverts(&f, s) {
                factor_through(l, &f)?;
                report.functors += 1;
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Currying

/// `α(F): A → [B, E]`: a functor `F(x, −)` per object and a natural
/// transformation `F(h, −)` per arrow, stored by components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curried {
    pub a: FinCategory,
    pub b: FinCategory,
    pub objects: Vec<FinFunctor>,
    /// `arrows[h][y] = F(h, 1_y)`.
    pub arrows: Vec<Vec<usize>>,
}

pub fn curry(f: &FinFunctor, a: &FinCategory, b: &FinCategory) -> Result<Curried> {
    if f.source != product(a, b) {
        return Err(FinCatError::MalformedFunctor("source is not the product".into()).into());
    }
    let (nbo, nba) = (b.object_count(), b.arrow_count());
    let objects = (0..a.object_count())
        .map(|x| {
            let omap = (0..nbo).map(|y| f.omap[x * nbo + y]).collect();
            let amap = (0..nba).map(|g| f.amap[a.identity(x) * nba + g]).collect();
            FinFunctor::new(b.clone(), f.target.clone(), omap, amap)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let arrows = (0..a.arrow_count())
        .map(|h| (0..nbo).map(|y| f.amap[h * nba + b.identity(y)]).collect())
        .collect();
    let out = Curried { a: a.clone(), b: b.clone(), objects, arrows };
    check_naturality(&out)?;
    Ok(out)
}

/// `F(x', g) ∘ α_h(y) = α_h(y') ∘ F(x, g)` for every `h: x → x'`, `g: y → y'`.
pub fn check_naturality(c: &Curried) -> Result<()> {
    let e = &c.objects.first().map(|f| f.target.clone()).unwrap_or_else(FinCategory::terminal);
    for h in 0..c.a.arrow_count() {
        let (x, x2) = (c.a.src(h), c.a.dst(h));
        for g in 0..c.b.arrow_count() {
            let (y, y2) = (c.b.src(g), c.b.dst(g));
            let lhs = e.compose(c.objects[x2].amap[g], c.arrows[h][y]);
            let rhs = e.compose(c.arrows[h][y2], c.objects[x].amap[g]);
            if lhs.is_none() || lhs != rhs {
                return Err(LocalizeError::NaturalityViolation {
                    h: c.a.arrow_name(h).into(),
                    g: c.b.arrow_name(g).into(),
                });
            }
        }
    }
    Ok(())
}

/// `α⁻¹`: `F(h, g) = α_h(y') ∘ F(x, g)`.
pub fn uncurry(c: &Curried) -> Result<FinFunctor> {
    check_naturality(c)?;
    let e = c.objects.first().map(|f| f.target.clone()).unwrap_or_else(FinCategory::terminal);
    let mut omap = Vec::new();
    for x in 0..c.a.object_count() {
        omap.extend(c.objects[x].omap.iter().copied());
    }
    let mut amap = Vec::new();
    for h in 0..c.a.arrow_count() {
        let x = c.a.src(h);
        for g in 0..c.b.arrow_count() {
            let composite = e
                .compose(c.arrows[h][c.b.dst(g)], c.objects[x].amap[g])
                .ok_or_else(|| FinCatError::MalformedFunctor("components do not compose".into()))?;
            amap.push(composite);
        }
    }
    Ok(FinFunctor::new(product(&c.a, &c.b), e, omap, amap)?)
}

// ---------------------------------------------------------------------------
// Products

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    /// `L_S × L_T`.
    pub functor: FinFunctor,
    pub universal: UniversalReport,
    /// Pairs `(F, G)` for which the factorization of `F × G` was compared
    /// with the product of the factorizations.
    pub bar_pairs: usize,
}

/// `S × T` as arrow indices of `C × D`.
pub fn product_class(c: &FinCategory, s: &[usize], d: &FinCategory, t: &[usize]) -> BTreeSet<usize> {
    let _ = c;
    let na = d.arrow_count();
    s.iter().flat_map(|&f| t.iter().map(move |&g| f * na + g)).collect()
}

/// Checks that `L_S × L_T` localizes `C × D` at `S × T` against `targets`,
/// and that the factorization of `F × G` is the product of the
/// factorizations of `F` and `G` for every pair of test functors into
/// targets with at most two objects.
pub fn product_localization_check(
    c: &FinCategory,
    s: &[usize],
    d: &FinCategory,
    t: &[usize],
    targets: &[FinCategory],
) -> Result<ProductReport> {
    let ls = localize_fractions(&check_fractions(c, s)?)?;
    let lt = localize_fractions(&check_fractions(d, t)?)?;
    let l = ls.functor.times(&lt.functor);
    let st = product_class(c, s, d, t);
    let universal = universal_for(&l, &st, targets)?;

    let (sset, tset): (BTreeSet<usize>, BTreeSet<usize>) = (s.iter().copied().collect(), t.iter().copied().collect());
    let small: Vec<&FinCategory> = targets.iter().filter(|e| e.object_count() <= 2).collect();
    let inverting = |src: &FinCategory, e: &FinCategory, class: &BTreeSet<usize>| -> Result<Vec<FinFunctor>> {
        let mut out = Vec::new();
        for (omap, amap) in crate::fincat::enumerate_functors(src, e, &[], &[]) {
            let f = FinFunctor::new(src.clone(), e.clone(), omap, amap)?;
            if inverts(&f, class) {
                out.push(f);
            }
        }
        Ok(out)
    };
    let mut bar_pairs = 0;
    for e1 in &small {
        let fs = inverting(c, e1, &sset)?;
        for e2 in &small {
            let gs = inverting(d, e2, &tset)?;
            for f in &fs {
                let fbar = factor_through(&ls.functor, f)?;
                for g in &gs {
                    let joint = factor_through(&l, &f.times(g))?;
                    let separate = fbar.times(&factor_through(&lt.functor, g)?);
                    if joint != separate {
                        return Err(LocalizeError::FactorizationNotUnique(format!(
                            "{} × {}",
                            describe(f),
                            describe(g)
                        )));
                    }
                    bar_pairs += 1;
                }
            }
        }
    }
    Ok(ProductReport { functor: l, universal, bar_pairs })
}

// ---------------------------------------------------------------------------
// Secondary localization

/// `W⁻¹M` with the homomorphism `L_W: M → W⁻¹M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondaryLocalization {
    pub source: BaseOfEnrichment,
    pub bicategory: FinBicategory,
    /// Indexed by `u * n + v`.
    pub homs: Vec<LocalizedCategory>,
    /// `c(U,V,W): W⁻¹M(V,W) × W⁻¹M(U,V) → W⁻¹M(U,W)`, indexed by
    /// `(u * n + v) * n + w`.
    pub composition: Vec<FinFunctor>,
    pub morphism: ColaxMorphism,
}

impl SecondaryLocalization {
    pub fn hom(&self, u: usize, v: usize) -> &LocalizedCategory {
        &self.homs[u * self.n() + v]
    }

    pub fn composition(&self, u: usize, v: usize, w: usize) -> &FinFunctor {
        let n = self.n();
        &self.composition[(u * n + v) * n + w]
    }

    fn n(&self) -> usize {
        self.bicategory.object_count()
    }
}

/// Composition in `m` as a functor `M(V,W) × M(U,V) → M(U,W)`.
pub fn composition_functor(m: &FinBicategory, u: usize, v: usize, w: usize) -> Result<FinFunctor> {
    let (hf, hg, hh) = (m.hom(u, v), m.hom(v, w), m.hom(u, w));
    let undefined = || BicatError::Malformed("composition undefined".into());
    let mut omap = Vec::new();
    for g in 0..hg.object_count() {
        for f in 0..hf.object_count() {
            omap.push(m.compose1(u, v, w, g, f).ok_or_else(undefined)?);
        }
    }
    let mut amap = Vec::new();
    for b in 0..hg.arrow_count() {
        for a in 0..hf.arrow_count() {
            amap.push(m.compose2(u, v, w, b, a).ok_or_else(undefined)?);
        }
    }
    Ok(FinFunctor::new(product(hg, hf), hh.clone(), omap, amap)?)
}

pub fn secondary_localization(base: &BaseOfEnrichment) -> Result<SecondaryLocalization> {
    let m = &base.bicategory;
    let n = m.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let w = base.w.hom_cells(u, v);
            let loc = localize(m.hom(u, v), &w).map_err(|e| LocalizeError::HomNotLocalizable {
                u: m.object_name(u).into(),
                v: m.object_name(v).into(),
                reason: e.to_string(),
            })?;
            homs.push(loc);
        }
    }
    let lw = |u: usize, v: usize| &homs[u * n + v];

    let mut composition = Vec::with_capacity(n * n * n);
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let c = composition_functor(m, u, v, w)?;
                let pair = lw(v, w).functor.times(&lw(u, v).functor);
                composition.push(factor_through(&pair, &lw(u, w).functor.after(&c))?);
            }
        }
    }
    let cbar = |u: usize, v: usize, w: usize| &composition[(u * n + v) * n + w];

    // L is the identity on 1-cells, so transported structure cells are images.
    let comp1 = |u: usize, v: usize, w: usize, g: usize, f: usize| {
        Some(cbar(u, v, w).omap[g * lw(u, v).category.object_count() + f])
    };
    let comp2 = |u: usize, v: usize, w: usize, b: usize, a: usize| {
        Some(cbar(u, v, w).amap[b * lw(u, v).category.arrow_count() + a])
    };
    let assoc = |u, v, w, x, h, g, f| m.associator(u, v, w, x, h, g, f).map(|a| lw(u, x).functor.amap[a]);
    let lunit = |u, v, f| Some(lw(u, v).functor.amap[m.left_unitor(u, v, f)]);
    let runit = |u, v, f| Some(lw(u, v).functor.amap[m.right_unitor(u, v, f)]);
    let wm = FinBicategory::build(BicategoryParts {
        name: format!("{}[W^-1]", m.name),
        objects: m.objects().to_vec(),
        homs: homs.iter().map(|h| h.category.clone()).collect(),
        units: (0..n).map(|u| m.unit(u)).collect(),
        comp1: &comp1,
        comp2: &comp2,
        assoc: &assoc,
        lunit: &lunit,
        runit: &runit,
    })?;
    let wm = validate_bicategory(wm)?;

    let mut phi = std::collections::BTreeMap::new();
    for p in composable_pairs(m) {
        let ts = m.compose1(p.a, p.b, p.c, p.t, p.s).unwrap();
        phi.insert(p, id2(&wm, p.a, p.c, ts));
    }
    let data = ColaxData {
        omap: (0..n).collect(),
        homs: homs
            .iter()
            .map(|h| FunctorMap { obj: h.functor.omap.clone(), arr: h.functor.amap.clone() })
            .collect(),
        phi,
        phi_unit: (0..n).map(|u| id2(&wm, u, u, m.unit(u))).collect(),
    };
    let morphism = validate_colax(m, &wm, data, Orientation::Colax)?;
    for u in 0..n {
        for v in 0..n {
            for a in base.w.hom_cells(u, v) {
                if !wm.hom(u, v).is_invertible(lw(u, v).functor.amap[a]) {
                    return Err(LocalizeError::NotInverted(m.cell2_name(u, v, a)));
                }
            }
        }
    }
    Ok(SecondaryLocalization { source: base.clone(), bicategory: wm, homs, composition, morphism })
}

/// Checks both faces of the composition cube for every quadruple:
/// `L ∘ c ∘ (1 × c) = c̄ ∘ (1 × c̄) ∘ L³` and `L ∘ c ∘ (c × 1) = c̄ ∘ (c̄ × 1) ∘ L³`,
/// cell by cell on `M(W,Z) × M(V,W) × M(U,V)`. Since `L³` is a localization,
/// agreement there identifies `c̄ ∘ (1 × c̄)` and `c̄ ∘ (c̄ × 1)` as the unique
/// factorizations. Returns the number of quadruples checked.
pub fn verify_composition_cube(sec: &SecondaryLocalization) -> Result<usize> {
    let m = &sec.source.bicategory;
    let n = m.object_count();
    let l = |a: usize, b: usize| &sec.hom(a, b).functor;
    // c̄(a,b,c) on a pair of objects or arrows of the localized homs
    let cbar_o = |a: usize, b: usize, c: usize, y: usize, x: usize| {
        sec.composition(a, b, c).omap[y * sec.hom(a, b).category.object_count() + x]
    };
    let cbar_a = |a: usize, b: usize, c: usize, y: usize, x: usize| {
        sec.composition(a, b, c).amap[y * sec.hom(a, b).category.arrow_count() + x]
    };
    let undefined = || LocalizeError::Bicat(BicatError::Malformed("composition undefined".into()));
    let mut checked = 0;
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                for z in 0..n {
                    let (hf, hg, hh) = (m.hom(u, v), m.hom(v, w), m.hom(w, z));
                    let at = |face: &str| LocalizeError::CubeViolation(format!("{face} at {}", quad(m, [u, v, w, z])));
                    for h in 0..hh.object_count() {
                        for g in 0..hg.object_count() {
                            for f in 0..hf.object_count() {
                                let (lh, lg, lf) = (l(w, z).omap[h], l(v, w).omap[g], l(u, v).omap[f]);
                                let gf = m.compose1(u, v, w, g, f).ok_or_else(undefined)?;
                                let hg_ = m.compose1(v, w, z, h, g).ok_or_else(undefined)?;
                                let one = m.compose1(u, w, z, h, gf).ok_or_else(undefined)?;
                                let two = m.compose1(u, v, z, hg_, f).ok_or_else(undefined)?;
                                if l(u, z).omap[one] != cbar_o(u, w, z, lh, cbar_o(u, v, w, lg, lf)) {
                                    return Err(at("σ1"));
                                }
                                if l(u, z).omap[two] != cbar_o(u, v, z, cbar_o(v, w, z, lh, lg), lf) {
                                    return Err(at("σ2"));
                                }
                            }
                        }
                    }
                    for c in 0..hh.arrow_count() {
                        for b in 0..hg.arrow_count() {
                            for a in 0..hf.arrow_count() {
                                let (lc, lb, la) = (l(w, z).amap[c], l(v, w).amap[b], l(u, v).amap[a]);
                                let ba = m.compose2(u, v, w, b, a).ok_or_else(undefined)?;
                                let cb = m.compose2(v, w, z, c, b).ok_or_else(undefined)?;
                                let one = m.compose2(u, w, z, c, ba).ok_or_else(undefined)?;
                                let two = m.compose2(u, v, z, cb, a).ok_or_else(undefined)?;
                                if l(u, z).amap[one] != cbar_a(u, w, z, lc, cbar_a(u, v, w, lb, la)) {
                                    return Err(at("σ1"));
                                }
                                if l(u, z).amap[two] != cbar_a(u, v, z, cbar_a(v, w, z, lc, lb), la) {
                                    return Err(at("σ2"));
                                }
                            }
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn quad(m: &FinBicategory, o: [usize; 4]) -> String {
    let names: Vec<&str> = o.iter().map(|&x| m.object_name(x)).collect();
    format!("({})", names.join(", "))
}

/// `L_W ∘ F`, required to be a strict Segal point over `(W⁻¹M, 2-Iso)`.
pub fn reduce_point(po: &PathObject, sec: &SecondaryLocalization) -> Result<PathObject> {
    if !po.is_segal() {
        let first = po.segal.offenders.first().map(|o| o.location.clone()).unwrap_or_default();
        return Err(LocalizeError::NotSegal(first));
    }
    if po.base != sec.source {
        return Err(EnrichError::ShapeMismatch("point is not over the localized base".into()).into());
    }
    let m = &po.base.bicategory;
    let data = compose_colax(&po.path, m, &sec.bicategory, &sec.morphism.data, po.data())?;
    let (iso, _) = canonical_bases(&sec.bicategory);
    let out = check_path_object(po.path.clone(), iso, data)?;
    if !out.is_segal() {
        let first = out.segal.offenders.first().map(|o| o.location.clone()).unwrap_or_default();
        return Err(LocalizeError::NotSegal(format!("reduction is not strict at {first}")));
    }
    Ok(out)
}

/// [`secondary_localization`] of the point's base followed by [`reduce_point`].
pub fn reduce(po: &PathObject) -> Result<(SecondaryLocalization, PathObject)> {
    if !po.is_segal() {
        let first = po.segal.offenders.first().map(|o| o.location.clone()).unwrap_or_default();
        return Err(LocalizeError::NotSegal(first));
    }
    let sec = secondary_localization(&po.base)?;
    let out = reduce_point(po, &sec)?;
    Ok((sec, out))
}
