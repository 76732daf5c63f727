//! Finite categories, functors and the elementary constructions built on them.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("missing composite for ({g}, {f})")]
    MissingComposite { g: String, f: String },
    #[error("composite of ({g}, {f}) has wrong endpoints")]
    MalformedComposite { g: String, f: String },
    #[error("associativity fails on ({h}, {g}, {f})")]
    AssociativityViolation { h: String, g: String, f: String },
    #[error("identity law fails at object {0}")]
    IdentityViolation(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("unknown arrow {0}")]
    UnknownArrow(String),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("coarse category on an empty set")]
    EmptySet,
    #[error("action is not functorial at arrow {0}")]
    NonFunctorialAction(String),
    #[error("functor does not preserve composite ({g}, {f})")]
    CompositionNotPreserved { g: String, f: String },
    #[error("functor does not preserve the identity of {0}")]
    IdentityNotPreserved(String),
    #[error("functor does not preserve endpoints of {0}")]
    EndpointsNotPreserved(String),
    #[error("functor data has the wrong shape: {0}")]
    MalformedFunctor(String),
}

pub type Result<T> = std::result::Result<T, FinCatError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrowRec {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category with an explicit total composition table.
///
/// Objects and arrows are addressed by dense indices; their string ids are
/// kept for reports and lookups.
#[derive(Clone, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<ArrowRec>,
    identities: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
    homs: Vec<Vec<usize>>,
    obj_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("arrows", &self.arrows.iter().map(|a| &a.name).collect::<Vec<_>>())
            .finish()
    }
}

/// Unvalidated category data, as authored by hand or read from the DSL.
///
/// Identities are synthesized as `1_<object>` unless listed; composites with an
/// identity are synthesized too.
#[derive(Debug, Clone, Default)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub arrows: Vec<(String, String, String)>,
    pub identities: Vec<(String, String)>,
    pub comp: Vec<(String, String, String)>,
}

impl RawCategory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn arrow(mut self, name: &str, src: &str, dst: &str) -> Self {
        self.arrows.push((name.to_string(), src.to_string(), dst.to_string()));
        self
    }

    pub fn compose(mut self, g: &str, f: &str, h: &str) -> Self {
        self.comp.push((g.to_string(), f.to_string(), h.to_string()));
        self
    }
}

/// Validates raw data and returns the category, or the first violation found.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory> {
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.clone(), i).is_some() {
            return Err(FinCatError::DuplicateId(o.clone()));
        }
    }
    let lookup = |o: &str| {
        obj_index
            .get(o)
            .copied()
            .ok_or_else(|| FinCatError::UnknownObject(o.to_string()))
    };
    let explicit_ids: HashMap<&str, &str> =
        raw.identities.iter().map(|(o, a)| (o.as_str(), a.as_str())).collect();
    let mut arrows = Vec::new();
    let mut identities = Vec::new();
    for o in &raw.objects {
        if !obj_index.contains_key(o.as_str()) {
            return Err(FinCatError::UnknownObject(o.clone()));
        }
        let name = explicit_ids
            .get(o.as_str())
            .map(|s| s.to_string())
            .unwrap_or_else(|| format!("1_{o}"));
        identities.push(arrows.len());
        let i = obj_index[o];
        arrows.push(ArrowRec { name, src: i, dst: i });
    }
    for (name, s, d) in &raw.arrows {
        arrows.push(ArrowRec { name: name.clone(), src: lookup(s)?, dst: lookup(d)? });
    }
    let mut arrow_index = HashMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if arrow_index.insert(a.name.clone(), i).is_some() {
            return Err(FinCatError::DuplicateId(a.name.clone()));
        }
    }
    let arrow = |a: &str| {
        arrow_index
            .get(a)
            .copied()
            .ok_or_else(|| FinCatError::UnknownArrow(a.to_string()))
    };
    let mut comp = HashMap::new();
    for (g, f, h) in &raw.comp {
        comp.insert((arrow(g)?, arrow(f)?), arrow(h)?);
    }
    for (a, rec) in arrows.iter().enumerate() {
        comp.entry((identities[rec.dst], a)).or_insert(a);
        comp.entry((a, identities[rec.src])).or_insert(a);
    }
    let cat = FinCategory::assemble(raw.objects.clone(), arrows, identities, comp);
    cat.check()?;
    Ok(cat)
}

impl FinCategory {
    /// Builds a category from trusted parts without checking the axioms.
    pub(crate) fn assemble(
        objects: Vec<String>,
        arrows: Vec<ArrowRec>,
        identities: Vec<usize>,
        comp: HashMap<(usize, usize), usize>,
    ) -> Self {
        let n = objects.len();
        let mut homs = vec![Vec::new(); n * n];
        for (i, a) in arrows.iter().enumerate() {
            homs[a.src * n + a.dst].push(i);
        }
        let obj_index = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let arrow_index = arrows.iter().enumerate().map(|(i, a)| (a.name.clone(), i)).collect();
        FinCategory { objects, arrows, identities, comp, homs, obj_index, arrow_index }
    }

    /// Builds a thin category from a reflexive, transitive relation given as
    /// named arrows. Composition is forced.
    pub(crate) fn from_preorder(objects: Vec<String>, rel: Vec<ArrowRec>) -> Self {
        let n = objects.len();
        let mut between: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, a) in rel.iter().enumerate() {
            between.entry((a.src, a.dst)).or_insert(i);
        }
        let identities = (0..n).map(|x| between[&(x, x)]).collect();
        let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, a) in rel.iter().enumerate() {
            out_of[a.src].push(i);
        }
        let mut comp = HashMap::new();
        for (f, fa) in rel.iter().enumerate() {
            for &g in &out_of[fa.dst] {
                let h = between[&(fa.src, rel[g].dst)];
                comp.insert((g, f), h);
            }
        }
        Self::assemble(objects, rel, identities, comp)
    }

    /// Runs every axiom check: endpoints, identities, associativity.
    pub fn check(&self) -> Result<()> {
        let n = self.arrows.len();
        for g in 0..n {
            for f in self.hom_into(self.arrows[g].src) {
                let h = self.compose(g, f).ok_or_else(|| FinCatError::MissingComposite {
                    g: self.arrow_name(g).into(),
                    f: self.arrow_name(f).into(),
                })?;
                if self.src(h) != self.src(f) || self.dst(h) != self.dst(g) {
                    return Err(FinCatError::MalformedComposite {
                        g: self.arrow_name(g).into(),
                        f: self.arrow_name(f).into(),
                    });
                }
            }
        }
        for x in 0..self.objects.len() {
            let id = self.identities[x];
            if self.src(id) != x || self.dst(id) != x {
                return Err(FinCatError::IdentityViolation(self.objects[x].clone()));
            }
            for &f in self.hom_into(x).iter() {
                if self.compose(id, f) != Some(f) {
                    return Err(FinCatError::IdentityViolation(self.objects[x].clone()));
                }
            }
            for &f in self.hom_out(x).iter() {
                if self.compose(f, id) != Some(f) {
                    return Err(FinCatError::IdentityViolation(self.objects[x].clone()));
                }
            }
        }
        for f in 0..n {
            for g in self.hom_out(self.dst(f)) {
                let gf = self.comp[&(g, f)];
                for h in self.hom_out(self.dst(g)) {
                    let hg = self.comp[&(h, g)];
                    if self.comp[&(h, gf)] != self.comp[&(hg, f)] {
                        return Err(FinCatError::AssociativityViolation {
                            h: self.arrow_name(h).into(),
                            g: self.arrow_name(g).into(),
                            f: self.arrow_name(f).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ArrowRec] {
        &self.arrows
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_name(&self, f: usize) -> &str {
        &self.arrows[f].name
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.obj_index.get(name).copied()
    }

    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].src
    }

    pub fn dst(&self, f: usize) -> usize {
        self.arrows[f].dst
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.src(f)] == f
    }

    /// `g ∘ f`, defined when `dst(f) = src(g)`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp.get(&(g, f)).copied()
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects.len() + b]
    }

    /// Arrows ending at `x`.
    pub fn hom_into(&self, x: usize) -> Vec<usize> {
        (0..self.objects.len()).flat_map(|a| self.hom(a, x).iter().copied()).collect()
    }

    /// Arrows starting at `x`.
    pub fn hom_out(&self, x: usize) -> Vec<usize> {
        (0..self.objects.len()).flat_map(|b| self.hom(x, b).iter().copied()).collect()
    }

    /// First arrow from `a` to `b`, the unique one in a thin category.
    pub fn arrow_between(&self, a: usize, b: usize) -> Option<usize> {
        self.hom(a, b).first().copied()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.src(f), self.dst(f));
        self.hom(b, a).iter().copied().find(|&g| {
            self.compose(g, f) == Some(self.identities[a]) && self.compose(f, g) == Some(self.identities[b])
        })
    }

    pub fn is_invertible(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.arrows.len()).all(|f| self.is_invertible(f))
    }

    pub fn is_thin(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    // ---- constructors ----

    pub fn terminal() -> Self {
        Self::discrete(&["o"])
    }

    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let rel = (0..objects.len())
            .map(|i| ArrowRec { name: format!("1_{}", objects[i]), src: i, dst: i })
            .collect();
        Self::from_preorder(objects, rel)
    }

    /// One group element per arrow on a single object; `mult[g][h] = g·h`
    /// and composition is `comp(g, h) = g·h`.
    pub fn from_monoid(object: &str, elements: &[String], mult: &[Vec<usize>], unit: usize) -> Self {
        let arrows: Vec<ArrowRec> =
            elements.iter().map(|e| ArrowRec { name: e.clone(), src: 0, dst: 0 }).collect();
        let mut comp = HashMap::new();
        for g in 0..elements.len() {
            for h in 0..elements.len() {
                comp.insert((g, h), mult[g][h]);
            }
        }
        Self::assemble(vec![object.to_string()], arrows, vec![unit], comp)
    }
}

/// The coarse (chaotic) category: one arrow `(a,b)` for each ordered pair.
pub fn coarse<S: AsRef<str>>(set: &[S]) -> Result<FinCategory> {
    if set.is_empty() {
        return Err(FinCatError::EmptySet);
    }
    let objects: Vec<String> = set.iter().map(|s| s.as_ref().to_string()).collect();
    if objects.iter().collect::<BTreeSet<_>>().len() != objects.len() {
        return Err(FinCatError::DuplicateId("coarse set".into()));
    }
    let n = objects.len();
    let mut rel = Vec::with_capacity(n * n);
    for a in 0..n {
        rel.push(ArrowRec { name: format!("({},{})", objects[a], objects[a]), src: a, dst: a });
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                rel.push(ArrowRec { name: format!("({},{})", objects[a], objects[b]), src: a, dst: b });
            }
        }
    }
    Ok(FinCategory::from_preorder(objects, rel))
}

/// The ordinal `{0 < 1 < … < n}` as a thin category.
pub fn interval(n: usize) -> FinCategory {
    let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut rel = Vec::new();
    for i in 0..=n {
        rel.push(ArrowRec { name: format!("({i},{i})"), src: i, dst: i });
    }
    for i in 0..=n {
        for j in i + 1..=n {
            rel.push(ArrowRec { name: format!("({i},{j})"), src: i, dst: j });
        }
    }
    FinCategory::from_preorder(objects, rel)
}

/// A composable sequence of arrows, read in path order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub src: usize,
    pub dst: usize,
    pub arrows: Vec<usize>,
}

impl Chain {
    pub fn empty(at: usize) -> Self {
        Chain { src: at, dst: at, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Vertices visited by the chain, `len + 1` of them.
    pub fn vertices(&self, c: &FinCategory) -> Vec<usize> {
        let mut v = vec![self.src];
        v.extend(self.arrows.iter().map(|&f| c.dst(f)));
        v
    }

    pub fn display(&self, c: &FinCategory) -> String {
        if self.arrows.is_empty() {
            format!("[0,{}]", c.object_name(self.src))
        } else {
            let names: Vec<&str> = self.arrows.iter().map(|&f| c.arrow_name(f)).collect();
            format!("[{},{}]", self.arrows.len(), names.join(";"))
        }
    }

    /// Composite of the chain in `c` (the identity for an empty chain).
    pub fn composite(&self, c: &FinCategory) -> usize {
        self.arrows
            .iter()
            .fold(c.identity(self.src), |acc, &f| c.compose(f, acc).expect("composable chain"))
    }
}

/// All length-`n` composable sequences from `a` to `b`.
pub fn nerve_level(c: &FinCategory, n: usize, a: &str, b: &str) -> Result<Vec<Chain>> {
    let a = c.object(a).ok_or_else(|| FinCatError::UnknownObject(a.to_string()))?;
    let b = c.object(b).ok_or_else(|| FinCatError::UnknownObject(b.to_string()))?;
    Ok(chains_between(c, n, a, b))
}

pub(crate) fn chains_between(c: &FinCategory, n: usize, a: usize, b: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(c: &FinCategory, n: usize, at: usize, b: usize, a: usize, stack: &mut Vec<usize>, out: &mut Vec<Chain>) {
        if stack.len() == n {
            if at == b {
                out.push(Chain { src: a, dst: b, arrows: stack.clone() });
            }
            return;
        }
        for f in c.hom_out(at) {
            stack.push(f);
            go(c, n, c.dst(f), b, a, stack, out);
            stack.pop();
        }
    }
    go(c, n, a, b, a, &mut stack, &mut out);
    out
}

/// A covariant functor from a finite category to finite sets.
#[derive(Debug, Clone)]
pub struct SetValuedDiagram {
    pub base: FinCategory,
    pub fibers: Vec<Vec<String>>,
    /// `action[u][i]` is the image of element `i` of the fiber over `src(u)`.
    pub action: Vec<Vec<usize>>,
}

impl SetValuedDiagram {
    pub fn check(&self) -> Result<()> {
        let c = &self.base;
        if self.fibers.len() != c.object_count() || self.action.len() != c.arrow_count() {
            return Err(FinCatError::MalformedFunctor("diagram shape".into()));
        }
        for u in 0..c.arrow_count() {
            let (s, d) = (c.src(u), c.dst(u));
            let act = &self.action[u];
            if act.len() != self.fibers[s].len() || act.iter().any(|&x| x >= self.fibers[d].len()) {
                return Err(FinCatError::NonFunctorialAction(c.arrow_name(u).into()));
            }
            if c.is_identity(u) && act.iter().enumerate().any(|(i, &x)| i != x) {
                return Err(FinCatError::NonFunctorialAction(c.arrow_name(u).into()));
            }
            for v in c.hom_out(d) {
                let vu = c.compose(v, u).expect("composable");
                for i in 0..act.len() {
                    if self.action[v][act[i]] != self.action[vu][i] {
                        return Err(FinCatError::NonFunctorialAction(c.arrow_name(vu).into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The category of elements. With `posetal` set, parallel arrows realizing the
/// same transition are identified.
pub fn elements(d: &SetValuedDiagram, posetal: bool) -> Result<FinCategory> {
    d.check()?;
    let c = &d.base;
    let mut objects = Vec::new();
    let mut offset = Vec::new();
    for x in 0..c.object_count() {
        offset.push(objects.len());
        for e in &d.fibers[x] {
            objects.push(format!("({},{})", c.object_name(x), e));
        }
    }
    if posetal {
        let mut seen = BTreeSet::new();
        let mut rel = Vec::new();
        for x in 0..c.object_count() {
            for i in 0..d.fibers[x].len() {
                let p = offset[x] + i;
                rel.push(ArrowRec { name: format!("{}@{}", c.arrow_name(c.identity(x)), d.fibers[x][i]), src: p, dst: p });
                seen.insert((p, p));
            }
        }
        for u in 0..c.arrow_count() {
            let (s, t) = (c.src(u), c.dst(u));
            for i in 0..d.fibers[s].len() {
                let p = offset[s] + i;
                let q = offset[t] + d.action[u][i];
                if seen.insert((p, q)) {
                    rel.push(ArrowRec { name: format!("{}@{}", c.arrow_name(u), d.fibers[s][i]), src: p, dst: q });
                }
            }
        }
        return Ok(FinCategory::from_preorder(objects, rel));
    }
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for u in 0..c.arrow_count() {
        let (s, t) = (c.src(u), c.dst(u));
        for i in 0..d.fibers[s].len() {
            index.insert((u, i), arrows.len());
            arrows.push(ArrowRec {
                name: format!("{}@{}", c.arrow_name(u), d.fibers[s][i]),
                src: offset[s] + i,
                dst: offset[t] + d.action[u][i],
            });
        }
    }
    let mut identities = Vec::new();
    for x in 0..c.object_count() {
        for i in 0..d.fibers[x].len() {
            identities.push(index[&(c.identity(x), i)]);
        }
    }
    let mut comp = HashMap::new();
    for u in 0..c.arrow_count() {
        for v in c.hom_out(c.dst(u)) {
            let vu = c.compose(v, u).expect("composable");
            for i in 0..d.fibers[c.src(u)].len() {
                comp.insert((index[&(v, d.action[u][i])], index[&(u, i)]), index[&(vu, i)]);
            }
        }
    }
    Ok(FinCategory::assemble(objects, arrows, identities, comp))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation<'a> {
    Product(&'a FinCategory),
    Coproduct(&'a FinCategory),
    Opposite,
}

pub fn derive(c: &FinCategory, mode: Derivation<'_>) -> FinCategory {
    match mode {
        Derivation::Product(d) => product(c, d),
        Derivation::Coproduct(d) => coproduct(c, d),
        Derivation::Opposite => opposite(c),
    }
}

/// Object `(x,y)` of `c × d` has index `x * |d| + y`; arrows likewise.
pub fn product(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let (no, na) = (d.object_count(), d.arrow_count());
    let mut objects = Vec::new();
    for x in c.objects() {
        for y in d.objects() {
            objects.push(format!("({x},{y})"));
        }
    }
    let mut arrows = Vec::new();
    for f in c.arrows() {
        for g in d.arrows() {
            arrows.push(ArrowRec {
                name: format!("({},{})", f.name, g.name),
                src: f.src * no + g.src,
                dst: f.dst * no + g.dst,
            });
        }
    }
    let identities = (0..c.object_count())
        .flat_map(|x| (0..no).map(move |y| (x, y)))
        .map(|(x, y)| c.identity(x) * na + d.identity(y))
        .collect();
    let mut comp = HashMap::new();
    for (&(g1, f1), &h1) in &c.comp {
        for (&(g2, f2), &h2) in &d.comp {
            comp.insert((g1 * na + g2, f1 * na + f2), h1 * na + h2);
        }
    }
    FinCategory::assemble(objects, arrows, identities, comp)
}

/// Disjoint union; ids are kept when the two sides are disjoint and prefixed
/// with `0.`/`1.` otherwise. Indices of `d` are shifted past those of `c`.
pub fn coproduct(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let clash = c.objects().iter().any(|o| d.object(o).is_some())
        || c.arrows().iter().any(|a| d.arrow(&a.name).is_some());
    let tag = |side: usize, s: &str| if clash { format!("{side}.{s}") } else { s.to_string() };
    let (co, ca) = (c.object_count(), c.arrow_count());
    let objects = c
        .objects()
        .iter()
        .map(|o| tag(0, o))
        .chain(d.objects().iter().map(|o| tag(1, o)))
        .collect();
    let arrows = c
        .arrows()
        .iter()
        .map(|a| ArrowRec { name: tag(0, &a.name), src: a.src, dst: a.dst })
        .chain(d.arrows().iter().map(|a| ArrowRec { name: tag(1, &a.name), src: a.src + co, dst: a.dst + co }))
        .collect();
    let identities = c.identities.iter().copied().chain(d.identities.iter().map(|&i| i + ca)).collect();
    let mut comp = c.comp.clone();
    comp.extend(d.comp.iter().map(|(&(g, f), &h)| ((g + ca, f + ca), h + ca)));
    FinCategory::assemble(objects, arrows, identities, comp)
}

/// Arrow reversal with unchanged ids and indices.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let arrows = c.arrows().iter().map(|a| ArrowRec { name: a.name.clone(), src: a.dst, dst: a.src }).collect();
    let comp = c.comp.iter().map(|(&(g, f), &h)| ((f, g), h)).collect();
    FinCategory::assemble(c.objects.clone(), arrows, c.identities.clone(), comp)
}

/// The wide subcategory of invertible arrows.
pub fn interior(c: &FinCategory) -> FinCategory {
    let keep: Vec<usize> = (0..c.arrow_count()).filter(|&f| c.is_invertible(f)).collect();
    sub_on_arrows(c, &(0..c.object_count()).collect::<Vec<_>>(), &keep)
}

/// The full subcategory on the given objects (in the given order).
pub fn full_subcategory(c: &FinCategory, objs: &[usize]) -> FinCategory {
    let set: BTreeSet<usize> = objs.iter().copied().collect();
    let keep: Vec<usize> = (0..c.arrow_count())
        .filter(|&f| set.contains(&c.src(f)) && set.contains(&c.dst(f)))
        .collect();
    sub_on_arrows(c, objs, &keep)
}

fn sub_on_arrows(c: &FinCategory, objs: &[usize], keep: &[usize]) -> FinCategory {
    let onew: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let anew: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let objects = objs.iter().map(|&o| c.objects[o].clone()).collect();
    let arrows = keep
        .iter()
        .map(|&a| ArrowRec { name: c.arrows[a].name.clone(), src: onew[&c.src(a)], dst: onew[&c.dst(a)] })
        .collect();
    let identities = objs.iter().map(|&o| anew[&c.identity(o)]).collect();
    let mut comp = HashMap::new();
    for (&(g, f), &h) in &c.comp {
        if let (Some(&g2), Some(&f2), Some(&h2)) = (anew.get(&g), anew.get(&f), anew.get(&h)) {
            comp.insert((g2, f2), h2);
        }
    }
    FinCategory::assemble(objects, arrows, identities, comp)
}

/// A functor between finite categories, stored as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub source: FinCategory,
    pub target: FinCategory,
    pub omap: Vec<usize>,
    pub amap: Vec<usize>,
}

/// Unvalidated functor data given by ids.
#[derive(Debug, Clone, Default)]
pub struct RawFunctor {
    pub omap: Vec<(String, String)>,
    pub amap: Vec<(String, String)>,
}

pub fn validate_functor(source: &FinCategory, target: &FinCategory, raw: &RawFunctor) -> Result<FinFunctor> {
    let mut omap = vec![usize::MAX; source.object_count()];
    for (a, b) in &raw.omap {
        let x = source.object(a).ok_or_else(|| FinCatError::UnknownObject(a.clone()))?;
        omap[x] = target.object(b).ok_or_else(|| FinCatError::UnknownObject(b.clone()))?;
    }
    let mut amap = vec![usize::MAX; source.arrow_count()];
    for (a, b) in &raw.amap {
        let f = source.arrow(a).ok_or_else(|| FinCatError::UnknownArrow(a.clone()))?;
        amap[f] = target.arrow(b).ok_or_else(|| FinCatError::UnknownArrow(b.clone()))?;
    }
    for x in 0..source.object_count() {
        if omap[x] == usize::MAX {
            return Err(FinCatError::MalformedFunctor(format!("object {} unmapped", source.object_name(x))));
        }
        let id = source.identity(x);
        if amap[id] == usize::MAX {
            amap[id] = target.identity(omap[x]);
        }
    }
    if let Some(f) = amap.iter().position(|&g| g == usize::MAX) {
        return Err(FinCatError::MalformedFunctor(format!("arrow {} unmapped", source.arrow_name(f))));
    }
    FinFunctor::new(source.clone(), target.clone(), omap, amap)
}

impl FinFunctor {
    /// Checks functoriality of index maps.
    pub fn new(source: FinCategory, target: FinCategory, omap: Vec<usize>, amap: Vec<usize>) -> Result<Self> {
        check_functor_maps(&source, &target, &omap, &amap)?;
        Ok(FinFunctor { source, target, omap, amap })
    }

    pub fn identity(c: &FinCategory) -> Self {
        FinFunctor {
            source: c.clone(),
            target: c.clone(),
            omap: (0..c.object_count()).collect(),
            amap: (0..c.arrow_count()).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &FinFunctor) -> FinFunctor {
        FinFunctor {
            source: other.source.clone(),
            target: self.target.clone(),
            omap: other.omap.iter().map(|&x| self.omap[x]).collect(),
            amap: other.amap.iter().map(|&f| self.amap[f]).collect(),
        }
    }

    /// `self × other` between product categories.
    pub fn times(&self, other: &FinFunctor) -> FinFunctor {
        let (tno, tna) = (other.target.object_count(), other.target.arrow_count());
        let omap = self.omap.iter().flat_map(|&x| other.omap.iter().map(move |&y| x * tno + y)).collect();
        let amap = self.amap.iter().flat_map(|&f| other.amap.iter().map(move |&g| f * tna + g)).collect();
        FinFunctor {
            source: product(&self.source, &other.source),
            target: product(&self.target, &other.target),
            omap,
            amap,
        }
    }
}

pub(crate) fn check_functor_maps(s: &FinCategory, t: &FinCategory, omap: &[usize], amap: &[usize]) -> Result<()> {
    if omap.len() != s.object_count() || amap.len() != s.arrow_count() {
        return Err(FinCatError::MalformedFunctor("map sizes".into()));
    }
    if omap.iter().any(|&x| x >= t.object_count()) || amap.iter().any(|&f| f >= t.arrow_count()) {
        return Err(FinCatError::MalformedFunctor("index out of range".into()));
    }
    for f in 0..s.arrow_count() {
        let g = amap[f];
        if t.src(g) != omap[s.src(f)] || t.dst(g) != omap[s.dst(f)] {
            return Err(FinCatError::EndpointsNotPreserved(s.arrow_name(f).into()));
        }
    }
    for x in 0..s.object_count() {
        if amap[s.identity(x)] != t.identity(omap[x]) {
            return Err(FinCatError::IdentityNotPreserved(s.object_name(x).into()));
        }
    }
    for f in 0..s.arrow_count() {
        for g in s.hom_out(s.dst(f)) {
            let gf = s.compose(g, f).expect("composable");
            if t.compose(amap[g], amap[f]) != Some(amap[gf]) {
                return Err(FinCatError::CompositionNotPreserved {
                    g: s.arrow_name(g).into(),
                    f: s.arrow_name(f).into(),
                });
            }
        }
    }
    Ok(())
}

/// Enumerates all functors `s → t` agreeing with the given partial maps.
///
/// Arrows are assigned in index order; every composite whose three arrows
/// are assigned is checked as soon as the last of them is.
pub fn enumerate_functors(
    s: &FinCategory,
    t: &FinCategory,
    fixed_objects: &[Option<usize>],
    fixed_arrows: &[Option<usize>],
) -> Vec<(Vec<usize>, Vec<usize>)> {
    let no = s.object_count();
    let na = s.arrow_count();
    // composites checked when the largest index among (g, f, gf) is assigned
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); na];
    for f in 0..na {
        for g in s.hom_out(s.dst(f)) {
            let h = s.compose(g, f).expect("composable");
            checks[g.max(f).max(h)].push((g, f, h));
        }
    }
    let mut out = Vec::new();
    let mut omap = vec![0usize; no];
    enumerate_objects(s, t, fixed_objects, fixed_arrows, &checks, 0, &mut omap, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_objects(
    s: &FinCategory,
    t: &FinCategory,
    fo: &[Option<usize>],
    fa: &[Option<usize>],
    checks: &[Vec<(usize, usize, usize)>],
    x: usize,
    omap: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    if x == s.object_count() {
        enumerate_arrows(s, t, omap, fa, checks, out);
        return;
    }
    let choices: Vec<usize> = match fo.get(x).copied().flatten() {
        Some(y) => vec![y],
        None => (0..t.object_count()).collect(),
    };
    for y in choices {
        omap[x] = y;
        enumerate_objects(s, t, fo, fa, checks, x + 1, omap, out);
    }
}

/// Depth-first search over arrow assignments with an explicit stack, so
/// large sources do not exhaust the call stack.
fn enumerate_arrows(
    s: &FinCategory,
    t: &FinCategory,
    omap: &[usize],
    fa: &[Option<usize>],
    checks: &[Vec<(usize, usize, usize)>],
    out: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    let na = s.arrow_count();
    let choices: Vec<Vec<usize>> = (0..na)
        .map(|f| {
            let (a, b) = (omap[s.src(f)], omap[s.dst(f)]);
            let all: Vec<usize> = if s.is_identity(f) { vec![t.identity(a)] } else { t.hom(a, b).to_vec() };
            match fa.get(f).copied().flatten() {
                Some(want) => all.into_iter().filter(|&g| g == want).collect(),
                None => all,
            }
        })
        .collect();
    if na == 0 {
        out.push((omap.to_vec(), Vec::new()));
        return;
    }
    let mut amap = vec![usize::MAX; na];
    let mut next = vec![0usize; na];
    let mut f = 0usize;
    loop {
        if next[f] == choices[f].len() {
            next[f] = 0;
            amap[f] = usize::MAX;
            if f == 0 {
                return;
            }
            f -= 1;
            continue;
        }
        amap[f] = choices[f][next[f]];
        next[f] += 1;
        if checks[f].iter().all(|&(x, y, z)| t.compose(amap[x], amap[y]) == Some(amap[z])) {
            if f + 1 == na {
                out.push((omap.to_vec(), amap.clone()));
            } else {
                f += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_two_validates_from_raw() {
        let raw = RawCategory::new()
            .object("0")
            .object("1")
            .object("2")
            .arrow("a", "0", "1")
            .arrow("b", "1", "2")
            .arrow("c", "0", "2")
            .compose("b", "a", "c");
        let c = validate_category(&raw).unwrap();
        assert_eq!(c.arrow_count(), 6);
    }

    #[test]
    fn broken_associativity_is_reported() {
        // one object, arrows e, f with f∘f = e, e∘e = f, e∘f = f∘e = f
        let raw = RawCategory::new()
            .object("x")
            .arrow("e", "x", "x")
            .arrow("f", "x", "x")
            .compose("f", "f", "e")
            .compose("e", "e", "f")
            .compose("e", "f", "f")
            .compose("f", "e", "f");
        match validate_category(&raw) {
            Err(FinCatError::AssociativityViolation { .. }) => {}
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn missing_composite_is_reported() {
        let raw = RawCategory::new().object("0").object("1").object("2").arrow("a", "0", "1").arrow("b", "1", "2");
        assert!(matches!(validate_category(&raw), Err(FinCatError::MissingComposite { .. })));
    }

    #[test]
    fn coarse_counts_and_groupoid() {
        assert_eq!(coarse(&["a"]).unwrap().arrow_count(), 1);
        assert_eq!(coarse(&["a", "b"]).unwrap().arrow_count(), 4);
        let c3 = coarse(&["a", "b", "c"]).unwrap();
        assert_eq!(c3.arrow_count(), 9);
        assert!(c3.is_groupoid());
        assert_eq!(coarse::<&str>(&[]), Err(FinCatError::EmptySet));
    }

    #[test]
    fn interval_shapes() {
        assert_eq!(interval(0).arrow_count(), 1);
        let i2 = interval(2);
        assert_eq!(i2.arrow_count(), 6);
        assert!(i2.hom(2, 1).is_empty());
        i2.check().unwrap();
    }

    #[test]
    fn nerve_counts() {
        let c = coarse(&["a", "b", "c"]).unwrap();
        assert_eq!(nerve_level(&c, 2, "a", "b").unwrap().len(), 3);
        assert_eq!(nerve_level(&interval(1), 1, "0", "1").unwrap().len(), 1);
        assert_eq!(nerve_level(&FinCategory::terminal(), 3, "o", "o").unwrap().len(), 1);
        assert!(nerve_level(&c, 0, "a", "b").unwrap().is_empty());
        assert_eq!(nerve_level(&c, 0, "a", "a").unwrap().len(), 1);
        assert!(matches!(nerve_level(&c, 1, "a", "z"), Err(FinCatError::UnknownObject(_))));
    }

    #[test]
    fn derived_constructions() {
        let c = coproduct(&interval(1), &coarse(&["a", "b"]).unwrap());
        assert_eq!((c.object_count(), c.arrow_count()), (4, 7));
        c.check().unwrap();
        let i2 = interval(2);
        assert_eq!(opposite(&opposite(&i2)), i2);
        let p = product(&FinCategory::terminal(), &i2);
        assert_eq!(p.arrow_count(), i2.arrow_count());
        p.check().unwrap();
        assert_eq!(interior(&i2).arrow_count(), 3);
        let c3 = coarse(&["a", "b", "c"]).unwrap();
        assert_eq!(interior(&c3), c3);
    }

    #[test]
    fn functor_checks() {
        let i1 = interval(1);
        let t = FinCategory::terminal();
        let raw = RawFunctor {
            omap: vec![("0".into(), "o".into()), ("1".into(), "o".into())],
            amap: vec![("(0,1)".into(), "1_o".into())],
        };
        validate_functor(&i1, &t, &raw).unwrap();
        let id = FinFunctor::identity(&i1);
        FinFunctor::new(i1.clone(), i1.clone(), id.omap.clone(), id.amap.clone()).unwrap();
        // reversing object map is not a functor
        assert!(FinFunctor::new(i1.clone(), i1.clone(), vec![1, 0], id.amap.clone()).is_err());
        assert_eq!(enumerate_functors(&i1, &i1, &[None, None], &[]).len(), 3);
    }

    #[test]
    fn bad_composite_in_functor() {
        // Z/2 → Z/2 sending generator to itself but claiming x∘x ↦ x
        let els = vec!["e".to_string(), "x".to_string()];
        let mult = vec![vec![0, 1], vec![1, 0]];
        let g = FinCategory::from_monoid("*", &els, &mult, 0);
        g.check().unwrap();
        let m = FinCategory::from_monoid("*", &els, &[vec![0, 1], vec![1, 1]], 0);
        m.check().unwrap();
        assert!(matches!(
            FinFunctor::new(g, m, vec![0], vec![0, 1]),
            Err(FinCatError::CompositionNotPreserved { .. })
        ));
    }

    #[test]
    fn elements_of_constant_diagram() {
        let base = interval(1);
        let d = SetValuedDiagram { base: base.clone(), fibers: vec![vec!["*".into()], vec!["*".into()]], action: vec![vec![0]; 3] };
        let e = elements(&d, false).unwrap();
        assert_eq!(e.arrow_count(), 3);
        e.check().unwrap();
        let empty = SetValuedDiagram { base, fibers: vec![vec![], vec![]], action: vec![vec![]; 3] };
        assert_eq!(elements(&empty, true).unwrap().object_count(), 0);
    }
}
