//! Rigid bridges, the thin bridge `C ≺ D`, distributors and bimodules.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::bicat::{identity_transformation, BaseOfEnrichment, ColaxData, TransformationData};
use crate::enrichment::{
    check_path_object, restrict, strict_to_enriched, validate_premorphism, EnrichError, PathObject, Premorphism,
};
use crate::fincat::{
    coproduct, enumerate_functors, opposite, product, ArrowRec, FinCatError, FinCategory, FinFunctor, SetValuedDiagram,
};
use crate::pathcat::{build_path_category, map_chain, PathError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("bridge is not rigid: {0}")]
    NotRigid(String),
    #[error("embedding is not fully faithful at {0}")]
    NotEmbedding(String),
    #[error("arrow {0} points from the D side to the C side")]
    Orientation(String),
    #[error("actions do not assemble into a category: {0}")]
    ActionAssociativityViolation(String),
    #[error("boundary condition fails on the {side} side at {cell}")]
    BoundaryMismatch { side: Side, cell: String },
    #[error("bimodule is not Segal: {0}")]
    NotSegal(String),
    #[error(transparent)]
    FinCat(#[from] FinCatError),
    #[error(transparent)]
    Enrich(#[from] EnrichError),
    #[error(transparent)]
    Path(#[from] PathError),
}

pub type Result<T> = std::result::Result<T, BridgeError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    C,
    D,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::C => "C",
            Side::D => "D",
        })
    }
}

/// A category `E` on `Ob(C) ⊔ Ob(D)` with full embeddings of `C` and `D` and
/// no arrows from the `D` side to the `C` side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidBridge {
    pub total: FinCategory,
    pub left: FinFunctor,
    pub right: FinFunctor,
}

impl RigidBridge {
    pub fn c(&self) -> &FinCategory {
        &self.left.source
    }

    pub fn d(&self) -> &FinCategory {
        &self.right.source
    }

    /// Arrows of `E` from `C`'s `a` to `D`'s `b`.
    pub fn cross(&self, a: usize, b: usize) -> &[usize] {
        self.total.hom(self.left.omap[a], self.right.omap[b])
    }
}

pub fn validate_bridge(total: FinCategory, left: FinFunctor, right: FinFunctor) -> Result<RigidBridge> {
    if left.target != total || right.target != total {
        return Err(BridgeError::NotRigid("embeddings do not land in the total category".into()));
    }
    let mut hit = vec![false; total.object_count()];
    for &x in left.omap.iter().chain(&right.omap) {
        if std::mem::replace(&mut hit[x], true) {
            return Err(BridgeError::NotRigid(format!("object {} hit twice", total.object_name(x))));
        }
    }
    if let Some(x) = hit.iter().position(|&h| !h) {
        return Err(BridgeError::NotRigid(format!("object {} outside both sides", total.object_name(x))));
    }
    for emb in [&left, &right] {
        let s = &emb.source;
        for a in 0..s.object_count() {
            for b in 0..s.object_count() {
                let image: BTreeSet<usize> = s.hom(a, b).iter().map(|&f| emb.amap[f]).collect();
                let target: BTreeSet<usize> = total.hom(emb.omap[a], emb.omap[b]).iter().copied().collect();
                if image.len() != s.hom(a, b).len() || image != target {
                    return Err(BridgeError::NotEmbedding(format!("({}, {})", s.object_name(a), s.object_name(b))));
                }
            }
        }
    }
    for b in 0..right.source.object_count() {
        for a in 0..left.source.object_count() {
            if let Some(&f) = total.hom(right.omap[b], left.omap[a]).first() {
                return Err(BridgeError::Orientation(total.arrow_name(f).into()));
            }
        }
    }
    Ok(RigidBridge { total, left, right })
}

/// `X: D → Ĉ` as a set-valued functor on `Cᵒᵖ × D`; the fiber over
/// `(A, D)` (index `A·|D| + D`) is `X(D)(A)`.
#[derive(Debug, Clone)]
pub struct Distributor {
    pub c: FinCategory,
    pub d: FinCategory,
    pub diagram: SetValuedDiagram,
}

impl PartialEq for Distributor {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
            && self.d == other.d
            && self.diagram.fibers == other.diagram.fibers
            && self.diagram.action == other.diagram.action
    }
}

impl Distributor {
    /// Assembles the distributor from its values and the two one-sided
    /// actions: `left[(f, D)]: X(D)(A') → X(D)(A)` for `f: A → A'` and
    /// `right[(g, A)]: X(D)(A) → X(D')(A)` for `g: D → D'`.
    pub fn from_actions(
        c: FinCategory,
        d: FinCategory,
        values: Vec<Vec<String>>,
        left: &BTreeMap<(usize, usize), Vec<usize>>,
        right: &BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        let (nd, da) = (d.object_count(), d.arrow_count());
        let base = product(&opposite(&c), &d);
        let missing = |what: String| BridgeError::FinCat(FinCatError::MalformedFunctor(what));
        let mut action = Vec::with_capacity(base.arrow_count());
        for f in 0..c.arrow_count() {
            for g in 0..da {
                let (a2, dd) = (c.dst(f), d.src(g));
                let l = left.get(&(f, dd)).ok_or_else(|| missing(format!("left action of {}", c.arrow_name(f))))?;
                let r = right
                    .get(&(g, c.src(f)))
                    .ok_or_else(|| missing(format!("right action of {}", d.arrow_name(g))))?;
                if l.len() != values[a2 * nd + dd].len() || l.iter().any(|&x| x >= r.len()) {
                    return Err(missing(format!("action sizes at ({}, {})", c.arrow_name(f), d.arrow_name(g))));
                }
                action.push(l.iter().map(|&x| r[x]).collect());
            }
        }
        let x = Distributor { c, d, diagram: SetValuedDiagram { base, fibers: values, action } };
        x.check()?;
        Ok(x)
    }

    pub fn check(&self) -> Result<()> {
        self.diagram.check()?;
        Ok(())
    }

    pub fn value(&self, a: usize, b: usize) -> &[String] {
        &self.diagram.fibers[a * self.d.object_count() + b]
    }

    /// `x · f` for `f: A → A'` and `x ∈ X(D)(A')`.
    pub fn act_left(&self, f: usize, b: usize, x: usize) -> usize {
        self.diagram.action[f * self.d.arrow_count() + self.d.identity(b)][x]
    }

    /// `g · x` for `g: D → D'` and `x ∈ X(D)(A)`.
    pub fn act_right(&self, g: usize, a: usize, x: usize) -> usize {
        self.diagram.action[self.c.identity(a) * self.d.arrow_count() + g][x]
    }
}

/// The bridge `E(X)`: `C ⊔ D` plus one arrow `A → D` per element of
/// `X(D)(A)`, composed by the two actions.
pub fn bridge_of_distributor(x: &Distributor) -> Result<RigidBridge> {
    x.check()?;
    let (c, d) = (&x.c, &x.d);
    let base = coproduct(c, d);
    let (nc, nd) = (c.object_count(), d.object_count());
    let (ca, da) = (c.arrow_count(), d.arrow_count());
    let mut arrows: Vec<ArrowRec> = base.arrows().to_vec();
    let mut cross: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for a in 0..nc {
        for b in 0..nd {
            for (k, name) in x.value(a, b).iter().enumerate() {
                cross.insert((a, b, k), arrows.len());
                arrows.push(ArrowRec { name: name.clone(), src: a, dst: nc + b });
            }
        }
    }
    let mut names = BTreeSet::new();
    for r in &arrows {
        if !names.insert(r.name.as_str()) {
            return Err(FinCatError::DuplicateId(r.name.clone()).into());
        }
    }
    let identities = (0..nc + nd).map(|o| base.identity(o)).collect();
    let mut comp = HashMap::new();
    for f in 0..base.arrow_count() {
        for g in base.hom_out(base.dst(f)) {
            comp.insert((g, f), base.compose(g, f).unwrap());
        }
    }
    for (&(a, b, k), &arrow) in &cross {
        // precomposition with C arrows into a
        for f in c.hom_into(a) {
            let k2 = x.act_left(f, b, k);
            comp.insert((arrow, f), cross[&(c.src(f), b, k2)]);
        }
        for g in d.hom_out(b) {
            let k2 = x.act_right(g, a, k);
            comp.insert((ca + g, arrow), cross[&(a, d.dst(g), k2)]);
        }
    }
    let total = FinCategory::assemble(base.objects().to_vec(), arrows, identities, comp);
    total.check().map_err(|e| BridgeError::ActionAssociativityViolation(e.to_string()))?;
    let left = FinFunctor::new(c.clone(), total.clone(), (0..nc).collect(), (0..ca).collect())?;
    let right = FinFunctor::new(d.clone(), total.clone(), (nc..nc + nd).collect(), (ca..ca + da).collect())?;
    validate_bridge(total, left, right)
}

/// The functor of points `X(E)(D) = E(−, D)` restricted to `C`.
pub fn distributor_of_bridge(e: &RigidBridge) -> Result<Distributor> {
    let (c, d, t) = (e.c(), e.d(), &e.total);
    let (nc, nd) = (c.object_count(), d.object_count());
    let mut values = Vec::with_capacity(nc * nd);
    for a in 0..nc {
        for b in 0..nd {
            values.push(e.cross(a, b).iter().map(|&f| t.arrow_name(f).to_string()).collect());
        }
    }
    let position = |a: usize, b: usize, arrow: usize| e.cross(a, b).iter().position(|&y| y == arrow).unwrap();
    let mut left = BTreeMap::new();
    for f in 0..c.arrow_count() {
        for b in 0..nd {
            let (a, a2) = (c.src(f), c.dst(f));
            let map = e
                .cross(a2, b)
                .iter()
                .map(|&x| position(a, b, t.compose(x, e.left.amap[f]).unwrap()))
                .collect();
            left.insert((f, b), map);
        }
    }
    let mut right = BTreeMap::new();
    for g in 0..d.arrow_count() {
        for a in 0..nc {
            let (b, b2) = (d.src(g), d.dst(g));
            let map = e
                .cross(a, b)
                .iter()
                .map(|&x| position(a, b2, t.compose(e.right.amap[g], x).unwrap()))
                .collect();
            right.insert((g, a), map);
        }
    }
    Distributor::from_actions(c.clone(), d.clone(), values, &left, &right)
}

/// `C ≺ D`: one cross arrow `(A,B)` for each `A` in `C` and `B` in `D`.
pub fn thin_bridge(c: &FinCategory, d: &FinCategory) -> Result<RigidBridge> {
    let names = coproduct(c, d);
    let nc = c.object_count();
    let (na, nb) = (nc, d.object_count());
    let values =
        (0..na * nb).map(|i| vec![format!("({},{})", names.object_name(i / nb), names.object_name(nc + i % nb))]).collect();
    let left = (0..c.arrow_count()).flat_map(|f| (0..nb).map(move |b| ((f, b), vec![0]))).collect();
    let right = (0..d.arrow_count()).flat_map(|g| (0..na).map(move |a| ((g, a), vec![0]))).collect();
    bridge_of_distributor(&Distributor::from_actions(c.clone(), d.clone(), values, &left, &right)?)
}

/// All functors `β: E → G` with `β ∘ E|_C = G|_C` and `β ∘ E|_D = G|_D`.
pub fn bridge_morphisms(e: &RigidBridge, g: &RigidBridge) -> Vec<FinFunctor> {
    let t = &e.total;
    let mut fo = vec![None; t.object_count()];
    let mut fa = vec![None; t.arrow_count()];
    for (src, dst) in [(&e.left, &g.left), (&e.right, &g.right)] {
        for (a, &x) in src.omap.iter().enumerate() {
            fo[x] = Some(dst.omap[a]);
        }
        for (f, &x) in src.amap.iter().enumerate() {
            fa[x] = Some(dst.amap[f]);
        }
    }
    enumerate_functors(t, &g.total, &fo, &fa)
        .into_iter()
        .map(|(omap, amap)| FinFunctor { source: t.clone(), target: g.total.clone(), omap, amap })
        .collect()
}

/// A Segal `E`-point with boundaries `F` on `C` and `G` on `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    pub bridge: RigidBridge,
    pub psi: PathObject,
    pub left: PathObject,
    pub right: PathObject,
}

pub fn validate_bimodule(
    bridge: &RigidBridge,
    base: &BaseOfEnrichment,
    truncation: usize,
    psi: ColaxData,
    f: &PathObject,
    g: &PathObject,
) -> Result<Bimodule> {
    let p = build_path_category(&bridge.total, truncation)?;
    let psi = check_path_object(p, base.clone(), psi)?;
    if let Some(o) = psi.segal.offenders.first() {
        return Err(BridgeError::NotSegal(format!("{} at {}", o.cell, o.location)));
    }
    for (side, emb, point) in [(Side::C, &bridge.left, f), (Side::D, &bridge.right, g)] {
        if point.shape() != &emb.source || point.base.bicategory != base.bicategory || point.path.truncation != truncation
        {
            return Err(BridgeError::BoundaryMismatch { side, cell: "shape".into() });
        }
        let restricted = restrict(&psi, emb)?;
        if let Some(cell) = first_difference(&restricted, point) {
            return Err(BridgeError::BoundaryMismatch { side, cell });
        }
    }
    Ok(Bimodule { bridge: bridge.clone(), psi, left: f.clone(), right: g.clone() })
}

fn first_difference(x: &PathObject, y: &PathObject) -> Option<String> {
    let (dx, dy) = (x.data(), y.data());
    let c = x.shape();
    let n = c.object_count();
    for a in 0..n {
        if dx.omap[a] != dy.omap[a] {
            return Some(c.object_name(a).into());
        }
    }
    for a in 0..n {
        for b in 0..n {
            let hom = x.path.path_hom(a, b);
            let (fx, fy) = (&dx.homs[a * n + b], &dy.homs[a * n + b]);
            for (i, s) in hom.chains.iter().enumerate() {
                if fx.obj[i] != fy.obj[i] {
                    return Some(s.display(c));
                }
            }
            for (r, rec) in hom.category.arrows().iter().enumerate() {
                if fx.arr[r] != fy.arr[r] {
                    return Some(rec.name.clone());
                }
            }
        }
    }
    for (p, cell) in &dx.phi {
        if dy.phi.get(p) != Some(cell) {
            let t = x.path.chain(p.b, p.c, p.t).display(c);
            let s = x.path.chain(p.a, p.b, p.s).display(c);
            return Some(format!("φ({t}, {s})"));
        }
    }
    (0..n).find(|&a| dx.phi_unit[a] != dy.phi_unit[a]).map(|a| format!("φ_{}", c.object_name(a)))
}

/// A morphism `(Id_E, Θ)` of bimodules over the same boundaries, inducing the
/// identity transformation on both of them.
pub fn validate_bimodule_morphism(x: &Bimodule, y: &Bimodule, theta: TransformationData) -> Result<Premorphism> {
    if x.bridge != y.bridge || x.left != y.left || x.right != y.right {
        return Err(BridgeError::BoundaryMismatch { side: Side::C, cell: "bimodules over different boundaries".into() });
    }
    let pre = validate_premorphism(&FinFunctor::identity(&x.bridge.total), theta, &x.psi, &y.psi, true)?;
    let m = &x.psi.base.bicategory;
    let n = x.bridge.total.object_count();
    for (side, emb, point) in [(Side::C, &x.bridge.left, &x.left), (Side::D, &x.bridge.right, &x.right)] {
        let id = identity_transformation(&point.path, m, &point.morphism)
            .ok_or_else(|| BridgeError::BoundaryMismatch { side, cell: "identity transformation".into() })?;
        let k = emb.source.object_count();
        for a in 0..k {
            if pre.transformation.data.comp1[emb.omap[a]] != id.comp1[a] {
                return Err(BridgeError::BoundaryMismatch { side, cell: emb.source.object_name(a).into() });
            }
            for b in 0..k {
                for (i, s) in point.path.path_hom(a, b).chains.iter().enumerate() {
                    let (ea, eb, j) = x.psi.path.locate(&map_chain(emb, s)).expect("embedded chain");
                    debug_assert!(ea < n && eb < n);
                    if pre.transformation.data.comp2[&(ea, eb, j)] != id.comp2[&(a, b, i)] {
                        return Err(BridgeError::BoundaryMismatch { side, cell: s.display(&emb.source) });
                    }
                }
            }
        }
    }
    Ok(pre)
}

/// The classical action maps of a strict bimodule on a thin bridge:
/// `c_PQR` (left) and `c_QRS` (right), keyed by the objects of `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Actions {
    pub left: BTreeMap<(usize, usize, usize), usize>,
    pub right: BTreeMap<(usize, usize, usize), usize>,
}

pub fn classical_actions(b: &Bimodule) -> Result<Actions> {
    let e = strict_to_enriched(&b.psi)?;
    let t = &b.bridge.total;
    let on_c: BTreeSet<usize> = b.bridge.left.omap.iter().copied().collect();
    let mut out = Actions { left: BTreeMap::new(), right: BTreeMap::new() };
    for (&(g, f), &cell) in &e.comp {
        let (p, q, r) = (t.src(f), t.dst(f), t.dst(g));
        match (on_c.contains(&p), on_c.contains(&q), on_c.contains(&r)) {
            (true, true, false) => {
                out.left.insert((p, q, r), cell);
            }
            (true, false, false) => {
                out.right.insert((p, q, r), cell);
            }
            _ => {}
        }
    }
    Ok(out)
}
