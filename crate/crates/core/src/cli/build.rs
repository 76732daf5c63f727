//! Turns DSL blocks into validated library objects.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use super::dsl::{Block, BlockKind, Decl, DslError, SpecDocument};
use super::report::{error_code, InputError};
use crate::bicat::{
    canonical_bases, chaotic_bicategory, composable_pairs, id2, suspend_monoidal, validate_base, BaseOfEnrichment,
    Bicategory, CellSet, ColaxData, FinBicategory, FunctorMap, MonoidalCategory, Pair, Quantale,
};
use crate::bridge::{bridge_of_distributor, thin_bridge, validate_bimodule, Bimodule, Distributor, RigidBridge};
use crate::enrichment::tensor::{left_normal, Leaf};
use crate::enrichment::{
    check_path_object, cocycle_check, cocycle_enriched, group_bicategory, metric_enrichment, strict_to_enriched,
    EnrichedCategory, FiniteGroup, MetricSpace, PathObject,
};
use crate::fincat::{coarse, interval, validate_category, validate_functor, FinCategory, FinFunctor, RawCategory, RawFunctor};
use crate::pathcat::{build_path_category, parse_chain, underlying_category, Path2Category, Underlying};

/// Either the input is unusable (exit 2) or a check failed (exit 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    Input(InputError),
    Check { code: String, location: String, detail: String },
}

impl From<InputError> for BuildError {
    fn from(e: InputError) -> Self {
        BuildError::Input(e)
    }
}

impl From<DslError> for BuildError {
    fn from(e: DslError) -> Self {
        BuildError::Input(e.into())
    }
}

pub type Result<T> = std::result::Result<T, BuildError>;

fn check<E: Debug + Display>(location: &str) -> impl FnOnce(E) -> BuildError + '_ {
    move |e| BuildError::Check { code: error_code(&e), location: location.into(), detail: e.to_string() }
}

fn bad(d: &Decl, msg: impl Into<String>) -> BuildError {
    DslError::ParseError { file: d.span.file.clone(), line: d.span.line, col: 1, msg: msg.into() }.into()
}

fn unresolved(d: &Decl, name: &str) -> BuildError {
    DslError::UnresolvedReference { file: d.span.file.clone(), line: d.span.line, name: name.into() }.into()
}

fn missing(b: &Block, what: &str) -> BuildError {
    DslError::ParseError {
        file: b.span.file.clone(),
        line: b.span.line,
        col: 1,
        msg: format!("{} {} lacks {what}", b.kind, b.name),
    }
    .into()
}

/// A functor into `2×2` integer matrices, read as a parallel transport.
#[derive(Debug, Clone)]
pub struct Transport {
    pub groupoid: FinCategory,
    pub bicategory: FinBicategory,
    pub underlying: Underlying,
    pub functor: FinFunctor,
    pub matrices: Vec<[i64; 4]>,
}

pub fn mat_mul(a: &[i64; 4], b: &[i64; 4]) -> [i64; 4] {
    [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
}

pub struct Workspace<'a> {
    pub doc: &'a SpecDocument,
    pub truncation: usize,
}

impl<'a> Workspace<'a> {
    pub fn new(doc: &'a SpecDocument, truncation: usize) -> Self {
        Workspace { doc, truncation }
    }

    fn block(&self, kind: BlockKind, name: &str) -> Result<&'a Block> {
        self.doc
            .get(kind, name)
            .ok_or_else(|| InputError::Invalid(format!("no {kind} named {name}")).into())
    }

    pub fn category(&self, name: &str) -> Result<FinCategory> {
        let list = |s: &str| s.split(',').map(str::to_string).collect::<Vec<_>>();
        if name == "One" {
            return Ok(FinCategory::terminal());
        }
        if let Some(n) = name.strip_prefix("interval:").and_then(|n| n.parse().ok()) {
            return Ok(interval(n));
        }
        if let Some(s) = name.strip_prefix("coarse:") {
            return coarse(&list(s)).map_err(check(name));
        }
        if let Some(s) = name.strip_prefix("discrete:") {
            return Ok(FinCategory::discrete(&list(s)));
        }
        let b = self.block(BlockKind::Category, name)?;
        let mut raw = RawCategory::new();
        for d in b.all("object") {
            for o in &d.args {
                raw = raw.object(o);
            }
        }
        for d in b.all("arrow") {
            raw = raw.arrow(&d.args[0], &d.args[1], &d.args[2]);
        }
        for d in b.all("compose") {
            let h = d.rhs1().ok_or_else(|| bad(d, "compose needs one result"))?;
            raw = raw.compose(&d.args[0], &d.args[1], h);
        }
        validate_category(&raw).map_err(check(name))
    }

    fn group(&self, d: &Decl) -> Result<FiniteGroup> {
        let n: usize = d.args[1].parse().map_err(|_| bad(d, "group order"))?;
        if n == 0 {
            return Err(bad(d, "group order"));
        }
        match d.args[0].as_str() {
            "additive" => Ok(FiniteGroup::cyclic_additive(n)),
            "multiplicative" => Ok(FiniteGroup::cyclic_multiplicative(n)),
            other => Err(bad(d, format!("unknown group presentation {other}"))),
        }
    }

    /// The monoidal category and, for matrix monoids, the matrices.
    pub fn monoidal(&self, name: &str) -> Result<(MonoidalCategory, Vec<[i64; 4]>)> {
        let b = self.block(BlockKind::Monoidal, name)?;
        if let Some(d) = b.first("quantale") {
            let k = d.args[0].parse().map_err(|_| bad(d, "quantale cap"))?;
            return Ok((MonoidalCategory::quantale(k), Vec::new()));
        }
        if b.first("boolean").is_some() {
            return Ok((MonoidalCategory::boolean_and(), Vec::new()));
        }
        if let Some(d) = b.first("twist") {
            let n: usize = d.args[0].parse().map_err(|_| bad(d, "twist order"))?;
            return Ok((MonoidalCategory::cyclic_twist(n), Vec::new()));
        }
        if let Some(d) = b.first("group") {
            let g = self.group(d)?;
            let names: Vec<&str> = g.elements.iter().map(String::as_str).collect();
            let m = MonoidalCategory::discrete_monoid(&g.name, &names, |x, y| g.mult[y][x], g.unit).map_err(check(name))?;
            return Ok((m, Vec::new()));
        }
        if b.first("matrix").is_some() {
            return self.matrix_monoid(b);
        }
        let cd = b.first("category").ok_or_else(|| missing(b, "a category"))?;
        let c = self.category(&cd.args[0])?;
        let ud = b.first("unit").ok_or_else(|| missing(b, "a unit"))?;
        let unit = c.object(&ud.args[0]).ok_or_else(|| unresolved(ud, &ud.args[0]))?;
        let mut table = BTreeMap::new();
        for d in b.all("tensor-obj") {
            let obj = |s: &str| c.object(s).ok_or_else(|| unresolved(d, s));
            let r = d.rhs1().ok_or_else(|| bad(d, "one result"))?;
            table.insert((obj(&d.args[0])?, obj(&d.args[1])?), obj(r)?);
        }
        let n = c.object_count();
        if let Some((x, y)) = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|p| !table.contains_key(p)) {
            return Err(missing(b, &format!("tensor-obj {} {}", c.object_name(x), c.object_name(y))));
        }
        let m = MonoidalCategory::thin(name, c, |x, y| table[&(x, y)], unit).map_err(check(name))?;
        Ok((m, Vec::new()))
    }

    fn matrix_monoid(&self, b: &Block) -> Result<(MonoidalCategory, Vec<[i64; 4]>)> {
        let mut names = Vec::new();
        let mut mats: Vec<[i64; 4]> = Vec::new();
        for d in b.all("matrix") {
            let entries: Vec<i64> = d
                .rhs
                .iter()
                .flatten()
                .map(|s| s.parse().map_err(|_| bad(d, "matrix entries are integers")))
                .collect::<Result<_>>()?;
            let m: [i64; 4] = entries.try_into().map_err(|_| bad(d, "a matrix has four entries"))?;
            names.push(d.args[0].clone());
            mats.push(m);
        }
        let unit = mats.iter().position(|m| *m == [1, 0, 0, 1]).ok_or_else(|| missing(b, "the identity matrix"))?;
        let n = mats.len();
        let mut mult = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let p = mat_mul(&mats[x], &mats[y]);
                mult[x][y] = mats
                    .iter()
                    .position(|m| *m == p)
                    .ok_or_else(|| missing(b, &format!("the product {} {}", names[x], names[y])))?;
            }
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let m = MonoidalCategory::discrete_monoid(&b.name, &refs, |x, y| mult[x][y], unit).map_err(check(&b.name))?;
        Ok((m, mats))
    }

    pub fn bicategory(&self, name: &str) -> Result<FinBicategory> {
        let b = self.block(BlockKind::Bicategory, name)?;
        if let Some(d) = b.first("suspend") {
            let (m, _) = self.monoidal(&d.args[0])?;
            return suspend_monoidal(&m).map_err(check(name));
        }
        if let Some(d) = b.first("chaotic") {
            let (m, _) = self.monoidal(&d.args[0])?;
            let objects: Vec<&str> = d.args[1..].iter().map(String::as_str).collect();
            return chaotic_bicategory(&m, &objects).map_err(check(name));
        }
        Err(missing(b, "suspend or chaotic"))
    }

    pub fn base(&self, name: &str) -> Result<BaseOfEnrichment> {
        let b = self.block(BlockKind::Base, name)?;
        let bd = b.first("bicategory").ok_or_else(|| missing(b, "a bicategory"))?;
        let m = self.bicategory(&bd.args[0])?;
        let cells: Vec<&Decl> = b.all("wcell").collect();
        if cells.is_empty() {
            let (iso, all) = canonical_bases(&m);
            return match b.first("w").map(|d| d.args[0].as_str()) {
                None | Some("iso") => Ok(iso),
                Some("all") => Ok(all),
                Some(other) => Err(bad(b.first("w").unwrap(), format!("w is iso, all or a wcell list, not {other}"))),
            };
        }
        let mut w = CellSet::empty(&m);
        for d in cells {
            let obj = |s: &str| m.object(s).ok_or_else(|| unresolved(d, s));
            let (u, v) = (obj(&d.args[0])?, obj(&d.args[1])?);
            let a = m.hom(u, v).arrow(&d.args[2]).ok_or_else(|| unresolved(d, &d.args[2]))?;
            w.insert(u, v, a);
        }
        validate_base(m, w).map_err(check(name))
    }

    /// Blocks that determine a point: `pathobject`, `metric`, `cocycle`.
    pub fn point_block(&self, name: Option<&str>) -> Result<&'a Block> {
        let kinds = [BlockKind::PathObject, BlockKind::Metric, BlockKind::Cocycle];
        let candidates: Vec<&Block> = self
            .doc
            .blocks
            .iter()
            .filter(|b| kinds.contains(&b.kind) && name.is_none_or(|n| b.name == n))
            .collect();
        match candidates[..] {
            [b] => Ok(b),
            [] => Err(InputError::Invalid(format!("no point named {}", name.unwrap_or("(any)"))).into()),
            _ => Err(InputError::MissingArgument("--name (several points)".into()).into()),
        }
    }

    pub fn point(&self, b: &Block) -> Result<PathObject> {
        match b.kind {
            BlockKind::PathObject => {
                let bd = b.first("base").ok_or_else(|| missing(b, "a base"))?;
                let sd = b.first("shape").ok_or_else(|| missing(b, "a shape"))?;
                let base = self.base(&bd.args[0])?;
                let shape = self.category(&sd.args[0])?;
                let (path, data) = self.point_data(&shape, &base, b)?;
                check_path_object(path, base, data).map_err(check(&b.name))
            }
            BlockKind::Metric => {
                let space = self.metric(b)?;
                Ok(metric_enrichment(&space, None, self.truncation).map_err(check(&b.name))?.1)
            }
            BlockKind::Cocycle => {
                let (objects, g, f) = self.cocycle(b)?;
                cocycle_check(&objects, &g, &f, self.truncation).map_err(check(&b.name))
            }
            _ => Err(InputError::Invalid(format!("{} is not a point", b.name)).into()),
        }
    }

    /// The classical enriched category of a point block with its base.
    pub fn enriched(&self, b: &Block) -> Result<(EnrichedCategory, BaseOfEnrichment)> {
        match b.kind {
            BlockKind::Metric => {
                let (e, po) = metric_enrichment(&self.metric(b)?, None, self.truncation).map_err(check(&b.name))?;
                Ok((e, po.base))
            }
            BlockKind::Cocycle => {
                let (objects, g, f) = self.cocycle(b)?;
                let e = cocycle_enriched(&objects, &g, &f).map_err(check(&b.name))?;
                let m = group_bicategory(&g).map_err(check(&b.name))?;
                Ok((e, canonical_bases(&m).0))
            }
            _ => {
                let po = self.point(b)?;
                let e = strict_to_enriched(&po).map_err(check(&b.name))?;
                Ok((e, po.base))
            }
        }
    }

    pub fn metric(&self, b: &Block) -> Result<MetricSpace> {
        let qd = b.first("quantale").ok_or_else(|| missing(b, "a quantale"))?;
        let q = Quantale::new(qd.args[0].parse().map_err(|_| bad(qd, "quantale cap"))?);
        let points: Vec<String> = b.all("points").flat_map(|d| d.args.clone()).collect();
        let n = points.len();
        let mut d: Vec<Vec<Option<Option<u32>>>> = vec![vec![None; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = Some(Some(0));
        }
        for decl in b.all("d") {
            let idx = |s: &str| points.iter().position(|p| p == s).ok_or_else(|| unresolved(decl, s));
            let (x, y) = (idx(&decl.args[0])?, idx(&decl.args[1])?);
            let v = decl.rhs1().and_then(|s| q.parse(s)).ok_or_else(|| bad(decl, "distance value"))?;
            d[x][y] = Some(v);
        }
        let mut table = vec![vec![None; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = d[x][y].ok_or_else(|| missing(b, &format!("d {} {}", points[x], points[y])))?;
            }
        }
        Ok(MetricSpace { points, d: table, quantale: q })
    }

    #[allow(clippy::type_complexity)]
    pub fn cocycle(&self, b: &Block) -> Result<(Vec<String>, FiniteGroup, Vec<Vec<usize>>)> {
        let g = self.group(b.first("group").ok_or_else(|| missing(b, "a group"))?)?;
        let objects: Vec<String> = b.all("objects").flat_map(|d| d.args.clone()).collect();
        let n = objects.len();
        let mut f = vec![vec![None; n]; n];
        for d in b.all("f") {
            let idx = |s: &str| objects.iter().position(|p| p == s).ok_or_else(|| unresolved(d, s));
            let (x, y) = (idx(&d.args[0])?, idx(&d.args[1])?);
            let v = d.rhs1().and_then(|s| g.element(s)).ok_or_else(|| bad(d, "group element"))?;
            f[x][y] = Some(v);
        }
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = f[x][y].ok_or_else(|| missing(b, &format!("f {} {}", objects[x], objects[y])))?;
            }
        }
        Ok((objects, g, table))
    }

    pub fn distributor(&self, name: &str) -> Result<Distributor> {
        let b = self.block(BlockKind::Distributor, name)?;
        let c = self.category(&b.first("left").ok_or_else(|| missing(b, "a left category"))?.args[0])?;
        let d = self.category(&b.first("right").ok_or_else(|| missing(b, "a right category"))?.args[0])?;
        let nd = d.object_count();
        let mut values = vec![Vec::new(); c.object_count() * nd];
        for decl in b.all("value") {
            let a = c.object(&decl.args[0]).ok_or_else(|| unresolved(decl, &decl.args[0]))?;
            let y = d.object(&decl.args[1]).ok_or_else(|| unresolved(decl, &decl.args[1]))?;
            values[a * nd + y] = decl.rhs.clone().unwrap_or_default().into_iter().filter(|s| s != "-").collect();
        }
        let pos = |decl: &Decl, fiber: &[String], s: &str| fiber.iter().position(|v| v == s).ok_or_else(|| unresolved(decl, s));
        let mut left: BTreeMap<(usize, usize), Vec<Option<usize>>> = BTreeMap::new();
        for f in 0..c.arrow_count() {
            for y in 0..nd {
                let size = values[c.dst(f) * nd + y].len();
                let init = if c.is_identity(f) { (0..size).map(Some).collect() } else { vec![None; size] };
                left.insert((f, y), init);
            }
        }
        for decl in b.all("act-left") {
            let f = c.arrow(&decl.args[0]).ok_or_else(|| unresolved(decl, &decl.args[0]))?;
            let y = d.object(&decl.args[1]).ok_or_else(|| unresolved(decl, &decl.args[1]))?;
            let x = pos(decl, &values[c.dst(f) * nd + y], &decl.args[2])?;
            let r = pos(decl, &values[c.src(f) * nd + y], decl.rhs1().unwrap_or(""))?;
            left.get_mut(&(f, y)).unwrap()[x] = Some(r);
        }
        let mut right: BTreeMap<(usize, usize), Vec<Option<usize>>> = BTreeMap::new();
        for g in 0..d.arrow_count() {
            for a in 0..c.object_count() {
                let size = values[a * nd + d.src(g)].len();
                let init = if d.is_identity(g) { (0..size).map(Some).collect() } else { vec![None; size] };
                right.insert((g, a), init);
            }
        }
        for decl in b.all("act-right") {
            let g = d.arrow(&decl.args[0]).ok_or_else(|| unresolved(decl, &decl.args[0]))?;
            let a = c.object(&decl.args[1]).ok_or_else(|| unresolved(decl, &decl.args[1]))?;
            let x = pos(decl, &values[a * nd + d.src(g)], &decl.args[2])?;
            let r = pos(decl, &values[a * nd + d.dst(g)], decl.rhs1().unwrap_or(""))?;
            right.get_mut(&(g, a)).unwrap()[x] = Some(r);
        }
        let complete = |m: BTreeMap<(usize, usize), Vec<Option<usize>>>, what: &str| {
            m.into_iter()
                .map(|(k, v)| {
                    v.into_iter()
                        .collect::<Option<Vec<_>>>()
                        .map(|v| (k, v))
                        .ok_or_else(|| missing(b, &format!("an {what} entry")))
                })
                .collect::<Result<BTreeMap<_, _>>>()
        };
        let (left, right) = (complete(left, "act-left")?, complete(right, "act-right")?);
        Distributor::from_actions(c, d, values, &left, &right).map_err(check(name))
    }

    pub fn transport(&self, name: &str) -> Result<Transport> {
        let b = self.block(BlockKind::Transport, name)?;
        let groupoid = self.category(&b.first("groupoid").ok_or_else(|| missing(b, "a groupoid"))?.args[0])?;
        let md = b.first("monoidal").ok_or_else(|| missing(b, "a monoidal"))?;
        let (m, matrices) = self.monoidal(&md.args[0])?;
        let bicategory = suspend_monoidal(&m).map_err(check(name))?;
        let underlying = underlying_category(&bicategory).map_err(check(name))?;
        let mut raw = RawFunctor {
            omap: groupoid.objects().iter().map(|o| (o.clone(), underlying.category.object_name(0).to_string())).collect(),
            amap: Vec::new(),
        };
        let mut mapped = BTreeMap::new();
        for d in b.all("map") {
            let f = groupoid.arrow(&d.args[0]).ok_or_else(|| unresolved(d, &d.args[0]))?;
            let cell = d.rhs1().and_then(|s| m.category.object(s)).ok_or_else(|| bad(d, "matrix name"))?;
            mapped.insert(f, cell);
        }
        for f in 0..groupoid.arrow_count() {
            let cell = match mapped.get(&f) {
                Some(&c) => c,
                None if groupoid.is_identity(f) => m.unit,
                None => return Err(missing(b, &format!("map {}", groupoid.arrow_name(f)))),
            };
            let k = underlying.cells.iter().position(|&(_, _, c)| c == cell).expect("every 1-cell is an arrow");
            raw.amap.push((groupoid.arrow_name(f).to_string(), underlying.category.arrow_name(k).to_string()));
        }
        let functor = validate_functor(&groupoid, &underlying.category, &raw).map_err(check(name))?;
        Ok(Transport { groupoid, bicategory, underlying, functor, matrices })
    }

    pub fn bimodule(&self, name: &str) -> Result<Bimodule> {
        let b = self.block(BlockKind::Bimodule, name)?;
        let bridge: RigidBridge = if let Some(d) = b.first("bridge") {
            bridge_of_distributor(&self.distributor(&d.args[0])?).map_err(check(name))?
        } else if let Some(d) = b.first("thin") {
            thin_bridge(&self.category(&d.args[0])?, &self.category(&d.args[1])?).map_err(check(name))?
        } else {
            return Err(missing(b, "a bridge"));
        };
        let base = self.base(&b.first("base").ok_or_else(|| missing(b, "a base"))?.args[0])?;
        let side = |kw: &str| -> Result<PathObject> {
            let d = b.first(kw).ok_or_else(|| missing(b, kw))?;
            self.point(self.block(BlockKind::PathObject, &d.args[0])?)
        };
        let (left, right) = (side("left")?, side("right")?);
        let (_, data) = self.point_data(&bridge.total, &base, b)?;
        validate_bimodule(&bridge, &base, self.truncation, data, &left, &right).map_err(check(name))
    }

    /// Colax data from `over`, `chain-image`, `hom-image`, `relation-image`,
    /// `colax` and `colax-unit` declarations. `hom-image A B` covers every
    /// nonempty chain from `A` to `B`. Unlisted values default to the strict
    /// choice: empty chains and identity arrows go to units, longer chains
    /// to the left-bracketed composite of their arrows' images, and 2-cells
    /// to the identity or the unique cell with the required endpoints.
    pub fn point_data(&self, shape: &FinCategory, base: &BaseOfEnrichment, b: &Block) -> Result<(Path2Category, ColaxData)> {
        let m = &base.bicategory;
        let p = build_path_category(shape, self.truncation).map_err(check(&b.name))?;
        let n = shape.object_count();
        let mut omap: Vec<Option<usize>> = vec![None; n];
        for d in b.all("over") {
            let a = shape.object(&d.args[0]).ok_or_else(|| unresolved(d, &d.args[0]))?;
            omap[a] = Some(m.object(&d.args[1]).ok_or_else(|| unresolved(d, &d.args[1]))?);
        }
        let omap: Vec<usize> = omap
            .into_iter()
            .enumerate()
            .map(|(a, x)| match x {
                Some(x) => Ok(x),
                None if m.object_count() == 1 => Ok(0),
                None => Err(missing(b, &format!("over {}", shape.object_name(a)))),
            })
            .collect::<Result<_>>()?;
        let chain = |d: &Decl, text: &str| -> Result<(usize, usize, usize)> {
            parse_chain(shape, text).and_then(|s| p.locate(&s)).ok_or_else(|| unresolved(d, text))
        };

        let mut explicit: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for d in b.all("chain-image") {
            let (a, c, i) = chain(d, &d.args[0])?;
            let name = d.rhs1().unwrap_or("");
            let cell = m.hom(omap[a], omap[c]).object(name).ok_or_else(|| unresolved(d, name))?;
            explicit.insert((a, c, i), cell);
        }
        let mut hom_default: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for d in b.all("hom-image") {
            let obj = |s: &str| shape.object(s).ok_or_else(|| unresolved(d, s));
            let (a, c) = (obj(&d.args[0])?, obj(&d.args[1])?);
            let name = d.rhs1().unwrap_or("");
            hom_default.insert((a, c), m.hom(omap[a], omap[c]).object(name).ok_or_else(|| unresolved(d, name))?);
        }
        let mut homs: Vec<FunctorMap> = Vec::with_capacity(n * n);
        for a in 0..n {
            for c in 0..n {
                let (x, y) = (omap[a], omap[c]);
                let mut obj = Vec::new();
                for (i, s) in p.path_hom(a, c).chains.iter().enumerate() {
                    let cell = if let Some(&cell) = explicit.get(&(a, c, i)) {
                        cell
                    } else if let Some(&cell) = hom_default.get(&(a, c)).filter(|_| !s.is_empty()) {
                        cell
                    } else if s.is_empty() || (s.len() == 1 && shape.is_identity(s.arrows[0])) {
                        if x != y {
                            return Err(missing(b, &format!("chain-image {}", s.display(shape))));
                        }
                        m.unit(x)
                    } else if s.len() == 1 {
                        return Err(missing(b, &format!("chain-image {}", s.display(shape))));
                    } else {
                        let leaves = s
                            .arrows
                            .iter()
                            .map(|&f| {
                                let one = crate::fincat::Chain { src: shape.src(f), dst: shape.dst(f), arrows: vec![f] };
                                let (u, v, k) = p.locate(&one).expect("length-one chain");
                                let cell = match explicit.get(&(u, v, k)) {
                                    Some(&c) => c,
                                    None if shape.is_identity(f) => m.unit(omap[u]),
                                    None => return Err(missing(b, &format!("chain-image {}", one.display(shape)))),
                                };
                                Ok(Leaf { src: omap[u], dst: omap[v], cell })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        left_normal(&leaves)
                            .eval(m)
                            .ok_or_else(|| missing(b, &format!("a composite for {}", s.display(shape))))?
                    };
                    obj.push(cell);
                }
                homs.push(FunctorMap { obj, arr: Vec::new() });
            }
        }

        let cell2 = |d: &Decl, x: usize, y: usize| -> Result<usize> {
            let name = d.rhs1().unwrap_or("");
            m.hom(x, y).arrow(name).ok_or_else(|| unresolved(d, name))
        };
        // identity or the unique 2-cell between two 1-cells
        let default2 = |x: usize, y: usize, from: usize, to: usize, what: String| -> Result<usize> {
            let h = m.hom(x, y);
            if from == to {
                return Ok(h.identity(from));
            }
            match h.hom(from, to) {
                [only] => Ok(*only),
                _ => Err(missing(b, &what)),
            }
        };
        let mut rel_explicit = BTreeMap::new();
        for d in b.all("relation-image") {
            let (a, c, i) = chain(d, &d.args[0])?;
            let (a2, c2, j) = chain(d, &d.args[1])?;
            if (a, c) != (a2, c2) {
                return Err(bad(d, "relation between chains with different endpoints"));
            }
            let r = p.path_hom(a, c).category.arrow_between(i, j).ok_or_else(|| bad(d, "no relation"))?;
            rel_explicit.insert((a, c, r), cell2(d, omap[a], omap[c])?);
        }
        for a in 0..n {
            for c in 0..n {
                let hom = &p.path_hom(a, c).category;
                let k = a * n + c;
                let mut arr = Vec::with_capacity(hom.arrow_count());
                for r in 0..hom.arrow_count() {
                    let cell = match rel_explicit.get(&(a, c, r)) {
                        Some(&cell) => cell,
                        None => {
                            let (s, t) = (homs[k].obj[hom.src(r)], homs[k].obj[hom.dst(r)]);
                            default2(omap[a], omap[c], s, t, format!("relation-image {}", hom.arrow_name(r)))?
                        }
                    };
                    arr.push(cell);
                }
                homs[k].arr = arr;
            }
        }

        let mut phi_explicit: BTreeMap<Pair, usize> = BTreeMap::new();
        for d in b.all("colax") {
            let k = d.args.len();
            let (b1, c1, ti) = chain(d, &d.args[k - 2])?;
            let (a1, b2, si) = chain(d, &d.args[k - 1])?;
            if b1 != b2 {
                return Err(bad(d, "chains are not composable"));
            }
            phi_explicit.insert(Pair { a: a1, b: b1, c: c1, t: ti, s: si }, cell2(d, omap[a1], omap[c1])?);
        }
        let mut phi = BTreeMap::new();
        for q in composable_pairs(&p) {
            let cell = match phi_explicit.get(&q) {
                Some(&cell) => cell,
                None => {
                    let ts = p.compose1(q.a, q.b, q.c, q.t, q.s).expect("within truncation");
                    let (x, y, z) = (omap[q.a], omap[q.b], omap[q.c]);
                    let src = homs[q.a * n + q.c].obj[ts];
                    let tgt = m
                        .compose1(x, y, z, homs[q.b * n + q.c].obj[q.t], homs[q.a * n + q.b].obj[q.s])
                        .ok_or_else(|| missing(b, "a composable image"))?;
                    default2(x, z, src, tgt, format!("colax {} {}", p.chain(q.b, q.c, q.t).display(shape), p.chain(q.a, q.b, q.s).display(shape)))?
                }
            };
            phi.insert(q, cell);
        }
        let mut unit_explicit = BTreeMap::new();
        for d in b.all("colax-unit") {
            let a = shape.object(&d.args[0]).ok_or_else(|| unresolved(d, &d.args[0]))?;
            unit_explicit.insert(a, cell2(d, omap[a], omap[a])?);
        }
        let mut phi_unit = Vec::with_capacity(n);
        for a in 0..n {
            let cell = match unit_explicit.get(&a) {
                Some(&c) => c,
                None => {
                    let x = omap[a];
                    let i = p.path_hom(a, a).chain_index(&crate::fincat::Chain::empty(a)).expect("empty chain");
                    let from = homs[a * n + a].obj[i];
                    if from == m.unit(x) {
                        id2(m, x, x, from)
                    } else {
                        default2(x, x, from, m.unit(x), format!("colax-unit {}", shape.object_name(a)))?
                    }
                }
            };
            phi_unit.push(cell);
        }
        Ok((p, ColaxData { omap, homs, phi, phi_unit }))
    }
}
