//! The truncated path 2-category `P_C`: chains of a finite category, ordered
//! by the cosimplicial action of Δ and composed by concatenation.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::bicat::{validate_colax, BicatError, Bicategory, ColaxData, ColaxMorphism, FunctorMap, Orientation};
use crate::fincat::{chains_between, coproduct, opposite, product, ArrowRec, Chain, FinCatError, FinCategory, FinFunctor};
use crate::simplex::{enumerate_hom, ordinal_sum, DeltaMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("chain endpoints do not match")]
    EndpointMismatch,
    #[error("composite of length {0} exceeds the truncation {1}")]
    TruncationExceeded(usize, usize),
    #[error("base category is not terminal")]
    BaseNotTerminal,
    #[error("isomorphism fails: {0}")]
    IsoFailure(String),
    #[error("image 1-cells are not composable: {0}")]
    NonComposableImage(String),
    #[error("truncation must be at least 1")]
    ZeroTruncation,
    #[error(transparent)]
    Bicat(#[from] BicatError),
    #[error(transparent)]
    FinCat(#[from] FinCatError),
}

pub type Result<T> = std::result::Result<T, PathError>;

/// Image of `s` under the cosimplicial action of `u: |s| → m`: arrow `j` of the
/// result composes the arrows of `s` over `u⁻¹(j)`, or is an identity when the
/// fibre is empty.
pub fn act(c: &FinCategory, u: &DeltaMap, s: &Chain) -> Chain {
    debug_assert_eq!(u.dom(), s.len());
    let verts = s.vertices(c);
    let mut arrows = Vec::with_capacity(u.cod());
    let mut i = 0;
    for j in 0..u.cod() {
        let start = verts[i];
        let mut acc = c.identity(start);
        while i < u.dom() && u.images()[i] == j {
            acc = c.compose(s.arrows[i], acc).expect("composable chain");
            i += 1;
        }
        arrows.push(acc);
    }
    Chain { src: s.src, dst: if arrows.is_empty() { s.src } else { s.dst }, arrows }
}

/// `t ⊗ s`: the arrows of `s` followed by those of `t`.
pub fn concat_chains(t: &Chain, s: &Chain, truncation: usize) -> Result<Chain> {
    if s.dst != t.src {
        return Err(PathError::EndpointMismatch);
    }
    let len = s.len() + t.len();
    if len > truncation {
        return Err(PathError::TruncationExceeded(len, truncation));
    }
    let mut arrows = s.arrows.clone();
    arrows.extend_from_slice(&t.arrows);
    Ok(Chain { src: s.src, dst: t.dst, arrows })
}

/// The hom category `P_C(A, B)`: chains as objects, the witnessed order as
/// arrows. All Δ-witnesses of each relation are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathHom {
    pub src: usize,
    pub dst: usize,
    pub chains: Vec<Chain>,
    pub category: FinCategory,
    index: HashMap<Chain, usize>,
    witnesses: BTreeMap<(usize, usize), Vec<DeltaMap>>,
}

impl PathHom {
    pub fn chain_index(&self, s: &Chain) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// All Δ-maps carrying chain `s` to chain `t` (by index).
    pub fn witnesses(&self, s: usize, t: usize) -> &[DeltaMap] {
        self.witnesses.get(&(s, t)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.witnesses.keys().copied()
    }

    pub fn relation_count(&self) -> usize {
        self.witnesses.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path2Category {
    pub base: FinCategory,
    pub truncation: usize,
    homs: Vec<PathHom>,
}

pub fn build_path_category(c: &FinCategory, truncation: usize) -> Result<Path2Category> {
    if truncation == 0 {
        return Err(PathError::ZeroTruncation);
    }
    let n = c.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            homs.push(build_hom(c, a, b, truncation));
        }
    }
    Ok(Path2Category { base: c.clone(), truncation, homs })
}

fn build_hom(c: &FinCategory, a: usize, b: usize, truncation: usize) -> PathHom {
    let chains: Vec<Chain> = (0..=truncation).flat_map(|k| chains_between(c, k, a, b)).collect();
    let index: HashMap<Chain, usize> = chains.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let mut witnesses: BTreeMap<(usize, usize), Vec<DeltaMap>> = BTreeMap::new();
    for (i, s) in chains.iter().enumerate() {
        for m in 0..=truncation {
            for u in enumerate_hom(s.len(), m) {
                let t = act(c, &u, s);
                if let Some(&j) = index.get(&t) {
                    witnesses.entry((i, j)).or_default().push(u);
                }
            }
        }
    }
    let names: Vec<String> = chains.iter().map(|s| s.display(c)).collect();
    let rel = witnesses
        .keys()
        .map(|&(i, j)| ArrowRec { name: format!("{}=>{}", names[i], names[j]), src: i, dst: j })
        .collect();
    let category = FinCategory::from_preorder(names, rel);
    PathHom { src: a, dst: b, chains, category, index, witnesses }
}

impl Path2Category {
    pub fn path_hom(&self, a: usize, b: usize) -> &PathHom {
        &self.homs[a * self.base.object_count() + b]
    }

    /// Looks up a chain in its hom; `(a, b, index)`.
    pub fn locate(&self, s: &Chain) -> Option<(usize, usize, usize)> {
        let i = self.path_hom(s.src, s.dst).chain_index(s)?;
        Some((s.src, s.dst, i))
    }

    pub fn chain(&self, a: usize, b: usize, i: usize) -> &Chain {
        &self.path_hom(a, b).chains[i]
    }

    /// A witness `u` with `u·s = t`, if any.
    pub fn hom_witness(&self, s: &Chain, t: &Chain) -> Option<DeltaMap> {
        if (s.src, s.dst) != (t.src, t.dst) {
            return None;
        }
        let h = self.path_hom(s.src, s.dst);
        let (i, j) = (h.chain_index(s)?, h.chain_index(t)?);
        h.witnesses(i, j).first().cloned()
    }

    pub fn chain_count(&self) -> usize {
        self.homs.iter().map(|h| h.chains.len()).sum()
    }

    pub fn relation_count(&self) -> usize {
        self.homs.iter().map(|h| h.relation_count()).sum()
    }

    /// Parses `[0,A]` or `f1;f2;…` (arrows of the base, in path order).
    pub fn parse_chain(&self, text: &str) -> Option<Chain> {
        parse_chain(&self.base, text)
    }
}

pub fn parse_chain(c: &FinCategory, text: &str) -> Option<Chain> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix("[0,").and_then(|r| r.strip_suffix(']')) {
        return c.object(inner.trim()).map(Chain::empty);
    }
    let body = match t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        Some(inner) => match inner.split_once(',') {
            Some((len, rest)) if len.trim().parse::<usize>().is_ok() => rest,
            _ => inner,
        },
        None => t,
    };
    let arrows: Vec<usize> = body.split(';').map(|a| c.arrow(a.trim())).collect::<Option<_>>()?;
    if arrows.is_empty() || arrows.windows(2).any(|w| c.dst(w[0]) != c.src(w[1])) {
        return None;
    }
    Some(Chain { src: c.src(arrows[0]), dst: c.dst(*arrows.last().unwrap()), arrows })
}

impl Bicategory for Path2Category {
    fn object_count(&self) -> usize {
        self.base.object_count()
    }

    fn object_name(&self, u: usize) -> &str {
        self.base.object_name(u)
    }

    fn hom(&self, u: usize, v: usize) -> &FinCategory {
        &self.path_hom(u, v).category
    }

    fn compose1(&self, u: usize, v: usize, w: usize, g: usize, f: usize) -> Option<usize> {
        let t = self.chain(v, w, g);
        let s = self.chain(u, v, f);
        let ts = concat_chains(t, s, self.truncation).ok()?;
        self.path_hom(u, w).chain_index(&ts)
    }

    fn compose2(&self, u: usize, v: usize, w: usize, beta: usize, alpha: usize) -> Option<usize> {
        let (hs, ht) = (self.hom(u, v), self.hom(v, w));
        let src = self.compose1(u, v, w, ht.src(beta), hs.src(alpha))?;
        let dst = self.compose1(u, v, w, ht.dst(beta), hs.dst(alpha))?;
        self.hom(u, w).arrow_between(src, dst)
    }

    fn unit(&self, u: usize) -> usize {
        self.path_hom(u, u).chain_index(&Chain::empty(u)).expect("empty chain present")
    }

    fn associator(&self, u: usize, v: usize, w: usize, x: usize, h: usize, g: usize, f: usize) -> Option<usize> {
        let hg = self.compose1(v, w, x, h, g)?;
        let hgf = self.compose1(u, v, x, hg, f)?;
        Some(self.hom(u, x).identity(hgf))
    }

    fn left_unitor(&self, u: usize, v: usize, f: usize) -> usize {
        self.hom(u, v).identity(f)
    }

    fn right_unitor(&self, u: usize, v: usize, f: usize) -> usize {
        self.hom(u, v).identity(f)
    }
}

/// Strict 2-category laws on every composable triple up to truncation.
pub fn check_strictness(p: &Path2Category) -> Result<()> {
    let n = p.object_count();
    for a in 0..n {
        for b in 0..n {
            for i in 0..p.path_hom(a, b).chains.len() {
                let ub = p.unit(b);
                let ua = p.unit(a);
                if p.compose1(a, b, b, ub, i) != Some(i) || p.compose1(a, a, b, i, ua) != Some(i) {
                    return Err(PathError::IsoFailure("unit law".into()));
                }
            }
        }
    }
    for (a, b, c, d) in quads(n) {
        for f in 0..p.path_hom(a, b).chains.len() {
            for g in 0..p.path_hom(b, c).chains.len() {
                for h in 0..p.path_hom(c, d).chains.len() {
                    let l = p.compose1(b, c, d, h, g).and_then(|hg| p.compose1(a, b, d, hg, f));
                    let r = p.compose1(a, b, c, g, f).and_then(|gf| p.compose1(a, c, d, h, gf));
                    if l != r {
                        return Err(PathError::IsoFailure("associativity".into()));
                    }
                }
            }
        }
    }
    Ok(())
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d)))))
}

/// `P_1` read as truncated Δ: chain of length `n` ↔ ordinal `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaIdentification {
    /// Chain index of the length-`n` chain, for `n ≤ N`.
    pub chain_of_length: Vec<usize>,
    /// Number of witnesses between lengths `(n, m)`; equals `|Δ(n, m)|`.
    pub witness_counts: Vec<Vec<usize>>,
}

pub fn delta_identification(p: &Path2Category) -> Result<DeltaIdentification> {
    let c = &p.base;
    if c.object_count() != 1 || c.arrow_count() != 1 {
        return Err(PathError::BaseNotTerminal);
    }
    let h = p.path_hom(0, 0);
    let nmax = p.truncation;
    let chain_of_length: Vec<usize> = (0..=nmax)
        .map(|k| h.chain_index(&Chain { src: 0, dst: 0, arrows: vec![0; k] }))
        .collect::<Option<_>>()
        .ok_or_else(|| PathError::IsoFailure("missing chain".into()))?;
    if h.chains.len() != nmax + 1 {
        return Err(PathError::IsoFailure("extra chains".into()));
    }
    let mut witness_counts = vec![vec![0; nmax + 1]; nmax + 1];
    for n in 0..=nmax {
        for m in 0..=nmax {
            let w = h.witnesses(chain_of_length[n], chain_of_length[m]);
            if w != enumerate_hom(n, m).as_slice() {
                return Err(PathError::IsoFailure(format!("witnesses {n} -> {m}")));
            }
            witness_counts[n][m] = w.len();
        }
    }
    for n in 0..=nmax {
        for m in 0..=nmax - n {
            let g = p.compose1(0, 0, 0, chain_of_length[m], chain_of_length[n]);
            if g != Some(chain_of_length[n + m]) {
                return Err(PathError::IsoFailure(format!("{m} ⊗ {n}")));
            }
            // witnesses of a tensor contain the ordinal sums
            for n2 in 0..=nmax {
                for m2 in 0..=nmax.saturating_sub(n2) {
                    for u in enumerate_hom(n, n2) {
                        for v in enumerate_hom(m, m2) {
                            let sum = ordinal_sum(&u, &v);
                            let w = h.witnesses(chain_of_length[n + m], chain_of_length[n2 + m2]);
                            if !w.contains(&sum) {
                                return Err(PathError::IsoFailure(format!("{u} + {v}")));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(DeltaIdentification { chain_of_length, witness_counts })
}

/// Chain-wise image of a chain under a functor.
pub fn map_chain(f: &FinFunctor, s: &Chain) -> Chain {
    Chain { src: f.omap[s.src], dst: f.omap[s.dst], arrows: s.arrows.iter().map(|&a| f.amap[a]).collect() }
}

/// `P_F`, validated as a strict homomorphism.
pub fn path_functor(f: &FinFunctor, src: &Path2Category, tgt: &Path2Category) -> Result<ColaxMorphism> {
    let n = src.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (ha, hb) = (src.path_hom(a, b), tgt.path_hom(f.omap[a], f.omap[b]));
            let obj: Vec<usize> = ha
                .chains
                .iter()
                .map(|s| hb.chain_index(&map_chain(f, s)))
                .collect::<Option<_>>()
                .ok_or(PathError::IsoFailure("image chain above truncation".into()))?;
            let arr: Vec<usize> = ha
                .category
                .arrows()
                .iter()
                .map(|r| hb.category.arrow_between(obj[r.src], obj[r.dst]))
                .collect::<Option<_>>()
                .ok_or(PathError::IsoFailure("image relation missing".into()))?;
            homs.push(FunctorMap { obj, arr });
        }
    }
    let data = identity_colaxity(src, tgt, f.omap.clone(), homs);
    let m = validate_colax(src, tgt, data, Orientation::Colax)?;
    Ok(m)
}

/// Morphism data with identity colaxity cells; assumes images compose strictly.
pub(crate) fn identity_colaxity<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    omap: Vec<usize>,
    homs: Vec<FunctorMap>,
) -> ColaxData {
    let n = src.object_count();
    let mut phi = BTreeMap::new();
    for p in crate::bicat::composable_pairs(src) {
        let ts = src.compose1(p.a, p.b, p.c, p.t, p.s).unwrap();
        let img = homs[p.a * n + p.c].obj[ts];
        phi.insert(p, tgt.hom(omap[p.a], omap[p.c]).identity(img));
    }
    let phi_unit = (0..n)
        .map(|a| {
            let img = homs[a * n + a].obj[src.unit(a)];
            tgt.hom(omap[a], omap[a]).identity(img)
        })
        .collect();
    ColaxData { omap, homs, phi, phi_unit }
}

/// `i: C → P_C` (arrows to length-one chains) and `comp: P_C → C` (chains to
/// composites).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedCompress {
    /// Chain index in `P_C(src f, dst f)` of `[1, f]`, per arrow `f`.
    pub embed: Vec<usize>,
    /// Composite arrow per chain, indexed `[a * n + b][chain]`.
    pub compress: Vec<Vec<usize>>,
}

pub fn embed_and_compress(p: &Path2Category) -> Result<EmbedCompress> {
    let c = &p.base;
    let n = c.object_count();
    let embed: Vec<usize> = (0..c.arrow_count())
        .map(|f| p.path_hom(c.src(f), c.dst(f)).chain_index(&Chain { src: c.src(f), dst: c.dst(f), arrows: vec![f] }))
        .collect::<Option<_>>()
        .ok_or(PathError::IsoFailure("length-one chain missing".into()))?;
    let compress: Vec<Vec<usize>> = (0..n * n)
        .map(|i| p.homs[i].chains.iter().map(|s| s.composite(c)).collect())
        .collect();
    for f in 0..c.arrow_count() {
        if compress[c.src(f) * n + c.dst(f)][embed[f]] != f {
            return Err(PathError::IsoFailure(format!("comp ∘ i at {}", c.arrow_name(f))));
        }
    }
    for p_ in crate::bicat::composable_pairs(p) {
        let ts = p.compose1(p_.a, p_.b, p_.c, p_.t, p_.s).unwrap();
        let lhs = compress[p_.a * n + p_.c][ts];
        let rhs = c.compose(compress[p_.b * n + p_.c][p_.t], compress[p_.a * n + p_.b][p_.s]);
        if Some(lhs) != rhs {
            return Err(PathError::IsoFailure("comp does not preserve concatenation".into()));
        }
    }
    Ok(EmbedCompress { embed, compress })
}

/// The underlying 1-category of a bicategory whose 1-cell composition is
/// strictly associative and unital. Arrow `k` lists 1-cells hom by hom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Underlying {
    pub category: FinCategory,
    /// `(u, v, cell)` for each arrow.
    pub cells: Vec<(usize, usize, usize)>,
}

pub fn underlying_category<B: Bicategory + ?Sized>(m: &B) -> Result<Underlying> {
    let n = m.object_count();
    let mut cells = Vec::new();
    let mut offset = vec![0; n * n];
    for u in 0..n {
        for v in 0..n {
            offset[u * n + v] = cells.len();
            cells.extend((0..m.hom(u, v).object_count()).map(|f| (u, v, f)));
        }
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    for &(u, v, f) in &cells {
        *seen.entry(m.cell1_name(u, v, f)).or_default() += 1;
    }
    let arrows: Vec<ArrowRec> = cells
        .iter()
        .map(|&(u, v, f)| {
            let base = m.cell1_name(u, v, f);
            let name = if seen[&base] > 1 { format!("{}.{}.{}", m.object_name(u), base, m.object_name(v)) } else { base };
            ArrowRec { name, src: u, dst: v }
        })
        .collect();
    let identities = (0..n).map(|u| offset[u * n + u] + m.unit(u)).collect();
    let mut comp = HashMap::new();
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                for g in 0..m.hom(v, w).object_count() {
                    for f in 0..m.hom(u, v).object_count() {
                        let gf = m
                            .compose1(u, v, w, g, f)
                            .ok_or_else(|| PathError::NonComposableImage(format!("{} ⊗ {}", m.cell1_name(v, w, g), m.cell1_name(u, v, f))))?;
                        comp.insert((offset[v * n + w] + g, offset[u * n + v] + f), offset[u * n + w] + gf);
                    }
                }
            }
        }
    }
    let objects = (0..n).map(|u| m.object_name(u).to_string()).collect();
    let category = FinCategory::assemble(objects, arrows, identities, comp);
    category.check().map_err(|e| PathError::NonComposableImage(e.to_string()))?;
    Ok(Underlying { category, cells })
}

/// Extends a functor `G: C → M_{≤1}` to the strict homomorphism `P_C → M`
/// sending `[n, s]` to the composite of `G`-images and `[0, A]` to `I_{GA}`.
pub fn free_lift<B: Bicategory + ?Sized>(p: &Path2Category, m: &B, under: &Underlying, g: &FinFunctor) -> Result<ColaxMorphism> {
    let n = p.object_count();
    let c = &p.base;
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (g.omap[a], g.omap[b]);
            let hom = p.path_hom(a, b);
            let mut obj = Vec::with_capacity(hom.chains.len());
            for s in &hom.chains {
                let mut acc = m.unit(x);
                let mut at = x;
                for &f in &s.arrows {
                    let (u, v, cell) = under.cells[g.amap[f]];
                    if u != at {
                        return Err(PathError::NonComposableImage(c.arrow_name(f).into()));
                    }
                    acc = m
                        .compose1(x, u, v, cell, acc)
                        .ok_or_else(|| PathError::NonComposableImage(c.arrow_name(f).into()))?;
                    at = v;
                }
                if at != y {
                    return Err(PathError::NonComposableImage(s.display(c)));
                }
                obj.push(acc);
            }
            let target = m.hom(x, y);
            let arr = hom
                .category
                .arrows()
                .iter()
                .map(|r| {
                    if obj[r.src] == obj[r.dst] {
                        Ok(target.identity(obj[r.src]))
                    } else {
                        Err(PathError::NonComposableImage(format!("relation {}", r.name)))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            homs.push(FunctorMap { obj, arr });
        }
    }
    let data = identity_colaxity(p, m, g.omap.clone(), homs);
    Ok(validate_colax(p, m, data, Orientation::Colax)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoMode<'a> {
    Coproduct(&'a FinCategory, &'a FinCategory),
    Opposite(&'a FinCategory),
    FiberProduct(&'a FinCategory, &'a FinCategory),
}

/// Outcome of a structural comparison: sizes of the two sides, which agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoReport {
    pub objects: usize,
    pub chains: usize,
    pub relations: usize,
}

pub fn structural_isos(mode: IsoMode<'_>, truncation: usize) -> Result<IsoReport> {
    match mode {
        IsoMode::Coproduct(c, d) => coproduct_iso(c, d, truncation),
        IsoMode::Opposite(c) => opposite_iso(c, truncation),
        IsoMode::FiberProduct(c, d) => fiber_product_iso(c, d, truncation),
    }
}

fn fail(msg: String) -> PathError {
    PathError::IsoFailure(msg)
}

fn coproduct_iso(c: &FinCategory, d: &FinCategory, nmax: usize) -> Result<IsoReport> {
    let cd = coproduct(c, d);
    let p = build_path_category(&cd, nmax)?;
    let pc = build_path_category(c, nmax)?;
    let pd = build_path_category(d, nmax)?;
    let (co, ca) = (c.object_count(), c.arrow_count());
    let n = cd.object_count();
    for a in 0..n {
        for b in 0..n {
            let h = p.path_hom(a, b);
            let side = match (a < co, b < co) {
                (true, true) => Some((&pc, a, b, 0, 0)),
                (false, false) => Some((&pd, a - co, b - co, co, ca)),
                _ => None,
            };
            let Some((q, a2, b2, oshift, ashift)) = side else {
                if !h.chains.is_empty() {
                    return Err(fail(format!("cross chain {}", h.chains[0].display(&cd))));
                }
                continue;
            };
            let h2 = q.path_hom(a2, b2);
            if h.chains.len() != h2.chains.len() || h.relation_count() != h2.relation_count() {
                return Err(fail(format!("hom ({}, {}) sizes", cd.object_name(a), cd.object_name(b))));
            }
            let back = |s: &Chain| Chain {
                src: s.src - oshift,
                dst: s.dst - oshift,
                arrows: s.arrows.iter().map(|&f| f - ashift).collect(),
            };
            let imap: Vec<usize> = h
                .chains
                .iter()
                .map(|s| h2.chain_index(&back(s)).ok_or_else(|| fail(format!("chain {}", s.display(&cd)))))
                .collect::<Result<_>>()?;
            for (i, j) in h.relations() {
                if h2.category.arrow_between(imap[i], imap[j]).is_none() {
                    return Err(fail(format!("relation {}", h.category.arrow_name(h.category.arrow_between(i, j).unwrap()))));
                }
            }
        }
    }
    Ok(IsoReport { objects: n, chains: p.chain_count(), relations: p.relation_count() })
}

fn reverse(s: &Chain) -> Chain {
    Chain { src: s.dst, dst: s.src, arrows: s.arrows.iter().rev().copied().collect() }
}

fn opposite_iso(c: &FinCategory, nmax: usize) -> Result<IsoReport> {
    let op = opposite(c);
    let p = build_path_category(c, nmax)?;
    let q = build_path_category(&op, nmax)?;
    let n = c.object_count();
    for a in 0..n {
        for b in 0..n {
            let (h, h2) = (p.path_hom(b, a), q.path_hom(a, b));
            if h.chains.len() != h2.chains.len() || h.relation_count() != h2.relation_count() {
                return Err(fail(format!("hom ({}, {}) sizes", c.object_name(a), c.object_name(b))));
            }
            let imap: Vec<usize> = h
                .chains
                .iter()
                .map(|s| h2.chain_index(&reverse(s)).ok_or_else(|| fail(format!("chain {}", s.display(c)))))
                .collect::<Result<_>>()?;
            for (i, j) in h.relations() {
                if h2.category.arrow_between(imap[i], imap[j]).is_none() {
                    return Err(fail(format!("relation {} => {}", h.chains[i].display(c), h.chains[j].display(c))));
                }
            }
        }
    }
    Ok(IsoReport { objects: n, chains: p.chain_count(), relations: p.relation_count() })
}

/// `P_{C×D}` against pairs of equal-length chains related by a common witness.
fn fiber_product_iso(c: &FinCategory, d: &FinCategory, nmax: usize) -> Result<IsoReport> {
    let cd = product(c, d);
    let p = build_path_category(&cd, nmax)?;
    let pc = build_path_category(c, nmax)?;
    let pd = build_path_category(d, nmax)?;
    let (dn, da) = (d.object_count(), d.arrow_count());
    let split = |s: &Chain| {
        (
            Chain { src: s.src / dn, dst: s.dst / dn, arrows: s.arrows.iter().map(|&f| f / da).collect() },
            Chain { src: s.src % dn, dst: s.dst % dn, arrows: s.arrows.iter().map(|&f| f % da).collect() },
        )
    };
    let mut relations = 0;
    for a in 0..cd.object_count() {
        for b in 0..cd.object_count() {
            let h = p.path_hom(a, b);
            let (hc, hd) = (pc.path_hom(a / dn, b / dn), pd.path_hom(a % dn, b % dn));
            let mut fibre = 0;
            for s in &hc.chains {
                fibre += hd.chains.iter().filter(|t| t.len() == s.len()).count();
            }
            if fibre != h.chains.len() {
                return Err(fail(format!("hom ({}, {}) has {} chains, fibre has {fibre}", cd.object_name(a), cd.object_name(b), h.chains.len())));
            }
            let pairs: Vec<(usize, usize)> = h
                .chains
                .iter()
                .map(|s| {
                    let (x, y) = split(s);
                    Some((hc.chain_index(&x)?, hd.chain_index(&y)?))
                })
                .collect::<Option<_>>()
                .ok_or_else(|| fail("component chain missing".into()))?;
            for i in 0..h.chains.len() {
                for j in 0..h.chains.len() {
                    let (x1, y1) = pairs[i];
                    let (x2, y2) = pairs[j];
                    let common = hc.witnesses(x1, x2).iter().any(|u| hd.witnesses(y1, y2).contains(u));
                    let here = h.category.arrow_between(i, j).is_some();
                    if common != here {
                        return Err(fail(format!("relation {} => {}", h.chains[i].display(&cd), h.chains[j].display(&cd))));
                    }
                    relations += usize::from(here);
                }
            }
        }
    }
    Ok(IsoReport { objects: cd.object_count(), chains: p.chain_count(), relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{coarse, interval};

    #[test]
    fn terminal_base_is_delta() {
        let p = build_path_category(&FinCategory::terminal(), 4).unwrap();
        assert_eq!(p.path_hom(0, 0).chains.len(), 5);
        let d = delta_identification(&p).unwrap();
        assert_eq!(d.witness_counts[2][2], 3);
        assert_eq!(d.witness_counts[3][2], 4);
        check_strictness(&p).unwrap();
    }

    #[test]
    fn coarse_chain_counts() {
        let c = coarse(&["a", "b"]).unwrap();
        let p = build_path_category(&c, 2).unwrap();
        assert_eq!(p.path_hom(0, 1).chains.len(), 3);
        assert_eq!(p.path_hom(0, 0).chains.len(), 4);
    }

    #[test]
    fn witnesses() {
        let c = coarse(&["A", "B", "C"]).unwrap();
        let p = build_path_category(&c, 3).unwrap();
        let s = parse_chain(&c, "(A,B);(B,C)").unwrap();
        let t = parse_chain(&c, "(A,C)").unwrap();
        assert_eq!(p.hom_witness(&s, &t).unwrap().images(), &[0, 0]);
        let e = parse_chain(&c, "[0,A]").unwrap();
        let aa = parse_chain(&c, "(A,A)").unwrap();
        assert_eq!(p.hom_witness(&e, &aa).unwrap().dom(), 0);
        assert!(p.hom_witness(&aa, &e).is_none());
        assert_eq!(concat_chains(&parse_chain(&c, "(B,C)").unwrap(), &parse_chain(&c, "(A,B)").unwrap(), 3).unwrap(), s);
    }

    #[test]
    fn path_functor_of_identity_and_collapse() {
        let c = interval(1);
        let p = build_path_category(&c, 3).unwrap();
        let id = path_functor(&FinFunctor::identity(&c), &p, &p).unwrap();
        assert!(id.strict);
        let one = FinCategory::terminal();
        let p1 = build_path_category(&one, 3).unwrap();
        let bang = FinFunctor::new(c.clone(), one, vec![0, 0], vec![0; c.arrow_count()]).unwrap();
        let len = path_functor(&bang, &p, &p1).unwrap();
        let h = p.path_hom(0, 1);
        for (i, s) in h.chains.iter().enumerate() {
            let img = len.data.homs[1].obj[i];
            assert_eq!(p1.path_hom(0, 0).chains[img].len(), s.len());
        }
    }

    #[test]
    fn isos() {
        let one = FinCategory::terminal();
        structural_isos(IsoMode::Coproduct(&one, &one), 3).unwrap();
        structural_isos(IsoMode::Opposite(&interval(1)), 3).unwrap();
        structural_isos(IsoMode::FiberProduct(&coarse(&["a", "b"]).unwrap(), &interval(1)), 3).unwrap();
    }

    #[test]
    fn embed_compress_round_trip() {
        let p = build_path_category(&coarse(&["a", "b"]).unwrap(), 3).unwrap();
        embed_and_compress(&p).unwrap();
    }
}
