use std::collections::BTreeMap;

use super::tensor::{left_normal, left_normal_blocks, normalize, rebracket, tensor_blocks, Leaf, Term};
use super::{check_path_object, EnrichError, PathObject, Result};
use crate::bicat::{id2, inverse2, vcomp, BaseOfEnrichment, Bicategory, ColaxData, FinBicategory, FunctorMap};
use crate::fincat::{Chain, FinCategory};
use crate::pathcat::{act, build_path_category, Path2Category};
use crate::simplex::{factorize_generators, Generator};

/// A category enriched over a bicategory `M`, on a thin shape: each arrow
/// `f: a → b` of the shape carries a 1-cell `hom[f]: over[a] → over[b]`.
/// Over a coarse shape this is a classical enriched category (a polyad).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedCategory {
    pub shape: FinCategory,
    pub over: Vec<usize>,
    pub hom: Vec<usize>,
    /// `I_a: I_{over a} → hom[1_a]`.
    pub unit: Vec<usize>,
    /// `c(g, f): hom[g] ⊗ hom[f] → hom[g∘f]`, for composable arrow pairs.
    pub comp: BTreeMap<(usize, usize), usize>,
}

impl EnrichedCategory {
    pub fn objects(&self) -> &[String] {
        self.shape.objects()
    }

    pub(super) fn leaf(&self, f: usize) -> Leaf {
        Leaf { src: self.over[self.shape.src(f)], dst: self.over[self.shape.dst(f)], cell: self.hom[f] }
    }
}

fn arrow_pairs(c: &FinCategory) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..c.arrow_count()).flat_map(move |f| c.hom_out(c.dst(f)).into_iter().map(move |g| (g, f)))
}

/// Checks endpoints, associativity against `a`, and both unit laws against
/// `l` and `r`.
pub fn validate_enriched<B: Bicategory + ?Sized>(m: &B, e: &EnrichedCategory) -> Result<()> {
    let c = &e.shape;
    if !c.is_thin() {
        return Err(EnrichError::ShapeMismatch("shape must be thin".into()));
    }
    let n = c.object_count();
    if e.over.len() != n || e.unit.len() != n || e.hom.len() != c.arrow_count() {
        return Err(EnrichError::Malformed("table sizes".into()));
    }
    if e.over.iter().any(|&u| u >= m.object_count()) {
        return Err(EnrichError::Malformed("object over an unknown base object".into()));
    }
    let ov = |x: usize| e.over[x];
    for f in 0..c.arrow_count() {
        if e.hom[f] >= m.hom(ov(c.src(f)), ov(c.dst(f))).object_count() {
            return Err(EnrichError::Malformed(format!("hom at {}", c.arrow_name(f))));
        }
    }
    for a in 0..n {
        let h = m.hom(ov(a), ov(a));
        let u = e.unit[a];
        if u >= h.arrow_count() || h.src(u) != m.unit(ov(a)) || h.dst(u) != e.hom[c.identity(a)] {
            return Err(EnrichError::Malformed(format!("unit at {}", c.object_name(a))));
        }
    }
    for (g, f) in arrow_pairs(c) {
        let (x, y, z) = (ov(c.src(f)), ov(c.dst(f)), ov(c.dst(g)));
        let cell = *e
            .comp
            .get(&(g, f))
            .ok_or_else(|| EnrichError::Malformed(format!("missing composition ({}, {})", c.arrow_name(g), c.arrow_name(f))))?;
        let h = m.hom(x, z);
        let src = m.compose1(x, y, z, e.hom[g], e.hom[f]);
        let gf = c.compose(g, f).unwrap();
        if cell >= h.arrow_count() || Some(h.src(cell)) != src || h.dst(cell) != e.hom[gf] {
            return Err(EnrichError::Malformed(format!("composition ({}, {})", c.arrow_name(g), c.arrow_name(f))));
        }
    }
    let comp = |g: usize, f: usize| e.comp[&(g, f)];
    for (g, f) in arrow_pairs(c) {
        for h in c.hom_out(c.dst(g)) {
            let [a, b, cc, d] = [c.src(f), c.dst(f), c.dst(g), c.dst(h)];
            let [x, y, z, w] = [a, b, cc, d].map(ov);
            let (hg, gf) = (c.compose(h, g).unwrap(), c.compose(g, f).unwrap());
            let lhs = (|| {
                let s = m.compose2(x, y, w, comp(h, g), id2(m, x, y, e.hom[f]))?;
                vcomp(m, x, w, comp(hg, f), s)
            })();
            let rhs = (|| {
                let a_ = m.associator(x, y, z, w, e.hom[h], e.hom[g], e.hom[f])?;
                let s = m.compose2(x, z, w, id2(m, z, w, e.hom[h]), comp(g, f))?;
                let t = vcomp(m, x, w, s, a_)?;
                vcomp(m, x, w, comp(h, gf), t)
            })();
            if lhs.is_none() || lhs != rhs {
                return Err(EnrichError::EnrichedAxiom(format!(
                    "associativity at ({}, {}, {})",
                    c.arrow_name(h),
                    c.arrow_name(g),
                    c.arrow_name(f)
                )));
            }
        }
    }
    for f in 0..c.arrow_count() {
        let (a, b) = (c.src(f), c.dst(f));
        let (x, y) = (ov(a), ov(b));
        let left = m
            .compose2(x, y, y, e.unit[b], id2(m, x, y, e.hom[f]))
            .and_then(|s| vcomp(m, x, y, comp(c.identity(b), f), s));
        if left != Some(m.left_unitor(x, y, e.hom[f])) {
            return Err(EnrichError::EnrichedAxiom(format!("left unit at {}", c.arrow_name(f))));
        }
        let right = m
            .compose2(x, x, y, id2(m, x, y, e.hom[f]), e.unit[a])
            .and_then(|s| vcomp(m, x, y, comp(f, c.identity(a)), s));
        if right != Some(m.right_unitor(x, y, e.hom[f])) {
            return Err(EnrichError::EnrichedAxiom(format!("right unit at {}", c.arrow_name(f))));
        }
    }
    Ok(())
}

struct Imager<'a> {
    m: &'a FinBicategory,
    e: &'a EnrichedCategory,
}

impl Imager<'_> {
    fn term(&self, s: &Chain) -> Option<Term> {
        if s.is_empty() {
            return None;
        }
        let leaves: Vec<Leaf> = s.arrows.iter().map(|&f| self.e.leaf(f)).collect();
        Some(left_normal(&leaves))
    }

    fn object(&self, s: &Chain) -> usize {
        match self.term(s) {
            Some(t) => t.eval(self.m).expect("composable image"),
            None => self.m.unit(self.e.over[s.src]),
        }
    }

    /// Image of one generator applied to `s`; returns the next chain and the
    /// 2-cell `F(s) → F(next)`.
    fn generator(&self, s: &Chain, g: Generator) -> Option<(Chain, usize)> {
        let (m, e, c) = (self.m, self.e, &self.e.shape);
        let next = act(c, &g.to_map(), s);
        let (x, z) = (e.over[s.src], e.over[s.dst]);
        let cell = match g {
            Generator::Codegeneracy { i, .. } => {
                let (fi, fj) = (s.arrows[i], s.arrows[i + 1]);
                let mut blocks: Vec<Term> = s.arrows.iter().map(|&f| Term::Leaf(e.leaf(f))).collect();
                blocks[i] = Term::node(Term::Leaf(e.leaf(fj)), Term::Leaf(e.leaf(fi)));
                blocks.remove(i + 1);
                let grouped = left_normal_blocks(&blocks);
                let to_grouped = rebracket(m, &self.term(s)?, &grouped)?;
                let cells: Vec<usize> = blocks
                    .iter()
                    .enumerate()
                    .map(|(k, b)| if k == i { Some(e.comp[&(fj, fi)]) } else { super::tensor::identity_on(m, b) })
                    .collect::<Option<_>>()?;
                let composed = tensor_blocks(m, &blocks, &cells)?;
                vcomp(m, x, z, composed, to_grouped)?
            }
            Generator::Coface { n: k, i: j } => {
                if k == 0 {
                    e.unit[s.src]
                } else {
                    let mut blocks: Vec<Term> = s.arrows.iter().map(|&f| Term::Leaf(e.leaf(f))).collect();
                    let (pos, beta, block) = if j < k {
                        let f = s.arrows[j];
                        let v = c.src(f);
                        let id = c.identity(v);
                        let (u, w) = (e.over[v], e.over[c.dst(f)]);
                        let rinv = inverse2(m, u, w, m.right_unitor(u, w, e.hom[f]))?;
                        let ins = m.compose2(u, u, w, id2(m, u, w, e.hom[f]), e.unit[v])?;
                        (j, vcomp(m, u, w, ins, rinv)?, Term::node(Term::Leaf(e.leaf(f)), Term::Leaf(e.leaf(id))))
                    } else {
                        let f = s.arrows[k - 1];
                        let v = c.dst(f);
                        let id = c.identity(v);
                        let (u, w) = (e.over[c.src(f)], e.over[v]);
                        let linv = inverse2(m, u, w, m.left_unitor(u, w, e.hom[f]))?;
                        let ins = m.compose2(u, w, w, e.unit[v], id2(m, u, w, e.hom[f]))?;
                        (k - 1, vcomp(m, u, w, ins, linv)?, Term::node(Term::Leaf(e.leaf(id)), Term::Leaf(e.leaf(f))))
                    };
                    let cells: Vec<usize> = blocks
                        .iter()
                        .enumerate()
                        .map(|(q, b)| if q == pos { Some(beta) } else { super::tensor::identity_on(m, b) })
                        .collect::<Option<_>>()?;
                    let inserted = tensor_blocks(m, &blocks, &cells)?;
                    blocks[pos] = block;
                    let grouped = left_normal_blocks(&blocks);
                    let back = rebracket(m, &grouped, &self.term(&next)?)?;
                    vcomp(m, x, z, back, inserted)?
                }
            }
        };
        Some((next, cell))
    }

    fn relation(&self, p: &Path2Category, a: usize, b: usize, i: usize, j: usize) -> Option<usize> {
        let hom = p.path_hom(a, b);
        let (s, t) = (&hom.chains[i], &hom.chains[j]);
        let (x, z) = (self.e.over[a], self.e.over[b]);
        let mut cell = id2(self.m, x, z, self.object(s));
        if i == j {
            return Some(cell);
        }
        let u = hom.witnesses(i, j).first()?;
        let mut cur = s.clone();
        for g in factorize_generators(u) {
            let (next, c) = self.generator(&cur, g)?;
            cell = vcomp(self.m, x, z, c, cell)?;
            cur = next;
        }
        debug_assert_eq!(&cur, t);
        Some(cell)
    }

    fn colaxity(&self, t: &Chain, s: &Chain) -> Option<usize> {
        let m = self.m;
        let (x, z) = (self.e.over[s.src], self.e.over[t.dst]);
        match (self.term(t), self.term(s)) {
            (Some(tt), Some(ts)) => {
                let (_, norm) = normalize(m, &Term::node(tt, ts))?;
                inverse2(m, x, z, norm)
            }
            (Some(tt), None) => inverse2(m, x, z, m.right_unitor(x, z, tt.eval(m)?)),
            (None, Some(ts)) => inverse2(m, x, z, m.left_unitor(x, z, ts.eval(m)?)),
            (None, None) => inverse2(m, x, x, m.left_unitor(x, x, m.unit(x))),
        }
    }
}

/// The colax unitary homomorphism `[𝒜]: P_C → M` of an enriched category:
/// chains go to front-bracketed tensors of hom 1-cells, rewrites to whiskered
/// compositions and unit insertions, colaxity to re-bracketing.
pub fn enriched_to_path(e: &EnrichedCategory, base: &BaseOfEnrichment, truncation: usize) -> Result<PathObject> {
    let m = &base.bicategory;
    validate_enriched(m, e)?;
    let p = build_path_category(&e.shape, truncation)?;
    let im = Imager { m, e };
    let n = e.shape.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let hom = p.path_hom(a, b);
            let obj: Vec<usize> = hom.chains.iter().map(|s| im.object(s)).collect();
            let arr = hom
                .category
                .arrows()
                .iter()
                .map(|r| im.relation(&p, a, b, r.src, r.dst))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| EnrichError::Malformed("image of a rewrite is undefined".into()))?;
            homs.push(FunctorMap { obj, arr });
        }
    }
    let mut phi = BTreeMap::new();
    for pair in crate::bicat::composable_pairs(&p) {
        let t = p.chain(pair.b, pair.c, pair.t);
        let s = p.chain(pair.a, pair.b, pair.s);
        let cell = im.colaxity(t, s).ok_or_else(|| EnrichError::Malformed("re-bracketing undefined".into()))?;
        phi.insert(pair, cell);
    }
    let phi_unit = (0..n).map(|a| id2(m, e.over[a], e.over[a], m.unit(e.over[a]))).collect();
    let data = ColaxData { omap: e.over.clone(), homs, phi, phi_unit };
    check_path_object(p, base.clone(), data)
}

/// Reads an enriched category off a path-object whose colaxity cells are
/// invertible: `hom = F[1, f]`, `I_a = F([0,a] → [1,1_a]) ∘ φ_a⁻¹`,
/// `c(g, f) = F([2, f;g] → [1, g∘f]) ∘ φ([1,g], [1,f])⁻¹`.
pub fn strict_to_enriched(po: &PathObject) -> Result<EnrichedCategory> {
    let c = po.shape();
    if !c.is_thin() {
        return Err(EnrichError::ShapeMismatch("shape must be thin".into()));
    }
    if po.path.truncation < 2 {
        return Err(EnrichError::ShapeMismatch("truncation below 2".into()));
    }
    let m = &po.base.bicategory;
    let n = c.object_count();
    let data = po.data();
    let over = data.omap.clone();
    let one = |f: usize| Chain { src: c.src(f), dst: c.dst(f), arrows: vec![f] };
    let hom: Vec<usize> = (0..c.arrow_count()).map(|f| po.image(&one(f)).expect("length one chain")).collect();
    let rel_image = |s: &Chain, t: &Chain| -> Option<usize> {
        let h = po.path.path_hom(s.src, s.dst);
        let (i, j) = (h.chain_index(s)?, h.chain_index(t)?);
        let arrow = h.category.arrow_between(i, j)?;
        Some(data.homs[s.src * n + s.dst].arr[arrow])
    };
    let mut unit = Vec::with_capacity(n);
    for a in 0..n {
        let x = over[a];
        let pu = data.phi_unit[a];
        let inv = inverse2(m, x, x, pu).ok_or_else(|| EnrichError::NonInvertibleColaxity(format!("φ_{}", c.object_name(a))))?;
        let f = rel_image(&Chain::empty(a), &one(c.identity(a))).expect("unit rewrite");
        unit.push(vcomp(m, x, x, f, inv).expect("composable"));
    }
    let mut comp = BTreeMap::new();
    for (g, f) in arrow_pairs(c) {
        let (t, s) = (one(g), one(f));
        let ts = Chain { src: c.src(f), dst: c.dst(g), arrows: vec![f, g] };
        let (x, z) = (over[c.src(f)], over[c.dst(g)]);
        let phi = po.phi(&t, &s).expect("composable pair");
        let inv = inverse2(m, x, z, phi).ok_or_else(|| {
            EnrichError::NonInvertibleColaxity(format!("φ({}, {})", t.display(c), s.display(c)))
        })?;
        let gf = c.compose(g, f).unwrap();
        let r = rel_image(&ts, &one(gf)).expect("composition rewrite");
        comp.insert((g, f), vcomp(m, x, z, r, inv).expect("composable"));
    }
    let e = EnrichedCategory { shape: c.clone(), over, hom, unit, comp };
    validate_enriched(m, &e)?;
    Ok(e)
}
