//! Finite bicategories, colax morphisms, transformations, modifications and
//! bases of enrichment, with exhaustive coherence checking.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fincat::{check_functor_maps, ArrowRec, FinCategory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicatError {
    #[error("malformed bicategory data: {0}")]
    Malformed(String),
    #[error("composition is not functorial at {0}")]
    NonFunctorialComposition(String),
    #[error("component {0} is not invertible")]
    NonInvertible(String),
    #[error("pentagon fails on ({k}, {h}, {g}, {f})")]
    PentagonViolation { k: String, h: String, g: String, f: String },
    #[error("triangle fails on ({g}, {f})")]
    TriangleViolation { g: String, f: String },
    #[error("associator or unitor is not natural at {0}")]
    NonNaturalAssociator(String),
    #[error("monoidal axiom fails: {0}")]
    MonoidalAxiomViolation(String),
    #[error("malformed morphism data: {0}")]
    MalformedMorphism(String),
    #[error("hom functor is not a functor at {0}")]
    HomFunctor(String),
    #[error("(M.1) fails on ({h}, {g}, {f})")]
    M1Violation { h: String, g: String, f: String },
    #[error("(M.2) fails on {f}")]
    M2Violation { f: String },
    #[error("colaxity is not natural at {0}")]
    NonNaturalColaxity(String),
    #[error("transformation axiom fails on ({t}, {s})")]
    TransformationAxiomViolation { t: String, s: String },
    #[error("transformation unit axiom fails at {0}")]
    UnitAxiomViolation(String),
    #[error("transformation is not natural at {0}")]
    NonNaturalTransformation(String),
    #[error("modification axiom fails at {0}")]
    ModificationAxiomViolation(String),
    #[error("invertible 2-cell {0} missing from W")]
    MissingInvertible(String),
    #[error("3-out-of-2 fails for ({alpha}, {beta})")]
    ThreeForTwoViolation { alpha: String, beta: String },
    #[error("W not closed under horizontal composite ({alpha}, {beta})")]
    HorizontalClosureViolation { alpha: String, beta: String },
}

pub type Result<T> = std::result::Result<T, BicatError>;

/// Read access shared by finite bicategories and truncated path 2-categories.
///
/// 1-cells `U → V` are the objects of `hom(U, V)`, 2-cells its arrows.
/// `compose1(u, v, w, g, f)` is `g ⊗ f` for `f: U → V`, `g: V → W`; partial
/// operations return `None` outside their domain (e.g. above a truncation).
pub trait Bicategory {
    fn object_count(&self) -> usize;
    fn object_name(&self, u: usize) -> &str;
    fn hom(&self, u: usize, v: usize) -> &FinCategory;
    fn compose1(&self, u: usize, v: usize, w: usize, g: usize, f: usize) -> Option<usize>;
    fn compose2(&self, u: usize, v: usize, w: usize, beta: usize, alpha: usize) -> Option<usize>;
    fn unit(&self, u: usize) -> usize;
    /// `a(h,g,f): (h⊗g)⊗f → h⊗(g⊗f)` for `f: U→V`, `g: V→W`, `h: W→X`.
    #[allow(clippy::too_many_arguments)]
    fn associator(&self, u: usize, v: usize, w: usize, x: usize, h: usize, g: usize, f: usize) -> Option<usize>;
    /// `l(f): I ⊗ f → f`.
    fn left_unitor(&self, u: usize, v: usize, f: usize) -> usize;
    /// `r(f): f ⊗ I → f`.
    fn right_unitor(&self, u: usize, v: usize, f: usize) -> usize;

    fn cell1_name(&self, u: usize, v: usize, f: usize) -> String {
        self.hom(u, v).object_name(f).to_string()
    }

    fn cell2_name(&self, u: usize, v: usize, alpha: usize) -> String {
        self.hom(u, v).arrow_name(alpha).to_string()
    }
}

/// Vertical composite `beta ∘ alpha` in `hom(u, v)`.
pub fn vcomp<B: Bicategory + ?Sized>(b: &B, u: usize, v: usize, beta: usize, alpha: usize) -> Option<usize> {
    b.hom(u, v).compose(beta, alpha)
}

/// Vertical composite of a path of 2-cells listed in application order.
pub fn vpath<B: Bicategory + ?Sized>(b: &B, u: usize, v: usize, cells: &[Option<usize>]) -> Option<usize> {
    let mut it = cells.iter();
    let mut acc = (*it.next()?)?;
    for c in it {
        acc = vcomp(b, u, v, (*c)?, acc)?;
    }
    Some(acc)
}

pub fn id2<B: Bicategory + ?Sized>(b: &B, u: usize, v: usize, f: usize) -> usize {
    b.hom(u, v).identity(f)
}

pub fn inverse2<B: Bicategory + ?Sized>(b: &B, u: usize, v: usize, alpha: usize) -> Option<usize> {
    b.hom(u, v).inverse(alpha)
}

fn qidx(n: usize, u: usize, v: usize, w: usize, x: usize) -> usize {
    ((u * n + v) * n + w) * n + x
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompTable {
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
    f_obj: usize,
    f_arr: usize,
}

/// A bicategory with finitely many cells, all structure stored as tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinBicategory {
    pub name: String,
    objects: Vec<String>,
    homs: Vec<FinCategory>,
    comp: Vec<CompTable>,
    units: Vec<usize>,
    assoc: Vec<Vec<usize>>,
    lunit: Vec<Vec<usize>>,
    runit: Vec<Vec<usize>>,
}

impl Bicategory for FinBicategory {
    fn object_count(&self) -> usize {
        self.objects.len()
    }

    fn object_name(&self, u: usize) -> &str {
        &self.objects[u]
    }

    fn hom(&self, u: usize, v: usize) -> &FinCategory {
        &self.homs[u * self.objects.len() + v]
    }

    fn compose1(&self, u: usize, v: usize, w: usize, g: usize, f: usize) -> Option<usize> {
        let n = self.objects.len();
        let t = &self.comp[(u * n + v) * n + w];
        t.obj.get(g * t.f_obj + f).copied()
    }

    fn compose2(&self, u: usize, v: usize, w: usize, beta: usize, alpha: usize) -> Option<usize> {
        let n = self.objects.len();
        let t = &self.comp[(u * n + v) * n + w];
        t.arr.get(beta * t.f_arr + alpha).copied()
    }

    fn unit(&self, u: usize) -> usize {
        self.units[u]
    }

    fn associator(&self, u: usize, v: usize, w: usize, x: usize, h: usize, g: usize, f: usize) -> Option<usize> {
        let n = self.objects.len();
        let nf = self.hom(u, v).object_count();
        let ng = self.hom(v, w).object_count();
        self.assoc[qidx(n, u, v, w, x)].get((h * ng + g) * nf + f).copied()
    }

    fn left_unitor(&self, u: usize, v: usize, f: usize) -> usize {
        self.lunit[u * self.objects.len() + v][f]
    }

    fn right_unitor(&self, u: usize, v: usize, f: usize) -> usize {
        self.runit[u * self.objects.len() + v][f]
    }
}

/// Structural data for [`FinBicategory::build`], given as functions on indices.
pub struct BicategoryParts<'a> {
    pub name: String,
    pub objects: Vec<String>,
    pub homs: Vec<FinCategory>,
    pub units: Vec<usize>,
    pub comp1: &'a dyn Fn(usize, usize, usize, usize, usize) -> Option<usize>,
    pub comp2: &'a dyn Fn(usize, usize, usize, usize, usize) -> Option<usize>,
    #[allow(clippy::type_complexity)]
    pub assoc: &'a dyn Fn(usize, usize, usize, usize, usize, usize, usize) -> Option<usize>,
    pub lunit: &'a dyn Fn(usize, usize, usize) -> Option<usize>,
    pub runit: &'a dyn Fn(usize, usize, usize) -> Option<usize>,
}

impl FinBicategory {
    /// Tabulates the structure; no axiom is checked here.
    pub fn build(p: BicategoryParts<'_>) -> Result<Self> {
        let n = p.objects.len();
        if p.homs.len() != n * n || p.units.len() != n {
            return Err(BicatError::Malformed("hom/unit table sizes".into()));
        }
        let hom = |u: usize, v: usize| &p.homs[u * n + v];
        let mut comp = Vec::with_capacity(n * n * n);
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let (hf, hg) = (hom(u, v), hom(v, w));
                    let mut obj = Vec::with_capacity(hg.object_count() * hf.object_count());
                    for g in 0..hg.object_count() {
                        for f in 0..hf.object_count() {
                            obj.push((p.comp1)(u, v, w, g, f).ok_or_else(|| {
                                BicatError::Malformed(format!("no composite {} ⊗ {}", hg.object_name(g), hf.object_name(f)))
                            })?);
                        }
                    }
                    let mut arr = Vec::with_capacity(hg.arrow_count() * hf.arrow_count());
                    for b in 0..hg.arrow_count() {
                        for a in 0..hf.arrow_count() {
                            arr.push((p.comp2)(u, v, w, b, a).ok_or_else(|| {
                                BicatError::Malformed(format!("no composite {} ⊗ {}", hg.arrow_name(b), hf.arrow_name(a)))
                            })?);
                        }
                    }
                    comp.push(CompTable { obj, arr, f_obj: hf.object_count(), f_arr: hf.arrow_count() });
                }
            }
        }
        let mut assoc = Vec::with_capacity(n.pow(4));
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    for x in 0..n {
                        let mut t = Vec::new();
                        for h in 0..hom(w, x).object_count() {
                            for g in 0..hom(v, w).object_count() {
                                for f in 0..hom(u, v).object_count() {
                                    t.push((p.assoc)(u, v, w, x, h, g, f).ok_or_else(|| {
                                        BicatError::Malformed(format!(
                                            "no associator at ({}, {}, {})",
                                            hom(w, x).object_name(h),
                                            hom(v, w).object_name(g),
                                            hom(u, v).object_name(f)
                                        ))
                                    })?);
                                }
                            }
                        }
                        assoc.push(t);
                    }
                }
            }
        }
        let mut lunit = Vec::new();
        let mut runit = Vec::new();
        for u in 0..n {
            for v in 0..n {
                let h = hom(u, v);
                let mut l = Vec::new();
                let mut r = Vec::new();
                for f in 0..h.object_count() {
                    l.push((p.lunit)(u, v, f).ok_or_else(|| BicatError::Malformed(format!("no left unitor at {}", h.object_name(f))))?);
                    r.push((p.runit)(u, v, f).ok_or_else(|| BicatError::Malformed(format!("no right unitor at {}", h.object_name(f))))?);
                }
                lunit.push(l);
                runit.push(r);
            }
        }
        Ok(FinBicategory { name: p.name, objects: p.objects, homs: p.homs, comp, units: p.units, assoc, lunit, runit })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    /// Replaces one associator component; used to build mutants.
    #[allow(clippy::too_many_arguments)]
    pub fn with_associator(mut self, u: usize, v: usize, w: usize, x: usize, h: usize, g: usize, f: usize, cell: usize) -> Self {
        let n = self.objects.len();
        let nf = self.hom(u, v).object_count();
        let ng = self.hom(v, w).object_count();
        self.assoc[qidx(n, u, v, w, x)][(h * ng + g) * nf + f] = cell;
        self
    }

    /// All 2-cells as `(u, v, index)` triples.
    pub fn cells2(&self) -> Vec<(usize, usize, usize)> {
        let n = self.objects.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in 0..n {
                out.extend((0..self.hom(u, v).arrow_count()).map(|a| (u, v, a)));
            }
        }
        out
    }
}

/// Checks functoriality of composition, invertibility and naturality of the
/// structure cells, and the pentagon and triangle identities, exhaustively.
pub fn validate_bicategory(b: FinBicategory) -> Result<FinBicategory> {
    let n = b.object_count();
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                check_composition_functor(&b, u, v, w)?;
            }
        }
    }
    for u in 0..n {
        if b.unit(u) >= b.hom(u, u).object_count() {
            return Err(BicatError::Malformed(format!("unit of {}", b.object_name(u))));
        }
    }
    check_structure_endpoints(&b)?;
    check_pentagon(&b)?;
    check_triangle(&b)?;
    check_structure_naturality(&b)?;
    Ok(b)
}

fn check_composition_functor(b: &FinBicategory, u: usize, v: usize, w: usize) -> Result<()> {
    let (hf, hg, hh) = (b.hom(u, v), b.hom(v, w), b.hom(u, w));
    let loc = |beta: usize, alpha: usize| format!("{} ⊗ {}", hg.arrow_name(beta), hf.arrow_name(alpha));
    for beta in 0..hg.arrow_count() {
        for alpha in 0..hf.arrow_count() {
            let c = b.compose2(u, v, w, beta, alpha).expect("tabulated");
            let src = b.compose1(u, v, w, hg.src(beta), hf.src(alpha)).expect("tabulated");
            let dst = b.compose1(u, v, w, hg.dst(beta), hf.dst(alpha)).expect("tabulated");
            if hh.src(c) != src || hh.dst(c) != dst {
                return Err(BicatError::NonFunctorialComposition(loc(beta, alpha)));
            }
        }
    }
    for g in 0..hg.object_count() {
        for f in 0..hf.object_count() {
            let gf = b.compose1(u, v, w, g, f).expect("tabulated");
            if b.compose2(u, v, w, hg.identity(g), hf.identity(f)) != Some(hh.identity(gf)) {
                return Err(BicatError::NonFunctorialComposition(loc(hg.identity(g), hf.identity(f))));
            }
        }
    }
    for a1 in 0..hf.arrow_count() {
        for a2 in hf.hom_out(hf.dst(a1)) {
            let a21 = hf.compose(a2, a1).expect("composable");
            for b1 in 0..hg.arrow_count() {
                for b2 in hg.hom_out(hg.dst(b1)) {
                    let b21 = hg.compose(b2, b1).expect("composable");
                    let lhs = b.compose2(u, v, w, b21, a21);
                    let rhs = hh.compose(b.compose2(u, v, w, b2, a2).unwrap(), b.compose2(u, v, w, b1, a1).unwrap());
                    if lhs != rhs {
                        return Err(BicatError::NonFunctorialComposition(loc(b21, a21)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_structure_endpoints(b: &FinBicategory) -> Result<()> {
    let n = b.object_count();
    for (u, v, w, x) in quads(n) {
        for h in 0..b.hom(w, x).object_count() {
            for g in 0..b.hom(v, w).object_count() {
                for f in 0..b.hom(u, v).object_count() {
                    let a = b.associator(u, v, w, x, h, g, f).expect("tabulated");
                    let hg = b.compose1(v, w, x, h, g).unwrap();
                    let gf = b.compose1(u, v, w, g, f).unwrap();
                    let src = b.compose1(u, w, x, hg, f).unwrap();
                    let dst = b.compose1(u, v, x, h, gf).unwrap();
                    let hom = b.hom(u, x);
                    let name = format!("a({}, {}, {})", b.cell1_name(w, x, h), b.cell1_name(v, w, g), b.cell1_name(u, v, f));
                    if hom.src(a) != src || hom.dst(a) != dst {
                        return Err(BicatError::Malformed(format!("{name} has wrong endpoints")));
                    }
                    if !hom.is_invertible(a) {
                        return Err(BicatError::NonInvertible(name));
                    }
                }
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            let hom = b.hom(u, v);
            for f in 0..hom.object_count() {
                let l = b.left_unitor(u, v, f);
                let r = b.right_unitor(u, v, f);
                let lsrc = b.compose1(u, v, v, b.unit(v), f).unwrap();
                let rsrc = b.compose1(u, u, v, f, b.unit(u)).unwrap();
                if hom.src(l) != lsrc || hom.dst(l) != f {
                    return Err(BicatError::Malformed(format!("l({}) has wrong endpoints", hom.object_name(f))));
                }
                if hom.src(r) != rsrc || hom.dst(r) != f {
                    return Err(BicatError::Malformed(format!("r({}) has wrong endpoints", hom.object_name(f))));
                }
                if !hom.is_invertible(l) {
                    return Err(BicatError::NonInvertible(format!("l({})", hom.object_name(f))));
                }
                if !hom.is_invertible(r) {
                    return Err(BicatError::NonInvertible(format!("r({})", hom.object_name(f))));
                }
            }
        }
    }
    Ok(())
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |u| (0..n).flat_map(move |v| (0..n).flat_map(move |w| (0..n).map(move |x| (u, v, w, x)))))
}

fn check_pentagon(b: &FinBicategory) -> Result<()> {
    let n = b.object_count();
    for (u, v, w, x) in quads(n) {
        for y in 0..n {
            for k in 0..b.hom(x, y).object_count() {
                for h in 0..b.hom(w, x).object_count() {
                    for g in 0..b.hom(v, w).object_count() {
                        for f in 0..b.hom(u, v).object_count() {
                            if !pentagon_instance(b, [u, v, w, x, y], k, h, g, f) {
                                return Err(BicatError::PentagonViolation {
                                    k: b.cell1_name(x, y, k),
                                    h: b.cell1_name(w, x, h),
                                    g: b.cell1_name(v, w, g),
                                    f: b.cell1_name(u, v, f),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn pentagon_instance<B: Bicategory + ?Sized>(b: &B, o: [usize; 5], k: usize, h: usize, g: usize, f: usize) -> bool {
    let [u, v, w, x, y] = o;
    let kh = b.compose1(w, x, y, k, h);
    let hg = b.compose1(v, w, x, h, g);
    let gf = b.compose1(u, v, w, g, f);
    let (Some(kh), Some(hg), Some(gf)) = (kh, hg, gf) else { return true };
    let Some(hgf) = b.compose1(u, v, x, h, gf) else { return true };
    // a(k,h,g⊗f) ∘ a(k⊗h,g,f)
    let lhs = (|| {
        let a1 = b.associator(u, v, w, y, kh, g, f)?;
        let a2 = b.associator(u, w, x, y, k, h, gf)?;
        vcomp(b, u, y, a2, a1)
    })();
    // (1_k ⊗ a(h,g,f)) ∘ a(k, h⊗g, f) ∘ (a(k,h,g) ⊗ 1_f)
    let rhs = (|| {
        let akhg = b.associator(v, w, x, y, k, h, g)?;
        let s1 = b.compose2(u, v, y, akhg, id2(b, u, v, f))?;
        let s2 = b.associator(u, v, x, y, k, hg, f)?;
        let ahgf = b.associator(u, v, w, x, h, g, f)?;
        let s3 = b.compose2(u, x, y, id2(b, x, y, k), ahgf)?;
        vpath(b, u, y, &[Some(s1), Some(s2), Some(s3)])
    })();
    let _ = hgf;
    lhs.is_some() && lhs == rhs
}

fn check_triangle(b: &FinBicategory) -> Result<()> {
    let n = b.object_count();
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                for g in 0..b.hom(v, w).object_count() {
                    for f in 0..b.hom(u, v).object_count() {
                        if !triangle_instance(b, u, v, w, g, f) {
                            return Err(BicatError::TriangleViolation { g: b.cell1_name(v, w, g), f: b.cell1_name(u, v, f) });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn triangle_instance<B: Bicategory + ?Sized>(b: &B, u: usize, v: usize, w: usize, g: usize, f: usize) -> bool {
    let i = b.unit(v);
    // (1_g ⊗ l_f) ∘ a(g, I, f) = r_g ⊗ 1_f
    let lhs = (|| {
        let a = b.associator(u, v, v, w, g, i, f)?;
        let s = b.compose2(u, v, w, id2(b, v, w, g), b.left_unitor(u, v, f))?;
        vcomp(b, u, w, s, a)
    })();
    let rhs = b.compose2(u, v, w, b.right_unitor(v, w, g), id2(b, u, v, f));
    lhs.is_some() && lhs == rhs
}

fn check_structure_naturality(b: &FinBicategory) -> Result<()> {
    let n = b.object_count();
    for (u, v, w, x) in quads(n) {
        let (hf, hg, hh) = (b.hom(u, v), b.hom(v, w), b.hom(w, x));
        for gam in 0..hh.arrow_count() {
            for bet in 0..hg.arrow_count() {
                for alp in 0..hf.arrow_count() {
                    let (h, g, f) = (hh.src(gam), hg.src(bet), hf.src(alp));
                    let (h2, g2, f2) = (hh.dst(gam), hg.dst(bet), hf.dst(alp));
                    let lhs = (|| {
                        let gb = b.compose2(v, w, x, gam, bet)?;
                        let t = b.compose2(u, v, x, gb, alp)?;
                        vcomp(b, u, x, b.associator(u, v, w, x, h2, g2, f2)?, t)
                    })();
                    let rhs = (|| {
                        let ba = b.compose2(u, v, w, bet, alp)?;
                        let t = b.compose2(u, w, x, gam, ba)?;
                        vcomp(b, u, x, t, b.associator(u, v, w, x, h, g, f)?)
                    })();
                    if lhs.is_none() || lhs != rhs {
                        return Err(BicatError::NonNaturalAssociator(format!(
                            "a at ({}, {}, {})",
                            hh.arrow_name(gam),
                            hg.arrow_name(bet),
                            hf.arrow_name(alp)
                        )));
                    }
                }
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            let hom = b.hom(u, v);
            for alp in 0..hom.arrow_count() {
                let (f, f2) = (hom.src(alp), hom.dst(alp));
                let iv = id2(b, v, v, b.unit(v));
                let iu = id2(b, u, u, b.unit(u));
                let l_ok = b
                    .compose2(u, v, v, iv, alp)
                    .and_then(|t| vcomp(b, u, v, b.left_unitor(u, v, f2), t))
                    == vcomp(b, u, v, alp, b.left_unitor(u, v, f));
                let r_ok = b
                    .compose2(u, u, v, alp, iu)
                    .and_then(|t| vcomp(b, u, v, b.right_unitor(u, v, f2), t))
                    == vcomp(b, u, v, alp, b.right_unitor(u, v, f));
                if !l_ok || !r_ok {
                    return Err(BicatError::NonNaturalAssociator(format!("unitor at {}", hom.arrow_name(alp))));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Monoidal categories and their suspensions

/// A finite monoidal category; `tensor_obj[x * n + y] = x ⊗ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidalCategory {
    pub name: String,
    pub category: FinCategory,
    pub tensor_obj: Vec<usize>,
    pub tensor_arr: Vec<usize>,
    pub unit: usize,
    /// `α(x,y,z): (x⊗y)⊗z → x⊗(y⊗z)` at `(x * n + y) * n + z`.
    pub assoc: Vec<usize>,
    pub lunit: Vec<usize>,
    pub runit: Vec<usize>,
}

impl MonoidalCategory {
    pub fn tensor(&self, x: usize, y: usize) -> usize {
        self.tensor_obj[x * self.category.object_count() + y]
    }

    /// Thin case: every structure cell is the unique arrow with the right
    /// endpoints.
    pub fn thin(name: &str, category: FinCategory, tensor: impl Fn(usize, usize) -> usize, unit: usize) -> Result<Self> {
        let n = category.object_count();
        let m = category.arrow_count();
        let between = |a: usize, b: usize| {
            category
                .arrow_between(a, b)
                .ok_or_else(|| BicatError::MonoidalAxiomViolation(format!("no arrow {} -> {}", category.object_name(a), category.object_name(b))))
        };
        let tensor_obj: Vec<usize> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| tensor(x, y)).collect();
        let t = |x: usize, y: usize| tensor_obj[x * n + y];
        let mut tensor_arr = Vec::with_capacity(m * m);
        for f in 0..m {
            for g in 0..m {
                tensor_arr.push(between(t(category.src(f), category.src(g)), t(category.dst(f), category.dst(g)))?);
            }
        }
        let mut assoc = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    assoc.push(between(t(t(x, y), z), t(x, t(y, z)))?);
                }
            }
        }
        let lunit = (0..n).map(|x| between(t(unit, x), x)).collect::<Result<Vec<_>>>()?;
        let runit = (0..n).map(|x| between(t(x, unit), x)).collect::<Result<Vec<_>>>()?;
        Ok(MonoidalCategory { name: name.into(), category, tensor_obj, tensor_arr, unit, assoc, lunit, runit })
    }

    /// A monoid as a discrete monoidal category: objects are its elements.
    pub fn discrete_monoid(name: &str, elements: &[&str], mult: impl Fn(usize, usize) -> usize, unit: usize) -> Result<Self> {
        Self::thin(name, FinCategory::discrete(elements), mult, unit)
    }

    /// `({false, true}, ∧, true)` as a discrete monoidal category.
    pub fn boolean_and() -> Self {
        Self::discrete_monoid("Bool", &["false", "true"], |x, y| x & y, 1).expect("boolean monoid")
    }

    /// The truncated tropical quantale `{0..k, ∞}` with capped addition and an
    /// arrow `x → y` iff `x ≥ y`.
    pub fn quantale(k: u32) -> Self {
        let q = Quantale::new(k);
        let objects: Vec<String> = q.values().map(|v| q.name(v)).collect();
        let n = objects.len();
        let mut rel = Vec::new();
        for x in 0..n {
            rel.push(ArrowRec { name: format!("{}>={}", objects[x], objects[x]), src: x, dst: x });
        }
        for x in 0..n {
            for y in 0..n {
                if x > y {
                    rel.push(ArrowRec { name: format!("{}>={}", objects[x], objects[y]), src: x, dst: y });
                }
            }
        }
        let cat = FinCategory::from_preorder(objects, rel);
        Self::thin(&format!("Q{k}"), cat, |x, y| q.index(q.add(q.value(x), q.value(y))), 0).expect("quantale")
    }

    /// The cyclic group `Z/n` as automorphisms of a single object, tensored by
    /// addition: a strict monoidal category with parallel non-equal 2-cells.
    pub fn cyclic_twist(n: usize) -> Self {
        let els: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mult: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let category = FinCategory::from_monoid("e", &els, &mult, 0);
        let tensor_arr = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        MonoidalCategory {
            name: format!("Twist{n}"),
            category,
            tensor_obj: vec![0],
            tensor_arr,
            unit: 0,
            assoc: vec![0],
            lunit: vec![0],
            runit: vec![0],
        }
    }
}

/// Values of the truncated quantale; `None` stands for `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quantale {
    pub cap: u32,
}

pub type QValue = Option<u32>;

impl Quantale {
    pub fn new(cap: u32) -> Self {
        Quantale { cap }
    }

    pub fn values(&self) -> impl Iterator<Item = QValue> {
        (0..=self.cap).map(Some).chain(std::iter::once(None))
    }

    pub fn add(&self, a: QValue, b: QValue) -> QValue {
        match (a, b) {
            (Some(x), Some(y)) if x + y <= self.cap => Some(x + y),
            _ => None,
        }
    }

    /// `a ≥ b` in the extended order.
    pub fn geq(&self, a: QValue, b: QValue) -> bool {
        match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => x >= y,
        }
    }

    pub fn index(&self, v: QValue) -> usize {
        v.map(|x| x as usize).unwrap_or(self.cap as usize + 1)
    }

    pub fn value(&self, i: usize) -> QValue {
        if i as u32 <= self.cap {
            Some(i as u32)
        } else {
            None
        }
    }

    pub fn name(&self, v: QValue) -> String {
        v.map(|x| x.to_string()).unwrap_or_else(|| "inf".into())
    }

    pub fn parse(&self, s: &str) -> Option<QValue> {
        if s == "inf" {
            return Some(None);
        }
        let x: u32 = s.parse().ok()?;
        (x <= self.cap).then_some(Some(x))
    }
}

/// The one-object bicategory of a monoidal category. Validated.
pub fn suspend_monoidal(m: &MonoidalCategory) -> Result<FinBicategory> {
    let n = m.category.object_count();
    let a = m.category.arrow_count();
    let comp1 = |_: usize, _: usize, _: usize, g: usize, f: usize| Some(m.tensor_obj[g * n + f]);
    let comp2 = |_: usize, _: usize, _: usize, b: usize, al: usize| Some(m.tensor_arr[b * a + al]);
    let assoc = |_: usize, _: usize, _: usize, _: usize, h: usize, g: usize, f: usize| Some(m.assoc[(h * n + g) * n + f]);
    let lunit = |_: usize, _: usize, f: usize| Some(m.lunit[f]);
    let runit = |_: usize, _: usize, f: usize| Some(m.runit[f]);
    let b = FinBicategory::build(BicategoryParts {
        name: format!("Σ{}", m.name),
        objects: vec!["*".into()],
        homs: vec![m.category.clone()],
        units: vec![m.unit],
        comp1: &comp1,
        comp2: &comp2,
        assoc: &assoc,
        lunit: &lunit,
        runit: &runit,
    })
    .map_err(|e| BicatError::MonoidalAxiomViolation(e.to_string()))?;
    validate_bicategory(b).map_err(|e| BicatError::MonoidalAxiomViolation(e.to_string()))
}

/// The monoidal structure on `hom(u, u)`.
pub fn extract_monoidal(b: &FinBicategory, u: usize, name: &str) -> MonoidalCategory {
    let cat = b.hom(u, u).clone();
    let n = cat.object_count();
    let a = cat.arrow_count();
    let tensor_obj = (0..n).flat_map(|g| (0..n).map(move |f| (g, f))).map(|(g, f)| b.compose1(u, u, u, g, f).unwrap()).collect();
    let tensor_arr = (0..a).flat_map(|g| (0..a).map(move |f| (g, f))).map(|(g, f)| b.compose2(u, u, u, g, f).unwrap()).collect();
    let mut assoc = Vec::with_capacity(n * n * n);
    for h in 0..n {
        for g in 0..n {
            for f in 0..n {
                assoc.push(b.associator(u, u, u, u, h, g, f).unwrap());
            }
        }
    }
    MonoidalCategory {
        name: name.into(),
        tensor_obj,
        tensor_arr,
        unit: b.unit(u),
        assoc,
        lunit: (0..n).map(|f| b.left_unitor(u, u, f)).collect(),
        runit: (0..n).map(|f| b.right_unitor(u, u, f)).collect(),
        category: cat,
    }
}

/// The bicategory on the given objects whose every hom is `m`, composed by
/// the tensor. Validated.
pub fn chaotic_bicategory(m: &MonoidalCategory, objects: &[&str]) -> Result<FinBicategory> {
    let k = objects.len();
    let n = m.category.object_count();
    let a = m.category.arrow_count();
    let comp1 = |_: usize, _: usize, _: usize, g: usize, f: usize| Some(m.tensor_obj[g * n + f]);
    let comp2 = |_: usize, _: usize, _: usize, b: usize, al: usize| Some(m.tensor_arr[b * a + al]);
    let assoc = |_: usize, _: usize, _: usize, _: usize, h: usize, g: usize, f: usize| Some(m.assoc[(h * n + g) * n + f]);
    let lunit = |_: usize, _: usize, f: usize| Some(m.lunit[f]);
    let runit = |_: usize, _: usize, f: usize| Some(m.runit[f]);
    let b = FinBicategory::build(BicategoryParts {
        name: format!("{}[{}]", m.name, objects.join(",")),
        objects: objects.iter().map(|s| s.to_string()).collect(),
        homs: vec![m.category.clone(); k * k],
        units: vec![m.unit; k],
        comp1: &comp1,
        comp2: &comp2,
        assoc: &assoc,
        lunit: &lunit,
        runit: &runit,
    })?;
    validate_bicategory(b)
}

// ---------------------------------------------------------------------------
// Colax morphisms

/// Object and arrow maps of a functor between hom categories.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FunctorMap {
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
}

/// A composable pair `t ⊗ s` with `s: a → b`, `t: b → c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub t: usize,
    pub s: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Colax,
    Lax,
}

/// Raw morphism data: object map, hom functors indexed by source pair
/// `a * n + b`, colaxity cells `φ(t,s): F(t⊗s) → Ft ⊗ Fs` and unit cells
/// `φ_a: F(I_a) → I_{Fa}` (both reversed in the lax orientation).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColaxData {
    pub omap: Vec<usize>,
    pub homs: Vec<FunctorMap>,
    pub phi: BTreeMap<Pair, usize>,
    pub phi_unit: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColaxMorphism {
    pub data: ColaxData,
    pub orientation: Orientation,
    pub strict: bool,
}

impl ColaxMorphism {
    pub fn omap(&self, a: usize) -> usize {
        self.data.omap[a]
    }

    pub fn hom_functor(&self, n: usize, a: usize, b: usize) -> &FunctorMap {
        &self.data.homs[a * n + b]
    }
}

/// All composable pairs of 1-cells of `b` whose composite is defined.
pub fn composable_pairs<B: Bicategory + ?Sized>(b: &B) -> Vec<Pair> {
    let n = b.object_count();
    let mut out = Vec::new();
    for a in 0..n {
        for bb in 0..n {
            for c in 0..n {
                for t in 0..b.hom(bb, c).object_count() {
                    for s in 0..b.hom(a, bb).object_count() {
                        if b.compose1(a, bb, c, t, s).is_some() {
                            out.push(Pair { a, b: bb, c, t, s });
                        }
                    }
                }
            }
        }
    }
    out
}

fn fname<B: Bicategory + ?Sized>(b: &B, u: usize, v: usize, f: usize) -> String {
    b.cell1_name(u, v, f)
}

/// Validates a colax (or, with [`Orientation::Lax`], lax) morphism: hom
/// functors, then every (M.1) and (M.2) instance, then naturality of φ.
pub fn validate_colax<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    data: ColaxData,
    orientation: Orientation,
) -> Result<ColaxMorphism> {
    let n = src.object_count();
    if data.omap.len() != n || data.homs.len() != n * n || data.phi_unit.len() != n {
        return Err(BicatError::MalformedMorphism("table sizes".into()));
    }
    if data.omap.iter().any(|&x| x >= tgt.object_count()) {
        return Err(BicatError::MalformedMorphism("object image out of range".into()));
    }
    let om = |a: usize| data.omap[a];
    for a in 0..n {
        for b in 0..n {
            let fm = &data.homs[a * n + b];
            check_functor_maps(src.hom(a, b), tgt.hom(om(a), om(b)), &fm.obj, &fm.arr)
                .map_err(|e| BicatError::HomFunctor(format!("({}, {}): {e}", src.object_name(a), src.object_name(b))))?;
        }
    }
    let fo = |a: usize, b: usize, t: usize| data.homs[a * n + b].obj[t];
    let fa = |a: usize, b: usize, al: usize| data.homs[a * n + b].arr[al];
    let pairs = composable_pairs(src);
    // endpoints of colaxity cells
    for p in &pairs {
        let cell = *data.phi.get(p).ok_or_else(|| {
            BicatError::MalformedMorphism(format!("missing φ({}, {})", fname(src, p.b, p.c, p.t), fname(src, p.a, p.b, p.s)))
        })?;
        let ts = src.compose1(p.a, p.b, p.c, p.t, p.s).unwrap();
        let (x, y, z) = (om(p.a), om(p.b), om(p.c));
        let lhs = fo(p.a, p.c, ts);
        let rhs = tgt
            .compose1(x, y, z, fo(p.b, p.c, p.t), fo(p.a, p.b, p.s))
            .ok_or_else(|| BicatError::MalformedMorphism("image composite undefined".into()))?;
        let (es, ed) = match orientation {
            Orientation::Colax => (lhs, rhs),
            Orientation::Lax => (rhs, lhs),
        };
        let hom = tgt.hom(x, z);
        if cell >= hom.arrow_count() || hom.src(cell) != es || hom.dst(cell) != ed {
            return Err(BicatError::MalformedMorphism(format!(
                "φ({}, {}) has wrong endpoints",
                fname(src, p.b, p.c, p.t),
                fname(src, p.a, p.b, p.s)
            )));
        }
    }
    for a in 0..n {
        let cell = data.phi_unit[a];
        let x = om(a);
        let hom = tgt.hom(x, x);
        let (l, r) = (fo(a, a, src.unit(a)), tgt.unit(x));
        let (es, ed) = match orientation {
            Orientation::Colax => (l, r),
            Orientation::Lax => (r, l),
        };
        if cell >= hom.arrow_count() || hom.src(cell) != es || hom.dst(cell) != ed {
            return Err(BicatError::MalformedMorphism(format!("φ_{} has wrong endpoints", src.object_name(a))));
        }
    }
    let phi = |p: Pair| data.phi[&p];

    // (M.1)
    for p in &pairs {
        // p = (g ⊗ f) with f: a→b, g: b→c; extend by h: c→d
        for d in 0..n {
            for h in 0..src.hom(p.c, d).object_count() {
                let (a, b, c, g, f) = (p.a, p.b, p.c, p.t, p.s);
                let Some(hg) = src.compose1(b, c, d, h, g) else { continue };
                let gf = src.compose1(a, b, c, g, f).unwrap();
                if src.compose1(a, c, d, h, gf).is_none() || src.compose1(a, b, d, hg, f).is_none() {
                    continue;
                }
                if !m1_instance(src, tgt, &data, orientation, [a, b, c, d], h, g, f, &phi, &fo, &fa) {
                    return Err(BicatError::M1Violation {
                        h: fname(src, c, d, h),
                        g: fname(src, b, c, g),
                        f: fname(src, a, b, f),
                    });
                }
            }
        }
    }
    // (M.2)
    for a in 0..n {
        for b in 0..n {
            for f in 0..src.hom(a, b).object_count() {
                if src.compose1(a, b, b, src.unit(b), f).is_none() || src.compose1(a, a, b, f, src.unit(a)).is_none() {
                    continue;
                }
                if !m2_instance(src, tgt, &data, orientation, a, b, f, &phi, &fo, &fa) {
                    return Err(BicatError::M2Violation { f: fname(src, a, b, f) });
                }
            }
        }
    }
    // naturality
    for p in &pairs {
        let (a, b, c) = (p.a, p.b, p.c);
        let (hs, ht) = (src.hom(a, b), src.hom(b, c));
        for al in hs.hom_out(p.s) {
            for be in ht.hom_out(p.t) {
                let (s2, t2) = (hs.dst(al), ht.dst(be));
                let Some(_) = src.compose1(a, b, c, t2, s2) else { continue };
                let q = Pair { a, b, c, t: t2, s: s2 };
                let (x, y, z) = (om(a), om(b), om(c));
                let Some(ba) = src.compose2(a, b, c, be, al) else { continue };
                let fba = fa(a, c, ba);
                let img = tgt.compose2(x, y, z, fa(b, c, be), fa(a, b, al));
                let ok = match orientation {
                    Orientation::Colax => {
                        img.and_then(|i| vcomp(tgt, x, z, i, phi(*p))) == vcomp(tgt, x, z, phi(q), fba)
                            && img.is_some()
                    }
                    Orientation::Lax => {
                        vcomp(tgt, x, z, fba, phi(*p)) == img.and_then(|i| vcomp(tgt, x, z, phi(q), i)) && img.is_some()
                    }
                };
                if !ok {
                    return Err(BicatError::NonNaturalColaxity(format!(
                        "({}, {})",
                        src.cell2_name(b, c, be),
                        src.cell2_name(a, b, al)
                    )));
                }
            }
        }
    }
    let strict = pairs.iter().all(|p| {
        let c = phi(*p);
        tgt.hom(om(p.a), om(p.c)).is_identity(c)
    }) && (0..n).all(|a| tgt.hom(om(a), om(a)).is_identity(data.phi_unit[a]));
    Ok(ColaxMorphism { data, orientation, strict })
}

#[allow(clippy::too_many_arguments)]
fn m1_instance<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    data: &ColaxData,
    orientation: Orientation,
    o: [usize; 4],
    h: usize,
    g: usize,
    f: usize,
    phi: &dyn Fn(Pair) -> usize,
    fo: &dyn Fn(usize, usize, usize) -> usize,
    fa: &dyn Fn(usize, usize, usize) -> usize,
) -> bool {
    let [a, b, c, d] = o;
    let [x, y, z, w] = o.map(|i| data.omap[i]);
    let hg = src.compose1(b, c, d, h, g).unwrap();
    let gf = src.compose1(a, b, c, g, f).unwrap();
    let (fh, fg, ff) = (fo(c, d, h), fo(b, c, g), fo(a, b, f));
    let (fhg, fgf) = (fo(b, d, hg), fo(a, c, gf));
    let fa_h = fa(a, d, match src.associator(a, b, c, d, h, g, f) {
        Some(cell) => cell,
        None => return false,
    });
    let res = (|| {
        let phi_hg_f = phi(Pair { a, b, c: d, t: hg, s: f });
        let phi_h_g = phi(Pair { a: b, b: c, c: d, t: h, s: g });
        let phi_h_gf = phi(Pair { a, b: c, c: d, t: h, s: gf });
        let phi_g_f = phi(Pair { a, b, c, t: g, s: f });
        let whisk_hg = tgt.compose2(x, y, w, phi_h_g, id2(tgt, x, y, ff))?;
        let whisk_gf = tgt.compose2(x, z, w, id2(tgt, z, w, fh), phi_g_f)?;
        let a_t = tgt.associator(x, y, z, w, fh, fg, ff)?;
        let _ = (fhg, fgf);
        Some(match orientation {
            Orientation::Colax => {
                let lhs = vpath(tgt, x, w, &[Some(phi_hg_f), Some(whisk_hg), Some(a_t)]);
                let rhs = vpath(tgt, x, w, &[Some(fa_h), Some(phi_h_gf), Some(whisk_gf)]);
                lhs.is_some() && lhs == rhs
            }
            Orientation::Lax => {
                let lhs = vpath(tgt, x, w, &[Some(whisk_hg), Some(phi_hg_f), Some(fa_h)]);
                let rhs = vpath(tgt, x, w, &[Some(a_t), Some(whisk_gf), Some(phi_h_gf)]);
                lhs.is_some() && lhs == rhs
            }
        })
    })();
    res.unwrap_or(false)
}

#[allow(clippy::too_many_arguments)]
fn m2_instance<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    data: &ColaxData,
    orientation: Orientation,
    a: usize,
    b: usize,
    f: usize,
    phi: &dyn Fn(Pair) -> usize,
    fo: &dyn Fn(usize, usize, usize) -> usize,
    fa: &dyn Fn(usize, usize, usize) -> usize,
) -> bool {
    let (x, y) = (data.omap[a], data.omap[b]);
    let ff = fo(a, b, f);
    let ib = src.unit(b);
    let ia = src.unit(a);
    let res = (|| {
        let left_phi = phi(Pair { a, b, c: b, t: ib, s: f });
        let right_phi = phi(Pair { a, b: a, c: b, t: f, s: ia });
        let wl = tgt.compose2(x, y, y, data.phi_unit[b], id2(tgt, x, y, ff))?;
        let wr = tgt.compose2(x, x, y, id2(tgt, x, y, ff), data.phi_unit[a])?;
        let fl = fa(a, b, src.left_unitor(a, b, f));
        let fr = fa(a, b, src.right_unitor(a, b, f));
        let (tl, tr) = (tgt.left_unitor(x, y, ff), tgt.right_unitor(x, y, ff));
        Some(match orientation {
            Orientation::Colax => {
                let l = vpath(tgt, x, y, &[Some(left_phi), Some(wl), Some(tl)]);
                let r = vpath(tgt, x, y, &[Some(right_phi), Some(wr), Some(tr)]);
                l == Some(fl) && r == Some(fr)
            }
            Orientation::Lax => {
                let l = vpath(tgt, x, y, &[Some(wl), Some(left_phi), Some(fl)]);
                let r = vpath(tgt, x, y, &[Some(wr), Some(right_phi), Some(fr)]);
                l == Some(tl) && r == Some(tr)
            }
        })
    })();
    res.unwrap_or(false)
}

/// The identity homomorphism.
pub fn identity_colax<B: Bicategory + ?Sized>(b: &B) -> ColaxData {
    let n = b.object_count();
    let mut homs = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            let h = b.hom(u, v);
            homs.push(FunctorMap { obj: (0..h.object_count()).collect(), arr: (0..h.arrow_count()).collect() });
        }
    }
    let phi = composable_pairs(b)
        .into_iter()
        .map(|p| {
            let ts = b.compose1(p.a, p.b, p.c, p.t, p.s).unwrap();
            (p, id2(b, p.a, p.c, ts))
        })
        .collect();
    let phi_unit = (0..n).map(|u| id2(b, u, u, b.unit(u))).collect();
    ColaxData { omap: (0..n).collect(), homs, phi, phi_unit }
}

/// `G ∘ F` for colax morphisms `F: S → T`, `G: T → U`.
pub fn compose_colax<S: Bicategory + ?Sized, T: Bicategory + ?Sized, U: Bicategory + ?Sized>(
    src: &S,
    mid: &T,
    tgt: &U,
    g: &ColaxData,
    f: &ColaxData,
) -> Result<ColaxData> {
    let n = src.object_count();
    let m = mid.object_count();
    let omap: Vec<usize> = f.omap.iter().map(|&x| g.omap[x]).collect();
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let fm = &f.homs[a * n + b];
            let gm = &g.homs[f.omap[a] * m + f.omap[b]];
            homs.push(FunctorMap {
                obj: fm.obj.iter().map(|&x| gm.obj[x]).collect(),
                arr: fm.arr.iter().map(|&x| gm.arr[x]).collect(),
            });
        }
    }
    let mut phi = BTreeMap::new();
    for p in composable_pairs(src) {
        let (x, y, z) = (f.omap[p.a], f.omap[p.b], f.omap[p.c]);
        let ft = f.homs[p.b * n + p.c].obj[p.t];
        let fs = f.homs[p.a * n + p.b].obj[p.s];
        let inner = g.homs[x * m + z].arr[f.phi[&p]];
        let outer = *g
            .phi
            .get(&Pair { a: x, b: y, c: z, t: ft, s: fs })
            .ok_or_else(|| BicatError::MalformedMorphism("intermediate composite undefined".into()))?;
        let cell = vcomp(tgt, g.omap[x], g.omap[z], outer, inner)
            .ok_or_else(|| BicatError::MalformedMorphism("colaxity cells do not compose".into()))?;
        phi.insert(p, cell);
    }
    let phi_unit = (0..n)
        .map(|a| {
            let x = f.omap[a];
            let inner = g.homs[x * m + x].arr[f.phi_unit[a]];
            vcomp(tgt, g.omap[x], g.omap[x], g.phi_unit[x], inner)
                .ok_or_else(|| BicatError::MalformedMorphism("unit cells do not compose".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ColaxData { omap, homs, phi, phi_unit })
}

// ---------------------------------------------------------------------------
// Transformations and modifications

/// Components `σ_a: Fa → Ga` and `σ_t: σ_b ⊗ Ft → Gt ⊗ σ_a` for `t: a → b`,
/// keyed by `(a, b, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransformationData {
    pub comp1: Vec<usize>,
    pub comp2: BTreeMap<(usize, usize, usize), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformation {
    pub data: TransformationData,
}

/// Checks the composition hexagon, the unit square and naturality of `σ_t`.
pub fn validate_transformation<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    f: &ColaxMorphism,
    g: &ColaxMorphism,
    sigma: TransformationData,
) -> Result<Transformation> {
    let n = src.object_count();
    if sigma.comp1.len() != n {
        return Err(BicatError::MalformedMorphism("σ object components".into()));
    }
    let (fd, gd) = (&f.data, &g.data);
    let fo = |a: usize, b: usize, t: usize| fd.homs[a * n + b].obj[t];
    let go = |a: usize, b: usize, t: usize| gd.homs[a * n + b].obj[t];
    for a in 0..n {
        let s = sigma.comp1[a];
        if s >= tgt.hom(fd.omap[a], gd.omap[a]).object_count() {
            return Err(BicatError::MalformedMorphism(format!("σ_{}", src.object_name(a))));
        }
    }
    let sg = |a: usize, b: usize, t: usize| -> Result<usize> {
        sigma
            .comp2
            .get(&(a, b, t))
            .copied()
            .ok_or_else(|| BicatError::MalformedMorphism(format!("missing σ_{}", fname(src, a, b, t))))
    };
    for a in 0..n {
        for b in 0..n {
            for t in 0..src.hom(a, b).object_count() {
                let cell = sg(a, b, t)?;
                let (fa_, fb, ga, gb) = (fd.omap[a], fd.omap[b], gd.omap[a], gd.omap[b]);
                let es = tgt.compose1(fa_, fb, gb, sigma.comp1[b], fo(a, b, t));
                let ed = tgt.compose1(fa_, ga, gb, go(a, b, t), sigma.comp1[a]);
                let hom = tgt.hom(fa_, gb);
                if es.is_none() || ed.is_none() || cell >= hom.arrow_count() || Some(hom.src(cell)) != es || Some(hom.dst(cell)) != ed {
                    return Err(BicatError::MalformedMorphism(format!("σ_{} has wrong endpoints", fname(src, a, b, t))));
                }
            }
        }
    }
    for p in composable_pairs(src) {
        if !transformation_hexagon(src, tgt, f, g, &sigma, p).unwrap_or(false) {
            return Err(BicatError::TransformationAxiomViolation { t: fname(src, p.b, p.c, p.t), s: fname(src, p.a, p.b, p.s) });
        }
    }
    for a in 0..n {
        if !transformation_unit(src, tgt, f, g, &sigma, a).unwrap_or(false) {
            return Err(BicatError::UnitAxiomViolation(src.object_name(a).into()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let h = src.hom(a, b);
            let (fa_, fb, ga, gb) = (fd.omap[a], fd.omap[b], gd.omap[a], gd.omap[b]);
            for al in 0..h.arrow_count() {
                let (t, t2) = (h.src(al), h.dst(al));
                let lhs = tgt
                    .compose2(fa_, ga, gb, gd.homs[a * n + b].arr[al], id2(tgt, fa_, ga, sigma.comp1[a]))
                    .and_then(|w| vcomp(tgt, fa_, gb, w, sg(a, b, t).ok()?));
                let rhs = tgt
                    .compose2(fa_, fb, gb, id2(tgt, fb, gb, sigma.comp1[b]), fd.homs[a * n + b].arr[al])
                    .and_then(|w| vcomp(tgt, fa_, gb, sg(a, b, t2).ok()?, w));
                if lhs.is_none() || lhs != rhs {
                    return Err(BicatError::NonNaturalTransformation(src.cell2_name(a, b, al)));
                }
            }
        }
    }
    Ok(Transformation { data: sigma })
}

fn transformation_hexagon<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    f: &ColaxMorphism,
    g: &ColaxMorphism,
    sigma: &TransformationData,
    p: Pair,
) -> Option<bool> {
    let n = src.object_count();
    let (fd, gd) = (&f.data, &g.data);
    let (a, b, c) = (p.a, p.b, p.c);
    let ts = src.compose1(a, b, c, p.t, p.s)?;
    let (fa_, fb, fc) = (fd.omap[a], fd.omap[b], fd.omap[c]);
    let (ga, gb, gc) = (gd.omap[a], gd.omap[b], gd.omap[c]);
    let (sa, sb, sc) = (sigma.comp1[a], sigma.comp1[b], sigma.comp1[c]);
    let (ft, fs) = (fd.homs[b * n + c].obj[p.t], fd.homs[a * n + b].obj[p.s]);
    let (gt, gs) = (gd.homs[b * n + c].obj[p.t], gd.homs[a * n + b].obj[p.s]);
    let sig = |x: usize, y: usize, t: usize| sigma.comp2.get(&(x, y, t)).copied();
    // LHS: (ψ ⊗ 1_{σa}) ∘ σ_{t⊗s}
    let psi = gd.phi[&p];
    let lhs = vcomp(tgt, fa_, gc, tgt.compose2(fa_, ga, gc, psi, id2(tgt, fa_, ga, sa))?, sig(a, c, ts)?)?;
    // RHS
    let s1 = tgt.compose2(fa_, fc, gc, id2(tgt, fc, gc, sc), fd.phi[&p])?;
    let a1 = tgt.associator(fa_, fb, fc, gc, sc, ft, fs)?;
    let s2 = inverse2(tgt, fa_, gc, a1)?;
    let s3 = tgt.compose2(fa_, fb, gc, sig(b, c, p.t)?, id2(tgt, fa_, fb, fs))?;
    let s4 = tgt.associator(fa_, fb, gb, gc, gt, sb, fs)?;
    let s5 = tgt.compose2(fa_, gb, gc, id2(tgt, gb, gc, gt), sig(a, b, p.s)?)?;
    let a6 = tgt.associator(fa_, ga, gb, gc, gt, gs, sa)?;
    let s6 = inverse2(tgt, fa_, gc, a6)?;
    let rhs = vpath(tgt, fa_, gc, &[Some(s1), Some(s2), Some(s3), Some(s4), Some(s5), Some(s6)])?;
    Some(lhs == rhs)
}

fn transformation_unit<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    f: &ColaxMorphism,
    g: &ColaxMorphism,
    sigma: &TransformationData,
    a: usize,
) -> Option<bool> {
    let (fd, gd) = (&f.data, &g.data);
    let (x, y) = (fd.omap[a], gd.omap[a]);
    let s = sigma.comp1[a];
    let ia = src.unit(a);
    let sig = sigma.comp2.get(&(a, a, ia)).copied()?;
    let lhs = vcomp(tgt, x, y, tgt.compose2(x, y, y, gd.phi_unit[a], id2(tgt, x, y, s))?, sig)?;
    let w = tgt.compose2(x, x, y, id2(tgt, x, y, s), fd.phi_unit[a])?;
    let r = tgt.right_unitor(x, y, s);
    let linv = inverse2(tgt, x, y, tgt.left_unitor(x, y, s))?;
    let rhs = vpath(tgt, x, y, &[Some(w), Some(r), Some(linv)])?;
    Some(lhs == rhs)
}

/// The identity transformation: `σ_a = I`, `σ_t = r⁻¹ ∘ l`.
pub fn identity_transformation<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    f: &ColaxMorphism,
) -> Option<TransformationData> {
    let n = src.object_count();
    let fd = &f.data;
    let comp1: Vec<usize> = (0..n).map(|a| tgt.unit(fd.omap[a])).collect();
    let mut comp2 = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (fd.omap[a], fd.omap[b]);
            for t in 0..src.hom(a, b).object_count() {
                let ft = fd.homs[a * n + b].obj[t];
                let l = tgt.left_unitor(x, y, ft);
                let rinv = inverse2(tgt, x, y, tgt.right_unitor(x, y, ft))?;
                comp2.insert((a, b, t), vcomp(tgt, x, y, rinv, l)?);
            }
        }
    }
    Some(TransformationData { comp1, comp2 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modification {
    pub components: Vec<usize>,
}

/// Checks `(1_{Gt} ⊗ Γ_a) ∘ σ1_t = σ2_t ∘ (Γ_b ⊗ 1_{Ft})` for every 1-cell `t`.
pub fn validate_modification<S: Bicategory + ?Sized, T: Bicategory + ?Sized>(
    src: &S,
    tgt: &T,
    f: &ColaxMorphism,
    g: &ColaxMorphism,
    s1: &Transformation,
    s2: &Transformation,
    components: Vec<usize>,
) -> Result<Modification> {
    let n = src.object_count();
    let (fd, gd) = (&f.data, &g.data);
    if components.len() != n {
        return Err(BicatError::MalformedMorphism("modification size".into()));
    }
    for a in 0..n {
        let hom = tgt.hom(fd.omap[a], gd.omap[a]);
        let c = components[a];
        if c >= hom.arrow_count() || hom.src(c) != s1.data.comp1[a] || hom.dst(c) != s2.data.comp1[a] {
            return Err(BicatError::ModificationAxiomViolation(src.object_name(a).into()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (fa_, fb, ga, gb) = (fd.omap[a], fd.omap[b], gd.omap[a], gd.omap[b]);
            for t in 0..src.hom(a, b).object_count() {
                let (ft, gt) = (fd.homs[a * n + b].obj[t], gd.homs[a * n + b].obj[t]);
                let lhs = tgt
                    .compose2(fa_, ga, gb, id2(tgt, ga, gb, gt), components[a])
                    .and_then(|w| vcomp(tgt, fa_, gb, w, s1.data.comp2[&(a, b, t)]));
                let rhs = tgt
                    .compose2(fa_, fb, gb, components[b], id2(tgt, fa_, fb, ft))
                    .and_then(|w| vcomp(tgt, fa_, gb, s2.data.comp2[&(a, b, t)], w));
                if lhs.is_none() || lhs != rhs {
                    return Err(BicatError::ModificationAxiomViolation(fname(src, a, b, t)));
                }
            }
        }
    }
    Ok(Modification { components })
}

// ---------------------------------------------------------------------------
// Bases of enrichment

/// A subset of the 2-cells of a bicategory, one flag vector per hom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    n: usize,
    flags: Vec<Vec<bool>>,
}

impl CellSet {
    pub fn empty(b: &FinBicategory) -> Self {
        let n = b.object_count();
        let flags = (0..n * n).map(|i| vec![false; b.hom(i / n, i % n).arrow_count()]).collect();
        CellSet { n, flags }
    }

    pub fn from_predicate(b: &FinBicategory, pred: impl Fn(usize, usize, usize) -> bool) -> Self {
        let n = b.object_count();
        let flags = (0..n * n)
            .map(|i| {
                let (u, v) = (i / n, i % n);
                (0..b.hom(u, v).arrow_count()).map(|a| pred(u, v, a)).collect()
            })
            .collect();
        CellSet { n, flags }
    }

    pub fn invertible(b: &FinBicategory) -> Self {
        Self::from_predicate(b, |u, v, a| b.hom(u, v).is_invertible(a))
    }

    pub fn all(b: &FinBicategory) -> Self {
        Self::from_predicate(b, |_, _, _| true)
    }

    pub fn contains(&self, u: usize, v: usize, a: usize) -> bool {
        self.flags[u * self.n + v][a]
    }

    pub fn insert(&mut self, u: usize, v: usize, a: usize) {
        self.flags[u * self.n + v][a] = true;
    }

    pub fn remove(&mut self, u: usize, v: usize, a: usize) {
        self.flags[u * self.n + v][a] = false;
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.flags.iter().zip(&other.flags).all(|(x, y)| x.iter().zip(y).all(|(&p, &q)| !p || q))
    }

    pub fn hom_cells(&self, u: usize, v: usize) -> Vec<usize> {
        self.flags[u * self.n + v].iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    pub fn count(&self) -> usize {
        self.flags.iter().map(|f| f.iter().filter(|&&b| b).count()).sum()
    }
}

/// A bicategory with a class `W` of 2-cells satisfying the base axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseOfEnrichment {
    pub bicategory: FinBicategory,
    pub w: CellSet,
}

impl BaseOfEnrichment {
    pub fn in_w(&self, u: usize, v: usize, a: usize) -> bool {
        self.w.contains(u, v, a)
    }
}

pub fn validate_base(m: FinBicategory, w: CellSet) -> Result<BaseOfEnrichment> {
    let n = m.object_count();
    for u in 0..n {
        for v in 0..n {
            let h = m.hom(u, v);
            for a in 0..h.arrow_count() {
                if h.is_invertible(a) && !w.contains(u, v, a) {
                    return Err(BicatError::MissingInvertible(h.arrow_name(a).into()));
                }
            }
            for a in 0..h.arrow_count() {
                for b in h.hom_out(h.dst(a)) {
                    let ba = h.compose(b, a).unwrap();
                    let k = [w.contains(u, v, a), w.contains(u, v, b), w.contains(u, v, ba)];
                    if k.iter().filter(|&&x| x).count() == 2 {
                        return Err(BicatError::ThreeForTwoViolation { alpha: h.arrow_name(a).into(), beta: h.arrow_name(b).into() });
                    }
                }
            }
        }
    }
    for u in 0..n {
        for v in 0..n {
            for x in 0..n {
                for b in w.hom_cells(v, x) {
                    for a in w.hom_cells(u, v) {
                        let c = m.compose2(u, v, x, b, a).unwrap();
                        if !w.contains(u, x, c) {
                            return Err(BicatError::HorizontalClosureViolation {
                                alpha: m.hom(u, v).arrow_name(a).into(),
                                beta: m.hom(v, x).arrow_name(b).into(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(BaseOfEnrichment { bicategory: m, w })
}

/// The smallest and largest bases on `m`: `(M, 2-Iso)` and `(M, all)`.
pub fn canonical_bases(m: &FinBicategory) -> (BaseOfEnrichment, BaseOfEnrichment) {
    let iso = validate_base(m.clone(), CellSet::invertible(m)).expect("invertible cells form a base");
    let all = validate_base(m.clone(), CellSet::all(m)).expect("all cells form a base");
    (iso, all)
}
