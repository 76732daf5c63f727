use std::collections::BTreeMap;

use super::tensor::{left_normal, tensor_blocks, Term};
use super::{check_path_object, EnrichError, EnrichedCategory, PathObject, Result};
use crate::bicat::{
    compose_colax, extract_monoidal, id2, inverse2, suspend_monoidal, validate_base, validate_colax,
    validate_transformation, vpath, BaseOfEnrichment, Bicategory, CellSet, ColaxMorphism, FinBicategory, Orientation,
    Transformation, TransformationData,
};
use crate::fincat::{full_subcategory, FinFunctor};
use crate::pathcat::{build_path_category, path_functor};

/// `(Σ, σ)` with `σ: F → G ∘ P_Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premorphism {
    pub functor: FinFunctor,
    /// `G ∘ P_Σ`.
    pub composite: ColaxMorphism,
    pub transformation: Transformation,
    /// Every `σ_A` is a unit 1-cell, so `A` and `ΣA` lie over the same object.
    pub is_morphism: bool,
}

pub fn validate_premorphism(
    sigma_functor: &FinFunctor,
    sigma: TransformationData,
    f: &PathObject,
    g: &PathObject,
    require_morphism: bool,
) -> Result<Premorphism> {
    if f.base.bicategory != g.base.bicategory {
        return Err(EnrichError::ShapeMismatch("points over different bases".into()));
    }
    if &sigma_functor.source != f.shape() || &sigma_functor.target != g.shape() {
        return Err(EnrichError::ShapeMismatch("functor does not match the shapes".into()));
    }
    let m = &g.base.bicategory;
    let p_sigma = path_functor(sigma_functor, &f.path, &g.path)?;
    let gp = compose_colax(&f.path, &g.path, m, g.data(), &p_sigma.data)?;
    let composite = validate_colax(&f.path, m, gp, Orientation::Colax)?;
    let is_morphism = (0..f.shape().object_count()).all(|a| {
        let x = f.data().omap[a];
        composite.data.omap[a] == x && sigma.comp1[a] == m.unit(x)
    });
    if require_morphism && !is_morphism {
        let a = (0..f.shape().object_count())
            .find(|&a| composite.data.omap[a] != f.data().omap[a] || sigma.comp1[a] != m.unit(f.data().omap[a]))
            .unwrap();
        return Err(EnrichError::ObjectNotOverSameBase(f.shape().object_name(a).into()));
    }
    let transformation = validate_transformation(&f.path, m, &f.morphism, &composite, sigma)?;
    Ok(Premorphism { functor: sigma_functor.clone(), composite, transformation, is_morphism })
}

/// The transformation `[𝒜] → [ℬ] ∘ P_Σ` of an `M`-functor with hom
/// components `comps[f]: 𝒜(f) → ℬ(Σf)`: `σ_A = I` and on a chain the
/// unitor-conjugated tensor of the hom components.
pub fn enriched_functor_premorphism(
    m: &FinBicategory,
    source: &EnrichedCategory,
    target: &EnrichedCategory,
    sigma: &FinFunctor,
    comps: &[usize],
    truncation: usize,
) -> Result<TransformationData> {
    let c = &source.shape;
    if comps.len() != c.arrow_count() {
        return Err(EnrichError::ShapeMismatch("one component per arrow".into()));
    }
    for a in 0..c.object_count() {
        if target.over[sigma.omap[a]] != source.over[a] {
            return Err(EnrichError::ObjectNotOverSameBase(c.object_name(a).into()));
        }
    }
    let p = build_path_category(c, truncation)?;
    let n = c.object_count();
    let comp1: Vec<usize> = source.over.iter().map(|&x| m.unit(x)).collect();
    let mut comp2 = BTreeMap::new();
    let undefined = || EnrichError::Malformed("functor component undefined".into());
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (source.over[a], source.over[b]);
            for (i, s) in p.path_hom(a, b).chains.iter().enumerate() {
                let (fs, theta) = if s.is_empty() {
                    (m.unit(x), id2(m, x, y, m.unit(x)))
                } else {
                    let blocks: Vec<Term> = s.arrows.iter().map(|&f| Term::Leaf(source.leaf(f))).collect();
                    let fs = left_normal(&s.arrows.iter().map(|&f| source.leaf(f)).collect::<Vec<_>>())
                        .eval(m)
                        .ok_or_else(undefined)?;
                    let cells: Vec<usize> = s.arrows.iter().map(|&f| comps[f]).collect();
                    (fs, tensor_blocks(m, &blocks, &cells).ok_or_else(undefined)?)
                };
                let gs = m.hom(x, y).dst(theta);
                let l = m.left_unitor(x, y, fs);
                let rinv = inverse2(m, x, y, m.right_unitor(x, y, gs)).ok_or_else(undefined)?;
                let cell = vpath(m, x, y, &[Some(l), Some(theta), Some(rinv)]).ok_or_else(undefined)?;
                comp2.insert((a, b, i), cell);
            }
        }
    }
    Ok(TransformationData { comp1, comp2 })
}

/// `L ∘ F` for a homomorphism of bases `L: (M1, W1) → (M2, W2)`.
pub fn base_change(po: &PathObject, l: &ColaxMorphism, target: &BaseOfEnrichment) -> Result<PathObject> {
    let (m1, m2) = (&po.base.bicategory, &target.bicategory);
    let k = m1.object_count();
    let om = &l.data.omap;
    for (p, &cell) in &l.data.phi {
        if !m2.hom(om[p.a], om[p.c]).is_invertible(cell) {
            return Err(EnrichError::NotHomomorphism(m2.cell2_name(om[p.a], om[p.c], cell)));
        }
    }
    for (u, &cell) in l.data.phi_unit.iter().enumerate() {
        if !m2.hom(om[u], om[u]).is_invertible(cell) {
            return Err(EnrichError::NotHomomorphism(m2.cell2_name(om[u], om[u], cell)));
        }
    }
    for u in 0..k {
        for v in 0..k {
            for a in po.base.w.hom_cells(u, v) {
                if !target.in_w(om[u], om[v], l.data.homs[u * k + v].arr[a]) {
                    return Err(EnrichError::WNotPreserved(m1.cell2_name(u, v, a)));
                }
            }
        }
    }
    let data = compose_colax(&po.path, m1, m2, &l.data, po.data())?;
    let out = check_path_object(po.path.clone(), target.clone(), data)?;
    if po.is_segal() && !out.is_segal() {
        return Err(EnrichError::NotSegal("base change lost the Segal condition".into()));
    }
    Ok(out)
}

/// `F ∘ P_r` for `r: D → C`.
pub fn restrict(po: &PathObject, r: &FinFunctor) -> Result<PathObject> {
    if &r.target != po.shape() {
        return Err(EnrichError::ShapeMismatch("restriction does not land in the shape".into()));
    }
    let m = &po.base.bicategory;
    let pd = build_path_category(&r.source, po.path.truncation)?;
    let pr = path_functor(r, &pd, &po.path)?;
    let data = compose_colax(&pd, &po.path, m, po.data(), &pr.data)?;
    check_path_object(pd, po.base.clone(), data)
}

/// The leaf of objects over `u`, as a point of the endo-base `(M_UU, W_UU)`.
pub fn foliation(po: &PathObject, u: usize) -> Result<PathObject> {
    let c = po.shape();
    let m = &po.base.bicategory;
    let objs: Vec<usize> = (0..c.object_count()).filter(|&a| po.data().omap[a] == u).collect();
    if objs.is_empty() {
        return Err(EnrichError::EmptyLeaf(m.object_name(u).into()));
    }
    let sub = full_subcategory(c, &objs);
    let keep: Vec<usize> = (0..c.arrow_count())
        .filter(|&f| objs.contains(&c.src(f)) && objs.contains(&c.dst(f)))
        .collect();
    let inclusion = FinFunctor::new(sub, c.clone(), objs, keep)?;
    let leaf = restrict(po, &inclusion)?;
    let endo = suspend_monoidal(&extract_monoidal(m, u, &format!("{}({},{})", m.name, m.object_name(u), m.object_name(u))))?;
    let w = CellSet::from_predicate(&endo, |_, _, a| po.base.in_w(u, u, a));
    let base = validate_base(endo, w)?;
    let mut data = leaf.morphism.data;
    data.omap.iter_mut().for_each(|x| *x = 0);
    check_path_object(leaf.path, base, data)
}
