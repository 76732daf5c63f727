use std::collections::BTreeMap;

use super::morphisms::base_change;
use super::{enriched_to_path, EnrichError, EnrichedCategory, PathObject, Result};
use crate::bicat::{
    canonical_bases, id2, suspend_monoidal, validate_colax, Bicategory, ColaxData, FinBicategory, FunctorMap,
    MonoidalCategory, Orientation, QValue, Quantale,
};
use crate::fincat::coarse;

/// A finite group by its multiplication table; `mult[g][h] = g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub elements: Vec<String>,
    pub mult: Vec<Vec<usize>>,
    pub unit: usize,
}

impl FiniteGroup {
    pub fn new(name: &str, elements: Vec<String>, mult: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = elements.len();
        let bad = |what: &str| Err(EnrichError::Malformed(format!("{name}: {what}")));
        if n == 0 || unit >= n || mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table shape");
        }
        for g in 0..n {
            if mult[unit][g] != g || mult[g][unit] != g {
                return bad("unit law");
            }
            if !(0..n).any(|h| mult[g][h] == unit) {
                return bad("inverses");
            }
            for h in 0..n {
                for k in 0..n {
                    if mult[mult[g][h]][k] != mult[g][mult[h][k]] {
                        return bad("associativity");
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.into(), elements, mult, unit })
    }

    /// `Z/n` written additively: elements `0..n-1`.
    pub fn cyclic_additive(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        Self::cyclic(&format!("Z{n}"), n, elements)
    }

    /// `Z/n` written multiplicatively: `1, z, z^2, …`.
    pub fn cyclic_multiplicative(n: usize) -> Self {
        let elements = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            })
            .collect();
        Self::cyclic(&format!("mu{n}"), n, elements)
    }

    fn cyclic(name: &str, n: usize, elements: Vec<String>) -> Self {
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { name: name.into(), elements, mult, unit: 0 }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order()).find(|&h| self.mult[g][h] == self.unit).expect("group")
    }
}

/// `BG`: one object, 1-cells the elements, only identity 2-cells. Composing
/// `g ⊗ f` (with `f` first) gives the product `f·g`.
pub fn group_bicategory(g: &FiniteGroup) -> Result<FinBicategory> {
    let names: Vec<&str> = g.elements.iter().map(String::as_str).collect();
    let m = MonoidalCategory::discrete_monoid(&g.name, &names, |x, y| g.mult[y][x], g.unit)?;
    Ok(suspend_monoidal(&m)?)
}

/// The strict coarse category over `BG` of a `G`-valued function on pairs;
/// `f[a][b]` is an element of `G`. Unit violations are reported before
/// cocycle violations, triples in lexicographic order.
pub fn cocycle_enriched(objects: &[String], g: &FiniteGroup, f: &[Vec<usize>]) -> Result<EnrichedCategory> {
    let n = objects.len();
    if f.len() != n || f.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= g.order())) {
        return Err(EnrichError::Malformed("cocycle table shape".into()));
    }
    for a in 0..n {
        if f[a][a] != g.unit {
            return Err(EnrichError::UnitViolation(objects[a].clone()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if g.mult[f[a][b]][f[b][c]] != f[a][c] {
                    return Err(EnrichError::CocycleViolation {
                        a: objects[a].clone(),
                        b: objects[b].clone(),
                        c: objects[c].clone(),
                    });
                }
            }
        }
    }
    let m = group_bicategory(g)?;
    let shape = coarse(objects)?;
    let pair = |x: usize| (shape.src(x), shape.dst(x));
    let hom: Vec<usize> = (0..shape.arrow_count()).map(|x| f[pair(x).0][pair(x).1]).collect();
    let unit = (0..n).map(|_| id2(&m, 0, 0, g.unit)).collect();
    let mut comp = BTreeMap::new();
    for x in 0..shape.arrow_count() {
        for y in shape.hom_out(shape.dst(x)) {
            let xy = shape.compose(y, x).unwrap();
            comp.insert((y, x), id2(&m, 0, 0, hom[xy]));
        }
    }
    Ok(EnrichedCategory { shape, over: vec![0; n], hom, unit, comp })
}

/// The strict `X̄`-point of `BG` determined by a cocycle, over `(BG, 2-Iso)`.
pub fn cocycle_check(objects: &[String], g: &FiniteGroup, f: &[Vec<usize>], truncation: usize) -> Result<PathObject> {
    let e = cocycle_enriched(objects, g, f)?;
    let m = group_bicategory(g)?;
    let (iso, _) = canonical_bases(&m);
    enriched_to_path(&e, &iso, truncation)
}

/// Transports a point over additive `Z/n` along `k ↦ z^k` into
/// multiplicative `Z/n`.
pub fn exponential_base_change(po: &PathObject, n: usize) -> Result<PathObject> {
    let add = group_bicategory(&FiniteGroup::cyclic_additive(n))?;
    if po.base.bicategory != add {
        return Err(EnrichError::ShapeMismatch(format!("point is not over BZ{n}")));
    }
    let mul = group_bicategory(&FiniteGroup::cyclic_multiplicative(n))?;
    let homs = vec![FunctorMap { obj: (0..n).collect(), arr: (0..n).collect() }];
    let mut phi = BTreeMap::new();
    for p in crate::bicat::composable_pairs(&add) {
        let ts = add.compose1(0, 0, 0, p.t, p.s).unwrap();
        phi.insert(p, id2(&mul, 0, 0, ts));
    }
    let data = ColaxData { omap: vec![0], homs, phi, phi_unit: vec![id2(&mul, 0, 0, 0)] };
    let l = validate_colax(&add, &mul, data, Orientation::Colax)?;
    let (iso, _) = canonical_bases(&mul);
    base_change(po, &l, &iso)
}

/// A finite Lawvere metric space with values in a truncated quantale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    pub points: Vec<String>,
    pub d: Vec<Vec<QValue>>,
    pub quantale: Quantale,
}

impl MetricSpace {
    /// `(f*d)(a, b) = d(fa, fb)`.
    pub fn pullback(&self, points: Vec<String>, f: &[usize]) -> Result<MetricSpace> {
        if f.len() != points.len() || f.iter().any(|&x| x >= self.points.len()) {
            return Err(EnrichError::Malformed("pullback map".into()));
        }
        let d = f.iter().map(|&a| f.iter().map(|&b| self.d[a][b]).collect()).collect();
        Ok(MetricSpace { points, d, quantale: self.quantale })
    }
}

/// The enriched category over `ΣQ` of a metric table, and its strict path
/// object over `(ΣQ, all)`. With `pullback`, the table is first pulled back
/// along the given map.
pub fn metric_enrichment(
    space: &MetricSpace,
    pullback: Option<(Vec<String>, &[usize])>,
    truncation: usize,
) -> Result<(EnrichedCategory, PathObject)> {
    let space = match pullback {
        Some((points, f)) => space.pullback(points, f)?,
        None => space.clone(),
    };
    let n = space.points.len();
    let q = space.quantale;
    if space.d.len() != n || space.d.iter().any(|r| r.len() != n) {
        return Err(EnrichError::Malformed("distance table shape".into()));
    }
    for a in 0..n {
        if space.d[a][a] != Some(0) {
            return Err(EnrichError::ZeroDiagonalViolation(space.points[a].clone()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !q.geq(q.add(space.d[a][b], space.d[b][c]), space.d[a][c]) {
                    return Err(EnrichError::TriangleViolation {
                        a: space.points[a].clone(),
                        b: space.points[b].clone(),
                        c: space.points[c].clone(),
                    });
                }
            }
        }
    }
    let m = suspend_monoidal(&MonoidalCategory::quantale(q.cap))?;
    let h = m.hom(0, 0);
    let shape = coarse(&space.points)?;
    let dist = |x: usize| q.index(space.d[shape.src(x)][shape.dst(x)]);
    let hom: Vec<usize> = (0..shape.arrow_count()).map(dist).collect();
    let unit = (0..n).map(|_| h.identity(0)).collect();
    let mut comp = BTreeMap::new();
    for x in 0..shape.arrow_count() {
        for y in shape.hom_out(shape.dst(x)) {
            let xy = shape.compose(y, x).unwrap();
            let src = m.compose1(0, 0, 0, hom[y], hom[x]).unwrap();
            comp.insert((y, x), h.arrow_between(src, hom[xy]).expect("triangle inequality checked"));
        }
    }
    let e = EnrichedCategory { shape, over: vec![0; n], hom, unit, comp };
    let (_, all) = canonical_bases(&m);
    let po = enriched_to_path(&e, &all, truncation)?;
    Ok((e, po))
}
