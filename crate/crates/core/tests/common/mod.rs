#![allow(dead_code)]

use std::collections::BTreeMap;

use pathcat::bicat::{chaotic_bicategory, suspend_monoidal, Bicategory, FinBicategory, MonoidalCategory, Quantale};
use pathcat::enrichment::{EnrichedCategory, MetricSpace};
use pathcat::fincat::coarse;

/// The monoid `(x, μ = 1, η = 1)` in `Twist2`, seen over `B(Z/2)`.
pub fn twisted_monoid() -> (FinBicategory, EnrichedCategory) {
    let m = suspend_monoidal(&MonoidalCategory::cyclic_twist(2)).unwrap();
    let shape = coarse(&["o"]).unwrap();
    let mut comp = BTreeMap::new();
    comp.insert((0, 0), 1);
    let e = EnrichedCategory { shape, over: vec![0], hom: vec![0], unit: vec![1], comp };
    (m, e)
}

pub fn metric3() -> MetricSpace {
    let q = Quantale::new(5);
    let d = vec![
        vec![Some(0), Some(1), Some(2)],
        vec![Some(1), Some(0), Some(2)],
        vec![Some(2), Some(2), Some(0)],
    ];
    MetricSpace { points: names(&["a", "b", "c"]), d, quantale: q }
}

/// `a` over `U`, `b` over `V`, homs in the chaotic quantale bicategory.
pub fn polyad2() -> (FinBicategory, EnrichedCategory) {
    let q = Quantale::new(3);
    let m = chaotic_bicategory(&MonoidalCategory::quantale(3), &["U", "V"]).unwrap();
    let shape = coarse(&["a", "b"]).unwrap();
    let dist = |x: usize, y: usize| if x == y { Some(0) } else if x < y { Some(1) } else { Some(2) };
    let hom: Vec<usize> = (0..shape.arrow_count()).map(|f| q.index(dist(shape.src(f), shape.dst(f)))).collect();
    let over = vec![0, 1];
    let unit = (0..2).map(|a| m.hom(over[a], over[a]).identity(0)).collect();
    let mut comp = BTreeMap::new();
    for f in 0..shape.arrow_count() {
        for g in shape.hom_out(shape.dst(f)) {
            let (x, z) = (over[shape.src(f)], over[shape.dst(g)]);
            let gf = shape.compose(g, f).unwrap();
            let src = m.compose1(x, over[shape.dst(f)], z, hom[g], hom[f]).unwrap();
            comp.insert((g, f), m.hom(x, z).arrow_between(src, hom[gf]).unwrap());
        }
    }
    (m, EnrichedCategory { shape, over, hom, unit, comp })
}

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// `f(x, y) = g(x) - g(y)` in `Z/n`.
pub fn coboundary(g: &[usize], n: usize) -> Vec<Vec<usize>> {
    g.iter().map(|&x| g.iter().map(|&y| (x + n - y) % n).collect()).collect()
}
