//! Path-objects over a base of enrichment: Segal classification, classical
//! enriched categories, homotopy monoids, simplicial objects, premorphisms,
//! base change and the concrete cocycle and metric examples.

mod enriched;
mod examples;
mod monoid;
mod morphisms;
pub mod tensor;

pub use enriched::{enriched_to_path, strict_to_enriched, validate_enriched, EnrichedCategory};
pub use examples::{
    cocycle_check, cocycle_enriched, exponential_base_change, group_bicategory, metric_enrichment, FiniteGroup,
    MetricSpace,
};
pub use monoid::{
    homotopy_monoid_view, nerve_of_coarse, simplicial_correspondence, simplicial_inverse, validate_colax_finset,
    ColaxFinSet, HomotopyMonoid, SimplicialSet, StructureMap,
};
pub use morphisms::{
    base_change, enriched_functor_premorphism, foliation, restrict, validate_premorphism, Premorphism,
};

use thiserror::Error;

use crate::bicat::{validate_colax, BaseOfEnrichment, BicatError, Bicategory, ColaxData, ColaxMorphism, Orientation, Pair};
use crate::fincat::{Chain, FinCatError, FinCategory};
use crate::pathcat::{Path2Category, PathError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnrichError {
    #[error("shape does not match: {0}")]
    ShapeMismatch(String),
    #[error("colaxity cell {0} is not invertible")]
    NonInvertibleColaxity(String),
    #[error("shape is not the terminal category")]
    ShapeNotTerminal,
    #[error("colaxity does not land in a cartesian product: {0}")]
    NotCartesianTarget(String),
    #[error("object {0} is not over the same base object")]
    ObjectNotOverSameBase(String),
    #[error("base change sends {0} outside W")]
    WNotPreserved(String),
    #[error("base change is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("no object lies over {0}")]
    EmptyLeaf(String),
    #[error("cocycle condition fails on ({a}, {b}, {c})")]
    CocycleViolation { a: String, b: String, c: String },
    #[error("f({0}, {0}) is not the unit")]
    UnitViolation(String),
    #[error("triangle inequality fails on ({a}, {b}, {c})")]
    TriangleViolation { a: String, b: String, c: String },
    #[error("d({0}, {0}) is not zero")]
    ZeroDiagonalViolation(String),
    #[error("enriched category axiom fails: {0}")]
    EnrichedAxiom(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("point is not Segal: {0}")]
    NotSegal(String),
    #[error(transparent)]
    Bicat(#[from] BicatError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    FinCat(#[from] FinCatError),
}

pub type Result<T> = std::result::Result<T, EnrichError>;

/// A colaxity cell outside `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegalOffender {
    /// `(t, s)` for `φ(t, s)`, or the object name for a unit cell.
    pub location: String,
    pub cell: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegalReport {
    pub checked: usize,
    pub offenders: Vec<SegalOffender>,
}

impl SegalReport {
    pub fn is_segal(&self) -> bool {
        self.offenders.is_empty()
    }
}

/// A validated colax morphism `P_C → M` together with its Segal report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathObject {
    pub path: Path2Category,
    pub base: BaseOfEnrichment,
    pub morphism: ColaxMorphism,
    pub segal: SegalReport,
}

impl PathObject {
    pub fn shape(&self) -> &FinCategory {
        &self.path.base
    }

    pub fn is_segal(&self) -> bool {
        self.segal.is_segal()
    }

    pub fn data(&self) -> &ColaxData {
        &self.morphism.data
    }

    /// Image 1-cell of a chain.
    pub fn image(&self, s: &Chain) -> Option<usize> {
        let (a, b, i) = self.path.locate(s)?;
        Some(self.data().homs[a * self.shape().object_count() + b].obj[i])
    }

    /// `φ(t, s)`.
    pub fn phi(&self, t: &Chain, s: &Chain) -> Option<usize> {
        let (b, c, ti) = self.path.locate(t)?;
        let (a, b2, si) = self.path.locate(s)?;
        if b != b2 {
            return None;
        }
        self.data().phi.get(&Pair { a, b, c, t: ti, s: si }).copied()
    }

    /// Whether every colaxity cell is invertible.
    pub fn is_homomorphism(&self) -> bool {
        let m = &self.base.bicategory;
        let om = &self.data().omap;
        self.data().phi.iter().all(|(p, &c)| m.hom(om[p.a], om[p.c]).is_invertible(c))
            && self.data().phi_unit.iter().enumerate().all(|(a, &c)| m.hom(om[a], om[a]).is_invertible(c))
    }
}

/// Validates `data` as a colax morphism and classifies its colaxity cells.
pub fn check_path_object(path: Path2Category, base: BaseOfEnrichment, data: ColaxData) -> Result<PathObject> {
    let n = path.object_count();
    if data.omap.len() != n || data.homs.len() != n * n || data.phi_unit.len() != n {
        return Err(EnrichError::ShapeMismatch(format!("expected {n} objects")));
    }
    let morphism = validate_colax(&path, &base.bicategory, data, Orientation::Colax)?;
    let segal = segal_report(&path, &base, &morphism.data);
    Ok(PathObject { path, base, morphism, segal })
}

fn segal_report(path: &Path2Category, base: &BaseOfEnrichment, data: &ColaxData) -> SegalReport {
    let m = &base.bicategory;
    let c = &path.base;
    let mut report = SegalReport::default();
    for (p, &cell) in &data.phi {
        report.checked += 1;
        let (x, z) = (data.omap[p.a], data.omap[p.c]);
        if !base.in_w(x, z, cell) {
            report.offenders.push(SegalOffender {
                location: format!("({}, {})", path.chain(p.b, p.c, p.t).display(c), path.chain(p.a, p.b, p.s).display(c)),
                cell: m.hom(x, z).arrow_name(cell).to_string(),
            });
        }
    }
    for (a, &cell) in data.phi_unit.iter().enumerate() {
        report.checked += 1;
        let x = data.omap[a];
        if !base.in_w(x, x, cell) {
            report.offenders.push(SegalOffender {
                location: c.object_name(a).to_string(),
                cell: m.hom(x, x).arrow_name(cell).to_string(),
            });
        }
    }
    report
}

/// The same path-object judged against another class `W` on the same
/// bicategory.
pub fn with_base(po: &PathObject, base: BaseOfEnrichment) -> Result<PathObject> {
    if base.bicategory != po.base.bicategory {
        return Err(EnrichError::ShapeMismatch("different bicategory".into()));
    }
    let segal = segal_report(&po.path, &base, &po.morphism.data);
    Ok(PathObject { path: po.path.clone(), base, morphism: po.morphism.clone(), segal })
}
