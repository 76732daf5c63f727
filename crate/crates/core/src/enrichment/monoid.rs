use std::collections::BTreeMap;

use super::{EnrichError, PathObject, Result};
use crate::bicat::Bicategory;
use crate::fincat::Chain;
use crate::pathcat::delta_identification;
use crate::simplex::{compose_delta, enumerate_hom, factorize_generators, ordinal_sum, DeltaMap, Generator};

/// A structure map `φ_{m,n}: F(m+n) → F(m) ⊗ F(n)` (or `φ_0` when
/// `m = n = 0` and `unit` is set), tagged with membership in `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMap {
    pub m: usize,
    pub n: usize,
    pub cell: usize,
    pub in_w: bool,
    pub identity: bool,
}

/// A truncated colax monoidal functor `Δ → M` read off a 1-point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyMonoid {
    /// `F(n)` for `n ≤ N`.
    pub objects: Vec<usize>,
    /// `F(u)` for every `u: n → m` with `n, m ≤ N`.
    pub maps: BTreeMap<DeltaMap, usize>,
    pub structure: Vec<StructureMap>,
    pub unit_map: StructureMap,
}

impl HomotopyMonoid {
    /// All structure maps are identities: an ordinary monoid.
    pub fn is_strict(&self) -> bool {
        self.unit_map.identity && self.structure.iter().all(|s| s.identity)
    }

    pub fn is_homotopy_monoid(&self) -> bool {
        self.unit_map.in_w && self.structure.iter().all(|s| s.in_w)
    }
}

/// Transports a point over the terminal shape along `P_1 ≅ Δ`.
pub fn homotopy_monoid_view(po: &PathObject) -> Result<HomotopyMonoid> {
    let c = po.shape();
    if c.object_count() != 1 || c.arrow_count() != 1 {
        return Err(EnrichError::ShapeNotTerminal);
    }
    let ident = delta_identification(&po.path)?;
    let nmax = po.path.truncation;
    let m = &po.base.bicategory;
    let x = po.data().omap[0];
    let hom = m.hom(x, x);
    let fun = &po.data().homs[0];
    let objects: Vec<usize> = ident.chain_of_length.iter().map(|&i| fun.obj[i]).collect();
    let ph = po.path.path_hom(0, 0);
    let mut maps = BTreeMap::new();
    for n in 0..=nmax {
        for k in 0..=nmax {
            let (i, j) = (ident.chain_of_length[n], ident.chain_of_length[k]);
            if let Some(arrow) = ph.category.arrow_between(i, j) {
                for u in enumerate_hom(n, k) {
                    maps.insert(u, fun.arr[arrow]);
                }
            }
        }
    }
    let chain = |k: usize| Chain { src: 0, dst: 0, arrows: vec![0; k] };
    let tag = |mm: usize, nn: usize, cell: usize| StructureMap {
        m: mm,
        n: nn,
        cell,
        in_w: po.base.in_w(x, x, cell),
        identity: hom.is_identity(cell),
    };
    let mut structure = Vec::new();
    for mm in 0..=nmax {
        for nn in 0..=nmax - mm {
            let cell = po.phi(&chain(mm), &chain(nn)).expect("composable");
            structure.push(tag(mm, nn, cell));
        }
    }
    let unit_map = tag(0, 0, po.data().phi_unit[0]);
    Ok(HomotopyMonoid { objects, maps, structure, unit_map })
}

// ---------------------------------------------------------------------------

/// A truncated colax monoidal functor `Y: (Δ, +, 0) → (FinSet, ×, 1)`.
/// Sets are `{0, …, k−1}`; pairs in `Y(p) × Y(q)` are `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColaxFinSet {
    pub levels: Vec<usize>,
    pub action: BTreeMap<DeltaMap, Vec<usize>>,
    /// `φ_{p,q}: Y(p+q) → Y(p) × Y(q)` for `p + q ≤ N`.
    pub colax: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

impl ColaxFinSet {
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }
}

/// A truncated simplicial set: `faces[n][i]: X_n → X_{n−1}` for `1 ≤ n ≤ N`,
/// `degeneracies[n][i]: X_n → X_{n+1}` for `n < N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialSet {
    pub levels: Vec<usize>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl SimplicialSet {
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    /// `X(θ): X_n → X_m` for a monotone `θ: [m] → [n]`, given as a map of
    /// sizes `m+1 → n+1`.
    pub fn act(&self, theta: &DeltaMap) -> Vec<usize> {
        let word = factorize_generators(theta);
        let n = theta.cod() - 1;
        let mut cur: Vec<usize> = (0..self.levels[n]).collect();
        // contravariant: apply the word from its end
        for g in word.iter().rev() {
            let step = match *g {
                Generator::Coface { n: k, i } => &self.faces[k][i],
                Generator::Codegeneracy { n: k, i } => &self.degeneracies[k - 1][i],
            };
            cur = cur.iter().map(|&x| step[x]).collect();
        }
        cur
    }

    pub fn check(&self) -> Result<()> {
        let nmax = self.truncation();
        let bad = |what: String| Err(EnrichError::Malformed(what));
        for n in 1..=nmax {
            for i in 0..=n {
                for j in i + 1..=n {
                    if n >= 2 {
                        // d_i d_j = d_{j-1} d_i
                        for x in 0..self.levels[n] {
                            let l = self.faces[n - 1][i][self.faces[n][j][x]];
                            let r = self.faces[n - 1][j - 1][self.faces[n][i][x]];
                            if l != r {
                                return bad(format!("face identity at level {n}"));
                            }
                        }
                    }
                }
            }
        }
        for n in 0..nmax {
            for j in 0..=n {
                for x in 0..self.levels[n] {
                    let y = self.degeneracies[n][j][x];
                    if self.faces[n + 1][j][y] != x || self.faces[n + 1][j + 1][y] != x {
                        return bad(format!("degeneracy section at level {n}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The nerve of the coarse category on a `k`-element set: `X_n = k^{n+1}`,
/// vertex tuples in lexicographic order.
pub fn nerve_of_coarse(k: usize, truncation: usize) -> SimplicialSet {
    let levels: Vec<usize> = (0..=truncation).map(|n| k.pow(n as u32 + 1)).collect();
    let decode = |n: usize, mut x: usize| {
        let mut v = vec![0; n + 1];
        for slot in v.iter_mut().rev() {
            *slot = x % k;
            x /= k;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0, |acc, &d| acc * k + d);
    let faces = (0..=truncation)
        .map(|n| {
            if n == 0 {
                return Vec::new();
            }
            (0..=n)
                .map(|i| {
                    (0..levels[n])
                        .map(|x| {
                            let mut v = decode(n, x);
                            v.remove(i);
                            encode(&v)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let degeneracies = (0..truncation)
        .map(|n| {
            (0..=n)
                .map(|i| {
                    (0..levels[n])
                        .map(|x| {
                            let mut v = decode(n, x);
                            v.insert(i, v[i]);
                            encode(&v)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    SimplicialSet { levels, faces, degeneracies }
}

/// Checks functoriality, naturality, coassociativity and counitality.
pub fn validate_colax_finset(y: &ColaxFinSet) -> Result<()> {
    let nmax = y.truncation();
    let bad = |what: String| Err(EnrichError::Malformed(what));
    for n in 0..=nmax {
        for m in 0..=nmax {
            for u in enumerate_hom(n, m) {
                let Some(img) = y.action.get(&u) else { return bad(format!("missing Y({u})")) };
                if img.len() != y.levels[n] || img.iter().any(|&v| v >= y.levels[m]) {
                    return bad(format!("Y({u}) has wrong shape"));
                }
            }
        }
    }
    for n in 0..=nmax {
        if y.action[&DeltaMap::identity(n)] != (0..y.levels[n]).collect::<Vec<_>>() {
            return bad(format!("Y(1_{n})"));
        }
        for m in 0..=nmax {
            for k in 0..=nmax {
                for u in enumerate_hom(n, m) {
                    for v in enumerate_hom(m, k) {
                        let vu = compose_delta(&v, &u).unwrap();
                        let lhs: Vec<usize> = y.action[&u].iter().map(|&x| y.action[&v][x]).collect();
                        if lhs != y.action[&vu] {
                            return bad(format!("Y({v} ∘ {u})"));
                        }
                    }
                }
            }
        }
    }
    for p in 0..=nmax {
        for q in 0..=nmax - p {
            let Some(phi) = y.colax.get(&(p, q)) else { return bad(format!("missing φ_{p},{q}")) };
            if phi.len() != y.levels[p + q] || phi.iter().any(|&(a, b)| a >= y.levels[p] || b >= y.levels[q]) {
                return Err(EnrichError::NotCartesianTarget(format!("φ_{p},{q}")));
            }
        }
    }
    for p in 0..=nmax {
        for q in 0..=nmax - p {
            // counit: the projections of φ_{0,q} and φ_{p,0} are identities
            if p == 0 && y.colax[&(0, q)].iter().enumerate().any(|(x, &(_, b))| b != x) {
                return bad(format!("counit at {q}"));
            }
            if q == 0 && y.colax[&(p, 0)].iter().enumerate().any(|(x, &(a, _))| a != x) {
                return bad(format!("counit at {p}"));
            }
            for r in 0..=nmax - p - q {
                for x in 0..y.levels[p + q + r] {
                    let (ab, c) = y.colax[&(p + q, r)][x];
                    let (a, b) = y.colax[&(p, q)][ab];
                    let (a2, bc) = y.colax[&(p, q + r)][x];
                    let (b2, c2) = y.colax[&(q, r)][bc];
                    if (a, b, c) != (a2, b2, c2) {
                        return bad(format!("coassociativity at ({p}, {q}, {r})"));
                    }
                }
            }
            for p2 in 0..=nmax {
                for q2 in 0..=nmax - p2 {
                    for u in enumerate_hom(p, p2) {
                        for v in enumerate_hom(q, q2) {
                            let uv = ordinal_sum(&u, &v);
                            for x in 0..y.levels[p + q] {
                                let (a, b) = y.colax[&(p, q)][x];
                                let lhs = (y.action[&u][a], y.action[&v][b]);
                                let rhs = y.colax[&(p2, q2)][y.action[&uv][x]];
                                if lhs != rhs {
                                    return bad(format!("naturality at {u} + {v}"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `ũ: [m] → [n]`, `ũ(j) = #{i : u(i) < j}`, for `u: n → m`.
fn dual(u: &DeltaMap) -> DeltaMap {
    let images = (0..=u.cod()).map(|j| u.images().iter().filter(|&&x| x < j).count()).collect();
    DeltaMap::new(u.cod() + 1, u.dom() + 1, images).expect("monotone")
}

/// `X_n = Y(n)`; outer faces from the colaxity projections, inner faces and
/// degeneracies from the action of Δ.
pub fn simplicial_correspondence(y: &ColaxFinSet) -> Result<SimplicialSet> {
    validate_colax_finset(y)?;
    let nmax = y.truncation();
    let mut faces = vec![Vec::new()];
    for n in 1..=nmax {
        let mut fs = Vec::with_capacity(n + 1);
        fs.push(y.colax[&(1, n - 1)].iter().map(|&(_, b)| b).collect());
        for i in 1..n {
            let merge = crate::simplex::Generator::Codegeneracy { n: n - 1, i: i - 1 }.to_map();
            fs.push(y.action[&merge].clone());
        }
        fs.push(y.colax[&(n - 1, 1)].iter().map(|&(a, _)| a).collect());
        faces.push(fs);
    }
    let degeneracies = (0..nmax)
        .map(|n| (0..=n).map(|i| y.action[&crate::simplex::Generator::Coface { n, i }.to_map()].clone()).collect())
        .collect();
    let x = SimplicialSet { levels: y.levels.clone(), faces, degeneracies };
    x.check()?;
    Ok(x)
}

/// `Y(n) = X_n`, `Y(u) = X(ũ)`, `φ_{p,q}` = front and back faces.
pub fn simplicial_inverse(x: &SimplicialSet) -> Result<ColaxFinSet> {
    x.check()?;
    let nmax = x.truncation();
    let mut action = BTreeMap::new();
    for n in 0..=nmax {
        for m in 0..=nmax {
            for u in enumerate_hom(n, m) {
                let img = x.act(&dual(&u));
                action.insert(u, img);
            }
        }
    }
    let mut colax = BTreeMap::new();
    for p in 0..=nmax {
        for q in 0..=nmax - p {
            let front = DeltaMap::new(p + 1, p + q + 1, (0..=p).collect()).unwrap();
            let back = DeltaMap::new(q + 1, p + q + 1, (p..=p + q).collect()).unwrap();
            let (fa, fb) = (x.act(&front), x.act(&back));
            colax.insert((p, q), fa.into_iter().zip(fb).collect());
        }
    }
    let y = ColaxFinSet { levels: x.levels.clone(), action, colax };
    validate_colax_finset(&y)?;
    Ok(y)
}
