//! The augmented simplex category: finite ordinals and nondecreasing maps.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("cannot compose: codomain {cod} differs from domain {dom}")]
    DomainMismatch { cod: usize, dom: usize },
    #[error("image list is not a nondecreasing map {dom} -> {cod}")]
    InvalidMap { dom: usize, cod: usize },
}

/// A nondecreasing map `dom → cod` between ordinals `{0, …, n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaMap {
    dom: usize,
    cod: usize,
    images: Vec<usize>,
}

impl DeltaMap {
    pub fn new(dom: usize, cod: usize, images: Vec<usize>) -> Result<Self, SimplexError> {
        let ok = images.len() == dom
            && images.iter().all(|&i| i < cod)
            && images.windows(2).all(|w| w[0] <= w[1]);
        if ok {
            Ok(DeltaMap { dom, cod, images })
        } else {
            Err(SimplexError::InvalidMap { dom, cod })
        }
    }

    pub fn identity(n: usize) -> Self {
        DeltaMap { dom: n, cod: n, images: (0..n).collect() }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_injective(&self) -> bool {
        self.images.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        for &i in &self.images {
            seen[i] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// Positions `i` with `self(i) = j`.
    pub fn preimage(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().enumerate().filter(move |(_, &x)| x == j).map(|(i, _)| i)
    }
}

impl fmt::Display for DeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(|i| i.to_string()).collect();
        write!(f, "{}->{}:[{}]", self.dom, self.cod, imgs.join(","))
    }
}

/// `g ∘ f`.
pub fn compose_delta(g: &DeltaMap, f: &DeltaMap) -> Result<DeltaMap, SimplexError> {
    if f.cod != g.dom {
        return Err(SimplexError::DomainMismatch { cod: f.cod, dom: g.dom });
    }
    Ok(DeltaMap { dom: f.dom, cod: g.cod, images: f.images.iter().map(|&i| g.images[i]).collect() })
}

/// The monoidal product `f + g`: `f` on the first block, `g` shifted after it.
pub fn ordinal_sum(f: &DeltaMap, g: &DeltaMap) -> DeltaMap {
    let mut images = f.images.clone();
    images.extend(g.images.iter().map(|&i| i + f.cod));
    DeltaMap { dom: f.dom + g.dom, cod: f.cod + g.cod, images }
}

/// Elementary maps generating Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `d^i : n → n+1`, the injection missing `i`.
    Coface { n: usize, i: usize },
    /// `s^i : n+1 → n`, the surjection hitting `i` twice.
    Codegeneracy { n: usize, i: usize },
}

impl Generator {
    pub fn to_map(self) -> DeltaMap {
        match self {
            Generator::Coface { n, i } => DeltaMap {
                dom: n,
                cod: n + 1,
                images: (0..n).map(|j| if j < i { j } else { j + 1 }).collect(),
            },
            Generator::Codegeneracy { n, i } => DeltaMap {
                dom: n + 1,
                cod: n,
                images: (0..=n).map(|j| if j <= i { j } else { j - 1 }).collect(),
            },
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Coface { n, i } => write!(f, "d^{i}:{n}->{}", n + 1),
            Generator::Codegeneracy { n, i } => write!(f, "s^{i}:{}->{n}", n + 1),
        }
    }
}

/// Writes `f` as a word of generators in application order: codegeneracies
/// first (the surjective part), then cofaces (the injective part).
pub fn factorize_generators(f: &DeltaMap) -> Vec<Generator> {
    let mut word = Vec::new();
    let mut cur = f.images.clone();
    // surjective part: merge adjacent positions sharing an image
    while let Some(i) = cur.windows(2).position(|w| w[0] == w[1]) {
        word.push(Generator::Codegeneracy { n: cur.len() - 1, i });
        cur.remove(i + 1);
    }
    // injective part: insert missing values in increasing order
    let mut size = cur.len();
    let mut present = cur;
    for v in 0..f.cod {
        if !present.contains(&v) {
            // every value below v is present by now, so v sits at position v
            word.push(Generator::Coface { n: size, i: v });
            size += 1;
            present.push(v);
            present.sort_unstable();
        }
    }
    word
}

/// Recomposes a generator word given in application order.
pub fn compose_word(dom: usize, word: &[Generator]) -> DeltaMap {
    word.iter().fold(DeltaMap::identity(dom), |acc, g| {
        compose_delta(&g.to_map(), &acc).expect("generator word is composable")
    })
}

/// All nondecreasing maps `m → n`, in lexicographic order of image lists.
pub fn enumerate_hom(m: usize, n: usize) -> Vec<DeltaMap> {
    let mut out = Vec::new();
    if m > 0 && n == 0 {
        return out;
    }
    let mut cur = Vec::with_capacity(m);
    fn go(m: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<DeltaMap>) {
        if cur.len() == m {
            out.push(DeltaMap { dom: m, cod: n, images: cur.clone() });
            return;
        }
        for v in lo..n {
            cur.push(v);
            go(m, n, v, cur, out);
            cur.pop();
        }
    }
    go(m, n, 0, &mut cur, &mut out);
    out
}
