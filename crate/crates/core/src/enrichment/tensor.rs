//! Bracketed tensor words of 1-cells and the canonical re-bracketing 2-cells
//! built from associators.

use crate::bicat::{inverse2, vcomp, Bicategory};

/// A 1-cell `cell: src → dst` of the ambient bicategory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leaf {
    pub src: usize,
    pub dst: usize,
    pub cell: usize,
}

/// `Node(y, x)` is `y ⊗ x`, with `x` applied first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Leaf(Leaf),
    Node(Box<Term>, Box<Term>),
}

impl Term {
    pub fn node(y: Term, x: Term) -> Term {
        Term::Node(Box::new(y), Box::new(x))
    }

    pub fn src(&self) -> usize {
        match self {
            Term::Leaf(l) => l.src,
            Term::Node(_, x) => x.src(),
        }
    }

    pub fn dst(&self) -> usize {
        match self {
            Term::Leaf(l) => l.dst,
            Term::Node(y, _) => y.dst(),
        }
    }

    /// Leaves in path order (first-applied first).
    pub fn leaves(&self) -> Vec<Leaf> {
        let mut out = Vec::new();
        fn go(t: &Term, out: &mut Vec<Leaf>) {
            match t {
                Term::Leaf(l) => out.push(*l),
                Term::Node(y, x) => {
                    go(x, out);
                    go(y, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    pub fn eval<B: Bicategory + ?Sized>(&self, b: &B) -> Option<usize> {
        match self {
            Term::Leaf(l) => Some(l.cell),
            Term::Node(y, x) => b.compose1(x.src(), x.dst(), y.dst(), y.eval(b)?, x.eval(b)?),
        }
    }
}

/// The front-bracketed word `((t_{n-1} ⊗ t_{n-2}) ⊗ …) ⊗ t_0` on blocks
/// given in path order.
pub fn left_normal_blocks(blocks: &[Term]) -> Term {
    match blocks {
        [] => panic!("empty tensor word"),
        [x] => x.clone(),
        [x, rest @ ..] => Term::node(left_normal_blocks(rest), x.clone()),
    }
}

pub fn left_normal(leaves: &[Leaf]) -> Term {
    let blocks: Vec<Term> = leaves.iter().map(|&l| Term::Leaf(l)).collect();
    left_normal_blocks(&blocks)
}

/// Horizontal composite of per-block 2-cells laid out as `left_normal_blocks`.
pub fn tensor_blocks<B: Bicategory + ?Sized>(b: &B, blocks: &[Term], cells: &[usize]) -> Option<usize> {
    debug_assert_eq!(blocks.len(), cells.len());
    match blocks.len() {
        0 => None,
        1 => Some(cells[0]),
        _ => {
            let rest = tensor_blocks(b, &blocks[1..], &cells[1..])?;
            let x = &blocks[0];
            b.compose2(x.src(), x.dst(), blocks.last().unwrap().dst(), rest, cells[0])
        }
    }
}

pub fn identity_on<B: Bicategory + ?Sized>(b: &B, t: &Term) -> Option<usize> {
    Some(b.hom(t.src(), t.dst()).identity(t.eval(b)?))
}

/// The canonical 2-cell `t → left_normal(t.leaves())`, composed of inverse
/// associators and identities.
pub fn normalize<B: Bicategory + ?Sized>(b: &B, t: &Term) -> Option<(Term, usize)> {
    match t {
        Term::Leaf(_) => Some((t.clone(), identity_on(b, t)?)),
        Term::Node(y, x) => {
            let (ny, cy) = normalize(b, y)?;
            let (nx, cx) = normalize(b, x)?;
            let step = b.compose2(x.src(), x.dst(), y.dst(), cy, cx)?;
            let (nt, cj) = join(b, &ny, &nx)?;
            Some((nt, vcomp(b, t.src(), t.dst(), cj, step)?))
        }
    }
}

/// For left-normal `p` and `q`, the canonical 2-cell `p ⊗ q → left_normal`.
fn join<B: Bicategory + ?Sized>(b: &B, p: &Term, q: &Term) -> Option<(Term, usize)> {
    let (u, w) = (q.src(), p.dst());
    match q {
        Term::Leaf(_) => {
            let t = Term::node(p.clone(), q.clone());
            let id = identity_on(b, &t)?;
            Some((t, id))
        }
        Term::Node(q2, q1) => {
            // p ⊗ (q2 ⊗ q1) → (p ⊗ q2) ⊗ q1
            let (v, x) = (q1.dst(), q2.dst());
            let a = b.associator(u, v, x, w, p.eval(b)?, q2.eval(b)?, q1.eval(b)?)?;
            let ainv = inverse2(b, u, w, a)?;
            let (j, cj) = join(b, p, q2)?;
            let whisk = b.compose2(u, v, w, cj, identity_on(b, q1)?)?;
            let t = Term::node(j, (**q1).clone());
            Some((t, vcomp(b, u, w, whisk, ainv)?))
        }
    }
}

/// The canonical 2-cell between two bracketings of the same word.
pub fn rebracket<B: Bicategory + ?Sized>(b: &B, from: &Term, to: &Term) -> Option<usize> {
    debug_assert_eq!(from.leaves(), to.leaves());
    let (_, f) = normalize(b, from)?;
    let (_, g) = normalize(b, to)?;
    let ginv = inverse2(b, from.src(), from.dst(), g)?;
    vcomp(b, from.src(), from.dst(), ginv, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicat::{suspend_monoidal, MonoidalCategory};

    #[test]
    fn normal_form_shape() {
        let l = |c| Leaf { src: 0, dst: 0, cell: c };
        let t = left_normal(&[l(0), l(1), l(2)]);
        assert_eq!(t, Term::node(Term::node(Term::Leaf(l(2)), Term::Leaf(l(1))), Term::Leaf(l(0))));
        assert_eq!(t.leaves(), vec![l(0), l(1), l(2)]);
    }

    #[test]
    fn rebracket_in_strict_base_is_identity() {
        let b = suspend_monoidal(&MonoidalCategory::cyclic_twist(3)).unwrap();
        let l = Leaf { src: 0, dst: 0, cell: 0 };
        let right = Term::node(Term::Leaf(l), Term::node(Term::Leaf(l), Term::Leaf(l)));
        let left = left_normal(&[l, l, l]);
        let c = rebracket(&b, &right, &left).unwrap();
        assert!(b.hom(0, 0).is_identity(c));
    }
}
