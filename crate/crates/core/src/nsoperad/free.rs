use std::collections::BTreeMap;

use num::One;

use crate::error::{Error, Result};
use crate::linhom::{LinComb, Scalar};

use super::tree::Tree;

/// Truncation window: arity ≤ `max_arity`, weight ≤ `max_weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Window {
    pub max_arity: usize,
    pub max_weight: usize,
}

impl Window {
    pub fn new(max_arity: usize, max_weight: usize) -> Self {
        Window { max_arity, max_weight }
    }

    pub fn contains(&self, t: &Tree) -> bool {
        t.arity() <= self.max_arity && t.weight() <= self.max_weight
    }
}

pub(crate) fn sgn(neg: bool) -> Scalar {
    if neg {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// Bilinear extension of grafting to tree polynomials.
pub fn graft_poly(a: &LinComb<Tree>, i: usize, b: &LinComb<Tree>) -> Result<LinComb<Tree>> {
    let mut out = LinComb::zero();
    for (s, x) in a {
        for (t, y) in b {
            let (neg, g) = s.graft(i, t)?;
            out.add_term(g, sgn(neg) * x * y);
        }
    }
    Ok(out)
}

/// Extends `u` (given on generator labels, of degree `deg`) to the derivation
/// D_u(T) = Σ_v (−1)^{deg·|vertices before v|} T[v ↦ u(v)].
pub fn extend_derivation(u: &BTreeMap<u32, LinComb<Tree>>, deg: i64, t: &Tree) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for (pos, s) in t.vertices() {
        let Some(img) = u.get(&s.label) else { continue };
        let outer = deg.rem_euclid(2) == 1 && t.odd_before(pos);
        for (inner, c) in img {
            let (neg, r) = t.substitute(pos, inner);
            out.add_term(r, sgn(outer ^ neg) * c);
        }
    }
    out
}

pub fn extend_derivation_poly(u: &BTreeMap<u32, LinComb<Tree>>, deg: i64, p: &LinComb<Tree>) -> LinComb<Tree> {
    p.map_linear(|t| extend_derivation(u, deg, t))
}

/// Checks that each generator image has the generator's arity and the expected degree.
pub fn check_generator_map(u: &BTreeMap<u32, LinComb<Tree>>, gens: &super::GeneratorSet, deg: i64) -> Result<()> {
    for (l, img) in u {
        let s = gens.symbol(*l);
        for (t, _) in img {
            if t.arity() != s.arity as usize || t.degree() != s.degree as i64 + deg {
                return Err(Error::Invalid(format!("image of {} has wrong arity or degree", gens.name(*l))));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linhom::int;
    use crate::nsoperad::GeneratorSet;

    #[test]
    fn derivation_on_single_vertex_is_u() {
        let mut g = GeneratorSet::new();
        let a = g.add("a", 2, 1).unwrap();
        let b = g.add("b", 2, 0).unwrap();
        let img = LinComb::term(Tree::corolla(b), int(3));
        let u: BTreeMap<u32, LinComb<Tree>> = [(a.label, img.clone())].into_iter().collect();
        assert_eq!(extend_derivation(&u, -1, &Tree::corolla(a)), img);
        assert!(extend_derivation(&BTreeMap::new(), -1, &Tree::corolla(a)).is_zero());
    }

    #[test]
    fn two_vertex_derivation_sign() {
        // T = a ∘_1 a with |a| = 1 and u(a) = b (degree 0): the second vertex
        // picks up (−1)^{|u|·|a|} = −1.
        let mut g = GeneratorSet::new();
        let a = g.add("a", 2, 1).unwrap();
        let b = g.add("b", 2, 0).unwrap();
        let u: BTreeMap<u32, LinComb<Tree>> = [(a.label, LinComb::single(Tree::corolla(b)))].into_iter().collect();
        let (_, t) = Tree::corolla(a).graft(1, &Tree::corolla(a)).unwrap();
        let d = extend_derivation(&u, -1, &t);
        let root_b = t.relabel(0, b);
        let top_b = t.relabel(1, b);
        assert_eq!(d.coeff(&root_b), int(1));
        assert_eq!(d.coeff(&top_b), int(-1));
    }
}
