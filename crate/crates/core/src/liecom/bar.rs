use std::collections::BTreeMap;

use crate::algcog::{bar_algebra, UnitalAssocAlgebra, Vector, Word};
use crate::error::{Error, Result};
use crate::linhom::Scalar;

use super::cofree::CofreeLie;
use super::coalgebra::CurvedLieCoalgebra;

/// Unital graded-commutative dg algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitalCommAlgebra {
    algebra: UnitalAssocAlgebra,
}

impl UnitalCommAlgebra {
    pub fn new(algebra: UnitalAssocAlgebra) -> Result<Self> {
        if let Some(f) = algebra.check().witness() {
            return Err(Error::Invalid(format!("{}: {}", f.at, f.residual)));
        }
        if !algebra.is_commutative() {
            return Err(Error::Invalid("the product is not graded commutative".into()));
        }
        Ok(UnitalCommAlgebra { algebra })
    }

    pub fn algebra(&self) -> &UnitalAssocAlgebra {
        &self.algebra
    }
}

/// B_L A truncated by weight, with its basis of Lyndon words.
#[derive(Clone, Debug)]
pub struct LieBar {
    pub cofree: CofreeLie,
    pub words: Vec<Word>,
    pub coalgebra: CurvedLieCoalgebra,
}

impl LieBar {
    pub fn weights(&self) -> Vec<usize> {
        self.words.iter().map(|w| w.len()).collect()
    }

    pub fn index_of(&self, w: &[u32]) -> Option<usize> {
        self.words.iter().position(|x| x == w)
    }

    /// Rewrites a combination of words in the basis of B_L A.
    pub fn vector(&self, z: &crate::linhom::LinComb<Word>) -> Result<Vector> {
        let c = self.cofree.class_poly(z)?;
        c.iter()
            .map(|(w, x)| self.index_of(w).map(|i| (i, x.clone())).ok_or_else(|| Error::WindowTooSmall(format!("word of length {}", w.len()))))
            .collect()
    }
}

/// B_L A = ℒieᶜ(sA ⊕ 𝕂v) up to weight `max_weight`.
///
/// The coderivation is the one of the curved bar coalgebra B_c A, passed to the
/// quotient by shuffles (the shuffles form a coideal stable under the
/// coderivation because A is commutative).
pub fn bar_lie(a: &UnitalCommAlgebra, max_weight: usize) -> Result<LieBar> {
    if max_weight == 0 {
        return Err(Error::WindowTooSmall("B_L needs weight at least 1".into()));
    }
    let bar = bar_algebra(a.algebra(), max_weight)?;
    let cofree = CofreeLie::new(bar.alphabet().clone(), max_weight)?;
    let words = cofree.all_basis();
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let to_vec = |z: &crate::linhom::LinComb<Word>| -> Vector { z.iter().map(|(w, c)| (index[w], c.clone())).collect() };
    let mut delta = Vec::new();
    let mut d = Vec::new();
    let mut theta = Vec::new();
    for w in &words {
        let dw = cofree.class_poly(&bar.d_word(w))?;
        d.push(to_vec(&dw));
        delta.push(cofree.cobracket(w)?.iter().map(|((u, v), c)| ((index[u], index[v]), c.clone())).collect());
        theta.push(if w.len() == 1 { bar.theta_letter(w[0]) } else { Scalar::from_integer(0.into()) });
    }
    let labels = words.iter().map(|w| bar.alphabet().show(w)).collect();
    let degrees = words.iter().map(|w| bar.alphabet().word_degree(w)).collect();
    let coalgebra = CurvedLieCoalgebra::unchecked(labels, degrees, delta, d, theta)?;
    Ok(LieBar { cofree, words, coalgebra })
}
