use std::collections::BTreeMap;

use crate::algcog::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::linhom::{frac, sign, LinComb, Scalar, SparseVec, Subspace};

/// Signed shuffle product u ш w of two words.
pub fn shuffle(alphabet: &Alphabet, u: &[u32], w: &[u32]) -> LinComb<Word> {
    if u.is_empty() || w.is_empty() {
        return LinComb::single([u, w].concat());
    }
    let mut out = LinComb::zero();
    for (t, c) in &shuffle(alphabet, &u[1..], w) {
        out.add_term([&u[..1], t].concat(), c.clone());
    }
    // w[0] moves past all of u
    let s = sign(alphabet.degree(w[0]) * alphabet.word_degree(u));
    for (t, c) in &shuffle(alphabet, u, &w[1..]) {
        out.add_term([&w[..1], t].concat(), c * &s);
    }
    out
}

/// Whether `w` is strictly smaller than each of its proper rotations.
pub fn is_lyndon(w: &[u32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &[&w[i..], &w[..i]].concat()[..])
}

/// Lyndon words of length n, together with the squares of odd Lyndon words of
/// length n/2 (graded case).
pub fn lyndon_words(alphabet: &Alphabet, n: usize) -> Vec<Word> {
    let mut out: Vec<Word> = alphabet.words(n).into_iter().filter(|w| is_lyndon(w)).collect();
    if n % 2 == 0 && n > 0 {
        for l in alphabet.words(n / 2).into_iter().filter(|w| is_lyndon(w)) {
            if alphabet.word_degree(&l) % 2 != 0 {
                out.push([l.clone(), l].concat());
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug)]
struct Level {
    words: Vec<Word>,
    index: BTreeMap<Word, usize>,
    shuffles: Subspace,
    basis: Vec<Word>,
}

/// The cofree conilpotent Lie coalgebra ℒieᶜ(W) up to a given weight, realized as
/// the reduced tensor coalgebra modulo shuffle products, with cobracket
/// δ = ½(1 − τ)Δ̄ induced by deconcatenation.
///
/// Basis words are the Lyndon words (and squares of odd Lyndon words); other
/// words are rewritten modulo shuffles.
#[derive(Clone, Debug)]
pub struct CofreeLie {
    alphabet: Alphabet,
    max_weight: usize,
    levels: Vec<Level>,
}

impl CofreeLie {
    pub fn new(alphabet: Alphabet, max_weight: usize) -> Result<Self> {
        let mut levels = vec![Level { words: Vec::new(), index: BTreeMap::new(), shuffles: Subspace::zero(0), basis: Vec::new() }];
        for n in 1..=max_weight {
            let preferred = lyndon_words(&alphabet, n);
            // preferred words first: pivots sit at the largest index, so the
            // complement is drawn from the front
            let mut words = alphabet.words(n);
            words.sort_by_key(|w| (preferred.binary_search(w).is_err(), w.clone()));
            let index: BTreeMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
            let mut shuffles = Subspace::zero(words.len());
            for k in 1..=n / 2 {
                for u in alphabet.words(k) {
                    for w in alphabet.words(n - k) {
                        let s = shuffle(&alphabet, &u, &w);
                        shuffles.insert(s.iter().map(|(t, c)| (index[t], c.clone())).collect());
                    }
                }
            }
            let pivots: Vec<usize> = shuffles.pivots().collect();
            let mut basis: Vec<Word> = (0..words.len()).filter(|i| pivots.binary_search(i).is_err()).map(|i| words[i].clone()).collect();
            basis.sort();
            if basis != preferred {
                return Err(Error::Invalid(format!("Lyndon words do not give a basis in weight {n}")));
            }
            levels.push(Level { words, index, shuffles, basis });
        }
        Ok(CofreeLie { alphabet, max_weight, levels })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    /// Basis words of weight n.
    pub fn basis(&self, n: usize) -> &[Word] {
        &self.levels[n].basis
    }

    /// All basis words, lowest weight first.
    pub fn all_basis(&self) -> Vec<Word> {
        (1..=self.max_weight).flat_map(|n| self.levels[n].basis.iter().cloned()).collect()
    }

    /// The class of a word, written in basis words.
    pub fn class(&self, w: &[u32]) -> Result<LinComb<Word>> {
        let lvl = self.levels.get(w.len()).filter(|_| !w.is_empty()).ok_or_else(|| Error::WindowTooSmall(format!("word of length {}", w.len())))?;
        let r = lvl.shuffles.reduce(&SparseVec::from([(lvl.index[w], Scalar::from_integer(1.into()))]));
        Ok(r.into_iter().map(|(i, c)| (lvl.words[i].clone(), c)).collect())
    }

    pub fn class_poly(&self, z: &LinComb<Word>) -> Result<LinComb<Word>> {
        z.try_map_linear(|w| self.class(w))
    }

    /// δ(w) = ½ Σ_{w = uv} ([u] ⊗ [v] − (−1)^{|u||v|} [v] ⊗ [u]).
    pub fn cobracket(&self, w: &[u32]) -> Result<LinComb<(Word, Word)>> {
        let half = frac(1, 2);
        let mut out = LinComb::zero();
        for k in 1..w.len() {
            let (u, v) = w.split_at(k);
            let (cu, cv) = (self.class(u)?, self.class(v)?);
            let s = sign(self.alphabet.word_degree(u) * self.alphabet.word_degree(v));
            for (a, x) in &cu {
                for (b, y) in &cv {
                    let c = &half * x * y;
                    out.add_term((a.clone(), b.clone()), c.clone());
                    out.add_term((b.clone(), a.clone()), -(c * &s));
                }
            }
        }
        Ok(out)
    }
}

/// Basis of the weight-n component of ℒieᶜ(W).
pub fn lie_cofree_basis(alphabet: &Alphabet, weight: usize) -> Result<Vec<Word>> {
    if weight == 0 {
        return Ok(Vec::new());
    }
    Ok(CofreeLie::new(alphabet.clone(), weight)?.basis(weight).to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(degrees: &[i64]) -> Alphabet {
        Alphabet::new((0..degrees.len()).map(|i| ((b'a' + i as u8) as char).to_string()).collect(), degrees.to_vec()).unwrap()
    }

    #[test]
    fn lyndon() {
        assert!(is_lyndon(&[0, 1]));
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(!is_lyndon(&[0, 1, 0]));
        assert!(!is_lyndon(&[0, 0]));
    }

    #[test]
    fn shuffle_of_odd_letter_with_itself_vanishes() {
        let a = alpha(&[1]);
        assert!(shuffle(&a, &[0], &[0]).is_zero());
        let b = alpha(&[0]);
        assert_eq!(shuffle(&b, &[0], &[0]), LinComb::term(vec![0, 0], crate::linhom::int(2)));
    }

    #[test]
    fn weight_one_is_the_alphabet() {
        let a = alpha(&[0, 1, 2]);
        assert_eq!(lie_cofree_basis(&a, 1).unwrap(), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn reversed_word_class() {
        // ba ≡ −ab modulo a ш b for even letters
        let c = CofreeLie::new(alpha(&[0, 0]), 2).unwrap();
        assert_eq!(c.class(&[1, 0]).unwrap(), LinComb::term(vec![0, 1], crate::linhom::int(-1)));
    }
}
