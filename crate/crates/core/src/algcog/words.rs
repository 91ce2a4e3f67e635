use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::linhom::{format_scalar, sign, LinComb, Scalar};
use crate::verdict::Verdict;

use super::algebra::{UnitalAssocAlgebra, Vector};
use super::coalgebra::CurvedCoalgebra;

/// A word in the letters of an alphabet; letter 0 is written first.
pub type Word = Vec<u32>;

/// Graded letters of a tensor coalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    degrees: Vec<i64>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>, degrees: Vec<i64>) -> Result<Self> {
        if labels.len() != degrees.len() {
            return Err(Error::DimensionMismatch("labels and degrees differ in length".into()));
        }
        Ok(Alphabet { labels, degrees })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, l: u32) -> &str {
        &self.labels[l as usize]
    }

    pub fn degree(&self, l: u32) -> i64 {
        self.degrees[l as usize]
    }

    pub fn word_degree(&self, w: &[u32]) -> i64 {
        w.iter().map(|l| self.degree(*l)).sum()
    }

    pub fn show(&self, w: &[u32]) -> String {
        w.iter().map(|l| self.label(*l)).collect::<Vec<_>>().join(" ")
    }

    /// All words of length exactly `n`, lexicographically.
    pub fn words(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out.into_iter().flat_map(|w: Word| (0..self.len() as u32).map(move |l| [w.clone(), vec![l]].concat())).collect();
        }
        out
    }

    /// Words of length 1..=max, shortest first.
    pub fn words_up_to(&self, max: usize) -> Vec<Word> {
        (1..=max).flat_map(|n| self.words(n)).collect()
    }
}

/// Curved coalgebra structure on the reduced tensor coalgebra T̄ᶜ(W) with
/// deconcatenation, given by the projection φ: T̄ᶜ(W) → W of its coderivation
/// and θ: W → 𝕂. Only words up to `max_len` are represented.
#[derive(Clone, Debug, PartialEq)]
pub struct CofreeCurvedCoalgebra {
    alphabet: Alphabet,
    max_len: usize,
    phi: BTreeMap<Word, LinComb<u32>>,
    theta: BTreeMap<u32, Scalar>,
}

impl CofreeCurvedCoalgebra {
    /// Degree checks only; use [`check`](Self::check) for the curved identities.
    pub fn new(alphabet: Alphabet, max_len: usize, phi: BTreeMap<Word, LinComb<u32>>, theta: BTreeMap<u32, Scalar>) -> Result<Self> {
        for (w, img) in &phi {
            if w.is_empty() || w.iter().any(|l| *l as usize >= alphabet.len()) {
                return Err(Error::Invalid(format!("φ is defined on an invalid word {w:?}")));
            }
            for l in img.keys() {
                if *l as usize >= alphabet.len() {
                    return Err(Error::IndexOutOfRange { index: *l as usize, max: alphabet.len() });
                }
                if alphabet.degree(*l) != alphabet.word_degree(w) - 1 {
                    return Err(Error::Invalid(format!("φ({}) is not of degree -1", alphabet.show(w))));
                }
            }
        }
        for (l, c) in &theta {
            if !c.is_zero() && alphabet.degree(*l) != 2 {
                return Err(Error::Invalid(format!("θ({}) must vanish outside degree 2", alphabet.label(*l))));
            }
        }
        let phi = phi.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let theta = theta.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(CofreeCurvedCoalgebra { alphabet, max_len, phi, theta })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn phi_table(&self) -> &BTreeMap<Word, LinComb<u32>> {
        &self.phi
    }

    pub fn theta_table(&self) -> &BTreeMap<u32, Scalar> {
        &self.theta
    }

    pub fn phi(&self, w: &[u32]) -> LinComb<u32> {
        self.phi.get(w).cloned().unwrap_or_default()
    }

    pub fn theta_letter(&self, l: u32) -> Scalar {
        self.theta.get(&l).cloned().unwrap_or_else(Scalar::zero)
    }

    /// θ on words: only single letters contribute.
    pub fn theta(&self, z: &LinComb<Word>) -> Scalar {
        z.iter().filter(|(w, _)| w.len() == 1).map(|(w, c)| c * self.theta_letter(w[0])).sum()
    }

    /// The coderivation extending φ.
    pub fn d_word(&self, w: &[u32]) -> LinComb<Word> {
        let mut out = LinComb::zero();
        let mut before = 0i64;
        for i in 0..w.len() {
            let s = sign(before);
            for j in i..w.len() {
                for (l, c) in &self.phi(&w[i..=j]) {
                    let mut nw = w[..i].to_vec();
                    nw.push(*l);
                    nw.extend_from_slice(&w[j + 1..]);
                    out.add_term(nw, c * &s);
                }
            }
            before += self.alphabet.degree(w[i]);
        }
        out
    }

    pub fn d(&self, z: &LinComb<Word>) -> LinComb<Word> {
        z.map_linear(|w| self.d_word(w))
    }

    /// (θ ⊗ Id − Id ⊗ θ)Δ on a word.
    pub fn curvature_term(&self, w: &[u32]) -> LinComb<Word> {
        let mut out = LinComb::zero();
        if w.len() >= 2 {
            out.add_term(w[1..].to_vec(), self.theta_letter(w[0]));
            out.add_term(w[..w.len() - 1].to_vec(), -self.theta_letter(w[w.len() - 1]));
        }
        out
    }

    pub fn show(&self, z: &LinComb<Word>) -> String {
        if z.is_zero() {
            return "0".into();
        }
        z.iter().map(|(w, c)| format!("{}*[{}]", format_scalar(c), self.alphabet.show(w))).collect::<Vec<_>>().join(" + ")
    }

    /// D² = (θ ⊗ Id − Id ⊗ θ)Δ and θD = 0 on every word up to `max_len`.
    pub fn check(&self) -> Verdict {
        let mut v = Verdict::new();
        for w in self.alphabet.words_up_to(self.max_len) {
            v.tick();
            let dw = self.d_word(&w);
            let mut r = self.d(&dw);
            r.sub(&self.curvature_term(&w));
            if !r.is_zero() {
                v.fail(format!("curvature at [{}]", self.alphabet.show(&w)), self.show(&r));
            }
            v.tick();
            let t = self.theta(&dw);
            if !t.is_zero() {
                v.fail(format!("θD at [{}]", self.alphabet.show(&w)), format_scalar(&t));
            }
        }
        v
    }

    /// The finite curved coalgebra of words of length ≤ `max_len`.
    pub fn to_coalgebra(&self) -> Result<CurvedCoalgebra> {
        let words = self.alphabet.words_up_to(self.max_len);
        let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let labels = words.iter().map(|w| format!("[{}]", self.alphabet.show(w))).collect();
        let degrees = words.iter().map(|w| self.alphabet.word_degree(w)).collect();
        let delta = words
            .iter()
            .map(|w| (1..w.len()).map(|k| ((index[&w[..k].to_vec()], index[&w[k..].to_vec()]), Scalar::one())).collect())
            .collect();
        let d = words.iter().map(|w| self.d_word(w).iter().map(|(u, c)| (index[u], c.clone())).collect()).collect();
        let theta = words.iter().map(|w| if w.len() == 1 { self.theta_letter(w[0]) } else { Scalar::zero() }).collect();
        CurvedCoalgebra::unchecked(labels, degrees, delta, d, theta)
    }
}

/// Letters of B_c(A): sa_i for each basis element, then v.
pub fn bar_alphabet(labels: &[String], degrees: &[i64]) -> Alphabet {
    let mut l: Vec<String> = labels.iter().map(|x| format!("s{x}")).collect();
    let mut d: Vec<i64> = degrees.iter().map(|x| x + 1).collect();
    l.push("v".into());
    d.push(2);
    Alphabet { labels: l, degrees: d }
}

/// Curved bar construction B_c(A) = (T̄ᶜ(sA ⊕ 𝕂v), d₁ + d₂ + θ) truncated to words of length ≤ `max_len`.
///
/// On letters d₁(sa) = −s(da) and d₁(v) = s1; d₂(sa sb) = (−1)^{|a|} s(ab); θ(v) = 1.
pub fn bar_algebra(a: &UnitalAssocAlgebra, max_len: usize) -> Result<CofreeCurvedCoalgebra> {
    UAInfStructure::from_algebra(a).to_coalgebra(max_len)
}

/// A homotopy unital A∞ structure: maps γ_w: (sA ⊕ 𝕂v)^{⊗n} → sA of degree −1,
/// stored as the desuspended images γ(w) ∈ A.
#[derive(Clone, Debug, PartialEq)]
pub struct UAInfStructure {
    labels: Vec<String>,
    degrees: Vec<i64>,
    gamma: BTreeMap<Word, Vector>,
}

impl UAInfStructure {
    pub fn new(labels: Vec<String>, degrees: Vec<i64>, gamma: BTreeMap<Word, Vector>) -> Result<Self> {
        let alphabet = bar_alphabet(&labels, &degrees);
        let n = labels.len();
        for (w, img) in &gamma {
            if w.is_empty() || w.iter().any(|l| *l as usize > n) {
                return Err(Error::Invalid(format!("γ is defined on an invalid word {w:?}")));
            }
            for i in img.keys() {
                if *i >= n {
                    return Err(Error::IndexOutOfRange { index: *i, max: n });
                }
                if degrees[*i] + 1 != alphabet.word_degree(w) - 1 {
                    return Err(Error::Invalid(format!("γ[{}] is not of degree -1", alphabet.show(w))));
                }
            }
        }
        let gamma = gamma.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(UAInfStructure { labels, degrees, gamma })
    }

    /// The strict structure of a unital dg algebra.
    pub fn from_algebra(a: &UnitalAssocAlgebra) -> Self {
        let n = a.dim();
        let mut gamma = BTreeMap::new();
        for i in 0..n {
            gamma.insert(vec![i as u32], a.d_basis(i).neg());
            for j in 0..n {
                gamma.insert(vec![i as u32, j as u32], a.mul_basis(i, j).scaled(&sign(a.degree(i))));
            }
        }
        gamma.insert(vec![n as u32], a.unit().clone());
        UAInfStructure::new(a.labels().to_vec(), a.degrees().to_vec(), gamma).expect("strict structure has the right degrees")
    }

    /// Reads γ = φ off a curved coalgebra structure on T̄ᶜ(sA ⊕ 𝕂v) with θ(v) = 1.
    pub fn from_coalgebra(c: &CofreeCurvedCoalgebra) -> Result<Self> {
        let al = c.alphabet();
        let n = al.len().checked_sub(1).ok_or_else(|| Error::Invalid("empty alphabet".into()))?;
        if al.label(n as u32) != "v" || al.degree(n as u32) != 2 {
            return Err(Error::Invalid("the last letter must be v in degree 2".into()));
        }
        if c.theta_letter(n as u32) != Scalar::one() || c.theta_table().len() != 1 {
            return Err(Error::Invalid("θ must be the functional dual to v".into()));
        }
        let labels = (0..n as u32).map(|l| al.label(l).strip_prefix('s').unwrap_or(al.label(l)).to_string()).collect();
        let degrees = (0..n as u32).map(|l| al.degree(l) - 1).collect();
        let mut gamma = BTreeMap::new();
        for (w, img) in c.phi_table() {
            if img.keys().any(|l| *l as usize == n) {
                return Err(Error::Invalid(format!("φ[{}] has a component along v", al.show(w))));
            }
            gamma.insert(w.clone(), img.iter().map(|(l, x)| (*l as usize, x.clone())).collect());
        }
        UAInfStructure::new(labels, degrees, gamma)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn gamma_table(&self) -> &BTreeMap<Word, Vector> {
        &self.gamma
    }

    pub fn gamma(&self, w: &[u32]) -> Vector {
        self.gamma.get(w).cloned().unwrap_or_default()
    }

    /// The letter index of v.
    pub fn v(&self) -> u32 {
        self.dim() as u32
    }

    /// 1_A = s⁻¹γ(v).
    pub fn unit(&self) -> Vector {
        self.gamma(&[self.v()])
    }

    /// Carrier differential d(a) = −s⁻¹γ(sa).
    pub fn differential(&self, i: usize) -> Vector {
        self.gamma(&[i as u32]).neg()
    }

    /// Copy with the given component replaced (zero removes it).
    pub fn with_component(&self, w: Word, img: Vector) -> Result<Self> {
        let mut g = self.gamma.clone();
        g.insert(w, img);
        UAInfStructure::new(self.labels.clone(), self.degrees.clone(), g)
    }

    /// Copy without any component on words of length `n`.
    pub fn without_arity(&self, n: usize) -> Self {
        let gamma = self.gamma.iter().filter(|(w, _)| w.len() != n).map(|(w, v)| (w.clone(), v.clone())).collect();
        UAInfStructure { labels: self.labels.clone(), degrees: self.degrees.clone(), gamma }
    }

    pub fn alphabet(&self) -> Alphabet {
        bar_alphabet(&self.labels, &self.degrees)
    }

    /// The associated curved coalgebra on T̄ᶜ(sA ⊕ 𝕂v).
    pub fn to_coalgebra(&self, max_len: usize) -> Result<CofreeCurvedCoalgebra> {
        let phi = self.gamma.iter().map(|(w, v)| (w.clone(), v.iter().map(|(i, c)| (*i as u32, c.clone())).collect())).collect();
        let theta = BTreeMap::from([(self.v(), Scalar::one())]);
        CofreeCurvedCoalgebra::new(self.alphabet(), max_len, phi, theta)
    }
}

/// Residual of the uA∞ relation π φ D_φ = (θ ⊗ π − π ⊗ θ)Δ₂ on one word.
pub fn uainf_residual(s: &UAInfStructure, c: &CofreeCurvedCoalgebra, w: &[u32]) -> LinComb<u32> {
    let mut r = LinComb::zero();
    for (u, x) in &c.d_word(w) {
        r.add_scaled(&c.phi(u), x);
    }
    if w.len() == 2 {
        let th = |l: u32| if l == s.v() { Scalar::one() } else { Scalar::zero() };
        r.add_term(w[1], -th(w[0]));
        r.add_term(w[0], th(w[1]));
    }
    r
}

/// Checks the uA∞ relations on every word of length ≤ `max_len`.
pub fn check_uainf(s: &UAInfStructure, max_len: usize) -> Result<Verdict> {
    let c = s.to_coalgebra(max_len)?;
    let al = c.alphabet().clone();
    let mut v = Verdict::new();
    for w in al.words_up_to(max_len) {
        v.tick();
        let r = uainf_residual(s, &c, &w);
        if !r.is_zero() {
            let shown = r.iter().map(|(l, x)| format!("{}*{}", format_scalar(x), al.label(*l))).collect::<Vec<_>>().join(" + ");
            v.fail(format!("uA∞ relation at [{}]", al.show(&w)), shown);
        }
    }
    Ok(v)
}
