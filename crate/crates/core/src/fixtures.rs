//! Built-in examples used by the tests, the benches and the command line.

use crate::error::Result;
use crate::linhom::{int, LinComb};
use crate::nsoperad::{GeneratorSet, Presentation, Tree, TruncatedDgOperad, Window};

/// uAs: μ (arity 2) and ξ (arity 0), both of degree 0, with associativity and
/// the two unit relations μ(ξ, 1) − 1 and μ(1, ξ) − 1.
pub fn uas_presentation() -> Presentation {
    let mut g = GeneratorSet::new();
    g.add("mu", 2, 0).expect("fresh label");
    g.add("xi", 0, 0).expect("fresh label");
    let p = |s: &str| g.parse(s).expect("fixture tree");
    let assoc = LinComb::from_terms([(p("(mu mu |)"), int(1)), (p("(mu | mu)"), int(-1))]);
    let left = LinComb::from_terms([(p("(mu xi |)"), int(1)), (Tree::trivial(), int(-1))]);
    let right = LinComb::from_terms([(p("(mu | xi)"), int(1)), (Tree::trivial(), int(-1))]);
    Presentation::new(g, vec![assoc, left, right]).expect("uAs presentation is valid")
}

/// The operad uAs in a window.
pub fn uas_operad(window: Window) -> Result<TruncatedDgOperad> {
    TruncatedDgOperad::quotient_by_ideal(&uas_presentation(), window)
}

/// As: one binary generator with associativity.
pub fn as_presentation() -> Presentation {
    let mut g = GeneratorSet::new();
    g.add("mu", 2, 0).expect("fresh label");
    let p = |s: &str| g.parse(s).expect("fixture tree");
    let assoc = LinComb::from_terms([(p("(mu mu |)"), int(1)), (p("(mu | mu)"), int(-1))]);
    Presentation::new(g, vec![assoc]).expect("As presentation is valid")
}
