//! Truncated curved conilpotent cooperads inside cofree cooperads, and Koszul dual cooperads.

pub mod cooperad;
pub mod koszul;

pub use cooperad::{Component, Components, TruncatedCurvedCooperad};
pub use koszul::{koszul_dual, KoszulDualResult};

use crate::error::Result;
use crate::linhom::{FilteredComplex, LinComb, Scalar};
use crate::nsoperad::{GeneratorSet, Tree, Window};
use crate::verdict::Verdict;

/// Cofree cooperad with the coderivation extending `phi` (tabulated on blocks of
/// at most `max_block` vertices) and curvature `theta`; validated.
pub fn cofree_coderivation(
    cogens: GeneratorSet,
    window: Window,
    max_block: usize,
    phi: impl Fn(&Tree) -> Result<LinComb<Tree>>,
    theta: impl Fn(&Tree) -> Result<Scalar>,
) -> Result<TruncatedCurvedCooperad> {
    TruncatedCurvedCooperad::cofree(cogens, window, max_block, phi, theta)
}

pub fn check_curved_cooperad(c: &TruncatedCurvedCooperad) -> Result<Verdict> {
    c.check_curved()
}

/// Coradical filtration of every arity in the window.
pub fn coradical_filtration_coop(c: &TruncatedCurvedCooperad) -> Result<Vec<FilteredComplex>> {
    (0..=c.window().max_arity).map(|n| c.coradical_filtration(n)).collect()
}

pub fn check_lemma_cooptech(c: &TruncatedCurvedCooperad, n: usize) -> Result<Verdict> {
    c.check_lemma_cooptech(n)
}
