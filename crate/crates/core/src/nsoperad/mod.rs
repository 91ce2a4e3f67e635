//! Planar trees, free nonsymmetric operads, presentations and truncated dg operads.

pub mod enumerate;
pub mod free;
pub mod generators;
pub mod operad;
pub mod presentation;
pub mod tree;

pub use enumerate::{free_basis, free_window, TreeEnumerator};
pub use free::{extend_derivation, extend_derivation_poly, graft_poly, Window};
pub use generators::{Generator, GeneratorSet, RESERVED_V};
pub use operad::{evaluate_tree, DgOperad, TruncatedDgOperad};
pub use presentation::{Presentation, QuadraticPart};
pub use tree::{partition_parity, sort_parity, Symbol, Tree, HOLE, LEAF};

/// Partial composition of trees with its Koszul sign.
pub fn graft(t1: &Tree, i: usize, t2: &Tree) -> crate::Result<(bool, Tree)> {
    t1.graft(i, t2)
}

/// Quotient of the free operad by the ideal of a presentation, in a window.
pub fn quotient_by_ideal(p: &Presentation, window: Window) -> crate::Result<TruncatedDgOperad> {
    TruncatedDgOperad::quotient_by_ideal(p, window)
}
