//! Operadic bar and cobar constructions, operadic twisting morphisms and the
//! bijections Tw(𝒞, 𝒫) ≅ hom(Ω_u𝒞, 𝒫) ≅ hom(𝒞, B_c𝒫).

pub mod construct;
pub mod twisting;

pub use construct::{bar_operad, cobar_operad, BarConstruction, CobarConstruction};
pub use twisting::{
    canonical_iota, canonical_kappa, canonical_pi, check_op_twisting, check_operad_morphism, cofree_extension, operad_morphism_to_twisting,
    twisting_to_coop_morphism, twisting_to_operad_morphism, CoopMorphism, OpTwisting, OperadMorphism,
};

use std::collections::BTreeMap;

use crate::error::Result;
use crate::linhom::LinComb;
use crate::nsoperad::{DgOperad, Tree};

/// Extracts α = π∘f from a cooperad morphism f: 𝒞 → B_c𝒫.
pub fn coop_morphism_to_twisting<'a, P: DgOperad>(
    f: &CoopMorphism,
    c: &'a crate::nscoop::TruncatedCurvedCooperad,
    bar: &BarConstruction<P::Key>,
    p: &'a P,
) -> Result<OpTwisting<'a, P>> {
    let mut alpha: BTreeMap<Tree, LinComb<P::Key>> = BTreeMap::new();
    for (k, img) in &f.images {
        let a = bar.project(img);
        if !a.is_zero() {
            alpha.insert(k.clone(), a);
        }
    }
    OpTwisting::new(c, p, alpha)
}

#[cfg(test)]
mod tests;
