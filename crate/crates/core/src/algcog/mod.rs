//! Algebras, curved coalgebras, their bar and cobar constructions and
//! homotopy unital A-infinity structures.

pub mod algebra;
pub mod coalgebra;
pub mod cobar;
pub mod examples;
pub mod koszul_complex;
pub mod translate;
pub mod twisted;
pub mod words;

pub use algebra::{complex_of, dual_numbers, ground_field, truncated_polynomial, ArityOneOperad, UnitalAssocAlgebra, Vector};
pub use coalgebra::{CurvedCoalgebra, Tensor2};
pub use cobar::{cobar_bar, cobar_coalgebra, counit, counit_graded_qiso, CobarAlgebra, CobarWord};
pub use koszul_complex::{koszul_complex_check, KoszulComplex, KoszulComplexReport, KoszulPiece, KoszulVariant};
pub use translate::{check_cofree_iso, compare_bar_kappa_with_bar_algebra, cofree_map, uas_coalgebra_to_curved, TranslationSigns, UAS_TRANSLATION};
pub use twisted::{bar_alpha, bar_projection, check_alg_twisting, cobar_alpha, AlgTwisting, CCoalgebra, CompositeKey, PAlgebra, TwistedBar, TwistedCobar, UasAlgebra};
pub use words::{bar_alphabet, bar_algebra, check_uainf, uainf_residual, Alphabet, CofreeCurvedCoalgebra, UAInfStructure, Word};

#[cfg(test)]
mod tests;
