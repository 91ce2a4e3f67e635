//! Curved Lie coalgebras, the cofree Lie coalgebra, the curved Lie bar
//! construction of a commutative algebra and the commutative cobar construction.

pub mod bar;
pub mod coalgebra;
pub mod cobar;
pub mod cofree;
pub mod twisting;

pub use bar::{bar_lie, LieBar, UnitalCommAlgebra};
pub use coalgebra::{check_curved_lie, desuspend, suspend, ComDualCoalgebra, CurvedLieCoalgebra, LieData, DESUSPENSION_SIGN};
pub use cobar::{cobar_com, ComCobar, Monomial};
pub use cofree::{is_lyndon, lie_cofree_basis, lyndon_words, shuffle, CofreeLie};
pub use twisting::{
    algebra_map_to_twisting, canonical_lie_twisting, check_algebra_map, check_lie_coalgebra_map, check_lie_twisting, coalgebra_map_to_twisting,
    twisting_to_algebra_map, twisting_to_coalgebra_map, LieTwisting,
};

#[cfg(test)]
mod tests;
