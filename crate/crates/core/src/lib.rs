//! Exact computations for curved Koszul duality of nonsymmetric operads and
//! their algebras over the rationals.
//!
//! Everything works in finite windows (arity, weight, degree) with exact
//! rational arithmetic. The main entry points:
//!
//! - [`linhom`]: scalars, sparse matrices, chain complexes, filtrations
//! - [`nsoperad`]: planar trees, free and presented operads
//! - [`nscoop`]: curved cooperads, coderivations, Koszul dual cooperads
//! - [`opbarcobar`]: operadic bar and cobar constructions, twisting morphisms
//! - [`algcog`]: algebras, curved coalgebras, bar/cobar of algebras, uA-infinity checks
//! - [`liecom`]: curved Lie coalgebras and the commutative side
//! - [`cocom`]: decomposition of finite cocommutative coalgebras

pub mod algcog;
pub mod cocom;
pub mod error;
pub mod fixtures;
pub mod liecom;
pub mod linhom;
pub mod nscoop;
pub mod nsoperad;
pub mod opbarcobar;
pub mod verdict;

pub use error::{Error, Result};
pub use linhom::{LinComb, Scalar};
pub use nsoperad::{Symbol, Tree};
pub use verdict::{Failure, Verdict};
