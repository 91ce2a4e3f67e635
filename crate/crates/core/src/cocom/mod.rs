//! Finite-dimensional dg cocommutative coalgebras: linear duals, atoms and
//! the splitting into conilpotent components.

mod coalgebra;
mod decompose;

pub use coalgebra::{
    check_coalgebra_map, divided_power_pair, dualize, gaussian_dual, grouplikes, non_dg_atom, predual, truncated_polynomial_dual, two_atom_example,
    CoalgebraMap, DualCommAlgebra, FinCocomCoalgebra,
};
pub use decompose::{atoms, check_decomposition, coaction, component_map, conilpotency_order, decompose, is_irreducible, rational_roots, Component, Decomposition};

#[cfg(test)]
mod tests;
