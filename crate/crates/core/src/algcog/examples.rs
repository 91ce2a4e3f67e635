//! Small uA∞ structures used by tests and the command line.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::linhom::int;

use super::algebra::{UnitalAssocAlgebra, Vector};
use super::words::UAInfStructure;

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Non-associative algebra span{1, p, q, r, h} with |h| = 1, dh = r, p·p = q, q·p = r.
/// The associator (pp)p − p(pp) = r = dh is corrected by γ(sp, sp, sp) = h.
pub fn nonassociative_ainf() -> Result<UAInfStructure> {
    let mut product = BTreeMap::new();
    for i in 0..5 {
        product.insert((0, i), Vector::single(i));
        product.insert((i, 0), Vector::single(i));
    }
    product.insert((1, 1), Vector::single(2));
    product.insert((2, 1), Vector::single(3));
    let d = BTreeMap::from([(4, Vector::single(3))]);
    let a = UnitalAssocAlgebra::unchecked(labels(&["1", "p", "q", "r", "h"]), vec![0, 0, 0, 0, 1], product, d, Vector::single(0))?;
    UAInfStructure::from_algebra(&a).with_component(vec![1, 1, 1], Vector::single(4))
}

/// span{u, a, b} with |b| = 1, db = a, u a strict unit and all other products zero.
/// The structure uses 1 = u + a, which is a unit only up to the homotopies
/// γ(v, su) = b and γ(su, v) = −b.
pub fn homotopy_unital() -> Result<UAInfStructure> {
    let mut product = BTreeMap::new();
    for i in 0..3 {
        product.insert((0, i), Vector::single(i));
        product.insert((i, 0), Vector::single(i));
    }
    let d = BTreeMap::from([(2, Vector::single(1))]);
    let a = UnitalAssocAlgebra::new(labels(&["u", "a", "b"]), vec![0, 0, 1], product, d, Vector::single(0))?;
    let s = UAInfStructure::from_algebra(&a);
    let v = s.v();
    s.with_component(vec![v], Vector::from_terms([(0, int(1)), (1, int(1))]))?
        .with_component(vec![v, 0], Vector::single(2))?
        .with_component(vec![0, v], Vector::single(2).neg())
}
