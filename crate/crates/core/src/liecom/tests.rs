use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use super::*;
use crate::algcog::{dual_numbers, ground_field, Alphabet, Tensor2, Vector};
use crate::linhom::{int, sign, LinComb, Scalar, SparseVec, Subspace};

/// Bracket monomials in the free magma on the letters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Br {
    L(u32),
    B(Box<Br>, Box<Br>),
}

fn br(a: &Br, b: &Br) -> Br {
    Br::B(Box::new(a.clone()), Box::new(b.clone()))
}

fn deg(t: &Br, d: &[i64]) -> i64 {
    match t {
        Br::L(l) => d[*l as usize],
        Br::B(a, b) => deg(a, d) + deg(b, d),
    }
}

fn trees(n: usize, k: u32) -> Vec<Br> {
    if n == 1 {
        return (0..k).map(Br::L).collect();
    }
    let mut out = Vec::new();
    for i in 1..n {
        for a in trees(i, k) {
            for b in trees(n - i, k) {
                out.push(br(&a, &b));
            }
        }
    }
    out
}

/// Relations applied at one node of t, placed back into the tree.
fn local_relations(t: &Br, d: &[i64]) -> Vec<LinComb<Br>> {
    let mut out = Vec::new();
    if let Br::B(a, b) = t {
        // antisymmetry
        let mut r = LinComb::single(t.clone());
        r.add_term(br(b, a), sign(deg(a, d) * deg(b, d)));
        out.push(r);
        // Jacobi (−1)^{|x||z|}[[x,y],z] + (−1)^{|y||x|}[[y,z],x] + (−1)^{|z||y|}[[z,x],y]
        if let Br::B(x, y) = a.as_ref() {
            let (x, y, z) = (x.as_ref(), y.as_ref(), b.as_ref());
            let (dx, dy, dz) = (deg(x, d), deg(y, d), deg(z, d));
            let mut r = LinComb::zero();
            r.add_term(br(&br(x, y), z), sign(dx * dz));
            r.add_term(br(&br(y, z), x), sign(dy * dx));
            r.add_term(br(&br(z, x), y), sign(dz * dy));
            out.push(r);
        }
        for r in local_relations(a, d) {
            out.push(r.iter().map(|(u, c)| (br(u, b), c.clone())).collect());
        }
        for r in local_relations(b, d) {
            out.push(r.iter().map(|(u, c)| (br(a, u), c.clone())).collect());
        }
    }
    out
}

/// dim Lie(V)_n as bracket monomials modulo antisymmetry and Jacobi.
fn oracle_dim(d: &[i64], n: usize) -> usize {
    let ts = trees(n, d.len() as u32);
    let index: BTreeMap<&Br, usize> = ts.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut rel = Subspace::zero(ts.len());
    for t in &ts {
        for r in local_relations(t, d) {
            let v: SparseVec = r.iter().map(|(u, c)| (index[u], c.clone())).collect::<LinComb<usize>>().iter().map(|(i, c)| (*i, c.clone())).collect();
            rel.insert(v);
        }
    }
    ts.len() - rel.dim()
}

fn alphabet(d: &[i64]) -> Alphabet {
    Alphabet::new((0..d.len()).map(|i| format!("x{i}")).collect(), d.to_vec()).unwrap()
}

#[test]
fn two_even_cogenerators() {
    let a = alphabet(&[0, 0]);
    let dims: Vec<usize> = (1..=3).map(|n| lie_cofree_basis(&a, n).unwrap().len()).collect();
    assert_eq!(dims, vec![oracle_dim(&[0, 0], 1), oracle_dim(&[0, 0], 2), oracle_dim(&[0, 0], 3)]);
    assert_eq!(dims, vec![2, 1, 2]);
}

#[test]
fn single_even_cogenerator_has_no_weight_two() {
    assert_eq!(oracle_dim(&[0], 2), 0);
    assert!(lie_cofree_basis(&alphabet(&[0]), 2).unwrap().is_empty());
}

#[test]
fn cofree_dimensions_match_oracle() {
    for profile in [vec![0, 0], vec![1], vec![0, 1], vec![1, 2], vec![1, 1], vec![0, 0, 0]] {
        let a = alphabet(&profile);
        for n in 1..=4 {
            if profile.len() == 3 && n == 4 {
                continue;
            }
            assert_eq!(lie_cofree_basis(&a, n).unwrap().len(), oracle_dim(&profile, n), "profile {profile:?} weight {n}");
        }
    }
}

fn comm(a: crate::algcog::UnitalAssocAlgebra) -> UnitalCommAlgebra {
    UnitalCommAlgebra::new(a).unwrap()
}

#[test]
fn bar_of_ground_field() {
    let a = comm(ground_field());
    let b = bar_lie(&a, 4).unwrap();
    let c = &b.coalgebra;
    // v ↦ s1 and θ(v) = 1
    let v = b.index_of(&[1]).unwrap();
    let s1 = b.index_of(&[0]).unwrap();
    assert_eq!(c.d_basis(v), &Vector::single(s1));
    assert_eq!(c.theta_basis(v), &Scalar::from_integer(1.into()));
    let r = check_curved_lie(c);
    assert!(r.passed(), "{:?}", r.witness());
}

#[test]
fn bar_of_dual_numbers_is_curved_lie() {
    let a = comm(dual_numbers());
    let b = bar_lie(&a, 4).unwrap();
    let r = check_curved_lie(&b.coalgebra);
    assert!(r.passed(), "{:?}", r.witness());
}

#[test]
fn noncommutative_algebras_are_rejected() {
    // upper triangular 2×2 matrices e11, e12, e22
    let product = BTreeMap::from([
        ((0, 0), Vector::single(0)),
        ((0, 1), Vector::single(1)),
        ((1, 2), Vector::single(1)),
        ((2, 2), Vector::single(2)),
    ]);
    let unit = Vector::from_terms([(0, int(1)), (2, int(1))]);
    let a = crate::algcog::UnitalAssocAlgebra::new(vec!["e11".into(), "e12".into(), "e22".into()], vec![0; 3], product, BTreeMap::new(), unit).unwrap();
    assert!(UnitalCommAlgebra::new(a).is_err());
}

fn abelian(d: &[i64]) -> CurvedLieCoalgebra {
    let n = d.len();
    CurvedLieCoalgebra::new((0..n).map(|i| format!("c{i}")).collect(), d.to_vec(), vec![Tensor2::zero(); n], vec![Vector::zero(); n], vec![int(0); n]).unwrap()
}

#[test]
fn abelian_lie_coalgebra_passes() {
    assert!(check_curved_lie(&abelian(&[0, 1, 2])).passed());
}

#[test]
fn mutated_co_jacobi_fails() {
    let a = comm(dual_numbers());
    let b = bar_lie(&a, 3).unwrap();
    let c = &b.coalgebra;
    // double one of the two antisymmetric pairs in δ of a weight-3 element
    let i = (0..c.dim()).find(|i| c.delta_basis(*i).len() == 4).unwrap();
    let data = c.data();
    let mut delta = data.delta.clone();
    let (k, x) = delta[i].iter().next().map(|(k, x)| (*k, x.clone())).unwrap();
    let (j, l) = k;
    delta[i].add_term(k, x.clone());
    delta[i].add_term((l, j), -(x * sign(data.degrees[j] * data.degrees[l])));
    let bad = CurvedLieCoalgebra::unchecked(data.labels.clone(), data.degrees.clone(), delta, data.d.clone(), data.theta.clone()).unwrap();
    let r = check_curved_lie(&bad);
    assert!(!r.passed());
    assert!(r.failures.iter().any(|f| f.at.starts_with("co-Jacobi")), "{:?}", r.failures);
}

#[test]
fn cobar_of_abelian_has_zero_differential() {
    let c = abelian(&[1, 2]);
    let om = cobar_com(&c, vec![1, 1], 3).unwrap();
    assert!(om.basis().iter().all(|m| om.d_monomial(m).is_zero()));
    // s⁻¹c0 is even, s⁻¹c1 is odd: monomials c0^k c1^e with k + e ≤ 3, e ≤ 1
    assert_eq!(om.basis().len(), 4 + 3);
}

#[test]
fn cobar_of_bar_squares_to_zero() {
    for a in [ground_field(), dual_numbers()] {
        let a = comm(a);
        let b = bar_lie(&a, 3).unwrap();
        let om = cobar_com(&b.coalgebra, b.weights(), 3).unwrap();
        let r = om.check_square_zero();
        assert!(r.passed(), "{:?}", r.witness());
        assert!(om.basis().iter().any(|m| !om.d_monomial(m).is_zero()));
    }
}

#[test]
fn canonical_twisting_passes() {
    for a in [ground_field(), dual_numbers()] {
        let a = comm(a);
        let b = bar_lie(&a, 4).unwrap();
        let t = LieTwisting { source: &b.coalgebra, target: &a, alpha: canonical_lie_twisting(&b, &a) };
        let r = check_lie_twisting(&t).unwrap();
        assert!(r.passed(), "{:?}", r.witness());
        // α = 0 fails at v since θ(v) = 1
        let zero = LieTwisting { source: &b.coalgebra, target: &a, alpha: vec![Vector::zero(); b.coalgebra.dim()] };
        let r = check_lie_twisting(&zero).unwrap();
        assert_eq!(r.witness().unwrap().at, "v");
    }
}

#[test]
fn random_twistings_fail() {
    let a = comm(dual_numbers());
    let b = bar_lie(&a, 3).unwrap();
    let c = &b.coalgebra;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut failed = 0;
    for _ in 0..10 {
        let mut alpha = canonical_lie_twisting(&b, &a);
        let odd: Vec<usize> = (0..c.dim()).filter(|i| c.degree(*i) == 1).collect();
        let i = odd[rng.gen_range(0..odd.len())];
        // x ↦ λx is an automorphism, so a pure rescaling of α(sx) would still twist
        alpha[i].add_term(0, int(rng.gen_range(1..4)));
        alpha[i].add_term(1, int(rng.gen_range(-3..4)));
        let t = LieTwisting { source: c, target: &a, alpha };
        if !check_lie_twisting(&t).unwrap().passed() {
            failed += 1;
        }
    }
    assert_eq!(failed, 10);
}

#[test]
fn twisting_correspondences_round_trip() {
    for a in [ground_field(), dual_numbers()] {
        let a = comm(a);
        let b = bar_lie(&a, 3).unwrap();
        let c = &b.coalgebra;
        let alpha = canonical_lie_twisting(&b, &a);
        // hom(Ω_C C, A)
        let om = cobar_com(c, b.weights(), 3).unwrap();
        let f = twisting_to_algebra_map(&alpha, &om, &a);
        let r = check_algebra_map(&om, &a, &f);
        assert!(r.passed(), "{:?}", r.witness());
        assert_eq!(algebra_map_to_twisting(&om, &f).unwrap(), alpha);
        // hom(C, B_L A): the canonical α corresponds to the identity
        let t = LieTwisting { source: c, target: &a, alpha: alpha.clone() };
        let g = twisting_to_coalgebra_map(&t, &b).unwrap();
        let id: Vec<Vector> = (0..c.dim()).map(Vector::single).collect();
        assert_eq!(g, id);
        let r = check_lie_coalgebra_map(c, c, &g);
        assert!(r.passed(), "{:?}", r.witness());
        assert_eq!(coalgebra_map_to_twisting(&b, &a, &g), alpha);
    }
}

#[test]
fn twisting_from_another_coalgebra() {
    // C = B_L 𝕂 twisting into A = 𝕂[x]/(x²) through the unit map
    let k = comm(ground_field());
    let a = comm(dual_numbers());
    let bk = bar_lie(&k, 3).unwrap();
    let ba = bar_lie(&a, 3).unwrap();
    let alpha: Vec<Vector> = canonical_lie_twisting(&bk, &k);
    let t = LieTwisting { source: &bk.coalgebra, target: &a, alpha: alpha.clone() };
    assert!(check_lie_twisting(&t).unwrap().passed());
    let g = twisting_to_coalgebra_map(&t, &ba).unwrap();
    let r = check_lie_coalgebra_map(&bk.coalgebra, &ba.coalgebra, &g);
    assert!(r.passed(), "{:?}", r.witness());
    assert_eq!(coalgebra_map_to_twisting(&ba, &a, &g), alpha);
    let om = cobar_com(&bk.coalgebra, bk.weights(), 3).unwrap();
    let f = twisting_to_algebra_map(&alpha, &om, &a);
    assert!(check_algebra_map(&om, &a, &f).passed());
}

#[test]
fn suspension_transports_the_two_forms() {
    for a in [ground_field(), dual_numbers()] {
        let a = comm(a);
        let b = bar_lie(&a, 4).unwrap();
        let d = desuspend(&b.coalgebra);
        let r = d.check();
        assert!(r.passed(), "{:?}", r.witness());
        assert_eq!(suspend(&d).unwrap(), b.coalgebra);
        // the opposite sign on δ breaks the curvature identity only
        let flipped = coalgebra::desuspend_with(&b.coalgebra, -DESUSPENSION_SIGN);
        let r = flipped.check();
        assert!(!r.passed());
        assert!(r.failures.iter().all(|f| f.at.starts_with("curvature")), "{:?}", r.failures);
    }
}

