use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algcog::{truncated_polynomial, Tensor2, Vector};
use crate::error::Error;
use crate::linhom::{frac, int, Scalar, SparseMatrix, Subspace};

fn span(dim: usize, vs: &[Vector]) -> Subspace {
    Subspace::spanned_by(dim, vs.iter().map(|v| v.iter().map(|(i, c)| (*i, c.clone())).collect()))
}

fn same_span(dim: usize, a: &[Vector], b: &[Vector]) -> bool {
    let (x, y) = (span(dim, a), span(dim, b));
    x.dim() == y.dim() && x.is_subspace_of(&y)
}

/// Rewrites C in the basis y_i = Σ_j g[j][i] x_j (g invertible, degree preserving).
fn transport(c: &FinCocomCoalgebra, g: &[Vector]) -> FinCocomCoalgebra {
    let n = c.dim();
    let m = SparseMatrix::from_columns(n, g.iter().map(|v| v.iter().map(|(i, x)| (*i, x.clone())).collect()).collect());
    let inv = |v: &Vector| -> Vector {
        let s = m.solve(&v.iter().map(|(i, x)| (*i, x.clone())).collect()).expect("invertible");
        s.into_iter().collect()
    };
    let mut delta = Vec::new();
    let mut d = Vec::new();
    let mut counit = Vec::new();
    for y in g {
        // Δ(y) in x⊗x, then apply g⁻¹ on both sides
        let dx = c.delta(y);
        let mut rows: BTreeMap<usize, Vector> = BTreeMap::new();
        for ((p, q), t) in &dx {
            rows.entry(*p).or_default().add_term(*q, t.clone());
        }
        let mut half = Tensor2::zero();
        for (p, row) in rows {
            for (q, t) in inv(&row).into_terms() {
                half.add_term((p, q), t);
            }
        }
        let mut cols: BTreeMap<usize, Vector> = BTreeMap::new();
        for ((p, q), t) in &half {
            cols.entry(*q).or_default().add_term(*p, t.clone());
        }
        let mut full = Tensor2::zero();
        for (q, col) in cols {
            for (p, t) in inv(&col).into_terms() {
                full.add_term((p, q), t);
            }
        }
        delta.push(full);
        d.push(inv(&c.d(y)));
        counit.push(c.counit(y));
    }
    let degrees = g.iter().map(|y| c.degree(*y.keys().next().expect("nonzero"))).collect();
    let labels = (0..n).map(|i| format!("y{i}")).collect();
    FinCocomCoalgebra::new(labels, degrees, delta, counit, d).expect("transported coalgebra")
}

/// Random unitriangular basis change mixing only basis elements of equal degree.
fn random_change(c: &FinCocomCoalgebra, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    (0..c.dim())
        .map(|i| {
            let mut v = Vector::single(i);
            for j in 0..i {
                if c.degree(j) == c.degree(i) && rng.gen_bool(0.5) {
                    v.add_term(j, int(rng.gen_range(-3..=3)));
                }
            }
            v
        })
        .collect()
}

#[test]
fn dual_of_ground_field() {
    let a = dualize(&grouplikes(1)).unwrap();
    assert_eq!(a.algebra().mul_basis(0, 0), Vector::single(0));
    assert_eq!(a.algebra().unit(), &Vector::single(0));
}

#[test]
fn dual_of_grouplike_pair_is_a_product() {
    let a = dualize(&grouplikes(2)).unwrap();
    let a = a.algebra();
    assert_eq!(a.mul_basis(0, 0), Vector::single(0));
    assert_eq!(a.mul_basis(1, 1), Vector::single(1));
    assert!(a.mul_basis(0, 1).is_zero());
    assert_eq!(a.unit(), &Vector::from_terms([(0, int(1)), (1, int(1))]));
}

#[test]
fn dual_of_divided_powers_is_dual_numbers() {
    let a = dualize(&divided_power_pair()).unwrap();
    let a = a.algebra();
    assert_eq!(a.mul_basis(0, 1), Vector::single(1));
    assert_eq!(a.mul_basis(1, 0), Vector::single(1));
    assert!(a.mul_basis(1, 1).is_zero());
    assert_eq!(a.product_table(), truncated_polynomial(2).product_table());
}

#[test]
fn dualize_round_trips() {
    for c in [grouplikes(3), two_atom_example(), divided_power_pair(), non_dg_atom(), truncated_polynomial_dual(4), gaussian_dual()] {
        let back = predual(dualize(&c).unwrap().algebra()).unwrap();
        assert_eq!(back, c);
    }
}

#[test]
fn broken_coalgebras_are_rejected() {
    let e = FinCocomCoalgebra::new(vec!["a".into(), "p".into()], vec![0, 0], vec![Tensor2::single((0, 0)), Tensor2::single((0, 1))], vec![int(1), int(0)], vec![Vector::zero(); 2]);
    assert!(matches!(e, Err(Error::Invalid(m)) if m.contains("counit") || m.contains("cocommutativity")));
    let sym = |x: usize, y: usize| Tensor2::from_terms([((x, y), int(1)), ((y, x), int(1))]);
    let mut dp = sym(0, 1);
    dp.add_term((2, 2), int(1));
    let mut dq = sym(0, 2);
    dq.add_term((1, 1), int(1));
    let e = FinCocomCoalgebra::new(vec!["a".into(), "p".into(), "q".into()], vec![0; 3], vec![Tensor2::single((0, 0)), dp, dq], vec![int(1), int(0), int(0)], vec![Vector::zero(); 3]);
    assert!(matches!(e, Err(Error::Invalid(m)) if m.contains("coassociativity")));
}

#[test]
fn rational_roots_of_a_product() {
    // (t − 1)(t + 2)(2t − 3) = 2t³ − t² − 7t + 6
    let poly = [int(6), int(-7), int(-1), int(2)];
    assert_eq!(rational_roots(&poly).unwrap(), vec![int(-2), int(1), frac(3, 2)]);
    assert!(rational_roots(&[int(1), int(0), int(1)]).unwrap().is_empty());
    assert_eq!(rational_roots(&[int(0), int(-1), int(1)]).unwrap(), vec![int(0), int(1)]);
}

#[test]
fn three_grouplikes_split() {
    let c = grouplikes(3);
    let dec = decompose(&c).unwrap();
    assert_eq!(dec.dims(), vec![1, 1, 1]);
    let mut found: Vec<Vector> = dec.components.iter().map(|p| p.atom.clone()).collect();
    found.sort_by_key(|a| *a.keys().next().unwrap());
    assert_eq!(found, (0..3).map(Vector::single).collect::<Vec<_>>());
    assert!(check_decomposition(&c, &dec).unwrap().passed());
}

#[test]
fn two_atom_example_splits_into_the_expected_pieces() {
    let c = two_atom_example();
    let dec = decompose(&c).unwrap();
    assert_eq!(dec.len(), 2);
    let expected: [Vec<Vector>; 2] = [(0..4).map(Vector::single).collect(), (4..8).map(Vector::single).collect()];
    for p in &dec.components {
        assert!(expected.iter().any(|e| same_span(8, e, &p.basis)));
        assert!(p.atom == Vector::single(0) || p.atom == Vector::single(4));
        assert!(p.dg_atom);
        assert!(conilpotency_order(&c, p).unwrap() <= 3);
    }
    let v = check_decomposition(&c, &dec).unwrap();
    assert!(v.passed(), "{:?}", v.witness());
}

#[test]
fn non_split_semisimple_is_reported() {
    assert!(matches!(decompose(&gaussian_dual()), Err(Error::NonSplitSemisimple(_))));
    assert!(matches!(is_irreducible(&gaussian_dual()), Err(Error::NonSplitSemisimple(_))));
}

#[test]
fn irreducibility() {
    assert!(is_irreducible(&grouplikes(1)).unwrap());
    assert!(!is_irreducible(&grouplikes(2)).unwrap());
    assert!(is_irreducible(&truncated_polynomial_dual(3)).unwrap());
    assert!(is_irreducible(&divided_power_pair()).unwrap());
}

#[test]
fn truncated_polynomial_dual_atom() {
    // the augmentation t ↦ 0 of 𝕂[t]/(t³) is the functional dual to 1
    let c = truncated_polynomial_dual(3);
    assert_eq!(atoms(&c).unwrap(), vec![(Vector::single(0), true)]);
}

#[test]
fn closed_and_non_closed_atoms() {
    let found = atoms(&grouplikes(2)).unwrap();
    assert_eq!(found.len(), 2);
    assert!(found.iter().all(|(_, dg)| *dg));
    let c = non_dg_atom();
    assert_eq!(atoms(&c).unwrap(), vec![(Vector::single(0), false)]);
    assert!(check_decomposition(&c, &decompose(&c).unwrap()).unwrap().passed());
}

#[test]
fn decomposition_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = two_atom_example();
    let original = decompose(&c).unwrap();
    for _ in 0..5 {
        let g = random_change(&c, &mut rng);
        let t = transport(&c, &g);
        let dec = decompose(&t).unwrap();
        assert!(check_decomposition(&t, &dec).unwrap().passed());
        // components of t, pushed forward along y ↦ Σ g x, are the original components
        for p in &dec.components {
            let pushed: Vec<Vector> = p.basis.iter().map(|b| b.map_linear(|i| g[*i].clone())).collect();
            assert!(original.components.iter().any(|q| same_span(8, &q.basis, &pushed)));
        }
    }
}

#[test]
fn morphisms_respect_components() {
    let src = two_atom_example();
    let tgt = grouplikes(2);
    let mut images = vec![Vector::zero(); 8];
    images[0] = Vector::single(1);
    images[4] = Vector::single(0);
    let f = CoalgebraMap { images };
    assert!(check_coalgebra_map(&src, &tgt, &f).passed());
    let (ds, dt) = (decompose(&src).unwrap(), decompose(&tgt).unwrap());
    let phi = component_map(&ds, &tgt, &dt, &f).unwrap();
    for (r, s) in phi.iter().enumerate() {
        let image = f.apply(&ds.components[r].atom);
        assert_eq!(image, dt.components[*s].atom);
    }

    let g = CoalgebraMap { images: vec![Vector::single(0), Vector::single(0), Vector::single(1)] };
    let three = grouplikes(3);
    assert!(check_coalgebra_map(&three, &tgt, &g).passed());
    let phi = component_map(&decompose(&three).unwrap(), &tgt, &dt, &g).unwrap();
    assert_eq!(phi.iter().collect::<std::collections::BTreeSet<_>>().len(), 2);

    let bad = CoalgebraMap { images: vec![Vector::from_terms([(0, int(1)), (1, int(1))]), Vector::single(1)] };
    assert!(!check_coalgebra_map(&tgt, &tgt, &bad).passed());
}

#[test]
fn duality_reverses_composition() {
    let f = CoalgebraMap { images: vec![Vector::single(0), Vector::single(0), Vector::single(1)] };
    let g = CoalgebraMap { images: vec![Vector::single(0), Vector::single(0)] };
    let gf = f.compose(&g);
    assert_eq!(gf.dual(1), g.dual(1).compose(&f.dual(2)));
    assert_eq!(f.dual(2).dual(3), f);
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4).prop_map(int)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grouplikes_in_random_bases(k in 1usize..5, seed in 0u64..1000) {
        let c = grouplikes(k);
        let g = random_change(&c, &mut ChaCha8Rng::seed_from_u64(seed));
        let t = transport(&c, &g);
        let dec = decompose(&t).unwrap();
        prop_assert_eq!(dec.len(), k);
        prop_assert!(check_decomposition(&t, &dec).unwrap().passed());
    }

    #[test]
    fn split_quadratics(a in scalar(), b in scalar()) {
        // 𝕂[t]/((t − a)(t − b)) is split, with two factors iff a ≠ b
        let product = BTreeMap::from([
            ((0, 0), Vector::single(0)),
            ((0, 1), Vector::single(1)),
            ((1, 0), Vector::single(1)),
            ((1, 1), Vector::from_terms([(0, -(&a * &b)), (1, &a + &b)])),
        ]);
        let alg = crate::algcog::UnitalAssocAlgebra::new(vec!["1".into(), "t".into()], vec![0, 0], product, BTreeMap::new(), Vector::single(0)).unwrap();
        let c = predual(&alg).unwrap();
        let dec = decompose(&c).unwrap();
        prop_assert_eq!(dec.len(), if a == b { 1 } else { 2 });
        prop_assert!(check_decomposition(&c, &dec).unwrap().passed());
    }
}
