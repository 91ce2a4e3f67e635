use num::One;

use super::*;
use crate::linhom::{LinComb, Scalar};
use crate::nsoperad::{Tree, Window};
use crate::opbarcobar::bar_operad;

fn chain(bar: &crate::opbarcobar::BarConstruction<usize>, n: usize, w: &[u32]) -> Tree {
    let mut nodes: Vec<_> = w
        .iter()
        .map(|l| if *l as usize == n { bar.v } else { bar.s(&(*l as usize)).unwrap().nodes()[0] })
        .collect();
    nodes.push(crate::nsoperad::Symbol::leaf());
    Tree::from_nodes(nodes).unwrap()
}

#[test]
fn bar_algebra_matches_operadic_bar_of_arity_one_operad() {
    for a in [ground_field(), dual_numbers(), truncated_polynomial(3)] {
        let w = 3;
        let words = bar_algebra(&a, w).unwrap();
        let op = ArityOneOperad { algebra: &a };
        let bar = bar_operad(&op, Window::new(1, w)).unwrap();
        let n = a.dim();
        for word in words.alphabet().words_up_to(w) {
            let t = chain(&bar, n, &word);
            let expected = bar.coop.d(&LinComb::single(t.clone()));
            let got: LinComb<Tree> = words.d_word(&word).iter().map(|(u, c)| (chain(&bar, n, u), c.clone())).collect();
            assert_eq!(got, expected, "at {}", words.alphabet().show(&word));
            assert_eq!(bar.coop.theta_tree(&t), words.theta(&LinComb::single(word.clone())));
        }
    }
}

#[test]
fn bar_algebra_is_curved_coalgebra() {
    let b = bar_algebra(&dual_numbers(), 4).unwrap();
    assert!(b.check().passed());
    let c = b.to_coalgebra().unwrap();
    assert!(c.check().passed());
    // F_n = words of length ≤ n + 1
    let f = c.coradical_filtration().unwrap();
    assert_eq!(f.num_levels(), 4);
    for n in 0..4 {
        let dim: usize = f.space.degrees().map(|d| f.level(n, d).dim()).sum();
        let expected: usize = (1..=n + 1).map(|k| 3usize.pow(k as u32)).sum();
        assert_eq!(dim, expected);
    }
    f.check_admissible().unwrap();
    assert!(c.check_coradical_decomposition().unwrap().passed());
}

#[test]
fn bar_of_ground_field_words() {
    let b = bar_algebra(&ground_field(), 4).unwrap();
    assert_eq!(b.alphabet().len(), 2);
    assert_eq!(b.alphabet().words(4).len(), 16);
    assert!(b.check().passed());
}

#[test]
fn wrong_curvature_sign_is_caught() {
    let b = bar_algebra(&ground_field(), 3).unwrap();
    let theta = std::collections::BTreeMap::from([(1u32, -Scalar::one())]);
    let bad = CofreeCurvedCoalgebra::new(b.alphabet().clone(), 3, b.phi_table().clone(), theta).unwrap();
    assert!(!bad.check().passed());
    let c = bad.to_coalgebra().unwrap();
    let n = c.dim();
    let err = CurvedCoalgebra::new(
        c.labels().to_vec(),
        c.degrees().to_vec(),
        (0..n).map(|i| c.delta_basis(i).clone()).collect(),
        (0..n).map(|i| c.d_basis(i).clone()).collect(),
        (0..n).map(|i| c.theta_basis(i).clone()).collect(),
    );
    assert!(matches!(err, Err(crate::Error::CurvatureMismatch(_))));
}

#[test]
fn strict_algebra_is_uainf() {
    for a in [ground_field(), dual_numbers(), truncated_polynomial(3)] {
        let s = UAInfStructure::from_algebra(&a);
        assert!(check_uainf(&s, 4).unwrap().passed());
        assert_eq!(s.unit(), *a.unit());
    }
}

#[test]
fn associator_is_the_residual_without_gamma3() {
    let s = examples::nonassociative_ainf().unwrap();
    let v = check_uainf(&s, 4).unwrap();
    assert!(v.passed(), "{:?}", v.witness());
    let broken = s.without_arity(3);
    let c = broken.to_coalgebra(3).unwrap();
    let r = uainf_residual(&broken, &c, &[1, 1, 1]);
    // (pp)p − p(pp) = r, suspended
    assert_eq!(r, LinComb::single(3u32));
    let v = check_uainf(&broken, 3).unwrap();
    assert_eq!(v.failures.len(), 1);
    assert_eq!(v.witness().unwrap().at, "uA∞ relation at [sp sp sp]");
}

#[test]
fn homotopy_unital_example_passes() {
    let s = examples::homotopy_unital().unwrap();
    let v = check_uainf(&s, 4).unwrap();
    assert!(v.passed(), "{:?}", v.witness());
    // the homotopies are needed
    let strict_unit = s.with_component(vec![s.v(), 0], Vector::zero()).unwrap();
    assert!(!check_uainf(&strict_unit, 2).unwrap().passed());
    // the structure read back from its coalgebra is the same
    let c = s.to_coalgebra(4).unwrap();
    assert!(c.check().passed());
    assert_eq!(UAInfStructure::from_coalgebra(&c).unwrap(), s);
}

#[test]
fn cobar_of_bar_squares_to_zero() {
    for a in [ground_field(), dual_numbers()] {
        let omega = cobar_bar(&a, 3).unwrap();
        let v = omega.check_square_zero();
        assert!(v.passed(), "{:?}", v.witness());
    }
}

#[test]
fn counit_is_graded_quasi_iso() {
    for a in [ground_field(), dual_numbers()] {
        let r = counit_graded_qiso(&a, 3, 0..=3).unwrap();
        assert!(r.verdict, "{:?}", r.failing());
        // G_1 carries A/𝕂1 in homology
        let g1: usize = r.pieces.iter().filter(|p| p.piece == 1).map(|p| p.betti_source).sum();
        assert_eq!(g1, a.dim() - 1);
    }
}

#[test]
fn cobar_of_bar_of_ground_field_is_acyclic_above_degree_zero() {
    // Ω_u B_c 𝕂 ≃ 𝕂, and in each weight the truncation is a subcomplex
    let omega = cobar_bar(&ground_field(), 3).unwrap();
    let h = omega.complex().unwrap().betti_numbers().unwrap();
    assert_eq!(h.get(&0), Some(&1));
    assert!(h.iter().filter(|(d, _)| **d != 0).all(|(_, b)| *b == 0));
}

#[test]
fn koszul_complex_of_uas_is_acyclic() {
    let r = koszul_complex_check(&crate::fixtures::uas_presentation(), Window::new(2, 3)).unwrap();
    for p in &r.pieces {
        assert!(p.ok, "{p:?}");
    }
}

#[test]
fn flipped_koszul_sign_breaks_acyclicity() {
    let k = KoszulComplex::new(&crate::fixtures::uas_presentation(), Window::new(2, 3), KoszulVariant::FlipLastInput).unwrap();
    assert!(!k.check().unwrap().acyclic);
}


mod twisted_constructions {
    use super::*;
    use crate::fixtures::{uas_operad, uas_presentation};
    use crate::nscoop::koszul_dual;
    use crate::opbarcobar::canonical_kappa;

    #[test]
    fn bar_kappa_is_curved() {
        let k = koszul_dual(&uas_presentation(), Window::new(2, 4)).unwrap();
        let p = uas_operad(Window::new(6, 6)).unwrap();
        let kappa = canonical_kappa(&k, &p).unwrap();
        for a in [ground_field(), dual_numbers()] {
            let ua = UasAlgebra::new(&a, &p).unwrap();
            let b = bar_alpha(&kappa, &ua, 4).unwrap();
            let v = b.check_curved().unwrap();
            assert!(v.passed(), "{:?}", v.witness());
            let phi = AlgTwisting { alpha: &kappa, source: &b, target: &ua, phi: bar_projection(&b) };
            let v = check_alg_twisting(&phi).unwrap();
            assert!(v.passed(), "{:?}", v.witness());
        }
    }

    #[test]
    fn cobar_kappa_of_bar_kappa_squares_to_zero() {
        let k = koszul_dual(&uas_presentation(), Window::new(2, 4)).unwrap();
        let p = uas_operad(Window::new(6, 6)).unwrap();
        let kappa = canonical_kappa(&k, &p).unwrap();
        let a = dual_numbers();
        let ua = UasAlgebra::new(&a, &p).unwrap();
        let b = bar_alpha(&kappa, &ua, 5).unwrap();
        let om = cobar_alpha(&kappa, &b, 2).unwrap();
        let nonzero = (0..om.basis().len()).filter(|i| !om.d(*i).unwrap().is_zero()).count();
        assert!(nonzero > om.basis().len() / 2);
        let v = om.check_square_zero().unwrap();
        assert!(v.passed(), "{:?}", v.witness());
    }
}

#[test]
fn bar_kappa_translates_to_bar_algebra() {
    use crate::fixtures::{uas_operad, uas_presentation};
    let k = crate::nscoop::koszul_dual(&uas_presentation(), Window::new(2, 5)).unwrap();
    let p = uas_operad(Window::new(8, 6)).unwrap();
    let kappa = crate::opbarcobar::canonical_kappa(&k, &p).unwrap();
    for a in [ground_field(), dual_numbers(), truncated_polynomial(3)] {
        compare_bar_kappa_with_bar_algebra(&kappa, &a, 3).unwrap();
    }
    // the other sign of d is rejected by the comparison
    let a = ground_field();
    let ua = UasAlgebra::new(&a, &p).unwrap();
    let bk = bar_alpha(&kappa, &ua, 5).unwrap();
    let flipped = TranslationSigns { d: true, ..UAS_TRANSLATION };
    let c = uas_coalgebra_to_curved(&bk, flipped).unwrap();
    assert!(c.check().passed());
    let sxi = k.dual.cogens().parse("sxi").unwrap();
    let g: Vec<LinComb<u32>> = bk.basis().iter().map(|(t, w)| if t.is_trivial() { LinComb::single(w[0] as u32) } else if *t == sxi { LinComb::single(1) } else { LinComb::zero() }).collect();
    let f = cofree_map(&c, &g, 3);
    assert!(check_cofree_iso(&c, &f, &bar_algebra(&a, 3).unwrap()).is_err());
}

/// 𝕂[x]/(x^n) in the basis e'_j = e_j + Σ_{i>j} m_ij e_i (j ≥ 1), random m.
fn conjugated_polynomial(n: usize, rng: &mut impl rand::Rng) -> UnitalAssocAlgebra {
    use std::collections::BTreeMap;
    let a = truncated_polynomial(n);
    let mut cols: Vec<Vector> = (0..n).map(Vector::single).collect();
    for j in 1..n {
        for i in j + 1..n {
            cols[j].add_term(i, crate::linhom::int(rng.gen_range(-3..=3)));
        }
    }
    // old basis in terms of the new one, by back substitution
    let mut inv: Vec<Vector> = vec![Vector::zero(); n];
    for j in (0..n).rev() {
        let mut e = Vector::single(j);
        for (i, c) in cols[j].iter() {
            if *i != j {
                e.add_scaled(&inv[*i], &-c.clone());
            }
        }
        inv[j] = e;
    }
    let mut product = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            let p = a.mul(&cols[x], &cols[y]).map_linear(|i| inv[*i].clone());
            product.insert((x, y), p);
        }
    }
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    UnitalAssocAlgebra::new(labels, vec![0; n], product, BTreeMap::new(), Vector::single(0)).unwrap()
}

#[test]
fn cobar_of_trivial_coalgebra() {
    // zero Δ, zero d, zero θ: Ω_u C is the tensor algebra with d = 0
    let c = CurvedCoalgebra::new(vec!["c".into()], vec![1], vec![Tensor2::zero()], vec![Vector::zero()], vec![Scalar::from_integer(0.into())]).unwrap();
    let om = cobar_coalgebra(&c, vec![1], 3).unwrap();
    assert_eq!(om.basis().len(), 4);
    assert!(om.basis().iter().all(|w| om.d_word(w).is_zero()));
    assert!(om.check_square_zero().passed());
}

#[test]
fn curvature_becomes_a_constant_term() {
    // one primitive element v of degree 2 with θ(v) = 1: d(s⁻¹v) = 1
    let c = CurvedCoalgebra::new(vec!["v".into()], vec![2], vec![Tensor2::zero()], vec![Vector::zero()], vec![Scalar::one()]).unwrap();
    let om = cobar_coalgebra(&c, vec![1], 2).unwrap();
    assert_eq!(om.d_gen(0), LinComb::single(vec![]));
    // d(s⁻¹v s⁻¹v) = s⁻¹v − s⁻¹v = 0 since |s⁻¹v| = 1
    assert!(om.d_word(&[0, 0]).is_zero());
    assert!(om.check_square_zero().passed());
}

#[test]
fn primitive_coalgebra_has_one_filtration_level() {
    let c = CurvedCoalgebra::new(
        vec!["a".into(), "b".into()],
        vec![0, 1],
        vec![Tensor2::zero(), Tensor2::zero()],
        vec![Vector::zero(), Vector::single(0)],
        vec![Scalar::from_integer(0.into()); 2],
    )
    .unwrap();
    let f = c.coradical_filtration().unwrap();
    assert_eq!(f.num_levels(), 1);
    let dim: usize = f.space.degrees().map(|d| f.level(0, d).dim()).sum();
    assert_eq!(dim, 2);
}

#[test]
fn random_bases_keep_twisted_cobar_square_zero() {
    use crate::fixtures::{uas_operad, uas_presentation};
    use rand::SeedableRng;
    let k = crate::nscoop::koszul_dual(&uas_presentation(), Window::new(2, 4)).unwrap();
    let p = uas_operad(Window::new(6, 6)).unwrap();
    let kappa = crate::opbarcobar::canonical_kappa(&k, &p).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2 {
        let a = conjugated_polynomial(3, &mut rng);
        assert!(a.check().passed());
        let ua = UasAlgebra::new(&a, &p).unwrap();
        let b = bar_alpha(&kappa, &ua, 4).unwrap();
        assert!(b.check_curved().unwrap().passed());
        let om = cobar_alpha(&kappa, &b, 2).unwrap();
        let v = om.check_square_zero().unwrap();
        assert!(v.passed(), "{:?}", v.witness());
    }
}

#[test]
fn random_maps_are_not_twisting() {
    use crate::fixtures::{uas_operad, uas_presentation};
    use rand::{Rng, SeedableRng};
    let k = crate::nscoop::koszul_dual(&uas_presentation(), Window::new(2, 4)).unwrap();
    let p = uas_operad(Window::new(6, 6)).unwrap();
    let kappa = crate::opbarcobar::canonical_kappa(&k, &p).unwrap();
    let a = dual_numbers();
    let ua = UasAlgebra::new(&a, &p).unwrap();
    let b = bar_alpha(&kappa, &ua, 4).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut failures = 0;
    for _ in 0..10 {
        let mut phi = bar_projection(&b);
        // perturb φ on a random degree-0 basis element of the bar side
        let zero_deg: Vec<usize> = (0..b.dim()).filter(|i| b.degree(*i) == 0).collect();
        let i = zero_deg[rng.gen_range(0..zero_deg.len())];
        phi[i].add_term(rng.gen_range(0..a.dim()), crate::linhom::int(rng.gen_range(1..=5)));
        let t = AlgTwisting { alpha: &kappa, source: &b, target: &ua, phi };
        if !check_alg_twisting(&t).unwrap().passed() {
            failures += 1;
        }
    }
    assert!(failures >= 8, "only {failures} of 10 perturbations failed");
}
