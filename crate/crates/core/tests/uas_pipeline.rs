//! End-to-end runs through the public API on the unital associative operad.

use koszul_core::algcog::{bar_algebra, check_uainf, dual_numbers, truncated_polynomial, UAInfStructure};
use koszul_core::fixtures::{as_presentation, uas_operad, uas_presentation};
use koszul_core::linhom::{frac, int, LinComb};
use koszul_core::nscoop::{check_curved_cooperad, koszul_dual};
use koszul_core::nsoperad::Window;
use koszul_core::opbarcobar::{check_op_twisting, cobar_operad, operad_morphism_to_twisting, twisting_to_operad_morphism, OpTwisting};
use proptest::prelude::*;

#[test]
fn koszul_dual_of_as_has_no_curvature() {
    let k = koszul_dual(&as_presentation(), Window::new(4, 3)).unwrap();
    assert!(k.dual.theta_table().iter().all(|(_, x)| *x == int(0)));
    assert_eq!(k.dual.basis(3, 2).unwrap().len(), 1);
    assert_eq!(k.dual.basis(4, 3).unwrap().len(), 1);
    assert!(check_curved_cooperad(&k.dual).unwrap().passed());
}

#[test]
fn uas_dual_is_a_curved_cooperad_with_cobar_square_zero() {
    let w = Window::new(3, 3);
    let k = koszul_dual(&uas_presentation(), w).unwrap();
    assert!(check_curved_cooperad(&k.dual).unwrap().passed());
    assert!(cobar_operad(&k.dual, w).unwrap().operad.check_square_zero().unwrap().passed());
}

#[test]
fn bar_of_strict_algebras_is_curved() {
    for a in [dual_numbers(), truncated_polynomial(3)] {
        let b = bar_algebra(&a, 3).unwrap();
        assert!(b.check().passed());
        assert!(b.to_coalgebra().unwrap().check().passed());
        assert!(check_uainf(&UAInfStructure::from_algebra(&a), 3).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// (aμ, bξ) is a twisting morphism exactly when ab = 1, and then it round-trips.
    #[test]
    fn scaled_kappa(an in -6i64..=6, ad in 1i64..=6, bn in -6i64..=6, bd in 1i64..=6) {
        prop_assume!(an != 0 && bn != 0);
        let (a, b) = (frac(an, ad), frac(bn, bd));
        let w = Window::new(3, 3);
        let k = koszul_dual(&uas_presentation(), w).unwrap();
        let p = uas_operad(Window::new(5, 6)).unwrap();
        let g = k.dual.cogens();
        let pg = p.generators();
        let alpha = [("smu", "mu", a.clone()), ("sxi", "xi", b.clone())]
            .into_iter()
            .map(|(x, y, c)| (g.parse(x).unwrap(), LinComb::term(pg.parse(y).unwrap(), c)))
            .collect();
        let t = OpTwisting::new(&k.dual, &p, alpha).unwrap();
        let twisting = check_op_twisting(&t).unwrap().passed();
        prop_assert_eq!(twisting, &a * &b == int(1));
        if twisting {
            let om = cobar_operad(&k.dual, w).unwrap();
            let f = twisting_to_operad_morphism(&t, &om).unwrap();
            prop_assert_eq!(operad_morphism_to_twisting(&f, &k.dual, &om, &p).unwrap().alpha, t.alpha);
        }
    }
}
