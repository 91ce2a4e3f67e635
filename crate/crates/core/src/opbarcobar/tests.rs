use std::collections::BTreeMap;

use super::*;
use crate::fixtures::{uas_operad, uas_presentation};
use crate::linhom::{frac, int, LinComb};
use crate::nscoop::koszul_dual;
use crate::nsoperad::{DgOperad, Tree, Window};

#[test]
fn bar_of_uas_is_curved() {
    let p = uas_operad(Window::new(5, 6)).unwrap();
    let b = bar_operad(&p, Window::new(3, 3)).unwrap();
    assert!(b.coop.check_curved().unwrap().passed());
    assert_eq!(b.coop.theta_tree(&Tree::corolla(b.v)), int(1));
}

#[test]
fn bar_window_must_fit() {
    let p = uas_operad(Window::new(3, 4)).unwrap();
    assert!(matches!(bar_operad(&p, Window::new(3, 3)), Err(crate::Error::WindowTooSmall(_))));
}

#[test]
fn cobar_of_uas_dual_squares_to_zero() {
    let k = koszul_dual(&uas_presentation(), Window::new(3, 3)).unwrap();
    let om = cobar_operad(&k.dual, Window::new(3, 3)).unwrap();
    let v = om.operad.check_square_zero().unwrap();
    assert!(v.passed(), "{:?}", v.witness());
    assert!(v.checked > 10);
}

#[test]
fn cobar_of_trivial_cooperad() {
    let c = crate::nscoop::TruncatedCurvedCooperad::cofree(
        crate::nsoperad::GeneratorSet::new(),
        Window::new(3, 3),
        2,
        |_| Ok(LinComb::zero()),
        |_| Ok(num::Zero::zero()),
    )
    .unwrap();
    let om = cobar_operad(&c, Window::new(3, 3)).unwrap();
    assert_eq!(om.operad.dim(1), 1);
    assert_eq!(om.operad.dim(2), 0);
}

fn kappa_a<'a>(k: &'a crate::nscoop::KoszulDualResult, p: &'a crate::nsoperad::TruncatedDgOperad, a: crate::Scalar, b: crate::Scalar) -> OpTwisting<'a, crate::nsoperad::TruncatedDgOperad> {
    let g = k.dual.cogens();
    let pg = p.generators();
    let mut alpha = BTreeMap::new();
    alpha.insert(g.parse("smu").unwrap(), LinComb::term(pg.parse("mu").unwrap(), a));
    alpha.insert(g.parse("sxi").unwrap(), LinComb::term(pg.parse("xi").unwrap(), b));
    OpTwisting::new(&k.dual, p, alpha).unwrap()
}

#[test]
fn kappa_is_twisting_and_round_trips() {
    let k = koszul_dual(&uas_presentation(), Window::new(3, 3)).unwrap();
    let p = uas_operad(Window::new(5, 6)).unwrap();
    let t = kappa_a(&k, &p, int(1), int(1));
    assert!(check_op_twisting(&t).unwrap().passed());
    let om = cobar_operad(&k.dual, Window::new(3, 3)).unwrap();
    let f = twisting_to_operad_morphism(&t, &om).unwrap();
    let back = operad_morphism_to_twisting(&f, &k.dual, &om, &p).unwrap();
    assert_eq!(back.alpha, t.alpha);
    let bar = bar_operad(&p, Window::new(3, 3)).unwrap();
    let fc = twisting_to_coop_morphism(&t, &bar).unwrap();
    let back = coop_morphism_to_twisting(&fc, &k.dual, &bar, &p).unwrap();
    assert_eq!(back.alpha, t.alpha);
}

#[test]
fn off_curve_kappa_fails() {
    let k = koszul_dual(&uas_presentation(), Window::new(3, 3)).unwrap();
    let p = uas_operad(Window::new(5, 6)).unwrap();
    assert!(check_op_twisting(&kappa_a(&k, &p, int(2), int(1))).unwrap().failures.len() >= 2);
    assert!(check_op_twisting(&kappa_a(&k, &p, int(2), frac(1, 2))).unwrap().passed());
    let zero = kappa_a(&k, &p, int(0), int(0));
    assert!(!check_op_twisting(&zero).unwrap().passed());
}

#[test]
fn pi_and_iota_are_twisting() {
    let p = uas_operad(Window::new(5, 6)).unwrap();
    let bar = bar_operad(&p, Window::new(3, 3)).unwrap();
    let pi = canonical_pi(&p, &bar).unwrap();
    let vp = check_op_twisting(&pi).unwrap();
    assert!(vp.passed(), "{:?}", &vp.failures[..vp.failures.len().min(5)]);
    let f = twisting_to_coop_morphism(&pi, &bar).unwrap();
    for (k, img) in &f.images {
        assert_eq!(img, &LinComb::single(k.clone()), "f_π should be the identity");
    }

    let k = koszul_dual(&uas_presentation(), Window::new(3, 3)).unwrap();
    let om = cobar_operad(&k.dual, Window::new(3, 3)).unwrap();
    let iota = canonical_iota(&k.dual, &om).unwrap();
    assert!(check_op_twisting(&iota).unwrap().passed());
    let fi = twisting_to_operad_morphism(&iota, &om).unwrap();
    for n in 0..=3 {
        for t in om.operad.normal_forms(n) {
            assert_eq!(fi.apply_tree(&om.operad, &t).unwrap(), LinComb::single(t.clone()));
        }
    }
    let _ = p.unit();
}
