use criterion::{black_box, criterion_group, criterion_main, Criterion};
use koszul_core::algcog::{counit_graded_qiso, dual_numbers, Alphabet};
use koszul_core::cocom::{decompose, two_atom_example};
use koszul_core::fixtures::{uas_operad, uas_presentation};
use koszul_core::liecom::{bar_lie, lie_cofree_basis, UnitalCommAlgebra};
use koszul_core::nscoop::koszul_dual;
use koszul_core::nsoperad::Window;
use koszul_core::opbarcobar::{bar_operad, cobar_operad};

fn operads(c: &mut Criterion) {
    let p = uas_presentation();
    c.bench_function("koszul_dual uAs (4,4)", |b| b.iter(|| koszul_dual(black_box(&p), Window::new(4, 4)).unwrap()));
    let k = koszul_dual(&p, Window::new(4, 4)).unwrap();
    c.bench_function("cobar uAs¡ d² (4,4)", |b| {
        b.iter(|| {
            let om = cobar_operad(&k.dual, Window::new(4, 4)).unwrap();
            assert!(om.operad.check_square_zero().unwrap().passed());
        })
    });
    let op = uas_operad(Window::new(5, 6)).unwrap();
    c.bench_function("bar uAs curvature (3,3)", |b| {
        b.iter(|| {
            let bar = bar_operad(&op, Window::new(3, 3)).unwrap();
            assert!(bar.coop.check_curved().unwrap().passed());
        })
    });
}

fn algebras(c: &mut Criterion) {
    let a = dual_numbers();
    c.bench_function("counit qiso K[x]/(x^2) len 3", |b| b.iter(|| counit_graded_qiso(black_box(&a), 3, 0..=3).unwrap()));
    let ua = UnitalCommAlgebra::new(dual_numbers()).unwrap();
    c.bench_function("bar_lie K[x]/(x^2) weight 4", |b| b.iter(|| bar_lie(black_box(&ua), 4).unwrap()));
    let alphabet = Alphabet::new(vec!["x".into(), "y".into(), "z".into()], vec![0, 1, 0]).unwrap();
    c.bench_function("lie_cofree_basis 3 letters weight 5", |b| b.iter(|| lie_cofree_basis(black_box(&alphabet), 5).unwrap()));
    let two = two_atom_example();
    c.bench_function("decompose two-atom coalgebra", |b| b.iter(|| decompose(black_box(&two)).unwrap()));
}

criterion_group!(benches, operads, algebras);
criterion_main!(benches);
