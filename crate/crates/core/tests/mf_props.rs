use proptest::prelude::*;

use umf_core::cohomwin::{self, Window};
use umf_core::mfcore::{double, search_factorizations, verify_mf, Adjunction, HomotopyWitness, Morphism, UngradedMF};
use umf_core::ringpoly::Exponents;
use umf_core::rp2::{AnCorpus, Rp2Context};
use umf_core::sample;
use umf_core::suite::adjunction_round_trip;
use umf_core::{Exec, FieldSpec, Ring, RingMatrix, RingPoly};

fn rp2() -> Rp2Context {
    Rp2Context::new(&FieldSpec::gf2()).unwrap()
}

fn random_end(x: &UngradedMF, seed: u64, d: u32) -> Morphism {
    let win = Window::symmetric(x.ring(), d);
    let m = sample::random_matrix(x.ring(), x.size(), x.size(), &win, 0.2, &mut sample::rng(seed));
    Morphism::new(x, x, m).unwrap()
}

fn a1() -> UngradedMF {
    let ring = Ring::polynomial(FieldSpec::gf2(), &["x", "y"]).unwrap();
    UngradedMF::new(
        RingPoly::parse("x^2 + y^2", &ring).unwrap(),
        RingMatrix::parse("x, y; y, x", &ring).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn differential_squares_to_zero(s in any::<u64>()) {
        let ctx = rp2();
        let f = random_end(ctx.mf(), s, 2);
        prop_assert!(f.differential().differential().matrix().is_zero());
        prop_assert!(f.differential().is_closed());
    }

    #[test]
    fn differential_is_a_derivation(s in any::<u64>()) {
        let ctx = rp2();
        let (f, g) = (random_end(ctx.mf(), s, 1), random_end(ctx.mf(), s ^ 3, 1));
        let lhs = f.compose(&g).unwrap().differential();
        let rhs = f.differential().compose(&g).unwrap().add(&f.compose(&g.differential()).unwrap()).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn witnesses_reverify(s in any::<u64>()) {
        let ctx = rp2();
        let g = random_end(ctx.mf(), s, 2);
        let w = HomotopyWitness::new(g.differential(), g.matrix().clone()).unwrap();
        prop_assert!(w.verify());
        let off = g.differential().add(&Morphism::identity(ctx.mf())).unwrap();
        prop_assert!(HomotopyWitness::new(off, g.matrix().clone()).is_err());
    }

    #[test]
    fn jacobian_action(s in any::<u64>(), i in 0usize..2) {
        let ctx = rp2();
        let f = random_end(ctx.mf(), s, 1).differential();
        let w = f.jacobian_action_witness(i).unwrap();
        prop_assert!(w.verify());
    }

    #[test]
    fn adjunctions(s in any::<u64>()) {
        let y = a1();
        let x = double(&y);
        let fx = x.forget();
        let win = Window::symmetric(y.ring(), 2);
        let mut rng = sample::rng(s);
        let left = Morphism::new(&fx, &y, sample::random_matrix(y.ring(), 2, 4, &win, 0.3, &mut rng)).unwrap();
        let right = Morphism::new(&y, &fx, sample::random_matrix(y.ring(), 4, 2, &win, 0.3, &mut rng)).unwrap();
        prop_assert!(adjunction_round_trip(Adjunction::ForgetLeft, &x, &y, &left).unwrap());
        prop_assert!(adjunction_round_trip(Adjunction::ForgetRight, &x, &y, &right).unwrap());
    }

    #[test]
    fn exact_classes_vanish_locally(s in any::<u64>(), a in 1u32..4, b in 1u32..4) {
        let ctx = rp2();
        let gf4 = FieldSpec::gf4();
        let f = random_end(ctx.mf(), s, 1).differential();
        let pt = vec![gf4.elem(a).unwrap(), gf4.elem(b).unwrap()];
        let rep = cohomwin::certify_at_point(ctx.mf(), ctx.mf(), &pt, &[f]).unwrap();
        prop_assert!(rep.nonexact_classes().is_empty());
    }

    #[test]
    fn exactness_solver_finds_witnesses(s in any::<u64>()) {
        let ctx = rp2();
        let g = random_end(ctx.mf(), s, 1);
        let w = cohomwin::solve_exactness(&g.differential(), &Window::symmetric(ctx.ring(), 1)).unwrap();
        prop_assert!(w.is_some_and(|w| w.verify()));
    }
}

#[test]
fn window_complex_squares_to_zero() {
    let ctx = rp2();
    let x = ctx.mf();
    let b = Window::symmetric(ctx.ring(), 2);
    let mid = cohomwin::image_window(x, x, &b);
    let out = cohomwin::image_window(x, x, &mid);
    let d1 = cohomwin::delta_as_field_matrix(x, x, &b, &mid).unwrap();
    let d2 = cohomwin::delta_as_field_matrix(x, x, &mid, &out).unwrap();
    assert!(d2.mul(&d1).unwrap().is_zero());
}

#[test]
fn identity_is_not_exact_in_windows() {
    let ctx = rp2();
    let id = Morphism::identity(ctx.mf());
    for d in 1..=3 {
        assert!(cohomwin::solve_exactness(&id, &Window::symmetric(ctx.ring(), d))
            .unwrap()
            .is_none());
    }
}

#[test]
fn search_outputs_verify() {
    let ring = Ring::polynomial(FieldSpec::gf2(), &["x", "y"]).unwrap();
    let support: Vec<Exponents> = [[1, 0], [0, 1], [0, 0]]
        .iter()
        .map(|e| Exponents::from_slice(e))
        .collect();
    for w in ["x^2 + y^2", "x*y", "x^2 + x*y + 1", "x^2"] {
        let w = RingPoly::parse(w, &ring).unwrap();
        for size in 1..=2 {
            let serial = search_factorizations(&w, size, &support, 24, Exec::Serial).unwrap();
            let parallel = search_factorizations(&w, size, &support, 24, Exec::Parallel).unwrap();
            assert_eq!(serial, parallel);
            for q in &serial {
                assert!(verify_mf(q, &w).unwrap().ok);
            }
        }
    }
}

#[test]
fn corpus_doubles_verify() {
    for n in 1..=4 {
        let an = AnCorpus::new(&FieldSpec::gf2(), n).unwrap();
        for x in [&an.q, &an.r] {
            let d = double(x);
            assert!(verify_mf(d.forget().matrix(), x.potential()).unwrap().ok);
            assert_eq!(d.q0(), x.matrix());
            assert_eq!(d.q1(), x.matrix());
        }
    }
}
