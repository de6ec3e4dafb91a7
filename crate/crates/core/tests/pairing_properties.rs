use g2cm::curve::GenusTwoCurve;
use g2cm::harness::{analyze_instance, pairing_axioms};
use g2cm::zeta;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(p: u64, f: &[i64], ell: u64, seed: u64) -> (g2cm::harness::Analysis, ChaCha8Rng) {
    let c = GenusTwoCurve::new(p, f).unwrap();
    let w = zeta::weil_polynomial(&c).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = analyze_instance(&c, &w, ell, 64, &mut rng).unwrap().unwrap();
    (a, rng)
}

#[test]
fn weil_and_tate_axioms_hold() {
    let (a, mut rng) = setup(31, &[18, 28, 25, 26, 27, 1], 11, 1);
    let rep = pairing_axioms(&a.basis, 40, &mut rng).unwrap();
    assert!(rep.all_passed(), "{rep:?}");
}

/// The reduced Tate pairing is a homomorphism in its second argument, which
/// only holds if Miller values at sums of divisors multiply correctly.
#[test]
fn tate_is_linear_in_the_second_argument() {
    let (a, mut rng) = setup(13, &[2, 9, 7, 3, 1, 1], 7, 2);
    let ctx = a.basis.context();
    let jac = a.basis.jacobian();
    for _ in 0..20 {
        let x = a.basis.combine(&[1, 2, 3, 4]);
        let y1 = jac.random_divisor(&mut rng).unwrap();
        let y2 = jac.random_divisor(&mut rng).unwrap();
        let lhs = ctx.tate(&x, &jac.add(&y1, &y2), &mut rng).unwrap();
        let rhs = &ctx.tate(&x, &y1, &mut rng).unwrap() * &ctx.tate(&x, &y2, &mut rng).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn weil_gram_is_alternating_and_nonsingular() {
    let (a, _) = setup(13, &[2, 9, 7, 3, 1, 1], 7, 3);
    let g = &a.basis.gram;
    assert_eq!(g.rank(), 4);
    for i in 0..4 {
        assert_eq!(g.get(i, i), 0);
        for j in 0..4 {
            assert_eq!((g.get(i, j) + g.get(j, i)) % 7, 0);
        }
    }
}
