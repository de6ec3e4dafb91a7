use g2cm::curve::{enumerate_by_brute_force, GenusTwoCurve, Jacobian, MumfordDivisor};
use g2cm::zeta;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_table(jac: &Jacobian, elems: &[MumfordDivisor]) {
    let id = jac.identity();
    for a in elems {
        assert_eq!(&jac.add(a, &id), a);
        assert!(jac.add(a, &jac.neg(a)).is_identity());
        for b in elems {
            let ab = jac.add(a, b);
            assert_eq!(ab, jac.add(b, a));
            assert!(jac.is_valid(&ab));
            for c in elems {
                assert_eq!(jac.add(&ab, c), jac.add(a, &jac.add(b, c)));
            }
        }
    }
}

#[test]
fn group_tables_over_small_fields() {
    for (p, f) in [(7u64, [1i64, 0, 0, 0, 0]), (5, [3, 1, 0, 0, 0]), (3, [1, 2, 0, 0, 0])] {
        let c = GenusTwoCurve::from_lower_coeffs(p, &f).unwrap();
        let jac = c.jacobian(1).unwrap();
        let elems = jac.enumerate(47).unwrap();
        let w = zeta::weil_polynomial(&c).unwrap();
        assert_eq!(BigInt::from(elems.len()), w.at_one(), "p = {p}");
        assert_eq!(enumerate_by_brute_force(&jac, 47).unwrap().len(), elems.len());
        check_table(&jac, &elems);
    }
}

/// `P(φ) = 0` on J(F_{p^n}): `φ^4 - a1 φ^3 + a2 φ^2 - p a1 φ + p^2 = 0`.
#[test]
fn frobenius_satisfies_weil_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, f, n) in [
        (7u64, vec![1i64, 0, 0, 0, 0], 3usize),
        (31, vec![8, 0, 0, 0, 0], 2),
        (13, vec![2, 9, 7, 3, 1, 1], 4),
    ] {
        let c = if f.len() == 5 {
            GenusTwoCurve::from_lower_coeffs(p, &f).unwrap()
        } else {
            GenusTwoCurve::new(p, &f).unwrap()
        };
        let w = zeta::weil_polynomial(&c).unwrap();
        let jac = c.jacobian(n).unwrap();
        for _ in 0..20 {
            let x = jac.random_divisor(&mut rng).unwrap();
            let f1 = jac.frobenius(&x);
            let f2 = jac.frobenius(&f1);
            let f3 = jac.frobenius(&f2);
            let f4 = jac.frobenius(&f3);
            let pi = p as i64;
            let terms = [
                f4.clone(),
                jac.mul_i64(&f3, -w.a1),
                jac.mul_i64(&f2, w.a2),
                jac.mul_i64(&f1, -pi * w.a1),
                jac.mul_i64(&x, pi * pi),
            ];
            let sum = terms.iter().fold(jac.identity(), |acc, t| jac.add(&acc, t));
            assert!(sum.is_identity(), "p = {p}, n = {n}");
            // and |J(F_{p^n})| kills everything
            let order = zeta::jacobian_order(&w, n as u64);
            assert!(jac.mul_big(&x, &order).is_identity());
        }
    }
}
