use g2cm::curve::{GenusTwoCurve, Jacobian, MumfordDivisor};
use g2cm::ff;
use g2cm::torsion;
use g2cm::zeta::{self, WeilPolynomial};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pairing-free lower bound: finds two points of order ℓ in J(F_{p^m}) that
/// generate a subgroup of order ℓ^2, starting from a point over F_p.
fn two_independent_points(
    c: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(MumfordDivisor, MumfordDivisor)> {
    let base = c.jacobian(1).unwrap();
    let jac: Jacobian = c.jacobian(m).unwrap();
    let q1 = jac.lift(&torsion::torsion_point(&base, w, ell, rng).unwrap()).unwrap();
    let multiples: Vec<MumfordDivisor> = (0..ell).map(|j| jac.mul_u64(&q1, j)).collect();
    let n = zeta::jacobian_order(w, m as u64);
    let v = ff::valuation(&n, ell);
    let cofactor = &n / BigUint::from(ell).pow(v);
    for _ in 0..200 {
        let mut h = jac.mul_big(&jac.random_divisor(rng).unwrap(), &cofactor);
        if h.is_identity() {
            continue;
        }
        loop {
            let next = jac.mul_u64(&h, ell);
            if next.is_identity() {
                break;
            }
            h = next;
        }
        if !multiples.contains(&h) {
            return Some((q1, h));
        }
    }
    None
}

#[test]
fn quadratic_twist_adds_a_direction_over_f_p2() {
    // Frobenius mod 11 has eigenvalues {1, 9, -1, 2}; over F_{31^2} both the
    // 1- and the (-1)-eigenlines are rational although 11 does not divide
    // 31^2 - 1.
    let c = GenusTwoCurve::from_lower_coeffs(31, &[8, 0, 0, 0, 0]).unwrap();
    let w = zeta::weil_polynomial(&c).unwrap();
    assert_ne!((31u64 * 31 - 1) % 11, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (q1, q2) = two_independent_points(&c, &w, 11, 2, &mut rng).expect("second direction");
    let jac = c.jacobian(2).unwrap();
    assert!(jac.mul_u64(&q1, 11).is_identity());
    assert!(jac.mul_u64(&q2, 11).is_identity());
    // q2 - φ(q2) is a nonzero point of the twist part, where φ acts as -1
    let t = jac.sub(&q2, &jac.frobenius(&q2));
    assert!(!t.is_identity());
    assert_eq!(jac.frobenius(&t), jac.neg(&t));
    assert_eq!(jac.frobenius(&q1), q1);
}

#[test]
fn base_field_torsion_is_cyclic_when_ell_does_not_divide_p_minus_1() {
    let c = GenusTwoCurve::from_lower_coeffs(31, &[8, 0, 0, 0, 0]).unwrap();
    let w = zeta::weil_polynomial(&c).unwrap();
    let jac = c.jacobian(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let p = torsion::torsion_point(&jac, &w, 11, &mut rng).unwrap();
    let line: Vec<MumfordDivisor> = (0..11).map(|j| jac.mul_u64(&p, j)).collect();
    // v_11(|J(F_31)|) = 1, so every 11-torsion point is on one line
    assert_eq!(ff::valuation(&zeta::jacobian_order(&w, 1), 11), 1);
    for _ in 0..20 {
        let q = torsion::torsion_point(&jac, &w, 11, &mut rng).unwrap();
        assert!(line.contains(&q));
    }
}

#[test]
fn measured_kappa_matches_weil_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (p, f, ell) in [(13u64, vec![2i64, 9, 7, 3, 1, 1], 7u64), (31, vec![18, 28, 25, 26, 27, 1], 11)] {
        let c = GenusTwoCurve::new(p, &f).unwrap();
        let w = zeta::weil_polynomial(&c).unwrap();
        let kappa = torsion::full_embedding_degree(&w, ell, 64).unwrap();
        let cands: Vec<usize> = (1..=kappa as usize).collect();
        let measured = torsion::measured_full_embedding_degree(&c, &w, ell, &cands, &mut rng).unwrap();
        assert_eq!(measured as u64, kappa);
    }
}
