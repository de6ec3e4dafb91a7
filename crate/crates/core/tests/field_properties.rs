use g2cm::ff::{build_extension, FieldDescriptor};
use num_bigint::BigUint;
use proptest::prelude::*;

fn fields() -> Vec<FieldDescriptor> {
    vec![
        build_extension(7, 1).unwrap(),
        build_extension(7, 2).unwrap(),
        build_extension(3, 5).unwrap(),
        build_extension(31, 3).unwrap(),
        build_extension(11, 10).unwrap(),
    ]
}

fn element(f: &FieldDescriptor, seed: &[u64]) -> g2cm::ff::FieldElement {
    let p = f.characteristic();
    let coeffs: Vec<u64> = seed.iter().take(f.degree()).map(|c| c % p).collect();
    f.from_coeffs(&coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn ring_axioms(
        idx in 0usize..5,
        a in prop::collection::vec(any::<u64>(), 10),
        b in prop::collection::vec(any::<u64>(), 10),
        c in prop::collection::vec(any::<u64>(), 10),
    ) {
        let f = &fields()[idx];
        let (x, y, z) = (element(f, &a), element(f, &b), element(f, &c));
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if !x.is_zero() {
            let inv = x.inv().unwrap();
            prop_assert!((&x * &inv).is_one());
            prop_assert!(x.pow(&f.unit_group_order()).is_one());
        }
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(
        idx in 0usize..5,
        a in prop::collection::vec(any::<u64>(), 10),
        b in prop::collection::vec(any::<u64>(), 10),
    ) {
        let f = &fields()[idx];
        let (x, y) = (element(f, &a), element(f, &b));
        prop_assert_eq!((&x + &y).frobenius(), &x.frobenius() + &y.frobenius());
        prop_assert_eq!((&x * &y).frobenius(), &x.frobenius() * &y.frobenius());
        prop_assert_eq!(x.frobenius(), x.pow(&BigUint::from(f.characteristic())));
        prop_assert_eq!(x.frobenius_pow(f.degree()), x);
    }

    #[test]
    fn square_roots_square_back(idx in 0usize..5, a in prop::collection::vec(any::<u64>(), 10)) {
        let f = &fields()[idx];
        let x = element(f, &a);
        let s = x.square();
        let r = s.sqrt().expect("a square has a root");
        prop_assert_eq!(r.square(), s);
        prop_assert_eq!(x.is_square(), x.sqrt().is_some());
    }
}
