//! Monic integer quartics standing in for the CM field `Q(ω)`: irreducibility,
//! Galois type, discriminant and ramification screening.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{fp_poly, is_prime_u64};
use crate::linalg::det_bigint;
use crate::zeta::WeilPolynomial;

/// Number of unramified primes sampled to separate C4 from D4.
pub const CHEBOTAREV_SAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("not a quartic CM field ({0})")]
    NotAQuarticCMField(GaloisType),
}

/// `X^4 + b X^3 + c X^2 + d X + e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuarticPolynomial {
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaloisType {
    V4,
    /// Cyclic. Decided by sampling factorization patterns, so the label is
    /// probabilistic (a D4 field escapes detection with probability
    /// `(3/4)^50`).
    C4,
    #[serde(rename = "D4_or_NonGalois")]
    D4OrNonGalois,
    NotIrreducible,
    NotCM,
}

impl fmt::Display for GaloisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GaloisType::V4 => "V4",
            GaloisType::C4 => "C4",
            GaloisType::D4OrNonGalois => "D4_or_NonGalois",
            GaloisType::NotIrreducible => "NotIrreducible",
            GaloisType::NotCM => "NotCM",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ramification {
    Unramified,
    Indeterminate,
}

impl QuarticPolynomial {
    pub fn new(b: i64, c: i64, d: i64, e: i64) -> Self {
        QuarticPolynomial {
            b: b.into(),
            c: c.into(),
            d: d.into(),
            e: e.into(),
        }
    }

    /// The Weil polynomial `X^4 - a1 X^3 + a2 X^2 - p a1 X + p^2`.
    pub fn from_weil(w: &WeilPolynomial) -> Self {
        let p = BigInt::from(w.p);
        let a1 = BigInt::from(w.a1);
        QuarticPolynomial {
            b: -a1.clone(),
            c: BigInt::from(w.a2),
            d: -(&p * &a1),
            e: &p * &p,
        }
    }

    /// Coefficients low-to-high, including the leading 1.
    pub fn coeffs(&self) -> [BigInt; 5] {
        [
            self.e.clone(),
            self.d.clone(),
            self.c.clone(),
            self.b.clone(),
            BigInt::one(),
        ]
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs()
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `P(-X)`, which defines the same field.
    pub fn negate_variable(&self) -> Self {
        QuarticPolynomial {
            b: -self.b.clone(),
            c: self.c.clone(),
            d: -self.d.clone(),
            e: self.e.clone(),
        }
    }
}

impl fmt::Display for QuarticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^4")?;
        for (c, m) in [(&self.b, "X^3"), (&self.c, "X^2"), (&self.d, "X"), (&self.e, "")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            if mag.is_one() && !m.is_empty() {
                write!(f, " {sign} {m}")?;
            } else {
                write!(f, " {sign} {mag}{m}")?;
            }
        }
        Ok(())
    }
}

/// Positive divisors of `|n|` by trial division (`n != 0`).
fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs().to_biguint().expect("nonnegative");
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut d = BigUint::from(2u32);
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            let mut k = 0;
            while (&m % &d).is_zero() {
                m /= &d;
                k += 1;
            }
            factors.push((d.clone(), k));
        }
        d += 1u32;
    }
    if m > BigUint::one() {
        factors.push((m, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (f, k) in factors {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for dv in &divs {
            let mut pw = BigUint::one();
            for _ in 0..=k {
                next.push(dv * &pw);
                pw *= &f;
            }
        }
        divs = next;
    }
    divs.into_iter().map(BigInt::from).collect()
}

fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    positive_divisors(n)
        .into_iter()
        .flat_map(|d| [d.clone(), -d])
        .collect()
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// No rational root and no factorization into two monic integer quadratics.
pub fn is_irreducible_quartic(q: &QuarticPolynomial) -> bool {
    if q.e.is_zero() {
        return false;
    }
    let divs = signed_divisors(&q.e);
    if divs.iter().any(|r| q.eval(r).is_zero()) {
        return false;
    }
    // (X^2 + a X + beta)(X^2 + g X + delta) with beta·delta = e.
    for beta in &divs {
        let delta = &q.e / beta;
        if beta == &delta {
            // d = beta (a + g) = beta·b; a, g roots of t^2 - b t + (c - 2 beta)
            if q.d == beta * &q.b {
                let disc = &q.b * &q.b - BigInt::from(4) * (&q.c - BigInt::from(2) * beta);
                if is_square(&disc) {
                    return false;
                }
            }
        } else {
            // a delta + (b - a) beta = d  =>  a = (d - b beta) / (delta - beta)
            let (a, r) = (&q.d - &q.b * beta).div_rem(&(&delta - beta));
            if !r.is_zero() {
                continue;
            }
            let g = &q.b - &a;
            if beta + &delta + &a * &g == q.c {
                return false;
            }
        }
    }
    true
}

/// Resolvent cubic `y^3 - c y^2 + (bd - 4e) y - (b^2 e - 4ce + d^2)`,
/// low-to-high.
pub fn resolvent_cubic(q: &QuarticPolynomial) -> [BigInt; 4] {
    let four = BigInt::from(4);
    [
        -(&q.b * &q.b * &q.e - &four * &q.c * &q.e + &q.d * &q.d),
        &q.b * &q.d - &four * &q.e,
        -q.c.clone(),
        BigInt::one(),
    ]
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Distinct integer roots of a monic integer polynomial.
fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut roots = Vec::new();
    let mut rest: Vec<BigInt> = coeffs.to_vec();
    if rest[0].is_zero() {
        roots.push(BigInt::zero());
        while rest.len() > 1 && rest[0].is_zero() {
            rest.remove(0);
        }
    }
    if rest.len() > 1 {
        for r in signed_divisors(&rest[0]) {
            if eval_int(&rest, &r).is_zero() {
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Discriminant `Res(P, P')` via the 7x7 Sylvester determinant.
pub fn discriminant(q: &QuarticPolynomial) -> BigInt {
    let p = q.coeffs();
    let dp: Vec<BigInt> = (1..5).map(|i| &p[i] * BigInt::from(i)).collect();
    let n = 7;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    // three rows of P (degree 4), four rows of P' (degree 3), high-to-low
    for r in 0..3 {
        for (j, c) in p.iter().rev().enumerate() {
            m[r][r + j] = c.clone();
        }
    }
    for r in 0..4 {
        for (j, c) in dp.iter().rev().enumerate() {
            m[3 + r][r + j] = c.clone();
        }
    }
    det_bigint(&m)
}

type QPoly = Vec<BigRational>;

fn qtrim(mut a: QPoly) -> QPoly {
    while matches!(a.last(), Some(x) if x.is_zero()) {
        a.pop();
    }
    a
}

fn qrem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let coef = r.last().expect("nonempty") / b.last().expect("nonempty");
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &coef * bj;
        }
        r = qtrim(r);
    }
    r
}

/// Number of distinct real roots by Sturm's theorem (exact arithmetic).
pub fn real_root_count(coeffs: &[BigInt]) -> usize {
    let p: QPoly = qtrim(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    if p.len() <= 1 {
        return 0;
    }
    let dp: QPoly = qtrim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    );
    let mut seq = vec![p, dp];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = qrem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    let sign_changes = |at_plus: bool| {
        let signs: Vec<i8> = seq
            .iter()
            .map(|s| {
                let lead = s.last().expect("nonempty");
                let mut sg: i8 = if lead.is_positive() { 1 } else { -1 };
                if !at_plus && (s.len() - 1) % 2 == 1 {
                    sg = -sg;
                }
                sg
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    sign_changes(false) - sign_changes(true)
}

/// Galois type of the splitting field of an irreducible, totally imaginary
/// quartic. See [`GaloisType::C4`] for the probabilistic part.
pub fn classify_galois(q: &QuarticPolynomial) -> GaloisType {
    if !is_irreducible_quartic(q) {
        return GaloisType::NotIrreducible;
    }
    if real_root_count(&q.coeffs()) > 0 {
        return GaloisType::NotCM;
    }
    let cubic = resolvent_cubic(q);
    let roots = integer_roots(&cubic);
    if roots.len() == 3 {
        return GaloisType::V4;
    }
    if roots.is_empty() {
        // A4 or S4: not Galois over Q.
        return GaloisType::D4OrNonGalois;
    }
    let disc = discriminant(q);
    let mut sampled = 0;
    let mut r = 2u64;
    while sampled < CHEBOTAREV_SAMPLES {
        if is_prime_u64(r) && !(&disc % BigInt::from(r)).is_zero() {
            sampled += 1;
            let reduced: Vec<u64> = q
                .coeffs()
                .iter()
                .map(|c| c.mod_floor(&BigInt::from(r)).to_u64().expect("reduced"))
                .collect();
            if fp_poly::factor_degrees(&reduced, r) == [1, 1, 2] {
                return GaloisType::D4OrNonGalois;
            }
        }
        r += 1;
    }
    GaloisType::C4
}

/// Primitive (non-biquadratic) quartic CM field.
pub fn is_primitive_cm(q: &QuarticPolynomial) -> Result<bool, CmError> {
    match classify_galois(q) {
        GaloisType::C4 | GaloisType::D4OrNonGalois => Ok(true),
        GaloisType::V4 => Ok(false),
        other => Err(CmError::NotAQuarticCMField(other)),
    }
}

/// `Unramified` when ℓ does not divide `disc(P)`; otherwise ℓ may divide only
/// the index of `Z[ω]`, which is not computed.
pub fn ell_ramification(q: &QuarticPolynomial, ell: u64) -> Ramification {
    let d = discriminant(q);
    if !d.is_zero() && !(&d % BigInt::from(ell)).is_zero() {
        Ramification::Unramified
    } else {
        Ramification::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi5() -> QuarticPolynomial {
        QuarticPolynomial::new(1, 1, 1, 1)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn irreducibility_examples() {
        assert!(!is_irreducible_quartic(&QuarticPolynomial::new(0, -5, 0, 4)));
        assert!(is_irreducible_quartic(&QuarticPolynomial::new(0, 0, 0, 49)));
        assert!(is_irreducible_quartic(&phi5()));
        // X^4 + 4 = (X^2 + 2X + 2)(X^2 - 2X + 2)
        assert!(!is_irreducible_quartic(&QuarticPolynomial::new(0, 0, 0, 4)));
        // (X^2 + 1)^2
        assert!(!is_irreducible_quartic(&QuarticPolynomial::new(0, 2, 0, 1)));
    }

    #[test]
    fn resolvent_examples() {
        assert_eq!(
            resolvent_cubic(&QuarticPolynomial::new(0, 0, 0, 49)).to_vec(),
            ints(&[0, -196, 0, 1])
        );
        assert_eq!(
            resolvent_cubic(&QuarticPolynomial::new(0, 0, 0, 1)).to_vec(),
            ints(&[0, -4, 0, 1])
        );
        assert_eq!(resolvent_cubic(&phi5()).to_vec(), ints(&[2, -3, -1, 1]));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_galois(&QuarticPolynomial::new(0, 0, 0, 49)), GaloisType::V4);
        assert_eq!(classify_galois(&phi5()), GaloisType::C4);
        assert_eq!(
            classify_galois(&QuarticPolynomial::new(0, -5, 0, 4)),
            GaloisType::NotIrreducible
        );
        // X^4 - 2 has real roots
        assert_eq!(classify_galois(&QuarticPolynomial::new(0, 0, 0, -2)), GaloisType::NotCM);
        // Q(sqrt(-(2 + sqrt 2))) is cyclic; Q(sqrt(-(1 + sqrt 2))) is D4
        assert_eq!(classify_galois(&QuarticPolynomial::new(0, 4, 0, 2)), GaloisType::C4);
        assert_eq!(
            classify_galois(&QuarticPolynomial::new(0, 2, 0, -1)),
            GaloisType::NotCM
        );
        assert_eq!(
            classify_galois(&QuarticPolynomial::new(0, 6, 0, 7)),
            GaloisType::D4OrNonGalois
        );
        assert!(is_primitive_cm(&phi5()).unwrap());
        assert!(!is_primitive_cm(&QuarticPolynomial::new(0, 0, 0, 49)).unwrap());
        assert!(matches!(
            is_primitive_cm(&QuarticPolynomial::new(0, -5, 0, 4)),
            Err(CmError::NotAQuarticCMField(GaloisType::NotIrreducible))
        ));
    }

    #[test]
    fn classification_is_stable_under_negation() {
        for q in [
            phi5(),
            QuarticPolynomial::new(0, 0, 0, 49),
            QuarticPolynomial::new(0, 6, 0, 7),
            QuarticPolynomial::new(-4, 6, -44, 121),
        ] {
            assert_eq!(classify_galois(&q), classify_galois(&q.negate_variable()));
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&phi5()), BigInt::from(125));
        assert!(!discriminant(&QuarticPolynomial::new(0, -5, 0, 4)).is_zero());
        assert!(discriminant(&QuarticPolynomial::new(0, 2, 0, 1)).is_zero());
    }

    #[test]
    fn ramification_examples() {
        assert_eq!(ell_ramification(&phi5(), 11), Ramification::Unramified);
        assert_eq!(ell_ramification(&phi5(), 5), Ramification::Indeterminate);
        assert_eq!(ell_ramification(&phi5(), 3), Ramification::Unramified);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(real_root_count(&ints(&[4, 0, -5, 0, 1])), 4);
        assert_eq!(real_root_count(&ints(&[1, 1, 1, 1, 1])), 0);
        assert_eq!(real_root_count(&ints(&[-2, 0, 0, 0, 1])), 2);
        assert_eq!(real_root_count(&ints(&[1, 0, 2, 0, 1])), 0);
    }
}
