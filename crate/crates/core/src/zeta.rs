//! Point counting, the Weil polynomial, and Jacobian orders over extensions.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::GenusTwoCurve;
use crate::ff::build_extension;
use crate::linalg::{det_bigint, pow_bigint, ModMatrix};

/// Default cap on `p^m` for naive point counting.
pub const DEFAULT_COUNT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("p^{m} = {size} exceeds the counting budget {budget}")]
    EnumerationBoundExceeded { m: u32, size: String, budget: u64 },
    #[error("point counts are inconsistent: {0}")]
    InconsistentCounts(String),
    #[error("only m = 1 and m = 2 are counted directly (got {0})")]
    UnsupportedDegree(u32),
    #[error("{ell} divides p = {p}")]
    BadPrime { ell: u64, p: u64 },
}

/// `P(X) = X^4 - a1 X^3 + a2 X^2 - p a1 X + p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeilPolynomial {
    pub p: u64,
    pub a1: i64,
    pub a2: i64,
}

impl WeilPolynomial {
    /// Integer coefficients low-to-high: `[p^2, -p a1, a2, -a1, 1]`.
    pub fn coeffs(&self) -> [BigInt; 5] {
        let p = BigInt::from(self.p);
        [
            &p * &p,
            -&p * self.a1,
            BigInt::from(self.a2),
            BigInt::from(-self.a1),
            BigInt::from(1),
        ]
    }

    /// `P(1) = |J(F_p)|`.
    pub fn at_one(&self) -> BigInt {
        self.coeffs().iter().sum()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs()
            .iter()
            .rev()
            .fold(BigInt::from(0), |acc, c| acc * x + c)
    }

    /// Companion matrix of `P` over Z.
    pub fn companion(&self) -> Vec<Vec<BigInt>> {
        let c = self.coeffs();
        let mut m = vec![vec![BigInt::from(0); 4]; 4];
        for i in 1..4 {
            m[i][i - 1] = BigInt::from(1);
        }
        for i in 0..4 {
            m[i][3] = -c[i].clone();
        }
        m
    }

    /// Weil-bound check: `|a1| <= 4 sqrt(p)`, `|a2| <= 6p`, and every root
    /// has absolute value `sqrt(p)` (to 1e-9).
    pub fn check_bounds(&self) -> Result<(), ZetaError> {
        let p = self.p as f64;
        if (self.a1 as f64).abs() > 4.0 * p.sqrt() + 1e-9 {
            return Err(ZetaError::InconsistentCounts(format!("|a1| = {} > 4 sqrt(p)", self.a1.abs())));
        }
        if self.a2.unsigned_abs() > 6 * self.p {
            return Err(ZetaError::InconsistentCounts(format!("|a2| = {} > 6p", self.a2.abs())));
        }
        // P(X)/X^2 = z^2 - a1 z + (a2 - 2p) with z = X + p/X; each root
        // of modulus sqrt(p) corresponds to a real z with |z| <= 2 sqrt(p).
        let disc = (self.a1 as i128) * (self.a1 as i128) - 4 * (self.a2 as i128 - 2 * self.p as i128);
        if disc < 0 {
            return Err(ZetaError::InconsistentCounts("roots off the circle |X| = sqrt(p)".into()));
        }
        let sq = (disc as f64).sqrt();
        for z in [(self.a1 as f64 + sq) / 2.0, (self.a1 as f64 - sq) / 2.0] {
            // X^2 - z X + p has both roots on |X| = sqrt(p) iff z^2 <= 4p.
            if z * z > 4.0 * p * (1.0 + 1e-9) {
                return Err(ZetaError::InconsistentCounts(format!(
                    "real root pair with z = {z} off the circle |X| = sqrt(p)"
                )));
            }
        }
        Ok(())
    }

    /// Largest absolute deviation of `|ω|` from `sqrt(p)` over the four
    /// roots, computed numerically.
    pub fn root_modulus_error(&self) -> f64 {
        let p = self.p as f64;
        let a1 = self.a1 as f64;
        let disc = a1 * a1 - 4.0 * (self.a2 as f64 - 2.0 * p);
        let (zr, zi) = if disc >= 0.0 { (disc.sqrt(), 0.0) } else { (0.0, (-disc).sqrt()) };
        let mut worst: f64 = 0.0;
        for s in [1.0, -1.0] {
            let z = ((a1 + s * zr) / 2.0, s * zi / 2.0);
            // roots of X^2 - z X + p
            let d = (z.0 * z.0 - z.1 * z.1 - 4.0 * p, 2.0 * z.0 * z.1);
            let r = csqrt(d);
            for t in [1.0, -1.0] {
                let x = ((z.0 + t * r.0) / 2.0, (z.1 + t * r.1) / 2.0);
                let m = (x.0 * x.0 + x.1 * x.1).sqrt();
                worst = worst.max((m - p.sqrt()).abs());
            }
        }
        worst
    }
}

fn csqrt((re, im): (f64, f64)) -> (f64, f64) {
    let m = (re * re + im * im).sqrt();
    let a = ((m + re) / 2.0).max(0.0).sqrt();
    let b = ((m - re) / 2.0).max(0.0).sqrt();
    (a, if im < 0.0 { -b } else { b })
}

/// `#C(F_{p^m})` for `m` in {1, 2}, including the single point at infinity.
pub fn count_points(c: &GenusTwoCurve, m: u32) -> Result<u64, ZetaError> {
    count_points_with_budget(c, m, DEFAULT_COUNT_BUDGET)
}

pub fn count_points_with_budget(c: &GenusTwoCurve, m: u32, budget: u64) -> Result<u64, ZetaError> {
    if !(1..=2).contains(&m) {
        return Err(ZetaError::UnsupportedDegree(m));
    }
    let p = c.p();
    let q = (p as u128).pow(m);
    if q > budget as u128 {
        return Err(ZetaError::EnumerationBoundExceeded {
            m,
            size: q.to_string(),
            budget,
        });
    }
    let q = q as u64;
    let field = build_extension(p, m as usize).expect("valid prime field");
    let mut is_square = vec![false; q as usize];
    for i in 0..q {
        let a = field.element_from_index(i);
        is_square[a.square().to_index() as usize] = true;
    }
    let f = c.f_over(&field);
    let mut count = 1u64;
    for i in 0..q {
        let v = f.eval(&field.element_from_index(i));
        if v.is_zero() {
            count += 1;
        } else if is_square[v.to_index() as usize] {
            count += 2;
        }
    }
    Ok(count)
}

/// Builds `P` from `#C(F_p)` and `#C(F_{p^2})`.
pub fn weil_polynomial_from_counts(p: u64, n1: u64, n2: u64) -> Result<WeilPolynomial, ZetaError> {
    let a1 = p as i128 + 1 - n1 as i128;
    let t2 = (p as i128) * (p as i128) + 1 - n2 as i128;
    let num = a1 * a1 - t2;
    if num % 2 != 0 {
        return Err(ZetaError::InconsistentCounts(format!(
            "a1^2 - t2 = {num} is odd"
        )));
    }
    let w = WeilPolynomial {
        p,
        a1: a1 as i64,
        a2: (num / 2) as i64,
    };
    w.check_bounds()?;
    Ok(w)
}

pub fn weil_polynomial(c: &GenusTwoCurve) -> Result<WeilPolynomial, ZetaError> {
    let n1 = count_points(c, 1)?;
    let n2 = count_points(c, 2)?;
    weil_polynomial_from_counts(c.p(), n1, n2)
}

/// `|J(F_{p^m})| = det(I - C^m)` for the companion matrix `C` of `P`.
pub fn jacobian_order(w: &WeilPolynomial, m: u64) -> BigUint {
    assert!(m >= 1, "m must be positive");
    let cm = pow_bigint(&w.companion(), m);
    let mut a = cm;
    for (i, row) in a.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = BigInt::from((i == j) as i32) - &*x;
        }
    }
    let d = det_bigint(&a);
    debug_assert!(!d.is_negative());
    d.to_biguint().expect("group order is positive")
}

/// Companion matrix of `P` reduced mod ℓ.
pub fn companion_mod(w: &WeilPolynomial, ell: u64) -> ModMatrix {
    let rows: Vec<Vec<u64>> = w
        .companion()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let l = BigInt::from(ell);
                    (((x % &l) + &l) % &l).to_u64().expect("reduced")
                })
                .collect()
        })
        .collect();
    ModMatrix::from_rows(ell, &rows)
}

/// Characteristic polynomial of the `p^m`-Frobenius mod ℓ, low-to-high.
pub fn charpoly_mod(w: &WeilPolynomial, ell: u64, m: u64) -> Result<Vec<u64>, ZetaError> {
    if w.p % ell == 0 {
        return Err(ZetaError::BadPrime { ell, p: w.p });
    }
    Ok(companion_mod(w, ell).pow(m).charpoly())
}

/// `P mod ℓ`, low-to-high.
pub fn reduce_mod(w: &WeilPolynomial, ell: u64) -> Vec<u64> {
    let l = BigInt::from(ell);
    w.coeffs()
        .iter()
        .map(|c| (((c % &l) + &l) % &l).to_u64().expect("reduced"))
        .collect()
}
