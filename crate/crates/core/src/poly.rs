//! Univariate polynomials over an arbitrary finite field F_{p^n}.

use std::fmt;

use num_bigint::BigUint;

use crate::ff::{FieldDescriptor, FieldElement};

/// Dense polynomial, low-to-high, with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldDescriptor,
    c: Vec<FieldElement>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn zero(field: &FieldDescriptor) -> Self {
        Poly {
            field: field.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field().clone();
        Self::from_coeffs(&field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: &FieldDescriptor) -> Self {
        Self::from_coeffs(field, vec![field.zero(), field.one()])
    }

    pub fn from_coeffs(field: &FieldDescriptor, c: Vec<FieldElement>) -> Self {
        let mut out = Poly {
            field: field.clone(),
            c,
        };
        out.trim();
        out
    }

    pub fn from_u64s(field: &FieldDescriptor, c: &[u64]) -> Self {
        Self::from_coeffs(field, c.iter().map(|&v| field.from_u64(v)).collect())
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(x) if x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|c| c.is_one())
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.c.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), other.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(&self.field, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), other.c.get(i)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(&self.field, c)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElement) -> Poly {
        Poly::from_coeffs(&self.field, self.c.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(&self.field, c)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        if self.c.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let lead_inv = d.c[dd].inv().expect("nonzero leading coefficient");
        let monic_divisor = d.c[dd].is_one();
        let mut r = self.c.clone();
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let coef = if monic_divisor {
                r[i].clone()
            } else {
                &r[i] * &lead_inv
            };
            for j in 0..dd {
                r[i - dd + j] = &r[i - dd + j] - &(&coef * &d.c[j]);
            }
            r[i] = self.field.zero();
            q[i - dd] = coef;
        }
        r.truncate(dd);
        (
            Poly::from_coeffs(&self.field, q),
            Poly::from_coeffs(&self.field, r),
        )
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient; debug-asserts the remainder vanishes.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic (or zero).
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.c.last() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &self.field.from_u64(i as u64))
            .collect();
        Poly::from_coeffs(&self.field, c)
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let b = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&b, m);
            }
        }
        acc
    }

    /// Applies a coefficient map, e.g. Frobenius or a field embedding.
    pub fn map_coeffs<F>(&self, dst: &FieldDescriptor, f: F) -> Poly
    where
        F: Fn(&FieldElement) -> FieldElement,
    {
        Poly::from_coeffs(dst, self.c.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_extension;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_poly(f: &FieldDescriptor, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
        Poly::from_coeffs(f, (0..=deg).map(|_| f.random(rng)).collect())
    }

    #[test]
    fn division_and_xgcd_identities() {
        let f = build_extension(7, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = random_poly(&f, 6, &mut rng);
            let b = random_poly(&f, 3, &mut rng);
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.div_rem(&b);
            assert_eq!(q.mul(&b).add(&r), a);
            assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()));
            let (g, s, t) = a.xgcd(&b);
            assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
            assert_eq!(g, a.gcd(&b));
        }
    }

    #[test]
    fn eval_and_derivative() {
        let f = build_extension(11, 1).unwrap();
        let p = Poly::from_u64s(&f, &[1, 0, 0, 0, 0, 1]);
        assert!(p.eval(&f.from_u64(10)).is_zero());
        assert_eq!(p.derivative(), Poly::from_u64s(&f, &[0, 0, 0, 0, 5]));
    }
}
