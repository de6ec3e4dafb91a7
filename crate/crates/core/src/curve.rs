//! Genus-2 curves `y^2 = f(x)` with `f` monic of degree 5, Mumford divisors,
//! and the Jacobian group law via Cantor's algorithm.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use rand::Rng;
use thiserror::Error;

use crate::ff::{self, build_extension, Embedding, FieldDescriptor, FieldElement, FieldError};
use crate::poly::Poly;

/// Default number of retries in [`Jacobian::random_divisor`].
pub const DEFAULT_SAMPLING_BUDGET: usize = 10_000;

/// Default bound on the field size accepted by [`Jacobian::enumerate`].
pub const DEFAULT_ENUMERATION_BOUND: u64 = 47;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("f is not squarefree (the curve is singular)")]
    NonSquarefree,
    #[error("f must be monic of degree 5")]
    BadDegree,
    #[error("divisors live over different fields")]
    FieldMismatch,
    #[error("(u, v) is not a reduced Mumford divisor on this curve")]
    InvalidDivisor,
    #[error("random divisor sampling failed after {0} attempts")]
    SamplingBudgetExceeded(usize),
    #[error("field size {size} exceeds the enumeration bound {bound}")]
    EnumerationBoundExceeded { size: String, bound: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `y^2 = f(x)` over F_p with `f` monic, squarefree, of degree 5.
#[derive(Clone, PartialEq, Eq)]
pub struct GenusTwoCurve {
    base: FieldDescriptor,
    /// `c0..=c5`, reduced mod p, with `c5 = 1`.
    f: Vec<u64>,
}

impl fmt::Debug for GenusTwoCurve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "y^2 = ")?;
        let mut first = true;
        for (i, &c) in self.f.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(fm, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(fm, "{c}")?,
                (1, 1) => write!(fm, "x")?,
                (1, _) => write!(fm, "{c}x")?,
                (_, 1) => write!(fm, "x^{i}")?,
                _ => write!(fm, "{c}x^{i}")?,
            }
        }
        write!(fm, " over F_{}", self.p())
    }
}

impl GenusTwoCurve {
    /// Validates and builds the curve from `f = c0 + c1 x + ... + c5 x^5`.
    /// Trailing zero coefficients are ignored, so a degree-5 `f` may be given
    /// with any number of them.
    pub fn new(p: u64, coeffs: &[i64]) -> Result<Self, CurveError> {
        if p == 2 {
            return Err(CurveError::EvenCharacteristic);
        }
        let base = build_extension(p, 1)?;
        let pi = p as i64;
        let mut f: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(pi) as u64).collect();
        ff::fp_poly::trim(&mut f);
        if f.len() != 6 || f[5] != 1 {
            return Err(CurveError::BadDegree);
        }
        let df: Vec<u64> = (1..6).map(|i| (f[i] * i as u64) % p).collect();
        if ff::fp_poly::gcd(&f, &df, p) != vec![1] {
            return Err(CurveError::NonSquarefree);
        }
        Ok(GenusTwoCurve { base, f })
    }

    /// `y^2 = x^5 + c4 x^4 + ... + c0` from the five lower coefficients.
    pub fn from_lower_coeffs(p: u64, lower: &[i64]) -> Result<Self, CurveError> {
        if lower.len() != 5 {
            return Err(CurveError::BadDegree);
        }
        let mut c = lower.to_vec();
        c.push(1);
        Self::new(p, &c)
    }

    pub fn p(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn base_field(&self) -> &FieldDescriptor {
        &self.base
    }

    /// Coefficients `c0..=c5` of `f`, reduced mod p.
    pub fn f_coeffs(&self) -> &[u64] {
        &self.f
    }

    pub fn f_over(&self, field: &FieldDescriptor) -> Poly {
        Poly::from_u64s(field, &self.f)
    }

    /// The Jacobian over F_{p^n}.
    pub fn jacobian(&self, n: usize) -> Result<Jacobian, CurveError> {
        let field = build_extension(self.p(), n)?;
        Jacobian::new(self, &field)
    }
}

/// Affine point or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine(FieldElement, FieldElement),
}

/// Reduced divisor class `(u, v)`: `u` monic, `deg v < deg u <= 2`,
/// `u | v^2 - f`. The identity is `(1, 0)`.
#[derive(Clone, PartialEq, Eq)]
pub struct MumfordDivisor {
    u: Poly,
    v: Poly,
}

impl fmt::Debug for MumfordDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.u, self.v)
    }
}

impl std::hash::Hash for MumfordDivisor {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for c in self.u.coeffs().iter().chain(self.v.coeffs()) {
            c.hash(state);
        }
        self.u.coeffs().len().hash(state);
    }
}

impl MumfordDivisor {
    pub fn u(&self) -> &Poly {
        &self.u
    }

    pub fn v(&self) -> &Poly {
        &self.v
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.u.field()
    }

    pub fn degree(&self) -> usize {
        self.u.degree().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }
}

/// Rational function `d(x) · Π (y - v_i(x)) / u_i(x)` recorded by one Cantor
/// step, with `D1 + D2 = D3 + div(function)` up to multiples of infinity.
#[derive(Clone, Debug)]
pub struct MillerFunction {
    pub gcd: Poly,
    /// `(v_i, u_i)` pairs from each reduction step.
    pub steps: Vec<(Poly, Poly)>,
}

/// The Jacobian of a curve base-changed to a finite field of characteristic p.
#[derive(Clone, Debug)]
pub struct Jacobian {
    curve: GenusTwoCurve,
    field: FieldDescriptor,
    f: Poly,
}

impl Jacobian {
    pub fn new(curve: &GenusTwoCurve, field: &FieldDescriptor) -> Result<Self, CurveError> {
        if field.characteristic() != curve.p() {
            return Err(CurveError::FieldMismatch);
        }
        Ok(Jacobian {
            curve: curve.clone(),
            field: field.clone(),
            f: curve.f_over(field),
        })
    }

    pub fn curve(&self) -> &GenusTwoCurve {
        &self.curve
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn identity(&self) -> MumfordDivisor {
        MumfordDivisor {
            u: Poly::one(&self.field),
            v: Poly::zero(&self.field),
        }
    }

    /// Checks the Mumford conditions and wraps `(u, v)`.
    pub fn divisor(&self, u: Poly, v: Poly) -> Result<MumfordDivisor, CurveError> {
        let d = MumfordDivisor { u, v };
        if self.is_valid(&d) {
            Ok(d)
        } else {
            Err(CurveError::InvalidDivisor)
        }
    }

    pub fn is_valid(&self, d: &MumfordDivisor) -> bool {
        let du = match d.u.degree() {
            Some(x) => x,
            None => return false,
        };
        d.u.field() == &self.field
            && d.v.field() == &self.field
            && d.u.is_monic()
            && du <= 2
            && d.v.degree().map_or(true, |dv| dv < du)
            && d.v.square().sub(&self.f).rem(&d.u).is_zero()
    }

    /// Divisor class `[P - ∞]` of an affine point.
    pub fn point_divisor(&self, x: &FieldElement, y: &FieldElement) -> Result<MumfordDivisor, CurveError> {
        let u = Poly::from_coeffs(&self.field, vec![-x, self.field.one()]);
        let v = Poly::constant(y.clone());
        self.divisor(u, v)
    }

    pub fn is_on_curve(&self, x: &FieldElement, y: &FieldElement) -> bool {
        y.square() == self.f.eval(x)
    }

    fn check(&self, d: &MumfordDivisor) -> Result<(), CurveError> {
        if d.field() == &self.field {
            Ok(())
        } else {
            Err(CurveError::FieldMismatch)
        }
    }

    /// Cantor addition with field checking.
    pub fn cantor_add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> Result<MumfordDivisor, CurveError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn add(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
        if a.is_identity() {
            return b.clone();
        }
        if b.is_identity() {
            return a.clone();
        }
        self.compose_reduce(a, b, false).0
    }

    /// Sum together with the function accounting for it.
    pub fn add_with_function(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> (MumfordDivisor, MillerFunction) {
        let (d, h) = self.compose_reduce(a, b, true);
        (d, h.expect("function requested"))
    }

    pub fn double(&self, a: &MumfordDivisor) -> MumfordDivisor {
        self.add(a, a)
    }

    pub fn neg(&self, a: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor {
            u: a.u.clone(),
            v: a.v.neg(),
        }
    }

    pub fn sub(&self, a: &MumfordDivisor, b: &MumfordDivisor) -> MumfordDivisor {
        self.add(a, &self.neg(b))
    }

    pub fn mul_big(&self, a: &MumfordDivisor, n: &BigUint) -> MumfordDivisor {
        let mut acc = self.identity();
        for i in (0..n.bits()).rev() {
            acc = self.double(&acc);
            if n.bit(i) {
                acc = self.add(&acc, a);
            }
        }
        acc
    }

    pub fn mul_u64(&self, a: &MumfordDivisor, n: u64) -> MumfordDivisor {
        self.mul_big(a, &BigUint::from(n))
    }

    /// `n · a` for any integer `n`.
    pub fn scalar_mul(&self, a: &MumfordDivisor, n: &BigInt) -> MumfordDivisor {
        let r = self.mul_big(a, n.magnitude());
        if n.sign() == Sign::Minus {
            self.neg(&r)
        } else {
            r
        }
    }

    pub fn mul_i64(&self, a: &MumfordDivisor, n: i64) -> MumfordDivisor {
        self.scalar_mul(a, &BigInt::from(n))
    }

    /// Coefficient-wise p-power Frobenius.
    pub fn frobenius(&self, a: &MumfordDivisor) -> MumfordDivisor {
        MumfordDivisor {
            u: a.u.map_coeffs(&self.field, |c| c.frobenius()),
            v: a.v.map_coeffs(&self.field, |c| c.frobenius()),
        }
    }

    /// Image of a divisor from a subfield Jacobian.
    pub fn lift(&self, a: &MumfordDivisor) -> Result<MumfordDivisor, CurveError> {
        let e = Embedding::new(a.field(), &self.field)?;
        Ok(MumfordDivisor {
            u: a.u.map_coeffs(&self.field, |c| e.apply(c)),
            v: a.v.map_coeffs(&self.field, |c| e.apply(c)),
        })
    }

    fn compose_reduce(
        &self,
        a: &MumfordDivisor,
        b: &MumfordDivisor,
        want_fn: bool,
    ) -> (MumfordDivisor, Option<MillerFunction>) {
        let (u1, v1, u2, v2) = (&a.u, &a.v, &b.u, &b.v);
        let (d1, e1, e2) = u1.xgcd(u2);
        let (u, v, d) = if d1.is_one() {
            // Generic case: coprime supports, no vertical cancellation.
            let s = e1.mul(u1);
            let v = s.mul(&v2.sub(v1)).add(v1);
            let u = u1.mul(u2);
            (u.clone(), v.rem(&u), d1)
        } else {
            let (d, c1, c2) = d1.xgcd(&v1.add(v2));
            let s1 = c1.mul(&e1);
            let s2 = c1.mul(&e2);
            let s3 = c2;
            let u = u1.mul(u2).div_exact(&d.square());
            let num = s1
                .mul(u1)
                .mul(v2)
                .add(&s2.mul(u2).mul(v1))
                .add(&s3.mul(&v1.mul(v2).add(&self.f)));
            let v = num.div_exact(&d).rem(&u);
            (u, v, d)
        };
        let mut u = u;
        let mut v = v;
        let mut steps = Vec::new();
        while u.degree().unwrap_or(0) > 2 {
            let u_new = self.f.sub(&v.square()).div_exact(&u).monic();
            let v_new = v.neg().rem(&u_new);
            if want_fn {
                steps.push((v, u_new.clone()));
            }
            u = u_new;
            v = v_new;
        }
        let u_monic = u.monic();
        let v = v.rem(&u_monic);
        let div = MumfordDivisor { u: u_monic, v };
        let func = want_fn.then(|| MillerFunction { gcd: d, steps });
        (div, func)
    }

    /// All `(u, v)` completions of a monic `u` of degree at most 2, in a
    /// fixed order.
    pub fn divisors_with_u(&self, u: &Poly) -> Vec<MumfordDivisor> {
        let field = &self.field;
        let mk = |v: Poly| MumfordDivisor { u: u.clone(), v };
        match u.degree() {
            Some(0) => vec![self.identity()],
            Some(1) => {
                let a = -&u.coeff(0);
                self.signed_roots(&self.f.eval(&a))
                    .into_iter()
                    .map(|y| mk(Poly::constant(y)))
                    .collect()
            }
            Some(2) => {
                let u1 = u.coeff(1);
                let u0 = u.coeff(0);
                let two = field.from_u64(2);
                let half = two.inv().expect("odd characteristic");
                let disc = &u1.square() - &(&field.from_u64(4) * &u0);
                if disc.is_zero() {
                    let a = -&(&u1 * &half);
                    let fa = self.f.eval(&a);
                    if fa.is_zero() {
                        return Vec::new();
                    }
                    let dfa = self.f.derivative().eval(&a);
                    self.signed_roots(&fa)
                        .into_iter()
                        .map(|y| {
                            let slope = dfa.div(&(&two * &y)).expect("y nonzero");
                            let c0 = &y - &(&slope * &a);
                            mk(Poly::from_coeffs(field, vec![c0, slope]))
                        })
                        .collect()
                } else if let Some(r) = disc.sqrt() {
                    let a = &(&(-&u1) + &r) * &half;
                    let b = &(&(-&u1) - &r) * &half;
                    let ya = self.signed_roots(&self.f.eval(&a));
                    let yb = self.signed_roots(&self.f.eval(&b));
                    let inv = (&b - &a).inv().expect("distinct roots");
                    let mut out = Vec::new();
                    for y1 in &ya {
                        for y2 in &yb {
                            let slope = &(y2 - y1) * &inv;
                            let c0 = y1 - &(&slope * &a);
                            out.push(mk(Poly::from_coeffs(field, vec![c0, slope])));
                        }
                    }
                    out
                } else {
                    self.irreducible_completions(u, &u1, &u0, &disc)
                }
            }
            _ => Vec::new(),
        }
    }

    /// `[]`, `[0]`, or `[r, -r]` for the square roots of `a`.
    fn signed_roots(&self, a: &FieldElement) -> Vec<FieldElement> {
        if a.is_zero() {
            return vec![a.clone()];
        }
        match a.sqrt() {
            Some(r) => {
                let n = -&r;
                vec![r, n]
            }
            None => Vec::new(),
        }
    }

    /// Square roots of `f mod u` in F_q[x]/(u) ≅ F_{q^2} for irreducible `u`.
    fn irreducible_completions(
        &self,
        u: &Poly,
        u1: &FieldElement,
        u0: &FieldElement,
        disc: &FieldElement,
    ) -> Vec<MumfordDivisor> {
        let field = &self.field;
        let two = field.from_u64(2);
        let half = two.inv().expect("odd characteristic");
        let alpha = self.f.rem(u);
        let (a0, a1) = (alpha.coeff(0), alpha.coeff(1));
        // Write elements as A + B·s with s = x + u1/2, s^2 = delta.
        let shift = u1 * &half;
        let delta = &shift.square() - u0;
        debug_assert_eq!(&delta * &field.from_u64(4), disc.clone());
        let big_a = &a0 - &(&a1 * &shift);
        let big_b = a1;
        let (r, t) = if big_a.is_zero() && big_b.is_zero() {
            return vec![MumfordDivisor {
                u: u.clone(),
                v: Poly::zero(field),
            }];
        } else if big_b.is_zero() {
            match big_a.sqrt() {
                Some(r) => (r, field.zero()),
                None => {
                    let t = big_a.div(&delta).expect("delta nonzero").sqrt().expect("A/delta is a square");
                    (field.zero(), t)
                }
            }
        } else {
            let norm = &big_a.square() - &(&delta * &big_b.square());
            let n = match norm.sqrt() {
                Some(n) => n,
                None => return Vec::new(),
            };
            let cand = &(&big_a + &n) * &half;
            let r = match cand.sqrt() {
                Some(r) if !r.is_zero() => r,
                _ => (&(&big_a - &n) * &half).sqrt().expect("one half-norm is a square"),
            };
            let t = big_b.div(&(&two * &r)).expect("r nonzero");
            (r, t)
        };
        let build = |r: &FieldElement, t: &FieldElement| {
            let c0 = r + &(t * &shift);
            MumfordDivisor {
                u: u.clone(),
                v: Poly::from_coeffs(field, vec![c0, t.clone()]),
            }
        };
        vec![build(&r, &t), build(&-&r, &-&t)]
    }

    /// Uniform sample from J(F): a uniformly random monic `u` of degree at
    /// most 2 (a random point of the projective plane), then one of up to
    /// four completion slots, retrying on empty slots.
    pub fn random_divisor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MumfordDivisor, CurveError> {
        self.random_divisor_with_budget(rng, DEFAULT_SAMPLING_BUDGET)
    }

    pub fn random_divisor_with_budget<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        budget: usize,
    ) -> Result<MumfordDivisor, CurveError> {
        let field = &self.field;
        for _ in 0..budget {
            let c2 = field.random(rng);
            let c1 = field.random(rng);
            let c0 = field.random(rng);
            let u = if !c2.is_zero() {
                let inv = c2.inv().expect("nonzero");
                Poly::from_coeffs(field, vec![&c0 * &inv, &c1 * &inv, field.one()])
            } else if !c1.is_zero() {
                let inv = c1.inv().expect("nonzero");
                Poly::from_coeffs(field, vec![&c0 * &inv, field.one()])
            } else if !c0.is_zero() {
                Poly::one(field)
            } else {
                continue;
            };
            let slot = rng.gen_range(0..4usize);
            let mut sols = self.divisors_with_u(&u);
            if slot < sols.len() {
                return Ok(sols.swap_remove(slot));
            }
        }
        Err(CurveError::SamplingBudgetExceeded(budget))
    }

    /// Every element of J(F) by exhaustive search over monic `u`, for
    /// `|F| <= bound`.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<MumfordDivisor>, CurveError> {
        let q = match self.field.order_u64() {
            Some(q) if q <= bound => q,
            _ => {
                return Err(CurveError::EnumerationBoundExceeded {
                    size: self.field.order().to_string(),
                    bound,
                })
            }
        };
        let field = &self.field;
        let mut out = vec![self.identity()];
        for a in 0..q {
            let u = Poly::from_coeffs(field, vec![field.element_from_index(a), field.one()]);
            out.extend(self.divisors_with_u(&u));
        }
        for i1 in 0..q {
            for i0 in 0..q {
                let u = Poly::from_coeffs(
                    field,
                    vec![
                        field.element_from_index(i0),
                        field.element_from_index(i1),
                        field.one(),
                    ],
                );
                out.extend(self.divisors_with_u(&u));
            }
        }
        Ok(out)
    }
}

/// Brute-force enumeration by testing every `(u, v)` pair against the
/// Mumford conditions. Only meant as an oracle for tiny prime fields.
pub fn enumerate_by_brute_force(jac: &Jacobian, bound: u64) -> Result<HashSet<MumfordDivisor>, CurveError> {
    let q = match jac.field().order_u64() {
        Some(q) if q <= bound => q,
        _ => {
            return Err(CurveError::EnumerationBoundExceeded {
                size: jac.field().order().to_string(),
                bound,
            })
        }
    };
    let field = jac.field();
    let el = |i| field.element_from_index(i);
    let mut out = HashSet::new();
    out.insert(jac.identity());
    for a in 0..q {
        for b in 0..q {
            let u = Poly::from_coeffs(field, vec![el(a), field.one()]);
            if let Ok(d) = jac.divisor(u, Poly::constant(el(b))) {
                out.insert(d);
            }
        }
    }
    for u1 in 0..q {
        for u0 in 0..q {
            let u = Poly::from_coeffs(field, vec![el(u0), el(u1), field.one()]);
            for v1 in 0..q {
                for v0 in 0..q {
                    let v = Poly::from_coeffs(field, vec![el(v0), el(v1)]);
                    if let Ok(d) = jac.divisor(u.clone(), v) {
                        out.insert(d);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x5_plus_1(p: u64) -> GenusTwoCurve {
        GenusTwoCurve::new(p, &[1, 0, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn curve_validation() {
        assert_eq!(
            GenusTwoCurve::new(5, &[1, 0, 0, 0, 0, 1]).unwrap_err(),
            CurveError::NonSquarefree
        );
        assert!(GenusTwoCurve::new(7, &[1, 0, 0, 0, 0, 1]).is_ok());
        assert_eq!(
            GenusTwoCurve::new(2, &[1, 1, 0, 0, 0, 1]).unwrap_err(),
            CurveError::EvenCharacteristic
        );
        assert_eq!(
            GenusTwoCurve::new(7, &[1, 0, 0, 0, 0, 2]).unwrap_err(),
            CurveError::BadDegree
        );
        assert_eq!(
            GenusTwoCurve::new(7, &[1, 0, 0, 0, 0, 1, 1]).unwrap_err(),
            CurveError::BadDegree
        );
    }

    #[test]
    fn identity_and_inverse() {
        let jac = x5_plus_1(7).jacobian(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let d = jac.random_divisor(&mut rng).unwrap();
            assert!(jac.is_valid(&d));
            assert_eq!(jac.add(&d, &jac.identity()), d);
            assert!(jac.add(&d, &jac.neg(&d)).is_identity());
            assert_eq!(jac.neg(&jac.neg(&d)), d);
        }
        assert!(jac.neg(&jac.identity()).is_identity());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let jac = x5_plus_1(7).jacobian(1).unwrap();
        let fast: HashSet<_> = jac.enumerate(47).unwrap().into_iter().collect();
        let slow = enumerate_by_brute_force(&jac, 47).unwrap();
        assert_eq!(fast.len(), 50);
        assert_eq!(fast, slow);
        for d in &fast {
            assert!(jac.mul_u64(d, 50).is_identity());
        }
    }

    #[test]
    fn enumeration_over_extension_matches_brute_force() {
        let c = GenusTwoCurve::new(3, &[1, 2, 0, 0, 0, 1]).unwrap();
        let jac = c.jacobian(2).unwrap();
        let fast: HashSet<_> = jac.enumerate(47).unwrap().into_iter().collect();
        let slow = enumerate_by_brute_force(&jac, 47).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let jac = x5_plus_1(53).jacobian(1).unwrap();
        assert!(matches!(
            jac.enumerate(47),
            Err(CurveError::EnumerationBoundExceeded { .. })
        ));
    }

    #[test]
    fn random_divisors_over_extension_are_valid() {
        let jac = x5_plus_1(11).jacobian(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let d = jac.random_divisor(&mut rng).unwrap();
            assert!(jac.is_valid(&d));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_covers_small_jacobian() {
        let jac = x5_plus_1(7).jacobian(1).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..2000)
                .map(|_| jac.random_divisor(&mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        let a = draw(3);
        assert_eq!(a, draw(3));
        let seen: HashSet<_> = a.into_iter().collect();
        assert!(seen.len() * 10 > 50 * 9, "covered only {}", seen.len());
    }

    #[test]
    fn frobenius_fixes_base_divisors_and_has_order_n() {
        let c = x5_plus_1(11);
        let j1 = c.jacobian(1).unwrap();
        let j3 = c.jacobian(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let d = j1.random_divisor(&mut rng).unwrap();
            assert_eq!(j1.frobenius(&d), d);
            let e = j3.random_divisor(&mut rng).unwrap();
            let mut g = e.clone();
            for _ in 0..3 {
                g = j3.frobenius(&g);
            }
            assert_eq!(g, e);
            let l = j3.lift(&d).unwrap();
            assert_eq!(j3.frobenius(&l), l);
        }
    }

    #[test]
    fn field_mismatch_is_reported() {
        let c = x5_plus_1(7);
        let j1 = c.jacobian(1).unwrap();
        let j2 = c.jacobian(2).unwrap();
        assert_eq!(
            j1.cantor_add(&j1.identity(), &j2.identity()).unwrap_err(),
            CurveError::FieldMismatch
        );
    }
}
