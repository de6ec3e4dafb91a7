//! Exact arithmetic in F_p and its extensions F_{p^n} = F_p[X]/(g).
//!
//! A [`FieldDescriptor`] is a cheap, shareable handle; elements carry a clone
//! of it together with their coefficient vector in the power basis of X.
//! Descriptors for the same `(p, n)` are cached, so equal fields are normally
//! the same allocation.

mod embed;
pub(crate) mod fp_poly;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub use embed::{embed, Embedding};

/// Default upper bound on extension degrees accepted by [`build_extension`].
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Characteristics must stay below this so products of residues fit in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("{0} is not prime")]
    CompositeModulus(u64),
    #[error("characteristic {0} exceeds the supported bound 2^32")]
    CharacteristicTooLarge(u64),
    #[error("extension degree {degree} is outside 1..={cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{q} and {ell} are not coprime")]
    NotCoprime { q: BigUint, ell: u64 },
    #[error("cannot embed F_{{{src_p}^{src_n}}} into F_{{{dst_p}^{dst_n}}}")]
    IncompatibleTower {
        src_p: u64,
        src_n: usize,
        dst_p: u64,
        dst_n: usize,
    },
}

/// Deterministic primality test for `u64` values (trial division is enough
/// at the sizes this crate handles, but Miller-Rabin keeps it cheap for
/// anything up to 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulm = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulm(acc, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, ascending, with multiplicities.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Least `k ≥ 1` with `q^k ≡ 1 (mod ell)`.
pub fn multiplicative_order(q: &BigUint, ell: u64) -> Result<u64, FieldError> {
    let r = (q % ell).to_u64().expect("residue fits in u64");
    if ell < 2 || r == 0 || num_integer::gcd(r, ell) != 1 {
        return Err(FieldError::NotCoprime {
            q: q.clone(),
            ell,
        });
    }
    let powm = |b: u64, e: u64| -> u64 {
        BigUint::from(b)
            .modpow(&BigUint::from(e), &BigUint::from(ell))
            .to_u64()
            .expect("fits")
    };
    // ell is normally prime; fall back to the totient bound by search otherwise.
    if !is_prime_u64(ell) {
        let mut acc = r;
        let mut k = 1;
        while acc != 1 {
            acc = ((acc as u128 * r as u128) % ell as u128) as u64;
            k += 1;
        }
        return Ok(k);
    }
    let mut order = ell - 1;
    for (f, _) in factorize_u64(ell - 1) {
        while order % f == 0 && powm(r, order / f) == 1 {
            order /= f;
        }
    }
    Ok(order)
}

struct SqrtData {
    two_adicity: u64,
    odd_part: BigUint,
    odd_part_plus_one_half: BigUint,
    nonresidue_power: FieldElement,
}

struct FieldInner {
    p: u64,
    degree: usize,
    /// Monic modulus, low-to-high; empty for the prime field.
    modulus: Vec<u64>,
    /// `(j, p - g_j)` for the nonzero sub-leading coefficients of the modulus.
    reduction: Vec<(usize, u64)>,
    order: BigUint,
    /// `X^{i p} mod g` for `i < n`, the matrix of the p-power map.
    frobenius: Vec<Vec<u64>>,
    sqrt: OnceLock<SqrtData>,
}

/// Handle to a finite field F_{p^n}.
#[derive(Clone)]
pub struct FieldDescriptor(Arc<FieldInner>);

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} {:?}", self.0.p, self.0.degree, self.0.modulus)
    }
}

fn field_cache() -> &'static Mutex<HashMap<(u64, usize), FieldDescriptor>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), FieldDescriptor>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds F_{p^n} with the first monic irreducible modulus in index order
/// (coefficient vector read as a base-p integer, constant term least
/// significant), so the same `(p, n)` always yields the same field.
pub fn build_extension(p: u64, n: usize) -> Result<FieldDescriptor, FieldError> {
    build_extension_capped(p, n, DEFAULT_DEGREE_CAP)
}

pub fn build_extension_capped(p: u64, n: usize, cap: usize) -> Result<FieldDescriptor, FieldError> {
    if p == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(FieldError::CharacteristicTooLarge(p));
    }
    if !is_prime_u64(p) {
        return Err(FieldError::CompositeModulus(p));
    }
    if n == 0 || n > cap {
        return Err(FieldError::DegreeCapExceeded { degree: n, cap });
    }
    if let Some(f) = field_cache().lock().expect("field cache").get(&(p, n)) {
        return Ok(f.clone());
    }
    let modulus = if n == 1 {
        Vec::new()
    } else {
        first_irreducible(p, n)
    };
    let built = FieldDescriptor::from_modulus(p, n, modulus);
    let mut cache = field_cache().lock().expect("field cache");
    Ok(cache.entry((p, n)).or_insert(built).clone())
}

/// Rabin-style test: `X^{p^n} ≡ X (mod g)` and `gcd(X^{p^d} - X, g) = 1`
/// for every proper divisor `d` of `n`.
pub(crate) fn is_irreducible_mod_p(g: &[u64], p: u64) -> bool {
    let n = match fp_poly::degree(g) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let g = fp_poly::monic(g, p);
    let x = vec![0u64, 1];
    let pe = BigUint::from(p);
    let mut h = x.clone();
    for d in 1..=n {
        h = fp_poly::pow_rem(&h, &pe, &g, p);
        if d < n && n % d == 0 {
            let diff = fp_poly::sub(&h, &x, p);
            if fp_poly::gcd(&g, &diff, p) != vec![1] {
                return false;
            }
        }
    }
    fp_poly::sub(&h, &x, p).is_empty()
}

fn first_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut index: u64 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut t = index;
        for _ in 0..n {
            coeffs.push(t % p);
            t /= p;
        }
        coeffs.push(1);
        index += 1;
        if coeffs[0] == 0 {
            continue;
        }
        if is_irreducible_mod_p(&coeffs, p) {
            return coeffs;
        }
    }
}

impl FieldDescriptor {
    fn from_modulus(p: u64, n: usize, modulus: Vec<u64>) -> Self {
        let order = BigUint::from(p).pow(n as u32);
        let reduction = if n == 1 {
            Vec::new()
        } else {
            (0..n)
                .filter(|&j| modulus[j] != 0)
                .map(|j| (j, p - modulus[j]))
                .collect()
        };
        let frobenius = if n == 1 {
            Vec::new()
        } else {
            let xp = fp_poly::pow_rem(&[0, 1], &BigUint::from(p), &modulus, p);
            let mut cols = Vec::with_capacity(n);
            let mut cur = vec![1u64];
            for _ in 0..n {
                let mut padded = cur.clone();
                padded.resize(n, 0);
                cols.push(padded);
                cur = fp_poly::mul_rem(&cur, &xp, &modulus, p);
            }
            cols
        };
        FieldDescriptor(Arc::new(FieldInner {
            p,
            degree: n,
            modulus,
            reduction,
            order,
            frobenius,
            sqrt: OnceLock::new(),
        }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Monic modulus coefficients, low-to-high (empty for the prime field).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Field size `p^n`.
    pub fn order(&self) -> &BigUint {
        &self.0.order
    }

    /// `p^n - 1`, the order of the multiplicative group.
    pub fn unit_group_order(&self) -> BigUint {
        &self.0.order - 1u32
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            c: vec![0; self.0.degree],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    /// Image of an integer under Z → F_p ⊂ F_{p^n}.
    pub fn from_u64(&self, v: u64) -> FieldElement {
        let mut e = self.zero();
        e.c[0] = v % self.0.p;
        e
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        let p = self.0.p as i64;
        self.from_u64(v.rem_euclid(p) as u64)
    }

    /// Element with the given power-basis coefficients (reduced mod p, padded).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let n = self.0.degree;
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % self.0.p).collect();
        if c.len() > n {
            // Reduce modulo the defining polynomial.
            let mut full = c;
            fp_poly::trim(&mut full);
            c = if n == 1 {
                vec![full.first().copied().unwrap_or(0)]
            } else {
                fp_poly::rem(&full, &self.0.modulus, self.0.p)
            };
        }
        c.resize(n, 0);
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// The class of X (the generator of the power basis).
    pub fn generator(&self) -> FieldElement {
        if self.0.degree == 1 {
            // X ≡ -g_0 never applies; the prime field has no adjoined root.
            return self.zero();
        }
        self.from_coeffs(&[0, 1])
    }

    /// Enumeration of field elements: index `i` has base-p digits as coefficients.
    pub fn element_from_index(&self, mut i: u64) -> FieldElement {
        let n = self.0.degree;
        let p = self.0.p;
        let mut c = Vec::with_capacity(n);
        for _ in 0..n {
            c.push(i % p);
            i /= p;
        }
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let p = self.0.p;
        FieldElement {
            field: self.clone(),
            c: (0..self.0.degree).map(|_| rng.gen_range(0..p)).collect(),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let e = self.random(rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// Field size as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.0.order.to_u64()
    }

    fn sqrt_data(&self) -> &SqrtData {
        self.0.sqrt.get_or_init(|| {
            let q_minus_1 = self.unit_group_order();
            let two_adicity = q_minus_1.trailing_zeros().unwrap_or(0);
            let odd_part = &q_minus_1 >> two_adicity;
            let half = &q_minus_1 >> 1u32;
            let mut i = 1u64;
            let z = loop {
                let cand = self.element_from_index(i);
                if !cand.is_zero() && !cand.pow(&half).is_one() {
                    break cand;
                }
                i += 1;
            };
            SqrtData {
                two_adicity,
                odd_part_plus_one_half: (&odd_part + 1u32) >> 1u32,
                nonresidue_power: z.pow(&odd_part),
                odd_part,
            }
        })
    }
}

/// An element of F_{p^n} in the power basis.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldDescriptor,
    c: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}*t"),
                _ if c == 1 => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    /// Power-basis coefficients, length `n`.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// True if the element lies in the prime field.
    pub fn is_prime_field_element(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// Index in the enumeration of [`FieldDescriptor::element_from_index`].
    pub fn to_index(&self) -> u64 {
        let p = self.field.0.p;
        self.c.iter().rev().fold(0u64, |acc, &x| acc * p + x)
    }

    pub fn square(&self) -> FieldElement {
        self * self
    }

    pub fn double(&self) -> FieldElement {
        self + self
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.field.0.p;
        let c = if self.field.0.degree == 1 {
            vec![fp_poly::inv_mod(self.c[0], p).ok_or(FieldError::DivisionByZero)?]
        } else {
            let (g, s) = fp_poly::half_xgcd(&self.c, &self.field.0.modulus, p);
            debug_assert_eq!(g, vec![1]);
            let mut s = s;
            s.resize(self.field.0.degree, 0);
            s
        };
        Ok(FieldElement {
            field: self.field.clone(),
            c,
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self * &other.inv()?)
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, e: &BigUint) -> FieldElement {
        let mut acc = self.field.one();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> FieldElement {
        self.pow(&BigUint::from(e))
    }

    /// The absolute Frobenius `x ↦ x^p`.
    pub fn frobenius(&self) -> FieldElement {
        let inner = &self.field.0;
        if inner.degree == 1 {
            return self.clone();
        }
        let p = inner.p;
        let n = inner.degree;
        let mut acc = vec![0u128; n];
        for (i, &ci) in self.c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &fj) in inner.frobenius[i].iter().enumerate() {
                acc[j] += (ci * fj) as u128;
            }
        }
        FieldElement {
            field: self.field.clone(),
            c: acc.into_iter().map(|v| (v % p as u128) as u64).collect(),
        }
    }

    pub fn frobenius_pow(&self, k: usize) -> FieldElement {
        let k = k % self.field.0.degree;
        let mut out = self.clone();
        for _ in 0..k {
            out = out.frobenius();
        }
        out
    }

    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let half = self.field.unit_group_order() >> 1u32;
        self.pow(&half).is_one()
    }

    /// Canonical square root: of the two roots `r, -r`, the one whose
    /// coefficient vector (constant term first) is lexicographically smaller.
    pub fn sqrt(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let data = self.field.sqrt_data();
        let mut m = data.two_adicity;
        let mut c = data.nonresidue_power.clone();
        let mut t = self.pow(&data.odd_part);
        let mut r = self.pow(&data.odd_part_plus_one_half);
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = t2.square();
                i += 1;
            }
            debug_assert!(i < m);
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = &t * &c;
            r = &r * &b;
        }
        let neg = -&r;
        Some(if neg.c < r.c { neg } else { r })
    }

    /// Norm-free order test used for roots of unity: is `self^e == 1`?
    pub fn pow_is_one(&self, e: &BigUint) -> bool {
        self.pow(e).is_one()
    }

    fn check_same_field(&self, other: &FieldElement) {
        debug_assert!(
            self.field == other.field,
            "arithmetic across different fields: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    fn mul_impl(&self, other: &FieldElement) -> FieldElement {
        self.check_same_field(other);
        let inner = &self.field.0;
        let p = inner.p;
        let n = inner.degree;
        if n == 1 {
            return FieldElement {
                field: self.field.clone(),
                c: vec![(self.c[0] * other.c[0]) % p],
            };
        }
        let mut acc = vec![0u128; 2 * n - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.c.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        let mut t: Vec<u64> = acc.into_iter().map(|v| (v % p as u128) as u64).collect();
        for i in (n..2 * n - 1).rev() {
            let top = t[i];
            if top == 0 {
                continue;
            }
            for &(j, neg_g) in &inner.reduction {
                let idx = i - n + j;
                t[idx] = (t[idx] + top * neg_g) % p;
            }
        }
        t.truncate(n);
        FieldElement {
            field: self.field.clone(),
            c: t,
        }
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        let p = self.field.0.p;
        FieldElement {
            field: self.field.clone(),
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(&a, &b)| fp_poly::add_mod(a, b, p))
                .collect(),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        let p = self.field.0.p;
        FieldElement {
            field: self.field.clone(),
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(&a, &b)| fp_poly::sub_mod(a, b, p))
                .collect(),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.mul_impl(rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.0.p;
        FieldElement {
            field: self.field.clone(),
            c: self.c.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// `v_ell(n)`: exponent of `ell` in `n` (n > 0).
pub fn valuation(n: &BigUint, ell: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let ell = BigUint::from(ell);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&ell);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// `p^e` as a big integer.
pub fn big_pow(p: u64, e: u64) -> BigUint {
    let mut acc = BigUint::one();
    let b = BigUint::from(p);
    for _ in 0..e {
        acc *= &b;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64, n: usize) -> FieldDescriptor {
        build_extension(p, n).unwrap()
    }

    #[test]
    fn modulus_for_f25_is_x2_plus_2() {
        assert_eq!(f(5, 2).modulus(), &[2, 0, 1]);
    }

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert_eq!(build_extension(2, 3).unwrap_err(), FieldError::EvenCharacteristic);
        assert_eq!(build_extension(9, 1).unwrap_err(), FieldError::CompositeModulus(9));
        assert!(matches!(
            build_extension(7, 65),
            Err(FieldError::DegreeCapExceeded { degree: 65, cap: 64 })
        ));
        assert!(matches!(
            build_extension(7, 0),
            Err(FieldError::DegreeCapExceeded { .. })
        ));
    }

    #[test]
    fn quartic_modulus_over_f7_has_no_small_factor() {
        // Oracle: try every monic divisor of degree 1 and 2 over F_7.
        let g = f(7, 4).modulus().to_vec();
        assert_eq!(g.len(), 5);
        for a in 0..7 {
            assert!(!fp_poly::rem(&g, &[a, 1], 7).is_empty());
        }
        for a in 0..7 {
            for b in 0..7 {
                assert!(!fp_poly::rem(&g, &[a, b, 1], 7).is_empty());
            }
        }
        assert_eq!(f(7, 4).modulus(), build_extension(7, 4).unwrap().modulus());
    }

    #[test]
    fn inverse_examples() {
        let f7 = f(7, 1);
        assert_eq!(f7.from_u64(3).inv().unwrap(), f7.from_u64(5));
        assert!(f7.one().inv().unwrap().is_one());
        assert_eq!(f7.zero().inv().unwrap_err(), FieldError::DivisionByZero);
        let f25 = f(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = f25.random_nonzero(&mut rng);
            assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn pow_examples() {
        let f5 = f(5, 1);
        assert!(f5.from_u64(2).pow_u64(4).is_one());
        assert!(f5.zero().pow_u64(0).is_one());
        let f49 = f(7, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let e = f49.unit_group_order();
        for _ in 0..100 {
            assert!(f49.random_nonzero(&mut rng).pow(&e).is_one());
        }
    }

    #[test]
    fn multiplicative_order_examples() {
        assert_eq!(multiplicative_order(&BigUint::from(7u32), 5).unwrap(), 4);
        assert_eq!(multiplicative_order(&BigUint::from(11u32), 5).unwrap(), 1);
        assert_eq!(multiplicative_order(&BigUint::from(2u32), 7).unwrap(), 3);
        assert!(matches!(
            multiplicative_order(&BigUint::from(10u32), 5),
            Err(FieldError::NotCoprime { .. })
        ));
        for ell in [3u64, 5, 7, 11, 13, 31, 61, 8191] {
            for q in 2..40u32 {
                if let Ok(k) = multiplicative_order(&BigUint::from(q), ell) {
                    assert_eq!((ell - 1) % k, 0);
                    assert_eq!(BigUint::from(q).modpow(&BigUint::from(k), &BigUint::from(ell)), BigUint::one());
                }
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let f7 = f(7, 1);
        assert_eq!(f7.from_u64(2).sqrt().unwrap(), f7.from_u64(3));
        assert!(f7.zero().sqrt().unwrap().is_zero());
        assert!(f7.from_u64(3).sqrt().is_none());
        let f121 = f(11, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let r = f121.random(&mut rng);
            let s = r.square().sqrt().unwrap();
            assert!(s == r || s == -&r);
            assert!(s.coeffs() <= (-&s).coeffs());
        }
    }

    #[test]
    fn frobenius_matches_pth_power() {
        let field = f(13, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = field.random(&mut rng);
            assert_eq!(a.frobenius(), a.pow_u64(13));
            assert_eq!(a.frobenius_pow(5), a);
        }
    }

    #[test]
    fn index_round_trip() {
        let field = f(5, 3);
        for i in 0..125 {
            assert_eq!(field.element_from_index(i).to_index(), i);
        }
    }

    #[test]
    fn valuation_and_primes() {
        assert_eq!(valuation(&BigUint::from(2500u32), 5), 4);
        assert_eq!(valuation(&BigUint::from(50u32), 2), 1);
        assert!(is_prime_u64(8191));
        assert!(!is_prime_u64(8193));
        assert_eq!(factorize_u64(2480), vec![(2, 4), (5, 1), (31, 1)]);
    }
}
