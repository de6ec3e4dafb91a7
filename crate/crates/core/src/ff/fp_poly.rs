//! Dense polynomials over a prime field F_p, stored low-to-high as `Vec<u64>`.
//!
//! These back the extension-field arithmetic (reduction, inversion,
//! irreducibility testing) and the factorization-pattern sampling in
//! `cmfield`. Inputs are assumed reduced mod `p` and `p < 2^32`.

use num_bigint::BigUint;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub(crate) fn trim(a: &mut Vec<u64>) {
    while let Some(&0) = a.last() {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

#[cfg(test)]
pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x * y) as u128;
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|v| (v % p as u128) as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `d` must be nonzero.
pub(crate) fn div_rem(a: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dd = degree(d).expect("division by the zero polynomial");
    let lead_inv = inv_mod(d[dd], p).expect("leading coefficient invertible");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dd];
    for i in (dd..r.len()).rev() {
        let c = mul_mod(r[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        q[i - dd] = c;
        for j in 0..=dd {
            r[i - dd + j] = sub_mod(r[i - dd + j], mul_mod(c, d[j], p), p);
        }
    }
    r.truncate(dd);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], d: &[u64], p: u64) -> Vec<u64> {
    div_rem(a, d, p).1
}

pub(crate) fn monic(a: &[u64], p: u64) -> Vec<u64> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = inv_mod(a[d], p).expect("nonzero leading coefficient");
            scale(&a[..=d], inv, p)
        }
    }
}

/// Monic gcd (zero if both inputs are zero).
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)`, `g = gcd(a, m)` monic.
pub(crate) fn half_xgcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    match degree(&r0) {
        None => (Vec::new(), Vec::new()),
        Some(d) => {
            let inv = inv_mod(r0[d], p).expect("nonzero leading coefficient");
            (scale(&r0, inv, p), scale(&s0, inv, p))
        }
    }
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_rem(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = mul_rem(&acc, &acc, m, p);
        if e.bit(i) {
            acc = mul_rem(&acc, &b, m, p);
        }
    }
    acc
}

/// Distinct-degree factorization pattern of a squarefree polynomial:
/// the multiset of irreducible factor degrees, sorted ascending.
pub(crate) fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut rest = monic(f, p);
    let mut out = Vec::new();
    let x = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 0;
    while let Some(deg) = degree(&rest) {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push(deg);
            break;
        }
        h = pow_rem(&h, &pe, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        let gd = degree(&g).unwrap_or(0);
        if gd > 0 {
            for _ in 0..gd / d {
                out.push(d);
            }
            rest = div_rem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(0, 7), None);
        for a in 1..101 {
            assert_eq!(mul_mod(a, inv_mod(a, 101).unwrap(), 101), 1);
        }
    }

    #[test]
    fn division_identity() {
        let p = 13;
        let a = vec![3, 0, 7, 1, 12, 5];
        let d = vec![2, 9, 4];
        let (q, r) = div_rem(&a, &d, p);
        assert_eq!(add(&mul(&q, &d, p), &r, p), a);
        assert!(degree(&r).map_or(true, |x| x < 2));
    }

    #[test]
    fn half_xgcd_inverts() {
        let p = 7;
        let m = vec![1, 1, 0, 1]; // x^3 + x + 1, irreducible mod 7
        let a = vec![4, 2, 5];
        let (g, s) = half_xgcd(&a, &m, p);
        assert_eq!(g, vec![1]);
        assert_eq!(mul_rem(&s, &a, &m, p), vec![1]);
    }

    #[test]
    fn factor_patterns() {
        // (x - 1)(x - 2)(x^2 + 1) over F_7: x^2 + 1 is irreducible since 7 ≡ 3 mod 4
        let f = mul(&mul(&[6, 1], &[5, 1], 7), &[1, 0, 1], 7);
        assert_eq!(factor_degrees(&f, 7), vec![1, 1, 2]);
        // cyclotomic Φ5 stays irreducible mod 7 (7 ≡ 2 mod 5)
        assert_eq!(factor_degrees(&[1, 1, 1, 1, 1], 7), vec![4]);
        assert_eq!(factor_degrees(&[1, 1, 1, 1, 1], 11), vec![1, 1, 1, 1]);
        assert_eq!(factor_degrees(&[1, 1, 1, 1, 1], 19), vec![2, 2]);
    }
}
