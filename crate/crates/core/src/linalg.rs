//! Small dense matrices over F_ℓ and exact integer determinants.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ff::fp_poly::{add_mod, inv_mod, mul_mod, sub_mod};

/// Dense matrix over F_ℓ for a prime ℓ < 2^32.
#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
    ell: u64,
    rows: usize,
    cols: usize,
    a: Vec<u64>,
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[mod {}]", self.ell)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl ModMatrix {
    pub fn zeros(ell: u64, rows: usize, cols: usize) -> Self {
        ModMatrix {
            ell,
            rows,
            cols,
            a: vec![0; rows * cols],
        }
    }

    pub fn identity(ell: u64, n: usize) -> Self {
        let mut m = Self::zeros(ell, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(ell: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(ell, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % ell);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(ell: u64, cols: &[Vec<u64>]) -> Self {
        Self::from_rows(ell, cols).transpose()
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.cols + j] = v % self.ell;
    }

    pub fn row(&self, i: usize) -> Vec<u64> {
        self.a[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ell, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.ell, self.rows)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut m = self.clone();
        for (x, &y) in m.a.iter_mut().zip(&o.a) {
            *x = add_mod(*x, y, self.ell);
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut m = self.clone();
        for (x, &y) in m.a.iter_mut().zip(&o.a) {
            *x = sub_mod(*x, y, self.ell);
        }
        m
    }

    pub fn scale(&self, s: u64) -> Self {
        let mut m = self.clone();
        let s = s % self.ell;
        for x in m.a.iter_mut() {
            *x = mul_mod(*x, s, self.ell);
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut m = Self::zeros(self.ell, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += (self.get(i, k) * o.get(k, j)) as u128;
                }
                m.set(i, j, (acc % self.ell as u128) as u64);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let acc: u128 = (0..self.cols)
                    .map(|k| (self.get(i, k) * (v[k] % self.ell)) as u128)
                    .sum();
                (acc % self.ell as u128) as u64
            })
            .collect()
    }

    pub fn pow(&self, e: u64) -> Self {
        self.pow_big(&BigUint::from(e))
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.ell, self.rows);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// Row echelon form in place; returns pivot columns.
    fn echelon(&mut self) -> Vec<usize> {
        let ell = self.ell;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.a.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), ell).expect("prime modulus");
            for j in 0..self.cols {
                let v = mul_mod(self.get(r, j), inv, ell);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = sub_mod(self.get(i, j), mul_mod(factor, self.get(r, j), ell), ell);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().len()
    }

    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let ell = self.ell;
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1u64;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    m.a.swap(pr * n + j, c * n + j);
                }
                det = (ell - det) % ell;
            }
            let pivot = m.get(c, c);
            det = mul_mod(det, pivot, ell);
            let inv = inv_mod(pivot, ell).expect("prime modulus");
            for i in c + 1..n {
                let factor = mul_mod(m.get(i, c), inv, ell);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let v = sub_mod(m.get(i, j), mul_mod(factor, m.get(c, j), ell), ell);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let ell = self.ell;
        let mut m = self.clone();
        let pivots = m.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u64; self.cols];
                x[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = (ell - m.get(r, fc)) % ell;
                }
                x
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.ell, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.echelon();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Monic characteristic polynomial `det(X I - A)`, low-to-high, via
    /// reduction to upper Hessenberg form.
    pub fn charpoly(&self) -> Vec<u64> {
        assert_eq!(self.rows, self.cols);
        let ell = self.ell;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(pi) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if pi != j + 1 {
                for c in 0..n {
                    h.a.swap(pi * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.a.swap(r * n + pi, r * n + j + 1);
                }
            }
            let inv = inv_mod(h.get(j + 1, j), ell).expect("prime modulus");
            for k in j + 2..n {
                let t = mul_mod(h.get(k, j), inv, ell);
                if t == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = sub_mod(h.get(k, c), mul_mod(t, h.get(j + 1, c), ell), ell);
                    h.set(k, c, v);
                }
                for r in 0..n {
                    let v = add_mod(h.get(r, j + 1), mul_mod(t, h.get(r, k), ell), ell);
                    h.set(r, j + 1, v);
                }
            }
        }
        // p_{m+1} = (X - h_mm) p_m - sum_{i<m} h_im (prod_{k=i+1..m} h_{k,k-1}) p_i
        let mut ps: Vec<Vec<u64>> = vec![vec![1]];
        for m in 0..n {
            let prev = &ps[m];
            let mut next = vec![0u64; m + 2];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = add_mod(next[d + 1], c, ell);
                next[d] = sub_mod(next[d], mul_mod(c, h.get(m, m), ell), ell);
            }
            let mut prod = 1u64;
            for i in (0..m).rev() {
                prod = mul_mod(prod, h.get(i + 1, i), ell);
                let coef = mul_mod(h.get(i, m), prod, ell);
                if coef == 0 {
                    continue;
                }
                for (d, &c) in ps[i].iter().enumerate() {
                    next[d] = sub_mod(next[d], mul_mod(coef, c, ell), ell);
                }
            }
            ps.push(next);
        }
        ps.pop().expect("nonempty")
    }
}

/// Exact determinant of a square integer matrix (fraction-free Bareiss).
pub fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Product of two square integer matrices.
pub fn mul_bigint(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn pow_bigint(a: &[Vec<BigInt>], e: u64) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut acc: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut base = a.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_bigint(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_bigint(&base, &base);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(ell: u64, n: usize, rng: &mut ChaCha8Rng) -> ModMatrix {
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..ell)).collect())
            .collect();
        ModMatrix::from_rows(ell, &rows)
    }

    fn eval_matrix_poly(m: &ModMatrix, poly: &[u64]) -> ModMatrix {
        let mut acc = ModMatrix::zeros(m.ell(), m.rows(), m.cols());
        for &c in poly.iter().rev() {
            acc = acc.mul(m).add(&ModMatrix::identity(m.ell(), m.rows()).scale(c));
        }
        acc
    }

    #[test]
    fn charpoly_satisfies_cayley_hamilton() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for ell in [3u64, 5, 7, 31, 8191] {
            for _ in 0..50 {
                let m = random(ell, 4, &mut rng);
                let cp = m.charpoly();
                assert_eq!(cp.len(), 5);
                assert_eq!(cp[4], 1);
                assert_eq!(eval_matrix_poly(&m, &cp), ModMatrix::zeros(ell, 4, 4));
                // constant term is det(-A) = det(A) for even dimension
                assert_eq!(cp[0], m.det());
            }
        }
    }

    #[test]
    fn kernel_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let ell = 11;
            let a = random(ell, 4, &mut rng).mul(&ModMatrix::from_rows(
                ell,
                &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 1]],
            ));
            let k = a.kernel();
            assert_eq!(k.len(), 4 - a.rank());
            for x in &k {
                assert!(a.mul_vec(x).iter().all(|&c| c == 0));
            }
            let x: Vec<u64> = (0..4).map(|_| rng.gen_range(0..ell)).collect();
            let b = a.mul_vec(&x);
            let y = a.solve(&b).unwrap();
            assert_eq!(a.mul_vec(&y), b);
        }
    }

    #[test]
    fn bareiss_matches_small_cases() {
        let m: Vec<Vec<BigInt>> = [[2, 0, 1], [1, 3, 2], [1, 1, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_bigint(&m), BigInt::from(6));
        let z: Vec<Vec<BigInt>> = [[0, 1], [1, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(det_bigint(&z), BigInt::from(-1));
    }
}
