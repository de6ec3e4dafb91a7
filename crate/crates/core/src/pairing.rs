//! Miller's algorithm on genus-2 Jacobians, reduced Tate and Weil pairings,
//! and discrete logarithms in μ_ℓ.
//!
//! Functions are evaluated at effective divisors through resultants: for an
//! effective divisor `E = (u_E, v_E)` and a polynomial `g(x)`, the value
//! `Π g(P)` over the points of `E` equals `Res(u_E, g)`, and `y - v(x)`
//! evaluates to `Res(u_E, v_E - v)`. No splitting field of `u_E` is needed.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::curve::{CurveError, Jacobian, MillerFunction, MumfordDivisor};
use crate::ff::{FieldDescriptor, FieldElement};
use crate::linalg::ModMatrix;
use crate::poly::Poly;

/// Default number of re-randomizations when an evaluation hits a zero or pole.
pub const DEFAULT_SUPPORT_RETRIES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("evaluation divisor meets a zero or pole of the Miller function")]
    SupportCollision,
    #[error("the point is not killed by {0}")]
    NotTorsion(u64),
    #[error("{ell} does not divide |F^*| = {q_minus_1}")]
    RootsOfUnityMissing { ell: u64, q_minus_1: String },
    #[error("{ell}^2 divides |F^*|, so the reduced Tate ratio is identically 1")]
    EllSquaredDividesUnitOrder { ell: u64 },
    #[error("no support-disjoint representative found after {0} attempts")]
    SupportExhausted(usize),
    #[error("value is not in the group of {0}-th roots of unity")]
    DlogFailure(u64),
    #[error("evaluation divisor has nonzero degree")]
    UnbalancedDivisor,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A degree-zero formal sum `Σ a_i E_i` of effective divisors.
pub type EvalDivisor = Vec<(i64, MumfordDivisor)>;

/// `Π_{u(α)=0} g(α)` for monic `u` of degree at most 2.
fn resultant_small(u: &Poly, g: &Poly) -> FieldElement {
    let field = u.field();
    match u.degree() {
        None | Some(0) => field.one(),
        Some(1) => g.eval(&-&u.coeff(0)),
        _ => {
            let r = g.rem(u);
            let (r0, r1) = (r.coeff(0), r.coeff(1));
            let (u0, u1) = (u.coeff(0), u.coeff(1));
            &(&r0.square() - &(&(&r0 * &r1) * &u1)) + &(&r1.square() * &u0)
        }
    }
}

/// `(numerator, denominator)` of a Miller step function at an effective divisor.
fn eval_step(h: &MillerFunction, e: &MumfordDivisor) -> (FieldElement, FieldElement) {
    let field = e.field();
    let mut num = if h.gcd.is_one() {
        field.one()
    } else {
        resultant_small(e.u(), &h.gcd)
    };
    let mut den = field.one();
    for (v, u) in &h.steps {
        num = &num * &resultant_small(e.u(), &e.v().sub(v));
        den = &den * &resultant_small(e.u(), u);
    }
    (num, den)
}

/// Runs the Miller loop for `x` and `ell`, evaluating the resulting
/// function `f_x` (with `div f_x = ell·x`) at each effective divisor in
/// `targets`. Returns `(numerator, denominator)` pairs.
fn miller_loop(
    jac: &Jacobian,
    x: &MumfordDivisor,
    ell: u64,
    targets: &[&MumfordDivisor],
) -> Result<Vec<(FieldElement, FieldElement)>, PairingError> {
    let field = jac.field();
    let mut acc: Vec<(FieldElement, FieldElement)> =
        targets.iter().map(|_| (field.one(), field.one())).collect();
    let mut t = x.clone();
    let bits = 64 - ell.leading_zeros();
    for i in (0..bits - 1).rev() {
        let (t2, h) = jac.add_with_function(&t, &t);
        for (a, e) in acc.iter_mut().zip(targets) {
            let (n, d) = eval_step(&h, e);
            a.0 = &a.0.square() * &n;
            a.1 = &a.1.square() * &d;
        }
        t = t2;
        if (ell >> i) & 1 == 1 {
            let (t2, h) = jac.add_with_function(&t, x);
            for (a, e) in acc.iter_mut().zip(targets) {
                let (n, d) = eval_step(&h, e);
                a.0 = &a.0 * &n;
                a.1 = &a.1 * &d;
            }
            t = t2;
        }
    }
    if !t.is_identity() {
        return Err(PairingError::NotTorsion(ell));
    }
    if acc.iter().any(|(n, d)| n.is_zero() || d.is_zero()) {
        return Err(PairingError::SupportCollision);
    }
    Ok(acc)
}

/// `f_x(y) = Π f_x(E_i)^{a_i}` for a degree-zero sum of effective divisors.
pub fn miller_eval(
    jac: &Jacobian,
    x: &MumfordDivisor,
    ell: u64,
    y: &EvalDivisor,
) -> Result<FieldElement, PairingError> {
    let total: i64 = y.iter().map(|(a, e)| a * e.degree() as i64).sum();
    if total != 0 {
        return Err(PairingError::UnbalancedDivisor);
    }
    let targets: Vec<&MumfordDivisor> = y.iter().map(|(_, e)| e).collect();
    let vals = miller_loop(jac, x, ell, &targets)?;
    let field = jac.field();
    let mut num = field.one();
    let mut den = field.one();
    for ((a, _), (n, d)) in y.iter().zip(vals) {
        let k = a.unsigned_abs();
        if *a >= 0 {
            num = &num * &n.pow_u64(k);
            den = &den * &d.pow_u64(k);
        } else {
            num = &num * &d.pow_u64(k);
            den = &den * &n.pow_u64(k);
        }
    }
    Ok(num.div(&den).expect("nonzero denominator"))
}

/// Discrete logarithms in μ_ℓ ⊂ F^* by baby-step giant-step.
#[derive(Clone, Debug)]
pub struct MuEll {
    ell: u64,
    zeta: FieldElement,
    baby: HashMap<Vec<u64>, u64>,
    giant: FieldElement,
    step: u64,
}

impl MuEll {
    /// Fixes the generator `ζ = c^{(q-1)/ℓ}` for the first `c` in index
    /// order giving a nontrivial value.
    pub fn new(field: &FieldDescriptor, ell: u64) -> Result<Self, PairingError> {
        let q1 = field.unit_group_order();
        if !(&q1 % ell).is_zero() {
            return Err(PairingError::RootsOfUnityMissing {
                ell,
                q_minus_1: q1.to_string(),
            });
        }
        let e = &q1 / ell;
        let mut i = 1u64;
        let zeta = loop {
            let z = field.element_from_index(i).pow(&e);
            if !z.is_one() {
                break z;
            }
            i += 1;
        };
        let step = (ell as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = field.one();
        for j in 0..step {
            baby.entry(cur.coeffs().to_vec()).or_insert(j);
            cur = &cur * &zeta;
        }
        let giant = cur.inv().expect("root of unity is nonzero");
        Ok(MuEll {
            ell,
            zeta,
            baby,
            giant,
            step,
        })
    }

    pub fn generator(&self) -> &FieldElement {
        &self.zeta
    }

    /// `k` in `[0, ℓ)` with `ζ^k = z`.
    pub fn dlog(&self, z: &FieldElement) -> Result<u64, PairingError> {
        let mut gamma = z.clone();
        for i in 0..=self.step {
            if let Some(&j) = self.baby.get(gamma.coeffs()) {
                return Ok((i * self.step + j) % self.ell);
            }
            gamma = &gamma * &self.giant;
        }
        Err(PairingError::DlogFailure(self.ell))
    }
}

/// Pairings on `J(F)[ℓ]` for a fixed Jacobian and prime ℓ with `ℓ | |F^*|`.
#[derive(Clone, Debug)]
pub struct PairingContext {
    jac: Jacobian,
    ell: u64,
    final_exp: BigUint,
    mu: MuEll,
    retries: usize,
}

impl PairingContext {
    pub fn new(jac: &Jacobian, ell: u64) -> Result<Self, PairingError> {
        let mu = MuEll::new(jac.field(), ell)?;
        Ok(PairingContext {
            jac: jac.clone(),
            ell,
            final_exp: jac.field().unit_group_order() / ell,
            mu,
            retries: DEFAULT_SUPPORT_RETRIES,
        })
    }

    pub fn jacobian(&self) -> &Jacobian {
        &self.jac
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn mu(&self) -> &MuEll {
        &self.mu
    }

    /// True when `ℓ^2 ∤ |F^*|`, so the Weil ratio is a faithful power of
    /// the Weil pairing.
    pub fn weil_is_available(&self) -> bool {
        !(&self.final_exp % self.ell).is_zero()
    }

    fn random_degree_two<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MumfordDivisor, PairingError> {
        for _ in 0..1000 {
            let r = self.jac.random_divisor(rng)?;
            if r.degree() == 2 {
                return Ok(r);
            }
        }
        Err(PairingError::SupportExhausted(1000))
    }

    /// Reduced Tate pairings `ê(x, y_j)` for several `y_j`, sharing one
    /// Miller loop. Each `y_j` is represented as `S_j - R_j` with `R_j` a
    /// random degree-2 divisor and `S_j = y_j + R_j` also of degree 2.
    pub fn tate_row<R: Rng + ?Sized>(
        &self,
        x: &MumfordDivisor,
        ys: &[MumfordDivisor],
        rng: &mut R,
    ) -> Result<Vec<FieldElement>, PairingError> {
        if x.is_identity() {
            return Ok(ys.iter().map(|_| self.jac.field().one()).collect());
        }
        for _ in 0..self.retries {
            let mut targets = Vec::with_capacity(2 * ys.len());
            for y in ys {
                let (s, r) = loop {
                    let r = self.random_degree_two(rng)?;
                    let s = self.jac.add(y, &r);
                    if s.degree() == 2 {
                        break (s, r);
                    }
                };
                targets.push(s);
                targets.push(r);
            }
            let refs: Vec<&MumfordDivisor> = targets.iter().collect();
            match miller_loop(&self.jac, x, self.ell, &refs) {
                Ok(vals) => {
                    return Ok(vals
                        .chunks(2)
                        .map(|c| {
                            let (ns, ds) = &c[0];
                            let (nr, dr) = &c[1];
                            let v = (ns * dr).div(&(ds * nr)).expect("nonzero");
                            v.pow(&self.final_exp)
                        })
                        .collect())
                }
                Err(PairingError::SupportCollision) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(PairingError::SupportExhausted(self.retries))
    }

    /// Reduced Tate pairing `ê(x, ȳ) = f_x(y')^{(q-1)/ℓ}`.
    pub fn tate<R: Rng + ?Sized>(
        &self,
        x: &MumfordDivisor,
        y: &MumfordDivisor,
        rng: &mut R,
    ) -> Result<FieldElement, PairingError> {
        Ok(self.tate_row(x, std::slice::from_ref(y), rng)?.remove(0))
    }

    /// `e(x, y) = ê(x, ȳ) / ê(y, x̄)`.
    pub fn weil<R: Rng + ?Sized>(
        &self,
        x: &MumfordDivisor,
        y: &MumfordDivisor,
        rng: &mut R,
    ) -> Result<FieldElement, PairingError> {
        if !self.weil_is_available() {
            return Err(PairingError::EllSquaredDividesUnitOrder { ell: self.ell });
        }
        let a = self.tate(x, y, rng)?;
        let b = self.tate(y, x, rng)?;
        Ok(a.div(&b).expect("nonzero"))
    }

    pub fn dlog(&self, z: &FieldElement) -> Result<u64, PairingError> {
        self.mu.dlog(z)
    }

    /// Matrix of `dlog ê(s_i, t_j)`.
    pub fn tate_dlog_matrix<R: Rng + ?Sized>(
        &self,
        s: &[MumfordDivisor],
        t: &[MumfordDivisor],
        rng: &mut R,
    ) -> Result<ModMatrix, PairingError> {
        let mut m = ModMatrix::zeros(self.ell, s.len(), t.len());
        for (i, x) in s.iter().enumerate() {
            for (j, v) in self.tate_row(x, t, rng)?.iter().enumerate() {
                m.set(i, j, self.dlog(v)?);
            }
        }
        Ok(m)
    }

    /// Matrix of `dlog e(s_i, t_j)` for the Weil pairing.
    pub fn weil_dlog_matrix<R: Rng + ?Sized>(
        &self,
        s: &[MumfordDivisor],
        t: &[MumfordDivisor],
        rng: &mut R,
    ) -> Result<ModMatrix, PairingError> {
        if !self.weil_is_available() {
            return Err(PairingError::EllSquaredDividesUnitOrder { ell: self.ell });
        }
        let st = self.tate_dlog_matrix(s, t, rng)?;
        let ts = self.tate_dlog_matrix(t, s, rng)?;
        Ok(st.sub(&ts.transpose()))
    }

    /// True iff the Weil pairing restricted to `span(S) × span(T)` has zero
    /// left and right kernels. `S` and `T` are taken as independent
    /// generating sets, so this holds iff the dlog matrix has rank
    /// `|S| = |T|`.
    pub fn nondegenerate_on<R: Rng + ?Sized>(
        &self,
        s: &[MumfordDivisor],
        t: &[MumfordDivisor],
        rng: &mut R,
    ) -> Result<bool, PairingError> {
        if s.is_empty() || t.is_empty() {
            return Ok(s.is_empty() && t.is_empty());
        }
        let m = self.weil_dlog_matrix(s, t, rng)?;
        let r = m.rank();
        Ok(r == s.len() && r == t.len())
    }
}

/// `(q - 1) / ℓ`, or `None` when ℓ does not divide `q - 1`.
pub fn final_exponent(field: &FieldDescriptor, ell: u64) -> Option<BigUint> {
    let (q, r) = field.unit_group_order().div_rem(&BigUint::from(ell));
    r.is_zero().then_some(q)
}

/// ℓ-adic valuation of `q - 1` for the given field, as a small integer.
pub fn unit_order_valuation(field: &FieldDescriptor, ell: u64) -> u32 {
    crate::ff::valuation(&field.unit_group_order(), ell)
}
