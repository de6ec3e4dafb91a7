//! ℓ-torsion bases, the mod-ℓ Frobenius matrix, and subgroup ranks.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::cmfield::{self, QuarticPolynomial};
use crate::curve::{CurveError, GenusTwoCurve, Jacobian, MumfordDivisor};
use crate::ff::{self, fp_poly};
use crate::linalg::ModMatrix;
use crate::pairing::{PairingContext, PairingError};
use crate::zeta::{self, WeilPolynomial};

/// Default number of cofactor samples in [`torsion_basis`].
pub const DEFAULT_BASIS_BUDGET: usize = 1000;

/// Default cap for [`full_embedding_degree`].
pub const DEFAULT_KAPPA_CAP: u64 = 10_000;

/// Number of random points used as the right-hand side of Tate pairings
/// when testing independence.
const TATE_TEST_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("{ell} divides p = {p}")]
    BadPrime { ell: u64, p: u64 },
    #[error("{ell} does not divide |J(F_p^{m})|")]
    OrderNotDivisible { ell: u64, m: usize },
    #[error("basis construction used its budget of {0} samples")]
    SamplingBudgetExceeded(usize),
    #[error("Weil Gram matrix of a 4-point basis is singular")]
    SingularGram,
    #[error("point is not in the span of the basis")]
    NotInSpan,
    #[error("charpoly of the Frobenius matrix {got:?} differs from P mod ell {expected:?}")]
    CharpolyMismatch { got: Vec<u64>, expected: Vec<u64> },
    #[error("det of the Frobenius matrix is {got}, expected p^2 = {expected} mod ell")]
    DetMismatch { got: u64, expected: u64 },
    #[error("ell divides disc(P); the order of Frobenius is not determined by P mod ell")]
    RamifiedCase,
    #[error("full embedding degree exceeds the cap {0}")]
    CapExceeded(u64),
    #[error("no candidate degree produced a full basis")]
    NoCandidateWorked,
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Four independent points of exact order ℓ over F_{p^m}, with the Weil
/// pairing Gram matrix of discrete logs.
#[derive(Clone, Debug)]
pub struct TorsionBasis {
    pub ell: u64,
    pub degree: usize,
    pub points: Vec<MumfordDivisor>,
    pub gram: ModMatrix,
    ctx: PairingContext,
}

/// Outcome of [`torsion_basis`]: either a full basis or the generators of a
/// smaller `J(F_{p^m})[ℓ]`.
#[derive(Clone, Debug)]
pub enum BasisOutcome {
    Full(TorsionBasis),
    Partial {
        rank: usize,
        points: Vec<MumfordDivisor>,
        ctx: Box<PairingContext>,
    },
}

impl BasisOutcome {
    pub fn rank(&self) -> usize {
        match self {
            BasisOutcome::Full(_) => 4,
            BasisOutcome::Partial { rank, .. } => *rank,
        }
    }

    pub fn points(&self) -> &[MumfordDivisor] {
        match self {
            BasisOutcome::Full(b) => &b.points,
            BasisOutcome::Partial { points, .. } => points,
        }
    }

    pub fn context(&self) -> &PairingContext {
        match self {
            BasisOutcome::Full(b) => &b.ctx,
            BasisOutcome::Partial { ctx, .. } => ctx,
        }
    }
}

/// A found direction of `A[ℓ]` together with a lift of maximal order.
struct Generator {
    point: MumfordDivisor,
    lift: MumfordDivisor,
    exponent: u32,
    row: Vec<u64>,
}

/// Independence oracle based on reduced Tate pairings against a growing set
/// of random points of `J(F)`.
struct TateOracle<'a> {
    ctx: &'a PairingContext,
    tests: Vec<MumfordDivisor>,
}

impl<'a> TateOracle<'a> {
    fn new<R: Rng + ?Sized>(ctx: &'a PairingContext, rng: &mut R) -> Result<Self, TorsionError> {
        let mut o = TateOracle {
            ctx,
            tests: Vec::new(),
        };
        o.extend(rng)?;
        Ok(o)
    }

    fn extend<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<(), TorsionError> {
        for _ in 0..TATE_TEST_POINTS {
            self.tests.push(self.ctx.jacobian().random_divisor(rng)?);
        }
        Ok(())
    }

    fn row<R: Rng + ?Sized>(&self, x: &MumfordDivisor, rng: &mut R) -> Result<Vec<u64>, TorsionError> {
        let vals = self.ctx.tate_row(x, &self.tests, rng)?;
        vals.iter()
            .map(|v| self.ctx.dlog(v).map_err(TorsionError::from))
            .collect()
    }
}

/// `(e, ℓ^{e-1} h)` where `ℓ^e` is the order of `h`, or `None` for the identity.
fn order_and_socle(jac: &Jacobian, h: &MumfordDivisor, ell: u64) -> Option<(u32, MumfordDivisor)> {
    if h.is_identity() {
        return None;
    }
    let mut e = 1;
    let mut cur = h.clone();
    loop {
        let next = jac.mul_u64(&cur, ell);
        if next.is_identity() {
            return Some((e, cur));
        }
        cur = next;
        e += 1;
    }
}

/// Builds generators of `J(F_{p^m})[ℓ]` by cofactor sampling.
///
/// Random elements of the ℓ-primary part `A` are reduced against the
/// generators found so far. The lifts kept alongside each generator span a
/// subgroup `B ⊆ A` that is the direct sum of their cyclic groups, so
/// sampling stops exactly when `|B| = |A|` or four directions are found.
pub fn torsion_basis<R: Rng + ?Sized>(
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    m: usize,
    rng: &mut R,
) -> Result<BasisOutcome, TorsionError> {
    torsion_basis_with_budget(curve, w, ell, m, DEFAULT_BASIS_BUDGET, rng)
}

pub fn torsion_basis_with_budget<R: Rng + ?Sized>(
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    m: usize,
    budget: usize,
    rng: &mut R,
) -> Result<BasisOutcome, TorsionError> {
    let p = curve.p();
    if p % ell == 0 {
        return Err(TorsionError::BadPrime { ell, p });
    }
    let jac = curve.jacobian(m)?;
    let ctx = PairingContext::new(&jac, ell)?;
    let n = zeta::jacobian_order(w, m as u64);
    let v = ff::valuation(&n, ell);
    if v == 0 {
        return Err(TorsionError::OrderNotDivisible { ell, m });
    }
    let cofactor = &n / BigUint::from(ell).pow(v);
    let mut oracle = TateOracle::new(&ctx, rng)?;
    let mut gens: Vec<Generator> = Vec::new();
    let mut samples = 0;
    let done = |gens: &Vec<Generator>| {
        gens.len() == 4 || gens.iter().map(|g| g.exponent).sum::<u32>() == v
    };
    while !done(&gens) {
        if samples == budget {
            return Err(TorsionError::SamplingBudgetExceeded(budget));
        }
        samples += 1;
        let a = jac.mul_big(&jac.random_divisor(rng)?, &cofactor);
        absorb(&jac, &mut oracle, &mut gens, a, ell, rng)?;
    }
    let points: Vec<MumfordDivisor> = gens.into_iter().map(|g| g.point).collect();
    if points.len() == 4 {
        let gram = ctx.weil_dlog_matrix(&points, &points, rng)?;
        if gram.rank() != 4 {
            return Err(TorsionError::SingularGram);
        }
        Ok(BasisOutcome::Full(TorsionBasis {
            ell,
            degree: m,
            points,
            gram,
            ctx,
        }))
    } else {
        Ok(BasisOutcome::Partial {
            rank: points.len(),
            points,
            ctx: Box::new(ctx),
        })
    }
}

/// Reduces `h ∈ A` against the current generators, adding a new direction
/// or exchanging a generator for one with a longer lift.
fn absorb<R: Rng + ?Sized>(
    jac: &Jacobian,
    oracle: &mut TateOracle,
    gens: &mut Vec<Generator>,
    mut h: MumfordDivisor,
    ell: u64,
    rng: &mut R,
) -> Result<(), TorsionError> {
    // Each pass either lowers the order of h, or strictly increases the
    // total exponent of the generators, so the loop terminates.
    loop {
        let Some((e, w)) = order_and_socle(jac, &h, ell) else {
            return Ok(());
        };
        let row = oracle.row(&w, rng)?;
        let rows: Vec<Vec<u64>> = gens.iter().map(|g| g.row.clone()).collect();
        let coeffs = if rows.is_empty() {
            None
        } else {
            ModMatrix::from_cols(ell, &rows).solve(&row)
        };
        let Some(c) = coeffs else {
            if row.iter().all(|&x| x == 0) {
                // A nonzero point pairing trivially with every test point:
                // the test set does not yet span J(F)/ℓJ(F).
                oracle.extend(rng)?;
                refresh_rows(oracle, gens, rng)?;
                continue;
            }
            gens.push(Generator {
                point: w,
                lift: h,
                exponent: e,
                row,
            });
            return Ok(());
        };
        let low = c
            .iter()
            .enumerate()
            .filter(|(i, &ci)| ci != 0 && gens[*i].exponent < e)
            .min_by_key(|(i, _)| gens[*i].exponent)
            .map(|(i, _)| i);
        if let Some(j) = low {
            let old = std::mem::replace(
                &mut gens[j],
                Generator {
                    point: w,
                    lift: h,
                    exponent: e,
                    row,
                },
            );
            h = old.lift;
            continue;
        }
        let mut h2 = h.clone();
        for (g, &ci) in gens.iter().zip(&c) {
            if ci == 0 {
                continue;
            }
            let k = BigUint::from(ci) * BigUint::from(ell).pow(g.exponent - e);
            h2 = jac.sub(&h2, &jac.mul_big(&g.lift, &k));
        }
        if jac.mul_big(&h2, &BigUint::from(ell).pow(e - 1)).is_identity() {
            h = h2;
        } else {
            // Dependency reported by the oracle was spurious.
            oracle.extend(rng)?;
            refresh_rows(oracle, gens, rng)?;
        }
    }
}

fn refresh_rows<R: Rng + ?Sized>(
    oracle: &TateOracle,
    gens: &mut [Generator],
    rng: &mut R,
) -> Result<(), TorsionError> {
    for g in gens.iter_mut() {
        g.row = oracle.row(&g.point, rng)?;
    }
    Ok(())
}

impl TorsionBasis {
    pub fn context(&self) -> &PairingContext {
        &self.ctx
    }

    pub fn jacobian(&self) -> &Jacobian {
        self.ctx.jacobian()
    }

    /// `Σ c_i b_i`.
    pub fn combine(&self, c: &[u64]) -> MumfordDivisor {
        let jac = self.jacobian();
        c.iter()
            .zip(&self.points)
            .fold(jac.identity(), |acc, (&ci, b)| jac.add(&acc, &jac.mul_u64(b, ci)))
    }

    /// Coordinates of an ℓ-torsion point in this basis.
    pub fn coords_of<R: Rng + ?Sized>(&self, x: &MumfordDivisor, rng: &mut R) -> Result<Vec<u64>, TorsionError> {
        let rhs = self.ctx.weil_dlog_matrix(std::slice::from_ref(x), &self.points, rng)?;
        let c = self
            .gram
            .transpose()
            .solve(&rhs.row(0))
            .ok_or(TorsionError::NotInSpan)?;
        if &self.combine(&c) != x {
            return Err(TorsionError::NotInSpan);
        }
        Ok(c)
    }

    /// Coordinates of several points (columns of the result).
    pub fn coords_matrix<R: Rng + ?Sized>(
        &self,
        xs: &[MumfordDivisor],
        rng: &mut R,
    ) -> Result<ModMatrix, TorsionError> {
        let cols = xs
            .iter()
            .map(|x| self.coords_of(x, rng))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ModMatrix::from_cols(self.ell, &cols))
    }
}

/// The p-power Frobenius acting on `J[ℓ]`, in a chosen basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusMatrix {
    pub matrix: ModMatrix,
    pub power: u64,
}

impl FrobeniusMatrix {
    pub fn ell(&self) -> u64 {
        self.matrix.ell()
    }

    pub fn charpoly(&self) -> Vec<u64> {
        self.matrix.charpoly()
    }

    /// Matrix of the `p^m`-power Frobenius.
    pub fn power(&self, m: u64) -> FrobeniusMatrix {
        FrobeniusMatrix {
            matrix: self.matrix.pow(m),
            power: self.power * m,
        }
    }
}

/// A random point of exact order ℓ in `J(F_{p^m})`, found without pairings.
pub fn torsion_point<R: Rng + ?Sized>(
    jac: &Jacobian,
    w: &WeilPolynomial,
    ell: u64,
    rng: &mut R,
) -> Result<MumfordDivisor, TorsionError> {
    let m = jac.field().degree() as u64;
    let n = zeta::jacobian_order(w, m);
    let v = ff::valuation(&n, ell);
    if v == 0 {
        return Err(TorsionError::OrderNotDivisible { ell, m: m as usize });
    }
    let cofactor = &n / BigUint::from(ell).pow(v);
    for _ in 0..DEFAULT_BASIS_BUDGET {
        let a = jac.mul_big(&jac.random_divisor(rng)?, &cofactor);
        if let Some((_, x)) = order_and_socle(jac, &a, ell) {
            return Ok(x);
        }
    }
    Err(TorsionError::SamplingBudgetExceeded(DEFAULT_BASIS_BUDGET))
}

/// Matrix of Frobenius on a full basis; checks `charpoly = P mod ℓ` and
/// `det = p^2 mod ℓ`.
pub fn frobenius_matrix<R: Rng + ?Sized>(
    w: &WeilPolynomial,
    basis: &TorsionBasis,
    rng: &mut R,
) -> Result<FrobeniusMatrix, TorsionError> {
    let jac = basis.jacobian();
    let images: Vec<MumfordDivisor> = basis.points.iter().map(|b| jac.frobenius(b)).collect();
    let matrix = basis.coords_matrix(&images, rng)?;
    let ell = basis.ell;
    let got = matrix.charpoly();
    let expected = zeta::reduce_mod(w, ell);
    if got != expected {
        return Err(TorsionError::CharpolyMismatch { got, expected });
    }
    let det = matrix.det();
    let p2 = fp_poly::mul_mod(w.p % ell, w.p % ell, ell);
    if det != p2 {
        return Err(TorsionError::DetMismatch { got: det, expected: p2 });
    }
    Ok(FrobeniusMatrix { matrix, power: 1 })
}

/// `dim_F_ℓ J(F_{p^m})[ℓ] = 4 - rank(M^m - I)`.
pub fn subgroup_rank(m: &FrobeniusMatrix, power: u64) -> usize {
    let mm = m.matrix.pow(power);
    4 - mm.sub(&ModMatrix::identity(m.ell(), 4)).rank()
}

/// `(M^m = I, M^{2m} = I)`.
pub fn omega_conditions(m: &FrobeniusMatrix, power: u64) -> (bool, bool) {
    let mm = m.matrix.pow(power);
    (mm.is_identity(), mm.mul(&mm).is_identity())
}

/// Least `κ` with `X^κ ≡ 1` in `F_ℓ[X]/(P mod ℓ)`.
pub fn full_embedding_degree(w: &WeilPolynomial, ell: u64, cap: u64) -> Result<u64, TorsionError> {
    if w.p % ell == 0 {
        return Err(TorsionError::BadPrime { ell, p: w.p });
    }
    let q = QuarticPolynomial::from_weil(w);
    if cmfield::ell_ramification(&q, ell) != cmfield::Ramification::Unramified {
        return Err(TorsionError::RamifiedCase);
    }
    let pbar = zeta::reduce_mod(w, ell);
    let x = vec![0u64, 1];
    let mut cur = x.clone();
    for k in 1..=cap {
        if cur == vec![1] {
            return Ok(k);
        }
        cur = fp_poly::mul_rem(&cur, &x, &pbar, ell);
    }
    Err(TorsionError::CapExceeded(cap))
}

/// Smallest candidate `m` for which a full basis over F_{p^m} is found.
/// Candidates not divisible by the embedding degree are skipped, since the
/// Tate pairing needs μ_ℓ in the field.
pub fn measured_full_embedding_degree<R: Rng + ?Sized>(
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    candidates: &[usize],
    rng: &mut R,
) -> Result<usize, TorsionError> {
    let k = ff::multiplicative_order(&BigUint::from(curve.p()), ell)
        .map_err(|_| TorsionError::BadPrime { ell, p: curve.p() })? as usize;
    let mut cands = candidates.to_vec();
    cands.sort_unstable();
    for m in cands {
        if m % k != 0 {
            continue;
        }
        let n = zeta::jacobian_order(w, m as u64);
        if !(&n % ell).is_zero() {
            continue;
        }
        if let BasisOutcome::Full(_) = torsion_basis(curve, w, ell, m, rng)? {
            return Ok(m);
        }
    }
    Err(TorsionError::NoCandidateWorked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance() -> (GenusTwoCurve, WeilPolynomial) {
        let c = GenusTwoCurve::from_lower_coeffs(31, &[8, 0, 0, 0, 0]).unwrap();
        let w = zeta::weil_polynomial(&c).unwrap();
        (c, w)
    }

    #[test]
    fn embedding_degree_from_weil_polynomial() {
        let (_, w) = instance();
        assert_eq!(full_embedding_degree(&w, 11, DEFAULT_KAPPA_CAP).unwrap(), 10);
        assert!(matches!(
            full_embedding_degree(&w, 31, DEFAULT_KAPPA_CAP),
            Err(TorsionError::BadPrime { .. })
        ));
    }

    #[test]
    fn full_basis_and_frobenius_matrix() {
        let (c, w) = instance();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let BasisOutcome::Full(basis) = torsion_basis(&c, &w, 11, 10, &mut rng).unwrap() else {
            panic!("expected a full basis at the embedding degree");
        };
        assert_eq!(basis.points.len(), 4);
        assert_eq!(basis.gram.rank(), 4);
        let jac = basis.jacobian();
        for b in &basis.points {
            assert!(!b.is_identity());
            assert!(jac.mul_u64(b, 11).is_identity());
        }
        let coeffs = [3u64, 0, 7, 10];
        let x = basis.combine(&coeffs);
        assert_eq!(basis.coords_of(&x, &mut rng).unwrap(), coeffs.to_vec());

        let frob = frobenius_matrix(&w, &basis, &mut rng).unwrap();
        assert_eq!(frob.charpoly(), zeta::reduce_mod(&w, 11));
        assert!(frob.matrix.pow(10).is_identity());
        assert_eq!(subgroup_rank(&frob, 10), 4);
        assert_eq!(subgroup_rank(&frob, 5), 2);
        assert_eq!(subgroup_rank(&frob, 1), 1);
        // -1 is an eigenvalue (P(-1) = 671 = 11 * 61), so the quadratic twist
        // contributes a second direction over F_{31^2}.
        assert_eq!(subgroup_rank(&frob, 2), 2);
        assert_eq!(subgroup_rank(&frob, 3), 1);
    }

    #[test]
    fn partial_basis_below_embedding_degree() {
        let (c, w) = instance();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let out = torsion_basis(&c, &w, 11, 5, &mut rng).unwrap();
        assert_eq!(out.rank(), 2);
        let jac = out.context().jacobian();
        for b in out.points() {
            assert!(jac.mul_u64(b, 11).is_identity());
        }
        assert!(matches!(
            torsion_basis(&c, &w, 11, 1, &mut rng),
            Err(TorsionError::Pairing(PairingError::RootsOfUnityMissing { .. }))
        ));
    }

    #[test]
    fn point_over_base_field() {
        let (c, w) = instance();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let jac = c.jacobian(1).unwrap();
        let x = torsion_point(&jac, &w, 11, &mut rng).unwrap();
        assert!(!x.is_identity());
        assert!(jac.mul_u64(&x, 11).is_identity());
    }

    #[test]
    fn measured_degree_agrees() {
        let (c, w) = instance();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = measured_full_embedding_degree(&c, &w, 11, &[1, 2, 5, 10], &mut rng).unwrap();
        assert_eq!(m, 10);
    }
}
