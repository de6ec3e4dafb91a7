//! Hypothesis screening, verification of the bicyclicity and pairing
//! statements over ranges of extension degrees, and corpus scanning.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cmfield::{self, GaloisType, QuarticPolynomial, Ramification};
use crate::curve::{CurveError, GenusTwoCurve, MumfordDivisor};
use crate::ff::{self, fp_poly, FieldElement};
use crate::linalg::{self, ModMatrix};
use crate::pairing::PairingContext;
use crate::torsion::{self, BasisOutcome, FrobeniusMatrix, TorsionBasis, TorsionError};
use crate::zeta::{self, WeilPolynomial, ZetaError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("line {line}: {msg}")]
    Corpus { line: usize, msg: String },
    #[error("bad curve description '{0}'")]
    BadCurveSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error("only {0} independent points found at the full embedding degree")]
    IncompleteBasis(usize),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Settings shared by all instances of a scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub seed: u64,
    pub max_kappa: u64,
    pub ell_max: u64,
    pub m_max: u64,
    pub enum_bound: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            seed: 0,
            max_kappa: 64,
            ell_max: 8192,
            m_max: 64,
            enum_bound: crate::curve::DEFAULT_ENUMERATION_BOUND,
        }
    }
}

/// One corpus line: `y^2 = x^5 + c4 x^4 + ... + c0` over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub label: String,
    pub p: u64,
    /// `[c0, .., c4]`, or six entries ending in the leading 1.
    pub f: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CurveSpec {
    pub fn curve(&self) -> Result<GenusTwoCurve, CurveError> {
        match self.f.len() {
            5 => GenusTwoCurve::from_lower_coeffs(self.p, &self.f),
            _ => GenusTwoCurve::new(self.p, &self.f),
        }
    }
}

impl FromStr for CurveSpec {
    type Err = HarnessError;

    /// Accepts a JSON object or the short form `p:c0,c1,c2,c3,c4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('{') {
            let mut spec: CurveSpec = serde_json::from_str(s)?;
            if spec.label.is_empty() {
                spec.label = short_label(spec.p, &spec.f);
            }
            return Ok(spec);
        }
        let bad = || HarnessError::BadCurveSpec(s.to_string());
        let (p, coeffs) = s.split_once(':').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let f = coeffs
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        if f.len() != 5 && f.len() != 6 {
            return Err(bad());
        }
        Ok(CurveSpec {
            label: short_label(p, &f),
            p,
            f,
            note: None,
        })
    }
}

fn short_label(p: u64, f: &[i64]) -> String {
    let cs: Vec<String> = f.iter().map(|c| c.to_string()).collect();
    format!("{p}:{}", cs.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SkipReason {
    EllEven,
    NotIrreducible,
    NotCM,
    NotPrimitive,
    EllEqualsP,
    EllDoesNotDivideOrder,
    EllDividesPMinus1,
    RamificationIndeterminate,
    EllTooLarge,
    KappaTooLarge,
    EllSquaredDividesPkMinus1,
}

impl SkipReason {
    fn name(self) -> &'static str {
        match self {
            SkipReason::EllEven => "EllEven",
            SkipReason::NotIrreducible => "NotIrreducible",
            SkipReason::NotCM => "NotCM",
            SkipReason::NotPrimitive => "NotPrimitive",
            SkipReason::EllEqualsP => "EllEqualsP",
            SkipReason::EllDoesNotDivideOrder => "EllDoesNotDivideOrder",
            SkipReason::EllDividesPMinus1 => "EllDividesPMinus1",
            SkipReason::RamificationIndeterminate => "RamificationIndeterminate",
            SkipReason::EllTooLarge => "EllTooLarge",
            SkipReason::KappaTooLarge => "KappaTooLarge",
            SkipReason::EllSquaredDividesPkMinus1 => "EllSquaredDividesPkMinus1",
        }
    }

    const ALL: [SkipReason; 11] = [
        SkipReason::EllEven,
        SkipReason::NotIrreducible,
        SkipReason::NotCM,
        SkipReason::NotPrimitive,
        SkipReason::EllEqualsP,
        SkipReason::EllDoesNotDivideOrder,
        SkipReason::EllDividesPMinus1,
        SkipReason::RamificationIndeterminate,
        SkipReason::EllTooLarge,
        SkipReason::KappaTooLarge,
        SkipReason::EllSquaredDividesPkMinus1,
    ];
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SkipReason {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SkipReason::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown skip reason {s}"))
    }
}

/// `Eligible` or `Skipped(reason)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eligibility {
    Eligible,
    Skipped(SkipReason),
}

/// Overall outcome of one `(curve, ℓ)` instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Confirmed,
    Skipped(SkipReason),
    Violation,
    Error(String),
}

impl fmt::Display for Eligibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eligibility::Eligible => f.write_str("Eligible"),
            Eligibility::Skipped(r) => write!(f, "Skipped({r})"),
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Confirmed => f.write_str("Confirmed"),
            Status::Skipped(r) => write!(f, "Skipped({r})"),
            Status::Violation => f.write_str("VIOLATION"),
            Status::Error(e) => write!(f, "Error({e})"),
        }
    }
}

fn parse_wrapped<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    s.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

impl FromStr for Eligibility {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "Eligible" {
            return Ok(Eligibility::Eligible);
        }
        let inner = parse_wrapped(s, "Skipped").ok_or_else(|| format!("bad eligibility {s}"))?;
        Ok(Eligibility::Skipped(inner.parse()?))
    }
}

impl FromStr for Status {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Confirmed" => return Ok(Status::Confirmed),
            "VIOLATION" => return Ok(Status::Violation),
            _ => {}
        }
        if let Some(inner) = parse_wrapped(s, "Skipped") {
            return Ok(Status::Skipped(inner.parse()?));
        }
        if let Some(inner) = parse_wrapped(s, "Error") {
            return Ok(Status::Error(inner.to_string()));
        }
        Err(format!("bad status {s}"))
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Eligibility);
string_serde!(Status);

/// What is known about `End(J)`; only the maximal-order case is covered by
/// the statements checked here, and it is never certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndRing {
    #[serde(rename = "Assumed(EndIsMaximal)")]
    AssumedMaximal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub ell_odd: bool,
    pub p_irreducible: bool,
    pub galois_type: GaloisType,
    pub primitive_cm: bool,
    pub ell_not_p: bool,
    pub ell_divides_order: bool,
    pub ell_not_p_minus_1: bool,
    pub unramified: Ramification,
    pub end_ring: EndRing,
    pub overall: Eligibility,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConfirmsTheoremI,
    NotApplicable,
    #[serde(rename = "VIOLATION")]
    Violation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRow {
    pub m: u64,
    pub rank: usize,
    pub ell_divides_p_m_minus_1: bool,
    pub omega_is_one: bool,
    pub omega_sq_is_one: bool,
    pub verdict: Verdict,
}

/// `true`, `false`, or the string `"NotApplicable"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UvOutcome {
    Holds(bool),
    NotApplicable,
}

impl Serialize for UvOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UvOutcome::Holds(b) => s.serialize_bool(*b),
            UvOutcome::NotApplicable => s.serialize_str("NotApplicable"),
        }
    }
}

impl<'de> Deserialize<'de> for UvOutcome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Bool(b) => Ok(UvOutcome::Holds(b)),
            serde_json::Value::String(s) if s == "NotApplicable" => Ok(UvOutcome::NotApplicable),
            other => Err(serde::de::Error::custom(format!("bad uv_nondeg {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRecord {
    pub label: String,
    pub p: u64,
    pub ell: u64,
    pub k: Option<u64>,
    pub kappa: Option<u64>,
    pub rows: Vec<TheoremRow>,
    pub weil_nondeg_over_k: Option<bool>,
    pub uv_nondeg: UvOutcome,
    pub status: Status,
    pub hypotheses: Option<HypothesisReport>,
    pub checks: Vec<Check>,
    pub violations: Vec<String>,
    /// Degrees `m` in the row range where the characteristic polynomial of
    /// the `p^m`-Frobenius is reducible over Q.
    pub reducible_p_m: Vec<u64>,
}

impl TheoremRecord {
    fn empty(label: &str, p: u64, ell: u64, status: Status) -> Self {
        TheoremRecord {
            label: label.to_string(),
            p,
            ell,
            k: None,
            kappa: None,
            rows: Vec::new(),
            weil_nondeg_over_k: None,
            uv_nondeg: UvOutcome::NotApplicable,
            status,
            hypotheses: None,
            checks: Vec::new(),
            violations: Vec::new(),
            reducible_p_m: Vec::new(),
        }
    }

    pub fn n_confirms(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::ConfirmsTheoremI)
            .count()
    }

    pub fn n_not_applicable(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::NotApplicable)
            .count()
    }

    fn check(&mut self, name: &str, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
        });
        if !passed {
            self.violations.push(format!("check failed: {name}"));
        }
    }
}

/// Screens `(curve, ℓ)` against the hypotheses, in a fixed order; the first
/// failing flag names the skip reason.
pub fn check_hypotheses(w: &WeilPolynomial, ell: u64) -> HypothesisReport {
    let q = QuarticPolynomial::from_weil(w);
    let galois_type = cmfield::classify_galois(&q);
    let p_irreducible = galois_type != GaloisType::NotIrreducible;
    let primitive_cm = matches!(galois_type, GaloisType::C4 | GaloisType::D4OrNonGalois);
    let ell_odd = ell % 2 == 1;
    let ell_not_p = ell != w.p;
    let order = w.at_one();
    let ell_divides_order = ell > 1 && (&order % BigInt::from(ell)).is_zero();
    let ell_not_p_minus_1 = ell > 1 && (w.p - 1) % ell != 0;
    let unramified = if ell > 1 {
        cmfield::ell_ramification(&q, ell)
    } else {
        Ramification::Indeterminate
    };
    let overall = if !ell_odd {
        Eligibility::Skipped(SkipReason::EllEven)
    } else if !p_irreducible {
        Eligibility::Skipped(SkipReason::NotIrreducible)
    } else if galois_type == GaloisType::NotCM {
        Eligibility::Skipped(SkipReason::NotCM)
    } else if !primitive_cm {
        Eligibility::Skipped(SkipReason::NotPrimitive)
    } else if !ell_not_p {
        Eligibility::Skipped(SkipReason::EllEqualsP)
    } else if !ell_divides_order {
        Eligibility::Skipped(SkipReason::EllDoesNotDivideOrder)
    } else if !ell_not_p_minus_1 {
        Eligibility::Skipped(SkipReason::EllDividesPMinus1)
    } else if unramified != Ramification::Unramified {
        Eligibility::Skipped(SkipReason::RamificationIndeterminate)
    } else {
        Eligibility::Eligible
    };
    HypothesisReport {
        ell_odd,
        p_irreducible,
        galois_type,
        primitive_cm,
        ell_not_p,
        ell_divides_order,
        ell_not_p_minus_1,
        unramified,
        end_ring: EndRing::AssumedMaximal,
        overall,
    }
}

/// Deterministic per-instance generator: ChaCha8 keyed by
/// `sha256(seed || label || ℓ)`.
pub fn instance_rng(seed: u64, label: &str, ell: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((label.len() as u64).to_le_bytes());
    h.update(label.as_bytes());
    h.update(ell.to_le_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Everything computed for an eligible instance at the full embedding degree.
pub struct Analysis {
    pub k: u64,
    pub kappa: u64,
    pub basis: TorsionBasis,
    pub frobenius: FrobeniusMatrix,
}

fn rows_for(p: u64, ell: u64, frob: &FrobeniusMatrix, m_hi: u64) -> Vec<TheoremRow> {
    (1..=m_hi)
        .map(|m| {
            let rank = torsion::subgroup_rank(frob, m);
            let divides = fp_poly::pow_mod(p % ell, m, ell) == 1;
            let (omega_is_one, omega_sq_is_one) = torsion::omega_conditions(frob, m);
            let verdict = if omega_sq_is_one {
                Verdict::NotApplicable
            } else if (rank == 2) == divides {
                Verdict::ConfirmsTheoremI
            } else {
                Verdict::Violation
            };
            TheoremRow {
                m,
                rank,
                ell_divides_p_m_minus_1: divides,
                omega_is_one,
                omega_sq_is_one,
                verdict,
            }
        })
        .collect()
}

/// Rows of the bicyclicity check for `m = 1..=m_hi`, from a Frobenius matrix.
pub fn verify_theorem_i(p: u64, frob: &FrobeniusMatrix, m_hi: u64) -> Vec<TheoremRow> {
    rows_for(p, frob.ell(), frob, m_hi)
}

/// Generators of `J(F_{p^k})[ℓ]` computed over F_{p^k}, and whether the
/// Weil pairing is non-degenerate on their span.
pub fn verify_theorem_ii(
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, bool), HarnessError> {
    let out = torsion::torsion_basis(curve, w, ell, k, rng)?;
    let ctx: &PairingContext = out.context();
    let pts = out.points();
    let nondeg = ctx
        .nondegenerate_on(pts, pts, rng)
        .map_err(TorsionError::from)?;
    Ok((out.rank(), nondeg))
}

/// `U = J(F_p)[ℓ]` (sampled over F_p and lifted) against
/// `V = ker(φ - p)` (from the Frobenius matrix). Returns `None` when the
/// dimensions are not both one.
pub fn verify_uv(
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    analysis: &Analysis,
    rng: &mut ChaCha8Rng,
) -> Result<Option<bool>, HarnessError> {
    let ell = analysis.basis.ell;
    let base = curve.jacobian(1)?;
    let big = analysis.basis.jacobian();
    let u_dim = torsion::subgroup_rank(&analysis.frobenius, 1);
    let shifted = analysis
        .frobenius
        .matrix
        .sub(&ModMatrix::identity(ell, 4).scale(curve.p() % ell));
    let v_basis = shifted.kernel();
    if u_dim != 1 || v_basis.len() != 1 {
        return Ok(None);
    }
    let u_point = torsion::torsion_point(&base, w, ell, rng)?;
    let u_lift = big.lift(&u_point)?;
    // coords_of verifies the lifted point lies in the span of the basis
    let u_coords = analysis.basis.coords_of(&u_lift, rng)?;
    let u = analysis.basis.combine(&u_coords);
    let v = analysis.basis.combine(&v_basis[0]);
    let holds = analysis
        .basis
        .context()
        .nondegenerate_on(&[u], &[v], rng)
        .map_err(TorsionError::from)?;
    Ok(Some(holds))
}

/// Full basis and Frobenius matrix at the full embedding degree.
pub fn analyze_instance(
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    max_kappa: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Result<Analysis, SkipReason>, HarnessError> {
    let k = ff::multiplicative_order(&BigUint::from(curve.p()), ell)
        .map_err(|_| TorsionError::BadPrime { ell, p: curve.p() })?;
    let kappa = match torsion::full_embedding_degree(w, ell, max_kappa) {
        Ok(kappa) => kappa,
        Err(TorsionError::CapExceeded(_)) => return Ok(Err(SkipReason::KappaTooLarge)),
        Err(e) => return Err(e.into()),
    };
    let pk_minus_1 = ff::big_pow(curve.p(), k) - 1u32;
    if ff::valuation(&pk_minus_1, ell) >= 2 {
        return Ok(Err(SkipReason::EllSquaredDividesPkMinus1));
    }
    let basis = match torsion::torsion_basis(curve, w, ell, kappa as usize, rng)? {
        BasisOutcome::Full(b) => b,
        BasisOutcome::Partial { rank, .. } => return Err(HarnessError::IncompleteBasis(rank)),
    };
    let frobenius = torsion::frobenius_matrix(w, &basis, rng)?;
    Ok(Ok(Analysis {
        k,
        kappa,
        basis,
        frobenius,
    }))
}

/// Characteristic polynomial over Z of the `p^m`-Frobenius, via power sums.
pub fn weil_polynomial_power(w: &WeilPolynomial, m: u64) -> QuarticPolynomial {
    let c = w.companion();
    let cm = linalg::pow_bigint(&c, m);
    let mut s = Vec::with_capacity(4);
    let mut acc = cm.clone();
    for j in 0..4 {
        if j > 0 {
            acc = linalg::mul_bigint(&acc, &cm);
        }
        s.push((0..4).map(|i| acc[i][i].clone()).sum::<BigInt>());
    }
    // Newton's identities: j e_j = sum_{i=1..j} (-1)^{i-1} e_{j-i} s_i
    let mut e = vec![BigInt::one()];
    for j in 1..=4 {
        let mut t = BigInt::zero();
        for i in 1..=j {
            let term = &e[j - i] * &s[i - 1];
            if i % 2 == 1 {
                t += term;
            } else {
                t -= term;
            }
        }
        e.push(t / BigInt::from(j));
    }
    QuarticPolynomial {
        b: -e[1].clone(),
        c: e[2].clone(),
        d: -e[3].clone(),
        e: e[4].clone(),
    }
}

/// Runs every check on one `(curve, ℓ)` instance.
pub fn process_instance(
    spec: &CurveSpec,
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    config: &ScanConfig,
) -> TheoremRecord {
    let mut rec = TheoremRecord::empty(&spec.label, spec.p, ell, Status::Confirmed);
    let hyp = check_hypotheses(w, ell);
    let overall = hyp.overall;
    rec.hypotheses = Some(hyp);
    if let Eligibility::Skipped(r) = overall {
        rec.status = Status::Skipped(r);
        return rec;
    }
    if ell > config.ell_max {
        rec.status = Status::Skipped(SkipReason::EllTooLarge);
        return rec;
    }
    let mut rng = instance_rng(config.seed, &spec.label, ell);
    match run_eligible(&mut rec, curve, w, ell, config, &mut rng) {
        Ok(()) => {
            if !rec.violations.is_empty() {
                rec.status = Status::Violation;
            }
        }
        Err(HarnessError::Torsion(e @ TorsionError::CharpolyMismatch { .. }))
        | Err(HarnessError::Torsion(e @ TorsionError::DetMismatch { .. })) => {
            rec.violations.push(e.to_string());
            rec.status = Status::Violation;
        }
        Err(e) => rec.status = Status::Error(e.to_string()),
    }
    rec
}

fn run_eligible(
    rec: &mut TheoremRecord,
    curve: &GenusTwoCurve,
    w: &WeilPolynomial,
    ell: u64,
    config: &ScanConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(), HarnessError> {
    let a = match analyze_instance(curve, w, ell, config.max_kappa, rng)? {
        Ok(a) => a,
        Err(reason) => {
            rec.status = Status::Skipped(reason);
            return Ok(());
        }
    };
    rec.k = Some(a.k);
    rec.kappa = Some(a.kappa);
    rec.check("charpoly_matches_weil_polynomial", true);
    rec.check("det_is_p_squared", true);
    rec.check("kappa_multiple_of_k", a.kappa % a.k == 0);
    let exact_order = a.frobenius.matrix.pow(a.kappa).is_identity()
        && (1..a.kappa).all(|j| !a.frobenius.matrix.pow(j).is_identity());
    rec.check("kappa_is_order_of_frobenius", exact_order);
    rec.check("basis_gram_nonsingular", a.basis.gram.rank() == 4);

    let m_hi = (2 * a.kappa).min(config.m_max);
    rec.rows = verify_theorem_i(curve.p(), &a.frobenius, m_hi);
    let lemma_rank_bound = rec
        .rows
        .iter()
        .all(|r| r.omega_is_one || r.rank <= 2);
    rec.check("rank_at_most_two_below_kappa", lemma_rank_bound);
    let tate_lower_bound = rec
        .rows
        .iter()
        .all(|r| !r.ell_divides_p_m_minus_1 || r.rank >= 2);
    rec.check("rank_at_least_two_when_ell_divides", tate_lower_bound);
    for r in &rec.rows {
        if r.verdict == Verdict::Violation {
            rec.violations.push(format!(
                "m = {}: rank {} but ell | p^m - 1 is {}",
                r.m, r.rank, r.ell_divides_p_m_minus_1
            ));
        }
    }
    rec.reducible_p_m = (1..=m_hi)
        .filter(|&m| !cmfield::is_irreducible_quartic(&weil_polynomial_power(w, m)))
        .collect();

    let (rank_k, nondeg) = verify_theorem_ii(curve, w, ell, a.k as usize, rng)?;
    rec.check(
        "rank_over_k_matches_matrix",
        rank_k == torsion::subgroup_rank(&a.frobenius, a.k),
    );
    rec.weil_nondeg_over_k = Some(nondeg);
    if !nondeg {
        rec.violations
            .push("Weil pairing degenerate on J(F_p^k)[ell]".to_string());
    }

    let (omega_k_is_one, _) = torsion::omega_conditions(&a.frobenius, a.k);
    rec.uv_nondeg = if omega_k_is_one {
        UvOutcome::NotApplicable
    } else {
        match verify_uv(curve, w, &a, rng)? {
            Some(holds) => {
                if !holds {
                    rec.violations
                        .push("Weil pairing degenerate on U x V".to_string());
                }
                UvOutcome::Holds(holds)
            }
            None => {
                rec.check("uv_dimensions_are_one", false);
                UvOutcome::NotApplicable
            }
        }
    };
    Ok(())
}

/// Prime factors of `|J(F_p)|` to examine, with odd and even ones alike.
fn candidate_ells(w: &WeilPolynomial) -> Vec<u64> {
    let n = w.at_one();
    match n.to_u64() {
        Some(n) if n > 1 => ff::factorize_u64(n).into_iter().map(|(q, _)| q).collect(),
        _ => Vec::new(),
    }
}

/// All records for one curve.
pub fn scan_curve(spec: &CurveSpec, config: &ScanConfig) -> Vec<TheoremRecord> {
    let curve = match spec.curve() {
        Ok(c) => c,
        Err(e) => {
            return vec![TheoremRecord::empty(
                &spec.label,
                spec.p,
                0,
                Status::Error(e.to_string()),
            )]
        }
    };
    let w = match zeta::weil_polynomial(&curve) {
        Ok(w) => w,
        Err(e) => {
            return vec![TheoremRecord::empty(
                &spec.label,
                spec.p,
                0,
                Status::Error(e.to_string()),
            )]
        }
    };
    candidate_ells(&w)
        .into_iter()
        .map(|ell| process_instance(spec, &curve, &w, ell, config))
        .collect()
}

fn thread_count() -> Option<usize> {
    std::env::var("G2CM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Processes a corpus in parallel; the result is sorted by `(label, ℓ)`.
pub fn scan(corpus: &[CurveSpec], config: &ScanConfig) -> Result<Vec<TheoremRecord>, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::ThreadPool(e.to_string()))?;
    let mut out: Vec<TheoremRecord> = pool.install(|| {
        corpus
            .par_iter()
            .flat_map_iter(|spec| scan_curve(spec, config))
            .collect()
    });
    out.sort_by(|a, b| (&a.label, a.ell).cmp(&(&b.label, b.ell)));
    Ok(out)
}

/// Reads a JSON Lines corpus; blank lines and lines starting with `#` are
/// ignored.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<CurveSpec>, HarnessError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let spec: CurveSpec = serde_json::from_str(t).map_err(|e| HarnessError::Corpus {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if spec.f.len() != 5 && spec.f.len() != 6 {
            return Err(HarnessError::Corpus {
                line: i + 1,
                msg: format!("expected 5 or 6 coefficients, got {}", spec.f.len()),
            });
        }
        out.push(spec);
    }
    Ok(out)
}

pub fn write_report<W: Write>(mut out: W, records: &[TheoremRecord]) -> Result<(), HarnessError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_summary<W: Write>(mut out: W, records: &[TheoremRecord]) -> Result<(), HarnessError> {
    writeln!(out, "label,ell,k,kappa,n_confirms,n_not_applicable,status")?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv_field(&r.label),
            r.ell,
            opt(r.k),
            opt(r.kappa),
            r.n_confirms(),
            r.n_not_applicable(),
            csv_field(&r.status.to_string())
        )?;
    }
    Ok(())
}

pub fn has_violation(records: &[TheoremRecord]) -> bool {
    records.iter().any(|r| r.status == Status::Violation)
}

/// Outcome of [`pairing_axioms`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub cases: usize,
    pub bilinearity_failures: usize,
    pub alternating_failures: usize,
    pub ell_power_failures: usize,
    pub tate_coset_failures: usize,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.bilinearity_failures == 0
            && self.alternating_failures == 0
            && self.ell_power_failures == 0
            && self.tate_coset_failures == 0
    }
}

/// Random checks of the Weil and Tate pairing axioms on `J[ℓ]` over the full
/// embedding degree. Each case draws fresh torsion points from the basis.
pub fn pairing_axioms(basis: &TorsionBasis, cases: usize, rng: &mut ChaCha8Rng) -> Result<AxiomReport, HarnessError> {
    use rand::Rng;
    let ell = basis.ell;
    let ctx = basis.context();
    let jac = basis.jacobian();
    let ellb = BigUint::from(ell);
    let mut rep = AxiomReport::default();
    let rand_point = |rng: &mut ChaCha8Rng| -> MumfordDivisor {
        let c: Vec<u64> = (0..4).map(|_| rng.gen_range(0..ell)).collect();
        basis.combine(&c)
    };
    let dl = |z: FieldElement| ctx.dlog(&z).map_err(TorsionError::from);
    for _ in 0..cases {
        rep.cases += 1;
        let a = rand_point(rng);
        let b = rand_point(rng);
        let c = rand_point(rng);
        let ab = jac.add(&a, &b);
        let e_ab_c = ctx.weil(&ab, &c, rng).map_err(TorsionError::from)?;
        let e_a_c = ctx.weil(&a, &c, rng).map_err(TorsionError::from)?;
        let e_b_c = ctx.weil(&b, &c, rng).map_err(TorsionError::from)?;
        if e_ab_c != &e_a_c * &e_b_c {
            rep.bilinearity_failures += 1;
        }
        let e_c_a = ctx.weil(&c, &a, rng).map_err(TorsionError::from)?;
        if (dl(e_a_c.clone())? + dl(e_c_a)?) % ell != 0 {
            rep.bilinearity_failures += 1;
        }
        if !ctx.weil(&a, &a, rng).map_err(TorsionError::from)?.is_one() {
            rep.alternating_failures += 1;
        }
        if !e_a_c.pow(&ellb).is_one() {
            rep.ell_power_failures += 1;
        }
        // ê(a, y) depends only on y mod ℓJ(F)
        let y = jac.random_divisor(rng)?;
        let z = jac.random_divisor(rng)?;
        let shifted = jac.add(&y, &jac.mul_u64(&z, ell));
        let t1 = ctx.tate(&a, &y, rng).map_err(TorsionError::from)?;
        let t2 = ctx.tate(&a, &shifted, rng).map_err(TorsionError::from)?;
        if t1 != t2 {
            rep.tate_coset_failures += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weil(p: u64, f: &[i64]) -> WeilPolynomial {
        let c = GenusTwoCurve::from_lower_coeffs(p, f).unwrap();
        zeta::weil_polynomial(&c).unwrap()
    }

    #[test]
    fn hypothesis_gate_examples() {
        let w7 = weil(7, &[1, 0, 0, 0, 0]);
        for ell in [3, 5, 7] {
            assert_eq!(
                check_hypotheses(&w7, ell).overall,
                Eligibility::Skipped(SkipReason::NotPrimitive)
            );
        }
        assert_eq!(
            check_hypotheses(&w7, 2).overall,
            Eligibility::Skipped(SkipReason::EllEven)
        );
        let w31 = weil(31, &[8, 0, 0, 0, 0]);
        assert_eq!(check_hypotheses(&w31, 5).overall, Eligibility::Skipped(SkipReason::EllDividesPMinus1));
        let h = check_hypotheses(&w31, 11);
        assert_eq!(h.overall, Eligibility::Eligible);
        assert_eq!(h.galois_type, GaloisType::C4);
        assert_eq!(check_hypotheses(&w31, 13).overall, Eligibility::Skipped(SkipReason::EllDoesNotDivideOrder));
    }

    #[test]
    fn weil_polynomial_powers() {
        let w = weil(31, &[8, 0, 0, 0, 0]);
        assert_eq!(weil_polynomial_power(&w, 1), QuarticPolynomial::from_weil(&w));
        for m in 1..5 {
            let pm = weil_polynomial_power(&w, m);
            assert_eq!(pm.e, BigInt::from(31u64.pow(2 * m as u32)));
            // P_m(1) = |J(F_{p^m})|
            let one = pm.eval(&BigInt::one());
            assert_eq!(one, BigInt::from(zeta::jacobian_order(&w, m)));
        }
    }

    #[test]
    fn curve_spec_parsing() {
        let s: CurveSpec = "31:8,0,0,0,0".parse().unwrap();
        assert_eq!(s.p, 31);
        assert_eq!(s.f, vec![8, 0, 0, 0, 0]);
        let j: CurveSpec = r#"{"label":"a","p":7,"f":[1,0,0,0,0,1]}"#.parse().unwrap();
        assert_eq!(j.curve().unwrap(), GenusTwoCurve::new(7, &[1, 0, 0, 0, 0, 1]).unwrap());
        assert!("31:1,2".parse::<CurveSpec>().is_err());
        assert!("x:1,2,3,4,5".parse::<CurveSpec>().is_err());
    }

    #[test]
    fn status_strings_round_trip() {
        for s in [
            Status::Confirmed,
            Status::Violation,
            Status::Skipped(SkipReason::KappaTooLarge),
            Status::Error("boom".into()),
        ] {
            assert_eq!(s.to_string().parse::<Status>().unwrap(), s);
        }
        let json = serde_json::to_string(&UvOutcome::NotApplicable).unwrap();
        assert_eq!(json, "\"NotApplicable\"");
        assert_eq!(serde_json::from_str::<UvOutcome>("true").unwrap(), UvOutcome::Holds(true));
    }

    #[test]
    fn instance_rng_depends_on_all_inputs() {
        use rand::RngCore;
        let a = instance_rng(0, "x", 11).next_u64();
        assert_eq!(a, instance_rng(0, "x", 11).next_u64());
        assert_ne!(a, instance_rng(1, "x", 11).next_u64());
        assert_ne!(a, instance_rng(0, "y", 11).next_u64());
        assert_ne!(a, instance_rng(0, "x", 13).next_u64());
    }
}
