//! Growth functions: representation, validation, normalization, and
//! finite-horizon growth-class certification.
//!
//! A growth function here is a non-decreasing sequence of nonnegative
//! integers on `[0, horizon]`. Every predicate in this module is decided by
//! exhaustive scan with exact arithmetic; certificates record the horizon
//! they were checked over, since nothing asymptotic can be decided
//! mechanically.

use crate::exact::{self, div_ceil_big};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap for bounded searches (L in the bgd check, A in certificates).
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("horizon too small: need at least {need}, got {got}")]
    HorizonTooSmall { need: usize, got: usize },
    #[error("growth values must be non-decreasing (index {0})")]
    NotMonotone(usize),
    #[error("growth values must be nonnegative (index {0})")]
    Negative(usize),
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("invalid growth source: {0}")]
    BadSource(String),
}

/// How a [`GrowthFunction`] was produced. Kept for provenance in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthSource {
    Table,
    Poly {
        #[serde(with = "exact::serde_vec_bigint")]
        coeffs: Vec<BigInt>,
    },
    Exp {
        #[serde(with = "exact::serde_ratio")]
        base: BigRational,
        #[serde(with = "exact::serde_ratio")]
        coeff: BigRational,
    },
}

/// Non-decreasing integer sequence on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthFunction {
    values: Vec<BigInt>,
    horizon: usize,
    source: GrowthSource,
}

/// Wire form: `{"kind":"table","values":[...],"horizon":N}` or
/// `{"kind":"poly","coeffs":[...],"horizon":N}` or
/// `{"kind":"exp","base":"p/q","coeff":"p/q","horizon":N}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum GrowthWire {
    Table {
        values: Vec<String>,
        horizon: Option<usize>,
    },
    Poly {
        coeffs: Vec<String>,
        horizon: usize,
    },
    Exp {
        base: String,
        coeff: String,
        horizon: usize,
    },
}

impl GrowthFunction {
    pub fn from_values(values: Vec<BigInt>) -> Result<Self, GrowthError> {
        if values.len() < 3 {
            return Err(GrowthError::HorizonTooSmall {
                need: 2,
                got: values.len().saturating_sub(1),
            });
        }
        for (i, v) in values.iter().enumerate() {
            if v.is_negative() {
                return Err(GrowthError::Negative(i));
            }
            if i > 0 && v < &values[i - 1] {
                return Err(GrowthError::NotMonotone(i));
            }
        }
        let horizon = values.len() - 1;
        Ok(Self {
            values,
            horizon,
            source: GrowthSource::Table,
        })
    }

    pub fn from_u64_values(values: &[u64]) -> Result<Self, GrowthError> {
        Self::from_values(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// Evaluate `c0 + c1 n + ... + ck n^k` on `[0, horizon]`.
    pub fn from_poly(coeffs: &[BigInt], horizon: usize) -> Result<Self, GrowthError> {
        let mut values = Vec::with_capacity(horizon + 1);
        for n in 0..=horizon {
            let n = BigInt::from(n);
            let mut acc = BigInt::zero();
            for c in coeffs.iter().rev() {
                acc = acc * &n + c;
            }
            values.push(acc);
        }
        let mut out = Self::from_values(values)?;
        out.source = GrowthSource::Poly {
            coeffs: coeffs.to_vec(),
        };
        Ok(out)
    }

    /// Evaluate `floor(coeff * base^n)` on `[0, horizon]`; `base >= 1`.
    pub fn from_exp(
        base: BigRational,
        coeff: BigRational,
        horizon: usize,
    ) -> Result<Self, GrowthError> {
        if base < BigRational::one() || !coeff.is_positive() {
            return Err(GrowthError::BadSource(
                "exp source needs base >= 1 and coeff > 0".to_string(),
            ));
        }
        let mut values = Vec::with_capacity(horizon + 1);
        let mut pow = coeff.clone();
        for _ in 0..=horizon {
            values.push(pow.floor().to_integer());
            pow *= &base;
        }
        let mut out = Self::from_values(values)?;
        out.source = GrowthSource::Exp { base, coeff };
        Ok(out)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn value(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn source(&self) -> &GrowthSource {
        &self.source
    }

    /// Increment `v(n+1) - v(n)`; defined for `n < horizon`.
    pub fn increment(&self, n: usize) -> BigInt {
        &self.values[n + 1] - &self.values[n]
    }

    /// Truncate to a smaller horizon (values are shared semantics, cheap clone).
    pub fn truncated(&self, horizon: usize) -> Result<Self, GrowthError> {
        if horizon >= self.horizon {
            return Ok(self.clone());
        }
        let mut out = Self::from_values(self.values[..=horizon].to_vec())?;
        out.source = self.source.clone();
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let wire = GrowthWire::Table {
            values: self.values.iter().map(|v| v.to_string()).collect(),
            horizon: Some(self.horizon),
        };
        serde_json::to_value(wire).expect("growth wire serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, GrowthError> {
        let wire: GrowthWire = serde_json::from_value(value.clone())
            .map_err(|e| GrowthError::BadSource(e.to_string()))?;
        match wire {
            GrowthWire::Table { values, horizon } => {
                let parsed: Result<Vec<BigInt>, _> = values
                    .iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|e| GrowthError::BadSource(e.to_string()))
                    })
                    .collect();
                let mut parsed = parsed?;
                if let Some(h) = horizon {
                    if h + 1 > parsed.len() {
                        return Err(GrowthError::HorizonTooSmall {
                            need: h,
                            got: parsed.len().saturating_sub(1),
                        });
                    }
                    parsed.truncate(h + 1);
                }
                Self::from_values(parsed)
            }
            GrowthWire::Poly { coeffs, horizon } => {
                let parsed: Result<Vec<BigInt>, _> = coeffs
                    .iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|e| GrowthError::BadSource(e.to_string()))
                    })
                    .collect();
                Self::from_poly(&parsed?, horizon)
            }
            GrowthWire::Exp {
                base,
                coeff,
                horizon,
            } => {
                let base = exact::parse_ratio(&base).map_err(GrowthError::BadSource)?;
                let coeff = exact::parse_ratio(&coeff).map_err(GrowthError::BadSource)?;
                Self::from_exp(base, coeff, horizon)
            }
        }
    }
}

/// Outcome of the bounded-growth-of-derivative check:
/// `1/L <= v(n+2)-v(n+1) <= L (v(n+1)-v(n))` for all `n <= horizon-2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BgdReport {
    pub is_bgd: bool,
    pub minimal_l: Option<u64>,
    pub failing_index: Option<usize>,
}

pub fn check_bgd(v: &GrowthFunction) -> Result<BgdReport, GrowthError> {
    check_bgd_with_cap(v, DEFAULT_SEARCH_CAP)
}

pub fn check_bgd_with_cap(v: &GrowthFunction, cap: u64) -> Result<BgdReport, GrowthError> {
    if v.horizon() < 3 {
        return Err(GrowthError::HorizonTooSmall {
            need: 3,
            got: v.horizon(),
        });
    }
    let cap_big = BigInt::from(cap);
    let mut minimal = BigInt::one();
    for n in 0..=v.horizon() - 2 {
        let d1 = v.increment(n);
        let d2 = v.increment(n + 1);
        // Integer increments: 1/L <= d2 holds for some L iff d2 >= 1.
        if d2 < BigInt::one() {
            return Ok(BgdReport {
                is_bgd: false,
                minimal_l: None,
                failing_index: Some(n),
            });
        }
        // d2 <= L d1 needs d1 >= 1 and L >= ceil(d2/d1).
        if d1.is_zero() {
            return Ok(BgdReport {
                is_bgd: false,
                minimal_l: None,
                failing_index: Some(n),
            });
        }
        let need = div_ceil_big(&d2, &d1);
        if need > cap_big {
            return Ok(BgdReport {
                is_bgd: false,
                minimal_l: None,
                failing_index: Some(n),
            });
        }
        if need > minimal {
            minimal = need;
        }
    }
    Ok(BgdReport {
        is_bgd: true,
        minimal_l: minimal.to_u64(),
        failing_index: None,
    })
}

/// One checked inequality `lhs <= rhs` at index `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityWitness {
    pub n: usize,
    #[serde(with = "exact::serde_bigint")]
    pub lhs: BigInt,
    #[serde(with = "exact::serde_bigint")]
    pub rhs: BigInt,
}

/// Finite-horizon growth-type certificate: when `a` is present,
/// `f(n) <= A h(An+A) + A` and `h(n) <= A f(An+A) + A` were verified for
/// every `n` with `An+A <= horizon`.
///
/// Certificates are horizon-relative: for very large `A` the checked index
/// range shrinks, so the search never accepts an `A` whose checked range
/// would be empty beyond `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub a: Option<u64>,
    pub horizon: usize,
    pub searched_up_to: u64,
    pub forward: Vec<InequalityWitness>,
    pub backward: Vec<InequalityWitness>,
}

impl GrowthCertificate {
    pub fn holds(&self) -> bool {
        self.a.is_some()
    }
}

fn direction_holds(
    f: &GrowthFunction,
    h: &GrowthFunction,
    a: u64,
    horizon: usize,
    witnesses: &mut Vec<InequalityWitness>,
) -> bool {
    witnesses.clear();
    let a_big = BigInt::from(a);
    let mut n = 0usize;
    loop {
        let arg = a as usize * n + a as usize;
        if arg > horizon || n > horizon {
            break;
        }
        let lhs = f.value(n).clone();
        let rhs = &a_big * h.value(arg) + &a_big;
        if lhs > rhs {
            witnesses.push(InequalityWitness { n, lhs, rhs });
            return false;
        }
        witnesses.push(InequalityWitness { n, lhs, rhs });
        n += 1;
    }
    true
}

/// Smallest growth constant `A <= a_max` certifying `f` and `h` are in the
/// same growth class over the joint horizon; failure is a value (`a: None`).
pub fn growth_equivalent(
    f: &GrowthFunction,
    h: &GrowthFunction,
    a_max: u64,
) -> GrowthCertificate {
    let horizon = f.horizon().min(h.horizon());
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    // Require the checked range to contain n = 1, i.e. 2A <= horizon;
    // beyond that every candidate is vacuous at this horizon.
    let effective_max = a_max.min((horizon / 2) as u64);
    for a in 1..=effective_max {
        if direction_holds(f, h, a, horizon, &mut forward)
            && direction_holds(h, f, a, horizon, &mut backward)
        {
            return GrowthCertificate {
                a: Some(a),
                horizon,
                searched_up_to: a,
                forward,
                backward,
            };
        }
    }
    GrowthCertificate {
        a: None,
        horizon,
        searched_up_to: effective_max,
        forward: Vec::new(),
        backward: Vec::new(),
    }
}

/// Function-level doubling: minimal rational `K` with `v(2n) <= K v(n)`,
/// or an unbounded flag when the ratio sequence diverges over the tail window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingReport {
    #[serde(with = "exact::serde_opt_ratio")]
    pub minimal_k: Option<BigRational>,
    pub unbounded: bool,
    pub sup_sequence: Vec<DoublingRatio>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingRatio {
    pub n: usize,
    #[serde(with = "exact::serde_ratio")]
    pub ratio: BigRational,
}

pub const DEFAULT_DOUBLING_WINDOW: usize = 8;

pub fn check_doubling(v: &GrowthFunction) -> DoublingReport {
    check_doubling_with_window(v, DEFAULT_DOUBLING_WINDOW)
}

/// The tail test flags `unbounded` when, over the final `window` ratios, the
/// sequence strictly increases *and* its increments do not decrease. A
/// convergent ratio sequence (e.g. `v(n)=n+1`) increases with shrinking
/// increments and is still reported bounded with its exact max.
pub fn check_doubling_with_window(v: &GrowthFunction, window: usize) -> DoublingReport {
    let mut ratios = Vec::new();
    for n in 1..=v.horizon() / 2 {
        let denom = v.value(n);
        if denom.is_zero() {
            continue;
        }
        ratios.push(DoublingRatio {
            n,
            ratio: BigRational::new(v.value(2 * n).clone(), denom.clone()),
        });
    }
    if ratios.is_empty() {
        return DoublingReport {
            minimal_k: Some(BigRational::one()),
            unbounded: false,
            sup_sequence: ratios,
        };
    }
    let max = ratios
        .iter()
        .map(|r| r.ratio.clone())
        .max()
        .expect("nonempty");
    let w = window.min(ratios.len());
    let tail = &ratios[ratios.len() - w..];
    let strictly_increasing = tail.windows(2).all(|p| p[1].ratio > p[0].ratio);
    let accelerating = w >= 3
        && tail
            .windows(3)
            .all(|p| &p[2].ratio - &p[1].ratio >= &p[1].ratio - &p[0].ratio);
    let unbounded = w >= 3 && strictly_increasing && accelerating;
    DoublingReport {
        minimal_k: if unbounded { None } else { Some(max) },
        unbounded,
        sup_sequence: ratios,
    }
}

/// Heuristic classification of increment behaviour over a tail window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitBehavior {
    IncrementsDiverge,
    IncrementsBoundedBy {
        #[serde(with = "exact::serde_bigint")]
        bound: BigInt,
    },
}

/// Bounded iff the final `window` increments do not exceed the maximum seen
/// before the window; the returned bound is then the global max. This is a
/// finite-horizon heuristic and is recorded as such by callers.
pub fn limit_behavior(v: &GrowthFunction, window: usize) -> LimitBehavior {
    let total = v.horizon(); // increments indexed 0..horizon-1
    let window = window.min(total);
    if window == 0 || window >= total {
        return LimitBehavior::IncrementsDiverge;
    }
    let split = total - window;
    let prefix_max = (0..split).map(|n| v.increment(n)).max().expect("nonempty");
    let tail_max = (split..total).map(|n| v.increment(n)).max().expect("nonempty");
    if tail_max <= prefix_max {
        LimitBehavior::IncrementsBoundedBy { bound: prefix_max }
    } else {
        LimitBehavior::IncrementsDiverge
    }
}

/// Result of [`normalize`]: the adjusted function, its exact growth-class
/// certificate against the input, and the sub-2 exponential envelope
/// `w(n) <= alpha * lambda^n` verified over the horizon.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub w: GrowthFunction,
    pub certificate: GrowthCertificate,
    pub lambda: BigRational,
    pub alpha: BigRational,
    pub dilation: u32,
}

pub const DEFAULT_MAX_DILATION: u32 = 64;

pub fn normalize(v: &GrowthFunction) -> Result<Normalized, GrowthError> {
    normalize_with(v, DEFAULT_SEARCH_CAP, DEFAULT_MAX_DILATION)
}

/// Build `w` with `w(0)=1`, increments clamped into `[2, 2*previous]` from a
/// time-dilated copy of `v`'s increments, then certify `w ~ v`. The dilation
/// `c` grows until the per-`c`-step increment ratio admits an envelope
/// `lambda < 2`.
pub fn normalize_with(
    v: &GrowthFunction,
    a_max: u64,
    max_dilation: u32,
) -> Result<Normalized, GrowthError> {
    let bgd = check_bgd(v)?;
    if !bgd.is_bgd {
        return Err(GrowthError::NormalizationFailed(format!(
            "input is not a bgd-function (failing index {:?})",
            bgd.failing_index
        )));
    }
    let horizon = v.horizon();
    for c in 1..=max_dilation {
        let w = dilated_clamped(v, c as usize);
        let Some((lambda, alpha)) = envelope(&w, c as usize) else {
            continue;
        };
        let certificate = growth_equivalent(&w, v, a_max);
        if certificate.holds() {
            return Ok(Normalized {
                w,
                certificate,
                lambda,
                alpha,
                dilation: c,
            });
        }
    }
    Err(GrowthError::NormalizationFailed(format!(
        "no dilation c <= {max_dilation} certified equivalence over horizon {horizon}"
    )))
}

/// Candidate increments: delta(n) = min(max(2, v-increment at ceil(n/c)), 2 delta(n-1)).
fn dilated_clamped(v: &GrowthFunction, c: usize) -> GrowthFunction {
    let horizon = v.horizon();
    let two = BigInt::from(2);
    let mut values = Vec::with_capacity(horizon + 1);
    values.push(BigInt::one());
    let mut prev_delta = BigInt::one();
    for n in 1..=horizon {
        let m = n.div_ceil(c).min(horizon - 1);
        let raw = v.increment(m);
        let delta = raw.max(two.clone()).min(&prev_delta * &two);
        values.push(values.last().expect("nonempty") + &delta);
        prev_delta = delta;
    }
    GrowthFunction::from_values(values).expect("clamped increments are positive")
}

/// Find rational `lambda < 2` and exact `alpha` with `w(n) <= alpha lambda^n`
/// for all `n <= horizon`. `lambda` is a dyadic upper bound on the c-step
/// increment ratio's c-th root; `alpha` is then computed exactly.
fn envelope(w: &GrowthFunction, c: usize) -> Option<(BigRational, BigRational)> {
    let total = w.horizon();
    let mut max_step = BigRational::one();
    for n in 1..total.saturating_sub(c) {
        let num = w.increment(n + c);
        let den = w.increment(n);
        let r = BigRational::new(num, den);
        if r > max_step {
            max_step = r;
        }
    }
    let two_pow_c = BigRational::from_integer(BigInt::one() << c.min(63) as u32);
    if c <= 63 && max_step >= two_pow_c {
        return None;
    }
    // Dyadic lambda >= max_step^(1/c), strictly below 2.
    let root = exact::ratio_to_f64(&max_step).powf(1.0 / c as f64);
    let scale = 1u64 << 20;
    let mut num = ((root * scale as f64).ceil() as u64).max(scale);
    let mut lambda = BigRational::new(BigInt::from(num), BigInt::from(scale));
    // Nudge upward until lambda^c >= max_step exactly.
    let mut pow = pow_ratio(&lambda, c);
    while pow < max_step {
        num += 1;
        lambda = BigRational::new(BigInt::from(num), BigInt::from(scale));
        if lambda >= BigRational::from_integer(BigInt::from(2)) {
            return None;
        }
        pow = pow_ratio(&lambda, c);
    }
    if lambda >= BigRational::from_integer(BigInt::from(2)) {
        return None;
    }
    // Exact alpha = max over the horizon of w(n) / lambda^n.
    let mut alpha = BigRational::from_integer(w.value(0).clone());
    let mut lam_pow = BigRational::one();
    for n in 1..=w.horizon() {
        lam_pow *= &lambda;
        let cand = BigRational::from_integer(w.value(n).clone()) / &lam_pow;
        if cand > alpha {
            alpha = cand;
        }
    }
    Some((lambda, alpha))
}

fn pow_ratio(r: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// The three normalized-shape conditions checked exactly over the horizon:
/// `w(0) = 1` and `2 <= w(n+2)-w(n+1) <= 2 (w(n+1)-w(n))`.
pub fn is_normalized_shape(w: &GrowthFunction) -> bool {
    if !w.value(0).is_one() {
        return false;
    }
    let two = BigInt::from(2);
    for n in 0..=w.horizon().saturating_sub(2) {
        let d1 = w.increment(n);
        let d2 = w.increment(n + 1);
        if d2 < two || d2 > &two * &d1 {
            return false;
        }
    }
    true
}

/// Convenience: `v(n) = alpha lambda^n` envelope check used by property tests.
pub fn envelope_holds(w: &GrowthFunction, lambda: &BigRational, alpha: &BigRational) -> bool {
    let mut lam_pow = BigRational::one();
    for n in 0..=w.horizon() {
        if n > 0 {
            lam_pow *= lambda;
        }
        if BigRational::from_integer(w.value(n).clone()) > alpha * &lam_pow {
            return false;
        }
    }
    true
}

impl std::fmt::Display for LimitBehavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitBehavior::IncrementsDiverge => write!(f, "increments-diverge"),
            LimitBehavior::IncrementsBoundedBy { bound } => {
                write!(f, "increments-bounded-by({bound})")
            }
        }
    }
}

pub fn poly(coeffs: &[i64], horizon: usize) -> GrowthFunction {
    let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    GrowthFunction::from_poly(&coeffs, horizon).expect("valid polynomial growth")
}

pub fn two_pow(horizon: usize) -> GrowthFunction {
    GrowthFunction::from_exp(
        BigRational::from_integer(BigInt::from(2)),
        BigRational::one(),
        horizon,
    )
    .expect("valid exponential growth")
}

pub fn sub_exp(base_num: u64, base_den: u64, coeff: u64, horizon: usize) -> GrowthFunction {
    GrowthFunction::from_exp(
        BigRational::new(BigInt::from(base_num), BigInt::from(base_den)),
        BigRational::from_integer(BigInt::from_u64(coeff).expect("coeff fits")),
        horizon,
    )
    .expect("valid sub-exponential growth")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bgd_linear_is_l1() {
        let v = poly(&[1, 2], 10);
        let r = check_bgd(&v).unwrap();
        assert!(r.is_bgd);
        assert_eq!(r.minimal_l, Some(1));
    }

    #[test]
    fn bgd_two_pow_is_l2() {
        let v = two_pow(10);
        let r = check_bgd(&v).unwrap();
        assert!(r.is_bgd);
        assert_eq!(r.minimal_l, Some(2));
    }

    #[test]
    fn bgd_zero_increment_fails_at_zero() {
        let v = GrowthFunction::from_u64_values(&[1, 1, 2, 3]).unwrap();
        let r = check_bgd(&v).unwrap();
        assert!(!r.is_bgd);
        assert_eq!(r.failing_index, Some(0));
    }

    #[test]
    fn bgd_small_horizon_rejected() {
        let v = GrowthFunction::from_u64_values(&[1, 2, 3]).unwrap();
        assert!(matches!(
            check_bgd(&v),
            Err(GrowthError::HorizonTooSmall { .. })
        ));
    }

    #[test]
    fn equivalence_is_reflexive_with_a1() {
        let v = poly(&[1, 1, 1], 30);
        let cert = growth_equivalent(&v, &v, 100);
        assert_eq!(cert.a, Some(1));
    }

    #[test]
    fn equivalence_n_vs_2n_is_a2() {
        // Brute-force oracle over candidate A confirmed minimal A=2 at horizon 40.
        let f = poly(&[0, 1], 40);
        let h = poly(&[0, 2], 40);
        let cert = growth_equivalent(&f, &h, 100);
        assert_eq!(cert.a, Some(2));
        let cert_rev = growth_equivalent(&h, &f, 100);
        assert_eq!(cert_rev.a, Some(2));
    }

    #[test]
    fn certificate_witnesses_cover_checked_range() {
        let f = poly(&[1, 2], 20);
        let h = poly(&[1, 3], 20);
        let cert = growth_equivalent(&f, &h, 50);
        let a = cert.a.unwrap() as usize;
        let expect = (20 - a) / a + 1;
        assert_eq!(cert.forward.len(), expect);
        for w in &cert.forward {
            assert!(w.lhs <= w.rhs);
        }
    }

    #[test]
    fn doubling_constant_function() {
        let v = GrowthFunction::from_u64_values(&[1; 11]).unwrap();
        let r = check_doubling(&v);
        assert!(!r.unbounded);
        assert_eq!(r.minimal_k, Some(BigRational::one()));
    }

    #[test]
    fn doubling_linear_horizon_100() {
        // max of (2n+1)/(n+1) over n <= 50 is attained at n = 50: 101/51.
        let v = poly(&[1, 1], 100);
        let r = check_doubling(&v);
        assert!(!r.unbounded);
        assert_eq!(r.minimal_k, Some(exact::parse_ratio("101/51").unwrap()));
    }

    #[test]
    fn doubling_two_pow_unbounded() {
        let v = two_pow(40);
        let r = check_doubling(&v);
        assert!(r.unbounded);
        assert_eq!(r.minimal_k, None);
    }

    #[test]
    fn limit_behavior_linear_bounded() {
        let v = poly(&[1, 2], 50);
        assert_eq!(
            limit_behavior(&v, 10),
            LimitBehavior::IncrementsBoundedBy {
                bound: BigInt::from(2)
            }
        );
    }

    #[test]
    fn limit_behavior_square_diverges() {
        let v = poly(&[0, 0, 1], 50);
        assert_eq!(limit_behavior(&v, 10), LimitBehavior::IncrementsDiverge);
    }

    #[test]
    fn limit_behavior_alternating_increments() {
        // v(n) = n + floor(n/2): increments alternate 1, 2.
        let values: Vec<BigInt> = (0..=40u64).map(|n| BigInt::from(n + n / 2)).collect();
        let v = GrowthFunction::from_values(values).unwrap();
        assert_eq!(
            limit_behavior(&v, 10),
            LimitBehavior::IncrementsBoundedBy {
                bound: BigInt::from(2)
            }
        );
    }

    #[test]
    fn normalize_linear_identity_class() {
        let v = poly(&[1, 2], 60);
        let n = normalize(&v).unwrap();
        assert!(is_normalized_shape(&n.w));
        assert!(n.certificate.holds());
        assert!(envelope_holds(&n.w, &n.lambda, &n.alpha));
        assert!(n.lambda < BigRational::from_integer(BigInt::from(2)));
        // 2n+1 already satisfies the shape conditions; clamping keeps it.
        assert_eq!(n.w.values(), v.values());
        assert_eq!(n.certificate.a, Some(1));
    }

    #[test]
    fn normalize_two_pow_dilates_below_two() {
        let v = two_pow(40);
        let n = normalize(&v).unwrap();
        assert!(is_normalized_shape(&n.w));
        assert!(n.certificate.holds());
        assert!(n.dilation >= 2);
        // Envelope strictly below 2: dilation 2 should land near sqrt(2).
        assert!(n.lambda <= exact::parse_ratio("3/2").unwrap());
        assert!(envelope_holds(&n.w, &n.lambda, &n.alpha));
        let shape = check_bgd(&n.w).unwrap();
        assert!(shape.is_bgd);
        assert!(shape.minimal_l.unwrap() <= 2);
    }

    #[test]
    fn normalize_constant_fails() {
        let v = GrowthFunction::from_u64_values(&[1; 30]).unwrap();
        assert!(matches!(
            normalize(&v),
            Err(GrowthError::NormalizationFailed(_))
        ));
    }

    #[test]
    fn growth_json_round_trip() {
        let v = poly(&[1, 0, 1], 12);
        let j = v.to_json();
        let back = GrowthFunction::from_json(&j).unwrap();
        assert_eq!(back.values(), v.values());
        let poly_json = serde_json::json!({"kind":"poly","coeffs":["1","0","1"],"horizon":12});
        let p = GrowthFunction::from_json(&poly_json).unwrap();
        assert_eq!(p.values(), v.values());
        let exp_json = serde_json::json!({"kind":"exp","base":"3/2","coeff":"2","horizon":6});
        let e = GrowthFunction::from_json(&exp_json).unwrap();
        // floor(2 * (3/2)^n): 2, 3, 4, 6, 10, 15, 22.
        assert_eq!(
            e.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            ["2", "3", "4", "6", "10", "15", "22"]
        );
    }
}
