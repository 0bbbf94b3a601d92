//! Annulus-connectivity checks on trees (single end and finitely many ends)
//! and the doubling-theorem inequality suite.
//!
//! The connectivity checks run at the tree level: a vertex at level `s`
//! connects to a trunk inside its annulus exactly when its branch departs
//! the trunk late enough, so the verifier scans departure levels against the
//! threshold `3 theta s + 1 + t0` and, on failure, reports the branch-count
//! witness that the proofs contradict.

use crate::assembly::AssemblyPlan;
use crate::exact::{self, big_ln};
use crate::graph::MetricGraph;
use crate::growth::GrowthFunction;
use crate::tree::AdmissibleTree;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("tree has {0} trunks; single-trunk check requested")]
    MultiTrunk(u32),
}

/// Inputs for the annulus-connectivity checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcaConfig {
    pub theta: f64,
    pub t0: u64,
    pub lambda: f64,
    /// The envelope constant with `v(n) <= alpha_o * lambda^n`.
    pub alpha_o: f64,
    pub l: u64,
    pub c1: Option<u64>,
    pub c2: Option<u64>,
}

/// Both formula branches and the margin-adjusted threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcaThetaReport {
    pub branch1: f64,
    pub branch2: f64,
    /// Minimum of the branches, before the safety margin.
    pub raw_min: f64,
    /// `raw_min * (1 - margin)`; the value fed into the verifiers.
    pub theta: f64,
    pub margin: f64,
}

pub const DEFAULT_THETA_MARGIN: f64 = 0.01;

/// `theta < min{ (1/3)(1 - ln lambda / ln 2),
///               (-3 ln 2 + sqrt(9 ln2^2 - 4 ln(lambda/2) ln(alpha 2^(2 t0))))
///                 / (2 ln(alpha 2^(2 t0))) }`,
/// reported with both branches; the strict supremum is backed off by the
/// configured margin.
pub fn rca_theta(
    lambda: f64,
    alpha_o: f64,
    t0: u64,
    margin: f64,
) -> Result<RcaThetaReport, CheckError> {
    if !(1.0 < lambda && lambda < 2.0) {
        return Err(CheckError::DomainError(format!(
            "lambda must lie in (1, 2), got {lambda}"
        )));
    }
    if alpha_o < 1.0 {
        return Err(CheckError::DomainError(format!(
            "alpha must be >= 1, got {alpha_o}"
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let branch1 = (1.0 - lambda.ln() / ln2) / 3.0;
    let denom_log = (alpha_o * 4f64.powi(t0 as i32)).ln();
    if denom_log <= 0.0 {
        return Err(CheckError::DomainError(format!(
            "ln(alpha * 2^(2 t0)) = {denom_log} is not positive"
        )));
    }
    let disc = 9.0 * ln2 * ln2 - 4.0 * (lambda / 2.0).ln() * denom_log;
    if disc < 0.0 {
        return Err(CheckError::DomainError(format!(
            "negative discriminant {disc}"
        )));
    }
    let branch2 = (-3.0 * ln2 + disc.sqrt()) / (2.0 * denom_log);
    let raw_min = branch1.min(branch2);
    if raw_min <= 0.0 {
        return Err(CheckError::DomainError(format!(
            "formula minimum {raw_min} is not positive"
        )));
    }
    Ok(RcaThetaReport {
        branch1,
        branch2,
        raw_min,
        theta: raw_min * (1.0 - margin),
        margin,
    })
}

/// `n_j > (ln alpha + ln 2^(t_j)) / ((1 - 3 theta) ln 2 - ln lambda)`.
pub fn rca_nj_threshold(
    lambda: f64,
    alpha_o: f64,
    theta: f64,
    t_j: u64,
) -> Result<f64, CheckError> {
    if alpha_o < 1.0 {
        return Err(CheckError::DomainError("alpha must be >= 1".to_string()));
    }
    let ln2 = std::f64::consts::LN_2;
    let denom = (1.0 - 3.0 * theta) * ln2 - lambda.ln();
    if denom <= 0.0 {
        return Err(CheckError::DomainError(format!(
            "(1 - 3 theta) ln 2 - ln lambda = {denom} is not positive"
        )));
    }
    Ok((alpha_o.ln() + t_j as f64 * ln2) / denom)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepartureViolation {
    pub s: usize,
    pub vertex: usize,
    pub departure: usize,
    /// `floor(3 theta s + 1 + t0)` at the violating level, for the record.
    pub threshold_floor: usize,
}

/// The counting witness reported alongside violations: if every departure
/// in the annulus were late, the level-`s` count would have to exceed
/// `sum_{i=1..e} 2^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchWitness {
    pub s: usize,
    #[serde(with = "exact::serde_bigint")]
    pub level_count: BigInt,
    pub exponent: u64,
    #[serde(with = "exact::serde_bigint")]
    pub pow_sum: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcaReport {
    pub s_min: usize,
    pub s_max: usize,
    pub theta: f64,
    pub t0: u64,
    pub violations: Vec<DepartureViolation>,
    pub branch_witness: Option<BranchWitness>,
    /// Levels where `2 (2l + r (1 - theta)) < r / theta` fails.
    pub path_margin_violations: Vec<usize>,
    pub pass: bool,
}

fn departure_scan(
    tree: &AdmissibleTree,
    cfg: &RcaConfig,
    horizon: usize,
) -> (usize, usize, Vec<DepartureViolation>, Vec<usize>) {
    let s_min = ((1.0 / (cfg.theta * cfg.theta * cfg.l as f64)).floor() as usize) + 1;
    let s_max = horizon.min(tree.horizon());
    let mut violations = Vec::new();
    let mut margin_violations = Vec::new();
    for s in s_min..=s_max {
        let threshold = 3.0 * cfg.theta * s as f64 + 1.0 + cfg.t0 as f64;
        for id in tree.level_ids(s) {
            if tree.vertex(id).on_trunk {
                continue;
            }
            let departure = tree.departure_level(id).expect("side vertex");
            if (departure as f64) <= threshold {
                violations.push(DepartureViolation {
                    s,
                    vertex: id,
                    departure,
                    threshold_floor: threshold.floor() as usize,
                });
            }
        }
        // Remark-style length margin at r = s l.
        let r = (s as u64 * cfg.l) as f64;
        let lhs = 2.0 * (2.0 * cfg.l as f64 + r * (1.0 - cfg.theta));
        if lhs >= r / cfg.theta {
            margin_violations.push(s);
        }
    }
    (s_min, s_max, violations, margin_violations)
}

fn branch_witness(tree: &AdmissibleTree, cfg: &RcaConfig, s: usize) -> BranchWitness {
    let annulus_levels = s as f64 - (3.0 * cfg.theta * s as f64 + 1.0) - 2.0 * cfg.t0 as f64;
    let e = annulus_levels.max(0.0).floor() as u64;
    // sum_{i=1..e} 2^i = 2^(e+1) - 2.
    let pow_sum = if e == 0 {
        BigInt::zero()
    } else {
        (BigInt::one() << (e + 1) as u32) - BigInt::from(2)
    };
    BranchWitness {
        s,
        level_count: tree.ball_count(s) - tree.ball_count(s - 1),
        exponent: e,
        pow_sum,
    }
}

/// Single-trunk check: every vertex at level `s` with `s l > 1/theta^2`
/// departs the trunk after level `3 theta s + 1 + t0`.
pub fn verify_rca(
    tree: &AdmissibleTree,
    _plan: &AssemblyPlan,
    cfg: &RcaConfig,
    horizon: usize,
) -> Result<RcaReport, CheckError> {
    if tree.trunk_count() != 1 {
        return Err(CheckError::MultiTrunk(tree.trunk_count()));
    }
    let (s_min, s_max, violations, path_margin_violations) = departure_scan(tree, cfg, horizon);
    let branch_witness = violations
        .first()
        .map(|v| branch_witness(tree, cfg, v.s));
    Ok(RcaReport {
        s_min,
        s_max,
        theta: cfg.theta,
        t0: cfg.t0,
        pass: violations.is_empty() && path_margin_violations.is_empty(),
        violations,
        branch_witness,
        path_margin_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RceReport {
    pub trunk_count: u32,
    pub per_trunk_vertices: Vec<usize>,
    pub inner: RcaReport,
}

/// Finitely-many-ends variant: every vertex must connect to *some* trunk
/// within its annulus, so departures are measured to the nearest trunk
/// ancestor across all rays.
pub fn verify_rce(
    tree: &AdmissibleTree,
    _plan: &AssemblyPlan,
    cfg: &RcaConfig,
    horizon: usize,
) -> Result<RceReport, CheckError> {
    let (s_min, s_max, violations, path_margin_violations) = departure_scan(tree, cfg, horizon);
    let branch_witness = violations
        .first()
        .map(|v| branch_witness(tree, cfg, v.s));
    let per_trunk_vertices = (0..tree.trunk_count())
        .map(|t| {
            tree.vertices()
                .iter()
                .filter(|v| v.on_trunk && v.trunk_id == Some(t))
                .count()
        })
        .collect();
    Ok(RceReport {
        trunk_count: tree.trunk_count(),
        per_trunk_vertices,
        inner: RcaReport {
            s_min,
            s_max,
            theta: cfg.theta,
            t0: cfg.t0,
            pass: violations.is_empty() && path_margin_violations.is_empty(),
            violations,
            branch_witness,
            path_margin_violations,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedCaseRow {
    pub s: usize,
    pub mu: f64,
    pub ln_level_value: f64,
    pub ln_rhs: f64,
    /// True where `v(s) <= 2^(C2/(t0+C2)+1) (2^(C2 (1-3 theta)/(t0+C2)))^s`,
    /// i.e. the all-branches scenario is contradicted and connectivity holds.
    pub rca_forced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedCaseReport {
    pub rows: Vec<BoundedCaseRow>,
    pub first_forced: Option<usize>,
}

/// Linear-mode witness: `mu = (s (1 - 3 theta) + 1)/(t0 + C2) + 1` pieces in
/// the annulus, and the branch-count inequality evaluated per level.
pub fn bounded_case_check(
    v: &GrowthFunction,
    theta: f64,
    t0: u64,
    c2: u64,
    s_range: (usize, usize),
) -> BoundedCaseReport {
    let ln2 = std::f64::consts::LN_2;
    let denom = (t0 + c2) as f64;
    let mut rows = Vec::new();
    let mut first_forced = None;
    for s in s_range.0..=s_range.1.min(v.horizon()) {
        let mu = (s as f64 * (1.0 - 3.0 * theta) + 1.0) / denom + 1.0;
        let exponent = c2 as f64 / denom + 1.0 + s as f64 * (c2 as f64 * (1.0 - 3.0 * theta) / denom);
        let ln_rhs = exponent * ln2;
        let value = v.value(s);
        let ln_level_value = if value.is_positive() {
            big_ln(value)
        } else {
            f64::NEG_INFINITY
        };
        let rca_forced = ln_level_value <= ln_rhs;
        if rca_forced && first_forced.is_none() {
            first_forced = Some(s);
        }
        rows.push(BoundedCaseRow {
            s,
            mu,
            ln_level_value,
            ln_rhs,
            rca_forced,
        });
    }
    BoundedCaseReport { rows, first_forced }
}

/// Inputs for the doubling-theorem suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingConfig {
    #[serde(with = "exact::serde_ratio")]
    pub k: BigRational,
    /// Polynomial exponent in `vol(x, r) <= B v(r) r^alpha`; 2*alpha must be
    /// an integer for the exact comparison path.
    #[serde(with = "exact::serde_ratio")]
    pub alpha_poly: BigRational,
    pub l: u64,
    #[serde(with = "exact::serde_ratio")]
    pub a: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub b: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub r0: BigRational,
}

impl DoublingConfig {
    pub fn with_k(k: BigRational, alpha_poly: BigRational, l: u64) -> Self {
        DoublingConfig {
            k,
            alpha_poly,
            l,
            a: BigRational::one(),
            b: BigRational::one(),
            r0: BigRational::zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingRow {
    pub n: usize,
    #[serde(with = "exact::serde_bigint")]
    pub increment: BigInt,
    pub annulus_components: Option<usize>,
    pub lower_ok: Option<bool>,
    #[serde(with = "exact::serde_ratio")]
    pub upper_bound: BigRational,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingBoundReport {
    pub rows: Vec<DoublingRow>,
    pub first_upper_violation: Option<usize>,
    /// Smallest C with `v(n) <= C n^(2 alpha + 1) + C` over the horizon.
    #[serde(with = "exact::serde_ratio")]
    pub c_bound: BigRational,
    pub lower_all_ok: bool,
}

/// Per level `n`: annulus `(n l / 3, n l]` component count against the
/// increment (when a graph is supplied), the hypothesis bound
/// `v(n) - v(n-1) <= 4 K^2 (n l)^(2 alpha)`, and the smallest polynomial
/// envelope constant.
pub fn doubling_bound_check(
    v: &GrowthFunction,
    cfg: &DoublingConfig,
    graph: Option<&MetricGraph>,
    horizon: usize,
) -> Result<DoublingBoundReport, CheckError> {
    let two_alpha = &cfg.alpha_poly * BigRational::from_integer(BigInt::from(2));
    if !two_alpha.is_integer() {
        return Err(CheckError::DomainError(
            "2 * alpha_poly must be an integer for exact checks".to_string(),
        ));
    }
    let two_alpha = two_alpha
        .to_integer()
        .to_u32()
        .ok_or_else(|| CheckError::DomainError("alpha_poly too large".to_string()))?;
    let four_k2 = BigRational::from_integer(BigInt::from(4)) * &cfg.k * &cfg.k;
    let horizon = horizon.min(v.horizon());
    let mut rows = Vec::new();
    let mut first_upper_violation = None;
    let mut lower_all_ok = true;
    for n in 1..=horizon {
        let increment = v.increment(n - 1);
        let nl = BigInt::from(n as u64 * cfg.l);
        let mut nl_pow = BigRational::one();
        for _ in 0..two_alpha {
            nl_pow *= BigRational::from_integer(nl.clone());
        }
        let upper_bound = &four_k2 * nl_pow;
        let upper_ok = BigRational::from_integer(increment.clone()) <= upper_bound;
        if !upper_ok && first_upper_violation.is_none() {
            first_upper_violation = Some(n);
        }
        let (annulus_components, lower_ok) = match graph {
            Some(g) => {
                let r_out = BigRational::from_integer(nl.clone());
                let r_in = &r_out / BigRational::from_integer(BigInt::from(3));
                let c = g.annulus_components(&r_in, &r_out);
                let ok = BigInt::from(c) >= increment;
                if !ok {
                    lower_all_ok = false;
                }
                (Some(c), Some(ok))
            }
            None => (None, None),
        };
        rows.push(DoublingRow {
            n,
            increment,
            annulus_components,
            lower_ok,
            upper_bound,
            upper_ok,
        });
    }
    // C = max over n >= 0 of v(n) / (n^(2 alpha + 1) + 1).
    let mut c_bound = BigRational::from_integer(v.value(0).clone());
    for n in 1..=horizon {
        let denom = BigInt::from(n).pow(two_alpha + 1) + BigInt::one();
        let cand = BigRational::new(v.value(n).clone(), denom);
        if cand > c_bound {
            c_bound = cand;
        }
    }
    Ok(DoublingBoundReport {
        rows,
        first_upper_violation,
        c_bound,
        lower_all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble, LevelSet};
    use crate::growth::poly;
    use crate::pieces::{synthesize_params, PieceCatalog};
    use crate::tree::EndsLayout;

    #[test]
    fn theta_closed_form_reference_point() {
        // Evaluated by hand with 12-digit arithmetic: branch1 = 0.138346...,
        // branch2 = 0.127538..., min = branch2.
        let r = rca_theta(1.5, 1.0, 1, 0.0).unwrap();
        assert!((r.branch1 - 0.138346).abs() < 1e-4, "branch1 {}", r.branch1);
        assert!((r.branch2 - 0.127538).abs() < 1e-4, "branch2 {}", r.branch2);
        assert!((r.raw_min - 0.1275).abs() < 1e-4);
        assert!(r.raw_min < 1.0 / 3.0 && r.raw_min > 0.0);
    }

    #[test]
    fn theta_degenerate_denominator() {
        assert!(matches!(
            rca_theta(1.5, 1.0, 0, 0.0),
            Err(CheckError::DomainError(_))
        ));
    }

    #[test]
    fn theta_vanishes_toward_two() {
        let r = rca_theta(1.999999, 1.0, 1, 0.0).unwrap();
        assert!(r.branch1 < 1e-6);
        assert!(r.raw_min <= r.branch1);
    }

    #[test]
    fn theta_margin_scales_down() {
        let r = rca_theta(1.5, 1.0, 1, 0.01).unwrap();
        assert!((r.theta - r.raw_min * 0.99).abs() < 1e-12);
    }

    #[test]
    fn nj_threshold_values() {
        // t_j = 0, alpha = 1: numerator is ln 1 = 0.
        assert_eq!(rca_nj_threshold(1.5, 1.0, 0.1, 0).unwrap(), 0.0);
        let v = rca_nj_threshold(1.5, 2.0, 0.1, 3).unwrap();
        let ln2 = std::f64::consts::LN_2;
        let expect = (2f64.ln() + 3.0 * ln2) / ((1.0 - 0.3) * ln2 - 1.5f64.ln());
        assert!((v - expect).abs() < 1e-12);
        // theta at or past the branch-1 limit kills the denominator.
        let theta_limit = (1.0 - 1.5f64.ln() / ln2) / 3.0;
        assert!(matches!(
            rca_nj_threshold(1.5, 1.0, theta_limit + 1e-9, 0),
            Err(CheckError::DomainError(_))
        ));
    }

    fn comb_fixture(horizon: usize) -> (AdmissibleTree, AssemblyPlan) {
        let w = poly(&[1, 2], horizon);
        let tree = AdmissibleTree::build(&w, &LevelSet::empty(), horizon).unwrap();
        let synth = synthesize_params(
            &PieceCatalog::default_desk(1),
            &EndsLayout::single_ray(horizon),
            4,
        )
        .unwrap();
        let plan = assemble(&tree, &LevelSet::empty(), &synth).unwrap();
        (tree, plan)
    }

    #[test]
    fn rca_passes_on_comb() {
        let (tree, plan) = comb_fixture(160);
        let cfg = RcaConfig {
            theta: 0.1,
            t0: 1,
            lambda: 1.5,
            alpha_o: 1.0,
            l: 1,
            c1: None,
            c2: None,
        };
        let report = verify_rca(&tree, &plan, &cfg, 160).unwrap();
        // Comb teeth depart at s - 1 >= 0.3 s + 2 for all s in range.
        assert!(report.pass, "violations: {:?}", report.violations);
        assert!(report.s_min > 100); // 1/theta^2 = 100
        assert!(report.path_margin_violations.is_empty());
    }

    #[test]
    fn rca_flags_deep_branch() {
        // Line with one long branch departing at level 1 and reaching the
        // horizon: a classic early departure.
        let horizon = 140;
        let mut levels: Vec<Vec<usize>> = vec![vec![0]];
        levels.push(vec![0, 0]);
        for _ in 3..=horizon {
            levels.push(vec![0, 1]);
        }
        let tree = crate::tree::AdmissibleTree::from_level_parents(
            &levels,
            crate::tree::TrunkAssign::SingleLeftmost,
        )
        .unwrap();
        let synth = synthesize_params(
            &PieceCatalog::default_desk(1),
            &EndsLayout::single_ray(horizon),
            4,
        )
        .unwrap();
        let plan = assemble(&tree, &LevelSet::empty(), &synth).unwrap();
        let cfg = RcaConfig {
            theta: 0.1,
            t0: 1,
            lambda: 1.5,
            alpha_o: 1.0,
            l: 1,
            c1: None,
            c2: None,
        };
        let report = verify_rca(&tree, &plan, &cfg, horizon).unwrap();
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .all(|v| v.departure == 1 && v.s >= report.s_min));
        let witness = report.branch_witness.unwrap();
        assert!(witness.pow_sum > witness.level_count * BigInt::from(1));
    }

    #[test]
    fn rca_rejects_multi_trunk() {
        let tree = crate::tree::two_ended_line(20);
        let synth = synthesize_params(
            &PieceCatalog::default_desk(1),
            &EndsLayout::single_ray(20),
            2,
        )
        .unwrap();
        let plan = assemble(&tree, &LevelSet::empty(), &synth).unwrap();
        let cfg = RcaConfig {
            theta: 0.2,
            t0: 1,
            lambda: 1.5,
            alpha_o: 1.0,
            l: 1,
            c1: None,
            c2: None,
        };
        assert!(matches!(
            verify_rca(&tree, &plan, &cfg, 20),
            Err(CheckError::MultiTrunk(2))
        ));
        let rce = verify_rce(&tree, &plan, &cfg, 20).unwrap();
        assert!(rce.inner.pass);
        assert_eq!(rce.trunk_count, 2);
    }

    #[test]
    fn rca_monotone_in_theta() {
        let (tree, plan) = comb_fixture(200);
        let base = RcaConfig {
            theta: 0.12,
            t0: 1,
            lambda: 1.5,
            alpha_o: 1.0,
            l: 1,
            c1: None,
            c2: None,
        };
        let at = |theta: f64| {
            let cfg = RcaConfig { theta, ..base.clone() };
            verify_rca(&tree, &plan, &cfg, 200).unwrap().pass
        };
        if at(0.12) {
            assert!(at(0.10));
            assert!(at(0.08));
        }
    }

    #[test]
    fn bounded_case_reduction() {
        // theta = 0, C2 = t0: per-level base is 2^(1/2).
        let v = poly(&[1, 2], 40);
        let report = bounded_case_check(&v, 0.0, 2, 2, (4, 30));
        let ln2 = std::f64::consts::LN_2;
        for row in &report.rows {
            let expect = (0.5 + 1.0 + row.s as f64 * 0.5) * ln2;
            assert!((row.ln_rhs - expect).abs() < 1e-9);
        }
        // Linear growth is eventually dominated: the contradiction holds.
        assert!(report.first_forced.is_some());
        let s0 = report.first_forced.unwrap();
        for row in &report.rows {
            if row.s >= s0 {
                assert!(row.rca_forced);
            }
        }
    }

    #[test]
    fn doubling_bound_squares_fail_linear_bound() {
        // v(n) = n^2 with alpha = 0: increments 2n+1 exceed 4K^2 eventually.
        let v = poly(&[1, 0, 1], 60);
        let cfg = DoublingConfig::with_k(
            BigRational::from_integer(BigInt::from(2)),
            BigRational::zero(),
            1,
        );
        let report = doubling_bound_check(&v, &cfg, None, 60).unwrap();
        // 4 K^2 = 16; first n with 2n - 1 > 16 ... increments of n^2+1 are
        // 2n - 1 at index n: v(n)-v(n-1) = 2n-1 > 16 from n = 9.
        assert_eq!(report.first_upper_violation, Some(9));
        assert!(report.c_bound > BigRational::one());
    }

    #[test]
    fn doubling_bound_linear_passes() {
        let v = poly(&[1, 2], 80);
        let cfg = DoublingConfig::with_k(
            BigRational::from_integer(BigInt::from(3)),
            BigRational::zero(),
            1,
        );
        let report = doubling_bound_check(&v, &cfg, None, 80).unwrap();
        assert_eq!(report.first_upper_violation, None);
        // v(n) = 2n + 1 <= C n + C with C = 3 ... c_bound = max (2n+1)/(n+1) < 2.
        assert!(report.c_bound < BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn doubling_bound_rejects_fractional_alpha() {
        let v = poly(&[1, 2], 10);
        let cfg = DoublingConfig::with_k(
            BigRational::one(),
            exact::parse_ratio("1/3").unwrap(),
            1,
        );
        assert!(doubling_bound_check(&v, &cfg, None, 10).is_err());
    }
}
