//! End-to-end orchestration: build an assembled model from a growth
//! function, an explicit tree, or a level layout, then run the selected
//! verification suite and collect one pass/fail outcome per check.

use crate::assembly::{
    assemble, choose_nj, discrete_growth, growth_constant_bound, increment_band_check,
    tiling_from_layout, vanishing_density_check, AssemblyError, AssemblyPlan, DiscreteGrowth,
    ExponentVariant, LevelSet, NjMode,
};
use crate::checks::{
    doubling_bound_check, rca_theta, verify_rca, verify_rce, CheckError, DoublingConfig,
    RcaConfig,
};
use crate::exact;
use crate::graph::MetricGraph;
use crate::growth::{check_bgd, growth_equivalent, normalize, GrowthError, GrowthFunction, Normalized};
use crate::pieces::{synthesize_params, PieceCatalog, PieceError, SynthParams};
use crate::tree::{layout_from_tree, AdmissibleTree, EndsLayout, TreeError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Piece(#[from] PieceError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("{0}")]
    Config(String),
}

/// A fully assembled model ready for verification.
pub struct Assembled {
    /// Tree growth function (the normalized `w` in growth-driven runs).
    pub w: GrowthFunction,
    /// Present in growth-driven runs: `w`, its envelope, and the certificate
    /// against the input function.
    pub normalized: Option<Normalized>,
    pub synth: SynthParams,
    pub s: LevelSet,
    pub tree: Option<AdmissibleTree>,
    pub plan: AssemblyPlan,
    pub z: DiscreteGrowth,
    pub graph: MetricGraph,
}

fn interval_count_for(horizon: usize) -> usize {
    // Factorial spacing exhausts any desk horizon within a handful of
    // intervals; 12 leaves room for linear modes too.
    12usize.max(horizon / 8).min(64)
}

/// Growth-driven assembly: normalize `v`, choose intervals, build the tree,
/// place pieces, and expand the gadget graph.
pub fn assemble_growth_driven(
    v: &GrowthFunction,
    catalog: &PieceCatalog,
    layout: Option<&EndsLayout>,
    nj_mode: Option<&NjMode>,
    horizon: usize,
    a_max: u64,
) -> Result<Assembled, PipelineError> {
    let normalized = normalize(v)?;
    let w = normalized.w.clone();
    let horizon = horizon.min(w.horizon());
    let default_layout = EndsLayout::single_ray(horizon);
    let layout = layout.unwrap_or(&default_layout);
    let synth = synthesize_params(catalog, layout, interval_count_for(horizon))?;
    let s = match nj_mode {
        Some(mode) => choose_nj(&synth, &w, mode, horizon)?,
        None => LevelSet::empty(),
    };
    let tree = AdmissibleTree::build(&w, &s, horizon)?;
    let plan = assemble(&tree, &s, &synth)?;
    let z = discrete_growth(&plan, horizon * synth.l as usize);
    let graph = MetricGraph::build(&plan);
    let _ = a_max;
    Ok(Assembled {
        w,
        normalized: Some(normalized),
        synth,
        s,
        tree: Some(tree),
        plan,
        z,
        graph,
    })
}

/// Tile an explicit tree: every trunk vertex carries an R piece, side
/// vertices J/K/HS by child count, the root a cap.
pub fn assemble_tree_tiling(
    tree: AdmissibleTree,
    catalog: &PieceCatalog,
) -> Result<Assembled, PipelineError> {
    let layout = layout_from_tree(&tree);
    let synth = synthesize_params(catalog, &layout, interval_count_for(tree.horizon()))?;
    let s = LevelSet::empty();
    let plan = assemble(&tree, &s, &synth)?;
    let z = discrete_growth(&plan, tree.horizon() * synth.l as usize);
    let graph = MetricGraph::build(&plan);
    let w = growth_from_counts(
        (0..=tree.horizon()).map(|n| BigInt::from(tree.level_count(n))),
    )?;
    Ok(Assembled {
        w,
        normalized: None,
        synth,
        s,
        tree: Some(tree),
        plan,
        z,
        graph,
    })
}

/// Component-collapsed tiling of a pure layout (no explicit tree). Exact for
/// origin-centered volumes of level-transitive layouts.
pub fn assemble_collapsed(
    layout: &EndsLayout,
    catalog: &PieceCatalog,
) -> Result<Assembled, PipelineError> {
    let synth = synthesize_params(catalog, layout, 4)?;
    let plan = tiling_from_layout(layout, &synth);
    let horizon = plan.horizon;
    let z = discrete_growth(&plan, horizon * synth.l as usize);
    let graph = MetricGraph::build(&plan);
    let w = growth_from_counts(layout.per_level.iter().map(|&c| BigInt::from(c)))?;
    Ok(Assembled {
        w,
        normalized: None,
        synth,
        s: LevelSet::empty(),
        tree: None,
        plan,
        z,
        graph,
    })
}

fn growth_from_counts(
    counts: impl Iterator<Item = BigInt>,
) -> Result<GrowthFunction, GrowthError> {
    let mut values = Vec::new();
    let mut acc = BigInt::zero();
    for c in counts {
        acc += c;
        values.push(acc.clone());
    }
    GrowthFunction::from_values(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Bgd,
    Density,
    Band,
    Distance,
    Sandwich,
    Certify,
    Rca,
    Rce,
    Doubling,
}

impl CheckName {
    pub fn parse(name: &str) -> Option<Self> {
        match name.trim() {
            "bgd" => Some(Self::Bgd),
            "density" => Some(Self::Density),
            "band" => Some(Self::Band),
            "distance" => Some(Self::Distance),
            "sandwich" => Some(Self::Sandwich),
            "certify" => Some(Self::Certify),
            "rca" => Some(Self::Rca),
            "rce" => Some(Self::Rce),
            "doubling" => Some(Self::Doubling),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Bgd => "bgd",
            Self::Density => "density",
            Self::Band => "band",
            Self::Distance => "distance",
            Self::Sandwich => "sandwich",
            Self::Certify => "certify",
            Self::Rca => "rca",
            Self::Rce => "rce",
            Self::Doubling => "doubling",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub checks: Vec<CheckName>,
    pub a_max: u64,
    pub theta_margin: f64,
    pub exponent_variant: ExponentVariant,
    /// Distance-bound cutoff in units of `l`.
    pub r_min_factor: u64,
    pub density_eps: BigRational,
    /// Pointwise-doubling bound asserted in the doubling check.
    pub doubling_a: BigRational,
    /// Full pointwise scans only below this node count.
    pub scan_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            checks: vec![
                CheckName::Bgd,
                CheckName::Density,
                CheckName::Band,
                CheckName::Distance,
                CheckName::Sandwich,
                CheckName::Certify,
            ],
            a_max: crate::growth::DEFAULT_SEARCH_CAP,
            theta_margin: crate::checks::DEFAULT_THETA_MARGIN,
            exponent_variant: ExponentVariant::OneOverCapL,
            r_min_factor: 3,
            density_eps: BigRational::new(BigInt::from(1), BigInt::from(10)),
            doubling_a: BigRational::from_integer(BigInt::from(8)),
            scan_limit: 4_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub report: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verification {
    pub outcomes: Vec<CheckOutcome>,
    pub pass: bool,
}

/// Run the selected checks against an assembled model.
pub fn verify(model: &Assembled, opts: &VerifyOptions) -> Result<Verification, PipelineError> {
    let mut outcomes = Vec::new();
    for check in &opts.checks {
        let outcome = match check {
            CheckName::Bgd => {
                let report = check_bgd(&model.w)?;
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: report.is_bgd,
                    detail: format!("minimal L = {:?}", report.minimal_l),
                    report: serde_json::to_value(&report).expect("report serializes"),
                }
            }
            CheckName::Density => {
                let mut checkpoints: Vec<u64> = model
                    .s
                    .intervals()
                    .iter()
                    .map(|&(start, _)| start.saturating_sub(1))
                    .filter(|&n| n > 0)
                    .collect();
                checkpoints.push(model.plan.horizon as u64);
                let report = vanishing_density_check(&model.s, &checkpoints, &opts.density_eps);
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: report.passes,
                    detail: format!(
                        "min ratio {}",
                        report
                            .min_ratio
                            .as_ref()
                            .map(exact::ratio_to_string)
                            .unwrap_or_else(|| "none".to_string())
                    ),
                    report: serde_json::to_value(&report).expect("report serializes"),
                }
            }
            CheckName::Band => {
                let violations = increment_band_check(&model.z, &model.w, &model.synth, &model.s);
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: violations.is_empty(),
                    detail: format!("{} violations", violations.len()),
                    report: serde_json::to_value(&violations).expect("report serializes"),
                }
            }
            CheckName::Distance => {
                let violations = model
                    .graph
                    .check_distance_bounds(opts.r_min_factor * model.synth.l);
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: violations.is_empty(),
                    detail: format!("{} violations", violations.len()),
                    report: serde_json::to_value(&violations).expect("report serializes"),
                }
            }
            CheckName::Sandwich => {
                let violations = model.graph.check_sandwich(&model.z, model.z.horizon());
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: violations.is_empty(),
                    detail: format!("{} violations", violations.len()),
                    report: serde_json::to_value(&violations).expect("report serializes"),
                }
            }
            CheckName::Certify => certify_outcome(model, opts)?,
            CheckName::Rca => {
                let (cfg, theta_report) = rca_config_for(model, opts)?;
                let tree = model.tree.as_ref().ok_or_else(|| {
                    PipelineError::Config("rca check needs an explicit tree".to_string())
                })?;
                let report = verify_rca(tree, &model.plan, &cfg, tree.horizon())?;
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: report.pass,
                    detail: format!(
                        "theta {:.6} levels {}..{} violations {}",
                        cfg.theta,
                        report.s_min,
                        report.s_max,
                        report.violations.len()
                    ),
                    report: serde_json::json!({
                        "theta": theta_report,
                        "report": report,
                    }),
                }
            }
            CheckName::Rce => {
                let (cfg, theta_report) = rca_config_for(model, opts)?;
                let tree = model.tree.as_ref().ok_or_else(|| {
                    PipelineError::Config("rce check needs an explicit tree".to_string())
                })?;
                let report = verify_rce(tree, &model.plan, &cfg, tree.horizon())?;
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass: report.inner.pass,
                    detail: format!(
                        "{} trunks, {} violations",
                        report.trunk_count,
                        report.inner.violations.len()
                    ),
                    report: serde_json::json!({
                        "theta": theta_report,
                        "report": report,
                    }),
                }
            }
            CheckName::Doubling => {
                let doubling = crate::growth::check_doubling(&model.w);
                let k = doubling
                    .minimal_k
                    .clone()
                    .unwrap_or_else(|| BigRational::from_integer(BigInt::from(2)));
                let cfg = DoublingConfig::with_k(k, BigRational::zero(), model.synth.l);
                let report =
                    doubling_bound_check(&model.w, &cfg, Some(&model.graph), model.plan.horizon)?;
                let r0 = BigRational::from_integer(BigInt::from(
                    opts.r_min_factor * model.synth.l,
                ));
                let pointwise =
                    model
                        .graph
                        .pointwise_doubling(&r0, &opts.doubling_a, opts.scan_limit);
                let pass = report.first_upper_violation.is_none()
                    && !doubling.unbounded
                    && pointwise.is_empty();
                CheckOutcome {
                    name: check.as_str().to_string(),
                    pass,
                    detail: format!(
                        "function K {}, first bound violation {:?}, pointwise violations {}",
                        doubling
                            .minimal_k
                            .as_ref()
                            .map(exact::ratio_to_string)
                            .unwrap_or_else(|| "unbounded".to_string()),
                        report.first_upper_violation,
                        pointwise.len()
                    ),
                    report: serde_json::json!({
                        "function_doubling": doubling,
                        "bound_report": report,
                        "pointwise_violations": pointwise,
                    }),
                }
            }
        };
        outcomes.push(outcome);
    }
    let pass = outcomes.iter().all(|o| o.pass);
    Ok(Verification { outcomes, pass })
}

fn certify_outcome(
    model: &Assembled,
    opts: &VerifyOptions,
) -> Result<CheckOutcome, PipelineError> {
    let z_growth = model.z.as_growth().ok_or_else(|| {
        PipelineError::Config("discrete growth is not integral; cannot certify".to_string())
    })?;
    let cert = growth_equivalent(&z_growth, &model.w, opts.a_max);
    let l_const = check_bgd(&model.w)?
        .minimal_l
        .ok_or_else(|| PipelineError::Config("w is not bgd".to_string()))?;
    let bound = growth_constant_bound(
        l_const,
        model.synth.l,
        &model.synth.u,
        &model.synth.h,
        &model.synth.cap_h,
        opts.exponent_variant,
    );
    let pass = match cert.a {
        Some(a) => bound.admits(a),
        None => false,
    };
    Ok(CheckOutcome {
        name: "certify".to_string(),
        pass,
        detail: format!("A = {:?}, bound ~ {:.4}", cert.a, bound.approx()),
        report: serde_json::json!({
            "certificate": {
                "a": cert.a,
                "horizon": cert.horizon,
                "searched_up_to": cert.searched_up_to,
            },
            "bound": bound,
        }),
    })
}

fn rca_config_for(
    model: &Assembled,
    opts: &VerifyOptions,
) -> Result<(RcaConfig, crate::checks::RcaThetaReport), PipelineError> {
    let (lambda, alpha_o) = match &model.normalized {
        Some(n) => (
            exact::ratio_to_f64(&n.lambda).max(1.0 + 1e-9),
            exact::ratio_to_f64(&n.alpha).max(1.0),
        ),
        None => (1.5, 1.0),
    };
    let lambda = if lambda >= 2.0 { 2.0 - 1e-9 } else { lambda };
    let t0 = model.synth.t0;
    let theta = rca_theta(lambda, alpha_o, t0, opts.theta_margin)?;
    Ok((
        RcaConfig {
            theta: theta.theta,
            t0,
            lambda,
            alpha_o,
            l: model.synth.l,
            c1: None,
            c2: None,
        },
        theta,
    ))
}

impl Verification {
    pub fn summary_lines(&self) -> Vec<String> {
        self.outcomes
            .iter()
            .map(|o| {
                format!(
                    "{} {}: {}",
                    if o.pass { "pass" } else { "FAIL" },
                    o.name,
                    o.detail
                )
            })
            .collect()
    }
}

/// Convenience accessor used by reports: the model's scale constant.
pub fn unit_length(model: &Assembled) -> u64 {
    model.synth.l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::poly;
    use crate::tree;

    #[test]
    fn growth_driven_quadratic_end_to_end() {
        let v = poly(&[1, 1, 1], 60);
        let catalog = PieceCatalog::default_desk(1);
        let model = assemble_growth_driven(
            &v,
            &catalog,
            None,
            Some(&NjMode::Factorial { kgap: 2, base: 2 }),
            60,
            10_000,
        )
        .unwrap();
        assert!(model.normalized.as_ref().unwrap().certificate.holds());
        let opts = VerifyOptions::default();
        let verification = verify(&model, &opts).unwrap();
        assert!(
            verification.pass,
            "{:?}",
            verification.summary_lines()
        );
    }

    #[test]
    fn tree_tiling_line_end_to_end() {
        let line = tree::two_ended_line(40);
        let catalog = PieceCatalog::default_desk(1);
        let model = assemble_tree_tiling(line, &catalog).unwrap();
        let mut opts = VerifyOptions::default();
        opts.checks = vec![
            CheckName::Band,
            CheckName::Distance,
            CheckName::Sandwich,
            CheckName::Certify,
            CheckName::Doubling,
        ];
        let verification = verify(&model, &opts).unwrap();
        assert!(verification.pass, "{:?}", verification.summary_lines());
    }

    #[test]
    fn collapsed_binary_layout_builds() {
        let layout = EndsLayout::power_layout(2, 30);
        let catalog = PieceCatalog::default_desk(1);
        let model = assemble_collapsed(&layout, &catalog).unwrap();
        assert!(model.graph.is_connected());
        assert!(model.z.z.last().unwrap() > &BigRational::from_integer(BigInt::from(1 << 20)));
    }
}
