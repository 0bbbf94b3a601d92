//! Discrete realization of bounded-geometry volume-growth constructions:
//! growth-function certification, admissible-tree synthesis, piece
//! parameterization, assembly plans with their discrete growth function,
//! exact metric-graph verification, and annulus/doubling checks.
//!
//! All combinatorial checks use unbounded integers and exact rationals;
//! floating point appears only in the analytic warp calibration and the
//! closed-form threshold formulas, and every report records what was
//! actually scanned.

#![forbid(unsafe_code)]

pub mod assembly;
pub mod checks;
pub mod exact;
pub mod graph;
pub mod growth;
pub mod pieces;
pub mod pipeline;
pub mod tree;

pub use assembly::{
    assemble, choose_nj, discrete_growth, growth_constant_bound, increment_band_check,
    tiling_from_layout, vanishing_density_check, AssemblyError, AssemblyPlan, DiscreteGrowth,
    ExponentVariant, GrowthBound, LevelSet, NjMode,
};
pub use checks::{
    bounded_case_check, doubling_bound_check, rca_nj_threshold, rca_theta, verify_rca,
    verify_rce, CheckError, DoublingConfig, RcaConfig,
};
pub use graph::MetricGraph;
pub use growth::{
    check_bgd, check_doubling, growth_equivalent, limit_behavior, normalize, BgdReport,
    DoublingReport, GrowthCertificate, GrowthError, GrowthFunction, LimitBehavior, Normalized,
};
pub use pieces::{
    beta_root, min_thickening, synthesize_params, warp_function, BetaRoot, PieceCatalog,
    PieceError, PieceKind, PieceParams, SynthParams, WarpProfile,
};
pub use pipeline::{Assembled, CheckOutcome, PipelineError, Verification, VerifyOptions};
pub use tree::{layout_from_tree, AdmissibleTree, EndsLayout, TreeError, TrunkAssign};
