//! Discrete models of the building pieces and the analytic warp-function
//! calibration.
//!
//! Pieces carry a height in trunk units, a per-depth volume profile (total
//! across components), a boundary-diameter parameter, and a component count.
//! The warp side is numeric: the boundary-thickening profile `f_T`, its
//! `|f''/f|` bound estimated by central finite differences with grid
//! refinement, and the least positive root of the associated polynomial.

use crate::exact;
use crate::tree::EndsLayout;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PieceError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("incomplete catalog: no element with {0} boundary spheres")]
    IncompleteCatalog(u32),
    #[error("invalid piece: {0}")]
    InvalidPiece(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    /// Exhaustion difference, occupies a trunk interval.
    Q,
    /// Boundary cross interval with one disc removed; trunk filler.
    R,
    /// Cylinder, single-branch side vertices.
    K,
    /// Sphere minus three balls, two-branch side vertices.
    J,
    /// Half-sphere cap: leaves and the root.
    HS,
}

/// Discrete model of one placed piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceParams {
    pub kind: PieceKind,
    /// Height in trunk levels; 1 for all kinds except Q.
    pub height_units: u64,
    /// Per-depth volumes at unit spacing, summed across components.
    #[serde(with = "exact::serde_vec_ratio")]
    pub profile: Vec<BigRational>,
    #[serde(with = "exact::serde_ratio")]
    pub diameter_d: BigRational,
    pub components: u64,
}

impl PieceParams {
    pub fn extent(&self) -> usize {
        self.profile.len()
    }

    pub fn total_volume(&self) -> BigRational {
        self.profile.iter().sum()
    }

    pub fn max_profile(&self) -> BigRational {
        self.profile.iter().max().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_profile(&self) -> BigRational {
        self.profile.iter().min().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Check the kind's inequality block exactly.
    ///
    /// For K/J/HS: `h <= min v' <= max v' <= H`. For Q at interval j:
    /// `max v' <= U_j`; for R: `max v' <= u_j <= U_j`. The extent must lie
    /// in `[ceil(l t / 3), l t]`.
    pub fn validate(&self, bounds: &PieceBounds) -> Result<(), PieceError> {
        if self.profile.is_empty() {
            return Err(PieceError::InvalidPiece("empty profile".to_string()));
        }
        if self.components == 0 {
            return Err(PieceError::InvalidPiece("zero components".to_string()));
        }
        let lt = bounds.l * self.height_units;
        let lo = lt.div_ceil(3);
        let extent = self.extent() as u64;
        if extent < lo || extent > lt {
            return Err(PieceError::InvalidPiece(format!(
                "extent {extent} outside [{lo}, {lt}]"
            )));
        }
        match self.kind {
            PieceKind::K | PieceKind::J | PieceKind::HS => {
                if self.min_profile() < bounds.h || self.max_profile() > bounds.cap_h {
                    return Err(PieceError::InvalidPiece(format!(
                        "{:?} profile outside [h, H]",
                        self.kind
                    )));
                }
            }
            PieceKind::Q => {
                if self.max_profile() > bounds.u_upper {
                    return Err(PieceError::InvalidPiece(
                        "Q profile exceeds U_j".to_string(),
                    ));
                }
            }
            PieceKind::R => {
                if self.max_profile() > bounds.u_lower || bounds.u_lower > bounds.u_upper {
                    return Err(PieceError::InvalidPiece(
                        "R profile exceeds u_j <= U_j".to_string(),
                    ));
                }
            }
        }
        if self.kind != PieceKind::Q && self.height_units != 1 {
            return Err(PieceError::InvalidPiece(
                "non-Q pieces have height 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// The bounds a piece is validated against: the catalog constants plus the
/// interval-dependent `u_j`/`U_j` pair.
#[derive(Debug, Clone)]
pub struct PieceBounds {
    pub l: u64,
    pub h: BigRational,
    pub cap_h: BigRational,
    pub u_lower: BigRational,
    pub u_upper: BigRational,
}

/// One closed-manifold model: profiles per available boundary count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogElement {
    pub name: String,
    pub boundary_counts: Vec<u32>,
    /// Per-component, per-depth volume for any boundary variant.
    #[serde(with = "exact::serde_ratio")]
    pub unit_volume: BigRational,
    /// Natural height in trunk units before thickening.
    pub height_units: u64,
    #[serde(with = "exact::serde_ratio")]
    pub boundary_diameter: BigRational,
}

/// Catalog of elements plus the standard-piece constants.
///
/// `l` is the unit length; `h`/`H` bound the standard K/J/HS profiles and
/// `u`/`U` the per-component element profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceCatalog {
    pub elements: Vec<CatalogElement>,
    pub l: u64,
    #[serde(with = "exact::serde_ratio")]
    pub h: BigRational,
    #[serde(with = "exact::serde_ratio", rename = "H")]
    pub cap_h: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub u: BigRational,
    #[serde(with = "exact::serde_ratio", rename = "U")]
    pub cap_u: BigRational,
}

impl PieceCatalog {
    pub fn alpha(&self) -> usize {
        self.elements.len()
    }

    /// Default desk catalog: one sphere-like element, unit volumes.
    pub fn default_desk(l: u64) -> Self {
        PieceCatalog {
            elements: vec![CatalogElement {
                name: "sphere".to_string(),
                boundary_counts: vec![1, 2, 3, 4],
                unit_volume: BigRational::one(),
                height_units: 1,
                boundary_diameter: BigRational::from_integer(BigInt::from(l)),
            }],
            l,
            h: BigRational::one(),
            cap_h: BigRational::from_integer(BigInt::from(2)),
            u: BigRational::one(),
            cap_u: BigRational::one(),
        }
    }

    pub fn validate(&self) -> Result<(), PieceError> {
        if self.l == 0 {
            return Err(PieceError::InvalidPiece("l must be positive".to_string()));
        }
        if self.h > self.cap_h || self.u > self.cap_u {
            return Err(PieceError::InvalidPiece(
                "need h <= H and u <= U".to_string(),
            ));
        }
        if self.elements.is_empty() {
            return Err(PieceError::InvalidPiece("empty catalog".to_string()));
        }
        for e in &self.elements {
            if e.boundary_counts.is_empty() {
                return Err(PieceError::InvalidPiece(format!(
                    "element {} lists no boundary counts",
                    e.name
                )));
            }
            if e.unit_volume < self.u || e.unit_volume > self.cap_u {
                return Err(PieceError::InvalidPiece(format!(
                    "element {} volume outside [u, U]",
                    e.name
                )));
            }
        }
        Ok(())
    }

    pub fn supports_boundary_count(&self, count: u32) -> bool {
        self.elements
            .iter()
            .any(|e| e.boundary_counts.contains(&count))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("catalog serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, PieceError> {
        let cat: PieceCatalog = serde_json::from_value(value.clone())
            .map_err(|e| PieceError::InvalidPiece(e.to_string()))?;
        cat.validate()?;
        Ok(cat)
    }
}

/// Height, volume, and diameter parameters for one trunk interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalParams {
    pub j: usize,
    pub t_j: u64,
    #[serde(with = "exact::serde_ratio")]
    pub d_j: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub u_j: BigRational,
    #[serde(with = "exact::serde_ratio", rename = "U_j")]
    pub cap_u_j: BigRational,
    /// Components of the j-th exhaustion difference.
    pub components: u64,
}

/// Synthesized parameter sequences for a layout against a catalog.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub l: u64,
    #[serde(with = "exact::serde_ratio")]
    pub h: BigRational,
    #[serde(with = "exact::serde_ratio", rename = "H")]
    pub cap_h: BigRational,
    #[serde(with = "exact::serde_ratio")]
    pub u: BigRational,
    #[serde(with = "exact::serde_ratio", rename = "U")]
    pub cap_u: BigRational,
    pub t0: u64,
    #[serde(with = "exact::serde_ratio")]
    pub d0: BigRational,
    pub degree_bound: Option<u32>,
    pub per_interval: Vec<IntervalParams>,
}

impl SynthParams {
    pub fn interval(&self, j: usize) -> &IntervalParams {
        &self.per_interval[j.min(self.per_interval.len() - 1)]
    }

    /// `U_j` schedule used between intervals: held at the most recent value.
    pub fn cap_u_at_interval(&self, completed: usize) -> BigRational {
        if completed == 0 {
            self.cap_u.clone()
        } else {
            self.interval(completed - 1).cap_u_j.clone()
        }
    }
}

/// Derive `{t_j}, {d_j}, {u_j}, {U_j}` and the constants for a layout.
///
/// With a degree bound `k` the constants follow the uniform recipe:
/// `t_j = t0`, `d_j = d0`, `U_j = max(U k^j, u_j)`. Without one, the
/// per-level component counts of the layout are used directly.
pub fn synthesize_params(
    catalog: &PieceCatalog,
    layout: &EndsLayout,
    j_max: usize,
) -> Result<SynthParams, PieceError> {
    catalog.validate()?;
    for &count in &layout.boundary_counts_needed {
        if !catalog.supports_boundary_count(count) {
            return Err(PieceError::IncompleteCatalog(count));
        }
    }
    let t0 = catalog
        .elements
        .iter()
        .map(|e| e.height_units)
        .max()
        .unwrap_or(1)
        .max(1);
    let d0 = catalog
        .elements
        .iter()
        .map(|e| e.boundary_diameter.clone())
        .max()
        .unwrap_or_else(|| BigRational::from_integer(BigInt::from(catalog.l)));
    let mut per_interval = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        let components = match layout.degree_bound {
            Some(k) if layout.ray_count == usize::MAX => {
                // Pure power layout: the bound k^j is also the count.
                let k = (k.saturating_sub(1)).max(1) as u64;
                k.checked_pow(j as u32).unwrap_or(u64::MAX)
            }
            _ => layout.f(j).max(1),
        };
        let comp_ratio = BigRational::from_integer(BigInt::from(components));
        // R pieces between intervals j and j+1 bundle the next level's strands.
        let next_components = match layout.degree_bound {
            Some(k) if layout.ray_count == usize::MAX => {
                let k = (k.saturating_sub(1)).max(1) as u64;
                k.checked_pow(j as u32 + 1).unwrap_or(u64::MAX)
            }
            _ => layout.f(j + 1).max(1),
        };
        let u_j = &catalog.u * BigRational::from_integer(BigInt::from(next_components));
        let q_max = &catalog.cap_u * &comp_ratio;
        let cap_u_j = q_max.clone().max(u_j.clone());
        per_interval.push(IntervalParams {
            j,
            t_j: t0,
            d_j: d0.clone(),
            u_j,
            cap_u_j,
            components,
        });
    }
    Ok(SynthParams {
        l: catalog.l,
        h: catalog.h.clone(),
        cap_h: catalog.cap_h.clone(),
        u: catalog.u.clone(),
        cap_u: catalog.cap_u.clone(),
        t0,
        d0,
        degree_bound: layout.degree_bound,
        per_interval,
    })
}

/// Sampled warp profile with its finite-difference `|f''/f|` bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WarpProfile {
    pub lambda: f64,
    pub t_len: f64,
    pub grid: usize,
    pub samples: Vec<(f64, f64)>,
    pub max_ratio: f64,
    pub refined: bool,
}

fn warp_value(lambda: f64, t_len: f64, x: f64) -> f64 {
    if x <= 1.0 {
        return 1.0;
    }
    if x >= t_len - 1.0 {
        return lambda;
    }
    let a = (-(t_len - 2.0) / (x - 1.0)).exp();
    let b = (-(t_len - 2.0) / (t_len - 1.0 - x)).exp();
    (lambda - 1.0) * a / (a + b) + 1.0
}

fn max_second_ratio(lambda: f64, t_len: f64, grid: usize) -> f64 {
    let step = t_len / grid as f64;
    let mut max_ratio: f64 = 0.0;
    for i in 1..grid {
        let x = i as f64 * step;
        if x <= step || x >= t_len - step {
            continue;
        }
        let f0 = warp_value(lambda, t_len, x);
        let fm = warp_value(lambda, t_len, x - step);
        let fp = warp_value(lambda, t_len, x + step);
        let second = (fp - 2.0 * f0 + fm) / (step * step);
        let ratio = (second / f0).abs();
        if ratio > max_ratio {
            max_ratio = ratio;
        }
    }
    max_ratio
}

/// Evaluate the warp function on a grid and estimate `max |f''/f|` with
/// central differences, refining the grid until two successive estimates
/// agree to `tol` (or a refinement cap is hit).
pub fn warp_function(lambda: f64, t_len: f64, grid: usize) -> Result<WarpProfile, PieceError> {
    warp_function_with_tol(lambda, t_len, grid, 1e-4)
}

pub fn warp_function_with_tol(
    lambda: f64,
    t_len: f64,
    grid: usize,
    tol: f64,
) -> Result<WarpProfile, PieceError> {
    if lambda < 1.0 {
        return Err(PieceError::DomainError("lambda must be >= 1".to_string()));
    }
    if t_len < 4.0 {
        return Err(PieceError::DomainError("T must be >= 4".to_string()));
    }
    if grid < 100 {
        return Err(PieceError::DomainError("grid must be >= 100".to_string()));
    }
    let step = t_len / grid as f64;
    let samples: Vec<(f64, f64)> = (0..=grid)
        .map(|i| {
            let x = i as f64 * step;
            (x, warp_value(lambda, t_len, x))
        })
        .collect();
    if lambda == 1.0 {
        return Ok(WarpProfile {
            lambda,
            t_len,
            grid,
            samples,
            max_ratio: 0.0,
            refined: true,
        });
    }
    let mut g = grid;
    let mut prev = max_second_ratio(lambda, t_len, g);
    let mut refined = false;
    for _ in 0..6 {
        let next_g = g * 2;
        let next = max_second_ratio(lambda, t_len, next_g);
        if (next - prev).abs() <= tol * prev.max(1.0) {
            refined = true;
            prev = next;
            g = next_g;
            break;
        }
        prev = next;
        g = next_g;
    }
    Ok(WarpProfile {
        lambda,
        t_len,
        grid: g,
        samples,
        max_ratio: prev,
        refined,
    })
}

impl WarpProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,f,f2_over_f\n");
        let step = self.t_len / self.samples.len().saturating_sub(1).max(1) as f64;
        for (i, (t, f)) in self.samples.iter().enumerate() {
            let ratio = if i == 0 || i + 1 == self.samples.len() {
                0.0
            } else {
                let fm = self.samples[i - 1].1;
                let fp = self.samples[i + 1].1;
                ((fp - 2.0 * f + fm) / (step * step) / f).abs()
            };
            out.push_str(&format!("{t},{f},{ratio}\n"));
        }
        out
    }
}

/// Constraint set for the thickening length: `T >= 3 D_j`, `T >= 4`, and
/// `max |f''/f| <= 1 + tol`.
pub fn thickening_ok(lambda: f64, d_j: f64, t_len: f64, tol: f64) -> bool {
    if t_len < 3.0 * d_j || t_len < 4.0 {
        return false;
    }
    if lambda == 1.0 {
        return true;
    }
    max_second_ratio(lambda, t_len, 4096) <= 1.0 + tol
}

/// Smallest thickening `T` passing [`thickening_ok`], found by doubling then
/// bisection to within `tol` of the boundary.
pub fn min_thickening(lambda: f64, d_j: f64, tol: f64) -> Result<f64, PieceError> {
    if lambda < 1.0 || d_j < 0.0 {
        return Err(PieceError::DomainError(
            "need lambda >= 1 and D_j >= 0".to_string(),
        ));
    }
    let floor = (3.0 * d_j).max(4.0);
    if thickening_ok(lambda, d_j, floor, tol) {
        return Ok(floor);
    }
    let mut lo = floor;
    let mut hi = floor;
    let mut passed = false;
    for _ in 0..64 {
        hi *= 2.0;
        if thickening_ok(lambda, d_j, hi, tol) {
            passed = true;
            break;
        }
        lo = hi;
    }
    if !passed {
        return Err(PieceError::SearchExhausted(format!(
            "no passing T up to {hi} for lambda {lambda}"
        )));
    }
    while hi - lo > tol.max(1e-9) {
        let mid = 0.5 * (lo + hi);
        if thickening_ok(lambda, d_j, mid, tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Least positive root of `x^a (lambda - 1) - x^(a-2) + lambda = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaRoot {
    Root { x: f64 },
    NoPositiveRoot,
}

pub fn beta_root(lambda: f64, alpha_exp: u32) -> Result<BetaRoot, PieceError> {
    if alpha_exp < 2 || alpha_exp % 2 != 0 {
        return Err(PieceError::DomainError(
            "alpha exponent must be even and >= 2".to_string(),
        ));
    }
    if lambda <= 1.0 {
        return Err(PieceError::DomainError("lambda must be > 1".to_string()));
    }
    let p = |x: f64| {
        (lambda - 1.0) * x.powi(alpha_exp as i32) - x.powi(alpha_exp as i32 - 2) + lambda
    };
    // Scan for the first sign change; p(0+) = lambda > 0 for a > 2 and
    // lambda - 1 + lambda > 0 at a = 2, and p -> +inf, so roots live in a
    // dip if one exists.
    let bound = (2.0 / (lambda - 1.0)).max(4.0).sqrt().max(4.0);
    let steps = 200_000;
    let dx = bound / steps as f64;
    let mut prev_x = dx * 1e-3;
    let mut prev_v = p(prev_x);
    for i in 1..=steps {
        let x = i as f64 * dx;
        let v = p(x);
        if prev_v > 0.0 && v <= 0.0 {
            // Bisect [prev_x, x] to 1e-12.
            let (mut lo, mut hi) = (prev_x, x);
            while hi - lo > 1e-12 {
                let mid = 0.5 * (lo + hi);
                if p(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(BetaRoot::Root { x: 0.5 * (lo + hi) });
        }
        prev_x = x;
        prev_v = v;
    }
    Ok(BetaRoot::NoPositiveRoot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warp_degenerate_lambda_one() {
        let w = warp_function(1.0, 10.0, 200).unwrap();
        assert_eq!(w.max_ratio, 0.0);
        assert!(w.samples.iter().all(|(_, f)| *f == 1.0));
    }

    #[test]
    fn warp_midpoint_symmetry() {
        // At the midpoint the two exponentials coincide: f = (lambda-1)/2 + 1.
        let f = warp_value(2.0, 40.0, 20.0);
        assert!((f - 1.5).abs() < 1e-12);
    }

    #[test]
    fn warp_endpoints_exact() {
        for lambda in [1.5, 2.0, 10.0] {
            let t = 40.0;
            assert!((warp_value(lambda, t, 1.0) - 1.0).abs() < 1e-9);
            assert!((warp_value(lambda, t, t - 1.0) - lambda).abs() < 1e-9);
            assert!((warp_value(lambda, t, 0.3) - 1.0).abs() < 1e-12);
            assert!((warp_value(lambda, t, t) - lambda).abs() < 1e-12);
        }
    }

    #[test]
    fn warp_samples_monotone() {
        let w = warp_function(2.0, 40.0, 1000).unwrap();
        for pair in w.samples.windows(2) {
            assert!(pair[1].1 >= pair[0].1 - 1e-12);
        }
    }

    #[test]
    fn warp_ratio_bounded_at_t40_lambda2() {
        // Finite-difference oracle at a fine grid: the bound must hold at T=40.
        let w = warp_function(2.0, 40.0, 100_000).unwrap();
        assert!(w.max_ratio <= 1.0, "max ratio {}", w.max_ratio);
    }

    #[test]
    fn thickening_diameter_bound_binds() {
        // lambda = 1 makes the ratio constraint vacuous: T = 3 D_j.
        let t = min_thickening(1.0, 2.0, 1e-6).unwrap();
        assert_eq!(t, 6.0);
        // Halving T violates the constraint set.
        assert!(!thickening_ok(1.0, 2.0, t / 2.0, 1e-6));
    }

    #[test]
    fn thickening_ratio_bound_monotone_in_lambda() {
        let t2 = min_thickening(2.0, 0.0, 1e-6).unwrap();
        let t10 = min_thickening(10.0, 1.0, 1e-6).unwrap();
        assert!(t2 >= 4.0);
        assert!(t10 >= t2, "t10 {t10} vs t2 {t2}");
        assert!(thickening_ok(2.0, 0.0, t2, 1e-6));
        assert!(!thickening_ok(2.0, 0.0, t2 / 2.0, 1e-6) || t2 == 4.0);
    }

    #[test]
    fn beta_root_quadratic_in_x2() {
        // 0.2 x^4 - x^2 + 1.2 = 0 factors through y^2 - 5y + 6 with y = x^2,
        // so the least positive root is sqrt(2).
        let r = beta_root(1.2, 4).unwrap();
        match r {
            BetaRoot::Root { x } => {
                assert!((x - 2f64.sqrt()).abs() < 1e-9, "root {x}");
                let residual = 0.2 * x.powi(4) - x * x + 1.2;
                assert!(residual.abs() < 1e-9);
            }
            BetaRoot::NoPositiveRoot => panic!("expected a root"),
        }
    }

    #[test]
    fn beta_root_all_positive_terms() {
        // 0.5 x^2 + 0.5 > 0 everywhere.
        let r = beta_root(1.5, 2).unwrap();
        assert_eq!(r, BetaRoot::NoPositiveRoot);
    }

    #[test]
    fn beta_root_near_one_lambda() {
        let r = beta_root(1.01, 8).unwrap();
        if let BetaRoot::Root { x } = r {
            let residual = 0.01 * x.powi(8) - x.powi(6) + 1.01;
            assert!(residual.abs() < 1e-9, "residual {residual}");
            assert!(x > 0.0);
        }
    }

    #[test]
    fn synthesize_power_layout_doubles_bound() {
        let catalog = PieceCatalog {
            elements: vec![CatalogElement {
                name: "m".to_string(),
                boundary_counts: vec![1, 2, 3],
                unit_volume: BigRational::one(),
                height_units: 1,
                boundary_diameter: BigRational::one(),
            }],
            l: 1,
            h: BigRational::one(),
            cap_h: BigRational::from_integer(BigInt::from(2)),
            u: BigRational::one(),
            cap_u: BigRational::from_integer(BigInt::from(3)),
        };
        let layout = EndsLayout::power_layout(2, 10);
        let p = synthesize_params(&catalog, &layout, 4).unwrap();
        // U_j = max(U k^j, u_j) with U = 3, k = 2.
        let vals: Vec<String> = p
            .per_interval
            .iter()
            .map(|i| exact::ratio_to_string(&i.cap_u_j))
            .collect();
        assert_eq!(vals, ["6", "12", "24", "48"]);
    }

    #[test]
    fn synthesize_single_ray_constant() {
        let catalog = PieceCatalog::default_desk(2);
        let layout = EndsLayout::single_ray(20);
        let p = synthesize_params(&catalog, &layout, 3).unwrap();
        for i in &p.per_interval {
            assert_eq!(i.components, 1);
            assert_eq!(exact::ratio_to_string(&i.cap_u_j), "1");
            assert_eq!(i.t_j, 1);
        }
    }

    #[test]
    fn synthesize_missing_boundary_count() {
        let mut catalog = PieceCatalog::default_desk(1);
        catalog.elements[0].boundary_counts = vec![1, 2];
        let mut layout = EndsLayout::single_ray(10);
        layout.boundary_counts_needed = vec![1, 2, 3];
        let err = synthesize_params(&catalog, &layout, 2).unwrap_err();
        assert!(matches!(err, PieceError::IncompleteCatalog(3)));
    }

    #[test]
    fn piece_validation_blocks() {
        let bounds = PieceBounds {
            l: 2,
            h: BigRational::one(),
            cap_h: BigRational::from_integer(BigInt::from(2)),
            u_lower: BigRational::one(),
            u_upper: BigRational::from_integer(BigInt::from(3)),
        };
        let ok = PieceParams {
            kind: PieceKind::HS,
            height_units: 1,
            profile: vec![BigRational::one(), BigRational::from_integer(BigInt::from(2))],
            diameter_d: BigRational::one(),
            components: 1,
        };
        ok.validate(&bounds).unwrap();
        let too_heavy = PieceParams {
            kind: PieceKind::HS,
            height_units: 1,
            profile: vec![BigRational::from_integer(BigInt::from(5))],
            diameter_d: BigRational::one(),
            components: 1,
        };
        assert!(too_heavy.validate(&bounds).is_err());
        let too_long = PieceParams {
            kind: PieceKind::R,
            height_units: 1,
            profile: vec![BigRational::one(); 3],
            diameter_d: BigRational::one(),
            components: 1,
        };
        assert!(too_long.validate(&bounds).is_err());
    }
}
