//! Headline numerical studies: the minimal-unduloid period scan (embedded
//! non-Clifford minimal tori), the tau threshold where those disappear,
//! embeddedness-region mapping for CMC spheres, and the sphere-versus-torus
//! isoperimetric comparison.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{period, FlowParams};
use crate::closed_form;
use crate::error::{Error, Result};
use crate::numerics::{find_root, QuadratureSpec, RootBracket};
use crate::space::{SpaceKind, SpaceParams};

/// One point of an isoperimetric candidate family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IsoperimetricPoint {
    pub h: f64,
    pub area: f64,
    pub volume: f64,
    pub family: Family,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sphere,
    CliffordTorus,
}

/// A located root with its bracket and residual, for reproducible reports.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocatedRoot {
    pub x: f64,
    pub f: f64,
    pub bracket: (f64, f64),
}

/// Scan of a scalar function over a grid, with any sign-change roots.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub roots: Vec<LocatedRoot>,
}

/// Default energy grid of the minimal-unduloid scan on (0, sqrt(kappa)/4]:
/// uniform coverage plus a geometric tail towards the degenerate endpoint,
/// where the period approaches its supremum.
pub fn default_lawson_grid(kappa: f64) -> Vec<f64> {
    let e_max = kappa.sqrt() / 4.0;
    let mut grid: Vec<f64> = (1..=160).map(|i| e_max * i as f64 / 161.0).collect();
    for k in 1..=24 {
        grid.push(e_max * (1.0 - 10f64.powf(-0.375 * k as f64)));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

/// Period of the minimal unduloid, T(0, E).
pub fn minimal_period(e: f64, sp: &SpaceParams, spec: &QuadratureSpec) -> Result<f64> {
    period(&FlowParams::new(0.0, e), sp, spec)
}

/// Scans T(0, E) - 2 pi over the energy grid and polishes the first sign
/// change; `Some(E*)` is an embedded compact minimal unduloid (a minimal
/// torus that is not the Clifford torus).
pub fn lawson_scan(sp: &SpaceParams, e_grid: &[f64]) -> Result<Option<f64>> {
    Ok(lawson_scan_report(sp, e_grid)?.roots.first().map(|r| r.x))
}

pub fn lawson_scan_report(sp: &SpaceParams, e_grid: &[f64]) -> Result<ScanReport> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    let spec = QuadratureSpec::with_tol(1e-12);
    let two_pi = 2.0 * std::f64::consts::PI;
    let e_max = sp.kappa.sqrt() / 4.0;
    let grid: Vec<f64> = e_grid
        .iter()
        .copied()
        .filter(|&e| e > 0.0 && e <= e_max && (e_max - e) > 1e-12)
        .collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&e| minimal_period(e, sp, &spec).unwrap_or(f64::NAN))
        .collect();
    let mut roots = Vec::new();
    for w in 0..grid.len().saturating_sub(1) {
        let (e0, e1) = (grid[w], grid[w + 1]);
        let (f0, f1) = (values[w] - two_pi, values[w + 1] - two_pi);
        if !(f0.is_finite() && f1.is_finite()) || f0 * f1 > 0.0 {
            continue;
        }
        let f = |e: f64| minimal_period(e, sp, &spec).map(|t| t - two_pi).unwrap_or(f64::NAN);
        let bracket = RootBracket::from_values(e0, e1, f0, f1)?;
        let root = find_root(f, bracket, 1e-13)?;
        roots.push(LocatedRoot { x: root, f: f(root), bracket: (e0, e1) });
        break; // the period is monotone in E; one crossing
    }
    Ok(ScanReport { grid, values, roots })
}

/// Bisects, to width 1e-3, the tau at which the minimal-unduloid period
/// scan stops finding T = 2 pi (reported as computed, without asserting
/// anything beyond the scan itself).
pub fn tau0_estimate(kappa: f64, bracket: (f64, f64)) -> Result<f64> {
    let grid = default_lawson_grid(kappa);
    let has_root = |tau: f64| -> Result<bool> {
        let sp = SpaceParams::berger(kappa, tau)?;
        Ok(lawson_scan(&sp, &grid)?.is_some())
    };
    let (mut lo, mut hi) = bracket;
    let (p_lo, p_hi) = (has_root(lo)?, has_root(hi)?);
    if p_lo == p_hi {
        return Err(Error::BracketError { lo, hi });
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if has_root(mid)? == p_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sign grid and located boundary of the non-embedded region of CMC
/// spheres in the (tau, H) plane.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddednessRegion {
    pub tau_grid: Vec<f64>,
    pub h_grid: Vec<f64>,
    /// y0(tau, H) + pi; positive = embedded; NaN = no sphere exists
    pub margin: Vec<Vec<f64>>,
    /// boundary points (tau, H) with |y0 + pi| <= 1e-8
    pub boundary: Vec<(f64, f64)>,
}

pub fn embeddedness_region(
    kind: SpaceKind,
    kappa: f64,
    tau_grid: &[f64],
    h_grid: &[f64],
) -> Result<EmbeddednessRegion> {
    let rows: Vec<(Vec<f64>, Vec<(f64, f64)>)> = tau_grid
        .par_iter()
        .map(|&tau| {
            let Ok(sp) = SpaceParams::new(kind, kappa, tau) else {
                return (vec![f64::NAN; h_grid.len()], Vec::new());
            };
            let margin = |h: f64| -> f64 {
                closed_form::sphere_y0(h, &sp)
                    .map(|y0| y0 + std::f64::consts::PI)
                    .unwrap_or(f64::NAN)
            };
            let row: Vec<f64> = h_grid.iter().map(|&h| margin(h)).collect();
            let mut boundary = Vec::new();
            for w in 0..h_grid.len().saturating_sub(1) {
                let (h0, h1) = (h_grid[w], h_grid[w + 1]);
                let (f0, f1) = (row[w], row[w + 1]);
                if !(f0.is_finite() && f1.is_finite()) || f0 * f1 > 0.0 {
                    continue;
                }
                if let Ok(b) = RootBracket::from_values(h0, h1, f0, f1) {
                    if let Ok(root) = find_root(margin, b, 1e-12) {
                        boundary.push((tau, root));
                    }
                }
            }
            (row, boundary)
        })
        .collect();
    let mut margin = Vec::with_capacity(rows.len());
    let mut boundary = Vec::new();
    for (row, mut b) in rows {
        margin.push(row);
        boundary.append(&mut b);
    }
    Ok(EmbeddednessRegion {
        tau_grid: tau_grid.to_vec(),
        h_grid: h_grid.to_vec(),
        margin,
        boundary,
    })
}

/// Sphere and torus candidate families over an H grid, both enclosed-volume
/// branches (a surface with mean curvature H bounds Omega_H and its
/// complement).
pub fn isoperimetric_profile(sp: &SpaceParams, h_grid: &[f64]) -> Result<Vec<IsoperimetricPoint>> {
    if !sp.is_berger() {
        return Err(Error::BergerOnly);
    }
    let total = closed_form::total_volume(sp)?;
    let mut out = Vec::with_capacity(4 * h_grid.len());
    for &h in h_grid {
        if h < 0.0 {
            return Err(Error::InvalidParams("H grid must be nonnegative".into()));
        }
        let area = closed_form::sphere_area(h, sp)?;
        let vol = closed_form::sphere_volume(h, sp)?;
        out.push(IsoperimetricPoint { h, area, volume: vol, family: Family::Sphere });
        if h > 0.0 {
            out.push(IsoperimetricPoint { h, area, volume: total - vol, family: Family::Sphere });
        }
    }
    for &h in h_grid {
        let (area, vol) = closed_form::torus_area_volume(h, sp)?;
        out.push(IsoperimetricPoint { h, area, volume: vol, family: Family::CliffordTorus });
        if h > 0.0 {
            out.push(IsoperimetricPoint {
                h,
                area,
                volume: total - vol,
                family: Family::CliffordTorus,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.family as u8, a.volume)
            .partial_cmp(&(b.family as u8, b.volume))
            .unwrap()
    });
    Ok(out)
}

/// Area of the sphere family at enclosed volume v (either branch; the two
/// branches carry the same area at mirrored volumes), by root finding in H.
pub fn sphere_area_at_volume(v: f64, sp: &SpaceParams) -> Result<f64> {
    let total = closed_form::total_volume(sp)?;
    if !(0.0 < v && v < total) {
        return Err(Error::InvalidParams(format!("volume {v} outside (0, total)")));
    }
    // vol(Omega_H) decreases from total/2 at H = 0 towards 0
    let target = if v <= total / 2.0 { v } else { total - v };
    let f = |h: f64| closed_form::sphere_volume(h, sp).unwrap_or(f64::NAN) - target;
    let mut hi = 1.0;
    while f(hi) > 0.0 && hi < 1e6 {
        hi *= 2.0;
    }
    let bracket = RootBracket::new(f, 0.0, hi)?;
    let h = find_root(f, bracket, 1e-12)?;
    closed_form::sphere_area(h, sp)
}

/// Area of the torus family at enclosed volume v.
pub fn torus_area_at_volume(v: f64, sp: &SpaceParams) -> Result<f64> {
    let total = closed_form::total_volume(sp)?;
    if !(0.0 < v && v < total) {
        return Err(Error::InvalidParams(format!("volume {v} outside (0, total)")));
    }
    let target = if v <= total / 2.0 { v } else { total - v };
    let f = |h: f64| closed_form::torus_area_volume(h, sp).map(|(_, vol)| vol).unwrap_or(f64::NAN) - target;
    let mut hi = 1.0;
    while f(hi) > 0.0 && hi < 1e6 {
        hi *= 2.0;
    }
    let bracket = RootBracket::new(f, 0.0, hi)?;
    let h = find_root(f, bracket, 1e-12)?;
    Ok(closed_form::torus_area_volume(h, sp)?.0)
}

/// The tau at which the minimal sphere and the minimal Clifford torus have
/// equal area (they enclose the same half-total volume for every tau), at
/// fixed kappa.
pub fn isoperimetric_crossing(kappa: f64) -> Result<f64> {
    if kappa <= 0.0 {
        return Err(Error::InvalidParams("kappa must be positive".into()));
    }
    let diff = |tau: f64| -> f64 {
        let sp = SpaceParams::berger(kappa, tau).unwrap();
        let a_s = closed_form::sphere_area(0.0, &sp).unwrap();
        let a_t = closed_form::torus_area_volume(0.0, &sp).unwrap().0;
        a_s - a_t
    };
    let bracket = RootBracket::new(diff, 0.25 * kappa.sqrt() / 2.0, 0.45 * kappa.sqrt())
        .or_else(|_| RootBracket::new(diff, 0.05, 0.49 * kappa.sqrt()))?;
    find_root(diff, bracket, 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn lawson_root_exists_at_tau_04() {
        let sp = SpaceParams::berger(4.0, 0.4).unwrap();
        let grid = default_lawson_grid(4.0);
        let e_star = lawson_scan(&sp, &grid).unwrap().expect("root must exist");
        // frozen from the independent prototype scan
        assert_relative_eq!(e_star, 0.218_491_789_048, max_relative = 1e-7);
        let t = minimal_period(e_star, &sp, &QuadratureSpec::with_tol(1e-12)).unwrap();
        assert_abs_diff_eq!(t, 2.0 * std::f64::consts::PI, epsilon = 1e-9);
    }

    #[test]
    fn no_lawson_root_at_tau_08() {
        let sp = SpaceParams::berger(4.0, 0.8).unwrap();
        let grid = default_lawson_grid(4.0);
        assert!(lawson_scan(&sp, &grid).unwrap().is_none());
    }

    #[test]
    fn crossing_near_0408() {
        let t = isoperimetric_crossing(4.0).unwrap();
        assert!((0.402..=0.412).contains(&t), "crossing {t}");
        // the defining scalar equation at the root:
        // 1 + tau^2/sqrt(1-tau^2) artanh(sqrt(1-tau^2)) = pi tau
        let s = (1.0 - t * t).sqrt();
        assert_abs_diff_eq!(1.0 + t * t / s * s.atanh(), std::f64::consts::PI * t, epsilon = 1e-7);
    }

    #[test]
    fn half_volume_points_match() {
        let sp = SpaceParams::berger(4.0, 0.5).unwrap();
        let pts = isoperimetric_profile(&sp, &[0.0, 0.5, 1.0]).unwrap();
        let total = closed_form::total_volume(&sp).unwrap();
        for fam in [Family::Sphere, Family::CliffordTorus] {
            let at_zero: Vec<_> = pts.iter().filter(|p| p.family == fam && p.h == 0.0).collect();
            assert_eq!(at_zero.len(), 1);
            assert_abs_diff_eq!(at_zero[0].volume, total / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn embeddedness_region_boundary_points_are_roots() {
        let tau_grid: Vec<f64> = (1..=12).map(|i| 0.1 + 0.05 * i as f64).collect();
        let h_grid: Vec<f64> = (0..=40).map(|i| 0.05 + 3.0 * i as f64 / 40.0).collect();
        let region =
            embeddedness_region(SpaceKind::BergerSphere, 4.0, &tau_grid, &h_grid).unwrap();
        assert!(!region.boundary.is_empty(), "kappa = 4 has a non-embedded region");
        for &(tau, h) in &region.boundary {
            let sp = SpaceParams::berger(4.0, tau).unwrap();
            let y0 = closed_form::sphere_y0(h, &sp).unwrap();
            assert_abs_diff_eq!(y0 + std::f64::consts::PI, 0.0, epsilon = 1e-8);
        }
        // tau = 0.9: embedded for every scanned H
        let sp = SpaceParams::berger(4.0, 0.9).unwrap();
        for &h in &h_grid {
            assert!(closed_form::sphere_y0(h, &sp).unwrap() > -std::f64::consts::PI);
        }
    }

    #[test]
    fn sl2r_region_excludes_no_sphere_cells() {
        let tau_grid = [0.5, 1.0];
        let h_grid = [0.5, 0.9, 1.1, 2.0];
        let region = embeddedness_region(SpaceKind::Sl2R, -4.0, &tau_grid, &h_grid).unwrap();
        for row in &region.margin {
            // 4H^2 + kappa <= 0 for H <= 1: those cells must be NaN
            assert!(row[0].is_nan() && row[1].is_nan());
            assert!(row[2].is_finite() && row[3].is_finite());
        }
    }
}
