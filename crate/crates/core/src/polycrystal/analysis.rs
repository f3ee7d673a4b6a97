//! Boundary structure of a polycrystal and the outer bounds built from it.
//!
//! At a boundary point `x` with outer normal `ν(x)` and slip direction `s(x)`,
//! any solution forces `F` to be ν-compatible with `N_{s(x)}`. Collecting these
//! constraints gives the bound `T∂`; at points where `ν(x) ⊥ s(x)` the
//! constraint is plain membership `F ∈ N_{s(x)}`, which gives the coarser
//! bound `T⊥ = ⋂_{i∈J} N R_{θ_i}ᵀ`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundaryCurve, Polycrystal};
use crate::compat::nu_compatible;
use crate::error::{Error, Result};
use crate::mat2::{decompose, wrap_pi, Mat2, Vec2};

pub const DEFAULT_ANGULAR_TOL: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 720;

/// Curve parameters closer than this to an endpoint are not sampled.
const ENDPOINT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerpPoint {
    pub point: Vec2,
    pub grain: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAnalysis {
    /// Ids of grains with a boundary piece on `∂Ω`.
    pub boundary_grains: Vec<usize>,
    /// Points of `∂Ω` where two or more grains meet.
    pub dual_points: Vec<Vec2>,
    /// Points of `∂Ω` where the domain boundary has a kink.
    pub corners: Vec<Vec2>,
    /// Regular boundary points where the normal is perpendicular to the slip
    /// direction; a whole perpendicular segment is represented by its midpoint.
    pub perp_points: Vec<PerpPoint>,
    /// Grains with at least one perpendicular point.
    pub j: Vec<usize>,
    /// Grains whose boundary normals, up to sign, cover every direction.
    pub j_prime: Vec<usize>,
}

fn push_unique(points: &mut Vec<Vec2>, x: Vec2, tol: f64) {
    if points.iter().all(|p| p.dist(&x) > tol) {
        points.push(x);
    }
}

fn dual_points(pc: &Polycrystal, outer: &[(usize, BoundaryCurve)]) -> Vec<Vec2> {
    let mut out = Vec::new();
    for (_, c) in outer {
        for x in [c.start(), c.end()] {
            let touching = pc
                .grains()
                .iter()
                .filter(|g| pc.on_grain_boundary(g, x))
                .count();
            if touching >= 2 {
                push_unique(&mut out, x, pc.tol());
            }
        }
    }
    out
}

fn corners(pc: &Polycrystal) -> Vec<Vec2> {
    let d = pc.domain();
    let mut out = Vec::new();
    for i in 0..d.len() {
        let next = &d[(i + 1) % d.len()];
        let t_in = d[i].tangent_at(1.0);
        let t_out = next.tangent_at(0.0);
        if t_in.cross(&t_out).abs() > 1e-9 || t_in.dot(&t_out) < 0.0 {
            push_unique(&mut out, next.start(), pc.tol());
        }
    }
    out
}

/// Radial angles on an arc where the outward normal is `±s⊥`.
fn arc_perp_angles(c: &BoundaryCurve, s: Vec2) -> [f64; 2] {
    let target = s.angle() + FRAC_PI_2;
    // the outward normal is radial for counter-clockwise arcs and anti-radial otherwise
    let shift = if c.sweep() > 0.0 { 0.0 } else { PI };
    [target - shift, target + PI - shift]
}

/// `true` when the `±ν` directions of the curves cover `[0, π)` up to `tol`.
fn normals_cover(curves: &[&BoundaryCurve], tol: f64) -> bool {
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for c in curves {
        let (start, sweep) = c.normal_angle_range();
        if sweep.abs() >= PI - tol {
            return true;
        }
        let a = wrap_pi(if sweep >= 0.0 { start } else { start + sweep });
        let b = a + sweep.abs();
        if b > PI {
            intervals.push((a, PI));
            intervals.push((0.0, b - PI));
        } else {
            intervals.push((a, b));
        }
    }
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut reach = 0.0;
    for (a, b) in intervals {
        if a > reach + tol {
            return false;
        }
        reach = f64::max(reach, b);
    }
    reach >= PI - tol
}

pub fn analyze_boundary(pc: &Polycrystal, angular_tol: f64) -> BoundaryAnalysis {
    let outer = pc.outer_curves();
    let duals = dual_points(pc, &outer);
    let kinks = corners(pc);
    let excluded = |x: Vec2| duals.iter().chain(&kinks).any(|p| p.dist(&x) <= pc.tol());

    let mut boundary_grains = Vec::new();
    let mut perp_points = Vec::new();
    let mut j = Vec::new();
    let mut j_prime = Vec::new();
    for (gi, g) in pc.grains().iter().enumerate() {
        let mine: Vec<&BoundaryCurve> = outer
            .iter()
            .filter(|(i, _)| *i == gi)
            .map(|(_, c)| c)
            .collect();
        if mine.is_empty() {
            continue;
        }
        boundary_grains.push(g.id);
        let s = g.slip();
        let mut pts: Vec<Vec2> = Vec::new();
        for c in &mine {
            match c {
                BoundaryCurve::Segment { .. } => {
                    if c.normal_at(0.5).dot(&s).abs() <= angular_tol {
                        push_unique(&mut pts, c.point_at(0.5), pc.tol());
                    }
                }
                BoundaryCurve::Arc { center, radius, .. } => {
                    for phi in arc_perp_angles(c, s) {
                        if c.arc_contains_angle(phi, angular_tol) {
                            let x = *center + Vec2::from_angle(phi).scale(*radius);
                            if !excluded(x) {
                                push_unique(&mut pts, x, pc.tol());
                            }
                        }
                    }
                }
            }
        }
        if !pts.is_empty() {
            j.push(g.id);
        }
        perp_points.extend(
            pts.into_iter()
                .map(|point| PerpPoint { point, grain: g.id }),
        );
        if normals_cover(&mine, angular_tol) {
            j_prime.push(g.id);
        }
    }
    boundary_grains.sort_unstable();
    j.sort_unstable();
    j_prime.sort_unstable();
    BoundaryAnalysis {
        boundary_grains,
        dual_points: duals,
        corners: kinks,
        perp_points,
        j,
        j_prime,
    }
}

/// `⋂ N_{s_i}` over the listed slip directions; all of `SL(2)` when empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterBound {
    pub slip_directions: Vec<Vec2>,
    pub trivial_flag: bool,
}

impl OuterBound {
    pub fn contains(&self, f: &Mat2, tol: f64) -> bool {
        (f.det() - 1.0).abs() <= tol
            && self
                .slip_directions
                .iter()
                .all(|s| f.mul_vec(s).norm() <= 1.0 + tol)
    }
}

/// The bound `T⊥`: slip directions `R_{θ_i} e₁` of the grains in `J`, with
/// `s` and `−s` identified.
pub fn outer_bound_perp(pc: &Polycrystal) -> OuterBound {
    let analysis = analyze_boundary(pc, DEFAULT_ANGULAR_TOL);
    let mut angles: Vec<f64> = analysis
        .j
        .iter()
        .filter_map(|id| pc.grain(*id))
        .map(|g| wrap_pi(g.theta))
        .collect();
    angles.sort_by(f64::total_cmp);
    let mut uniq: Vec<f64> = Vec::new();
    for a in angles {
        let dup = uniq.iter().any(|&b| {
            let d = (a - b).abs();
            d <= crate::taylor::MERGE_TOL || PI - d <= crate::taylor::MERGE_TOL
        });
        if !dup {
            uniq.push(a);
        }
    }
    OuterBound {
        trivial_flag: uniq.is_empty(),
        slip_directions: uniq.into_iter().map(Vec2::from_angle).collect(),
    }
}

/// A boundary point tested by [`TraceBound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub point: Vec2,
    pub normal: Vec2,
    pub slip: Vec2,
    pub grain: usize,
}

/// Sampled version of `T∂`.
///
/// Samples are arc-length uniform midpoints on each outer curve plus all
/// perpendicular points. In addition, on every outer arc the test evaluates
/// the normal where the compatibility inequality is tightest for the given
/// `F`, so membership on arcs does not depend on the sampling density.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceBound {
    samples: Vec<BoundarySample>,
    arcs: Vec<(BoundaryCurve, Vec2)>,
}

impl TraceBound {
    pub fn new(pc: &Polycrystal, n_samples: usize) -> Self {
        let outer = pc.outer_curves();
        let total: f64 = outer.iter().map(|(_, c)| c.length()).sum();
        let mut samples = Vec::new();
        let mut arcs = Vec::new();
        for (gi, c) in &outer {
            let g = &pc.grains()[*gi];
            let slip = g.slip();
            let m = ((n_samples as f64 * c.length() / total).round() as usize).max(1);
            for k in 0..m {
                let u = (k as f64 + 0.5) / m as f64;
                samples.push(BoundarySample {
                    point: c.point_at(u),
                    normal: c.normal_at(u),
                    slip,
                    grain: g.id,
                });
            }
            if matches!(c, BoundaryCurve::Arc { .. }) {
                arcs.push((*c, slip));
            }
        }
        let analysis = analyze_boundary(pc, DEFAULT_ANGULAR_TOL);
        for p in &analysis.perp_points {
            let g = pc.grain(p.grain).expect("perp point grain exists");
            let (_, c) = outer
                .iter()
                .filter(|(gi, _)| pc.grains()[*gi].id == p.grain)
                .min_by(|a, b| a.1.distance(p.point).total_cmp(&b.1.distance(p.point)))
                .expect("perp point lies on an outer curve");
            let u = match c {
                BoundaryCurve::Arc { center, .. } => c.arc_parameter((p.point - *center).angle()),
                BoundaryCurve::Segment { .. } => 0.5,
            };
            samples.push(BoundarySample {
                point: p.point,
                normal: c.normal_at(u),
                slip: g.slip(),
                grain: g.id,
            });
        }
        Self { samples, arcs }
    }

    pub fn samples(&self) -> &[BoundarySample] {
        &self.samples
    }

    pub fn contains(&self, f: &Mat2, tol: f64) -> Result<bool> {
        let det = f.det();
        if (det - 1.0).abs() > tol {
            return Err(Error::NotSl2 { det });
        }
        let sampled = self
            .samples
            .par_iter()
            .map(|x| nu_compatible(f, x.slip, x.normal, tol))
            .collect::<Result<Vec<bool>>>()?;
        if sampled.iter().any(|ok| !ok) {
            return Ok(false);
        }
        for (c, s) in &self.arcs {
            let frame = decompose(f, *s, tol)?;
            // normal angle minimizing (tβ + γ)², where t = −tan(angle(ν) − angle(s))
            let critical = s.angle() + (frame.gamma / frame.beta).atan();
            let shift = if c.sweep() > 0.0 { 0.0 } else { PI };
            for phi in [critical - shift, critical + PI - shift] {
                if !c.arc_contains_angle(phi, 0.0) {
                    continue;
                }
                let u = c.arc_parameter(phi);
                if u <= ENDPOINT_MARGIN || u >= 1.0 - ENDPOINT_MARGIN {
                    continue;
                }
                if !nu_compatible(f, *s, c.normal_at(u), tol)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Sampled membership of `F` in `T∂`; see [`TraceBound`].
pub fn outer_bound_full_member(
    f: &Mat2,
    pc: &Polycrystal,
    n_samples: usize,
    tol: f64,
) -> Result<bool> {
    TraceBound::new(pc, n_samples).contains(f, tol)
}

/// `true` when every boundary grain has a perpendicular point, in which case
/// `T∂ = T⊥`.
pub fn equal_perp_full(pc: &Polycrystal) -> bool {
    let a = analyze_boundary(pc, DEFAULT_ANGULAR_TOL);
    a.boundary_grains.iter().all(|g| a.j.contains(g))
}
