//! Planar polycrystals bounded by segments and circular arcs, and the outer
//! bounds obtained from rank-one compatibility along the domain boundary.

mod analysis;
mod curve;
pub mod examples;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat2::{wrap_pi, wrap_two_pi, Vec2};

pub use analysis::{
    analyze_boundary, equal_perp_full, outer_bound_full_member, outer_bound_perp, BoundaryAnalysis,
    BoundarySample, OuterBound, PerpPoint, TraceBound, DEFAULT_ANGULAR_TOL, DEFAULT_SAMPLES,
};
pub use curve::BoundaryCurve;

/// Pieces used per full turn when arcs are replaced by polylines.
const ARC_PIECES: usize = 96;

/// Shared boundary length above which two grains count as neighbours.
const ADJACENCY_LENGTH: f64 = 1e-9;

/// A grain with a constant texture: slip direction `R_θ e₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grain {
    pub id: usize,
    pub boundary: Vec<BoundaryCurve>,
    pub theta: f64,
}

impl Grain {
    pub fn slip(&self) -> Vec2 {
        Vec2::from_angle(self.theta)
    }

    pub fn area(&self) -> f64 {
        loop_area(&self.boundary)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawPolycrystal {
    domain: Vec<BoundaryCurve>,
    grains: Vec<Grain>,
}

/// A validated polycrystal. Construction checks that every loop is closed,
/// counter-clockwise and simple, that grain areas add up to the domain area,
/// and that neighbouring grains have different textures mod `π`.
///
/// Grain loops must be split at every point where they meet or leave the
/// domain boundary, so each piece lies either on `∂Ω` or inside `Ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolycrystal")]
pub struct Polycrystal {
    domain: Vec<BoundaryCurve>,
    grains: Vec<Grain>,
    #[serde(skip)]
    tol: f64,
}

impl TryFrom<RawPolycrystal> for Polycrystal {
    type Error = Error;
    fn try_from(raw: RawPolycrystal) -> Result<Self> {
        Self::new(raw.domain, raw.grains)
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidPolycrystal(msg.into()))
}

fn loop_area(curves: &[BoundaryCurve]) -> f64 {
    curves.iter().map(BoundaryCurve::signed_area).sum()
}

fn loop_distance(curves: &[BoundaryCurve], x: Vec2) -> f64 {
    curves
        .iter()
        .map(|c| c.distance(x))
        .fold(f64::INFINITY, f64::min)
}

fn segment_distance(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    let seg = |p: Vec2, q: Vec2| BoundaryCurve::segment(p, q);
    let o1 = (b - a).cross(&(c - a));
    let o2 = (b - a).cross(&(d - a));
    let o3 = (d - c).cross(&(a - c));
    let o4 = (d - c).cross(&(b - c));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return 0.0;
    }
    seg(a, b)
        .distance(c)
        .min(seg(a, b).distance(d))
        .min(seg(c, d).distance(a))
        .min(seg(c, d).distance(b))
}

fn check_loop(curves: &[BoundaryCurve], name: &str, tol: f64) -> Result<()> {
    if curves.is_empty() {
        return invalid(format!("{name} has an empty boundary"));
    }
    for c in curves {
        let finite = match *c {
            BoundaryCurve::Segment { p, q } => [p.x, p.y, q.x, q.y].iter().all(|v| v.is_finite()),
            BoundaryCurve::Arc {
                center,
                radius,
                from_angle,
                to_angle,
                ..
            } => {
                [center.x, center.y, radius, from_angle, to_angle]
                    .iter()
                    .all(|v| v.is_finite())
                    && radius > 0.0
            }
        };
        if !finite {
            return invalid(format!("{name} has a non-finite or degenerate curve"));
        }
        if c.length() <= tol {
            return invalid(format!("{name} has a zero-length curve"));
        }
    }
    let n = curves.len();
    for i in 0..n {
        let gap = curves[i].end().dist(&curves[(i + 1) % n].start());
        if gap > tol {
            return invalid(format!(
                "{name} is not closed (gap {gap:.3e} after curve {i})"
            ));
        }
    }
    if loop_area(curves) <= 0.0 {
        return invalid(format!("{name} is not counter-clockwise"));
    }
    // simple: non-adjacent polyline edges stay apart
    let mut edges: Vec<(Vec2, Vec2)> = Vec::new();
    for c in curves {
        let pts = c.polyline(ARC_PIECES);
        edges.extend(pts.windows(2).map(|w| (w[0], w[1])));
    }
    let m = edges.len();
    for i in 0..m {
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if segment_distance(a, b, c, d) <= tol {
                return invalid(format!("{name} intersects itself"));
            }
        }
    }
    Ok(())
}

/// Counter-clockwise start angle and length of an arc's angular range.
fn ccw_range(c: &BoundaryCurve) -> Option<(Vec2, f64, f64, f64)> {
    match *c {
        BoundaryCurve::Arc {
            center,
            radius,
            from_angle,
            ..
        } => {
            let sw = c.sweep();
            let start = if sw > 0.0 {
                from_angle
            } else {
                from_angle + sw
            };
            Some((center, radius, wrap_two_pi(start), sw.abs()))
        }
        BoundaryCurve::Segment { .. } => None,
    }
}

/// Length of the common part of two boundary pieces.
fn shared_length(c1: &BoundaryCurve, c2: &BoundaryCurve, tol: f64) -> f64 {
    match (c1, c2) {
        (BoundaryCurve::Segment { p, q }, BoundaryCurve::Segment { p: r, q: s }) => {
            let d = *q - *p;
            let len = d.norm();
            let dir = d.scale(1.0 / len);
            if dir.cross(&(*r - *p)).abs() > tol || dir.cross(&(*s - *p)).abs() > tol {
                return 0.0;
            }
            let (u1, u2) = ((*r - *p).dot(&dir), (*s - *p).dot(&dir));
            (u1.max(u2).min(len) - u1.min(u2).max(0.0)).max(0.0)
        }
        (BoundaryCurve::Arc { .. }, BoundaryCurve::Arc { .. }) => {
            let (c_a, r_a, a, la) = ccw_range(c1).unwrap();
            let (c_b, r_b, b, lb) = ccw_range(c2).unwrap();
            if c_a.dist(&c_b) > tol || (r_a - r_b).abs() > tol {
                return 0.0;
            }
            let offset = wrap_two_pi(b - a);
            let overlap: f64 = [offset - 2.0 * PI, offset, offset + 2.0 * PI]
                .iter()
                .map(|&o| (la.min(o + lb) - o.max(0.0)).max(0.0))
                .sum();
            overlap * r_a
        }
        _ => 0.0,
    }
}

fn same_texture(t1: f64, t2: f64) -> bool {
    let d = wrap_pi(t1 - t2);
    d <= crate::taylor::MERGE_TOL || PI - d <= crate::taylor::MERGE_TOL
}

impl Polycrystal {
    pub fn new(domain: Vec<BoundaryCurve>, grains: Vec<Grain>) -> Result<Self> {
        if grains.is_empty() {
            return invalid("no grains");
        }
        let scale = domain
            .iter()
            .flat_map(|c| c.polyline(8))
            .map(|p| p.norm())
            .fold(1.0, f64::max);
        let tol = 1e-8 * scale;
        check_loop(&domain, "domain", tol)?;
        let mut ids: Vec<usize> = Vec::with_capacity(grains.len());
        for g in &grains {
            if !g.theta.is_finite() {
                return invalid(format!("grain {} has a non-finite texture angle", g.id));
            }
            check_loop(&g.boundary, &format!("grain {}", g.id), tol)?;
            ids.push(g.id);
        }
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return invalid("duplicate grain ids");
        }
        let total: f64 = grains.iter().map(Grain::area).sum();
        let area = loop_area(&domain);
        if (total - area).abs() > 1e-6 * area {
            return invalid(format!("grain areas sum to {total}, domain area is {area}"));
        }
        for (i, g) in grains.iter().enumerate() {
            for h in &grains[i + 1..] {
                let shared: f64 = g
                    .boundary
                    .iter()
                    .flat_map(|c1| h.boundary.iter().map(move |c2| shared_length(c1, c2, tol)))
                    .sum();
                if shared > ADJACENCY_LENGTH && same_texture(g.theta, h.theta) {
                    return invalid(format!(
                        "neighbouring grains {} and {} have the same texture",
                        g.id, h.id
                    ));
                }
            }
        }
        Ok(Self {
            domain,
            grains,
            tol,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidPolycrystal(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polycrystal serializes")
    }

    pub fn domain(&self) -> &[BoundaryCurve] {
        &self.domain
    }

    pub fn grains(&self) -> &[Grain] {
        &self.grains
    }

    pub fn grain(&self, id: usize) -> Option<&Grain> {
        self.grains.iter().find(|g| g.id == id)
    }

    /// Geometric tolerance, proportional to the size of the domain.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn area(&self) -> f64 {
        loop_area(&self.domain)
    }

    /// Texture angles of all grains, in grain order.
    pub fn thetas(&self) -> Vec<f64> {
        self.grains.iter().map(|g| g.theta).collect()
    }

    /// `true` when `x` lies on the domain boundary.
    pub fn on_domain_boundary(&self, x: Vec2) -> bool {
        loop_distance(&self.domain, x) <= self.tol
    }

    /// `true` when `x` lies on the boundary of grain `g`.
    pub fn on_grain_boundary(&self, g: &Grain, x: Vec2) -> bool {
        loop_distance(&g.boundary, x) <= self.tol
    }

    /// Grain boundary pieces lying on `∂Ω`, as `(grain index, curve)`.
    pub fn outer_curves(&self) -> Vec<(usize, BoundaryCurve)> {
        let mut out = Vec::new();
        for (gi, g) in self.grains.iter().enumerate() {
            for c in &g.boundary {
                let on_boundary = [0.1, 0.3, 0.5, 0.7, 0.9]
                    .iter()
                    .all(|&u| self.on_domain_boundary(c.point_at(u)));
                if on_boundary {
                    out.push((gi, *c));
                }
            }
        }
        out
    }

    /// The polycrystal rotated by `R_ω`, textures included.
    pub fn rotated(&self, omega: f64) -> Result<Self> {
        let domain = self.domain.iter().map(|c| c.rotated(omega)).collect();
        let grains = self
            .grains
            .iter()
            .map(|g| Grain {
                id: g.id,
                boundary: g.boundary.iter().map(|c| c.rotated(omega)).collect(),
                theta: g.theta + omega,
            })
            .collect();
        Self::new(domain, grains)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn half(upper: bool) -> Vec<BoundaryCurve> {
        let (a, b) = if upper { (0.0, PI) } else { (PI, 0.0) };
        let left = Vec2::new(-1.0, 0.0);
        let right = Vec2::E1;
        let chord = if upper {
            BoundaryCurve::segment(left, right)
        } else {
            BoundaryCurve::segment(right, left)
        };
        vec![BoundaryCurve::arc(Vec2::zero(), 1.0, a, b, true), chord]
    }

    fn bicrystal(t1: f64, t2: f64) -> Result<Polycrystal> {
        Polycrystal::new(
            vec![BoundaryCurve::circle(Vec2::zero(), 1.0)],
            vec![
                Grain {
                    id: 1,
                    boundary: half(true),
                    theta: t1,
                },
                Grain {
                    id: 2,
                    boundary: half(false),
                    theta: t2,
                },
            ],
        )
    }

    #[test]
    fn accepts_bicrystal() {
        let pc = bicrystal(FRAC_PI_2, 0.5).unwrap();
        assert_eq!(pc.outer_curves().len(), 2);
        assert!((pc.area() - PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_equal_neighbours() {
        assert!(matches!(
            bicrystal(0.3, 0.3 + PI),
            Err(Error::InvalidPolycrystal(_))
        ));
    }

    #[test]
    fn rejects_clockwise_loop() {
        let cw: Vec<BoundaryCurve> = half(true)
            .iter()
            .rev()
            .map(BoundaryCurve::reversed)
            .collect();
        let err = Polycrystal::new(
            vec![BoundaryCurve::circle(Vec2::zero(), 1.0)],
            vec![
                Grain {
                    id: 1,
                    boundary: cw,
                    theta: 0.0,
                },
                Grain {
                    id: 2,
                    boundary: half(false),
                    theta: 1.0,
                },
            ],
        );
        assert!(
            matches!(err, Err(Error::InvalidPolycrystal(m)) if m.contains("counter-clockwise"))
        );
    }

    #[test]
    fn rejects_open_loop_and_bad_area() {
        let open = vec![BoundaryCurve::arc(Vec2::zero(), 1.0, 0.0, PI, true)];
        assert!(Polycrystal::new(
            vec![BoundaryCurve::circle(Vec2::zero(), 1.0)],
            vec![Grain {
                id: 1,
                boundary: open,
                theta: 0.0
            }],
        )
        .is_err());
        assert!(Polycrystal::new(
            vec![BoundaryCurve::circle(Vec2::zero(), 1.0)],
            vec![Grain {
                id: 1,
                boundary: half(true),
                theta: 0.0
            }],
        )
        .is_err());
    }

    #[test]
    fn rejects_self_intersection() {
        let p = [
            Vec2::zero(),
            Vec2::new(2.0, 2.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(0.0, 2.0),
        ];
        let bowtie: Vec<BoundaryCurve> = (0..4)
            .map(|i| BoundaryCurve::segment(p[i], p[(i + 1) % 4]))
            .collect();
        let err = Polycrystal::new(
            bowtie.clone(),
            vec![Grain {
                id: 1,
                boundary: bowtie,
                theta: 0.0,
            }],
        );
        assert!(err.is_err());
    }

    #[test]
    fn shared_lengths() {
        let tol = 1e-9;
        let a = BoundaryCurve::segment(Vec2::zero(), Vec2::new(2.0, 0.0));
        let b = BoundaryCurve::segment(Vec2::new(3.0, 0.0), Vec2::new(1.0, 0.0));
        assert!((shared_length(&a, &b, tol) - 1.0).abs() < 1e-15);
        let c1 = BoundaryCurve::arc(Vec2::zero(), 1.0, 0.0, PI, true);
        let c2 = BoundaryCurve::arc(Vec2::zero(), 1.0, 1.5 * PI, FRAC_PI_2, true);
        assert!((shared_length(&c1, &c2, tol) - FRAC_PI_2).abs() < 1e-12);
        let c3 = BoundaryCurve::arc(Vec2::zero(), 1.0, PI, 0.0, true);
        assert!(shared_length(&c1, &c3, tol) < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let pc = bicrystal(FRAC_PI_2, 0.5).unwrap();
        let back = Polycrystal::from_json(&pc.to_json()).unwrap();
        assert_eq!(pc, back);
        let text = r#"{"domain":[{"kind":"segment","p":[0,0],"q":[1,0]}],"grains":[]}"#;
        assert!(Polycrystal::from_json(text).is_err());
    }
}
