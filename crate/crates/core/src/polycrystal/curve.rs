//! Boundary pieces: line segments and circular arcs.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::mat2::{wrap_two_pi, Mat2, Vec2};

/// A piece of a closed boundary loop.
///
/// Loops are traversed counter-clockwise, so the outward normal is the
/// clockwise quarter turn of the tangent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCurve {
    Segment {
        p: Vec2,
        q: Vec2,
    },
    /// Arc of the circle `center + radius·(cos φ, sin φ)` from `from_angle`
    /// to `to_angle`; equal angles describe the full circle.
    Arc {
        center: Vec2,
        radius: f64,
        from_angle: f64,
        to_angle: f64,
        ccw: bool,
    },
}

/// Outward normal for a tangent of a counter-clockwise loop.
fn right_normal(t: Vec2) -> Vec2 {
    Vec2::new(t.y, -t.x)
}

impl BoundaryCurve {
    pub fn segment(p: Vec2, q: Vec2) -> Self {
        Self::Segment { p, q }
    }

    pub fn arc(center: Vec2, radius: f64, from_angle: f64, to_angle: f64, ccw: bool) -> Self {
        Self::Arc {
            center,
            radius,
            from_angle,
            to_angle,
            ccw,
        }
    }

    /// Full counter-clockwise circle starting at angle 0.
    pub fn circle(center: Vec2, radius: f64) -> Self {
        Self::arc(center, radius, 0.0, 0.0, true)
    }

    /// Signed angular sweep of an arc, in `(0, 2π]` when counter-clockwise and
    /// `[−2π, 0)` otherwise. Zero for segments.
    pub fn sweep(&self) -> f64 {
        match *self {
            Self::Segment { .. } => 0.0,
            Self::Arc {
                from_angle,
                to_angle,
                ccw,
                ..
            } => {
                if ccw {
                    let d = wrap_two_pi(to_angle - from_angle);
                    if d == 0.0 {
                        TAU
                    } else {
                        d
                    }
                } else {
                    let d = wrap_two_pi(from_angle - to_angle);
                    if d == 0.0 {
                        -TAU
                    } else {
                        -d
                    }
                }
            }
        }
    }

    /// Point at the normalized parameter `u ∈ [0, 1]`.
    pub fn point_at(&self, u: f64) -> Vec2 {
        match *self {
            Self::Segment { p, q } => p + (q - p).scale(u),
            Self::Arc {
                center,
                radius,
                from_angle,
                ..
            } => center + Vec2::from_angle(from_angle + self.sweep() * u).scale(radius),
        }
    }

    pub fn start(&self) -> Vec2 {
        self.point_at(0.0)
    }

    pub fn end(&self) -> Vec2 {
        match *self {
            Self::Segment { q, .. } => q,
            Self::Arc {
                center,
                radius,
                to_angle,
                from_angle,
                ..
            } => {
                // avoid drift for full circles
                let phi = if (self.sweep().abs() - TAU).abs() == 0.0 {
                    from_angle
                } else {
                    to_angle
                };
                center + Vec2::from_angle(phi).scale(radius)
            }
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Self::Segment { p, q } => p.dist(&q),
            Self::Arc { radius, .. } => radius * self.sweep().abs(),
        }
    }

    /// Unit tangent in the direction of traversal.
    pub fn tangent_at(&self, u: f64) -> Vec2 {
        match *self {
            Self::Segment { p, q } => (q - p).normalized(),
            Self::Arc { from_angle, .. } => {
                let sw = self.sweep();
                let radial = Vec2::from_angle(from_angle + sw * u);
                if sw > 0.0 {
                    radial.perp()
                } else {
                    -radial.perp()
                }
            }
        }
    }

    /// Outward unit normal, assuming the curve belongs to a counter-clockwise loop.
    pub fn normal_at(&self, u: f64) -> Vec2 {
        right_normal(self.tangent_at(u))
    }

    /// Angle of the outward normal at `u = 0` and its signed change along the
    /// curve (zero for segments).
    pub fn normal_angle_range(&self) -> (f64, f64) {
        let start = self.normal_at(0.0).angle();
        (start, self.sweep())
    }

    /// Contribution `½∮(x dy − y dx)` of this piece to the enclosed area.
    pub fn signed_area(&self) -> f64 {
        match *self {
            Self::Segment { p, q } => 0.5 * p.cross(&q),
            Self::Arc {
                center,
                radius,
                from_angle,
                ..
            } => {
                let a = from_angle;
                let b = from_angle + self.sweep();
                0.5 * (radius * center.x * (b.sin() - a.sin())
                    - radius * center.y * (b.cos() - a.cos())
                    + radius * radius * (b - a))
            }
        }
    }

    /// Same set traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        match *self {
            Self::Segment { p, q } => Self::Segment { p: q, q: p },
            Self::Arc {
                center,
                radius,
                from_angle,
                to_angle,
                ccw,
            } => Self::Arc {
                center,
                radius,
                from_angle: to_angle,
                to_angle: from_angle,
                ccw: !ccw,
            },
        }
    }

    /// Image under `x ↦ R_ω x`.
    pub fn rotated(&self, omega: f64) -> Self {
        let r = Mat2::rotation(omega);
        match *self {
            Self::Segment { p, q } => Self::Segment {
                p: r.mul_vec(&p),
                q: r.mul_vec(&q),
            },
            Self::Arc {
                center,
                radius,
                from_angle,
                to_angle,
                ccw,
            } => Self::Arc {
                center: r.mul_vec(&center),
                radius,
                from_angle: from_angle + omega,
                to_angle: to_angle + omega,
                ccw,
            },
        }
    }

    /// `true` when the angle `phi` lies on the arc's angular range, with slack `eps`.
    pub fn arc_contains_angle(&self, phi: f64, eps: f64) -> bool {
        let Self::Arc { from_angle, .. } = *self else {
            return false;
        };
        let sw = self.sweep();
        let u = if sw > 0.0 {
            wrap_two_pi(phi - from_angle)
        } else {
            wrap_two_pi(from_angle - phi)
        };
        u <= sw.abs() + eps || u >= TAU - eps
    }

    /// Parameter `u` of the arc point at angle `phi`, assumed on the arc.
    pub fn arc_parameter(&self, phi: f64) -> f64 {
        let Self::Arc { from_angle, .. } = *self else {
            return 0.0;
        };
        let sw = self.sweep();
        let mut u = if sw > 0.0 {
            wrap_two_pi(phi - from_angle)
        } else {
            wrap_two_pi(from_angle - phi)
        };
        if u > sw.abs() {
            // inside the slack just before the start
            u = if u > 0.5 * (sw.abs() + TAU) {
                0.0
            } else {
                sw.abs()
            };
        }
        u / sw.abs()
    }

    /// Euclidean distance from `x` to the curve.
    pub fn distance(&self, x: Vec2) -> f64 {
        match *self {
            Self::Segment { p, q } => {
                let d = q - p;
                let len2 = d.norm_sq();
                if len2 == 0.0 {
                    return x.dist(&p);
                }
                let u = ((x - p).dot(&d) / len2).clamp(0.0, 1.0);
                x.dist(&(p + d.scale(u)))
            }
            Self::Arc { center, radius, .. } => {
                let r = x - center;
                if r.norm() > 0.0 && self.arc_contains_angle(r.angle(), 0.0) {
                    (r.norm() - radius).abs()
                } else {
                    x.dist(&self.start()).min(x.dist(&self.end()))
                }
            }
        }
    }

    /// Polyline through the curve; arcs use `pieces_per_turn` pieces per full turn.
    pub fn polyline(&self, pieces_per_turn: usize) -> Vec<Vec2> {
        match *self {
            Self::Segment { p, q } => vec![p, q],
            Self::Arc { .. } => {
                let n = ((self.sweep().abs() / TAU) * pieces_per_turn as f64)
                    .ceil()
                    .max(2.0) as usize;
                let mut pts: Vec<Vec2> =
                    (0..n).map(|i| self.point_at(i as f64 / n as f64)).collect();
                pts.push(self.end());
                pts
            }
        }
    }
}
